#include "sal/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"
#include "json.hpp"
#include "sal/asymptotics.hpp"
#include "sal/cutoffs.hpp"
#include "sal/finite_triples.hpp"
#include "sal/oracles.hpp"
#include "sal/series_engine.hpp"
#include "sal/summation.hpp"

namespace sal {

namespace {

struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_table(const Table& t, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& r : t.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        out << (i ? "," : "");
        if (auto d = std::get_if<double>(&r[i])) out << fmt(*d);
        else if (auto n = std::get_if<long long>(&r[i])) out << *n;
        else out << std::get<std::string>(r[i]);
      }
      out << "\n";
    }
    return;
  }
  out << "[";
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    out << (k ? ",\n " : "\n ") << "{";
    const auto& r = t.rows[k];
    for (std::size_t i = 0; i < r.size(); ++i) {
      out << (i ? ", " : "") << nlohmann::json(t.columns[i]).dump() << ": ";
      if (auto d = std::get_if<double>(&r[i])) {
        out << (std::isfinite(*d) ? fmt(*d) : nlohmann::json(fmt(*d)).dump());
      } else if (auto n = std::get_if<long long>(&r[i])) {
        out << *n;
      } else {
        out << nlohmann::json(std::get<std::string>(r[i])).dump();
      }
    }
    out << "}";
  }
  out << "\n]\n";
}

struct Grid {
  double a = 0, b = 0;
  int n = 0;
};

Grid parse_grid(const std::string& s, const char* what) {
  Grid g;
  char tail;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d%c", &g.a, &g.b, &g.n, &tail) != 3 || g.n < 1 || !(g.a > 0) || !(g.b >= g.a))
    throw std::invalid_argument(std::string(what) + " must be a:b:n with 0 < a <= b and n >= 1");
  return g;
}

std::vector<double> linear(const Grid& g) {
  std::vector<double> v;
  for (int i = 0; i < g.n; ++i) v.push_back(g.n == 1 ? g.a : g.a + (g.b - g.a) * i / (g.n - 1));
  return v;
}

std::vector<double> geometric(const Grid& g) {
  std::vector<double> v;
  for (int i = 0; i < g.n; ++i) v.push_back(g.n == 1 ? g.a : g.a * std::pow(g.b / g.a, static_cast<double>(i) / (g.n - 1)));
  return v;
}

void require_converged(const TruncationReport& r, const std::string& what) {
  if (!r.converged) throw NonConvergence(what + " did not converge (terms " + std::to_string(r.terms_used) + ", tail bound " + fmt(r.tail_bound) + ")");
}

Table cmd_heat(const std::string& triple, const std::string& grid) {
  auto spec = spectrum_for(parse_triple_id(triple));
  Table t{{"t", "heat", "tail_bound", "terms_used"}, {}};
  for (double x : linear(parse_grid(grid, "--t-grid"))) {
    auto r = heat_trace(*spec, x);
    require_converged(r, "heat trace at t = " + fmt(x));
    t.rows.push_back({x, r.value.real(), r.tail_bound, static_cast<long long>(r.terms_used)});
  }
  return t;
}

Table cmd_zeta(const std::string& triple, const std::string& s_arg) {
  double re = 0, im = 0;
  char tail;
  int got = std::sscanf(s_arg.c_str(), "%lf,%lf%c", &re, &im, &tail);
  if (got != 2 && !(got == 1 && s_arg.find(',') == std::string::npos)) throw std::invalid_argument("--s must be RE,IM");
  cx s(re, im);
  TripleId id = parse_triple_id(triple);
  auto spec = spectrum_for(id);
  Table t{{"s_re", "s_im", "zeta_re", "zeta_im", "tail_bound", "source"}, {}};
  if (re > spec->meta().dimension_p) {
    auto r = zeta_direct(*spec, s);
    require_converged(r, "zeta");
    t.rows.push_back({re, im, r.value.real(), r.value.imag(), r.tail_bound, std::string("direct")});
  } else {
    cx v = catalog_zeta(triple, s);
    t.rows.push_back({re, im, v.real(), v.imag(), 0.0, std::string("closed_form")});
  }
  return t;
}

Table cmd_action(const std::string& triple, const std::string& cutoff, const std::string& grid) {
  auto spec = spectrum_for(parse_triple_id(triple));
  CutoffFunction f = parse_cutoff(cutoff);
  auto pf = f.as_pointwise();
  Table t{{"lambda", "action", "tail_bound", "terms_used"}, {}};
  for (double L : geometric(parse_grid(grid, "--lambda-grid"))) {
    auto r = spectral_action_direct(*spec, pf, L);
    require_converged(r, "spectral action at lambda = " + fmt(L));
    t.rows.push_back({L, r.value.real(), r.tail_bound, static_cast<long long>(r.terms_used)});
  }
  return t;
}

AsymptoticExpansion heat_for(const std::string& triple, int strips) {
  CatalogEntry e = catalog_entry(triple);
  if (!e.has_pole_data) throw std::invalid_argument("no pole data for '" + triple + "'");
  return heat_expansion_from_poles(e.poles, heat_options(e, strips + 1));
}

Table cmd_expand(const std::string& triple, const std::string& cutoff, int strips) {
  if (strips < 1) throw std::invalid_argument("--strips must be >= 1");
  AsymptoticExpansion e = heat_for(triple, strips);
  if (!cutoff.empty()) e = action_expansion(e, parse_cutoff(cutoff));
  Table t{{"z_re", "z_im", "log_power", "coeff_re", "coeff_im", "strip"}, {}};
  for (const auto& term : e.terms) {
    if (term.strip >= strips) continue;
    t.rows.push_back({term.z.real(), term.z.imag(), static_cast<long long>(term.n), term.coeff.real(), term.coeff.imag(),
                      static_cast<long long>(term.strip)});
  }
  return t;
}

Table cmd_compare(const std::string& triple, const std::string& cutoff, const std::string& grid) {
  TripleId id = parse_triple_id(triple);
  auto spec = spectrum_for(id);
  CutoffFunction f = parse_cutoff(cutoff);
  auto pf = f.as_pointwise();
  auto fn = [&f](double x) { return f(x); };
  std::string method;
  std::function<double(double)> reference;
  if (!id.squared && id.base == "s" && id.d == 3) {
    method = "s3_closed_form";
    reference = [&](double L) { return s3_action(fn, L); };
  } else if (!id.squared && id.base == "t") {
    method = "t3_closed_form";
    reference = [&](double L) { return t3_action(fn, L); };
  } else if (!id.squared && id.base == "s" && id.d == 4 && f.name() == "gauss") {
    // f(u) = h(u^2) with h = e^{-v}
    method = "s4_closed_form";
    reference = [&](double L) { return s4_action(fn, {1.0, -1.0, 1.0, -1.0}, L, 3); };
  } else {
    method = "residue_expansion";
    auto heat = heat_for(triple, 12);
    auto act = std::make_shared<AsymptoticExpansion>(action_expansion(heat, f));
    reference = [act](double L) { return optimal_truncation(*act, L).value.real(); };
  }
  Table t{{"lambda", "direct", "reference", "discrepancy", "relative", "tail_bound", "log_slope", "method"}, {}};
  std::vector<double> Ls = geometric(parse_grid(grid, "--lambda-grid")), fitL, diffs;
  std::vector<std::vector<Cell>> rows;
  for (double L : Ls) {
    auto r = spectral_action_direct(*spec, pf, L);
    require_converged(r, "spectral action at lambda = " + fmt(L));
    double ref = reference(L);
    double d = r.value.real() - ref;
    // rounding-level discrepancies carry no slope information
    if (std::abs(d) > 64 * std::numeric_limits<double>::epsilon() * std::abs(r.value.real())) {
      fitL.push_back(L);
      diffs.push_back(d);
    }
    rows.push_back({L, r.value.real(), ref, d, std::abs(d) / std::max(std::abs(ref), 1e-300), r.tail_bound});
  }
  // decay order of |discrepancy| in lambda
  double slope = fitL.size() >= 2 ? -log_slope(fitL, diffs) : std::nan("");
  for (auto& r : rows) {
    r.push_back(slope);
    r.push_back(method);
    t.rows.push_back(std::move(r));
  }
  return t;
}

Mat unitary_from(const FiniteTriple& t) {
  Mat H = Mat::Zero(t.dim, t.dim);
  for (std::size_t k = 0; k < t.gens.size(); ++k) H += (0.7 + 0.3 * static_cast<double>(k)) * 0.5 * (t.gens[k] + t.gens[k].adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  Eigen::VectorXcd ph = es.eigenvalues().unaryExpr([](double x) { return std::polar(1.0, x); });
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Table cmd_finite(const std::string& file, const std::string& check) {
  if (check != "all" && check != "gauge" && check != "index") throw std::invalid_argument("--check must be all, gauge or index");
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open " + file);
  FiniteTriple t = load_triple_json(in);
  Table out{{"check", "name", "passed", "value"}, {}};
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  if (check == "all") {
    for (const auto& c : validate(t).checks) out.rows.push_back({std::string("axiom"), c.name, flag(c.passed), c.violation});
  }
  if (check == "all" || check == "gauge") {
    if (t.gens.empty()) throw std::invalid_argument("gauge check needs algebra generators");
    Mat A = hermitian_one_form(t, t.gens.front(), t.gens.back()).A;
    GaugeResult g = gauge_transform(t, A, unitary_from(t));
    out.rows.push_back({std::string("gauge"), std::string("first_order"), flag(g.first_order_holds), 0.0});
    out.rows.push_back({std::string("gauge"), std::string("covariance_residual"), flag(!g.first_order_holds || g.residual < 1e-10), g.residual});
  }
  if ((check == "all" && t.gamma) || check == "index") {
    auto top = topological_action(t, [](double x) { return std::exp(-x * x); }, 1.0);
    out.rows.push_back({std::string("index"), std::string("index"), std::string("true"), static_cast<double>(top.index)});
    out.rows.push_back({std::string("index"), std::string("S_top_direct"), flag(std::abs(top.direct - top.from_index) < 1e-10), top.direct});
    for (double tt : {0.01, 0.1, 1.0, 10.0}) {
      double ms = mckean_singer(t, tt);
      out.rows.push_back({std::string("index"), "mckean_singer_t=" + fmt(tt), flag(std::abs(ms - top.index) < 1e-9), ms});
    }
  }
  return out;
}

Table cmd_radius(const std::string& triple) {
  AsymptoticExpansion e = heat_for(triple, 42);
  std::vector<double> c, eps, r;
  for (const auto& term : e.terms) {
    if (term.n != 0 || term.z.imag() != 0.0 || term.z.real() > -1.0) continue;
    double k = -term.z.real();
    if (k > 41.5 || std::abs(term.coeff) == 0.0) continue;
    c.push_back(std::abs(term.coeff));
    eps.push_back(1.0);
    r.push_back(k);
  }
  if (c.size() < 5) throw std::invalid_argument("radius: fewer than 5 Taylor coefficients available for '" + triple + "'");
  RadiusReport rep = convergence_radius(c, eps, r);
  Table t{{"T", "T_raw", "model", "drift", "window_begin", "window_end"}, {}};
  t.rows.push_back({rep.T, rep.T_raw, rep.model, rep.drift, static_cast<long long>(rep.window_begin), static_cast<long long>(rep.window_end)});
  return t;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral functions, expansions and finite triples"};
  app.require_subcommand(1);
  std::string format = "csv";
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  std::string triple, grid, s_arg, cutoff, file, check = "all";
  int strips = 2;

  auto* heat = app.add_subcommand("heat", "heat trace Tr e^{-t|D|} on a linear t grid");
  heat->add_option("--triple", triple)->required();
  heat->add_option("--t-grid", grid)->required();

  auto* zeta = app.add_subcommand("zeta", "spectral zeta at one point");
  zeta->add_option("--triple", triple)->required();
  zeta->add_option("--s", s_arg)->required();

  auto* action = app.add_subcommand("action", "spectral action Tr f(|D|/Lambda) on a geometric grid");
  action->add_option("--triple", triple)->required();
  action->add_option("--cutoff", cutoff)->required();
  action->add_option("--lambda-grid", grid)->required();

  auto* expand = app.add_subcommand("expand", "heat or action expansion from residues");
  expand->add_option("--triple", triple)->required();
  expand->add_option("--cutoff", cutoff);
  expand->add_option("--strips", strips);

  auto* compare = app.add_subcommand("compare", "direct action against a closed form or expansion");
  compare->add_option("--triple", triple)->required();
  compare->add_option("--cutoff", cutoff)->required();
  compare->add_option("--lambda-grid", grid)->required();

  auto* finite = app.add_subcommand("finite", "checks on a finite triple file");
  finite->add_option("--file", file)->required();
  finite->add_option("--check", check);

  auto* radius = app.add_subcommand("radius", "convergence radius of the small-t expansion");
  radius->add_option("--triple", triple)->required();

  for (auto* sub : app.get_subcommands({})) sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Table t;
    if (*heat) t = cmd_heat(triple, grid);
    else if (*zeta) t = cmd_zeta(triple, s_arg);
    else if (*action) t = cmd_action(triple, cutoff, grid);
    else if (*expand) t = cmd_expand(triple, cutoff, strips);
    else if (*compare) t = cmd_compare(triple, cutoff, grid);
    else if (*finite) t = cmd_finite(file, check);
    else t = cmd_radius(triple);
    write_table(t, format, out);
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace sal
