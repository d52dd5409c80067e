#include "sal/laurent.hpp"

#include <algorithm>
#include <stdexcept>

namespace sal {

cx Laurent::coeff(int k) const {
  const int i = k - lead;
  if (i < 0 || i >= static_cast<int>(c.size())) return {0.0, 0.0};
  return c[static_cast<std::size_t>(i)];
}

Laurent Laurent::truncated(int max_power) const {
  Laurent r = *this;
  const int keep = max_power - lead + 1;
  if (keep < static_cast<int>(r.c.size())) r.c.resize(static_cast<std::size_t>(std::max(keep, 0)));
  return r;
}

// product is only reliable up to min(a.top()+b.lead, b.top()+a.lead)
Laurent operator*(const Laurent& a, const Laurent& b) {
  if (a.c.empty() || b.c.empty()) return {a.lead + b.lead, {}};
  const int lead = a.lead + b.lead;
  const int top = std::min(a.top() + b.lead, b.top() + a.lead);
  const int n = top - lead + 1;
  std::vector<cx> out(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    cx acc = 0.0;
    for (int j = 0; j <= i; ++j) {
      if (j < static_cast<int>(a.c.size()) && i - j < static_cast<int>(b.c.size()))
        acc += a.c[static_cast<std::size_t>(j)] * b.c[static_cast<std::size_t>(i - j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return {lead, out};
}

Laurent operator+(const Laurent& a, const Laurent& b) {
  const int lead = std::min(a.lead, b.lead);
  const int top = std::min(a.top(), b.top());
  std::vector<cx> out;
  for (int k = lead; k <= top; ++k) out.push_back(a.coeff(k) + b.coeff(k));
  return {lead, out};
}

Laurent scale(const Laurent& a, cx s) {
  Laurent r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

Laurent series_exp(const Laurent& a) {
  if (a.lead < 0) throw std::invalid_argument("series_exp: negative powers");
  const int n = a.top() + 1;
  std::vector<cx> p(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) p[static_cast<std::size_t>(k)] = a.coeff(k);
  // f' = p' f recursion
  std::vector<cx> f(static_cast<std::size_t>(n), 0.0);
  f[0] = std::exp(p[0]);
  for (int k = 1; k < n; ++k) {
    cx acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * p[static_cast<std::size_t>(j)] * f[static_cast<std::size_t>(k - j)];
    f[static_cast<std::size_t>(k)] = acc / static_cast<double>(k);
  }
  return {0, f};
}

Laurent series_inverse(const Laurent& a) {
  if (a.c.empty() || a.c[0] == cx(0.0)) throw std::invalid_argument("series_inverse: zero leading term");
  const std::size_t n = a.c.size();
  std::vector<cx> r(n, 0.0);
  r[0] = 1.0 / a.c[0];
  for (std::size_t k = 1; k < n; ++k) {
    cx acc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) acc += a.c[j] * r[k - j];
    r[k] = -acc * r[0];
  }
  return {-a.lead, r};
}

}  // namespace sal
