#pragma once

// Truncated Laurent series c_lead h^lead + c_{lead+1} h^{lead+1} + ... around a point.

#include <complex>
#include <vector>

namespace sal {

using cx = std::complex<double>;

struct Laurent {
  int lead = 0;
  std::vector<cx> c;  // c[i] multiplies h^(lead+i)

  Laurent() = default;
  Laurent(int lead_, std::vector<cx> c_) : lead(lead_), c(std::move(c_)) {}

  // highest power carried (exclusive bound is top()+1)
  int top() const { return lead + static_cast<int>(c.size()) - 1; }
  cx coeff(int k) const;
  Laurent truncated(int max_power) const;
};

Laurent operator*(const Laurent& a, const Laurent& b);
Laurent operator+(const Laurent& a, const Laurent& b);
Laurent scale(const Laurent& a, cx s);

// Power-series helpers (lead must be 0 for exp/inverse).
Laurent series_exp(const Laurent& a);
Laurent series_inverse(const Laurent& a);  // a must have nonzero leading term

}  // namespace sal
