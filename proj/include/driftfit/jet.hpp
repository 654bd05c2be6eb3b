#pragma once

#include <cstddef>
#include <vector>

namespace driftfit {

// Truncated Taylor expansion around a fixed center: coef[j] = f^{(j)}/j!.
// Products truncate at the carried order; coefficient j of a product depends
// only on coefficients <= j of the factors, and each differentiation consumes
// one order, so a jet of order 2K supports K generator applications exactly.
struct Jet {
  std::vector<double> coef;

  Jet() = default;
  explicit Jet(int order) : coef(static_cast<std::size_t>(order) + 1, 0.0) {}
  explicit Jet(std::vector<double> c) : coef(std::move(c)) {}

  int order() const { return static_cast<int>(coef.size()) - 1; }
  double value() const { return coef.empty() ? 0.0 : coef[0]; }

  // g(y) = y - center, expanded at the center.
  static Jet displacement(int order) {
    Jet g(order);
    if (order >= 1) g.coef[1] = 1.0;
    return g;
  }

  Jet derivative() const {
    if (coef.size() <= 1) return Jet(std::vector<double>{0.0});
    Jet d;
    d.coef.resize(coef.size() - 1);
    for (std::size_t j = 0; j + 1 < coef.size(); ++j)
      d.coef[j] = static_cast<double>(j + 1) * coef[j + 1];
    return d;
  }
};

inline Jet jet_mul(const Jet& a, const Jet& b, int order) {
  Jet out(order);
  const std::size_t n = out.coef.size();
  for (std::size_t i = 0; i < a.coef.size() && i < n; ++i) {
    if (a.coef[i] == 0.0) continue;
    const std::size_t jmax = std::min(n - i, b.coef.size());
    for (std::size_t j = 0; j < jmax; ++j) out.coef[i + j] += a.coef[i] * b.coef[j];
  }
  return out;
}

inline Jet jet_add(const Jet& a, const Jet& b) {
  Jet out = a;
  if (b.coef.size() > out.coef.size()) out.coef.resize(b.coef.size(), 0.0);
  for (std::size_t j = 0; j < b.coef.size(); ++j) out.coef[j] += b.coef[j];
  return out;
}

inline Jet jet_scale(const Jet& a, double s) {
  Jet out = a;
  for (double& c : out.coef) c *= s;
  return out;
}

}  // namespace driftfit
