#include "netred/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace netred::poly {

Coeffs trim(Coeffs c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  if (c.empty()) c.push_back(0.0);
  return c;
}

int degree(std::span<const double> c) {
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    if (c[static_cast<std::size_t>(i)] != 0.0) return i;
  }
  return 0;
}

bool is_zero(std::span<const double> c) {
  return std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; });
}

double max_abs(std::span<const double> c) {
  double m = 0.0;
  for (double x : c) m = std::max(m, std::abs(x));
  return m;
}

Complex eval(std::span<const double> c, Complex s) {
  Complex acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Coeffs add(std::span<const double> a, std::span<const double> b) {
  Coeffs out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return trim(std::move(out));
}

Coeffs multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {0.0};
  Coeffs out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return trim(std::move(out));
}

Coeffs scale(std::span<const double> a, double factor) {
  Coeffs out(a.begin(), a.end());
  for (double& x : out) x *= factor;
  return trim(std::move(out));
}

}  // namespace netred::poly
