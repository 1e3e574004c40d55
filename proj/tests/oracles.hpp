// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the code it is meant to check.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

// ---- exact counting ---------------------------------------------------------

struct Outcome {
  int y = 0;      // surgeon decision
  int yhat = 0;   // discretized prediction
  bool privileged = false;
};

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

inline Fraction reduce(std::int64_t num, std::int64_t den) {
  if (den < 0) { num = -num; den = -den; }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g == 0) g = 1;
  return {num / g, den / g};
}

// Per notion: which records count in the denominator and which of those in the
// numerator. Written as a table instead of a switch so it does not mirror the
// library's structure.
//   SP:  all        / yhat=1
//   C:   yhat=1     / y=1
//   AE:  all        / yhat=y
//   EO:  y=1        / yhat=1
//   PE:  y=0        / yhat=1
//   OMR: y=1        / yhat=0
inline bool conditions(int notion, const Outcome& o) {
  const bool table[6] = {true, o.yhat == 1, true, o.y == 1, o.y == 0, o.y == 1};
  return table[notion];
}
inline bool event(int notion, const Outcome& o) {
  const bool table[6] = {o.yhat == 1, o.y == 1, o.yhat == o.y,
                         o.yhat == 1, o.yhat == 1, o.yhat == 0};
  return table[notion];
}

// nullopt when the conditioning set is empty.
inline std::optional<Fraction> count_rate(const std::vector<Outcome>& rs, int notion,
                                          bool privileged) {
  std::int64_t num = 0, den = 0;
  for (const auto& o : rs) {
    if (o.privileged != privileged || !conditions(notion, o)) continue;
    ++den;
    if (event(notion, o)) ++num;
  }
  if (den == 0) return std::nullopt;
  return reduce(num, den);
}

struct Difference {
  double value = 0.0;
  bool undefined = false;
};

// Exact rational difference privileged - underprivileged, rounded once.
inline Difference count_difference(const std::vector<Outcome>& rs, int notion) {
  auto a = count_rate(rs, notion, true);
  auto b = count_rate(rs, notion, false);
  if (!a || !b) return {0.0, true};
  Fraction d = reduce(a->num * b->den - b->num * a->den, a->den * b->den);
  return {static_cast<double>(d.num) / static_cast<double>(d.den), false};
}

// ---- calculus -----------------------------------------------------------------

// Five-point central difference of a scalar function.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals = 20000) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) s += f(a + k * h) * (k % 2 ? 4 : 2);
  return s * h / 3;
}

inline double normal_density(double x, double mu, double sigma) {
  const double t = (x - mu) / sigma;
  return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2 * std::acos(-1.0)));
}

// ---- simplex ------------------------------------------------------------------

// Closest point of the resolution-`step` grid on the 2-simplex to v, and its
// squared distance.
struct GridPoint {
  std::array<double, 3> x{};
  double dist2 = std::numeric_limits<double>::infinity();
};

inline GridPoint nearest_grid_point(const std::array<double, 3>& v, int steps) {
  GridPoint best;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; i + j <= steps; ++j) {
      std::array<double, 3> p = {double(i) / steps, double(j) / steps,
                                 double(steps - i - j) / steps};
      double d = 0;
      for (int k = 0; k < 3; ++k) d += (p[k] - v[k]) * (p[k] - v[k]);
      if (d < best.dist2) best = {p, d};
    }
  return best;
}

// ---- misc -----------------------------------------------------------------------

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

template <std::size_t N>
inline std::array<double, N> random_simplex(std::mt19937_64& g) {
  std::array<double, N> w{};
  std::exponential_distribution<double> e(1.0);
  double s = 0;
  for (auto& x : w) s += (x = e(g));
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace oracle
