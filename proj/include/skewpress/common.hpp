#ifndef SKEWPRESS_COMMON_HPP
#define SKEWPRESS_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace skewpress {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Thrown when a system definition violates one of the documented invariants.
/// The message names the offending field and the rule.
class SpecError : public std::runtime_error {
public:
  explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

/// Kahan--Neumaier compensated accumulator. Summation order is the caller's
/// responsibility; results are deterministic for a fixed order.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

/// SplitMix64: tiny, splittable, identical on every platform. Used both as
/// the per-run seed deriver and as the digit sampler's uniform source.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// uniform in [0,1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// deterministic child seed for worker `index`
  static std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 g(master ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    g.next();
    return g.next();
  }
};

/// Bisect a monotone predicate: returns x with pred true on [x,hi], false on
/// [lo,x) up to `tol`. pred(hi) must be true and pred(lo) false.
inline double bisect_predicate(std::function<bool(double)> pred, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

/// Bisect a continuous function with f(lo), f(hi) of opposite sign; returns
/// the midpoint of the final bracket. Sign convention taken from f(lo).
inline double bisect_root(std::function<double(double)> f, double lo, double hi, double tol) {
  double flo = f(lo);
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if ((flo <= 0 && fm <= 0) || (flo > 0 && fm > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Ternary search for the minimum of a convex function on [lo,hi].
inline double ternary_min(std::function<double(double)> f, double lo, double hi, double tol,
                          int max_iter = 200) {
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

inline bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace skewpress

#endif
