#ifndef SKEWPRESS_TAIL_HPP
#define SKEWPRESS_TAIL_HPP

#include <functional>
#include <string>

#include "skewpress/common.hpp"

namespace skewpress {

/// Analytic model of everything beyond the tabulated branches.
///
/// Weight side: for k >= cutoff the branch weight w_k satisfies
///   geometric: w_k <= C * r^k,   power: w_k <= C * k^(-p).
/// With `two_sided` set (all builtins) the model is also order-exact from
/// below, which is what licenses divergence certificates.
///
/// Step side: psi_k beyond the cutoff follows `psi_rule`:
///   bounded:    psi_k in [psi_lo, psi_hi]
///   linear:     psi_k = k + psi_offset
///   floor_sqrt: psi_k = floor(sqrt(k)) + psi_offset
///
/// `exact_log_weight`, when present, evaluates log w_k exactly for k >= cutoff
/// so sums can be extended term by term until a certified geometric/integral
/// closure takes over; without it the whole tail contributes only a bound.
struct TailModel {
  enum class Weight { none, geometric, power };
  enum class Psi { bounded, linear, floor_sqrt };

  Weight kind = Weight::none;
  double C = 0.0;
  double r = 0.0;  // geometric ratio in (0,1)
  double p = 0.0;  // power exponent > 1
  long long cutoff = 0;
  bool two_sided = false;

  Psi psi_rule = Psi::bounded;
  long long psi_offset = 0;
  long long psi_lo = 0, psi_hi = 0;

  std::function<double(long long)> exact_log_weight;
  /// inf-side generator for nonlinear families; defaults to exact_log_weight
  std::function<double(long long)> exact_log_weight_inf;

  static TailModel none() { return TailModel{}; }

  bool infinite() const { return kind != Weight::none; }

  long long psi_of(long long k) const {
    switch (psi_rule) {
      case Psi::linear: return k + psi_offset;
      case Psi::floor_sqrt: return static_cast<long long>(std::floor(std::sqrt(static_cast<double>(k)))) + psi_offset;
      case Psi::bounded: return psi_hi;
    }
    return psi_hi;
  }

  /// log of the weight *bound* C*r^k resp. C*k^(-p)
  double log_weight_bound(long long k) const {
    if (kind == Weight::geometric) return std::log(C) + static_cast<double>(k) * std::log(r);
    if (kind == Weight::power) return std::log(C) - p * std::log(static_cast<double>(k));
    return -kInf;
  }

  /// Does sum_{k>=cutoff} w_k^s e^{q psi_k} psi_k^a |log w_k|^b converge?
  /// a is the psi moment (0..2), b the log-weight moment (0..2). Polynomial
  /// and log factors never move the geometric thresholds; for power tails the
  /// q=0 threshold shifts by the polynomial growth of the factor.
  bool sum_converges(double s, double q, int a = 0, int b = 0) const;

  /// Certified upper bound on sum_{j>=k} of |term_j| where
  /// term_j = w_j^s e^{q psi_j} psi_j^a (log w_j)^b, using the weight bound.
  /// Returns +inf when the bound diverges. `k` must be >= cutoff.
  double tail_bound_from(long long k, double s, double q, int a = 0, int b = 0) const;

  /// short human-readable witness for divergence decisions
  std::string divergence_witness(double s, double q, int a = 0, int b = 0) const;
};

}  // namespace skewpress

#endif
