#ifndef SKEWPRESS_SERIES_HPP
#define SKEWPRESS_SERIES_HPP

#include <string>

#include "skewpress/system.hpp"

namespace skewpress {

/// Which per-branch factor multiplies w_k^s e^{q psi_k} in the sum.
enum class Moment { one, psi, psi2, logw, logw2, logw_psi };

/// A certified series value in scaled form: value = mantissa * exp(log_scale).
/// `remainder` bounds |true - value| on the mantissa scale; infinite sums are
/// flagged with the divergence direction of the dominant tail sign.
struct SeriesSum {
  double mantissa = 0.0;
  double log_scale = 0.0;
  double abs_mantissa = 0.0;  // sum of |terms|, same scale
  double remainder = 0.0;
  bool infinite = false;
  int sign = +1;  // direction of divergence when infinite
  std::string witness;

  double value() const { return mantissa * std::exp(log_scale); }
};

/// Sum over all branches (tabulated + analytic tail) of
///   w_k^s e^{q psi_k} * factor_m(k)
/// in ascending k with compensated accumulation; deterministic. `sup` picks
/// the sup/inf weight side (identical for locally constant systems).
SeriesSum series_sum(const SystemSpec& spec, double s, double q, Moment m, bool sup = true);

}  // namespace skewpress

#endif
