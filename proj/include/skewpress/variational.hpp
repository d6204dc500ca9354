#ifndef SKEWPRESS_VARIATIONAL_HPP
#define SKEWPRESS_VARIATIONAL_HPP

#include <optional>

#include "skewpress/cylinder.hpp"
#include "skewpress/pressure.hpp"
#include "skewpress/system.hpp"

namespace skewpress {

/// Which extension a pressure/exponent refers to.
enum class Extension { base0, Z, N };

/// Result of the variational formulae P(g,Z) = inf_q P(g+q psi) and
/// P(g,N) = inf_{q<=0} P(g+q psi).
struct SkewPressureResult {
  enum class MinimizerKind { interior, boundary_at_zero, wall, escapes_to_minus_infinity, none };
  enum class Case {
    z_branch,              // inf over the constrained range equals inf over R
    base_branch,           // global minimizer sits at q >= 0, so P(g,N) = P(g)
    restricted_subsystem,  // infimum escapes; value is P over the psi=0 branches
    minus_infinity,        // 0 outside [inf psi, sup psi]
    everywhere_infinite
  };

  double value = 0.0;
  bool infinite = false;        // value == +inf
  bool minus_infinite = false;  // value == -inf
  double minimizer_q = kNaN;
  MinimizerKind minimizer_kind = MinimizerKind::none;
  Case case_selected = Case::z_branch;
  PressureValue diagnostics;  // pressure at the reported minimizer
};

SkewPressureResult skew_pressure_Z(const SystemSpec& spec, double s);
SkewPressureResult skew_pressure_N(const SystemSpec& spec, double s);

/// Nonlinear variants: certified [lower, upper] brackets from cylinder sums.
struct SkewBracket {
  double lower = 0.0, upper = 0.0;
  double minimizer_q = 0.0;  // q attaining the upper bound
};
SkewBracket skew_pressure_Z_cylinder(const SystemSpec& spec, double s, const CylinderParams& cp);
SkewBracket skew_pressure_N_cylinder(const SystemSpec& spec, double s, const CylinderParams& cp);

/// delta_H = inf { s >= 0 : P(s phi, H) <= 0 }, bisected to `tol` (+inf
/// pressures count as > 0). For nonlinear systems [lo, hi] come from the
/// certified cylinder brackets and `value` is their midpoint.
struct CriticalExponent {
  double value = kNaN;
  double lo = kNaN, hi = kNaN;
  double tol = 0.0;
  bool resolved = false;
};
CriticalExponent critical_exponent(const SystemSpec& spec, Extension ext, double tol = 1e-10);
CriticalExponent critical_exponent_cylinder(const SystemSpec& spec, Extension ext,
                                            const CylinderParams& cp, double tol = 1e-4);

/// Root of q -> d/dq P(s phi + q psi) over the full admissible q-range;
/// nullopt when the drift stays negative (the N-infimum then sits at q=0 or
/// the Z-infimum escapes).
std::optional<double> q_of_s(const SystemSpec& spec, double s);

}  // namespace skewpress

#endif
