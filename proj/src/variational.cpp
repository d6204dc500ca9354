#include "skewpress/variational.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "skewpress/analysis.hpp"

namespace skewpress {

namespace {

constexpr double kEscapeQ = -40.0;  // e^{-40} underflows every weight that matters

// drift sign with +inf counting as positive; requires finite pressure at q
int drift_sign(const SystemSpec& spec, double s, double q) {
  DriftResult d = drift(spec, s, q);
  if (d.status == DriftResult::Status::plus_infinity) return +1;
  if (d.status == DriftResult::Status::indeterminate)
    throw std::runtime_error("drift sign requested where pressure diverges");
  if (d.value > 0) return +1;
  if (d.value < 0) return -1;
  return 0;
}

// P over the restricted subsystem I0 = { k : psi_k = 0 }
PressureValue restricted_I0_pressure(const SystemSpec& spec, double s) {
  Kahan acc;
  bool any = false;
  for (const auto& br : spec.branches)
    if (br.psi == 0) {
      acc.add(std::exp(s * br.log_weight_sup));
      any = true;
    }
  if (spec.tail.infinite() && spec.tail.exact_log_weight) {
    // tail psi rules are nondecreasing, so the psi=0 stretch is finite
    for (long long k = spec.tail.cutoff;
         spec.tail.psi_of(k) <= 0 && k - spec.tail.cutoff <= 10'000'000; ++k) {
      if (spec.tail.psi_of(k) == 0) {
        acc.add(std::exp(s * spec.tail.exact_log_weight(k)));
        any = true;
      }
    }
  }
  PressureValue out;
  if (!any) {
    out.value = -kInf;
    out.witness = "restricted subsystem I0 is empty";
    return out;
  }
  out.value = std::log(acc.value());
  out.witness = "pressure of the psi=0 subsystem";
  return out;
}

long long tabulated_psi_sup(const SystemSpec& spec) {
  long long mx = spec.branches.front().psi;
  for (const auto& b : spec.branches) mx = std::max(mx, b.psi);
  return mx;
}

// Minimize the convex q -> P(s,q) over q in (-inf, hi]; `hi_closed` says the
// pressure is finite at hi itself (open walls blow up there instead).
SkewPressureResult minimize_over_ray(const SystemSpec& spec, double s, double hi, bool hi_closed) {
  SkewPressureResult out;

  double q_pos = kNaN;
  bool edge_is_min = false;
  bool found_pos = false;
  if (hi_closed && std::isfinite(hi)) {
    int sg = drift_sign(spec, s, hi);
    if (sg <= 0)
      edge_is_min = true;
    else {
      q_pos = hi;
      found_pos = true;
    }
  } else {
    // approach an open wall geometrically (drift blows up there), or march
    // right when there is no wall at all
    double step = std::isfinite(hi) ? 0.5 : 1.0;
    double q = std::isfinite(hi) ? hi - step : 1.0;
    for (int i = 0; i < 60; ++i) {
      if (pressure_finite(spec, s, q) && drift_sign(spec, s, q) > 0) {
        q_pos = q;
        found_pos = true;
        break;
      }
      if (std::isfinite(hi)) {
        step *= 0.5;
        q = hi - step;
      } else {
        q *= 2.0;
      }
    }
    if (!found_pos && std::isfinite(hi)) {
      // numerically the drift stayed negative all the way to the open wall;
      // report the last finite probe as a wall-proximal value
      double q_edge = hi - 1e-12 * std::max(1.0, std::abs(hi));
      out.minimizer_q = q_edge;
      out.minimizer_kind = SkewPressureResult::MinimizerKind::wall;
      out.diagnostics = series_pressure(spec, s, q_edge);
      out.value = out.diagnostics.value;
      return out;
    }
    if (!found_pos) {
      // drift < 0 for arbitrarily large q: cannot happen when sup psi > 0
      out.minimizer_kind = SkewPressureResult::MinimizerKind::none;
      out.infinite = true;
      out.value = kInf;
      return out;
    }
  }

  if (edge_is_min) {
    out.minimizer_q = hi;
    out.minimizer_kind = SkewPressureResult::MinimizerKind::wall;
    out.diagnostics = series_pressure(spec, s, hi);
    out.value = out.diagnostics.value;
    return out;
  }

  // expand left until the drift goes negative
  double q_neg = std::min(q_pos - 1.0, -1.0);
  bool have_neg = false;
  while (q_neg >= kEscapeQ) {
    if (drift_sign(spec, s, q_neg) < 0) {
      have_neg = true;
      break;
    }
    q_neg = q_neg * 2.0 - 1.0;
  }
  if (!have_neg && drift_sign(spec, s, kEscapeQ) < 0) {
    q_neg = kEscapeQ;
    have_neg = true;
  }
  if (!have_neg) {
    out.minimizer_kind = SkewPressureResult::MinimizerKind::escapes_to_minus_infinity;
    return out;  // caller applies the restricted-subsystem fallback
  }

  // drift is increasing in q (convexity): bisect its sign change; the value
  // is quadratically flat there, so the pressure at the root is exact to
  // machine precision
  double root = bisect_predicate([&](double q) { return drift_sign(spec, s, q) >= 0; }, q_neg,
                                 q_pos, 1e-13 * std::max(1.0, std::abs(q_pos)));
  out.minimizer_q = root;
  out.minimizer_kind = SkewPressureResult::MinimizerKind::interior;
  out.diagnostics = series_pressure(spec, s, root);
  out.value = out.diagnostics.value;
  return out;
}

// structural short-circuits shared by Z and N: 0 outside or on the edge of
// the psi range
bool structural_case(const SystemSpec& spec, double s, SkewPressureResult& out) {
  long long pinf = spec.psi_inf();
  bool sup_pos = spec.psi_sup_positive();
  long long tab_sup = tabulated_psi_sup(spec);
  if (pinf > 0 || (!sup_pos && tab_sup < 0)) {
    out.minus_infinite = true;
    out.value = -kInf;
    out.case_selected = SkewPressureResult::Case::minus_infinity;
    return true;
  }
  if (pinf == 0 || (!sup_pos && tab_sup == 0)) {
    out.diagnostics = restricted_I0_pressure(spec, s);
    out.value = out.diagnostics.value;
    out.minus_infinite = out.value == -kInf;
    out.case_selected = SkewPressureResult::Case::restricted_subsystem;
    out.minimizer_kind = SkewPressureResult::MinimizerKind::escapes_to_minus_infinity;
    return true;
  }
  return false;
}

void apply_escape_fallback(const SystemSpec& spec, double s, SkewPressureResult& out) {
  if (out.minimizer_kind != SkewPressureResult::MinimizerKind::escapes_to_minus_infinity) return;
  PressureValue pv = restricted_I0_pressure(spec, s);
  out.diagnostics = pv;
  out.value = pv.value;
  out.minus_infinite = pv.value == -kInf;
  out.case_selected = SkewPressureResult::Case::restricted_subsystem;
}

}  // namespace

SkewPressureResult skew_pressure_Z(const SystemSpec& spec, double s) {
  if (!spec.locally_constant())
    throw std::invalid_argument(
        "skew_pressure_Z: needs a locally constant system (use the cylinder variant)");

  SkewPressureResult out;
  if (structural_case(spec, s, out)) return out;

  double wall = convergence_boundary(spec, s);
  if (wall == -kInf) {
    out.infinite = true;
    out.value = kInf;
    out.case_selected = SkewPressureResult::Case::everywhere_infinite;
    return out;
  }
  bool closed = std::isfinite(wall) && pressure_finite(spec, s, wall);
  out = minimize_over_ray(spec, s, wall, closed);
  out.case_selected = SkewPressureResult::Case::z_branch;
  apply_escape_fallback(spec, s, out);
  return out;
}

SkewPressureResult skew_pressure_N(const SystemSpec& spec, double s) {
  if (!spec.locally_constant())
    throw std::invalid_argument(
        "skew_pressure_N: needs a locally constant system (use the cylinder variant)");

  SkewPressureResult out;
  if (structural_case(spec, s, out)) return out;

  double hi;
  bool closed;
  if (pressure_finite(spec, s, 0.0)) {
    hi = 0.0;
    closed = true;
  } else {
    double wall = convergence_boundary(spec, s);
    if (wall == -kInf) {
      out.infinite = true;
      out.value = kInf;
      out.case_selected = SkewPressureResult::Case::everywhere_infinite;
      return out;
    }
    hi = std::min(wall, 0.0);
    closed = pressure_finite(spec, s, hi);
  }

  out = minimize_over_ray(spec, s, hi, closed);
  apply_escape_fallback(spec, s, out);
  if (out.case_selected == SkewPressureResult::Case::restricted_subsystem) return out;
  if (out.minimizer_kind == SkewPressureResult::MinimizerKind::wall && out.minimizer_q == 0.0) {
    // drift(0) <= 0: the unconstrained minimizer sits at q >= 0, so the
    // constrained infimum is the boundary value P(g) (Eq.-(4) base case)
    out.minimizer_kind = SkewPressureResult::MinimizerKind::boundary_at_zero;
    out.case_selected = SkewPressureResult::Case::base_branch;
  } else {
    out.case_selected = SkewPressureResult::Case::z_branch;
  }
  return out;
}

std::optional<double> q_of_s(const SystemSpec& spec, double s) {
  double wall = convergence_boundary(spec, s);
  if (wall == -kInf) return std::nullopt;
  bool closed = std::isfinite(wall) && pressure_finite(spec, s, wall);
  SkewPressureResult r = minimize_over_ray(spec, s, wall, closed);
  if (r.minimizer_kind == SkewPressureResult::MinimizerKind::interior) return r.minimizer_q;
  return std::nullopt;
}

CriticalExponent critical_exponent(const SystemSpec& spec, Extension ext, double tol) {
  if (!spec.locally_constant()) return critical_exponent_cylinder(spec, ext, CylinderParams{}, 1e-3);

  auto nonpositive = [&](double s) {
    switch (ext) {
      case Extension::base0: {
        if (!pressure_finite(spec, s, 0.0)) return false;  // +inf counts as > 0
        return series_pressure(spec, s, 0.0).value <= 0.0;
      }
      case Extension::Z: {
        SkewPressureResult r = skew_pressure_Z(spec, s);
        return !r.infinite && r.value <= 0.0;
      }
      case Extension::N: {
        SkewPressureResult r = skew_pressure_N(spec, s);
        return !r.infinite && r.value <= 0.0;
      }
    }
    return false;
  };

  CriticalExponent ce;
  ce.tol = tol;
  double hi = 1.0;
  int grow = 0;
  while (!nonpositive(hi)) {
    if (hi >= 64.0 || ++grow > 7) return ce;  // unresolved within s <= 64
    hi *= 2.0;
  }
  double root = bisect_predicate(nonpositive, 0.0, hi, tol);
  ce.value = root;
  ce.lo = root - tol;
  ce.hi = root + tol;
  ce.resolved = true;
  return ce;
}

// --- nonlinear (cylinder bracket) variants ----------------------------------

namespace {

const std::vector<double> kQProbes = {0.0, -0.15, -0.3, -0.5, -0.75, -1.0, -1.5, -2.5, -4.0};

}  // namespace

SkewBracket skew_pressure_Z_cylinder(const SystemSpec& spec, double s, const CylinderParams& cp) {
  // any probe q gives a certified upper bound on inf_q P; the lower side is
  // the minimum of the certified lower brackets over the same probes
  SkewBracket out;
  out.upper = kInf;
  out.lower = kInf;
  for (double q : kQProbes) {
    PressureValue pv = cylinder_pressure(spec, s, q, cp);
    if (pv.upper < out.upper) {
      out.upper = pv.upper;
      out.minimizer_q = q;
    }
    out.lower = std::min(out.lower, pv.lower);
  }
  // short convex refinement around the best probe
  double a = out.minimizer_q - 0.3, b = std::min(out.minimizer_q + 0.3, 0.0);
  double qmin = ternary_min([&](double q) { return cylinder_pressure(spec, s, q, cp).upper; }, a,
                            b, 5e-3, 40);
  PressureValue pv = cylinder_pressure(spec, s, qmin, cp);
  if (pv.upper < out.upper) {
    out.upper = pv.upper;
    out.minimizer_q = qmin;
  }
  out.lower = std::min(out.lower, pv.lower);
  return out;
}

SkewBracket skew_pressure_N_cylinder(const SystemSpec& spec, double s, const CylinderParams& cp) {
  // all probes already sit at q <= 0 (Gauss-type pressure diverges for q>0)
  return skew_pressure_Z_cylinder(spec, s, cp);
}

CriticalExponent critical_exponent_cylinder(const SystemSpec& spec, Extension ext,
                                            const CylinderParams& cp, double tol) {
  auto upper_value = [&](double s) -> double {
    if (ext == Extension::base0) return cylinder_pressure(spec, s, 0.0, cp).upper;
    return skew_pressure_Z_cylinder(spec, s, cp).upper;
  };
  auto lower_value = [&](double s) -> double {
    if (ext == Extension::base0) return cylinder_pressure(spec, s, 0.0, cp).lower;
    return skew_pressure_Z_cylinder(spec, s, cp).lower;
  };

  CriticalExponent ce;
  ce.tol = tol;
  double hi = 1.0;
  int grow = 0;
  while (upper_value(hi) > 0.0) {
    if (++grow > 4) return ce;
    hi *= 2.0;
  }
  // certified upper end: predicate holds at (result + tol)
  ce.hi = bisect_predicate([&](double s) { return upper_value(s) <= 0.0; }, 0.05, hi, tol) + tol;
  double hi2 = 1.0;
  grow = 0;
  while (lower_value(hi2) > 0.0) {
    if (++grow > 4) return ce;
    hi2 *= 2.0;
  }
  ce.lo = bisect_predicate([&](double s) { return lower_value(s) <= 0.0; }, 0.05, hi2, tol) - tol;
  if (ce.lo > ce.hi) std::swap(ce.lo, ce.hi);
  ce.value = 0.5 * (ce.lo + ce.hi);
  ce.resolved = true;
  return ce;
}

}  // namespace skewpress
