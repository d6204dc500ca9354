#ifndef SKEWPRESS_ANALYSIS_HPP
#define SKEWPRESS_ANALYSIS_HPP

#include <string>
#include <vector>

#include "skewpress/pressure.hpp"
#include "skewpress/system.hpp"

namespace skewpress {

/// Mean step sum_k psi_k p_k under the (s,q)-Gibbs weights, with certified
/// tail handling: +infinity when the positive tail part certifiably
/// diverges, `indeterminate` when the pressure itself diverges.
struct DriftResult {
  enum class Status { finite, plus_infinity, indeterminate };
  Status status = Status::finite;
  double value = 0.0;
  double remainder = 0.0;
  std::string witness;

  bool finite() const { return status == Status::finite; }
  bool positive() const { return status == Status::plus_infinity || value > 0; }
};
DriftResult drift(const SystemSpec& spec, double s, double q);

/// Observables for asymptotic covariances: the geometric potential, the step
/// function, or explicit per-branch values on the tabulated range.
struct Observable {
  enum class Kind { phi, psi, custom } kind = Kind::phi;
  std::vector<double> values;   // custom: aligned with spec.branches
  static Observable phi() { return {Kind::phi, {}}; }
  static Observable psi() { return {Kind::psi, {}}; }
  static Observable custom(std::vector<double> v) { return {Kind::custom, std::move(v)}; }
};

/// Asymptotic covariance under the (s,q)-Gibbs measure. On a full shift with
/// locally constant potentials the digit measure is i.i.d., so all lag >= 1
/// terms vanish and this is the one-step covariance.
double asymptotic_covariance(const SystemSpec& spec, double s, double q, const Observable& f,
                             const Observable& g);

struct DimensionGap {
  bool gap = false;
  bool boundary_case = false;  // |alpha_max| below tolerance: reported, not guessed
  double alpha_max = 0.0;      // +inf possible
  bool finite_q_witness = false;
  double witness_q = 0.0;
  std::string evidence;
};
DimensionGap dimension_gap_Z(const SystemSpec& spec);

enum class TrichotomyLabel { lean, balanced, black_hole };
std::string to_string(TrichotomyLabel label);

struct TrichotomyReport {
  TrichotomyLabel label = TrichotomyLabel::balanced;
  bool numerically_balanced = false;  // |alpha_max| < 1e-9; neighbors attached below
  std::string balanced_neighbors;
  double alpha_max = 0.0;  // +inf possible
  double delta0 = 0.0, deltaZ = 0.0, deltaN = 0.0;
  double dimT_plus_Z = 0.0, dimT_plus_N = 0.0, dimT_minus_Z = 0.0, dimT_minus_N = 0.0;
  bool gap_Z = false, gap_N = false;
  bool finite_q_witness = false;
  double witness_q = 0.0;
  std::string evidence;
};
TrichotomyReport classify_trichotomy(const SystemSpec& spec);

struct PhaseReport {
  double s0 = kNaN;
  bool found_s0 = false;
  bool drift_identically_zero = false;
  bool wall_pinned = false;  // q_div = 0: the covariance criterion is applied one-sided
  bool has_transition = false;
  double cov_phi_psi = 0.0, cov_phi_phi = 0.0, cov_psi_psi = 0.0;
  double second_derivative_jump = 0.0;  // cov(phi,psi)^2 / cov(psi,psi)
  double cov_tolerance = 1e-9;
  std::string note;
};
PhaseReport phase_transition(const SystemSpec& spec);

}  // namespace skewpress

#endif
