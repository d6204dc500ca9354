#ifndef SKEWPRESS_PRESSURE_HPP
#define SKEWPRESS_PRESSURE_HPP

#include <string>
#include <vector>

#include "skewpress/series.hpp"
#include "skewpress/system.hpp"

namespace skewpress {

/// Pressure result. Divergence is a value, not an error: `infinite` set with
/// a witness. Cylinder mode carries the certified [lower, upper] bracket and
/// value = midpoint.
struct PressureValue {
  enum class Mode { series_exact, cylinder_bracket };

  double value = 0.0;
  bool infinite = false;
  double remainder_bound = 0.0;
  Mode mode = Mode::series_exact;
  double lower = 0.0, upper = 0.0;
  int depth = 0;
  std::string witness;

  static PressureValue infinity(std::string w) {
    PressureValue p;
    p.infinite = true;
    p.value = kInf;
    p.witness = std::move(w);
    return p;
  }
};

/// P(s*phi + q*psi) = log sum_k w_k^s e^{q psi_k} for locally constant
/// systems, with certified truncation remainder.
PressureValue series_pressure(const SystemSpec& spec, double s, double q);

/// sup { q : P(s phi + q psi) finite }, located by bisection on the
/// finiteness predicate to 1e-9; +inf when no divergence wall exists.
double convergence_boundary(const SystemSpec& spec, double s);

/// Whether P(s phi + q psi) is finite (tail convergence test; tabulated
/// parts are always finite).
bool pressure_finite(const SystemSpec& spec, double s, double q);

struct GibbsWeights {
  std::vector<long long> k;  // branch indices, ascending
  std::vector<double> p;     // probabilities
  double tail_mass_bound = 0.0;
  double pressure = 0.0;
};

/// Normalized Gibbs weights p_k = w_k^s e^{q psi_k - P}, tabulated through
/// `cutoff` (branch indices < cutoff), plus a certified bound on the
/// remaining mass. Exact (Bernoulli) for locally constant full shifts. For
/// nonlinear systems the locally-constant shadow (geometric-mean weights) is
/// used, which for the Gauss map reproduces the exact cylinder lengths.
GibbsWeights gibbs_weights(const SystemSpec& spec, double s, double q, long long cutoff);

/// Locally constant stand-in for a nonlinear system: per-branch weight
/// sqrt(sup * inf), same steps and tail. Identity on locally constant input.
SystemSpec lc_shadow(const SystemSpec& spec);

}  // namespace skewpress

#endif
