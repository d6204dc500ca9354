#include "skewpress/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "skewpress/series.hpp"
#include "skewpress/variational.hpp"

namespace skewpress {

namespace {

constexpr double kAlphaTol = 1e-9;  // balanced-band tolerance on alpha_max

// moment sums on the locally constant system (or its shadow)
SeriesSum msum(const SystemSpec& spec, double s, double q, Moment m) {
  return series_sum(spec, s, q, m);
}

double ratio(const SeriesSum& num, const SeriesSum& den) {
  return (num.mantissa / den.mantissa) * std::exp(num.log_scale - den.log_scale);
}

double ratio_remainder(const SeriesSum& num, const SeriesSum& den) {
  double v = std::abs(ratio(num, den));
  double scale = std::exp(num.log_scale - den.log_scale);
  return (num.remainder * scale + v * den.remainder) / std::max(den.mantissa - den.remainder, 1e-300) * 2.0;
}

}  // namespace

DriftResult drift(const SystemSpec& spec_in, double s, double q) {
  const SystemSpec spec = spec_in.locally_constant() ? spec_in : lc_shadow(spec_in);
  DriftResult out;
  if (!pressure_finite(spec, s, q)) {
    out.status = DriftResult::Status::indeterminate;
    out.witness = "pressure diverges at (s,q); drift indeterminate";
    return out;
  }
  SeriesSum m0 = msum(spec, s, q, Moment::one);
  SeriesSum m1 = msum(spec, s, q, Moment::psi);
  if (m1.infinite) {
    // psi >= -1 keeps the negative part summable whenever the pressure is
    // finite, so a divergent psi-moment can only blow up on the + side
    out.status = DriftResult::Status::plus_infinity;
    out.value = kInf;
    out.witness = m1.witness;
    return out;
  }
  out.status = DriftResult::Status::finite;
  out.value = ratio(m1, m0);
  out.remainder = ratio_remainder(m1, m0);
  return out;
}

double asymptotic_covariance(const SystemSpec& spec_in, double s, double q, const Observable& f,
                             const Observable& g) {
  const SystemSpec spec = spec_in.locally_constant() ? spec_in : lc_shadow(spec_in);
  if (!pressure_finite(spec, s, q))
    throw std::invalid_argument("asymptotic_covariance: pressure diverges at (s,q)");

  auto moment_for = [](const Observable& a, const Observable& b) -> Moment {
    auto key = [](const Observable& o) { return o.kind; };
    if (key(a) == Observable::Kind::phi && key(b) == Observable::Kind::phi) return Moment::logw2;
    if (key(a) == Observable::Kind::psi && key(b) == Observable::Kind::psi) return Moment::psi2;
    return Moment::logw_psi;
  };
  auto single = [](const Observable& o) {
    return o.kind == Observable::Kind::phi ? Moment::logw : Moment::psi;
  };

  SeriesSum m0 = msum(spec, s, q, Moment::one);
  if (m0.infinite) throw std::invalid_argument("asymptotic_covariance: divergent normalizer");

  if (f.kind != Observable::Kind::custom && g.kind != Observable::Kind::custom) {
    SeriesSum mfg = msum(spec, s, q, moment_for(f, g));
    SeriesSum mf = msum(spec, s, q, single(f));
    SeriesSum mg = msum(spec, s, q, single(g));
    if (mfg.infinite || mf.infinite || mg.infinite)
      throw std::invalid_argument("asymptotic_covariance: observable not square-summable");
    return ratio(mfg, m0) - ratio(mf, m0) * ratio(mg, m0);
  }

  // custom observables: explicit values on the tabulated range, zero beyond
  auto value_of = [&](const Observable& o, std::size_t i, const BranchData& b) -> double {
    switch (o.kind) {
      case Observable::Kind::phi: return b.log_weight_sup;
      case Observable::Kind::psi: return static_cast<double>(b.psi);
      case Observable::Kind::custom:
        if (i >= o.values.size())
          throw std::invalid_argument("asymptotic_covariance: custom observable shorter than branch table");
        return o.values[i];
    }
    return 0.0;
  };
  double P = std::log(m0.mantissa) + m0.log_scale;
  Kahan efg, ef, eg;
  for (std::size_t i = 0; i < spec.branches.size(); ++i) {
    const auto& b = spec.branches[i];
    double pk = std::exp(s * b.log_weight_sup + q * static_cast<double>(b.psi) - P);
    double fv = value_of(f, i, b), gv = value_of(g, i, b);
    efg.add(fv * gv * pk);
    ef.add(fv * pk);
    eg.add(gv * pk);
  }
  return efg.value() - ef.value() * eg.value();
}

DimensionGap dimension_gap_Z(const SystemSpec& spec) {
  DimensionGap out;
  CriticalExponent d0 = critical_exponent(spec, Extension::base0);
  if (!d0.resolved) throw std::runtime_error("dimension_gap_Z: delta0 unresolved");

  DriftResult a = drift(spec, d0.value, 0.0);
  std::ostringstream ev;
  if (a.status == DriftResult::Status::plus_infinity) {
    out.alpha_max = kInf;
    out.gap = true;
    ev << "alpha_max = +inf (" << a.witness << ")";
    out.evidence = ev.str();
    return out;
  }
  out.alpha_max = a.value;
  if (std::abs(a.value) < kAlphaTol) {
    out.boundary_case = true;
    out.gap = false;
    ev << "alpha_max numerically zero (|" << a.value << "| < " << kAlphaTol
       << "): boundary case, no gap under exact-zero reading";
    out.evidence = ev.str();
    return out;
  }
  if (a.value > 0) {
    out.gap = true;
    ev << "alpha_max = " << a.value << " > 0";
    out.evidence = ev.str();
    return out;
  }
  // negative drift: gap iff some q > 0 keeps sum e^{delta0 phi + q psi} finite
  double wall = spec.locally_constant() ? convergence_boundary(spec, d0.value) : 0.0;
  if (wall > 0) {
    out.finite_q_witness = true;
    out.witness_q = std::isfinite(wall) ? 0.5 * wall : 1.0;
    out.gap = true;
    ev << "alpha_max = " << a.value << " < 0 and sum e^{delta0 phi + q psi} finite at witness q="
       << out.witness_q;
  } else {
    out.finite_q_witness = false;
    out.gap = false;
    ev << "alpha_max = " << a.value << " < 0 and sum e^{delta0 phi + q psi} = +inf for all q > 0 ("
       << spec.tail.divergence_witness(d0.value, 1e-9, 0, 0) << ")";
  }
  out.evidence = ev.str();
  return out;
}

std::string to_string(TrichotomyLabel label) {
  switch (label) {
    case TrichotomyLabel::lean: return "lean";
    case TrichotomyLabel::balanced: return "balanced";
    case TrichotomyLabel::black_hole: return "black-hole";
  }
  return "?";
}

TrichotomyReport classify_trichotomy(const SystemSpec& spec) {
  TrichotomyReport r;
  DimensionGap gz = dimension_gap_Z(spec);
  CriticalExponent d0 = critical_exponent(spec, Extension::base0);
  CriticalExponent dz = critical_exponent(spec, Extension::Z);
  r.delta0 = d0.value;
  r.deltaZ = dz.resolved ? dz.value : kNaN;
  r.alpha_max = gz.alpha_max;
  r.finite_q_witness = gz.finite_q_witness;
  r.witness_q = gz.witness_q;
  r.evidence = gz.evidence;
  r.gap_Z = gz.gap;

  double alpha = gz.alpha_max;
  if (gz.boundary_case) {
    r.label = TrichotomyLabel::balanced;
    r.numerically_balanced = true;
    r.balanced_neighbors = "alpha>0 side: black-hole; alpha<0 side: " +
                           std::string(gz.finite_q_witness ? "lean" : "balanced");
  } else if (alpha > 0) {
    r.label = TrichotomyLabel::black_hole;
  } else if (gz.finite_q_witness) {
    r.label = TrichotomyLabel::lean;
  } else {
    r.label = TrichotomyLabel::balanced;
  }

  // dimension fields from the trichotomy formulae
  r.deltaN = (alpha >= 0 || gz.boundary_case) ? r.deltaZ : r.delta0;
  r.dimT_plus_Z = (alpha >= 0) ? r.delta0 : r.deltaZ;
  r.dimT_minus_Z = (alpha <= 0) ? r.delta0 : r.deltaZ;
  r.dimT_plus_N = r.dimT_plus_Z;
  r.dimT_minus_N = 0.0;
  r.gap_N = r.label == TrichotomyLabel::black_hole;
  return r;
}

PhaseReport phase_transition(const SystemSpec& spec_in) {
  const SystemSpec spec = spec_in.locally_constant() ? spec_in : lc_shadow(spec_in);
  PhaseReport r;

  // hypothesis: some positive q keeps the pressure finite at small s; when
  // the divergence wall sits at q = 0 the one-sided analysis applies instead
  double wall1 = convergence_boundary(spec, 1.0);
  r.wall_pinned = !(wall1 > 1e-9);

  // root of s -> drift(s, 0) by bisection, +inf drift counting as positive
  auto sgn = [&](double s) -> int {
    if (!pressure_finite(spec, s, 0.0)) return +2;  // outside the domain
    DriftResult d = drift(spec, s, 0.0);
    if (d.status == DriftResult::Status::plus_infinity) return +1;
    if (std::abs(d.value) <= 1e-12) return 0;
    return d.value > 0 ? +1 : -1;
  };

  // ordered probe grid; the first adjacent sign change brackets s0
  const double grid[] = {-4.0, -2.0, -1.0, -0.5, 0.0, 0.25, 0.5, 0.75,
                         1.0,  1.5,  2.0,  4.0,  8.0, 16.0, 32.0, 64.0};
  int zeros = 0, usable = 0;
  double lo = kNaN, hi = kNaN, s_zero = kNaN;
  int g_lo = 0;
  double prev_s = kNaN;
  int prev_g = +2;
  for (double s : grid) {
    int g = sgn(s);
    if (g == +2) continue;
    ++usable;
    if (g == 0) {
      ++zeros;
      if (std::isnan(s_zero)) s_zero = s;
    }
    if (prev_g != +2 && prev_g != 0 && g != 0 && g != prev_g && std::isnan(lo)) {
      lo = prev_s;
      hi = s;
      g_lo = prev_g;
    }
    prev_s = s;
    prev_g = g;
  }
  if (usable > 0 && zeros == usable) {
    r.drift_identically_zero = true;
    r.note = "drift at q=0 vanishes identically; pressure is a straight line";
    r.has_transition = false;
    return r;
  }
  if (std::isnan(lo) && !std::isnan(s_zero)) {
    // an exact zero on the grid (the two-branch walk has its root at s=0)
    r.s0 = s_zero;
    r.found_s0 = true;
    r.cov_phi_psi = asymptotic_covariance(spec, r.s0, 0.0, Observable::phi(), Observable::psi());
    r.cov_phi_phi = asymptotic_covariance(spec, r.s0, 0.0, Observable::phi(), Observable::phi());
    r.cov_psi_psi = asymptotic_covariance(spec, r.s0, 0.0, Observable::psi(), Observable::psi());
    r.has_transition = std::abs(r.cov_phi_psi) > r.cov_tolerance;
    r.second_derivative_jump = r.cov_phi_psi * r.cov_phi_psi / r.cov_psi_psi;
    return r;
  }
  if (std::isnan(lo)) {
    r.found_s0 = false;
    r.note = "no drift root: no candidate s0 in the probed range";
    return r;
  }
  r.s0 = bisect_predicate(
      [&](double s) {
        int g = sgn(s);
        if (g == +2) return false;
        return g != g_lo;  // true on the hi side of the sign change
      },
      lo, hi, 1e-11);
  r.found_s0 = true;

  r.cov_phi_psi = asymptotic_covariance(spec, r.s0, 0.0, Observable::phi(), Observable::psi());
  r.cov_phi_phi = asymptotic_covariance(spec, r.s0, 0.0, Observable::phi(), Observable::phi());
  r.cov_psi_psi = asymptotic_covariance(spec, r.s0, 0.0, Observable::psi(), Observable::psi());
  r.has_transition = std::abs(r.cov_phi_psi) > r.cov_tolerance;
  r.second_derivative_jump = r.cov_phi_psi * r.cov_phi_psi / r.cov_psi_psi;
  if (r.wall_pinned)
    r.note = "divergence wall at q=0: covariance criterion applied one-sided";
  return r;
}

}  // namespace skewpress
