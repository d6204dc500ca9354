#include "skewpress/pressure.hpp"

#include <algorithm>
#include <cmath>

namespace skewpress {

bool pressure_finite(const SystemSpec& spec, double s, double q) {
  if (std::isnan(s) || std::isnan(q))
    throw std::invalid_argument("pressure_finite: s and q must not be NaN");
  if (!spec.tail.infinite()) return true;
  return spec.tail.sum_converges(s, q, 0, 0);
}

PressureValue series_pressure(const SystemSpec& spec, double s, double q) {
  if (!spec.locally_constant())
    throw std::invalid_argument("series_pressure: needs a locally constant system (use cylinder_pressure)");
  SeriesSum z = series_sum(spec, s, q, Moment::one);
  if (z.infinite) return PressureValue::infinity(z.witness);

  PressureValue out;
  out.mode = PressureValue::Mode::series_exact;
  out.value = std::log(z.mantissa) + z.log_scale;
  double denom = std::max(z.mantissa - z.remainder, 1e-300);
  out.remainder_bound = std::isfinite(z.remainder) ? z.remainder / denom : kInf;
  out.lower = out.value - out.remainder_bound;
  out.upper = out.value + out.remainder_bound;
  return out;
}

double convergence_boundary(const SystemSpec& spec, double s) {
  if (!spec.locally_constant())
    throw std::invalid_argument("convergence_boundary: needs a locally constant system");
  auto finite = [&](double q) { return pressure_finite(spec, s, q); };
  if (!spec.tail.infinite()) return kInf;
  // grow an upper probe until divergence shows up; finite alphabets and
  // geometric tails with bounded psi never diverge in q
  double hi = 1.0;
  int grow = 0;
  while (finite(hi)) {
    hi *= 2.0;
    if (++grow > 40) return kInf;
  }
  double lo = -1.0;
  while (!finite(lo)) lo *= 2.0;
  return bisect_predicate([&](double q) { return !finite(q); }, lo, hi, 1e-9);
}

SystemSpec lc_shadow(const SystemSpec& spec) {
  if (spec.locally_constant()) return spec;
  SystemSpec s = spec;
  s.kind = SystemSpec::Kind::locally_constant;
  s.inverse_branch = nullptr;
  s.name = spec.name + "-shadow";
  for (auto& b : s.branches) {
    double gm = 0.5 * (b.log_weight_sup + b.log_weight_inf);
    b.log_weight_sup = gm;
    b.log_weight_inf = gm;
  }
  if (s.tail.infinite() && s.tail.exact_log_weight) {
    auto sup = s.tail.exact_log_weight;
    auto inf = s.tail.exact_log_weight_inf ? s.tail.exact_log_weight_inf : sup;
    s.tail.exact_log_weight = [sup, inf](long long k) { return 0.5 * (sup(k) + inf(k)); };
    s.tail.exact_log_weight_inf = s.tail.exact_log_weight;
  }
  return s;
}

GibbsWeights gibbs_weights(const SystemSpec& spec_in, double s, double q, long long cutoff) {
  const SystemSpec spec = spec_in.locally_constant() ? spec_in : lc_shadow(spec_in);
  SeriesSum z = series_sum(spec, s, q, Moment::one);
  if (z.infinite)
    throw std::invalid_argument("gibbs_weights: pressure diverges (" + z.witness + ")");

  GibbsWeights g;
  g.pressure = std::log(z.mantissa) + z.log_scale;
  Kahan covered;
  for (const auto& b : spec.branches) {
    if (b.k >= cutoff) break;
    double t = std::exp(s * b.log_weight_sup + q * static_cast<double>(b.psi) - g.pressure);
    g.k.push_back(b.k);
    g.p.push_back(t);
    covered.add(t);
  }
  if (spec.tail.infinite() && spec.tail.exact_log_weight) {
    for (long long k = spec.tail.cutoff; k < cutoff; ++k) {
      double t = std::exp(s * spec.tail.exact_log_weight(k) +
                          q * static_cast<double>(spec.tail.psi_of(k)) - g.pressure);
      g.k.push_back(k);
      g.p.push_back(t);
      covered.add(t);
    }
  }
  g.tail_mass_bound = std::max(0.0, 1.0 - covered.value());
  if (spec.tail.infinite()) {
    double B = spec.tail.tail_bound_from(std::max(cutoff, spec.tail.cutoff), s, q, 0, 0);
    if (std::isfinite(B)) g.tail_mass_bound = std::min(g.tail_mass_bound, B * std::exp(-g.pressure));
  }
  return g;
}

bool is_strongly_regular(const SystemSpec& spec) {
  // adaptive probe for an s with 0 < P(s phi) < infinity; P is decreasing in
  // s and finiteness is monotone, so bisection between the "+inf" region and
  // the "<= 0" region decides the question
  enum Cat { INF, POS, NONPOS };
  auto cat = [&](double s) -> Cat {
    if (!pressure_finite(spec, s, 0.0)) return INF;
    SeriesSum z = series_sum(spec, s, 0.0, Moment::one);
    if (z.infinite) return INF;
    double P = std::log(z.mantissa) + z.log_scale;
    return P > 0 ? POS : NONPOS;
  };
  double s = 1.0;
  Cat c = cat(s);
  if (c == POS) return true;
  double lo = s, hi = s;
  if (c == INF) {
    for (int i = 0; i < 60 && cat(hi) == INF; ++i) hi *= 2.0;
    if (cat(hi) == INF) return false;
    if (cat(hi) == POS) return true;
  } else {
    for (int i = 0; i < 60 && cat(lo) == NONPOS; ++i) lo *= 0.5;
    Cat cl = cat(lo);
    if (cl == POS) return true;
    if (cl == NONPOS) return false;  // P <= 0 for arbitrarily small s
  }
  for (int i = 0; i < 60; ++i) {
    double mid = 0.5 * (lo + hi);
    Cat cm = cat(mid);
    if (cm == POS) return true;
    if (cm == INF)
      lo = mid;
    else
      hi = mid;
  }
  return false;
}

}  // namespace skewpress
