#include "skewpress/series.hpp"

#include <algorithm>
#include <cmath>

namespace skewpress {

namespace {

constexpr long long kTermBudget = 20'000'000;

void moment_powers(Moment m, int& a, int& b) {
  switch (m) {
    case Moment::one: a = 0; b = 0; break;
    case Moment::psi: a = 1; b = 0; break;
    case Moment::psi2: a = 2; b = 0; break;
    case Moment::logw: a = 0; b = 1; break;
    case Moment::logw2: a = 0; b = 2; break;
    case Moment::logw_psi: a = 1; b = 1; break;
  }
}

double factor_of(Moment m, double psi, double lw) {
  switch (m) {
    case Moment::one: return 1.0;
    case Moment::psi: return psi;
    case Moment::psi2: return psi * psi;
    case Moment::logw: return lw;
    case Moment::logw2: return lw * lw;
    case Moment::logw_psi: return lw * psi;
  }
  return 1.0;
}

}  // namespace

SeriesSum series_sum(const SystemSpec& spec, double s, double q, Moment m, bool sup) {
  if (std::isnan(s) || std::isnan(q))
    throw std::invalid_argument("series_sum: s and q must not be NaN");

  int a = 0, b = 0;
  moment_powers(m, a, b);
  const TailModel& tail = spec.tail;

  SeriesSum out;
  if (tail.infinite() && !tail.sum_converges(s, q, a, b)) {
    out.infinite = true;
    // tail factor sign is eventually constant: psi -> +inf (or psi_hi), log w < 0
    out.sign = (b % 2 == 0) ? +1 : -1;
    if (tail.psi_rule == TailModel::Psi::bounded && a % 2 == 1 && tail.psi_hi < 0) out.sign = -out.sign;
    out.witness = tail.divergence_witness(s, q, a, b);
    return out;
  }

  // scale by the largest exponent among tabulated branches and the tail start
  double emax = -kInf;
  for (const auto& br : spec.branches) {
    double lw = sup ? br.log_weight_sup : br.log_weight_inf;
    emax = std::max(emax, s * lw + q * static_cast<double>(br.psi));
  }
  if (tail.infinite()) {
    double lw0 = tail.exact_log_weight ? tail.exact_log_weight(tail.cutoff)
                                       : tail.log_weight_bound(tail.cutoff);
    emax = std::max(emax, s * lw0 + q * static_cast<double>(tail.psi_of(tail.cutoff)));
  }
  out.log_scale = emax;

  Kahan acc, absacc;
  for (const auto& br : spec.branches) {
    double lw = sup ? br.log_weight_sup : br.log_weight_inf;
    double t = std::exp(s * lw + q * static_cast<double>(br.psi) - emax);
    double f = factor_of(m, static_cast<double>(br.psi), lw);
    acc.add(t * f);
    absacc.add(std::abs(t * f));
  }

  // unscaled bound B becomes exp(log B - emax) on the mantissa scale; going
  // through logs avoids spurious overflow when emax is very negative
  auto scaled = [emax](double B) {
    if (B <= 0.0) return 0.0;
    return std::exp(std::log(B) - emax);
  };

  double rem = 0.0;
  if (tail.infinite()) {
    const auto& gen = sup ? tail.exact_log_weight
                          : (tail.exact_log_weight_inf ? tail.exact_log_weight_inf : tail.exact_log_weight);
    if (gen) {
      long long k = tail.cutoff;
      bool closed = false;
      double bound = kInf;
      for (long long it = 0; it < kTermBudget; ++it, ++k) {
        double lw = gen(k);
        double psi = static_cast<double>(tail.psi_of(k));
        double t = std::exp(s * lw + q * psi - emax);
        double f = factor_of(m, psi, lw);
        acc.add(t * f);
        absacc.add(std::abs(t * f));
        if ((it & 63) == 63 || it < 4) {
          bound = scaled(tail.tail_bound_from(k + 1, s, q, a, b));
          if (bound <= 1e-18 * std::max(1.0, absacc.value())) {
            closed = true;
            break;
          }
        }
      }
      rem = closed ? bound : scaled(tail.tail_bound_from(k, s, q, a, b));
    } else {
      rem = scaled(tail.tail_bound_from(tail.cutoff, s, q, a, b));
    }
  }

  out.mantissa = acc.value();
  out.abs_mantissa = absacc.value();
  // a few ulps for the compensated float sum itself
  out.remainder = rem + 4e-16 * out.abs_mantissa;
  return out;
}

}  // namespace skewpress
