#include "skewpress/tail.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace skewpress {

namespace {

constexpr long long kHeadBudget = 20'000'000;  // explicit terms allowed inside a closure bound

// sup over the admissible psi values at index j of q*psi (the bound must use
// the worst case, which for bounded psi depends on the sign of q)
double q_psi_sup(const TailModel& t, double q, long long j) {
  if (t.psi_rule == TailModel::Psi::bounded)
    return q * static_cast<double>(q >= 0 ? t.psi_hi : t.psi_lo);
  return q * static_cast<double>(t.psi_of(j));
}

// power weights with s<0 grow like k^{p|s|}; for s>=0 the decay is part of
// the exponent handled via log_term_bound, not the degree.
double p_growth(const TailModel& t, double s) { return t.p * std::max(-s, 0.0); }

// polynomial degree (in k) of the non-exponential part of the term bound
double poly_degree(const TailModel& t, double s, int a, int b) {
  double deg = 2.0;  // slack absorbing log factors
  switch (t.psi_rule) {
    case TailModel::Psi::linear: deg += a; break;
    case TailModel::Psi::floor_sqrt: deg += 0.5 * a; break;
    case TailModel::Psi::bounded: break;
  }
  if (t.kind == TailModel::Weight::geometric) deg += b;  // |log w| ~ k|log r|
  if (t.kind == TailModel::Weight::power) deg += p_growth(t, s);
  return deg;
}

// exponential decay rate per unit k of the term bound
double exp_rate(const TailModel& t, double s, double q) {
  double rate = 0.0;
  if (t.kind == TailModel::Weight::geometric) rate += s * std::log(t.r);
  if (t.psi_rule == TailModel::Psi::linear) rate += q;
  return rate;
}

}  // namespace

bool TailModel::sum_converges(double s, double q, int a, int b) const {
  if (kind == Weight::none) return true;
  const double rate = exp_rate(*this, s, q);

  if (kind == Weight::geometric) {
    switch (psi_rule) {
      case Psi::linear:
        return rate < 0.0;  // polynomial/log factors never move this threshold
      case Psi::floor_sqrt:
        if (rate != 0.0) return rate < 0.0;
        return q < 0.0;  // s == 0: terms ~ poly(k) e^{q sqrt k}
      case Psi::bounded:
        return rate < 0.0;  // i.e. s > 0
    }
  }
  // power weights: w^s ~ k^{-ps}
  switch (psi_rule) {
    case Psi::linear:
      if (q != 0.0) return q < 0.0;
      return p * s > 1.0 + a;
    case Psi::floor_sqrt:
      if (q != 0.0) return q < 0.0;  // e^{q sqrt k} beats any polynomial
      return p * s > 1.0 + 0.5 * a;
    case Psi::bounded:
      return p * s > 1.0;  // bounded psi factors are O(1)
  }
  return false;
}

double TailModel::tail_bound_from(long long k, double s, double q, int a, int b) const {
  if (kind == Weight::none) return 0.0;
  if (!sum_converges(s, q, a, b)) return kInf;
  k = std::max(k, std::max<long long>(cutoff, 2));

  auto log_term_bound = [&](long long j) {
    double lt = s * log_weight_bound(j) + q_psi_sup(*this, q, j);
    if (a > 0) {
      double psimag = std::max({1.0, std::abs(static_cast<double>(psi_of(j))),
                                std::abs(static_cast<double>(psi_lo)), std::abs(static_cast<double>(psi_hi))});
      lt += a * std::log(psimag);
    }
    if (b > 0) {
      double lw = std::abs(log_weight_bound(j)) + 1.0;
      lt += b * std::log(lw);
    }
    return lt;
  };

  const double rate = exp_rate(*this, s, q);
  const double deg = poly_degree(*this, s, a, b);
  double best = kInf;

  // Candidate 1: plain geometric closure once the polynomial part is dominated.
  if (rate < 0.0) {
    long long k0 = std::max(k, static_cast<long long>(std::ceil(2.0 * deg / -rate)) + 1);
    if (k0 - k <= kHeadBudget) {
      double rho = std::exp(0.5 * rate);
      Kahan head;
      for (long long j = k; j < k0; ++j) head.add(std::exp(log_term_bound(j)));
      best = std::min(best, head.value() + std::exp(log_term_bound(k0)) / (1.0 - rho));
    }
  }

  // Candidate 2: sqrt-psi closure, q<0, no exponential weight decay to lean on.
  if (psi_rule == Psi::floor_sqrt && q < 0.0 && rate == 0.0) {
    double root0 = 8.0 * deg / -q;  // sqrt(j) >= root0 halves the log-slope
    double k0d = root0 * root0;
    if (k0d < 4.0e18) {
      long long k0 = std::max(k, static_cast<long long>(std::ceil(k0d)) + 1);
      if (k0 - k <= kHeadBudget) {
        Kahan head;
        for (long long j = k; j < k0; ++j) head.add(std::exp(log_term_bound(j)));
        double rho = std::exp(0.25 * q / std::sqrt(static_cast<double>(k0)));
        if (rho < 1.0)
          best = std::min(best, head.value() + std::exp(log_term_bound(k0)) / (1.0 - rho));
      }
    }
  }

  // Candidate 3: integral closure for power weights, q<=0 (e^{q psi_j} is
  // bounded by its value at the left end since psi is nondecreasing).
  if (kind == Weight::power && q <= 0.0 && s > 0.0) {
    double d = 0.0;
    if (psi_rule == Psi::linear) d = a;
    if (psi_rule == Psi::floor_sqrt) d = 0.5 * a;
    double expo = p * s - d;  // term <= C^s cb j^{-expo} (log j)^b, need expo > 1
    if (expo > 1.0) {
      double eps = 0.5 * (expo - 1.0);
      double cb = 1.0;
      if (b > 0) {
        // (|log C| + p log j)^b <= cb * j^eps with cb = (|log C|+p)^b (b/(e eps))^b
        double base = std::max(1.0, b / (2.718281828459045 * eps));
        cb = std::pow(base, b) * std::pow(std::abs(std::log(std::max(C, 1e-300))) + p, b);
        expo -= eps;
      }
      if (expo > 1.0) {
        double Cs = std::pow(C, s) * std::exp(q_psi_sup(*this, q, k));
        double x = static_cast<double>(k) - 1.0;
        best = std::min(best, cb * Cs * (std::pow(x + 1.0, -expo) + std::pow(x, 1.0 - expo) / (expo - 1.0)));
      }
    }
  }

  return best;
}

std::string TailModel::divergence_witness(double s, double q, int a, int b) const {
  std::ostringstream os;
  os << "tail ";
  if (kind == Weight::geometric)
    os << "geometric(C=" << C << ", r=" << r << ")";
  else if (kind == Weight::power)
    os << "power(C=" << C << ", p=" << p << ")";
  else
    os << "none";
  os << ", psi ";
  switch (psi_rule) {
    case Psi::linear: os << "k" << (psi_offset >= 0 ? "+" : "") << psi_offset; break;
    case Psi::floor_sqrt: os << "floor(sqrt(k))" << (psi_offset >= 0 ? "+" : "") << psi_offset; break;
    case Psi::bounded: os << "in [" << psi_lo << "," << psi_hi << "]"; break;
  }
  os << ": sum w^s e^{q psi}";
  if (a) os << " psi^" << a;
  if (b) os << " (log w)^" << b;
  os << " diverges at s=" << s << ", q=" << q
     << (two_sided ? " [two-sided tail: certified]" : " [upper-bound tail only]");
  return os.str();
}

}  // namespace skewpress
