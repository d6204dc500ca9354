#include "skewpress/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace skewpress {

namespace {

struct Letter {
  double a, b, c, d;  // inverse branch t -> (a t + b)/(c t + d)
  double log_det;     // log |ad - bc|
  double psi;
  double sup_term;    // depth-1 sup of exp(s log|h'| + q psi)
};

// Composed state: only the denominator row (c,d) of the word's Moebius
// matrix and the accumulated log|det|. |h'(t)| = |det|/(c t + d)^2 is
// monotone on [0,1]; with c,d >= 0 the sup sits at t=0 and the inf at t=1.
struct Node {
  double c, d, log_det, psi_sum;
};

void enumerate_subtree(const std::vector<Letter>& letters, Node node, int depth_left, double s,
                       double q, double shift, Kahan& zsup, Kahan& zinf) {
  if (depth_left == 0) {
    double base = s * node.log_det + q * node.psi_sum - shift;
    double lo_den = std::min(node.d, node.c + node.d);
    double hi_den = std::max(node.d, node.c + node.d);
    zsup.add(std::exp(base - 2.0 * s * std::log(lo_den)));
    zinf.add(std::exp(base - 2.0 * s * std::log(hi_den)));
    return;
  }
  for (const Letter& L : letters) {
    Node next;
    next.c = node.c * L.a + node.d * L.c;
    next.d = node.c * L.b + node.d * L.d;
    next.log_det = node.log_det + L.log_det;
    next.psi_sum = node.psi_sum + L.psi;
    enumerate_subtree(letters, next, depth_left - 1, s, q, shift, zsup, zinf);
  }
}

}  // namespace

PressureValue cylinder_pressure(const SystemSpec& spec, double s, double q,
                                const CylinderParams& cp) {
  if (std::isnan(s) || std::isnan(q))
    throw std::invalid_argument("cylinder_pressure: s and q must not be NaN");
  if (cp.depth < 1) throw std::invalid_argument("cylinder_pressure: depth must be >= 1");

  // letter table: tabulated branches with index <= cutoff
  std::vector<Letter> letters;
  for (const auto& br : spec.branches) {
    if (br.k > cp.cutoff) break;
    Letter L;
    if (spec.kind == SystemSpec::Kind::nonlinear) {
      Moebius m = spec.inverse_branch(br.k);
      L = {m.a, m.b, m.c, m.d, std::log(std::abs(m.a * m.d - m.b * m.c)),
           static_cast<double>(br.psi), 0.0};
    } else {
      // constant-derivative branch as a degenerate Moebius map
      double w = std::exp(br.log_weight_sup);
      L = {w, 0.0, 0.0, 1.0, br.log_weight_sup, static_cast<double>(br.psi), 0.0};
    }
    L.sup_term = std::exp(s * (L.log_det - 2.0 * std::log(std::min(L.d, L.c + L.d))) +
                          q * L.psi);
    letters.push_back(L);
  }
  if (letters.empty()) throw std::invalid_argument("cylinder_pressure: cutoff below first branch");

  double leaves = std::pow(static_cast<double>(letters.size()), cp.depth);
  if (leaves > static_cast<double>(cp.budget))
    throw std::invalid_argument("cylinder_pressure: combinatorial budget exceeded (" +
                                std::to_string(static_cast<long long>(leaves)) + " > " +
                                std::to_string(cp.budget) + " words)");

  // depth-1 mass beyond the cutoff: tabulated leftovers plus the analytic tail
  Kahan tail_mass;
  for (const auto& br : spec.branches)
    if (br.k > cp.cutoff)
      tail_mass.add(std::exp(s * br.log_weight_sup + q * static_cast<double>(br.psi)));
  if (spec.tail.infinite()) {
    double B = spec.tail.tail_bound_from(std::max(cp.cutoff + 1, spec.tail.cutoff), s, q, 0, 0);
    tail_mass.add(B);
  }
  const double T = tail_mass.value();
  if (!std::isfinite(T))
    throw std::invalid_argument(
        "cylinder_pressure: no certified tail bound (q > 0 with unbounded psi)");

  Kahan asum;
  for (const Letter& L : letters) asum.add(L.sup_term);
  const double A = asum.value();

  // scale so every leaf exponent is <= 0
  double m1 = -kInf;
  for (const Letter& L : letters) m1 = std::max(m1, std::log(L.sup_term));
  const double shift = cp.depth * m1;

  const int n = static_cast<int>(letters.size());
  std::vector<Kahan> part_sup(n), part_inf(n);

  auto run_first = [&](int i) {
    const Letter& L = letters[static_cast<std::size_t>(i)];
    Node root{L.c, L.d, L.log_det, L.psi};
    enumerate_subtree(letters, root, cp.depth - 1, s, q, shift, part_sup[static_cast<std::size_t>(i)],
                      part_inf[static_cast<std::size_t>(i)]);
  };

  if (cp.parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n; ++i) run_first(i);
  } else {
    for (int i = 0; i < n; ++i) run_first(i);
  }

  // fixed ascending-letter reduction: bitwise identical for any thread count
  Kahan zsup, zinf;
  for (int i = 0; i < n; ++i) {
    zsup.add(part_sup[static_cast<std::size_t>(i)].value());
    zinf.add(part_inf[static_cast<std::size_t>(i)].value());
  }

  // certified sup-side correction for words with at least one letter > cutoff:
  // their total is at most U^n - A^n with U = A + T
  double slack = 0.0;
  if (T > 0.0 && A > 0.0)
    slack = std::exp(cp.depth * std::log(A) - shift) * std::expm1(cp.depth * std::log1p(T / A));

  PressureValue out;
  out.mode = PressureValue::Mode::cylinder_bracket;
  out.depth = cp.depth;
  out.lower = (std::log(zinf.value()) + shift) / cp.depth;
  out.upper = (std::log(zsup.value() + slack) + shift) / cp.depth;
  out.value = 0.5 * (out.lower + out.upper);
  out.remainder_bound = 0.5 * (out.upper - out.lower);
  return out;
}

}  // namespace skewpress
