#include "skewpress/hessenberg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace skewpress {

HessenbergSpec hessenbergGeometricChecked(double lambda, long long M);

HessenbergSpec hessenberg_geometric(double lambda, long long M) {
  if (!(lambda > 0 && lambda < 1))
    throw SpecError("hessenberg: geometric parameter must lie in (0,1)");
  if (M < 0) throw SpecError("hessenberg: M must be nonnegative");
  HessenbergSpec h;
  const long long tab = 64;
  h.a.resize(tab);
  for (long long k = 0; k < tab; ++k) h.a[static_cast<std::size_t>(k)] = std::pow(lambda, static_cast<double>(k));
  h.M = M;
  TailModel t;
  t.kind = TailModel::Weight::geometric;
  t.C = 1.0;
  t.r = lambda;
  t.cutoff = tab;
  t.two_sided = true;
  t.psi_rule = TailModel::Psi::linear;
  t.psi_offset = -1;  // psi_k = k - 1
  double ll = std::log(lambda);
  t.exact_log_weight = [ll](long long k) { return static_cast<double>(k) * ll; };
  h.tail = std::move(t);
  h.exact_a = [lambda](long long k) { return std::pow(lambda, static_cast<double>(k)); };
  return h;
}

SystemSpec hessenberg_induced_system(const HessenbergSpec& h) {
  if (h.a.empty() || !(h.a[0] > 0))
    throw SpecError("hessenberg: a0 must be positive (downward irreducibility)");
  for (double v : h.a)
    if (v < 0) throw SpecError("hessenberg: entries must be nonnegative");
  SystemSpec s;
  s.name = "hessenberg-walk";
  s.kind = SystemSpec::Kind::locally_constant;
  s.M = h.M + 1;
  s.tail_psi1_gap = h.M + 1;
  s.hessenberg_mode = true;
  for (long long k = 0; k < static_cast<long long>(h.a.size()); ++k) {
    double v = h.a[static_cast<std::size_t>(k)];
    if (v == 0.0) continue;  // zero entries simply drop out of the walk
    double lw = std::log(v);
    s.branches.push_back({k, lw, lw, k - 1, k + h.M});
  }
  s.tail = h.tail;
  return validated(std::move(s));
}

SkewPressureResult spectral_radius_variational(const HessenbergSpec& h) {
  return skew_pressure_N(hessenberg_induced_system(h), 1.0);
}

namespace {

// effective row kernel: entries a_0..a_L with everything beyond L certified
// below 1e-18 of the total mass (rows are tail-truncated)
std::vector<double> row_kernel(const HessenbergSpec& h) {
  std::vector<double> a = h.a;
  if (h.tail.infinite() && h.exact_a) {
    double total = 0;
    for (double v : a) total += v;
    long long k = std::max<long long>(h.tail.cutoff, static_cast<long long>(a.size()));
    for (long long it = 0; it < 4'000'000; ++it, ++k) {
      double bound = h.tail.tail_bound_from(k, 1.0, 0.0, 0, 0);
      if (bound <= 1e-18 * std::max(total, 1e-300)) break;
      double v = h.exact_a(k);
      a.push_back(v);
      total += v;
    }
  }
  return a;
}

}  // namespace

double spectral_radius_truncated(const HessenbergSpec& h, long long k, double tol,
                                 long long max_iter, bool parallel) {
  if (k < 2) throw std::invalid_argument("spectral_radius_truncated: k must be >= 2");
  if (h.a.empty() || !(h.a[0] > 0))
    throw SpecError("hessenberg: a0 must be positive (downward irreducibility)");
  const std::vector<double> a = row_kernel(h);
  const long long L = static_cast<long long>(a.size());
  const long long M = h.M;

  std::vector<double> v(static_cast<std::size_t>(k), 1.0), w(static_cast<std::size_t>(k), 0.0);
  double rho = 0.0;

  auto matvec = [&](const std::vector<double>& x, std::vector<double>& y) {
    // row 0: sum_d a_d x_{d+M}; row i>=1: sum_d a_d x_{i-1+d}
    auto row = [&](long long i) {
      long long base = (i == 0) ? M : i - 1;
      long long dmax = std::min(L - 1, k - 1 - base);
      Kahan acc;
      for (long long d = 0; d <= dmax; ++d)
        acc.add(a[static_cast<std::size_t>(d)] * x[static_cast<std::size_t>(base + d)]);
      y[static_cast<std::size_t>(i)] = acc.value();
    };
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
      for (long long i = 0; i < k; ++i) row(i);
    } else {
      for (long long i = 0; i < k; ++i) row(i);
    }
  };

  for (long long it = 0; it < max_iter; ++it) {
    matvec(v, w);
    double nrm = 0.0;
    for (double x : w) nrm = std::max(nrm, std::abs(x));
    if (nrm == 0.0) throw std::runtime_error("spectral_radius_truncated: matrix annihilated the iterate");
    rho = nrm;
    // relative residual against the current max-norm-normalized iterate;
    // ratio-based tests stall on the constant row-sum plateau, this does not
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) res = std::max(res, std::abs(w[i] - rho * v[i]));
    for (auto& x : w) x /= nrm;
    std::swap(v, w);
    if (res <= tol * rho) return std::log(rho);
  }
  throw std::runtime_error("spectral_radius_truncated: power iteration hit the iteration cap");
}

std::vector<HessenbergCompareRow> hessenberg_compare(const HessenbergSpec& h,
                                                     const std::vector<long long>& ks,
                                                     double tol) {
  SkewPressureResult var = spectral_radius_variational(h);
  std::vector<HessenbergCompareRow> rows;
  rows.reserve(ks.size());
  for (long long k : ks) {
    double t = spectral_radius_truncated(h, k, tol);
    rows.push_back({k, t, std::abs(var.value - t)});
  }
  return rows;
}

}  // namespace skewpress
