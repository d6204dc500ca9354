#ifndef SKEWPRESS_HESSENBERG_HPP
#define SKEWPRESS_HESSENBERG_HPP

#include <vector>

#include "skewpress/system.hpp"
#include "skewpress/variational.hpp"

namespace skewpress {

/// Infinite lower-Hessenberg matrix built from a nonnegative l^1 sequence
/// (a_i): row 0 holds a_{j-M}, row i >= 1 holds a_{j-i+1}. Entries beyond the
/// tabulated prefix come from `exact_a` (when present) under the tail bound.
struct HessenbergSpec {
  std::vector<double> a;
  TailModel tail;  // l^1 bound on entries beyond a.size(); kind none = finite
  long long M = 0;
  std::function<double(long long)> exact_a;
};

/// a_k = lambda^k with an exact geometric tail.
HessenbergSpec hessenberg_geometric(double lambda, long long M = 0);

/// Walk system induced by the matrix: phi_k = log a_k, psi_k = k-1,
/// psi1 = psi + M + 1 (validated in hessenberg mode).
SystemSpec hessenberg_induced_system(const HessenbergSpec& h);

/// log rho via the variational formula: skew N-pressure of the induced
/// system at s = 1 (selects between log sum a_k and the drift-root value).
SkewPressureResult spectral_radius_variational(const HessenbergSpec& h);

/// log of the leading eigenvalue of the top-left k x k principal submatrix
/// by power iteration (deterministic all-ones start, max-norm normalization,
/// relative-residual stopping). Throws after the iteration cap.
double spectral_radius_truncated(const HessenbergSpec& h, long long k, double tol = 1e-8,
                                 long long max_iter = 100'000, bool parallel = true);

struct HessenbergCompareRow {
  long long k;
  double log_truncated;
  double gap;  // |variational - truncated|
};
std::vector<HessenbergCompareRow> hessenberg_compare(const HessenbergSpec& h,
                                                     const std::vector<long long>& ks,
                                                     double tol = 1e-8);

}  // namespace skewpress

#endif
