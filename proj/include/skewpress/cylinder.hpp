#ifndef SKEWPRESS_CYLINDER_HPP
#define SKEWPRESS_CYLINDER_HPP

#include "skewpress/pressure.hpp"
#include "skewpress/system.hpp"

namespace skewpress {

struct CylinderParams {
  int depth = 4;
  long long cutoff = 200;        // largest branch index enumerated
  long long budget = 10'000'000; // enumeration cap in leaf count
  bool parallel = true;          // OpenMP over the first digit
};

/// Depth-n partition-sum bracket [ (1/n) log Z_n^inf, (1/n) log Z_n^sup ]
/// where Z_n^{sup/inf} sum per-cylinder sup/inf of exp S_n(s phi + q psi)
/// over all length-n words with letters <= cutoff. The sup side carries the
/// certified correction (U^n - A^n) for words containing a letter beyond the
/// cutoff, so the true pressure lies in the bracket. Branch derivatives are
/// evaluated exactly at the cylinder endpoints via the Moebius composition.
PressureValue cylinder_pressure(const SystemSpec& spec, double s, double q,
                                const CylinderParams& cp = {});

}  // namespace skewpress

#endif
