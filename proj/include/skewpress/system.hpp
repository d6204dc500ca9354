#ifndef SKEWPRESS_SYSTEM_HPP
#define SKEWPRESS_SYSTEM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skewpress/common.hpp"
#include "skewpress/tail.hpp"

namespace skewpress {

/// One full branch of the base map. log_weight_sup/inf bound the branch
/// weight (|J_k| for linear branches; sup/inf of the inverse-branch
/// derivative over the cylinder for nonlinear ones). psi is the step value,
/// psi1 the reflection value used in the boundary cell.
struct BranchData {
  long long k = 0;
  double log_weight_sup = 0.0;
  double log_weight_inf = 0.0;
  long long psi = 0;
  long long psi1 = 0;
};

/// Moebius inverse branch t -> (a t + b) / (c t + d) mapping (0,1) into a
/// cylinder; |derivative| = |ad-bc| / (c t + d)^2 is monotone on [0,1], so
/// per-cylinder sup/inf of composed derivatives sit at the endpoints.
struct Moebius {
  double a = 0, b = 0, c = 0, d = 1;
};

struct SystemSpec {
  enum class Kind { locally_constant, nonlinear };

  std::string name;
  Kind kind = Kind::locally_constant;
  std::vector<BranchData> branches;  // ascending k
  TailModel tail;
  long long M = 0;

  /// nonlinear systems only: inverse branch of digit k
  std::function<Moebius(long long)> inverse_branch;

  /// psi1 - psi gap used for branches beyond the tabulated range
  long long tail_psi1_gap = 1;

  /// set by builders constructing Hessenberg-induced systems; relaxes the
  /// "inf psi = -1" part of validation as documented in the systems contract
  bool hessenberg_mode = false;

  /// builder identity, kept so nonlinear builtins can round-trip through JSON
  std::string builtin;
  std::vector<double> builtin_params;

  bool locally_constant() const { return kind == Kind::locally_constant; }

  /// log weight of branch k, including the exact tail generator when k is
  /// beyond the tabulated range. `sup` picks the sup/inf side.
  double log_weight(long long k, bool sup = true) const;
  long long psi_of(long long k) const;
  long long psi1_of(long long k) const;
  bool has_branch(long long k) const;

  long long min_tabulated_k() const { return branches.front().k; }
  long long max_tabulated_k() const { return branches.back().k; }

  /// inf/sup of psi over all branches (tail rule included)
  long long psi_inf() const;
  bool psi_sup_positive() const;
  /// max over branches (and tail) of psi1 - psi
  long long psi_gap_sup() const;
};

/// A finite symbolic orbit: digit indices plus the seed that generated them.
struct DigitSequence {
  std::vector<long long> digits;
  std::uint64_t seed = 0;
};

/// Validate all documented invariants; throws SpecError naming the field and
/// rule on the first violation. Returns the spec by value so builders can
/// end with `return validated(std::move(spec))`.
SystemSpec validated(SystemSpec spec);

/// Decide strong regularity (exists s with 0 < P(s phi) < infinity) by an
/// adaptive sign/finiteness probe of the base pressure.
bool is_strongly_regular(const SystemSpec& spec);

// --- builtin base systems (section references live in the docs, not here) ---

/// Two linear branches of weights c1, c2 with steps -1, +1 and psi1 = psi+1.
SystemSpec builtin_simple_walk(double c1, double c2);

/// Countable linear branches |J_k| = (1-lambda) lambda^(k-1), psi_k = k-2,
/// psi1 = psi+1; exact geometric tail.
SystemSpec builtin_lueroth(double lambda);

/// The Gauss map's inverse branches x -> 1/(x+k); nonlinear, power tail with
/// p = 2. `depth_cap` is the number of tabulated branches (>= 1).
SystemSpec builtin_gauss(long long depth_cap);

/// Locally constant branches |J_k| = 1/(k^2 zeta(2)), psi_k = k-2, psi1=psi+1.
SystemSpec builtin_linearized_gauss();

/// J_0 = (a,1), J_k = (a/(k+1), a/k); psi_k = floor(sqrt(k)) - 1, psi1=psi+1.
SystemSpec builtin_power_lueroth(double a);

/// Parse `name[:p1[,p2]]` or `file:PATH` into a validated SystemSpec.
SystemSpec system_from_string(const std::string& descriptor);

/// JSON system file I/O per the documented schema.
SystemSpec load_system(const std::string& path);
std::string system_to_json(const SystemSpec& spec);

/// zeta(x) for x > 1 by partial sum plus Euler-Maclaurin correction,
/// absolute error < 1e-12 (used by the linearized-Gauss weights and tests).
double riemann_zeta(double x);

}  // namespace skewpress

#endif
