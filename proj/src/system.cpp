#include "skewpress/system.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skewpress/pressure.hpp"

namespace skewpress {

using nlohmann::ordered_json;

double SystemSpec::log_weight(long long k, bool sup) const {
  for (const auto& b : branches)
    if (b.k == k) return sup ? b.log_weight_sup : b.log_weight_inf;
  if (tail.infinite() && k >= tail.cutoff) {
    if (sup && tail.exact_log_weight) return tail.exact_log_weight(k);
    if (!sup && tail.exact_log_weight_inf) return tail.exact_log_weight_inf(k);
    if (!sup && tail.exact_log_weight) return tail.exact_log_weight(k);
    return tail.log_weight_bound(k);
  }
  throw SpecError("branch " + std::to_string(k) + ": not a declared branch");
}

long long SystemSpec::psi_of(long long k) const {
  for (const auto& b : branches)
    if (b.k == k) return b.psi;
  if (tail.infinite() && k >= tail.cutoff) return tail.psi_of(k);
  throw SpecError("branch " + std::to_string(k) + ": not a declared branch");
}

long long SystemSpec::psi1_of(long long k) const {
  for (const auto& b : branches)
    if (b.k == k) return b.psi1;
  if (tail.infinite() && k >= tail.cutoff) return tail.psi_of(k) + tail_psi1_gap;
  throw SpecError("branch " + std::to_string(k) + ": not a declared branch");
}

bool SystemSpec::has_branch(long long k) const {
  for (const auto& b : branches)
    if (b.k == k) return true;
  return tail.infinite() && k >= tail.cutoff;
}

long long SystemSpec::psi_inf() const {
  long long m = branches.front().psi;
  for (const auto& b : branches) m = std::min(m, b.psi);
  if (tail.infinite()) m = std::min(m, tail.psi_of(tail.cutoff));  // tail rules are nondecreasing
  return m;
}

bool SystemSpec::psi_sup_positive() const {
  for (const auto& b : branches)
    if (b.psi > 0) return true;
  if (tail.infinite() && tail.psi_rule != TailModel::Psi::bounded) return true;
  if (tail.infinite() && tail.psi_hi > 0) return true;
  return false;
}

long long SystemSpec::psi_gap_sup() const {
  long long g = 0;
  for (const auto& b : branches) g = std::max(g, b.psi1 - b.psi);
  if (tail.infinite()) g = std::max(g, tail_psi1_gap);
  return g;
}

SystemSpec validated(SystemSpec spec) {
  if (spec.branches.empty()) throw SpecError("branches: empty branch list");
  for (std::size_t i = 1; i < spec.branches.size(); ++i)
    if (spec.branches[i].k <= spec.branches[i - 1].k)
      throw SpecError("branches: indices must be strictly ascending");
  for (const auto& b : spec.branches) {
    const std::string at = "branch " + std::to_string(b.k) + ": ";
    if (!(b.log_weight_inf <= b.log_weight_sup))
      throw SpecError(at + "log_weight_inf > log_weight_sup");
    if (b.psi < -1) throw SpecError(at + "psi < -1 (step length must map into Z_{>=-1})");
    if (b.psi1 < b.psi) throw SpecError(at + "psi1 < psi");
    if (b.psi1 > b.psi + spec.M)
      throw SpecError(at + "psi1 > psi + M (reflection rule bound)");
    if (b.psi1 < 0) throw SpecError(at + "psi1 < 0 (reflection rule maps into N)");
  }
  if (spec.tail.infinite()) {
    if (!(spec.tail.C > 0)) throw SpecError("tail: leading constant C must be positive");
    if (spec.tail.kind == TailModel::Weight::geometric && !(spec.tail.r > 0 && spec.tail.r < 1))
      throw SpecError("tail: geometric ratio r must lie in (0,1)");
    if (spec.tail.kind == TailModel::Weight::power && !(spec.tail.p > 1))
      throw SpecError("tail: power exponent p must exceed 1");
    if (spec.tail.cutoff <= spec.max_tabulated_k())
      throw SpecError("tail: cutoff must exceed the last tabulated branch index");
    if (spec.tail.psi_of(spec.tail.cutoff) < -1)
      throw SpecError("tail: psi rule dips below -1 at the cutoff");
    if (spec.tail_psi1_gap < 0 || spec.tail_psi1_gap > spec.M)
      throw SpecError("tail: psi1 gap must lie in [0, M]");
  }
  if (!spec.hessenberg_mode && spec.psi_inf() != -1)
    throw SpecError("psi: inf psi must equal -1 (standing assumption -1 = inf psi < 0 < sup psi)");
  if (!spec.psi_sup_positive())
    throw SpecError("psi: sup psi must be positive (standing assumption -1 = inf psi < 0 < sup psi)");
  if (spec.kind == SystemSpec::Kind::nonlinear && !spec.inverse_branch)
    throw SpecError("kind: nonlinear system without an inverse-branch evaluator");
  if (spec.locally_constant() && !is_strongly_regular(spec))
    throw SpecError("system: not strongly regular (no s with 0 < P(s*phi) < infinity)");
  return spec;
}

double riemann_zeta(double x) {
  if (!(x > 1.0)) throw std::invalid_argument("riemann_zeta: requires x > 1");
  const long long N = 20000;
  Kahan acc;
  for (long long k = 1; k < N; ++k) acc.add(std::pow(static_cast<double>(k), -x));
  const double Nd = static_cast<double>(N);
  double t = std::pow(Nd, -x);
  double corr = std::pow(Nd, 1.0 - x) / (x - 1.0) + 0.5 * t + x * t / (12.0 * Nd) -
                x * (x + 1.0) * (x + 2.0) * t / (720.0 * Nd * Nd * Nd);
  return acc.value() + corr;
}

// --- builtins ---------------------------------------------------------------

SystemSpec builtin_simple_walk(double c1, double c2) {
  if (!(c1 > 0 && c1 < 1) || !(c2 > 0 && c2 < 1) || !(c1 + c2 <= 1))
    throw SpecError("simple walk: need c1, c2 in (0,1) with c1 + c2 <= 1");
  SystemSpec s;
  s.name = "simplewalk";
  s.kind = SystemSpec::Kind::locally_constant;
  s.M = 1;
  s.branches = {{1, std::log(c1), std::log(c1), -1, 0}, {2, std::log(c2), std::log(c2), 1, 2}};
  s.tail = TailModel::none();
  s.builtin = "simplewalk";
  s.builtin_params = {c1, c2};
  return validated(std::move(s));
}

SystemSpec builtin_lueroth(double lambda) {
  if (!(lambda > 0 && lambda < 1)) throw SpecError("lueroth: lambda must lie in (0,1)");
  SystemSpec s;
  s.name = "lueroth";
  s.kind = SystemSpec::Kind::locally_constant;
  s.M = 1;
  const long long tab = 64;
  const double l1 = std::log1p(-lambda), ll = std::log(lambda);
  for (long long k = 1; k <= tab; ++k) {
    double lw = l1 + static_cast<double>(k - 1) * ll;
    s.branches.push_back({k, lw, lw, k - 2, k - 1});
  }
  TailModel t;
  t.kind = TailModel::Weight::geometric;
  t.C = (1.0 - lambda) / lambda;  // w_k = C * lambda^k exactly
  t.r = lambda;
  t.cutoff = tab + 1;
  t.two_sided = true;
  t.psi_rule = TailModel::Psi::linear;
  t.psi_offset = -2;
  t.exact_log_weight = [l1, ll](long long k) { return l1 + static_cast<double>(k - 1) * ll; };
  s.tail = std::move(t);
  s.builtin = "lueroth";
  s.builtin_params = {lambda};
  return validated(std::move(s));
}

SystemSpec builtin_gauss(long long depth_cap) {
  if (depth_cap < 1) throw SpecError("gauss: depth_cap must be >= 1");
  SystemSpec s;
  s.name = "gauss";
  s.kind = SystemSpec::Kind::nonlinear;
  s.M = 1;
  for (long long k = 1; k <= depth_cap; ++k) {
    double kd = static_cast<double>(k);
    s.branches.push_back({k, -2.0 * std::log(kd), -2.0 * std::log(kd + 1.0), k - 2, k - 1});
  }
  TailModel t;
  t.kind = TailModel::Weight::power;
  t.C = 1.0;
  t.p = 2.0;
  t.cutoff = depth_cap + 1;
  t.two_sided = true;  // 1/(k+1)^2 >= (1/4) k^{-2}
  t.psi_rule = TailModel::Psi::linear;
  t.psi_offset = -2;
  t.exact_log_weight = [](long long k) { return -2.0 * std::log(static_cast<double>(k)); };
  t.exact_log_weight_inf = [](long long k) { return -2.0 * std::log(static_cast<double>(k + 1)); };
  s.tail = std::move(t);
  s.inverse_branch = [](long long k) { return Moebius{0.0, 1.0, 1.0, static_cast<double>(k)}; };
  s.builtin = "gauss";
  s.builtin_params = {static_cast<double>(depth_cap)};
  return validated(std::move(s));
}

SystemSpec builtin_linearized_gauss() {
  SystemSpec s;
  s.name = "lineargauss";
  s.kind = SystemSpec::Kind::locally_constant;
  s.M = 1;
  const double lz2 = std::log(riemann_zeta(2.0));
  const long long tab = 128;
  for (long long k = 1; k <= tab; ++k) {
    double lw = -2.0 * std::log(static_cast<double>(k)) - lz2;
    s.branches.push_back({k, lw, lw, k - 2, k - 1});
  }
  TailModel t;
  t.kind = TailModel::Weight::power;
  t.C = std::exp(-lz2);
  t.p = 2.0;
  t.cutoff = tab + 1;
  t.two_sided = true;
  t.psi_rule = TailModel::Psi::linear;
  t.psi_offset = -2;
  t.exact_log_weight = [lz2](long long k) { return -2.0 * std::log(static_cast<double>(k)) - lz2; };
  s.tail = std::move(t);
  s.builtin = "lineargauss";
  return validated(std::move(s));
}

SystemSpec builtin_power_lueroth(double a) {
  if (!(a > 0 && a < 1)) throw SpecError("power lueroth: a must lie in (0,1)");
  SystemSpec s;
  s.name = "powerlueroth";
  s.kind = SystemSpec::Kind::locally_constant;
  s.M = 1;
  s.branches.push_back({0, std::log1p(-a), std::log1p(-a), -1, 0});
  const long long tab = 128;
  const double la = std::log(a);
  auto lw = [la](long long k) {
    return la - std::log(static_cast<double>(k)) - std::log(static_cast<double>(k + 1));
  };
  auto psi = [](long long k) {
    return static_cast<long long>(std::floor(std::sqrt(static_cast<double>(k)))) - 1;
  };
  for (long long k = 1; k <= tab; ++k) s.branches.push_back({k, lw(k), lw(k), psi(k), psi(k) + 1});
  TailModel t;
  t.kind = TailModel::Weight::power;
  t.C = a;
  t.p = 2.0;
  t.cutoff = tab + 1;
  t.two_sided = true;  // a/(k(k+1)) >= (a/2) k^{-2}
  t.psi_rule = TailModel::Psi::floor_sqrt;
  t.psi_offset = -1;
  t.exact_log_weight = lw;
  s.tail = std::move(t);
  s.builtin = "powerlueroth";
  s.builtin_params = {a};
  return validated(std::move(s));
}

// --- JSON I/O ---------------------------------------------------------------

namespace {

TailModel tail_from_json(const ordered_json& j) {
  TailModel t;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return t;
  if (kind == "geometric") {
    t.kind = TailModel::Weight::geometric;
    t.C = j.at("C").get<double>();
    t.r = j.at("r").get<double>();
  } else if (kind == "power") {
    t.kind = TailModel::Weight::power;
    t.C = j.at("C").get<double>();
    t.p = j.at("p").get<double>();
  } else {
    throw SpecError("tail.kind: unknown kind '" + kind + "'");
  }
  t.cutoff = j.at("cutoff").get<long long>();
  t.two_sided = j.value("two_sided", false);
  if (j.contains("psi")) {
    const auto& pj = j.at("psi");
    std::string pk = pj.at("kind").get<std::string>();
    if (pk == "linear") {
      t.psi_rule = TailModel::Psi::linear;
      t.psi_offset = pj.at("offset").get<long long>();
    } else if (pk == "floor_sqrt") {
      t.psi_rule = TailModel::Psi::floor_sqrt;
      t.psi_offset = pj.at("offset").get<long long>();
    } else if (pk == "bounded") {
      t.psi_rule = TailModel::Psi::bounded;
      t.psi_lo = pj.at("lo").get<long long>();
      t.psi_hi = pj.at("hi").get<long long>();
    } else {
      throw SpecError("tail.psi.kind: unknown kind '" + pk + "'");
    }
  } else {
    throw SpecError("tail.psi: infinite tails need a psi rule (bounded/linear/floor_sqrt)");
  }
  return t;
}

ordered_json tail_to_json(const SystemSpec& s) {
  const TailModel& t = s.tail;
  ordered_json j;
  if (!t.infinite()) {
    j["kind"] = "none";
    return j;
  }
  j["kind"] = t.kind == TailModel::Weight::geometric ? "geometric" : "power";
  j["C"] = t.C;
  if (t.kind == TailModel::Weight::geometric)
    j["r"] = t.r;
  else
    j["p"] = t.p;
  j["cutoff"] = t.cutoff;
  j["two_sided"] = t.two_sided;
  ordered_json pj;
  switch (t.psi_rule) {
    case TailModel::Psi::linear:
      pj["kind"] = "linear";
      pj["offset"] = t.psi_offset;
      break;
    case TailModel::Psi::floor_sqrt:
      pj["kind"] = "floor_sqrt";
      pj["offset"] = t.psi_offset;
      break;
    case TailModel::Psi::bounded:
      pj["kind"] = "bounded";
      pj["lo"] = t.psi_lo;
      pj["hi"] = t.psi_hi;
      break;
  }
  j["psi"] = pj;
  j["psi1_gap"] = s.tail_psi1_gap;
  return j;
}

}  // namespace

SystemSpec load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("file: cannot open '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SpecError("file: JSON parse error in '" + path + "': " + e.what());
  }
  for (const char* banned : {"incidence", "markov", "adjacency"})
    if (j.contains(banned))
      throw SpecError(std::string("'") + banned +
                      "': only full-branch (full-shift) systems are supported");
  std::string kind = j.value("kind", "locally_constant");
  if (kind == "nonlinear_builtin") {
    std::string b = j.at("builtin").get<std::string>();
    if (b == "gauss") {
      long long cap = 200;
      if (j.contains("params") && !j["params"].empty()) cap = j["params"][0].get<long long>();
      return builtin_gauss(cap);
    }
    throw SpecError("builtin: unknown nonlinear builtin '" + b + "'");
  }
  if (kind != "locally_constant")
    throw SpecError("kind: unknown kind '" + kind + "'");
  SystemSpec s;
  s.name = j.value("name", "loaded");
  s.kind = SystemSpec::Kind::locally_constant;
  if (!j.contains("tail"))
    throw SpecError("tail: missing tail model (use {\"kind\":\"none\"} for finite systems)");
  s.tail = tail_from_json(j.at("tail"));
  if (s.tail.infinite()) s.tail_psi1_gap = j.at("tail").value("psi1_gap", 1LL);
  s.M = j.at("M").get<long long>();
  for (const auto& bj : j.at("branches")) {
    BranchData b;
    b.k = bj.at("k").get<long long>();
    b.log_weight_sup = bj.at("log_weight_sup").get<double>();
    b.log_weight_inf = bj.at("log_weight_inf").get<double>();
    b.psi = bj.at("psi").get<long long>();
    b.psi1 = bj.at("psi1").get<long long>();
    s.branches.push_back(b);
  }
  std::sort(s.branches.begin(), s.branches.end(),
            [](const BranchData& x, const BranchData& y) { return x.k < y.k; });
  return validated(std::move(s));
}

std::string system_to_json(const SystemSpec& s) {
  ordered_json j;
  j["name"] = s.name;
  if (s.kind == SystemSpec::Kind::nonlinear) {
    j["kind"] = "nonlinear_builtin";
    j["builtin"] = s.builtin;
    ordered_json params = ordered_json::array();
    for (double p : s.builtin_params) params.push_back(static_cast<long long>(p));
    j["params"] = params;
    return j.dump(2);
  }
  j["kind"] = "locally_constant";
  ordered_json branches = ordered_json::array();
  for (const auto& b : s.branches) {
    ordered_json bj;
    bj["k"] = b.k;
    bj["log_weight_sup"] = b.log_weight_sup;
    bj["log_weight_inf"] = b.log_weight_inf;
    bj["psi"] = b.psi;
    bj["psi1"] = b.psi1;
    branches.push_back(bj);
  }
  j["branches"] = branches;
  j["tail"] = tail_to_json(s);
  j["M"] = s.M;
  return j.dump(2);
}

SystemSpec system_from_string(const std::string& descriptor) {
  if (descriptor.rfind("file:", 0) == 0) return load_system(descriptor.substr(5));
  std::string name = descriptor;
  std::vector<double> params;
  auto colon = descriptor.find(':');
  if (colon != std::string::npos) {
    name = descriptor.substr(0, colon);
    std::stringstream ps(descriptor.substr(colon + 1));
    std::string tok;
    while (std::getline(ps, tok, ',')) params.push_back(std::stod(tok));
  }
  auto want = [&](std::size_t n) {
    if (params.size() != n)
      throw SpecError("system '" + name + "': expected " + std::to_string(n) + " parameter(s)");
  };
  if (name == "simplewalk") {
    want(2);
    return builtin_simple_walk(params[0], params[1]);
  }
  if (name == "lueroth") {
    want(1);
    return builtin_lueroth(params[0]);
  }
  if (name == "gauss") {
    if (params.empty()) return builtin_gauss(200);
    want(1);
    return builtin_gauss(static_cast<long long>(params[0]));
  }
  if (name == "lineargauss") {
    want(0);
    return builtin_linearized_gauss();
  }
  if (name == "powerlueroth") {
    want(1);
    return builtin_power_lueroth(params[0]);
  }
  throw SpecError("system '" + name + "': unknown system descriptor");
}

}  // namespace skewpress
