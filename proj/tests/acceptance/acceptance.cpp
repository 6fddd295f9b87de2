// Acceptance checks, one PASS/FAIL line each. Exit status is the number of
// failed checks.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scales/scales.hpp"
#include "scales_cli/cli.hpp"

using namespace scales;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "scales");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

Outcome product_exactness() {
  const Stopwatch clock;
  const auto spec = ProductSpaceSpec::constant(2, 12);
  std::size_t bad_counts = 0;
  double worst_mass = 0.0;
  // Each depth on its own materialization, and every level of the deepest one.
  for (std::size_t depth = 1; depth <= 12; ++depth) {
    const auto z = materialize(spec, depth);
    const double eps = std::exp(spec.log_eps(depth));
    bad_counts += covering_number_greedy(*z.space, eps) != (std::size_t{1} << depth);
  }
  const auto z = materialize(spec, 12);
  for (std::size_t n = 1; n <= 12; ++n) {
    const double eps = std::exp(spec.log_eps(n));
    bad_counts += covering_number_greedy(*z.space, eps) != (std::size_t{1} << n);
    const double expected = std::exp(-static_cast<double>(n) * std::log(2.0));
    for (std::size_t x = 0; x < z.space->size(); ++x) {
      worst_mass = std::max(worst_mass, std::abs(local_mass(z.measure, x, eps) - expected));
    }
  }
  const double t = clock.seconds();
  return {bad_counts == 0 && worst_mass <= 1e-12 && t < 30.0,
          fmt("cover mismatches %zu, max ball-mass error %.3g, %.1fs", bad_counts, worst_mass, t)};
}

Outcome product_orders() {
  const auto b = assemble(ProductSpaceSpec::constant(2, 12), ScalingFamily::ord(), 12);
  double worst = 0.0;
  for (const auto& name : quantity_names()) {
    const auto& q = b.quantities.at(name);
    const auto& o = b.oracle.at(name);
    worst = std::max({worst, o.lower - q.lower, q.upper - o.upper, std::abs(q.lower - o.lower),
                      std::abs(q.upper - o.upper)});
  }
  return {b.source == "product" && b.quantities.size() == 10 && b.errors.empty() && worst <= 0.15,
          fmt("source %s, largest deviation from the oracle %.4f", b.source.c_str(), worst)};
}

Outcome inhomogeneous() {
  const auto spec = inhomogeneous_spec(2, 1, 2187);
  const auto b = inhomogeneous_orders(spec, 2187);
  return {std::abs(b.lower - 1.0) <= 0.15 && std::abs(b.upper - 2.0) <= 0.15,
          fmt("lower %.4f, upper %.4f", b.lower, b.upper)};
}

Outcome sandwich() {
  const Stopwatch clock;
  std::size_t failures = 0;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto space = FiniteMetricSpace::from_points(uniform_cube_sample(8, 2, seed));
    const double diam = space.diameter();
    for (int j = 1; j <= 10; ++j) {
      const double eps = diam * j / 10.5;
      const std::size_t n = covering_number_exact(space, eps);
      const std::size_t packed = packing_number_exact(space, eps);
      const std::size_t packed2 = packing_number_exact(space, 2.0 * eps);
      failures += !(packed2 <= n && n <= packed);
      ++checks;
    }
  }
  const double t = clock.seconds();
  return {failures == 0 && checks == 1000 && t < 10.0,
          fmt("%zu checks, %zu failures, %.2fs", checks, failures, t)};
}

Outcome quantization_bounds() {
  std::size_t failures = 0;
  std::size_t checks = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto space = std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::from_points(uniform_cube_sample(10, 2, seed)));
    CounterStream rng(seed, 0x5eed);
    std::vector<double> w(10);
    double total = 0.0;
    for (double& v : w) {
      // About one point in five carries no mass.
      v = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
      total += v;
    }
    if (total == 0.0) w[0] = total = 1.0;
    for (double& v : w) v /= total;
    const EmpiricalMeasure mu(space, w);
    const auto support = space->subspace(mu.support());
    for (double eps : {0.05, 0.1, 0.2, 0.3, 0.5}) {
      const auto q = quantization_number(mu, eps);
      const std::size_t n = covering_number_exact(support, eps);
      failures += !(q.exact && q.n <= n);
      ++checks;
    }
    for (std::size_t n = 1; n <= 3; ++n) {
      const auto best = best_n_median(mu, n);
      for (double r : {0.05, 0.15, 0.4, 1.0}) {
        failures += !mass_escape_check(mu, best, r).ok;
        ++checks;
      }
    }
  }
  return {failures == 0, fmt("%zu checks, %zu failures", checks, failures)};
}

Outcome theorem_arrows_ci() {
  const Stopwatch clock;
  struct Case {
    const char* name;
    std::vector<std::string> args;
  };
  const std::vector<Case> cases = {
      {"product", {"check-theorems", "--product", "cards=2", "depth=10", "--scaling", "2,1",
                   "--tolerance", "0.15"}},
      {"inhomogeneous", {"check-theorems", "--inhomogeneous", "alpha=2", "beta=1", "--scaling",
                         "2,1", "--tolerance", "0.15"}},
      {"cube", {"check-theorems", "--cube", "n=4096", "dim=1", "seed=0", "--scaling", "1,1",
                "--tolerance", "0.15", "--band", "0.8,1.2"}},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto r = cli(c.args);
    std::size_t violations = 0;
    std::size_t skipped = 0;
    std::string source;
    if (r.code == 0 || r.code == 2) {
      const auto doc = json::parse(r.out);
      violations = doc["violations"].get<std::size_t>();
      skipped = doc["report"]["skipped"].get<std::size_t>();
      source = doc["source"].get<std::string>();
    }
    ok = ok && r.code == 0;
    detail += fmt("%s: exit %d, %zu violated, %zu skipped (%s); ", c.name, r.code, violations,
                  skipped, source.c_str());
  }
  detail += fmt("%.1fs", clock.seconds());
  return {ok, detail};
}

Outcome lipschitz_order() {
  const Stopwatch clock;
  std::vector<double> eps;
  for (int k = 3; k <= 12; ++k) eps.push_back(std::ldexp(1.0, -k));
  const auto est = lipschitz_order_estimate(eps, 3);
  // Independent enumeration of lattice functions for 1, 2 and 4 steps.
  bool brute_ok = true;
  for (int steps : {1, 2, 4}) {
    const int levels = 2 * steps + 1;
    std::vector<int> v(steps + 1, 0);
    double count = 0;
    std::function<void(int)> rec = [&](int i) {
      if (i == steps + 1) {
        ++count;
        return;
      }
      for (int x = 0; x < levels; ++x) {
        if (i > 0 && std::abs(x - v[i - 1]) > 1) continue;
        v[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
    const double dp = std::exp(lipschitz_net_count(1.0 / steps).log_count);
    brute_ok = brute_ok && std::abs(dp - count) <= 1e-9 * count;
  }
  const double t = clock.seconds();
  return {est.lower >= 0.85 && est.upper <= 1.15 && brute_ok && t < 60.0,
          fmt("order in [%.4f, %.4f], enumeration %s, %.2fs", est.lower, est.upper,
              brute_ok ? "matches" : "differs", t)};
}

Outcome embedding() {
  const auto r = cli({"embed-check", "--holder", "0,1", "--depth", "3", "--grid-step",
                      "0.000244140625", "--pairs", "200", "--seed", "0"});
  if (r.code != 0) return {false, "embed-check failed: " + r.err};
  const auto doc = json::parse(r.out);
  const auto& s = doc["summary"];
  const int R = doc["R"].get<int>();
  const auto sep = s["separation_failures"].get<std::size_t>();
  const auto ident = s["identity_failures"].get<std::size_t>();
  const double holder = s["max_holder"].get<double>();
  std::size_t levels_seen = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    levels_seen += std::any_of(doc["pairs"].begin(), doc["pairs"].end(),
                               [n](const json& p) { return p["first_level"] == n; });
  }
  return {R == 6 && sep == 0 && ident == 0 && holder <= 1.05 && levels_seen == 3,
          fmt("R=%d, separation failures %zu, identity failures %zu, max Hölder %.4f, "
              "levels covered %zu",
              R, sep, ident, holder, levels_seen)};
}

Outcome wiener() {
  const Stopwatch clock;
  std::vector<double> grid;
  for (int i = 0; i <= 9; ++i) grid.push_back(0.35 + 0.05 * i);
  const auto maxima = sample_path_maxima(4096, 1'000'000, 1, {1, 4});
  bool ok = true;
  std::string detail;
  for (double eps : {0.5, 0.7}) {
    const auto mc = smallball_mc(maxima, eps, 0);
    const auto ref = refinement_allowance(maxima, eps, 0, 1);
    const double series = smallball_series(eps);
    const double band = 3.0 * mc.stderr_ + ref.allowance;
    ok = ok && std::abs(mc.p_hat - series) <= band;
    detail += fmt("eps %.1f: mc %.5f series %.5f band %.5f; ", eps, mc.p_hat, series, band);
  }
  std::vector<double> series_p, mc_p;
  for (double e : grid) {
    series_p.push_back(smallball_series(e));
    mc_p.push_back(smallball_mc(maxima, e, 0).p_hat);
  }
  const auto series_offset = smallball_order_fit(grid, series_p, FitModel::power_law_offset);
  const auto series_plain = smallball_order_fit(grid, series_p, FitModel::power_law);
  const auto mc_plain = smallball_order_fit(grid, mc_p, FitModel::power_law);
  const auto mc_offset = smallball_order_fit(grid, mc_p, FitModel::power_law_offset);
  ok = ok && series_offset.gamma >= 1.9 && series_offset.gamma <= 2.1;
  ok = ok && mc_plain.gamma >= 1.6 && mc_plain.gamma <= 2.4;
  const double t = clock.seconds();
  ok = ok && t < 300.0;
  detail += fmt("series gamma %.4f (offset model; plain slope %.4f); mc gamma %.4f (plain; "
                "offset model %.4f); %.1fs",
                series_offset.gamma, series_plain.gamma, mc_plain.gamma, mc_offset.gamma, t);
  return {ok, detail};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> pipelines = {
      {"report", "--cube", "n=600", "dim=2", "seed=5", "--grid", "0.3:0.0375:0.5"},
      {"local", "--cube", "n=800", "seed=2", "--grid", "0.25:0.0078125:0.5"},
      {"quantize", "--cube", "n=300", "seed=1", "--eps", "0.2,0.05,0.02"},
      {"check-theorems", "--product", "cards=2", "depth=8", "--scaling", "2,1"},
      {"wiener-smallball", "--m", "512", "--paths", "20000", "--seed", "4"},
      {"wiener-order", "--source", "mc", "--m", "256", "--paths", "20000", "--seed", "4"},
      {"wiener-quant", "--m", "64", "--paths", "256", "--seed", "7"},
      {"embed-check", "--depth", "2", "--pairs", "40", "--seed", "9"},
  };
  std::size_t mismatches = 0;
  std::size_t errors = 0;
  for (const auto& args : pipelines) {
    std::string first;
    for (const char* threads : {"1", "2", "8"}) {
      auto a = args;
      a.insert(a.end(), {"--threads", threads});
      const auto r = cli(a);
      errors += r.code != 0;
      if (first.empty()) first = r.out;
      mismatches += r.out != first;
    }
  }
  set_thread_count(0);
  return {mismatches == 0 && errors == 0,
          fmt("%zu pipelines x 3 thread counts, %zu mismatches, %zu errors", pipelines.size(),
              mismatches, errors)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"product covering exactness", product_exactness},
      {"product orders against the closed form", product_orders},
      {"inhomogeneous lower and upper orders", inhomogeneous},
      {"covering/packing sandwich", sandwich},
      {"quantization bounds and mass escape", quantization_bounds},
      {"comparison arrows on the CI instances", theorem_arrows_ci},
      {"Lipschitz ball order", lipschitz_order},
      {"label embedding", embedding},
      {"Wiener small balls", wiener},
      {"thread-count determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : checks) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
