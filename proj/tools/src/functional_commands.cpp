#include <algorithm>
#include <cmath>

#include "commands.hpp"

namespace scales::cli {

Result run_lipschitz_order(const Options& o) {
  const ScalingFamily family = parse_scaling(o.scaling);
  const auto grid = parse_grid(o.grid.empty() ? "0.125:0.000244140625:0.5" : o.grid);
  std::vector<double> log_counts;
  json rows = json::array();
  Result r;
  r.table.columns = {"eps", "log_count", "regime"};
  for (double e : grid) {
    const auto count = lipschitz_net_count(e);
    log_counts.push_back(count.log_count);
    rows.push_back({{"eps", e}, {"log_count", count.log_count}, {"regime", count.regime}});
    r.table.rows.push_back({e, count.log_count, count.regime});
  }
  const auto est = lipschitz_order_estimate(grid, o.tail, family);
  json c = config_of(o, {"scaling", "grid", "tail"});
  c["grid_values"] = grid;
  r.doc["config"] = c;
  r.doc["counts"] = rows;
  r.doc["estimate"] = to_json(est);
  return r;
}

Result run_embed_check(const Options& o) {
  const auto [k, alpha] = parse_pair(o.holder, "--holder");
  if (k != std::floor(k)) throw DomainError("--holder k must be an integer");
  const FunctionClassSpec spec{1, static_cast<int>(k), alpha};
  const int R = embedding_base(spec);
  if (o.pairs == 0) throw DomainError("--pairs must be positive");

  struct PairResult {
    SeparationCheck separation;
    SingleLevelCheck single;
    double holder_a = 0.0;
    double holder_b = 0.0;
  };
  std::vector<PairResult> results(o.pairs);
  parallel_for(o.pairs, [&](std::size_t i) {
    auto [a, b] = random_label_pair(spec, o.depth, o.seed, i);
    auto& out = results[i];
    out.separation = verify_separation(a, b, spec, o.grid_step);
    // b restricted to its first differing level gives a single-level pair.
    LabelSequence single = a;
    const std::size_t n = out.separation.first_level;
    single.levels[n - 1] = b.levels[n - 1];
    out.single = single_level_identity(a, single, spec, o.grid_step);
    out.holder_a = holder_seminorm(embed(a, spec, o.grid_step), spec.k, spec.alpha);
    out.holder_b = holder_seminorm(embed(b, spec, o.grid_step), spec.k, spec.alpha);
  });

  std::size_t separation_failures = 0;
  std::size_t identity_failures = 0;
  double max_holder = 0.0;
  double min_separation_margin = INFINITY;
  double max_identity_error = 0.0;
  Result r;
  r.table.columns = {"pair", "first_level", "separation_lhs", "separation_rhs", "separation_ok",
                     "identity_lhs", "identity_expected", "identity_ok", "holder_a", "holder_b"};
  json rows = json::array();
  for (std::size_t i = 0; i < o.pairs; ++i) {
    const auto& p = results[i];
    separation_failures += !p.separation.ok;
    identity_failures += !p.single.ok;
    max_holder = std::max({max_holder, p.holder_a, p.holder_b});
    min_separation_margin = std::min(
        min_separation_margin, p.separation.lhs - (p.separation.rhs - p.separation.grid_error));
    max_identity_error = std::max(max_identity_error, std::abs(p.single.lhs - p.single.expected));
    rows.push_back({{"pair", i},
                    {"first_level", p.separation.first_level},
                    {"separation", {{"lhs", p.separation.lhs},
                                    {"rhs", p.separation.rhs},
                                    {"grid_error", p.separation.grid_error},
                                    {"ok", p.separation.ok}}},
                    {"identity", {{"level", p.single.level},
                                  {"lhs", p.single.lhs},
                                  {"expected", p.single.expected},
                                  {"tolerance", p.single.tolerance},
                                  {"ok", p.single.ok}}},
                    {"holder", {p.holder_a, p.holder_b}}});
    r.table.rows.push_back({i, p.separation.first_level, p.separation.lhs, p.separation.rhs,
                            p.separation.ok, p.single.lhs, p.single.expected, p.single.ok,
                            p.holder_a, p.holder_b});
  }
  json levels = json::array();
  for (std::size_t n = 1; n <= o.depth; ++n) levels.push_back(level_scale(spec, n));

  r.doc["config"] = config_of(o, {"holder", "depth", "grid_step", "pairs", "seed"});
  r.doc["R"] = R;
  r.doc["bump_norm"] = bump_norm(spec);
  r.doc["level_scales"] = levels;
  r.doc["pairs"] = rows;
  r.doc["summary"] = {{"separation_failures", separation_failures},
                      {"identity_failures", identity_failures},
                      {"max_holder", max_holder},
                      {"min_separation_margin", min_separation_margin},
                      {"max_identity_error", max_identity_error}};
  return r;
}

}  // namespace scales::cli
