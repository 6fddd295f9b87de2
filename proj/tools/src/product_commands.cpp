#include <cmath>
#include <numbers>

#include "commands.hpp"

namespace scales::cli {

Result run_product(const Options& o) {
  if (o.product.empty()) throw DomainError("--product is required");
  const Source s = load_source(o, false);
  const ProductSpaceSpec& spec = *s.spec;
  const ScalingFamily family = parse_scaling(o.scaling);
  const double C = o.C > 0.0 ? o.C : std::numbers::e;
  const std::size_t n_max = o.n_max > 0 ? o.n_max : s.depth;

  const auto lambda = lambda_sequence(spec, C, n_max);
  const auto ratio = oracle_ratio_sequence(spec, family, n_max);
  std::vector<double> cover_log;
  std::vector<double> mass_log;
  for (std::size_t n = 1; n <= n_max; ++n) {
    cover_log.push_back(exact_covering_log(spec, n));
    mass_log.push_back(exact_ball_mass_log(spec, n));
  }

  Result r;
  json c = config_of(o, {"scaling", "C", "n_max", "verify"});
  c["source"] = {{"kind", s.kind}, {"params", s.config}};
  c["C"] = C;
  c["n_max"] = n_max;
  r.doc["config"] = c;
  r.doc["lambda"] = lambda;
  r.doc["oracle_ratio"] = ratio;
  r.doc["log_covering"] = cover_log;
  r.doc["log_ball_mass"] = mass_log;

  r.table.columns = {"n", "eps", "log_covering", "log_ball_mass", "lambda", "oracle_ratio"};
  for (std::size_t n = 1; n <= n_max; ++n) {
    r.table.rows.push_back({n, std::exp(spec.log_eps(n)), cover_log[n - 1], mass_log[n - 1],
                            lambda[n - 1], ratio[n - 1]});
  }

  if (o.verify) {
    // Greedy covers and ball masses on the materialized space, level by level.
    const auto z = materialize(spec, s.depth);
    json levels = json::array();
    bool all_ok = true;
    for (std::size_t n = 1; n <= s.depth; ++n) {
      const double eps = std::exp(spec.log_eps(n));
      const std::size_t count = covering_number_greedy(*z.space, eps);
      const double expected = std::round(std::exp(cover_log[n - 1]));
      double worst_mass = 0.0;
      for (std::size_t x = 0; x < z.space->size(); ++x) {
        const double m = std::log(local_mass(z.measure, x, eps));
        worst_mass = std::max(worst_mass, std::abs(m - mass_log[n - 1]));
      }
      const bool ok = static_cast<double>(count) == expected && worst_mass <= 1e-12;
      all_ok = all_ok && ok;
      levels.push_back({{"n", n},
                        {"eps", eps},
                        {"greedy_cover", count},
                        {"expected_cover", expected},
                        {"max_log_mass_error", worst_mass},
                        {"ok", ok}});
    }
    r.doc["verify"] = {{"levels", levels}, {"ok", all_ok}};
  }
  return r;
}

Result run_inhomogeneous(const Options& o) {
  if (o.inhomogeneous.empty()) throw DomainError("--inhomogeneous is required");
  const Source s = load_source(o, false);
  const double tail_fraction = s.config.at("tail_fraction").get<double>();
  const auto bounds = inhomogeneous_orders(*s.spec, s.depth, tail_fraction);
  const auto lambda = lambda_sequence(*s.spec, std::numbers::e, s.depth);

  Result r;
  json c = config_of(o, {});
  c["source"] = {{"kind", s.kind}, {"params", s.config}};
  r.doc["config"] = c;
  r.doc["lower"] = bounds.lower;
  r.doc["upper"] = bounds.upper;
  r.doc["witnesses"] = bounds.witnesses;
  r.doc["values"] = bounds.values;
  r.doc["lambda"] = lambda;
  r.table.columns = {"n", "lambda"};
  for (std::size_t i = 0; i < bounds.witnesses.size(); ++i) {
    r.table.rows.push_back({bounds.witnesses[i], bounds.values[i]});
  }
  return r;
}

}  // namespace scales::cli
