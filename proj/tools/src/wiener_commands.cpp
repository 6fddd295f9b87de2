#include <cmath>

#include "commands.hpp"

namespace scales::cli {

namespace {

FitModel parse_model(const std::string& text) {
  if (text == "power_law") return FitModel::power_law;
  if (text == "power_law_offset") return FitModel::power_law_offset;
  throw DomainError("--model must be power_law or power_law_offset");
}

const char* model_name(FitModel m) {
  return m == FitModel::power_law ? "power_law" : "power_law_offset";
}

std::vector<std::size_t> strides(const Options& o) {
  if (o.coarse_factor < 2 || o.m % o.coarse_factor != 0) {
    throw DomainError("--coarse-factor must be at least 2 and divide --m");
  }
  return {1, o.coarse_factor};
}

}  // namespace

Result run_wiener_smallball(const Options& o) {
  const auto maxima = sample_path_maxima(o.m, o.paths, o.seed, strides(o));
  Result r;
  r.doc["config"] = config_of(o, {"eps", "m", "paths", "seed", "coarse_factor"});
  r.table.columns = {"eps", "p_hat", "stderr", "series", "allowance", "agrees"};
  json rows = json::array();
  for (double e : o.eps) {
    const auto mc = smallball_mc(maxima, e, 0);
    const auto ref = refinement_allowance(maxima, e, 0, 1);
    const double series = smallball_series(e);
    const double band = 3.0 * mc.stderr_ + ref.allowance;
    const bool agrees = std::abs(mc.p_hat - series) <= band;
    rows.push_back({{"eps", e},
                    {"p_hat", mc.p_hat},
                    {"stderr", mc.stderr_},
                    {"hits", mc.hits},
                    {"n", mc.n},
                    {"series", series},
                    {"coarse_p_hat", ref.coarse},
                    {"diff_stderr", ref.diff_stderr},
                    {"allowance", ref.allowance},
                    {"band", band},
                    {"agrees", agrees}});
    r.table.rows.push_back({e, mc.p_hat, mc.stderr_, series, ref.allowance, agrees});
  }
  r.doc["estimates"] = rows;
  return r;
}

Result run_wiener_order(const Options& o) {
  const FitModel model = parse_model(o.model);
  std::vector<double> probs;
  json c;
  if (o.source == "series") {
    for (double e : o.eps) probs.push_back(smallball_series(e));
    c = config_of(o, {"eps", "source", "model"});
  } else if (o.source == "mc") {
    const auto maxima = sample_path_maxima(o.m, o.paths, o.seed, {1});
    for (double e : o.eps) probs.push_back(smallball_mc(maxima, e, 0).p_hat);
    c = config_of(o, {"eps", "source", "model", "m", "paths", "seed"});
  } else {
    throw DomainError("--source must be series or mc");
  }
  const auto fit = smallball_order_fit(o.eps, probs, model);
  Result r;
  r.doc["config"] = c;
  r.doc["eps"] = o.eps;
  r.doc["probabilities"] = probs;
  r.doc["fit"] = {{"model", model_name(fit.model)},
                  {"gamma", fit.gamma},
                  {"kappa_hat", fit.kappa_hat},
                  {"offset", fit.offset},
                  {"rss", fit.rss}};
  r.table.columns = {"eps", "probability"};
  for (std::size_t i = 0; i < probs.size(); ++i) r.table.rows.push_back({o.eps[i], probs[i]});
  return r;
}

Result run_wiener_quant(const Options& o) {
  const PathEnsemble ensemble = o.load.empty() ? sample_paths(o.m, o.paths, o.seed)
                                               : load_ensemble(o.load);
  if (!o.save.empty()) save_ensemble(ensemble, o.save);
  QuantizerOptions q = MeasureReportConfig{}.quantizer;
  q.seed = o.seed;
  q.restarts = o.restarts;
  const auto trend = path_quantization_trend(ensemble, o.eps, q);

  Result r;
  json c = config_of(o, {"eps", "seed", "restarts", "load"});
  c["m"] = ensemble.m;
  c["paths"] = ensemble.n_paths;
  c["ensemble_seed"] = ensemble.seed;
  r.doc["config"] = c;
  r.doc["eps"] = trend.eps;
  r.doc["count"] = trend.count;
  r.doc["exact"] = trend.exact;
  r.doc["scaled_log"] = trend.scaled_log;
  r.doc["nonincreasing"] = trend.nonincreasing;
  r.doc["scaled_increasing"] = trend.scaled_increasing;
  r.table.columns = {"eps", "count", "exact", "scaled_log"};
  for (std::size_t i = 0; i < trend.eps.size(); ++i) {
    r.table.rows.push_back({trend.eps[i], trend.count[i], static_cast<bool>(trend.exact[i]),
                            trend.scaled_log[i]});
  }
  return r;
}

}  // namespace scales::cli
