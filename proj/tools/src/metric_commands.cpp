#include <algorithm>
#include <cmath>
#include <sstream>

#include "commands.hpp"

namespace scales::cli {

namespace {

bool use_exact(const Options& o, const FiniteMetricSpace& space) {
  if (o.method == "exact") return true;
  if (o.method == "greedy") return false;
  return space.size() <= exact_search_limit;
}

std::size_t resolve_point(const Source& s, const std::string& point) {
  const auto& labels = s.space->labels();
  if (auto it = std::find(labels.begin(), labels.end(), point); it != labels.end()) {
    return static_cast<std::size_t>(it - labels.begin());
  }
  std::size_t used = 0;
  unsigned long long idx = 0;
  try {
    idx = std::stoull(point, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != point.size() || idx >= labels.size()) {
    throw IndexError("--point '" + point + "' is neither a label nor an index");
  }
  return static_cast<std::size_t>(idx);
}

MeasureReportConfig report_config(const Options& o, const Source& s) {
  MeasureReportConfig cfg;
  cfg.tail_window = o.tail;
  cfg.form = source_form(o, s);
  cfg.quantization = !o.no_quantization;
  cfg.quantizer.seed = o.seed;
  cfg.quantizer.restarts = o.restarts;
  cfg.threshold = threshold_options(o);
  return cfg;
}

json source_config(const Options& o, const Source& s, const std::vector<std::string>& keys) {
  json cfg = config_of(o, keys);
  cfg["source"] = {{"kind", s.kind}, {"params", s.config}};
  return cfg;
}

Table quantity_table(const QuantityMap& q, const QuantityMap& oracle) {
  Table t;
  t.columns = {"quantity", "lower", "upper", "method", "heuristic_upper_bound", "oracle_lower",
               "oracle_upper"};
  for (const auto& name : quantity_names()) {
    auto it = q.find(name);
    if (it == q.end()) continue;
    const auto& e = it->second;
    auto o = oracle.find(name);
    t.rows.push_back({name, e.lower, e.upper, e.method, e.heuristic_upper_bound,
                      o == oracle.end() ? json() : json(o->second.lower),
                      o == oracle.end() ? json() : json(o->second.upper)});
  }
  return t;
}

Result count_result(const Options& o, bool covering) {
  auto space = load_space(o);
  const double eps = o.eps.at(0);
  const bool exact = use_exact(o, *space);
  std::vector<std::size_t> centers;
  if (covering) {
    centers = exact ? minimal_cover(*space, eps).centers : greedy_cover(*space, eps).centers;
  } else {
    centers = exact ? maximum_packing(*space, eps) : greedy_packing(*space, eps);
  }
  Result r;
  r.doc["N"] = centers.size();
  r.doc["exact"] = exact;
  r.doc["eps"] = eps;
  r.doc["points"] = space->size();
  r.doc["centers"] = centers;
  r.doc["labels"] = point_labels(*space, centers);
  r.doc["config"] = config_of(o, {"input", "input_kind", "norm", "eps", "method"});
  r.table.columns = {"eps", "N", "exact"};
  r.table.rows.push_back({eps, centers.size(), exact});
  return r;
}

}  // namespace

Result run_cover(const Options& o) { return count_result(o, true); }

Result run_pack(const Options& o) { return count_result(o, false); }

Result run_quantize(const Options& o) {
  const Source s = load_source(o, true);
  if ((o.n > 0) == !o.eps.empty()) throw DomainError("give exactly one of --n and --eps");
  QuantizerOptions q;
  q.seed = o.seed;
  q.restarts = o.restarts;
  Result r;
  r.doc["config"] = source_config(o, s, {"seed", "restarts", "n", "eps"});
  r.doc["support"] = s.measure->support().size();
  if (o.n > 0) {
    const auto best = best_n_median(*s.measure, o.n, q);
    r.doc["n"] = o.n;
    r.doc["cost"] = best.cost;
    r.doc["exact"] = best.exact;
    r.doc["restart"] = best.restart;
    r.doc["centers"] = best.centers;
    r.doc["labels"] = point_labels(*s.space, best.centers);
    r.table.columns = {"n", "cost", "exact"};
    r.table.rows.push_back({o.n, best.cost, best.exact});
    return r;
  }
  r.table.columns = {"eps", "Q", "exact", "cost"};
  json rows = json::array();
  for (double e : o.eps) {
    const auto count = quantization_number(*s.measure, e, q);
    rows.push_back({{"eps", e}, {"Q", count.n}, {"exact", count.exact}, {"cost", count.cost}});
    r.table.rows.push_back({e, count.n, count.exact, count.cost});
  }
  r.doc["counts"] = rows;
  return r;
}

Result run_local(const Options& o) {
  const Source s = load_source(o, true);
  const ScalingFamily family = parse_scaling(o.scaling);
  const auto grid = source_grid(o, s);
  LocalScaleOptions lo;
  lo.tail_window = o.tail;
  lo.form = source_form(o, s);
  lo.cross_check = o.cross_check;
  lo.threshold = threshold_options(o);

  std::vector<std::size_t> points;
  if (o.point.empty()) {
    points = s.measure->support();
  } else {
    points.push_back(resolve_point(s, o.point));
  }
  std::vector<ScaleEstimate> estimates(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    estimates[i] = local_scale(*s.measure, points[i], family, grid, lo);
  });

  Result r;
  json cfg = source_config(o, s, {"scaling", "alpha_bracket", "grid", "tail", "cross_check", "point"});
  cfg["grid_values"] = grid;
  cfg["form"] = to_string(lo.form);
  r.doc["config"] = cfg;
  r.table.columns = {"index", "label", "weight", "lower", "upper", "degenerate"};
  json rows = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& e = estimates[i];
    const std::size_t p = points[i];
    json row = {{"index", p},
                {"label", s.space->labels()[p]},
                {"weight", s.measure->weights()[p]},
                {"lower", e.lower},
                {"upper", e.upper},
                {"degenerate", e.degenerate}};
    if (!o.point.empty()) row["estimate"] = to_json(e);
    rows.push_back(row);
    r.table.rows.push_back({p, s.space->labels()[p], s.measure->weights()[p], e.lower, e.upper,
                            e.degenerate});
  }
  r.doc["points"] = rows;
  return r;
}

Result run_report(const Options& o) {
  const Source s = load_source(o, true);
  const ScalingFamily family = parse_scaling(o.scaling);
  const auto grid = source_grid(o, s);
  const MeasureReportConfig cfg = report_config(o, s);
  const auto report = measure_scale_report(*s.measure, family, grid, cfg);

  Result r;
  json c = source_config(o, s, {"scaling", "alpha_bracket", "grid", "tail", "tolerance", "seed",
                                "restarts", "no_quantization"});
  c["grid_values"] = grid;
  c["form"] = to_string(cfg.form);
  r.doc["config"] = c;
  r.doc["eps"] = report.eps;
  r.doc["cover_lower"] = report.cover_lower;
  r.doc["cover_upper"] = report.cover_upper;
  r.doc["cover_exact"] = report.cover_exact;
  r.doc["quantization"] = report.quantization;
  r.doc["quantization_exact"] = report.quantization_exact;
  r.doc["quantities"] = to_json(report.quantities);
  r.doc["errors"] = report.errors;
  r.doc["arrows"] = to_json(grade_quantities(report.quantities, {}, o.tolerance));
  json points = json::array();
  for (const auto& p : report.points) {
    points.push_back({{"index", p.index},
                      {"weight", p.weight},
                      {"lower", p.lower},
                      {"upper", p.upper},
                      {"degenerate", p.degenerate}});
  }
  r.doc["points"] = points;
  r.table = quantity_table(report.quantities, {});
  return r;
}

Result run_check_theorems(const Options& o) {
  const ScalingFamily family = parse_scaling(o.scaling);
  const Source s = load_source(o, false);
  AssembleConfig cfg;
  cfg.measure = report_config(o, s);

  EstimateBundle bundle = [&] {
    if (s.spec) return assemble(*s.spec, family, s.depth, cfg);
    const auto grid = source_grid(o, s);
    return assemble(*s.measure, family, grid, cfg);
  }();
  const TheoremReport report = grade(bundle, o.tolerance);

  json band_failures = json::array();
  std::optional<std::pair<double, double>> band;
  if (!o.band.empty()) {
    band = parse_pair(o.band, "--band");
    for (const auto& [name, e] : bundle.quantities) {
      if (e.lower < band->first || e.upper > band->second) band_failures.push_back(name);
    }
  }

  Result r;
  json c = source_config(o, s, {"scaling", "alpha_bracket", "grid", "tail", "tolerance", "seed",
                                "restarts", "no_quantization", "band"});
  c["grid_values"] = bundle.eps;
  c["form"] = to_string(cfg.measure.form);
  r.doc["config"] = c;
  r.doc["source"] = bundle.source;
  r.doc["quantities"] = to_json(bundle.quantities);
  r.doc["oracle"] = to_json(bundle.oracle);
  r.doc["errors"] = bundle.errors;
  r.doc["report"] = to_json(report);
  r.doc["band_failures"] = band_failures;
  r.doc["violations"] = report.violations + band_failures.size();

  r.table.columns = {"arrow", "lhs", "rhs", "kind", "lhs_lower", "lhs_upper", "rhs_lower",
                     "rhs_upper", "margin", "status"};
  for (const auto& a : report.arrows) {
    r.table.rows.push_back({a.arrow.name, a.arrow.lhs, a.arrow.rhs,
                            a.arrow.kind == ArrowKind::equality ? "equality" : "inequality",
                            a.lhs_lower, a.lhs_upper, a.rhs_lower, a.rhs_upper, a.margin,
                            to_string(a.status)});
  }

  std::ostringstream text;
  text << render_table(report);
  if (band) {
    text << "band [" << band->first << ", " << band->second << "]: "
         << (band_failures.empty() ? "all quantities inside" : band_failures.dump()) << "\n";
  }
  text << "violations: " << report.violations + band_failures.size()
       << ", skipped: " << report.skipped << "\n";
  r.text = text.str();
  r.exit_code = report.violations + band_failures.size() > 0 ? 2 : 0;
  return r;
}

Result run_check_scaling(const Options& o) {
  const ScalingFamily family = parse_scaling(o.scaling);
  const auto grid = parse_grid(o.grid.empty() ? "0.1:1e-30:0.1" : o.grid);
  const auto rep = check_scaling_condition(family, o.alpha, o.beta, o.lambda, grid, o.window,
                                           o.threshold);
  Result r;
  json c = config_of(o, {"scaling", "grid", "alpha", "beta", "lambda", "window", "threshold"});
  c["grid_values"] = grid;
  r.doc["config"] = c;
  r.doc["holds"] = rep.holds;
  r.doc["lambda_power_ok"] = rep.lambda_power_ok;
  r.doc["power_ok"] = rep.power_ok;
  r.doc["eps"] = rep.eps;
  r.doc["log_ratio_lambda_power"] = rep.log_ratio_lambda_power;
  r.doc["log_ratio_power"] = rep.log_ratio_power;
  r.table.columns = {"eps", "log_ratio_lambda_power", "log_ratio_power"};
  for (std::size_t i = 0; i < rep.eps.size(); ++i) {
    r.table.rows.push_back({rep.eps[i], rep.log_ratio_lambda_power[i], rep.log_ratio_power[i]});
  }
  return r;
}

}  // namespace scales::cli
