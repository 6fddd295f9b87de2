#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "commands.hpp"

namespace scales::cli {

namespace {

double to_double(const std::string& text, const char* what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw DomainError(std::string(what) + ": '" + text + "' is not a number");
  }
  return v;
}

std::size_t to_count(const std::string& text, const char* what) {
  const double v = to_double(text, what);
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw DomainError(std::string(what) + ": '" + text + "' is not a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> product_grid(const ProductSpaceSpec& spec, std::size_t depth) {
  std::vector<double> eps;
  for (std::size_t n = 1; n <= depth; ++n) eps.push_back(std::exp(spec.log_eps(n)));
  return eps;
}

}  // namespace

ScalingFamily parse_scaling(const std::string& text) {
  const auto [p, q] = parse_pair(text, "--scaling");
  if (p != std::floor(p) || q != std::floor(q)) throw DomainError("--scaling takes integers p,q");
  return ScalingFamily(static_cast<int>(p), static_cast<int>(q));
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw DomainError(std::string(what) + " expects two comma-separated values");
  return {to_double(parts[0], what), to_double(parts[1], what)};
}

std::vector<double> parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError("--grid expects start:stop:factor");
  const double start = to_double(parts[0], "--grid");
  const double stop = to_double(parts[1], "--grid");
  const double factor = to_double(parts[2], "--grid");
  if (!(factor > 0.0 && factor < 1.0)) throw DomainError("--grid factor must lie in (0,1)");
  if (!(start > 0.0) || !(stop > 0.0) || stop > start) {
    throw DomainError("--grid needs 0 < stop <= start");
  }
  std::vector<double> eps;
  // Relative slack so that stop values such as 2^-12 are hit despite rounding.
  for (double e = start; e >= stop * (1.0 - 1e-9); e *= factor) eps.push_back(e);
  return eps;
}

std::map<std::string, std::string> parse_tokens(const std::vector<std::string>& tokens,
                                                const std::set<std::string>& allowed,
                                                const char* option) {
  std::map<std::string, std::string> out;
  for (const auto& token : tokens) {
    for (const auto& item : split(token, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw DomainError(std::string(option) + ": expected key=value, got '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      if (!allowed.count(key)) {
        throw DomainError(std::string(option) + ": unknown key '" + key + "'");
      }
      out[key] = item.substr(eq + 1);
    }
  }
  return out;
}

RatioForm parse_form(const std::string& text) {
  if (text == "origin") return RatioForm::origin;
  if (text == "anchored") return RatioForm::anchored;
  if (text == "regression") return RatioForm::regression;
  throw DomainError("--form must be origin, anchored or regression");
}

ThresholdOptions threshold_options(const Options& o) {
  ThresholdOptions t;
  std::tie(t.lo, t.hi) = parse_pair(o.alpha_bracket, "--alpha-bracket");
  return t;
}

std::shared_ptr<const FiniteMetricSpace> load_space(const Options& o) {
  if (o.input.empty()) throw DomainError("--input is required");
  if (!std::filesystem::is_regular_file(o.input)) throw IoError("cannot open " + o.input);
  const Norm norm = o.norm == "sup" ? Norm::sup : Norm::euclidean;
  if (o.input_kind == "matrix") {
    return std::make_shared<const FiniteMetricSpace>(load_distance_matrix_csv(o.input));
  }
  if (o.input_kind == "points") {
    auto table = load_points_csv(o.input);
    return std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::from_points(table.coords, norm, table.labels));
  }
  try {
    return std::make_shared<const FiniteMetricSpace>(load_distance_matrix_csv(o.input));
  } catch (const Error& matrix_error) {
    try {
      auto table = load_points_csv(o.input);
      return std::make_shared<const FiniteMetricSpace>(
          FiniteMetricSpace::from_points(table.coords, norm, table.labels));
    } catch (const Error& points_error) {
      throw DomainError(std::string("cannot read input as a distance matrix (") +
                        matrix_error.what() + ") or as points (" + points_error.what() + ")");
    }
  }
}

Source load_source(const Options& o, bool materialize_products) {
  Source s;
  const int given = !o.input.empty() + !o.product.empty() + !o.inhomogeneous.empty() +
                    !o.cube.empty();
  if (given != 1) {
    throw DomainError("give exactly one of --input, --product, --inhomogeneous, --cube");
  }
  if (!o.input.empty()) {
    s.kind = "input";
    s.config = {{"path", o.input}, {"kind", o.input_kind}, {"norm", o.norm}};
    if (!std::filesystem::is_regular_file(o.input)) throw IoError("cannot open " + o.input);
    std::optional<std::vector<double>> weights;
    if (o.input_kind != "matrix") {
      try {
        auto table = load_points_csv(o.input);
        if (o.input_kind == "points" || table.weights) {
          const Norm norm = o.norm == "sup" ? Norm::sup : Norm::euclidean;
          s.space = std::make_shared<const FiniteMetricSpace>(
              FiniteMetricSpace::from_points(table.coords, norm, table.labels));
          weights = table.weights;
        }
      } catch (const Error&) {
        if (o.input_kind == "points") throw;
      }
    }
    if (!s.space) s.space = load_space(o);
    s.measure = weights ? EmpiricalMeasure(s.space, *weights) : EmpiricalMeasure::uniform(s.space);
    return s;
  }
  if (!o.product.empty()) {
    auto kv = parse_tokens(o.product, {"cards", "depth"}, "--product");
    const double cards = kv.count("cards") ? to_double(kv["cards"], "cards") : 2.0;
    s.depth = kv.count("depth") ? to_count(kv["depth"], "depth") : 10;
    if (!(cards >= 2.0) || cards != std::floor(cards)) throw DomainError("cards must be an integer >= 2");
    if (s.depth < 1) throw DomainError("depth must be at least 1");
    s.kind = "product";
    s.config = {{"cards", cards}, {"depth", s.depth}};
    s.spec = ProductSpaceSpec::constant(cards, s.depth);
  } else if (!o.inhomogeneous.empty()) {
    auto kv = parse_tokens(o.inhomogeneous, {"alpha", "beta", "n_max", "tail_fraction"}, "--inhomogeneous");
    const double alpha = kv.count("alpha") ? to_double(kv["alpha"], "alpha") : 2.0;
    const double beta = kv.count("beta") ? to_double(kv["beta"], "beta") : 1.0;
    s.depth = kv.count("n_max") ? to_count(kv["n_max"], "n_max") : 2187;
    s.kind = "inhomogeneous";
    const double tail_fraction = kv.count("tail_fraction") ? to_double(kv["tail_fraction"], "tail_fraction") : 0.5;
    s.config = {{"alpha", alpha}, {"beta", beta}, {"n_max", s.depth}, {"tail_fraction", tail_fraction}};
    s.spec = inhomogeneous_spec(alpha, beta, s.depth);
  } else {
    auto kv = parse_tokens(o.cube, {"n", "dim", "seed"}, "--cube");
    const std::size_t n = kv.count("n") ? to_count(kv["n"], "n") : 4096;
    const std::size_t dim = kv.count("dim") ? to_count(kv["dim"], "dim") : 1;
    const std::uint64_t seed = kv.count("seed") ? to_count(kv["seed"], "seed") : o.seed;
    if (n < 1 || dim < 1) throw DomainError("--cube needs n >= 1 and dim >= 1");
    s.kind = "cube";
    s.config = {{"n", n}, {"dim", dim}, {"seed", seed}};
    s.space = std::make_shared<const FiniteMetricSpace>(
        FiniteMetricSpace::from_points(uniform_cube_sample(n, dim, seed), Norm::euclidean));
    s.measure = EmpiricalMeasure::uniform(s.space);
    return s;
  }
  if (materialize_products) {
    if (s.spec->params()) throw SizeError("the inhomogeneous product cannot be materialized");
    auto z = materialize(*s.spec, s.depth);
    s.space = z.space;
    s.measure = z.measure;
  }
  return s;
}

std::vector<double> source_grid(const Options& o, const Source& source) {
  if (!o.grid.empty()) return parse_grid(o.grid);
  if (source.spec) return product_grid(*source.spec, source.depth);
  if (source.kind == "cube") return parse_grid("0.4:0.00078125:0.5");
  // Ten halvings from 0.4 * min(1, diameter), stopping at half the smallest gap.
  const double diam = source.space->diameter();
  const double gap = source.space->min_positive_distance();
  std::vector<double> eps;
  for (double e = 0.4 * std::min(1.0, diam); eps.size() < 10; e *= 0.5) {
    if (eps.size() >= 4 && e < 0.5 * gap) break;
    eps.push_back(e);
  }
  return eps;
}

RatioForm source_form(const Options& o, const Source& source) {
  if (!o.form.empty()) return parse_form(o.form);
  return source.spec ? RatioForm::origin : RatioForm::regression;
}

json to_json(const ScaleEstimate& e) {
  json extra = json::object();
  for (const auto& [k, v] : e.extra) extra[k] = v;
  return {{"lower", e.lower},
          {"upper", e.upper},
          {"method", e.method},
          {"eps", e.eps},
          {"sequence", e.sequence},
          {"window", e.window},
          {"resolution", e.resolution},
          {"heuristic_upper_bound", e.heuristic_upper_bound},
          {"degenerate", e.degenerate},
          {"inconclusive_probes", e.inconclusive_probes},
          {"extra", extra}};
}

json to_json(const QuantityMap& q) {
  json out = json::object();
  for (const auto& [name, est] : q) out[name] = to_json(est);
  return out;
}

json to_json(const TheoremReport& r) {
  json arrows = json::array();
  for (const auto& a : r.arrows) {
    arrows.push_back({{"name", a.arrow.name},
                      {"lhs", a.arrow.lhs},
                      {"rhs", a.arrow.rhs},
                      {"kind", a.arrow.kind == ArrowKind::equality ? "equality" : "inequality"},
                      {"rhs_is_oracle", a.arrow.rhs_is_oracle},
                      {"lhs_lower", a.lhs_lower},
                      {"lhs_upper", a.lhs_upper},
                      {"rhs_lower", a.rhs_lower},
                      {"rhs_upper", a.rhs_upper},
                      {"margin", a.margin},
                      {"status", to_string(a.status)}});
  }
  return {{"tolerance", r.tolerance},
          {"violations", r.violations},
          {"skipped", r.skipped},
          {"arrows", arrows}};
}

json point_labels(const FiniteMetricSpace& space, const std::vector<std::size_t>& indices) {
  json out = json::array();
  for (std::size_t i : indices) out.push_back(space.labels().at(i));
  return out;
}

json config_of(const Options& o, const std::vector<std::string>& keys) {
  const json all = {{"seed", o.seed},
                    {"scaling", o.scaling},
                    {"alpha_bracket", o.alpha_bracket},
                    {"grid", o.grid},
                    {"tail", o.tail},
                    {"tolerance", o.tolerance},
                    {"form", o.form},
                    {"restarts", o.restarts},
                    {"no_quantization", o.no_quantization},
                    {"input", o.input},
                    {"input_kind", o.input_kind},
                    {"norm", o.norm},
                    {"eps", o.eps},
                    {"n", o.n},
                    {"method", o.method},
                    {"point", o.point},
                    {"cross_check", o.cross_check},
                    {"C", o.C},
                    {"n_max", o.n_max},
                    {"verify", o.verify},
                    {"holder", o.holder},
                    {"depth", o.depth},
                    {"grid_step", o.grid_step},
                    {"pairs", o.pairs},
                    {"m", o.m},
                    {"paths", o.paths},
                    {"coarse_factor", o.coarse_factor},
                    {"source", o.source},
                    {"model", o.model},
                    {"save", o.save},
                    {"load", o.load},
                    {"alpha", o.alpha},
                    {"beta", o.beta},
                    {"lambda", o.lambda},
                    {"window", o.window},
                    {"threshold", o.threshold},
                    {"band", o.band}};
  json out = {{"command", o.command}, {"format", o.format}};
  for (const auto& k : keys) out[k] = all.at(k);
  return out;
}

}  // namespace scales::cli
