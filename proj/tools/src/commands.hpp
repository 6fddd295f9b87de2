#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "scales/scales.hpp"

namespace scales::cli {

using json = nlohmann::json;

struct Options {
  std::string command;

  std::string format = "json";
  std::string out;
  unsigned threads = 0;

  std::uint64_t seed = 0;
  std::string scaling = "1,1";
  std::string alpha_bracket = "0,4";
  std::string grid;
  std::size_t tail = 3;
  double tolerance = 0.15;
  std::string form;
  int restarts = 20;
  bool no_quantization = false;

  std::string input;
  std::string input_kind = "auto";
  std::string norm = "euclidean";
  std::vector<std::string> product;
  std::vector<std::string> inhomogeneous;
  std::vector<std::string> cube;

  std::vector<double> eps;
  std::size_t n = 0;
  std::string method = "auto";
  std::string point;
  bool cross_check = false;

  double C = 0.0;
  std::size_t n_max = 0;
  bool verify = false;

  std::string holder = "0,1";
  std::size_t depth = 3;
  double grid_step = 0.000244140625;
  std::size_t pairs = 200;

  std::size_t m = 4096;
  std::size_t paths = 100000;
  std::size_t coarse_factor = 4;
  std::string source = "series";
  std::string model = "power_law";
  std::string save;
  std::string load;

  double alpha = 2.0;
  double beta = 1.0;
  double lambda = 2.0;
  std::size_t window = 8;
  double threshold = 1e-3;
  std::string band;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Result {
  json doc = json::object();
  Table table;
  std::string text;
  int exit_code = 0;
};

// Parsing helpers.
ScalingFamily parse_scaling(const std::string& text);
std::pair<double, double> parse_pair(const std::string& text, const char* what);
// "start:stop:factor" -> start, start*factor, ... down to stop.
std::vector<double> parse_grid(const std::string& text);
std::map<std::string, std::string> parse_tokens(const std::vector<std::string>& tokens,
                                                const std::set<std::string>& allowed,
                                                const char* option);
RatioForm parse_form(const std::string& text);
ThresholdOptions threshold_options(const Options& o);

// The data a measure-level command runs on.
struct Source {
  std::string kind;  // input, product, inhomogeneous or cube
  json config = json::object();
  std::shared_ptr<const FiniteMetricSpace> space;
  std::optional<EmpiricalMeasure> measure;
  std::optional<ProductSpaceSpec> spec;
  std::size_t depth = 0;
};

// Products are materialized only when `materialize_products` is set.
Source load_source(const Options& o, bool materialize_products);
std::shared_ptr<const FiniteMetricSpace> load_space(const Options& o);
std::vector<double> source_grid(const Options& o, const Source& source);
RatioForm source_form(const Options& o, const Source& source);

json to_json(const ScaleEstimate& e);
json to_json(const QuantityMap& q);
json to_json(const TheoremReport& r);
json point_labels(const FiniteMetricSpace& space, const std::vector<std::size_t>& indices);

// Options echoed back under "config"; only the listed keys are kept.
json config_of(const Options& o, const std::vector<std::string>& keys);

Result run_cover(const Options& o);
Result run_pack(const Options& o);
Result run_quantize(const Options& o);
Result run_local(const Options& o);
Result run_report(const Options& o);
Result run_check_theorems(const Options& o);
Result run_check_scaling(const Options& o);
Result run_product(const Options& o);
Result run_inhomogeneous(const Options& o);
Result run_lipschitz_order(const Options& o);
Result run_embed_check(const Options& o);
Result run_wiener_smallball(const Options& o);
Result run_wiener_order(const Options& o);
Result run_wiener_quant(const Options& o);

}  // namespace scales::cli
