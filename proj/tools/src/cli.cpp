#include "scales_cli/cli.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "output.hpp"

namespace scales::cli {

namespace {

using Runner = Result (*)(const Options&);

struct Command {
  const char* name;
  const char* help;
  Runner run;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"cover", "Covering number of a finite metric space", run_cover},
      {"pack", "Packing number of a finite metric space", run_pack},
      {"quantize", "Best n-median or quantization numbers of a measure", run_quantize},
      {"local", "Local scales of a measure", run_local},
      {"report", "All measure scales with their arrows", run_report},
      {"product", "Exact covering data of a constant product space", run_product},
      {"inhomogeneous", "Lower and upper orders of the inhomogeneous product", run_inhomogeneous},
      {"lipschitz-order", "Order of the Lipschitz ball from lattice net counts", run_lipschitz_order},
      {"embed-check", "Separation and regularity of the label embedding", run_embed_check},
      {"wiener-smallball", "Monte Carlo small-ball probabilities against the series",
       run_wiener_smallball},
      {"wiener-order", "Small-ball exponent fit", run_wiener_order},
      {"wiener-quant", "Quantization numbers of sampled Brownian paths", run_wiener_quant},
      {"check-theorems", "Grade every comparison arrow; exit 2 on a violation",
       run_check_theorems},
      {"check-scaling", "Numerical check of the scaling condition", run_check_scaling},
  };
  return list;
}

void add_output(CLI::App* sub, Options& o, bool text) {
  std::vector<std::string> formats = {"json", "csv"};
  if (text) formats.push_back("text");
  sub->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  sub->add_option("--out", o.out, "Write output to this path instead of stdout");
  sub->add_option("--threads", o.threads,
                  "Worker threads (default: SCALES_THREADS, then all cores)");
}

void add_source(CLI::App* sub, Options& o) {
  auto* input = sub->add_option("--input", o.input, "Distance-matrix or point CSV");
  sub->add_option("--input-kind", o.input_kind, "How to read --input")
      ->check(CLI::IsMember({"auto", "matrix", "points"}))
      ->capture_default_str();
  sub->add_option("--norm", o.norm, "Norm for point input")
      ->check(CLI::IsMember({"euclidean", "sup"}))
      ->capture_default_str();
  auto* product = sub->add_option("--product", o.product, "Constant product: cards=2 depth=10")
                      ->expected(1, 4);
  auto* inhom = sub->add_option("--inhomogeneous", o.inhomogeneous,
                                "Inhomogeneous product: alpha=2 beta=1 n_max=2187 tail_fraction=0.5")
                    ->expected(1, 4);
  auto* cube = sub->add_option("--cube", o.cube, "Uniform cube sample: n=4096 dim=1 seed=<--seed>")
                   ->expected(1, 3);
  input->excludes(product)->excludes(inhom)->excludes(cube);
  product->excludes(inhom)->excludes(cube);
  inhom->excludes(cube);
}

void add_estimation(CLI::App* sub, Options& o) {
  sub->add_option("--scaling", o.scaling, "Scaling family p,q (1,1 dimension, 2,1 order)")
      ->capture_default_str();
  sub->add_option("--alpha-bracket", o.alpha_bracket, "Initial alpha bracket lo,hi")
      ->capture_default_str();
  sub->add_option("--grid", o.grid,
                  "eps grid start:stop:factor (default: e^-n for products, "
                  "0.4:0.00078125:0.5 for cubes, ten halvings from 0.4*min(1,diam) for input)");
  sub->add_option("--tail", o.tail, "Tail window of the ratio sequences")->capture_default_str();
  sub->add_option("--form", o.form,
                  "Ratio form: origin, anchored or regression "
                  "(default: origin for products, regression otherwise)")
      ->check(CLI::IsMember({"origin", "anchored", "regression"}));
}

void add_quantizer(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sub->add_option("--restarts", o.restarts, "Local search restarts")->capture_default_str();
}

void configure(CLI::App& app, const std::string& name, CLI::App* sub, Options& o) {
  const bool theorems = name == "check-theorems";
  add_output(sub, o, theorems);

  if (name == "cover" || name == "pack") {
    sub->add_option("--input", o.input, "Distance-matrix or point CSV")->required();
    sub->add_option("--input-kind", o.input_kind, "How to read --input")
        ->check(CLI::IsMember({"auto", "matrix", "points"}))
        ->capture_default_str();
    sub->add_option("--norm", o.norm, "Norm for point input")
        ->check(CLI::IsMember({"euclidean", "sup"}))
        ->capture_default_str();
    sub->add_option("--eps", o.eps, "Radius")->required()->expected(1);
    sub->add_option("--method", o.method, "exact, greedy or auto (exact up to 24 points)")
        ->check(CLI::IsMember({"auto", "exact", "greedy"}))
        ->capture_default_str();
  } else if (name == "quantize") {
    add_source(sub, o);
    add_quantizer(sub, o);
    sub->add_option("--n", o.n, "Number of centres");
    sub->add_option("--eps", o.eps, "Quantization levels")->delimiter(',');
  } else if (name == "local") {
    add_source(sub, o);
    add_estimation(sub, o);
    sub->add_option("--seed", o.seed, "Seed for --cube")->capture_default_str();
    sub->add_option("--point", o.point, "Label or index (default: every support point)");
    sub->add_flag("--cross-check", o.cross_check, "Cross-check with threshold bisection");
  } else if (name == "report" || theorems) {
    add_source(sub, o);
    add_estimation(sub, o);
    add_quantizer(sub, o);
    sub->add_option("--tolerance", o.tolerance, "Arrow tolerance")->capture_default_str();
    sub->add_flag("--no-quantization", o.no_quantization, "Skip the quantization numbers");
    if (theorems) {
      sub->add_option("--band", o.band, "Every quantity must lie in lo,hi");
    }
  } else if (name == "product") {
    sub->add_option("--product", o.product, "cards=2 depth=10")->required()->expected(1, 2);
    sub->add_option("--scaling", o.scaling, "Scaling family p,q")->capture_default_str();
    sub->add_option("--C", o.C, "Base of the lambda sequence (default e)");
    sub->add_option("--n-max", o.n_max, "Sequence length (default: depth)");
    sub->add_flag("--verify", o.verify, "Check greedy covers and ball masses on the materialized space");
  } else if (name == "inhomogeneous") {
    sub->add_option("--inhomogeneous", o.inhomogeneous, "alpha=2 beta=1 n_max=2187 tail_fraction=0.5")
        ->required()
        ->expected(1, 4);
  } else if (name == "lipschitz-order") {
    sub->add_option("--scaling", o.scaling, "Scaling family p,q (default 2,1)");
    sub->add_option("--grid", o.grid, "eps grid start:stop:factor (default 0.125:0.000244140625:0.5)");
    sub->add_option("--tail", o.tail, "Tail window")->capture_default_str();
  } else if (name == "embed-check") {
    sub->add_option("--holder", o.holder, "k,alpha of the Hölder class")->capture_default_str();
    sub->add_option("--depth", o.depth, "Label depth")->capture_default_str();
    sub->add_option("--grid-step", o.grid_step, "Sampling step on [0,1]")->capture_default_str();
    sub->add_option("--pairs", o.pairs, "Number of seeded label pairs")->capture_default_str();
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  } else if (name == "wiener-smallball" || name == "wiener-order") {
    sub->add_option("--eps", o.eps,
                    name == "wiener-smallball" ? "Ball radii (default 0.5,0.7)"
                                               : "Ball radii (default 0.4,0.45,...,0.8)")
        ->delimiter(',');
    sub->add_option("--m", o.m, "Grid steps per path")->capture_default_str();
    sub->add_option("--paths", o.paths, "Number of paths")->capture_default_str();
    sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    if (name == "wiener-smallball") {
      sub->add_option("--coarse-factor", o.coarse_factor, "Stride of the coarse grid for the allowance")
          ->capture_default_str();
    } else {
      sub->add_option("--source", o.source, "series or mc")
          ->check(CLI::IsMember({"series", "mc"}))
          ->capture_default_str();
      sub->add_option("--model", o.model, "power_law or power_law_offset")
          ->check(CLI::IsMember({"power_law", "power_law_offset"}))
          ->capture_default_str();
    }
  } else if (name == "wiener-quant") {
    sub->add_option("--eps", o.eps, "Quantization levels (default 1,0.8,0.6)")->delimiter(',');
    sub->add_option("--m", o.m, "Grid steps per path (default 256)");
    sub->add_option("--paths", o.paths, "Number of paths (default 2048)");
    add_quantizer(sub, o);
    sub->add_option("--save", o.save, "Write the sampled ensemble here");
    sub->add_option("--load", o.load, "Read the ensemble instead of sampling");
  } else if (name == "check-scaling") {
    sub->add_option("--scaling", o.scaling, "Scaling family p,q")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "alpha > beta")->capture_default_str();
    sub->add_option("--beta", o.beta, "beta > 0")->capture_default_str();
    sub->add_option("--lambda", o.lambda, "lambda > 1")->capture_default_str();
    sub->add_option("--grid", o.grid, "eps grid start:stop:factor (default 0.1:1e-30:0.1)");
    sub->add_option("--window", o.window, "Tail window")->capture_default_str();
    sub->add_option("--threshold", o.threshold, "Tail threshold")->capture_default_str();
  }
  (void)app;
}

// Defaults that differ between subcommands.
void apply_defaults(const CLI::App* sub, Options& o) {
  auto given = [sub](const char* opt) { return sub->count(opt) > 0; };
  if (o.command == "lipschitz-order" && !given("--scaling")) o.scaling = "2,1";
  if (o.command == "wiener-smallball" && !given("--eps")) o.eps = {0.5, 0.7};
  if (o.command == "wiener-order" && !given("--eps")) {
    o.eps.clear();
    for (int i = 0; i <= 8; ++i) o.eps.push_back(0.4 + 0.05 * i);
  }
  if (o.command == "wiener-quant") {
    if (!given("--eps")) o.eps = {1.0, 0.8, 0.6};
    if (!given("--m")) o.m = 256;
    if (!given("--paths")) o.paths = 2048;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Scale estimates for finite metric spaces, measures and model spaces"};
  app.require_subcommand(1, 1);
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : commands()) {
    auto* sub = app.add_subcommand(c.name, c.help);
    configure(app, c.name, sub, o);
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const Command* chosen = nullptr;
  for (const auto& c : commands()) {
    if (subs[c.name]->parsed()) chosen = &c;
  }
  o.command = chosen->name;
  apply_defaults(subs[o.command], o);
  if (o.threads > 0) set_thread_count(o.threads);

  Result result;
  try {
    result = chosen->run(o);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  std::ostringstream buffer;
  if (o.format == "csv") {
    write_csv(result.table, buffer);
  } else if (o.format == "text") {
    buffer << result.text;
  } else {
    write_json(result.doc, buffer);
  }
  if (o.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file || !(file << buffer.str())) {
      err << "error: cannot write " << o.out << "\n";
      return 1;
    }
  }
  return result.exit_code;
}

}  // namespace scales::cli
