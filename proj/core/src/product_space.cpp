#include "scales/product_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "scales/errors.hpp"

namespace scales {

namespace {

double log_add(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

}  // namespace

ProductSpaceSpec::ProductSpaceSpec(std::vector<double> log_log_cards, std::vector<double> log_eps,
                                   std::optional<InhomogeneousParams> params)
    : log_log_cards_(std::move(log_log_cards)),
      log_eps_(std::move(log_eps)),
      params_(params) {
  if (log_log_cards_.empty()) throw DomainError("product spec needs at least one factor");
  if (log_eps_.size() != log_log_cards_.size()) {
    throw DomainError("log_eps and cardinalities must have the same length");
  }
  for (double v : log_log_cards_) {
    if (!std::isfinite(v)) throw DomainError("cardinalities must exceed 1");
  }
  for (std::size_t n = 0; n < log_eps_.size(); ++n) {
    if (!(log_eps_[n] < 0.0) || !std::isfinite(log_eps_[n])) {
      throw DomainError("log_eps entries must be finite and negative");
    }
    if (n > 0) {
      if (!(log_eps_[n] < log_eps_[n - 1])) throw DomainError("log_eps must strictly decrease");
      const double ratio = log_eps_[n] / log_eps_[n - 1];
      if (ratio < 0.5 || ratio > 2.0) {
        throw DomainError("successive log_eps ratio outside [0.5, 2] at n=" +
                          std::to_string(n + 1));
      }
    }
  }
}

ProductSpaceSpec ProductSpaceSpec::from_log_cards(const std::vector<double>& log_cards,
                                                  std::vector<double> log_eps) {
  std::vector<double> ll;
  for (double v : log_cards) {
    if (!(v > 0.0)) throw DomainError("log cardinalities must be positive");
    ll.push_back(std::log(v));
  }
  return ProductSpaceSpec(std::move(ll), std::move(log_eps));
}

ProductSpaceSpec ProductSpaceSpec::constant(double card, std::size_t depth) {
  if (!(card > 1.0)) throw DomainError("cardinality must exceed 1");
  std::vector<double> log_eps;
  for (std::size_t n = 1; n <= depth; ++n) log_eps.push_back(-static_cast<double>(n));
  return from_log_cards(std::vector<double>(depth, std::log(card)), std::move(log_eps));
}

double ProductSpaceSpec::log_card(std::size_t k) const { return std::exp(log_log_card(k)); }

namespace {

void require_prefix(const ProductSpaceSpec& spec, std::size_t n, std::size_t min_n) {
  if (n < min_n || n > spec.depth()) {
    throw RangeError("n=" + std::to_string(n) + " outside [" + std::to_string(min_n) + ", " +
                     std::to_string(spec.depth()) + "]");
  }
}

}  // namespace

double exact_covering_log(const ProductSpaceSpec& spec, std::size_t n) {
  require_prefix(spec, n, 0);
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) sum += spec.log_card(k);
  return sum;
}

double exact_covering_loglog(const ProductSpaceSpec& spec, std::size_t n) {
  require_prefix(spec, n, 1);
  double acc = spec.log_log_card(1);
  for (std::size_t k = 2; k <= n; ++k) acc = log_add(acc, spec.log_log_card(k));
  return acc;
}

double exact_ball_mass_log(const ProductSpaceSpec& spec, std::size_t n) {
  return -exact_covering_log(spec, n);
}

std::vector<double> lambda_sequence(const ProductSpaceSpec& spec, double C, std::size_t n_max) {
  if (!(C > 1.0)) throw DomainError("C must exceed 1");
  require_prefix(spec, n_max, 1);
  std::vector<double> out;
  double acc = -INFINITY;
  for (std::size_t n = 1; n <= n_max; ++n) {
    acc = n == 1 ? spec.log_log_card(1) : log_add(acc, spec.log_log_card(n));
    out.push_back(acc / (static_cast<double>(n) * std::log(C)));
  }
  return out;
}

std::vector<double> oracle_ratio_sequence(const ProductSpaceSpec& spec,
                                          const ScalingFamily& family, std::size_t n_max) {
  require_prefix(spec, n_max, 1);
  std::vector<double> out;
  double acc = -INFINITY;
  for (std::size_t n = 1; n <= n_max; ++n) {
    acc = n == 1 ? spec.log_log_card(1) : log_add(acc, spec.log_log_card(n));
    double h = 0.0;
    if (!iterated_log_from_log(-spec.log_eps(n), family.q() - 1, h) || !(h > 0.0)) {
      throw DomainError("log composition of 1/eps_n is not positive");
    }
    // acc = log log N; log^{p} N = exp(acc) for p = 1, else iterate from acc.
    double g = 0.0;
    bool ok = true;
    if (family.p() == 1) {
      g = std::exp(acc);
    } else {
      ok = iterated_log_from_log(acc, family.p() - 2, g);
    }
    out.push_back(ok ? g / h : 0.0);
  }
  return out;
}

ProductSpaceSpec inhomogeneous_spec(double alpha, double beta, std::size_t k_max) {
  if (!(beta > 0.0) || !(alpha >= beta)) throw DomainError("need alpha >= beta > 0");
  if (k_max < 1) throw DomainError("k_max must be at least 1");
  const double ratio = std::floor(alpha / beta);
  if (ratio > 1e6) throw DomainError("alpha / beta too large");
  const long c = static_cast<long>(ratio) + 1;
  // exp(exp(x)) <= 1e15 exactly when x <= log(log(1e15)).
  const double floor_limit = std::log(std::log(1e15));

  std::vector<double> ll;
  std::vector<double> log_eps;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double start = 1.0;  // c^{2j}
    const double c2 = static_cast<double>(c) * static_cast<double>(c);
    while (static_cast<double>(k) >= start * c2) start *= c2;
    const double gamma = static_cast<double>(k) < start * static_cast<double>(c) ? beta : alpha;
    const double x = gamma * static_cast<double>(k);
    if (x <= floor_limit) {
      ll.push_back(std::log(std::log(std::floor(std::exp(std::exp(x))))));
    } else {
      ll.push_back(x);
    }
    log_eps.push_back(-static_cast<double>(k));
  }
  return ProductSpaceSpec(std::move(ll), std::move(log_eps), InhomogeneousParams{alpha, beta, c});
}

OrderBounds inhomogeneous_orders(const ProductSpaceSpec& spec, std::size_t n_max,
                                 double tail_fraction) {
  if (!spec.params()) throw DomainError("spec was not built by inhomogeneous_spec");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("tail_fraction must lie in (0, 1]");
  }
  require_prefix(spec, n_max, 1);
  const double c = static_cast<double>(spec.params()->c);
  if (static_cast<double>(n_max) < std::pow(c, 6) - 1.0) {
    throw DepthError("n_max must cover three block pairs (n_max >= c^6 - 1)");
  }
  const auto lambda = lambda_sequence(spec, std::exp(1.0), n_max);
  // The tail is measured from the last block boundary inside the range.
  double last = c;
  while (last * c * c <= static_cast<double>(n_max)) last *= c * c;
  const double first = (1.0 - tail_fraction) * last;

  OrderBounds out;
  for (double nj = c; nj <= static_cast<double>(n_max); nj *= c * c) {
    for (double w : {nj - 1.0, nj}) {
      if (w >= 1.0 && w >= first) {
        const auto idx = static_cast<std::size_t>(w);
        out.witnesses.push_back(idx);
        out.values.push_back(lambda[idx - 1]);
      }
    }
  }
  if (out.values.size() < 2) throw DepthError("no block-boundary witness in the tail");
  out.lower = *std::min_element(out.values.begin(), out.values.end());
  out.upper = *std::max_element(out.values.begin(), out.values.end());
  return out;
}

MaterializedProduct materialize(const ProductSpaceSpec& spec, std::size_t n) {
  require_prefix(spec, n, 1);
  std::vector<std::size_t> cards;
  double total = 1.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double exact = std::exp(spec.log_card(k));
    const double rounded = std::round(exact);
    if (!(rounded >= 2.0) || std::abs(exact - rounded) > 1e-6 * rounded) {
      throw DomainError("factor " + std::to_string(k) + " does not have an integer size >= 2");
    }
    total *= rounded;
    if (total > static_cast<double>(materialize_limit)) {
      throw SizeError("materialized product would exceed 2^14 points");
    }
    cards.push_back(static_cast<std::size_t>(rounded));
  }
  const auto points = static_cast<std::size_t>(total);

  // stride[k] = number of tuples sharing a prefix of length k + 1.
  std::vector<std::size_t> stride(n);
  std::size_t s = points;
  for (std::size_t k = 0; k < n; ++k) {
    s /= cards[k];
    stride[k] = s;
  }
  const bool compact = std::all_of(cards.begin(), cards.end(), [](std::size_t c) { return c <= 10; });
  std::vector<std::string> labels;
  labels.reserve(points);
  for (std::size_t a = 0; a < points; ++a) {
    std::string label;
    for (std::size_t k = 0; k < n; ++k) {
      if (!compact && k > 0) label += '.';
      label += std::to_string(a / stride[k] % cards[k]);
    }
    labels.push_back(std::move(label));
  }

  std::vector<double> level_dist(n);
  for (std::size_t k = 0; k < n; ++k) level_dist[k] = std::exp(spec.log_eps(k + 1));
  std::vector<double> dist(points * points, 0.0);
  for (std::size_t a = 0; a < points; ++a) {
    for (std::size_t b = a + 1; b < points; ++b) {
      std::size_t k = 0;
      while (a / stride[k] == b / stride[k]) ++k;
      dist[a * points + b] = dist[b * points + a] = level_dist[k];
    }
  }
  auto space = std::make_shared<const FiniteMetricSpace>(std::move(labels), std::move(dist));
  EmpiricalMeasure mu = EmpiricalMeasure::uniform(space);
  return {space, std::move(mu)};
}

}  // namespace scales
