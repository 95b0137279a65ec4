#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "moralaxis/projection.hpp"
#include "moralaxis/random.hpp"

namespace moralaxis {

namespace {

constexpr std::size_t kTraceEvery = 50;
constexpr double kMinGain = 0.01;
constexpr double kEntropyTolNats = 1e-7;
constexpr int kBandwidthSteps = 500;

void center(Matrix& y) {
  const std::size_t n = y.rows();
  for (std::size_t d = 0; d < y.cols(); ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y(i, d);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) y(i, d) -= mean;
  }
}

// gradient of KL(exaggeration * P || Q); returns nothing, fills grad (n x 2).
void gradient(const Matrix& p, double exaggeration, const Matrix& y, Matrix& grad) {
  const std::size_t n = y.rows();
  std::fill(grad.data().begin(), grad.data().end(), 0.0);
  Matrix repulse(n, 2);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double yi0 = y(i, 0), yi1 = y(i, 1);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d0 = yi0 - y(j, 0);
      const double d1 = yi1 - y(j, 1);
      const double w = 1.0 / (1.0 + d0 * d0 + d1 * d1);
      z += 2.0 * w;
      const double attract = exaggeration * p(i, j) * w;
      const double w2 = w * w;
      grad(i, 0) += attract * d0;
      grad(i, 1) += attract * d1;
      grad(j, 0) -= attract * d0;
      grad(j, 1) -= attract * d1;
      repulse(i, 0) += w2 * d0;
      repulse(i, 1) += w2 * d1;
      repulse(j, 0) -= w2 * d0;
      repulse(j, 1) -= w2 * d1;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    grad(i, 0) = 4.0 * (grad(i, 0) - repulse(i, 0) / z);
    grad(i, 1) = 4.0 * (grad(i, 1) - repulse(i, 1) / z);
  }
}

}  // namespace

ConditionalAffinities conditional_affinities(const Matrix& points, double perplexity) {
  const std::size_t n = points.rows();
  if (!(perplexity > 1.0)) throw std::invalid_argument("t-SNE: perplexity must exceed 1");
  ConditionalAffinities out;
  out.p = Matrix(n, n);
  out.beta.assign(n, 1.0);
  out.entropy.assign(n, 0.0);
  const double target = std::log(perplexity);

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      d2[j] = j == i ? 0.0 : squared_distance(points.row(i), points.row(j));
      if (j != i) dmin = std::min(dmin, d2[j]);
    }
    auto row = out.p.row(i);

    double beta = 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double h = 0.0;
    for (int step = 0; step < kBandwidthSteps; ++step) {
      double sum = 0.0;
      double weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) {
          row[j] = 0.0;
          continue;
        }
        const double shifted = d2[j] - dmin;
        row[j] = std::exp(-beta * shifted);
        sum += row[j];
        weighted += shifted * row[j];
      }
      h = std::log(sum) + beta * weighted / sum;
      for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
      const double diff = h - target;
      if (std::abs(diff) < kEntropyTolNats) break;
      if (diff > 0.0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = 0.5 * (beta + lo);
      }
    }
    out.beta[i] = beta;
    out.entropy[i] = h / std::log(2.0);
  }
  return out;
}

Matrix joint_affinities(const ConditionalAffinities& conditional) {
  const Matrix& c = conditional.p;
  const std::size_t n = c.rows();
  Matrix p(n, n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      p(i, j) = c(i, j) + c(j, i);
      total += p(i, j);
    }
  for (double& v : p.data()) v /= total;
  return p;
}

double kl_divergence(const Matrix& joint, const Matrix& embedding) {
  const std::size_t n = embedding.rows();
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) z += 2.0 / (1.0 + squared_distance(embedding.row(i), embedding.row(j)));
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || joint(i, j) <= 0.0) continue;
      const double q = 1.0 / (1.0 + squared_distance(embedding.row(i), embedding.row(j))) / z;
      kl += joint(i, j) * std::log(joint(i, j) / q);
    }
  return kl;
}

Projection tsne(const Matrix& points, const TsneConfig& config) {
  const std::size_t n = points.rows();
  if (n < 10) throw std::invalid_argument("t-SNE: need at least 10 points");
  if (!(config.perplexity < static_cast<double>(n - 1) / 3.0))
    throw std::invalid_argument("t-SNE: perplexity " + std::to_string(config.perplexity) + " too large for " +
                                std::to_string(n) + " points");
  if (config.iterations < 250) throw std::invalid_argument("t-SNE: iterations must be at least 250");
  for (double v : points.data())
    if (!std::isfinite(v)) throw std::invalid_argument("t-SNE: non-finite input");

  const Matrix p = joint_affinities(conditional_affinities(points, config.perplexity));

  Projection out;
  out.config = config;
  Matrix y(n, 2);
  Rng rng(config.seed);
  for (double& v : y.data()) v = 1e-4 * rng.normal();
  out.initial_kl = kl_divergence(p, y);

  Matrix grad(n, 2);
  Matrix velocity(n, 2);
  Matrix gains(n, 2, 1.0);
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    const bool early = it <= config.exaggeration_iterations;
    const double exaggeration = early ? config.early_exaggeration : 1.0;
    const double momentum = early ? config.initial_momentum : config.final_momentum;
    gradient(p, exaggeration, y, grad);

    auto& g = grad.data();
    auto& v = velocity.data();
    auto& gn = gains.data();
    auto& yd = y.data();
    for (std::size_t k = 0; k < yd.size(); ++k) {
      gn[k] = (g[k] > 0.0) != (v[k] > 0.0) ? gn[k] + 0.2 : gn[k] * 0.8;
      gn[k] = std::max(gn[k], kMinGain);
      v[k] = momentum * v[k] - config.learning_rate * gn[k] * g[k];
      yd[k] += v[k];
    }
    center(y);

    if (it % kTraceEvery == 0) out.kl_trace.push_back({it, kl_divergence(p, y)});
  }
  center(y);
  out.coordinates = std::move(y);
  return out;
}

}  // namespace moralaxis
