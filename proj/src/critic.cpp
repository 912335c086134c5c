#include "lsflow/critic.hpp"

#include <algorithm>
#include <cmath>

#include "lsflow/errors.hpp"
#include "lsflow/parallel.hpp"
#include "lsflow/vecmath.hpp"
#include "lsflow/vmf.hpp"

namespace lsflow::critic {

namespace {

void build_input(std::span<const double> obs, std::span<const double> c,
                 std::vector<double>& input) {
  input.resize(obs.size() + c.size());
  std::copy(obs.begin(), obs.end(), input.begin());
  std::copy(c.begin(), c.end(), input.begin() + static_cast<std::ptrdiff_t>(obs.size()));
}

double eval_q(const Critic& critic, std::span<const double> params,
              std::span<const double> obs, std::span<const double> c,
              std::vector<double>& input, nn::ForwardCache* cache) {
  build_input(obs, c, input);
  double out = 0.0;
  nn::forward(critic.spec, params, input, std::span<double>(&out, 1), cache);
  return out;
}

}  // namespace

Critic Critic::make(int obs_dim, int latent_dim, const std::vector<int>& hidden,
                    double gamma, double kappa, int j_samples, RngStream& rng) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    fail(ErrorCode::kDegenerateInput, "Critic: gamma must be in [0,1)");
  if (!(kappa > 0.0)) fail(ErrorCode::kDegenerateInput, "Critic: kappa must be > 0");
  if (j_samples < 1) fail(ErrorCode::kDegenerateInput, "Critic: J must be >= 1");
  Critic c;
  c.obs_dim = obs_dim;
  c.latent_dim = latent_dim;
  c.gamma = gamma;
  c.kappa = kappa;
  c.j_samples = j_samples;
  c.spec.input_dim = obs_dim + latent_dim;
  c.spec.hidden = hidden;
  c.spec.output_dim = 1;
  c.params = nn::NetParams::init(c.spec, rng);
  return c;
}

double q_value(const Critic& critic, Which which, std::span<const double> obs,
               const sphere::UnitVector& c) {
  if (static_cast<int>(obs.size()) != critic.obs_dim ||
      static_cast<int>(c.dim()) != critic.latent_dim)
    fail(ErrorCode::kDimensionMismatch, "q_value: dimension mismatch");
  std::vector<double> input;
  const auto& p = which == Which::kLive ? critic.params.values : critic.params.target;
  return eval_q(critic, p, obs, c.coords, input, nullptr);
}

double smoothed_target(const Critic& critic, const flow::FlowPolicy& policy, double r,
                       std::span<const double> next_obs, bool done, RngStream& rng) {
  if (done) return r;
  const sphere::UnitVector center = flow::sample_direction(policy, next_obs, rng);
  std::vector<double> input;
  double acc = 0.0;
  if (!critic.smoothing) {
    acc = eval_q(critic, critic.params.target, next_obs, center.coords, input, nullptr);
  } else {
    vmf::VmfParams kernel{center, critic.kappa};
    for (int j = 0; j < critic.j_samples; ++j) {
      const sphere::UnitVector perturbed = vmf::sample_vmf(kernel, rng);
      acc += eval_q(critic, critic.params.target, next_obs, perturbed.coords, input, nullptr);
    }
    acc /= static_cast<double>(critic.j_samples);
  }
  return r + critic.gamma * acc;
}

namespace {

double critic_record(const Critic& critic, const CriticRecord& rec, double inv_batch,
                     std::vector<double>& input, nn::ForwardCache& cache,
                     std::span<double> grad_accum) {
  if (!std::isfinite(rec.target))
    fail(ErrorCode::kNumeric, "critic loss: non-finite target rejected");
  build_input(rec.obs, rec.c.coords, input);
  double q = 0.0;
  nn::forward(critic.spec, critic.params.values, input, std::span<double>(&q, 1), &cache);
  const double resid = q - rec.target;
  const double g = 2.0 * resid * inv_batch;
  nn::backward(critic.spec, critic.params.values, cache, std::span<const double>(&g, 1),
               grad_accum);
  return resid * resid;
}

}  // namespace

double critic_loss_and_grad_reference(const Critic& critic,
                                      const std::vector<CriticRecord>& batch,
                                      std::span<double> grad_out) {
  if (batch.empty()) fail(ErrorCode::kDegenerateInput, "critic loss: empty batch");
  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  std::vector<double> input;
  nn::ForwardCache cache;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (const auto& rec : batch)
    loss += critic_record(critic, rec, inv_batch, input, cache, grad_out);
  return loss * inv_batch;
}

double critic_loss_and_grad(const Critic& critic, const std::vector<CriticRecord>& batch,
                            std::span<double> grad_out) {
  if (batch.empty()) fail(ErrorCode::kDegenerateInput, "critic loss: empty batch");
  const std::size_t n = batch.size();
  const std::size_t chunks = (n + par::kChunk - 1) / par::kChunk;
  const std::size_t pcount = grad_out.size();
  std::vector<std::vector<double>> partial_grad(chunks);
  std::vector<double> partial_loss(chunks, 0.0);
  const double inv_batch = 1.0 / static_cast<double>(n);

  par::for_each_chunk(n, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    partial_grad[c].assign(pcount, 0.0);
    std::vector<double> input;
    nn::ForwardCache cache;
    double loss = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      loss += critic_record(critic, batch[i], inv_batch, input, cache, partial_grad[c]);
    partial_loss[c] = loss;
  });

  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  double loss = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    loss += partial_loss[c];
    for (std::size_t p = 0; p < pcount; ++p) grad_out[p] += partial_grad[c][p];
  }
  return loss * inv_batch;
}

void QNormalizer::observe(double y) {
  if (!std::isfinite(y)) fail(ErrorCode::kNumeric, "QNormalizer: non-finite target");
  const double delta = y - mean;
  mean += beta * delta;
  var = (1.0 - beta) * (var + beta * delta * delta);
}

double QNormalizer::std_floored() const { return std::max(std::sqrt(var), 1e-6); }

double QNormalizer::normalize(double q) const {
  return std::clamp((q - mean) / std_floored(), -clip, clip);
}

double weights_from_q(const QNormalizer& normalizer, double q, double lambda, double w_max) {
  if (!(lambda > 0.0)) fail(ErrorCode::kDegenerateInput, "weights_from_q: lambda > 0");
  return std::min(std::exp(normalizer.normalize(q) / lambda), w_max);
}

}  // namespace lsflow::critic
