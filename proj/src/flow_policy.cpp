#include "lsflow/flow_policy.hpp"

#include <cmath>

#include "lsflow/errors.hpp"
#include "lsflow/parallel.hpp"
#include "lsflow/vecmath.hpp"

namespace lsflow::flow {

namespace {

void build_input(const FlowPolicy& policy, std::span<const double> obs,
                 std::span<const double> c, double t, std::vector<double>& input) {
  const std::size_t m = static_cast<std::size_t>(policy.latent_dim);
  const std::size_t embed = 2 * static_cast<std::size_t>(policy.harmonics);
  input.resize(obs.size() + m + embed);
  std::copy(obs.begin(), obs.end(), input.begin());
  std::copy(c.begin(), c.end(), input.begin() + static_cast<std::ptrdiff_t>(obs.size()));
  nn::fourier_time_embed(t, policy.harmonics,
                         std::span<double>(input.data() + obs.size() + m, embed));
}

void raw_velocity(const FlowPolicy& policy, std::span<const double> params,
                  std::span<const double> c, std::span<const double> obs, double t,
                  PolicyWorkspace& ws, nn::ForwardCache* cache) {
  build_input(policy, obs, c, t, ws.input);
  ws.raw.resize(static_cast<std::size_t>(policy.latent_dim));
  nn::forward(policy.spec, params, ws.input, ws.raw, cache);
}

}  // namespace

FlowPolicy FlowPolicy::make(int obs_dim, int latent_dim, const std::vector<int>& hidden,
                            int harmonics, int flow_steps, RngStream& rng) {
  if (latent_dim < 2) fail(ErrorCode::kDimensionMismatch, "FlowPolicy: latent dim >= 2");
  if (flow_steps < 1) fail(ErrorCode::kDegenerateInput, "FlowPolicy: flow steps >= 1");
  FlowPolicy p;
  p.obs_dim = obs_dim;
  p.latent_dim = latent_dim;
  p.harmonics = harmonics;
  p.flow_steps = flow_steps;
  p.spec.input_dim = obs_dim + latent_dim + 2 * harmonics;
  p.spec.hidden = hidden;
  p.spec.output_dim = latent_dim;
  p.params = nn::NetParams::init(p.spec, rng);
  return p;
}

void velocity(const FlowPolicy& policy, std::span<const double> params,
              const sphere::UnitVector& c, std::span<const double> obs, double t,
              PolicyWorkspace& ws, std::vector<double>& out) {
  if (static_cast<int>(obs.size()) != policy.obs_dim ||
      static_cast<int>(c.dim()) != policy.latent_dim)
    fail(ErrorCode::kDimensionMismatch, "velocity: dimension mismatch");
  raw_velocity(policy, params, c.coords, obs, t, ws, nullptr);
  out.resize(c.dim());
  sphere::tangent_project_raw(c.coords, ws.raw, out);
}

sphere::TangentVector velocity(const FlowPolicy& policy, const sphere::UnitVector& c,
                               std::span<const double> obs, double t) {
  PolicyWorkspace ws;
  sphere::TangentVector out;
  out.base = c;
  velocity(policy, policy.params.values, c, obs, t, ws, out.vec);
  return out;
}

sphere::UnitVector sample_direction_from(const FlowPolicy& policy,
                                         std::span<const double> obs,
                                         const sphere::UnitVector& c0, double* max_drift) {
  const std::size_t m = static_cast<std::size_t>(policy.latent_dim);
  PolicyWorkspace ws;
  std::vector<double> c = c0.coords;
  std::vector<double> mid(m);
  const int steps = policy.flow_steps;
  const double h = 1.0 / steps;
  double drift = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * h;
    const double t1 = static_cast<double>(k + 1) * h;
    raw_velocity(policy, policy.params.values, c, obs, t0, ws, nullptr);
    if (!vec::all_finite(ws.raw))
      fail(ErrorCode::kNumeric, "sample_direction: non-finite velocity");
    ws.v1.resize(m);
    sphere::tangent_project_raw(c, ws.raw, ws.v1);
    for (std::size_t i = 0; i < m; ++i) mid[i] = c[i] + h * ws.v1[i];
    sphere::normalize_in_place(mid);
    raw_velocity(policy, policy.params.values, mid, obs, t1, ws, nullptr);
    if (!vec::all_finite(ws.raw))
      fail(ErrorCode::kNumeric, "sample_direction: non-finite velocity");
    ws.v2.resize(m);
    sphere::tangent_project_raw(mid, ws.raw, ws.v2);
    for (std::size_t i = 0; i < m; ++i) c[i] += 0.5 * h * (ws.v1[i] + ws.v2[i]);
    const double norm = vec::norm2(c);
    drift = std::max(drift, std::abs(norm - 1.0));
    vec::scale(c, 1.0 / norm);
  }
  if (max_drift) *max_drift = drift;
  sphere::UnitVector out;
  out.coords = std::move(c);
  return out;
}

sphere::UnitVector sample_direction(const FlowPolicy& policy, std::span<const double> obs,
                                    RngStream& rng) {
  const sphere::UnitVector c0 =
      sphere::sample_uniform(static_cast<std::size_t>(policy.latent_dim), rng);
  return sample_direction_from(policy, obs, c0, nullptr);
}

std::vector<FmDraw> sample_fm_draws(const FmBatch& batch, int latent_dim, RngStream& rng) {
  std::vector<FmDraw> draws(batch.size());
  const double cos_antipodal = std::cos(3.14159265358979323846 - sphere::kAntipodalTol);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    int tries = 0;
    for (;;) {
      draws[i].c0 = sphere::sample_uniform(static_cast<std::size_t>(latent_dim), rng);
      const double d = vec::dot(draws[i].c0.coords, batch[i].target.coords);
      if (d > cos_antipodal) break;
      if (++tries >= 8)
        fail(ErrorCode::kDegenerateInput, "fm draws: antipodal pair persisted");
    }
    draws[i].t = rng.uniform();
  }
  return draws;
}

namespace {

// Loss and gradient contribution of one record, accumulated into grad_accum.
double fm_record(const FlowPolicy& policy, const FmRecord& rec, const FmDraw& draw,
                 double inv_batch, PolicyWorkspace& ws, std::vector<double>& u,
                 std::vector<double>& grad_raw, std::span<double> grad_accum) {
  if (!(rec.weight >= 0.0) || !std::isfinite(rec.weight))
    fail(ErrorCode::kDegenerateInput, "fm loss: weights must be finite and >= 0");
  sphere::geodesic_with_velocity(draw.c0, rec.target, draw.t, ws.point, u);
  build_input(policy, rec.obs, ws.point, draw.t, ws.input);
  ws.raw.resize(static_cast<std::size_t>(policy.latent_dim));
  nn::forward(policy.spec, policy.params.values, ws.input, ws.raw, &ws.cache);
  const std::size_t m = ws.raw.size();
  ws.v1.resize(m);
  sphere::tangent_project_raw(ws.point, ws.raw, ws.v1);
  double sq = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    ws.v1[i] -= u[i];  // residual e = Pi v - u
    sq += ws.v1[i] * ws.v1[i];
  }
  // dL/d raw = (2 w / B) Pi e  (Pi symmetric; e is tangent up to roundoff)
  grad_raw.resize(m);
  sphere::tangent_project_raw(ws.point, ws.v1, grad_raw);
  const double scale = 2.0 * rec.weight * inv_batch;
  for (std::size_t i = 0; i < m; ++i) grad_raw[i] *= scale;
  nn::backward(policy.spec, policy.params.values, ws.cache, grad_raw, grad_accum);
  return rec.weight * sq;
}

}  // namespace

double fm_loss_and_grad_reference(const FlowPolicy& policy, const FmBatch& batch,
                                  std::span<const FmDraw> draws,
                                  std::span<double> grad_out) {
  if (batch.empty()) fail(ErrorCode::kDegenerateInput, "fm loss: empty batch");
  if (draws.size() != batch.size())
    fail(ErrorCode::kDimensionMismatch, "fm loss: draws/batch size mismatch");
  std::fill(grad_out.begin(), grad_out.end(), 0.0);
  PolicyWorkspace ws;
  std::vector<double> u, grad_raw;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i)
    loss += fm_record(policy, batch[i], draws[i], inv_batch, ws, u, grad_raw, grad_out);
  return loss * inv_batch;
}

double fm_loss_and_grad_with_draws(const FlowPolicy& policy, const FmBatch& batch,
                                   std::span<const FmDraw> draws,
                                   std::span<double> grad_out) {
  if (batch.empty()) fail(ErrorCode::kDegenerateInput, "fm loss: empty batch");
  if (draws.size() != batch.size())
    fail(ErrorCode::kDimensionMismatch, "fm loss: draws/batch size mismatch");
  const std::size_t n = batch.size();
  const std::size_t chunks = (n + par::kChunk - 1) / par::kChunk;
  const std::size_t pcount = grad_out.size();
  std::vector<std::vector<double>> partial_grad(chunks);
  std::vector<double> partial_loss(chunks, 0.0);
  const double inv_batch = 1.0 / static_cast<double>(n);

  par::for_each_chunk(n, [&](std::size_t c, std::size_t lo, std::size_t hi) {
    partial_grad[c].assign(pcount, 0.0);
    PolicyWorkspace ws;
    std::vector<double> u, grad_raw;
    double loss = 0.0;
    for (std::size_t i = lo; i < hi; ++i)
      loss += fm_record(policy, batch[i], draws[i], inv_batch, ws, u, grad_raw,
                        partial_grad[c]);
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

double fm_loss_and_grad(const FlowPolicy& policy, const FmBatch& batch, RngStream& rng,
                        std::span<double> grad_out) {
  const std::vector<FmDraw> draws = sample_fm_draws(batch, policy.latent_dim, rng);
  return fm_loss_and_grad_with_draws(policy, batch, draws, grad_out);
}

sphere::UnitVector select_candidate(const FlowPolicy& policy, std::span<const double> obs,
                                    int k, RngStream& rng,
                                    const std::function<double(const sphere::UnitVector&)>& q_fn) {
  if (k < 1) fail(ErrorCode::kDegenerateInput, "select_candidate: K must be >= 1");
  sphere::UnitVector best;
  double best_q = 0.0;
  for (int i = 0; i < k; ++i) {
    sphere::UnitVector cand = sample_direction(policy, obs, rng);
    const double q = q_fn(cand);
    if (i == 0 || q > best_q) {
      best_q = q;
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace lsflow::flow
