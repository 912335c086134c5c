#pragma once

#include <functional>
#include <span>
#include <vector>

#include "lsflow/nn.hpp"
#include "lsflow/rng.hpp"
#include "lsflow/sphere.hpp"

namespace lsflow::flow {

// Spherical flow policy pi_theta(c | s): a state- and time-conditioned
// velocity field whose projected ODE transports the uniform sphere law to
// the policy distribution. Network input is
// [observation, current point c_t, Fourier time embedding].
struct FlowPolicy {
  nn::MlpSpec spec;
  nn::NetParams params;
  int flow_steps = 36;
  int obs_dim = 0;
  int latent_dim = 0;
  int harmonics = 16;

  static FlowPolicy make(int obs_dim, int latent_dim, const std::vector<int>& hidden,
                         int harmonics, int flow_steps, RngStream& rng);
};

// One weighted flow-matching record.
struct FmRecord {
  std::vector<double> obs;
  sphere::UnitVector target;  // c_1 on the sphere
  double weight = 1.0;
};
using FmBatch = std::vector<FmRecord>;

// Frozen randomness for one record of the loss: base sample and path time.
struct FmDraw {
  sphere::UnitVector c0;
  double t = 0.0;
};

// Scratch buffers reused across velocity evaluations.
struct PolicyWorkspace {
  nn::ForwardCache cache;
  std::vector<double> input;
  std::vector<double> raw;
  std::vector<double> v1, v2, point;
};

// Tangent velocity Pi_c v_theta(c, s, t) evaluated with the given parameter
// vector (live or target snapshot).
void velocity(const FlowPolicy& policy, std::span<const double> params,
              const sphere::UnitVector& c, std::span<const double> obs, double t,
              PolicyWorkspace& ws, std::vector<double>& out);

sphere::TangentVector velocity(const FlowPolicy& policy, const sphere::UnitVector& c,
                               std::span<const double> obs, double t);

// Integrates the projected ODE from c0 at t=0 to t=1 with Heun's method,
// renormalizing after every completed step. max_drift, when non-null,
// receives the largest pre-renormalization deviation |  ||c_raw|| - 1  |.
sphere::UnitVector sample_direction_from(const FlowPolicy& policy,
                                         std::span<const double> obs,
                                         const sphere::UnitVector& c0,
                                         double* max_drift = nullptr);

// Draws c0 from the uniform sphere law and integrates.
sphere::UnitVector sample_direction(const FlowPolicy& policy, std::span<const double> obs,
                                    RngStream& rng);

// Weighted spherical flow-matching loss
//   mean_i w_i || Pi_{c_t} v_theta(c_t, s_i, t) - u(c_t, t) ||^2
// over geodesic interpolants, with exact reverse-mode parameter gradients.
// The draws variant freezes (c0, t) per record for oracle tests; the rng
// variant samples c0 uniformly (resampling antipodal pairs up to 8 times)
// and t ~ U(0,1), then runs the same computation.
double fm_loss_and_grad_with_draws(const FlowPolicy& policy, const FmBatch& batch,
                                   std::span<const FmDraw> draws,
                                   std::span<double> grad_out);

double fm_loss_and_grad(const FlowPolicy& policy, const FmBatch& batch, RngStream& rng,
                        std::span<double> grad_out);

// Plain serial loop kept as the reference implementation for the chunked
// kernel; the kernel benchmark and the determinism tests compare against it.
double fm_loss_and_grad_reference(const FlowPolicy& policy, const FmBatch& batch,
                                  std::span<const FmDraw> draws,
                                  std::span<double> grad_out);

// Samples (c0, t) pairs the way fm_loss_and_grad does, exposed so callers can
// freeze them.
std::vector<FmDraw> sample_fm_draws(const FmBatch& batch, int latent_dim, RngStream& rng);

// K-particle candidate selection: K independent policy samples scored by
// q_fn, ties broken by the lowest sample index.
sphere::UnitVector select_candidate(const FlowPolicy& policy, std::span<const double> obs,
                                    int k, RngStream& rng,
                                    const std::function<double(const sphere::UnitVector&)>& q_fn);

}  // namespace lsflow::flow
