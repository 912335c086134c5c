#pragma once

#include <span>
#include <vector>

#include "lsflow/flow_policy.hpp"
#include "lsflow/nn.hpp"
#include "lsflow/rng.hpp"
#include "lsflow/sphere.hpp"

namespace lsflow::critic {

// Cost-space critic Q(s, c) evaluated on (observation, direction) pairs,
// with vMF-smoothed Bellman targets built from the shadow (target) copy.
struct Critic {
  nn::MlpSpec spec;
  nn::NetParams params;
  double gamma = 0.99;
  double kappa = 28.0;
  bool smoothing = true;  // off = no on-sphere perturbation (the None ablation)
  int j_samples = 1;
  int obs_dim = 0;
  int latent_dim = 0;

  static Critic make(int obs_dim, int latent_dim, const std::vector<int>& hidden,
                     double gamma, double kappa, int j_samples, RngStream& rng);
};

enum class Which { kLive, kTarget };

double q_value(const Critic& critic, Which which, std::span<const double> obs,
               const sphere::UnitVector& c);

// Monte Carlo estimate of the smoothed backup: r when done, otherwise
//   r + gamma * (1/J) sum_j Q_target(s', c~_j),   c~_j ~ vMF(c', kappa),
// with one policy center c' ~ pi(.|s'). Only the target parameters are read.
double smoothed_target(const Critic& critic, const flow::FlowPolicy& policy, double r,
                       std::span<const double> next_obs, bool done, RngStream& rng);

struct CriticRecord {
  std::vector<double> obs;
  sphere::UnitVector c;
  double target = 0.0;  // y_kappa, detached
};

// Mean squared Bellman error against detached targets, gradients through the
// live parameters only. Chunk-parallel with the fixed-order reduction.
double critic_loss_and_grad(const Critic& critic, const std::vector<CriticRecord>& batch,
                            std::span<double> grad_out);

double critic_loss_and_grad_reference(const Critic& critic,
                                      const std::vector<CriticRecord>& batch,
                                      std::span<double> grad_out);

// Running EMA mean/std of raw smoothed targets; reads clamp the z-score.
// The floor on std is applied at read time so a zero-variance state still
// normalizes (divide by 1e-6, then clip).
struct QNormalizer {
  double mean = 0.0;
  double var = 0.0;
  double beta = 0.05;
  double clip = 3.0;

  void observe(double y);
  double std_floored() const;
  double normalize(double q) const;
};

// min(exp(normalize(q) / lambda), w_max)
double weights_from_q(const QNormalizer& normalizer, double q, double lambda, double w_max);

}  // namespace lsflow::critic
