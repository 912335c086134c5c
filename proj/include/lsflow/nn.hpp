#pragma once

#include <span>
#include <string>
#include <vector>

#include "lsflow/rng.hpp"

namespace lsflow::nn {

enum class Activation { kTanh, kIdentity };

// Fully-connected net: hidden layers with a smooth activation (tanh by
// default so finite-difference gradient checks are clean), linear output.
struct MlpSpec {
  int input_dim = 1;
  std::vector<int> hidden;
  int output_dim = 1;
  Activation activation = Activation::kTanh;

  int layer_count() const { return static_cast<int>(hidden.size()) + 1; }
  int layer_in(int l) const;
  int layer_out(int l) const;
  // Offset of layer l's weight block in the flat parameter array; biases
  // follow the weights within each block.
  int layer_offset(int l) const;
  int param_count() const;
  void validate() const;

  bool operator==(const MlpSpec& other) const = default;
};

// Flat parameter store plus the shadow copy used as a target network.
struct NetParams {
  std::vector<double> values;
  std::vector<double> target;

  static NetParams init(const MlpSpec& spec, RngStream& rng);
};

// Post-activation values per hidden layer, kept for reverse mode. tanh'
// is recovered from the stored activations (1 - a^2), so pre-activations
// are not cached.
struct ForwardCache {
  std::vector<double> input;
  std::vector<std::vector<double>> act;
};

void forward(const MlpSpec& spec, std::span<const double> params,
             std::span<const double> input, std::span<double> output,
             ForwardCache* cache);

std::vector<double> forward(const MlpSpec& spec, std::span<const double> params,
                            std::span<const double> input);

// Accumulates (+=) exact reverse-mode parameter gradients of the forward map
// contracted with grad_output. The cache must come from a matching forward.
void backward(const MlpSpec& spec, std::span<const double> params,
              const ForwardCache& cache, std::span<const double> grad_output,
              std::span<double> grad_accum);

struct OptimState {
  long step = 0;
  std::vector<double> m;
  std::vector<double> v;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static OptimState init(std::size_t n, double lr);
};

// Bias-corrected adaptive-moment update. NaN/inf gradients reject the whole
// update with a numeric error (parameters untouched).
void adam_step(OptimState& optim, std::span<double> params, std::span<const double> grads);

// target <- (1 - eta) * target + eta * live
void soft_update(std::span<double> target, std::span<const double> live, double eta);

// [sin(2 pi k t) for k=1..L] then [cos(2 pi k t) for k=1..L]; out.size() == 2L.
void fourier_time_embed(double t, int harmonics, std::span<double> out);

// Scales grads to max_norm when ||grads|| exceeds it; returns the pre-clip norm.
double clip_grad_norm(std::span<double> grads, double max_norm);

// Checkpoint format: magic + version header, spec dims, then the live and
// target parameter blocks as little-endian f64.
void save_checkpoint(const std::string& path, const MlpSpec& spec, const NetParams& params);
void load_checkpoint(const std::string& path, MlpSpec& spec, NetParams& params);

}  // namespace lsflow::nn
