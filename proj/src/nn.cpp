#include "lsflow/nn.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "lsflow/errors.hpp"
#include "lsflow/vecmath.hpp"

namespace lsflow::nn {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr char kMagic[8] = {'L', 'S', 'F', 'N', 'E', 'T', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

}  // namespace

int MlpSpec::layer_in(int l) const {
  return l == 0 ? input_dim : hidden[static_cast<std::size_t>(l) - 1];
}

int MlpSpec::layer_out(int l) const {
  return l == layer_count() - 1 ? output_dim : hidden[static_cast<std::size_t>(l)];
}

int MlpSpec::layer_offset(int l) const {
  int off = 0;
  for (int i = 0; i < l; ++i) off += layer_in(i) * layer_out(i) + layer_out(i);
  return off;
}

int MlpSpec::param_count() const { return layer_offset(layer_count()); }

void MlpSpec::validate() const {
  if (input_dim < 1 || output_dim < 1)
    fail(ErrorCode::kDimensionMismatch, "MlpSpec: dims must be >= 1");
  for (int h : hidden)
    if (h < 1) fail(ErrorCode::kDimensionMismatch, "MlpSpec: dims must be >= 1");
}

NetParams NetParams::init(const MlpSpec& spec, RngStream& rng) {
  spec.validate();
  NetParams p;
  p.values.resize(static_cast<std::size_t>(spec.param_count()));
  for (int l = 0; l < spec.layer_count(); ++l) {
    const int in = spec.layer_in(l), out = spec.layer_out(l);
    const double s = std::sqrt(6.0 / (in + out));
    double* w = p.values.data() + spec.layer_offset(l);
    for (int i = 0; i < in * out; ++i) w[i] = rng.uniform(-s, s);
    // biases stay zero
  }
  p.target = p.values;
  return p;
}

void forward(const MlpSpec& spec, std::span<const double> params,
             std::span<const double> input, std::span<double> output,
             ForwardCache* cache) {
  if (input.size() != static_cast<std::size_t>(spec.input_dim))
    fail(ErrorCode::kDimensionMismatch, "forward: input dim mismatch");
  if (params.size() != static_cast<std::size_t>(spec.param_count()))
    fail(ErrorCode::kDimensionMismatch, "forward: param count mismatch");
  if (output.size() != static_cast<std::size_t>(spec.output_dim))
    fail(ErrorCode::kDimensionMismatch, "forward: output dim mismatch");

  const int layers = spec.layer_count();
  if (cache) {
    cache->input.assign(input.begin(), input.end());
    cache->act.resize(static_cast<std::size_t>(layers) - 1);
  }
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (int l = 0; l < layers; ++l) {
    const int in = spec.layer_in(l), out = spec.layer_out(l);
    const double* w = params.data() + spec.layer_offset(l);
    const double* b = w + in * out;
    next.resize(static_cast<std::size_t>(out));
    for (int o = 0; o < out; ++o) {
      const double* row = w + static_cast<std::size_t>(o) * in;
      double acc = b[o];
      for (int i = 0; i < in; ++i) acc += row[i] * cur[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(o)] = acc;
    }
    if (l < layers - 1 && spec.activation == Activation::kTanh)
      for (double& x : next) x = std::tanh(x);
    if (cache && l < layers - 1) cache->act[static_cast<std::size_t>(l)] = next;
    cur.swap(next);
  }
  std::copy(cur.begin(), cur.end(), output.begin());
}

std::vector<double> forward(const MlpSpec& spec, std::span<const double> params,
                            std::span<const double> input) {
  std::vector<double> out(static_cast<std::size_t>(spec.output_dim));
  forward(spec, params, input, out, nullptr);
  return out;
}

void backward(const MlpSpec& spec, std::span<const double> params,
              const ForwardCache& cache, std::span<const double> grad_output,
              std::span<double> grad_accum) {
  const int layers = spec.layer_count();
  if (cache.input.size() != static_cast<std::size_t>(spec.input_dim) ||
      cache.act.size() != static_cast<std::size_t>(layers) - 1)
    fail(ErrorCode::kDimensionMismatch, "backward: stale or mismatched cache");
  if (grad_output.size() != static_cast<std::size_t>(spec.output_dim) ||
      grad_accum.size() != static_cast<std::size_t>(spec.param_count()))
    fail(ErrorCode::kDimensionMismatch, "backward: gradient dim mismatch");

  std::vector<double> delta(grad_output.begin(), grad_output.end());
  std::vector<double> delta_prev;
  for (int l = layers - 1; l >= 0; --l) {
    const int in = spec.layer_in(l), out = spec.layer_out(l);
    const double* prev =
        l == 0 ? cache.input.data() : cache.act[static_cast<std::size_t>(l) - 1].data();
    double* gw = grad_accum.data() + spec.layer_offset(l);
    double* gb = gw + in * out;
    const double* w = params.data() + spec.layer_offset(l);
    for (int o = 0; o < out; ++o) {
      const double d = delta[static_cast<std::size_t>(o)];
      double* grow = gw + static_cast<std::size_t>(o) * in;
      for (int i = 0; i < in; ++i) grow[i] += d * prev[i];
      gb[o] += d;
    }
    if (l > 0) {
      delta_prev.assign(static_cast<std::size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        const double d = delta[static_cast<std::size_t>(o)];
        const double* row = w + static_cast<std::size_t>(o) * in;
        for (int i = 0; i < in; ++i) delta_prev[static_cast<std::size_t>(i)] += d * row[i];
      }
      if (spec.activation == Activation::kTanh) {
        const auto& a = cache.act[static_cast<std::size_t>(l) - 1];
        for (int i = 0; i < in; ++i) {
          const double ai = a[static_cast<std::size_t>(i)];
          delta_prev[static_cast<std::size_t>(i)] *= 1.0 - ai * ai;
        }
      }
      delta.swap(delta_prev);
    }
  }
}

OptimState OptimState::init(std::size_t n, double lr) {
  OptimState o;
  o.m.assign(n, 0.0);
  o.v.assign(n, 0.0);
  o.lr = lr;
  return o;
}

void adam_step(OptimState& optim, std::span<double> params, std::span<const double> grads) {
  if (params.size() != grads.size() || params.size() != optim.m.size())
    fail(ErrorCode::kDimensionMismatch, "adam_step: length mismatch");
  if (!vec::all_finite(grads))
    fail(ErrorCode::kNumeric, "adam_step: non-finite gradient, update rejected");
  optim.step += 1;
  const double bc1 = 1.0 - std::pow(optim.beta1, static_cast<double>(optim.step));
  const double bc2 = 1.0 - std::pow(optim.beta2, static_cast<double>(optim.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    optim.m[i] = optim.beta1 * optim.m[i] + (1.0 - optim.beta1) * grads[i];
    optim.v[i] = optim.beta2 * optim.v[i] + (1.0 - optim.beta2) * grads[i] * grads[i];
    const double mhat = optim.m[i] / bc1;
    const double vhat = optim.v[i] / bc2;
    params[i] -= optim.lr * mhat / (std::sqrt(vhat) + optim.eps);
  }
}

void soft_update(std::span<double> target, std::span<const double> live, double eta) {
  if (target.size() != live.size())
    fail(ErrorCode::kDimensionMismatch, "soft_update: length mismatch");
  if (eta < 0.0 || eta > 1.0)
    fail(ErrorCode::kDegenerateInput, "soft_update: eta must be in [0,1]");
  for (std::size_t i = 0; i < target.size(); ++i)
    target[i] = (1.0 - eta) * target[i] + eta * live[i];
}

void fourier_time_embed(double t, int harmonics, std::span<double> out) {
  if (harmonics < 1) fail(ErrorCode::kDegenerateInput, "fourier_time_embed: L >= 1");
  if (out.size() != static_cast<std::size_t>(2 * harmonics))
    fail(ErrorCode::kDimensionMismatch, "fourier_time_embed: out must have length 2L");
  for (int k = 1; k <= harmonics; ++k) {
    out[static_cast<std::size_t>(k - 1)] = std::sin(kTwoPi * k * t);
    out[static_cast<std::size_t>(harmonics + k - 1)] = std::cos(kTwoPi * k * t);
  }
}

double clip_grad_norm(std::span<double> grads, double max_norm) {
  if (!(max_norm > 0.0)) fail(ErrorCode::kDegenerateInput, "clip_grad_norm: max_norm > 0");
  const double n = vec::norm2(grads);
  if (n > max_norm) vec::scale(grads, max_norm / n);
  return n;
}

void save_checkpoint(const std::string& path, const MlpSpec& spec, const NetParams& params) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kConfig, "save_checkpoint: cannot open " + path);
  f.write(kMagic, sizeof(kMagic));
  auto put_u32 = [&](std::uint32_t v) { f.write(reinterpret_cast<const char*>(&v), 4); };
  put_u32(1);  // version
  put_u32(static_cast<std::uint32_t>(spec.input_dim));
  put_u32(static_cast<std::uint32_t>(spec.hidden.size()));
  for (int h : spec.hidden) put_u32(static_cast<std::uint32_t>(h));
  put_u32(static_cast<std::uint32_t>(spec.output_dim));
  put_u32(spec.activation == Activation::kTanh ? 0u : 1u);
  const std::uint64_t n = params.values.size();
  f.write(reinterpret_cast<const char*>(&n), 8);
  f.write(reinterpret_cast<const char*>(params.values.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  f.write(reinterpret_cast<const char*>(params.target.data()),
          static_cast<std::streamsize>(n * sizeof(double)));
  if (!f) fail(ErrorCode::kConfig, "save_checkpoint: write failed for " + path);
}

void load_checkpoint(const std::string& path, MlpSpec& spec, NetParams& params) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::kConfig, "load_checkpoint: cannot open " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(ErrorCode::kConfig, "load_checkpoint: bad magic in " + path);
  auto get_u32 = [&]() {
    std::uint32_t v = 0;
    f.read(reinterpret_cast<char*>(&v), 4);
    return v;
  };
  const std::uint32_t version = get_u32();
  if (version != 1) fail(ErrorCode::kConfig, "load_checkpoint: unsupported version");
  spec.input_dim = static_cast<int>(get_u32());
  spec.hidden.resize(get_u32());
  for (auto& h : spec.hidden) h = static_cast<int>(get_u32());
  spec.output_dim = static_cast<int>(get_u32());
  spec.activation = get_u32() == 0 ? Activation::kTanh : Activation::kIdentity;
  std::uint64_t n = 0;
  f.read(reinterpret_cast<char*>(&n), 8);
  if (!f || n != static_cast<std::uint64_t>(spec.param_count()))
    fail(ErrorCode::kConfig, "load_checkpoint: corrupt header in " + path);
  params.values.resize(n);
  params.target.resize(n);
  f.read(reinterpret_cast<char*>(params.values.data()),
         static_cast<std::streamsize>(n * sizeof(double)));
  f.read(reinterpret_cast<char*>(params.target.data()),
         static_cast<std::streamsize>(n * sizeof(double)));
  if (!f) fail(ErrorCode::kConfig, "load_checkpoint: truncated file " + path);
}

}  // namespace lsflow::nn
