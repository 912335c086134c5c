#include "lsflow/vmf.hpp"

#include <algorithm>
#include <cmath>

#include "lsflow/errors.hpp"
#include "lsflow/vecmath.hpp"

namespace lsflow::vmf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093454836;

void check_params(const VmfParams& p) {
  if (p.mean_direction.dim() < 2)
    fail(ErrorCode::kDegenerateInput, "vmf: m must be >= 2");
  if (!(p.concentration >= 0.0) || !std::isfinite(p.concentration))
    fail(ErrorCode::kDegenerateInput, "vmf: concentration must be finite and >= 0");
}

}  // namespace

sphere::UnitVector sample_vmf(const VmfParams& params, RngStream& rng) {
  check_params(params);
  const std::size_t m = params.mean_direction.dim();
  const double kappa = params.concentration;
  const double p1 = static_cast<double>(m) - 1.0;

  // Wood's envelope for the cosine marginal.
  const double b = p1 / (2.0 * kappa + std::sqrt(4.0 * kappa * kappa + p1 * p1));
  const double x0 = (1.0 - b) / (1.0 + b);
  const double c = kappa * x0 + p1 * std::log(1.0 - x0 * x0);

  double w;
  for (;;) {
    const double z = rng.beta(p1 / 2.0, p1 / 2.0);
    const double u = rng.uniform();
    w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    if (kappa * w + p1 * std::log(1.0 - x0 * w) - c >= std::log1p(-u)) break;
  }
  w = std::clamp(w, -1.0, 1.0);

  // Tangent direction uniform on S^{m-2}; sample around the north pole e1.
  std::vector<double> sample(m, 0.0);
  sample[0] = w;
  const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
  if (m == 2) {
    sample[1] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * r;
  } else {
    sphere::UnitVector v = sphere::sample_uniform(m - 1, rng);
    for (std::size_t i = 1; i < m; ++i) sample[i] = r * v.coords[i - 1];
  }

  // Householder reflection mapping e1 to mu.
  std::vector<double> h(m);
  h[0] = 1.0 - params.mean_direction.coords[0];
  for (std::size_t i = 1; i < m; ++i) h[i] = -params.mean_direction.coords[i];
  const double hn2 = vec::dot(h, h);
  if (hn2 > 1e-24) {
    const double proj = 2.0 * vec::dot(h, sample) / hn2;
    for (std::size_t i = 0; i < m; ++i) sample[i] -= proj * h[i];
  }
  sphere::normalize_in_place(sample);
  sphere::UnitVector out;
  out.coords = std::move(sample);
  return out;
}

double log_bessel_i(double nu, double x) {
  if (x < 0.0 || nu < 0.0) fail(ErrorCode::kDegenerateInput, "log_bessel_i: domain");
  if (x == 0.0) return nu == 0.0 ? 0.0 : -INFINITY;
  if (x < 1e-290) return nu * std::log(x / 2.0) - std::lgamma(nu + 1.0);

  // Hankel asymptotic expansion once the argument dwarfs the order.
  if (x > 1e4 && x > 40.0 * (nu * nu + 1.0)) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, series = 1.0;
    for (int j = 1; j <= 10; ++j) {
      const double f = 2.0 * j - 1.0;
      term *= -(mu - f * f) / (8.0 * j * x);
      series += term;
      if (std::abs(term) < 1e-17 * std::abs(series)) break;
    }
    return x - 0.5 * std::log(2.0 * kPi * x) + std::log(series);
  }

  // Log-domain power series around the peak term.
  const double lx = std::log(x / 2.0);
  const double kpeak_f = 0.5 * (-(nu + 1.0) + std::sqrt((nu + 1.0) * (nu + 1.0) + x * x));
  const long kpeak = std::lround(std::max(0.0, kpeak_f));
  auto log_term = [&](long k) {
    const double kd = static_cast<double>(k);
    return (2.0 * kd + nu) * lx - std::lgamma(kd + 1.0) - std::lgamma(kd + nu + 1.0);
  };
  const double shift = log_term(kpeak);
  double sum = 0.0;
  for (long k = kpeak; k >= 0; --k) {
    const double t = std::exp(log_term(k) - shift);
    sum += t;
    if (t < 1e-18 && k < kpeak) break;
  }
  for (long k = kpeak + 1;; ++k) {
    const double t = std::exp(log_term(k) - shift);
    sum += t;
    if (t < 1e-18) break;
  }
  return shift + std::log(sum);
}

double log_sphere_area(std::size_t m) {
  const double md = static_cast<double>(m);
  return std::log(2.0) + (md / 2.0) * std::log(kPi) - std::lgamma(md / 2.0);
}

double log_density(const VmfParams& params, const sphere::UnitVector& c) {
  check_params(params);
  if (c.dim() != params.mean_direction.dim())
    fail(ErrorCode::kDimensionMismatch, "vmf log_density: dimension mismatch");
  const double kappa = params.concentration;
  const std::size_t m = params.mean_direction.dim();
  const double dot = vec::dot(params.mean_direction.coords, c.coords);
  if (kappa < 1e-290) return -log_sphere_area(m);
  const double nu = static_cast<double>(m) / 2.0 - 1.0;
  const double log_norm =
      nu * std::log(kappa) - (nu + 1.0) * kLog2Pi - log_bessel_i(nu, kappa);
  return kappa * dot + log_norm;
}

}  // namespace lsflow::vmf
