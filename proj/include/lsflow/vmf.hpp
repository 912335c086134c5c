#pragma once

#include "lsflow/rng.hpp"
#include "lsflow/sphere.hpp"

namespace lsflow::vmf {

// von Mises-Fisher distribution on S^{m-1}: density proportional to
// exp(kappa * mu . c).
struct VmfParams {
  sphere::UnitVector mean_direction;
  double concentration = 0.0;  // kappa >= 0, finite
};

// Draws one sample via the Wood/Ulrich rejection scheme: beta-enveloped
// cosine marginal, uniform tangent direction, Householder rotation from the
// north pole to mu. kappa = 0 reduces exactly to the uniform law.
sphere::UnitVector sample_vmf(const VmfParams& params, RngStream& rng);

// kappa * mu.c + log C_m(kappa) with the normalizer evaluated through a
// log-scaled modified Bessel function, stable past kappa = 700.
// Provided for test oracles; the training loop never evaluates densities.
double log_density(const VmfParams& params, const sphere::UnitVector& c);

// log I_nu(x) for x >= 0, nu >= 0 (log-sum series with an asymptotic branch
// for very large arguments). Exposed for the density tests.
double log_bessel_i(double nu, double x);

// log surface area of S^{m-1}.
double log_sphere_area(std::size_t m);

}  // namespace lsflow::vmf
