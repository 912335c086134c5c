#include "lsflow/sphere.hpp"

#include <algorithm>
#include <cmath>

#include "lsflow/errors.hpp"
#include "lsflow/vecmath.hpp"

namespace lsflow::sphere {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamped_cos(const UnitVector& c0, const UnitVector& c1) {
  if (c0.dim() != c1.dim())
    fail(ErrorCode::kDimensionMismatch, "sphere: dimension mismatch");
  return std::clamp(vec::dot(c0.coords, c1.coords), -1.0, 1.0);
}

}  // namespace

UnitVector normalize(std::span<const double> v) {
  const double n = vec::norm2(v);
  if (!(n > 1e-12))
    fail(ErrorCode::kDegenerateInput, "normalize: input norm below 1e-12");
  UnitVector out;
  out.coords.assign(v.begin(), v.end());
  vec::scale(out.coords, 1.0 / n);
  return out;
}

double normalize_in_place(std::span<double> v) {
  const double n = vec::norm2(v);
  if (!(n > 1e-12))
    fail(ErrorCode::kDegenerateInput, "normalize: input norm below 1e-12");
  vec::scale(v, 1.0 / n);
  return n;
}

void tangent_project_raw(std::span<const double> c, std::span<const double> v,
                         std::span<double> out) {
  const double cv = vec::dot(c, v);
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = v[i] - cv * c[i];
}

TangentVector tangent_project(const UnitVector& c, std::span<const double> v) {
  if (c.dim() != v.size())
    fail(ErrorCode::kDimensionMismatch, "tangent_project: dimension mismatch");
  TangentVector t;
  t.base = c;
  t.vec.resize(v.size());
  tangent_project_raw(c.coords, v, t.vec);
  return t;
}

double geodesic_distance(const UnitVector& c0, const UnitVector& c1) {
  return std::acos(clamped_cos(c0, c1));
}

double geodesic_with_velocity(const UnitVector& c0, const UnitVector& c1, double t,
                              std::vector<double>& point, std::vector<double>& velocity) {
  const double theta = std::acos(clamped_cos(c0, c1));
  const std::size_t m = c0.dim();
  point.resize(m);
  velocity.assign(m, 0.0);
  if (theta < kAntipodalTol) {
    point = c0.coords;
    return theta;
  }
  if (theta > kPi - kAntipodalTol)
    fail(ErrorCode::kDegenerateInput, "geodesic: antipodal endpoints");
  const double s = std::sin(theta);
  const double w0 = std::sin((1.0 - t) * theta) / s;
  const double w1 = std::sin(t * theta) / s;
  const double d0 = -theta * std::cos((1.0 - t) * theta) / s;
  const double d1 = theta * std::cos(t * theta) / s;
  for (std::size_t i = 0; i < m; ++i) {
    point[i] = w0 * c0.coords[i] + w1 * c1.coords[i];
    velocity[i] = d0 * c0.coords[i] + d1 * c1.coords[i];
  }
  // The closed form is unit norm up to roundoff; snap so downstream unit-norm
  // invariants hold at 1e-9 even after long chains of calls.
  normalize_in_place(point);
  return theta;
}

UnitVector geodesic(const UnitVector& c0, const UnitVector& c1, double t) {
  std::vector<double> point, velocity;
  geodesic_with_velocity(c0, c1, t, point, velocity);
  UnitVector out;
  out.coords = std::move(point);
  return out;
}

TangentVector geodesic_velocity(const UnitVector& c0, const UnitVector& c1, double t) {
  std::vector<double> point, velocity;
  geodesic_with_velocity(c0, c1, t, point, velocity);
  TangentVector out;
  out.base.coords = std::move(point);
  out.vec = std::move(velocity);
  return out;
}

UnitVector sample_uniform(std::size_t m, RngStream& rng) {
  if (m < 2) fail(ErrorCode::kDegenerateInput, "sample_uniform: m must be >= 2");
  UnitVector out;
  out.coords.resize(m);
  for (;;) {
    for (auto& x : out.coords) x = rng.normal();
    const double n = vec::norm2(out.coords);
    if (n > 1e-12) {
      vec::scale(out.coords, 1.0 / n);
      return out;
    }
  }
}

}  // namespace lsflow::sphere
