#pragma once

#include <span>
#include <vector>

#include "lsflow/rng.hpp"

namespace lsflow::sphere {

// Point on S^{m-1}. Construct via normalize()/sample_uniform() or from
// coordinates already known to be unit norm.
struct UnitVector {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
};

// Vector in the tangent space at `base` (base . vec == 0 up to roundoff).
struct TangentVector {
  UnitVector base;
  std::vector<double> vec;
};

// v / ||v||. Zero-length input (norm <= 1e-12) is a degenerate-input error.
UnitVector normalize(std::span<const double> v);

// In-place variant for hot loops; returns the pre-normalization norm.
double normalize_in_place(std::span<double> v);

// vec = v - (c.v) c, the orthogonal projection onto the tangent space at c.
TangentVector tangent_project(const UnitVector& c, std::span<const double> v);

// Raw projection without wrapping, out may alias v.
void tangent_project_raw(std::span<const double> c, std::span<const double> v,
                         std::span<double> out);

// arccos of the clamped dot product, in [0, pi].
double geodesic_distance(const UnitVector& c0, const UnitVector& c1);

// Shortest-arc interpolation sin((1-t)theta)/sin(theta) c0 + sin(t theta)/sin(theta) c1.
// Antipodal pairs (theta within 1e-6 of pi) raise a degeneracy error; callers
// that interpolate random pairs are expected to perturb and retry.
// Near-coincident pairs (theta < 1e-6) return c0: the limit is exact and the
// sin(theta) denominator is removable.
UnitVector geodesic(const UnitVector& c0, const UnitVector& c1, double t);

// Time derivative of the geodesic at t:
//   theta/sin(theta) * (cos(t theta) c1 - cos((1-t) theta) c0),
// a tangent vector at geodesic(c0, c1, t) with constant norm theta.
// Near-coincident pairs return the zero tangent.
TangentVector geodesic_velocity(const UnitVector& c0, const UnitVector& c1, double t);

// Fills both the point and the velocity in one pass (hot path of the
// flow-matching loss). Returns theta.
double geodesic_with_velocity(const UnitVector& c0, const UnitVector& c1, double t,
                              std::vector<double>& point, std::vector<double>& velocity);

// Rotation-invariant law on S^{m-1} (normalized iid standard normals). m >= 2.
UnitVector sample_uniform(std::size_t m, RngStream& rng);

// Angle tolerance below which a pair counts as antipodal.
inline constexpr double kAntipodalTol = 1e-6;

}  // namespace lsflow::sphere
