#include "lsflow/region.hpp"

#include <algorithm>
#include <cmath>

#include "lsflow/bnb.hpp"
#include "lsflow/errors.hpp"
#include "lsflow/simplex.hpp"
#include "lsflow/sphere.hpp"
#include "lsflow/vecmath.hpp"

namespace lsflow::region {

namespace {

// All feasible 0/1 points, in numeric enumeration order (variable 0 most
// significant so the order is lexicographic).
std::vector<std::vector<std::uint8_t>> enumerate_feasible(const ilp::IlpInstance& inst) {
  std::vector<std::vector<std::uint8_t>> out;
  const std::uint64_t count = 1ULL << inst.n;
  std::vector<std::uint8_t> x(static_cast<std::size_t>(inst.n));
  for (std::uint64_t i = 0; i < count; ++i) {
    for (int j = 0; j < inst.n; ++j)
      x[static_cast<std::size_t>(j)] =
          static_cast<std::uint8_t>((i >> (inst.n - 1 - j)) & 1ULL);
    if (ilp::max_violation(inst, x) <= 1e-7) out.push_back(x);
  }
  return out;
}

// Strict-optimality certificate for `a`: maximize eps subject to
// c.(a' - a) >= eps for all other feasible a', c in [-1,1]^m. Substituting
// c = 2u - 1 turns this into a box LP the bundled simplex can handle.
// A positive optimum exhibits an open cone of directions whose unique solver
// output is `a`.
bool is_exposed_vertex(const std::vector<std::vector<std::uint8_t>>& feasible,
                       std::size_t target, int m) {
  ilp::IlpInstance lp;
  lp.n = m + 1;  // u_0..u_{m-1}, eps
  lp.objective.assign(static_cast<std::size_t>(lp.n), 0.0);
  lp.objective[static_cast<std::size_t>(m)] = -1.0;  // max eps
  const auto& a = feasible[target];
  for (std::size_t k = 0; k < feasible.size(); ++k) {
    if (k == target) continue;
    // c.(a - a') + eps <= 0  with c = 2u - 1:
    //   2 u.(a - a') + eps <= sum(a - a')
    std::vector<double> row(static_cast<std::size_t>(lp.n), 0.0);
    double rhs = 0.0;
    for (int j = 0; j < m; ++j) {
      const double diff = static_cast<double>(a[static_cast<std::size_t>(j)]) -
                          static_cast<double>(feasible[k][static_cast<std::size_t>(j)]);
      row[static_cast<std::size_t>(j)] = 2.0 * diff;
      rhs += diff;
    }
    row[static_cast<std::size_t>(m)] = 1.0;
    lp.a_ub.push_back(std::move(row));
    lp.b_ub.push_back(rhs);
  }
  lp.action_coords.clear();
  if (lp.a_ub.empty()) return true;  // single feasible point: whole sphere
  const simplex::LpSolution sol = simplex::solve_lp(lp);
  return sol.status == simplex::LpStatus::kOptimal && -sol.objective > 1e-9;
}

}  // namespace

RegionCheckResult region_sample_check(const ilp::IlpInstance& inst,
                                      const TargetDistribution& mu,
                                      std::size_t draws, RngStream& rng) {
  inst.validate();
  if (inst.n > 12)
    fail(ErrorCode::kResourceExhausted, "region_sample_check: n must be <= 12");
  if (static_cast<int>(inst.action_coords.size()) != inst.n)
    fail(ErrorCode::kDegenerateInput,
         "region_sample_check: instance must be over pure action variables");
  if (mu.actions.size() != mu.probs.size() || mu.actions.empty())
    fail(ErrorCode::kDegenerateInput, "region_sample_check: bad target distribution");

  const auto feasible = enumerate_feasible(inst);
  if (feasible.empty())
    fail(ErrorCode::kInfeasible, "region_sample_check: empty feasible set");

  auto find_index = [&](const ilp::BinaryAction& a) -> std::size_t {
    for (std::size_t k = 0; k < feasible.size(); ++k)
      if (std::equal(feasible[k].begin(), feasible[k].end(), a.bits.begin(),
                     a.bits.end()))
        return k;
    fail(ErrorCode::kDegenerateInput,
         "region_sample_check: target action outside the feasible set");
  };

  double psum = 0.0;
  std::vector<std::size_t> support_idx(mu.actions.size());
  for (std::size_t k = 0; k < mu.actions.size(); ++k) {
    if (mu.actions[k].bits.size() != static_cast<std::size_t>(inst.n))
      fail(ErrorCode::kDimensionMismatch, "region_sample_check: action width");
    if (!(mu.probs[k] >= 0.0))
      fail(ErrorCode::kDegenerateInput, "region_sample_check: negative probability");
    support_idx[k] = find_index(mu.actions[k]);
    if (mu.probs[k] > 0.0 && !is_exposed_vertex(feasible, support_idx[k], inst.n))
      fail(ErrorCode::kDegenerateInput,
           "region_sample_check: action in support is not a solver-exposed vertex");
    psum += mu.probs[k];
  }
  if (!(psum > 0.0))
    fail(ErrorCode::kDegenerateInput, "region_sample_check: zero-mass target");

  // Region membership oracle for the rejection step: exhaustive argmin with
  // the shared lexicographic tie-break.
  auto region_of = [&](const std::vector<double>& c) -> std::size_t {
    std::size_t best = 0;
    double best_obj = HUGE_VAL;
    for (std::size_t k = 0; k < feasible.size(); ++k) {
      double obj = 0.0;
      for (int j = 0; j < inst.n; ++j)
        if (feasible[k][static_cast<std::size_t>(j)]) obj += c[static_cast<std::size_t>(j)];
      if (obj < best_obj - 1e-15) {
        best_obj = obj;
        best = k;  // earlier index is lexicographically smaller
      }
    }
    return best;
  };

  std::vector<std::uint64_t> counts(feasible.size(), 0);
  const std::uint64_t reject_cap = 2000ULL * draws + 1000000ULL;
  std::uint64_t rejections = 0;

  ilp::IlpInstance work = inst;
  for (std::size_t d = 0; d < draws; ++d) {
    // Mixture component.
    double u = rng.uniform() * psum;
    std::size_t comp = mu.actions.size() - 1;
    for (std::size_t k = 0; k < mu.probs.size(); ++k) {
      u -= mu.probs[k];
      if (u <= 0.0) {
        comp = k;
        break;
      }
    }
    const std::size_t want = support_idx[comp];

    // Rejection from the uniform sphere law restricted to the region.
    std::vector<double> c;
    for (;;) {
      c = sphere::sample_uniform(static_cast<std::size_t>(inst.n), rng).coords;
      if (region_of(c) == want) break;
      if (++rejections > reject_cap)
        fail(ErrorCode::kResourceExhausted,
             "region_sample_check: rejection sampler stalled");
    }

    work.objective = c;
    const ilp::IlpSolution sol = bnb::solve(work);
    bool matched = false;
    for (std::size_t k = 0; k < feasible.size(); ++k) {
      if (std::equal(feasible[k].begin(), feasible[k].end(), sol.x.begin(), sol.x.end())) {
        ++counts[k];
        matched = true;
        break;
      }
    }
    if (!matched)
      fail(ErrorCode::kNumeric, "region_sample_check: solver returned infeasible point");
  }

  RegionCheckResult res;
  res.support.resize(feasible.size());
  res.target.assign(feasible.size(), 0.0);
  res.empirical.assign(feasible.size(), 0.0);
  for (std::size_t k = 0; k < feasible.size(); ++k) {
    res.support[k].bits = feasible[k];
    res.empirical[k] =
        static_cast<double>(counts[k]) / static_cast<double>(draws);
  }
  for (std::size_t k = 0; k < mu.actions.size(); ++k)
    res.target[support_idx[k]] += mu.probs[k] / psum;
  double tv = 0.0;
  for (std::size_t k = 0; k < feasible.size(); ++k)
    tv += std::abs(res.empirical[k] - res.target[k]);
  res.total_variation = 0.5 * tv;
  return res;
}

}  // namespace lsflow::region
