#pragma once

#include <atomic>
#include <cstdint>
#include <string>
#include <vector>

namespace lsflow::ilp {

// 0/1 integer linear program: min objective . x subject to
// a_ub x <= b_ub, a_eq x = b_eq, x in {0,1}^n. action_coords names the
// variables that form the environment action; the rest are auxiliaries
// (assignment cells, flow variables) that receive zero objective weight.
struct IlpInstance {
  int n = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> a_ub;
  std::vector<double> b_ub;
  std::vector<std::vector<double>> a_eq;
  std::vector<double> b_eq;
  std::vector<int> action_coords;

  void validate() const;
};

// Feasible decision vector restricted to the action coordinates.
struct BinaryAction {
  std::vector<std::uint8_t> bits;

  bool operator==(const BinaryAction& other) const = default;
};

// Full 0/1 solution over every variable of an instance.
struct IlpSolution {
  std::vector<std::uint8_t> x;
  double objective = 0.0;

  BinaryAction action(const IlpInstance& inst) const;
};

// Two objectives count as equal within this tolerance; direction vectors are
// reals on the sphere so exact comparisons are meaningless.
inline double objective_tol(double obj) { return 1e-9 * (1.0 + std::abs(obj)); }

// Max residual over all constraints for a 0/1 point (0 when feasible).
double max_violation(const IlpInstance& inst, const std::vector<std::uint8_t>& x);

// Plain-text round-trip (dims, then dense rows) for golden tests.
std::string to_text(const IlpInstance& inst);
IlpInstance from_text(const std::string& text);

// Process-wide count of instance solves, used by the trainer to prove the
// one-solver-call-per-environment-step accounting.
std::atomic<std::uint64_t>& solver_call_counter();

}  // namespace lsflow::ilp
