#include "lsflow/ilp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "lsflow/errors.hpp"

namespace lsflow::ilp {

void IlpInstance::validate() const {
  if (n < 1) fail(ErrorCode::kDimensionMismatch, "IlpInstance: n must be >= 1");
  if (objective.size() != static_cast<std::size_t>(n))
    fail(ErrorCode::kDimensionMismatch, "IlpInstance: objective length != n");
  if (a_ub.size() != b_ub.size() || a_eq.size() != b_eq.size())
    fail(ErrorCode::kDimensionMismatch, "IlpInstance: row/rhs count mismatch");
  for (const auto& row : a_ub)
    if (row.size() != static_cast<std::size_t>(n))
      fail(ErrorCode::kDimensionMismatch, "IlpInstance: a_ub row width != n");
  for (const auto& row : a_eq)
    if (row.size() != static_cast<std::size_t>(n))
      fail(ErrorCode::kDimensionMismatch, "IlpInstance: a_eq row width != n");
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int c : action_coords) {
    if (c < 0 || c >= n)
      fail(ErrorCode::kDimensionMismatch, "IlpInstance: action coord out of range");
    if (seen[static_cast<std::size_t>(c)]++)
      fail(ErrorCode::kDimensionMismatch, "IlpInstance: duplicate action coord");
  }
}

BinaryAction IlpSolution::action(const IlpInstance& inst) const {
  BinaryAction a;
  a.bits.reserve(inst.action_coords.size());
  for (int c : inst.action_coords) a.bits.push_back(x[static_cast<std::size_t>(c)]);
  return a;
}

double max_violation(const IlpInstance& inst, const std::vector<std::uint8_t>& x) {
  double worst = 0.0;
  for (std::size_t r = 0; r < inst.a_ub.size(); ++r) {
    double lhs = 0.0;
    for (int j = 0; j < inst.n; ++j)
      lhs += inst.a_ub[r][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    worst = std::max(worst, lhs - inst.b_ub[r]);
  }
  for (std::size_t r = 0; r < inst.a_eq.size(); ++r) {
    double lhs = 0.0;
    for (int j = 0; j < inst.n; ++j)
      lhs += inst.a_eq[r][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(lhs - inst.b_eq[r]));
  }
  return worst;
}

namespace {

void put_row(std::ostringstream& os, const std::vector<double>& row) {
  char buf[40];
  for (std::size_t i = 0; i < row.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
    os << (i ? " " : "") << buf;
  }
  os << "\n";
}

}  // namespace

std::string to_text(const IlpInstance& inst) {
  std::ostringstream os;
  os << "ilp 1\n";
  os << inst.n << " " << inst.a_ub.size() << " " << inst.a_eq.size() << " "
     << inst.action_coords.size() << "\n";
  put_row(os, inst.objective);
  for (std::size_t r = 0; r < inst.a_ub.size(); ++r) {
    put_row(os, inst.a_ub[r]);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", inst.b_ub[r]);
    os << buf << "\n";
  }
  for (std::size_t r = 0; r < inst.a_eq.size(); ++r) {
    put_row(os, inst.a_eq[r]);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", inst.b_eq[r]);
    os << buf << "\n";
  }
  for (std::size_t i = 0; i < inst.action_coords.size(); ++i)
    os << (i ? " " : "") << inst.action_coords[i];
  os << "\n";
  return os.str();
}

IlpInstance from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  int version = 0;
  is >> tag >> version;
  if (tag != "ilp" || version != 1)
    fail(ErrorCode::kConfig, "IlpInstance::from_text: bad header");
  IlpInstance inst;
  std::size_t n_ub = 0, n_eq = 0, n_act = 0;
  is >> inst.n >> n_ub >> n_eq >> n_act;
  if (!is || inst.n < 1) fail(ErrorCode::kConfig, "IlpInstance::from_text: bad dims");
  auto read_row = [&](std::vector<double>& row) {
    row.resize(static_cast<std::size_t>(inst.n));
    for (auto& v : row) is >> v;
  };
  read_row(inst.objective);
  inst.a_ub.resize(n_ub);
  inst.b_ub.resize(n_ub);
  for (std::size_t r = 0; r < n_ub; ++r) {
    read_row(inst.a_ub[r]);
    is >> inst.b_ub[r];
  }
  inst.a_eq.resize(n_eq);
  inst.b_eq.resize(n_eq);
  for (std::size_t r = 0; r < n_eq; ++r) {
    read_row(inst.a_eq[r]);
    is >> inst.b_eq[r];
  }
  inst.action_coords.resize(n_act);
  for (auto& c : inst.action_coords) is >> c;
  if (!is) fail(ErrorCode::kConfig, "IlpInstance::from_text: truncated");
  inst.validate();
  return inst;
}

std::atomic<std::uint64_t>& solver_call_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

}  // namespace lsflow::ilp
