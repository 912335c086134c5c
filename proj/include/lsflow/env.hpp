#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lsflow/ilp.hpp"
#include "lsflow/rng.hpp"

namespace lsflow::env {

enum class Family { kScheduling, kRouting, kAssignment, kIntervention, kSti };
enum class Disease { kChlamydia, kGonorrhea, kHiv, kSyphilis };

const char* family_name(Family f);
bool parse_family(const std::string& s, Family& out);
const char* disease_name(Disease d);
bool parse_disease(const std::string& s, Disease& out);

struct EnvConfig {
  Family family = Family::kIntervention;
  int n = 40;       // population / node count (STI presets override from stats)
  int budget = 10;  // B
  int horizon = 20; // H
  int slots = 4;    // scheduling timeslots K
  int workers = 10; // scheduling / assignment worker pool
  double p_act = 0.8;
  double p_pass = 0.2;
  int route_extra_edges = -1;  // -1: n/2 extra edges on top of the spanning tree
  Disease disease = Disease::kGonorrhea;
  std::string graph_file;   // optional edge list "u v" per line, 0-indexed
  std::string labels_file;  // optional fixed 0/1 labels, one per node line
  std::uint64_t seed = 0;   // instance seed; structural parameters are
                            // re-derived from it at every reset

  void validate() const;
};

struct StepOutcome {
  double reward = 0.0;
  bool done = false;
};

// One sequential decision environment. build_ilp() returns the feasibility
// program of the current state with a zero objective; the caller installs
// the cost direction on the action coordinates.
class Env {
 public:
  virtual ~Env() = default;
  virtual const EnvConfig& config() const = 0;
  virtual int action_dim() const = 0;
  virtual int obs_dim() const = 0;
  virtual void reset(RngStream& rng) = 0;
  virtual bool terminal() const = 0;
  virtual std::vector<double> observe() const = 0;
  virtual ilp::IlpInstance build_ilp() const = 0;
  virtual StepOutcome step(const ilp::BinaryAction& action, RngStream& rng) = 0;
  // Family-specific constructive sampler over the feasible set.
  virtual ilp::BinaryAction sample_feasible(RngStream& rng) = 0;
  // Family-specific heuristic baseline; per-episode memory is cleared by reset.
  virtual ilp::BinaryAction greedy_action(RngStream& rng) = 0;
};

std::unique_ptr<Env> make_env(const EnvConfig& config);

// ---- STI graph synthesis (exposed for tests and tooling) ----

struct DiseaseStats {
  int nodes = 100;
  int edges = 68;
  double positive_pct = 9.0;
  int components = 32;
};

DiseaseStats stats_for(Disease d);

struct StiGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> adj;
  std::vector<int> component_of;
  int component_count = 0;
  std::vector<int> roots;        // one per component, by highest positive marginal
  double seed_prob = 0.0;        // calibrated contagion seeding probability
  double spread_prob = 0.5;
  std::vector<double> marginal;  // Monte Carlo positive marginals
};

// Random graph matched to the target statistics: exact node/edge/component
// counts (forest plus within-component extra edges), contagion label prior
// calibrated to the positive percentage.
StiGraph synth_disease_graph(const DiseaseStats& stats, RngStream& rng);

// One label draw from the contagion prior (independent seeds, one round of
// edge transmission). Markov with respect to the graph by construction.
std::vector<std::uint8_t> sample_labels(const StiGraph& g, RngStream& rng);

}  // namespace lsflow::env
