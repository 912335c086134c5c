#include <string>

#include "envs_internal.hpp"
#include "lsflow/errors.hpp"

namespace lsflow::env {

const char* family_name(Family f) {
  switch (f) {
    case Family::kScheduling: return "scheduling";
    case Family::kRouting: return "routing";
    case Family::kAssignment: return "assignment";
    case Family::kIntervention: return "intervention";
    case Family::kSti: return "sti";
  }
  return "?";
}

bool parse_family(const std::string& s, Family& out) {
  if (s == "scheduling") out = Family::kScheduling;
  else if (s == "routing") out = Family::kRouting;
  else if (s == "assignment") out = Family::kAssignment;
  else if (s == "intervention") out = Family::kIntervention;
  else if (s == "sti") out = Family::kSti;
  else return false;
  return true;
}

const char* disease_name(Disease d) {
  switch (d) {
    case Disease::kChlamydia: return "chlamydia";
    case Disease::kGonorrhea: return "gonorrhea";
    case Disease::kHiv: return "hiv";
    case Disease::kSyphilis: return "syphilis";
  }
  return "?";
}

bool parse_disease(const std::string& s, Disease& out) {
  if (s == "chlamydia") out = Disease::kChlamydia;
  else if (s == "gonorrhea") out = Disease::kGonorrhea;
  else if (s == "hiv") out = Disease::kHiv;
  else if (s == "syphilis") out = Disease::kSyphilis;
  else return false;
  return true;
}

DiseaseStats stats_for(Disease d) {
  switch (d) {
    case Disease::kChlamydia: return {100, 63, 44.0, 37};
    case Disease::kGonorrhea: return {100, 68, 9.0, 32};
    case Disease::kHiv: return {100, 70, 27.0, 37};
    case Disease::kSyphilis: return {101, 102, 18.8, 27};
  }
  return {};
}

void EnvConfig::validate() const {
  if (n < 1) fail(ErrorCode::kConfig, "env: n must be >= 1");
  if (budget < 1 || budget > n) fail(ErrorCode::kConfig, "env: budget must be in [1, n]");
  if (horizon < 1) fail(ErrorCode::kConfig, "env: horizon must be >= 1");
  if (family == Family::kScheduling && (slots < 1 || workers < 2))
    fail(ErrorCode::kConfig, "env: scheduling needs slots >= 1 and workers >= 2");
  if (family == Family::kAssignment && workers < 1)
    fail(ErrorCode::kConfig, "env: assignment needs workers >= 1");
  if (!(p_act > 0.0 && p_act < 1.0 && p_pass > 0.0 && p_pass < 1.0))
    fail(ErrorCode::kConfig, "env: p_act and p_pass must be in (0,1)");
}

std::unique_ptr<Env> make_env(const EnvConfig& config) {
  config.validate();
  switch (config.family) {
    case Family::kScheduling: return make_scheduling_env(config);
    case Family::kRouting: return make_routing_env(config);
    case Family::kAssignment: return make_assignment_env(config);
    case Family::kIntervention: return make_intervention_env(config);
    case Family::kSti: return make_sti_env(config);
  }
  fail(ErrorCode::kConfig, "make_env: unknown family");
}

}  // namespace lsflow::env
