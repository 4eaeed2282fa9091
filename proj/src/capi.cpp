#include "mecsim/mecsim.h"

#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "mecsim/config.hpp"
#include "mecsim/error.hpp"
#include "mecsim/simkit.hpp"
#include "mecsim/validation.hpp"

struct mecsim_config {
  mecsim::SimConfig cfg;
};

struct mecsim_run {
  mecsim::SimConfig cfg;
  std::vector<mecsim::RunResult> results;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
int guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return MECSIM_OK;
  } catch (const mecsim::Error& e) {
    return fail(static_cast<int>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MECSIM_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MECSIM_E_INTERNAL, e.what());
  } catch (...) {
    return fail(MECSIM_E_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) throw mecsim::Error(mecsim::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

std::vector<mecsim::Policy> parse_policies(const char* text, mecsim::Policy fallback) {
  if (!text || !*text) return {fallback};
  const std::string s(text);
  if (s == "all") return {mecsim::kAllPolicies.begin(), mecsim::kAllPolicies.end()};
  std::vector<mecsim::Policy> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto p = mecsim::parse_policy(item);
    if (!p) throw mecsim::Error(mecsim::ErrorCode::kInvalidArgument, "unknown policy '" + item + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw mecsim::Error(mecsim::ErrorCode::kInvalidArgument, "empty policy list");
  return out;
}

}  // namespace

extern "C" {

const char* mecsim_last_error(void) { return g_last_error.c_str(); }

const char* mecsim_status_string(int status) {
  switch (status) {
    case MECSIM_OK: return "ok";
    case MECSIM_E_INVALID_ARGUMENT: return "invalid argument";
    case MECSIM_E_INVALID_CONFIG: return "invalid config";
    case MECSIM_E_IO: return "i/o error";
    case MECSIM_E_PARSE: return "parse error";
    case MECSIM_E_CONTRACT: return "contract violation";
    case MECSIM_E_INFEASIBLE: return "infeasible";
    case MECSIM_E_CONSISTENCY: return "consistency failure";
    case MECSIM_E_INTERNAL: return "internal error";
    default: return "unknown status";
  }
}

const char* mecsim_version(void) { return "1.0.0"; }

void mecsim_string_free(char* s) { delete[] s; }

int mecsim_config_default(mecsim_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new mecsim_config{mecsim::default_config()};
  });
}

int mecsim_config_desk(mecsim_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new mecsim_config{mecsim::desk_config()};
  });
}

int mecsim_config_from_json(const char* json, const mecsim_config* base, mecsim_config** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = new mecsim_config{mecsim::config_from_json(json, base ? base->cfg : mecsim::default_config())};
  });
}

int mecsim_config_from_file(const char* path, const mecsim_config* base, mecsim_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new mecsim_config{mecsim::load_config(path, base ? base->cfg : mecsim::default_config())};
  });
}

int mecsim_config_set(mecsim_config* cfg, const char* key, const char* json_value) {
  return guarded([&] {
    need(cfg, "cfg");
    need(key, "key");
    need(json_value, "json_value");
    mecsim::SimConfig next = cfg->cfg;
    mecsim::set_config_field(next, key, json_value);
    mecsim::validate(next);
    cfg->cfg = next;
  });
}

int mecsim_config_to_json(const mecsim_config* cfg, char** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    *out = dup(mecsim::config_to_json(cfg->cfg));
  });
}

void mecsim_config_free(mecsim_config* cfg) { delete cfg; }

int mecsim_run_policies(const mecsim_config* cfg, const char* policies, mecsim_run** out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(out, "out");
    auto run = std::make_unique<mecsim_run>();
    run->cfg = cfg->cfg;
    run->results = mecsim::run_policies(cfg->cfg, parse_policies(policies, cfg->cfg.policy));
    *out = run.release();
  });
}

int mecsim_run_count(const mecsim_run* run, size_t* out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    *out = run->results.size();
  });
}

int mecsim_run_summary(const mecsim_run* run, size_t index, mecsim_summary* out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    if (index >= run->results.size()) {
      throw mecsim::Error(mecsim::ErrorCode::kInvalidArgument, "summary index out of range");
    }
    const mecsim::RunSummary& s = run->results[index].summary;
    mecsim_summary r{};
    std::strncpy(r.policy, s.policy.c_str(), sizeof r.policy - 1);
    r.run = s.run;
    r.seed = s.seed;
    r.slots = s.slots;
    r.avg_energy = s.avg_energy;
    r.avg_delay_e = s.avg_delay_e;
    r.avg_delay_c = s.avg_delay_c;
    r.avg_objective = s.avg_objective;
    r.mean_bound_b = s.mean_bound_b;
    r.mean_z_backlog = s.mean_z_backlog;
    r.drift_violations = s.drift_violations;
    r.wall_time = s.wall_time;
    *out = r;
  });
}

int mecsim_run_slots_csv(const mecsim_run* run, char** out) {
  return guarded([&] {
    need(run, "run");
    need(out, "out");
    mecsim::SlotTable all;
    all.num_servers = run->cfg.num_servers;
    for (const auto& r : run->results) {
      all.rows.insert(all.rows.end(), r.table.rows.begin(), r.table.rows.end());
    }
    *out = dup(mecsim::slots_to_csv(all));
  });
}

int mecsim_run_write(const mecsim_run* run, const char* dir) {
  return guarded([&] {
    need(run, "run");
    need(dir, "dir");
    mecsim::write_run(dir, run->results, run->cfg);
  });
}

void mecsim_run_free(mecsim_run* run) { delete run; }

int mecsim_sweep(const mecsim_config* cfg, const char* axis, const double* values, size_t count,
                 int replications, const char* policies, char** csv_out) {
  return guarded([&] {
    need(cfg, "cfg");
    need(axis, "axis");
    need(values, "values");
    need(csv_out, "csv_out");
    const std::vector<double> v(values, values + count);
    const auto rows = mecsim::sweep(cfg->cfg, mecsim::parse_axis(axis), v, replications,
                                    parse_policies(policies, cfg->cfg.policy));
    *csv_out = dup(mecsim::sweep_to_csv(rows));
  });
}

int mecsim_report(const char* dir, char** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    *out = dup(mecsim::report_from_dir(dir));
  });
}

int mecsim_validate(uint64_t seed, int threads, mecsim_criterion_fn callback, void* user,
                    int* failures) {
  return guarded([&] {
    mecsim::validation::Options opt;
    opt.seed = seed;
    opt.threads = threads > 0 ? threads : 4;
    int failed = 0;
    mecsim::validation::run_all(opt, [&](const mecsim::validation::CriterionResult& r) {
      if (!r.passed) ++failed;
      if (callback) callback(r.id, r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str(), r.seconds, user);
    });
    if (failures) *failures = failed;
  });
}

}  // extern "C"
