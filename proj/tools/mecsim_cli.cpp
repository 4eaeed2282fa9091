#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mecsim/mecsim.h"

namespace {

struct Common {
  std::string config;
  bool desk = false;
  std::string policy;
  long long seed = -1;
  int threads = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file (default: $MECSIM_CONFIG)");
  app->add_flag("--desk", c.desk, "Start from the desk-scale profile");
  app->add_option("--seed", c.seed, "RNG seed")->check(CLI::NonNegativeNumber);
  app->add_option("--threads", c.threads, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--set", c.sets, "Override a field: key=<json value>");
}

int check(int status) {
  if (status != MECSIM_OK) {
    std::fprintf(stderr, "mecsim: %s: %s\n", mecsim_status_string(status), mecsim_last_error());
    std::exit(status == MECSIM_E_IO ? 3 : 2);
  }
  return status;
}

mecsim_config* load(const Common& c) {
  mecsim_config* base = nullptr;
  check(c.desk ? mecsim_config_desk(&base) : mecsim_config_default(&base));
  std::string path = c.config;
  if (path.empty()) {
    if (const char* env = std::getenv("MECSIM_CONFIG")) path = env;
  }
  mecsim_config* cfg = base;
  if (!path.empty()) {
    check(mecsim_config_from_file(path.c_str(), base, &cfg));
    mecsim_config_free(base);
  }
  if (c.seed >= 0) check(mecsim_config_set(cfg, "rng_seed", std::to_string(c.seed).c_str()));
  if (c.threads > 0) check(mecsim_config_set(cfg, "threads", std::to_string(c.threads).c_str()));
  for (const std::string& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "mecsim: --set expects key=value, got '%s'\n", kv.c_str());
      std::exit(2);
    }
    check(mecsim_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
  return cfg;
}

int cmd_run(const Common& c, const std::string& out) {
  mecsim_config* cfg = load(c);
  mecsim_run* run = nullptr;
  check(mecsim_run_policies(cfg, c.policy.empty() ? nullptr : c.policy.c_str(), &run));
  check(mecsim_run_write(run, out.c_str()));
  size_t n = 0;
  check(mecsim_run_count(run, &n));
  std::printf("%-7s %14s %12s %12s %10s\n", "policy", "energy_J/slot", "delay_edge", "delay_cloud", "wall_s");
  for (size_t i = 0; i < n; ++i) {
    mecsim_summary s;
    check(mecsim_run_summary(run, i, &s));
    std::printf("%-7s %14.6f %12.4f %12.4f %10.3f\n", s.policy, s.avg_energy, s.avg_delay_e,
                s.avg_delay_c, s.wall_time);
  }
  std::printf("wrote %s/{slots.csv,summary.json,report.md}\n", out.c_str());
  mecsim_run_free(run);
  mecsim_config_free(cfg);
  return 0;
}

int cmd_sweep(const Common& c, const std::string& axis, const std::vector<double>& values, int reps,
              const std::string& out) {
  mecsim_config* cfg = load(c);
  char* csv = nullptr;
  check(mecsim_sweep(cfg, axis.c_str(), values.data(), values.size(), reps,
                     c.policy.empty() ? "all" : c.policy.c_str(), &csv));
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  const std::string path = (std::filesystem::path(out) / "sweep.csv").string();
  std::ofstream f(path, std::ios::binary);
  f << csv;
  f.close();
  mecsim_string_free(csv);
  mecsim_config_free(cfg);
  if (!f) {
    std::fprintf(stderr, "mecsim: cannot write %s\n", path.c_str());
    return 3;
  }
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

void on_criterion(int id, const char* name, int passed, const char* detail, double seconds, void*) {
  std::printf("[%s] %2d %-26s (%.2fs) %s\n", passed ? "PASS" : "FAIL", id, name, seconds, detail);
  std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Edge-cloud task offloading simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mecsim_version()));

  Common run_opts;
  std::string run_out = "out";
  auto* run = app.add_subcommand("run", "Simulate one or more policies");
  add_common(run, run_opts);
  run->add_option("--policy", run_opts.policy, "Policy name, comma list, or 'all'");
  run->add_option("--out", run_out, "Output directory");

  Common sweep_opts;
  std::string axis;
  std::vector<double> values;
  int reps = 1;
  std::string sweep_out = "out";
  auto* sw = app.add_subcommand("sweep", "Parameter sweep with paired replications");
  add_common(sw, sweep_opts);
  sw->add_option("--axis", axis, "Swept parameter")
      ->required()
      ->check(CLI::IsMember({"V", "bandwidth", "capacity", "ud_count"}));
  sw->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sw->add_option("--reps", reps, "Replications")->check(CLI::PositiveNumber);
  sw->add_option("--policy", sweep_opts.policy, "Policy name, comma list, or 'all' (default)");
  sw->add_option("--out", sweep_out, "Output directory");

  long long val_seed = 20240601;
  int val_threads = 4;
  auto* val = app.add_subcommand("validate", "Run the acceptance suite");
  val->add_option("--seed", val_seed, "Fuzz seed")->check(CLI::NonNegativeNumber);
  val->add_option("--threads", val_threads, "Threads for the determinism check")->check(CLI::PositiveNumber);

  std::string report_in;
  auto* rep = app.add_subcommand("report", "Render report.md from a run directory");
  rep->add_option("--in", report_in, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_opts, run_out);
  if (sw->parsed()) return cmd_sweep(sweep_opts, axis, values, reps, sweep_out);
  if (val->parsed()) {
    int failures = 0;
    check(mecsim_validate(static_cast<uint64_t>(val_seed), val_threads, on_criterion, nullptr, &failures));
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
  }
  if (rep->parsed()) {
    char* text = nullptr;
    check(mecsim_report(report_in.c_str(), &text));
    std::fputs(text, stdout);
    mecsim_string_free(text);
  }
  return 0;
}
