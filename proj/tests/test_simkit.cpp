#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mecsim/config.hpp"
#include "mecsim/energy.hpp"
#include "mecsim/error.hpp"
#include "mecsim/rng.hpp"
#include "mecsim/scenario.hpp"
#include "mecsim/simkit.hpp"

using namespace mecsim;

namespace {

SimConfig small(Policy p = Policy::kOjcta, int horizon = 10) {
  SimConfig cfg = desk_config();
  cfg.horizon = horizon;
  cfg.policy = p;
  cfg.genetic.population = 10;
  cfg.genetic.generations = 5;
  return cfg;
}

}  // namespace

TEST_CASE("local computing energy matches the closed form") {
  const SimConfig cfg = small(Policy::kLc, 15);
  const RunResult r = run_simulation(cfg);
  const World w = build_world(cfg);
  double sum = 0.0;
  for (int t = 1; t <= cfg.horizon; ++t) {
    for (const UdState& ud : w.uds) {
      const Task task = sample_task(cfg, ud.id, t);
      sum += ud.profile.capacitance * ud.profile.cpu * ud.profile.cpu * task.size * task.intensity;
    }
  }
  CHECK(r.summary.avg_energy == doctest::Approx(sum / cfg.horizon).epsilon(1e-9));
  for (const SlotMetrics& row : r.table.rows) {
    for (double q : row.q_e) CHECK(q == 0.0);
  }
}

TEST_CASE("zero horizon") {
  const RunResult r = run_simulation(small(Policy::kOjcta, 0));
  CHECK(r.table.rows.empty());
  CHECK(r.summary.slots == 0);
  CHECK(r.summary.avg_energy == 0.0);
  const std::string csv = slots_to_csv(r.table);
  CHECK(csv.find("\r\n") == csv.size() - 2);
  CHECK(slots_from_csv(csv).rows.empty());
}

TEST_CASE("same config and seed give identical CSV bytes") {
  SimConfig cfg = small(Policy::kOjcta);
  const std::string a = slots_to_csv(run_simulation(cfg).table);
  cfg.threads = 3;
  const std::string b = slots_to_csv(run_simulation(cfg).table);
  CHECK(a == b);
  cfg.rng_seed = 99;
  CHECK(slots_to_csv(run_simulation(cfg).table) != a);
}

TEST_CASE("CSV round trip and summary means") {
  const RunResult r = run_simulation(small(Policy::kGjtora), 2);
  const SlotTable back = slots_from_csv(slots_to_csv(r.table));
  REQUIRE(back.rows.size() == r.table.rows.size());
  CHECK(back.num_servers == r.table.num_servers);
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    const SlotMetrics& a = r.table.rows[i];
    const SlotMetrics& b = back.rows[i];
    CHECK(a.t == b.t);
    CHECK(a.policy == b.policy);
    CHECK(a.run == b.run);
    CHECK(a.total_energy == b.total_energy);
    CHECK(a.objective == b.objective);
    CHECK(a.violations == b.violations);
    CHECK(a.deadline_misses == b.deadline_misses);
    CHECK(a.bound_b == b.bound_b);
    CHECK(a.q_e == b.q_e);
    CHECK(a.q_c == b.q_c);
    CHECK(a.z_e == b.z_e);
    CHECK(a.z_c == b.z_c);
    CHECK(a.delay_e == b.delay_e);
    CHECK(a.delay_c == b.delay_c);
    CHECK(a.capacity == b.capacity);
  }
  CHECK(slots_to_csv(back) == slots_to_csv(r.table));

  double e = 0.0, z = 0.0;
  for (const SlotMetrics& row : r.table.rows) {
    e += row.total_energy;
    for (std::size_t m = 0; m < row.z_e.size(); ++m) z += row.z_e[m] + row.z_c[m];
  }
  const double n = static_cast<double>(r.table.rows.size());
  CHECK(r.summary.avg_energy == doctest::Approx(e / n).epsilon(1e-12));
  CHECK(r.summary.mean_z_backlog == doctest::Approx(z / n).epsilon(1e-12));
  CHECK(r.summary.drift_violations == 0);
}

TEST_CASE("CSV parser rejects garbage") {
  CHECK_THROWS(slots_from_csv("not,a,header\r\n1,2,3\r\n"));
}

TEST_CASE("validation mode runs clean for every policy") {
  SimConfig cfg = small(Policy::kOjcta, 6);
  cfg.validation_mode = true;
  for (Policy p : kAllPolicies) {
    cfg.policy = p;
    CHECK_NOTHROW(run_simulation(cfg));
  }
}

TEST_CASE("sweep seeds are paired across policies") {
  SimConfig cfg = small(Policy::kOjcta, 5);
  cfg.threads = 2;
  const std::vector<Policy> pols{Policy::kOjcta, Policy::kLc};
  const auto rows = sweep(cfg, SweepAxis::kV, {5.0, 20.0}, 3, pols);
  CHECK(rows.size() == 2 * 2 * 3);
  std::set<std::uint64_t> seeds;
  for (const SweepRow& r : rows) {
    CHECK(r.seed == derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(r.replication)));
    CHECK(r.axis == "V");
    seeds.insert(r.seed);
  }
  CHECK(seeds.size() == 3);

  const auto one = sweep(cfg, SweepAxis::kCapacity, {4.0}, 1, {Policy::kOjcta});
  REQUIRE(one.size() == 1);
  SimConfig direct = cfg;
  direct.connection_capacity = 4;
  direct.rng_seed = derive_seed(cfg.rng_seed, 0);
  CHECK(one[0].summary.avg_energy == run_simulation(direct).summary.avg_energy);

  const std::string csv = sweep_to_csv(rows);
  CHECK(csv.rfind("axis,", 0) == 0);
  CHECK_THROWS_AS(parse_axis("latency"), Error);
}

TEST_CASE("report compares OJCTA with LC") {
  const SimConfig cfg = small(Policy::kOjcta, 8);
  const auto results = run_policies(cfg, {Policy::kOjcta, Policy::kLc});
  std::vector<RunSummary> sums;
  for (const RunResult& r : results) sums.push_back(r.summary);
  const double pct = 100.0 * (sums[1].avg_energy - sums[0].avg_energy) / sums[1].avg_energy;
  const std::string rep = render_report(sums);
  CHECK(rep.find("vs LC") != std::string::npos);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", pct);
  CHECK(rep.find(buf) != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "mecsim_test_report";
  std::filesystem::remove_all(dir);
  write_run(dir.string(), results, cfg);
  CHECK(std::filesystem::exists(dir / "slots.csv"));
  CHECK(std::filesystem::exists(dir / "summary.json"));
  CHECK(report_from_dir(dir.string()) == rep);
  const auto back = summaries_from_json(summaries_to_json(sums, cfg));
  REQUIRE(back.size() == 2);
  CHECK(back[0].avg_energy == sums[0].avg_energy);
  CHECK(back[1].policy == "LC");
  CHECK_THROWS_AS(report_from_dir((dir / "missing").string()), IoError);
  std::filesystem::remove_all(dir);
}
