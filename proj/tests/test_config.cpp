#include <cmath>

#include "doctest.h"
#include "mecsim/config.hpp"
#include "mecsim/error.hpp"

using namespace mecsim;

TEST_CASE("default profile") {
  const SimConfig c = default_config();
  CHECK(c.num_servers == 4);
  CHECK(c.uds_per_server == 50);
  CHECK(c.connection_capacity == 30);
  CHECK(c.bandwidth == 20e6);
  CHECK(c.computation_intensity == 1000.0);
  CHECK(c.noise_power == doctest::Approx(1e-3 * std::pow(10.0, -9.8)).epsilon(1e-12));
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("desk profile keeps the per-server load of the full profile") {
  const SimConfig d = desk_config();
  const SimConfig f = default_config();
  const double k = static_cast<double>(d.uds_per_server) / f.uds_per_server;
  CHECK(d.num_servers == 2);
  CHECK(d.horizon == 50);
  CHECK(d.connection_capacity == doctest::Approx(f.connection_capacity * k));
  CHECK(d.server_cpu == doctest::Approx(f.server_cpu * k));
  CHECK(d.cloud_rate == doctest::Approx(f.cloud_rate * k));
}

TEST_CASE("policy names") {
  for (Policy p : kAllPolicies) CHECK(parse_policy(policy_name(p)) == p);
  CHECK(parse_policy("gjtora") == Policy::kGjtora);
  CHECK_FALSE(parse_policy("BEST").has_value());
}

TEST_CASE("json round trip") {
  SimConfig c = desk_config();
  c.policy = Policy::kSsc;
  c.task_size_range = {5e4, 6e5};
  c.rng_seed = 0xfeedfacecafebeefULL;
  const SimConfig back = config_from_json(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(back.rng_seed == c.rng_seed);
  CHECK(back.policy == Policy::kSsc);
}

TEST_CASE("json overlays the base") {
  const SimConfig c = config_from_json(R"({"horizon": 7, "policy": "RO"})", desk_config());
  CHECK(c.horizon == 7);
  CHECK(c.policy == Policy::kRo);
  CHECK(c.num_servers == 2);
}

TEST_CASE("invalid configs name the field") {
  auto field_of = [](const std::string& json) {
    try {
      config_from_json(json);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of(R"({"bogus": 1})") == "bogus");
  CHECK(field_of(R"({"slot_duration": 0})") == "slot_duration");
  CHECK(field_of(R"({"mobility_memory": 1.5})") == "mobility_memory");
  CHECK(field_of(R"({"task_size_range": [10, 1]})") == "task_size_range");
  CHECK(field_of(R"({"connection_capacity": -1})") == "connection_capacity");
  CHECK(field_of(R"({"lyapunov_v": -2})") == "lyapunov_v");
  CHECK(field_of(R"({"bandwidth": "wide"})") == "bandwidth");
  CHECK(field_of(R"({"horizon": 2.5})") == "horizon");
  CHECK(field_of(R"({"policy": "FASTEST"})") == "policy");
  CHECK_THROWS_AS(config_from_json("[1,2]"), Error);
  CHECK_THROWS_AS(config_from_json("{not json"), Error);
}

TEST_CASE("set_config_field") {
  SimConfig c;
  set_config_field(c, "lyapunov_v", "25");
  set_config_field(c, "ud_cpu_range", "[1.5e9, 1.5e9]");
  set_config_field(c, "ga_population", "10");
  CHECK(c.lyapunov_v == 25.0);
  CHECK(c.ud_cpu_range.min == 1.5e9);
  CHECK(c.genetic.population == 10);
  CHECK_THROWS_AS(set_config_field(c, "nope", "1"), ConfigError);
  CHECK_THROWS_AS(set_config_field(c, "horizon", "{"), ConfigError);
}

TEST_CASE("load_config reports the path") {
  try {
    load_config("/nonexistent/mecsim.json");
    FAIL("expected IoError");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/mecsim.json") != std::string::npos);
  }
}
