#include "mecsim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "mecsim/error.hpp"

namespace mecsim {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 7> kPolicyNames = {"OJCTA", "LC",  "RO",    "ECF",
                                                         "SSC",   "NCC", "GJTORA"};

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

Range as_range(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(key, "expected [min, max]");
  }
  return Range{v[0].get<double>(), v[1].get<double>()};
}

json range_json(const Range& r) { return json::array({r.min, r.max}); }

struct Field {
  std::function<void(SimConfig&, const json&, const std::string&)> set;
  std::function<json(const SimConfig&)> get;
};

#define MECSIM_NUM(name)                                                                 \
  {#name, Field{[](SimConfig& c, const json& v, const std::string& k) {                  \
                  c.name = as_number(v, k);                                              \
                },                                                                       \
                [](const SimConfig& c) { return json(c.name); }}}
#define MECSIM_INT(name)                                                                 \
  {#name, Field{[](SimConfig& c, const json& v, const std::string& k) {                  \
                  c.name = as_int(v, k);                                                 \
                },                                                                       \
                [](const SimConfig& c) { return json(c.name); }}}
#define MECSIM_BOOL(name)                                                                \
  {#name, Field{[](SimConfig& c, const json& v, const std::string& k) {                  \
                  c.name = as_bool(v, k);                                                \
                },                                                                       \
                [](const SimConfig& c) { return json(c.name); }}}
#define MECSIM_RANGE(name)                                                               \
  {#name, Field{[](SimConfig& c, const json& v, const std::string& k) {                  \
                  c.name = as_range(v, k);                                               \
                },                                                                       \
                [](const SimConfig& c) { return range_json(c.name); }}}

const std::map<std::string, Field, std::less<>>& fields() {
  static const std::map<std::string, Field, std::less<>> table = {
      MECSIM_INT(num_servers),
      MECSIM_INT(uds_per_server),
      MECSIM_NUM(area_side),
      MECSIM_INT(horizon),
      MECSIM_NUM(slot_duration),
      MECSIM_NUM(lyapunov_v),
      MECSIM_INT(connection_capacity),
      MECSIM_NUM(bandwidth),
      MECSIM_NUM(server_cpu),
      MECSIM_NUM(cloud_rate),
      MECSIM_NUM(delay_bound_edge),
      MECSIM_NUM(delay_bound_cloud),
      MECSIM_NUM(computation_intensity),
      MECSIM_RANGE(task_size_range),
      MECSIM_RANGE(ud_cpu_range),
      MECSIM_RANGE(transmit_power_range),
      MECSIM_RANGE(distance_range),
      MECSIM_NUM(capacitance),
      MECSIM_NUM(noise_power),
      MECSIM_NUM(carrier_freq),
      MECSIM_NUM(ref_distance),
      MECSIM_NUM(path_loss_exp),
      MECSIM_NUM(shadow_sigma),
      MECSIM_NUM(rayleigh_alpha),
      MECSIM_NUM(mobility_memory),
      MECSIM_NUM(mobility_sigma),
      MECSIM_NUM(mobility_mean_speed),
      {"rng_seed", Field{[](SimConfig& c, const json& v, const std::string& k) {
                           if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                             throw ConfigError(k, "expected a non-negative integer");
                           }
                           c.rng_seed = v.get<std::uint64_t>();
                         },
                         [](const SimConfig& c) { return json(c.rng_seed); }}},
      {"policy", Field{[](SimConfig& c, const json& v, const std::string& k) {
                         if (!v.is_string()) throw ConfigError(k, "expected a policy name");
                         auto p = parse_policy(v.get<std::string>());
                         if (!p) throw ConfigError(k, "unknown policy '" + v.get<std::string>() + "'");
                         c.policy = *p;
                       },
                       [](const SimConfig& c) { return json(std::string(policy_name(c.policy))); }}},
      MECSIM_NUM(queue_unit_bits),
      MECSIM_INT(threads),
      MECSIM_BOOL(random_initial_matching),
      MECSIM_BOOL(randomized_rounding),
      MECSIM_NUM(relaxation_tol),
      MECSIM_BOOL(validation_mode),
      {"ga_population", Field{[](SimConfig& c, const json& v, const std::string& k) {
                                c.genetic.population = as_int(v, k);
                              },
                              [](const SimConfig& c) { return json(c.genetic.population); }}},
      {"ga_generations", Field{[](SimConfig& c, const json& v, const std::string& k) {
                                 c.genetic.generations = as_int(v, k);
                               },
                               [](const SimConfig& c) { return json(c.genetic.generations); }}},
      {"ga_tournament", Field{[](SimConfig& c, const json& v, const std::string& k) {
                                c.genetic.tournament = as_int(v, k);
                              },
                              [](const SimConfig& c) { return json(c.genetic.tournament); }}},
      {"ga_crossover", Field{[](SimConfig& c, const json& v, const std::string& k) {
                               c.genetic.crossover = as_number(v, k);
                             },
                             [](const SimConfig& c) { return json(c.genetic.crossover); }}},
      {"ga_mutation", Field{[](SimConfig& c, const json& v, const std::string& k) {
                              c.genetic.mutation = as_number(v, k);
                            },
                            [](const SimConfig& c) { return json(c.genetic.mutation); }}},
  };
  return table;
}

#undef MECSIM_NUM
#undef MECSIM_INT
#undef MECSIM_BOOL
#undef MECSIM_RANGE

void require(bool ok, const char* field, const char* why) {
  if (!ok) throw ConfigError(field, why);
}

void require_range(const Range& r, const char* field, bool strictly_positive) {
  require(std::isfinite(r.min) && std::isfinite(r.max), field, "bounds must be finite");
  require(r.min <= r.max, field, "min must not exceed max");
  if (strictly_positive) {
    require(r.min > 0.0, field, "values must be > 0");
  } else {
    require(r.min >= 0.0, field, "values must be >= 0");
  }
}

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool nonnegative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

std::string_view policy_name(Policy p) noexcept {
  return kPolicyNames[static_cast<std::size_t>(p)];
}

std::optional<Policy> parse_policy(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
    if (kPolicyNames[i].size() != name.size()) continue;
    bool same = true;
    for (std::size_t j = 0; j < name.size() && same; ++j) {
      same = std::toupper(static_cast<unsigned char>(name[j])) == kPolicyNames[i][j];
    }
    if (same) return static_cast<Policy>(i);
  }
  return std::nullopt;
}

SimConfig default_config() { return SimConfig{}; }

SimConfig desk_config() {
  SimConfig c;
  c.num_servers = 2;
  c.uds_per_server = 20;
  c.horizon = 50;
  c.connection_capacity = 12;
  c.server_cpu = 2e9;
  c.cloud_rate = 3.2e6;
  return c;
}

void validate(const SimConfig& c) {
  require(c.num_servers >= 1, "num_servers", "must be >= 1");
  require(c.uds_per_server >= 0, "uds_per_server", "must be >= 0");
  require(positive(c.area_side), "area_side", "must be > 0");
  require(c.horizon >= 0, "horizon", "must be >= 0");
  require(positive(c.slot_duration), "slot_duration", "must be > 0");
  require(nonnegative(c.lyapunov_v), "lyapunov_v", "must be >= 0");
  require(c.connection_capacity >= 0, "connection_capacity", "must be >= 0");
  require(positive(c.bandwidth), "bandwidth", "must be > 0");
  require(positive(c.server_cpu), "server_cpu", "must be > 0");
  require(positive(c.cloud_rate), "cloud_rate", "must be > 0");
  require(nonnegative(c.delay_bound_edge), "delay_bound_edge", "must be >= 0");
  require(nonnegative(c.delay_bound_cloud), "delay_bound_cloud", "must be >= 0");
  require(positive(c.computation_intensity), "computation_intensity", "must be > 0");
  require_range(c.task_size_range, "task_size_range", false);
  require_range(c.ud_cpu_range, "ud_cpu_range", true);
  require_range(c.transmit_power_range, "transmit_power_range", true);
  require_range(c.distance_range, "distance_range", true);
  require(positive(c.capacitance), "capacitance", "must be > 0");
  require(positive(c.noise_power), "noise_power", "must be > 0");
  require(positive(c.carrier_freq), "carrier_freq", "must be > 0");
  require(positive(c.ref_distance), "ref_distance", "must be > 0");
  require(nonnegative(c.path_loss_exp), "path_loss_exp", "must be >= 0");
  require(nonnegative(c.shadow_sigma), "shadow_sigma", "must be >= 0");
  require(positive(c.rayleigh_alpha), "rayleigh_alpha", "must be > 0");
  require(std::isfinite(c.mobility_memory) && c.mobility_memory >= 0.0 && c.mobility_memory <= 1.0,
          "mobility_memory", "must lie in [0, 1]");
  require(nonnegative(c.mobility_sigma), "mobility_sigma", "must be >= 0");
  require(nonnegative(c.mobility_mean_speed), "mobility_mean_speed", "must be >= 0");
  require(positive(c.queue_unit_bits), "queue_unit_bits", "must be > 0");
  require(c.threads >= 1, "threads", "must be >= 1");
  require(std::isfinite(c.relaxation_tol) && c.relaxation_tol > 0.0 && c.relaxation_tol < 1.0,
          "relaxation_tol", "must lie in (0, 1)");
  require(c.genetic.population >= 2, "ga_population", "must be >= 2");
  require(c.genetic.generations >= 0, "ga_generations", "must be >= 0");
  require(c.genetic.tournament >= 1, "ga_tournament", "must be >= 1");
  require(c.genetic.crossover >= 0.0 && c.genetic.crossover <= 1.0, "ga_crossover",
          "must lie in [0, 1]");
  require(c.genetic.mutation >= 0.0 && c.genetic.mutation <= 1.0, "ga_mutation",
          "must lie in [0, 1]");
}

void set_config_field(SimConfig& cfg, std::string_view key, std::string_view json_value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw ConfigError(std::string(key), "unknown key");
  json v;
  try {
    v = json::parse(json_value);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(key), std::string("malformed value: ") + e.what());
  }
  it->second.set(cfg, v, it->first);
}

SimConfig config_from_json(std::string_view text, const SimConfig& base) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kParse, "config must be a JSON object");
  SimConfig cfg = base;
  for (const auto& [key, value] : doc.items()) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError(key, "unknown key");
    it->second.set(cfg, value, key);
  }
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path, const SimConfig& base) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), base);
}

std::string config_to_json(const SimConfig& cfg, int indent) {
  json doc = json::object();
  for (const auto& [key, field] : fields()) doc[key] = field.get(cfg);
  return doc.dump(indent);
}

}  // namespace mecsim
