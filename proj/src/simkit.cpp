#include "mecsim/simkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "mecsim/channel.hpp"
#include "mecsim/energy.hpp"
#include "mecsim/error.hpp"
#include "mecsim/orchestrator.hpp"
#include "mecsim/queueing.hpp"
#include "mecsim/rng.hpp"
#include "mecsim/scenario.hpp"

namespace mecsim {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::kParse, "csv: unterminated quote");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kParse, "csv: not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error(ErrorCode::kParse, "csv: not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  const double v = to_double(s);
  if (v != std::floor(v)) throw Error(ErrorCode::kParse, "csv: not an integer: '" + s + "'");
  return static_cast<int>(v);
}

const std::vector<std::string> kFixedColumns = {"t",          "policy",     "run",
                                                "total_energy", "objective", "violations",
                                                "deadline_misses", "bound_b"};
const std::vector<std::string> kServerColumns = {"q_e", "q_c", "z_e", "z_c",
                                                 "delay_e", "delay_c", "capacity"};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

template <typename F>
void parallel_for(int n, int threads, F&& body) {
  const int workers = std::min(threads, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (int i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct UdSlot {
  Task task;
  ChannelRealization channel;
};

}  // namespace

RunResult run_simulation(const SimConfig& cfg, int run) {
  const auto start = std::chrono::steady_clock::now();
  World world = build_world(cfg);
  const int m_count = cfg.num_servers;
  const double unit = cfg.queue_unit_bits;
  const std::string policy = std::string(policy_name(cfg.policy));

  ServerParams params;
  params.edge_service = cfg.edge_service_bits() / unit;
  params.cloud_service = cfg.cloud_service_bits() / unit;
  params.delay_bound_edge = cfg.delay_bound_edge;
  params.delay_bound_cloud = cfg.delay_bound_cloud;
  const std::vector<ServerParams> all_params(static_cast<std::size_t>(m_count), params);

  std::vector<QueueState> queues(static_cast<std::size_t>(m_count));
  RunResult result;
  result.table.num_servers = m_count;
  int drift_violations = 0;
  int clamps = 0;

  for (int t = 1; t <= cfg.horizon; ++t) {
    std::vector<UdSlot> ud_slot(world.uds.size());
    for (const UdState& ud : world.uds) {
      UdSlot& us = ud_slot[static_cast<std::size_t>(ud.id)];
      us.task = sample_task(cfg, ud.id, t);
      us.channel = sample_channel(cfg, world, ud.id, t);
      if (us.channel.distance < cfg.ref_distance) ++clamps;
    }

    std::vector<ServerSlot> slots(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
      ServerSlot& s = slots[static_cast<std::size_t>(m)];
      s.server = m;
      s.t = t;
      s.bandwidth = cfg.bandwidth;
      s.queue = queues[static_cast<std::size_t>(m)];
      s.queue.delay_e.clear();
      s.queue.delay_c.clear();
      s.params = params;
      s.capacity = cfg.connection_capacity;
      s.v = cfg.lyapunov_v;
      s.unit = unit;
      for (int id : world.coverage[static_cast<std::size_t>(m)]) {
        const UdState& ud = world.uds[static_cast<std::size_t>(id)];
        const UdSlot& us = ud_slot[static_cast<std::size_t>(id)];
        s.sizes.push_back(us.task.size);
        s.local_energy.push_back(local_energy(ud.profile, us.task, false));
        s.betas.push_back(us.task.size > 0.0
                              ? beta_coefficient(ud.profile.transmit_power, us.task.size,
                                                 us.channel.gain, cfg.noise_power)
                              : kUnreachable);
      }
    }

    std::vector<PolicyOutcome> out(static_cast<std::size_t>(m_count));
    parallel_for(m_count, cfg.threads, [&](int m) {
      const ServerSlot& s = slots[static_cast<std::size_t>(m)];
      out[static_cast<std::size_t>(m)] = decide(cfg.policy, s, cfg);
      if (cfg.validation_mode) check_decision(s, out[static_cast<std::size_t>(m)].decision);
    });

    SlotMetrics row;
    row.t = t;
    row.policy = policy;
    row.run = run;
    std::vector<Arrivals> arrivals(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      const Decision& d = out[mi].decision;
      const auto& members = world.coverage[mi];
      for (std::size_t k = 0; k < members.size(); ++k) {
        const UdState& ud = world.uds[static_cast<std::size_t>(members[k])];
        const UdSlot& us = ud_slot[static_cast<std::size_t>(members[k])];
        const bool off = d.x_m[k] == 1;
        const double rate = transmission_rate(d.a[k], cfg.bandwidth, ud.profile.transmit_power,
                                              us.channel.gain, cfg.noise_power);
        row.total_energy += local_energy(ud.profile, us.task, off) +
                            offload_energy(ud.profile.transmit_power, us.task.size, rate, off);
        if (!off && ud.profile.cpu * cfg.slot_duration < us.task.size * us.task.intensity) {
          ++row.deadline_misses;
        }
      }
      Arrivals a = split_arrivals(d.x_m, d.x_c, slots[mi].sizes);
      a.edge /= unit;
      a.cloud /= unit;
      arrivals[mi] = a;
      row.objective += out[mi].objective.j;
      row.capacity.push_back(out[mi].chosen_n);
    }

    std::vector<QueueState> next(static_cast<std::size_t>(m_count));
    for (int m = 0; m < m_count; ++m) {
      const auto mi = static_cast<std::size_t>(m);
      next[mi] = advance_queues(queues[mi], arrivals[mi], params);
    }
    const LyapunovSnapshot snap =
        lyapunov_accounting(queues, next, arrivals, all_params, row.total_energy, cfg.lyapunov_v);
    if (!snap.holds) {
      ++drift_violations;
      if (cfg.validation_mode) {
        throw ConsistencyError("drift bound violated at slot " + std::to_string(t));
      }
    }
    row.bound_b = snap.bound_b;
    queues = std::move(next);

    for (int m = 0; m < m_count; ++m) {
      const QueueState& q = queues[static_cast<std::size_t>(m)];
      row.q_e.push_back(q.q_e * unit);
      row.q_c.push_back(q.q_c * unit);
      row.z_e.push_back(q.z_e);
      row.z_c.push_back(q.z_c);
      row.delay_e.push_back(q.delay_e.back());
      row.delay_c.push_back(q.delay_c.back());
      if (q.delay_e.back() > cfg.delay_bound_edge) ++row.violations;
      if (q.delay_c.back() > cfg.delay_bound_cloud) ++row.violations;
    }
    step_world_mobility(world, t);
    result.table.rows.push_back(std::move(row));
  }

  result.summary = summarize(result.table, policy, run);
  result.summary.seed = cfg.rng_seed;
  result.summary.drift_violations = drift_violations;
  result.summary.distance_clamps = clamps;
  result.summary.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<RunResult> run_policies(const SimConfig& cfg, const std::vector<Policy>& policies,
                                    int run) {
  std::vector<RunResult> out;
  for (Policy p : policies) {
    SimConfig c = cfg;
    c.policy = p;
    out.push_back(run_simulation(c, run));
  }
  return out;
}

RunSummary summarize(const SlotTable& table, const std::string& policy, int run) {
  RunSummary s;
  s.policy = policy;
  s.run = run;
  s.slots = static_cast<int>(table.rows.size());
  if (table.rows.empty()) return s;
  const double n = static_cast<double>(table.rows.size());
  const double m = std::max(1, table.num_servers);
  for (const SlotMetrics& r : table.rows) {
    s.avg_energy += r.total_energy;
    s.avg_objective += r.objective;
    s.mean_bound_b += r.bound_b;
    double de = 0.0;
    double dc = 0.0;
    double z = 0.0;
    for (int k = 0; k < table.num_servers; ++k) {
      de += r.delay_e[static_cast<std::size_t>(k)];
      dc += r.delay_c[static_cast<std::size_t>(k)];
      z += r.z_e[static_cast<std::size_t>(k)] + r.z_c[static_cast<std::size_t>(k)];
    }
    s.avg_delay_e += de / m;
    s.avg_delay_c += dc / m;
    s.mean_z_backlog += z;
  }
  s.avg_energy /= n;
  s.avg_objective /= n;
  s.mean_bound_b /= n;
  s.avg_delay_e /= n;
  s.avg_delay_c /= n;
  s.mean_z_backlog /= n;
  return s;
}

std::string slots_to_csv(const SlotTable& table) {
  std::string out;
  for (std::size_t i = 0; i < kFixedColumns.size(); ++i) {
    if (i) out += ',';
    out += kFixedColumns[i];
  }
  for (int m = 0; m < table.num_servers; ++m) {
    for (const std::string& c : kServerColumns) out += ',' + c + '_' + std::to_string(m);
  }
  out += "\r\n";
  for (const SlotMetrics& r : table.rows) {
    out += std::to_string(r.t) + ',' + quote(r.policy) + ',' + std::to_string(r.run) + ',' +
           fmt(r.total_energy) + ',' + fmt(r.objective) + ',' + std::to_string(r.violations) + ',' +
           std::to_string(r.deadline_misses) + ',' + fmt(r.bound_b);
    for (int m = 0; m < table.num_servers; ++m) {
      const auto k = static_cast<std::size_t>(m);
      out += ',' + fmt(r.q_e[k]) + ',' + fmt(r.q_c[k]) + ',' + fmt(r.z_e[k]) + ',' + fmt(r.z_c[k]) +
             ',' + fmt(r.delay_e[k]) + ',' + fmt(r.delay_c[k]) + ',' + std::to_string(r.capacity[k]);
    }
    out += "\r\n";
  }
  return out;
}

SlotTable slots_from_csv(const std::string& text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kParse, "csv: missing header");
  const auto& header = rows[0];
  const std::size_t fixed = kFixedColumns.size();
  const std::size_t per = kServerColumns.size();
  if (header.size() < fixed || (header.size() - fixed) % per != 0) {
    throw Error(ErrorCode::kParse, "csv: unexpected column count");
  }
  SlotTable table;
  table.num_servers = static_cast<int>((header.size() - fixed) / per);
  for (std::size_t i = 0; i < fixed; ++i) {
    if (header[i] != kFixedColumns[i]) throw Error(ErrorCode::kParse, "csv: bad header '" + header[i] + "'");
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& f = rows[r];
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kParse, "csv: row " + std::to_string(r) + " has wrong width");
    }
    SlotMetrics row;
    row.t = to_int(f[0]);
    row.policy = f[1];
    row.run = to_int(f[2]);
    row.total_energy = to_double(f[3]);
    row.objective = to_double(f[4]);
    row.violations = to_int(f[5]);
    row.deadline_misses = to_int(f[6]);
    row.bound_b = to_double(f[7]);
    for (int m = 0; m < table.num_servers; ++m) {
      const std::size_t b = fixed + static_cast<std::size_t>(m) * per;
      row.q_e.push_back(to_double(f[b]));
      row.q_c.push_back(to_double(f[b + 1]));
      row.z_e.push_back(to_double(f[b + 2]));
      row.z_c.push_back(to_double(f[b + 3]));
      row.delay_e.push_back(to_double(f[b + 4]));
      row.delay_c.push_back(to_double(f[b + 5]));
      row.capacity.push_back(to_int(f[b + 6]));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_slots_csv(const SlotTable& table, const std::string& path) {
  write_file(path, slots_to_csv(table));
}

std::string summaries_to_json(const std::vector<RunSummary>& runs, const SimConfig& cfg) {
  json doc;
  doc["config"] = json::parse(config_to_json(cfg, -1));
  doc["runs"] = json::array();
  for (const RunSummary& s : runs) {
    doc["runs"].push_back({{"policy", s.policy},
                           {"run", s.run},
                           {"seed", s.seed},
                           {"slots", s.slots},
                           {"avg_energy", s.avg_energy},
                           {"avg_delay_e", s.avg_delay_e},
                           {"avg_delay_c", s.avg_delay_c},
                           {"avg_objective", s.avg_objective},
                           {"mean_bound_b", s.mean_bound_b},
                           {"mean_z_backlog", s.mean_z_backlog},
                           {"drift_violations", s.drift_violations},
                           {"distance_clamps", s.distance_clamps},
                           {"wall_time", s.wall_time}});
  }
  return doc.dump(2) + "\n";
}

std::vector<RunSummary> summaries_from_json(const std::string& text) {
  std::vector<RunSummary> out;
  try {
    const json doc = json::parse(text);
    for (const json& r : doc.at("runs")) {
      RunSummary s;
      s.policy = r.at("policy").get<std::string>();
      s.run = r.at("run").get<int>();
      s.seed = r.at("seed").get<std::uint64_t>();
      s.slots = r.at("slots").get<int>();
      s.avg_energy = r.at("avg_energy").get<double>();
      s.avg_delay_e = r.at("avg_delay_e").get<double>();
      s.avg_delay_c = r.at("avg_delay_c").get<double>();
      s.avg_objective = r.at("avg_objective").get<double>();
      s.mean_bound_b = r.at("mean_bound_b").get<double>();
      s.mean_z_backlog = r.at("mean_z_backlog").get<double>();
      s.drift_violations = r.value("drift_violations", 0);
      s.distance_clamps = r.value("distance_clamps", 0);
      s.wall_time = r.value("wall_time", 0.0);
      out.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("summary: ") + e.what());
  }
  return out;
}

std::string render_report(const std::vector<RunSummary>& runs) {
  struct Acc {
    int n = 0;
    double energy = 0.0, de = 0.0, dc = 0.0, b = 0.0, z = 0.0;
  };
  std::map<std::string, Acc> by;
  std::vector<std::string> order;
  for (const RunSummary& s : runs) {
    if (!by.count(s.policy)) order.push_back(s.policy);
    Acc& a = by[s.policy];
    ++a.n;
    a.energy += s.avg_energy;
    a.de += s.avg_delay_e;
    a.dc += s.avg_delay_c;
    a.b += s.mean_bound_b;
    a.z += s.mean_z_backlog;
  }
  auto num = [](double v, int prec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return std::string(buf);
  };
  std::string out = "# Run report\n\n";
  out += "| policy | runs | avg energy (J/slot) | edge delay (slots) | cloud delay (slots) | mean B | mean Z backlog |\n";
  out += "|---|---:|---:|---:|---:|---:|---:|\n";
  for (const std::string& p : order) {
    const Acc& a = by[p];
    const double n = a.n;
    out += "| " + p + " | " + std::to_string(a.n) + " | " + num(a.energy / n, 6) + " | " +
           num(a.de / n, 4) + " | " + num(a.dc / n, 4) + " | " + num(a.b / n, 4) + " | " +
           num(a.z / n, 4) + " |\n";
  }
  const auto ojcta = by.find("OJCTA");
  if (ojcta != by.end() && by.size() > 1) {
    const double e = ojcta->second.energy / ojcta->second.n;
    out += "\n## OJCTA energy reduction\n\n";
    for (const std::string& p : order) {
      if (p == "OJCTA") continue;
      const double other = by[p].energy / by[p].n;
      const double pct = other > 0.0 ? 100.0 * (other - e) / other : 0.0;
      out += "- vs " + p + ": " + num(pct, 2) + "%\n";
    }
  }
  return out;
}

void write_run(const std::string& dir, const std::vector<RunResult>& results, const SimConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir, "cannot create directory: " + ec.message());
  SlotTable all;
  all.num_servers = cfg.num_servers;
  std::vector<RunSummary> sums;
  for (const RunResult& r : results) {
    all.rows.insert(all.rows.end(), r.table.rows.begin(), r.table.rows.end());
    sums.push_back(r.summary);
  }
  const std::filesystem::path base(dir);
  write_file((base / "slots.csv").string(), slots_to_csv(all));
  write_file((base / "summary.json").string(), summaries_to_json(sums, cfg));
  write_file((base / "report.md").string(), render_report(sums));
}

std::string report_from_dir(const std::string& dir) {
  const std::string path = (std::filesystem::path(dir) / "summary.json").string();
  return render_report(summaries_from_json(read_file(path)));
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "V") return SweepAxis::kV;
  if (name == "bandwidth") return SweepAxis::kBandwidth;
  if (name == "capacity") return SweepAxis::kCapacity;
  if (name == "ud_count") return SweepAxis::kUdCount;
  throw Error(ErrorCode::kInvalidArgument, "unknown sweep axis '" + name + "'");
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kV: return "V";
    case SweepAxis::kBandwidth: return "bandwidth";
    case SweepAxis::kCapacity: return "capacity";
    case SweepAxis::kUdCount: return "ud_count";
  }
  return "?";
}

void apply_axis(SimConfig& cfg, SweepAxis axis, double value) {
  auto whole = [&](const char* field) {
    if (value != std::floor(value)) throw ConfigError(field, "sweep value must be an integer");
    return static_cast<int>(value);
  };
  switch (axis) {
    case SweepAxis::kV: cfg.lyapunov_v = value; break;
    case SweepAxis::kBandwidth: cfg.bandwidth = value; break;
    case SweepAxis::kCapacity: cfg.connection_capacity = whole("connection_capacity"); break;
    case SweepAxis::kUdCount: cfg.uds_per_server = whole("uds_per_server"); break;
  }
  validate(cfg);
}

std::vector<SweepRow> sweep(const SimConfig& cfg, SweepAxis axis, const std::vector<double>& values,
                            int replications, const std::vector<Policy>& policies) {
  if (values.empty()) throw Error(ErrorCode::kInvalidArgument, "sweep needs at least one value");
  if (replications < 1) throw Error(ErrorCode::kInvalidArgument, "sweep needs replications >= 1");
  struct Point {
    double value;
    int rep;
  };
  std::vector<Point> points;
  for (double v : values) {
    for (int r = 0; r < replications; ++r) points.push_back({v, r});
  }
  for (double v : values) {
    SimConfig probe = cfg;
    apply_axis(probe, axis, v);
  }
  std::vector<std::vector<SweepRow>> per(points.size());
  parallel_for(static_cast<int>(points.size()), cfg.threads, [&](int i) {
    const Point& p = points[static_cast<std::size_t>(i)];
    SimConfig c = cfg;
    c.threads = 1;
    apply_axis(c, axis, p.value);
    c.rng_seed = derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(p.rep));
    for (const RunResult& r : run_policies(c, policies, p.rep)) {
      per[static_cast<std::size_t>(i)].push_back({axis_name(axis), p.value, p.rep, c.rng_seed, r.summary});
    }
  });
  std::vector<SweepRow> rows;
  for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.summary.policy != b.summary.policy) return a.summary.policy < b.summary.policy;
    return a.replication < b.replication;
  });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "axis,value,policy,replication,seed,avg_energy,avg_delay_e,avg_delay_c,avg_objective,"
      "mean_bound_b,mean_z_backlog,drift_violations\r\n";
  for (const SweepRow& r : rows) {
    const RunSummary& s = r.summary;
    out += quote(r.axis) + ',' + fmt(r.value) + ',' + quote(s.policy) + ',' +
           std::to_string(r.replication) + ',' + std::to_string(r.seed) + ',' + fmt(s.avg_energy) +
           ',' + fmt(s.avg_delay_e) + ',' + fmt(s.avg_delay_c) + ',' + fmt(s.avg_objective) + ',' +
           fmt(s.mean_bound_b) + ',' + fmt(s.mean_z_backlog) + ',' +
           std::to_string(s.drift_violations) + "\r\n";
  }
  return out;
}

}  // namespace mecsim
