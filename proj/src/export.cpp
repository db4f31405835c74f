#include "qbb/export.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace qbb::harness {

using nlohmann::json;

namespace {

constexpr const char* kManifestTag = "qbackbone_manifest";
constexpr int kManifestVersion = 1;

Cell opt(const std::optional<double>& x) { return x ? Cell{*x} : Cell{}; }
Cell count(std::size_t n) { return Cell{static_cast<std::int64_t>(n)}; }

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return {};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

bool wants(Emit emit, Emit part) { return emit == Emit::All || emit == part; }

Table scenario_table(const ResultBundle& b) {
  Table t{"scenarios",
          {"index", "scenario", "altitude_km", "planes", "sats_per_plane", "polar_fraction", "alpha", "policy",
           "stations", "satellites", "city_pairs", "mean_strength"},
          {}};
  for (const auto& r : b.results) {
    const auto& s = r.scenario;
    t.rows.push_back({count(s.index), s.id, s.altitude_km, std::int64_t{s.planes}, std::int64_t{s.sats_per_plane},
                      s.polar_fraction, s.alpha, s.policy, count(r.stations), count(r.satellites),
                      count(r.city_pairs), r.mean_strength});
  }
  return t;
}

Table station_table(const ResultBundle& b) {
  Table t{"stations", {"alpha", "gs_id", "lat_deg", "lon_deg"}, {}};
  std::vector<double> done;
  for (const auto& r : b.results) {
    if (std::find(done.begin(), done.end(), r.scenario.alpha) != done.end()) continue;
    done.push_back(r.scenario.alpha);
    for (const auto& gs : r.station_list) {
      t.rows.push_back({r.scenario.alpha, std::int64_t{gs.gs_id}, rad2deg(gs.lat), rad2deg(gs.lon)});
    }
  }
  return t;
}

Table trace_table(const ResultBundle& b) {
  Table t{"traces", {"scenario", "epoch", "t_s", "lcc_fraction", "city_fraction", "strength", "edges"}, {}};
  const double t0 = b.config.clock.t_start_s, dt = b.config.clock.dt_s;
  for (const auto& r : b.results) {
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
      t.rows.push_back({r.scenario.id, count(k), t0 + static_cast<double>(k) * dt, r.trace.lcc_fraction[k],
                        r.trace.city_fraction[k], r.trace.strength[k], count(r.edge_count[k])});
    }
  }
  return t;
}

Table edge_table(const ResultBundle& b) {
  Table t{"edges", {"scenario", "epoch", "u", "v", "weight"}, {}};
  for (const auto& r : b.results) {
    for (const auto& g : r.graphs) {
      for (const auto& e : g.edges) {
        t.rows.push_back({r.scenario.id, count(g.epoch), std::int64_t{e.u}, std::int64_t{e.v}, e.weight});
      }
    }
  }
  return t;
}

Table wait_table(const ResultBundle& b) {
  Table t{"waits",
          {"scenario", "metric", "threshold", "events", "mean_s", "std_s", "p10_s", "p50_s", "p90_s",
           "forward_mean_s", "forward_censored", "time_to_connectivity_s", "inspection_wait_s", "continuously_up",
           "tau_int", "n_eff", "sem_s"},
          {}};
  for (const auto& r : b.results) {
    for (const auto& ts : r.thresholds) {
      const auto& w = ts.waits;
      const auto& ac = ts.run_autocorr;
      t.rows.push_back({r.scenario.id, ts.metric, ts.threshold, count(w.events), opt(w.mean), opt(w.std_dev),
                        opt(w.p10), opt(w.p50), opt(w.p90), opt(w.forward_mean), count(w.forward_censored),
                        w.time_to_connectivity(), opt(w.inspection_wait), std::int64_t{w.continuously_up ? 1 : 0},
                        ac ? Cell{ac->tau_int} : Cell{}, ac ? Cell{ac->n_eff} : Cell{},
                        ac ? Cell{ac->sem} : Cell{}});
    }
  }
  return t;
}

Table series_table(const ResultBundle& b) {
  Table t{"series", {"scenario", "metric", "mean", "tau_int", "n_eff", "sem"}, {}};
  for (const auto& r : b.results) {
    for (const auto& s : r.series) {
      const auto& ac = s.autocorr;
      t.rows.push_back({r.scenario.id, s.metric, s.mean, ac ? Cell{ac->tau_int} : Cell{},
                        ac ? Cell{ac->n_eff} : Cell{}, ac ? Cell{ac->sem} : Cell{}});
    }
  }
  return t;
}

Table conditioned_table(const ResultBundle& b) {
  Table t{"conditioned", {"scenario", "threshold", "w_max_s", "time_to_connectivity_s", "strength"}, {}};
  for (const auto& r : b.results) {
    for (const auto& c : r.conditioned) {
      t.rows.push_back({r.scenario.id, c.threshold, c.w_max, c.time_to_connectivity, opt(c.strength)});
    }
  }
  return t;
}

Table union_table(const ResultBundle& b) {
  Table t{"union", {"scenario", "metric", "w_max_s", "threshold", "mean_fraction", "reached_share"}, {}};
  const auto& thetas = b.config.analysis.thresholds;
  for (const auto& r : b.results) {
    for (const auto& u : r.unions) {
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        t.rows.push_back({r.scenario.id, u.metric, u.w_max, thetas[i], u.mean, u.reached[i]});
      }
    }
  }
  return t;
}

Table phase_table(const ResultBundle& b) {
  Table t{"phase",
          {"scenario", "metric", "threshold", "period_s", "bin", "phase_lo_s", "phase_hi_s", "events", "mean_s",
           "max_s"},
          {}};
  for (const auto& r : b.results) {
    for (const auto& p : r.phases) {
      for (std::size_t i = 0; i < p.bins.size(); ++i) {
        const auto& bin = p.bins[i];
        t.rows.push_back({r.scenario.id, p.metric, p.threshold, p.period, count(i), bin.phase_lo, bin.phase_hi,
                          count(bin.events), opt(bin.mean), opt(bin.max)});
      }
    }
  }
  return t;
}

// Plot-ready rows keyed by (scenario, metric, threshold, w_max).
Table long_table(const ResultBundle& b) {
  Table t{"long", {"scenario", "metric", "threshold", "w_max_s", "value"}, {}};
  const auto& thetas = b.config.analysis.thresholds;
  for (const auto& r : b.results) {
    const auto& id = r.scenario.id;
    for (const auto& ts : r.thresholds) {
      t.rows.push_back({id, ts.metric + "_time_to_connectivity_s", ts.threshold, Cell{},
                        ts.waits.time_to_connectivity()});
      t.rows.push_back({id, ts.metric + "_mean_down_run_s", ts.threshold, Cell{}, opt(ts.waits.mean)});
      t.rows.push_back({id, ts.metric + "_inspection_wait_s", ts.threshold, Cell{}, opt(ts.waits.inspection_wait)});
    }
    for (const auto& s : r.series) t.rows.push_back({id, s.metric + "_mean", Cell{}, Cell{}, s.mean});
    for (const auto& c : r.conditioned) {
      t.rows.push_back({id, "conditioned_strength", c.threshold, c.w_max, opt(c.strength)});
    }
    for (const auto& u : r.unions) {
      t.rows.push_back({id, "union_" + u.metric + "_mean", Cell{}, u.w_max, u.mean});
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        t.rows.push_back({id, "union_" + u.metric + "_reached_share", thetas[i], u.w_max, u.reached[i]});
      }
    }
  }
  return t;
}

json scenario_json(const Scenario& s) {
  return {{"index", s.index},
          {"id", s.id},
          {"altitude_km", s.altitude_km},
          {"planes", s.planes},
          {"sats_per_plane", s.sats_per_plane},
          {"polar_fraction", s.polar_fraction},
          {"alpha", s.alpha},
          {"policy", s.policy}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

}  // namespace

Emit parse_emit(const std::string& text) {
  if (text == "edges") return Emit::Edges;
  if (text == "traces") return Emit::Traces;
  if (text == "stats") return Emit::Stats;
  if (text == "all") return Emit::All;
  throw std::invalid_argument("unknown emit mode '" + text + "' (expected edges, traces, stats or all)");
}

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + text + "' (expected csv or json)");
}

std::string to_string(Emit e) {
  switch (e) {
    case Emit::Edges: return "edges";
    case Emit::Traces: return "traces";
    case Emit::Stats: return "stats";
    case Emit::All: return "all";
  }
  return "all";
}

std::string to_string(Format f) { return f == Format::Json ? "json" : "csv"; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::vector<Table> build_tables(const ResultBundle& b, Emit emit) {
  std::vector<Table> out;
  if (b.results.empty()) return out;
  out.push_back(scenario_table(b));
  out.push_back(station_table(b));
  if (wants(emit, Emit::Traces)) out.push_back(trace_table(b));
  if (wants(emit, Emit::Edges)) out.push_back(edge_table(b));
  if (wants(emit, Emit::Stats)) {
    out.push_back(wait_table(b));
    out.push_back(series_table(b));
    out.push_back(conditioned_table(b));
    out.push_back(union_table(b));
    if (b.config.analysis.phase_bins > 0) out.push_back(phase_table(b));
    out.push_back(long_table(b));
  }
  return out;
}

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) s += ',';
    s += csv_field(t.columns[i]);
  }
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += csv_field(cell_text(row[i]));
    }
    s += '\n';
  }
  return s;
}

// Numbers use the CSV spelling; non-finite values become strings since JSON
// has no literal for them.
std::string to_json(const Table& t) {
  std::string s = "[\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    s += "  {";
    const auto& row = t.rows[r];
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ", ";
      s += json(t.columns[i]).dump() + ": ";
      const Cell& c = row[i];
      if (std::holds_alternative<std::monostate>(c)) {
        s += "null";
      } else if (std::holds_alternative<std::string>(c)) {
        s += json(std::get<std::string>(c)).dump();
      } else if (std::holds_alternative<double>(c) && !std::isfinite(std::get<double>(c))) {
        s += "\"" + cell_text(c) + "\"";
      } else {
        s += cell_text(c);
      }
    }
    s += r + 1 < t.rows.size() ? "},\n" : "}\n";
  }
  return s + "]\n";
}

json build_manifest(const ResultBundle& b, Emit emit, Format format, const std::vector<std::string>& files) {
  json scenarios = json::array();
  for (const auto& s : b.scenarios) scenarios.push_back(scenario_json(s));
  json m;
  m[kManifestTag] = kManifestVersion;
  m["config"] = config_to_json(b.config);
  m["data"] = {{"landmask", resolve_data_path(b.config.lattice.landmask).string()},
               {"cities", resolve_data_path(b.config.traffic.cities).string()}};
  m["scenario_filter"] = b.scenario_filter;
  m["emit"] = to_string(emit);
  m["format"] = to_string(format);
  m["scenarios"] = std::move(scenarios);
  m["warnings"] = b.warnings;
  m["files"] = files;
  return m;
}

bool is_manifest(const json& j) { return j.is_object() && j.contains(kManifestTag); }

ManifestRun read_manifest(const json& j) {
  if (!is_manifest(j)) throw ConfigError("", "not a run manifest");
  if (j.at(kManifestTag) != kManifestVersion) throw ConfigError(kManifestTag, "unsupported manifest version");
  ManifestRun run;
  run.config = config_from_json(j.at("config"));
  run.scenario_filter = j.value("scenario_filter", std::string{});
  run.emit = parse_emit(j.value("emit", std::string{"all"}));
  run.format = parse_format(j.value("format", std::string{"csv"}));
  return run;
}

std::vector<std::string> export_results(const ResultBundle& b, const std::filesystem::path& dir, Emit emit,
                                        Format format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

  std::vector<std::string> files;
  for (const auto& t : build_tables(b, emit)) {
    const std::string name = t.name + (format == Format::Json ? ".json" : ".csv");
    write_file(dir / name, format == Format::Json ? to_json(t) : to_csv(t));
    files.push_back(name);
  }
  write_file(dir / "manifest.json", build_manifest(b, emit, format, files).dump(2) + "\n");
  files.insert(files.begin(), "manifest.json");
  return files;
}

}  // namespace qbb::harness
