#include "g2flow/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "g2flow/kernels.hpp"

namespace g2flow {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

uint64_t fnv1a64(const std::string& bytes) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

RunSetup parse_config_text(const std::string& text) {
  RunSetup s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string v) {
      const char* ws = " \t\r\n";
      auto b = v.find_first_not_of(ws);
      if (b == std::string::npos) return std::string();
      auto e = v.find_last_not_of(ws);
      return v.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) s.raw[key] = val;
  }
  auto geti = [&](const char* k, int dflt) {
    auto it = s.raw.find(k);
    return it == s.raw.end() ? dflt : std::stoi(it->second);
  };
  auto getd = [&](const char* k, double dflt) {
    auto it = s.raw.find(k);
    return it == s.raw.end() ? dflt : std::stod(it->second);
  };
  auto gets = [&](const char* k, std::string dflt) {
    auto it = s.raw.find(k);
    return it == s.raw.end() ? dflt : it->second;
  };
  s.geom.m = geti("m", 1);
  s.geom.nD = geti("n_d", 16);
  s.geom.hD = getd("h_d", 0.39269908169872414);  // 2 pi / 16
  s.geom.Ns = geti("n_s", 16);
  s.geom.Nalpha = geti("n_alpha", 4);
  s.geom.hs = getd("h_s", 0.39269908169872414);
  s.geom.halpha = getd("h_alpha", 6.283185307179586 / std::max(1, s.geom.Nalpha));
  s.rank = geti("rank", 2);
  s.seed = static_cast<uint64_t>(std::stoull(gets("seed", "1")));
  s.twist_kind = gets("twist.kind", "exact");
  s.twist_amp = getd("twist.amp", 0.05);
  s.twist_decay = getd("twist.decay", 1.0);
  s.reference = gets("reference", "slicewise");
  s.mono_c = getd("monitor.mono_c", 1.0);
  s.flow.dt = getd("flow.dt", 0.0);
  s.flow.safety = getd("flow.safety", 0.05);
  s.flow.t_end = getd("flow.t_end", 1.0);
  s.flow.det1 = geti("flow.det1", 0) != 0;
  s.flow.monitor_every = geti("flow.monitor_every", 10);
  s.flow.target_sup_e = getd("flow.target_sup_e", 1e-10);
  s.geom.validate();

  // resolved text (sorted keys, canonical form) for hashing and re-parsing
  std::map<std::string, std::string> resolved = s.raw;
  resolved["m"] = std::to_string(s.geom.m);
  resolved["n_d"] = std::to_string(s.geom.nD);
  resolved["h_d"] = format_double(s.geom.hD);
  resolved["n_s"] = std::to_string(s.geom.Ns);
  resolved["n_alpha"] = std::to_string(s.geom.Nalpha);
  resolved["h_s"] = format_double(s.geom.hs);
  resolved["h_alpha"] = format_double(s.geom.halpha);
  resolved["rank"] = std::to_string(s.rank);
  resolved["seed"] = std::to_string(s.seed);
  resolved["twist.kind"] = s.twist_kind;
  resolved["twist.amp"] = format_double(s.twist_amp);
  resolved["twist.decay"] = format_double(s.twist_decay);
  resolved["reference"] = s.reference;
  resolved["monitor.mono_c"] = format_double(s.mono_c);
  resolved["flow.dt"] = format_double(s.flow.dt);
  resolved["flow.safety"] = format_double(s.flow.safety);
  resolved["flow.t_end"] = format_double(s.flow.t_end);
  resolved["flow.det1"] = s.flow.det1 ? "1" : "0";
  resolved["flow.monitor_every"] = std::to_string(s.flow.monitor_every);
  resolved["flow.target_sup_e"] = format_double(s.flow.target_sup_e);
  std::string out;
  for (const auto& [k, v] : resolved) out += k + " = " + v + "\n";
  s.text = out;
  return s;
}

RunSetup parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

HolomorphicTwist build_twist(const RunSetup& s) {
  if (s.twist_kind == "none" || s.twist_amp == 0.0)
    return HolomorphicTwist::none(s.geom, s.rank);
  if (s.twist_kind == "exact")
    return HolomorphicTwist::exact(s.geom, s.rank, s.seed, s.twist_amp, s.twist_decay);
  if (s.twist_kind == "gauge")
    return HolomorphicTwist::gauge(s.geom, s.rank, s.seed, s.twist_amp, s.twist_decay);
  throw std::runtime_error("unknown twist.kind: " + s.twist_kind);
}

void write_field(const std::string& path, const LatticeChart& g, const EndoField& f) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(f.v.data()),
              static_cast<std::streamsize>(f.v.size() * sizeof(cdouble)));
  }
  json side;
  side["layout"] = "site-major, row-major matrices, re/im interleaved";
  side["endianness"] = "little";
  side["scalar"] = "float64";
  side["rank"] = f.r;
  side["sites"] = f.sites;
  side["geometry"] = {{"m", g.m},       {"n_d", g.nD},         {"h_d", g.hD},
                      {"n_s", g.Ns},    {"n_alpha", g.Nalpha}, {"h_s", g.hs},
                      {"h_alpha", g.halpha}};
  std::ofstream meta(path + ".json");
  meta << side.dump(2) << "\n";
}

EndoField read_field(const std::string& path) {
  std::ifstream meta(path + ".json");
  if (!meta) throw std::runtime_error("missing sidecar for " + path);
  json side = json::parse(meta);
  EndoField f(side["sites"].get<std::size_t>(), side["rank"].get<int>());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  in.read(reinterpret_cast<char*>(f.v.data()),
          static_cast<std::streamsize>(f.v.size() * sizeof(cdouble)));
  if (!in) throw std::runtime_error("short read on " + path);
  return f;
}

void write_run_outputs(const std::string& dir, const RunSetup& setup, const LatticeChart& g,
                       const FlowTrace& trace, const MonitorReport& monitors, bool energy_ok,
                       double energy_tol) {
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir + "/config.resolved");
    cfg << setup.text;
  }
  {
    std::ofstream csv(dir + "/trace.csv");
    csv << "# t, sup_e_hat, sup_sigma, L_t, E_t, E_raw, charge, N_flow, fhat_l2sq\n";
    for (const auto& s : trace.samples) {
      csv << format_double(s.t) << "," << format_double(s.sup_e) << ","
          << format_double(s.sup_sigma) << "," << format_double(s.l_t) << ","
          << format_double(s.energy) << "," << format_double(s.energy_raw) << ","
          << format_double(s.charge) << "," << format_double(s.n_flow) << ","
          << format_double(s.fhat_l2sq) << "\n";
    }
  }
  {
    std::ofstream csv(dir + "/profile.csv");
    csv << "# t, s, sup_slice_lambda_bar, sup_slice_e_hat\n";
    for (const auto& s : trace.samples)
      for (std::size_t i = 0; i < s.ell_lambda.size(); ++i)
        csv << format_double(s.t) << "," << format_double(static_cast<double>(i) * g.hs) << ","
            << format_double(s.ell_lambda[i]) << "," << format_double(s.ell_e[i]) << "\n";
  }
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.bin", i);
    write_field(dir + "/" + name, g, trace.snapshots[i]);
  }
  if (!trace.snapshots.empty())
    write_field(dir + "/final.bin", g, trace.snapshots.back());

  json man;
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016" PRIx64, fnv1a64(setup.text));
  man["config_hash_fnv1a64"] = hex;
  man["code_version"] = "g2flow 0.1.0";
  man["kernel"] = kernels().name;
  man["timestamps"] = {{"sim_t_start", trace.samples.empty() ? 0.0 : trace.samples.front().t},
                       {"sim_t_end", trace.samples.empty() ? 0.0 : trace.samples.back().t}};
  man["steps"] = trace.steps;
  man["dt"] = trace.dt;
  man["converged"] = trace.converged;
  man["diverged"] = trace.diverged;
  man["snapshots"] = trace.snapshots.size();
  json times = json::array();
  for (double t : trace.snapshot_times) times.push_back(t);
  man["snapshot_times"] = times;
  man["monitors"] = {{"sup_e_monotone", monitors.sup_e_monotone},
                     {"sigma_monotone", monitors.sigma_monotone},
                     {"positivity", monitors.positivity_ok},
                     {"hermiticity", monitors.hermiticity_ok},
                     {"dirichlet", monitors.dirichlet_ok},
                     {"det1", monitors.det1_ok},
                     {"energy_upper_bound", energy_ok},
                     {"energy_tolerance", energy_tol}};
  json viols = json::array();
  for (const auto& v : monitors.violations) viols.push_back(v);
  man["violations"] = viols;
  std::ofstream mf(dir + "/manifest.json");
  mf << man.dump(2) << "\n";
}

LoadedRun load_run(const std::string& dir) {
  LoadedRun run;
  run.setup = parse_config_file(dir + "/config.resolved");
  std::ifstream mf(dir + "/manifest.json");
  if (!mf) throw std::runtime_error("missing manifest in " + dir);
  json man = json::parse(mf);
  run.trace.dt = man["dt"].get<double>();
  run.trace.steps = man["steps"].get<int>();
  for (double t : man["snapshot_times"]) run.trace.snapshot_times.push_back(t);
  const std::size_t nsnap = man["snapshots"].get<std::size_t>();
  for (std::size_t i = 0; i < nsnap; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%05zu.bin", i);
    run.trace.snapshots.push_back(read_field(dir + "/" + name));
  }
  // samples from trace.csv
  std::ifstream csv(dir + "/trace.csv");
  std::string line;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#') continue;
    FlowSample s;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s.t, &s.sup_e,
                    &s.sup_sigma, &s.l_t, &s.energy, &s.energy_raw, &s.charge, &s.n_flow,
                    &s.fhat_l2sq) == 9)
      run.trace.samples.push_back(s);
  }
  return run;
}

}  // namespace g2flow
