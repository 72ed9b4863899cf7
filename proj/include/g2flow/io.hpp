#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "g2flow/flow.hpp"

namespace g2flow {

// plain-text key = value configuration (# comments, blank lines ignored)
struct RunSetup {
  LatticeChart geom;
  int rank = 2;
  uint64_t seed = 1;
  std::string twist_kind = "exact";  // exact | gauge | none
  double twist_amp = 0.05;
  double twist_decay = 1.0;
  std::string reference = "slicewise";  // slicewise | identity
  double mono_c = 1.0;                  // monotonicity tolerance constant
  FlowConfig flow;
  std::map<std::string, std::string> raw;
  std::string text;  // resolved key=value text (hashed into the manifest)
};

RunSetup parse_config_text(const std::string& text);
RunSetup parse_config_file(const std::string& path);

HolomorphicTwist build_twist(const RunSetup& s);

uint64_t fnv1a64(const std::string& bytes);

// flat binary layout: site-major, row-major matrices, little-endian doubles,
// re/im interleaved; shape described by a JSON sidecar next to the file
void write_field(const std::string& path, const LatticeChart& g, const EndoField& f);
EndoField read_field(const std::string& path);

struct RunOutputs {
  std::string dir;
};

// trace.csv, profile.csv, snapshots, resolved config and manifest.json
void write_run_outputs(const std::string& dir, const RunSetup& setup, const LatticeChart& g,
                       const FlowTrace& trace, const MonitorReport& monitors, bool energy_ok,
                       double energy_tol);

// reload a run directory for the diagnostics subcommands
struct LoadedRun {
  RunSetup setup;
  FlowTrace trace;  // samples + snapshots
};
LoadedRun load_run(const std::string& dir);

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace g2flow
