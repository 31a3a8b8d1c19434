#ifndef MRSIM_TELEMETRY_IO_HPP
#define MRSIM_TELEMETRY_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "mrsim/sim_engine.hpp"

namespace mrsim {

// Frozen CSV schema; covered by a golden test.
inline constexpr const char* kTelemetryHeader =
    "time_s,pcx,pcy,pcz,vcx,vcy,vcz,psx,psy,psz,vsx,vsy,vsz,evx,evy,evz,"
    "gx_raw,gy_raw,gz_raw,gx,gy,gz,k,vblood,dbdt_x,dbdt_y,dbdt_z,fixture_ok";

/// Parses a scenario config: flat `key: value` lines, '#' comments, unknown
/// or duplicate keys rejected. Relative file references are resolved against
/// the config file's directory. The result is fully validated.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_stream(std::istream& in, const std::string& origin,
                                   const std::string& base_dir);

/// Effective configuration echo (defaults applied), one `key: value` per line.
void echo_config(const ScenarioConfig& config, std::ostream& out);

void write_telemetry(const std::vector<TelemetryRecord>& records, const std::string& path);
std::vector<TelemetryRecord> read_telemetry(const std::string& path);

/// Reconstructs the gradient command sequence from a telemetry trace: the
/// first row plus every row where the actuated gradient changes.
std::vector<GradientCommand> commands_from_telemetry(const std::vector<TelemetryRecord>& records);

void write_safety_report(const RunResult& result, const SlewParams& params, const std::string& path);

}  // namespace mrsim

#endif
