#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "planetspec/disk.hpp"
#include "planetspec/modesum.hpp"
#include "planetspec/profile.hpp"
#include "planetspec/scattering.hpp"
#include "planetspec/spectrum.hpp"

namespace planetspec {

// Shortest round-trip decimal form ("%.17g" trimmed), stable across runs.
std::string format_double(double x);

nlohmann::json to_json(const HerglotzReport& r);
nlohmann::json to_json(const DistributionalHerglotzReport& r);
nlohmann::json to_json(const PeriodicBasicRay& ray);
nlohmann::json to_json(const Spectrum& s);
nlohmann::json to_json(const TwoSpeedSpectrum& s);
nlohmann::json to_json(const TraceSingularity& s);
nlohmann::json to_json(const InjectivityReport& r);
nlohmann::json to_json(const LspScanReport& r);
nlohmann::json to_json(const GlidingSequence& s);
nlohmann::json to_json(const GlidingDecay& d);
nlohmann::json to_json(const std::vector<PeakMatch>& matches);

// One amplitude-table row: the ray and either its singularity or the reason
// it could not be evaluated.
struct AmplitudeRow {
  PeriodicBasicRay ray;
  std::optional<TraceSingularity> value;
  std::string error;
};
nlohmann::json to_json(const std::vector<AmplitudeRow>& rows);

std::string spectrum_csv(const Spectrum& s);
std::string two_speed_csv(const TwoSpeedSpectrum& s);
std::string amplitudes_csv(const std::vector<AmplitudeRow>& rows);
std::string trace_csv(const SmoothedTrace& t);
std::string gliding_csv(const GlidingSequence& s, const GlidingDecay* decay);
std::string disk_csv(const LspScanReport& r);

// Mode table as CSV "n,l,omega" after a "# planetspec-modes" header that
// records the profile hash and the requested limits. read_modes_csv throws
// InvalidArgument on malformed input.
void write_modes_csv(std::ostream& os, const ModeTable& t);
ModeTable read_modes_csv(std::istream& is);

}  // namespace planetspec
