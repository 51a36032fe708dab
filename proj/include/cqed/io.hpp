#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqed/extract.hpp"
#include "cqed/fock.hpp"
#include "cqed/lattice.hpp"
#include "cqed/synth.hpp"

// Config schemas (strict: unknown keys rejected) and the trace CSV/sidecar
// round trip. All frequency-like keys carry a _MHz suffix.

namespace cqed::io {

using json = nlohmann::ordered_json;

json load_json(const std::string& path);
void write_json(const json& j, const std::string& path);

// throws ConfigError if `obj` holds a key outside `allowed`
void require_keys(const json& obj, const std::string& context,
                  const std::vector<std::string>& allowed);

fock::DeviceSpec device_from_json(const json& j);
json device_to_json(const fock::DeviceSpec& spec);

lattice::LatticeSpec lattice_from_json(const json& j);
json lattice_to_json(const lattice::LatticeSpec& spec);

synth::ScanPlan plan_from_json(const json& j);
json plan_to_json(const synth::ScanPlan& plan);

extract::ExtractionOptions extraction_options_from_json(const json& j);
json extraction_options_to_json(const extract::ExtractionOptions& opt);
extract::Channel channel_from_string(const std::string& s);

json estimate_to_json(const extract::CouplingEstimate& est);
json report_to_json(const extract::ConsistencyReport& rep);

// trace CSV: power_nW,pump_freq_MHz,magnitude,phase_rad ordered by trace
void write_traces_csv(const std::vector<synth::SpectroscopyTrace>& traces,
                      const std::string& path);
std::vector<synth::SpectroscopyTrace> read_traces_csv(const std::string& path);

// JSON sidecar carrying plan, seed and per-trace truth
json traces_sidecar(const synth::ScanPlan& plan, std::uint64_t seed,
                    const std::vector<synth::SpectroscopyTrace>& traces);
void apply_sidecar_truth(const json& sidecar,
                         std::vector<synth::SpectroscopyTrace>& traces);

}  // namespace cqed::io
