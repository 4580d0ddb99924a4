#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "nflab/attractor.hpp"
#include "nflab/check.hpp"
#include "nflab/energy.hpp"
#include "nflab/firing.hpp"

namespace nflab {

// Every CSV written here starts with `# config_fingerprint=<hex>`; every JSON
// document carries a top-level "config_fingerprint" field.

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& fingerprint);
void write_state_csv(const std::filesystem::path& path, const GridFunction& u, const std::string& fingerprint);
void write_continuity_csv(std::ostream& os, const ContinuityReport& report, const std::string& fingerprint);
void write_json(const std::filesystem::path& path, nlohmann::json doc, const std::string& fingerprint);
void write_text(const std::filesystem::path& path, const std::string& text);

nlohmann::json to_json(const CheckEntry& e);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const SpectrumReport& r);
nlohmann::json to_json(const ContinuityReport& r);

}  // namespace nflab
