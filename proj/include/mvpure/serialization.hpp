#pragma once

#include <filesystem>
#include <string>

#include "mvpure/beamformer.hpp"
#include "mvpure/localizer.hpp"
#include "mvpure/spectrum.hpp"

namespace mvpure::io {

// All writers produce a stable key order and shortest round-trip doubles, so
// identical results serialize to identical bytes.

std::string to_json(const LocalizationResult& result);
LocalizationResult localization_from_json(const std::string& text);
void write_localization(const std::filesystem::path& path, const LocalizationResult& result);
LocalizationResult read_localization(const std::filesystem::path& path);

std::string to_json(const SpectrumReport& report);
void write_spectrum(const std::filesystem::path& json_path, const std::filesystem::path& csv_path,
                    const SpectrumReport& report);

/// Sidecar describing a filter applied to data: kind, rank, sources, gain_check.
std::string filter_sidecar_json(const SpatialFilter& filter);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace mvpure::io
