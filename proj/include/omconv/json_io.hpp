#pragma once

// File formats: device descriptions as JSON, tabular results as CSV with a
// JSON sidecar for provenance. All writes are atomic (temp file + rename)
// and all number formatting is shortest-round-trip, so identical inputs
// produce byte-identical files.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "omconv/design.hpp"
#include "omconv/estimation.hpp"
#include "omconv/noise.hpp"
#include "omconv/params.hpp"
#include "omconv/scattering.hpp"

namespace omc {

// Device JSON layout:
//   {"cavity1": {f_c_hz, kappa_hz, eta, g0_hz, t_noise_k},
//    "cavity2": {...}, "mech": {f_m_hz, gamma_m_hz, n_th},
//    "drive": {n1, n2}}
// t_noise_k and the whole drive object are optional on input.
nlohmann::json device_to_json(const ConverterParams& params, const DriveConfig& drive);
void device_from_json(const nlohmann::json& j, ConverterParams& params, DriveConfig& drive);

struct DeviceFile {
  ConverterParams params;
  DriveConfig drive;
  nlohmann::json raw;  // canonical serialized form, used for hashing
};

// Parses and validates; throws DataError with file/parse context.
DeviceFile load_device(const std::filesystem::path& path);
DeviceFile parse_device(const std::string& json_text);

// FNV-1a 64-bit over the canonical compact JSON dump, as 16 hex digits.
std::uint64_t fnv1a64(std::string_view bytes);
std::string device_hash_hex(const nlohmann::json& device);

// Column-oriented numeric table; `metadata` lands in the JSON sidecar.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json metadata;
};

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

std::string table_to_csv(const Table& table);
Table csv_to_table(const std::string& text);
Table read_csv(const std::filesystem::path& path);

void write_text_atomic(const std::filesystem::path& path, std::string_view content);

// Writes <path> as CSV and <path with .json extension> as the sidecar.
void write_table(const Table& table, const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Table builders for every artifact the engines produce.
Table trace_table(const ScatteringTrace& tr);
Table cooperativity_table(const std::vector<CooperativitySweepRow>& rows);
Table ratio_table(const std::vector<RatioSweepRow>& rows);
Table spectrum_table(const NoiseSpectrum& spectrum);

// Rebuilds a spectrum from a table with delta_hz and quanta columns (the
// format spectrum_table emits); metadata beyond the columns is optional.
NoiseSpectrum spectrum_from_table(const Table& table);

// JSON records for sidecars and result files.
nlohmann::json rates_to_json(const DerivedRates& rates);
nlohmann::json regime_to_json(const RegimeReport& report);
nlohmann::json fit_to_json(const LorentzianFit& fit);
nlohmann::json bath_to_json(const BathInference& bath);
nlohmann::json added_noise_to_json(const AddedNoiseResult& noise);
nlohmann::json solution_to_json(const DesignSolution& solution);

}  // namespace omc
