#pragma once

// File formats: JSON system config, built-in presets, CSV tables, SVG plots.
//
// Config schema:
//   {
//     "qubits": [{"name": str, "eq_bias": num, "t1_s": num, "t2_s": num?}, ...],
//     "reset_qubits": [name, ...],
//     "coupling_edges": [[name, name], ...]?,
//     "bias_unit": "relative" | "absolute",
//     "gate_duration_s": num?,         default 0.01
//     "t2_budget_fraction": num?,      default 1.0
//     "relative_scale": num?,          default 1e-5
//     "physical": {"delta_e_j": num, "k_j_per_k": num, "temperature_k": num}?,
//     "description": str?
//   }

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hbac/config.hpp"
#include "hbac/engine.hpp"

namespace hbac::io {

/// Schema violations are Errc::config_schema errors whose message starts
/// with the JSON pointer of the offending value.
SystemConfig config_from_json(const nlohmann::json& j);
SystemConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const SystemConfig& config);

/// "tce-unsalted" or "tce-salted"; throws Errc::config_schema otherwise.
SystemConfig preset(std::string_view name);
std::vector<std::string> preset_names();

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// 12 significant digits, shortest of fixed/scientific.
std::string format_number(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

// Cells never contain commas, quotes or newlines in the tables emitted here,
// so no quoting is implemented.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

/// step,op,time_s,bias_<name>...,entropy_bits,coherent_time_s
CsvTable trace_table(const Trace& trace, const SystemConfig& config);

/// axis_value,final_bias_<target>,cooling_factor,bypass_margin,entropy_final_bits
CsvTable sweep_csv_table(const SweepTable& sweep);

/// Line plot of axis value against final target bias, plus the reversible
/// bound of the initial state, as a self-contained SVG document.
std::string sweep_svg(const SweepTable& sweep);

}  // namespace hbac::io
