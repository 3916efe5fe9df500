#include "hbac/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace hbac::io {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& msg) {
  throw Error(Errc::config_schema, fmt::format("{}: {}", pointer.empty() ? "/" : pointer, msg));
}

const json& require(const json& obj, const std::string& key, const std::string& ptr) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(ptr + "/" + key, "required field missing");
  return *it;
}

double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) schema_error(ptr, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) schema_error(ptr, "expected a finite number");
  return d;
}

double positive(const json& v, const std::string& ptr) {
  const double d = number(v, ptr);
  if (!(d > 0.0)) schema_error(ptr, fmt::format("must be > 0, got {}", d));
  return d;
}

std::string string(const json& v, const std::string& ptr) {
  if (!v.is_string()) schema_error(ptr, "expected a string");
  return v.get<std::string>();
}

void no_unknown_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ptr) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) schema_error(ptr + "/" + key, "unknown field");
  }
}

int qubit_by_name(const SystemConfig& c, const json& v, const std::string& ptr) {
  const std::string name = string(v, ptr);
  const int idx = c.index_of(name);
  if (idx < 0) schema_error(ptr, fmt::format("unknown qubit '{}'", name));
  return idx;
}

}  // namespace

SystemConfig config_from_json(const json& j) {
  if (!j.is_object()) schema_error("", "expected an object");
  no_unknown_keys(j,
                  {"qubits", "reset_qubits", "coupling_edges", "bias_unit", "gate_duration_s",
                   "t2_budget_fraction", "relative_scale", "physical", "description"},
                  "");
  SystemConfig c;

  const json& qubits = require(j, "qubits", "");
  if (!qubits.is_array() || qubits.empty()) schema_error("/qubits", "expected a non-empty array");
  if (qubits.size() > static_cast<std::size_t>(kMaxQubits)) {
    schema_error("/qubits", fmt::format("at most {} qubits supported", kMaxQubits));
  }
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const std::string ptr = fmt::format("/qubits/{}", i);
    const json& q = qubits[i];
    if (!q.is_object()) schema_error(ptr, "expected an object");
    no_unknown_keys(q, {"name", "eq_bias", "t1_s", "t2_s"}, ptr);
    QubitSpec spec;
    spec.name = string(require(q, "name", ptr), ptr + "/name");
    if (spec.name.empty()) schema_error(ptr + "/name", "must not be empty");
    if (c.index_of(spec.name) >= 0) schema_error(ptr + "/name", fmt::format("duplicate name '{}'", spec.name));
    spec.eq_bias = number(require(q, "eq_bias", ptr), ptr + "/eq_bias");
    spec.t1 = positive(require(q, "t1_s", ptr), ptr + "/t1_s");
    if (q.contains("t2_s")) spec.t2 = positive(q["t2_s"], ptr + "/t2_s");
    c.qubits.push_back(std::move(spec));
  }

  const std::string unit = string(require(j, "bias_unit", ""), "/bias_unit");
  if (unit == "relative") c.bias_unit = BiasUnit::relative;
  else if (unit == "absolute") c.bias_unit = BiasUnit::absolute;
  else schema_error("/bias_unit", fmt::format("expected \"relative\" or \"absolute\", got \"{}\"", unit));

  const json& resets = require(j, "reset_qubits", "");
  if (!resets.is_array()) schema_error("/reset_qubits", "expected an array of qubit names");
  for (std::size_t i = 0; i < resets.size(); ++i) {
    c.reset_qubits.push_back(qubit_by_name(c, resets[i], fmt::format("/reset_qubits/{}", i)));
  }

  if (j.contains("coupling_edges")) {
    const json& edges = j["coupling_edges"];
    if (!edges.is_array()) schema_error("/coupling_edges", "expected an array of [name, name] pairs");
    c.coupling_edges.emplace();
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string ptr = fmt::format("/coupling_edges/{}", i);
      if (!edges[i].is_array() || edges[i].size() != 2) schema_error(ptr, "expected [name, name]");
      const int a = qubit_by_name(c, edges[i][0], ptr + "/0");
      const int b = qubit_by_name(c, edges[i][1], ptr + "/1");
      if (a == b) schema_error(ptr, "edge joins a qubit to itself");
      c.coupling_edges->emplace_back(a, b);
    }
  }

  if (j.contains("gate_duration_s")) {
    c.gate_duration = number(j["gate_duration_s"], "/gate_duration_s");
    if (c.gate_duration < 0.0) schema_error("/gate_duration_s", "must be >= 0");
  }
  if (j.contains("t2_budget_fraction")) {
    c.t2_budget_fraction = positive(j["t2_budget_fraction"], "/t2_budget_fraction");
  }
  if (j.contains("relative_scale")) c.relative_scale = positive(j["relative_scale"], "/relative_scale");
  if (j.contains("description")) c.description = string(j["description"], "/description");

  if (j.contains("physical")) {
    const json& p = j["physical"];
    if (!p.is_object()) schema_error("/physical", "expected an object");
    no_unknown_keys(p, {"delta_e_j", "k_j_per_k", "temperature_k"}, "/physical");
    PhysicalParams phys;
    phys.delta_e = number(require(p, "delta_e_j", "/physical"), "/physical/delta_e_j");
    phys.k_boltzmann = positive(require(p, "k_j_per_k", "/physical"), "/physical/k_j_per_k");
    phys.temperature = positive(require(p, "temperature_k", "/physical"), "/physical/temperature_k");
    c.physical = phys;
  }

  for (std::size_t i = 0; i < c.qubits.size(); ++i) {
    const double eps = c.to_absolute(c.qubits[i].eq_bias);
    if (std::abs(eps) > 1.0) {
      schema_error(fmt::format("/qubits/{}/eq_bias", i),
                   fmt::format("absolute bias {} outside [-1, 1]", eps));
    }
  }
  try {
    c.check();
  } catch (const Error& e) {
    schema_error("", e.what());
  }
  return c;
}

SystemConfig load_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::config_schema, fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }
  return config_from_json(j);
}

json config_to_json(const SystemConfig& c) {
  json j;
  j["qubits"] = json::array();
  for (const auto& q : c.qubits) {
    json qj = {{"name", q.name}, {"eq_bias", q.eq_bias}, {"t1_s", q.t1}};
    if (q.t2) qj["t2_s"] = *q.t2;
    j["qubits"].push_back(std::move(qj));
  }
  j["reset_qubits"] = json::array();
  for (int r : c.reset_qubits) j["reset_qubits"].push_back(c.qubits[static_cast<std::size_t>(r)].name);
  if (c.coupling_edges) {
    j["coupling_edges"] = json::array();
    for (const auto& [a, b] : *c.coupling_edges) {
      j["coupling_edges"].push_back({c.qubits[static_cast<std::size_t>(a)].name,
                                     c.qubits[static_cast<std::size_t>(b)].name});
    }
  }
  j["bias_unit"] = c.bias_unit == BiasUnit::relative ? "relative" : "absolute";
  j["gate_duration_s"] = c.gate_duration;
  j["t2_budget_fraction"] = c.t2_budget_fraction;
  j["relative_scale"] = c.relative_scale;
  if (c.physical) {
    j["physical"] = {{"delta_e_j", c.physical->delta_e},
                     {"k_j_per_k", c.physical->k_boltzmann},
                     {"temperature_k", c.physical->temperature}};
  }
  if (!c.description.empty()) j["description"] = c.description;
  return j;
}

namespace {

// Trichloroethylene with two 13C labels (computation qubits C2, C1) and one
// proton (reset qubit H), dissolved in CDCl3, measured at 600 MHz.
// Equilibrium biases in relative units: carbon 1, proton 4.
// Chain topology H - C1 - C2: C1 is the proton's nearest neighbour.
SystemConfig tce(double t1_c2, double t1_c1, double t1_h, std::string description) {
  SystemConfig c;
  c.qubits = {
      {"C2", 1.0, t1_c2, std::nullopt},
      {"C1", 1.0, t1_c1, std::nullopt},
      {"H", 4.0, t1_h, std::nullopt},
  };
  c.reset_qubits = {2};
  c.coupling_edges = std::vector<std::pair<int, int>>{{2, 1}, {1, 0}};
  c.bias_unit = BiasUnit::relative;
  c.description = std::move(description);
  return c;
}

}  // namespace

SystemConfig preset(std::string_view name) {
  if (name == "tce-unsalted") {
    // T1 in seconds: C2 30.85, C1 27.45, H 5.460 (no relaxation agent).
    return tce(30.85, 27.45, 5.46, "TCE in CDCl3, no paramagnetic salt");
  }
  if (name == "tce-salted") {
    // T1 in seconds: C2 28.3, C1 16.0, H 1.88 after adding
    // chromium(III) acetylacetonate at 233.2 mg/liter.
    return tce(28.3, 16.0, 1.88, "TCE in CDCl3 with 233.2 mg/liter chromium(III) acetylacetonate");
  }
  throw Error(Errc::config_schema,
              fmt::format("unknown preset '{}', expected one of: tce-unsalted, tce-salted", name));
}

std::vector<std::string> preset_names() { return {"tce-unsalted", "tce-salted"}; }

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, fmt::format("cannot write '{}'", tmp.string()));
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(Errc::io, fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(Errc::io, fmt::format("cannot rename onto '{}': {}", path.string(), ec.message()));
  }
}

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != table.header.size()) {
        throw Error(Errc::io, fmt::format("CSV row {} has {} cells, header has {}", table.rows.size() + 2,
                                          cells.size(), table.header.size()));
      }
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

CsvTable trace_table(const Trace& trace, const SystemConfig& config) {
  CsvTable t;
  t.header = {"step", "op", "time_s"};
  for (const auto& q : config.qubits) t.header.push_back("bias_" + q.name);
  t.header.push_back("entropy_bits");
  t.header.push_back("coherent_time_s");
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    std::vector<std::string> row = {std::to_string(k), s.op, format_number(s.time_after)};
    for (double b : s.biases_after) row.push_back(format_number(b));
    row.push_back(format_number(s.entropy_after));
    row.push_back(format_number(s.coherent_time_used));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable sweep_csv_table(const SweepTable& sweep) {
  CsvTable t;
  t.header = {"axis_value", "final_bias_" + sweep.target_name, "cooling_factor", "bypass_margin",
              "entropy_final_bits"};
  for (const auto& r : sweep.rows) {
    t.rows.push_back({format_number(r.axis_value), format_number(r.metrics.final_bias),
                      format_number(r.metrics.cooling_factor), format_number(r.metrics.bypass_margin),
                      format_number(r.metrics.entropy_final)});
  }
  return t;
}

std::string sweep_svg(const SweepTable& sweep) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 30.0;
  constexpr double bottom = 50.0;

  struct Series {
    const char* label;
    const char* color;
    const char* dash;
    std::vector<std::pair<double, double>> points;
  };
  std::vector<Series> series = {
      {"final bias", "#1f77b4", "", {}},
      {"reversible bound (initial)", "#d62728", "6,4", {}},
  };
  for (const auto& r : sweep.rows) {
    series[0].points.emplace_back(r.axis_value, r.metrics.final_bias);
    series[1].points.emplace_back(r.axis_value, r.metrics.bound_initial);
  }

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!(xmax > xmin)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
  auto py = [&](double y) { return height - bottom - (y - ymin) / (ymax - ymin) * (height - top - bottom); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
      width, height);
  // Axes.
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left,
                     height - bottom, width - right);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", left, top,
                     height - bottom);
  for (int k = 0; k <= 4; ++k) {
    const double x = xmin + (xmax - xmin) * k / 4.0;
    const double y = ymin + (ymax - ymin) * k / 4.0;
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{:.4g}</text>\n",
                       px(x), height - bottom + 16, x);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{:.4g}</text>\n",
                       left - 6, py(y) + 4, y);
  }
  svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                     0.5 * (left + width - right), height - 10, sweep.axis_path);
  svg += fmt::format(
      "<text x=\"15\" y=\"{:.2f}\" font-size=\"13\" text-anchor=\"middle\" "
      "transform=\"rotate(-90 15 {:.2f})\">bias of {}</text>\n",
      0.5 * (top + height - bottom), 0.5 * (top + height - bottom), sweep.target_name);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    std::string pts;
    for (const auto& [x, y] : s.points) pts += fmt::format("{}{:.2f},{:.2f}", pts.empty() ? "" : " ", px(x), py(y));
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\"{} points=\"{}\"/>\n", s.color,
                       *s.dash ? fmt::format(" stroke-dasharray=\"{}\"", s.dash) : std::string{}, pts);
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"12\" fill=\"{}\">{}</text>\n", left + 10,
                       top + 14 * static_cast<double>(k), s.color, s.label);
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hbac::io
