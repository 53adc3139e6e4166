#include "omconv/json_io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace omc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json cavity_to_json(const CavityParams& cav) {
  json j{{"f_c_hz", cav.f_c_hz},
         {"kappa_hz", cav.kappa_hz},
         {"eta", cav.eta},
         {"g0_hz", cav.g0_hz}};
  if (cav.t_noise_k > 0.0) j["t_noise_k"] = cav.t_noise_k;
  return j;
}

CavityParams cavity_from_json(const json& j) {
  CavityParams cav;
  cav.f_c_hz = j.at("f_c_hz").get<double>();
  cav.kappa_hz = j.at("kappa_hz").get<double>();
  cav.eta = j.at("eta").get<double>();
  cav.g0_hz = j.at("g0_hz").get<double>();
  cav.t_noise_k = j.value("t_noise_k", 0.0);
  return cav;
}

}  // namespace

json device_to_json(const ConverterParams& params, const DriveConfig& drive) {
  return json{{"cavity1", cavity_to_json(params.cavity1)},
              {"cavity2", cavity_to_json(params.cavity2)},
              {"mech",
               {{"f_m_hz", params.mech.f_m_hz},
                {"gamma_m_hz", params.mech.gamma_m_hz},
                {"n_th", params.mech.n_th}}},
              {"drive", {{"n1", drive.n1}, {"n2", drive.n2}}}};
}

void device_from_json(const json& j, ConverterParams& params, DriveConfig& drive) {
  params.cavity1 = cavity_from_json(j.at("cavity1"));
  params.cavity2 = cavity_from_json(j.at("cavity2"));
  const json& mech = j.at("mech");
  params.mech.f_m_hz = mech.at("f_m_hz").get<double>();
  params.mech.gamma_m_hz = mech.at("gamma_m_hz").get<double>();
  params.mech.n_th = mech.at("n_th").get<double>();
  if (j.contains("drive")) {
    drive.n1 = j.at("drive").value("n1", 0.0);
    drive.n2 = j.at("drive").value("n2", 0.0);
  } else {
    drive = DriveConfig{};
  }
  params.validate();
  drive.validate();
}

DeviceFile parse_device(const std::string& json_text) {
  DeviceFile dev;
  try {
    const json j = json::parse(json_text);
    device_from_json(j, dev.params, dev.drive);
  } catch (const json::exception& e) {
    throw DataError(std::string("device JSON: ") + e.what());
  } catch (const InvalidParameter& e) {
    throw DataError(std::string("device JSON: ") + e.what());
  }
  dev.raw = device_to_json(dev.params, dev.drive);
  return dev;
}

DeviceFile load_device(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open device file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_device(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : bytes) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string device_hash_hex(const json& device) {
  const std::uint64_t h = fnv1a64(device.dump());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw DataError("number formatting failed");
  return std::string(buf, ptr);
}

std::string table_to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw DataError("table row width does not match its header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

}  // namespace

Table csv_to_table(const std::string& text) {
  Table table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (table.columns.empty()) {
      table.columns = split_line(line);
      continue;
    }
    const auto fields = split_line(line);
    if (fields.size() != table.columns.size())
      throw DataError("CSV line " + std::to_string(line_no) + ": expected " +
                      std::to_string(table.columns.size()) + " fields, got " +
                      std::to_string(fields.size()));
    std::vector<double> row(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), row[i]);
      if (ec != std::errc{} || ptr != f.data() + f.size())
        throw DataError("CSV line " + std::to_string(line_no) + ": cannot parse number '" + f +
                        "'");
    }
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw DataError("CSV has no header row");
  return table;
}

Table read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open CSV file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return csv_to_table(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  const fs::path dir = path.parent_path();
  std::error_code ec;
  if (!dir.empty()) fs::create_directories(dir, ec);

  fs::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot create output file: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out.good()) throw DataError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move " + tmp.string() + " into place: " + ec.message());
}

fs::path sidecar_path(const fs::path& csv_path) {
  fs::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_table(const Table& table, const fs::path& csv_path) {
  write_text_atomic(csv_path, table_to_csv(table));
  json sidecar = table.metadata.is_null() ? json::object() : table.metadata;
  sidecar["columns"] = table.columns;
  sidecar["rows"] = table.rows.size();
  write_text_atomic(sidecar_path(csv_path), sidecar.dump(2) + "\n");
}

Table trace_table(const ScatteringTrace& tr) {
  Table t;
  t.columns = {"delta_hz", "t_sq", "r1_sq", "r2_sq", "t_re",
               "t_im",     "r1_re", "r1_im", "r2_re", "r2_im"};
  t.rows.reserve(tr.points.size());
  for (const auto& p : tr.points)
    t.rows.push_back({p.delta_hz, std::norm(p.t), std::norm(p.r1), std::norm(p.r2), p.t.real(),
                      p.t.imag(), p.r1.real(), p.r1.imag(), p.r2.real(), p.r2.imag()});
  t.metadata = json{{"rates", rates_to_json(tr.rates)}, {"eta1", tr.eta1}, {"eta2", tr.eta2}};
  return t;
}

Table cooperativity_table(const std::vector<CooperativitySweepRow>& rows) {
  Table t;
  t.columns = {"c_total", "t_sq", "r1_sq", "r2_sq", "gamma_total_hz", "internal_efficiency"};
  t.rows.reserve(rows.size());
  for (const auto& r : rows)
    t.rows.push_back(
        {r.c_total, r.t_sq, r.r1_sq, r.r2_sq, r.gamma_total_hz, r.internal_efficiency});
  return t;
}

Table ratio_table(const std::vector<RatioSweepRow>& rows) {
  Table t;
  t.columns = {"c2_over_c1", "t_sq", "r1_sq", "r2_sq"};
  t.rows.reserve(rows.size());
  for (const auto& r : rows) t.rows.push_back({r.c2_over_c1, r.t_sq, r.r1_sq, r.r2_sq});
  return t;
}

Table spectrum_table(const NoiseSpectrum& spectrum) {
  Table t;
  t.columns = {"delta_hz", "quanta"};
  t.rows.reserve(spectrum.delta_hz.size());
  for (std::size_t i = 0; i < spectrum.delta_hz.size(); ++i)
    t.rows.push_back({spectrum.delta_hz[i], spectrum.quanta[i]});
  t.metadata = json{{"which_cavity", spectrum.which_cavity},
                    {"n_th", spectrum.n_th},
                    {"floor_quanta", spectrum.floor_quanta},
                    {"eta1", spectrum.eta1},
                    {"eta2", spectrum.eta2},
                    {"rates", rates_to_json(spectrum.rates)}};
  if (spectrum.n_avg > 0.0) {
    t.metadata["n_avg"] = spectrum.n_avg;
    t.metadata["seed"] = spectrum.seed;
  }
  return t;
}

NoiseSpectrum spectrum_from_table(const Table& table) {
  int delta_col = -1;
  int quanta_col = -1;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i] == "delta_hz") delta_col = static_cast<int>(i);
    if (table.columns[i] == "quanta") quanta_col = static_cast<int>(i);
  }
  if (delta_col < 0 || quanta_col < 0)
    throw DataError("spectrum table needs delta_hz and quanta columns");

  NoiseSpectrum sp;
  sp.delta_hz.reserve(table.rows.size());
  sp.quanta.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    sp.delta_hz.push_back(row[static_cast<std::size_t>(delta_col)]);
    sp.quanta.push_back(row[static_cast<std::size_t>(quanta_col)]);
  }
  const json& m = table.metadata;
  if (m.is_object()) {
    sp.which_cavity = m.value("which_cavity", 1);
    sp.n_th = m.value("n_th", 0.0);
    sp.floor_quanta = m.value("floor_quanta", 0.0);
    sp.eta1 = m.value("eta1", 0.0);
    sp.eta2 = m.value("eta2", 0.0);
    sp.n_avg = m.value("n_avg", 0.0);
    sp.seed = m.value("seed", std::uint64_t{0});
    if (m.contains("rates")) {
      const json& r = m.at("rates");
      sp.rates.g_eff1_hz = r.value("g_eff1_hz", 0.0);
      sp.rates.g_eff2_hz = r.value("g_eff2_hz", 0.0);
      sp.rates.gamma1_hz = r.value("gamma1_hz", 0.0);
      sp.rates.gamma2_hz = r.value("gamma2_hz", 0.0);
      sp.rates.c1 = r.value("c1", 0.0);
      sp.rates.c2 = r.value("c2", 0.0);
      sp.rates.gamma_total_hz = r.value("gamma_total_hz", 0.0);
      sp.rates.f_drive1_hz = r.value("f_drive1_hz", 0.0);
      sp.rates.f_drive2_hz = r.value("f_drive2_hz", 0.0);
      sp.rates.n_m = r.value("n_m", 0.0);
    }
  }
  return sp;
}

json rates_to_json(const DerivedRates& rates) {
  return json{{"g_eff1_hz", rates.g_eff1_hz},
              {"g_eff2_hz", rates.g_eff2_hz},
              {"gamma1_hz", rates.gamma1_hz},
              {"gamma2_hz", rates.gamma2_hz},
              {"c1", rates.c1},
              {"c2", rates.c2},
              {"gamma_total_hz", rates.gamma_total_hz},
              {"f_drive1_hz", rates.f_drive1_hz},
              {"f_drive2_hz", rates.f_drive2_hz},
              {"n_m", rates.n_m}};
}

json regime_to_json(const RegimeReport& report) {
  return json{{"sideband_resolved1", report.sideband_resolved1},
              {"sideband_resolved2", report.sideband_resolved2},
              {"weak_coupling1", report.weak_coupling1},
              {"weak_coupling2", report.weak_coupling2},
              {"all_ok", report.all_ok()},
              {"warnings", report.warnings}};
}

json fit_to_json(const LorentzianFit& fit) {
  json cov = json::array();
  for (const auto& row : fit.covariance) cov.push_back(row);
  return json{{"center_hz", fit.center_hz},
              {"fwhm_hz", fit.fwhm_hz},
              {"peak", fit.peak},
              {"floor", fit.floor},
              {"sigma_center_hz", fit.sigma_center_hz},
              {"sigma_fwhm_hz", fit.sigma_fwhm_hz},
              {"sigma_peak", fit.sigma_peak},
              {"sigma_floor", fit.sigma_floor},
              {"covariance", cov},
              {"residual_rms", fit.residual_rms},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"low_snr", fit.low_snr}};
}

json bath_to_json(const BathInference& bath) {
  return json{{"n_th", bath.n_th},
              {"n_m", bath.n_m},
              {"n_add", bath.n_add},
              {"referred_input", bath.referred_input},
              {"warnings", bath.warnings}};
}

json added_noise_to_json(const AddedNoiseResult& noise) {
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
  };
  return json{{"n_add_1", finite_or_null(noise.n_add_1)},
              {"n_add_2", finite_or_null(noise.n_add_2)},
              {"n_m", noise.n_m},
              {"bound_ok", noise.bound_ok},
              {"diagnostics", noise.diagnostics}};
}

json solution_to_json(const DesignSolution& solution) {
  return json{{"drive", {{"n1", solution.drive.n1}, {"n2", solution.drive.n2}}},
              {"rates", rates_to_json(solution.rates)},
              {"predicted",
               {{"t_sq", solution.predicted.t_sq},
                {"r1_sq", solution.predicted.r1_sq},
                {"r2_sq", solution.predicted.r2_sq},
                {"gamma_total_hz", solution.rates.gamma_total_hz}}},
              {"added_noise", added_noise_to_json(solution.noise)},
              {"drive_power1_w", solution.drive_power1_w},
              {"drive_power2_w", solution.drive_power2_w},
              {"feasible", solution.feasible},
              {"branch", solution.branch},
              {"notes", solution.notes}};
}

}  // namespace omc
