#include "omconv/omconv.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "omconv/design.hpp"
#include "omconv/estimation.hpp"
#include "omconv/json_io.hpp"
#include "omconv/noise.hpp"
#include "omconv/params.hpp"
#include "omconv/scattering.hpp"
#include "omconv/version.hpp"

struct omc_device {
  omc::ConverterParams params;
  omc::DriveConfig drive;
};

struct omc_table {
  omc::Table table;
};

namespace {

thread_local std::string g_last_error;
thread_local double g_last_max_achievable = std::numeric_limits<double>::quiet_NaN();

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
omc_status wrap(Fn&& fn) noexcept {
  g_last_max_achievable = std::numeric_limits<double>::quiet_NaN();
  try {
    fn();
    g_last_error.clear();
    return OMC_OK;
  } catch (const omc::Infeasible& e) {
    set_error(e.what());
    g_last_max_achievable = e.max_achievable();
    return OMC_ERR_INFEASIBLE;
  } catch (const omc::FitError& e) {
    set_error(e.what());
    return OMC_ERR_NO_CONVERGENCE;
  } catch (const omc::DataError& e) {
    set_error(e.what());
    return OMC_ERR_IO;
  } catch (const omc::InvalidParameter& e) {
    set_error(e.what());
    return OMC_ERR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    set_error(e.what());
    return OMC_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return OMC_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw omc::InvalidParameter(what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

omc_rates to_c(const omc::DerivedRates& r) {
  return omc_rates{r.g_eff1_hz, r.g_eff2_hz,      r.gamma1_hz,   r.gamma2_hz,   r.c1,
                   r.c2,        r.gamma_total_hz, r.f_drive1_hz, r.f_drive2_hz, r.n_m};
}

omc::DerivedRates from_c(const omc_rates& r) {
  omc::DerivedRates out;
  out.g_eff1_hz = r.g_eff1_hz;
  out.g_eff2_hz = r.g_eff2_hz;
  out.gamma1_hz = r.gamma1_hz;
  out.gamma2_hz = r.gamma2_hz;
  out.c1 = r.c1;
  out.c2 = r.c2;
  out.gamma_total_hz = r.gamma_total_hz;
  out.f_drive1_hz = r.f_drive1_hz;
  out.f_drive2_hz = r.f_drive2_hz;
  out.n_m = r.n_m;
  return out;
}

omc_complex to_c(const omc::cplx& z) { return omc_complex{z.real(), z.imag()}; }

omc_added_noise to_c(const omc::AddedNoiseResult& n) {
  return omc_added_noise{n.n_add_1, n.n_add_2, n.n_m, n.bound_ok ? 1 : 0};
}

omc_lorentzian_fit to_c(const omc::LorentzianFit& f) {
  omc_lorentzian_fit out{};
  out.center_hz = f.center_hz;
  out.fwhm_hz = f.fwhm_hz;
  out.peak = f.peak;
  out.floor = f.floor;
  out.sigma_center_hz = f.sigma_center_hz;
  out.sigma_fwhm_hz = f.sigma_fwhm_hz;
  out.sigma_peak = f.sigma_peak;
  out.sigma_floor = f.sigma_floor;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.covariance[r][c] = f.covariance[r][c];
  out.residual_rms = f.residual_rms;
  out.iterations = f.iterations;
  out.converged = f.converged ? 1 : 0;
  out.low_snr = f.low_snr ? 1 : 0;
  return out;
}

omc::LorentzianFit from_c(const omc_lorentzian_fit& f) {
  omc::LorentzianFit out;
  out.center_hz = f.center_hz;
  out.fwhm_hz = f.fwhm_hz;
  out.peak = f.peak;
  out.floor = f.floor;
  out.sigma_center_hz = f.sigma_center_hz;
  out.sigma_fwhm_hz = f.sigma_fwhm_hz;
  out.sigma_peak = f.sigma_peak;
  out.sigma_floor = f.sigma_floor;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out.covariance[r][c] = f.covariance[r][c];
  out.residual_rms = f.residual_rms;
  out.iterations = f.iterations;
  out.converged = f.converged != 0;
  out.low_snr = f.low_snr != 0;
  return out;
}

omc_design_solution to_c(const omc::DesignSolution& s) {
  omc_design_solution out{};
  out.drive = omc_drive{s.drive.n1, s.drive.n2};
  out.rates = to_c(s.rates);
  out.predicted = omc_on_resonance{s.predicted.t_sq, s.predicted.r1_sq, s.predicted.r2_sq};
  out.noise = to_c(s.noise);
  out.drive_power1_w = s.drive_power1_w;
  out.drive_power2_w = s.drive_power2_w;
  out.feasible = s.feasible ? 1 : 0;
  std::snprintf(out.branch, sizeof(out.branch), "%s", s.branch.c_str());
  return out;
}

omc::DesignConstraints from_c(const omc_design_constraints* c) {
  omc::DesignConstraints out;
  if (c) {
    if (c->has_fixed_c1) out.fixed_c1 = c->fixed_c1;
    if (c->has_max_photons) out.max_photons = c->max_photons;
  }
  return out;
}

}  // namespace

extern "C" {

const char* omc_version(void) { return omc::kVersion; }

const char* omc_last_error(void) { return g_last_error.c_str(); }

double omc_last_max_achievable(void) { return g_last_max_achievable; }

void omc_string_free(char* s) { std::free(s); }

omc_status omc_device_parse(const char* json_text, omc_device** out) {
  return wrap([&] {
    require(json_text && out, "null argument");
    omc::DeviceFile dev = omc::parse_device(json_text);
    *out = new omc_device{dev.params, dev.drive};
  });
}

omc_status omc_device_load(const char* path, omc_device** out) {
  return wrap([&] {
    require(path && out, "null argument");
    omc::DeviceFile dev = omc::load_device(path);
    *out = new omc_device{dev.params, dev.drive};
  });
}

void omc_device_free(omc_device* dev) { delete dev; }

omc_status omc_device_to_json(const omc_device* dev, char** out_json) {
  return wrap([&] {
    require(dev && out_json, "null argument");
    *out_json = dup_string(omc::device_to_json(dev->params, dev->drive).dump(2));
  });
}

omc_status omc_device_hash_hex(const omc_device* dev, char* buf, size_t buflen) {
  return wrap([&] {
    require(dev && buf, "null argument");
    require(buflen >= 17, "hash buffer must hold at least 17 bytes");
    const std::string hex = omc::device_hash_hex(omc::device_to_json(dev->params, dev->drive));
    std::snprintf(buf, buflen, "%s", hex.c_str());
  });
}

omc_status omc_device_get(const omc_device* dev, omc_cavity_params* cavity1,
                          omc_cavity_params* cavity2, omc_mech_params* mech, omc_drive* drive) {
  return wrap([&] {
    require(dev != nullptr, "null device");
    auto fill = [](const omc::CavityParams& c) {
      return omc_cavity_params{c.f_c_hz, c.kappa_hz, c.eta, c.g0_hz, c.t_noise_k};
    };
    if (cavity1) *cavity1 = fill(dev->params.cavity1);
    if (cavity2) *cavity2 = fill(dev->params.cavity2);
    if (mech)
      *mech = omc_mech_params{dev->params.mech.f_m_hz, dev->params.mech.gamma_m_hz,
                              dev->params.mech.n_th};
    if (drive) *drive = omc_drive{dev->drive.n1, dev->drive.n2};
  });
}

omc_status omc_device_set_drive(omc_device* dev, omc_drive drive) {
  return wrap([&] {
    require(dev != nullptr, "null device");
    omc::DriveConfig d{drive.n1, drive.n2};
    d.validate();
    dev->drive = d;
  });
}

omc_status omc_device_set_eta(omc_device* dev, int which_cavity, double eta) {
  return wrap([&] {
    require(dev != nullptr, "null device");
    require(which_cavity == 1 || which_cavity == 2, "which_cavity must be 1 or 2");
    omc::ConverterParams trial = dev->params;
    (which_cavity == 1 ? trial.cavity1.eta : trial.cavity2.eta) = eta;
    trial.validate();
    dev->params = trial;
  });
}

omc_status omc_derive_rates(const omc_device* dev, omc_rates* out) {
  return wrap([&] {
    require(dev && out, "null argument");
    *out = to_c(omc::derive_rates(dev->params, dev->drive));
  });
}

omc_status omc_drive_for_cooperativity(const omc_device* dev, double c1, double c2,
                                       omc_drive* out) {
  return wrap([&] {
    require(dev && out, "null argument");
    const omc::DriveConfig d = omc::drive_for_cooperativity(dev->params, c1, c2);
    *out = omc_drive{d.n1, d.n2};
  });
}

omc_status omc_check_regime(const omc_device* dev, const omc_rates* rates, omc_regime* out) {
  return wrap([&] {
    require(dev && rates && out, "null argument");
    const omc::RegimeReport rep = omc::check_regime(dev->params, from_c(*rates));
    *out = omc_regime{rep.sideband_resolved1 ? 1 : 0, rep.sideband_resolved2 ? 1 : 0,
                      rep.weak_coupling1 ? 1 : 0, rep.weak_coupling2 ? 1 : 0};
  });
}

omc_status omc_scattering_on_resonance(const omc_rates* rates, double eta1, double eta2,
                                       omc_on_resonance* out) {
  return wrap([&] {
    require(rates && out, "null argument");
    const omc::OnResonance on = omc::scattering_on_resonance(from_c(*rates), eta1, eta2);
    *out = omc_on_resonance{on.t_sq, on.r1_sq, on.r2_sq};
  });
}

omc_status omc_scattering_at(const omc_device* dev, const omc_rates* rates, double delta_hz,
                             omc_scattering_point* out) {
  return wrap([&] {
    require(dev && rates && out, "null argument");
    const omc::ScatteringPoint p = omc::scattering_at(dev->params, from_c(*rates), delta_hz);
    out->delta_hz = p.delta_hz;
    out->t = to_c(p.t);
    out->r1 = to_c(p.r1);
    out->r2 = to_c(p.r2);
    out->s_m1 = to_c(p.s_m1);
    out->s_m2 = to_c(p.s_m2);
    out->loss1 = to_c(p.loss1);
    out->loss2 = to_c(p.loss2);
    for (int i = 0; i < OMC_NUM_PORTS; ++i)
      for (int j = 0; j < OMC_NUM_PORTS; ++j)
        out->s[i][j] = to_c(p.s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  });
}

omc_status omc_trace_table(const omc_device* dev, double delta_min_hz, double delta_max_hz,
                           int n_points, omc_table** out) {
  return wrap([&] {
    require(dev && out, "null argument");
    const omc::DerivedRates rates = omc::derive_rates(dev->params, dev->drive);
    const omc::ScatteringTrace tr =
        omc::trace(dev->params, rates, delta_min_hz, delta_max_hz, n_points);
    *out = new omc_table{omc::trace_table(tr)};
  });
}

omc_status omc_sweep_cooperativity_table(const omc_device* dev, const double* c_totals,
                                         size_t n, omc_table** out) {
  return wrap([&] {
    require(dev && out, "null argument");
    require(c_totals != nullptr || n == 0, "null sweep list");
    const std::vector<double> list(c_totals, c_totals + n);
    *out = new omc_table{omc::cooperativity_table(omc::sweep_cooperativity(dev->params, list))};
  });
}

omc_status omc_sweep_ratio_table(const omc_device* dev, double c1_fixed, const double* ratios,
                                 size_t n, omc_table** out) {
  return wrap([&] {
    require(dev && out, "null argument");
    require(ratios != nullptr || n == 0, "null sweep list");
    const std::vector<double> list(ratios, ratios + n);
    *out = new omc_table{omc::ratio_table(omc::sweep_ratio(dev->params, c1_fixed, list))};
  });
}

omc_status omc_bose_occupancy(double f_hz, double t_k, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = omc::bose_occupancy(f_hz, t_k);
  });
}

omc_status omc_floor_from_noise_temperature(double t_noise_k, double f_hz, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = omc::floor_from_noise_temperature(t_noise_k, f_hz);
  });
}

omc_status omc_floor_from_noise_temperature_rj(double t_noise_k, double f_hz, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = omc::floor_from_noise_temperature_rj(t_noise_k, f_hz);
  });
}

omc_status omc_added_noise_calc(const omc_rates* rates, double eta1, double eta2, double n_th,
                                omc_added_noise* out) {
  return wrap([&] {
    require(rates && out, "null argument");
    *out = to_c(omc::added_noise(from_c(*rates), eta1, eta2, n_th));
  });
}

omc_status omc_spectrum_table(const omc_device* dev, int which_cavity, double n_th,
                              double floor_quanta, double span_hz, int n_points,
                              omc_table** out) {
  return wrap([&] {
    require(dev && out, "null argument");
    require(span_hz > 0.0, "span_hz must be > 0");
    require(n_points >= 2, "n_points must be >= 2");
    const double bath = n_th < 0.0 ? dev->params.mech.n_th : n_th;
    const omc::DerivedRates rates = omc::derive_rates(dev->params, dev->drive);
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    const double step = 2.0 * span_hz / static_cast<double>(n_points - 1);
    for (int i = 0; i < n_points; ++i)
      grid[static_cast<std::size_t>(i)] = -span_hz + step * static_cast<double>(i);
    const omc::NoiseSpectrum sp =
        omc::output_noise_spectrum(dev->params, rates, which_cavity, bath, floor_quanta, grid);
    *out = new omc_table{omc::spectrum_table(sp)};
  });
}

omc_status omc_synthesize_table(const omc_table* spectrum, double n_avg, uint64_t seed,
                                omc_table** out) {
  return wrap([&] {
    require(spectrum && out, "null argument");
    const omc::NoiseSpectrum sp = omc::spectrum_from_table(spectrum->table);
    const omc::NoiseSpectrum noisy = omc::synthesize_spectrum(sp, n_avg, seed);
    *out = new omc_table{omc::spectrum_table(noisy)};
  });
}

omc_status omc_fit_lorentzian(const double* delta_hz, const double* values, size_t n,
                              omc_lorentzian_fit* out) {
  return wrap([&] {
    require(delta_hz && values && out, "null argument");
    const std::vector<double> x(delta_hz, delta_hz + n);
    const std::vector<double> y(values, values + n);
    *out = to_c(omc::fit_lorentzian(x, y));
  });
}

omc_status omc_fit_lorentzian_table(const omc_table* spectrum, omc_lorentzian_fit* out) {
  return wrap([&] {
    require(spectrum && out, "null argument");
    *out = to_c(omc::fit_lorentzian(omc::spectrum_from_table(spectrum->table)));
  });
}

omc_status omc_fit_json(const omc_lorentzian_fit* fit, char** out_json) {
  return wrap([&] {
    require(fit && out_json, "null argument");
    *out_json = dup_string(omc::fit_to_json(from_c(*fit)).dump(2));
  });
}

omc_status omc_infer_bath(const omc_lorentzian_fit* fit, const omc_rates* rates, double eta1,
                          double eta2, int measured_cavity, omc_bath_inference* out) {
  return wrap([&] {
    require(fit && rates && out, "null argument");
    const omc::BathInference b =
        omc::infer_bath(from_c(*fit), from_c(*rates), eta1, eta2, measured_cavity);
    *out = omc_bath_inference{b.n_th, b.n_m, b.n_add, b.referred_input};
  });
}

omc_status omc_infer_bath_json(const omc_lorentzian_fit* fit, const omc_rates* rates,
                               double eta1, double eta2, int measured_cavity, char** out_json) {
  return wrap([&] {
    require(fit && rates && out_json, "null argument");
    const omc::BathInference b =
        omc::infer_bath(from_c(*fit), from_c(*rates), eta1, eta2, measured_cavity);
    *out_json = dup_string(omc::bath_to_json(b).dump(2));
  });
}

omc_status omc_self_calibrate(double r1_off, double r2_off, double t12, double t21,
                              omc_line_calibration* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    const omc::LineCalibration cal =
        omc::self_calibrate(omc::RawLineMeasurements{r1_off, r2_off, t12, t21});
    *out = omc_line_calibration{cal.t_sq, cal.alpha1_beta1, cal.alpha2_beta2, cal.alpha1_beta2,
                                cal.alpha2_beta1};
  });
}

omc_status omc_thermometry(const double* t_k, const double* area, size_t n, double n_drive,
                           const omc_mech_params* mech, const omc_cavity_params* cavity,
                           double integration_span_hz, omc_thermometry_fit* out) {
  return wrap([&] {
    require(t_k && area && mech && cavity && out, "null argument");
    std::vector<omc::ThermometryPoint> points(n);
    for (size_t i = 0; i < n; ++i) points[i] = omc::ThermometryPoint{t_k[i], area[i]};
    omc::MechanicalParams m{mech->f_m_hz, mech->gamma_m_hz, mech->n_th};
    omc::CavityParams c{cavity->f_c_hz, cavity->kappa_hz, cavity->eta, cavity->g0_hz,
                        cavity->t_noise_k};
    const omc::ThermometryFit fit = omc::thermometry(points, n_drive, m, c, integration_span_hz);
    *out = omc_thermometry_fit{fit.slope,      fit.intercept, fit.g0_hz,
                               fit.gamma1_hz,  fit.c1,        fit.system_noise_quanta};
  });
}

omc_status omc_solve_bandwidth(const omc_device* dev, double target_bw_hz,
                               const omc_design_constraints* constraints,
                               omc_design_solution* out, char** out_json) {
  return wrap([&] {
    require(dev && out, "null argument");
    const omc::DesignSolution sol =
        omc::solve_bandwidth(dev->params, target_bw_hz, from_c(constraints));
    *out = to_c(sol);
    if (out_json) *out_json = dup_string(omc::solution_to_json(sol).dump(2));
  });
}

omc_status omc_solve_split(const omc_device* dev, double c1_fixed, double target_t_sq,
                           const omc_design_constraints* constraints,
                           omc_design_solution out[2], int* n_out, char** out_json) {
  return wrap([&] {
    require(dev && out && n_out, "null argument");
    const std::vector<omc::DesignSolution> sols =
        omc::solve_split(dev->params, c1_fixed, target_t_sq, from_c(constraints));
    *n_out = static_cast<int>(sols.size());
    for (std::size_t i = 0; i < sols.size() && i < 2; ++i) out[i] = to_c(sols[i]);
    if (out_json) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& s : sols) arr.push_back(omc::solution_to_json(s));
      *out_json = dup_string(arr.dump(2));
    }
  });
}

omc_status omc_solve_transmission(const omc_device* dev, double target_t_sq,
                                  const omc_design_constraints* constraints,
                                  omc_design_solution* out, char** out_json) {
  return wrap([&] {
    require(dev && out, "null argument");
    const omc::DesignSolution sol =
        omc::solve_transmission(dev->params, target_t_sq, from_c(constraints));
    *out = to_c(sol);
    if (out_json) *out_json = dup_string(omc::solution_to_json(sol).dump(2));
  });
}

omc_status omc_drive_power_w(const omc_device* dev, int which_cavity, double n_photons,
                             double* out) {
  return wrap([&] {
    require(dev && out, "null argument");
    *out = omc::drive_power_w(dev->params, which_cavity, n_photons);
  });
}

omc_status omc_photon_flux_per_s(double power_dbm, double f_hz, double* out) {
  return wrap([&] {
    require(out != nullptr, "null output");
    *out = omc::photon_flux_per_s(power_dbm, f_hz);
  });
}

omc_status omc_check_compression(double flux_per_s, double ceiling_per_s, int* ok) {
  return wrap([&] {
    require(ok != nullptr, "null output");
    const double ceiling =
        ceiling_per_s > 0.0 ? ceiling_per_s : omc::kDefaultCompressionFluxPerS;
    *ok = omc::check_compression(flux_per_s, ceiling).ok ? 1 : 0;
  });
}

void omc_table_free(omc_table* table) { delete table; }

omc_status omc_table_num_rows(const omc_table* table, size_t* out) {
  return wrap([&] {
    require(table && out, "null argument");
    *out = table->table.rows.size();
  });
}

omc_status omc_table_num_cols(const omc_table* table, size_t* out) {
  return wrap([&] {
    require(table && out, "null argument");
    *out = table->table.columns.size();
  });
}

omc_status omc_table_column_name(const omc_table* table, size_t col, const char** out) {
  return wrap([&] {
    require(table && out, "null argument");
    require(col < table->table.columns.size(), "column index out of range");
    *out = table->table.columns[col].c_str();
  });
}

omc_status omc_table_value(const omc_table* table, size_t row, size_t col, double* out) {
  return wrap([&] {
    require(table && out, "null argument");
    require(row < table->table.rows.size(), "row index out of range");
    require(col < table->table.rows[row].size(), "column index out of range");
    *out = table->table.rows[row][col];
  });
}

omc_status omc_table_metadata_json(const omc_table* table, char** out_json) {
  return wrap([&] {
    require(table && out_json, "null argument");
    const nlohmann::json& m = table->table.metadata;
    *out_json = dup_string(m.is_null() ? "{}" : m.dump(2));
  });
}

omc_status omc_table_merge_metadata_json(omc_table* table, const char* json_text) {
  return wrap([&] {
    require(table && json_text, "null argument");
    nlohmann::json patch;
    try {
      patch = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw omc::InvalidParameter(std::string("metadata JSON: ") + e.what());
    }
    require(patch.is_object(), "metadata patch must be a JSON object");
    if (!table->table.metadata.is_object()) table->table.metadata = nlohmann::json::object();
    for (auto it = patch.begin(); it != patch.end(); ++it)
      table->table.metadata[it.key()] = it.value();
  });
}

omc_status omc_table_write_csv(const omc_table* table, const char* path) {
  return wrap([&] {
    require(table && path, "null argument");
    omc::write_table(table->table, path);
  });
}

omc_status omc_table_read_csv(const char* path, omc_table** out) {
  return wrap([&] {
    require(path && out, "null argument");
    omc::Table t = omc::read_csv(path);
    const std::filesystem::path side = omc::sidecar_path(path);
    std::error_code ec;
    if (std::filesystem::exists(side, ec)) {
      std::ifstream in(side, std::ios::binary);
      if (in) {
        try {
          t.metadata = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception&) {
          // A malformed sidecar only costs the optional metadata.
        }
      }
    }
    *out = new omc_table{std::move(t)};
  });
}

omc_status omc_write_text(const char* path, const char* content) {
  return wrap([&] {
    require(path && content, "null argument");
    omc::write_text_atomic(path, content);
  });
}

}  // extern "C"
