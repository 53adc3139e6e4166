/*
 * C API for the omconv library: modeling, estimation, and inverse design of
 * mechanically mediated microwave frequency converters.
 *
 * Conventions:
 *  - Every fallible function returns omc_status; OMC_OK is 0. On failure,
 *    omc_last_error() returns a thread-local message describing the problem,
 *    and OMC_ERR_INFEASIBLE additionally records the best achievable value,
 *    readable via omc_last_max_achievable().
 *  - Opaque handles (omc_device, omc_table) are created and destroyed by
 *    this library; free them with their matching *_free function.
 *  - Strings returned through char** out parameters are heap-allocated;
 *    release them with omc_string_free.
 *  - All frequencies and rates are cyclic frequencies in Hz.
 */

#ifndef OMCONV_H
#define OMCONV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum omc_status {
  OMC_OK = 0,
  OMC_ERR_INVALID_ARGUMENT = 1,
  OMC_ERR_INFEASIBLE = 2,
  OMC_ERR_IO = 3,
  OMC_ERR_NO_CONVERGENCE = 4,
  OMC_ERR_INTERNAL = 5
} omc_status;

typedef struct omc_device omc_device;
typedef struct omc_table omc_table;

typedef struct omc_cavity_params {
  double f_c_hz;
  double kappa_hz;
  double eta;
  double g0_hz;
  double t_noise_k; /* 0 means unset */
} omc_cavity_params;

typedef struct omc_mech_params {
  double f_m_hz;
  double gamma_m_hz;
  double n_th;
} omc_mech_params;

typedef struct omc_drive {
  double n1;
  double n2;
} omc_drive;

typedef struct omc_rates {
  double g_eff1_hz;
  double g_eff2_hz;
  double gamma1_hz;
  double gamma2_hz;
  double c1;
  double c2;
  double gamma_total_hz;
  double f_drive1_hz;
  double f_drive2_hz;
  double n_m;
} omc_rates;

typedef struct omc_regime {
  int sideband_resolved1;
  int sideband_resolved2;
  int weak_coupling1;
  int weak_coupling2;
} omc_regime;

typedef struct omc_on_resonance {
  double t_sq;
  double r1_sq;
  double r2_sq;
} omc_on_resonance;

typedef struct omc_complex {
  double re;
  double im;
} omc_complex;

/* Port order for the full matrix: cavity-1 external, cavity-2 external,
 * mechanical bath, cavity-1 internal loss, cavity-2 internal loss. */
#define OMC_NUM_PORTS 5

typedef struct omc_scattering_point {
  double delta_hz;
  omc_complex t;
  omc_complex r1;
  omc_complex r2;
  omc_complex s_m1;
  omc_complex s_m2;
  omc_complex loss1;
  omc_complex loss2;
  omc_complex s[OMC_NUM_PORTS][OMC_NUM_PORTS]; /* s[out][in] */
} omc_scattering_point;

typedef struct omc_added_noise {
  double n_add_1; /* +infinity when that drive is off */
  double n_add_2;
  double n_m;
  int bound_ok;
} omc_added_noise;

typedef struct omc_lorentzian_fit {
  double center_hz;
  double fwhm_hz;
  double peak;
  double floor;
  double sigma_center_hz;
  double sigma_fwhm_hz;
  double sigma_peak;
  double sigma_floor;
  double covariance[4][4];
  double residual_rms;
  int iterations;
  int converged;
  int low_snr;
} omc_lorentzian_fit;

typedef struct omc_bath_inference {
  double n_th;
  double n_m;
  double n_add;
  int referred_input;
} omc_bath_inference;

typedef struct omc_line_calibration {
  double t_sq;
  double alpha1_beta1;
  double alpha2_beta2;
  double alpha1_beta2;
  double alpha2_beta1;
} omc_line_calibration;

typedef struct omc_thermometry_fit {
  double slope;
  double intercept;
  double g0_hz;
  double gamma1_hz;
  double c1;
  double system_noise_quanta; /* NaN when no integration span was supplied */
} omc_thermometry_fit;

typedef struct omc_design_constraints {
  int has_fixed_c1;
  double fixed_c1;
  int has_max_photons;
  double max_photons;
} omc_design_constraints;

typedef struct omc_design_solution {
  omc_drive drive;
  omc_rates rates;
  omc_on_resonance predicted;
  omc_added_noise noise;
  double drive_power1_w;
  double drive_power2_w;
  int feasible;
  char branch[16]; /* "", "lesser", "greater", "tangent" */
} omc_design_solution;

/* ---- library/meta ---- */
const char* omc_version(void);
const char* omc_last_error(void);
double omc_last_max_achievable(void); /* valid after OMC_ERR_INFEASIBLE */
void omc_string_free(char* s);

/* ---- device handling ---- */
omc_status omc_device_parse(const char* json_text, omc_device** out);
omc_status omc_device_load(const char* path, omc_device** out);
void omc_device_free(omc_device* dev);
omc_status omc_device_to_json(const omc_device* dev, char** out_json);
omc_status omc_device_hash_hex(const omc_device* dev, char* buf, size_t buflen);
omc_status omc_device_get(const omc_device* dev, omc_cavity_params* cavity1,
                          omc_cavity_params* cavity2, omc_mech_params* mech, omc_drive* drive);
omc_status omc_device_set_drive(omc_device* dev, omc_drive drive);
/* which_cavity is 1 or 2 */
omc_status omc_device_set_eta(omc_device* dev, int which_cavity, double eta);

/* ---- model core ---- */
omc_status omc_derive_rates(const omc_device* dev, omc_rates* out);
omc_status omc_drive_for_cooperativity(const omc_device* dev, double c1, double c2,
                                       omc_drive* out);
omc_status omc_check_regime(const omc_device* dev, const omc_rates* rates, omc_regime* out);

/* ---- scattering ---- */
omc_status omc_scattering_on_resonance(const omc_rates* rates, double eta1, double eta2,
                                       omc_on_resonance* out);
omc_status omc_scattering_at(const omc_device* dev, const omc_rates* rates, double delta_hz,
                             omc_scattering_point* out);
/* Tables below derive rates from the device's current drive. */
omc_status omc_trace_table(const omc_device* dev, double delta_min_hz, double delta_max_hz,
                           int n_points, omc_table** out);
omc_status omc_sweep_cooperativity_table(const omc_device* dev, const double* c_totals,
                                         size_t n, omc_table** out);
omc_status omc_sweep_ratio_table(const omc_device* dev, double c1_fixed, const double* ratios,
                                 size_t n, omc_table** out);

/* ---- noise ---- */
omc_status omc_bose_occupancy(double f_hz, double t_k, double* out);
omc_status omc_floor_from_noise_temperature(double t_noise_k, double f_hz, double* out);
omc_status omc_floor_from_noise_temperature_rj(double t_noise_k, double f_hz, double* out);
omc_status omc_added_noise_calc(const omc_rates* rates, double eta1, double eta2, double n_th,
                                omc_added_noise* out);
/* n_th < 0 selects the device's n_th. Grid is uniform over +/- span about
 * zero detuning. */
omc_status omc_spectrum_table(const omc_device* dev, int which_cavity, double n_th,
                              double floor_quanta, double span_hz, int n_points,
                              omc_table** out);
omc_status omc_synthesize_table(const omc_table* spectrum, double n_avg, uint64_t seed,
                                omc_table** out);

/* ---- estimation ---- */
omc_status omc_fit_lorentzian(const double* delta_hz, const double* values, size_t n,
                              omc_lorentzian_fit* out);
omc_status omc_fit_lorentzian_table(const omc_table* spectrum, omc_lorentzian_fit* out);
omc_status omc_fit_json(const omc_lorentzian_fit* fit, char** out_json);
omc_status omc_infer_bath(const omc_lorentzian_fit* fit, const omc_rates* rates, double eta1,
                          double eta2, int measured_cavity, omc_bath_inference* out);
omc_status omc_infer_bath_json(const omc_lorentzian_fit* fit, const omc_rates* rates,
                               double eta1, double eta2, int measured_cavity, char** out_json);
omc_status omc_self_calibrate(double r1_off, double r2_off, double t12, double t21,
                              omc_line_calibration* out);
omc_status omc_thermometry(const double* t_k, const double* area, size_t n, double n_drive,
                           const omc_mech_params* mech, const omc_cavity_params* cavity,
                           double integration_span_hz, omc_thermometry_fit* out);

/* ---- design ---- */
/* constraints may be NULL. out_json (when non-NULL) receives the full JSON
 * record of the solution(s); for omc_solve_split it is a JSON array. */
omc_status omc_solve_bandwidth(const omc_device* dev, double target_bw_hz,
                               const omc_design_constraints* constraints,
                               omc_design_solution* out, char** out_json);
omc_status omc_solve_split(const omc_device* dev, double c1_fixed, double target_t_sq,
                           const omc_design_constraints* constraints,
                           omc_design_solution out[2], int* n_out, char** out_json);
omc_status omc_solve_transmission(const omc_device* dev, double target_t_sq,
                                  const omc_design_constraints* constraints,
                                  omc_design_solution* out, char** out_json);
omc_status omc_drive_power_w(const omc_device* dev, int which_cavity, double n_photons,
                             double* out);
omc_status omc_photon_flux_per_s(double power_dbm, double f_hz, double* out);
/* ceiling_per_s <= 0 selects the built-in default of 5e12 photons/s. */
omc_status omc_check_compression(double flux_per_s, double ceiling_per_s, int* ok);

/* ---- tables ---- */
void omc_table_free(omc_table* table);
omc_status omc_table_num_rows(const omc_table* table, size_t* out);
omc_status omc_table_num_cols(const omc_table* table, size_t* out);
/* Returned pointer stays valid while the table lives. */
omc_status omc_table_column_name(const omc_table* table, size_t col, const char** out);
omc_status omc_table_value(const omc_table* table, size_t row, size_t col, double* out);
omc_status omc_table_metadata_json(const omc_table* table, char** out_json);
/* Object-merges the given JSON object into the table's metadata. */
omc_status omc_table_merge_metadata_json(omc_table* table, const char* json_text);
/* Writes <path> plus a <path>.json-extension sidecar with the metadata. */
omc_status omc_table_write_csv(const omc_table* table, const char* path);
/* Reads the CSV and, when present, the metadata sidecar next to it. */
omc_status omc_table_read_csv(const char* path, omc_table** out);

/* Atomic text write (temp file + rename), for callers emitting their own
 * JSON records. */
omc_status omc_write_text(const char* path, const char* content);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* OMCONV_H */
