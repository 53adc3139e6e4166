// Command-line front end. Talks to the engine exclusively through the C API
// in omconv/omconv.h; owns argument parsing, file naming, and provenance
// stamping. Outputs carry no timestamps, so identical invocations produce
// byte-identical files.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "omconv/omconv.h"

namespace {

using nlohmann::json;

struct DeviceDeleter {
  void operator()(omc_device* d) const { omc_device_free(d); }
};
using DevicePtr = std::unique_ptr<omc_device, DeviceDeleter>;

struct TableDeleter {
  void operator()(omc_table* t) const { omc_table_free(t); }
};
using TablePtr = std::unique_ptr<omc_table, TableDeleter>;

// Maps an engine status to the documented exit codes: 1 usage, 2 infeasible,
// 3 data error.
int exit_for(omc_status st) {
  std::fprintf(stderr, "error: %s\n", omc_last_error());
  switch (st) {
    case OMC_ERR_INFEASIBLE: {
      const double bound = omc_last_max_achievable();
      if (std::isfinite(bound)) std::fprintf(stderr, "achievable bound: %.12g\n", bound);
      return 2;
    }
    case OMC_ERR_IO:
    case OMC_ERR_NO_CONVERGENCE:
      return 3;
    case OMC_ERR_INVALID_ARGUMENT:
    default:
      return 1;
  }
}

#define CHECK(call)                            \
  do {                                         \
    const omc_status st_ = (call);             \
    if (st_ != OMC_OK) return exit_for(st_);   \
  } while (0)

int usage_error(const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  return 1;
}

// Shortest decimal form that round-trips, for numbers embedded in filenames
// and hand-assembled CSV. Integral values drop the ".0" tail.
std::string num_str(double v) {
  std::string s = json(v).dump();
  if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
  return s;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

json device_json(omc_device* dev) {
  char* text = nullptr;
  if (omc_device_to_json(dev, &text) != OMC_OK) return json::object();
  json j = json::parse(text);
  omc_string_free(text);
  return j;
}

json provenance(omc_device* dev, const std::string& command) {
  char hash[17] = {0};
  omc_device_hash_hex(dev, hash, sizeof(hash));
  return json{{"tool", "omconv"},
              {"version", omc_version()},
              {"command", command},
              {"device_hash", hash},
              {"device", device_json(dev)}};
}

int merge_metadata(omc_table* table, const json& extra) {
  const std::string text = extra.dump();
  CHECK(omc_table_merge_metadata_json(table, text.c_str()));
  return 0;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(points - 1));
  return grid;
}

struct SweepOpts {
  std::string device;
  std::string mode = "cooperativity";
  std::string out;
  int points = 100;
  double c_total_min = 1.0;
  double c_total_max = 3000.0;
  double c1_fixed = 0.0;
  double ratio_min = 0.01;
  double ratio_max = 100.0;
  double span_hz = 0.0;
  std::optional<double> c_total;
  std::optional<double> eta1;
  std::optional<double> eta2;
};

int run_sweep(const SweepOpts& o, const std::string& command) {
  omc_device* raw_dev = nullptr;
  CHECK(omc_device_load(o.device.c_str(), &raw_dev));
  DevicePtr dev(raw_dev);
  if (o.eta1) CHECK(omc_device_set_eta(dev.get(), 1, *o.eta1));
  if (o.eta2) CHECK(omc_device_set_eta(dev.get(), 2, *o.eta2));
  if (o.points < 2) return usage_error("--points must be at least 2");

  omc_table* raw_table = nullptr;
  json settings{{"mode", o.mode}, {"points", o.points}};
  if (o.mode == "cooperativity") {
    if (!(o.c_total_min > 0.0) || !(o.c_total_max > o.c_total_min))
      return usage_error("need 0 < --c-total-min < --c-total-max for a log-spaced sweep");
    const auto grid = log_grid(o.c_total_min, o.c_total_max, o.points);
    CHECK(omc_sweep_cooperativity_table(dev.get(), grid.data(), grid.size(), &raw_table));
    settings["c_total_min"] = o.c_total_min;
    settings["c_total_max"] = o.c_total_max;
  } else if (o.mode == "ratio") {
    if (!(o.c1_fixed > 0.0)) return usage_error("ratio mode requires --c1-fixed > 0");
    if (!(o.ratio_min > 0.0) || !(o.ratio_max > o.ratio_min))
      return usage_error("need 0 < --ratio-min < --ratio-max for a log-spaced sweep");
    const auto grid = log_grid(o.ratio_min, o.ratio_max, o.points);
    CHECK(omc_sweep_ratio_table(dev.get(), o.c1_fixed, grid.data(), grid.size(), &raw_table));
    settings["c1_fixed"] = o.c1_fixed;
    settings["ratio_min"] = o.ratio_min;
    settings["ratio_max"] = o.ratio_max;
  } else {  // detuning
    if (!(o.span_hz > 0.0)) return usage_error("detuning mode requires --span > 0 (Hz)");
    if (o.c_total) {
      omc_drive drive;
      CHECK(omc_drive_for_cooperativity(dev.get(), 0.5 * *o.c_total, 0.5 * *o.c_total, &drive));
      CHECK(omc_device_set_drive(dev.get(), drive));
      settings["c_total"] = *o.c_total;
    }
    CHECK(omc_trace_table(dev.get(), -o.span_hz, o.span_hz, o.points, &raw_table));
    settings["span_hz"] = o.span_hz;
  }
  TablePtr table(raw_table);

  const int rc = merge_metadata(
      table.get(), json{{"provenance", provenance(dev.get(), command)}, {"settings", settings}});
  if (rc) return rc;
  CHECK(omc_table_write_csv(table.get(), o.out.c_str()));
  std::printf("wrote %s\n", o.out.c_str());
  return 0;
}

struct SpectrumOpts {
  std::string device;
  std::string out;
  std::string prefix;
  std::vector<double> c_totals;
  int cavity = 1;
  int points = 801;
  double span_hz = 0.0;  // 0: pick 10x the conversion linewidth per spectrum
  std::optional<double> n_th;
  std::optional<double> floor_quanta;
  std::optional<double> t_noise_k;
  bool synthesize = false;
  double n_avg = 0.0;
  std::uint64_t seed = 0;
};

int run_spectrum(const SpectrumOpts& o, const std::string& command) {
  omc_device* raw_dev = nullptr;
  CHECK(omc_device_load(o.device.c_str(), &raw_dev));
  DevicePtr dev(raw_dev);
  if (o.cavity != 1 && o.cavity != 2) return usage_error("--cavity must be 1 or 2");
  if (o.points < 2) return usage_error("--points must be at least 2");

  omc_cavity_params cav1, cav2;
  CHECK(omc_device_get(dev.get(), &cav1, &cav2, nullptr, nullptr));
  const omc_cavity_params& measured = o.cavity == 1 ? cav1 : cav2;

  double floor = 0.0;
  if (o.floor_quanta) {
    floor = *o.floor_quanta;
  } else if (o.t_noise_k) {
    CHECK(omc_floor_from_noise_temperature(*o.t_noise_k, measured.f_c_hz, &floor));
  } else if (measured.t_noise_k > 0.0) {
    CHECK(omc_floor_from_noise_temperature(measured.t_noise_k, measured.f_c_hz, &floor));
  }

  const bool multi = o.c_totals.size() > 1;
  if (multi && o.prefix.empty())
    return usage_error("multiple --c-total values need --prefix for output naming");
  if (!multi && o.out.empty() && o.prefix.empty())
    return usage_error("provide --out (single spectrum) or --prefix");

  std::size_t index = 0;
  auto one_spectrum = [&](std::optional<double> c_total) -> int {
    json settings{{"cavity", o.cavity}, {"points", o.points}, {"floor_quanta", floor}};
    if (c_total) {
      omc_drive drive;
      CHECK(omc_drive_for_cooperativity(dev.get(), 0.5 * *c_total, 0.5 * *c_total, &drive));
      CHECK(omc_device_set_drive(dev.get(), drive));
      settings["c_total"] = *c_total;
    }
    double span = o.span_hz;
    if (!(span > 0.0)) {
      omc_rates rates;
      CHECK(omc_derive_rates(dev.get(), &rates));
      span = 10.0 * rates.gamma_total_hz;
    }
    settings["span_hz"] = span;

    omc_table* raw_table = nullptr;
    CHECK(omc_spectrum_table(dev.get(), o.cavity, o.n_th ? *o.n_th : -1.0, floor, span,
                             o.points, &raw_table));
    TablePtr table(raw_table);
    if (o.synthesize) {
      const std::uint64_t file_seed = o.seed + index;
      omc_table* noisy = nullptr;
      CHECK(omc_synthesize_table(table.get(), o.n_avg, file_seed, &noisy));
      table.reset(noisy);
      settings["n_avg"] = o.n_avg;
      settings["seed"] = file_seed;
    }

    const int rc = merge_metadata(table.get(), json{{"provenance", provenance(dev.get(), command)},
                                                    {"settings", settings}});
    if (rc) return rc;
    std::string path = o.out;
    if (path.empty() || multi) {
      path = o.prefix + "_ct" + (c_total ? num_str(*c_total) : std::string("drive")) + ".csv";
    }
    CHECK(omc_table_write_csv(table.get(), path.c_str()));
    std::printf("wrote %s\n", path.c_str());
    ++index;
    return 0;
  };

  if (o.c_totals.empty()) return one_spectrum(std::nullopt);
  for (double ct : o.c_totals) {
    const int rc = one_spectrum(ct);
    if (rc) return rc;
  }
  return 0;
}

struct FitOpts {
  std::vector<std::string> inputs;
  std::string out;
  std::string rollup;
  int cavity = 1;  // fallback when a sidecar does not say which output
};

bool metadata_rates(const json& meta, omc_rates* rates, double* eta1, double* eta2,
                    int* which_cavity) {
  if (!meta.is_object() || !meta.contains("rates")) return false;
  const json& r = meta.at("rates");
  *rates = omc_rates{};
  rates->g_eff1_hz = r.value("g_eff1_hz", 0.0);
  rates->g_eff2_hz = r.value("g_eff2_hz", 0.0);
  rates->gamma1_hz = r.value("gamma1_hz", 0.0);
  rates->gamma2_hz = r.value("gamma2_hz", 0.0);
  rates->c1 = r.value("c1", 0.0);
  rates->c2 = r.value("c2", 0.0);
  rates->gamma_total_hz = r.value("gamma_total_hz", 0.0);
  rates->f_drive1_hz = r.value("f_drive1_hz", 0.0);
  rates->f_drive2_hz = r.value("f_drive2_hz", 0.0);
  rates->n_m = r.value("n_m", 0.0);
  *eta1 = meta.value("eta1", 0.0);
  *eta2 = meta.value("eta2", 0.0);
  if (meta.contains("which_cavity")) *which_cavity = meta.value("which_cavity", 1);
  return rates->gamma_total_hz > 0.0 && *eta1 > 0.0 && *eta2 > 0.0;
}

int run_fit(const FitOpts& o, const std::string& command) {
  if (o.inputs.empty()) return usage_error("fit needs at least one --input CSV");

  json records = json::array();
  json rollup_rows = json::array();
  bool any_failed = false;

  for (const std::string& path : o.inputs) {
    json record{{"file", path}};
    omc_table* raw_table = nullptr;
    omc_status st = omc_table_read_csv(path.c_str(), &raw_table);
    if (st != OMC_OK) {
      record["error"] = omc_last_error();
      any_failed = true;
      records.push_back(record);
      std::fprintf(stderr, "error: %s: %s\n", path.c_str(), omc_last_error());
      continue;
    }
    TablePtr table(raw_table);

    omc_lorentzian_fit fit;
    st = omc_fit_lorentzian_table(table.get(), &fit);
    if (st != OMC_OK) {
      record["error"] = omc_last_error();
      any_failed = true;
      records.push_back(record);
      std::fprintf(stderr, "error: %s: %s\n", path.c_str(), omc_last_error());
      continue;
    }
    char* fit_text = nullptr;
    if (omc_fit_json(&fit, &fit_text) == OMC_OK) {
      record["fit"] = json::parse(fit_text);
      omc_string_free(fit_text);
    }

    char* meta_text = nullptr;
    json meta;
    if (omc_table_metadata_json(table.get(), &meta_text) == OMC_OK) {
      meta = json::parse(meta_text);
      omc_string_free(meta_text);
    }
    omc_rates rates;
    double eta1 = 0.0, eta2 = 0.0;
    int which = o.cavity;
    if (metadata_rates(meta, &rates, &eta1, &eta2, &which)) {
      char* bath_text = nullptr;
      st = omc_infer_bath_json(&fit, &rates, eta1, eta2, which, &bath_text);
      if (st != OMC_OK) {
        record["error"] = omc_last_error();
        any_failed = true;
        std::fprintf(stderr, "error: %s: %s\n", path.c_str(), omc_last_error());
      } else {
        const json bath = json::parse(bath_text);
        omc_string_free(bath_text);
        record["bath"] = bath;
        rollup_rows.push_back(json::array({rates.c1 + rates.c2, bath.value("n_add", 0.0),
                                           bath.value("n_m", 0.0)}));
      }
    } else {
      record["note"] = "no rate metadata in sidecar; bath inference skipped";
    }
    records.push_back(record);
  }

  const json out_doc{{"provenance",
                      json{{"tool", "omconv"}, {"version", omc_version()}, {"command", command}}},
                     {"results", records}};
  if (!o.out.empty()) {
    const std::string text = out_doc.dump(2) + "\n";
    CHECK(omc_write_text(o.out.c_str(), text.c_str()));
    std::printf("wrote %s\n", o.out.c_str());
  } else {
    std::printf("%s\n", out_doc.dump(2).c_str());
  }

  if (!o.rollup.empty()) {
    std::string csv = "c_total,n_add,n_m\n";
    for (const auto& row : rollup_rows)
      csv += num_str(row[0].get<double>()) + "," + num_str(row[1].get<double>()) + "," +
             num_str(row[2].get<double>()) + "\n";
    CHECK(omc_write_text(o.rollup.c_str(), csv.c_str()));
    std::printf("wrote %s\n", o.rollup.c_str());
  }
  return any_failed ? 3 : 0;
}

struct DesignOpts {
  std::string device;
  std::string out;
  std::optional<double> target_bandwidth_hz;
  std::optional<double> target_split_t_sq;
  std::optional<double> target_transmission_sq;
  std::optional<double> c1_fixed;
  std::optional<double> max_photons;
};

void print_solution(const omc_design_solution& s) {
  std::printf("  branch: %s\n", s.branch[0] ? s.branch : "unique");
  std::printf("  C1 = %.10g, C2 = %.10g (C1+C2 = %.10g)\n", s.rates.c1, s.rates.c2,
              s.rates.c1 + s.rates.c2);
  std::printf("  drive photons: n1 = %.10g, n2 = %.10g\n", s.drive.n1, s.drive.n2);
  std::printf("  drive power:   P1 = %.6g W, P2 = %.6g W\n", s.drive_power1_w,
              s.drive_power2_w);
  std::printf("  predicted: |t|^2 = %.10g, |r1|^2 = %.10g, |r2|^2 = %.10g\n", s.predicted.t_sq,
              s.predicted.r1_sq, s.predicted.r2_sq);
  std::printf("  bandwidth: %.10g Hz, n_add_1 = %.6g, n_add_2 = %.6g, n_m = %.6g\n",
              s.rates.gamma_total_hz, s.noise.n_add_1, s.noise.n_add_2, s.noise.n_m);
  std::printf("  feasible: %s\n", s.feasible ? "yes" : "no (constraint violated)");
}

int run_design(const DesignOpts& o, const std::string& command) {
  const int n_targets = (o.target_bandwidth_hz ? 1 : 0) + (o.target_split_t_sq ? 1 : 0) +
                        (o.target_transmission_sq ? 1 : 0);
  if (n_targets != 1)
    return usage_error(
        "choose exactly one of --target-bandwidth, --target-split, --target-transmission");
  if (o.target_split_t_sq && !o.c1_fixed)
    return usage_error("--target-split needs --c1-fixed");

  omc_device* raw_dev = nullptr;
  CHECK(omc_device_load(o.device.c_str(), &raw_dev));
  DevicePtr dev(raw_dev);

  omc_design_constraints constraints{};
  if (o.c1_fixed) {
    constraints.has_fixed_c1 = 1;
    constraints.fixed_c1 = *o.c1_fixed;
  }
  if (o.max_photons) {
    constraints.has_max_photons = 1;
    constraints.max_photons = *o.max_photons;
  }

  omc_design_solution sols[2];
  int n_sols = 1;
  char* sol_text = nullptr;
  if (o.target_bandwidth_hz) {
    std::printf("target: conversion bandwidth %.10g Hz\n", *o.target_bandwidth_hz);
    CHECK(omc_solve_bandwidth(dev.get(), *o.target_bandwidth_hz, &constraints, &sols[0],
                              &sol_text));
  } else if (o.target_split_t_sq) {
    std::printf("target: |t|^2 = %.10g at fixed C1 = %.10g\n", *o.target_split_t_sq,
                *o.c1_fixed);
    omc_design_constraints split_constraints = constraints;
    split_constraints.has_fixed_c1 = 0;  // C1 is the explicit solver argument here
    CHECK(omc_solve_split(dev.get(), *o.c1_fixed, *o.target_split_t_sq, &split_constraints,
                          sols, &n_sols, &sol_text));
  } else {
    std::printf("target: balanced |t|^2 = %.10g\n", *o.target_transmission_sq);
    CHECK(omc_solve_transmission(dev.get(), *o.target_transmission_sq, &constraints, &sols[0],
                                 &sol_text));
  }

  bool all_feasible = true;
  for (int i = 0; i < n_sols; ++i) {
    std::printf("solution %d of %d:\n", i + 1, n_sols);
    print_solution(sols[i]);
    if (!sols[i].feasible) all_feasible = false;
  }

  json doc{{"provenance", provenance(dev.get(), command)},
           {"solutions", json::parse(sol_text)}};
  omc_string_free(sol_text);
  if (doc["solutions"].is_object()) doc["solutions"] = json::array({doc["solutions"]});
  const std::string text = doc.dump(2) + "\n";
  if (!o.out.empty()) {
    CHECK(omc_write_text(o.out.c_str(), text.c_str()));
    std::printf("wrote %s\n", o.out.c_str());
  } else {
    std::printf("%s", text.c_str());
  }
  return all_feasible ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "omconv: modeling, estimation, and inverse design for mechanically "
      "mediated microwave frequency converters"};
  app.set_version_flag("--version", std::string(omc_version()));
  app.require_subcommand(0, 1);

  SweepOpts sweep_opts;
  auto* sweep = app.add_subcommand(
      "sweep", "scattering vs cooperativity, drive ratio, or probe detuning");
  sweep->add_option("--device", sweep_opts.device, "device JSON file")->required();
  sweep->add_option("--mode", sweep_opts.mode, "cooperativity | ratio | detuning")
      ->check(CLI::IsMember({"cooperativity", "ratio", "detuning"}));
  sweep->add_option("--points", sweep_opts.points, "grid size (default 100)");
  sweep->add_option("--c-total-min", sweep_opts.c_total_min,
                    "cooperativity mode: lower edge of the log-spaced C1+C2 grid");
  sweep->add_option("--c-total-max", sweep_opts.c_total_max,
                    "cooperativity mode: upper edge of the log-spaced C1+C2 grid");
  sweep->add_option("--c1-fixed", sweep_opts.c1_fixed, "ratio mode: fixed C1");
  sweep->add_option("--ratio-min", sweep_opts.ratio_min,
                    "ratio mode: lower edge of the log-spaced C2/C1 grid");
  sweep->add_option("--ratio-max", sweep_opts.ratio_max,
                    "ratio mode: upper edge of the log-spaced C2/C1 grid");
  sweep->add_option("--span", sweep_opts.span_hz,
                    "detuning mode: half-width of the probe grid (Hz)");
  sweep->add_option("--c-total", sweep_opts.c_total,
                    "detuning mode: balanced C1+C2 to drive at (default: device drive)");
  sweep->add_option("--eta1", sweep_opts.eta1, "override cavity-1 coupling efficiency");
  sweep->add_option("--eta2", sweep_opts.eta2, "override cavity-2 coupling efficiency");
  sweep->add_option("--out", sweep_opts.out, "output CSV path (sidecar written next to it)")
      ->required();

  SpectrumOpts spectrum_opts;
  auto* spectrum =
      app.add_subcommand("spectrum", "emitted noise spectra, optionally with synthetic noise");
  spectrum->add_option("--device", spectrum_opts.device, "device JSON file")->required();
  spectrum->add_option("--c-total", spectrum_opts.c_totals,
                       "balanced C1+C2 operating point (repeatable)");
  spectrum->add_option("--cavity", spectrum_opts.cavity, "which output to observe (1 or 2)");
  spectrum->add_option("--points", spectrum_opts.points, "grid size (default 801)");
  spectrum->add_option("--span", spectrum_opts.span_hz,
                       "half-width of the detuning grid in Hz (default: 10x linewidth)");
  spectrum->add_option("--n-th", spectrum_opts.n_th,
                       "override the bath occupancy (default: device n_th)");
  auto* floor_opt = spectrum->add_option("--floor-quanta", spectrum_opts.floor_quanta,
                                         "noise floor in quanta");
  spectrum->add_option("--t-noise-k", spectrum_opts.t_noise_k,
                       "noise floor from a system noise temperature in K")
      ->excludes(floor_opt);
  auto* synth_flag = spectrum->add_flag("--synthesize", spectrum_opts.synthesize,
                                        "add radiometer noise to the model spectrum");
  auto* navg_opt = spectrum->add_option("--n-avg", spectrum_opts.n_avg,
                                        "number of averages for the radiometer noise model");
  auto* seed_opt = spectrum->add_option("--seed", spectrum_opts.seed,
                                        "RNG seed (file index is added per output)");
  synth_flag->needs(navg_opt)->needs(seed_opt);
  spectrum->add_option("--out", spectrum_opts.out, "output CSV path (single spectrum)");
  spectrum->add_option("--prefix", spectrum_opts.prefix,
                       "output prefix; files are named <prefix>_ct<value>.csv");

  FitOpts fit_opts;
  auto* fit = app.add_subcommand("fit", "Lorentzian fits and bath inference from spectrum CSVs");
  fit->add_option("--input", fit_opts.inputs, "spectrum CSV (repeatable)")->required();
  fit->add_option("--cavity", fit_opts.cavity,
                  "measured output when the sidecar does not record it");
  fit->add_option("--out", fit_opts.out, "write the JSON fit records here (default: stdout)");
  fit->add_option("--rollup", fit_opts.rollup,
                  "also write a c_total,n_add,n_m roll-up CSV here");

  DesignOpts design_opts;
  auto* design = app.add_subcommand("design", "solve drive settings for a target");
  design->add_option("--device", design_opts.device, "device JSON file")->required();
  design->add_option("--target-bandwidth", design_opts.target_bandwidth_hz,
                     "conversion FWHM target in Hz");
  design->add_option("--target-split", design_opts.target_split_t_sq,
                     "|t|^2 target at fixed C1 (returns both roots)");
  design->add_option("--target-transmission", design_opts.target_transmission_sq,
                     "|t|^2 target with balanced drives");
  design->add_option("--c1-fixed", design_opts.c1_fixed, "fixed C1 constraint");
  design->add_option("--max-photons", design_opts.max_photons,
                     "flag solutions needing more drive photons than this");
  design->add_option("--out", design_opts.out, "write the JSON solution record here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  const std::string command = join_args(argc, argv);
  if (sweep->parsed()) return run_sweep(sweep_opts, command);
  if (spectrum->parsed()) return run_spectrum(spectrum_opts, command);
  if (fit->parsed()) return run_fit(fit_opts, command);
  if (design->parsed()) return run_design(design_opts, command);
  std::fputs(app.help().c_str(), stderr);
  return 1;
}
