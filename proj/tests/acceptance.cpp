// Acceptance gate: one line per criterion, nonzero exit when any fails.
// argv[1] must point at the command-line binary (used by the last check).

#include <omconv/design.hpp>
#include <omconv/estimation.hpp>
#include <omconv/json_io.hpp>
#include <omconv/noise.hpp>
#include <omconv/params.hpp>
#include <omconv/scattering.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "test_support.hpp"

using namespace omc;
using namespace omc::testing;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int index, const std::string& label, bool ok, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", index,
                label.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

void run(int index, const std::string& label, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(index, label, ok, detail);
}

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) return {};
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- criterion bodies ------------------------------------------------------

bool efficiency_point(std::string& detail) {
    const ConverterParams p = reference_device();
    const DesignSolution sol = solve_bandwidth(p, 14039.2);
    const double t_sq = sol.predicted.t_sq;
    const double internal = t_sq / (p.cavity1.eta * p.cavity2.eta);
    detail = "t_sq = " + fmt(t_sq) + ", internal = " + fmt(internal);
    return std::abs(t_sq - 0.949) <= 0.005 && internal > 0.99;
}

bool bandwidth_and_half_max(std::string& detail) {
    const ConverterParams p = reference_device();
    const auto rows = sweep_cooperativity(p, {1525.0});
    const double bw = rows.at(0).gamma_total_hz;
    const bool bw_ok = rel_err(bw, 14.0e3) <= 0.01;

    // Weak-coupling draw: damping rates three decades under each kappa.
    const DerivedRates r = derive_rates(p, drive_for_cooperativity(p, 80.0, 80.0));
    const double gamma = r.gamma_total_hz;
    const double t0_sq = std::norm(scattering_at(p, r, 0.0).t);
    double lo = 0.25 * gamma;
    double hi = gamma;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::norm(scattering_at(p, r, mid).t) > 0.5 * t0_sq ? lo : hi) = mid;
    }
    const double half_pos = 0.5 * (lo + hi);
    const bool half_ok = rel_err(half_pos, 0.5 * gamma) <= 1e-3;
    detail = "bandwidth = " + fmt(bw) + " Hz, half-max at " + fmt(half_pos) +
             " Hz vs " + fmt(0.5 * gamma) + " Hz";
    return bw_ok && half_ok;
}

bool added_noise_point(std::string& detail) {
    const ConverterParams p = reference_device();
    const DerivedRates r = derive_rates(p, drive_for_cooperativity(p, 1260.0, 1260.0));
    const AddedNoiseResult noise = added_noise(r, p.cavity1.eta, p.cavity2.eta, 60.0);
    const bool value_ok = rel_err(noise.n_add_2, 0.048100048100048094) < 1e-12 &&
                          noise.n_add_1 < 0.1 && noise.n_add_2 < 0.1;

    // Emitted peak equals the opposite-input added noise times |t|^2.
    const OnResonance on = scattering_on_resonance(r, p.cavity1.eta, p.cavity2.eta);
    const NoiseSpectrum sp1 = output_noise_spectrum(p, r, 1, 60.0, 0.0, {0.0});
    const NoiseSpectrum sp2 = output_noise_spectrum(p, r, 2, 60.0, 0.0, {0.0});
    const double id1 = rel_err(sp1.quanta.at(0), noise.n_add_2 * on.t_sq);
    const double id2 = rel_err(sp2.quanta.at(0), noise.n_add_1 * on.t_sq);
    detail = "n_add_2 = " + fmt(noise.n_add_2) + ", peak identity residual = " +
             fmt(std::max(id1, id2));
    return value_ok && id1 <= 1e-12 && id2 <= 1e-12;
}

bool split_roots(std::string& detail) {
    ConverterParams ideal = reference_device();
    ideal.cavity1.eta = 1.0;
    ideal.cavity2.eta = 1.0;
    const double c1 = 1.0e6;
    const auto sols = solve_split(ideal, c1, 0.5);
    if (sols.size() != 2) {
        detail = "expected two roots";
        return false;
    }
    const double lo = sols[0].rates.c2 / c1;
    const double hi = sols[1].rates.c2 / c1;
    const double err_lo = rel_err(lo, 3.0 - 2.0 * std::sqrt(2.0));
    const double err_hi = rel_err(hi, 3.0 + 2.0 * std::sqrt(2.0));

    const ConverterParams p = reference_device();
    const auto lossy = solve_split(p, 400.0, 0.5);
    double round_trip = 0.0;
    for (const auto& sol : lossy) {
        round_trip = std::max(round_trip, rel_err(sol.predicted.t_sq, 0.5));
    }
    detail = "ratio errors " + fmt(err_lo) + ", " + fmt(err_hi) +
             "; forward-verified to " + fmt(round_trip);
    return err_lo <= 1e-4 && err_hi <= 1e-4 && lossy.size() == 2 && round_trip <= 1e-9;
}

bool closed_form_reduction(std::string& detail) {
    std::mt19937_64 rng(9001);
    RandomOptions weak;
    weak.weak_coupling = true;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const RandomConverter rc = random_converter(rng, weak);
        const DerivedRates r = derive_rates(rc.params, rc.drive);
        const ScatteringPoint pt = scattering_at(rc.params, r, 0.0);
        const OnResonance on = scattering_on_resonance(r, rc.params.cavity1.eta,
                                                       rc.params.cavity2.eta);
        worst = std::max(worst, std::abs(std::norm(pt.t) - on.t_sq));
        worst = std::max(worst, std::abs(std::norm(pt.r1) - on.r1_sq));
        worst = std::max(worst, std::abs(std::norm(pt.r2) - on.r2_sq));
    }
    detail = "max |full - closed| = " + fmt(worst) + " over 100 draws";
    return worst <= 1e-6;
}

bool unitarity(std::string& detail) {
    std::mt19937_64 rng(9002);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const RandomConverter rc = random_converter(rng);  // includes strong coupling
        const DerivedRates r = derive_rates(rc.params, rc.drive);
        std::vector<double> deltas{0.0,
                                   0.5 * rc.params.cavity1.kappa_hz,
                                   -0.5 * rc.params.cavity2.kappa_hz,
                                   2.0 * rc.params.cavity1.kappa_hz,
                                   -5.0 * rc.params.cavity2.kappa_hz};
        for (int k = 0; k < 10; ++k) {
            const double mag = r.gamma_total_hz * std::pow(10.0, -2.0 + 3.5 * k / 9.0);
            deltas.push_back(mag);
            deltas.push_back(-mag);
        }
        for (double d : deltas) {
            worst = std::max(worst, unitarity_deviation(scattering_at(rc.params, r, d).s));
        }
    }
    detail = "max unitarity deviation = " + fmt(worst) +
             " over 100 parameter sets x 25 detunings";
    return worst <= 1e-10;
}

bool spectrum_recovery(std::string& detail) {
    const ConverterParams p = reference_device();
    const DerivedRates r = derive_rates(p, drive_for_cooperativity(p, 80.0, 80.0));
    const double gamma = r.gamma_total_hz;
    const double true_peak = 0.7110836773272636;
    const double floor = 21.770095835701444;
    const std::vector<double> grid = symmetric_grid(4.0 * gamma, 16001);
    const NoiseSpectrum clean = output_noise_spectrum(p, r, 1, 60.0, floor, grid);

    const LorentzianFit exact = fit_lorentzian(clean);
    const bool exact_ok = rel_err(exact.fwhm_hz, gamma) <= 1e-9 &&
                          rel_err(exact.peak, true_peak) <= 1e-9 &&
                          rel_err(exact.floor, floor) <= 1e-9;

    std::vector<double> fwhm_err, peak_err, nth_err;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const NoiseSpectrum noisy = synthesize_spectrum(clean, 1.0e4, seed);
        const LorentzianFit fit = fit_lorentzian(noisy);
        if (!fit.converged) {
            detail = "fit failed to converge at seed " + std::to_string(seed);
            return false;
        }
        fwhm_err.push_back(rel_err(fit.fwhm_hz, gamma));
        peak_err.push_back(rel_err(fit.peak, true_peak));
        const BathInference bath =
            infer_bath(fit, r, p.cavity1.eta, p.cavity2.eta, 1);
        nth_err.push_back(rel_err(bath.n_th, 60.0));
    }
    const double med_fwhm = median(fwhm_err);
    const double med_peak = median(peak_err);
    const double med_nth = median(nth_err);
    detail = "median errors over 100 seeds: fwhm " + fmt(med_fwhm) + ", peak " +
             fmt(med_peak) + ", n_th " + fmt(med_nth) +
             (exact_ok ? "" : "; noiseless recovery off");
    return exact_ok && med_fwhm <= 0.03 && med_peak <= 0.05 && med_nth <= 0.10;
}

bool calibration_identity(std::string& detail) {
    const double alpha1 = 0.1, alpha2 = 0.08, beta1 = 1.0e5, beta2 = 2.0e5;
    const double t_sq = 0.9;
    RawLineMeasurements raw;
    raw.r1_off = alpha1 * beta1;
    raw.r2_off = alpha2 * beta2;
    raw.t12 = alpha1 * beta2 * std::sqrt(t_sq);
    raw.t21 = alpha2 * beta1 * std::sqrt(t_sq);
    const LineCalibration cal = self_calibrate(raw);
    const double err = rel_err(cal.t_sq, t_sq);

    RawLineMeasurements scaled = raw;
    const double gain = 17.3;
    scaled.r1_off *= gain;
    scaled.r2_off *= gain;
    scaled.t12 *= gain;
    scaled.t21 *= gain;
    const double invariance = rel_err(self_calibrate(scaled).t_sq, cal.t_sq);
    detail = "recovery error " + fmt(err) + ", rescale invariance " + fmt(invariance);
    return err <= 1e-12 && invariance <= 1e-12;
}

bool thermometry_round_trip(std::string& detail) {
    const ConverterParams p = reference_device();
    const double occ = bose_occupancy(p.mech.f_m_hz, 0.030);
    const bool occ_ok = std::abs(occ - 41.2) <= 0.1;

    const double n_drive = 1.0e3;
    const double gamma1 = 4.0 * 145.0 * 145.0 * n_drive / p.cavity1.kappa_hz;
    const double c1 = gamma1 / p.mech.gamma_m_hz;
    const double slope = kTwoPi * p.cavity1.eta * gamma1 / (1.0 + c1);
    std::vector<ThermometryPoint> pts;
    for (double t_k : {0.03, 0.06, 0.1, 0.2, 0.4}) {
        pts.push_back({t_k, slope * bose_occupancy(p.mech.f_m_hz, t_k) + 900.0});
    }
    const ThermometryFit fit = thermometry(pts, n_drive, p.mech, p.cavity1);
    const double g0_err = rel_err(fit.g0_hz, 145.0);
    detail = "n_th(30 mK) = " + fmt(occ) + ", g0 round-trip error = " + fmt(g0_err);
    return occ_ok && g0_err <= 1e-6;
}

bool flux_and_compression(std::string& detail) {
    const double flux = photon_flux_per_s(-75.0, 8.89e9);
    const bool near = std::abs(flux - 5.0e12) / 5.0e12 <= 0.10;
    const CompressionCheck check = check_compression(flux);
    detail = "flux = " + fmt(flux) + " photons/s, ceiling flag = " +
             (check.ok ? "ok" : "exceeded");
    return near && !check.ok && !check.message.empty();
}

int run_cli(const std::string& command) {
    const int rc = std::system(command.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

bool cli_determinism(const std::string& cli, std::string& detail) {
    if (cli.empty()) {
        detail = "no CLI binary path supplied";
        return false;
    }
    const fs::path dir =
        fs::temp_directory_path() / ("omconv-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path device = dir / "device.json";
    {
        const ConverterParams p = reference_device();
        write_text_atomic(device, device_to_json(p, DriveConfig{}).dump(2) + "\n");
    }

    const std::string sweep_cmd = cli + " sweep --device " + device.string() +
                                  " --mode cooperativity --points 40" +
                                  " --c-total-min 10 --c-total-max 3000 --out " +
                                  (dir / "sweep.csv").string() + " > /dev/null 2>&1";
    const std::string spec_cmd = cli + " spectrum --device " + device.string() +
                                 " --c-total 160 --cavity 1 --points 801" +
                                 " --span 6000 --synthesize --n-avg 1e4 --seed 7" +
                                 " --out " + (dir / "spec.csv").string() +
                                 " > /dev/null 2>&1";
    const std::vector<fs::path> artifacts{dir / "sweep.csv", dir / "sweep.json",
                                          dir / "spec.csv", dir / "spec.json"};

    auto run_both = [&]() -> bool {
        return run_cli(sweep_cmd) == 0 && run_cli(spec_cmd) == 0;
    };
    if (!run_both()) {
        detail = "CLI run failed";
        return false;
    }
    std::vector<std::string> first;
    for (const auto& a : artifacts) {
        first.push_back(slurp(a));
        if (first.back().empty()) {
            detail = "missing artifact " + a.filename().string();
            return false;
        }
    }
    if (!run_both()) {
        detail = "CLI rerun failed";
        return false;
    }
    for (std::size_t i = 0; i < artifacts.size(); ++i) {
        if (slurp(artifacts[i]) != first[i]) {
            detail = "rerun changed " + artifacts[i].filename().string();
            return false;
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    detail = "reruns byte-identical across " + std::to_string(artifacts.size()) +
             " artifacts";
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    run(1, "matched-drive efficiency 0.949 +/- 0.005 with internal > 0.99",
        efficiency_point);
    run(2, "conversion bandwidth 14.04 kHz with half max at half the linewidth",
        bandwidth_and_half_max);
    run(3, "added noise 0.048 quanta and emitted-peak identity", added_noise_point);
    run(4, "beam-splitter quadratic roots 3 +/- 2 sqrt(2)", split_roots);
    run(5, "zero-detuning reduction of the five-port matrix", closed_form_reduction);
    run(6, "five-port unitarity to 1e-10 including strong coupling", unitarity);
    run(7, "synthetic spectra recover width, peak, and bath occupancy",
        spectrum_recovery);
    run(8, "line self-calibration identity and rescale invariance",
        calibration_identity);
    run(9, "thermometry occupancy anchor and g0 round trip", thermometry_round_trip);
    run(10, "carrier flux at -75 dBm versus the compression ceiling",
        flux_and_compression);
    run(11, "rerunning the CLI reproduces artifacts byte for byte",
        [&](std::string& d) { return cli_determinism(cli, d); });

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 11 criteria passed\n");
    return 0;
}
