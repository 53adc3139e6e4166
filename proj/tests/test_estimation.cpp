#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omconv/estimation.hpp>
#include <omconv/noise.hpp>
#include <omconv/params.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "test_support.hpp"

using namespace omc;
using namespace omc::testing;

namespace {

double rel_err(double got, double want) {
    return std::abs(got - want) / std::abs(want);
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> lorentzian_samples(const std::vector<double>& grid,
                                       double center, double fwhm, double peak,
                                       double floor) {
    std::vector<double> y;
    y.reserve(grid.size());
    const double u = 0.25 * fwhm * fwhm;
    for (double d : grid) {
        const double dd = d - center;
        y.push_back(floor + peak * u / (u + dd * dd));
    }
    return y;
}

}  // namespace

TEST_CASE("noiseless fits recover parameters across three decades of width") {
    for (double fwhm : {15.0, 1481.2, 1.5e5}) {
        const double center = 0.37 * fwhm;
        const double peak = 0.7110836773272636;
        const double floor = 21.770095835701444;
        const std::vector<double> grid = symmetric_grid(5.0 * fwhm, 801);
        const std::vector<double> y =
            lorentzian_samples(grid, center, fwhm, peak, floor);

        const LorentzianFit fit = fit_lorentzian(grid, y);
        CHECK(fit.converged);
        CHECK_FALSE(fit.low_snr);
        CHECK(fit.iterations < 200);
        CHECK(std::abs(fit.center_hz - center) < 1e-9 * fwhm);
        CHECK(rel_err(fit.fwhm_hz, fwhm) < 1e-9);
        CHECK(rel_err(fit.peak, peak) < 1e-9);
        CHECK(rel_err(fit.floor, floor) < 1e-9);
        CHECK(fit.residual_rms < 1e-9 * peak);
        CHECK(fit.value_at(center) == doctest::Approx(floor + peak).epsilon(1e-9));
    }
}

TEST_CASE("fit input validation") {
    const std::vector<double> grid = symmetric_grid(100.0, 7);
    const std::vector<double> y(7, 1.0);
    CHECK_THROWS_AS(fit_lorentzian(grid, y), InvalidParameter);  // too few

    std::vector<double> g8 = symmetric_grid(100.0, 8);
    std::vector<double> y8(8, 1.0);
    CHECK_NOTHROW(fit_lorentzian(g8, y8));

    std::vector<double> bad = g8;
    bad[3] = bad[2];  // not strictly increasing
    CHECK_THROWS_AS(fit_lorentzian(bad, y8), InvalidParameter);

    std::vector<double> nan_y = y8;
    nan_y[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(fit_lorentzian(g8, nan_y), InvalidParameter);

    std::vector<double> short_y(7, 1.0);
    CHECK_THROWS_AS(fit_lorentzian(g8, short_y), InvalidParameter);
}

TEST_CASE("flat spectra raise the low-SNR flag") {
    const std::vector<double> grid = symmetric_grid(1000.0, 101);
    const std::vector<double> flat(grid.size(), 21.77);
    const LorentzianFit fit = fit_lorentzian(grid, flat);
    CHECK(fit.converged);
    CHECK(fit.low_snr);
    CHECK(std::abs(fit.peak) < 1e-9);

    // A featureless noisy trace must never present as a confident peak:
    // either the minimizer gives up or the flag is raised.
    const ConverterParams p = reference_device();
    const DerivedRates r = derive_rates(p, drive_for_cooperativity(p, 80.0, 80.0));
    NoiseSpectrum sp = output_noise_spectrum(p, r, 1, 0.0, 21.77, grid);
    sp = synthesize_spectrum(sp, 1.0e4, 7);
    try {
        const LorentzianFit noisy = fit_lorentzian(sp);
        CHECK(noisy.low_snr);
    } catch (const FitError& e) {
        CHECK_FALSE(e.best_fit().converged);
        CHECK_FALSE(e.residual_history().empty());
    }
}

TEST_CASE("synthetic emission spectra: width and peak within experiment error") {
    const ConverterParams p = reference_device();
    const DerivedRates r = derive_rates(p, drive_for_cooperativity(p, 80.0, 80.0));
    const double gamma = r.gamma_total_hz;  // 1481.2 Hz
    const double true_peak = 0.7110836773272636;
    const double floor = 21.770095835701444;
    const std::vector<double> grid = symmetric_grid(4.0 * gamma, 16001);
    const NoiseSpectrum clean = output_noise_spectrum(p, r, 1, 60.0, floor, grid);

    std::vector<double> fwhm_err, peak_err, nth_err;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const NoiseSpectrum noisy = synthesize_spectrum(clean, 1.0e4, seed);
        const LorentzianFit fit = fit_lorentzian(noisy);
        REQUIRE(fit.converged);
        CHECK_FALSE(fit.low_snr);
        CHECK(fit.sigma_fwhm_hz > 0.0);
        fwhm_err.push_back(rel_err(fit.fwhm_hz, gamma));
        peak_err.push_back(rel_err(fit.peak, true_peak));
        const BathInference bath = infer_bath(fit, r, 0.96, 0.99, 1);
        nth_err.push_back(rel_err(bath.n_th, 60.0));
    }
    CHECK(median(fwhm_err) < 0.03);
    CHECK(median(peak_err) < 0.05);
    CHECK(median(nth_err) < 0.10);
}

TEST_CASE("bath inference round-trips the forward model") {
    const ConverterParams p = reference_device();
    const DerivedRates r = derive_rates(p, drive_for_cooperativity(p, 80.0, 80.0));
    const std::vector<double> grid = symmetric_grid(4.0 * r.gamma_total_hz, 2001);
    const NoiseSpectrum sp = output_noise_spectrum(p, r, 1, 60.0, 21.77, grid);
    const LorentzianFit fit = fit_lorentzian(sp);

    const BathInference bath = infer_bath(fit, r, 0.96, 0.99, 1);
    CHECK(bath.referred_input == 2);
    CHECK(rel_err(bath.n_th, 60.0) < 1e-9);
    CHECK(rel_err(bath.n_m, 60.0 / 161.0) < 1e-9);
    CHECK(rel_err(bath.n_add, 60.0 / (0.99 * 80.0)) < 1e-9);
    CHECK(bath.warnings.empty());

    // Measuring the other output refers the noise to input 1.
    const NoiseSpectrum sp2 = output_noise_spectrum(p, r, 2, 60.0, 21.54, grid);
    const BathInference bath2 =
        infer_bath(fit_lorentzian(sp2), r, 0.96, 0.99, 2);
    CHECK(bath2.referred_input == 1);
    CHECK(rel_err(bath2.n_th, 60.0) < 1e-9);
    CHECK(rel_err(bath2.n_add, 60.0 / (0.96 * 80.0)) < 1e-9);

    // A zero-height peak is a legitimate cold-bath observation.
    LorentzianFit zero = fit;
    zero.peak = 0.0;
    const BathInference cold = infer_bath(zero, r, 0.96, 0.99, 1);
    CHECK(cold.n_th == 0.0);
    CHECK(cold.n_m == 0.0);

    // Width mismatch against the drive-broadened prediction warns.
    LorentzianFit wide = fit;
    wide.fwhm_hz = 2.0 * r.gamma_total_hz;
    const BathInference suspect = infer_bath(wide, r, 0.96, 0.99, 1);
    REQUIRE_FALSE(suspect.warnings.empty());
    CHECK(suspect.warnings.front().find("width") != std::string::npos);

    // Without both drives there is no conversion to refer through.
    const DerivedRates r_single =
        derive_rates(p, drive_for_cooperativity(p, 80.0, 0.0));
    CHECK_THROWS_AS(infer_bath(fit, r_single, 0.96, 0.99, 1), InvalidParameter);
    CHECK_THROWS_AS(infer_bath(fit, r, 0.96, 0.99, 3), InvalidParameter);
}

TEST_CASE("line self-calibration depends only on the path-product ratio") {
    const double alpha1 = 0.1, alpha2 = 0.08, beta1 = 1.0e5, beta2 = 2.0e5;
    const double t_sq = 0.9;
    const double t_abs = std::sqrt(t_sq);
    RawLineMeasurements raw;
    raw.r1_off = alpha1 * beta1;
    raw.r2_off = alpha2 * beta2;
    raw.t12 = alpha1 * beta2 * t_abs;
    raw.t21 = alpha2 * beta1 * t_abs;

    const LineCalibration cal = self_calibrate(raw);
    CHECK(rel_err(cal.t_sq, t_sq) < 1e-12);
    CHECK(rel_err(cal.alpha1_beta1, alpha1 * beta1) < 1e-12);
    CHECK(rel_err(cal.alpha2_beta2, alpha2 * beta2) < 1e-12);
    CHECK(rel_err(cal.alpha1_beta2, alpha1 * beta2) < 1e-12);
    CHECK(rel_err(cal.alpha2_beta1, alpha2 * beta1) < 1e-12);

    // A common gain rescaling of every raw magnitude cancels exactly.
    RawLineMeasurements scaled = raw;
    scaled.r1_off *= 3.7;
    scaled.r2_off *= 3.7;
    scaled.t12 *= 3.7;
    scaled.t21 *= 3.7;
    CHECK(rel_err(self_calibrate(scaled).t_sq, cal.t_sq) < 1e-12);

    RawLineMeasurements bad = raw;
    bad.t12 = 0.0;
    CHECK_THROWS_AS(self_calibrate(bad), InvalidParameter);
}

TEST_CASE("thermometry recovers the vacuum coupling from a cooling series") {
    const ConverterParams p = reference_device();
    const double n_drive = 1.0e3;
    const double gamma1 =
        4.0 * 145.0 * 145.0 * n_drive / p.cavity1.kappa_hz;  // 49.47 Hz
    const double c1 = gamma1 / p.mech.gamma_m_hz;
    const double slope = kTwoPi * 0.96 * gamma1 / (1.0 + c1);
    const double span_hz = 1.0e4;
    const double background = 21.77 * span_hz;

    std::vector<ThermometryPoint> pts;
    for (double t_k : {0.03, 0.06, 0.1, 0.2, 0.4}) {
        pts.push_back({t_k, slope * bose_occupancy(p.mech.f_m_hz, t_k) + background});
    }

    const ThermometryFit fit = thermometry(pts, n_drive, p.mech, p.cavity1, span_hz);
    CHECK(rel_err(fit.slope, slope) < 1e-9);
    CHECK(rel_err(fit.intercept, background) < 1e-9);
    CHECK(rel_err(fit.gamma1_hz, gamma1) < 1e-9);
    CHECK(rel_err(fit.c1, c1) < 1e-9);
    CHECK(rel_err(fit.g0_hz, 145.0) < 1e-6);
    CHECK(rel_err(fit.system_noise_quanta, 21.77) < 1e-9);

    // Without an integration span the background stays in raw area units.
    const ThermometryFit no_span = thermometry(pts, n_drive, p.mech, p.cavity1);
    CHECK(std::isnan(no_span.system_noise_quanta));
    CHECK(rel_err(no_span.slope, slope) < 1e-9);
}

TEST_CASE("thermometry rejects unphysical or saturated series") {
    const ConverterParams p = reference_device();
    const double limit = kTwoPi * 0.96 * 9.2;
    CHECK(rel_err(limit, 55.4930926330101) < 1e-12);

    auto series = [&](double slope) {
        std::vector<ThermometryPoint> pts;
        for (double t_k : {0.03, 0.06, 0.1, 0.2, 0.4}) {
            pts.push_back({t_k, slope * bose_occupancy(p.mech.f_m_hz, t_k) + 5.0});
        }
        return pts;
    };

    // Slope beyond the saturated-cooling ceiling cannot come from any drive.
    try {
        thermometry(series(56.0), 1.0e3, p.mech, p.cavity1);
        FAIL("expected infeasibility");
    } catch (const Infeasible& e) {
        CHECK(rel_err(e.max_achievable(), limit) < 1e-12);
    }

    CHECK_THROWS_AS(thermometry(series(-3.0), 1.0e3, p.mech, p.cavity1),
                    InvalidParameter);

    std::vector<ThermometryPoint> two = series(40.0);
    two.resize(2);
    CHECK_THROWS_AS(thermometry(two, 1.0e3, p.mech, p.cavity1),
                    InvalidParameter);

    // Narrow temperature leverage is rejected rather than extrapolated.
    std::vector<ThermometryPoint> narrow{
        {0.100, 100.0}, {0.110, 110.0}, {0.120, 120.0}};
    CHECK_THROWS_AS(thermometry(narrow, 1.0e3, p.mech, p.cavity1),
                    InvalidParameter);
}
