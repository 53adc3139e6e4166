#pragma once

// Parameter recovery from measured or synthetic spectra: Lorentzian least
// squares, bath-occupancy inference, measurement-line self-calibration, and
// sideband-cooling thermometry.

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "omconv/noise.hpp"
#include "omconv/params.hpp"

namespace omc {

// Four-parameter Lorentzian peak model
//   m(delta) = floor + peak * (fwhm/2)^2 / ((fwhm/2)^2 + (delta - center)^2)
struct LorentzianFit {
  double center_hz = 0.0;
  double fwhm_hz = 0.0;
  double peak = 0.0;   // height above the floor at delta = center
  double floor = 0.0;  // flat background level

  // Covariance of (center, fwhm, peak, floor) from the linearized fit.
  std::array<std::array<double, 4>, 4> covariance{};
  double sigma_center_hz = 0.0;
  double sigma_fwhm_hz = 0.0;
  double sigma_peak = 0.0;
  double sigma_floor = 0.0;

  double residual_rms = 0.0;
  int iterations = 0;
  bool converged = false;
  bool low_snr = false;  // peak indistinguishable from the per-bin noise,
                         // statistically insignificant, or narrower than
                         // two grid steps

  // Evaluates the fitted model curve.
  double value_at(double delta_hz) const;
};

// Thrown when the minimizer fails to meet the step criterion within the
// iteration budget; carries the best fit reached and the per-iteration
// residual RMS history for diagnosis.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, LorentzianFit best, std::vector<double> residual_history)
      : std::runtime_error(what),
        best_fit_(std::move(best)),
        residual_history_(std::move(residual_history)) {}
  const LorentzianFit& best_fit() const { return best_fit_; }
  const std::vector<double>& residual_history() const { return residual_history_; }

 private:
  LorentzianFit best_fit_;
  std::vector<double> residual_history_;
};

// Bath occupancy inferred from a fitted emission peak.
struct BathInference {
  double n_th = 0.0;   // mechanical bath occupancy
  double n_m = 0.0;    // drive-broadened mechanical occupancy
  double n_add = 0.0;  // added noise referred to the input opposite the
                       // measured output (quanta)
  int referred_input = 0;
  std::vector<std::string> warnings;
};

// Raw magnitudes measured through the uncalibrated lines: off-resonant
// reflection of each cavity and the two transmission directions.
struct RawLineMeasurements {
  double r1_off = 0.0;
  double r2_off = 0.0;
  double t12 = 0.0;
  double t21 = 0.0;
};

// Products of input attenuation (alpha) and output gain (beta) per path,
// plus the line-independent device-plane transmission.
struct LineCalibration {
  double t_sq = 0.0;
  double alpha1_beta1 = 0.0;
  double alpha2_beta2 = 0.0;
  double alpha1_beta2 = 0.0;
  double alpha2_beta1 = 0.0;
};

// One sideband-cooling measurement: cryostat temperature and the integrated
// sideband power in arbitrary (or device-plane) units.
struct ThermometryPoint {
  double t_k = 0.0;
  double area = 0.0;
};

struct ThermometryFit {
  double slope = 0.0;      // area per bath quantum
  double intercept = 0.0;  // temperature-independent background area
  double g0_hz = 0.0;      // vacuum coupling rate recovered from the slope
  double gamma1_hz = 0.0;  // drive-induced scattering rate implied by slope
  double c1 = 0.0;
  double system_noise_quanta = 0.0;  // background / integration span; NaN if
                                     // no span was supplied
};

// Least-squares Lorentzian fit. Requires at least 8 samples on a strictly
// increasing grid that should span at least one linewidth. Initialization:
// floor from the median of the outer quartiles, peak = max - floor, center
// at the maximum, width from half-height crossings by linear interpolation.
// Converged when the relative step of every parameter drops below 1e-9;
// throws FitError after 200 iterations otherwise.
LorentzianFit fit_lorentzian(const std::vector<double>& delta_hz,
                             const std::vector<double>& values);
LorentzianFit fit_lorentzian(const NoiseSpectrum& spectrum);

// Refers a fitted emission peak measured at `measured_cavity`'s output back
// to the opposite input: n_add = peak / |t(0)|^2, n_th = n_add * eta_j * C_j
// for the opposite side j, n_m = n_th / (1 + C1 + C2). Warns when the fitted
// width disagrees with the drive-broadened linewidth by more than 25%.
BathInference infer_bath(const LorentzianFit& fit, const DerivedRates& rates, double eta1,
                         double eta2, int measured_cavity);

// Calibrates line products from the four raw path magnitudes, assuming unit
// off-resonant reflection at the device plane. The recovered transmission
// |t|^2 = (T12*T21)/(R1_off*R2_off) depends only on this ratio, never on an
// individual line coefficient.
LineCalibration self_calibrate(const RawLineMeasurements& raw);

// Regresses integrated sideband power against the Bose occupancy of the
// mechanical mode at each cryostat temperature. With areas in device-plane
// photon flux units, the slope equals 2*pi*eta*Gamma1/(1 + C1), which pins
// Gamma1 and hence g0 given the drive photon number. The intercept is the
// temperature-independent background; dividing it by the integration span
// (when supplied) expresses it as a noise floor in quanta.
ThermometryFit thermometry(const std::vector<ThermometryPoint>& points, double n_drive,
                           const MechanicalParams& mech, const CavityParams& cavity,
                           double integration_span_hz = 0.0);

}  // namespace omc
