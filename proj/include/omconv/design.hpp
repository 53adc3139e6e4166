#pragma once

// Inverse problems: drive settings that achieve a target bandwidth,
// transmission, or beam-splitter operating point, plus pump-power and
// photon-flux bookkeeping.

#include <optional>
#include <string>
#include <vector>

#include "omconv/noise.hpp"
#include "omconv/params.hpp"
#include "omconv/scattering.hpp"

namespace omc {

// Input photon flux at which 1 dB transmission compression sets in,
// photons/s (configurable; this default reflects the measured device).
inline constexpr double kDefaultCompressionFluxPerS = 5e12;

// Optional constraints applied by the solvers.
struct DesignConstraints {
  std::optional<double> fixed_c1;      // pin C1 instead of splitting evenly
  std::optional<double> max_photons;   // flag solutions whose drives exceed this
};

struct DesignSolution {
  DriveConfig drive;
  DerivedRates rates;
  OnResonance predicted;    // on-resonance t_sq, r1_sq, r2_sq
  AddedNoiseResult noise;   // evaluated at the device's n_th
  double drive_power1_w = 0.0;
  double drive_power2_w = 0.0;
  bool feasible = true;     // false when a constraint (e.g. max_photons) is violated
  std::string branch;       // "", "lesser", "greater", or "tangent" for split roots
  std::vector<std::string> notes;
};

// Drive configuration whose conversion FWHM gamma_m*(1 + C1 + C2) equals
// target_bw_hz. The split is even unless constraints.fixed_c1 is set.
// Targets below gamma_m are infeasible (zero drive already yields gamma_m).
DesignSolution solve_bandwidth(const ConverterParams& params, double target_bw_hz,
                               const DesignConstraints& constraints = {});

// Solves the on-resonance transmission for C2 at fixed C1 (a quadratic in
// C2). Returns both roots when two exist, ordered lesser then greater; a
// tangency target returns the single double root. Targets above the maximum
// eta1*eta2*C1/(1+C1) achievable at this C1 raise Infeasible carrying that
// maximum.
std::vector<DesignSolution> solve_split(const ConverterParams& params, double c1_fixed,
                                        double target_t_sq,
                                        const DesignConstraints& constraints = {});

// Balanced-drive transmission inversion: C1 = C2 = C with
// t_sq = 4*eta1*eta2*C^2/(1+2C)^2. Feasible for target < eta1*eta2.
DesignSolution solve_transmission(const ConverterParams& params, double target_t_sq,
                                  const DesignConstraints& constraints = {});

// Pump power at the port sustaining n_photons in the cavity with the drive
// pinned one mechanical frequency below resonance. The driven-cavity steady
// state in angular units gives n = kappa_ext|s|^2/((kappa/2)^2 + detuning^2)
// with |s|^2 = P/(hbar*omega_drive) photons/s; rewritten with every rate in
// cyclic Hz this is
//   P = n * h * f_drive * ((kappa/2)^2 + f_m^2) * 2*pi / kappa_ext.
double drive_power_w(const ConverterParams& params, int which_cavity, double n_photons);

// Photon flux of a carrier at frequency f_hz carrying power_dbm.
double photon_flux_per_s(double power_dbm, double f_hz);

struct CompressionCheck {
  bool ok = true;
  double flux_per_s = 0.0;
  double ceiling_per_s = 0.0;
  std::string message;  // non-empty when the ceiling is exceeded
};

// Flags input fluxes beyond the configured 1 dB compression ceiling. Pure
// bookkeeping; no saturation physics is modeled.
CompressionCheck check_compression(double flux_per_s,
                                   double ceiling_per_s = kDefaultCompressionFluxPerS);

}  // namespace omc
