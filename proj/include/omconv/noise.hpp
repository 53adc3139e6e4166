#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omconv/params.hpp"

// Added noise of the conversion and emitted noise spectra, in quanta
// (photons s^-1 Hz^-1) at the device reference plane. The converter's noise
// comes entirely from residual thermal motion of the mechanical mode; the
// cavity baths are taken cold.

namespace omc {

struct AddedNoiseResult {
  double n_add_1 = 0.0;  // input-referred added quanta, cavity-1 input
  double n_add_2 = 0.0;  // +infinity when the corresponding drive is off
  double n_m = 0.0;      // final mechanical occupancy under drive
  bool bound_ok = false; // n_add_i > 2 n_m for both inputs
  std::vector<std::string> diagnostics;
};

struct NoiseSpectrum {
  std::vector<double> delta_hz;  // detuning about the cavity resonance
  std::vector<double> quanta;    // spectral density at the reference plane
  double floor_quanta = 0.0;     // measurement-chain floor included in quanta
  int which_cavity = 1;          // 1 or 2: whose output is observed
  DerivedRates rates;
  double n_th = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  // Synthesis provenance; n_avg == 0 marks a noiseless model spectrum.
  double n_avg = 0.0;
  std::uint64_t seed = 0;
};

// Mean thermal occupancy of a mode at f_hz in equilibrium at t_k (Bose form).
double bose_occupancy(double f_hz, double t_k);

// Measurement floor in quanta from a system noise temperature. The Bose form
// is used throughout the toolkit; the Rayleigh-Jeans variant is exposed for
// comparison (about 2% higher near 10 GHz / 10 K).
double floor_from_noise_temperature(double t_noise_k, double f_hz);
double floor_from_noise_temperature_rj(double t_noise_k, double f_hz);

// Input-referred added noise n_add_i = n_th / (eta_i C_i) and the cooled
// mechanical occupancy n_m = n_th / (1 + C1 + C2). Zero cooperativity with a
// warm bath reports +infinity plus a diagnostic.
AddedNoiseResult added_noise(const DerivedRates& rates, double eta1, double eta2, double n_th);

// Emitted spectrum of the chosen cavity output:
//   S(delta) = floor + P (G/2)^2 / ((G/2)^2 + delta^2),  G = gamma_total,
// with peak P = 4 eta_i C_i n_th / (1 + C1 + C2)^2, equal to the added noise
// referred to the opposite input times |t(0)|^2.
NoiseSpectrum output_noise_spectrum(const ConverterParams& params, const DerivedRates& rates,
                                    int which_cavity, double n_th, double floor_quanta,
                                    const std::vector<double>& delta_grid_hz);

// Radiometer fluctuations: each bin gets independent Gaussian noise with
// standard deviation value / sqrt(n_avg). Deterministic for a fixed seed.
NoiseSpectrum synthesize_spectrum(const NoiseSpectrum& spectrum, double n_avg,
                                  std::uint64_t seed);

}  // namespace omc
