#pragma once

#include <string>
#include <vector>

#include "omconv/common.hpp"

// Device and drive descriptions plus every rate derived from them.
//
// Unit convention: all frequencies and rates are cyclic frequencies in Hz
// (the values a spectrum analyzer displays). Any angular-frequency factor
// is internal to the routine that needs it.

namespace omc {

struct CavityParams {
  double f_c_hz = 0.0;     // cavity resonance frequency
  double kappa_hz = 0.0;   // total linewidth
  double eta = 0.0;        // coupling efficiency, kappa_ext / kappa
  double g0_hz = 0.0;      // vacuum optomechanical coupling rate
  double t_noise_k = 0.0;  // system noise temperature at f_c; 0 means unset

  double kappa_ext_hz() const { return eta * kappa_hz; }
  double kappa_int_hz() const { return (1.0 - eta) * kappa_hz; }

  // Throws InvalidParameter naming "<label>.<field>" on the first violation.
  void validate(const std::string& label) const;
};

struct MechanicalParams {
  double f_m_hz = 0.0;     // mechanical resonance frequency
  double gamma_m_hz = 0.0; // intrinsic energy relaxation rate
  double n_th = 0.0;       // equilibrium thermal occupancy

  void validate() const;
};

struct ConverterParams {
  CavityParams cavity1;
  CavityParams cavity2;
  MechanicalParams mech;

  void validate() const;
};

// Intracavity photon numbers induced by the two drives. Both drives are
// pinned to the lower mechanical sideband f_c - f_m of their cavity.
struct DriveConfig {
  double n1 = 0.0;
  double n2 = 0.0;

  void validate() const;
};

struct DerivedRates {
  double g_eff1_hz = 0.0;  // g0 * sqrt(n), drive-enhanced coupling
  double g_eff2_hz = 0.0;
  double gamma1_hz = 0.0;  // photon-phonon scattering rate, 4 g_eff^2 / kappa
  double gamma2_hz = 0.0;
  double c1 = 0.0;         // cooperativity, gamma_i / gamma_m
  double c2 = 0.0;
  double gamma_total_hz = 0.0;  // conversion FWHM, gamma_m + gamma1 + gamma2
  double f_drive1_hz = 0.0;     // f_c1 - f_m
  double f_drive2_hz = 0.0;
  double n_m = 0.0;             // drive-broadened mechanical occupancy

  double c_total() const { return c1 + c2; }
};

struct RegimeReport {
  bool sideband_resolved1 = false;  // kappa1 < f_m
  bool sideband_resolved2 = false;
  bool weak_coupling1 = false;      // gamma1 <= kappa1 / 10
  bool weak_coupling2 = false;
  std::vector<std::string> warnings;

  bool all_ok() const {
    return sideband_resolved1 && sideband_resolved2 && weak_coupling1 && weak_coupling2;
  }
};

DerivedRates derive_rates(const ConverterParams& params, const DriveConfig& drive);

// Inverts the cooperativity definitions; derive_rates on the result
// reproduces (c1, c2). Requires g0 > 0 for any nonzero cooperativity.
DriveConfig drive_for_cooperativity(const ConverterParams& params, double c1, double c2);

RegimeReport check_regime(const ConverterParams& params, const DerivedRates& rates);

}  // namespace omc
