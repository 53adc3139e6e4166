#pragma once

#include <array>
#include <complex>
#include <vector>

#include "omconv/params.hpp"

// Frequency-domain scattering of the two-cavity / one-mechanical-mode
// converter, linearized around both lower-sideband drives (beam-splitter
// interaction only; no counter-rotating sidebands).
//
// A single detuning variable delta is shared by all ports: a probe entering
// cavity i at f_ci + delta leaves cavity j at f_cj + delta, so every port is
// parameterized by its offset from its own carrier.

namespace omc {

using cplx = std::complex<double>;

// Port order of the full scattering matrix.
enum Port : int {
  kPortCavity1Ext = 0,
  kPortCavity2Ext = 1,
  kPortMechBath = 2,
  kPortCavity1Loss = 3,
  kPortCavity2Loss = 4,
};
inline constexpr int kNumPorts = 5;

// s[out][in]; unitary at every real detuning once all five ports are kept.
using SMatrix = std::array<std::array<cplx, kNumPorts>, kNumPorts>;

struct OnResonance {
  double t_sq = 0.0;
  double r1_sq = 0.0;
  double r2_sq = 0.0;
};

struct ScatteringPoint {
  double delta_hz = 0.0;
  cplx t;     // cavity1 external in -> cavity2 external out (== the reverse path)
  cplx r1;    // cavity1 external in -> cavity1 external out
  cplx r2;
  cplx s_m1;  // mechanical bath in -> cavity1 external out
  cplx s_m2;
  cplx loss1; // cavity1 external in -> cavity1 internal-loss out
  cplx loss2; // cavity1 external in -> cavity2 internal-loss out
  SMatrix s{};
};

struct ScatteringTrace {
  std::vector<double> delta_hz;  // strictly increasing, uniform
  std::vector<ScatteringPoint> points;
  DerivedRates rates;
  double eta1 = 0.0;
  double eta2 = 0.0;
};

struct CooperativitySweepRow {
  double c_total = 0.0;  // c1 + c2, split evenly
  double t_sq = 0.0;
  double r1_sq = 0.0;
  double r2_sq = 0.0;
  double gamma_total_hz = 0.0;
  double internal_efficiency = 0.0;  // t_sq / (eta1 * eta2)
};

struct RatioSweepRow {
  double c2_over_c1 = 0.0;
  double t_sq = 0.0;
  double r1_sq = 0.0;
  double r2_sq = 0.0;
};

// Closed-form on-resonance powers:
//   t_sq  = 4 eta1 eta2 C1 C2 / (1 + C1 + C2)^2
//   ri_sq = (1 - 2 eta_i + 2 eta_i C_i / (1 + C1 + C2))^2
// These coincide with the full model at delta = 0; away from resonance and
// in strong coupling only the full model applies.
OnResonance scattering_on_resonance(const DerivedRates& rates, double eta1, double eta2);

// Full multiport scattering at one probe detuning. Phase convention:
// a_out = sqrt(kappa_ext) a - a_in, with the cavity-2 port phase chosen so
// that t(0) is real and positive.
ScatteringPoint scattering_at(const ConverterParams& params, const DerivedRates& rates,
                              double delta_hz);

ScatteringTrace trace(const ConverterParams& params, const DerivedRates& rates,
                      double delta_min_hz, double delta_max_hz, int n_points);

// On-resonance response versus total cooperativity, drive split evenly
// (c1 = c2) as in a matched-conversion sweep.
std::vector<CooperativitySweepRow> sweep_cooperativity(const ConverterParams& params,
                                                       const std::vector<double>& c_totals);

// On-resonance response versus c2/c1 at fixed c1: mirror through beam
// splitter to full transparency.
std::vector<RatioSweepRow> sweep_ratio(const ConverterParams& params, double c1_fixed,
                                       const std::vector<double>& ratios);

}  // namespace omc
