#include "omconv/scattering.hpp"

#include <cmath>

namespace omc {

namespace {

void check_etas(double eta1, double eta2) {
  if (!(eta1 >= 0.0 && eta1 <= 1.0)) throw InvalidParameter("eta1 must be in [0, 1]");
  if (!(eta2 >= 0.0 && eta2 <= 1.0)) throw InvalidParameter("eta2 must be in [0, 1]");
}

}  // namespace

OnResonance scattering_on_resonance(const DerivedRates& rates, double eta1, double eta2) {
  check_etas(eta1, eta2);
  const double denom = 1.0 + rates.c1 + rates.c2;
  OnResonance out;
  out.t_sq = 4.0 * eta1 * eta2 * rates.c1 * rates.c2 / (denom * denom);
  const double r1 = 1.0 - 2.0 * eta1 + 2.0 * eta1 * rates.c1 / denom;
  const double r2 = 1.0 - 2.0 * eta2 + 2.0 * eta2 * rates.c2 / denom;
  out.r1_sq = r1 * r1;
  out.r2_sq = r2 * r2;
  return out;
}

ScatteringPoint scattering_at(const ConverterParams& params, const DerivedRates& rates,
                              double delta_hz) {
  if (!std::isfinite(delta_hz)) throw InvalidParameter("delta_hz must be finite");

  const double k1 = params.cavity1.kappa_hz;
  const double k2 = params.cavity2.kappa_hz;
  const double gm = params.mech.gamma_m_hz;
  const double g1 = rates.g_eff1_hz;
  const double g2 = rates.g_eff2_hz;

  // Cyclic-unit susceptibilities: kappa, gamma_m, delta all in Hz. Every
  // scattering amplitude is a ratio of rates, so the 2pi of an angular
  // formulation cancels throughout.
  const cplx chi1 = 1.0 / cplx(0.5 * k1, -delta_hz);
  const cplx chi2 = 1.0 / cplx(0.5 * k2, -delta_hz);
  const cplx chi_m_inv(0.5 * gm, -delta_hz);
  // Drive-dressed mechanical response; exact at any coupling strength.
  const cplx chi_m_eff = 1.0 / (chi_m_inv + (g1 * g1 * chi1 + g2 * g2 * chi2));

  // Mode amplitudes per unit field entering through each cavity (u1, u2) and
  // through the mechanical bath (w):
  //   b  = chi_m_eff (-i g1 chi1 u1 - i g2 chi2 u2 + w)
  //   ai = chi_i (u_i - i g_i b)
  const cplx i_unit(0.0, 1.0);
  const cplx cross = g1 * g2 * (chi1 * chi2) * chi_m_eff;  // shared 1<->2 kernel
  const cplx a1_u1 = chi1 * (1.0 - g1 * g1 * chi1 * chi_m_eff);
  const cplx a2_u2 = chi2 * (1.0 - g2 * g2 * chi2 * chi_m_eff);
  const cplx a1_u2 = -cross;
  const cplx a2_u1 = -cross;
  const cplx a1_w = -i_unit * g1 * chi1 * chi_m_eff;
  const cplx a2_w = -i_unit * g2 * chi2 * chi_m_eff;
  const cplx b_u1 = -i_unit * g1 * chi1 * chi_m_eff;
  const cplx b_u2 = -i_unit * g2 * chi2 * chi_m_eff;
  const cplx b_w = chi_m_eff;

  const cplx resp[3][3] = {
      {a1_u1, a1_u2, a1_w},
      {a2_u1, a2_u2, a2_w},
      {b_u1, b_u2, b_w},
  };

  // Port couplings and which mode / injection channel each port talks to.
  const double coupling[kNumPorts] = {
      params.cavity1.eta * k1, params.cavity2.eta * k2, gm,
      (1.0 - params.cavity1.eta) * k1, (1.0 - params.cavity2.eta) * k2};
  const int channel[kNumPorts] = {0, 1, 2, 0, 1};

  double root[kNumPorts];
  for (int p = 0; p < kNumPorts; ++p) root[p] = std::sqrt(coupling[p]);

  ScatteringPoint pt;
  pt.delta_hz = delta_hz;
  for (int q = 0; q < kNumPorts; ++q) {
    for (int p = 0; p < kNumPorts; ++p) {
      // out_p = sqrt(k_p) mode_p - in_p
      cplx s = resp[channel[p]][channel[q]] * (root[p] * root[q]);
      if (p == q) s -= 1.0;
      pt.s[p][q] = s;
    }
  }

  // Cavity-2 port phase flip: makes t(0) real positive. A diagonal phase
  // redefinition of one port, so unitarity is untouched.
  for (int k = 0; k < kNumPorts; ++k) {
    pt.s[kPortCavity2Ext][k] = -pt.s[kPortCavity2Ext][k];
    pt.s[k][kPortCavity2Ext] = -pt.s[k][kPortCavity2Ext];
  }

  pt.t = pt.s[kPortCavity2Ext][kPortCavity1Ext];
  pt.r1 = pt.s[kPortCavity1Ext][kPortCavity1Ext];
  pt.r2 = pt.s[kPortCavity2Ext][kPortCavity2Ext];
  pt.s_m1 = pt.s[kPortCavity1Ext][kPortMechBath];
  pt.s_m2 = pt.s[kPortCavity2Ext][kPortMechBath];
  pt.loss1 = pt.s[kPortCavity1Loss][kPortCavity1Ext];
  pt.loss2 = pt.s[kPortCavity2Loss][kPortCavity1Ext];
  return pt;
}

ScatteringTrace trace(const ConverterParams& params, const DerivedRates& rates,
                      double delta_min_hz, double delta_max_hz, int n_points) {
  if (n_points < 2) throw InvalidParameter("trace: n_points must be >= 2");
  if (!(delta_min_hz < delta_max_hz))
    throw InvalidParameter("trace: delta_min_hz must be < delta_max_hz");

  ScatteringTrace tr;
  tr.rates = rates;
  tr.eta1 = params.cavity1.eta;
  tr.eta2 = params.cavity2.eta;
  tr.delta_hz.reserve(n_points);
  tr.points.reserve(n_points);
  const double step = (delta_max_hz - delta_min_hz) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) {
    const double d = delta_min_hz + step * i;
    tr.delta_hz.push_back(d);
    tr.points.push_back(scattering_at(params, rates, d));
  }
  return tr;
}

std::vector<CooperativitySweepRow> sweep_cooperativity(const ConverterParams& params,
                                                       const std::vector<double>& c_totals) {
  params.validate();
  const double eta1 = params.cavity1.eta;
  const double eta2 = params.cavity2.eta;
  std::vector<CooperativitySweepRow> rows;
  rows.reserve(c_totals.size());
  for (double ct : c_totals) {
    if (!(ct >= 0.0)) throw InvalidParameter("sweep_cooperativity: c_total must be >= 0");
    DerivedRates r = derive_rates(params, drive_for_cooperativity(params, ct / 2.0, ct / 2.0));
    const OnResonance s = scattering_on_resonance(r, eta1, eta2);
    CooperativitySweepRow row;
    row.c_total = ct;
    row.t_sq = s.t_sq;
    row.r1_sq = s.r1_sq;
    row.r2_sq = s.r2_sq;
    row.gamma_total_hz = r.gamma_total_hz;
    row.internal_efficiency = (eta1 > 0.0 && eta2 > 0.0) ? s.t_sq / (eta1 * eta2) : 0.0;
    rows.push_back(row);
  }
  return rows;
}

std::vector<RatioSweepRow> sweep_ratio(const ConverterParams& params, double c1_fixed,
                                       const std::vector<double>& ratios) {
  params.validate();
  if (!(c1_fixed > 0.0)) throw InvalidParameter("sweep_ratio: c1_fixed must be > 0");
  std::vector<RatioSweepRow> rows;
  rows.reserve(ratios.size());
  for (double ratio : ratios) {
    if (!(ratio >= 0.0)) throw InvalidParameter("sweep_ratio: ratio must be >= 0");
    DerivedRates r =
        derive_rates(params, drive_for_cooperativity(params, c1_fixed, ratio * c1_fixed));
    const OnResonance s = scattering_on_resonance(r, params.cavity1.eta, params.cavity2.eta);
    rows.push_back({ratio, s.t_sq, s.r1_sq, s.r2_sq});
  }
  return rows;
}

}  // namespace omc
