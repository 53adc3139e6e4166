#include "omconv/params.hpp"

#include <cmath>
#include <sstream>

namespace omc {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& constraint, double got) {
  std::ostringstream msg;
  msg << field << " " << constraint << " (got " << got << ")";
  throw InvalidParameter(msg.str());
}

}  // namespace

void CavityParams::validate(const std::string& label) const {
  if (!(f_c_hz > 0.0)) fail(label + ".f_c_hz", "must be > 0", f_c_hz);
  if (!(kappa_hz > 0.0)) fail(label + ".kappa_hz", "must be > 0", kappa_hz);
  if (!(eta >= 0.0 && eta <= 1.0)) fail(label + ".eta", "must be in [0, 1]", eta);
  if (!(g0_hz >= 0.0)) fail(label + ".g0_hz", "must be >= 0", g0_hz);
  if (!(t_noise_k >= 0.0)) fail(label + ".t_noise_k", "must be >= 0", t_noise_k);
  if (!std::isfinite(f_c_hz) || !std::isfinite(kappa_hz) || !std::isfinite(g0_hz))
    throw InvalidParameter(label + ": non-finite field");
}

void MechanicalParams::validate() const {
  if (!(f_m_hz > 0.0)) fail("mech.f_m_hz", "must be > 0", f_m_hz);
  if (!(gamma_m_hz > 0.0)) fail("mech.gamma_m_hz", "must be > 0", gamma_m_hz);
  if (!(n_th >= 0.0)) fail("mech.n_th", "must be >= 0", n_th);
  if (!std::isfinite(f_m_hz) || !std::isfinite(gamma_m_hz) || !std::isfinite(n_th))
    throw InvalidParameter("mech: non-finite field");
}

void ConverterParams::validate() const {
  cavity1.validate("cavity1");
  cavity2.validate("cavity2");
  mech.validate();
  // The two cavities must be spectrally distinct modes.
  const double sep = std::abs(cavity1.f_c_hz - cavity2.f_c_hz);
  if (!(sep > cavity1.kappa_hz && sep > cavity2.kappa_hz)) {
    std::ostringstream msg;
    msg << "cavity resonances must differ by more than both linewidths"
        << " (separation " << sep << " Hz, kappa1 " << cavity1.kappa_hz << " Hz, kappa2 "
        << cavity2.kappa_hz << " Hz)";
    throw InvalidParameter(msg.str());
  }
}

void DriveConfig::validate() const {
  if (!(n1 >= 0.0) || !std::isfinite(n1)) fail("drive.n1", "must be finite and >= 0", n1);
  if (!(n2 >= 0.0) || !std::isfinite(n2)) fail("drive.n2", "must be finite and >= 0", n2);
}

DerivedRates derive_rates(const ConverterParams& params, const DriveConfig& drive) {
  params.validate();
  drive.validate();

  DerivedRates r;
  r.g_eff1_hz = params.cavity1.g0_hz * std::sqrt(drive.n1);
  r.g_eff2_hz = params.cavity2.g0_hz * std::sqrt(drive.n2);
  r.gamma1_hz = 4.0 * r.g_eff1_hz * r.g_eff1_hz / params.cavity1.kappa_hz;
  r.gamma2_hz = 4.0 * r.g_eff2_hz * r.g_eff2_hz / params.cavity2.kappa_hz;
  r.c1 = r.gamma1_hz / params.mech.gamma_m_hz;
  r.c2 = r.gamma2_hz / params.mech.gamma_m_hz;
  r.gamma_total_hz = params.mech.gamma_m_hz + r.gamma1_hz + r.gamma2_hz;
  r.f_drive1_hz = params.cavity1.f_c_hz - params.mech.f_m_hz;
  r.f_drive2_hz = params.cavity2.f_c_hz - params.mech.f_m_hz;
  r.n_m = params.mech.n_th / (1.0 + r.c1 + r.c2);
  return r;
}

DriveConfig drive_for_cooperativity(const ConverterParams& params, double c1, double c2) {
  params.validate();
  if (!(c1 >= 0.0) || !std::isfinite(c1)) fail("c1", "must be finite and >= 0", c1);
  if (!(c2 >= 0.0) || !std::isfinite(c2)) fail("c2", "must be finite and >= 0", c2);

  auto invert = [&](const CavityParams& cav, double c, const char* which) -> double {
    if (c == 0.0) return 0.0;
    if (!(cav.g0_hz > 0.0)) {
      throw InvalidParameter(std::string(which) +
                             ": cooperativity > 0 is infeasible with g0 = 0");
    }
    const double gamma = c * params.mech.gamma_m_hz;
    return gamma * cav.kappa_hz / (4.0 * cav.g0_hz * cav.g0_hz);
  };

  DriveConfig d;
  d.n1 = invert(params.cavity1, c1, "c1");
  d.n2 = invert(params.cavity2, c2, "c2");
  return d;
}

RegimeReport check_regime(const ConverterParams& params, const DerivedRates& rates) {
  RegimeReport rep;
  rep.sideband_resolved1 = params.cavity1.kappa_hz < params.mech.f_m_hz;
  rep.sideband_resolved2 = params.cavity2.kappa_hz < params.mech.f_m_hz;
  rep.weak_coupling1 = !(rates.gamma1_hz > params.cavity1.kappa_hz / 10.0);
  rep.weak_coupling2 = !(rates.gamma2_hz > params.cavity2.kappa_hz / 10.0);

  auto warn = [&](const std::string& s) { rep.warnings.push_back(s); };
  if (!rep.sideband_resolved1)
    warn("cavity1: kappa exceeds the mechanical frequency; the sideband-resolved model "
         "does not hold and parametric-gain sidebands are not suppressed");
  if (!rep.sideband_resolved2)
    warn("cavity2: kappa exceeds the mechanical frequency; the sideband-resolved model "
         "does not hold and parametric-gain sidebands are not suppressed");
  if (!rep.weak_coupling1)
    warn("cavity1: gamma1 > kappa1/10; closed-form on-resonance expressions are "
         "unreliable, use the frequency-dependent scattering matrix");
  if (!rep.weak_coupling2)
    warn("cavity2: gamma2 > kappa2/10; closed-form on-resonance expressions are "
         "unreliable, use the frequency-dependent scattering matrix");
  return rep;
}

}  // namespace omc
