#include "omconv/design.hpp"

#include <algorithm>
#include <cmath>

#include "omconv/common.hpp"

namespace omc {
namespace {

DesignSolution build_solution(const ConverterParams& params, double c1, double c2,
                              const DesignConstraints& constraints) {
  DesignSolution sol;
  sol.drive = drive_for_cooperativity(params, c1, c2);
  sol.rates = derive_rates(params, sol.drive);
  sol.predicted = scattering_on_resonance(sol.rates, params.cavity1.eta, params.cavity2.eta);
  sol.noise = added_noise(sol.rates, params.cavity1.eta, params.cavity2.eta, params.mech.n_th);
  sol.drive_power1_w = drive_power_w(params, 1, sol.drive.n1);
  sol.drive_power2_w = drive_power_w(params, 2, sol.drive.n2);
  if (constraints.max_photons &&
      (sol.drive.n1 > *constraints.max_photons || sol.drive.n2 > *constraints.max_photons)) {
    sol.feasible = false;
    sol.notes.push_back("drive photon number exceeds the configured maximum");
  }
  return sol;
}

}  // namespace

DesignSolution solve_bandwidth(const ConverterParams& params, double target_bw_hz,
                               const DesignConstraints& constraints) {
  params.validate();
  if (!std::isfinite(target_bw_hz)) throw InvalidParameter("target bandwidth must be finite");
  const double gm = params.mech.gamma_m_hz;
  if (target_bw_hz < gm)
    throw Infeasible("target bandwidth is below the zero-drive linewidth", gm);

  const double c_total = target_bw_hz / gm - 1.0;
  double c1 = 0.5 * c_total;
  double c2 = 0.5 * c_total;
  if (constraints.fixed_c1) {
    c1 = *constraints.fixed_c1;
    c2 = c_total - c1;
    if (c1 < 0.0 || c2 < 0.0)
      throw Infeasible("fixed C1 exceeds the total cooperativity this bandwidth allows",
                       c_total);
  }
  return build_solution(params, c1, c2, constraints);
}

std::vector<DesignSolution> solve_split(const ConverterParams& params, double c1_fixed,
                                        double target_t_sq,
                                        const DesignConstraints& constraints) {
  params.validate();
  if (!(c1_fixed > 0.0)) throw InvalidParameter("c1_fixed must be > 0");
  if (!(target_t_sq > 0.0)) throw InvalidParameter("target_t_sq must be > 0");

  const double eta_prod = params.cavity1.eta * params.cavity2.eta;
  // t_sq as a function of C2 peaks at C2 = 1 + C1.
  const double t_max = eta_prod * c1_fixed / (1.0 + c1_fixed);
  if (target_t_sq > t_max * (1.0 + 1e-12))
    throw Infeasible("target transmission exceeds the maximum achievable at this C1", t_max);

  // T*(1 + C1 + C2)^2 = 4*eta1*eta2*C1*C2, a quadratic a*C2^2 + b*C2 + c = 0.
  const double s = 1.0 + c1_fixed;
  const double a = target_t_sq;
  const double b = 2.0 * target_t_sq * s - 4.0 * eta_prod * c1_fixed;
  const double c = target_t_sq * s * s;
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) disc = 0.0;  // tangency within rounding of the feasibility check
  const double sqrt_disc = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sqrt_disc : -sqrt_disc));
  double root_lo = q / a;
  double root_hi = c / q;
  if (root_lo > root_hi) std::swap(root_lo, root_hi);

  std::vector<DesignSolution> out;
  if (sqrt_disc == 0.0 || root_hi - root_lo <= 1e-12 * root_hi) {
    DesignSolution sol = build_solution(params, c1_fixed, 0.5 * (root_lo + root_hi), constraints);
    sol.branch = "tangent";
    out.push_back(std::move(sol));
    return out;
  }
  DesignSolution lesser = build_solution(params, c1_fixed, root_lo, constraints);
  lesser.branch = "lesser";
  DesignSolution greater = build_solution(params, c1_fixed, root_hi, constraints);
  greater.branch = "greater";
  out.push_back(std::move(lesser));
  out.push_back(std::move(greater));
  return out;
}

DesignSolution solve_transmission(const ConverterParams& params, double target_t_sq,
                                  const DesignConstraints& constraints) {
  params.validate();
  if (!(target_t_sq > 0.0)) throw InvalidParameter("target_t_sq must be > 0");
  const double eta_prod = params.cavity1.eta * params.cavity2.eta;
  if (!(target_t_sq < eta_prod))
    throw Infeasible("balanced transmission approaches eta1*eta2 only asymptotically",
                     eta_prod);

  // 4C^2/(1+2C)^2 = target/eta_prod  =>  C = r/(2(1-r)), r = sqrt(target/eta_prod).
  const double r = std::sqrt(target_t_sq / eta_prod);
  const double c_each = 0.5 * r / (1.0 - r);
  return build_solution(params, c_each, c_each, constraints);
}

double drive_power_w(const ConverterParams& params, int which_cavity, double n_photons) {
  if (which_cavity != 1 && which_cavity != 2)
    throw InvalidParameter("which_cavity must be 1 or 2");
  if (!(n_photons >= 0.0)) throw InvalidParameter("n_photons must be >= 0");
  const CavityParams& cav = which_cavity == 1 ? params.cavity1 : params.cavity2;
  cav.validate(which_cavity == 1 ? "cavity1" : "cavity2");
  params.mech.validate();
  if (n_photons == 0.0) return 0.0;
  if (!(cav.kappa_ext_hz() > 0.0))
    throw InvalidParameter("drive power is undefined for a fully decoupled port (eta = 0)");

  const double f_drive = cav.f_c_hz - params.mech.f_m_hz;
  const double half_kappa = 0.5 * cav.kappa_hz;
  const double lorentz = half_kappa * half_kappa + params.mech.f_m_hz * params.mech.f_m_hz;
  return n_photons * kPlanck * f_drive * lorentz * kTwoPi / cav.kappa_ext_hz();
}

double photon_flux_per_s(double power_dbm, double f_hz) {
  if (!(f_hz > 0.0)) throw InvalidParameter("f_hz must be > 0");
  const double power_w = std::pow(10.0, (power_dbm - 30.0) / 10.0);
  return power_w / (kPlanck * f_hz);
}

CompressionCheck check_compression(double flux_per_s, double ceiling_per_s) {
  if (!(flux_per_s >= 0.0)) throw InvalidParameter("flux must be >= 0");
  if (!(ceiling_per_s > 0.0)) throw InvalidParameter("compression ceiling must be > 0");
  CompressionCheck chk;
  chk.flux_per_s = flux_per_s;
  chk.ceiling_per_s = ceiling_per_s;
  chk.ok = flux_per_s <= ceiling_per_s;
  if (!chk.ok)
    chk.message = "input flux exceeds the 1 dB compression ceiling; transmission "
                  "will sag below the linear-model prediction";
  return chk;
}

}  // namespace omc
