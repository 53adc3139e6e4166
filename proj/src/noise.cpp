#include "omconv/noise.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace omc {

double bose_occupancy(double f_hz, double t_k) {
  if (!(f_hz > 0.0)) throw InvalidParameter("bose_occupancy: f_hz must be > 0");
  if (!(t_k > 0.0)) throw InvalidParameter("bose_occupancy: t_k must be > 0");
  return 1.0 / std::expm1(kPlanck * f_hz / (kBoltzmann * t_k));
}

double floor_from_noise_temperature(double t_noise_k, double f_hz) {
  return bose_occupancy(f_hz, t_noise_k);
}

double floor_from_noise_temperature_rj(double t_noise_k, double f_hz) {
  if (!(f_hz > 0.0)) throw InvalidParameter("floor_from_noise_temperature_rj: f_hz must be > 0");
  if (!(t_noise_k > 0.0))
    throw InvalidParameter("floor_from_noise_temperature_rj: t_noise_k must be > 0");
  return kBoltzmann * t_noise_k / (kPlanck * f_hz);
}

AddedNoiseResult added_noise(const DerivedRates& rates, double eta1, double eta2, double n_th) {
  if (!(eta1 >= 0.0 && eta1 <= 1.0)) throw InvalidParameter("eta1 must be in [0, 1]");
  if (!(eta2 >= 0.0 && eta2 <= 1.0)) throw InvalidParameter("eta2 must be in [0, 1]");
  if (!(n_th >= 0.0)) throw InvalidParameter("n_th must be >= 0");

  AddedNoiseResult out;
  out.n_m = n_th / (1.0 + rates.c1 + rates.c2);

  auto referred = [&](double eta, double c, const char* which) -> double {
    if (n_th == 0.0) return 0.0;
    const double denom = eta * c;
    if (denom > 0.0) return n_th / denom;
    out.diagnostics.push_back(std::string(which) +
                              ": added noise diverges at zero cooperativity or zero "
                              "coupling efficiency");
    return std::numeric_limits<double>::infinity();
  };
  out.n_add_1 = referred(eta1, rates.c1, "input 1");
  out.n_add_2 = referred(eta2, rates.c2, "input 2");
  out.bound_ok = out.n_add_1 > 2.0 * out.n_m && out.n_add_2 > 2.0 * out.n_m;
  return out;
}

NoiseSpectrum output_noise_spectrum(const ConverterParams& params, const DerivedRates& rates,
                                    int which_cavity, double n_th, double floor_quanta,
                                    const std::vector<double>& delta_grid_hz) {
  if (which_cavity != 1 && which_cavity != 2)
    throw InvalidParameter("which_cavity must be 1 or 2");
  if (!(n_th >= 0.0)) throw InvalidParameter("n_th must be >= 0");
  if (!(floor_quanta >= 0.0)) throw InvalidParameter("floor_quanta must be >= 0");
  if (delta_grid_hz.empty()) throw InvalidParameter("delta grid must be non-empty");
  for (std::size_t i = 0; i < delta_grid_hz.size(); ++i) {
    if (!std::isfinite(delta_grid_hz[i])) throw InvalidParameter("delta grid must be finite");
    if (i > 0 && !(delta_grid_hz[i] > delta_grid_hz[i - 1]))
      throw InvalidParameter("delta grid must be strictly increasing");
  }

  const double eta = which_cavity == 1 ? params.cavity1.eta : params.cavity2.eta;
  const double c_here = which_cavity == 1 ? rates.c1 : rates.c2;
  const double denom = 1.0 + rates.c1 + rates.c2;
  const double peak = 4.0 * eta * c_here * n_th / (denom * denom);
  const double hw = 0.5 * rates.gamma_total_hz;  // Lorentzian half width
  const double hw_sq = hw * hw;

  NoiseSpectrum sp;
  sp.delta_hz = delta_grid_hz;
  sp.quanta.reserve(delta_grid_hz.size());
  for (double d : delta_grid_hz) sp.quanta.push_back(floor_quanta + peak * hw_sq / (hw_sq + d * d));
  sp.floor_quanta = floor_quanta;
  sp.which_cavity = which_cavity;
  sp.rates = rates;
  sp.n_th = n_th;
  sp.eta1 = params.cavity1.eta;
  sp.eta2 = params.cavity2.eta;
  return sp;
}

NoiseSpectrum synthesize_spectrum(const NoiseSpectrum& spectrum, double n_avg,
                                  std::uint64_t seed) {
  if (!(n_avg > 0.0)) throw InvalidParameter("n_avg must be > 0");

  NoiseSpectrum out = spectrum;
  out.n_avg = n_avg;
  out.seed = seed;
  if (std::isinf(n_avg)) return out;  // infinite averaging reproduces the input

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double inv_root = 1.0 / std::sqrt(n_avg);
  for (double& v : out.quanta) v += gauss(rng) * v * inv_root;
  return out;
}

}  // namespace omc
