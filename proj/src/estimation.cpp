#include "omconv/estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "omconv/scattering.hpp"

namespace omc {
namespace {

struct FitParams {
  double c;  // center
  double w;  // fwhm
  double a;  // peak height above floor
  double f;  // floor
};

double model(const FitParams& p, double x) {
  const double u = 0.25 * p.w * p.w;
  const double d = x - p.c;
  return p.f + p.a * u / (u + d * d);
}

double cost_at(const FitParams& p, const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - model(p, x[i]);
    s += r * r;
  }
  return s;
}

// Median of the values in the first and last quarter of the grid.
double outer_quartile_median(const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t q = std::max<std::size_t>(1, n / 4);
  std::vector<double> edge;
  edge.reserve(2 * q);
  edge.insert(edge.end(), y.begin(), y.begin() + static_cast<std::ptrdiff_t>(q));
  edge.insert(edge.end(), y.end() - static_cast<std::ptrdiff_t>(q), y.end());
  std::sort(edge.begin(), edge.end());
  const std::size_t m = edge.size();
  return m % 2 == 1 ? edge[m / 2] : 0.5 * (edge[m / 2 - 1] + edge[m / 2]);
}

FitParams initial_guess(const std::vector<double>& x, const std::vector<double>& y) {
  FitParams p{};
  p.f = outer_quartile_median(y);
  const auto it_max = std::max_element(y.begin(), y.end());
  const std::size_t imax = static_cast<std::size_t>(it_max - y.begin());
  p.a = *it_max - p.f;
  p.c = x[imax];

  // Half-height crossings by linear interpolation outward from the maximum.
  const double half = p.f + 0.5 * p.a;
  const double span = x.back() - x.front();
  double left = x.front();
  for (std::size_t i = imax; i-- > 0;) {
    if (y[i] <= half) {
      const double frac = (y[i + 1] - half) / (y[i + 1] - y[i]);
      left = x[i + 1] + frac * (x[i] - x[i + 1]);
      break;
    }
  }
  double right = x.back();
  for (std::size_t i = imax + 1; i < y.size(); ++i) {
    if (y[i] <= half) {
      const double frac = (y[i - 1] - half) / (y[i - 1] - y[i]);
      right = x[i - 1] + frac * (x[i] - x[i - 1]);
      break;
    }
  }
  p.w = right - left;
  if (!(p.w > 0.0) || !std::isfinite(p.w)) p.w = 0.25 * span;
  return p;
}

// Scales used for the relative-step convergence test; the center naturally
// sits near zero detuning, so it is measured against the linewidth.
std::array<double, 4> step_scales(const FitParams& p, double y_scale) {
  const double tiny = std::numeric_limits<double>::min();
  return {std::max(std::abs(p.c), std::abs(p.w)) + tiny, std::abs(p.w) + tiny,
          std::max(std::abs(p.a), y_scale) + tiny, std::max(std::abs(p.f), y_scale) + tiny};
}

LorentzianFit finalize(const FitParams& p, const std::vector<double>& x,
                       const std::vector<double>& y, int iterations, bool converged) {
  const std::size_t n = x.size();
  LorentzianFit fit;
  fit.center_hz = p.c;
  fit.fwhm_hz = std::abs(p.w);
  fit.peak = p.a;
  fit.floor = p.f;
  fit.iterations = iterations;
  fit.converged = converged;

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 4);
  Eigen::VectorXd res(static_cast<Eigen::Index>(n));
  const double u = 0.25 * p.w * p.w;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - p.c;
    const double den = u + d * d;
    const Eigen::Index k = static_cast<Eigen::Index>(i);
    jac(k, 0) = p.a * u * 2.0 * d / (den * den);
    jac(k, 1) = p.a * (0.5 * p.w) * d * d / (den * den);
    jac(k, 2) = u / den;
    jac(k, 3) = 1.0;
    res(k) = y[i] - model(p, x[i]);
  }
  const double sse = res.squaredNorm();
  fit.residual_rms = std::sqrt(sse / static_cast<double>(n));

  if (n > 4) {
    const double sigma_sq = sse / static_cast<double>(n - 4);
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Matrix4d cov =
        sigma_sq * jtj.completeOrthogonalDecomposition().pseudoInverse();
    for (int r = 0; r < 4; ++r)
      for (int cidx = 0; cidx < 4; ++cidx) fit.covariance[r][cidx] = cov(r, cidx);
    auto sigma = [&](int k) { return cov(k, k) > 0.0 ? std::sqrt(cov(k, k)) : 0.0; };
    fit.sigma_center_hz = sigma(0);
    fit.sigma_fwhm_hz = sigma(1);
    fit.sigma_peak = sigma(2);
    fit.sigma_floor = sigma(3);
  }

  // A peak is only trustworthy when it is positive, stands clear of the
  // per-bin noise, is statistically significant, and is resolved by at
  // least two grid steps.
  const double spacing = (x.back() - x.front()) / static_cast<double>(n - 1);
  fit.low_snr = !(fit.peak > 0.0) || fit.peak < 2.0 * fit.residual_rms ||
                (fit.sigma_peak > 0.0 && fit.peak < 3.0 * fit.sigma_peak) ||
                fit.fwhm_hz < 2.0 * spacing;
  return fit;
}

}  // namespace

double LorentzianFit::value_at(double delta_hz) const {
  const double u = 0.25 * fwhm_hz * fwhm_hz;
  const double d = delta_hz - center_hz;
  return floor + peak * u / (u + d * d);
}

LorentzianFit fit_lorentzian(const std::vector<double>& delta_hz,
                             const std::vector<double>& values) {
  const std::size_t n = delta_hz.size();
  if (n != values.size()) throw InvalidParameter("grid and value arrays differ in length");
  if (n < 8) throw InvalidParameter("Lorentzian fit requires at least 8 samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(delta_hz[i]) || !std::isfinite(values[i]))
      throw InvalidParameter("fit inputs must be finite");
    if (i > 0 && !(delta_hz[i] > delta_hz[i - 1]))
      throw InvalidParameter("fit grid must be strictly increasing");
  }

  const auto [ymin_it, ymax_it] = std::minmax_element(values.begin(), values.end());
  const double y_scale =
      std::max(std::abs(*ymin_it), std::abs(*ymax_it)) + std::numeric_limits<double>::min();

  FitParams p = initial_guess(delta_hz, values);
  double cost = cost_at(p, delta_hz, values);
  std::vector<double> history;
  history.reserve(32);
  history.push_back(std::sqrt(cost / static_cast<double>(n)));

  constexpr int kMaxIterations = 200;
  constexpr double kStepTol = 1e-9;
  double lambda = 1e-3;

  Eigen::MatrixXd jac(static_cast<Eigen::Index>(n), 4);
  Eigen::VectorXd res(static_cast<Eigen::Index>(n));
  for (int iter = 1; iter <= kMaxIterations; ++iter) {
    const double u = 0.25 * p.w * p.w;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = delta_hz[i] - p.c;
      const double den = u + d * d;
      const Eigen::Index k = static_cast<Eigen::Index>(i);
      jac(k, 0) = p.a * u * 2.0 * d / (den * den);
      jac(k, 1) = p.a * (0.5 * p.w) * d * d / (den * den);
      jac(k, 2) = u / den;
      jac(k, 3) = 1.0;
      res(k) = values[i] - model(p, delta_hz[i]);
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d grad = jac.transpose() * res;
    // Small ridge keeps the damped system solvable when a parameter is
    // locally unidentifiable (e.g. width of a zero-height peak).
    const double ridge = 1e-12 * jtj.trace() / 4.0 + std::numeric_limits<double>::min();

    while (true) {
      Eigen::Matrix4d damped = jtj;
      for (int k = 0; k < 4; ++k) damped(k, k) += lambda * (jtj(k, k) + ridge);
      const Eigen::Vector4d step = damped.ldlt().solve(grad);

      const auto scales = step_scales(p, y_scale);
      double rel = 0.0;
      for (int k = 0; k < 4; ++k) rel = std::max(rel, std::abs(step(k)) / scales[k]);
      if (!std::isfinite(rel) || rel < kStepTol)
        return finalize(p, delta_hz, values, iter, true);

      FitParams trial{p.c + step(0), p.w + step(1), p.a + step(2), p.f + step(3)};
      trial.w = std::abs(trial.w);
      const double trial_cost = cost_at(trial, delta_hz, values);
      if (std::isfinite(trial_cost) && trial_cost < cost) {
        p = trial;
        cost = trial_cost;
        lambda = std::max(lambda / 3.0, 1e-12);
        break;
      }
      lambda *= 10.0;  // shrink the step until it either improves or vanishes
    }
    history.push_back(std::sqrt(cost / static_cast<double>(n)));
  }

  throw FitError("Lorentzian fit did not converge within 200 iterations",
                 finalize(p, delta_hz, values, kMaxIterations, false), history);
}

LorentzianFit fit_lorentzian(const NoiseSpectrum& spectrum) {
  return fit_lorentzian(spectrum.delta_hz, spectrum.quanta);
}

BathInference infer_bath(const LorentzianFit& fit, const DerivedRates& rates, double eta1,
                         double eta2, int measured_cavity) {
  if (measured_cavity != 1 && measured_cavity != 2)
    throw InvalidParameter("measured_cavity must be 1 or 2");
  if (!(fit.peak >= 0.0) || !std::isfinite(fit.peak))
    throw InvalidParameter("fitted peak must be finite and non-negative");

  const OnResonance on = scattering_on_resonance(rates, eta1, eta2);
  if (!(on.t_sq > 0.0))
    throw InvalidParameter("bath inference requires nonzero conversion (both drives on)");

  BathInference out;
  out.referred_input = measured_cavity == 1 ? 2 : 1;
  const double eta_in = out.referred_input == 1 ? eta1 : eta2;
  const double c_in = out.referred_input == 1 ? rates.c1 : rates.c2;
  out.n_add = fit.peak / on.t_sq;
  out.n_th = out.n_add * eta_in * c_in;
  out.n_m = out.n_th / (1.0 + rates.c1 + rates.c2);

  if (std::abs(fit.fwhm_hz - rates.gamma_total_hz) > 0.25 * rates.gamma_total_hz)
    out.warnings.push_back("fitted width deviates from the drive-broadened linewidth by >25%");
  return out;
}

LineCalibration self_calibrate(const RawLineMeasurements& raw) {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidParameter(std::string(name) + " must be a positive finite magnitude");
  };
  require_positive(raw.r1_off, "r1_off");
  require_positive(raw.r2_off, "r2_off");
  require_positive(raw.t12, "t12");
  require_positive(raw.t21, "t21");

  LineCalibration cal;
  cal.t_sq = (raw.t12 * raw.t21) / (raw.r1_off * raw.r2_off);
  const double t_abs = std::sqrt(cal.t_sq);
  cal.alpha1_beta1 = raw.r1_off;
  cal.alpha2_beta2 = raw.r2_off;
  cal.alpha1_beta2 = raw.t12 / t_abs;
  cal.alpha2_beta1 = raw.t21 / t_abs;
  return cal;
}

ThermometryFit thermometry(const std::vector<ThermometryPoint>& points, double n_drive,
                           const MechanicalParams& mech, const CavityParams& cavity,
                           double integration_span_hz) {
  if (points.size() < 3)
    throw InvalidParameter("thermometry requires at least 3 temperature points");
  double t_min = std::numeric_limits<double>::infinity();
  double t_max = 0.0;
  for (const auto& pt : points) {
    if (!(pt.t_k > 0.0) || !std::isfinite(pt.area))
      throw InvalidParameter("thermometry points must have positive temperature and finite area");
    t_min = std::min(t_min, pt.t_k);
    t_max = std::max(t_max, pt.t_k);
  }
  if (!(t_max >= 2.0 * t_min))
    throw InvalidParameter("temperature points must span at least a factor of 2");
  if (!(n_drive > 0.0)) throw InvalidParameter("n_drive must be > 0");
  mech.validate();
  cavity.validate("cavity");

  // Ordinary least squares of area against the Bose occupancy at each T.
  double sx = 0.0, sy = 0.0;
  const double n_pts = static_cast<double>(points.size());
  std::vector<double> occ(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    occ[i] = bose_occupancy(mech.f_m_hz, points[i].t_k);
    sx += occ[i];
    sy += points[i].area;
  }
  const double mean_x = sx / n_pts;
  const double mean_y = sy / n_pts;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sxx += (occ[i] - mean_x) * (occ[i] - mean_x);
    sxy += (occ[i] - mean_x) * (points[i].area - mean_y);
  }
  if (!(sxx > 0.0)) throw InvalidParameter("degenerate temperature span");

  ThermometryFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  if (!(fit.slope > 0.0))
    throw InvalidParameter("thermometry slope must be positive for physical data");

  // Device-plane area per bath quantum is 2*pi*eta*Gamma1/(1+C1); invert for
  // Gamma1 = s*gamma_m / (2*pi*eta*gamma_m - s).
  const double limit = kTwoPi * cavity.eta * mech.gamma_m_hz;
  if (!(fit.slope < limit))
    throw Infeasible(
        "slope exceeds the saturated-cooling limit 2*pi*eta*gamma_m; no finite "
        "drive rate reproduces it",
        limit);
  fit.gamma1_hz = fit.slope * mech.gamma_m_hz / (limit - fit.slope);
  fit.c1 = fit.gamma1_hz / mech.gamma_m_hz;
  fit.g0_hz = std::sqrt(fit.gamma1_hz * cavity.kappa_hz / (4.0 * n_drive));
  fit.system_noise_quanta = integration_span_hz > 0.0
                                ? fit.intercept / integration_span_hz
                                : std::numeric_limits<double>::quiet_NaN();
  return fit;
}

}  // namespace omc
