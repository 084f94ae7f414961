// Copyright 2026 The z2sim Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

// http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "z2sim/trajectory_types.hpp"

namespace z2sim {

// Raised when a spectrum has no usable non-DC content.
struct NoSignalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoRootError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DftOptions {
  bool subtract_mean = false;
  bool hann = false;
};

// Discrete spectrum of a correlator series. Bins are signed,
// omega_j = 2 pi j / (n_t dt) for j = -floor(n_t/2) .. n_t-1-floor(n_t/2),
// with A_j = (1/n_t) sum_k C_k e^{-i 2 pi j k / n_t}.
struct Spectrum {
  std::vector<double> frequencies;
  std::vector<cdouble> coeffs;
  std::vector<double> magnitudes;
  std::vector<std::pair<double, double>> peaks;  // (omega, |A|), |A| descending
  int n_t = 0;
  double dt = 0;
  double bin_width = 0;
  bool mean_subtracted = false;
  bool hann_window = false;
};

struct MassEstimate {
  double mass = 0;
  double uncertainty = 0;  // half a bin
  bool interpolated = false;
  double peak_magnitude = 0;
};

inline Spectrum dft(const CorrelatorSeries& series, int site,
                    const DftOptions& opt = {}) {
  const auto it = std::find(series.sites.begin(), series.sites.end(), site);
  if (it == series.sites.end())
    throw std::invalid_argument("dft: site not recorded in series");
  const std::size_t si =
      static_cast<std::size_t>(it - series.sites.begin());
  const int n_t = static_cast<int>(series.times.size());
  if (n_t < 4) throw std::invalid_argument("dft: series too short (n_t < 4)");
  const double dt = series.times[1] - series.times[0];
  for (int k = 1; k < n_t; ++k)
    if (std::abs(series.times[k] - series.times[k - 1] - dt) > 1e-9 * (1 + dt))
      throw std::invalid_argument("dft: nonuniform time grid");

  std::vector<cdouble> x(series.values[si].begin(), series.values[si].end());
  if (opt.subtract_mean) {
    cdouble mean{0, 0};
    for (const cdouble& v : x) mean += v;
    mean /= static_cast<double>(n_t);
    for (cdouble& v : x) v -= mean;
  }
  if (opt.hann)
    for (int k = 0; k < n_t; ++k)
      x[k] *= 0.5 * (1.0 - std::cos(2.0 * kPi * k / (n_t - 1)));

  Spectrum s;
  s.n_t = n_t;
  s.dt = dt;
  s.bin_width = 2.0 * kPi / (n_t * dt);
  s.mean_subtracted = opt.subtract_mean;
  s.hann_window = opt.hann;
  const int j_lo = -(n_t / 2);
  for (int j = j_lo; j < n_t + j_lo; ++j) {
    cdouble a{0, 0};
    for (int k = 0; k < n_t; ++k)
      a += x[k] * std::polar(1.0, -2.0 * kPi * j * k / n_t);
    a /= static_cast<double>(n_t);
    s.frequencies.push_back(j * s.bin_width);
    s.coeffs.push_back(a);
    s.magnitudes.push_back(std::abs(a));
  }
  for (int i = 0; i < n_t; ++i) {
    const double m = s.magnitudes[i];
    const bool left_ok = i == 0 || s.magnitudes[i - 1] <= m;
    const bool right_ok = i == n_t - 1 || s.magnitudes[i + 1] < m;
    if (left_ok && right_ok && m > 0)
      s.peaks.emplace_back(s.frequencies[i], m);
  }
  std::stable_sort(s.peaks.begin(), s.peaks.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  return s;
}

// Inverse transform, for round-trip checks: C_k = sum_j A_j e^{+i 2 pi j k/n}.
inline std::vector<cdouble> inverse_dft(const Spectrum& s) {
  std::vector<cdouble> x(s.n_t, cdouble{0, 0});
  const int j_lo = -(s.n_t / 2);
  for (int k = 0; k < s.n_t; ++k)
    for (int i = 0; i < s.n_t; ++i)
      x[k] += s.coeffs[i] * std::polar(1.0, 2.0 * kPi * (j_lo + i) * k / s.n_t);
  return x;
}

// Largest-|A| bin excluding DC, optionally refined by 3-point quadratic
// interpolation (exact for an on-bin tone since its neighbors vanish).
// The reported mass is |omega|; uncertainty is half a bin.
inline MassEstimate extract_mass(const Spectrum& s, bool interpolate = true) {
  int best = -1;
  double best_mag = -1;
  for (int i = 0; i < s.n_t; ++i) {
    if (s.frequencies[i] == 0.0) continue;
    if (s.magnitudes[i] > best_mag) {
      best_mag = s.magnitudes[i];
      best = i;
    }
  }
  double floor_scale = 0;
  for (int i = 0; i < s.n_t; ++i)
    floor_scale = std::max(floor_scale, s.magnitudes[i]);
  if (best < 0 || best_mag <= 1e-12 * std::max(1.0, floor_scale))
    throw NoSignalError("extract_mass: no signal (flat or empty spectrum)");
  double lo = best_mag, hi = best_mag;
  for (int i = 0; i < s.n_t; ++i) {
    if (s.frequencies[i] == 0.0) continue;
    lo = std::min(lo, s.magnitudes[i]);
    hi = std::max(hi, s.magnitudes[i]);
  }
  if (hi - lo <= 1e-12 * std::max(1.0, hi))
    throw NoSignalError("extract_mass: no signal (flat spectrum)");

  MassEstimate est;
  est.peak_magnitude = best_mag;
  est.uncertainty = s.bin_width / 2;
  double omega = s.frequencies[best];
  if (interpolate && best > 0 && best < s.n_t - 1 &&
      s.frequencies[best - 1] != 0.0 && s.frequencies[best + 1] != 0.0) {
    const double ym = s.magnitudes[best - 1];
    const double y0 = s.magnitudes[best];
    const double yp = s.magnitudes[best + 1];
    const double denom = ym - 2 * y0 + yp;
    if (std::abs(denom) > 1e-300) {
      const double delta = 0.5 * (ym - yp) / denom;
      if (std::abs(delta) <= 0.5) {
        omega += delta * s.bin_width;
        est.interpolated = true;
      }
    }
  }
  est.mass = std::abs(omega);
  return est;
}

inline double relative_mass_error(double noisy_mass, double reference_mass) {
  if (!(reference_mass > 0))
    throw std::invalid_argument("relative_mass_error: reference must be > 0");
  return 100.0 * (noisy_mass - reference_mass) / reference_mass;
}

struct XiRoot {
  double xi = 0;
  bool multiple_roots = false;
};

// Smallest positive root of f(xi) = beta_E/xi - sqrt(beta_H) e^{-beta_E xi}
// in [1e-6, 1e3], by log-spaced scan plus bisection to |f| <= 1e-12. The
// relation has zero, one, or two positive roots; with two, the smaller is
// returned and multiple_roots is set.
inline XiRoot match_couplings(double beta_e, double beta_h) {
  if (!(beta_e > 0)) throw std::invalid_argument("match_couplings: beta_E must be > 0");
  if (!(beta_h >= 1e-12))
    throw std::invalid_argument("match_couplings: beta_H below 1e-12 is degenerate");
  const double root_bh = std::sqrt(beta_h);
  auto f = [&](double xi) { return beta_e / xi - root_bh * std::exp(-beta_e * xi); };

  const double lo = 1e-6, hi = 1e3;
  const int n_scan = 4096;
  std::vector<std::pair<double, double>> brackets;
  double x_prev = lo, f_prev = f(lo);
  for (int i = 1; i <= n_scan; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / n_scan);
    const double fx = f(x);
    if (f_prev == 0.0) brackets.emplace_back(x_prev, x_prev);
    else if ((f_prev < 0) != (fx < 0)) brackets.emplace_back(x_prev, x);
    x_prev = x;
    f_prev = fx;
  }
  if (brackets.empty())
    throw NoRootError("match_couplings: no positive root in [1e-6, 1e3]");

  auto [a, b] = brackets.front();
  double fa = f(a);
  double mid = a;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm) <= 1e-12) break;
    if ((fa < 0) != (fm < 0)) b = mid;
    else { a = mid; fa = fm; }
  }
  if (std::abs(f(mid)) > 1e-12)
    throw NoRootError("match_couplings: bisection failed to reach residual 1e-12");
  XiRoot r;
  r.xi = mid;
  r.multiple_roots = brackets.size() > 1;
  return r;
}

}  // namespace z2sim
