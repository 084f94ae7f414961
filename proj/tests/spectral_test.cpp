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

#include "z2sim/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace z2sim {
namespace {

CorrelatorSeries make_series(int n_t, double dt,
                             const std::function<cdouble(double)>& f) {
  CorrelatorSeries s;
  s.source_site = 0;
  s.sites = {0};
  s.values.resize(1);
  for (int k = 0; k < n_t; ++k) {
    const double t = k * dt;
    s.times.push_back(t);
    s.values[0].push_back(f(t));
  }
  return s;
}

TEST(SpectralTest, OnBinToneLandsInSingleBin) {
  const int n_t = 16;
  const double dt = 0.25;
  const double bin = 2.0 * kPi / (n_t * dt);
  for (int j_star : {3, -3}) {
    const double omega = j_star * bin;
    const CorrelatorSeries s = make_series(
        n_t, dt, [&](double t) { return std::polar(1.0, omega * t); });
    const Spectrum sp = dft(s, 0);
    EXPECT_EQ(sp.n_t, n_t);
    EXPECT_DOUBLE_EQ(sp.bin_width, bin);
    for (int i = 0; i < n_t; ++i) {
      const bool hit = std::abs(sp.frequencies[i] - omega) < 1e-9;
      if (hit)
        EXPECT_NEAR(sp.magnitudes[i], 1.0, 1e-12);
      else
        EXPECT_LT(sp.magnitudes[i], 1e-12);
    }
    const MassEstimate est = extract_mass(sp);
    EXPECT_NEAR(est.mass, std::abs(omega), 1e-9);
    EXPECT_DOUBLE_EQ(est.uncertainty, bin / 2);
    EXPECT_TRUE(est.interpolated);  // neighbors vanish, so the shift is 0
    EXPECT_NEAR(est.peak_magnitude, 1.0, 1e-12);
  }
}

TEST(SpectralTest, LargestPeakWinsAmongTones) {
  const int n_t = 16;
  const double dt = 0.25;
  const double bin = 2.0 * kPi / (n_t * dt);
  const CorrelatorSeries s = make_series(n_t, dt, [&](double t) {
    return std::polar(1.0, 3 * bin * t) + std::polar(0.4, -5 * bin * t);
  });
  const Spectrum sp = dft(s, 0);
  ASSERT_GE(sp.peaks.size(), 2u);
  EXPECT_NEAR(sp.peaks[0].first, 3 * bin, 1e-9);
  EXPECT_NEAR(sp.peaks[0].second, 1.0, 1e-12);
  EXPECT_GE(sp.peaks[0].second, sp.peaks[1].second);
  EXPECT_NEAR(extract_mass(sp).mass, 3 * bin, 1e-9);
}

TEST(SpectralTest, InterpolationImprovesOffBinEstimate) {
  const int n_t = 32;
  const double dt = 0.25;
  const double bin = 2.0 * kPi / (n_t * dt);
  const double omega = 3.3 * bin;
  const CorrelatorSeries s = make_series(
      n_t, dt, [&](double t) { return std::polar(1.0, omega * t); });
  const Spectrum sp = dft(s, 0);
  const MassEstimate raw = extract_mass(sp, false);
  const MassEstimate refined = extract_mass(sp, true);
  EXPECT_FALSE(raw.interpolated);
  EXPECT_TRUE(refined.interpolated);
  EXPECT_NEAR(raw.mass, 3 * bin, 1e-9);
  EXPECT_LT(std::abs(refined.mass - omega), std::abs(raw.mass - omega));
  EXPECT_LT(std::abs(refined.mass - omega), 0.25 * bin);
}

TEST(SpectralTest, FlatSeriesHasNoSignal) {
  const CorrelatorSeries constant =
      make_series(16, 0.25, [](double) { return cdouble{0.7, 0}; });
  EXPECT_THROW(extract_mass(dft(constant, 0)), NoSignalError);

  const CorrelatorSeries zero =
      make_series(16, 0.25, [](double) { return cdouble{0, 0}; });
  EXPECT_THROW(extract_mass(dft(zero, 0)), NoSignalError);
}

TEST(SpectralTest, MeanSubtractionRemovesDcOnly) {
  const int n_t = 16;
  const double dt = 0.25;
  const double bin = 2.0 * kPi / (n_t * dt);
  const double omega = 4 * bin;
  const CorrelatorSeries s = make_series(n_t, dt, [&](double t) {
    return cdouble{0.5, 0} + std::polar(1.0, omega * t);
  });

  DftOptions opt;
  opt.subtract_mean = true;
  const Spectrum sp = dft(s, 0, opt);
  EXPECT_TRUE(sp.mean_subtracted);
  const Spectrum plain = dft(s, 0);
  for (int i = 0; i < n_t; ++i) {
    if (sp.frequencies[i] == 0.0) {
      EXPECT_LT(sp.magnitudes[i], 1e-12);
      EXPECT_NEAR(plain.magnitudes[i], 0.5, 1e-12);
    } else if (std::abs(sp.frequencies[i] - omega) < 1e-9) {
      EXPECT_NEAR(sp.magnitudes[i], 1.0, 1e-12);
    }
  }
}

TEST(SpectralTest, HannWindowShape) {
  // Hann on a constant series: DC coefficient equals the window mean
  // (n-1)/(2n), and the zeroed endpoints stop the window from leaking the
  // full DC weight.
  const int n_t = 8;
  const CorrelatorSeries s =
      make_series(n_t, 0.25, [](double) { return cdouble{1, 0}; });
  DftOptions opt;
  opt.hann = true;
  const Spectrum sp = dft(s, 0, opt);
  EXPECT_TRUE(sp.hann_window);
  for (int i = 0; i < n_t; ++i)
    if (sp.frequencies[i] == 0.0)
      EXPECT_NEAR(sp.magnitudes[i], (n_t - 1) / (2.0 * n_t), 1e-12);
}

TEST(SpectralTest, InverseTransformRoundTrips) {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const CorrelatorSeries s = make_series(
      16, 0.25, [&](double) { return cdouble{u(rng), u(rng)}; });
  const Spectrum sp = dft(s, 0);
  const std::vector<cdouble> back = inverse_dft(sp);
  ASSERT_EQ(back.size(), s.values[0].size());
  for (std::size_t k = 0; k < back.size(); ++k)
    EXPECT_LT(std::abs(back[k] - s.values[0][k]), 1e-12);
}

TEST(SpectralTest, InputValidation) {
  const CorrelatorSeries s =
      make_series(8, 0.25, [](double t) { return cdouble{t, 0}; });
  EXPECT_THROW(dft(s, 5), std::invalid_argument);  // site not recorded

  CorrelatorSeries short_series =
      make_series(3, 0.25, [](double) { return cdouble{1, 0}; });
  EXPECT_THROW(dft(short_series, 0), std::invalid_argument);

  CorrelatorSeries skewed = s;
  skewed.times[4] += 0.1;
  EXPECT_THROW(dft(skewed, 0), std::invalid_argument);
}

TEST(SpectralTest, RelativeMassError) {
  EXPECT_NEAR(relative_mass_error(4.2, 4.0), 5.0, 1e-12);
  EXPECT_NEAR(relative_mass_error(3.8, 4.0), -5.0, 1e-12);
  EXPECT_DOUBLE_EQ(relative_mass_error(4.0, 4.0), 0.0);
  EXPECT_THROW(relative_mass_error(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(relative_mass_error(1.0, -2.0), std::invalid_argument);
}

TEST(SpectralTest, MatchCouplingsFindsSmallestRoot) {
  // beta_E = 0.5, beta_H = 1.6: f is positive at small xi, negative near
  // xi = 1, positive again at large xi, so there are exactly two roots.
  const XiRoot r = match_couplings(0.5, 1.6);
  EXPECT_TRUE(r.multiple_roots);
  const auto f = [](double xi) {
    return 0.5 / xi - std::sqrt(1.6) * std::exp(-0.5 * xi);
  };
  EXPECT_LE(std::abs(f(r.xi)), 1e-12);
  EXPECT_GT(r.xi, 0.1);
  EXPECT_LT(r.xi, 1.0);
  // Between the two roots f is negative, so the returned root is the left one.
  EXPECT_LT(f(1.5 * r.xi), 0.0);
}

TEST(SpectralTest, MatchCouplingsReportsWhenNoRootExists) {
  // beta_E = beta_H = 1: f(xi) = 1/xi - e^{-xi} > 0 on the whole scan range.
  EXPECT_THROW(match_couplings(1.0, 1.0), NoRootError);
  EXPECT_THROW(match_couplings(0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(match_couplings(-1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(match_couplings(1.0, 1e-15), std::invalid_argument);
}

TEST(SpectralTest, MatchCouplingsRootShrinksWithBetaH) {
  // A larger beta_H deepens the exponential term, so the first crossing moves
  // to smaller xi. Residuals stay pinned at the bisection tolerance.
  const XiRoot weak = match_couplings(0.5, 1.6);
  const XiRoot strong = match_couplings(0.5, 5.0);
  EXPECT_LT(strong.xi, weak.xi);
  const auto f = [](double bh, double xi) {
    return 0.5 / xi - std::sqrt(bh) * std::exp(-0.5 * xi);
  };
  EXPECT_LE(std::abs(f(1.6, weak.xi)), 1e-12);
  EXPECT_LE(std::abs(f(5.0, strong.xi)), 1e-12);
}

}  // namespace
}  // namespace z2sim
