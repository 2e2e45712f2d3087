/*
  Copyright 2026 The emobench Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#include "emobench/dsp/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "emobench/core/error.hpp"

namespace emobench::dsp {

namespace {
constexpr std::int64_t kMaxDenominator = 10000;
constexpr double kKaiserBeta = 5.0;
}  // namespace

Ratio rational_ratio(double target_hz, double source_hz) {
  if (!(target_hz > 0.0) || !(source_hz > 0.0)) fail(Errc::InvalidArgument, "rates must be positive");
  if (target_hz > source_hz) fail(Errc::UpsamplingNotSupported, "target rate exceeds source rate");
  const double r = target_hz / source_hz;
  // Continued-fraction convergents.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = r;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    if (q2 > kMaxDenominator) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(static_cast<double>(p1) / static_cast<double>(q1) - r) <= 1e-9 * r) {
      const auto g = std::gcd(p1, q1);
      return {p1 / g, q1 / g};
    }
    const double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  fail(Errc::IrrationalRatio, "rate ratio " + std::to_string(r) + " has no small rational form");
}

std::vector<double> resample_poly(std::span<const double> x, Ratio ratio) {
  const std::int64_t L = ratio.up;
  const std::int64_t M = ratio.down;
  if (L <= 0 || M <= 0) fail(Errc::InvalidArgument, "resampling factors must be positive");
  if (L == M || x.empty()) return {x.begin(), x.end()};

  const std::int64_t max_lm = std::max(L, M);
  const std::int64_t half = 10 * max_lm;
  const double fc = 0.5 / static_cast<double>(max_lm);
  const double i0_beta = std::cyl_bessel_i(0.0, kKaiserBeta);
  std::vector<double> h(static_cast<std::size_t>(2 * half + 1));
  for (std::int64_t k = -half; k <= half; ++k) {
    const double kd = static_cast<double>(k);
    const double arg = 2.0 * fc * kd;
    const double sinc = k == 0 ? 1.0 : std::sin(std::numbers::pi * arg) / (std::numbers::pi * arg);
    const double u = kd / static_cast<double>(half);
    const double w = std::cyl_bessel_i(0.0, kKaiserBeta * std::sqrt(std::max(0.0, 1.0 - u * u))) / i0_beta;
    h[static_cast<std::size_t>(k + half)] = 2.0 * fc * sinc * w;
  }
  // Each polyphase branch gets unit DC gain so constants pass exactly.
  std::vector<double> branch_sum(static_cast<std::size_t>(L), 0.0);
  for (std::int64_t k = -half; k <= half; ++k)
    branch_sum[static_cast<std::size_t>(((k % L) + L) % L)] += h[static_cast<std::size_t>(k + half)];
  for (std::int64_t k = -half; k <= half; ++k)
    h[static_cast<std::size_t>(k + half)] /= branch_sum[static_cast<std::size_t>(((k % L) + L) % L)];

  const auto n = static_cast<std::int64_t>(x.size());
  const std::int64_t pad = std::min<std::int64_t>(half / L + 2, n - 1);
  auto at = [&](std::int64_t i) -> double {
    if (i < 0) {
      const std::int64_t j = std::min(-i, pad);
      return 2.0 * x[0] - x[static_cast<std::size_t>(j)];
    }
    if (i >= n) {
      const std::int64_t j = std::min(i - (n - 1), pad);
      return 2.0 * x[static_cast<std::size_t>(n - 1)] - x[static_cast<std::size_t>(n - 1 - j)];
    }
    return x[static_cast<std::size_t>(i)];
  };

  const auto out_len = static_cast<std::size_t>(round_half_even(static_cast<double>(n) * static_cast<double>(L) /
                                                                static_cast<double>(M)));
  std::vector<double> y(out_len, 0.0);
  for (std::size_t m = 0; m < out_len; ++m) {
    const std::int64_t t = static_cast<std::int64_t>(m) * M;
    // i*L within [t - half, t + half]
    const std::int64_t lo = t - half;
    const std::int64_t i_first = lo >= 0 ? (lo + L - 1) / L : -((-lo) / L);
    const std::int64_t i_last = (t + half) / L;
    double acc = 0.0;
    for (std::int64_t i = i_first; i <= i_last; ++i) acc += h[static_cast<std::size_t>(t - i * L + half)] * at(i);
    y[m] = acc;
  }
  return y;
}

Recording resample(const Recording& recording, double target_hz) {
  const Ratio ratio = rational_ratio(target_hz, recording.sample_rate_hz());
  std::vector<double> out;
  for (std::size_t c = 0; c < recording.channel_count(); ++c) {
    auto y = resample_poly(recording.channel(c), ratio);
    out.insert(out.end(), y.begin(), y.end());
  }
  return recording.with_samples(std::move(out), target_hz);
}

}  // namespace emobench::dsp
