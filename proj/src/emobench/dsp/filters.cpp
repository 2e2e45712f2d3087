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

#include "emobench/dsp/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "emobench/core/error.hpp"
#include "emobench/dsp/fft.hpp"

namespace emobench::dsp {

using cplx = std::complex<double>;
using std::numbers::pi;

std::string_view to_string(FilterKind k) noexcept {
  switch (k) {
    case FilterKind::FirBandpass: return "fir-bandpass";
    case FilterKind::Notch: return "notch";
    case FilterKind::ButterworthBandpass: return "butterworth-bandpass";
    case FilterKind::ButterworthLowpass: return "butterworth-lowpass";
  }
  return "?";
}

FilterSpec FilterSpec::fir_bandpass(double low_hz, double high_hz, double transition_hz) {
  FilterSpec s;
  s.kind = FilterKind::FirBandpass;
  s.low_hz = low_hz;
  s.high_hz = high_hz;
  s.transition_hz = transition_hz;
  return s;
}

FilterSpec FilterSpec::notch(double centre_hz, double q) {
  FilterSpec s;
  s.kind = FilterKind::Notch;
  s.low_hz = centre_hz;
  s.high_hz = centre_hz;
  s.notch_q = q;
  return s;
}

FilterSpec FilterSpec::butterworth_bandpass(double low_hz, double high_hz, int order) {
  FilterSpec s;
  s.kind = FilterKind::ButterworthBandpass;
  s.low_hz = low_hz;
  s.high_hz = high_hz;
  s.order = order;
  return s;
}

FilterSpec FilterSpec::butterworth_lowpass(double cutoff_hz, int order) {
  FilterSpec s;
  s.kind = FilterKind::ButterworthLowpass;
  s.low_hz = cutoff_hz;
  s.high_hz = cutoff_hz;
  s.order = order;
  return s;
}

void FilterSpec::validate(double rate_hz) const {
  const double nyquist = rate_hz / 2.0;
  auto band_error = [&](const char* what) {
    fail(Errc::InvalidBand, std::string(to_string(kind)) + ": " + what + " (rate " + std::to_string(rate_hz) + " Hz)");
  };
  switch (kind) {
    case FilterKind::FirBandpass:
    case FilterKind::ButterworthBandpass:
      if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist)) band_error("band must satisfy 0 < low < high < Nyquist");
      break;
    case FilterKind::Notch:
    case FilterKind::ButterworthLowpass:
      if (!(low_hz > 0.0 && low_hz < nyquist)) band_error("frequency must lie in (0, Nyquist)");
      break;
  }
  if ((kind == FilterKind::ButterworthBandpass || kind == FilterKind::ButterworthLowpass) && order < 1)
    fail(Errc::InvalidArgument, "Butterworth order must be >= 1");
  if (kind == FilterKind::FirBandpass && !(transition_hz > 0.0))
    fail(Errc::InvalidArgument, "FIR transition width must be positive");
  if (kind == FilterKind::Notch && !(notch_q > 0.0)) fail(Errc::InvalidArgument, "notch Q must be positive");
}

std::vector<double> design_fir_bandpass(double low_hz, double high_hz, double rate_hz, double transition_hz) {
  // Hamming main-lobe transition is ~3.3 / N cycles per sample.
  auto taps = static_cast<std::size_t>(std::ceil(3.3 * rate_hz / transition_hz));
  if (taps % 2 == 0) ++taps;
  const double fl = low_hz / rate_hz;
  const double fh = high_hz / rate_hz;
  const auto mid = static_cast<double>(taps - 1) / 2.0;
  std::vector<double> h(taps);
  for (std::size_t i = 0; i < taps; ++i) {
    const double k = static_cast<double>(i) - mid;
    const double ideal = k == 0.0 ? 2.0 * (fh - fl)
                                  : (std::sin(2.0 * pi * fh * k) - std::sin(2.0 * pi * fl * k)) / (pi * k);
    const double window = 0.54 - 0.46 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(taps - 1));
    h[i] = ideal * window;
  }
  const double gain = std::abs(freq_response(h, (low_hz + high_hz) / 2.0, rate_hz));
  for (auto& v : h) v /= gain;
  return h;
}

Sos design_notch(double centre_hz, double q, double rate_hz) {
  const double w0 = 2.0 * pi * centre_hz / rate_hz;
  const double bw = w0 / q;
  const double gain = 1.0 / (1.0 + std::tan(bw / 2.0));
  Biquad s;
  s.b = {gain, -2.0 * gain * std::cos(w0), gain};
  s.a = {1.0, -2.0 * gain * std::cos(w0), 2.0 * gain - 1.0};
  return {s};
}

namespace {

cplx bilinear(cplx s, double rate_hz) { return (2.0 * rate_hz + s) / (2.0 * rate_hz - s); }

double prewarp(double f_hz, double rate_hz) { return 2.0 * rate_hz * std::tan(pi * f_hz / rate_hz); }

// Unit-cutoff analog Butterworth poles (left half plane).
std::vector<cplx> prototype_poles(int order) {
  std::vector<cplx> p;
  for (int k = 0; k < order; ++k) p.push_back(std::polar(1.0, pi * (2.0 * k + order + 1) / (2.0 * order)));
  return p;
}

// Groups digital poles into conjugate pairs / real pairs. `numerator` is used
// for full sections, `numerator_single` for a lone first-order section.
Sos poles_to_sos(const std::vector<cplx>& poles, std::array<double, 3> numerator,
                 std::array<double, 3> numerator_single) {
  constexpr double tol = 1e-12;
  Sos sos;
  std::vector<double> reals;
  for (const auto& p : poles) {
    if (p.imag() > tol) {
      Biquad s;
      s.b = numerator;
      s.a = {1.0, -2.0 * p.real(), std::norm(p)};
      sos.push_back(s);
    } else if (std::abs(p.imag()) <= tol) {
      reals.push_back(p.real());
    }
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i + 1 < reals.size(); i += 2) {
    Biquad s;
    s.b = numerator;
    s.a = {1.0, -(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]};
    sos.push_back(s);
  }
  if (reals.size() % 2 == 1) {
    Biquad s;
    s.b = numerator_single;
    s.a = {1.0, -reals.back(), 0.0};
    sos.push_back(s);
  }
  return sos;
}

void normalise_gain(Sos& sos, double ref_hz, double rate_hz) {
  const double g = std::abs(freq_response(sos, ref_hz, rate_hz));
  for (auto& v : sos.front().b) v /= g;
}

}  // namespace

Sos design_butterworth_lowpass(int order, double cutoff_hz, double rate_hz) {
  const double wc = prewarp(cutoff_hz, rate_hz);
  std::vector<cplx> poles;
  for (const auto& p : prototype_poles(order)) poles.push_back(bilinear(p * wc, rate_hz));
  Sos sos = poles_to_sos(poles, {1.0, 2.0, 1.0}, {1.0, 1.0, 0.0});
  normalise_gain(sos, 0.0, rate_hz);
  return sos;
}

Sos design_butterworth_bandpass(int order, double low_hz, double high_hz, double rate_hz) {
  const double w1 = prewarp(low_hz, rate_hz);
  const double w2 = prewarp(high_hz, rate_hz);
  const double w0 = std::sqrt(w1 * w2);
  const double bw = w2 - w1;
  std::vector<cplx> poles;
  for (const auto& q : prototype_poles(order)) {
    const cplx half = q * bw / 2.0;
    const cplx root = std::sqrt(half * half - w0 * w0);
    poles.push_back(bilinear(half + root, rate_hz));
    poles.push_back(bilinear(half - root, rate_hz));
  }
  // Every section carries one zero at DC and one at Nyquist.
  Sos sos = poles_to_sos(poles, {1.0, 0.0, -1.0}, {1.0, 0.0, -1.0});
  const double centre_hz = std::atan(w0 / (2.0 * rate_hz)) * rate_hz / pi;
  normalise_gain(sos, centre_hz, rate_hz);
  return sos;
}

std::complex<double> freq_response(const Sos& sos, double freq_hz, double rate_hz) {
  const cplx zinv = std::polar(1.0, -2.0 * pi * freq_hz / rate_hz);
  cplx h{1.0, 0.0};
  for (const auto& s : sos) {
    h *= (s.b[0] + zinv * (s.b[1] + zinv * s.b[2])) / (s.a[0] + zinv * (s.a[1] + zinv * s.a[2]));
  }
  return h;
}

std::complex<double> freq_response(std::span<const double> fir, double freq_hz, double rate_hz) {
  cplx h{0.0, 0.0};
  const double w = -2.0 * pi * freq_hz / rate_hz;
  for (std::size_t k = 0; k < fir.size(); ++k) h += fir[k] * std::polar(1.0, w * static_cast<double>(k));
  return h;
}

namespace {

struct SectionState {
  double z0 = 0.0;
  double z1 = 0.0;
};

// Steady-state section states for a unit step (cascade-scaled).
std::vector<SectionState> sos_step_state(const Sos& sos) {
  std::vector<SectionState> zi;
  double input_level = 1.0;
  for (const auto& s : sos) {
    const double denom = s.a[0] + s.a[1] + s.a[2];
    const double g = std::abs(denom) < 1e-300 ? 0.0 : (s.b[0] + s.b[1] + s.b[2]) / denom;
    SectionState st;
    st.z1 = (s.b[2] - s.a[2] * g) * input_level;
    st.z0 = (s.b[1] - s.a[1] * g) * input_level + st.z1;
    zi.push_back(st);
    input_level *= g;
  }
  return zi;
}

void run_sos(const Sos& sos, std::vector<SectionState> state, std::vector<double>& x) {
  for (std::size_t k = 0; k < sos.size(); ++k) {
    const auto& s = sos[k];
    auto& st = state[k];
    for (auto& v : x) {
      const double in = v;
      const double out = s.b[0] * in + st.z0;
      st.z0 = s.b[1] * in - s.a[1] * out + st.z1;
      st.z1 = s.b[2] * in - s.a[2] * out;
      v = out;
    }
  }
}

// Point reflection about each endpoint; keeps value and slope continuous.
std::vector<double> odd_extend(std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> out;
  out.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) out.push_back(2.0 * x[0] - x[i]);
  out.insert(out.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) out.push_back(2.0 * x[n - 1] - x[n - 1 - i]);
  return out;
}

std::vector<double> trim(const std::vector<double>& y, std::size_t pad, std::size_t n) {
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::vector<double> filtfilt_sos(const Sos& sos, std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(3 * (2 * sos.size() + 1), n > 0 ? n - 1 : 0);
  auto y = odd_extend(x, pad);
  const auto zi = sos_step_state(sos);
  auto scaled = [&](double level) {
    auto s = zi;
    for (auto& st : s) {
      st.z0 *= level;
      st.z1 *= level;
    }
    return s;
  };
  run_sos(sos, scaled(y.front()), y);
  std::reverse(y.begin(), y.end());
  run_sos(sos, scaled(y.front()), y);
  std::reverse(y.begin(), y.end());
  return trim(y, pad, n);
}

std::vector<double> filtfilt_fir(std::span<const double> h, std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t pad = std::min<std::size_t>(3 * h.size(), n > 0 ? n - 1 : 0);
  auto ext = odd_extend(x, pad);
  auto y = convolve_causal(ext, h);
  std::reverse(y.begin(), y.end());
  y = convolve_causal(y, h);
  std::reverse(y.begin(), y.end());
  return trim(y, pad, n);
}

}  // namespace

std::vector<double> sos_filter(const Sos& sos, std::span<const double> x) {
  std::vector<double> y(x.begin(), x.end());
  run_sos(sos, std::vector<SectionState>(sos.size()), y);
  return y;
}

std::vector<double> filter_zero_phase(std::span<const double> x, const FilterSpec& spec, double rate_hz) {
  spec.validate(rate_hz);
  if (x.empty()) return {};
  switch (spec.kind) {
    case FilterKind::FirBandpass: {
      const auto h = design_fir_bandpass(spec.low_hz, spec.high_hz, rate_hz, spec.transition_hz);
      return filtfilt_fir(h, x);
    }
    case FilterKind::Notch: return filtfilt_sos(design_notch(spec.low_hz, spec.notch_q, rate_hz), x);
    case FilterKind::ButterworthBandpass:
      return filtfilt_sos(design_butterworth_bandpass(spec.order, spec.low_hz, spec.high_hz, rate_hz), x);
    case FilterKind::ButterworthLowpass:
      return filtfilt_sos(design_butterworth_lowpass(spec.order, spec.low_hz, rate_hz), x);
  }
  return {};
}

Recording apply_filter(const Recording& recording, const FilterSpec& spec) {
  const double rate = recording.sample_rate_hz();
  spec.validate(rate);
  std::vector<double> out;
  out.reserve(recording.samples().size());
  if (spec.kind == FilterKind::FirBandpass) {
    // Design once for all channels.
    const auto h = design_fir_bandpass(spec.low_hz, spec.high_hz, rate, spec.transition_hz);
    for (std::size_t c = 0; c < recording.channel_count(); ++c) {
      auto y = filtfilt_fir(h, recording.channel(c));
      out.insert(out.end(), y.begin(), y.end());
    }
  } else {
    for (std::size_t c = 0; c < recording.channel_count(); ++c) {
      auto y = filter_zero_phase(recording.channel(c), spec, rate);
      out.insert(out.end(), y.begin(), y.end());
    }
  }
  return recording.with_samples(std::move(out));
}

}  // namespace emobench::dsp
