// ctckit/features.cc

// Copyright 2026  The ctckit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "ctckit/features.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ctckit/error.h"

namespace ctckit {

namespace {

constexpr double kPi = std::numbers::pi;

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// In-place iterative radix-2 FFT on interleaved (re, im) pairs.
// n must be a power of two; plenty for the fixed 512-point front end.
void fft_radix2(std::vector<double>& buf, int n) {
  // bit reversal permutation
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(buf[2 * i], buf[2 * j]);
      std::swap(buf[2 * i + 1], buf[2 * j + 1]);
    }
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / len;
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (int i = 0; i < n; i += len) {
      double cur_r = 1.0, cur_i = 0.0;
      for (int k = 0; k < len / 2; ++k) {
        const int a = 2 * (i + k), b = 2 * (i + k + len / 2);
        const double ur = buf[a], ui = buf[a + 1];
        const double vr = buf[b] * cur_r - buf[b + 1] * cur_i;
        const double vi = buf[b] * cur_i + buf[b + 1] * cur_r;
        buf[a] = ur + vr;
        buf[a + 1] = ui + vi;
        buf[b] = ur - vr;
        buf[b + 1] = ui - vi;
        const double nr = cur_r * wr - cur_i * wi;
        cur_i = cur_r * wi + cur_i * wr;
        cur_r = nr;
      }
    }
  }
}

// Triangular filters with centers equally spaced on the Mel scale between
// 0 Hz and Nyquist.  Weights fall off linearly in Hz toward the neighboring
// centers, so a pure tone always peaks in the filter whose center frequency
// is nearest in Hz.
struct MelBank {
  std::vector<std::vector<double>> weights;  // n_filters x n_bins
  std::vector<double> centers_hz;
};

MelBank build_mel_bank(const FeatureConfig& cfg, int sample_rate) {
  const int n_bins = cfg.fft_size / 2 + 1;
  const double nyquist = sample_rate / 2.0;
  const double mel_max = hz_to_mel(nyquist);
  const double mel_delta = mel_max / (cfg.n_filters + 1);

  std::vector<double> edges_hz(cfg.n_filters + 2);
  for (int i = 0; i < cfg.n_filters + 2; ++i) edges_hz[i] = mel_to_hz(i * mel_delta);

  MelBank bank;
  bank.weights.assign(cfg.n_filters, std::vector<double>(n_bins, 0.0));
  bank.centers_hz.resize(cfg.n_filters);
  const double bin_width = static_cast<double>(sample_rate) / cfg.fft_size;
  for (int f = 0; f < cfg.n_filters; ++f) {
    const double left = edges_hz[f], center = edges_hz[f + 1], right = edges_hz[f + 2];
    bank.centers_hz[f] = center;
    for (int b = 0; b < n_bins; ++b) {
      const double hz = b * bin_width;
      if (hz > left && hz < center) {
        bank.weights[f][b] = (hz - left) / (center - left);
      } else if (hz >= center && hz < right) {
        bank.weights[f][b] = (right - hz) / (right - center);
      }
    }
  }
  return bank;
}

}  // namespace

std::vector<double> filterbank_center_frequencies(const FeatureConfig& config, int sample_rate) {
  return build_mel_bank(config, sample_rate).centers_hz;
}

FrameMatrix compute_mel_filterbank(const AudioBuffer& audio, const FeatureConfig& cfg) {
  require(audio.sample_rate > 0, "compute_mel_filterbank: sample_rate must be positive");
  require(!audio.samples.empty(), "compute_mel_filterbank: empty audio");
  require(cfg.window_s >= cfg.hop_s, "compute_mel_filterbank: window must be >= hop");
  require(cfg.n_filters > 0, "compute_mel_filterbank: n_filters must be positive");

  const int win = static_cast<int>(std::lround(cfg.window_s * audio.sample_rate));
  const int hop = static_cast<int>(std::lround(cfg.hop_s * audio.sample_rate));
  require(win > 0 && hop > 0, "compute_mel_filterbank: window/hop too small for sample rate");
  require(cfg.fft_size >= win && (cfg.fft_size & (cfg.fft_size - 1)) == 0,
          "compute_mel_filterbank: fft_size must be a power of two >= window length");

  const auto n = static_cast<long long>(audio.samples.size());
  require(n >= win, "compute_mel_filterbank: audio too short (", n, " samples < one ", win,
          "-sample window)");
  const int num_frames = static_cast<int>((n - win) / hop) + 1;

  std::vector<double> window(win);
  for (int i = 0; i < win; ++i) window[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (win - 1));

  const MelBank bank = build_mel_bank(cfg, audio.sample_rate);
  const int n_bins = cfg.fft_size / 2 + 1;

  FrameMatrix out;
  out.frames = Matrix(num_frames, cfg.n_filters);
  out.frame_period = cfg.hop_s;

  std::vector<double> fft_buf(2 * cfg.fft_size);
  std::vector<double> power(n_bins);
  for (int t = 0; t < num_frames; ++t) {
    const double* src = audio.samples.data() + static_cast<std::size_t>(t) * hop;
    std::fill(fft_buf.begin(), fft_buf.end(), 0.0);
    for (int i = 0; i < win; ++i) fft_buf[2 * i] = src[i] * window[i];
    fft_radix2(fft_buf, cfg.fft_size);
    for (int b = 0; b < n_bins; ++b) {
      const double re = fft_buf[2 * b], im = fft_buf[2 * b + 1];
      power[b] = re * re + im * im;
    }
    double* row = out.frames.row(t);
    for (int f = 0; f < cfg.n_filters; ++f) {
      double energy = 0.0;
      const auto& w = bank.weights[f];
      for (int b = 0; b < n_bins; ++b) energy += w[b] * power[b];
      row[f] = std::log(std::max(energy, cfg.log_floor_energy));
    }
  }
  return out;
}

FrameMatrix stack_frames(const FrameMatrix& input, int context) {
  require(context >= 0, "stack_frames: context must be >= 0");
  const int t_len = input.num_frames();
  const int d = input.dim();
  FrameMatrix out;
  out.frame_period = input.frame_period;
  out.frames = Matrix(t_len, (2 * context + 1) * d);
  for (int t = 0; t < t_len; ++t) {
    double* dst = out.frames.row(t);
    for (int k = -context; k <= context; ++k) {
      const int src_t = std::clamp(t + k, 0, t_len - 1);
      const double* src = input.frames.row(src_t);
      std::copy(src, src + d, dst);
      dst += d;
    }
  }
  return out;
}

FrameMatrix decimate_frames(const FrameMatrix& input, int factor) {
  require(factor >= 1, "decimate_frames: factor must be >= 1");
  const int t_len = input.num_frames();
  const int kept = (t_len + factor - 1) / factor;
  FrameMatrix out;
  out.frame_period = input.frame_period * factor;
  out.frames = Matrix(kept, input.dim());
  for (int i = 0; i < kept; ++i) {
    const double* src = input.frames.row(i * factor);
    std::copy(src, src + input.dim(), out.frames.row(i));
  }
  return out;
}

FrameMatrix featurize(const AudioBuffer& audio, const FeatureConfig& cfg) {
  FrameMatrix fbank = compute_mel_filterbank(audio, cfg);
  FrameMatrix stacked = stack_frames(fbank, cfg.context);
  return decimate_frames(stacked, cfg.decimation);
}

void FeatureNormalizer::apply(Matrix* frames) const {
  if (empty()) return;
  require(frames->cols == static_cast<int>(mean.size()),
          "FeatureNormalizer: dim mismatch, stats have ", mean.size(), " coefficients but features have ",
          frames->cols);
  for (int t = 0; t < frames->rows; ++t) {
    double* row = frames->row(t);
    for (int c = 0; c < frames->cols; ++c) row[c] = (row[c] - mean[c]) * inv_std[c];
  }
}

FeatureNormalizer estimate_normalizer(const std::vector<const Matrix*>& train_features) {
  require(!train_features.empty(), "estimate_normalizer: no training features");
  const int d = train_features.front()->cols;
  Vector sum(d, 0.0), sum_sq(d, 0.0);
  long long count = 0;
  for (const Matrix* m : train_features) {
    require(m->cols == d, "estimate_normalizer: inconsistent feature dims");
    for (int t = 0; t < m->rows; ++t) {
      const double* row = m->row(t);
      for (int c = 0; c < d; ++c) {
        sum[c] += row[c];
        sum_sq[c] += row[c] * row[c];
      }
    }
    count += m->rows;
  }
  require(count > 0, "estimate_normalizer: training features contain no frames");
  FeatureNormalizer norm;
  norm.mean.resize(d);
  norm.inv_std.resize(d);
  for (int c = 0; c < d; ++c) {
    norm.mean[c] = sum[c] / count;
    const double var = std::max(sum_sq[c] / count - norm.mean[c] * norm.mean[c], 1e-12);
    norm.inv_std[c] = 1.0 / std::sqrt(var);
  }
  return norm;
}

}  // namespace ctckit
