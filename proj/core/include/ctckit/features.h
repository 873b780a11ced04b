// ctckit/features.h

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

#ifndef CTCKIT_FEATURES_H_
#define CTCKIT_FEATURES_H_

#include <vector>

#include "ctckit/matrix.h"
#include "ctckit/wav.h"

namespace ctckit {

// A time-major sequence of feature vectors: frames.rows = T steps,
// frames.cols = D coefficients, one row per frame_period seconds.
struct FrameMatrix {
  Matrix frames;
  double frame_period = 0.010;

  int num_frames() const { return frames.rows; }
  int dim() const { return frames.cols; }
};

// Log Mel filterbank front end.  Window/FFT details are not dictated by the
// acoustic model; the defaults here (512-point FFT, Hamming window, filters
// spanning 0..Nyquist, log floor ln(1e-10)) are conventional and fixed in
// config so runs are reproducible.
struct FeatureConfig {
  int n_filters = 26;
  double window_s = 0.025;
  double hop_s = 0.010;
  int fft_size = 512;
  double log_floor_energy = 1e-10;  // energies are clamped at this before log
  int context = 4;                  // stack_frames frames on each side
  int decimation = 3;               // keep every decimation-th stacked frame
};

// 26-dim log Mel filterbank energies per 25 ms window every 10 ms.
// Throws if the audio is shorter than one window.
FrameMatrix compute_mel_filterbank(const AudioBuffer& audio, const FeatureConfig& config = {});

// Splices rows t-context .. t+context into one row of dim (2*context+1)*D,
// replicating the first/last frame at the edges.  T is unchanged.
FrameMatrix stack_frames(const FrameMatrix& frames, int context = 4);

// Keeps rows 0, factor, 2*factor, ...; frame_period is scaled by factor.
FrameMatrix decimate_frames(const FrameMatrix& frames, int factor = 3);

// Full front end: filterbank, stack, decimate.
FrameMatrix featurize(const AudioBuffer& audio, const FeatureConfig& config = {});

// Center frequency in Hz of each triangular filter, as configured.
std::vector<double> filterbank_center_frequencies(const FeatureConfig& config, int sample_rate);

// Per-coefficient mean/variance normalization.  Statistics are estimated on
// the training set and then applied to every dataset (CTC training on raw
// log energies is unstable).
struct FeatureNormalizer {
  Vector mean;
  Vector inv_std;

  bool empty() const { return mean.empty(); }
  void apply(Matrix* frames) const;
};

FeatureNormalizer estimate_normalizer(const std::vector<const Matrix*>& train_features);

}  // namespace ctckit

#endif  // CTCKIT_FEATURES_H_
