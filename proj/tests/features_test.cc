// tests/features_test.cc

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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ctckit/error.h"
#include "test_util.h"

using namespace ctckit;
using namespace ctckit::testing;

TEST_SUITE_BEGIN("features");

namespace {

AudioBuffer sine_wave(double hz, double seconds, int rate = 16000, double amplitude = 0.5) {
  AudioBuffer audio;
  audio.sample_rate = rate;
  const int n = static_cast<int>(seconds * rate);
  audio.samples.resize(n);
  for (int i = 0; i < n; ++i)
    audio.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  return audio;
}

FrameMatrix frames_from(const Matrix& m) {
  FrameMatrix f;
  f.frames = m;
  f.frame_period = 0.010;
  return f;
}

}  // namespace

TEST_CASE("one second at 16 kHz yields 98 frames of 26 coefficients") {
  FrameMatrix fbank = compute_mel_filterbank(sine_wave(440.0, 1.0));
  CHECK(fbank.num_frames() == 98);
  CHECK(fbank.dim() == 26);
  CHECK(fbank.frame_period == doctest::Approx(0.010));
}

TEST_CASE("audio shorter than one window is rejected") {
  AudioBuffer audio;
  audio.sample_rate = 16000;
  audio.samples.assign(200, 0.1);  // 12.5 ms < 25 ms window
  CHECK_THROWS_WITH_AS(compute_mel_filterbank(audio), doctest::Contains("too short"), Error);
}

TEST_CASE("all-zero audio clamps every coefficient at the log floor") {
  AudioBuffer audio;
  audio.sample_rate = 16000;
  audio.samples.assign(16000, 0.0);
  FrameMatrix fbank = compute_mel_filterbank(audio);
  const double floor_value = std::log(1e-10);
  for (double v : fbank.frames.data) CHECK(v == floor_value);
}

TEST_CASE("a pure 1 kHz tone peaks in the filter whose center is nearest 1 kHz") {
  // independent reconstruction of the filter centers: 26 triangles with
  // centers equally spaced on the Mel scale between 0 and Nyquist
  auto mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
  auto hz = [](double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); };
  const double delta = mel(8000.0) / 27.0;
  int expected = 0;
  double best = 1e9;
  for (int f = 0; f < 26; ++f) {
    const double center = hz((f + 1) * delta);
    if (std::abs(center - 1000.0) < best) {
      best = std::abs(center - 1000.0);
      expected = f;
    }
  }

  // cross-check against the library's own center table
  FeatureConfig cfg;
  std::vector<double> centers = filterbank_center_frequencies(cfg, 16000);
  REQUIRE(centers.size() == 26);
  for (int f = 0; f < 26; ++f) CHECK(centers[f] == doctest::Approx(hz((f + 1) * delta)).epsilon(1e-12));

  FrameMatrix fbank = compute_mel_filterbank(sine_wave(1000.0, 1.0));
  for (int t = 0; t < fbank.num_frames(); ++t) {
    int argmax = 0;
    for (int f = 1; f < 26; ++f)
      if (fbank.frames(t, f) > fbank.frames(t, argmax)) argmax = f;
    CHECK(argmax == expected);
  }
}

TEST_CASE("compute_mel_filterbank is deterministic") {
  AudioBuffer audio = sine_wave(333.0, 0.35);
  FrameMatrix a = compute_mel_filterbank(audio);
  FrameMatrix b = compute_mel_filterbank(audio);
  CHECK(a.frames.data == b.frames.data);
}

TEST_CASE("filterbank outputs are finite for finite input") {
  auto rng = seeded_rng(21, "finite");
  AudioBuffer audio;
  audio.sample_rate = 16000;
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  audio.samples.resize(8000);
  for (double& s : audio.samples) s = unif(rng);
  CHECK(compute_mel_filterbank(audio).frames.all_finite());
}

TEST_CASE("stacking a single frame replicates it nine times") {
  auto rng = seeded_rng(22, "stack1");
  FrameMatrix one = frames_from(random_matrix(1, 26, &rng));
  FrameMatrix stacked = stack_frames(one, 4);
  CHECK(stacked.num_frames() == 1);
  CHECK(stacked.dim() == 234);
  for (int k = 0; k < 9; ++k)
    for (int c = 0; c < 26; ++c) CHECK(stacked.frames(0, k * 26 + c) == one.frames(0, c));
}

TEST_CASE("stacking shape arithmetic") {
  auto rng = seeded_rng(23, "stack-shape");
  FrameMatrix in = frames_from(random_matrix(10, 26, &rng));
  FrameMatrix stacked = stack_frames(in, 4);
  CHECK(stacked.num_frames() == 10);
  CHECK(stacked.dim() == 234);
}

TEST_CASE("an interior stacked row is the concatenation of its context window") {
  auto rng = seeded_rng(24, "stack-mid");
  FrameMatrix in = frames_from(random_matrix(10, 26, &rng));
  FrameMatrix stacked = stack_frames(in, 4);
  // row 5 spans input rows 1..9
  for (int k = 0; k < 9; ++k)
    for (int c = 0; c < 26; ++c) CHECK(stacked.frames(5, k * 26 + c) == in.frames(1 + k, c));
}

TEST_CASE("stacked boundaries replicate the edge frames") {
  auto rng = seeded_rng(25, "stack-edge");
  FrameMatrix in = frames_from(random_matrix(6, 3, &rng));
  FrameMatrix stacked = stack_frames(in, 2);
  // row 0: contexts -2,-1 clamp to row 0
  for (int c = 0; c < 3; ++c) {
    CHECK(stacked.frames(0, c) == in.frames(0, c));
    CHECK(stacked.frames(0, 3 + c) == in.frames(0, c));
    CHECK(stacked.frames(0, 6 + c) == in.frames(0, c));
  }
  // last row: contexts +1,+2 clamp to the last row
  for (int c = 0; c < 3; ++c) {
    CHECK(stacked.frames(5, 9 + c) == in.frames(5, c));
    CHECK(stacked.frames(5, 12 + c) == in.frames(5, c));
  }
}

TEST_CASE("decimation keeps every third row") {
  auto rng = seeded_rng(26, "decimate");
  FrameMatrix in = frames_from(random_matrix(10, 4, &rng));
  FrameMatrix out = decimate_frames(in, 3);
  CHECK(out.num_frames() == 4);
  CHECK(out.frame_period == doctest::Approx(0.030));
  for (int i = 0; i < 4; ++i)
    for (int c = 0; c < 4; ++c) CHECK(out.frames(i, c) == in.frames(3 * i, c));
}

TEST_CASE("decimation edge cases") {
  auto rng = seeded_rng(27, "decimate-edge");
  FrameMatrix three = frames_from(random_matrix(3, 2, &rng));
  CHECK(decimate_frames(three, 3).num_frames() == 1);
  FrameMatrix in = frames_from(random_matrix(7, 2, &rng));
  FrameMatrix same = decimate_frames(in, 1);
  CHECK(same.frames.data == in.frames.data);
  CHECK_THROWS_AS(decimate_frames(in, 0), Error);
}

TEST_CASE("stack then decimate yields ceil(T/3) rows of dim 234 for every T") {
  auto rng = seeded_rng(28, "pipeline-shape");
  for (int t_len = 1; t_len <= 40; ++t_len) {
    FrameMatrix in = frames_from(random_matrix(t_len, 26, &rng));
    FrameMatrix out = decimate_frames(stack_frames(in, 4), 3);
    CHECK(out.num_frames() == (t_len + 2) / 3);
    CHECK(out.dim() == 234);
  }
}

TEST_CASE("normalizer standardizes the training features") {
  auto rng = seeded_rng(29, "norm");
  Matrix a = random_matrix(40, 5, &rng, 3.0);
  Matrix b = random_matrix(25, 5, &rng, 3.0);
  for (double& v : a.data) v += 7.0;
  for (double& v : b.data) v += 7.0;
  FeatureNormalizer norm = estimate_normalizer({&a, &b});
  norm.apply(&a);
  norm.apply(&b);
  for (int c = 0; c < 5; ++c) {
    double sum = 0.0, sum_sq = 0.0;
    for (const Matrix* m : {&a, &b})
      for (int t = 0; t < m->rows; ++t) {
        sum += (*m)(t, c);
        sum_sq += (*m)(t, c) * (*m)(t, c);
      }
    const double n = a.rows + b.rows;
    CHECK(std::abs(sum / n) <= 1e-9);
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("normalizer rejects mismatched dims") {
  auto rng = seeded_rng(30, "norm-dim");
  Matrix train = random_matrix(10, 4, &rng);
  FeatureNormalizer norm = estimate_normalizer({&train});
  Matrix other = random_matrix(3, 5, &rng);
  CHECK_THROWS_WITH_AS(norm.apply(&other), doctest::Contains("dim mismatch"), Error);
}

TEST_SUITE_END();
