// ctckit/wav.h

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

#ifndef CTCKIT_WAV_H_
#define CTCKIT_WAV_H_

#include <string>
#include <vector>

namespace ctckit {

// Mono PCM audio with samples scaled to [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;

  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

// Reads a 16-bit PCM mono RIFF WAV file.  Stereo, non-PCM and non-16-bit
// files are rejected; the sample rate is taken from the header.
AudioBuffer read_wav(const std::string& path);

// Writes samples (clamped to [-1, 1]) as 16-bit PCM mono.
void write_wav(const AudioBuffer& audio, const std::string& path);

}  // namespace ctckit

#endif  // CTCKIT_WAV_H_
