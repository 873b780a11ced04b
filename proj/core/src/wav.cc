// ctckit/wav.cc

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

#include "ctckit/wav.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ctckit/error.h"

namespace ctckit {

namespace {

std::uint32_t read_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  require(bool(in), "read_wav: unexpected end of file in ", path);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint16_t read_u16(std::istream& in, const std::string& path) {
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  require(bool(in), "read_wav: unexpected end of file in ", path);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

void write_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<char*>(b), 4);
}

void write_u16(std::ostream& out, std::uint16_t v) {
  unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
  out.write(reinterpret_cast<char*>(b), 2);
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), "read_wav: cannot open ", path);

  char tag[4];
  in.read(tag, 4);
  require(bool(in) && std::memcmp(tag, "RIFF", 4) == 0, "read_wav: not a RIFF file: ", path);
  read_u32(in, path);  // total size, unused
  in.read(tag, 4);
  require(bool(in) && std::memcmp(tag, "WAVE", 4) == 0, "read_wav: not a WAVE file: ", path);

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0, format = 0;
  std::uint32_t rate = 0;
  AudioBuffer audio;

  // Walk chunks; RIFF allows extra chunks (LIST etc.) before and after data.
  while (in.peek() != EOF) {
    in.read(tag, 4);
    if (!in) break;
    std::uint32_t chunk_size = read_u32(in, path);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      require(chunk_size >= 16, "read_wav: malformed fmt chunk in ", path);
      format = read_u16(in, path);
      channels = read_u16(in, path);
      rate = read_u32(in, path);
      read_u32(in, path);  // byte rate
      read_u16(in, path);  // block align
      bits = read_u16(in, path);
      in.seekg(chunk_size - 16, std::ios::cur);
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      require(have_fmt, "read_wav: data chunk before fmt in ", path);
      require(format == 1, "read_wav: only PCM (format 1) supported, got format ", format, " in ", path);
      require(channels == 1, "read_wav: only mono supported, got ", channels, " channels in ", path);
      require(bits == 16, "read_wav: only 16-bit samples supported, got ", bits, " in ", path);
      std::size_t n = chunk_size / 2;
      std::vector<std::int16_t> raw(n);
      in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * 2));
      require(bool(in), "read_wav: truncated data chunk in ", path);
      audio.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i) audio.samples[i] = raw[i] / 32768.0;
      audio.sample_rate = static_cast<int>(rate);
      return audio;
    } else {
      // skip unknown chunk (chunks are word aligned)
      in.seekg(chunk_size + (chunk_size & 1), std::ios::cur);
    }
  }
  raise("read_wav: no data chunk found in ", path);
}

void write_wav(const AudioBuffer& audio, const std::string& path) {
  require(audio.sample_rate > 0, "write_wav: sample_rate must be positive");
  std::ofstream out(path, std::ios::binary);
  require(bool(out), "write_wav: cannot open ", path, " for writing");

  const std::uint32_t data_bytes = static_cast<std::uint32_t>(audio.samples.size() * 2);
  out.write("RIFF", 4);
  write_u32(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, 1);  // mono
  write_u32(out, static_cast<std::uint32_t>(audio.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(audio.sample_rate * 2));
  write_u16(out, 2);   // block align
  write_u16(out, 16);  // bits
  out.write("data", 4);
  write_u32(out, data_bytes);
  for (double s : audio.samples) {
    double clamped = std::clamp(s, -1.0, 1.0);
    auto v = static_cast<std::int16_t>(std::lrint(clamped * 32767.0));
    write_u16(out, static_cast<std::uint16_t>(v));
  }
  require(bool(out), "write_wav: write failed for ", path);
}

}  // namespace ctckit
