// Copyright (c) 2026 The lff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lff/wav.h"

#include <cstdint>
#include <fstream>
#include <vector>

namespace lff {

namespace {

uint32_t ReadChunkId(std::istream& is) {
  char id[4];
  is.read(id, 4);
  if (!is) throw FormatError("truncated RIFF chunk id");
  return static_cast<uint32_t>(static_cast<unsigned char>(id[0])) |
         (static_cast<uint32_t>(static_cast<unsigned char>(id[1])) << 8) |
         (static_cast<uint32_t>(static_cast<unsigned char>(id[2])) << 16) |
         (static_cast<uint32_t>(static_cast<unsigned char>(id[3])) << 24);
}

constexpr uint32_t FourCc(char a, char b, char c, char d) {
  return static_cast<uint32_t>(static_cast<unsigned char>(a)) |
         (static_cast<uint32_t>(static_cast<unsigned char>(b)) << 8) |
         (static_cast<uint32_t>(static_cast<unsigned char>(c)) << 16) |
         (static_cast<uint32_t>(static_cast<unsigned char>(d)) << 24);
}

uint16_t ReadU16Le(std::istream& is) {
  unsigned char b[2];
  is.read(reinterpret_cast<char*>(b), 2);
  if (!is) throw FormatError("truncated WAV header");
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

}  // namespace

AudioBuffer LoadWav(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open WAV file: " + path);

  if (ReadChunkId(is) != FourCc('R', 'I', 'F', 'F'))
    throw FormatError("missing RIFF tag: " + path);
  ReadU32Le(is);  // container size, unused
  if (ReadChunkId(is) != FourCc('W', 'A', 'V', 'E'))
    throw FormatError("missing WAVE tag: " + path);

  bool have_fmt = false;
  uint16_t format_tag = 0, num_channels = 0, bits_per_sample = 0;
  uint32_t sample_rate = 0;
  std::vector<int16_t> interleaved;
  bool have_data = false;

  while (is.peek() != EOF) {
    uint32_t chunk_id = ReadChunkId(is);
    uint32_t chunk_size = ReadU32Le(is);
    if (chunk_id == FourCc('f', 'm', 't', ' ')) {
      if (chunk_size < 16) throw FormatError("fmt chunk too small");
      format_tag = ReadU16Le(is);
      num_channels = ReadU16Le(is);
      sample_rate = ReadU32Le(is);
      ReadU32Le(is);  // byte rate
      ReadU16Le(is);  // block align
      bits_per_sample = ReadU16Le(is);
      is.ignore(chunk_size - 16);
      have_fmt = true;
    } else if (chunk_id == FourCc('d', 'a', 't', 'a')) {
      if (!have_fmt) throw FormatError("data chunk before fmt chunk");
      if (format_tag != 1)
        throw UnsupportedFormatError("only PCM WAV is supported");
      if (bits_per_sample != 16)
        throw UnsupportedFormatError("only 16-bit PCM WAV is supported");
      if (num_channels == 0) throw FormatError("fmt chunk declares 0 channels");
      uint32_t n = chunk_size / 2;
      interleaved.resize(n);
      for (uint32_t i = 0; i < n; ++i) {
        uint16_t raw = ReadU16Le(is);
        interleaved[i] = static_cast<int16_t>(raw);
      }
      have_data = true;
      if (chunk_size % 2 != 0) is.ignore(1);
    } else {
      // Skip unknown chunks; chunks are word-aligned.
      is.ignore(chunk_size + (chunk_size % 2));
      if (!is) throw FormatError("truncated chunk: " + path);
    }
  }

  if (!have_fmt || !have_data) throw FormatError("missing fmt or data chunk");
  if (sample_rate == 0) throw FormatError("sample rate is 0");
  if (interleaved.empty()) throw EmptyInputError("WAV data chunk is empty");

  uint32_t frames = static_cast<uint32_t>(interleaved.size()) / num_channels;
  if (frames == 0) throw EmptyInputError("WAV data holds no complete frame");

  AudioBuffer out;
  out.sample_rate = static_cast<int>(sample_rate);
  out.samples.resize(frames);
  for (uint32_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (uint16_t c = 0; c < num_channels; ++c) {
      acc += static_cast<double>(interleaved[static_cast<size_t>(f) * num_channels + c]);
    }
    out.samples[f] = acc / num_channels / 32768.0;
  }
  return out;
}

}  // namespace lff
