// src/audio.cpp

// Copyright 2026  The stbeat authors

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

#include "stbeat/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "stbeat/errors.hpp"

namespace stbeat {

namespace {

// RIFF/WAVE is little-endian on disk; decode explicitly so the reader does
// not depend on host byte order.
std::uint16_t read_u16_le(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u16_le(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
  out.write(b, 2);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  out.write(b, 4);
}

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

struct WavFormat {
  std::uint16_t format_tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits_per_sample = 0;
};

[[noreturn]] void fail_decode(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kFileUnreadable,
              "cannot decode '" + path + "': " + why);
}

}  // namespace

void GridConfig::validate() const {
  if (downsample_factor < 2 || downsample_factor % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "downsampling factor must be an even integer >= 2 (got " +
                    std::to_string(downsample_factor) + ")");
  }
  if (band_rows < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband row count must be positive (got " +
                    std::to_string(band_rows) + ")");
  }
  if (band_count < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband count must be positive (got " +
                    std::to_string(band_count) + ")");
  }
}

std::size_t GridConfig::required_samples() const {
  return 2ull * static_cast<std::size_t>(band_count) *
         static_cast<std::size_t>(band_rows) *
         static_cast<std::size_t>(downsample_factor);
}

AudioBuffer load_mono(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable, "cannot open '" + path + "'");
  }
  std::vector<unsigned char> bytes{std::istreambuf_iterator<char>(in),
                                   std::istreambuf_iterator<char>()};
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    fail_decode(path, "not a RIFF/WAVE file");
  }

  WavFormat fmt;
  bool have_fmt = false;
  std::size_t data_offset = 0;
  std::size_t data_size = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    std::uint32_t chunk_size = read_u32_le(hdr + 4);
    std::size_t body = pos + 8;
    if (body + chunk_size > bytes.size()) {
      fail_decode(path, "truncated chunk");
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (chunk_size < 16) fail_decode(path, "short fmt chunk");
      fmt.format_tag = read_u16_le(bytes.data() + body);
      fmt.channels = read_u16_le(bytes.data() + body + 2);
      fmt.sample_rate = read_u32_le(bytes.data() + body + 4);
      fmt.bits_per_sample = read_u16_le(bytes.data() + body + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data_offset = body;
      data_size = chunk_size;
      have_data = true;
    }
    pos = body + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }

  if (!have_fmt || !have_data) fail_decode(path, "missing fmt or data chunk");
  if (fmt.sample_rate == 0) fail_decode(path, "zero sample rate");

  const bool pcm16 = fmt.format_tag == kFormatPcm && fmt.bits_per_sample == 16;
  const bool float32 =
      fmt.format_tag == kFormatIeeeFloat && fmt.bits_per_sample == 32;
  if (!pcm16 && !float32) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "unsupported WAV encoding in '" + path + "': format tag " +
                    std::to_string(fmt.format_tag) + ", " +
                    std::to_string(fmt.bits_per_sample) + " bits per sample");
  }
  if (fmt.channels < 1 || fmt.channels > 2) {
    throw Error(ErrorCode::kUnsupportedEncoding,
                "unsupported channel count in '" + path + "': " +
                    std::to_string(fmt.channels));
  }

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_size = bytes_per_sample * fmt.channels;
  const std::size_t frames = data_size / frame_size;
  if (frames == 0) {
    throw Error(ErrorCode::kEmptyAudio, "'" + path + "' holds no audio frames");
  }

  AudioBuffer buf;
  buf.sample_rate = static_cast<double>(fmt.sample_rate);
  buf.samples.resize(frames);
  const unsigned char* data = bytes.data() + data_offset;
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < fmt.channels; ++c) {
      const unsigned char* s = data + (i * fmt.channels + c) * bytes_per_sample;
      if (pcm16) {
        std::int16_t v = static_cast<std::int16_t>(read_u16_le(s));
        acc += static_cast<double>(v) / 32768.0;
      } else {
        std::uint32_t u = read_u32_le(s);
        float f;
        std::memcpy(&f, &u, sizeof f);
        acc += std::clamp(static_cast<double>(f), -1.0, 1.0);
      }
    }
    buf.samples[i] = acc / fmt.channels;
  }
  return buf;
}

void save_wav16(const std::string& path, const AudioBuffer& buf) {
  if (buf.samples.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "refusing to write an empty buffer");
  }
  double rate = buf.sample_rate;
  if (!(rate > 0) || rate != std::floor(rate)) {
    throw Error(ErrorCode::kInvalidConfig,
                "WAV output needs a positive integral sample rate (got " +
                    std::to_string(rate) + ")");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error(ErrorCode::kIoError, "cannot write '" + path + "'");
  }
  const std::uint32_t n = static_cast<std::uint32_t>(buf.samples.size());
  const std::uint32_t data_bytes = n * 2;
  out.write("RIFF", 4);
  write_u32_le(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  write_u32_le(out, 16);
  write_u16_le(out, kFormatPcm);
  write_u16_le(out, 1);  // mono
  write_u32_le(out, static_cast<std::uint32_t>(rate));
  write_u32_le(out, static_cast<std::uint32_t>(rate) * 2);  // byte rate
  write_u16_le(out, 2);                                     // block align
  write_u16_le(out, 16);
  out.write("data", 4);
  write_u32_le(out, data_bytes);
  for (double x : buf.samples) {
    double scaled = std::round(std::clamp(x, -1.0, 1.0) * 32768.0);
    auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    write_u16_le(out, static_cast<std::uint16_t>(q));
  }
  if (!out) {
    throw Error(ErrorCode::kIoError, "write failed on '" + path + "'");
  }
}

AudioBuffer downsample(const AudioBuffer& buf, int factor) {
  if (factor < 2 || factor % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "downsampling factor must be an even integer >= 2 (got " +
                    std::to_string(factor) + ")");
  }
  if (buf.samples.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "cannot downsample an empty buffer");
  }
  const std::size_t d = static_cast<std::size_t>(factor);
  const std::size_t out_len = 1 + (buf.samples.size() - 1) / d;
  AudioBuffer out;
  out.sample_rate = buf.sample_rate / factor;
  out.samples.resize(out_len);
  for (std::size_t n = 0; n < out_len; ++n) {
    out.samples[n] = buf.samples[n * d];
  }
  return out;
}

AudioBuffer fit_to_grid(const AudioBuffer& buf, const GridConfig& grid) {
  grid.validate();
  const std::size_t required = grid.required_samples();
  if (buf.samples.size() < required) {
    std::ostringstream msg;
    msg << "insufficient audio: need at least " << required << " samples ("
        << "2*Q*K*D = 2*" << grid.band_count << "*" << grid.band_rows << "*"
        << grid.downsample_factor << "), got " << buf.samples.size();
    throw Error(ErrorCode::kInsufficientAudio, msg.str());
  }
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.assign(buf.samples.begin(),
                     buf.samples.begin() + static_cast<std::ptrdiff_t>(required));
  return out;
}

}  // namespace stbeat
