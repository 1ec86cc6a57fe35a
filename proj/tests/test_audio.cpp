// tests/test_audio.cpp

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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <random>

#include "oracles.hpp"
#include "stbeat/errors.hpp"
#include "test_util.hpp"

using stbeat::AudioBuffer;
using stbeat::Error;
using stbeat::ErrorCode;
using stbeat::GridConfig;
using testutil::TempDir;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kIoError;
}

}  // namespace

TEST_SUITE("audio") {

TEST_CASE("load_mono reads a 16-bit mono file and its header arithmetic") {
  TempDir dir;
  std::vector<short> samples(176400);  // 4 s at 44100 Hz
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = static_cast<short>((i % 200) * 100 - 10000);
  }
  testutil::write_wav_pcm16(dir.file("mono.wav"), 44100, {samples});

  AudioBuffer buf = stbeat::load_mono(dir.file("mono.wav"));
  CHECK(buf.size() == 176400);
  CHECK(buf.sample_rate == 44100.0);
  CHECK(buf.duration_seconds() == doctest::Approx(4.0));
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(buf.samples[i] == doctest::Approx(samples[i] / 32768.0).epsilon(1e-12));
  }
}

TEST_CASE("load_mono averages stereo channels") {
  TempDir dir;
  std::vector<short> left(1000, 16384);    // +0.5
  std::vector<short> right(1000, -16384);  // -0.5
  testutil::write_wav_pcm16(dir.file("st.wav"), 8000, {left, right});

  AudioBuffer buf = stbeat::load_mono(dir.file("st.wav"));
  REQUIRE(buf.size() == 1000);
  for (double v : buf.samples) CHECK(v == 0.0);
}

TEST_CASE("load_mono reads 32-bit float files") {
  TempDir dir;
  std::string bytes;
  auto push32 = [&](unsigned long v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto push16 = [&](unsigned v) {
    bytes.push_back(static_cast<char>(v & 0xff));
    bytes.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  auto pushf = [&](float f) {
    unsigned long u;
    static_assert(sizeof(float) == 4);
    std::memcpy(&u, &f, 4);
    push32(u);
  };
  bytes += "RIFF";
  push32(36 + 16);
  bytes += "WAVE";
  bytes += "fmt ";
  push32(16);
  push16(3);  // IEEE float
  push16(1);
  push32(22050);
  push32(22050 * 4);
  push16(4);
  push16(32);
  bytes += "data";
  push32(16);
  pushf(0.25f);
  pushf(-0.75f);
  pushf(2.0f);  // out of range, clamps to 1
  pushf(0.0f);
  testutil::write_file(dir.file("f32.wav"), bytes);

  AudioBuffer buf = stbeat::load_mono(dir.file("f32.wav"));
  REQUIRE(buf.size() == 4);
  CHECK(buf.samples[0] == doctest::Approx(0.25));
  CHECK(buf.samples[1] == doctest::Approx(-0.75));
  CHECK(buf.samples[2] == 1.0);
  CHECK(buf.samples[3] == 0.0);
  CHECK(buf.sample_rate == 22050.0);
}

TEST_CASE("load_mono error paths are distinct") {
  TempDir dir;

  CHECK(code_of([&] { stbeat::load_mono(dir.file("absent.wav")); }) ==
        ErrorCode::kFileUnreadable);

  testutil::write_file(dir.file("trunc.wav"), "RIFFxx");
  CHECK(code_of([&] { stbeat::load_mono(dir.file("trunc.wav")); }) ==
        ErrorCode::kFileUnreadable);

  // valid container, 8-bit PCM: unsupported encoding
  std::string bytes = testutil::read_file(dir.file("trunc.wav"));
  testutil::write_wav_pcm16(dir.file("u8.wav"), 8000, {{0, 0}});
  bytes = testutil::read_file(dir.file("u8.wav"));
  bytes[34] = 8;  // bits-per-sample field
  testutil::write_file(dir.file("u8.wav"), bytes);
  CHECK(code_of([&] { stbeat::load_mono(dir.file("u8.wav")); }) ==
        ErrorCode::kUnsupportedEncoding);

  testutil::write_wav_pcm16(dir.file("empty.wav"), 8000, {{}});
  CHECK(code_of([&] { stbeat::load_mono(dir.file("empty.wav")); }) ==
        ErrorCode::kEmptyAudio);
}

TEST_CASE("save_wav16 round-trips within one LSB") {
  TempDir dir;
  AudioBuffer buf;
  buf.sample_rate = 44100;
  buf.samples = testutil::random_signal(2048, 7);
  buf.samples[0] = 1.0;
  buf.samples[1] = -1.0;

  stbeat::save_wav16(dir.file("rt.wav"), buf);
  AudioBuffer back = stbeat::load_mono(dir.file("rt.wav"));
  REQUIRE(back.size() == buf.size());
  CHECK(back.sample_rate == 44100.0);
  for (std::size_t i = 0; i < buf.size(); ++i) {
    CHECK(std::abs(back.samples[i] - buf.samples[i]) <= 1.0 / 32768.0);
  }
}

TEST_CASE("downsample keeps every D-th sample") {
  AudioBuffer buf;
  buf.sample_rate = 10;
  buf.samples = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};

  AudioBuffer out = stbeat::downsample(buf, 2);
  CHECK(out.samples == std::vector<double>{0, 2, 4, 6, 8});
  CHECK(out.size() == 5);
  CHECK(out.sample_rate == 5.0);

  SUBCASE("factor equal to the length leaves one sample") {
    AudioBuffer one = stbeat::downsample(buf, 10);
    CHECK(one.samples == std::vector<double>{0});
  }
}

TEST_CASE("downsample output length and rate match the worked numbers") {
  // 4 s at 44100 Hz with D=40: 4410 samples at 1102.5 Hz
  AudioBuffer buf;
  buf.sample_rate = 44100;
  buf.samples.assign(176400, 0.5);
  AudioBuffer out = stbeat::downsample(buf, 40);
  CHECK(out.size() == 4410);
  CHECK(out.sample_rate == 1102.5);
}

TEST_CASE("downsample is a strict subsequence selection") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    AudioBuffer buf;
    buf.sample_rate = 1000;
    buf.samples = testutil::random_signal(1 + rng() % 200, rng());
    const int d = 2 * (1 + static_cast<int>(rng() % 8));
    AudioBuffer out = stbeat::downsample(buf, d);
    REQUIRE(out.size() == 1 + (buf.size() - 1) / static_cast<std::size_t>(d));
    for (std::size_t n = 0; n < out.size(); ++n) {
      CHECK(out.samples[n] == buf.samples[n * static_cast<std::size_t>(d)]);
    }
  }
}

TEST_CASE("downsample rejects bad factors") {
  AudioBuffer buf;
  buf.sample_rate = 100;
  buf.samples = {1, 2, 3};
  CHECK(code_of([&] { stbeat::downsample(buf, 3); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([&] { stbeat::downsample(buf, 0); }) == ErrorCode::kInvalidConfig);
  AudioBuffer empty;
  empty.sample_rate = 100;
  CHECK(code_of([&] { stbeat::downsample(empty, 2); }) == ErrorCode::kEmptyAudio);
}

TEST_CASE("fit_to_grid trims to the largest conforming prefix") {
  GridConfig grid{40, 441, 5};  // 2QK = 4410, required = 176400
  AudioBuffer buf;
  buf.sample_rate = 44100;
  buf.samples = testutil::random_signal(176400, 3);

  AudioBuffer fitted = stbeat::fit_to_grid(buf, grid);
  CHECK(fitted.size() == 176400);
  CHECK(fitted.samples == buf.samples);  // already conforming: unchanged

  // the enumeration oracle agrees that this is the largest valid length
  auto valid = oracle::valid_grid_lengths(buf.size(), 40, 441, 5);
  REQUIRE(!valid.empty());
  CHECK(valid.front() == 176361);
  CHECK(valid.back() == 176400);
  CHECK(fitted.size() == valid.back());

  AudioBuffer down = stbeat::downsample(fitted, 40);
  CHECK(down.size() == 4410);

  SUBCASE("longer input trims to the same grid") {
    buf.samples.resize(180000, 0.25);
    AudioBuffer f2 = stbeat::fit_to_grid(buf, grid);
    CHECK(f2.size() == 176400);
    CHECK(stbeat::downsample(f2, 40).size() == 4410);
  }
}

TEST_CASE("fit_to_grid rejects short input, naming the minimum") {
  GridConfig grid{4, 3, 2};  // required = 48
  AudioBuffer buf;
  buf.sample_rate = 100;
  buf.samples.assign(47, 0.0);  // 2QKD - 1
  try {
    stbeat::fit_to_grid(buf, grid);
    FAIL("expected insufficient-audio");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInsufficientAudio);
    CHECK(std::string(e.what()).find("48") != std::string::npos);
  }
}

TEST_CASE("fit_to_grid then downsample always yields M = 2QK") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    GridConfig grid;
    grid.downsample_factor = 2 * (1 + static_cast<int>(rng() % 6));
    grid.band_rows = 1 + static_cast<int>(rng() % 20);
    grid.band_count = 1 + static_cast<int>(rng() % 6);
    const std::size_t required = grid.required_samples();
    AudioBuffer buf;
    buf.sample_rate = 48000;
    buf.samples.assign(required + rng() % 500, 0.125);

    AudioBuffer down =
        stbeat::downsample(stbeat::fit_to_grid(buf, grid), grid.downsample_factor);
    CHECK(down.size() == 2ull * grid.band_count * grid.band_rows);
  }
}

TEST_CASE("grid config validation") {
  CHECK(code_of([] { GridConfig{3, 1, 1}.validate(); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { GridConfig{2, 0, 1}.validate(); }) == ErrorCode::kInvalidConfig);
  CHECK(code_of([] { GridConfig{2, 1, 0}.validate(); }) == ErrorCode::kInvalidConfig);
  CHECK_NOTHROW(GridConfig{2, 1, 1}.validate());
}

}  // TEST_SUITE
