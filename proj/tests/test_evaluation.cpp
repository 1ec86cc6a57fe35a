// tests/test_evaluation.cpp

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

#include "stbeat/evaluation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "stbeat/errors.hpp"
#include "test_util.hpp"

using stbeat::AudioBuffer;
using stbeat::Error;
using stbeat::ErrorCode;
using stbeat::EvalReport;
using stbeat::GroundTruthEntry;
using stbeat::PipelineConfig;
using testutil::TempDir;

namespace {

// fast config for 22050 Hz fixtures: D=20 keeps the 1102.5 Hz envelope rate
PipelineConfig fast_config() {
  PipelineConfig config;
  config.downsample_factor = 20;
  return config;
}

std::string synth_file(const TempDir& dir, const std::string& name, double bpm,
                       double seconds, unsigned seed) {
  AudioBuffer buf =
      stbeat::synth_click_track(bpm, seconds, 60.0, 22050.0, 0.05, seed);
  const std::string path = dir.file(name);
  stbeat::save_wav16(path, buf);
  return path;
}

}  // namespace

TEST_SUITE("evaluation") {

TEST_CASE("accuracy1 truth table with 4% boundaries") {
  CHECK(stbeat::accuracy1(100.0, 100.0));
  CHECK(stbeat::accuracy1(104.0, 100.0));
  CHECK_FALSE(stbeat::accuracy1(104.1, 100.0));
  CHECK(stbeat::accuracy1(96.0, 100.0));
  CHECK_FALSE(stbeat::accuracy1(95.9, 100.0));
  CHECK_FALSE(stbeat::accuracy1(200.0, 100.0));  // octave error misses
}

TEST_CASE("accuracy2 admits the harmonic multipliers") {
  CHECK(stbeat::accuracy2(200.0, 100.0));   // double
  CHECK(stbeat::accuracy2(50.0, 100.0));    // half
  CHECK(stbeat::accuracy2(300.0, 100.0));   // three times
  CHECK(stbeat::accuracy2(33.4, 100.0));    // within 4% of one third
  CHECK_FALSE(stbeat::accuracy2(150.0, 100.0));  // off the lattice

  SUBCASE("boundaries at each multiplier") {
    CHECK(stbeat::accuracy2(208.0, 100.0));       // 2t * 1.04
    CHECK_FALSE(stbeat::accuracy2(208.3, 100.0));
    CHECK(stbeat::accuracy2(48.0, 100.0));        // t/2 * 0.96
    CHECK_FALSE(stbeat::accuracy2(47.9, 100.0));
    CHECK(stbeat::accuracy2(312.0, 100.0));       // 3t * 1.04
    CHECK_FALSE(stbeat::accuracy2(312.5, 100.0));
    CHECK(stbeat::accuracy2(32.1, 100.0));  // just inside t/3 * 0.96
    CHECK_FALSE(stbeat::accuracy2(31.9, 100.0));
  }
}

TEST_CASE("accuracy1 implies accuracy2") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const double truth = 30.0 + (rng() % 27000) / 100.0;
    const double estimate = 20.0 + (rng() % 40000) / 100.0;
    if (stbeat::accuracy1(estimate, truth)) {
      CHECK(stbeat::accuracy2(estimate, truth));
    }
  }
}

TEST_CASE("both metrics are invariant under common rescaling") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const double truth = 40.0 + (rng() % 20000) / 100.0;
    const double estimate = truth * (0.9 + (rng() % 200) / 1000.0);
    for (double alpha : {0.5, 2.0, 4.0}) {  // exact binary scalings
      CHECK(stbeat::accuracy1(estimate, truth) ==
            stbeat::accuracy1(alpha * estimate, alpha * truth));
      CHECK(stbeat::accuracy2(estimate, truth) ==
            stbeat::accuracy2(alpha * estimate, alpha * truth));
    }
  }
}

TEST_CASE("metrics reject nonpositive tempi") {
  CHECK_THROWS_AS(stbeat::accuracy1(0.0, 100.0), Error);
  CHECK_THROWS_AS(stbeat::accuracy1(100.0, -1.0), Error);
  CHECK_THROWS_AS(stbeat::accuracy2(-5.0, 100.0), Error);
}

TEST_CASE("synth produces the expected burst layout") {
  AudioBuffer buf = stbeat::synth_click_track(120, 20.0, 60.0, 44100.0, 0.0, 1);
  CHECK(buf.size() == 882000);  // 20 s * 44100
  CHECK(buf.sample_rate == 44100.0);

  // 40 bursts: onsets at k * 0.5 s for k = 0..39, the first at t = 0
  const std::size_t burst_len = 2205;
  const std::size_t period = 22050;
  int bursts = 0;
  for (std::size_t k = 0; k * period < buf.size(); ++k) {
    const std::size_t mid = k * period + burst_len / 2;
    if (mid < buf.size() && buf.samples[mid] != 0.0) ++bursts;
  }
  CHECK(bursts == 40);

  SUBCASE("zero noise leaves exact silence between bursts") {
    for (std::size_t k = 0; k + 1 < 40; ++k) {
      const std::size_t gap_start = k * period + burst_len + 10;
      const std::size_t gap_end = (k + 1) * period - 10;
      for (std::size_t i = gap_start; i < gap_end; i += 997) {
        CHECK(buf.samples[i] == 0.0);
      }
    }
  }
}

TEST_CASE("synth is deterministic per seed, byte for byte on disk") {
  TempDir dir;
  AudioBuffer a = stbeat::synth_click_track(97, 3.0, 60.0, 22050.0, 0.08, 42);
  AudioBuffer b = stbeat::synth_click_track(97, 3.0, 60.0, 22050.0, 0.08, 42);
  CHECK(a.samples == b.samples);
  stbeat::save_wav16(dir.file("a.wav"), a);
  stbeat::save_wav16(dir.file("b.wav"), b);
  CHECK(testutil::read_file(dir.file("a.wav")) ==
        testutil::read_file(dir.file("b.wav")));

  AudioBuffer c = stbeat::synth_click_track(97, 3.0, 60.0, 22050.0, 0.08, 43);
  CHECK(a.samples != c.samples);
}

TEST_CASE("synth validates its parameter ranges") {
  auto code_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kIoError;
  };
  CHECK(code_of([] { stbeat::synth_click_track(29, 5, 60, 44100, 0, 0); }) ==
        ErrorCode::kInvalidConfig);
  CHECK(code_of([] { stbeat::synth_click_track(301, 5, 60, 44100, 0, 0); }) ==
        ErrorCode::kInvalidConfig);
  CHECK(code_of([] { stbeat::synth_click_track(120, 5, 31, 44100, 0, 0); }) ==
        ErrorCode::kInvalidConfig);
  CHECK(code_of([] { stbeat::synth_click_track(120, 5, 600, 44100, 0, 0); }) ==
        ErrorCode::kInvalidConfig);
  CHECK(code_of([] { stbeat::synth_click_track(120, -1, 60, 44100, 0, 0); }) ==
        ErrorCode::kInvalidConfig);
  CHECK(code_of([] { stbeat::synth_click_track(120, 5, 60, 44100, 1.5, 0); }) ==
        ErrorCode::kInvalidConfig);
}

TEST_CASE("the pipeline recovers the tempo of a synthetic 88 BPM excerpt") {
  TempDir dir;
  const std::string path = synth_file(dir, "classic.wav", 88, 10.0, 5);
  AudioBuffer mono = stbeat::load_mono(path);
  stbeat::TempoEstimate est = stbeat::analyze(mono, fast_config());
  CHECK(std::abs(est.bpm - 88.0) <= 0.04 * 88.0);
}

TEST_CASE("evaluate scores exact estimates at 100 percent") {
  TempDir dir;
  std::vector<GroundTruthEntry> entries = {
      {synth_file(dir, "t120.wav", 120, 8.0, 1), 120.0},
      {synth_file(dir, "t100.wav", 100, 8.0, 2), 100.0},
  };
  EvalReport report = stbeat::evaluate(entries, fast_config());
  CHECK(report.total == 2);
  CHECK(report.estimated == 2);
  REQUIRE(report.accuracy1_pct.has_value());
  CHECK(*report.accuracy1_pct == 100.0);
  CHECK(*report.accuracy2_pct == 100.0);
}

TEST_CASE("failures count as misses in both accuracies") {
  TempDir dir;
  std::vector<GroundTruthEntry> entries = {
      {synth_file(dir, "ok.wav", 120, 8.0, 3), 120.0},
      {dir.file("missing.wav"), 100.0},
  };
  EvalReport report = stbeat::evaluate(entries, fast_config());
  CHECK(report.total == 2);
  CHECK(report.estimated == 1);
  CHECK(*report.accuracy1_pct <= 50.0);
  CHECK(*report.accuracy2_pct <= 50.0);
  REQUIRE(report.items.size() == 2);
  CHECK(report.items[1].failure_reason != "");

  const std::string json = stbeat::report_to_json(report);
  CHECK(json.find("\"failures\"") != std::string::npos);
  CHECK(json.find("missing.wav") != std::string::npos);
}

TEST_CASE("a ten-track synthetic dataset reaches at least 90% accuracy1") {
  TempDir dir;
  const double tempi[] = {70, 80, 88, 95, 100, 110, 120, 132, 140, 160};
  std::vector<GroundTruthEntry> entries;
  for (int i = 0; i < 10; ++i) {
    entries.push_back({synth_file(dir, "track" + std::to_string(i) + ".wav",
                                  tempi[i], 8.0, 100 + i),
                       tempi[i]});
  }
  EvalReport report = stbeat::evaluate(entries, fast_config());
  REQUIRE(report.accuracy1_pct.has_value());
  CHECK(*report.accuracy1_pct >= 90.0);
}

TEST_CASE("evaluate is deterministic") {
  TempDir dir;
  std::vector<GroundTruthEntry> entries = {
      {synth_file(dir, "d1.wav", 132, 6.0, 9), 132.0},
      {synth_file(dir, "d2.wav", 76, 6.0, 10), 76.0},
  };
  EvalReport a = stbeat::evaluate(entries, fast_config());
  EvalReport b = stbeat::evaluate(entries, fast_config());
  CHECK(stbeat::report_to_json(a) == stbeat::report_to_json(b));
}

TEST_CASE("empty datasets report null accuracies") {
  EvalReport report = stbeat::evaluate({}, fast_config());
  CHECK(report.total == 0);
  CHECK_FALSE(report.accuracy1_pct.has_value());
  const std::string json = stbeat::report_to_json(report);
  CHECK(json.find("\"accuracy1\": null") != std::string::npos);
}

TEST_CASE("csv manifests parse with or without a header") {
  TempDir dir;
  testutil::write_file(dir.file("with_header.csv"),
                       "path,bpm\r\na.wav,120\r\nsub/b.wav,88.5\r\n");
  auto entries = stbeat::read_manifest_csv(dir.file("with_header.csv"));
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].audio_path == dir.file("a.wav"));
  CHECK(entries[0].tempo == 120.0);
  CHECK(entries[1].audio_path == (dir.path() / "sub/b.wav").string());
  CHECK(entries[1].tempo == 88.5);

  testutil::write_file(dir.file("bare.csv"), "a.wav,120\nb.wav,60\n");
  CHECK(stbeat::read_manifest_csv(dir.file("bare.csv")).size() == 2);

  SUBCASE("duplicate paths are allowed and scored independently") {
    testutil::write_file(dir.file("dup.csv"), "a.wav,120\na.wav,120\n");
    CHECK(stbeat::read_manifest_csv(dir.file("dup.csv")).size() == 2);
  }
  SUBCASE("absolute paths pass through untouched") {
    testutil::write_file(dir.file("abs.csv"), "/tmp/x.wav,99\n");
    CHECK(stbeat::read_manifest_csv(dir.file("abs.csv"))[0].audio_path ==
          "/tmp/x.wav");
  }
  SUBCASE("a bad tempo after the first line is an error") {
    testutil::write_file(dir.file("bad.csv"), "a.wav,120\nb.wav,fast\n");
    CHECK_THROWS_AS(stbeat::read_manifest_csv(dir.file("bad.csv")), Error);
  }
  SUBCASE("a missing manifest is unreadable") {
    CHECK_THROWS_AS(stbeat::read_manifest_csv(dir.file("nope.csv")), Error);
  }
}

TEST_CASE("ballroom manifests read sibling .bpm annotations") {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "Waltz");
  testutil::write_file(dir.file("Waltz/one.wav"), "stub");
  testutil::write_file(dir.file("Waltz/one.bpm"), "87\n");
  testutil::write_file(dir.file("Waltz/two.wav"), "stub");
  testutil::write_file(dir.file("Waltz/two.bpm"), "176\n");
  testutil::write_file(dir.file("list.txt"),
                       "# ballroom excerpt list\nWaltz/one.wav\nWaltz/two.wav\n");

  auto entries = stbeat::read_ballroom_manifest(dir.file("list.txt"));
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].audio_path == dir.file("Waltz/one.wav"));
  CHECK(entries[0].tempo == 87.0);
  CHECK(entries[1].tempo == 176.0);

  SUBCASE("a missing annotation is an error") {
    testutil::write_file(dir.file("list2.txt"), "Waltz/three.wav\n");
    CHECK_THROWS_AS(stbeat::read_ballroom_manifest(dir.file("list2.txt")),
                    Error);
  }
}

TEST_CASE("per-item csv lists every entry") {
  EvalReport report;
  report.total = 2;
  report.estimated = 1;
  report.items.push_back({"a.wav", 120.0, true, 118.0, true, true, ""});
  report.items.push_back({"b.wav", 90.0, false, 0.0, false, false,
                          "isolation_failure"});
  std::ostringstream out;
  stbeat::write_report_csv(out, report);
  const std::string text = out.str();
  CHECK(text.find("a.wav,120,118,1,1,") != std::string::npos);
  CHECK(text.find("b.wav,90,,0,0,isolation_failure") != std::string::npos);
}

}  // TEST_SUITE
