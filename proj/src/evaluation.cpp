// src/evaluation.cpp

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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "stbeat/errors.hpp"

namespace stbeat {

namespace {

namespace fs = std::filesystem;

void check_positive_tempo(double bpm, const char* which) {
  if (!(bpm > 0.0)) {
    throw Error(ErrorCode::kInvalidInput,
                std::string(which) + " tempo must be positive");
  }
}

std::string resolve_relative(const fs::path& base_dir, const std::string& raw) {
  fs::path p(raw);
  if (p.is_absolute()) return p.string();
  return (base_dir / p).string();
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

bool parse_positive_double(const std::string& text, double* out) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size() || !(v > 0.0) || !std::isfinite(v)) return false;
    *out = v;
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

bool accuracy1(double estimate_bpm, double truth_bpm) {
  check_positive_tempo(estimate_bpm, "estimated");
  check_positive_tempo(truth_bpm, "ground-truth");
  return std::abs(estimate_bpm - truth_bpm) <= 0.04 * truth_bpm;
}

bool accuracy2(double estimate_bpm, double truth_bpm) {
  check_positive_tempo(estimate_bpm, "estimated");
  check_positive_tempo(truth_bpm, "ground-truth");
  static constexpr double kMultipliers[] = {1.0 / 3.0, 0.5, 1.0, 2.0, 3.0};
  for (double m : kMultipliers) {
    if (std::abs(estimate_bpm - m * truth_bpm) <= 0.04 * (m * truth_bpm)) {
      return true;
    }
  }
  return false;
}

EvalReport evaluate(const std::vector<GroundTruthEntry>& entries,
                    const PipelineConfig& config) {
  config.validate();
  EvalReport report;
  report.total = entries.size();

  std::size_t acc1 = 0, acc2 = 0;
  for (const GroundTruthEntry& entry : entries) {
    EvalItem item;
    item.path = entry.audio_path;
    item.truth = entry.tempo;
    try {
      check_positive_tempo(entry.tempo, "ground-truth");
      AudioBuffer mono = load_mono(entry.audio_path);
      TempoEstimate est = analyze(mono, config);
      item.estimated = true;
      item.estimate = est.bpm;
      item.accuracy1_pass = accuracy1(est.bpm, entry.tempo);
      item.accuracy2_pass = accuracy2(est.bpm, entry.tempo);
      ++report.estimated;
      if (item.accuracy1_pass) ++acc1;
      if (item.accuracy2_pass) ++acc2;
    } catch (const IsolationFailure&) {
      item.failure_reason = "isolation_failure";
    } catch (const Error& e) {
      item.failure_reason = e.what();
    }
    report.items.push_back(std::move(item));
  }
  if (report.total > 0) {
    report.accuracy1_pct = 100.0 * static_cast<double>(acc1) /
                           static_cast<double>(report.total);
    report.accuracy2_pct = 100.0 * static_cast<double>(acc2) /
                           static_cast<double>(report.total);
  }
  return report;
}

std::vector<GroundTruthEntry> read_manifest_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable,
                "cannot open manifest '" + path + "'");
  }
  const fs::path base_dir = fs::path(path).parent_path();
  std::vector<GroundTruthEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (trim(line).empty()) continue;
    const auto comma = line.find_last_of(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kInvalidInput,
                  "manifest line " + std::to_string(line_no) +
                      " is not 'path,bpm'");
    }
    const std::string file = trim(line.substr(0, comma));
    const std::string bpm_text = trim(line.substr(comma + 1));
    double bpm = 0.0;
    if (!parse_positive_double(bpm_text, &bpm)) {
      if (line_no == 1) continue;  // optional header row
      throw Error(ErrorCode::kInvalidInput,
                  "manifest line " + std::to_string(line_no) +
                      ": '" + bpm_text + "' is not a positive tempo");
    }
    if (file.empty()) {
      throw Error(ErrorCode::kInvalidInput,
                  "manifest line " + std::to_string(line_no) +
                      " has an empty path");
    }
    entries.push_back({resolve_relative(base_dir, file), bpm});
  }
  return entries;
}

std::vector<GroundTruthEntry> read_ballroom_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kFileUnreadable,
                "cannot open manifest '" + path + "'");
  }
  const fs::path base_dir = fs::path(path).parent_path();
  std::vector<GroundTruthEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(strip_cr(line));
    if (line.empty() || line[0] == '#') continue;
    const std::string audio = resolve_relative(base_dir, line);
    fs::path bpm_path = fs::path(audio);
    bpm_path.replace_extension(".bpm");
    std::ifstream bpm_in(bpm_path);
    if (!bpm_in) {
      throw Error(ErrorCode::kFileUnreadable,
                  "missing tempo annotation '" + bpm_path.string() + "'");
    }
    std::string token;
    bpm_in >> token;
    double bpm = 0.0;
    if (!parse_positive_double(token, &bpm)) {
      throw Error(ErrorCode::kInvalidInput,
                  "'" + bpm_path.string() + "' does not hold a positive tempo");
    }
    entries.push_back({audio, bpm});
  }
  return entries;
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["total"] = report.total;
  j["estimated"] = report.estimated;
  j["accuracy1"] =
      report.accuracy1_pct ? nlohmann::json(*report.accuracy1_pct)
                           : nlohmann::json(nullptr);
  j["accuracy2"] =
      report.accuracy2_pct ? nlohmann::json(*report.accuracy2_pct)
                           : nlohmann::json(nullptr);
  nlohmann::json failures = nlohmann::json::array();
  nlohmann::json per_item = nlohmann::json::array();
  for (const EvalItem& item : report.items) {
    if (!item.estimated) {
      failures.push_back({{"path", item.path}, {"reason", item.failure_reason}});
    }
    nlohmann::json row;
    row["path"] = item.path;
    row["truth"] = item.truth;
    row["estimate"] =
        item.estimated ? nlohmann::json(item.estimate) : nlohmann::json(nullptr);
    row["acc1_pass"] = item.accuracy1_pass;
    row["acc2_pass"] = item.accuracy2_pass;
    per_item.push_back(std::move(row));
  }
  j["failures"] = std::move(failures);
  j["per_item"] = std::move(per_item);
  return j.dump(2);
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
  out << "path,truth,estimate,acc1_pass,acc2_pass,failure_reason\n";
  char buf[64];
  for (const EvalItem& item : report.items) {
    out << item.path << ',';
    std::snprintf(buf, sizeof buf, "%.17g", item.truth);
    out << buf << ',';
    if (item.estimated) {
      std::snprintf(buf, sizeof buf, "%.17g", item.estimate);
      out << buf;
    }
    out << ',' << (item.accuracy1_pass ? 1 : 0) << ','
        << (item.accuracy2_pass ? 1 : 0) << ',' << item.failure_reason << '\n';
  }
}

AudioBuffer synth_click_track(double bpm, double duration_seconds,
                              double carrier_hz, double sample_rate,
                              double noise_amp, std::uint32_t seed) {
  if (!(bpm >= 30.0) || !(bpm <= 300.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "click-track tempo must lie in [30, 300] BPM (got " +
                    std::to_string(bpm) + ")");
  }
  if (!(carrier_hz >= 32.0) || !(carrier_hz <= 512.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "carrier frequency must lie in [32, 512] Hz (got " +
                    std::to_string(carrier_hz) + ")");
  }
  if (!(duration_seconds > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "duration must be positive");
  }
  if (!(sample_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig, "sample rate must be positive");
  }
  if (!(noise_amp >= 0.0) || !(noise_amp <= 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "noise amplitude must lie in [0, 1] (got " +
                    std::to_string(noise_amp) + ")");
  }

  const std::size_t n =
      static_cast<std::size_t>(std::llround(duration_seconds * sample_rate));
  if (n == 0) {
    throw Error(ErrorCode::kInvalidConfig, "duration rounds to zero samples");
  }

  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.assign(n, 0.0);

  // 50 ms raised-cosine-windowed sine burst, peak amplitude 0.9 so bursts
  // plus noise stay inside [-1, 1] for typical noise levels.
  const std::size_t burst_len =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::llround(0.05 * sample_rate)));
  std::vector<double> burst(burst_len);
  for (std::size_t j = 0; j < burst_len; ++j) {
    const double w =
        0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(j) /
                              static_cast<double>(burst_len)));
    burst[j] = 0.9 * w *
               std::sin(2.0 * M_PI * carrier_hz * static_cast<double>(j) /
                        sample_rate);
  }

  const double period = 60.0 / bpm;
  for (std::size_t k = 0;; ++k) {
    const double onset = static_cast<double>(k) * period;
    if (onset >= duration_seconds) break;
    const std::size_t start =
        static_cast<std::size_t>(std::llround(onset * sample_rate));
    for (std::size_t j = 0; j < burst_len && start + j < n; ++j) {
      buf.samples[start + j] += burst[j];
    }
  }

  if (noise_amp > 0.0) {
    // mt19937 is bit-exact across platforms; map draws to [-1, 1] directly so
    // the noise stream does not depend on library distribution internals.
    std::mt19937 rng(seed);
    constexpr double kInv = 2.0 / 4294967295.0;
    for (double& x : buf.samples) {
      x += noise_amp * (static_cast<double>(rng()) * kInv - 1.0);
    }
  }
  for (double& x : buf.samples) x = std::clamp(x, -1.0, 1.0);
  return buf;
}

}  // namespace stbeat
