// include/stbeat/evaluation.hpp

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

#ifndef STBEAT_EVALUATION_HPP
#define STBEAT_EVALUATION_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "stbeat/audio.hpp"
#include "stbeat/pipeline.hpp"

namespace stbeat {

struct GroundTruthEntry {
  std::string audio_path;
  double tempo = 0.0;  // BPM, positive
};

/// Estimate within 4% of the ground truth.
bool accuracy1(double estimate_bpm, double truth_bpm);

/// Estimate within 4% of the truth or of its half, double, triple, or third.
bool accuracy2(double estimate_bpm, double truth_bpm);

struct EvalItem {
  std::string path;
  double truth = 0.0;
  bool estimated = false;
  double estimate = 0.0;  // valid only when estimated
  bool accuracy1_pass = false;
  bool accuracy2_pass = false;
  std::string failure_reason;  // nonempty when not estimated
};

/// Dataset-level result. Accuracy percentages are computed over all entries
/// (failures count as misses) and are absent for an empty dataset.
struct EvalReport {
  std::size_t total = 0;
  std::size_t estimated = 0;
  std::optional<double> accuracy1_pct;
  std::optional<double> accuracy2_pct;
  std::vector<EvalItem> items;
};

/// Run the full pipeline on every entry, in input order. Unreadable files and
/// isolation failures become recorded misses, not aborts.
EvalReport evaluate(const std::vector<GroundTruthEntry>& entries,
                    const PipelineConfig& config);

/// Two-column CSV manifest `path,bpm`; the header row is optional. Relative
/// paths resolve against the manifest's directory.
std::vector<GroundTruthEntry> read_manifest_csv(const std::string& path);

/// Ballroom-style manifest: one audio path per line (# comments allowed);
/// the tempo for each file is read from a sibling file with the extension
/// replaced by ".bpm".
std::vector<GroundTruthEntry> read_ballroom_manifest(const std::string& path);

/// JSON serialization of the report (fields: total, estimated, accuracy1,
/// accuracy2, failures, per_item). Null accuracies for an empty dataset.
std::string report_to_json(const EvalReport& report);

/// Optional per-item CSV table.
void write_report_csv(std::ostream& out, const EvalReport& report);

/// Deterministic test signal: 50 ms raised-cosine-windowed sine bursts at the
/// carrier frequency, one onset every 60/bpm seconds starting at t = 0, plus
/// uniform noise of the given amplitude. Constraints: 30 <= bpm <= 300 and
/// 32 <= carrier_hz <= 512 (the rhythm-instrument range the analysis bands
/// target).
AudioBuffer synth_click_track(double bpm, double duration_seconds,
                              double carrier_hz, double sample_rate,
                              double noise_amp, std::uint32_t seed);

}  // namespace stbeat

#endif  // STBEAT_EVALUATION_HPP
