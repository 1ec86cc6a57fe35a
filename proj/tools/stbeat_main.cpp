// tools/stbeat_main.cpp

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

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "stbeat/errors.hpp"
#include "stbeat/evaluation.hpp"
#include "stbeat/pipeline.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;            // usage, I/O, configuration
constexpr int kExitIsolationFailure = 2;

void add_config_options(CLI::App* cmd, stbeat::PipelineConfig* config) {
  cmd->add_option("--d", config->downsample_factor,
                  "Downsampling factor (even integer >= 2)")
      ->capture_default_str();
  cmd->add_option("--k", config->band_rows,
                  "Subband row count; 0 derives it from the input length")
      ->capture_default_str();
  cmd->add_option("--q", config->band_count, "Number of subbands")
      ->capture_default_str();
  cmd->add_option("--np", config->isolation.min_peak_separation,
                  "Minimum peak separation in envelope samples")
      ->capture_default_str();
  cmd->add_option("--thresholds", config->isolation.threshold_steps,
                  "Number of threshold levels scanned per band")
      ->capture_default_str();
  cmd->add_option("--epsilon", config->isolation.epsilon,
                  "Isolation accuracy: a band is kept when |1 - score| <= epsilon")
      ->capture_default_str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw stbeat::Error(stbeat::ErrorCode::kIoError,
                        "cannot write '" + path + "'");
  }
  return out;
}

json diagnostics_to_json(const std::vector<stbeat::BandDiagnostics>& diags) {
  json arr = json::array();
  for (const auto& d : diags) {
    arr.push_back({{"band", d.band_index},
                   {"score", d.score},
                   {"threshold_index", d.threshold_index},
                   {"gaps", d.gaps},
                   {"degenerate", d.degenerate}});
  }
  return arr;
}

int cmd_analyze(const std::string& path, const stbeat::PipelineConfig& config,
                const std::string& scores_path) {
  stbeat::AudioBuffer mono = stbeat::load_mono(path);
  stbeat::EnvelopeStage stage = stbeat::compute_envelope_stage(mono, config);
  auto diags = stbeat::score_all_bands(stage.envelopes, config.isolation);
  if (!scores_path.empty()) {
    auto out = open_output(scores_path);
    out << diagnostics_to_json(diags).dump(2) << '\n';
  }

  const double rate = stage.decimated.sample_rate;
  stbeat::TempoEstimate est;
  try {
    est = stbeat::select_estimate(diags, config.isolation, rate);
  } catch (const stbeat::IsolationFailure& f) {
    json j;
    j["error"] = "isolation_failure";
    j["scores"] = f.band_scores();
    j["degenerate_bands"] = f.degenerate_bands();
    j["effective_rate_hz"] = rate;
    std::cout << j.dump(2) << std::endl;
    std::cerr << "no subband isolates a beat (closest score ";
    double best = 0.0;
    for (double s : f.band_scores()) best = std::max(best, s);
    std::fprintf(stderr, "%.6f)\n", best);
    return kExitIsolationFailure;
  }

  json j;
  j["bpm"] = est.bpm;
  j["band_index"] = est.band_index;
  j["score_b"] = est.score;
  j["isolation_set"] = est.isolation_set;
  j["effective_rate_hz"] = est.effective_rate;
  j["gaps"] = est.gaps;
  std::cout << j.dump(2) << std::endl;
  std::fprintf(stderr, "%s: %.0f BPM (band %d, score %.6f)\n", path.c_str(),
               est.bpm, est.band_index, est.score);
  return kExitOk;
}

int cmd_envelopes(const std::string& path, const stbeat::PipelineConfig& config,
                  const std::string& out_csv, const std::string& matrix_csv) {
  stbeat::AudioBuffer mono = stbeat::load_mono(path);
  stbeat::EnvelopeStage stage = stbeat::compute_envelope_stage(mono, config);
  {
    auto out = open_output(out_csv);
    stbeat::write_envelopes_csv(out, stage.envelopes, stage.edges);
  }
  if (!matrix_csv.empty()) {
    auto out = open_output(matrix_csv);
    stbeat::write_stransform_csv(out, stage.spectrum, stage.signal_mean);
  }
  std::fprintf(stderr, "%s: %zu bands x %zu samples -> %s\n", path.c_str(),
               stage.envelopes.size(),
               stage.envelopes.empty() ? 0 : stage.envelopes[0].values.size(),
               out_csv.c_str());
  return kExitOk;
}

int cmd_evaluate(const std::string& manifest,
                 const stbeat::PipelineConfig& config,
                 const std::string& format, const std::string& out_json,
                 const std::string& per_item_csv) {
  std::vector<stbeat::GroundTruthEntry> entries;
  if (format == "ballroom") {
    entries = stbeat::read_ballroom_manifest(manifest);
  } else {
    entries = stbeat::read_manifest_csv(manifest);
  }
  stbeat::EvalReport report = stbeat::evaluate(entries, config);

  const std::string text = stbeat::report_to_json(report);
  if (out_json.empty()) {
    std::cout << text << std::endl;
  } else {
    auto out = open_output(out_json);
    out << text << '\n';
  }
  if (!per_item_csv.empty()) {
    auto out = open_output(per_item_csv);
    stbeat::write_report_csv(out, report);
  }

  if (report.accuracy1_pct && report.accuracy2_pct) {
    std::fprintf(stderr, "accuracy1=%.1f%% accuracy2=%.1f%% (total=%zu, estimated=%zu)\n",
                 *report.accuracy1_pct, *report.accuracy2_pct, report.total,
                 report.estimated);
  } else {
    std::fprintf(stderr, "empty dataset: no accuracies\n");
  }
  return kExitOk;
}

int cmd_synth(double bpm, double duration, double carrier, double noise_amp,
              unsigned seed, const std::string& out_wav) {
  stbeat::AudioBuffer buf =
      stbeat::synth_click_track(bpm, duration, carrier, 44100.0, noise_amp,
                                static_cast<std::uint32_t>(seed));
  stbeat::save_wav16(out_wav, buf);
  std::fprintf(stderr, "%s: %.1f BPM, %.1f s, carrier %.1f Hz, seed %u\n",
               out_wav.c_str(), bpm, duration, carrier, seed);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stbeat: subband-envelope tempo estimation"};
  app.require_subcommand(1);

  stbeat::PipelineConfig config;

  auto* analyze = app.add_subcommand(
      "analyze", "Estimate the tempo of one audio file (JSON on stdout)");
  std::string analyze_path, analyze_scores;
  analyze->add_option("audio", analyze_path, "Input WAV file")->required();
  add_config_options(analyze, &config);
  analyze->add_option("--dump-scores", analyze_scores,
                      "Write per-band score diagnostics to this JSON file");

  auto* envelopes = app.add_subcommand(
      "envelopes", "Write the subband onset envelopes as CSV");
  std::string env_path, env_out, env_matrix;
  envelopes->add_option("audio", env_path, "Input WAV file")->required();
  add_config_options(envelopes, &config);
  envelopes->add_option("--out", env_out, "Output CSV path")->required();
  envelopes->add_option("--dump-matrix", env_matrix,
                        "Also write the full S-transform magnitude CSV");

  auto* evaluate = app.add_subcommand(
      "evaluate", "Score a ground-truth dataset (accuracy 1 and 2)");
  std::string eval_manifest, eval_out, eval_csv, eval_format = "csv";
  evaluate->add_option("manifest", eval_manifest, "Dataset manifest")
      ->required();
  add_config_options(evaluate, &config);
  evaluate->add_option("--format", eval_format,
                       "Manifest format: csv (path,bpm) or ballroom")
      ->check(CLI::IsMember({"csv", "ballroom"}))
      ->capture_default_str();
  evaluate->add_option("--out", eval_out,
                       "Report JSON path (stdout when omitted)");
  evaluate->add_option("--per-item-csv", eval_csv,
                       "Also write a per-item CSV table");

  auto* synth = app.add_subcommand(
      "synth", "Generate a deterministic click-track WAV (44100 Hz, 16-bit)");
  double synth_bpm = 120.0, synth_duration = 20.0, synth_carrier = 60.0,
         synth_noise = 0.05;
  unsigned synth_seed = 0;
  std::string synth_out;
  synth->add_option("--bpm", synth_bpm, "Tempo in [30, 300]")
      ->capture_default_str();
  synth->add_option("--duration", synth_duration, "Length in seconds")
      ->capture_default_str();
  synth->add_option("--carrier", synth_carrier, "Burst frequency in [32, 512] Hz")
      ->capture_default_str();
  synth->add_option("--noise-amp", synth_noise, "Uniform noise amplitude")
      ->capture_default_str();
  synth->add_option("--seed", synth_seed, "Noise seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output WAV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitError;
  }

  try {
    if (*analyze) {
      return cmd_analyze(analyze_path, config, analyze_scores);
    }
    if (*envelopes) {
      return cmd_envelopes(env_path, config, env_out, env_matrix);
    }
    if (*evaluate) {
      return cmd_evaluate(eval_manifest, config, eval_format, eval_out,
                          eval_csv);
    }
    if (*synth) {
      return cmd_synth(synth_bpm, synth_duration, synth_carrier, synth_noise,
                       synth_seed, synth_out);
    }
  } catch (const stbeat::IsolationFailure& f) {
    // only reachable from paths that do not report it as JSON themselves
    std::cerr << "error: " << f.what() << '\n';
    return kExitIsolationFailure;
  } catch (const stbeat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
