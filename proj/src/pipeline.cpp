// src/pipeline.cpp

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

#include "stbeat/pipeline.hpp"

#include <numeric>
#include <string>

#include "stbeat/errors.hpp"

namespace stbeat {

void PipelineConfig::validate() const {
  if (downsample_factor < 2 || downsample_factor % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "downsampling factor must be an even integer >= 2 (got " +
                    std::to_string(downsample_factor) + ")");
  }
  if (band_rows < 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband row count must be positive or 0 for automatic (got " +
                    std::to_string(band_rows) + ")");
  }
  if (band_count < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband count must be positive (got " +
                    std::to_string(band_count) + ")");
  }
  isolation.validate();
}

int derive_band_rows(std::size_t input_length, int downsample_factor,
                     int band_count) {
  const std::size_t denom = 2ull * static_cast<std::size_t>(band_count) *
                            static_cast<std::size_t>(downsample_factor);
  return static_cast<int>(input_length / denom);
}

std::vector<OnsetEnvelope> envelopes_from_spectrum(
    const Spectrum& spectrum, double signal_mean, int band_rows,
    double effective_rate, std::vector<BandEdges>* edges) {
  const std::size_t m = spectrum.size();
  if (band_rows < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband row count must be positive (got " +
                    std::to_string(band_rows) + ")");
  }
  const std::size_t k = static_cast<std::size_t>(band_rows);
  if (m % 2 != 0 || (m / 2) % k != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband size K=" + std::to_string(band_rows) +
                    " does not divide the row count M/2=" +
                    std::to_string(m / 2));
  }
  const std::size_t q = (m / 2) / k;

  std::vector<OnsetEnvelope> envelopes;
  envelopes.reserve(q);
  if (edges) edges->clear();
  for (std::size_t i = 0; i < q; ++i) {
    // One band staged at a time keeps memory at O(K*M) instead of O(M^2/2).
    Matrix band = stransform_rows(spectrum, signal_mean, i * k, (i + 1) * k);
    envelopes.push_back(
        band_mean(band, static_cast<int>(i + 1), effective_rate));
    if (edges) {
      const double bin_hz = effective_rate / static_cast<double>(m);
      edges->push_back({static_cast<double>(i * k) * bin_hz,
                        static_cast<double>((i + 1) * k) * bin_hz});
    }
  }
  return envelopes;
}

EnvelopeStage compute_envelope_stage(const AudioBuffer& mono,
                                     const PipelineConfig& config) {
  config.validate();
  if (mono.samples.empty()) {
    throw Error(ErrorCode::kEmptyAudio, "empty input signal");
  }

  EnvelopeStage stage;
  stage.grid.downsample_factor = config.downsample_factor;
  stage.grid.band_count = config.band_count;
  stage.grid.band_rows =
      config.band_rows > 0
          ? config.band_rows
          : derive_band_rows(mono.samples.size(), config.downsample_factor,
                             config.band_count);
  if (stage.grid.band_rows < 1) {
    throw Error(ErrorCode::kInsufficientAudio,
                "input too short for even one analysis grid: need at least " +
                    std::to_string(2ull * config.band_count *
                                   config.downsample_factor) +
                    " samples, got " + std::to_string(mono.samples.size()));
  }

  AudioBuffer fitted = fit_to_grid(mono, stage.grid);
  stage.decimated = downsample(fitted, config.downsample_factor);
  stage.signal_mean =
      std::accumulate(stage.decimated.samples.begin(),
                      stage.decimated.samples.end(), 0.0) /
      static_cast<double>(stage.decimated.samples.size());
  stage.spectrum = dft(stage.decimated.samples);
  stage.envelopes = envelopes_from_spectrum(
      stage.spectrum, stage.signal_mean, stage.grid.band_rows,
      stage.decimated.sample_rate, &stage.edges);
  return stage;
}

TempoEstimate analyze(const AudioBuffer& mono, const PipelineConfig& config) {
  EnvelopeStage stage = compute_envelope_stage(mono, config);
  return isolate(stage.envelopes, config.isolation);
}

}  // namespace stbeat
