// include/stbeat/pipeline.hpp

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

#ifndef STBEAT_PIPELINE_HPP
#define STBEAT_PIPELINE_HPP

#include <cstddef>
#include <vector>

#include "stbeat/audio.hpp"
#include "stbeat/isolation.hpp"
#include "stbeat/stransform.hpp"
#include "stbeat/subbands.hpp"

namespace stbeat {

/// End-to-end analysis parameters. band_rows == 0 derives K from the signal
/// so that the grid uses as much of the input as possible.
struct PipelineConfig {
  int downsample_factor = 40;  // D, positive even
  int band_rows = 0;           // K, 0 = derive as floor(N / (2*Q*D))
  int band_count = 10;         // Q
  IsolationParams isolation{};

  void validate() const;
};

/// Largest K with 2*Q*K*D <= input_length, i.e. the grid that wastes the
/// least audio. Returns 0 when the input cannot fill even one grid.
int derive_band_rows(std::size_t input_length, int downsample_factor,
                     int band_count);

/// Subband envelopes straight from the spectrum without materializing the
/// full (M/2) x M magnitude matrix: each band's rows are staged, averaged,
/// and dropped. Produces bit-identical envelopes to
/// band_mean(split_bands(stransform(...))) by construction.
std::vector<OnsetEnvelope> envelopes_from_spectrum(
    const Spectrum& spectrum, double signal_mean, int band_rows,
    double effective_rate, std::vector<BandEdges>* edges = nullptr);

/// Everything up to (and including) the subband envelopes.
struct EnvelopeStage {
  GridConfig grid;          // with the derived K filled in
  AudioBuffer decimated;    // fitted and decimated signal, length 2*Q*K
  Spectrum spectrum;
  double signal_mean = 0.0;
  std::vector<OnsetEnvelope> envelopes;
  std::vector<BandEdges> edges;
};

EnvelopeStage compute_envelope_stage(const AudioBuffer& mono,
                                     const PipelineConfig& config);

/// Full pipeline: grid fit, decimation, spectrum, subband envelopes,
/// isolation. Throws IsolationFailure when no band carries a beat.
TempoEstimate analyze(const AudioBuffer& mono, const PipelineConfig& config);

}  // namespace stbeat

#endif  // STBEAT_PIPELINE_HPP
