// include/stbeat/subbands.hpp

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

#ifndef STBEAT_SUBBANDS_HPP
#define STBEAT_SUBBANDS_HPP

#include <cstddef>
#include <ostream>
#include <vector>

#include "stbeat/matrix.hpp"
#include "stbeat/stransform.hpp"

namespace stbeat {

struct BandEdges {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

/// Q contiguous blocks of K frequency rows each; band 1 holds the lowest
/// frequencies. Concatenating the bands by rows reconstructs the source
/// matrix exactly.
struct SubbandSet {
  std::size_t band_rows = 0;  // K
  std::vector<Matrix> bands;  // each K x M
  std::vector<BandEdges> edges;
};

/// Split the magnitude matrix into equal-width row blocks. K must divide the
/// row count M/2 exactly.
SubbandSet split_bands(const STMagnitude& st, int band_rows);

/// Onset envelope of one subband: per-time-bin mean over the band's rows.
struct OnsetEnvelope {
  std::vector<double> values;
  int band_index = 0;  // 1-based, 1 = lowest frequencies
  double effective_rate = 0.0;
};

OnsetEnvelope band_mean(const Matrix& band, int band_index,
                        double effective_rate);

/// CSV dump behind the band-envelope plots: header row of band edges in Hz,
/// then M rows of Q envelope values.
void write_envelopes_csv(std::ostream& out,
                         const std::vector<OnsetEnvelope>& envelopes,
                         const std::vector<BandEdges>& edges);

}  // namespace stbeat

#endif  // STBEAT_SUBBANDS_HPP
