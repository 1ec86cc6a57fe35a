// include/stbeat/isolation.hpp

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

#ifndef STBEAT_ISOLATION_HPP
#define STBEAT_ISOLATION_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "stbeat/subbands.hpp"

namespace stbeat {

// Beat-band isolation: precondition each subband envelope, cluster its
// supra-threshold samples across a grid of threshold levels, score how evenly
// the cluster centroids are spaced, and keep the bands whose best score is
// within epsilon of 1. A perfectly periodic envelope scores exactly 1.

struct IsolationParams {
  int min_peak_separation = 40;  // samples between upper-envelope knots
  int threshold_steps = 100;     // number of threshold levels scanned
  double epsilon = 1e-3;         // |1 - score| tolerance for the beat band

  void validate() const;
};

/// Infinity-norm normalize: r / max|r|. All-zero input raises the
/// degenerate-envelope error (such a band is skipped with score 0).
std::vector<double> normalize(std::span<const double> envelope);

/// Strict interior local maxima (x[k-1] < x[k] > x[k+1]), thinned so any two
/// kept peaks are at least min_separation samples apart. Conflicts resolve
/// greedily by descending amplitude, ties to the lower index. Sorted result.
std::vector<std::size_t> find_peaks(std::span<const double> x,
                                    int min_separation);

/// Natural cubic spline through the peaks, with the sequence endpoints added
/// as knots. With fewer than two knots the curve degenerates to the constant
/// max(x). The curve passes through every knot exactly.
std::vector<double> upper_envelope(std::span<const double> x,
                                   std::span<const std::size_t> peaks);

/// Subtract the mean of the upper envelope and clamp negatives to zero.
std::vector<double> center_rectify(std::span<const double> normalized,
                                   std::span<const double> upper);

struct PreconditionedEnvelope {
  std::vector<double> normalized;
  std::vector<double> upper;
  std::vector<double> centered;
};

/// Steps 1-3 in one call: normalize, upper envelope, center + rectify.
PreconditionedEnvelope precondition(std::span<const double> envelope,
                                    int min_peak_separation);

/// A maximal run of consecutive indices, inclusive bounds.
struct IndexRun {
  std::size_t first = 0;
  std::size_t last = 0;
};

/// Threshold-level clustering: runs of consecutive indices with value >= h,
/// their centroids, consecutive centroid gaps, and the regularity score
///   v = (sum of gaps) / (sqrt(#gaps) * l2-norm(gaps)),
/// the cosine between the gap vector and the all-ones direction. Fewer than
/// two gaps score 0: a single interval carries no periodicity evidence.
struct ClusterAnalysis {
  double threshold = 0.0;
  std::vector<IndexRun> runs;
  std::vector<double> centroids;
  std::vector<double> gaps;
  double score = 0.0;
};

ClusterAnalysis clusters_at_threshold(std::span<const double> centered,
                                      double threshold);

/// Best clustering over the threshold grid h_j = (j-1)*max/steps, j = 1..steps
/// (the lower level of each segment). Ties go to the smallest j.
struct BandScore {
  double score = 0.0;
  int threshold_index = 0;  // 1-based j attaining the score, 0 if none
  ClusterAnalysis best;
};

BandScore score_band(std::span<const double> centered, int threshold_steps);

/// Per-band outcome of the scoring stage, the data behind the
/// score-versus-threshold diagnostics.
struct BandDiagnostics {
  int band_index = 0;  // 1-based
  double score = 0.0;
  int threshold_index = 0;
  std::vector<double> gaps;
  bool degenerate = false;  // all-zero envelope, scored 0
};

std::vector<BandDiagnostics> score_all_bands(
    const std::vector<OnsetEnvelope>& envelopes, const IsolationParams& params);

/// Bands whose score is within epsilon of 1, as 1-based indices.
std::vector<int> isolation_set(std::span<const double> scores, double epsilon);

/// Tempo from the mean centroid gap: round(60 * effective_rate / mean_gap).
/// An empty gap vector (or a gap too long to round to a positive tempo)
/// raises the no-period error.
double bpm_estimate(const ClusterAnalysis& best, double effective_rate);
double bpm_estimate(std::span<const double> gaps, double effective_rate);

struct TempoEstimate {
  int band_index = 0;         // selected band, lowest index among top scorers
  double score = 0.0;         // its regularity score b
  std::vector<double> gaps;   // centroid gaps of its best clustering
  double bpm = 0.0;
  double effective_rate = 0.0;
  std::vector<int> isolation_set;  // all bands within epsilon of 1
};

/// Selection + tempo once bands are scored. Throws IsolationFailure when the
/// isolation set is empty.
TempoEstimate select_estimate(const std::vector<BandDiagnostics>& diagnostics,
                              const IsolationParams& params,
                              double effective_rate);

/// Full isolation stage over a set of subband envelopes.
TempoEstimate isolate(const std::vector<OnsetEnvelope>& envelopes,
                      const IsolationParams& params);

}  // namespace stbeat

#endif  // STBEAT_ISOLATION_HPP
