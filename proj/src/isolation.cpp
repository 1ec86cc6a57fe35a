// src/isolation.cpp

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

#include "stbeat/isolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "stbeat/errors.hpp"

namespace stbeat {

namespace {

// Natural cubic spline through strictly increasing knots, evaluated at the
// integers 0..length-1. Second derivatives come from the standard tridiagonal
// moment system (zero curvature at the end knots), solved in place.
std::vector<double> natural_spline_curve(const std::vector<double>& xs,
                                         const std::vector<double>& ys,
                                         std::size_t length) {
  const std::size_t n = xs.size();
  std::vector<double> curve(length, 0.0);
  if (n < 2) return curve;

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = xs[i + 1] - xs[i];

  std::vector<double> sigma(n, 0.0);
  if (n > 2) {
    // Thomas solve on the interior moment equations.
    const std::size_t interior = n - 2;
    std::vector<double> diag(interior), upper(interior), rhs(interior);
    for (std::size_t i = 0; i < interior; ++i) {
      diag[i] = (h[i] + h[i + 1]) / 3.0;
      upper[i] = h[i + 1] / 6.0;
      rhs[i] = (ys[i + 2] - ys[i + 1]) / h[i + 1] - (ys[i + 1] - ys[i]) / h[i];
    }
    for (std::size_t i = 1; i < interior; ++i) {
      const double w = (h[i] / 6.0) / diag[i - 1];  // lower coefficient
      diag[i] -= w * upper[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    sigma[interior] = rhs[interior - 1] / diag[interior - 1];
    for (std::size_t i = interior - 1; i >= 1; --i) {
      sigma[i] = (rhs[i - 1] - upper[i - 1] * sigma[i + 1]) / diag[i - 1];
    }
  }

  std::size_t seg = 0;
  for (std::size_t t = 0; t < length; ++t) {
    const double x = static_cast<double>(t);
    while (seg + 2 < n && x >= xs[seg + 1]) ++seg;
    // knots reproduce their values exactly, with no cubic roundoff
    if (x == xs[seg]) {
      curve[t] = ys[seg];
      continue;
    }
    if (x == xs[seg + 1]) {
      curve[t] = ys[seg + 1];
      continue;
    }
    const double hs = h[seg];
    const double a = xs[seg + 1] - x;
    const double b = x - xs[seg];
    curve[t] = sigma[seg] / 6.0 * (a * a * a / hs - hs * a) +
               sigma[seg + 1] / 6.0 * (b * b * b / hs - hs * b) +
               ys[seg] * a / hs + ys[seg + 1] * b / hs;
  }
  return curve;
}

}  // namespace

void IsolationParams::validate() const {
  if (min_peak_separation < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "peak separation must be >= 1 sample (got " +
                    std::to_string(min_peak_separation) + ")");
  }
  if (threshold_steps < 2) {
    throw Error(ErrorCode::kInvalidConfig,
                "threshold step count must be >= 2 (got " +
                    std::to_string(threshold_steps) + ")");
  }
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "isolation accuracy must lie in (0, 1) (got " +
                    std::to_string(epsilon) + ")");
  }
}

std::vector<double> normalize(std::span<const double> envelope) {
  double peak = 0.0;
  for (double v : envelope) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) {
    throw Error(ErrorCode::kDegenerateEnvelope,
                "all-zero envelope cannot be normalized");
  }
  std::vector<double> out(envelope.begin(), envelope.end());
  for (double& v : out) v /= peak;
  return out;
}

std::vector<std::size_t> find_peaks(std::span<const double> x,
                                    int min_separation) {
  std::vector<std::size_t> kept;
  if (x.size() < 3) return kept;
  const std::size_t sep =
      min_separation > 0 ? static_cast<std::size_t>(min_separation) : 1;

  std::vector<std::size_t> candidates;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    if (x[k - 1] < x[k] && x[k] > x[k + 1]) candidates.push_back(k);
  }
  // Greedy by descending amplitude; equal heights resolve to the lower index.
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) {
              if (x[a] != x[b]) return x[a] > x[b];
              return a < b;
            });
  std::vector<char> blocked(x.size(), 0);
  for (std::size_t k : candidates) {
    if (blocked[k]) continue;
    kept.push_back(k);
    const std::size_t lo = k >= sep - 1 ? k - (sep - 1) : 0;
    const std::size_t hi = std::min(x.size(), k + sep);
    std::fill(blocked.begin() + static_cast<std::ptrdiff_t>(lo),
              blocked.begin() + static_cast<std::ptrdiff_t>(hi), char{1});
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<double> upper_envelope(std::span<const double> x,
                                   std::span<const std::size_t> peaks) {
  const std::size_t m = x.size();
  std::vector<double> xs, ys;
  xs.reserve(peaks.size() + 2);
  ys.reserve(peaks.size() + 2);
  if (m >= 1) {
    xs.push_back(0.0);
    ys.push_back(x[0]);
  }
  for (std::size_t k : peaks) {
    if (k == 0 || k + 1 >= m) continue;  // endpoints are already knots
    xs.push_back(static_cast<double>(k));
    ys.push_back(x[k]);
  }
  if (m >= 2) {
    xs.push_back(static_cast<double>(m - 1));
    ys.push_back(x[m - 1]);
  }
  if (xs.size() < 2) {
    const double top = m ? *std::max_element(x.begin(), x.end()) : 0.0;
    return std::vector<double>(m, top);
  }
  return natural_spline_curve(xs, ys, m);
}

std::vector<double> center_rectify(std::span<const double> normalized,
                                   std::span<const double> upper) {
  if (normalized.size() != upper.size()) {
    throw Error(ErrorCode::kInvalidInput,
                "envelope and upper envelope lengths differ");
  }
  double mean = 0.0;
  for (double v : upper) mean += v;
  mean /= static_cast<double>(upper.size());
  std::vector<double> out(normalized.size());
  for (std::size_t k = 0; k < normalized.size(); ++k) {
    out[k] = std::max(0.0, normalized[k] - mean);
  }
  return out;
}

PreconditionedEnvelope precondition(std::span<const double> envelope,
                                    int min_peak_separation) {
  PreconditionedEnvelope pre;
  pre.normalized = normalize(envelope);
  auto peaks = find_peaks(pre.normalized, min_peak_separation);
  pre.upper = upper_envelope(pre.normalized, peaks);
  pre.centered = center_rectify(pre.normalized, pre.upper);
  return pre;
}

ClusterAnalysis clusters_at_threshold(std::span<const double> centered,
                                      double threshold) {
  ClusterAnalysis ca;
  ca.threshold = threshold;
  bool open = false;
  std::size_t start = 0;
  for (std::size_t k = 0; k < centered.size(); ++k) {
    if (centered[k] >= threshold) {
      if (!open) {
        open = true;
        start = k;
      }
    } else if (open) {
      ca.runs.push_back({start, k - 1});
      open = false;
    }
  }
  if (open) ca.runs.push_back({start, centered.size() - 1});

  ca.centroids.reserve(ca.runs.size());
  for (const IndexRun& run : ca.runs) {
    // mean of consecutive integers = midpoint, exact in floating point
    ca.centroids.push_back(
        (static_cast<double>(run.first) + static_cast<double>(run.last)) / 2.0);
  }
  if (ca.centroids.size() >= 2) {
    ca.gaps.resize(ca.centroids.size() - 1);
    for (std::size_t i = 0; i + 1 < ca.centroids.size(); ++i) {
      ca.gaps[i] = ca.centroids[i + 1] - ca.centroids[i];
    }
  }
  if (ca.gaps.size() >= 2) {
    double sum = 0.0, sumsq = 0.0;
    for (double g : ca.gaps) {
      sum += g;
      sumsq += g * g;
    }
    ca.score = sum / (std::sqrt(static_cast<double>(ca.gaps.size())) *
                      std::sqrt(sumsq));
  }
  return ca;
}

BandScore score_band(std::span<const double> centered, int threshold_steps) {
  if (threshold_steps < 2) {
    throw Error(ErrorCode::kInvalidConfig,
                "threshold step count must be >= 2 (got " +
                    std::to_string(threshold_steps) + ")");
  }
  double top = 0.0;
  for (double v : centered) top = std::max(top, v);

  BandScore result;
  for (int j = 1; j <= threshold_steps; ++j) {
    const double h =
        static_cast<double>(j - 1) * top / static_cast<double>(threshold_steps);
    ClusterAnalysis ca = clusters_at_threshold(centered, h);
    if (result.threshold_index == 0 || ca.score > result.score) {
      result.score = ca.score;
      result.threshold_index = j;
      result.best = std::move(ca);
    }
  }
  return result;
}

std::vector<BandDiagnostics> score_all_bands(
    const std::vector<OnsetEnvelope>& envelopes,
    const IsolationParams& params) {
  params.validate();
  std::vector<BandDiagnostics> diags;
  diags.reserve(envelopes.size());
  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    BandDiagnostics d;
    d.band_index = envelopes[i].band_index > 0 ? envelopes[i].band_index
                                               : static_cast<int>(i + 1);
    try {
      PreconditionedEnvelope pre =
          precondition(envelopes[i].values, params.min_peak_separation);
      BandScore bs = score_band(pre.centered, params.threshold_steps);
      d.score = bs.score;
      d.threshold_index = bs.threshold_index;
      d.gaps = std::move(bs.best.gaps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateEnvelope) throw;
      d.degenerate = true;  // silent band, keep score 0
    }
    diags.push_back(std::move(d));
  }
  return diags;
}

std::vector<int> isolation_set(std::span<const double> scores, double epsilon) {
  std::vector<int> set;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (std::abs(1.0 - scores[i]) <= epsilon) {
      set.push_back(static_cast<int>(i + 1));
    }
  }
  return set;
}

double bpm_estimate(std::span<const double> gaps, double effective_rate) {
  if (gaps.empty()) {
    throw Error(ErrorCode::kNoPeriod,
                "empty gap vector: no period to convert to a tempo");
  }
  if (!(effective_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidConfig,
                "effective rate must be positive (got " +
                    std::to_string(effective_rate) + ")");
  }
  const double mean_gap =
      std::accumulate(gaps.begin(), gaps.end(), 0.0) /
      static_cast<double>(gaps.size());
  const double bpm = std::round(60.0 * effective_rate / mean_gap);
  if (!(bpm >= 1.0)) {
    throw Error(ErrorCode::kNoPeriod,
                "mean gap too long to round to a positive tempo");
  }
  return bpm;
}

double bpm_estimate(const ClusterAnalysis& best, double effective_rate) {
  return bpm_estimate(std::span<const double>(best.gaps), effective_rate);
}

TempoEstimate select_estimate(const std::vector<BandDiagnostics>& diagnostics,
                              const IsolationParams& params,
                              double effective_rate) {
  params.validate();
  std::vector<double> scores;
  scores.reserve(diagnostics.size());
  for (const auto& d : diagnostics) scores.push_back(d.score);

  std::vector<int> set = isolation_set(scores, params.epsilon);
  if (set.empty()) {
    std::vector<int> degenerate;
    for (const auto& d : diagnostics) {
      if (d.degenerate) degenerate.push_back(d.band_index);
    }
    throw IsolationFailure(std::move(scores), std::move(degenerate));
  }

  // argmax over the isolation set, ties to the lowest band: beat-carrying
  // rhythm instruments sit in the low bands.
  int selected = set.front();
  for (int band : set) {
    if (scores[static_cast<std::size_t>(band - 1)] >
        scores[static_cast<std::size_t>(selected - 1)]) {
      selected = band;
    }
  }

  const BandDiagnostics& best = diagnostics[static_cast<std::size_t>(selected - 1)];
  TempoEstimate est;
  est.band_index = selected;
  est.score = best.score;
  est.gaps = best.gaps;
  est.effective_rate = effective_rate;
  est.isolation_set = std::move(set);
  est.bpm = bpm_estimate(std::span<const double>(est.gaps), effective_rate);
  return est;
}

TempoEstimate isolate(const std::vector<OnsetEnvelope>& envelopes,
                      const IsolationParams& params) {
  if (envelopes.empty()) {
    throw Error(ErrorCode::kInvalidInput, "no envelopes to isolate");
  }
  const double rate = envelopes.front().effective_rate;
  for (const auto& env : envelopes) {
    if (env.effective_rate != rate) {
      throw Error(ErrorCode::kInvalidInput,
                  "envelopes disagree on the effective sample rate");
    }
  }
  return select_estimate(score_all_bands(envelopes, params), params, rate);
}

}  // namespace stbeat
