// src/subbands.cpp

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

#include "stbeat/subbands.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "stbeat/errors.hpp"

namespace stbeat {

SubbandSet split_bands(const STMagnitude& st, int band_rows) {
  if (band_rows < 1) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband row count must be positive (got " +
                    std::to_string(band_rows) + ")");
  }
  const std::size_t k = static_cast<std::size_t>(band_rows);
  const std::size_t half = st.rows();
  if (half % k != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "subband size K=" + std::to_string(band_rows) +
                    " does not divide the row count M/2=" +
                    std::to_string(half));
  }
  const std::size_t q = half / k;
  const std::size_t m = st.cols();

  SubbandSet set;
  set.band_rows = k;
  set.bands.reserve(q);
  set.edges.reserve(q);
  for (std::size_t i = 0; i < q; ++i) {
    Matrix band(k, m);
    std::copy(st.mag.row(i * k), st.mag.row(i * k) + k * m, band.values.begin());
    set.bands.push_back(std::move(band));
    set.edges.push_back({st.row_frequency_hz(i * k),
                         st.row_frequency_hz((i + 1) * k)});
  }
  return set;
}

OnsetEnvelope band_mean(const Matrix& band, int band_index,
                        double effective_rate) {
  if (band.rows == 0 || band.cols == 0) {
    throw Error(ErrorCode::kInvalidInput, "cannot average an empty band");
  }
  OnsetEnvelope env;
  env.band_index = band_index;
  env.effective_rate = effective_rate;
  env.values.assign(band.cols, 0.0);
  for (std::size_t r = 0; r < band.rows; ++r) {
    const double* row = band.row(r);
    for (std::size_t n = 0; n < band.cols; ++n) {
      env.values[n] += row[n];
    }
  }
  const double inv = 1.0 / static_cast<double>(band.rows);
  for (double& v : env.values) v *= inv;
  return env;
}

void write_envelopes_csv(std::ostream& out,
                         const std::vector<OnsetEnvelope>& envelopes,
                         const std::vector<BandEdges>& edges) {
  char buf[64];
  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    double lo = i < edges.size() ? edges[i].low_hz : 0.0;
    double hi = i < edges.size() ? edges[i].high_hz : 0.0;
    std::snprintf(buf, sizeof buf, "band%d:%g-%gHz",
                  envelopes[i].band_index, lo, hi);
    if (i) out << ',';
    out << buf;
  }
  out << '\n';
  const std::size_t m = envelopes.empty() ? 0 : envelopes.front().values.size();
  for (std::size_t n = 0; n < m; ++n) {
    for (std::size_t i = 0; i < envelopes.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", envelopes[i].values[n]);
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace stbeat
