// include/stbeat/stransform.hpp

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

#ifndef STBEAT_STRANSFORM_HPP
#define STBEAT_STRANSFORM_HPP

#include <complex>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "stbeat/matrix.hpp"

namespace stbeat {

/// Normalized spectrum: bins[k] = (1/M) * sum_n y[n] e^{-j 2 pi n k / M}.
/// The 1/M factor keeps bins in signal-amplitude units; for real input the
/// bins are conjugate-symmetric.
struct Spectrum {
  std::vector<std::complex<double>> bins;

  std::size_t size() const { return bins.size(); }
};

/// Compute the normalized length-M DFT of a real signal.
/// Non-finite samples raise a validation error.
Spectrum dft(std::span<const double> signal);

/// Magnitude of the discrete S-transform: rows index frequency
/// p = 0 .. M/2-1, columns index time n = 0 .. M-1. Row p corresponds to
/// p * effective_rate / M Hz.
struct STMagnitude {
  Matrix mag;
  double effective_rate = 0.0;  // Hz, sample rate of the analyzed signal

  std::size_t rows() const { return mag.rows; }
  std::size_t cols() const { return mag.cols; }
  double at(std::size_t p, std::size_t n) const { return mag.at(p, n); }
  double row_frequency_hz(std::size_t p) const {
    return static_cast<double>(p) * effective_rate / static_cast<double>(mag.cols);
  }
};

// The voice at frequency row p (p >= 1) is
//
//   F[p, n] = sum_{m=0}^{M-1} Y[(m+p) mod M] * g_p[m] * e^{+j 2 pi m n / M},
//
// with the frequency-dependent Gaussian g_p[m] = exp(-2 pi^2 m'^2 / p^2)
// sampled on the alias-symmetric lag m' = min(m, M-m). Row p = 0 is the
// constant signal mean. Each row is one length-M inverse transform of the
// windowed, shifted spectrum, so the whole matrix costs O(M^2 log M).

/// Complex voice F[p, 0..M) for a single frequency row, 1 <= p < M/2.
std::vector<std::complex<double>> stransform_row(const Spectrum& spectrum,
                                                 std::size_t p);

/// Magnitude rows [row_begin, row_end) of the S-transform matrix. Rows are
/// mutually independent and are computed in parallel; results do not depend
/// on the evaluation order or the worker count.
Matrix stransform_rows(const Spectrum& spectrum, double signal_mean,
                       std::size_t row_begin, std::size_t row_end);

/// Full |F| matrix, (M/2) x M. M must be even and >= 2.
STMagnitude stransform(const Spectrum& spectrum, double signal_mean,
                       double effective_rate);

/// Row-major CSV dump of the magnitude matrix, one frequency row per line.
void write_matrix_csv(std::ostream& out, const STMagnitude& st);

/// Streaming CSV dump computed row by row; memory stays O(M) regardless of
/// the matrix size.
void write_stransform_csv(std::ostream& out, const Spectrum& spectrum,
                          double signal_mean);

}  // namespace stbeat

#endif  // STBEAT_STRANSFORM_HPP
