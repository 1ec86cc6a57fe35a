// src/stransform.cpp

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

#include "stbeat/stransform.hpp"

#include <fftw3.h>

#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>
#include <thread>

#include "stbeat/errors.hpp"
#include "stbeat/parallel.hpp"

namespace stbeat {

namespace {

// FFTW's planner is not thread-safe; executions on distinct buffers are.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// Window samples below this cannot move any magnitude at double precision;
// the recurrence stops and the tail stays zero.
constexpr double kWindowCutoff = 1e-300;

// Per-thread transform state: one aligned length-M buffer pair and one
// backward plan (out[n] = sum_m in[m] e^{+j 2 pi m n / M}, unnormalized).
// FFTW_ESTIMATE keeps plan selection deterministic from run to run.
class RowWorkspace {
 public:
  explicit RowWorkspace(std::size_t m) : m_(m) {
    in_ = fftw_alloc_complex(m);
    out_ = fftw_alloc_complex(m);
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(m), in_, out_, FFTW_BACKWARD,
                             FFTW_ESTIMATE);
  }

  RowWorkspace(const RowWorkspace&) = delete;
  RowWorkspace& operator=(const RowWorkspace&) = delete;

  ~RowWorkspace() {
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  void magnitude_row(const Spectrum& spectrum, std::size_t p, double* out) {
    transform_voice(spectrum, p);
    for (std::size_t n = 0; n < m_; ++n) {
      out[n] = std::sqrt(out_[n][0] * out_[n][0] + out_[n][1] * out_[n][1]);
    }
  }

  void complex_row(const Spectrum& spectrum, std::size_t p,
                   std::complex<double>* out) {
    transform_voice(spectrum, p);
    for (std::size_t n = 0; n < m_; ++n) {
      out[n] = {out_[n][0], out_[n][1]};
    }
  }

 private:
  // Load the shifted spectrum under the frequency-dependent Gaussian and run
  // one inverse transform:  in[m] = Y[(m+p) mod M] * exp(-2 pi^2 m'^2 / p^2)
  // with the alias-symmetric lag m' = min(m, M-m). The window is evaluated by
  // the recurrence g_{l+1} = g_l * exp(-c (2l+1) / p^2), two exp calls per
  // row; it decays so fast that most of the load loop short-circuits for
  // small p.
  void transform_voice(const Spectrum& spectrum, std::size_t p) {
    const auto* bins = spectrum.bins.data();
    const std::size_t m = m_;
    std::memset(in_, 0, sizeof(fftw_complex) * m);

    const double pp = static_cast<double>(p);
    const double c = 2.0 * M_PI * M_PI / (pp * pp);
    double g = 1.0;
    double ratio = std::exp(-c);
    const double step = std::exp(-2.0 * c);

    const std::size_t half = m / 2;
    std::size_t fwd = p;  // (lag + p) mod M, walks upward
    std::size_t bwd = p;  // (M - lag + p) mod M, walks downward
    for (std::size_t lag = 0; lag <= half; ++lag) {
      if (g < kWindowCutoff) break;
      in_[lag][0] = bins[fwd].real() * g;
      in_[lag][1] = bins[fwd].imag() * g;
      if (lag != 0 && lag != half) {
        in_[m - lag][0] = bins[bwd].real() * g;
        in_[m - lag][1] = bins[bwd].imag() * g;
      }
      ++fwd;
      if (fwd == m) fwd = 0;
      bwd = (bwd == 0) ? m - 1 : bwd - 1;
      g *= ratio;
      ratio *= step;
    }
    fftw_execute(plan_);
  }

  std::size_t m_;
  fftw_complex* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

void check_even_length(std::size_t m) {
  if (m < 2 || m % 2 != 0) {
    throw Error(ErrorCode::kInvalidConfig,
                "S-transform needs an even signal length >= 2 (got " +
                    std::to_string(m) + ")");
  }
}

void check_row_index(std::size_t p, std::size_t m) {
  if (p < 1 || p >= m / 2) {
    throw Error(ErrorCode::kInvalidConfig,
                "frequency row must satisfy 1 <= p < M/2 (got p = " +
                    std::to_string(p) + ", M = " + std::to_string(m) + ")");
  }
}

// Rows are independent; workers pull indices from a shared counter. Each row
// lands in its own output slot, so the result does not depend on scheduling.
template <typename RowFn>
void run_rows(std::size_t m, std::size_t begin, std::size_t end, RowFn fn) {
  if (begin >= end) return;
  const std::size_t workers =
      std::min<std::size_t>(worker_count(), end - begin);
  if (workers <= 1) {
    RowWorkspace ws(m);
    for (std::size_t p = begin; p < end; ++p) fn(ws, p);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      RowWorkspace ws(m);
      for (;;) {
        std::size_t p = next.fetch_add(1);
        if (p >= end) break;
        fn(ws, p);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Spectrum dft(std::span<const double> signal) {
  if (signal.empty()) {
    throw Error(ErrorCode::kInvalidInput, "cannot transform an empty signal");
  }
  for (double x : signal) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kInvalidInput,
                  "signal contains a non-finite sample");
    }
  }
  const std::size_t m = signal.size();
  fftw_complex* in = fftw_alloc_complex(m);
  fftw_complex* out = fftw_alloc_complex(m);
  for (std::size_t n = 0; n < m; ++n) {
    in[n][0] = signal[n];
    in[n][1] = 0.0;
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(m), in, out, FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  Spectrum spec;
  spec.bins.resize(m);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < m; ++k) {
    spec.bins[k] = {out[k][0] * scale, out[k][1] * scale};
  }
  fftw_free(in);
  fftw_free(out);
  return spec;
}

std::vector<std::complex<double>> stransform_row(const Spectrum& spectrum,
                                                 std::size_t p) {
  check_even_length(spectrum.size());
  check_row_index(p, spectrum.size());
  std::vector<std::complex<double>> row(spectrum.size());
  RowWorkspace ws(spectrum.size());
  ws.complex_row(spectrum, p, row.data());
  return row;
}

Matrix stransform_rows(const Spectrum& spectrum, double signal_mean,
                       std::size_t row_begin, std::size_t row_end) {
  const std::size_t m = spectrum.size();
  check_even_length(m);
  const std::size_t half = m / 2;
  if (row_begin > row_end || row_end > half) {
    throw Error(ErrorCode::kInvalidConfig, "row range out of bounds");
  }
  Matrix block(row_end - row_begin, m);
  if (block.rows == 0) return block;

  std::size_t first_voice = row_begin;
  if (row_begin == 0) {
    double* r0 = block.row(0);
    const double dc = std::abs(signal_mean);
    for (std::size_t n = 0; n < m; ++n) r0[n] = dc;
    first_voice = 1;
  }
  run_rows(m, first_voice, row_end, [&](RowWorkspace& ws, std::size_t p) {
    ws.magnitude_row(spectrum, p, block.row(p - row_begin));
  });
  return block;
}

STMagnitude stransform(const Spectrum& spectrum, double signal_mean,
                       double effective_rate) {
  STMagnitude st;
  st.mag = stransform_rows(spectrum, signal_mean, 0, spectrum.size() / 2);
  st.effective_rate = effective_rate;
  return st;
}

void write_matrix_csv(std::ostream& out, const STMagnitude& st) {
  char buf[32];
  for (std::size_t p = 0; p < st.rows(); ++p) {
    const double* row = st.mag.row(p);
    for (std::size_t n = 0; n < st.cols(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", row[n]);
      if (n) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_stransform_csv(std::ostream& out, const Spectrum& spectrum,
                          double signal_mean) {
  const std::size_t m = spectrum.size();
  check_even_length(m);
  char buf[32];
  std::vector<double> row(m);
  RowWorkspace ws(m);
  for (std::size_t p = 0; p < m / 2; ++p) {
    if (p == 0) {
      std::fill(row.begin(), row.end(), std::abs(signal_mean));
    } else {
      ws.magnitude_row(spectrum, p, row.data());
    }
    for (std::size_t n = 0; n < m; ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", row[n]);
      if (n) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace stbeat
