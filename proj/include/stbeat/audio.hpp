// include/stbeat/audio.hpp

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

#ifndef STBEAT_AUDIO_HPP
#define STBEAT_AUDIO_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace stbeat {

/// Sampled mono signal. Samples are normalized amplitudes in [-1, 1];
/// sample_rate stays exact through integer decimation (e.g. 1102.5 Hz).
struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 0.0;

  std::size_t size() const { return samples.size(); }
  double duration_seconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

/// Analysis grid: decimation factor D, rows per subband K, subband count Q.
/// A fitted signal decimates to exactly M = 2*Q*K samples.
struct GridConfig {
  int downsample_factor = 0;  // D, positive even
  int band_rows = 0;          // K, positive
  int band_count = 0;         // Q, positive

  void validate() const;
  /// Shortest input length that fits the grid: 2*Q*K*D samples.
  std::size_t required_samples() const;
};

/// Decode a PCM WAV file (16-bit int or 32-bit float, 1 or 2 channels) to a
/// mono buffer. Stereo channels are averaged; samples land in [-1, 1].
AudioBuffer load_mono(const std::string& path);

/// Write a mono buffer as a 16-bit PCM WAV. The sample rate must be integral.
void save_wav16(const std::string& path, const AudioBuffer& buf);

/// Bare index decimation y[n] = x[n*D]; no anti-aliasing filter is applied,
/// matching the analysis design (rhythm content sits far below the decimated
/// Nyquist for sensible D). Output rate is sample_rate / D, kept rational.
AudioBuffer downsample(const AudioBuffer& buf, int factor);

/// Trim the buffer tail so decimation by D yields exactly 2*Q*K samples.
/// Keeps the excerpt's start. Inputs shorter than 2*Q*K*D samples raise an
/// insufficient-audio error naming the required minimum.
AudioBuffer fit_to_grid(const AudioBuffer& buf, const GridConfig& grid);

}  // namespace stbeat

#endif  // STBEAT_AUDIO_HPP
