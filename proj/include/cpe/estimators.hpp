/*
 Copyright 2026 The cpe-workbench Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include "cpe/modulation.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cpe {

// ---------------------------------------------------------------------------
// One-tap normalized LMS
//
//   y(k)   = w(k) x(k)
//   e(k)   = d(k) - y(k)
//   w(k+1) = w(k) + mu e(k) x*(k) / |x(k)|^2
//
// d(k) is the known transmitted symbol during training and the nearest
// constellation point of y(k) afterwards.
// ---------------------------------------------------------------------------

enum class NlmsMode { training, decision_directed };

struct NlmsConfig {
    double mu = 0.1;
    NlmsMode mode = NlmsMode::training;
    std::size_t training_length = 500;

    /// Requires 0 < mu < 2.
    void validate() const;
};

struct NlmsResult {
    SampleStream output;                // y(k)
    std::vector<Sample> taps;           // w(0) .. w(len), w(0) = 1
    std::vector<std::size_t> skipped;   // k with |x(k)| = 0: tap held, y(k) = 0
};

/// `reference` holds the transmitted symbols; in training mode it must cover at
/// least min(training_length, stream length) symbols.
NlmsResult nlms_cpe(std::span<const Sample> stream, const Constellation& constellation,
                    const NlmsConfig& config, std::span<const Sample> reference = {});

// ---------------------------------------------------------------------------
// n-th power feedforward estimators
// ---------------------------------------------------------------------------

struct BwaConfig {
    std::size_t block_size = 15;
    void validate() const;
};

struct VvConfig {
    std::size_t window = 15;
    /// Requires an odd window >= 3.
    void validate() const;
};

struct PhaseEstimateSeries {
    std::vector<double> phase;          // unwrapped estimate per symbol
    std::vector<long> unwrap_offset;    // m in raw + m*2pi/n, per symbol
    std::vector<std::size_t> flagged;   // raw-estimate indices whose power sum was exactly 0
};

struct FeedforwardResult {
    PhaseEstimateSeries estimate;
    SampleStream corrected;             // x(k) exp(-j phi(k))
};

/// phi_out(0) = raw(0); phi_out(k) = raw(k) + m*2pi/n with m minimizing
/// |phi_out(k) - phi_out(k-1)|.
PhaseEstimateSeries unwrap_phase(std::span<const double> raw, const ModulationFormat& format);

/// Block-wise average: every symbol of block q = floor(k/N) shares
/// (1/n) arg sum_{p in q} x^n(p). A trailing partial block uses the symbols it has.
FeedforwardResult bwa_cpe(std::span<const Sample> stream, const ModulationFormat& format,
                          const BwaConfig& config);

/// Viterbi-Viterbi: (1/n) arg sum_{|q| <= (N-1)/2} x^n(k+q), the window
/// truncated to the stream at both ends.
FeedforwardResult vv_cpe(std::span<const Sample> stream, const ModulationFormat& format,
                         const VvConfig& config);

}  // namespace cpe
