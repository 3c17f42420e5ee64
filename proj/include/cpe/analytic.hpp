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

#include "cpe/channel.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cpe {

/// Complementary error function. Arguments above 30 return exactly 0.
double erfc(double x) noexcept;

/// 2*pi*(df_tx + df_lo)*T_S, in rad^2.
double laser_pn_variance(const LaserConfig& lasers, double symbol_period_s);

/// Equalization-enhanced phase noise: df_lo * D * L * pi * lambda^2 / (2 c T_S), in rad^2.
double eepn_variance(const LaserConfig& lasers, const LinkConfig& link, double symbol_period_s);

/// Per-symbol phase-noise variances in rad^2. The cross term 2*rho*sigma_eepn*sigma_txlo
/// is dropped (rho is fixed at 0), so total = eepn + tx_lo.
struct VarianceBreakdown {
    double sigma2_tx_lo = 0.0;
    double sigma2_eepn = 0.0;
    double sigma2_total = 0.0;
    double rho = 0.0;
};

/// Back-to-back (no link) gives the laser term alone.
VarianceBreakdown total_variance(const LaserConfig& lasers, const std::optional<LinkConfig>& link,
                                 double symbol_period_s);

/// (1/log2 n) erfc(pi / (n sqrt(2) sigma_T)).
double ber_floor_nlms(int order, double sigma2_total);

/// Variance of the BWA phase error at position p (1-based) of an N-symbol block:
/// sigma_T^2/(6N^2) [2(p-1)^3 + 3(p-1)^2 + 2(N-p)^3 + 3(N-p)^2 + N - 1].
double bwa_position_variance(std::size_t position, std::size_t block_size, double sigma2_total);

/// (1/(N log2 n)) sum_p erfc(pi / (n sqrt(2) sigma_BWA(p))); zero-variance positions add 0.
double ber_floor_bwa(int order, double sigma2_total, std::size_t block_size);

/// (1/log2 n) erfc((pi/(n sigma_T)) sqrt(6N/(N^2-1))). The window must be odd and >= 3.
double ber_floor_vv(int order, double sigma2_total, std::size_t window);

/// Tracking-error variance of an N-symbol centred window average on a Wiener
/// phase, sigma_T^2 (N^2-1)/(12N). Equating the VV floor with
/// erfc(pi/(n sqrt(2) sigma_eff)) gives exactly this sigma_eff^2.
double vv_effective_variance(std::size_t window, double sigma2_total);

/// Floors outside [kVisibleFloorMin, kVisibleFloorMax] are computed but lie
/// outside the plotted range.
inline constexpr double kVisibleFloorMin = 1e-6;
inline constexpr double kVisibleFloorMax = 0.5;

struct FloorPoint {
    double sigma2_total = 0.0;
    double nlms = 0.0;
    double bwa = 0.0;
    double vv = 0.0;
};

struct FloorCurve {
    int order = 4;
    std::size_t bwa_block_size = 15;
    std::size_t vv_window = 15;
    std::vector<FloorPoint> points;

    static bool visible(double floor) noexcept
    {
        return floor >= kVisibleFloorMin && floor <= kVisibleFloorMax;
    }
};

/// All three floors at each grid point. The grid must be nonempty, nonnegative
/// and strictly increasing.
FloorCurve floor_curves(int order, std::span<const double> sigma2_grid, std::size_t bwa_block_size,
                        std::size_t vv_window);

/// `points` values log-spaced from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

/// Log grid whose low end puts every floor below kVisibleFloorMin and whose
/// high end puts every floor within `saturation` (relative) of 1/log2 n.
std::vector<double> figure_grid(int order, std::size_t bwa_block_size, std::size_t vv_window,
                                std::size_t points, double saturation = 0.1);

}  // namespace cpe
