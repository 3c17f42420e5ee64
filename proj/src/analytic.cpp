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
#include "cpe/analytic.hpp"

#include "cpe/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cpe {
namespace {

constexpr double kErfcCutoff = 30.0;

void require_variance(double sigma2)
{
    if (!(sigma2 >= 0.0))
        throw std::invalid_argument("phase-noise variance must be >= 0");
}

// erfc(pi / (n sqrt(2) sigma)) with the sigma = 0 limit.
double decision_erfc(int order, double sigma2)
{
    if (sigma2 == 0.0)
        return 0.0;
    return erfc(std::numbers::pi / (order * std::numbers::sqrt2 * std::sqrt(sigma2)));
}

template <class Floor>
double bisect_log_sigma2(Floor&& floor, double target)
{
    // floor() is nondecreasing in sigma2; search log10(sigma2) in [-12, 8].
    double lo = -12.0;
    double hi = 8.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (floor(std::pow(10.0, mid)) < target)
            lo = mid;
        else
            hi = mid;
    }
    return std::pow(10.0, 0.5 * (lo + hi));
}

}  // namespace

double erfc(double x) noexcept
{
    if (x > kErfcCutoff)
        return 0.0;
    return std::erfc(x);
}

double laser_pn_variance(const LaserConfig& lasers, double symbol_period_s)
{
    lasers.validate();
    if (!(symbol_period_s >= 0.0))
        throw std::invalid_argument("symbol period must be >= 0");
    return 2.0 * std::numbers::pi * (lasers.delta_f_tx_hz + lasers.delta_f_lo_hz) * symbol_period_s;
}

double eepn_variance(const LaserConfig& lasers, const LinkConfig& link, double symbol_period_s)
{
    lasers.validate();
    link.validate();
    if (!(symbol_period_s > 0.0))
        throw std::invalid_argument("symbol period must be > 0");
    return lasers.delta_f_lo_hz * link.dispersion_s_per_m2 * link.length_m * std::numbers::pi *
           link.wavelength_m * link.wavelength_m / (2.0 * kSpeedOfLight * symbol_period_s);
}

VarianceBreakdown total_variance(const LaserConfig& lasers, const std::optional<LinkConfig>& link,
                                 double symbol_period_s)
{
    VarianceBreakdown out;
    out.sigma2_tx_lo = laser_pn_variance(lasers, symbol_period_s);
    out.sigma2_eepn = link ? eepn_variance(lasers, *link, symbol_period_s) : 0.0;
    out.sigma2_total = out.sigma2_eepn + out.sigma2_tx_lo;
    return out;
}

double ber_floor_nlms(int order, double sigma2_total)
{
    const ModulationFormat format(order);
    require_variance(sigma2_total);
    return decision_erfc(order, sigma2_total) / format.bits_per_symbol();
}

double bwa_position_variance(std::size_t position, std::size_t block_size, double sigma2_total)
{
    if (block_size < 1 || position < 1 || position > block_size)
        throw std::out_of_range("bwa_position_variance: position " + std::to_string(position) +
                                " outside 1.." + std::to_string(block_size));
    require_variance(sigma2_total);
    const double n = static_cast<double>(block_size);
    const double before = static_cast<double>(position - 1);
    const double after = static_cast<double>(block_size - position);
    const double bracket = 2.0 * before * before * before + 3.0 * before * before +
                           2.0 * after * after * after + 3.0 * after * after + n - 1.0;
    return sigma2_total / (6.0 * n * n) * bracket;
}

double ber_floor_bwa(int order, double sigma2_total, std::size_t block_size)
{
    const ModulationFormat format(order);
    if (block_size < 1)
        throw std::invalid_argument("BWA block size must be >= 1");
    require_variance(sigma2_total);
    double sum = 0.0;
    for (std::size_t p = 1; p <= block_size; ++p)
        sum += decision_erfc(order, bwa_position_variance(p, block_size, sigma2_total));
    return sum / (static_cast<double>(block_size) * format.bits_per_symbol());
}

double ber_floor_vv(int order, double sigma2_total, std::size_t window)
{
    const ModulationFormat format(order);
    if (window < 3 || window % 2 == 0)
        throw std::invalid_argument("degenerate window: VV window must be odd >= 3, got " +
                                    std::to_string(window));
    require_variance(sigma2_total);
    if (sigma2_total == 0.0)
        return 0.0;
    const double n = static_cast<double>(window);
    const double arg = std::numbers::pi / (order * std::sqrt(sigma2_total)) *
                       std::sqrt(6.0 * n / (n * n - 1.0));
    return erfc(arg) / format.bits_per_symbol();
}

double vv_effective_variance(std::size_t window, double sigma2_total)
{
    const double n = static_cast<double>(window);
    return sigma2_total * (n * n - 1.0) / (12.0 * n);
}

FloorCurve floor_curves(int order, std::span<const double> sigma2_grid, std::size_t bwa_block_size,
                        std::size_t vv_window)
{
    if (sigma2_grid.empty())
        throw std::invalid_argument("floor_curves: empty grid");
    for (std::size_t i = 0; i < sigma2_grid.size(); ++i) {
        require_variance(sigma2_grid[i]);
        if (i > 0 && !(sigma2_grid[i] > sigma2_grid[i - 1]))
            throw std::invalid_argument("floor_curves: grid must be strictly increasing");
    }

    FloorCurve curve{order, bwa_block_size, vv_window, {}};
    curve.points.reserve(sigma2_grid.size());
    for (const double s2 : sigma2_grid)
        curve.points.push_back({s2, ber_floor_nlms(order, s2), ber_floor_bwa(order, s2, bwa_block_size),
                                ber_floor_vv(order, s2, vv_window)});
    return curve;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points)
{
    if (!(lo > 0.0) || !(hi > lo) || points < 2)
        throw std::invalid_argument("log_grid: need 0 < lo < hi and at least 2 points");
    std::vector<double> grid(points);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> figure_grid(int order, std::size_t bwa_block_size, std::size_t vv_window,
                                std::size_t points, double saturation)
{
    const ModulationFormat format(order);
    auto highest = [&](double s2) {
        return std::max({ber_floor_nlms(order, s2), ber_floor_bwa(order, s2, bwa_block_size),
                         ber_floor_vv(order, s2, vv_window)});
    };
    auto lowest = [&](double s2) {
        return std::min({ber_floor_nlms(order, s2), ber_floor_bwa(order, s2, bwa_block_size),
                         ber_floor_vv(order, s2, vv_window)});
    };
    const double ceiling = 1.0 / format.bits_per_symbol();
    // Half a decade of margin below the point where the worst curve enters the plot.
    const double lo = bisect_log_sigma2(highest, kVisibleFloorMin) / std::sqrt(10.0);
    const double hi = bisect_log_sigma2(lowest, (1.0 - saturation) * ceiling);
    return log_grid(lo, hi, points);
}

}  // namespace cpe
