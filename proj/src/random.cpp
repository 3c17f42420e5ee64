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
#include "cpe/random.hpp"

#include <cmath>
#include <numbers>

namespace cpe {

double CounterRng::uniform_positive() noexcept
{
    return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::operator()() noexcept
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(rng_.uniform_positive()));
    const double angle = 2.0 * std::numbers::pi * rng_.uniform_positive();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

}  // namespace cpe
