/*
 * Copyright 2026 The fsr Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <limits>

#include "grid.hpp"

namespace fsr {

inline constexpr double kPeakAmplitude = 255.0;

inline double mean_squared_error(const ImageGrid& reference, const ImageGrid& test)
{
    if (reference.width() != test.width() || reference.height() != test.height())
        throw ParameterError("PSNR needs images of equal dimensions");
    double acc = 0.0;
    const auto a = reference.samples();
    const auto b = test.samples();
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.size());
}

/// PSNR in dB for 8-bit peak amplitude; +infinity for identical images.
inline double psnr(const ImageGrid& reference, const ImageGrid& test)
{
    const double mse = mean_squared_error(reference, test);
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(kPeakAmplitude * kPeakAmplitude / mse);
}

} // namespace fsr
