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
#include <stdexcept>
#include <string>
#include <string_view>

namespace fsr {

/// Thrown for any out-of-range argument or inconsistent input dimensions.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class PriorKind { Otf, Adaptive, None };

inline std::string_view to_string(PriorKind kind)
{
    switch (kind) {
    case PriorKind::Otf: return "otf";
    case PriorKind::Adaptive: return "adaptive";
    case PriorKind::None: return "none";
    }
    return "unknown";
}

/// Tunables of the block-wise reconstruction.
///
/// The extrapolation area is square with side `area_size() = block_size + 2 * border`,
/// which has to be even so that the folded frequencies of the priors are integral.
struct FsrParams {
    double rho_hat = 0.7;     // spatial decay of the weighting function
    double delta = 0.5;       // attenuation of previously reconstructed samples
    double gamma = 0.5;       // orthogonality deficiency compensation
    double tau = 2.0;         // density at which the adaptive prior equals the OTF prior is exp(-tau)
    int block_size = 4;
    int border = 14;
    int iterations = 100;
    PriorKind prior = PriorKind::Adaptive;
    double alpha_max = 32.0;

    [[nodiscard]] int area_size() const noexcept { return block_size + 2 * border; }

    void validate() const
    {
        auto in_unit = [](double x) { return std::isfinite(x) && x > 0.0 && x <= 1.0; };
        if (!in_unit(rho_hat))
            throw ParameterError("rho_hat must lie in (0, 1]");
        if (!in_unit(delta))
            throw ParameterError("delta must lie in (0, 1]");
        if (!in_unit(gamma))
            throw ParameterError("gamma must lie in (0, 1]");
        if (!std::isfinite(tau) || tau <= 0.0)
            throw ParameterError("tau must be positive");
        if (block_size < 1)
            throw ParameterError("block_size must be at least 1");
        if (border < 0)
            throw ParameterError("border must be non-negative");
        if (area_size() % 2 != 0)
            throw ParameterError("block_size + 2 * border must be even");
        if (iterations < 1)
            throw ParameterError("iterations must be at least 1");
        if (std::isnan(alpha_max) || alpha_max < 0.0)
            throw ParameterError("alpha_max must be non-negative");
    }
};

} // namespace fsr
