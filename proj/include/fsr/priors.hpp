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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <vector>

#include "params.hpp"

namespace fsr {

/// Frequency index folded onto [0, size/2]; bins k and size-k share the same folded value.
inline int folded_frequency(int k, int size) { return size / 2 - std::abs(k - size / 2); }

/// Ordering key for the folded radial frequency k~^2/M^2 + l~^2/N^2, scaled by M^2 N^2 to stay integral.
inline std::int64_t folded_radius_key(int k, int l, int rows, int cols)
{
    const std::int64_t kf = folded_frequency(k, rows);
    const std::int64_t lf = folded_frequency(l, cols);
    return kf * kf * cols * cols + lf * lf * rows * rows;
}

/// 1 - sqrt(2) * sqrt(k~^2/M^2 + l~^2/N^2), clamped at zero.
inline double prior_base(int k, int l, int rows, int cols)
{
    const double kf = folded_frequency(k, rows);
    const double lf = folded_frequency(l, cols);
    const double r = std::sqrt(kf * kf / (double(rows) * rows) + lf * lf / (double(cols) * cols));
    return std::max(0.0, 1.0 - std::sqrt(2.0) * r);
}

namespace detail {
inline void require_even(int rows, int cols)
{
    if (rows < 2 || cols < 2 || rows % 2 != 0 || cols % 2 != 0)
        throw ParameterError("frequency plane dimensions must be even");
}
} // namespace detail

/// Fixed prior approximating the OTF of a diffraction limited system.
inline double otf_prior(int k, int l, int rows, int cols)
{
    return std::pow(prior_base(k, l, rows, cols), 2.0);
}

/// Exponent of the adaptive prior: -ln(omega) / tau, clamped to [0, alpha_max].
inline double alpha_of_omega(double omega, const FsrParams& params)
{
    if (!(omega >= 0.0 && omega <= 1.0))
        throw ParameterError("effective density must lie in [0, 1]");
    if (omega == 0.0)
        return params.alpha_max;
    const double alpha = -std::log(omega) / params.tau;
    return std::clamp(alpha, 0.0, params.alpha_max) + 0.0; // +0.0 turns -0 into +0
}

/// base^(2 alpha), with 0^0 = 1 so that alpha = 0 gives a flat prior.
inline double adaptive_prior(int k, int l, int rows, int cols, double alpha)
{
    return std::pow(prior_base(k, l, rows, cols), 2.0 * alpha);
}

struct PriorMap {
    int rows = 0;
    int cols = 0;
    PriorKind kind = PriorKind::None;
    double alpha = 1.0;
    std::vector<double> wf;

    [[nodiscard]] double operator()(int k, int l) const
    {
        return wf[static_cast<std::size_t>(k) * cols + l];
    }
};

/// Cached prior bases for one frequency plane size.
struct PriorBase {
    int rows = 0;
    int cols = 0;
    std::vector<double> base;

    PriorBase() = default;
    PriorBase(int r, int c) : rows(r), cols(c)
    {
        detail::require_even(r, c);
        base.resize(static_cast<std::size_t>(r) * c);
        for (int k = 0; k < r; ++k)
            for (int l = 0; l < c; ++l)
                base[static_cast<std::size_t>(k) * c + l] = prior_base(k, l, r, c);
    }
};

inline PriorMap build_prior_map(PriorKind kind, const PriorBase& base, double omega, const FsrParams& params)
{
    PriorMap map;
    map.rows = base.rows;
    map.cols = base.cols;
    map.kind = kind;
    switch (kind) {
    case PriorKind::None:
        map.wf.assign(base.base.size(), 1.0);
        break;
    case PriorKind::Otf:
        map.alpha = 1.0;
        map.wf.resize(base.base.size());
        std::transform(base.base.begin(), base.base.end(), map.wf.begin(),
                       [](double b) { return std::pow(b, 2.0); });
        break;
    case PriorKind::Adaptive: {
        map.alpha = alpha_of_omega(omega, params);
        const double exponent = 2.0 * map.alpha;
        map.wf.resize(base.base.size());
        std::transform(base.base.begin(), base.base.end(), map.wf.begin(),
                       [exponent](double b) { return std::pow(b, exponent); });
        break;
    }
    }
    return map;
}

inline PriorMap build_prior_map(PriorKind kind, int rows, int cols, double omega, const FsrParams& params)
{
    return build_prior_map(kind, PriorBase(rows, cols), omega, params);
}

} // namespace fsr
