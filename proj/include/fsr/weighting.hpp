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
#include <vector>

#include "grid.hpp"
#include "params.hpp"

namespace fsr {

/// Undamped decay rho_hat^d over an M x N area, d being the distance to the area center.
inline double decay(int m, int n, int rows, int cols, double rho_hat)
{
    const double dm = m - (rows - 1) / 2.0;
    const double dn = n - (cols - 1) / 2.0;
    return std::pow(rho_hat, std::sqrt(dm * dm + dn * dn));
}

inline double spatial_weight(int m, int n, AreaLabel label, int rows, int cols, const FsrParams& params)
{
    switch (label) {
    case AreaLabel::Known: return decay(m, n, rows, cols, params.rho_hat);
    case AreaLabel::Reconstructed: return params.delta * decay(m, n, rows, cols, params.rho_hat);
    case AreaLabel::Unknown:
    case AreaLabel::Outside: return 0.0;
    }
    return 0.0;
}

/// Precomputed decay for one area size; shared by all blocks of an image.
struct DecayKernel {
    int size = 0;
    double rho_hat = 0.0;
    std::vector<double> values;

    DecayKernel() = default;
    DecayKernel(int area_size, double rho) : size(area_size), rho_hat(rho)
    {
        values.resize(static_cast<std::size_t>(size) * size);
        for (int m = 0; m < size; ++m)
            for (int n = 0; n < size; ++n)
                values[static_cast<std::size_t>(m) * size + n] = decay(m, n, size, size, rho);
    }
};

struct WeightMap {
    int size = 0;
    std::vector<double> w;
    double weight_sum = 0.0;

    [[nodiscard]] double operator()(int m, int n) const
    {
        return w[static_cast<std::size_t>(m) * size + n];
    }
};

inline WeightMap build_weight_map(const BlockContext& ctx, const FsrParams& params, const DecayKernel& kernel)
{
    if (kernel.size != ctx.size || kernel.rho_hat != params.rho_hat)
        throw ParameterError("decay kernel does not match the context");
    WeightMap map;
    map.size = ctx.size;
    map.w.assign(ctx.labels.size(), 0.0);
    for (std::size_t i = 0; i < ctx.labels.size(); ++i) {
        switch (ctx.labels[i]) {
        case AreaLabel::Known: map.w[i] = kernel.values[i]; break;
        case AreaLabel::Reconstructed: map.w[i] = params.delta * kernel.values[i]; break;
        default: break;
        }
        map.weight_sum += map.w[i];
    }
    return map;
}

inline WeightMap build_weight_map(const BlockContext& ctx, const FsrParams& params)
{
    return build_weight_map(ctx, params, DecayKernel(ctx.size, params.rho_hat));
}

/// Weighted share of usable data in the area: the sum of weights over known and reconstructed
/// positions, normalized by the undamped decay summed over the entire area (out-of-image included).
inline double effective_density(const BlockContext& ctx, const WeightMap& weights, const FsrParams& params,
                                const DecayKernel& kernel)
{
    if (weights.size != ctx.size || kernel.size != ctx.size || kernel.rho_hat != params.rho_hat)
        throw ParameterError("weight map does not match the context");
    // Both sums accumulate in the same order so the ratio cannot exceed one through rounding.
    double available = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < ctx.labels.size(); ++i) {
        total += kernel.values[i];
        if (ctx.labels[i] == AreaLabel::Known || ctx.labels[i] == AreaLabel::Reconstructed)
            available += weights.w[i];
    }
    return available / total;
}

inline double effective_density(const BlockContext& ctx, const WeightMap& weights, const FsrParams& params)
{
    return effective_density(ctx, weights, params, DecayKernel(ctx.size, params.rho_hat));
}

} // namespace fsr
