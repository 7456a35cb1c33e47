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
#include <optional>
#include <vector>

#include "grid.hpp"
#include "model.hpp"
#include "params.hpp"
#include "priors.hpp"
#include "weighting.hpp"

namespace fsr {

inline constexpr double kMinAmplitude = 0.0;
inline constexpr double kMaxAmplitude = 255.0;
/// Fill value when an image offers no usable sample at all.
inline constexpr double kEmptyImageFill = 128.0;

/// Outcome of reconstructing one block.
struct BlockResult {
    int block_size = 0;
    std::vector<double> patch;    // block_size x block_size, row-major
    double omega = 0.0;           // effective density of the area
    double alpha = 1.0;           // prior exponent in effect
    bool used_fallback = false;   // no weighted data in the area; patch holds the fallback value
    std::vector<Bin> selections;  // basis bin chosen in each iteration

    [[nodiscard]] double operator()(int i, int j) const
    {
        return patch[static_cast<std::size_t>(i) * block_size + j];
    }
};

/// Per-image caches that only depend on the parameters.
struct BlockWorkspace {
    DecayKernel kernel;
    PriorBase base;
    PriorMap otf;
    PriorMap flat;

    explicit BlockWorkspace(const FsrParams& params)
        : kernel(params.area_size(), params.rho_hat), base(params.area_size(), params.area_size())
    {
        otf = build_prior_map(PriorKind::Otf, base, 1.0, params);
        flat = build_prior_map(PriorKind::None, base, 1.0, params);
    }
};

namespace detail {

inline void check_context(const BlockContext& ctx, const FsrParams& params)
{
    params.validate();
    if (ctx.size != params.area_size() || ctx.block_size != params.block_size || ctx.border != params.border)
        throw ParameterError("context geometry does not match the parameters");
}

/// Center block with known/reconstructed values passed through and unknown ones taken from `fill`.
template <class Fill>
std::vector<double> assemble_patch(const BlockContext& ctx, Fill&& fill)
{
    const int bs = ctx.block_size;
    std::vector<double> patch(static_cast<std::size_t>(bs) * bs, 0.0);
    for (int i = 0; i < bs; ++i) {
        for (int j = 0; j < bs; ++j) {
            const int m = ctx.border + i;
            const int n = ctx.border + j;
            double& out = patch[static_cast<std::size_t>(i) * bs + j];
            switch (ctx.label(m, n)) {
            case AreaLabel::Known:
            case AreaLabel::Reconstructed: out = ctx.value(m, n); break;
            case AreaLabel::Unknown: out = std::clamp(fill(m, n), kMinAmplitude, kMaxAmplitude); break;
            case AreaLabel::Outside: break;
            }
        }
    }
    return patch;
}

} // namespace detail

/// Frequency-domain reconstruction of the center block of `ctx`.
///
/// Areas without any known or reconstructed sample (omega = 0) are filled with `fallback_value`.
inline BlockResult reconstruct_block(const BlockContext& ctx, const FsrParams& params, double fallback_value,
                                     const BlockWorkspace& ws)
{
    detail::check_context(ctx, params);
    BlockResult result;
    result.block_size = ctx.block_size;

    const WeightMap weights = build_weight_map(ctx, params, ws.kernel);
    result.omega = effective_density(ctx, weights, params, ws.kernel);
    if (result.omega == 0.0 || !(weights.weight_sum > 0.0)) {
        result.used_fallback = true;
        result.alpha = params.prior == PriorKind::Adaptive ? params.alpha_max : 1.0;
        result.patch = detail::assemble_patch(ctx, [&](int, int) { return fallback_value; });
        return result;
    }

    std::optional<PriorMap> adaptive;
    const PriorMap* prior = &ws.flat;
    if (params.prior == PriorKind::Otf) {
        prior = &ws.otf;
    } else if (params.prior == PriorKind::Adaptive) {
        adaptive = build_prior_map(PriorKind::Adaptive, ws.base, result.omega, params);
        prior = &*adaptive;
    }
    result.alpha = prior->alpha;

    ModelState state = init_model_state(ctx, weights);
    // Same arithmetic as projection_coefficients + select_basis, without per-iteration buffers.
    const double scale = 1.0 / state.weight_sum;
    std::vector<double> objective;
    for (int it = 0; it < params.iterations; ++it) {
        const Bin bin = detail::select_scaled(state.residual_spectrum, scale, *prior, state.rows, state.cols, objective);
        update_model(state, bin, state.residual_spectrum[state.index(bin)] * scale, params);
    }
    const std::vector<Complex> g = synthesize_model(state);
    result.patch = detail::assemble_patch(ctx, [&](int m, int n) { return g[ctx.index(m, n)].real(); });
    result.selections = std::move(state.selected);
    return result;
}

inline BlockResult reconstruct_block(const BlockContext& ctx, const FsrParams& params,
                                     double fallback_value = kEmptyImageFill)
{
    return reconstruct_block(ctx, params, fallback_value, BlockWorkspace(params));
}

struct ImageReconstruction {
    ImageGrid image;
    int blocks = 0;          // blocks in the raster
    int modeled_blocks = 0;  // blocks that ran the iterative model
    int fallback_blocks = 0; // blocks filled by the omega = 0 fallback
};

/// Reconstructs every unavailable pixel block by block in raster order. Pixels filled by the
/// model support later blocks as reconstructed samples; fallback-filled pixels do not.
inline ImageReconstruction reconstruct_image(const ImageGrid& image, const SamplingMask& mask,
                                             const FsrParams& params)
{
    params.validate();
    if (!mask.matches(image))
        throw ParameterError("image and mask dimensions differ");

    ImageReconstruction out;
    out.image = image;
    ImageGrid& work = out.image;
    SamplingMask recon(image.width(), image.height(), false);
    const BlockWorkspace ws(params);

    double known_sum = 0.0;
    std::size_t known_count = 0;
    for (std::size_t i = 0; i < image.size(); ++i) {
        if (mask.at_index(i)) {
            known_sum += image.samples()[i];
            ++known_count;
        }
    }
    const double global_fill = known_count > 0 ? known_sum / static_cast<double>(known_count) : kEmptyImageFill;
    double seen_sum = 0.0;
    std::size_t seen_count = 0;

    const int bs = params.block_size;
    const int block_rows = blocks_along(image.height(), bs);
    const int block_cols = blocks_along(image.width(), bs);
    out.blocks = block_rows * block_cols;

    for (int br = 0; br < block_rows; ++br) {
        for (int bc = 0; bc < block_cols; ++bc) {
            const int r0 = br * bs;
            const int c0 = bc * bs;
            const int r1 = std::min(r0 + bs, image.height());
            const int c1 = std::min(c0 + bs, image.width());

            bool has_unknown = false;
            for (int r = r0; r < r1; ++r) {
                for (int c = c0; c < c1; ++c) {
                    if (mask(r, c)) {
                        seen_sum += image(r, c);
                        ++seen_count;
                    } else {
                        has_unknown = true;
                    }
                }
            }
            if (!has_unknown)
                continue;

            const double fill = seen_count > 0 ? seen_sum / static_cast<double>(seen_count) : global_fill;
            const BlockContext ctx = build_block_context(work, mask, recon, {br, bc}, params);
            const BlockResult res = reconstruct_block(ctx, params, fill, ws);
            if (res.used_fallback)
                ++out.fallback_blocks;
            else
                ++out.modeled_blocks;

            for (int r = r0; r < r1; ++r) {
                for (int c = c0; c < c1; ++c) {
                    if (mask(r, c))
                        continue;
                    const double v = res(r - r0, c - c0);
                    work(r, c) = v;
                    if (!res.used_fallback) {
                        recon.set(r, c, true);
                        seen_sum += v;
                        ++seen_count;
                    }
                }
            }
        }
    }
    return out;
}

} // namespace fsr
