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
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "params.hpp"

namespace fsr {

/// Position on the regular pixel grid.
struct Pixel {
    int row = 0;
    int col = 0;
    friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Single-channel image on a regular grid, row-major.
class ImageGrid {
public:
    ImageGrid() = default;

    ImageGrid(int width, int height, double fill = 0.0)
        : width_(width), height_(height)
    {
        if (width < 1 || height < 1)
            throw ParameterError("image dimensions must be positive");
        samples_.assign(static_cast<std::size_t>(width) * height, fill);
    }

    ImageGrid(int width, int height, std::vector<double> samples)
        : width_(width), height_(height), samples_(std::move(samples))
    {
        if (width < 1 || height < 1)
            throw ParameterError("image dimensions must be positive");
        if (samples_.size() != static_cast<std::size_t>(width) * height)
            throw ParameterError("sample count does not match image dimensions");
        for (double s : samples_)
            if (!std::isfinite(s))
                throw ParameterError("image samples must be finite");
    }

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples_.empty(); }

    [[nodiscard]] bool contains(int row, int col) const noexcept
    {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    double& operator()(int row, int col) { return samples_[index(row, col)]; }
    double operator()(int row, int col) const { return samples_[index(row, col)]; }

    [[nodiscard]] std::span<const double> samples() const noexcept { return samples_; }
    [[nodiscard]] std::span<double> samples() noexcept { return samples_; }

    friend bool operator==(const ImageGrid&, const ImageGrid&) = default;

private:
    [[nodiscard]] std::size_t index(int row, int col) const noexcept
    {
        return static_cast<std::size_t>(row) * width_ + col;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> samples_;
};

/// Per-pixel availability flags; true marks an available sample.
///
/// Also used for the map of already reconstructed pixels during block processing.
class SamplingMask {
public:
    SamplingMask() = default;

    SamplingMask(int width, int height, bool fill = false)
        : width_(width), height_(height)
    {
        if (width < 1 || height < 1)
            throw ParameterError("mask dimensions must be positive");
        flags_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    }

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] std::size_t size() const noexcept { return flags_.size(); }

    [[nodiscard]] bool operator()(int row, int col) const
    {
        return flags_[static_cast<std::size_t>(row) * width_ + col] != 0;
    }
    void set(int row, int col, bool value)
    {
        flags_[static_cast<std::size_t>(row) * width_ + col] = value ? 1 : 0;
    }
    [[nodiscard]] bool at_index(std::size_t i) const { return flags_[i] != 0; }
    void set_index(std::size_t i, bool value) { flags_[i] = value ? 1 : 0; }

    [[nodiscard]] std::size_t count() const noexcept
    {
        return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
    }

    [[nodiscard]] double density() const noexcept
    {
        return flags_.empty() ? 0.0 : static_cast<double>(count()) / static_cast<double>(flags_.size());
    }

    [[nodiscard]] bool matches(const ImageGrid& image) const noexcept
    {
        return width_ == image.width() && height_ == image.height();
    }

    friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> flags_;
};

/// Draws exactly round(density * width * height) available positions, uniformly without replacement.
inline SamplingMask generate_mask(int width, int height, double density, std::uint64_t seed)
{
    if (!(density >= 0.0 && density <= 1.0))
        throw ParameterError("density must lie in [0, 1]");
    SamplingMask mask(width, height);
    const std::size_t total = mask.size();
    const auto wanted = static_cast<std::size_t>(std::llround(density * static_cast<double>(total)));

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates
    for (std::size_t i = 0; i < wanted; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, total - 1);
        std::swap(order[i], order[pick(rng)]);
        mask.set_index(order[i], true);
    }
    return mask;
}

enum class AreaLabel : std::uint8_t {
    Known,         // originally available sample (area A)
    Unknown,       // not yet reconstructed (area B)
    Reconstructed, // filled by a previously processed block (area R)
    Outside        // beyond the image bounds
};

/// One square extrapolation area around the block under reconstruction.
///
/// Local coordinate (m, n) maps to image position (origin.row - border + m, origin.col - border + n).
struct BlockContext {
    int size = 0; // M = N = block_size + 2 * border
    int block_size = 0;
    int border = 0;
    Pixel origin;  // top-left pixel of the center block in the image
    std::vector<AreaLabel> labels;
    std::vector<double> values;

    [[nodiscard]] std::size_t index(int m, int n) const noexcept
    {
        return static_cast<std::size_t>(m) * size + n;
    }
    [[nodiscard]] AreaLabel label(int m, int n) const { return labels[index(m, n)]; }
    [[nodiscard]] double value(int m, int n) const { return values[index(m, n)]; }
    [[nodiscard]] Pixel to_image(int m, int n) const noexcept
    {
        return {origin.row - border + m, origin.col - border + n};
    }
    [[nodiscard]] std::size_t count(AreaLabel which) const
    {
        return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), which));
    }
};

/// Builds a context whose labels and values are given directly (tests, synthetic experiments).
/// Values at Unknown/Outside positions are forced to zero.
inline BlockContext make_block_context(int block_size, int border, std::vector<AreaLabel> labels,
                                       std::vector<double> values, Pixel origin = {})
{
    BlockContext ctx;
    ctx.block_size = block_size;
    ctx.border = border;
    ctx.size = block_size + 2 * border;
    ctx.origin = origin;
    const auto n = static_cast<std::size_t>(ctx.size) * ctx.size;
    if (block_size < 1 || border < 0 || labels.size() != n || values.size() != n)
        throw ParameterError("context labels/values do not match the area size");
    for (std::size_t i = 0; i < n; ++i)
        if (labels[i] == AreaLabel::Unknown || labels[i] == AreaLabel::Outside)
            values[i] = 0.0;
    ctx.labels = std::move(labels);
    ctx.values = std::move(values);
    return ctx;
}

/// Number of blocks along each axis; partial blocks at the right/bottom edge are included.
inline int blocks_along(int extent, int block_size) { return (extent + block_size - 1) / block_size; }

/// Extracts the extrapolation area of block (block_row, block_col) in raster numbering.
///
/// `image` is the working buffer: known samples at mask positions and reconstructed values where
/// `recon_map` is set. Everything else is treated as unknown.
inline BlockContext build_block_context(const ImageGrid& image, const SamplingMask& mask,
                                        const SamplingMask& recon_map, Pixel block_pos,
                                        const FsrParams& params)
{
    if (!mask.matches(image) || !recon_map.matches(image))
        throw ParameterError("image, mask and reconstruction map dimensions differ");
    const int bs = params.block_size;
    if (block_pos.row < 0 || block_pos.col < 0 || block_pos.row >= blocks_along(image.height(), bs)
        || block_pos.col >= blocks_along(image.width(), bs))
        throw ParameterError("block position outside the block grid");

    BlockContext ctx;
    ctx.block_size = bs;
    ctx.border = params.border;
    ctx.size = params.area_size();
    ctx.origin = {block_pos.row * bs, block_pos.col * bs};
    const auto n = static_cast<std::size_t>(ctx.size) * ctx.size;
    ctx.labels.assign(n, AreaLabel::Outside);
    ctx.values.assign(n, 0.0);

    for (int m = 0; m < ctx.size; ++m) {
        for (int k = 0; k < ctx.size; ++k) {
            const Pixel p = ctx.to_image(m, k);
            if (!image.contains(p.row, p.col))
                continue;
            const std::size_t i = ctx.index(m, k);
            if (mask(p.row, p.col)) {
                if (recon_map(p.row, p.col))
                    throw ParameterError("reconstruction map overlaps available samples");
                ctx.labels[i] = AreaLabel::Known;
                ctx.values[i] = image(p.row, p.col);
            } else if (recon_map(p.row, p.col)) {
                ctx.labels[i] = AreaLabel::Reconstructed;
                ctx.values[i] = image(p.row, p.col);
            } else {
                ctx.labels[i] = AreaLabel::Unknown;
            }
        }
    }
    return ctx;
}

} // namespace fsr
