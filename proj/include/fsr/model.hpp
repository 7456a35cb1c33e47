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
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "fft.hpp"
#include "grid.hpp"
#include "params.hpp"
#include "priors.hpp"
#include "weighting.hpp"

namespace fsr {

using Complex = std::complex<double>;

/// Frequency bin (k along rows, l along columns) of the DFT basis
/// phi_(k,l)[m,n] = exp(j 2 pi (m k / M + n l / N)).
struct Bin {
    int k = 0;
    int l = 0;
    friend bool operator==(const Bin&, const Bin&) = default;
};

inline Bin conjugate_bin(Bin b, int rows, int cols) noexcept
{
    return {(rows - b.k) % rows, (cols - b.l) % cols};
}

/// Iterative model of one extrapolation area.
struct ModelState {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> coefficients;      // accumulated expansion coefficients, zero off the selected set
    std::vector<Bin> selected;              // selection history, one entry per iteration
    std::vector<Complex> residual_spectrum; // DFT of residual * w
    std::vector<Complex> weight_spectrum;   // DFT of w
    double weight_sum = 0.0;
    int iteration = 0;

    [[nodiscard]] std::size_t index(Bin b) const noexcept
    {
        return static_cast<std::size_t>(b.k) * cols + b.l;
    }
};

inline ModelState init_model_state(const BlockContext& ctx, const WeightMap& weights)
{
    if (weights.size != ctx.size || weights.w.size() != ctx.values.size())
        throw ParameterError("weight map does not match the context");
    ModelState state;
    state.rows = ctx.size;
    state.cols = ctx.size;
    const std::size_t n = ctx.values.size();
    state.coefficients.assign(n, Complex{});
    state.residual_spectrum.resize(n);
    state.weight_spectrum.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        state.residual_spectrum[i] = ctx.values[i] * weights.w[i];
        state.weight_spectrum[i] = weights.w[i];
    }
    const auto& fft = detail::Fft2d::get(state.rows, state.cols);
    fft.forward(state.residual_spectrum);
    fft.forward(state.weight_spectrum);
    state.weight_sum = weights.weight_sum;
    return state;
}

/// Weighted projection of the residual onto every basis function.
/// With |phi| = 1 the normalization is the weight sum for every bin.
inline std::vector<Complex> projection_coefficients(const ModelState& state)
{
    if (!(state.weight_sum > 0.0))
        throw ParameterError("projection on an area without weighted samples");
    std::vector<Complex> p(state.residual_spectrum.size());
    const double scale = 1.0 / state.weight_sum;
    std::transform(state.residual_spectrum.begin(), state.residual_spectrum.end(), p.begin(),
                   [scale](Complex r) { return r * scale; });
    return p;
}

/// Relative distance below which two selection objectives count as tied.
inline constexpr double kSelectionTieTolerance = 1e-9;

/// Argmax of a per-bin objective. Ties (within kSelectionTieTolerance of the maximum) go to the
/// smallest folded radial frequency, then to the lexicographically smallest (k, l).
inline Bin argmax_with_ties(std::span<const double> objective, int rows, int cols)
{
    const double peak = *std::max_element(objective.begin(), objective.end());
    const double threshold = peak * (1.0 - kSelectionTieTolerance);
    Bin best{};
    std::int64_t best_key = -1;
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            if (objective[static_cast<std::size_t>(k) * cols + l] < threshold)
                continue;
            const std::int64_t key = folded_radius_key(k, l, rows, cols);
            if (best_key < 0 || key < best_key) {
                best = {k, l};
                best_key = key;
            }
        }
    }
    return best;
}

namespace detail {

/// Selection over spectrum * scale, reusing `objective` as scratch space.
inline Bin select_scaled(std::span<const Complex> spectrum, double scale, const PriorMap& prior, int rows, int cols,
                         std::vector<double>& objective)
{
    if (prior.rows != rows || prior.cols != cols || spectrum.size() != prior.wf.size())
        throw ParameterError("prior does not match the model size");
    objective.resize(spectrum.size());
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double re = spectrum[i].real() * scale;
        const double im = spectrum[i].imag() * scale;
        objective[i] = (re * re + im * im) * prior.wf[i];
    }
    return argmax_with_ties(objective, rows, cols);
}

} // namespace detail

/// Bin maximizing |p|^2 * wf. The constant weight-sum factor of the full criterion is dropped.
inline Bin select_basis(std::span<const Complex> p, const PriorMap& prior, const ModelState& state)
{
    std::vector<double> objective;
    return detail::select_scaled(p, 1.0, prior, state.rows, state.cols, objective);
}

namespace detail {

// spectrum[k,l] -= c * shifted[(k - u) mod M, (l - v) mod N]
inline void subtract_shifted(std::vector<Complex>& spectrum, const std::vector<Complex>& shifted, Complex c,
                             Bin shift, int rows, int cols)
{
    for (int k = 0; k < rows; ++k) {
        const int ks = (k - shift.k + rows) % rows;
        Complex* dst = spectrum.data() + static_cast<std::size_t>(k) * cols;
        const Complex* src = shifted.data() + static_cast<std::size_t>(ks) * cols;
        // columns l < v wrap to l - v + N
        const int split = shift.l;
        auto sub = [cr = c.real(), ci = c.imag()](Complex& d, const Complex& w) {
            d = Complex(d.real() - (cr * w.real() - ci * w.imag()), d.imag() - (cr * w.imag() + ci * w.real()));
        };
        for (int l = 0; l < split; ++l)
            sub(dst[l], src[l - split + cols]);
        for (int l = split; l < cols; ++l)
            sub(dst[l], src[l - split]);
    }
}

} // namespace detail

/// Adds gamma * p_uv at (u, v) and its conjugate at the mirrored bin so the model stays real,
/// then removes the same contribution from the weighted residual spectrum. Self-conjugate bins
/// (DC and Nyquist lines) take the real part once.
inline void update_model(ModelState& state, Bin bin, Complex p_uv, const FsrParams& params)
{
    if (bin.k < 0 || bin.l < 0 || bin.k >= state.rows || bin.l >= state.cols)
        throw ParameterError("basis bin out of range");
    const Bin mirror = conjugate_bin(bin, state.rows, state.cols);
    Complex c = params.gamma * p_uv;
    if (mirror == bin) {
        c = Complex(c.real(), 0.0);
        state.coefficients[state.index(bin)] += c;
        detail::subtract_shifted(state.residual_spectrum, state.weight_spectrum, c, bin, state.rows, state.cols);
    } else {
        state.coefficients[state.index(bin)] += c;
        state.coefficients[state.index(mirror)] += std::conj(c);
        detail::subtract_shifted(state.residual_spectrum, state.weight_spectrum, c, bin, state.rows, state.cols);
        detail::subtract_shifted(state.residual_spectrum, state.weight_spectrum, std::conj(c), mirror, state.rows,
                                 state.cols);
    }
    state.selected.push_back(bin);
    ++state.iteration;
}

/// Model g over the whole area: sum of coefficient * basis function.
inline std::vector<Complex> synthesize_model(const ModelState& state)
{
    std::vector<Complex> g = state.coefficients;
    detail::Fft2d::get(state.rows, state.cols).backward(g);
    return g;
}

} // namespace fsr
