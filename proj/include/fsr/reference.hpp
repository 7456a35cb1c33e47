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
#include <complex>
#include <numbers>
#include <vector>

#include "grid.hpp"
#include "model.hpp"
#include "priors.hpp"
#include "reconstruct.hpp"
#include "weighting.hpp"

/// Spatial-domain reconstruction evaluating the projection, selection and update sums literally.
/// O((MN)^2) per iteration; kept as the oracle for the frequency-domain path.
namespace fsr::reference {

struct Basis {
    int rows = 0;
    int cols = 0;
    std::vector<Complex> row_phase; // exp(j 2 pi t / M)
    std::vector<Complex> col_phase; // exp(j 2 pi t / N)

    Basis(int r, int c) : rows(r), cols(c), row_phase(r), col_phase(c)
    {
        for (int t = 0; t < r; ++t)
            row_phase[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / r);
        for (int t = 0; t < c; ++t)
            col_phase[t] = std::polar(1.0, 2.0 * std::numbers::pi * t / c);
    }

    [[nodiscard]] Complex operator()(Bin b, int m, int n) const
    {
        return row_phase[(m * b.k) % rows] * col_phase[(n * b.l) % cols];
    }
};

inline std::vector<double> weights(const BlockContext& ctx, const FsrParams& params)
{
    std::vector<double> w(ctx.labels.size());
    for (int m = 0; m < ctx.size; ++m)
        for (int n = 0; n < ctx.size; ++n)
            w[ctx.index(m, n)] = spatial_weight(m, n, ctx.label(m, n), ctx.size, ctx.size, params);
    return w;
}

inline double effective_density(const BlockContext& ctx, const FsrParams& params)
{
    double num = 0.0;
    double den = 0.0;
    for (int m = 0; m < ctx.size; ++m) {
        for (int n = 0; n < ctx.size; ++n) {
            num += spatial_weight(m, n, ctx.label(m, n), ctx.size, ctx.size, params);
            den += decay(m, n, ctx.size, ctx.size, params.rho_hat);
        }
    }
    return num / den;
}

inline std::vector<double> prior(const BlockContext& ctx, double omega, const FsrParams& params, double* alpha_out)
{
    const int size = ctx.size;
    std::vector<double> wf(static_cast<std::size_t>(size) * size, 1.0);
    double alpha = 1.0;
    if (params.prior == PriorKind::Adaptive)
        alpha = alpha_of_omega(omega, params);
    for (int k = 0; k < size; ++k) {
        for (int l = 0; l < size; ++l) {
            double& v = wf[static_cast<std::size_t>(k) * size + l];
            if (params.prior == PriorKind::Otf)
                v = otf_prior(k, l, size, size);
            else if (params.prior == PriorKind::Adaptive)
                v = adaptive_prior(k, l, size, size, alpha);
        }
    }
    if (alpha_out != nullptr)
        *alpha_out = alpha;
    return wf;
}

/// Literal weighted projection of `residual` onto every basis function.
/// `norms` receives sum(phi* w phi) per bin.
inline std::vector<Complex> projections(const std::vector<Complex>& residual, const std::vector<double>& w,
                                        const Basis& basis, std::vector<double>& norms)
{
    const int rows = basis.rows;
    const int cols = basis.cols;
    std::vector<Complex> p(static_cast<std::size_t>(rows) * cols);
    norms.assign(p.size(), 0.0);
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            Complex num{};
            Complex den{};
            for (int m = 0; m < rows; ++m) {
                for (int n = 0; n < cols; ++n) {
                    const std::size_t i = static_cast<std::size_t>(m) * cols + n;
                    const Complex phi = basis({k, l}, m, n);
                    num += residual[i] * std::conj(phi) * w[i];
                    den += std::conj(phi) * w[i] * phi;
                }
            }
            const std::size_t b = static_cast<std::size_t>(k) * cols + l;
            p[b] = num / den;
            norms[b] = den.real();
        }
    }
    return p;
}

inline BlockResult reconstruct_block(const BlockContext& ctx, const FsrParams& params,
                                     double fallback_value = kEmptyImageFill)
{
    detail::check_context(ctx, params);
    const int size = ctx.size;
    BlockResult result;
    result.block_size = ctx.block_size;

    const std::vector<double> w = weights(ctx, params);
    result.omega = effective_density(ctx, params);
    if (result.omega == 0.0) {
        result.used_fallback = true;
        result.alpha = params.prior == PriorKind::Adaptive ? params.alpha_max : 1.0;
        result.patch = detail::assemble_patch(ctx, [&](int, int) { return fallback_value; });
        return result;
    }
    const std::vector<double> wf = prior(ctx, result.omega, params, &result.alpha);
    const Basis basis(size, size);

    std::vector<Complex> residual(ctx.values.begin(), ctx.values.end());
    std::vector<Complex> model(residual.size());
    std::vector<double> norms;
    std::vector<double> objective(residual.size());

    for (int it = 0; it < params.iterations; ++it) {
        const std::vector<Complex> p = projections(residual, w, basis, norms);
        for (std::size_t b = 0; b < p.size(); ++b)
            objective[b] = std::norm(p[b]) * wf[b] * norms[b];
        const Bin bin = argmax_with_ties(objective, size, size);
        const Bin mirror = conjugate_bin(bin, size, size);

        Complex c = params.gamma * p[static_cast<std::size_t>(bin.k) * size + bin.l];
        if (mirror == bin)
            c = Complex(c.real(), 0.0);
        for (int m = 0; m < size; ++m) {
            for (int n = 0; n < size; ++n) {
                Complex term = c * basis(bin, m, n);
                if (!(mirror == bin))
                    term += std::conj(c) * basis(mirror, m, n);
                const std::size_t i = ctx.index(m, n);
                model[i] += term;
                residual[i] -= term;
            }
        }
        result.selections.push_back(bin);
    }
    result.patch = detail::assemble_patch(ctx, [&](int m, int n) { return model[ctx.index(m, n)].real(); });
    return result;
}

} // namespace fsr::reference
