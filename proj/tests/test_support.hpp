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
#include <random>
#include <string>
#include <vector>

#include "fsr/fsr.hpp"

namespace fsr::testing {

/// Textured 128x128 natural-image crop used by the integration suites.
inline std::string crop_path() { return std::string(FSR_TEST_DATA_DIR) + "/crop128.pgm"; }
inline ImageGrid load_crop() { return read_pnm(crop_path()); }

/// Random area of the given geometry: each in-area pixel is Known with probability `density`,
/// otherwise Reconstructed with probability `recon_share` or Unknown. An optional band of
/// Outside pixels emulates an image edge.
inline BlockContext random_context(std::mt19937_64& rng, int block_size, int border, double density,
                                   double recon_share = 0.0, int outside_rows = 0)
{
    const int size = block_size + 2 * border;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_real_distribution<double> amp(0.0, 255.0);
    std::vector<AreaLabel> labels(static_cast<std::size_t>(size) * size);
    std::vector<double> values(labels.size(), 0.0);
    for (int m = 0; m < size; ++m) {
        for (int n = 0; n < size; ++n) {
            const std::size_t i = static_cast<std::size_t>(m) * size + n;
            if (m < outside_rows) {
                labels[i] = AreaLabel::Outside;
            } else if (u(rng) < density) {
                labels[i] = AreaLabel::Known;
                values[i] = amp(rng);
            } else if (u(rng) < recon_share) {
                labels[i] = AreaLabel::Reconstructed;
                values[i] = amp(rng);
            } else {
                labels[i] = AreaLabel::Unknown;
            }
        }
    }
    // the center block itself is unknown, as during raster processing
    for (int m = border; m < border + block_size; ++m)
        for (int n = border; n < border + block_size; ++n)
            if (labels[static_cast<std::size_t>(m) * size + n] == AreaLabel::Reconstructed)
                labels[static_cast<std::size_t>(m) * size + n] = AreaLabel::Unknown;
    return make_block_context(block_size, border, std::move(labels), std::move(values));
}

/// Brute-force forward DFT, X[k,l] = sum x[m,n] exp(-j 2 pi (mk/M + nl/N)).
inline std::vector<std::complex<double>> brute_dft(const std::vector<std::complex<double>>& x, int rows, int cols)
{
    std::vector<std::complex<double>> out(x.size());
    for (int k = 0; k < rows; ++k) {
        for (int l = 0; l < cols; ++l) {
            std::complex<double> acc{};
            for (int m = 0; m < rows; ++m) {
                for (int n = 0; n < cols; ++n) {
                    const double phase = -2.0 * std::numbers::pi
                                         * (static_cast<double>(m * k % rows) / rows
                                            + static_cast<double>(n * l % cols) / cols);
                    acc += x[static_cast<std::size_t>(m) * cols + n] * std::polar(1.0, phase);
                }
            }
            out[static_cast<std::size_t>(k) * cols + l] = acc;
        }
    }
    return out;
}

inline std::complex<double> basis(int k, int l, int m, int n, int rows, int cols)
{
    const double phase = 2.0 * std::numbers::pi
                         * (static_cast<double>(m * k % rows) / rows + static_cast<double>(n * l % cols) / cols);
    return std::polar(1.0, phase);
}

inline FsrParams small_params(int block_size, int border, PriorKind prior = PriorKind::Adaptive, int iterations = 10)
{
    FsrParams p;
    p.block_size = block_size;
    p.border = border;
    p.prior = prior;
    p.iterations = iterations;
    return p;
}

} // namespace fsr::testing
