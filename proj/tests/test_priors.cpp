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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"

using namespace fsr;

namespace {

double oracle_base(int k, int l, int rows, int cols)
{
    const double kt = rows / 2.0 - std::fabs(k - rows / 2.0);
    const double lt = cols / 2.0 - std::fabs(l - cols / 2.0);
    return std::max(0.0, 1.0 - std::sqrt(2.0 * (kt * kt / (rows * rows) + lt * lt / (cols * cols))));
}

} // namespace

TEST(OtfPrior, DcAndNyquistCorner)
{
    EXPECT_EQ(otf_prior(0, 0, 32, 32), 1.0);
    EXPECT_EQ(otf_prior(16, 16, 32, 32), 0.0);
    EXPECT_EQ(otf_prior(4, 4, 8, 8), 0.0);
}

TEST(OtfPrior, AxisValue)
{
    const double expected = std::pow(1.0 - std::sqrt(2.0) * 0.25, 2);
    EXPECT_NEAR(otf_prior(8, 0, 32, 32), expected, 1e-15);
    EXPECT_NEAR(otf_prior(8, 0, 32, 32), 0.41789, 5e-6);
    EXPECT_NEAR(otf_prior(8, 0, 32, 32), oracle_base(8, 0, 32, 32) * oracle_base(8, 0, 32, 32), 1e-15);
}

TEST(AlphaOfOmega, KnownPoints)
{
    FsrParams p;
    p.tau = 2.0;
    EXPECT_EQ(alpha_of_omega(1.0, p), 0.0);
    EXPECT_FALSE(std::signbit(alpha_of_omega(1.0, p)));
    EXPECT_NEAR(alpha_of_omega(std::exp(-2.0), p), 1.0, 1e-15);
    EXPECT_NEAR(alpha_of_omega(0.5, p), 0.34657, 5e-6);
    EXPECT_NEAR(alpha_of_omega(0.5, p), std::log(2.0) / 2.0, 1e-16);
    EXPECT_EQ(alpha_of_omega(0.0, p), p.alpha_max);
    EXPECT_EQ(alpha_of_omega(1e-300, p), p.alpha_max);
}

TEST(AlphaOfOmega, RejectsOutOfRange)
{
    FsrParams p;
    EXPECT_THROW(alpha_of_omega(-0.01, p), ParameterError);
    EXPECT_THROW(alpha_of_omega(1.01, p), ParameterError);
    EXPECT_THROW(alpha_of_omega(std::nan(""), p), ParameterError);
}

TEST(AdaptivePrior, ReducesToOtfAndFlat)
{
    for (int k = 0; k < 32; ++k) {
        for (int l = 0; l < 32; ++l) {
            EXPECT_EQ(adaptive_prior(k, l, 32, 32, 1.0), otf_prior(k, l, 32, 32));
            EXPECT_EQ(adaptive_prior(k, l, 32, 32, 0.0), 1.0);
        }
    }
}

TEST(AdaptivePrior, AxisValueAtAlphaTwo)
{
    EXPECT_NEAR(adaptive_prior(8, 0, 32, 32, 2.0), std::pow(1.0 - std::sqrt(2.0) * 0.25, 4), 1e-15);
    EXPECT_NEAR(adaptive_prior(8, 0, 32, 32, 2.0), 0.17464, 1e-5);
}

TEST(AdaptivePrior, StrictOrderingInAlpha)
{
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> a(0.0, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        double a1 = a(rng), a2 = a(rng);
        if (a1 > a2)
            std::swap(a1, a2);
        if (a2 - a1 < 1e-3)
            continue;
        for (int k = 0; k < 16; ++k) {
            const double base = prior_base(k, 3, 16, 16);
            if (base <= 0.0 || base >= 1.0)
                continue;
            EXPECT_GT(adaptive_prior(k, 3, 16, 16, a1), adaptive_prior(k, 3, 16, 16, a2));
        }
    }
}

TEST(PriorMap, NoneIsFlat)
{
    FsrParams p;
    const PriorMap map = build_prior_map(PriorKind::None, 32, 32, 0.3, p);
    for (double v : map.wf)
        EXPECT_EQ(v, 1.0);
}

TEST(PriorMap, AdaptiveAtThresholdMatchesOtf)
{
    FsrParams p;
    for (double tau : {0.5, 2.0, 3.0}) {
        p.tau = tau;
        const PriorMap adaptive = build_prior_map(PriorKind::Adaptive, 32, 32, std::exp(-tau), p);
        const PriorMap otf = build_prior_map(PriorKind::Otf, 32, 32, 0.0, p);
        for (std::size_t i = 0; i < otf.wf.size(); ++i)
            EXPECT_NEAR(adaptive.wf[i], otf.wf[i], 1e-12);
    }
}

TEST(PriorMap, LowerDensitySuppressesMore)
{
    FsrParams p;
    const PriorMap sparse = build_prior_map(PriorKind::Adaptive, 32, 32, 0.1, p);
    const PriorMap dense = build_prior_map(PriorKind::Adaptive, 32, 32, 0.6, p);
    EXPECT_GT(sparse.alpha, dense.alpha);
    for (int k = 0; k < 32; ++k)
        for (int l = 0; l < 32; ++l)
            if (prior_base(k, l, 32, 32) < 1.0) {
                EXPECT_LE(sparse(k, l), dense(k, l));
            }
}

TEST(PriorMap, FoldingSymmetryAndAxisMonotonicity)
{
    FsrParams p;
    for (PriorKind kind : {PriorKind::Otf, PriorKind::Adaptive, PriorKind::None}) {
        for (int size : {8, 16, 32}) {
            const PriorMap map = build_prior_map(kind, size, size, 0.27, p);
            for (int k = 0; k < size; ++k) {
                for (int l = 0; l < size; ++l) {
                    const double v = map(k, l);
                    EXPECT_GE(v, 0.0);
                    EXPECT_LE(v, 1.0);
                    EXPECT_EQ(v, map((size - k) % size, l));
                    EXPECT_EQ(v, map(k, (size - l) % size));
                    EXPECT_EQ(v, map((size - k) % size, (size - l) % size));
                }
            }
            for (int k = 1; k <= size / 2; ++k)
                EXPECT_LE(map(k, 0), map(k - 1, 0));
            if (kind != PriorKind::None) {
                EXPECT_EQ(map(0, 0), 1.0);
            }
        }
    }
}

TEST(PriorMap, OddSizeRejected)
{
    EXPECT_THROW(PriorBase(31, 32), ParameterError);
}
