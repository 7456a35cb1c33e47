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
#include <limits>
#include <sstream>

#include "test_support.hpp"

using namespace fsr;

namespace {

ImageGrid small_crop()
{
    const ImageGrid crop = fsr::testing::load_crop();
    ImageGrid out(32, 32);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c)
            out(r, c) = crop(40 + r, 40 + c);
    return out;
}

ExperimentConfig quick_config()
{
    ExperimentConfig cfg;
    cfg.images = {"crop"};
    cfg.densities = {0.2, 0.5};
    cfg.seeds = {1, 2};
    cfg.methods = {Method::FsrAdaptive, Method::Linear, Method::Nearest};
    cfg.params.iterations = 20;
    return cfg;
}

} // namespace

TEST(Psnr, ReferenceValues)
{
    const ImageGrid a(8, 8, 10.0);
    EXPECT_EQ(psnr(a, a), std::numeric_limits<double>::infinity());
    EXPECT_NEAR(psnr(ImageGrid(8, 8, 0.0), ImageGrid(8, 8, 255.0)), 0.0, 1e-12);
    EXPECT_NEAR(psnr(a, ImageGrid(8, 8, 11.0)), 10.0 * std::log10(255.0 * 255.0), 1e-12);
    EXPECT_NEAR(psnr(a, ImageGrid(8, 8, 11.0)), 48.1308036086791, 1e-9);
    EXPECT_THROW(psnr(a, ImageGrid(8, 9)), ParameterError);
}

TEST(Methods, NamesRoundTrip)
{
    for (Method m : {Method::FsrAdaptive, Method::FsrOtf, Method::FsrNone, Method::Linear, Method::Nearest})
        EXPECT_EQ(parse_method(method_name(m)), m);
    EXPECT_THROW(parse_method("bicubic"), ParameterError);
}

TEST(Experiment, DeterministicAcrossThreadCounts)
{
    const std::vector<NamedImage> images{{"crop", small_crop()}};
    ExperimentConfig cfg = quick_config();
    const RunReport a = run_experiment(cfg, images);
    cfg.threads = 3;
    const RunReport b = run_experiment(cfg, images);
    ASSERT_EQ(a.rows.size(), 2u * 2u * 3u);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].key(), b.rows[i].key());
        EXPECT_EQ(a.rows[i].psnr_db, b.rows[i].psnr_db);
        EXPECT_EQ(a.rows[i].fallback_blocks, b.rows[i].fallback_blocks);
    }
}

TEST(Experiment, RowsMatchDirectRuns)
{
    const ImageGrid img = small_crop();
    const std::vector<NamedImage> images{{"crop", img}};
    const ExperimentConfig cfg = quick_config();
    const RunReport report = run_experiment(cfg, images);
    for (const RunRow& r : report.rows) {
        const SamplingMask mask = generate_mask(32, 32, r.density, r.seed);
        const MethodRun run = run_method(r.method, img, mask, cfg.params);
        EXPECT_EQ(r.psnr_db, psnr(img, run.image));
        EXPECT_EQ(r.tau, cfg.params.tau);
    }
}

TEST(Experiment, TauSweepAgreesWithPlainRun)
{
    const std::vector<NamedImage> images{{"crop", small_crop()}};
    ExperimentConfig cfg = quick_config();
    cfg.methods = {Method::FsrAdaptive};
    const std::vector<double> taus{1.0, 2.0};
    const RunReport sweep = sweep_tau(cfg, taus, images);
    ASSERT_EQ(sweep.rows.size(), 2u * 2u * 2u);
    for (double t : taus) {
        cfg.params.tau = t;
        const RunReport plain = run_experiment(cfg, images);
        for (double d : cfg.densities)
            EXPECT_EQ(*sweep.mean_psnr(Method::FsrAdaptive, d, t), *plain.mean_psnr(Method::FsrAdaptive, d));
    }
    EXPECT_THROW(sweep_tau(cfg, std::vector<double>{0.0}, images), ParameterError);
}

TEST(Experiment, UnreadableImagesAreRecorded)
{
    ExperimentConfig cfg = quick_config();
    cfg.images = {"/nonexistent/a.pgm", fsr::testing::crop_path()};
    cfg.densities = {0.9};
    cfg.seeds = {1};
    cfg.methods = {Method::Nearest};
    const RunReport report = run_experiment(cfg);
    ASSERT_EQ(report.errors.size(), 1u);
    EXPECT_NE(report.errors[0].find("/nonexistent/a.pgm"), std::string::npos);
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(report.rows[0].image, fsr::testing::crop_path());
}

TEST(Csv, RoundTripKeepsEveryField)
{
    RunReport report;
    report.rows.push_back({"a,b\"c.pgm", 0.1, 7, Method::FsrOtf, 2.0, 31.25, 0.125, 3});
    report.rows.push_back({"x.pgm", 1.0, 1, Method::Nearest, 2.0, std::numeric_limits<double>::infinity(), 0.0, 0});
    std::stringstream ss;
    write_csv(ss, report);
    std::string header;
    std::getline(ss, header);
    EXPECT_EQ(header, kCsvHeader);
    EXPECT_NE(ss.str().find(",inf,"), std::string::npos);
    ss.seekg(0);
    const RunReport back = read_csv(ss);
    ASSERT_EQ(back.rows.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back.rows[i].key(), report.rows[i].key());
        EXPECT_EQ(back.rows[i].psnr_db, report.rows[i].psnr_db);
        EXPECT_EQ(back.rows[i].seconds, report.rows[i].seconds);
        EXPECT_EQ(back.rows[i].fallback_blocks, report.rows[i].fallback_blocks);
    }
}

TEST(Csv, WrongHeaderIsRejected)
{
    std::stringstream ss("image,density\nx,1\n");
    EXPECT_ANY_THROW(read_csv(ss));
}

TEST(Config, Json)
{
    const ExperimentConfig cfg = parse_config(R"({
        "images": ["a.pgm", "b.pgm"],
        "densities": [0.1, 0.5],
        "seeds": [3, 4, 5],
        "methods": ["fsr-ap", "lin"],
        "threads": 2,
        "params": {"rho": 0.8, "tau": 1.5, "block": 8, "border": 12, "iters": 50}
    })");
    EXPECT_EQ(cfg.images.size(), 2u);
    EXPECT_EQ(cfg.densities, (std::vector<double>{0.1, 0.5}));
    EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
    EXPECT_EQ(cfg.methods, (std::vector<Method>{Method::FsrAdaptive, Method::Linear}));
    EXPECT_EQ(cfg.threads, 2);
    EXPECT_EQ(cfg.params.rho_hat, 0.8);
    EXPECT_EQ(cfg.params.tau, 1.5);
    EXPECT_EQ(cfg.params.block_size, 8);
    EXPECT_EQ(cfg.params.border, 12);
    EXPECT_EQ(cfg.params.iterations, 50);
}

TEST(Config, KeyValue)
{
    const ExperimentConfig cfg = parse_config("# sweep\nimages = a.pgm\ndensities = 0.3\n"
                                              "seeds = 1, 2\ntaus = 0.1, 2\ngamma = 0.25\n");
    EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2}));
    EXPECT_EQ(cfg.taus, (std::vector<double>{0.1, 2.0}));
    EXPECT_EQ(cfg.params.gamma, 0.25);
}

TEST(Config, InvalidInputIsRejected)
{
    EXPECT_THROW(parse_config("images = a.pgm\ndensities = 0.3\nmethods = nn\nwat = 1\n"), ParameterError);
    EXPECT_THROW(parse_config("images = a.pgm\ndensities = 1.5\nmethods = nn\n"), ParameterError);
    EXPECT_THROW(parse_config("images = a.pgm\ndensities = 0.5\nmethods = nn\nrho = 1.5\n"), ParameterError);
    EXPECT_THROW(parse_config("densities = 0.5\nmethods = nn\n"), ParameterError);
    EXPECT_ANY_THROW(parse_config("{\"images\": ["));
}
