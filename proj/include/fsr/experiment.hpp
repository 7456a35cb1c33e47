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
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "baselines.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "params.hpp"
#include "reconstruct.hpp"

namespace fsr {

enum class Method { FsrAdaptive, FsrOtf, FsrNone, Linear, Nearest };

inline std::string_view method_name(Method m)
{
    switch (m) {
    case Method::FsrAdaptive: return "fsr-ap";
    case Method::FsrOtf: return "fsr-otf";
    case Method::FsrNone: return "fsr-none";
    case Method::Linear: return "lin";
    case Method::Nearest: return "nn";
    }
    return "unknown";
}

inline Method parse_method(std::string_view name)
{
    for (Method m : {Method::FsrAdaptive, Method::FsrOtf, Method::FsrNone, Method::Linear, Method::Nearest})
        if (method_name(m) == name)
            return m;
    throw ParameterError("unknown method '" + std::string(name) + "'");
}

struct MethodRun {
    ImageGrid image;
    double seconds = 0.0;
    int fallback_blocks = 0;
};

/// Runs one reconstruction method; the wall-clock time covers the reconstruction only.
inline MethodRun run_method(Method method, const ImageGrid& image, const SamplingMask& mask, FsrParams params)
{
    MethodRun run;
    const auto start = std::chrono::steady_clock::now();
    switch (method) {
    case Method::FsrAdaptive:
    case Method::FsrOtf:
    case Method::FsrNone: {
        params.prior = method == Method::FsrAdaptive ? PriorKind::Adaptive
                       : method == Method::FsrOtf    ? PriorKind::Otf
                                                     : PriorKind::None;
        ImageReconstruction rec = reconstruct_image(image, mask, params);
        run.image = std::move(rec.image);
        run.fallback_blocks = rec.fallback_blocks;
        break;
    }
    case Method::Linear: run.image = linear_triangulation_fill(image, mask).image; break;
    case Method::Nearest: run.image = nearest_neighbor_fill(image, mask); break;
    }
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return run;
}

struct ExperimentConfig {
    std::vector<std::string> images;
    std::vector<double> densities;
    std::vector<std::uint64_t> seeds{1};
    std::vector<Method> methods;
    FsrParams params;
    std::vector<double> taus; // non-empty: sweep tau with fsr-ap instead of running `methods`
    std::string output_dir;
    int threads = 1;

    void validate() const
    {
        params.validate();
        if (images.empty())
            throw ParameterError("experiment needs at least one image");
        if (methods.empty() && taus.empty())
            throw ParameterError("experiment needs at least one method");
        if (densities.empty() || seeds.empty())
            throw ParameterError("experiment needs densities and seeds");
        for (double d : densities)
            if (!(d > 0.0 && d <= 1.0))
                throw ParameterError("densities must lie in (0, 1]");
        for (double t : taus)
            if (!(t > 0.0) || !std::isfinite(t))
                throw ParameterError("tau values must be positive");
        if (threads < 1)
            throw ParameterError("threads must be at least 1");
    }
};

struct RunRow {
    std::string image;
    double density = 0.0;
    std::uint64_t seed = 0;
    Method method = Method::FsrAdaptive;
    double tau = 0.0;
    double psnr_db = 0.0;
    double seconds = 0.0;
    int fallback_blocks = 0;

    [[nodiscard]] auto key() const { return std::tie(image, density, seed, method, tau); }
};

struct Aggregate {
    double density = 0.0;
    Method method = Method::FsrAdaptive;
    double tau = 0.0;
    double mean_psnr_db = 0.0;
    double mean_seconds = 0.0;
    int runs = 0;
};

struct RunReport {
    std::vector<RunRow> rows;
    std::vector<std::string> errors;

    /// Means over images and seeds per (density, method, tau), ordered by that key.
    [[nodiscard]] std::vector<Aggregate> aggregate() const
    {
        std::map<std::tuple<double, int, double>, Aggregate> groups;
        for (const RunRow& r : rows) {
            Aggregate& a = groups[{r.density, static_cast<int>(r.method), r.tau}];
            a.density = r.density;
            a.method = r.method;
            a.tau = r.tau;
            a.mean_psnr_db += r.psnr_db;
            a.mean_seconds += r.seconds;
            ++a.runs;
        }
        std::vector<Aggregate> out;
        for (auto& [key, a] : groups) {
            a.mean_psnr_db /= a.runs;
            a.mean_seconds /= a.runs;
            out.push_back(a);
        }
        return out;
    }

    [[nodiscard]] std::optional<double> mean_psnr(Method method, double density,
                                                  std::optional<double> tau = std::nullopt) const
    {
        double sum = 0.0;
        int n = 0;
        for (const RunRow& r : rows) {
            if (r.method == method && r.density == density && (!tau || r.tau == *tau)) {
                sum += r.psnr_db;
                ++n;
            }
        }
        if (n == 0)
            return std::nullopt;
        return sum / n;
    }
};

struct NamedImage {
    std::string name;
    ImageGrid image;
};

namespace detail {

struct Job {
    std::size_t image;
    double density;
    std::uint64_t seed;
    Method method;
    double tau;
};

template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body)
{
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++)
            body(i);
    };
    const int n = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t)
        pool.emplace_back(worker);
    worker();
    for (auto& th : pool)
        th.join();
}

inline RunReport run_jobs(const ExperimentConfig& config, std::span<const NamedImage> images,
                          const std::vector<Job>& jobs)
{
    RunReport report;
    report.rows.resize(jobs.size());
    std::vector<std::string> failures(jobs.size());
    parallel_for(jobs.size(), config.threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        const NamedImage& img = images[job.image];
        RunRow& row = report.rows[i];
        row = {img.name, job.density, job.seed, job.method, job.tau, 0.0, 0.0, 0};
        try {
            const SamplingMask mask = generate_mask(img.image.width(), img.image.height(), job.density, job.seed);
            FsrParams params = config.params;
            params.tau = job.tau;
            const MethodRun run = run_method(job.method, img.image, mask, params);
            row.psnr_db = psnr(img.image, run.image);
            row.seconds = run.seconds;
            row.fallback_blocks = run.fallback_blocks;
        } catch (const std::exception& e) {
            failures[i] = img.name + " [" + std::string(method_name(job.method)) + "]: " + e.what();
        }
    });
    // drop failed rows, keep order
    RunReport out;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (failures[i].empty())
            out.rows.push_back(std::move(report.rows[i]));
        else
            out.errors.push_back(std::move(failures[i]));
    }
    return out;
}

} // namespace detail

/// Density sweep over in-memory images. One mask per (image, density, seed) is shared by all methods.
inline RunReport run_experiment(const ExperimentConfig& config, std::span<const NamedImage> images)
{
    std::vector<detail::Job> jobs;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (double d : config.densities)
            for (std::uint64_t s : config.seeds)
                for (Method m : config.methods)
                    jobs.push_back({i, d, s, m, config.params.tau});
    return detail::run_jobs(config, images, jobs);
}

/// fsr-ap only, once per tau value.
inline RunReport sweep_tau(const ExperimentConfig& config, std::span<const double> taus,
                           std::span<const NamedImage> images)
{
    for (double t : taus)
        if (!(t > 0.0) || !std::isfinite(t))
            throw ParameterError("tau values must be positive");
    std::vector<detail::Job> jobs;
    for (std::size_t i = 0; i < images.size(); ++i)
        for (double d : config.densities)
            for (std::uint64_t s : config.seeds)
                for (double t : taus)
                    jobs.push_back({i, d, s, Method::FsrAdaptive, t});
    return detail::run_jobs(config, images, jobs);
}

/// Loads the configured image files; unreadable ones are recorded as errors and skipped.
inline std::vector<NamedImage> load_images(const std::vector<std::string>& paths, std::vector<std::string>& errors)
{
    std::vector<NamedImage> images;
    for (const std::string& path : paths) {
        try {
            images.push_back({path, read_pnm(path)});
        } catch (const std::exception& e) {
            errors.push_back(path + ": " + e.what());
        }
    }
    return images;
}

inline RunReport run_experiment(const ExperimentConfig& config)
{
    config.validate();
    std::vector<std::string> errors;
    const std::vector<NamedImage> images = load_images(config.images, errors);
    RunReport report = config.taus.empty() ? run_experiment(config, images) : sweep_tau(config, config.taus, images);
    report.errors.insert(report.errors.begin(), errors.begin(), errors.end());
    return report;
}

// ---------------------------------------------------------------------------------------------
// CSV report

inline constexpr std::string_view kCsvHeader = "image,density,seed,method,tau,psnr_db,seconds,fallback_blocks";

namespace detail {

inline std::string format_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_number(const std::string& s)
{
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw ParameterError("malformed number '" + s + "'");
    return v;
}

inline std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

inline std::vector<std::string> csv_split(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else if (c != '\r') {
            fields.back() += c;
        }
    }
    return fields;
}

} // namespace detail

inline void write_csv(std::ostream& out, const RunReport& report)
{
    out << kCsvHeader << '\n';
    for (const RunRow& r : report.rows) {
        out << detail::csv_escape(r.image) << ',' << detail::format_number(r.density) << ',' << r.seed << ','
            << method_name(r.method) << ',' << detail::format_number(r.tau) << ','
            << detail::format_number(r.psnr_db) << ',' << detail::format_number(r.seconds) << ','
            << r.fallback_blocks << '\n';
    }
}

inline RunReport read_csv(std::istream& in)
{
    RunReport report;
    std::string line;
    if (!std::getline(in, line) || (line != kCsvHeader && line != std::string(kCsvHeader) + "\r"))
        throw ParameterError("unexpected CSV header");
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        const auto f = detail::csv_split(line);
        if (f.size() != 8)
            throw ParameterError("CSV row with " + std::to_string(f.size()) + " fields");
        RunRow r;
        r.image = f[0];
        r.density = detail::parse_number(f[1]);
        r.seed = std::stoull(f[2]);
        r.method = parse_method(f[3]);
        r.tau = detail::parse_number(f[4]);
        r.psnr_db = detail::parse_number(f[5]);
        r.seconds = detail::parse_number(f[6]);
        r.fallback_blocks = std::stoi(f[7]);
        report.rows.push_back(std::move(r));
    }
    return report;
}

inline void write_summary_csv(std::ostream& out, const RunReport& report)
{
    out << "density,method,tau,runs,mean_psnr_db,mean_seconds\n";
    for (const Aggregate& a : report.aggregate())
        out << detail::format_number(a.density) << ',' << method_name(a.method) << ','
            << detail::format_number(a.tau) << ',' << a.runs << ',' << detail::format_number(a.mean_psnr_db) << ','
            << detail::format_number(a.mean_seconds) << '\n';
}

// ---------------------------------------------------------------------------------------------
// Configuration

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(std::move(t));
    return out;
}

/// Applies one FSR parameter by its CLI name. Returns false for unknown keys.
inline bool apply_param(FsrParams& p, const std::string& key, double value)
{
    auto as_int = [&] {
        if (value != std::floor(value))
            throw ParameterError(key + " must be an integer");
        return static_cast<int>(value);
    };
    if (key == "rho") p.rho_hat = value;
    else if (key == "delta") p.delta = value;
    else if (key == "gamma") p.gamma = value;
    else if (key == "tau") p.tau = value;
    else if (key == "alpha_max") p.alpha_max = value;
    else if (key == "block") p.block_size = as_int();
    else if (key == "border") p.border = as_int();
    else if (key == "iters") p.iterations = as_int();
    else return false;
    return true;
}

inline std::vector<Method> parse_methods(const std::vector<std::string>& names)
{
    std::vector<Method> out;
    for (const auto& n : names)
        out.push_back(parse_method(n));
    return out;
}

inline ExperimentConfig parse_json_config(const std::string& text)
{
    ExperimentConfig cfg;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("invalid JSON config: ") + e.what());
    }
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& key = it.key();
            if (key == "images") cfg.images = it->get<std::vector<std::string>>();
            else if (key == "densities") cfg.densities = it->get<std::vector<double>>();
            else if (key == "seeds") cfg.seeds = it->get<std::vector<std::uint64_t>>();
            else if (key == "methods") cfg.methods = parse_methods(it->get<std::vector<std::string>>());
            else if (key == "taus") cfg.taus = it->get<std::vector<double>>();
            else if (key == "threads") cfg.threads = it->get<int>();
            else if (key == "output_dir") cfg.output_dir = it->get<std::string>();
            else if (key == "params") {
                for (auto p = it->begin(); p != it->end(); ++p)
                    if (!apply_param(cfg.params, p.key(), p->get<double>()))
                        throw ParameterError("unknown parameter '" + p.key() + "'");
            } else if (!apply_param(cfg.params, key, it->get<double>())) {
                throw ParameterError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParameterError(std::string("invalid config value: ") + e.what());
    }
    return cfg;
}

inline ExperimentConfig parse_key_value_config(const std::string& text)
{
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("expected 'key = value' in config line '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto items = split_list(value);
        auto numbers = [&] {
            std::vector<double> v;
            for (const auto& s : items)
                v.push_back(parse_number(s));
            return v;
        };
        if (key == "images") cfg.images = items;
        else if (key == "densities") cfg.densities = numbers();
        else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& s : items)
                cfg.seeds.push_back(std::stoull(s));
        } else if (key == "methods") cfg.methods = parse_methods(items);
        else if (key == "taus") cfg.taus = numbers();
        else if (key == "threads") cfg.threads = std::stoi(value);
        else if (key == "output_dir") cfg.output_dir = value;
        else if (!apply_param(cfg.params, key, parse_number(value)))
            throw ParameterError("unknown config key '" + key + "'");
    }
    return cfg;
}

} // namespace detail

/// Parses a JSON object or flat `key = value` lines (lists comma separated).
inline ExperimentConfig parse_config(const std::string& text)
{
    const std::string t = detail::trim(text);
    ExperimentConfig cfg = !t.empty() && t.front() == '{' ? detail::parse_json_config(t)
                                                          : detail::parse_key_value_config(t);
    cfg.validate();
    return cfg;
}

} // namespace fsr
