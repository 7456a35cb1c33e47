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
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"

namespace fsr {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void skip_space_and_comments(std::istream& in)
{
    for (;;) {
        const int ch = in.peek();
        if (ch == '#') {
            std::string ignored;
            std::getline(in, ignored);
        } else if (ch == ' ' || ch == '\t' || ch == '\r' || ch == '\n') {
            in.get();
        } else {
            return;
        }
    }
}

inline long read_header_int(std::istream& in)
{
    skip_space_and_comments(in);
    long value = -1;
    if (!(in >> value) || value < 0)
        throw IoError("malformed PNM header");
    return value;
}

inline double luma(double r, double g, double b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

} // namespace detail

/// Reads a PGM (P2/P5) or PPM (P3/P6) image. Color input is converted to BT.601 luma; samples
/// are rescaled to [0, 255] when the file's maxval differs from 255.
inline ImageGrid read_pnm(std::istream& in)
{
    std::string magic(2, '\0');
    if (!in.read(magic.data(), 2))
        throw IoError("empty PNM stream");
    if (magic != "P2" && magic != "P5" && magic != "P3" && magic != "P6")
        throw IoError("unsupported PNM format " + magic);
    const long width = detail::read_header_int(in);
    const long height = detail::read_header_int(in);
    const long maxval = detail::read_header_int(in);
    if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
        throw IoError("invalid PNM dimensions or maxval");
    const bool color = magic == "P3" || magic == "P6";
    const bool binary = magic == "P5" || magic == "P6";
    const int channels = color ? 3 : 1;
    const std::size_t count = static_cast<std::size_t>(width) * height * channels;

    std::vector<double> raw(count);
    if (binary) {
        in.get(); // single whitespace after maxval
        const int bytes = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(count * bytes);
        if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
            throw IoError("truncated PNM pixel data");
        for (std::size_t i = 0; i < count; ++i)
            raw[i] = bytes == 1 ? buf[i] : static_cast<double>((buf[2 * i] << 8) | buf[2 * i + 1]);
    } else {
        for (std::size_t i = 0; i < count; ++i)
            raw[i] = static_cast<double>(detail::read_header_int(in));
    }
    for (double v : raw)
        if (v > static_cast<double>(maxval))
            throw IoError("PNM sample exceeds maxval");

    const double scale = maxval == 255 ? 1.0 : 255.0 / static_cast<double>(maxval);
    std::vector<double> samples(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double v = color ? detail::luma(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]) : raw[i];
        samples[i] = scale == 1.0 ? v : v * scale;
    }
    return ImageGrid(static_cast<int>(width), static_cast<int>(height), std::move(samples));
}

inline ImageGrid read_pnm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    return read_pnm(in);
}

/// Writes a binary 8-bit PGM; samples are rounded and clamped to [0, 255].
inline void write_pgm(std::ostream& out, const ImageGrid& image)
{
    out << "P5\n" << image.width() << ' ' << image.height() << "\n255\n";
    std::vector<unsigned char> buf(image.size());
    std::transform(image.samples().begin(), image.samples().end(), buf.begin(), [](double v) {
        return static_cast<unsigned char>(std::clamp(std::lround(v), 0L, 255L));
    });
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out)
        throw IoError("failed writing PGM");
}

inline void write_pgm(const std::string& path, const ImageGrid& image)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot create " + path);
    write_pgm(out, image);
}

/// Reads a PBM (P1/P4) mask; a set bit (black pixel) marks an available sample.
inline SamplingMask read_pbm(std::istream& in)
{
    std::string magic(2, '\0');
    if (!in.read(magic.data(), 2) || (magic != "P1" && magic != "P4"))
        throw IoError("not a PBM stream");
    const long width = detail::read_header_int(in);
    const long height = detail::read_header_int(in);
    if (width < 1 || height < 1)
        throw IoError("invalid PBM dimensions");
    SamplingMask mask(static_cast<int>(width), static_cast<int>(height));
    if (magic == "P4") {
        in.get();
        const std::size_t stride = (static_cast<std::size_t>(width) + 7) / 8;
        std::vector<unsigned char> row(stride);
        for (int r = 0; r < height; ++r) {
            if (!in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(stride)))
                throw IoError("truncated PBM data");
            for (int c = 0; c < width; ++c)
                mask.set(r, c, (row[c / 8] >> (7 - c % 8)) & 1);
        }
    } else {
        for (int r = 0; r < height; ++r) {
            for (int c = 0; c < width; ++c) {
                detail::skip_space_and_comments(in);
                const int ch = in.get();
                if (ch != '0' && ch != '1')
                    throw IoError("malformed PBM data");
                mask.set(r, c, ch == '1');
            }
        }
    }
    return mask;
}

inline SamplingMask read_pbm(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path);
    return read_pbm(in);
}

inline void write_pbm(std::ostream& out, const SamplingMask& mask)
{
    out << "P4\n" << mask.width() << ' ' << mask.height() << '\n';
    const std::size_t stride = (static_cast<std::size_t>(mask.width()) + 7) / 8;
    std::vector<unsigned char> row(stride);
    for (int r = 0; r < mask.height(); ++r) {
        std::fill(row.begin(), row.end(), 0);
        for (int c = 0; c < mask.width(); ++c)
            if (mask(r, c))
                row[c / 8] |= static_cast<unsigned char>(1u << (7 - c % 8));
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(stride));
    }
    if (!out)
        throw IoError("failed writing PBM");
}

inline void write_pbm(const std::string& path, const SamplingMask& mask)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot create " + path);
    write_pbm(out, mask);
}

} // namespace fsr
