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
#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "params.hpp"

namespace fsr {

namespace detail {

struct Candidate {
    std::int64_t d2 = std::numeric_limits<std::int64_t>::max();
    Pixel at{-1, -1};

    void offer(std::int64_t dist2, Pixel p)
    {
        if (std::tie(dist2, p.row, p.col) < std::tie(d2, at.row, at.col)) {
            d2 = dist2;
            at = p;
        }
    }
};

} // namespace detail

/// Fills every unavailable pixel with the Euclidean-nearest available sample.
/// Equidistant candidates resolve to the smallest (row, col).
inline ImageGrid nearest_neighbor_fill(const ImageGrid& image, const SamplingMask& mask)
{
    if (!mask.matches(image))
        throw ParameterError("image and mask dimensions differ");
    std::vector<Pixel> known;
    for (int r = 0; r < image.height(); ++r)
        for (int c = 0; c < image.width(); ++c)
            if (mask(r, c))
                known.push_back({r, c});
    if (known.empty())
        throw ParameterError("nearest neighbor fill needs at least one available sample");

    ImageGrid out = image;
    const bool brute = known.size() <= 64;
    const int max_radius = std::max(image.width(), image.height());
    for (int r = 0; r < image.height(); ++r) {
        for (int c = 0; c < image.width(); ++c) {
            if (mask(r, c))
                continue;
            detail::Candidate best;
            auto visit = [&](int rr, int cc) {
                if (!image.contains(rr, cc) || !mask(rr, cc))
                    return;
                const std::int64_t dr = rr - r;
                const std::int64_t dc = cc - c;
                best.offer(dr * dr + dc * dc, {rr, cc});
            };
            if (brute) {
                for (const Pixel& p : known)
                    visit(p.row, p.col);
            } else {
                // Rings of growing Chebyshev radius; a ring at radius R only holds distances >= R.
                for (int radius = 1; radius <= max_radius; ++radius) {
                    if (static_cast<std::int64_t>(radius) * radius > best.d2)
                        break;
                    for (int cc = c - radius; cc <= c + radius; ++cc) {
                        visit(r - radius, cc);
                        visit(r + radius, cc);
                    }
                    for (int rr = r - radius + 1; rr <= r + radius - 1; ++rr) {
                        visit(rr, c - radius);
                        visit(rr, c + radius);
                    }
                }
            }
            out(r, c) = image(best.at.row, best.at.col);
        }
    }
    return out;
}

/// Triangle of a Delaunay triangulation, counter-clockwise in (col, row) coordinates.
struct Triangle {
    std::array<int, 3> v{}; // indices into the point list
};

namespace detail {

using Wide = __int128;

struct Point2 {
    std::int64_t x = 0; // column
    std::int64_t y = 0; // row
};

inline std::int64_t orient(const Point2& a, const Point2& b, const Point2& c)
{
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// > 0 when d lies strictly inside the circumcircle of the counter-clockwise triangle abc.
inline int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d)
{
    const Wide adx = a.x - d.x, ady = a.y - d.y;
    const Wide bdx = b.x - d.x, bdy = b.y - d.y;
    const Wide cdx = c.x - d.x, cdy = c.y - d.y;
    const Wide alift = adx * adx + ady * ady;
    const Wide blift = bdx * bdx + bdy * bdy;
    const Wide clift = cdx * cdx + cdy * cdy;
    const Wide det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy)
                     + clift * (adx * bdy - bdx * ady);
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

/// Incremental Bowyer-Watson triangulation with exact integer predicates.
class Delaunay {
public:
    explicit Delaunay(std::span<const Pixel> pixels)
    {
        constexpr std::int64_t big = 1'000'000;
        for (const Pixel& p : pixels)
            points_.push_back({p.col, p.row});
        const int n = static_cast<int>(points_.size());
        points_.push_back({-big, -big});
        points_.push_back({3 * big, -big});
        points_.push_back({-big, 3 * big});
        tris_.push_back({{n, n + 1, n + 2}, {-1, -1, -1}, true});
        for (int i = 0; i < n; ++i)
            insert(i);
        for (const Tri& t : tris_) {
            if (!t.alive || t.v[0] >= n || t.v[1] >= n || t.v[2] >= n)
                continue;
            if (orient(points_[t.v[0]], points_[t.v[1]], points_[t.v[2]]) <= 0)
                continue;
            triangles_.push_back({t.v});
        }
    }

    [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }

private:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nbr; // nbr[i] lies across the edge opposite v[i]
        bool alive;
    };

    int locate(const Point2& p)
    {
        int t = last_;
        for (std::size_t steps = 0; steps < 4 * tris_.size() + 16; ++steps) {
            const Tri& tri = tris_[t];
            bool moved = false;
            const int start = static_cast<int>(rotation_++ % 3);
            for (int j = 0; j < 3; ++j) {
                const int i = (start + j) % 3;
                const Point2& a = points_[tri.v[(i + 1) % 3]];
                const Point2& b = points_[tri.v[(i + 2) % 3]];
                if (orient(a, b, p) < 0 && tri.nbr[i] >= 0) {
                    t = tri.nbr[i];
                    moved = true;
                    break;
                }
            }
            if (!moved)
                return t;
        }
        // walk did not settle; fall back to a scan
        for (int i = 0; i < static_cast<int>(tris_.size()); ++i) {
            const Tri& tri = tris_[i];
            if (tri.alive && orient(points_[tri.v[0]], points_[tri.v[1]], p) >= 0
                && orient(points_[tri.v[1]], points_[tri.v[2]], p) >= 0
                && orient(points_[tri.v[2]], points_[tri.v[0]], p) >= 0)
                return i;
        }
        return last_;
    }

    void insert(int pi)
    {
        const Point2& p = points_[pi];
        const int seed = locate(p);

        cavity_.clear();
        stack_.assign(1, seed);
        tris_[seed].alive = false;
        while (!stack_.empty()) {
            const int t = stack_.back();
            stack_.pop_back();
            cavity_.push_back(t);
            for (int nb : tris_[t].nbr) {
                if (nb < 0 || !tris_[nb].alive)
                    continue;
                const Tri& q = tris_[nb];
                if (incircle(points_[q.v[0]], points_[q.v[1]], points_[q.v[2]], p) > 0) {
                    tris_[nb].alive = false;
                    stack_.push_back(nb);
                }
            }
        }

        // Boundary edges of the cavity become fans around p.
        fan_.clear();
        for (int t : cavity_) {
            for (int i = 0; i < 3; ++i) {
                const int nb = tris_[t].nbr[i];
                if (nb >= 0 && !tris_[nb].alive)
                    continue;
                const int a = tris_[t].v[(i + 1) % 3];
                const int b = tris_[t].v[(i + 2) % 3];
                const int id = static_cast<int>(tris_.size());
                tris_.push_back({{pi, a, b}, {nb, -1, -1}, true});
                if (nb >= 0) {
                    for (int& back : tris_[nb].nbr)
                        if (back == t)
                            back = id;
                }
                fan_.push_back({a, b, id});
            }
        }
        // new triangle (p, a, b): edge opposite a is (b, p), shared with the fan member starting at b
        for (const auto& [a, b, id] : fan_) {
            for (const auto& [a2, b2, id2] : fan_) {
                if (a2 == b)
                    tris_[id].nbr[1] = id2;
                if (b2 == a)
                    tris_[id].nbr[2] = id2;
            }
        }
        last_ = static_cast<int>(tris_.size()) - 1;
    }

    struct FanEdge {
        int a;
        int b;
        int id;
    };

    std::vector<Point2> points_;
    std::vector<Tri> tris_;
    std::vector<Triangle> triangles_;
    std::vector<int> cavity_;
    std::vector<int> stack_;
    std::vector<FanEdge> fan_;
    int last_ = 0;
    std::uint64_t rotation_ = 0;
};

} // namespace detail

/// Delaunay triangulation of pixel positions. Empty when fewer than three points or all collinear.
inline std::vector<Triangle> delaunay_triangulate(std::span<const Pixel> points)
{
    if (points.size() < 3)
        return {};
    return detail::Delaunay(points).triangles();
}

struct LinearFill {
    ImageGrid image;
    bool used_nearest_fallback = false; // fewer than three non-collinear samples
};

/// Piecewise-linear interpolation over the Delaunay triangulation of the available samples.
/// Pixels outside the triangulated hull take their nearest available sample.
inline LinearFill linear_triangulation_fill(const ImageGrid& image, const SamplingMask& mask)
{
    if (!mask.matches(image))
        throw ParameterError("image and mask dimensions differ");
    std::vector<Pixel> known;
    for (int r = 0; r < image.height(); ++r)
        for (int c = 0; c < image.width(); ++c)
            if (mask(r, c))
                known.push_back({r, c});

    const std::vector<Triangle> tris = delaunay_triangulate(known);
    LinearFill out;
    if (tris.empty()) {
        out.image = nearest_neighbor_fill(image, mask);
        out.used_nearest_fallback = true;
        return out;
    }

    out.image = image;
    SamplingMask filled = mask;
    std::size_t remaining = mask.size() - mask.count();
    for (const Triangle& t : tris) {
        const Pixel& pa = known[t.v[0]];
        const Pixel& pb = known[t.v[1]];
        const Pixel& pc = known[t.v[2]];
        const detail::Point2 a{pa.col, pa.row}, b{pb.col, pb.row}, c{pc.col, pc.row};
        const std::int64_t area = detail::orient(a, b, c);
        const double va = image(pa.row, pa.col);
        const double vb = image(pb.row, pb.col);
        const double vc = image(pc.row, pc.col);
        const int r0 = std::min({pa.row, pb.row, pc.row});
        const int r1 = std::max({pa.row, pb.row, pc.row});
        const int c0 = std::min({pa.col, pb.col, pc.col});
        const int c1 = std::max({pa.col, pb.col, pc.col});
        for (int r = r0; r <= r1; ++r) {
            for (int col = c0; col <= c1; ++col) {
                if (filled(r, col))
                    continue;
                const detail::Point2 p{col, r};
                const std::int64_t wa = detail::orient(b, c, p);
                const std::int64_t wb = detail::orient(c, a, p);
                const std::int64_t wc = detail::orient(a, b, p);
                if (wa < 0 || wb < 0 || wc < 0)
                    continue;
                out.image(r, col) = (static_cast<double>(wa) * va + static_cast<double>(wb) * vb
                                     + static_cast<double>(wc) * vc)
                                    / static_cast<double>(area);
                filled.set(r, col, true);
                --remaining;
            }
        }
    }
    if (remaining > 0) {
        const ImageGrid nearest = nearest_neighbor_fill(image, mask);
        for (std::size_t i = 0; i < filled.size(); ++i)
            if (!filled.at_index(i))
                out.image.samples()[i] = nearest.samples()[i];
    }
    return out;
}

} // namespace fsr
