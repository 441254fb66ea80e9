#pragma once

// Synthetic inputs shared by the unit and acceptance suites.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sketchseg/bezier.hpp"
#include "sketchseg/raster.hpp"
#include "sketchseg/rng.hpp"
#include "sketchseg/transport.hpp"

namespace support {

// Stroke-shaped cubic: endpoints 60-140 apart, inner controls near the
// thirds of the chord with moderate lateral spread. This is the regime
// the fitter is built for; wilder control polygons (cusps, loops) are
// not representative of thinned sketch strokes.
inline sseg::CubicBezier random_stroke(sseg::RngStream& rng) {
    sseg::Point2 p0{40.0 * rng.next_unit(), 40.0 * rng.next_unit()};
    const double ang = 6.283185307179586 * rng.next_unit();
    const double clen = 60.0 + 80.0 * rng.next_unit();
    const sseg::Point2 u{std::cos(ang), std::sin(ang)};
    const sseg::Point2 nvec{-u.y, u.x};
    const auto [g0, g1] = rng.gaussian_pair();
    const double off0 = 0.25 * clen * g0;
    const double off1 = 0.25 * clen * g1;
    const double along0 = -0.1 + 0.2 * rng.next_unit();
    const double along1 = -0.1 + 0.2 * rng.next_unit();
    sseg::CubicBezier c;
    c.p0 = p0;
    c.p3 = {p0.x + clen * u.x, p0.y + clen * u.y};
    c.p1 = {p0.x + clen * u.x * (1.0 / 3.0 + along0) + nvec.x * off0,
            p0.y + clen * u.y * (1.0 / 3.0 + along0) + nvec.y * off0};
    c.p2 = {p0.x + clen * u.x * (2.0 / 3.0 + along1) + nvec.x * off1,
            p0.y + clen * u.y * (2.0 / 3.0 + along1) + nvec.y * off1};
    return c;
}

// `count` exact curve points at parameters approximately equally spaced
// in arc length (parameter found on a dense polyline, point evaluated on
// the curve so samples carry no interpolation error).
inline std::vector<sseg::Point2> arclength_samples(
    const sseg::CubicBezier& c, int count) {
    constexpr int kDense = 2000;
    std::vector<sseg::Point2> poly(kDense + 1);
    std::vector<double> cum(kDense + 1, 0.0);
    for (int i = 0; i <= kDense; ++i) {
        poly[static_cast<std::size_t>(i)] =
            sseg::eval(c, static_cast<double>(i) / kDense);
        if (i > 0) {
            const auto& a = poly[static_cast<std::size_t>(i - 1)];
            const auto& b = poly[static_cast<std::size_t>(i)];
            cum[static_cast<std::size_t>(i)] =
                cum[static_cast<std::size_t>(i - 1)] +
                std::hypot(b.x - a.x, b.y - a.y);
        }
    }
    const double total = cum.back();
    std::vector<sseg::Point2> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double target =
            total * static_cast<double>(k) / (count - 1);
        const auto it = std::lower_bound(cum.begin(), cum.end(), target);
        const std::size_t hi =
            std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()),
                                  kDense);
        double t;
        if (hi == 0) {
            t = 0.0;
        } else {
            const double seg = cum[hi] - cum[hi - 1];
            const double frac =
                seg == 0.0 ? 0.0 : (target - cum[hi - 1]) / seg;
            t = (static_cast<double>(hi - 1) + frac) / kDense;
        }
        out.push_back(sseg::eval(c, std::clamp(t, 0.0, 1.0)));
    }
    out.front() = sseg::eval(c, 0.0);
    out.back() = sseg::eval(c, 1.0);
    return out;
}

// sup_t |a(t) - b(t)| over a uniform t grid.
inline double max_deviation(const sseg::CubicBezier& a,
                            const sseg::CubicBezier& b, int grid) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t = static_cast<double>(i) / (grid - 1);
        const sseg::Point2 pa = sseg::eval(a, t);
        const sseg::Point2 pb = sseg::eval(b, t);
        worst = std::max(worst, std::hypot(pa.x - pb.x, pa.y - pb.y));
    }
    return worst;
}

// A few rendered strokes scaled into the canvas; retries until the
// canvas is non-empty.
inline sseg::BinaryMask random_sketch(int w, int h, int strokes,
                                      sseg::RngStream& rng,
                                      int thickness = 3) {
    sseg::BinaryMask mask = sseg::make_mask(w, h);
    for (int s = 0; s < strokes; ++s) {
        sseg::CubicBezier c = random_stroke(rng);
        // map the 0..180-ish stroke box into the canvas with margin
        const double sx = (w - 20) / 180.0;
        const double sy = (h - 20) / 180.0;
        for (sseg::Point2* p : {&c.p0, &c.p1, &c.p2, &c.p3}) {
            p->x = 10.0 + (p->x + 35.0) * sx;
            p->y = 10.0 + (p->y + 35.0) * sy;
        }
        mask = sseg::render(c, mask, thickness);
    }
    bool any = false;
    for (auto v : mask.bits) any = any || v != 0;
    if (!any) mask.set(w / 2, h / 2, 1);
    return mask;
}

// Disc-and-stroke blobs for thinning tests.
inline sseg::BinaryMask random_blob(int w, int h, sseg::RngStream& rng) {
    sseg::BinaryMask mask = sseg::make_mask(w, h);
    const int discs = 2 + static_cast<int>(rng.next_unit() * 3.0);
    for (int d = 0; d < discs; ++d) {
        const int cx = static_cast<int>(rng.next_unit() * w);
        const int cy = static_cast<int>(rng.next_unit() * h);
        const int r = 3 + static_cast<int>(rng.next_unit() * 9.0);
        for (int y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y)
            for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r);
                 ++x)
                if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r)
                    mask.set(x, y, 1);
    }
    if (rng.next_unit() < 0.7) {
        sseg::BinaryMask strokes = random_sketch(w, h, 1, rng, 3);
        for (std::size_t i = 0; i < mask.bits.size(); ++i)
            mask.bits[i] = mask.bits[i] | strokes.bits[i];
    }
    return mask;
}

// Rows of '#' (foreground) and '.' build small hand-checked masks.
inline sseg::BinaryMask mask_from(const std::vector<std::string>& rows) {
    const int h = static_cast<int>(rows.size());
    const int w = h == 0 ? 0 : static_cast<int>(rows[0].size());
    sseg::BinaryMask m = sseg::make_mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            m.set(x, y, rows[static_cast<std::size_t>(y)]
                                     [static_cast<std::size_t>(x)] == '#'
                            ? 1
                            : 0);
    return m;
}

inline sseg::RealMatrix real_from(const sseg::BinaryMask& m) {
    sseg::RealMatrix r;
    r.rows = m.height;
    r.cols = m.width;
    r.values.assign(m.bits.begin(), m.bits.end());
    return r;
}

inline sseg::RealMatrix random_real(int w, int h, sseg::RngStream& rng) {
    sseg::RealMatrix r;
    r.rows = h;
    r.cols = w;
    r.values.resize(static_cast<std::size_t>(w) * h);
    for (double& v : r.values) v = rng.next_unit();
    return r;
}

inline sseg::BinaryMask random_mask(int w, int h, double density,
                                    sseg::RngStream& rng) {
    sseg::BinaryMask m = sseg::make_mask(w, h);
    for (auto& b : m.bits) b = rng.next_unit() < density ? 1 : 0;
    return m;
}

}  // namespace support
