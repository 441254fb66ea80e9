#include "sketchseg/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>

#include "sketchseg/errors.hpp"

namespace sseg {

namespace {

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2 p) { return std::sqrt(dot(p, p)); }

Point2 eval_unchecked(const CubicBezier& c, double t) {
    const double u = 1.0 - t;
    return (u * u * u) * c.p0 + (3.0 * t * u * u) * c.p1 +
           (3.0 * t * t * u) * c.p2 + (t * t * t) * c.p3;
}

Point2 eval_d1(const CubicBezier& c, double t) {
    const double u = 1.0 - t;
    return (3.0 * u * u) * (c.p1 - c.p0) + (6.0 * t * u) * (c.p2 - c.p1) +
           (3.0 * t * t) * (c.p3 - c.p2);
}

Point2 eval_d2(const CubicBezier& c, double t) {
    const double u = 1.0 - t;
    return (6.0 * u) * (c.p2 - 2.0 * c.p1 + c.p0) +
           (6.0 * t) * (c.p3 - 2.0 * c.p2 + c.p1);
}

std::vector<double> chord_params(const std::vector<Point2>& pts) {
    const std::size_t n = pts.size();
    std::vector<double> t(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
        t[i] = t[i - 1] + norm(pts[i] - pts[i - 1]);
    const double total = t[n - 1];
    if (total <= 0.0) {
        for (std::size_t i = 0; i < n; ++i)
            t[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        return t;
    }
    for (std::size_t i = 0; i < n; ++i) t[i] /= total;
    return t;
}

// Endpoint-pinned least squares for p1, p2 at fixed parameters. Empty
// result when the 2x2 normal equations are rank-deficient.
std::optional<CubicBezier> ls_fit_at(const std::vector<Point2>& pts,
                                     const std::vector<double>& t) {
    const std::size_t n = pts.size();
    const Point2 p0 = pts.front(), p3 = pts.back();
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    Point2 r1{}, r2{};
    for (std::size_t i = 0; i < n; ++i) {
        const double ti = t[i], u = 1.0 - ti;
        const double b1 = 3.0 * ti * u * u;
        const double b2 = 3.0 * ti * ti * u;
        const Point2 resid = pts[i] - (u * u * u) * p0 - (ti * ti * ti) * p3;
        a11 += b1 * b1;
        a12 += b1 * b2;
        a22 += b2 * b2;
        r1 = r1 + b1 * resid;
        r2 = r2 + b2 * resid;
    }
    const double det = a11 * a22 - a12 * a12;
    const double scale = std::max({a11, a22, 1e-30});
    if (std::abs(det) < 1e-12 * scale * scale) return std::nullopt;
    CubicBezier out;
    out.p0 = p0;
    out.p3 = p3;
    out.p1 = (1.0 / det) * (a22 * r1 - a12 * r2);
    out.p2 = (1.0 / det) * (a11 * r2 - a12 * r1);
    return out;
}

// Parameter of the curve point nearest to q: coarse grid then damped
// Newton on the squared-distance derivative.
double project(const CubicBezier& c, Point2 q) {
    constexpr int kGrid = 64;
    double t = 0.0, best = std::numeric_limits<double>::max();
    for (int k = 0; k <= kGrid; ++k) {
        const double tk = static_cast<double>(k) / kGrid;
        const Point2 d = eval_unchecked(c, tk) - q;
        const double d2 = dot(d, d);
        if (d2 < best) {
            best = d2;
            t = tk;
        }
    }
    for (int it = 0; it < 10; ++it) {
        const Point2 diff = eval_unchecked(c, t) - q;
        const Point2 d1 = eval_d1(c, t);
        const Point2 d2 = eval_d2(c, t);
        const double den = dot(d1, d1) + dot(diff, d2);
        if (std::abs(den) < 1e-300) break;
        const double tn = std::clamp(t - dot(diff, d1) / den, 0.0, 1.0);
        const Point2 dn = eval_unchecked(c, tn) - q;
        if (dot(dn, dn) > dot(diff, diff)) break;
        if (std::abs(tn - t) < 1e-15) return tn;
        t = tn;
    }
    return t;
}

// In-place Cholesky solve of the SPD system A x = b; false if A is not
// numerically positive definite.
bool cholesky_solve(std::vector<double>& A, std::vector<double>& b, int n) {
    for (int j = 0; j < n; ++j) {
        double d = A[j * n + j];
        for (int k = 0; k < j; ++k) d -= A[j * n + k] * A[j * n + k];
        if (d <= 0.0) return false;
        const double l = std::sqrt(d);
        A[j * n + j] = l;
        for (int i = j + 1; i < n; ++i) {
            double s = A[i * n + j];
            for (int k = 0; k < j; ++k) s -= A[i * n + k] * A[j * n + k];
            A[i * n + j] = s / l;
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= A[i * n + k] * b[k];
        b[i] = s / A[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= A[k * n + i] * b[k];
        b[i] = s / A[i * n + i];
    }
    return true;
}

double sum_sq_residual(const std::vector<Point2>& pts,
                       const CubicBezier& c, const std::vector<double>& t) {
    double f = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Point2 d = eval_unchecked(c, t[i]) - pts[i];
        f += dot(d, d);
    }
    return f;
}

struct FitResult {
    CubicBezier curve;
    double residual = std::numeric_limits<double>::max();
    bool ok = false;
};

// One fitting attempt: fixed-parameter LS, then alternating
// projection/refit, then joint Levenberg-Marquardt over (p1, p2, interior
// parameters). Exact cubic samples drive the residual to machine zero,
// which forces back the generating control points (two distinct cubics
// share at most nine points).
FitResult fit_once(const std::vector<Point2>& pts, std::vector<double> t) {
    constexpr int kWarmupRounds = 25;
    constexpr int kLmIters = 80;
    const std::size_t n = pts.size();
    FitResult res;

    auto first = ls_fit_at(pts, t);
    if (!first) return res;
    CubicBezier q = *first;

    for (int round = 0; round < kWarmupRounds; ++round) {
        for (std::size_t i = 1; i + 1 < n; ++i) t[i] = project(q, pts[i]);
        auto refit = ls_fit_at(pts, t);
        if (!refit) break;
        q = *refit;
    }

    const int m = static_cast<int>(n) - 2;  // interior parameters
    const int dim = 4 + m;
    double scale = 1.0;
    for (const Point2& p : pts) scale = std::max(scale, dot(p, p));
    double f0 = sum_sq_residual(pts, q, t);
    double lambda = 1e-6;
    std::vector<double> A(static_cast<std::size_t>(dim) * dim);
    std::vector<double> g(dim), step(dim), Awork(A.size());

    for (int it = 0; it < kLmIters; ++it) {
        // J columns: p1.x p1.y p2.x p2.y then one t per interior point;
        // row pair i has dr/dp1 = b1(t_i) I, dr/dp2 = b2(t_i) I,
        // dr/dt_i = B'(t_i). J^T J and J^T r accumulate from the sparse
        // rows directly.
        std::fill(A.begin(), A.end(), 0.0);
        std::fill(g.begin(), g.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double ti = t[i], u = 1.0 - ti;
            const double b1 = 3.0 * ti * u * u;
            const double b2 = 3.0 * ti * ti * u;
            const Point2 r = eval_unchecked(q, ti) - pts[i];
            Point2 d1{};
            int tcol = -1;
            if (i >= 1 && i + 1 < n) {
                d1 = eval_d1(q, ti);
                tcol = 4 + static_cast<int>(i) - 1;
            }
            const int ncols = tcol >= 0 ? 3 : 2;
            const int colx[3] = {0, 2, tcol};
            const int coly[3] = {1, 3, tcol};
            const double valx[3] = {b1, b2, d1.x};
            const double valy[3] = {b1, b2, d1.y};
            for (int a = 0; a < ncols; ++a) {
                g[colx[a]] += valx[a] * r.x;
                g[coly[a]] += valy[a] * r.y;
                for (int b = 0; b < ncols; ++b) {
                    A[static_cast<std::size_t>(colx[a]) * dim + colx[b]] +=
                        valx[a] * valx[b];
                    A[static_cast<std::size_t>(coly[a]) * dim + coly[b]] +=
                        valy[a] * valy[b];
                }
            }
        }
        bool accepted = false;
        for (int tries = 0; tries < 40; ++tries) {
            Awork = A;
            for (int d = 0; d < dim; ++d) {
                const double dd = std::max(A[static_cast<std::size_t>(d) * dim + d], 1e-12);
                Awork[static_cast<std::size_t>(d) * dim + d] += lambda * dd;
            }
            for (int d = 0; d < dim; ++d) step[d] = -g[d];
            if (!cholesky_solve(Awork, step, dim)) {
                lambda *= 10.0;
                continue;
            }
            CubicBezier qn = q;
            qn.p1 = q.p1 + Point2{step[0], step[1]};
            qn.p2 = q.p2 + Point2{step[2], step[3]};
            std::vector<double> tn = t;
            for (int i = 0; i < m; ++i)
                tn[static_cast<std::size_t>(i) + 1] =
                    std::clamp(t[static_cast<std::size_t>(i) + 1] + step[4 + i], 0.0, 1.0);
            const double fn = sum_sq_residual(pts, qn, tn);
            if (fn < f0) {
                q = qn;
                t = std::move(tn);
                f0 = fn;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted || f0 < 1e-28 * scale) break;
    }
    res.curve = q;
    res.residual = f0;
    res.ok = true;
    return res;
}

}  // namespace

Point2 eval(const CubicBezier& curve, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError("bezier parameter " + std::to_string(t) +
                          " outside [0,1]");
    return eval_unchecked(curve, t);
}

std::vector<Point2> sample_component(const PixelComponent& comp, int interval) {
    if (comp.pixels.empty())
        throw DegenerateComponent("empty component");
    if (comp.pixels.size() < 2)
        throw DegenerateComponent("single pixel");
    if (interval < 1) throw DomainError("interval must be positive");

    const int w = comp.x_max - comp.x_min + 1;
    const int h = comp.y_max - comp.y_min + 1;
    std::vector<int> grid(static_cast<std::size_t>(w) * h, -1);
    const int n = static_cast<int>(comp.pixels.size());
    for (int i = 0; i < n; ++i) {
        const auto [x, y] = comp.pixels[static_cast<std::size_t>(i)];
        grid[static_cast<std::size_t>(y - comp.y_min) * w + (x - comp.x_min)] = i;
    }

    // neighbor scan order fixed for deterministic parents
    constexpr int dx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
    constexpr int dy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

    auto bfs = [&](int start, std::vector<int>& dist, std::vector<int>& parent) {
        dist.assign(static_cast<std::size_t>(n), -1);
        parent.assign(static_cast<std::size_t>(n), -1);
        std::queue<int> q;
        dist[static_cast<std::size_t>(start)] = 0;
        q.push(start);
        while (!q.empty()) {
            const int cur = q.front();
            q.pop();
            const auto [cx, cy] = comp.pixels[static_cast<std::size_t>(cur)];
            for (int k = 0; k < 8; ++k) {
                const int nx = cx + dx[k], ny = cy + dy[k];
                if (nx < comp.x_min || ny < comp.y_min || nx > comp.x_max ||
                    ny > comp.y_max)
                    continue;
                const int ni =
                    grid[static_cast<std::size_t>(ny - comp.y_min) * w +
                         (nx - comp.x_min)];
                if (ni < 0 || dist[static_cast<std::size_t>(ni)] >= 0) continue;
                dist[static_cast<std::size_t>(ni)] = dist[static_cast<std::size_t>(cur)] + 1;
                parent[static_cast<std::size_t>(ni)] = cur;
                q.push(ni);
            }
        }
    };
    // farthest pixel; component pixel lists are row-major sorted, so the
    // first maximum is the smallest row-major index
    auto farthest = [&](const std::vector<int>& dist) {
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(best)])
                best = i;
        return best;
    };

    std::vector<int> dist, parent;
    bfs(0, dist, parent);
    const int u = farthest(dist);
    bfs(u, dist, parent);
    const int v = farthest(dist);

    std::vector<int> path;
    for (int cur = v; cur >= 0; cur = parent[static_cast<std::size_t>(cur)])
        path.push_back(cur);
    std::reverse(path.begin(), path.end());  // path now runs u -> v

    std::vector<Point2> out;
    const int len = static_cast<int>(path.size());
    for (int i = 0; i < len; i += interval) {
        const auto [x, y] = comp.pixels[static_cast<std::size_t>(path[static_cast<std::size_t>(i)])];
        out.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
    if ((len - 1) % interval != 0) {
        const auto [x, y] = comp.pixels[static_cast<std::size_t>(path.back())];
        out.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
    return out;
}

CubicBezier fit(const std::vector<Point2>& points) {
    if (points.size() < 2) throw DomainError("fit needs at least 2 points");
    const Point2 p0 = points.front(), p3 = points.back();
    const auto fallback = [&] {
        CubicBezier c;
        c.p0 = p0;
        c.p3 = p3;
        c.p1 = p0 + (1.0 / 3.0) * (p3 - p0);
        c.p2 = p0 + (2.0 / 3.0) * (p3 - p0);
        return c;
    };

    double scale = 1.0;
    for (const Point2& p : points) scale = std::max(scale, dot(p, p));

    FitResult best = fit_once(points, chord_params(points));
    if (!best.ok || best.residual >= 1e-24 * scale) {
        std::vector<double> uniform(points.size());
        for (std::size_t i = 0; i < points.size(); ++i)
            uniform[i] = static_cast<double>(i) /
                         static_cast<double>(points.size() - 1);
        FitResult alt = fit_once(points, uniform);
        if (alt.ok && (!best.ok || alt.residual < best.residual)) best = alt;
    }
    if (!best.ok) return fallback();  // SingularFit path
    return best.curve;
}

double displacement_magnitude(int row_count, const PerturbParams& params) {
    return static_cast<double>(row_count / params.C) * params.K_step;
}

CubicBezier perturb(const CubicBezier& curve, double theta, RngStream& stream) {
    const auto [g1x, g1y] = stream.gaussian_pair();
    const auto [g2x, g2y] = stream.gaussian_pair();
    CubicBezier out = curve;
    out.p1 = curve.p1 + Point2{theta * g1x, theta * g1y};
    out.p2 = curve.p2 + Point2{theta * g2x, theta * g2y};
    return out;
}

BinaryMask render(const CubicBezier& curve, const BinaryMask& canvas,
                  int thickness) {
    if (thickness < 1) throw DomainError("thickness must be >= 1");
    BinaryMask out = canvas;
    const int radius = (thickness - 1) / 2;

    // speed bound: |B'(t)| <= 3 max segment of the control polygon
    const double vmax =
        3.0 * std::max({norm(curve.p1 - curve.p0), norm(curve.p2 - curve.p1),
                        norm(curve.p3 - curve.p2)});
    const int segments = std::max(1, static_cast<int>(std::ceil(vmax / 0.5)));

    for (int s = 0; s <= segments; ++s) {
        const double t = static_cast<double>(s) / segments;
        const Point2 p = eval_unchecked(curve, t);
        const int cx = static_cast<int>(std::llround(p.x));
        const int cy = static_cast<int>(std::llround(p.y));
        for (int oy = -radius; oy <= radius; ++oy) {
            for (int ox = -radius; ox <= radius; ++ox) {
                const int x = cx + ox, y = cy + oy;
                if (x < 0 || y < 0 || x >= out.width || y >= out.height) continue;
                out.set(x, y, 1);
            }
        }
    }
    return out;
}

}  // namespace sseg
