#include "sketchseg/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sketchseg/errors.hpp"

namespace sseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum exp(x)) with max subtraction; -inf for an all -inf input.
double log_sum_exp(const double* x, int n) {
    double c = kNegInf;
    for (int i = 0; i < n; ++i) c = std::max(c, x[i]);
    if (c == kNegInf) return kNegInf;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(x[i] - c);
    return c + std::log(s);
}

}  // namespace

RealMatrix cosine_scores(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.dim != b.dim)
        throw DimMismatch("feature dims " + std::to_string(a.dim) + " vs " +
                          std::to_string(b.dim));
    const int d = a.dim;
    auto normalized = [d](const FeatureMatrix& f, const char* side) {
        std::vector<double> out(f.values.size());
        for (int r = 0; r < f.rows; ++r) {
            double nrm = 0.0;
            for (int c = 0; c < d; ++c) nrm += f.at(r, c) * f.at(r, c);
            nrm = std::sqrt(nrm);
            if (nrm == 0.0)
                throw ZeroNormRow(std::string(side) + " row " + std::to_string(r));
            for (int c = 0; c < d; ++c)
                out[static_cast<std::size_t>(r) * d + c] = f.at(r, c) / nrm;
        }
        return out;
    };
    const std::vector<double> na = normalized(a, "lhs");
    const std::vector<double> nb = normalized(b, "rhs");

    RealMatrix s = make_matrix(a.rows, b.rows);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < b.rows; ++j) {
            double dp = 0.0;
            for (int c = 0; c < d; ++c)
                dp += na[static_cast<std::size_t>(i) * d + c] *
                      nb[static_cast<std::size_t>(j) * d + c];
            s.at(i, j) = dp;
        }
    }
    return s;
}

CostMatrix cost_from_scores(const RealMatrix& scores) {
    CostMatrix c;
    c.n = scores.rows;
    c.m = scores.cols;
    c.values.resize(scores.values.size());
    for (std::size_t i = 0; i < scores.values.size(); ++i)
        c.values[i] = 1.0 - scores.values[i];
    return c;
}

Marginals uniform_marginals(int n, int m) {
    Marginals marg;
    marg.mu.assign(static_cast<std::size_t>(n), 1.0 / n);
    marg.nu.assign(static_cast<std::size_t>(m), 1.0 / m);
    return marg;
}

TransportPlan sinkhorn(const CostMatrix& cost, const Marginals& marg,
                       const SinkhornConfig& cfg) {
    const int n = cost.n, m = cost.m;
    if (static_cast<int>(marg.mu.size()) != n ||
        static_cast<int>(marg.nu.size()) != m)
        throw DimMismatch("marginal lengths vs cost " + std::to_string(n) +
                          "x" + std::to_string(m));
    for (double v : cost.values)
        if (!std::isfinite(v)) throw NonFiniteCost("cost entry not finite");

    const double inv_eps = 1.0 / cfg.epsilon;
    std::vector<double> log_mu(static_cast<std::size_t>(n));
    std::vector<double> log_nu(static_cast<std::size_t>(m));
    for (int i = 0; i < n; ++i) log_mu[i] = std::log(marg.mu[i]);
    for (int j = 0; j < m; ++j) log_nu[j] = std::log(marg.nu[j]);

    std::vector<double> a(static_cast<std::size_t>(n), 0.0);
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    std::vector<double> b_prev(b), row(static_cast<std::size_t>(std::max(n, m)));

    TransportPlan plan;
    plan.n = n;
    plan.m = m;
    plan.converged = false;
    plan.iterations_used = 0;

    for (int it = 1; it <= cfg.max_iter; ++it) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < m; ++j) row[j] = -cost.at(i, j) * inv_eps + b[j];
            a[i] = log_mu[i] - log_sum_exp(row.data(), m);
        }
        b_prev = b;
        for (int j = 0; j < m; ++j) {
            for (int i = 0; i < n; ++i) row[i] = -cost.at(i, j) * inv_eps + a[i];
            b[j] = log_nu[j] - log_sum_exp(row.data(), n);
        }
        plan.iterations_used = it;
        double delta2 = 0.0;
        for (int j = 0; j < m; ++j) {
            const double d = b[j] - b_prev[j];
            delta2 += d * d;
        }
        if (std::sqrt(delta2) < cfg.tolerance) {
            plan.converged = true;
            break;
        }
    }

    plan.values.resize(static_cast<std::size_t>(n) * m);
    plan.achieved_cost = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            const double e = a[i] - cost.at(i, j) * inv_eps + b[j];
            const double v = e == kNegInf ? 0.0 : std::exp(e);
            plan.values[static_cast<std::size_t>(i) * m + j] = v;
            plan.achieved_cost += v * cost.at(i, j);
        }
    }
    plan.dual_a = std::move(a);
    plan.dual_b = std::move(b);

    double err = 0.0;
    for (int i = 0; i < n; ++i) {
        double rs = 0.0;
        for (int j = 0; j < m; ++j) rs += plan.at(i, j);
        err = std::max(err, std::abs(rs - marg.mu[i]));
    }
    for (int j = 0; j < m; ++j) {
        double cs = 0.0;
        for (int i = 0; i < n; ++i) cs += plan.at(i, j);
        err = std::max(err, std::abs(cs - marg.nu[j]));
    }
    plan.max_marginal_error = err;
    return plan;
}

std::pair<double, RealMatrix> brute_force_ot(const CostMatrix& cost,
                                             const Marginals& marg) {
    const int n = cost.n;
    if (cost.n != cost.m || n > 6)
        throw UnsupportedInstance("need square n = m <= 6, got " +
                                  std::to_string(cost.n) + "x" +
                                  std::to_string(cost.m));
    for (double v : marg.mu)
        if (std::abs(v - 1.0 / n) > 1e-9)
            throw UnsupportedInstance("non-uniform mu");
    for (double v : marg.nu)
        if (std::abs(v - 1.0 / n) > 1e-9)
            throw UnsupportedInstance("non-uniform nu");

    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best_perm;
    double best_cost = std::numeric_limits<double>::max();
    do {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += cost.at(i, perm[i]);
        c /= n;
        if (c < best_cost) {  // strict: first (lexicographic) minimum wins
            best_cost = c;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    RealMatrix plan = make_matrix(n, n);
    for (int i = 0; i < n; ++i) plan.at(i, best_perm[i]) = 1.0 / n;
    return {best_cost, plan};
}

RealMatrix mpt_aggregate(const TransportPlan& plan, const ScoreStack& stack) {
    const int cols = stack.num_prompts * stack.per_prompt_cols;
    if (plan.n != stack.pixels || plan.m != cols)
        throw DimMismatch("plan " + std::to_string(plan.n) + "x" +
                          std::to_string(plan.m) + " vs stack " +
                          std::to_string(stack.pixels) + "x" +
                          std::to_string(cols));
    RealMatrix out = make_matrix(stack.pixels, stack.num_prompts);
    for (int p = 0; p < stack.pixels; ++p) {
        for (int k = 0; k < stack.num_prompts; ++k) {
            double s = 0.0;
            for (int j = 0; j < stack.per_prompt_cols; ++j) {
                const int c = k * stack.per_prompt_cols + j;
                s += plan.at(p, c) *
                     stack.values[static_cast<std::size_t>(p) * cols + c];
            }
            out.at(p, k) = s;
        }
    }
    return out;
}

std::vector<double> upsample_scoremap(const std::vector<double>& src,
                                      int src_h, int src_w, int channels,
                                      int dst_h, int dst_w) {
    std::vector<double> dst(static_cast<std::size_t>(dst_h) * dst_w * channels);
    const double sy = static_cast<double>(src_h) / dst_h;
    const double sx = static_cast<double>(src_w) / dst_w;
    for (int y = 0; y < dst_h; ++y) {
        // align-corners-false: sample at half-pixel centers, clamped
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, static_cast<double>(src_h - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, src_h - 1);
        const double wy = fy - y0;
        for (int x = 0; x < dst_w; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, static_cast<double>(src_w - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, src_w - 1);
            const double wx = fx - x0;
            for (int c = 0; c < channels; ++c) {
                auto s = [&](int yy, int xx) {
                    return src[(static_cast<std::size_t>(yy) * src_w + xx) *
                                   channels +
                               c];
                };
                const double top = s(y0, x0) * (1.0 - wx) + s(y0, x1) * wx;
                const double bot = s(y1, x0) * (1.0 - wx) + s(y1, x1) * wx;
                dst[(static_cast<std::size_t>(y) * dst_w + x) * channels + c] =
                    top * (1.0 - wy) + bot * wy;
            }
        }
    }
    return dst;
}

FeatureMatrix extract_patch_features(const GrayRaster& img, int grid_h,
                                     int grid_w, int dim) {
    const int ch = (img.height + grid_h - 1) / grid_h;
    const int cw = (img.width + grid_w - 1) / grid_w;
    FeatureMatrix out;
    out.rows = grid_h * grid_w;
    out.dim = dim;
    out.values.assign(static_cast<std::size_t>(out.rows) * dim, 0.0);

    for (int gy = 0; gy < grid_h; ++gy) {
        for (int gx = 0; gx < grid_w; ++gx) {
            const int x0 = gx * cw, y0 = gy * ch;
            const int x1 = std::min(x0 + cw, img.width);
            const int y1 = std::min(y0 + ch, img.height);
            double mean = 0.0, var = 0.0;
            const int cnt = std::max(0, (x1 - x0)) * std::max(0, (y1 - y0));
            if (cnt > 0) {
                for (int y = y0; y < y1; ++y)
                    for (int x = x0; x < x1; ++x) mean += img.at(x, y);
                mean /= cnt;
                for (int y = y0; y < y1; ++y)
                    for (int x = x0; x < x1; ++x) {
                        const double d = img.at(x, y) - mean;
                        var += d * d;
                    }
                var /= cnt;
            }
            const double feat[4] = {
                mean, std::sqrt(var),
                (x0 + (x1 - x0) * 0.5) / img.width,
                (y0 + (y1 - y0) * 0.5) / img.height};
            double* row = out.values.data() +
                          (static_cast<std::size_t>(gy) * grid_w + gx) * dim;
            for (int c = 0; c < std::min(dim, 4); ++c) row[c] = feat[c];
        }
    }
    return out;
}

}  // namespace sseg
