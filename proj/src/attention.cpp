#include "sketchseg/attention.hpp"

#include <cmath>
#include <limits>

#include "sketchseg/errors.hpp"
#include "sketchseg/rng.hpp"

namespace sseg {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// y = x W for row-major W (dim x dim)
FeatureMatrix project(const FeatureMatrix& x, const std::vector<double>& w) {
    FeatureMatrix out;
    out.rows = x.rows;
    out.dim = x.dim;
    out.values.assign(x.values.size(), 0.0);
    const int d = x.dim;
    for (int r = 0; r < x.rows; ++r)
        for (int k = 0; k < d; ++k) {
            const double xv = x.at(r, k);
            if (xv == 0.0) continue;
            for (int c = 0; c < d; ++c)
                out.values[static_cast<std::size_t>(r) * d + c] +=
                    xv * w[static_cast<std::size_t>(k) * d + c];
        }
    return out;
}

}  // namespace

AttentionMask build_attention_mask(const BinaryMask& sketch, int target_h,
                                   int target_w) {
    AttentionMask mask;
    mask.height = target_h;
    mask.width = target_w;
    mask.values.assign(static_cast<std::size_t>(target_h) * target_w, kNegInf);
    for (int i = 0; i < target_h; ++i) {
        // proportional tiling; degenerate slices fall back to one pixel
        int y0 = static_cast<int>((static_cast<long long>(i) * sketch.height) /
                                  target_h);
        int y1 = static_cast<int>(
            (static_cast<long long>(i + 1) * sketch.height) / target_h);
        if (y1 <= y0) y1 = std::min(y0 + 1, sketch.height);
        for (int j = 0; j < target_w; ++j) {
            int x0 = static_cast<int>(
                (static_cast<long long>(j) * sketch.width) / target_w);
            int x1 = static_cast<int>(
                (static_cast<long long>(j + 1) * sketch.width) / target_w);
            if (x1 <= x0) x1 = std::min(x0 + 1, sketch.width);
            bool stroke = false;
            for (int y = y0; y < y1 && !stroke; ++y)
                for (int x = x0; x < x1; ++x)
                    if (sketch.at(x, y)) {
                        stroke = true;
                        break;
                    }
            if (stroke)
                mask.values[static_cast<std::size_t>(i) * target_w + j] = 0.0;
        }
    }
    return mask;
}

FeatureMatrix masked_attention(const FeatureMatrix& Q, const FeatureMatrix& K,
                               const FeatureMatrix& V,
                               const std::vector<double>& mask,
                               const AttentionConfig& cfg) {
    if (Q.dim != K.dim)
        throw DimMismatch("Q.dim " + std::to_string(Q.dim) + " vs K.dim " +
                          std::to_string(K.dim));
    if (K.rows != V.rows)
        throw DimMismatch("K.rows " + std::to_string(K.rows) + " vs V.rows " +
                          std::to_string(V.rows));
    if (static_cast<int>(mask.size()) != K.rows)
        throw DimMismatch("mask length " + std::to_string(mask.size()) +
                          " vs key count " + std::to_string(K.rows));
    const int heads = cfg.num_heads;
    if (heads < 1 || Q.dim % heads != 0 || V.dim % heads != 0)
        throw DimMismatch("head count " + std::to_string(heads) +
                          " does not divide dims");
    const int dq = Q.dim / heads;
    const int dv = V.dim / heads;

    FeatureMatrix out;
    out.rows = Q.rows;
    out.dim = V.dim;
    out.values.assign(static_cast<std::size_t>(Q.rows) * V.dim, 0.0);

    std::vector<double> logits(static_cast<std::size_t>(K.rows));
    const double scale = cfg.scale_logits ? 1.0 / std::sqrt(static_cast<double>(dq)) : 1.0;

    for (int h = 0; h < heads; ++h) {
        const int q_off = h * dq;
        const int v_off = h * dv;
        for (int i = 0; i < Q.rows; ++i) {
            double mx = kNegInf;
            for (int j = 0; j < K.rows; ++j) {
                double dp = 0.0;
                for (int c = 0; c < dq; ++c)
                    dp += Q.at(i, q_off + c) * K.at(j, q_off + c);
                const double l = mask[j] + dp * scale;
                logits[j] = l;
                if (l > mx) mx = l;
            }
            if (mx == kNegInf) continue;  // fully masked row stays zero
            double z = 0.0;
            for (int j = 0; j < K.rows; ++j) {
                const double w = logits[j] == kNegInf ? 0.0 : std::exp(logits[j] - mx);
                logits[j] = w;
                z += w;
            }
            double* dst =
                out.values.data() + static_cast<std::size_t>(i) * V.dim + v_off;
            for (int j = 0; j < K.rows; ++j) {
                const double w = logits[j] / z;
                if (w == 0.0) continue;
                for (int c = 0; c < dv; ++c) dst[c] += w * V.at(j, v_off + c);
            }
        }
    }
    return out;
}

std::vector<double> projection_weights(std::uint64_t seed, int tag, int dim) {
    RngStream stream =
        derive_stream(seed, {0x70726f6aULL, static_cast<std::uint64_t>(tag)});
    std::vector<double> w(static_cast<std::size_t>(dim) * dim);
    const double s = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t i = 0; i < w.size(); i += 2) {
        const auto [g0, g1] = stream.gaussian_pair();
        w[i] = g0 * s;
        if (i + 1 < w.size()) w[i + 1] = g1 * s;
    }
    return w;
}

FeatureMatrix fuse(const FeatureMatrix& F_I, const FeatureMatrix& F_S,
                   const FusionParams& params, const AttentionMask* mask,
                   const AttentionConfig& cfg) {
    const int d = F_I.dim;
    if (F_S.dim != d)
        throw DimMismatch("F_I.dim " + std::to_string(d) + " vs F_S.dim " +
                          std::to_string(F_S.dim));
    auto check_len = [&](const std::vector<double>& v, const char* name) {
        if (!v.empty() && static_cast<int>(v.size()) != d)
            throw DimMismatch(std::string(name) + " length vs feature dim");
    };
    check_len(params.gamma, "gamma");
    check_len(params.beta, "beta");
    check_len(params.alpha, "alpha");

    const FeatureMatrix Q = project(F_I, projection_weights(params.projection_seed, 0, d));
    const FeatureMatrix K = project(F_S, projection_weights(params.projection_seed, 1, d));
    const FeatureMatrix V = project(F_S, projection_weights(params.projection_seed, 2, d));

    std::vector<double> flat_mask;
    if (mask) {
        if (static_cast<int>(mask->values.size()) != F_S.rows)
            throw DimMismatch("mask cells vs F_S rows");
        flat_mask = mask->values;
    } else {
        flat_mask.assign(static_cast<std::size_t>(F_S.rows), 0.0);
    }
    const FeatureMatrix attn = masked_attention(Q, K, V, flat_mask, cfg);

    // Eq. 1: absent params regress from mean-pooled sketch features
    std::vector<double> gamma = params.gamma, beta = params.beta,
                        alpha = params.alpha;
    if (gamma.empty() || beta.empty() || alpha.empty()) {
        std::vector<double> pool(static_cast<std::size_t>(d), 0.0);
        for (int r = 0; r < F_S.rows; ++r)
            for (int c = 0; c < d; ++c) pool[c] += F_S.at(r, c);
        for (int c = 0; c < d; ++c) pool[c] /= F_S.rows;
        auto head = [&](int tag) {
            const std::vector<double> w =
                projection_weights(params.projection_seed, tag, d);
            std::vector<double> out(static_cast<std::size_t>(d), 0.0);
            for (int k = 0; k < d; ++k)
                for (int c = 0; c < d; ++c)
                    out[c] += pool[k] * w[static_cast<std::size_t>(k) * d + c];
            return out;
        };
        if (gamma.empty()) gamma = head(3);
        if (beta.empty()) beta = head(4);
        if (alpha.empty()) alpha = head(5);
    }

    FeatureMatrix out;
    out.rows = F_I.rows;
    out.dim = d;
    out.values.resize(F_I.values.size());
    for (int r = 0; r < F_I.rows; ++r)
        for (int c = 0; c < d; ++c)
            out.values[static_cast<std::size_t>(r) * d + c] =
                F_I.at(r, c) +
                alpha[c] * (attn.at(r, c) * (1.0 + gamma[c]) + beta[c]);
    return out;
}

}  // namespace sseg
