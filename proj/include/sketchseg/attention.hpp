#pragma once

#include <cstdint>
#include <vector>

#include "sketchseg/raster.hpp"
#include "sketchseg/transport.hpp"

namespace sseg {

// Additive attention mask: entries are exactly 0 (attend) or -infinity
// (blocked), row-major H' x W'.
struct AttentionMask {
    int height = 0;
    int width = 0;
    std::vector<double> values;
};

// Scale, shift, and gating vectors of the fusion step. Empty vectors mean
// "derive from F_S" via the seeded linear head.
struct FusionParams {
    std::vector<double> gamma;
    std::vector<double> beta;
    std::vector<double> alpha;
    std::uint64_t projection_seed = 0;
};

struct AttentionConfig {
    int num_heads = 1;          // splits the feature dim evenly
    bool scale_logits = false;  // optional 1/sqrt(d_head) factor, off verbatim
};

// Max-pools the sketch onto the target grid: a cell attends (0) if any
// covered sketch pixel is stroke, otherwise it is blocked (-inf).
AttentionMask build_attention_mask(const BinaryMask& sketch, int target_h,
                                   int target_w);

// softmax(M + Q K^T) V per query row; mask length must equal the key
// count. Rows with every key masked return zero vectors.
FeatureMatrix masked_attention(const FeatureMatrix& Q, const FeatureMatrix& K,
                               const FeatureMatrix& V,
                               const std::vector<double>& mask,
                               const AttentionConfig& cfg = {});

// Scale-shift-gate fusion: Q projects from F_I, K and V from F_S with
// deterministic seeded weights; F_U = F_I + alpha (attn (1+gamma) + beta)
// per channel. Absent params derive gamma, beta, alpha from the seeded
// linear head applied to mean-pooled F_S. mask may be null; when given,
// its flattened length must equal F_S.rows.
FeatureMatrix fuse(const FeatureMatrix& F_I, const FeatureMatrix& F_S,
                   const FusionParams& params,
                   const AttentionMask* mask = nullptr,
                   const AttentionConfig& cfg = {});

// Deterministic dense projection weights (dim x dim, row-major) for the
// given seed and matrix tag; fixed recipe shared by fuse and tests.
std::vector<double> projection_weights(std::uint64_t seed, int tag, int dim);

}  // namespace sseg
