#pragma once

#include <utility>
#include <vector>

#include "sketchseg/raster.hpp"

namespace sseg {

// Row-major rows x dim matrix of feature vectors.
struct FeatureMatrix {
    int rows = 0;
    int dim = 0;
    std::vector<double> values;

    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * dim + c];
    }
};

// Generic dense row-major matrix.
struct RealMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * cols + c];
    }
    double& at(int r, int c) {
        return values[static_cast<std::size_t>(r) * cols + c];
    }
};

inline RealMatrix make_matrix(int rows, int cols) {
    return RealMatrix{rows, cols,
                      std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
}

struct Marginals {
    std::vector<double> mu;
    std::vector<double> nu;
};

struct CostMatrix {
    int n = 0;
    int m = 0;
    std::vector<double> values;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * m + j];
    }
};

struct SinkhornConfig {
    double epsilon = 0.05;
    int max_iter = 50;
    double tolerance = 1e-4;
};

struct TransportPlan {
    int n = 0;
    int m = 0;
    std::vector<double> values;
    double achieved_cost = 0.0;
    int iterations_used = 0;
    bool converged = false;
    // dual scaling vectors and the worst marginal violation, for diagnostics
    std::vector<double> dual_a;
    std::vector<double> dual_b;
    double max_marginal_error = 0.0;

    double at(int i, int j) const {
        return values[static_cast<std::size_t>(i) * m + j];
    }
};

// S in R^{HW x (K_p * N)}: each of num_prompts prompts contributes
// per_prompt_cols consecutive columns.
struct ScoreStack {
    int pixels = 0;           // HW
    int num_prompts = 0;      // K_p
    int per_prompt_cols = 0;  // N
    std::vector<double> values;
};

// Cosine similarity matrix (a.rows x b.rows); rows are L2-normalized
// internally. Throws DimMismatch, ZeroNormRow.
RealMatrix cosine_scores(const FeatureMatrix& a, const FeatureMatrix& b);

// C = 1 - S, entries land in [0, 2] for cosine scores.
CostMatrix cost_from_scores(const RealMatrix& scores);

Marginals uniform_marginals(int n, int m);

// Log-domain Sinkhorn with b^0 = 0:
//   a^t = log mu - LSE_j(-C/eps + b^{t-1}),
//   b^t = log nu - LSE_i(-C/eps + a^t),
// stopping when ||b^t - b^{t-1}||_2 < tolerance or at max_iter. The plan
// is exp(a_i - C_ij/eps + b_j). Non-convergence is reported, not thrown.
TransportPlan sinkhorn(const CostMatrix& cost, const Marginals& marg,
                       const SinkhornConfig& cfg);

// Exact unregularized optimum by permutation enumeration; requires a
// square problem with uniform marginals and n <= 6. Ties pick the
// lexicographically first permutation.
std::pair<double, RealMatrix> brute_force_ot(const CostMatrix& cost,
                                             const Marginals& marg);

// Eq. 9: element-wise T* . S, reshaped HW x K_p x N and summed over N.
RealMatrix mpt_aggregate(const TransportPlan& plan, const ScoreStack& stack);

// Bilinear, align-corners-false. Input is H' x W' x channels flattened
// row-major with the channel fastest; output likewise at H x W.
std::vector<double> upsample_scoremap(const std::vector<double>& src,
                                      int src_h, int src_w, int channels,
                                      int dst_h, int dst_w);

// Desk-scale stand-in for encoder features: per grid cell mean intensity,
// intensity standard deviation, and normalized cell center, zero-padded
// or truncated to dim. Cells come from ceiling-division tiling.
FeatureMatrix extract_patch_features(const GrayRaster& img, int grid_h,
                                     int grid_w, int dim);

}  // namespace sseg
