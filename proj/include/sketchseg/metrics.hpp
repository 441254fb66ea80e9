#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sketchseg/raster.hpp"
#include "sketchseg/transport.hpp"

namespace sseg {

struct EvalRecord {
    std::string sample_id;
    long long intersection = 0;
    long long union_ = 0;
    double iou = 1.0;  // 1 when union is empty
    long long gt_pixels = 0;
};

struct MetricsReport {
    double oiou = 0.0;  // percent
    double miou = 0.0;  // percent
    std::map<double, double> p_at;  // X in {0.5..0.9} -> percent
    double s_measure = 0.0;
    double e_measure = 0.0;
    double weighted_f = 0.0;
    double mae = 0.0;
};

struct SaliencyScores {
    double s_measure = 0.0;
    double e_measure = 0.0;
    double weighted_f = 0.0;
    double mae = 0.0;
};

struct LowessConfig {
    double frac = 0.2;
    long long bin_size = 2000;
    int samples_per_bin = 1;
};

// Keep a record whose gt_pixels falls in [size_min, size_max) only when
// its IoU reaches min_iou; records outside every range always stay.
struct SizeFilter {
    long long size_min = 0;
    long long size_max = 0;
    double min_iou = 0.0;
};

// Throws DimMismatch on shape disagreement.
EvalRecord eval_sample(const BinaryMask& pred, const BinaryMask& gt,
                       const std::string& id);

// IoU aggregates only: oIoU from summed counts, mIoU from per-sample
// means, P@X with the >= convention. Throws EmptyInput.
MetricsReport aggregate(const std::vector<EvalRecord>& records);

std::vector<EvalRecord> apply_size_filters(
    const std::vector<EvalRecord>& records,
    const std::vector<SizeFilter>& filters);

// Canonical saliency protocol: S-measure (balance 0.5), E-measure
// (adaptive threshold 2 x mean, clipped to 1, binarized with >=),
// weighted F-measure (beta^2 = 1), MAE.
SaliencyScores saliency_suite(const RealMatrix& pred, const BinaryMask& gt);

// Per-field arithmetic mean. Throws EmptyInput.
SaliencyScores mean_scores(const std::vector<SaliencyScores>& scores);

// The subsampling stage of lowess_fit alone: per bin of width bin_size,
// the samples_per_bin points nearest the bin center, sorted by x.
std::vector<std::pair<double, double>> bin_points(
    const std::vector<std::pair<double, double>>& points,
    const LowessConfig& cfg);

// Binned subsampling (bin width bin_size, samples_per_bin points nearest
// each bin center) followed by locally weighted linear regression with
// tricube weights over the frac-nearest neighbors; output sorted by x.
// Throws DegenerateInput without >= 2 distinct x after binning.
std::vector<std::pair<double, double>> lowess_fit(
    const std::vector<std::pair<double, double>>& points,
    const LowessConfig& cfg);

// CSV with header sample_id,intersection,union,iou,gt_pixels (UTF-8, LF).
std::string records_csv(const std::vector<EvalRecord>& records);

}  // namespace sseg
