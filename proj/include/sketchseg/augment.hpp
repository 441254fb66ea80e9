#pragma once

#include <cstdint>
#include <vector>

#include "sketchseg/bezier.hpp"
#include "sketchseg/raster.hpp"

namespace sseg {

struct AugmentConfig {
    int binarize_threshold = 128;
    int block_size = 32;
    int min_component_pixels = 10;
    int sample_interval = 10;
    int render_thickness = 3;
    PerturbParams perturb;
};

struct AugmentDetail {
    BinaryMask binarized;
    BinaryMask skeleton;
    std::vector<BinaryMask> variants;
    std::vector<double> distortion;  // IoU of each variant vs binarized
    double theta_max = 0.0;
};

// Binarize, thin, partition into blocks, fit one cubic per qualifying
// skeleton component, then assemble num_variants masks from
// independently perturbed renders. Perturbation draws come from a stream
// derived from (seed, block index, variant index), so the result is
// identical under any processing order. Components below
// min_component_pixels contribute nothing. Throws EmptySketch when the
// binarized input has no foreground; propagates InvalidBlockSize.
AugmentDetail augment_detail(const BinaryMask& sketch,
                             const AugmentConfig& config);
AugmentDetail augment_detail(const GrayRaster& sketch,
                             const AugmentConfig& config);

std::vector<BinaryMask> augment_sketch(const BinaryMask& sketch,
                                       const AugmentConfig& config);
std::vector<BinaryMask> augment_sketch(const GrayRaster& sketch,
                                       const AugmentConfig& config);

// |A∩B| / |A∪B|; 1 when both masks are empty. Throws DimMismatch.
double variant_distortion(const BinaryMask& original,
                          const BinaryMask& variant);

}  // namespace sseg
