#pragma once

#include <vector>

#include "sketchseg/raster.hpp"
#include "sketchseg/transport.hpp"

namespace sseg {

struct FocalConfig {
    double alpha = 0.25;
    double gamma = 2.0;
    double clamp_eps = 1e-7;
};

// Mean over pixels of alpha_t * CE * (1 - p_t)^gamma with
//   CE  = -[t log y + (1-t) log(1-y)],
//   p_t = y t + (1-y)(1-t),
//   a_t = alpha t + (1-alpha)(1-t),
// y clamped to [clamp_eps, 1-clamp_eps]. Throws DimMismatch on shape
// disagreement, DomainError when a prediction leaves [0,1].
double focal_loss(const RealMatrix& Y, const BinaryMask& T,
                  const FocalConfig& cfg);

// Multi-channel maps are each supervised against the same mask; the
// result is the mean of the per-channel losses. Throws EmptyInput.
double focal_loss_multi(const std::vector<RealMatrix>& channels,
                        const BinaryMask& T, const FocalConfig& cfg);

}  // namespace sseg
