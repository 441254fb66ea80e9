#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sketchseg/raster.hpp"
#include "sketchseg/rng.hpp"
#include "sketchseg/skeleton.hpp"

namespace sseg {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Control polygon of one fitted stroke segment.
struct CubicBezier {
    Point2 p0, p1, p2, p3;
};

struct PerturbParams {
    int C = 10;               // row-count control unit
    double K_step = 10.0;     // displacement increment per unit
    int num_variants = 1;
    std::uint64_t seed = 0;
};

// (1-t)^3 p0 + 3t(1-t)^2 p1 + 3t^2(1-t) p2 + t^3 p3.
// Throws DomainError outside [0,1].
Point2 eval(const CubicBezier& curve, double t);

// Points along a traced path through the component, one sample every
// `interval` path pixels, first and last path pixels always included.
// The path is the approximate graph diameter: breadth-first search from
// the component's first row-major pixel to the farthest pixel, then from
// there to the farthest again; ties pick the smallest row-major index.
// Throws DegenerateComponent for single-pixel components.
std::vector<Point2> sample_component(const PixelComponent& comp, int interval);

// Least-squares cubic through ordered points: p0/p3 pinned to the end
// points, p1/p2 minimizing squared distance to the samples under
// chord-length parameterization (chord-length start, with parameter
// correction so exact cubic samples are recovered). Rank-deficient normal
// equations fall back to p1, p2 at 1/3 and 2/3 of the p0->p3 chord.
CubicBezier fit(const std::vector<Point2>& points);

// floor(row_count / C) * K_step.
double displacement_magnitude(int row_count, const PerturbParams& params);

// Adds isotropic Gaussian displacement of standard deviation theta per
// axis to p1 and p2; p0 and p3 are untouched. Consumes exactly two
// gaussian pairs from the stream.
CubicBezier perturb(const CubicBezier& curve, double theta, RngStream& stream);

// Paints every pixel within Chebyshev radius floor((thickness-1)/2) of
// the flattened curve (adaptive t grid, consecutive samples under one
// pixel apart). Pixels outside the canvas are clipped; existing
// foreground is preserved.
BinaryMask render(const CubicBezier& curve, const BinaryMask& canvas,
                  int thickness);

}  // namespace sseg
