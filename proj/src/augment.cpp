#include "sketchseg/augment.hpp"

#include <algorithm>

#include "sketchseg/errors.hpp"
#include "sketchseg/rng.hpp"
#include "sketchseg/skeleton.hpp"

namespace sseg {

namespace {

struct FittedStroke {
    CubicBezier curve;  // global coordinates
    double theta = 0.0;
    std::size_t block_index = 0;
};

void validate(const AugmentConfig& cfg) {
    if (cfg.binarize_threshold < 0 || cfg.binarize_threshold > 255)
        throw DomainError("augment: binarize_threshold outside [0, 255]");
    if (cfg.min_component_pixels < 1 || cfg.sample_interval < 1 ||
        cfg.render_thickness < 1 || cfg.perturb.num_variants < 1 ||
        cfg.perturb.C < 1 || cfg.perturb.K_step < 0.0)
        throw DomainError("augment: non-positive configuration value");
}

}  // namespace

AugmentDetail augment_detail(const BinaryMask& sketch,
                             const AugmentConfig& config) {
    validate(config);
    bool any = false;
    for (std::uint8_t v : sketch.bits)
        if (v) {
            any = true;
            break;
        }
    if (!any) throw EmptySketch("augment: no foreground after binarization");

    AugmentDetail out;
    out.binarized = sketch;
    out.skeleton = skeletonize(sketch);
    const BlockGrid grid = partition_blocks(out.skeleton, config.block_size);

    std::vector<FittedStroke> strokes;
    for (std::size_t bi = 0; bi < grid.blocks.size(); ++bi) {
        const Block& blk = grid.blocks[bi];
        const BinaryMask local = crop(out.skeleton, blk);
        for (const PixelComponent& comp : connected_components(local)) {
            if (comp.pixels.size() <
                static_cast<std::size_t>(config.min_component_pixels))
                continue;
            const std::vector<Point2> samples =
                sample_component(comp, config.sample_interval);
            CubicBezier curve = fit(samples);
            const double ox = static_cast<double>(blk.origin_x);
            const double oy = static_cast<double>(blk.origin_y);
            for (Point2* p : {&curve.p0, &curve.p1, &curve.p2, &curve.p3}) {
                p->x += ox;
                p->y += oy;
            }
            FittedStroke s;
            s.curve = curve;
            s.theta = displacement_magnitude(comp.row_count(), config.perturb);
            s.block_index = bi;
            strokes.push_back(s);
            out.theta_max = std::max(out.theta_max, s.theta);
        }
    }

    out.variants.reserve(config.perturb.num_variants);
    for (int v = 0; v < config.perturb.num_variants; ++v) {
        BinaryMask canvas = make_mask(sketch.width, sketch.height);
        std::size_t i = 0;
        while (i < strokes.size()) {
            // One stream per (block, variant); strokes of a block draw
            // from it in component order.
            const std::size_t bi = strokes[i].block_index;
            RngStream stream = derive_stream(
                config.perturb.seed,
                {static_cast<std::uint64_t>(bi),
                 static_cast<std::uint64_t>(v)});
            for (; i < strokes.size() && strokes[i].block_index == bi; ++i) {
                const CubicBezier p =
                    perturb(strokes[i].curve, strokes[i].theta, stream);
                canvas = render(p, canvas, config.render_thickness);
            }
        }
        out.distortion.push_back(variant_distortion(out.binarized, canvas));
        out.variants.push_back(std::move(canvas));
    }
    return out;
}

AugmentDetail augment_detail(const GrayRaster& sketch,
                             const AugmentConfig& config) {
    validate(config);
    return augment_detail(binarize(sketch, config.binarize_threshold),
                          config);
}

std::vector<BinaryMask> augment_sketch(const BinaryMask& sketch,
                                       const AugmentConfig& config) {
    return augment_detail(sketch, config).variants;
}

std::vector<BinaryMask> augment_sketch(const GrayRaster& sketch,
                                       const AugmentConfig& config) {
    return augment_detail(sketch, config).variants;
}

double variant_distortion(const BinaryMask& original,
                          const BinaryMask& variant) {
    if (original.width != variant.width ||
        original.height != variant.height)
        throw DimMismatch("variant_distortion: mask shapes differ");
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < original.bits.size(); ++i) {
        const bool a = original.bits[i] != 0;
        const bool b = variant.bits[i] != 0;
        inter += (a && b) ? 1 : 0;
        uni += (a || b) ? 1 : 0;
    }
    return uni == 0 ? 1.0
                    : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace sseg
