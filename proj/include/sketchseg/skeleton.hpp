#pragma once

#include <vector>

#include "sketchseg/raster.hpp"

namespace sseg {

// One 8-connected set of foreground pixels.
struct PixelComponent {
    std::vector<std::pair<int, int>> pixels;  // (x, y), row-major order
    int x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    // rows spanned by the component; drives the displacement law
    int row_count() const { return y_max - y_min + 1; }
};

// Non-overlapping tiling; edge blocks may be smaller than block_size.
struct Block {
    int origin_x = 0, origin_y = 0, w = 0, h = 0;
};

struct BlockGrid {
    int block_size = 0;
    std::vector<Block> blocks;  // row-major over the tiling
};

// Zhang-Suen two-subiteration thinning run to a fixpoint, borders zero
// padded. Deletion is vetoed for the first row-major pixel of any
// component whose pixels are all flagged in one subiteration, so no
// component can vanish (an unguarded pass erases isolated 2x2 squares).
// Output foreground is a subset of the input; component count is
// preserved; the fixpoint makes the operation idempotent.
BinaryMask skeletonize(const BinaryMask& mask);

// 8-connected components ordered by smallest row-major pixel index.
std::vector<PixelComponent> connected_components(const BinaryMask& mask);

// Throws InvalidBlockSize when block_size < 8.
BlockGrid partition_blocks(const BinaryMask& mask, int block_size);

// View of one block of a mask as a standalone mask.
BinaryMask crop(const BinaryMask& mask, const Block& b);

}  // namespace sseg
