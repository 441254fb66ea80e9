#include "sketchseg/skeleton.hpp"

#include <array>
#include <queue>

#include "sketchseg/errors.hpp"

namespace sseg {

namespace {

// 8-neighborhood in Zhang-Suen order P2..P9: N, NE, E, SE, S, SW, W, NW
constexpr std::array<int, 8> kDx = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr std::array<int, 8> kDy = {-1, -1, 0, 1, 1, 1, 0, -1};

inline int px(const BinaryMask& m, int x, int y) {
    if (x < 0 || y < 0 || x >= m.width || y >= m.height) return 0;  // zero pad
    return m.at(x, y);
}

// Labels the current foreground; fills labels with component ids (-1 for
// background) and returns per-component first row-major pixel index.
int label_components(const BinaryMask& m, std::vector<int>& labels,
                     std::vector<std::size_t>& first_idx) {
    const std::size_t n = m.bits.size();
    labels.assign(n, -1);
    first_idx.clear();
    int next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < n; ++i) {
        if (!m.bits[i] || labels[i] >= 0) continue;
        first_idx.push_back(i);
        labels[i] = next;
        stack.assign(1, i);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            const int cx = static_cast<int>(cur % m.width);
            const int cy = static_cast<int>(cur / m.width);
            for (int k = 0; k < 8; ++k) {
                const int nx = cx + kDx[k], ny = cy + kDy[k];
                if (nx < 0 || ny < 0 || nx >= m.width || ny >= m.height) continue;
                const std::size_t ni =
                    static_cast<std::size_t>(ny) * m.width + nx;
                if (m.bits[ni] && labels[ni] < 0) {
                    labels[ni] = next;
                    stack.push_back(ni);
                }
            }
        }
        ++next;
    }
    return next;
}

// One Zhang-Suen subiteration; sub = 0 uses conditions (c)(d), sub = 1 the
// mirrored (c')(d'). Returns whether any pixel was deleted.
bool thin_pass(BinaryMask& m, int sub) {
    std::vector<std::uint8_t> flag(m.bits.size(), 0);
    bool any = false;
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            int nb[8];
            for (int k = 0; k < 8; ++k) nb[k] = px(m, x + kDx[k], y + kDy[k]);
            int b = 0;
            for (int k = 0; k < 8; ++k) b += nb[k];
            if (b < 2 || b > 6) continue;
            int a = 0;
            for (int k = 0; k < 8; ++k)
                if (nb[k] == 0 && nb[(k + 1) % 8] == 1) ++a;
            if (a != 1) continue;
            const int p2 = nb[0], p4 = nb[2], p6 = nb[4], p8 = nb[6];
            if (sub == 0) {
                if (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0) continue;
            } else {
                if (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0) continue;
            }
            flag[static_cast<std::size_t>(y) * m.width + x] = 1;
            any = true;
        }
    }
    if (!any) return false;

    // vanish guard: keep the first row-major pixel of any fully flagged
    // component
    std::vector<int> labels;
    std::vector<std::size_t> first_idx;
    const int ncomp = label_components(m, labels, first_idx);
    std::vector<std::uint8_t> survives(static_cast<std::size_t>(ncomp), 0);
    for (std::size_t i = 0; i < m.bits.size(); ++i)
        if (m.bits[i] && !flag[i]) survives[labels[i]] = 1;
    for (int c = 0; c < ncomp; ++c)
        if (!survives[c]) flag[first_idx[c]] = 0;

    bool deleted = false;
    for (std::size_t i = 0; i < m.bits.size(); ++i) {
        if (flag[i]) {
            m.bits[i] = 0;
            deleted = true;
        }
    }
    return deleted;
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
    BinaryMask out = mask;
    bool changed = true;
    while (changed) {
        changed = false;
        changed |= thin_pass(out, 0);
        changed |= thin_pass(out, 1);
    }
    return out;
}

std::vector<PixelComponent> connected_components(const BinaryMask& mask) {
    std::vector<int> labels;
    std::vector<std::size_t> first_idx;
    const int ncomp = label_components(mask, labels, first_idx);

    std::vector<PixelComponent> comps(static_cast<std::size_t>(ncomp));
    // row-major scan keeps each pixel list sorted and orders components by
    // their first pixel (label ids were assigned in scan order)
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        if (!mask.bits[i]) continue;
        const int x = static_cast<int>(i % mask.width);
        const int y = static_cast<int>(i / mask.width);
        PixelComponent& c = comps[labels[i]];
        if (c.pixels.empty()) {
            c.x_min = c.x_max = x;
            c.y_min = c.y_max = y;
        } else {
            if (x < c.x_min) c.x_min = x;
            if (x > c.x_max) c.x_max = x;
            if (y < c.y_min) c.y_min = y;
            if (y > c.y_max) c.y_max = y;
        }
        c.pixels.emplace_back(x, y);
    }
    return comps;
}

BlockGrid partition_blocks(const BinaryMask& mask, int block_size) {
    if (block_size < 8)
        throw InvalidBlockSize("block_size " + std::to_string(block_size) +
                               " < 8");
    BlockGrid grid;
    grid.block_size = block_size;
    for (int oy = 0; oy < mask.height; oy += block_size) {
        for (int ox = 0; ox < mask.width; ox += block_size) {
            Block b;
            b.origin_x = ox;
            b.origin_y = oy;
            b.w = std::min(block_size, mask.width - ox);
            b.h = std::min(block_size, mask.height - oy);
            grid.blocks.push_back(b);
        }
    }
    return grid;
}

BinaryMask crop(const BinaryMask& mask, const Block& b) {
    BinaryMask out = make_mask(b.w, b.h);
    for (int y = 0; y < b.h; ++y)
        for (int x = 0; x < b.w; ++x)
            out.set(x, y, mask.at(b.origin_x + x, b.origin_y + y));
    return out;
}

}  // namespace sseg
