#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sseg {

// Row-major 8-bit intensity grid.
struct GrayRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // size == width * height

    std::uint8_t at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

// Row-major {0,1} grid.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // size == width * height, each 0 or 1

    std::uint8_t at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x];
    }
    void set(int x, int y, std::uint8_t v) {
        bits[static_cast<std::size_t>(y) * width + x] = v;
    }
};

inline BinaryMask make_mask(int width, int height) {
    return BinaryMask{width, height,
                      std::vector<std::uint8_t>(
                          static_cast<std::size_t>(width) * height, 0)};
}

// Reads an 8-bit grayscale or RGB PNG; RGB is reduced by integer luma
// (299R + 587G + 114B + 500) / 1000. Accepts interlaced files and inputs
// with an alpha channel (alpha is dropped).
GrayRaster load_gray(const std::string& path);

// Foreground is intensity >= threshold.
BinaryMask binarize(const GrayRaster& img, int threshold);

// Writes mask as non-interlaced 8-bit grayscale PNG, 0 -> 0 and 1 -> 255.
// Encoder settings are fixed so identical masks give identical bytes.
void save_mask(const BinaryMask& mask, const std::string& path);

// Same encoder settings, full 8-bit intensity range.
void save_gray(const GrayRaster& img, const std::string& path);

}  // namespace sseg
