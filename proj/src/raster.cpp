#include "sketchseg/raster.hpp"

#include <png.h>

#include <cstdio>
#include <memory>

#include "sketchseg/errors.hpp"

namespace sseg {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

GrayRaster load_gray(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw FileNotFound(path);

    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw UnsupportedFormat(path + " is not a PNG");

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_read_struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png_create_info_struct");
    }

    std::vector<png_bytep> row_ptrs;
    std::vector<png_byte> data;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat(path + " (corrupt PNG stream)");
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat(path + " has bit depth > 8");
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE &&
        png_get_valid(png, info, PNG_INFO_tRNS)) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UnsupportedFormat(path + " palette with alpha");
    }

    // Normalize every accepted input to 8-bit RGB or gray.
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    const std::size_t channels = png_get_channels(png, info);

    data.resize(rowbytes * h);
    row_ptrs.resize(h);
    for (png_uint_32 y = 0; y < h; ++y) row_ptrs[y] = data.data() + y * rowbytes;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayRaster out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.pixels.resize(static_cast<std::size_t>(w) * h);
    if (channels == 1) {
        for (png_uint_32 y = 0; y < h; ++y)
            for (png_uint_32 x = 0; x < w; ++x)
                out.pixels[static_cast<std::size_t>(y) * w + x] =
                    data[y * rowbytes + x];
    } else if (channels == 3) {
        for (png_uint_32 y = 0; y < h; ++y) {
            const png_byte* row = data.data() + y * rowbytes;
            for (png_uint_32 x = 0; x < w; ++x) {
                const unsigned r = row[3 * x], g = row[3 * x + 1], b = row[3 * x + 2];
                // integer luma, rounded half-up
                out.pixels[static_cast<std::size_t>(y) * w + x] =
                    static_cast<std::uint8_t>((299u * r + 587u * g + 114u * b + 500u) /
                                              1000u);
            }
        }
    } else {
        throw UnsupportedFormat(path + " unexpected channel count");
    }
    return out;
}

BinaryMask binarize(const GrayRaster& img, int threshold) {
    BinaryMask out;
    out.width = img.width;
    out.height = img.height;
    out.bits.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        out.bits[i] = img.pixels[i] >= threshold ? 1 : 0;
    return out;
}

void save_gray(const GrayRaster& img, const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot open for writing: " + path);

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png_create_write_struct");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png write failed: " + path);
    }

    png_init_io(png, fp.get());
    // fixed encoder settings keep output bytes reproducible
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_FILTER_NONE);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(
                               img.pixels.data() +
                               static_cast<std::size_t>(y) * img.width));
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
}

void save_mask(const BinaryMask& mask, const std::string& path) {
    GrayRaster img;
    img.width = mask.width;
    img.height = mask.height;
    img.pixels.resize(mask.bits.size());
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        img.pixels[i] = mask.bits[i] ? 255 : 0;
    save_gray(img, path);
}

}  // namespace sseg
