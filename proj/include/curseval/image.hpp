#pragma once

// 8-bit RGB raster plus a minimal PNG codec over zlib. Writing goes through
// one fixed code path (filter 0, fixed compression level) so identical
// pixels always produce byte-identical files.

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curseval {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    friend bool operator==(const Rgb&, const Rgb&) = default;
};

class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {0, 0, 0})
        : width_(width), height_(height), pix_(std::size_t(width) * height * 3) {
        if (width <= 0 || height <= 0) throw std::invalid_argument("Image: non-positive dimensions");
        for (std::size_t i = 0; i < pix_.size(); i += 3) {
            pix_[i] = fill.r;
            pix_[i + 1] = fill.g;
            pix_[i + 2] = fill.b;
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pix_.empty(); }

    Rgb get(int x, int y) const {
        const std::uint8_t* p = &pix_[idx(x, y)];
        return {p[0], p[1], p[2]};
    }

    void set(int x, int y, Rgb c) {
        std::uint8_t* p = &pix_[idx(x, y)];
        p[0] = c.r;
        p[1] = c.g;
        p[2] = c.b;
    }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    const std::vector<std::uint8_t>& pixels() const { return pix_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t idx(int x, int y) const {
        if (!in_bounds(x, y)) throw std::out_of_range("Image: pixel out of bounds");
        return (std::size_t(y) * width_ + x) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pix_;
};

namespace png_detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(char(v >> 24));
    out.push_back(char(v >> 16));
    out.push_back(char(v >> 8));
    out.push_back(char(v));
}

inline std::uint32_t read_u32(const unsigned char* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

inline void put_chunk(std::string& out, const char type[4], std::string_view payload) {
    put_u32(out, std::uint32_t(payload.size()));
    std::size_t crc_start = out.size();
    out.append(type, 4);
    out.append(payload);
    std::uint32_t crc = ::crc32(0L, reinterpret_cast<const Bytef*>(out.data() + crc_start),
                                uInt(out.size() - crc_start));
    put_u32(out, crc);
}

}  // namespace png_detail

inline std::string encode_png(const Image& img) {
    if (img.empty()) throw std::invalid_argument("encode_png: empty image");
    const int w = img.width(), h = img.height();
    std::vector<std::uint8_t> raw(std::size_t(h) * (1 + std::size_t(w) * 3));
    const auto& pix = img.pixels();
    for (int y = 0; y < h; ++y) {
        std::uint8_t* row = &raw[std::size_t(y) * (1 + std::size_t(w) * 3)];
        row[0] = 0;  // filter: none
        std::memcpy(row + 1, &pix[std::size_t(y) * w * 3], std::size_t(w) * 3);
    }
    uLongf comp_len = compressBound(uLong(raw.size()));
    std::vector<std::uint8_t> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), uLong(raw.size()), 6) != Z_OK)
        throw std::runtime_error("encode_png: deflate failed");

    std::string out("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    png_detail::put_u32(ihdr, std::uint32_t(w));
    png_detail::put_u32(ihdr, std::uint32_t(h));
    ihdr.push_back(8);   // bit depth
    ihdr.push_back(2);   // color type: truecolor
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    png_detail::put_chunk(out, "IHDR", ihdr);
    png_detail::put_chunk(out, "IDAT",
                          std::string_view(reinterpret_cast<const char*>(comp.data()), comp_len));
    png_detail::put_chunk(out, "IEND", {});
    return out;
}

inline Image decode_png(std::string_view data) {
    const auto* p = reinterpret_cast<const unsigned char*>(data.data());
    if (data.size() < 8 || std::memcmp(p, "\x89PNG\r\n\x1a\n", 8) != 0)
        throw std::runtime_error("decode_png: bad signature");
    std::size_t off = 8;
    std::uint32_t w = 0, h = 0;
    int color_type = -1;
    std::string idat;
    while (off + 8 <= data.size()) {
        std::uint32_t len = png_detail::read_u32(p + off);
        std::string_view type = data.substr(off + 4, 4);
        if (off + 12 + len > data.size()) throw std::runtime_error("decode_png: truncated chunk");
        const char* payload = data.data() + off + 8;
        if (type == "IHDR") {
            w = png_detail::read_u32(reinterpret_cast<const unsigned char*>(payload));
            h = png_detail::read_u32(reinterpret_cast<const unsigned char*>(payload) + 4);
            int depth = payload[8];
            color_type = payload[9];
            if (depth != 8 || (color_type != 2 && color_type != 6) || payload[12] != 0)
                throw std::runtime_error("decode_png: unsupported format");
        } else if (type == "IDAT") {
            idat.append(payload, len);
        } else if (type == "IEND") {
            break;
        }
        off += 12 + len;
    }
    if (w == 0 || h == 0 || idat.empty()) throw std::runtime_error("decode_png: missing data");

    const int bpp = color_type == 6 ? 4 : 3;
    const std::size_t stride = std::size_t(w) * bpp;
    std::vector<std::uint8_t> raw(std::size_t(h) * (1 + stride));
    uLongf raw_len = uLongf(raw.size());
    if (uncompress(raw.data(), &raw_len, reinterpret_cast<const Bytef*>(idat.data()),
                   uLong(idat.size())) != Z_OK ||
        raw_len != raw.size())
        throw std::runtime_error("decode_png: inflate failed");

    // Undo per-scanline filters.
    std::vector<std::uint8_t> prev(stride, 0);
    Image img{int(w), int(h)};
    std::vector<std::uint8_t> cur(stride);
    for (std::uint32_t y = 0; y < h; ++y) {
        const std::uint8_t* row = &raw[std::size_t(y) * (1 + stride)];
        int filter = row[0];
        const std::uint8_t* src = row + 1;
        for (std::size_t i = 0; i < stride; ++i) {
            int a = i >= std::size_t(bpp) ? cur[i - bpp] : 0;   // left
            int b = prev[i];                                    // up
            int c = i >= std::size_t(bpp) ? prev[i - bpp] : 0;  // up-left
            int x = src[i];
            switch (filter) {
                case 0: cur[i] = std::uint8_t(x); break;
                case 1: cur[i] = std::uint8_t(x + a); break;
                case 2: cur[i] = std::uint8_t(x + b); break;
                case 3: cur[i] = std::uint8_t(x + (a + b) / 2); break;
                case 4: {
                    int pp = a + b - c;
                    int pa = std::abs(pp - a), pb = std::abs(pp - b), pc = std::abs(pp - c);
                    int pred = (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
                    cur[i] = std::uint8_t(x + pred);
                    break;
                }
                default: throw std::runtime_error("decode_png: bad filter type");
            }
        }
        for (std::uint32_t x = 0; x < w; ++x)
            img.set(int(x), int(y), {cur[x * bpp], cur[x * bpp + 1], cur[x * bpp + 2]});
        prev = cur;
    }
    return img;
}

inline void save_png(const Image& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_png: cannot open " + path);
    std::string bytes = encode_png(img);
    f.write(bytes.data(), std::streamsize(bytes.size()));
}

inline Image load_png(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_png: cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return decode_png(bytes);
}

}  // namespace curseval
