#pragma once

// Deterministic code-editor renderer. Text is laid out on a uniform
// monospace grid; ground-truth cursor positions fall out of the grid in
// closed form instead of being measured from a live editor.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curseval/font.hpp"
#include "curseval/geometry.hpp"
#include "curseval/image.hpp"

namespace curseval {

struct EditorTheme {
    Rgb background{30, 30, 30};
    Rgb foreground{212, 212, 212};
    Rgb gutter_background{37, 37, 38};
    Rgb gutter_foreground{133, 133, 133};
};

struct EditorLayout {
    double origin_x = 60.0;   // top-left of the first character cell
    double origin_y = 40.0;
    double char_width = 8.0;  // pixels per column
    double line_height = 18.0;
    double gutter_width = 52.0;
    int image_width = 1344;
    int image_height = 1344;
    EditorTheme theme;

    int max_columns() const {
        return int(std::floor((image_width - origin_x) / char_width));
    }
    int max_lines() const {
        return int(std::floor((image_height - origin_y) / line_height));
    }

    void validate() const {
        if (char_width <= 0 || line_height <= 0)
            throw std::invalid_argument("EditorLayout: cell dimensions must be positive");
        if (origin_x < gutter_width)
            throw std::invalid_argument("EditorLayout: origin_x must not overlap the gutter");
        if (image_width <= 0 || image_height <= 0)
            throw std::invalid_argument("EditorLayout: image dimensions must be positive");
    }
};

struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (true) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

// Boundary before column `col` on `line`: x is the left edge of that
// column's cell, y the vertical center of the text line.
inline PixelPoint cursor_ground_truth(int line, int col, const EditorLayout& layout) {
    if (line < 0 || col < 0)
        throw std::invalid_argument("cursor_ground_truth: negative position");
    if (line >= layout.max_lines() || col > layout.max_columns())
        throw std::invalid_argument("cursor_ground_truth: position outside layout capacity");
    return {layout.origin_x + col * layout.char_width,
            layout.origin_y + line * layout.line_height + layout.line_height / 2.0};
}

namespace editor_detail {

inline void draw_glyph(Image& img, char ch, int px, int py, Rgb color) {
    for (int gx = 0; gx < kGlyphCols; ++gx)
        for (int gy = 0; gy < kGlyphRows; ++gy)
            if (glyph_pixel(ch, gx, gy) && img.in_bounds(px + gx, py + gy))
                img.set(px + gx, py + gy, color);
}

}  // namespace editor_detail

inline Image render(std::string_view text, const EditorLayout& layout) {
    layout.validate();
    auto lines = split_lines(text);
    if (int(lines.size()) > layout.max_lines())
        throw CapacityError("render: text has " + std::to_string(lines.size()) +
                            " lines, layout holds " + std::to_string(layout.max_lines()));
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (int(lines[i].size()) > layout.max_columns())
            throw CapacityError("render: line " + std::to_string(i + 1) + " has " +
                                std::to_string(lines[i].size()) + " columns, layout holds " +
                                std::to_string(layout.max_columns()));

    Image img(layout.image_width, layout.image_height, layout.theme.background);
    const int gutter_px = int(std::lround(layout.gutter_width));
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < gutter_px && x < img.width(); ++x)
            img.set(x, y, layout.theme.gutter_background);

    for (std::size_t l = 0; l < lines.size(); ++l) {
        const int row_y = int(std::lround(layout.origin_y + double(l) * layout.line_height));
        // 1-based line number, right-aligned inside the gutter.
        std::string num = std::to_string(l + 1);
        int num_x = gutter_px - 6 - int(num.size()) * int(std::lround(layout.char_width));
        for (std::size_t d = 0; d < num.size(); ++d)
            editor_detail::draw_glyph(img, num[d],
                                      num_x + int(d) * int(std::lround(layout.char_width)), row_y,
                                      layout.theme.gutter_foreground);
        for (std::size_t c = 0; c < lines[l].size(); ++c) {
            const int cell_x = int(std::lround(layout.origin_x + double(c) * layout.char_width));
            editor_detail::draw_glyph(img, lines[l][c], cell_x, row_y, layout.theme.foreground);
        }
    }
    return img;
}

inline std::string expand_tabs(std::string_view text, int tab_stop = 4) {
    std::string out;
    out.reserve(text.size());
    int col = 0;
    for (char c : text) {
        if (c == '\t') {
            int spaces = tab_stop - (col % tab_stop);
            out.append(std::size_t(spaces), ' ');
            col += spaces;
        } else {
            out.push_back(c);
            col = (c == '\n') ? 0 : col + 1;
        }
    }
    return out;
}

}  // namespace curseval
