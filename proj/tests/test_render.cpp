#include <catch_amalgamated.hpp>

#include <filesystem>

#include "curseval/editor.hpp"

using namespace curseval;

namespace {

// Compares the 5x7 block at (px,py) against the embedded glyph pattern.
bool glyph_matches(const Image& img, char ch, int px, int py, Rgb fg, Rgb bg) {
    for (int gx = 0; gx < kGlyphCols; ++gx)
        for (int gy = 0; gy < kGlyphRows; ++gy) {
            Rgb expect = glyph_pixel(ch, gx, gy) ? fg : bg;
            if (!(img.get(px + gx, py + gy) == expect)) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("rendering is deterministic down to the PNG bytes") {
    EditorLayout layout;
    Image a = render("int main() {\n    return 0;\n}", layout);
    Image b = render("int main() {\n    return 0;\n}", layout);
    CHECK(a == b);
    CHECK(encode_png(a) == encode_png(b));
}

TEST_CASE("glyphs land flush at the grid cell top-left") {
    EditorLayout layout;
    const Rgb fg = layout.theme.foreground;
    const Rgb bg = layout.theme.background;
    Image img = render("Hi\nok", layout);
    // Cell (line 0, col 0) starts at the text origin.
    CHECK(glyph_matches(img, 'H', 60, 40, fg, bg));
    CHECK(glyph_matches(img, 'i', 68, 40, fg, bg));
    // Line 1 starts one line_height below.
    CHECK(glyph_matches(img, 'o', 60, 58, fg, bg));
    CHECK(glyph_matches(img, 'k', 68, 58, fg, bg));
}

TEST_CASE("cursor ground truth follows the closed-form grid law") {
    EditorLayout layout;
    PixelPoint p = cursor_ground_truth(0, 0, layout);
    CHECK(p.x == Catch::Approx(60.0));
    CHECK(p.y == Catch::Approx(49.0));  // 40 + 18/2
    PixelPoint q = cursor_ground_truth(2, 5, layout);
    CHECK(q.x == Catch::Approx(60.0 + 5 * 8.0));
    CHECK(q.y == Catch::Approx(40.0 + 2 * 18.0 + 9.0));
    CHECK_THROWS_AS(cursor_ground_truth(-1, 0, layout), std::invalid_argument);
    CHECK_THROWS_AS(cursor_ground_truth(0, layout.max_columns() + 1, layout),
                    std::invalid_argument);
}

TEST_CASE("capacity violations raise CapacityError") {
    EditorLayout layout;
    std::string long_line(std::size_t(layout.max_columns()) + 1, 'x');
    CHECK_THROWS_AS(render(long_line, layout), CapacityError);
    std::string many_lines;
    for (int i = 0; i <= layout.max_lines(); ++i) many_lines += "a\n";
    CHECK_THROWS_AS(render(many_lines, layout), CapacityError);
}

TEST_CASE("empty text still renders a gutter and background") {
    EditorLayout layout;
    Image img = render("", layout);
    CHECK(img.get(0, 0) == layout.theme.gutter_background);
    CHECK(img.get(0, img.height() - 1) == layout.theme.gutter_background);
    CHECK(img.get(img.width() - 1, 0) == layout.theme.background);
}

TEST_CASE("gutter shows 1-based line numbers") {
    EditorLayout layout;
    Image img = render("a\nb", layout);
    // Line 1's number "1" is right-aligned in the gutter on the first row.
    int gutter_px = int(layout.gutter_width);
    int num_x = gutter_px - 6 - int(layout.char_width);
    CHECK(glyph_matches(img, '1', num_x, 40, layout.theme.gutter_foreground,
                        layout.theme.gutter_background));
    CHECK(glyph_matches(img, '2', num_x, 58, layout.theme.gutter_foreground,
                        layout.theme.gutter_background));
}

TEST_CASE("PNG encode/decode round-trips exactly") {
    EditorLayout layout;
    layout.image_width = 200;
    layout.image_height = 120;
    Image img = render("xy", layout);
    Image back = decode_png(encode_png(img));
    CHECK(back == img);

    auto path = std::filesystem::temp_directory_path() / "curseval_render_roundtrip.png";
    save_png(img, path.string());
    CHECK(load_png(path.string()) == img);
}

TEST_CASE("split_lines keeps empty segments") {
    auto lines = split_lines("a\n\nb\n");
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "a");
    CHECK(lines[1] == "");
    CHECK(lines[2] == "b");
    CHECK(lines[3] == "");
}

TEST_CASE("expand_tabs pads to the next tab stop") {
    CHECK(expand_tabs("a\tb") == "a   b");
    CHECK(expand_tabs("\tx") == "    x");
    CHECK(expand_tabs("ab\ncd\te", 4) == "ab\ncd  e");
}
