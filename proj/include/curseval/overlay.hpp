#pragma once

// Red cross-hair feedback marker. mark() always works on a fresh copy of
// the clean screenshot, so successive turns never accumulate crosses.

#include <cmath>
#include <stdexcept>

#include "curseval/geometry.hpp"
#include "curseval/image.hpp"

namespace curseval {

struct OverlaySpec {
    Rgb color{255, 0, 0};
    double alpha = 0.6;          // opacity in (0,1]
    double arm_fraction = 0.05;  // total arm span as fraction of each dimension
    int stroke_width = 3;

    void validate() const {
        if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("OverlaySpec: alpha out of (0,1]");
        if (!(arm_fraction > 0.0 && arm_fraction < 0.5))
            throw std::invalid_argument("OverlaySpec: arm_fraction out of (0,0.5)");
        if (stroke_width < 1) throw std::invalid_argument("OverlaySpec: stroke_width < 1");
    }
};

struct MarkResult {
    Image image;
    bool clamped = false;  // prediction was outside the frame and pulled to the border
    long center_x = 0;     // pixel the cross is centered on, after rounding/clamping
    long center_y = 0;
};

namespace overlay_detail {

inline std::uint8_t blend(double alpha, std::uint8_t overlay, std::uint8_t src) {
    return std::uint8_t(std::lround(alpha * overlay + (1.0 - alpha) * src));
}

// Span of `len` pixels centered on `c`; odd lengths sit symmetrically,
// even lengths take the extra pixel on the high side.
struct Span {
    long lo, hi;  // inclusive
};

inline Span centered_span(long c, long len) { return {c - (len - 1) / 2, c + len / 2}; }

inline void fill_rect(Image& img, Span xs, Span ys, const OverlaySpec& spec) {
    for (long y = std::max(ys.lo, 0L); y <= std::min(ys.hi, long(img.height()) - 1); ++y)
        for (long x = std::max(xs.lo, 0L); x <= std::min(xs.hi, long(img.width()) - 1); ++x) {
            Rgb src = img.get(int(x), int(y));
            img.set(int(x), int(y),
                    {blend(spec.alpha, spec.color.r, src.r), blend(spec.alpha, spec.color.g, src.g),
                     blend(spec.alpha, spec.color.b, src.b)});
        }
}

}  // namespace overlay_detail

// Total arm length along one dimension, rounded half away from zero.
inline long arm_length(double arm_fraction, int dimension) {
    return std::lround(arm_fraction * dimension);
}

inline MarkResult mark(const Image& source, const PixelPoint& point, const OverlaySpec& spec = {}) {
    spec.validate();
    if (source.empty()) throw std::invalid_argument("mark: empty image");

    MarkResult result;
    result.image = source;  // fresh copy; the source stays untouched
    long px = round_half_away(point.x);
    long py = round_half_away(point.y);
    long cx = std::clamp(px, 0L, long(source.width()) - 1);
    long cy = std::clamp(py, 0L, long(source.height()) - 1);
    result.clamped = (cx != px || cy != py);
    result.center_x = cx;
    result.center_y = cy;

    const long horiz = arm_length(spec.arm_fraction, source.width());
    const long vert = arm_length(spec.arm_fraction, source.height());
    const long sw = spec.stroke_width;

    auto h_span = overlay_detail::centered_span(cx, horiz);
    auto v_span = overlay_detail::centered_span(cy, vert);
    auto x_stroke = overlay_detail::centered_span(cx, sw);
    auto y_stroke = overlay_detail::centered_span(cy, sw);

    overlay_detail::fill_rect(result.image, h_span, y_stroke, spec);  // horizontal arm
    // Vertical arm, skipping the rows already blended by the horizontal arm
    // so the center is not double-blended.
    overlay_detail::fill_rect(result.image, x_stroke, {v_span.lo, y_stroke.lo - 1}, spec);
    overlay_detail::fill_rect(result.image, x_stroke, {y_stroke.hi + 1, v_span.hi}, spec);
    return result;
}

}  // namespace curseval
