#pragma once

// Coordinate frames and the scaling/distance rules shared by every module.
//
// Two frames exist: the normalized [0,1000] frame stored in dataset files,
// and the pixel frame of a concrete image. Targets are boxes; a degenerate
// box (zero width and/or height) is a cursor boundary.

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curseval {

struct PixelPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

// Axis-aligned box in the pixel frame, corner form.
struct PixelBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    PixelPoint center() const { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
    bool degenerate() const { return x0 == x1 || y0 == y1; }

    friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

// Box in the normalized [0,1000] frame, corner form (x0,y0,x1,y1).
struct NormalizedBox {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    static NormalizedBox point(double x, double y) { return {x, y, x, y}; }

    friend bool operator==(const NormalizedBox&, const NormalizedBox&) = default;
};

inline constexpr double kNormalizedScale = 1000.0;

inline PixelBox denormalize(const NormalizedBox& box, double width, double height) {
    if (width <= 0.0 || height <= 0.0)
        throw std::invalid_argument("denormalize: image dimensions must be positive");
    const double sx = width / kNormalizedScale;
    const double sy = height / kNormalizedScale;
    return {box.x0 * sx, box.y0 * sy, box.x1 * sx, box.y1 * sy};
}

inline NormalizedBox normalize(const PixelBox& box, double width, double height) {
    if (width <= 0.0 || height <= 0.0)
        throw std::invalid_argument("normalize: image dimensions must be positive");
    const double sx = kNormalizedScale / width;
    const double sy = kNormalizedScale / height;
    return {box.x0 * sx, box.y0 * sy, box.x1 * sx, box.y1 * sy};
}

// CSS-pixel point to physical-pixel point.
inline PixelPoint physical_point(const PixelPoint& p, double device_pixel_ratio) {
    if (device_pixel_ratio <= 0.0)
        throw std::invalid_argument("physical_point: device_pixel_ratio must be positive");
    return {p.x * device_pixel_ratio, p.y * device_pixel_ratio};
}

// Half-away-from-zero rounding, used wherever a real coordinate becomes a
// reported integer pixel (feedback text, overlay center).
inline long round_half_away(double v) { return std::lround(v); }

// dist_box: Euclidean distance to the nearest point of the box, 0 inside.
// dist_center: Euclidean distance to the box center.
struct Distances {
    double to_box = 0.0;
    double to_center = 0.0;
};

inline Distances distances(const PixelPoint& p, const PixelBox& box) {
    const double dx = std::max({box.x0 - p.x, 0.0, p.x - box.x1});
    const double dy = std::max({box.y0 - p.y, 0.0, p.y - box.y1});
    const PixelPoint c = box.center();
    return {std::hypot(dx, dy), std::hypot(p.x - c.x, p.y - c.y)};
}

// Tolerance-based hit rule: expand the box by (tol_x, tol_y) and test
// inclusive containment. The same rule serves degenerate and full boxes.
inline bool hit_test(const PixelPoint& p, const PixelBox& box, double tol_x, double tol_y) {
    return p.x >= box.x0 - tol_x && p.x <= box.x1 + tol_x &&
           p.y >= box.y0 - tol_y && p.y <= box.y1 + tol_y;
}

}  // namespace curseval
