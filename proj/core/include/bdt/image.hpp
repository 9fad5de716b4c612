#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "bdt/errors.hpp"

namespace bdt {

using Rgb = std::array<std::uint8_t, 3>;

struct RawImage {
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels; // row-major

    Rgb at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }

    static RawImage filled(int w, int h, Rgb color) {
        return RawImage{w, h, std::vector<Rgb>(static_cast<std::size_t>(w) * h, color)};
    }
    bool operator==(const RawImage&) const = default;
};

// Binary PPM (P6, maxval 255).
RawImage load_ppm(const std::filesystem::path& path);
void save_ppm(const RawImage& img, const std::filesystem::path& path);

struct Hsv {
    double h = 0; // degrees [0, 360)
    double s = 0; // [0, 1]
    double v = 0; // [0, 1]
};

// Standard hexcone conversion; h is 0 when s == 0.
Hsv rgb_to_hsv(int r, int g, int b);
Rgb hsv_to_rgb(const Hsv& hsv);

struct HsvRange {
    double h_min = 0, h_max = 360;
    double s_min = 0, s_max = 1;
    double v_min = 0, v_max = 1;

    // Hue wraps through 0 when h_min > h_max.
    bool contains(const Hsv& c) const;
};

struct Bitmask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // row-major, 0/1

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
};

Bitmask mask_by_range(const RawImage& img, const HsvRange& range);

struct PixelCoord {
    int row = 0;
    int col = 0;
    bool operator==(const PixelCoord&) const = default;
};

// Largest 4-connected true region. Equal sizes tie-break to the component
// containing the lexicographically smallest (row, col) pixel.
std::vector<PixelCoord> largest_component(const Bitmask& mask);

struct Point2d {
    double x = 0;
    double y = 0;
};

struct OrientedRect {
    double cx = 0, cy = 0;     // center, pixels
    double width = 0, height = 0;
    double angle_deg = 0;      // normalized to (-45, 45]
};

// Minimal-area enclosing rectangle via rotating calipers over the convex
// hull. Throws DegenerateGeometry for fewer than 3 non-collinear points.
OrientedRect min_area_rect(std::span<const Point2d> points);

// Rotate by -angle about the rect center (bilinear), then crop to
// round(width) x round(height). Angle 0 is a bit-exact crop.
RawImage rectify(const RawImage& img, const OrientedRect& rect);

// Half-open crop; bounds must lie inside the image.
RawImage crop(const RawImage& img, int x0, int y0, int x1, int y1);

struct CellImages {
    RawImage cell;
    std::array<RawImage, 4> quadrants; // Q1=TL, Q2=TR, Q3=BL, Q4=BR
};

// Partition into n x n cells (floor boundaries), each split into 4 quadrant
// halves. Requires both image dimensions >= 2n.
std::vector<CellImages> slice_grid(const RawImage& img, int n);

} // namespace bdt
