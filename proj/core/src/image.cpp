#include "bdt/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>

namespace bdt {

namespace {

int read_ppm_token(std::istream& in) {
    // Skips whitespace and '#' comments before the token.
    int c = in.get();
    while (c != EOF && (std::isspace(c) || c == '#')) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        }
        c = in.get();
    }
    if (c == EOF) throw MalformedPpm("truncated PPM header");
    int value = 0;
    bool any = false;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        any = true;
        c = in.get();
    }
    if (!any) throw MalformedPpm("non-numeric PPM header token");
    return value;
}

} // namespace

RawImage load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedPpm("cannot open " + path.string());
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '6')
        throw MalformedPpm("bad magic in " + path.string());
    const int w = read_ppm_token(in);
    const int h = read_ppm_token(in);
    const int maxval = read_ppm_token(in);
    if (w <= 0 || h <= 0) throw MalformedPpm("bad dimensions in " + path.string());
    if (maxval != 255) throw MalformedPpm("unsupported maxval in " + path.string());
    RawImage img;
    img.width = w;
    img.height = h;
    img.pixels.resize(static_cast<std::size_t>(w) * h);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size() * 3));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size() * 3))
        throw MalformedPpm("truncated payload in " + path.string());
    return img;
}

void save_ppm(const RawImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "P6\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size() * 3));
    if (!out) throw Error("write failed for " + path.string());
}

Hsv rgb_to_hsv(int r, int g, int b) {
    const double rf = r / 255.0, gf = g / 255.0, bf = b / 255.0;
    const double maxc = std::max({rf, gf, bf});
    const double minc = std::min({rf, gf, bf});
    const double delta = maxc - minc;
    Hsv out;
    out.v = maxc;
    out.s = maxc > 0 ? delta / maxc : 0.0;
    if (delta <= 0 || out.s == 0) {
        out.h = 0;
        return out;
    }
    double h;
    if (maxc == rf)
        h = std::fmod((gf - bf) / delta, 6.0);
    else if (maxc == gf)
        h = (bf - rf) / delta + 2.0;
    else
        h = (rf - gf) / delta + 4.0;
    h *= 60.0;
    if (h < 0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
    return out;
}

Rgb hsv_to_rgb(const Hsv& hsv) {
    const double c = hsv.v * hsv.s;
    const double hp = hsv.h / 60.0;
    const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1)      { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else             { r = c; b = x; }
    const double m = hsv.v - c;
    auto to8 = [&](double f) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(f + m, 0.0, 1.0) * 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

bool HsvRange::contains(const Hsv& c) const {
    if (c.s < s_min || c.s > s_max) return false;
    if (c.v < v_min || c.v > v_max) return false;
    if (h_min <= h_max) return c.h >= h_min && c.h <= h_max;
    return c.h >= h_min || c.h <= h_max; // wraps through 0
}

Bitmask mask_by_range(const RawImage& img, const HsvRange& range) {
    Bitmask mask;
    mask.width = img.width;
    mask.height = img.height;
    mask.bits.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) {
        const Rgb& p = img.pixels[i];
        mask.bits[i] = range.contains(rgb_to_hsv(p[0], p[1], p[2])) ? 1 : 0;
    }
    return mask;
}

std::vector<PixelCoord> largest_component(const Bitmask& mask) {
    std::vector<std::uint8_t> seen(mask.bits.size(), 0);
    std::vector<PixelCoord> best;
    std::vector<PixelCoord> current;
    std::deque<PixelCoord> queue;
    for (int row = 0; row < mask.height; ++row) {
        for (int col = 0; col < mask.width; ++col) {
            const std::size_t idx = static_cast<std::size_t>(row) * mask.width + col;
            if (!mask.bits[idx] || seen[idx]) continue;
            current.clear();
            seen[idx] = 1;
            queue.push_back({row, col});
            while (!queue.empty()) {
                PixelCoord p = queue.front();
                queue.pop_front();
                current.push_back(p);
                const int dr[4] = {-1, 1, 0, 0};
                const int dc[4] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = p.row + dr[k], nc = p.col + dc[k];
                    if (nr < 0 || nr >= mask.height || nc < 0 || nc >= mask.width) continue;
                    const std::size_t nidx = static_cast<std::size_t>(nr) * mask.width + nc;
                    if (!mask.bits[nidx] || seen[nidx]) continue;
                    seen[nidx] = 1;
                    queue.push_back({nr, nc});
                }
            }
            // Row-major scan order means equal-size ties resolve to the
            // component with the smallest (row, col) pixel.
            if (current.size() > best.size()) best = current;
        }
    }
    std::sort(best.begin(), best.end(), [](const PixelCoord& a, const PixelCoord& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return best;
}

namespace {

double cross(const Point2d& o, const Point2d& a, const Point2d& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::vector<Point2d> convex_hull(std::vector<Point2d> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point2d& a, const Point2d& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Point2d& a, const Point2d& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    std::vector<Point2d> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace

OrientedRect min_area_rect(std::span<const Point2d> points) {
    std::vector<Point2d> hull = convex_hull({points.begin(), points.end()});
    if (hull.size() < 3) throw DegenerateGeometry("min_area_rect needs 3 non-collinear points");

    double best_area = std::numeric_limits<double>::max();
    OrientedRect best;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Point2d& a = hull[i];
        const Point2d& b = hull[(i + 1) % hull.size()];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len = std::hypot(ex, ey);
        if (len == 0) continue;
        const double ux = ex / len, uy = ey / len; // edge direction
        double min_u = std::numeric_limits<double>::max(), max_u = -min_u;
        double min_v = std::numeric_limits<double>::max(), max_v = -min_v;
        for (const Point2d& p : hull) {
            const double u = p.x * ux + p.y * uy;
            const double v = -p.x * uy + p.y * ux;
            min_u = std::min(min_u, u); max_u = std::max(max_u, u);
            min_v = std::min(min_v, v); max_v = std::max(max_v, v);
        }
        const double w = max_u - min_u;
        const double h = max_v - min_v;
        const double area = w * h;
        if (area < best_area) {
            best_area = area;
            const double cu = (min_u + max_u) / 2.0;
            const double cv = (min_v + max_v) / 2.0;
            best.cx = cu * ux - cv * uy;
            best.cy = cu * uy + cv * ux;
            best.width = w;
            best.height = h;
            best.angle_deg = std::atan2(uy, ux) * 180.0 / std::numbers::pi;
        }
    }
    // Normalize angle to (-45, 45], swapping extents per quarter turn.
    while (best.angle_deg > 45.0) {
        best.angle_deg -= 90.0;
        std::swap(best.width, best.height);
    }
    while (best.angle_deg <= -45.0) {
        best.angle_deg += 90.0;
        std::swap(best.width, best.height);
    }
    if (best.width <= 0 || best.height <= 0)
        throw DegenerateGeometry("min_area_rect produced an empty rectangle");
    return best;
}

RawImage rectify(const RawImage& img, const OrientedRect& rect) {
    const double theta = rect.angle_deg * std::numbers::pi / 180.0;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double hw = rect.width / 2.0, hh = rect.height / 2.0;
    for (int sx : {-1, 1}) {
        for (int sy : {-1, 1}) {
            const double px = rect.cx + ct * sx * hw - st * sy * hh;
            const double py = rect.cy + st * sx * hw + ct * sy * hh;
            if (px < -0.5 || px > img.width + 0.5 || py < -0.5 || py > img.height + 0.5)
                throw OutOfBounds("oriented rect extends past image bounds");
        }
    }

    const int out_w = static_cast<int>(std::lround(rect.width));
    const int out_h = static_cast<int>(std::lround(rect.height));
    if (out_w <= 0 || out_h <= 0) throw OutOfBounds("empty rectified output");
    RawImage out;
    out.width = out_w;
    out.height = out_h;
    out.pixels.resize(static_cast<std::size_t>(out_w) * out_h);

    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const double ox = x + 0.5 - out_w / 2.0;
            const double oy = y + 0.5 - out_h / 2.0;
            // Pixel-center coordinates of the bilinear sample point.
            const double px = rect.cx + ct * ox - st * oy - 0.5;
            const double py = rect.cy + st * ox + ct * oy - 0.5;
            const int x0 = std::clamp(static_cast<int>(std::floor(px)), 0, img.width - 1);
            const int y0 = std::clamp(static_cast<int>(std::floor(py)), 0, img.height - 1);
            const int x1 = std::min(x0 + 1, img.width - 1);
            const int y1 = std::min(y0 + 1, img.height - 1);
            const double fx = std::clamp(px - x0, 0.0, 1.0);
            const double fy = std::clamp(py - y0, 0.0, 1.0);
            Rgb result;
            for (int c = 0; c < 3; ++c) {
                const double top = img.at(x0, y0)[c] * (1 - fx) + img.at(x1, y0)[c] * fx;
                const double bot = img.at(x0, y1)[c] * (1 - fx) + img.at(x1, y1)[c] * fx;
                result[c] = static_cast<std::uint8_t>(
                    std::clamp(std::lround(top * (1 - fy) + bot * fy), 0L, 255L));
            }
            out.at(x, y) = result;
        }
    }
    return out;
}

namespace {

RawImage crop_region(const RawImage& img, int x0, int y0, int x1, int y1) {
    RawImage out;
    out.width = x1 - x0;
    out.height = y1 - y0;
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x)
            out.at(x - x0, y - y0) = img.at(x, y);
    return out;
}

} // namespace

RawImage crop(const RawImage& img, int x0, int y0, int x1, int y1) {
    if (x0 < 0 || y0 < 0 || x1 > img.width || y1 > img.height || x0 >= x1 || y0 >= y1)
        throw OutOfBounds("crop bounds outside image");
    return crop_region(img, x0, y0, x1, y1);
}

std::vector<CellImages> slice_grid(const RawImage& img, int n) {
    if (n < 2) throw TooSmall("grid side must be >= 2");
    if (img.width < 2 * n || img.height < 2 * n)
        throw TooSmall("image too small to slice into " + std::to_string(n) + "x" +
                       std::to_string(n) + " cells with quadrants");
    std::vector<CellImages> cells;
    cells.reserve(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        const int y0 = r * img.height / n;
        const int y1 = (r + 1) * img.height / n;
        for (int c = 0; c < n; ++c) {
            const int x0 = c * img.width / n;
            const int x1 = (c + 1) * img.width / n;
            CellImages ci;
            ci.cell = crop_region(img, x0, y0, x1, y1);
            const int mx = (x1 - x0) / 2, my = (y1 - y0) / 2;
            ci.quadrants[0] = crop_region(ci.cell, 0, 0, mx, my);                      // Q1 TL
            ci.quadrants[1] = crop_region(ci.cell, mx, 0, x1 - x0, my);                // Q2 TR
            ci.quadrants[2] = crop_region(ci.cell, 0, my, mx, y1 - y0);                // Q3 BL
            ci.quadrants[3] = crop_region(ci.cell, mx, my, x1 - x0, y1 - y0);          // Q4 BR
            cells.push_back(std::move(ci));
        }
    }
    return cells;
}

} // namespace bdt
