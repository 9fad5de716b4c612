#include "bdt/abis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bdt/rng.hpp"

namespace bdt {

std::string_view to_string(QuadrantColor c) {
    switch (c) {
        case QuadrantColor::RedQ: return "Red";
        case QuadrantColor::WhiteQ: return "White";
        case QuadrantColor::GreenQ: return "Green";
        case QuadrantColor::OtherQ: return "Other";
    }
    return "Other";
}

namespace {

QuadrantColor threshold_decision(double r, double g, double b, int threshold) {
    const double t = threshold;
    if (r >= t && g >= t && b >= t) return QuadrantColor::WhiteQ;
    if (r >= t && g < t && b < t) return QuadrantColor::RedQ;
    if (g >= t && r < t && b < t) return QuadrantColor::GreenQ;
    return QuadrantColor::OtherQ;
}

double luminance(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

struct Centroid {
    double r = 0, g = 0, b = 0;
};

QuadrantColor classify_rgb_averaging(const RawImage& quad, const RgbAveraging& m) {
    double r = 0, g = 0, b = 0;
    for (const Rgb& p : quad.pixels) {
        r += p[0];
        g += p[1];
        b += p[2];
    }
    const double n = static_cast<double>(quad.pixels.size());
    return threshold_decision(r / n, g / n, b / n, m.threshold);
}

QuadrantColor classify_kmeans(const RawImage& quad, const KMeansMethod& m) {
    const std::size_t n = quad.pixels.size();
    const std::size_t k = static_cast<std::size_t>(std::min<int>(m.k, static_cast<int>(n)));
    std::vector<Centroid> centroids(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Rgb& p = quad.pixels[i * n / k];
        centroids[i] = {static_cast<double>(p[0]), static_cast<double>(p[1]),
                        static_cast<double>(p[2])};
    }
    std::vector<std::size_t> assignment(n, 0);
    std::vector<std::size_t> counts(k, 0);
    for (int iter = 0; iter < 50; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            const Rgb& p = quad.pixels[i];
            double best = std::numeric_limits<double>::max();
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < k; ++j) {
                const double dr = p[0] - centroids[j].r;
                const double dg = p[1] - centroids[j].g;
                const double db = p[2] - centroids[j].b;
                const double d = dr * dr + dg * dg + db * db;
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
            assignment[i] = best_j;
        }
        std::vector<Centroid> sums(k);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Rgb& p = quad.pixels[i];
            sums[assignment[i]].r += p[0];
            sums[assignment[i]].g += p[1];
            sums[assignment[i]].b += p[2];
            ++counts[assignment[i]];
        }
        double max_move = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] == 0) continue; // empty cluster keeps its centroid
            Centroid next{sums[j].r / counts[j], sums[j].g / counts[j], sums[j].b / counts[j]};
            max_move = std::max(max_move, std::hypot(next.r - centroids[j].r,
                                                     next.g - centroids[j].g,
                                                     next.b - centroids[j].b));
            centroids[j] = next;
        }
        if (max_move < 0.5) break;
    }
    std::size_t dominant = 0;
    for (std::size_t j = 1; j < k; ++j) {
        if (counts[j] > counts[dominant]) {
            dominant = j;
        } else if (counts[j] == counts[dominant]) {
            const Centroid& a = centroids[j];
            const Centroid& d = centroids[dominant];
            if (luminance(a.r, a.g, a.b) < luminance(d.r, d.g, d.b)) dominant = j;
        }
    }
    const Centroid& c = centroids[dominant];
    return threshold_decision(c.r, c.g, c.b, m.threshold);
}

QuadrantColor classify_knn(const RawImage& quad, const KnnMethod& m) {
    const std::vector<double> feature = knn_feature(quad, m.bins);
    struct Scored {
        double dist;
        std::size_t idx;
    };
    std::vector<Scored> scored;
    scored.reserve(m.training.size());
    for (std::size_t i = 0; i < m.training.size(); ++i) {
        const auto& ex = m.training[i];
        double d2 = 0;
        for (std::size_t j = 0; j < feature.size(); ++j) {
            const double d = feature[j] - ex.feature[j];
            d2 += d * d;
        }
        scored.push_back({std::sqrt(d2), i});
    }
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(m.k), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end(),
                      [](const Scored& a, const Scored& b) {
                          return a.dist != b.dist ? a.dist < b.dist : a.idx < b.idx;
                      });
    std::map<QuadrantColor, std::pair<int, double>> votes; // count, summed distance
    for (std::size_t i = 0; i < k; ++i) {
        auto& v = votes[m.training[scored[i].idx].color];
        v.first += 1;
        v.second += scored[i].dist;
    }
    QuadrantColor best = votes.begin()->first;
    for (const auto& [color, v] : votes) {
        const auto& b = votes[best];
        if (v.first > b.first || (v.first == b.first && v.second < b.second)) best = color;
    }
    return best;
}

} // namespace

std::vector<double> knn_feature(const RawImage& quad, int bins) {
    std::vector<double> feature(static_cast<std::size_t>(bins) * 3, 0.0);
    for (const Rgb& p : quad.pixels) {
        for (int c = 0; c < 3; ++c) {
            int bin = p[c] * bins / 256;
            feature[static_cast<std::size_t>(c) * bins + bin] += 1.0;
        }
    }
    const double total = static_cast<double>(quad.pixels.size());
    for (double& f : feature) f /= total; // each channel histogram sums to 1
    return feature;
}

std::vector<KnnExemplar> default_knn_training(int bins) {
    // Swatch colors follow the default simulator palette.
    const struct {
        QuadrantColor color;
        Rgb rgb;
    } swatches[] = {
        {QuadrantColor::RedQ, {200, 30, 30}},
        {QuadrantColor::WhiteQ, {230, 230, 230}},
        {QuadrantColor::GreenQ, {40, 140, 60}},
    };
    std::vector<KnnExemplar> training;
    Xorshift64Star rng(0xB10C4FACEULL);
    for (const auto& sw : swatches) {
        for (int i = 0; i < 10; ++i) {
            RawImage img = RawImage::filled(8, 8, sw.rgb);
            for (Rgb& p : img.pixels) {
                for (int c = 0; c < 3; ++c) {
                    const double noisy = p[c] + rng.next_gaussian() * 6.0;
                    p[c] = static_cast<std::uint8_t>(std::clamp(std::lround(noisy), 0L, 255L));
                }
            }
            training.push_back({sw.color, knn_feature(img, bins)});
        }
    }
    return training;
}

QuadrantColor classify_quadrant(const RawImage& quad, const ColorMethod& method) {
    if (quad.pixels.empty()) throw EmptyQuadrant("quadrant has no pixels");
    return std::visit(
        [&](const auto& m) -> QuadrantColor {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, RgbAveraging>) return classify_rgb_averaging(quad, m);
            else if constexpr (std::is_same_v<T, KMeansMethod>) return classify_kmeans(quad, m);
            else return classify_knn(quad, m);
        },
        method);
}

BlockFace face_from_quadrants(QuadrantColor q1, QuadrantColor q2,
                              QuadrantColor q3, QuadrantColor q4) {
    using QC = QuadrantColor;
    if (q1 == QC::GreenQ && q2 == QC::GreenQ && q3 == QC::GreenQ && q4 == QC::GreenQ)
        return BlockFace::Empty;
    if (q1 == QC::RedQ && q2 == QC::RedQ && q3 == QC::RedQ && q4 == QC::RedQ)
        return BlockFace::Red;
    if (q1 == QC::WhiteQ && q2 == QC::WhiteQ && q3 == QC::WhiteQ && q4 == QC::WhiteQ)
        return BlockFace::White;
    const bool ne = q2 == QC::RedQ && q3 == QC::WhiteQ;
    const bool sw = q3 == QC::RedQ && q2 == QC::WhiteQ;
    const bool nw = q1 == QC::RedQ && q4 == QC::WhiteQ;
    const bool se = q4 == QC::RedQ && q1 == QC::WhiteQ;
    const int fired = int(ne) + int(sw) + int(nw) + int(se);
    if (fired != 1) return BlockFace::Invalid;
    if (ne) return BlockFace::NE;
    if (sw) return BlockFace::SW;
    if (nw) return BlockFace::NW;
    return BlockFace::SE;
}

ConstructionArea locate_construction_area(const RawImage& first_frame,
                                          const AbisConfig& config) {
    const Bitmask blue = mask_by_range(first_frame, config.blue);
    const std::vector<PixelCoord> component = largest_component(blue);
    if (static_cast<int>(component.size()) < config.min_blue_area)
        throw GridNotFound("blue contour component below minimum area");

    PixelBox grid_box{component[0].col, component[0].row,
                      component[0].col + 1, component[0].row + 1};
    std::vector<Point2d> corners;
    corners.reserve(component.size() * 4);
    for (const PixelCoord& p : component) {
        grid_box.x0 = std::min(grid_box.x0, p.col);
        grid_box.y0 = std::min(grid_box.y0, p.row);
        grid_box.x1 = std::max(grid_box.x1, p.col + 1);
        grid_box.y1 = std::max(grid_box.y1, p.row + 1);
        const double x = p.col, y = p.row;
        corners.push_back({x, y});
        corners.push_back({x + 1, y});
        corners.push_back({x, y + 1});
        corners.push_back({x + 1, y + 1});
    }
    const OrientedRect rect = min_area_rect(corners);
    const RawImage upright = rectify(first_frame, rect);

    const Bitmask green = mask_by_range(upright, config.green);
    // Background green can leak in at the rectified border (rotation and
    // interpolation fringe); the construction surface is the green that the
    // tape encloses, so drop anything connected to the border first.
    Bitmask outside{green.width, green.height,
                    std::vector<std::uint8_t>(green.bits.size(), 0)};
    std::vector<PixelCoord> stack;
    const auto push_if_green = [&](int col, int row) {
        if (col < 0 || row < 0 || col >= green.width || row >= green.height) return;
        if (!green.get(col, row) || outside.get(col, row)) return;
        outside.set(col, row, true);
        stack.push_back({row, col});
    };
    for (int x = 0; x < green.width; ++x) {
        push_if_green(x, 0);
        push_if_green(x, green.height - 1);
    }
    for (int y = 0; y < green.height; ++y) {
        push_if_green(0, y);
        push_if_green(green.width - 1, y);
    }
    while (!stack.empty()) {
        const PixelCoord p = stack.back();
        stack.pop_back();
        push_if_green(p.col + 1, p.row);
        push_if_green(p.col - 1, p.row);
        push_if_green(p.col, p.row + 1);
        push_if_green(p.col, p.row - 1);
    }

    // Rows/columns that are mostly green belong to the surface; half-blend
    // pixels along the tape only produce straggler counts under noise, so a
    // half-of-max histogram threshold trims them off.
    std::vector<int> col_count(green.width, 0), row_count(green.height, 0);
    for (int y = 0; y < green.height; ++y)
        for (int x = 0; x < green.width; ++x)
            if (green.get(x, y) && !outside.get(x, y)) {
                ++col_count[x];
                ++row_count[y];
            }
    const auto span_above = [](const std::vector<int>& counts) {
        const int max_count = *std::max_element(counts.begin(), counts.end());
        if (max_count == 0) return std::pair<int, int>{0, 0};
        const int threshold = (max_count + 1) / 2;
        int lo = 0, hi = static_cast<int>(counts.size());
        while (lo < hi && counts[lo] < threshold) ++lo;
        while (hi > lo && counts[hi - 1] < threshold) --hi;
        return std::pair<int, int>{lo, hi};
    };
    const auto [x0, x1] = span_above(col_count);
    const auto [y0, y1] = span_above(row_count);
    const PixelBox inner{x0, y0, x1, y1};
    if (inner.x0 >= inner.x1 || inner.y0 >= inner.y1)
        throw NoInnerGreen("no green region inside the blue contour");
    return ConstructionArea{rect, inner, grid_box};
}

GridState detect_frame(const RawImage& frame, const ConstructionArea& area,
                       const GridSpec& spec, const ColorMethod& method) {
    const RawImage upright = rectify(frame, area.rect);
    const RawImage grid = crop(upright, area.inner.x0, area.inner.y0,
                               area.inner.x1, area.inner.y1);
    const std::vector<CellImages> cells = slice_grid(grid, spec.n);
    GridState state;
    state.faces.reserve(cells.size());
    for (const CellImages& cell : cells) {
        state.faces.push_back(face_from_quadrants(
            classify_quadrant(cell.quadrants[0], method),
            classify_quadrant(cell.quadrants[1], method),
            classify_quadrant(cell.quadrants[2], method),
            classify_quadrant(cell.quadrants[3], method)));
    }
    return state;
}

double iob(const HandBoxes& boxes, const PixelBox& grid_box) {
    if (grid_box.area() <= 0) return 0.0;
    // Clip to the grid box, then sum the union area by column sweep over
    // compressed x-coordinates.
    std::vector<PixelBox> clipped;
    for (const auto& b : boxes.boxes) {
        PixelBox c{std::max(b[0], grid_box.x0), std::max(b[1], grid_box.y0),
                   std::min(b[2], grid_box.x1), std::min(b[3], grid_box.y1)};
        if (c.x0 < c.x1 && c.y0 < c.y1) clipped.push_back(c);
    }
    if (clipped.empty()) return 0.0;
    std::vector<int> xs;
    for (const auto& c : clipped) {
        xs.push_back(c.x0);
        xs.push_back(c.x1);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    long long union_area = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const int x0 = xs[i], x1 = xs[i + 1];
        std::vector<std::pair<int, int>> spans;
        for (const auto& c : clipped)
            if (c.x0 <= x0 && c.x1 >= x1) spans.emplace_back(c.y0, c.y1);
        std::sort(spans.begin(), spans.end());
        int covered = 0, cur_lo = 0, cur_hi = 0;
        bool active = false;
        for (const auto& [lo, hi] : spans) {
            if (!active) {
                cur_lo = lo;
                cur_hi = hi;
                active = true;
            } else if (lo > cur_hi) {
                covered += cur_hi - cur_lo;
                cur_lo = lo;
                cur_hi = hi;
            } else {
                cur_hi = std::max(cur_hi, hi);
            }
        }
        if (active) covered += cur_hi - cur_lo;
        union_area += static_cast<long long>(covered) * (x1 - x0);
    }
    return static_cast<double>(union_area) / static_cast<double>(grid_box.area());
}

Timeline filter_occlusions(const Timeline& states, std::span<const HandBoxes> hands,
                           const PixelBox& grid_box, double threshold) {
    std::map<int, const HandBoxes*> by_frame;
    for (const HandBoxes& h : hands) by_frame[h.frame_index] = &h;
    Timeline out = states;
    for (std::size_t i = 1; i < out.states.size(); ++i) {
        const auto it = by_frame.find(out.states[i].frame_index);
        if (it == by_frame.end()) continue;
        if (iob(*it->second, grid_box) > threshold)
            out.states[i].faces = out.states[i - 1].faces;
    }
    return out;
}

Timeline filter_motion_intervals(const Timeline& states,
                                 std::span<const std::pair<int, int>> intervals) {
    Timeline out;
    out.spec = states.spec;
    out.sparse = true;
    for (const GridState& s : states.states) {
        bool inside = false;
        for (const auto& [start, end] : intervals) {
            if (s.frame_index >= start && s.frame_index <= end) {
                inside = true;
                break;
            }
        }
        if (!inside) out.states.push_back(s);
    }
    return out;
}

Timeline smooth(const Timeline& states) {
    Timeline out = states;
    const int cells = states.spec.cell_count();
    const std::size_t frames = states.states.size();
    for (int c = 0; c < cells; ++c) {
        std::size_t i = 0;
        while (i < frames) {
            if (out.states[i].faces[c] != BlockFace::Invalid) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j < frames && out.states[j].faces[c] == BlockFace::Invalid) ++j;
            // Run [i, j); rewrite only when bounded by one identical label.
            if (i > 0 && j < frames && out.states[i - 1].faces[c] == out.states[j].faces[c]) {
                for (std::size_t t = i; t < j; ++t)
                    out.states[t].faces[c] = out.states[i - 1].faces[c];
            }
            i = j;
        }
    }
    return out;
}

double evaluate_accuracy(const Timeline& detected, const Timeline& truth) {
    if (detected.spec.n != truth.spec.n)
        throw SpecMismatch("grid sizes differ");
    std::map<int, const GridState*> truth_by_frame;
    for (const GridState& s : truth.states) truth_by_frame[s.frame_index] = &s;
    long long agree = 0, total = 0;
    for (const GridState& d : detected.states) {
        const auto it = truth_by_frame.find(d.frame_index);
        if (it == truth_by_frame.end())
            throw SpecMismatch("truth missing frame " + std::to_string(d.frame_index));
        for (std::size_t c = 0; c < d.faces.size(); ++c) {
            agree += d.faces[c] == it->second->faces[c] ? 1 : 0;
            ++total;
        }
    }
    if (total == 0) throw SpecMismatch("no frames to evaluate");
    return static_cast<double>(agree) / static_cast<double>(total);
}

} // namespace bdt
