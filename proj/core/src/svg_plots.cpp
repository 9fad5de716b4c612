#include "bdt/svg_plots.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bdt {

namespace {

constexpr Rgb kLightGreen{229, 245, 224};
constexpr Rgb kDarkGreen{0, 68, 27};

const char* kParticipantPalette[12] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
};

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::ostringstream svg_open(int width, int height) {
    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    return out;
}

void draw_face_cell(std::ostringstream& out, double x, double y, double s, BlockFace face) {
    const char* red = "#c81e1e";
    const char* white = "#e6e6e6";
    out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << s << "\" height=\"" << s
        << "\" fill=\"" << (face == BlockFace::Red ? red : white)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    if (face == BlockFace::Red || face == BlockFace::White || face == BlockFace::Empty) return;
    // Red triangle covering the half the label points to.
    std::string points;
    const auto pt = [&](double px, double py) {
        points += fmt(px) + "," + fmt(py) + " ";
    };
    switch (face) {
        case BlockFace::NW: pt(x, y); pt(x + s, y); pt(x, y + s); break;
        case BlockFace::NE: pt(x, y); pt(x + s, y); pt(x + s, y + s); break;
        case BlockFace::SW: pt(x, y); pt(x, y + s); pt(x + s, y + s); break;
        case BlockFace::SE: pt(x + s, y); pt(x + s, y + s); pt(x, y + s); break;
        default: return;
    }
    out << "  <polygon points=\"" << points << "\" fill=\"" << red << "\"/>\n";
}

} // namespace

Rgb heatmap_fill(int rank, int max_rank) {
    const double t = max_rank > 1 ? static_cast<double>(rank - 1) / (max_rank - 1) : 0.5;
    Rgb out;
    for (int c = 0; c < 3; ++c)
        out[c] = static_cast<std::uint8_t>(
            std::lround(kLightGreen[c] + t * (kDarkGreen[c] - kLightGreen[c])));
    return out;
}

SvgDoc sequence_heatmap(const PlacementSequence& seq, const std::vector<BlockFace>& design) {
    if (!seq.complete()) throw IncompleteSequence("heatmap needs a complete sequence");
    const int n = seq.spec.n;
    const double cell = 40;
    const double gap = 30;
    const int width = static_cast<int>(2 * n * cell + gap + 20);
    const int height = static_cast<int>(n * cell + 20);
    std::ostringstream out = svg_open(width, height);

    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            draw_face_cell(out, 10 + c * cell, 10 + r * cell, cell, design[r * n + c]);

    const double ox = 10 + n * cell + gap;
    const int max_rank = n * n;
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int rank = *seq.ranks[r * n + c];
            const Rgb fill = heatmap_fill(rank, max_rank);
            const double x = ox + c * cell, y = 10 + r * cell;
            out << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << hex(fill)
                << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
            out << "  <text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                << "\" font-size=\"12\" text-anchor=\"middle\" fill=\"#111111\">" << rank
                << "</text>\n";
        }
    }
    out << "</svg>\n";
    return SvgDoc{width, height, out.str()};
}

SvgDoc strategy_bars(const StrategyReport& report) {
    const int width = 320, height = 220;
    const double plot_h = 160, base_y = 190, bar_w = 40, gap = 20, left = 30;
    std::ostringstream out = svg_open(width, height);
    out << "  <line x1=\"" << left - 5 << "\" y1=\"" << base_y << "\" x2=\"" << width - 10
        << "\" y2=\"" << base_y << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    for (std::size_t i = 0; i < kAllStrategies.size(); ++i) {
        const double score = report.scores[i];
        const double unit = report.measure == Measure::Tau ? (score + 1.0) / 2.0 : score;
        const double h = std::clamp(unit, 0.0, 1.0) * plot_h;
        const double x = left + i * (bar_w + gap);
        const bool best = kAllStrategies[i] == report.best_kind;
        out << "  <rect x=\"" << x << "\" y=\"" << base_y - h << "\" width=\"" << bar_w
            << "\" height=\"" << h << "\" fill=\"" << (best ? "#d62728" : "#9e9e9e")
            << "\"/>\n";
        out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << base_y + 14
            << "\" font-size=\"12\" text-anchor=\"middle\">"
            << to_string(kAllStrategies[i]) << "</text>\n";
        out << "  <text x=\"" << x + bar_w / 2 << "\" y=\"" << base_y - h - 4
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(score) << "</text>\n";
    }
    if (report.tie_flag)
        out << "  <text x=\"" << width / 2
            << "\" y=\"16\" font-size=\"12\" text-anchor=\"middle\">tie</text>\n";
    out << "</svg>\n";
    return SvgDoc{width, height, out.str()};
}

SvgDoc scatter(std::span<const TrialPoint> points) {
    const int width = 420, height = 320;
    const double left = 50, right = 20, top = 20, bottom = 40;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    if (points.empty()) throw Error("scatter needs at least one point");
    double x_min = points[0].completion_seconds, x_max = x_min;
    double y_min = points[0].error_count, y_max = y_min;
    for (const TrialPoint& p : points) {
        x_min = std::min(x_min, p.completion_seconds);
        x_max = std::max(x_max, p.completion_seconds);
        y_min = std::min<double>(y_min, p.error_count);
        y_max = std::max<double>(y_max, p.error_count);
    }
    // 10% margin; degenerate ranges get a unit span.
    const double x_span = x_max > x_min ? x_max - x_min : 1.0;
    const double y_span = y_max > y_min ? y_max - y_min : 1.0;
    x_min -= 0.1 * x_span; x_max += 0.1 * x_span;
    y_min -= 0.1 * y_span; y_max += 0.1 * y_span;

    const auto px = [&](double v) { return left + (v - x_min) / (x_max - x_min) * plot_w; };
    const auto py = [&](double v) { return top + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

    std::ostringstream out = svg_open(width, height);
    out << "  <line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"#333333\"/>\n";
    out << "  <line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"#333333\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x_min + i * (x_max - x_min) / 4;
        const double yv = y_min + i * (y_max - y_min) / 4;
        out << "  <text x=\"" << px(xv) << "\" y=\"" << top + plot_h + 16
            << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        out << "  <text x=\"" << left - 6 << "\" y=\"" << py(yv) + 3
            << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    out << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 6
        << "\" font-size=\"12\" text-anchor=\"middle\">completion (s)</text>\n";

    std::map<std::string, std::size_t> color_of;
    for (const TrialPoint& p : points) {
        const auto [it, inserted] = color_of.try_emplace(p.participant, color_of.size());
        const char* color = kParticipantPalette[it->second % 12];
        out << "  <circle cx=\"" << px(p.completion_seconds) << "\" cy=\"" << py(p.error_count)
            << "\" r=\"4\" fill=\"" << color << "\"><title>" << xml_escape(p.participant) << "/"
            << xml_escape(p.puzzle) << "</title></circle>\n";
    }
    out << "</svg>\n";
    return SvgDoc{width, height, out.str()};
}

} // namespace bdt
