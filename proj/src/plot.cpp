#include "zonosvm/cli.hpp"
#include "zonosvm/lmo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace zonosvm {
namespace {

constexpr double kWidth = 720.0, kHeight = 540.0, kPad = 48.0;

struct WorldToScreen {
    double scale = 1.0, x0 = 0.0, y0 = 0.0, cx = 0.0, cy = 0.0;

    static WorldToScreen fit(double min_x, double max_x, double min_y, double max_y) {
        WorldToScreen m;
        double dx = std::max(max_x - min_x, 1e-9), dy = std::max(max_y - min_y, 1e-9);
        m.scale = std::min((kWidth - 2 * kPad) / dx, (kHeight - 2 * kPad) / dy);
        m.x0 = 0.5 * (min_x + max_x);
        m.y0 = 0.5 * (min_y + max_y);
        m.cx = kWidth / 2;
        m.cy = kHeight / 2;
        return m;
    }
    double sx(double x) const { return cx + scale * (x - x0); }
    double sy(double y) const { return cy - scale * (y - y0); }  // SVG y grows downward
};

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(2);
    s << std::fixed << v;
    return s.str();
}

// The polygonal outline of a reduced hull, traced by sweeping the extreme
// point over 360 directions; consecutive duplicates are dropped.
std::vector<Vec> hull_outline(const ReducedHull& h) {
    std::vector<Vec> outline;
    for (int j = 0; j < 360; ++j) {
        double theta = 2.0 * M_PI * static_cast<double>(j) / 360.0;
        Vec w(2);
        w << std::cos(theta), std::sin(theta);
        Vec p = hull_extreme(h, w).point;
        if (outline.empty() || (outline.back() - p).lpNorm<Eigen::Infinity>() > 1e-12) {
            outline.push_back(p);
        }
    }
    while (outline.size() > 1 &&
           (outline.front() - outline.back()).lpNorm<Eigen::Infinity>() <= 1e-12) {
        outline.pop_back();
    }
    return outline;
}

// The segment of the line w.x = value clipped to a box around the data, drawn
// long enough to cross the whole viewport.
void emit_line(std::ostream& out, const WorldToScreen& m, const Vec& w, double value,
               double reach, const std::string& style) {
    Vec base = (value / w.squaredNorm()) * w;
    Vec tangent(2);
    tangent << -w[1], w[0];
    tangent.normalize();
    Vec a = base - reach * tangent, b = base + reach * tangent;
    out << "  <line x1=\"" << fmt(m.sx(a[0])) << "\" y1=\"" << fmt(m.sy(a[1])) << "\" x2=\""
        << fmt(m.sx(b[0])) << "\" y2=\"" << fmt(m.sy(b[1])) << "\" " << style << "/>\n";
}

void emit_polygon(std::ostream& out, const WorldToScreen& m, const std::vector<Vec>& pts,
                  const std::string& color) {
    if (pts.size() == 1) {  // hull collapsed to the class centroid
        out << "  <circle cx=\"" << fmt(m.sx(pts[0][0])) << "\" cy=\"" << fmt(m.sy(pts[0][1]))
            << "\" r=\"6\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        return;
    }
    out << "  <polygon points=\"";
    for (const Vec& p : pts) out << fmt(m.sx(p[0])) << ',' << fmt(m.sy(p[1])) << ' ';
    out << "\" fill=\"" << color << "\" fill-opacity=\"0.08\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" stroke-dasharray=\"6,3\"/>\n";
}

}  // namespace

void emit_plot_data(const TrainedClassifier& c, const LabeledDataset& ds,
                    const std::string& path) {
    if (ds.dim() != 2) {
        throw ValidationError("emit_plot_data: plotting requires 2-D data, got d = " +
                              std::to_string(ds.dim()) + ".");
    }
    if (c.degenerate || c.w.size() != 2 || c.w.norm() == 0.0) {
        throw ValidationError(
            "emit_plot_data: the classifier is degenerate (w = 0); nothing to plot.");
    }

    std::vector<Vec> plus_outline, minus_outline;
    if (c.mu < 1.0) {
        plus_outline = hull_outline(ReducedHull(ds.class_points(+1), c.mu));
        minus_outline = hull_outline(ReducedHull(ds.class_points(-1), c.mu));
    }

    double min_x = ds.points().col(0).minCoeff(), max_x = ds.points().col(0).maxCoeff();
    double min_y = ds.points().col(1).minCoeff(), max_y = ds.points().col(1).maxCoeff();
    WorldToScreen m = WorldToScreen::fit(min_x, max_x, min_y, max_y);
    double reach = std::hypot(max_x - min_x, max_y - min_y) + 1.0;

    std::ofstream out(path);
    if (!out) throw ValidationError("emit_plot_data: cannot open '" + path + "' for writing.");

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

    emit_polygon(out, m, plus_outline, "#27639c");
    emit_polygon(out, m, minus_outline, "#ab3232");

    // Decision line and the two slab lines it sits between.
    emit_line(out, m, c.w, c.b, reach, "stroke=\"#222222\" stroke-width=\"2\"");
    emit_line(out, m, c.w, c.b_plus, reach,
              "stroke=\"#27639c\" stroke-width=\"1.5\" stroke-dasharray=\"8,4\"");
    emit_line(out, m, c.w, c.b_minus, reach,
              "stroke=\"#ab3232\" stroke-width=\"1.5\" stroke-dasharray=\"8,4\"");

    std::vector<bool> is_support(static_cast<std::size_t>(ds.size()), false);
    for (Index i : c.support_indices) is_support[static_cast<std::size_t>(i)] = true;
    for (Index i = 0; i < ds.size(); ++i) {
        const char* fill = ds.label(i) > 0 ? "#27639c" : "#ab3232";
        const char* ring = is_support[static_cast<std::size_t>(i)] ? " stroke=\"#111111\" stroke-width=\"1.6\"" : "";
        out << "  <circle cx=\"" << fmt(m.sx(ds.points()(i, 0))) << "\" cy=\""
            << fmt(m.sy(ds.points()(i, 1))) << "\" r=\"4\" fill=\"" << fill << "\"" << ring
            << "/>\n";
    }

    out << "  <text x=\"" << kPad << "\" y=\"" << kPad / 2 + 6
        << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#333333\">mu = " << c.mu
        << ", margin = " << c.margin << ", support vectors: " << c.support_indices.size()
        << " (ringed)</text>\n";
    out << "</svg>\n";
    out.flush();
    if (!out) throw ValidationError("emit_plot_data: failed writing '" + path + "'.");
}

}  // namespace zonosvm
