#include "smisga/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace smisga {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 70, kRight = 150, kTop = 30, kBottom = 50;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
    double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

void open_svg(std::ostream& os, const std::string& title) {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << num(kWidth / 2) << "\" y=\"18\" text-anchor=\"middle\">" << xml_escape(title)
       << "</text>\n";
}

void axes(std::ostream& os, const Frame& f, const std::vector<std::pair<double, std::string>>& xticks,
          const std::vector<std::pair<double, std::string>>& yticks, const std::string& xlabel,
          const std::string& ylabel) {
    const double xa = f.px(f.x0), xb = f.px(f.x1), ya = f.py(f.y0), yb = f.py(f.y1);
    os << "<g stroke=\"black\" fill=\"none\">\n"
       << "<line x1=\"" << num(xa) << "\" y1=\"" << num(ya) << "\" x2=\"" << num(xb) << "\" y2=\"" << num(ya)
       << "\"/>\n"
       << "<line x1=\"" << num(xa) << "\" y1=\"" << num(ya) << "\" x2=\"" << num(xa) << "\" y2=\"" << num(yb)
       << "\"/>\n</g>\n";
    os << "<g fill=\"black\">\n";
    for (const auto& [v, s] : xticks)
        os << "<text x=\"" << num(f.px(v)) << "\" y=\"" << num(ya + 16) << "\" text-anchor=\"middle\">"
           << xml_escape(s) << "</text>\n";
    for (const auto& [v, s] : yticks)
        os << "<text x=\"" << num(xa - 6) << "\" y=\"" << num(f.py(v) + 4) << "\" text-anchor=\"end\">"
           << xml_escape(s) << "</text>\n";
    os << "<text x=\"" << num((xa + xb) / 2) << "\" y=\"" << num(kHeight - 10) << "\" text-anchor=\"middle\">"
       << xml_escape(xlabel) << "</text>\n"
       << "<text x=\"16\" y=\"" << num((ya + yb) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << num((ya + yb) / 2) << ")\">" << xml_escape(ylabel) << "</text>\n</g>\n";
}

void legend(std::ostream& os, const std::vector<std::string>& labels) {
    const double x = kWidth - kRight + 16;
    os << "<g>\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double y = kTop + 12 + 18.0 * static_cast<double>(i);
        os << "<line x1=\"" << num(x) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x + 24) << "\" y2=\"" << num(y)
           << "\" stroke=\"" << kPalette[i % std::size(kPalette)] << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << num(x + 30) << "\" y=\"" << num(y + 4) << "\">" << xml_escape(labels[i])
           << "</text>\n";
    }
    os << "</g>\n";
}

void polyline(std::ostream& os, const std::vector<std::pair<double, double>>& pts, std::size_t color,
              const std::string& label) {
    os << "<polyline data-label=\"" << xml_escape(label) << "\" fill=\"none\" stroke=\""
       << kPalette[color % std::size(kPalette)] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
    os << "\"/>\n";
}

}  // namespace

std::string xml_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

void write_profile_svg(std::ostream& os, Metric metric, const std::vector<ProfileCurve>& curves) {
    double xmax = 1.0;
    for (const auto& c : curves)
        for (const auto& p : c.points) xmax = std::max(xmax, std::log2(p.varsigma));
    // a profile that only has varsigma = 1 still gets a visible axis
    xmax = std::max(xmax * 1.05, 1.0);
    const Frame f{0.0, xmax, 0.0, 1.05};

    open_svg(os, "Performance profile: " + std::string(to_string(metric)));
    std::vector<std::pair<double, std::string>> xt, yt;
    const int step = std::max(1, static_cast<int>(std::ceil(xmax / 8)));
    for (int e = 0; e <= xmax; e += step) xt.emplace_back(e, tick_label(std::ldexp(1.0, e)));
    for (int i = 0; i <= 4; ++i) yt.emplace_back(0.25 * i, tick_label(0.25 * i));
    axes(os, f, xt, yt, "varsigma (log2 scale)", "P(ratio <= varsigma)");

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        double prev = 0.0;
        for (const auto& p : curves[i].points) {
            const double x = f.px(std::log2(p.varsigma));
            if (!pts.empty()) pts.emplace_back(x, f.py(prev));
            pts.emplace_back(x, f.py(p.probability));
            prev = p.probability;
        }
        if (pts.empty()) pts.emplace_back(f.px(0.0), f.py(0.0));
        pts.emplace_back(f.px(xmax), f.py(prev));
        polyline(os, pts, i, curves[i].solver);
        labels.push_back(curves[i].solver);
    }
    legend(os, labels);
    os << "</svg>\n";
}

void write_trace_svg(std::ostream& os, const std::vector<TraceSeries>& series) {
    double fmin = std::numeric_limits<double>::infinity();
    std::size_t kmax = 1;
    for (const auto& s : series) {
        for (double v : s.values) fmin = std::min(fmin, v);
        kmax = std::max(kmax, s.values.size());
    }
    // gaps are floored so the last point of the best series stays on the plot
    auto gap = [&](double v) {
        const double g = v - fmin;
        return std::log10(std::max(g, 1e-16 * std::max(1.0, std::abs(fmin))));
    };
    double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
    for (const auto& s : series)
        for (double v : s.values) {
            ylo = std::min(ylo, gap(v));
            yhi = std::max(yhi, gap(v));
        }
    if (!(ylo < yhi)) {
        ylo = std::isfinite(ylo) ? ylo - 1 : 0;
        yhi = ylo + 2;
    }
    ylo = std::floor(ylo);
    yhi = std::ceil(yhi);
    const Frame f{0.0, static_cast<double>(kmax - 1 ? kmax - 1 : 1), ylo, yhi};

    open_svg(os, "Objective gap");
    std::vector<std::pair<double, std::string>> xt, yt;
    for (int i = 0; i <= 4; ++i) {
        const double k = f.x1 * i / 4.0;
        xt.emplace_back(k, tick_label(std::round(k)));
    }
    const int ystep = std::max(1, static_cast<int>(std::ceil((yhi - ylo) / 8)));
    for (int e = static_cast<int>(ylo); e <= yhi; e += ystep) yt.emplace_back(e, "1e" + std::to_string(e));
    axes(os, f, xt, yt, "iteration k", "F_k - F_min");

    std::vector<std::string> labels;
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::vector<std::pair<double, double>> pts;
        const auto& v = series[i].values;
        // thin long traces to at most ~2000 vertices
        const std::size_t stride = std::max<std::size_t>(1, v.size() / 2000);
        for (std::size_t k = 0; k < v.size(); k += stride) pts.emplace_back(f.px(double(k)), f.py(gap(v[k])));
        if (!v.empty() && (v.size() - 1) % stride) pts.emplace_back(f.px(double(v.size() - 1)), f.py(gap(v.back())));
        polyline(os, pts, i, series[i].label);
        labels.push_back(series[i].label);
    }
    legend(os, labels);
    os << "</svg>\n";
}

}  // namespace smisga
