#include "stc/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace stc {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 420;
constexpr double kLeft = 80;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 60;

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Series {
    const char* name;
    const char* color;
    double ResultRow::*field;
};

constexpr Series kSeries[] = {
    {"STC", "#1f77b4", &ResultRow::stc_minp},
    {"PK", "#2ca02c", &ResultRow::pk_minp},
    {"AA-IS", "#d62728", &ResultRow::aais_minp},
};

}  // namespace

std::string render_plot(const std::vector<ResultRow>& rows, const PlotLabels& labels)
{
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    bool all_positive = true;
    for (const auto& r : rows) {
        xmin = std::min(xmin, r.swept);
        xmax = std::max(xmax, r.swept);
        for (const auto& s : kSeries) {
            const double y = r.*s.field;
            if (!std::isfinite(y)) continue;
            if (y <= 0) all_positive = false;
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (rows.empty() || !std::isfinite(ymin)) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
        all_positive = false;
    }
    auto ty = [&](double y) { return all_positive ? std::log10(y) : y; };
    double y0 = ty(ymin);
    double y1 = ty(ymax);
    if (y1 - y0 <= 0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    if (xmax - xmin <= 0) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - (ty(y) - y0) / (y1 - y0)) * ph; };

    std::ostringstream svg;
    svg.precision(6);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(labels.title) << "</text>\n"
        << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = y0 + (y1 - y0) * i / 4.0;
        const double yv = all_positive ? std::pow(10.0, fy) : fy;
        svg << "<text x=\"" << px(fx) << "\" y=\"" << kTop + ph + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fx << "</text>\n"
            << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(yv) + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << yv << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16
        << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(labels.x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << kTop + ph / 2 << ")\">" << escape(labels.y_label)
        << "</text>\n";

    int legend = 0;
    for (const auto& s : kSeries) {
        svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" "
            << "data-method=\"" << s.name << "\" points=\"";
        bool first = true;
        for (const auto& r : rows) {
            const double y = r.*s.field;
            if (!std::isfinite(y) || (all_positive && y <= 0)) continue;
            if (!first) svg << ' ';
            svg << px(r.swept) << ',' << py(y);
            first = false;
        }
        svg << "\"/>\n";
        const double ly = kTop + 16 + 20 * legend++;
        svg << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\""
            << kLeft + pw + 40 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kLeft + pw + 46 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">"
            << s.name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_plot(const std::vector<ResultRow>& rows, const PlotLabels& labels,
               const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << render_plot(rows, labels);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace stc
