#include "invevo/verify.hpp"

#include "invevo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace invevo {

namespace {

constexpr double kWidth = 480.0;
constexpr double kHeight = 320.0;
constexpr double kMargin = 48.0;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\">" << title << "</text>\n"
        << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin / 2
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin / 2 << "\" x2=\"" << kMargin << "\" y2=\""
        << kHeight - kMargin << "\" stroke=\"black\"/>\n";
}

} // namespace

std::string error_histogram_svg(const AccuracyReport& report, int bins) {
    if (bins < 1) throw ArgumentError("histogram needs at least one bin");
    std::vector<double> logs;
    for (double e : report.per_pair_errors) {
        if (e > 0.0 && std::isfinite(e)) logs.push_back(std::log10(e));
    }
    std::ostringstream out;
    open_svg(out, "pair relative L2 error (" + std::to_string(report.per_pair_errors.size()) + " pairs)");
    if (!logs.empty()) {
        const auto [lo_it, hi_it] = std::minmax_element(logs.begin(), logs.end());
        const double lo = *lo_it;
        const double hi = std::max(*hi_it, lo + 1e-6);
        std::vector<int> counts(bins, 0);
        for (double v : logs) {
            const int b = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
            ++counts[b];
        }
        const int peak = *std::max_element(counts.begin(), counts.end());
        const double plot_w = kWidth - 1.5 * kMargin;
        const double plot_h = kHeight - 1.5 * kMargin;
        const double bar_w = plot_w / bins;
        for (int b = 0; b < bins; ++b) {
            const double h = plot_h * counts[b] / peak;
            out << "<rect x=\"" << kMargin + b * bar_w << "\" y=\"" << kHeight - kMargin - h << "\" width=\""
                << bar_w * 0.9 << "\" height=\"" << h << "\" fill=\"steelblue\"/>\n";
        }
        out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\">1e" << fmt(lo) << "</text>\n"
            << "<text x=\"" << kWidth - kMargin / 2 << "\" y=\"" << kHeight - kMargin + 16
            << "\" text-anchor=\"end\">1e" << fmt(hi) << "</text>\n"
            << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin / 2 + 10 << "\" text-anchor=\"end\">" << peak
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string error_vs_dt_svg(const ConvergenceResult& result) {
    std::ostringstream out;
    open_svg(out, "error vs dt (slope " + fmt(result.slope) + ")");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < result.dts.size() && i < result.errors.size(); ++i) {
        if (result.dts[i] > 0.0 && result.errors[i] > 0.0) {
            pts.emplace_back(std::log10(result.dts[i]), std::log10(result.errors[i]));
        }
    }
    if (pts.size() >= 2) {
        std::sort(pts.begin(), pts.end());
        double ylo = pts.front().second, yhi = ylo;
        for (const auto& p : pts) {
            ylo = std::min(ylo, p.second);
            yhi = std::max(yhi, p.second);
        }
        const double xlo = pts.front().first;
        const double xhi = std::max(pts.back().first, xlo + 1e-6);
        yhi = std::max(yhi, ylo + 1e-6);
        auto px = [&](double x) { return kMargin + (x - xlo) / (xhi - xlo) * (kWidth - 1.5 * kMargin); };
        auto py = [&](double y) { return kHeight - kMargin - (y - ylo) / (yhi - ylo) * (kHeight - 1.5 * kMargin); };
        out << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\" points=\"";
        for (const auto& p : pts) out << px(p.first) << ',' << py(p.second) << ' ';
        out << "\"/>\n";
        for (const auto& p : pts) {
            out << "<circle cx=\"" << px(p.first) << "\" cy=\"" << py(p.second) << "\" r=\"3\" fill=\"firebrick\"/>\n";
        }
        out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16 << "\">dt " << fmt(std::pow(10, xlo))
            << "</text>\n"
            << "<text x=\"" << kWidth - kMargin / 2 << "\" y=\"" << kHeight - kMargin + 16
            << "\" text-anchor=\"end\">dt " << fmt(std::pow(10, xhi)) << "</text>\n"
            << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">"
            << fmt(std::pow(10, ylo)) << "</text>\n"
            << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin / 2 + 10 << "\" text-anchor=\"end\">"
            << fmt(std::pow(10, yhi)) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace invevo
