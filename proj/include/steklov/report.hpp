#pragma once
// Artifact emission: deterministic CSV spectra, minimal hand-emitted SVG
// plots, and atomic file writes (temp file + rename) so partially written
// outputs are never observed.

#include <algorithm>
#include <cerrno>
#include <cstddef>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "steklov/errors.hpp"
#include "steklov/solver.hpp"

namespace steklov {

// 17 significant digits: round-trip exact for IEEE doubles, fixed format.
inline std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::FILE* f = std::fopen(tmp.string().c_str(), "wb");
        if (!f)
            throw error(errc::io_error, "cannot open '" + tmp.string() +
                                            "' for writing: " + std::strerror(errno));
        const std::size_t n = std::fwrite(content.data(), 1, content.size(), f);
        const bool flushed = (std::fclose(f) == 0);
        if (n != content.size() || !flushed) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw error(errc::io_error, "short write to '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw error(errc::io_error,
                    "cannot rename '" + tmp.string() + "' to '" + target.string() +
                        "': " + ec.message());
    }
}

// Column format: k,sigma,trusted — one row per eigenvalue, ascending.
inline std::string csv_spectrum(const spectral_result& sr) {
    std::string out = "k,sigma,trusted\n";
    for (std::size_t k = 0; k < sr.sigmas.size(); ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_sig17(sr.sigmas[k]);
        out += ',';
        out += (sr.trusted_count >= 0 && k < std::size_t(sr.trusted_count))
                   ? "true"
                   : "false";
        out += '\n';
    }
    return out;
}

// Column format: k,sigma,side,trusted. Positive branch first (ascending),
// then negative (by magnitude ascending); k indexes within each branch.
inline std::string csv_signed_spectrum(const signed_spectral_result& sr) {
    std::string out = "k,sigma,side,trusted\n";
    auto emit = [&](const std::vector<double>& sig, const char* side, int trusted) {
        for (std::size_t k = 0; k < sig.size(); ++k) {
            out += std::to_string(k);
            out += ',';
            out += format_sig17(sig[k]);
            out += ',';
            out += side;
            out += ',';
            out += (trusted >= 0 && k < std::size_t(trusted)) ? "true" : "false";
            out += '\n';
        }
    };
    emit(sr.sigmas_pos, "pos", sr.trusted_pos);
    emit(sr.sigmas_neg, "neg", sr.trusted_neg);
    return out;
}

struct svg_series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

// Minimal polyline plot: light axes, one polyline per series, legend swatches.
inline std::string svg_plot(const std::vector<svg_series>& series,
                            const std::string& x_label,
                            const std::string& y_label) {
    const double W = 640, H = 480, ml = 60, mr = 20, mt = 20, mb = 45;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
    };
    auto py = [&](double y) {
        return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
    };
    auto num = [&](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v);
        return std::string(buf);
    };
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
           "viewBox=\"0 0 640 480\">\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(H - mb) + "\" x2=\"" +
           num(W - mr) + "\" y2=\"" + num(H - mb) +
           "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(H - mb) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 4; ++i) {  // axis tick labels
        const double x = xmin + (xmax - xmin) * i / 4;
        const double y = ymin + (ymax - ymin) * i / 4;
        svg += "<text x=\"" + num(px(x)) + "\" y=\"" + num(H - mb + 16) +
               "\" font-size=\"11\" text-anchor=\"middle\">" + num(x) + "</text>\n";
        svg += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(y) + 4) +
               "\" font-size=\"11\" text-anchor=\"end\">" + num(y) + "</text>\n";
    }
    svg += "<text x=\"" + num((ml + W - mr) / 2) + "\" y=\"" + num(H - 8) +
           "\" font-size=\"13\" text-anchor=\"middle\">" + x_label + "</text>\n";
    svg += "<text x=\"14\" y=\"" + num((mt + H - mb) / 2) +
           "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           num((mt + H - mb) / 2) + ")\">" + y_label + "</text>\n";
    double ly = mt + 14;
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        std::string pts;
        for (auto [x, y] : s.points) {
            pts += num(px(x));
            pts += ',';
            pts += num(py(y));
            pts += ' ';
        }
        svg += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<line x1=\"" + num(ml + 10) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(ml + 34) + "\" y2=\"" + num(ly) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(ml + 40) + "\" y=\"" + num(ly + 4) +
               "\" font-size=\"12\">" + s.label + "</text>\n";
        ly += 18;
    }
    svg += "</svg>\n";
    return svg;
}

// Counting-function staircase (sigma_k, k+1) clipped to [0, hi], plus the
// straight target line through the origin.
inline std::vector<svg_series> counting_plot_series(
    const std::vector<double>& sigmas, double target, double hi,
    const std::string& label, const std::string& color) {
    svg_series stair{label, color, {}};
    stair.points.emplace_back(0.0, 0.0);
    for (std::size_t k = 0; k < sigmas.size() && sigmas[k] <= hi; ++k) {
        stair.points.emplace_back(sigmas[k], double(k));
        stair.points.emplace_back(sigmas[k], double(k + 1));
    }
    svg_series line{"target slope " + format_sig17(target), "#888888", {}};
    line.points.emplace_back(0.0, 0.0);
    line.points.emplace_back(hi, target * hi);
    return {stair, line};
}

}  // namespace steklov
