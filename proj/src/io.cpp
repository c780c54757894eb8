#include "vvlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace vvlab {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void ensure_directory(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw std::runtime_error("cannot create directory " + path);
}

namespace {
std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    return f;
}
} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<std::vector<double>>& columns) {
    if (names.size() != columns.size())
        throw std::invalid_argument("write_csv: names/columns mismatch");
    auto f = open_out(path);
    for (size_t c = 0; c < names.size(); ++c)
        f << names[c] << (c + 1 < names.size() ? "," : "\n");
    size_t rows = 0;
    for (const auto& col : columns) rows = std::max(rows, col.size());
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c) {
            if (r < columns[c].size()) f << format_double(columns[c][r]);
            f << (c + 1 < columns.size() ? "," : "\n");
        }
    }
}

void write_snapshot_csv(const std::string& path, const MassGridState& s) {
    std::vector<double> xi(s.n_cells + 1), rho(s.n_cells + 1);
    for (int j = 0; j <= s.n_cells; ++j) {
        xi[j] = j * s.dxi;
        rho[j] = s.cell_rho[std::max(j - 1, 0)];
    }
    write_csv(path, {"xi", "x", "rho", "u"}, {xi, s.node_x, rho, s.node_u});
}

void write_initial_data_csv(const std::string& path, const ApproxInitialData& d) {
    write_csv(path, {"x", "rho", "u"}, {d.x, d.rho, d.u});
}

namespace {

struct Range {
    double lo = 0.0, hi = 1.0;
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

double tfm(double v, bool logscale) {
    if (!logscale) return v;
    return std::log10(std::max(v, 1e-300));
}

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool log_x, bool log_y) {
    const int w = 860, h = 540, ml = 70, mr = 170, mt = 40, mb = 50;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series)
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double xv = tfm(s.x[i], log_x), yv = tfm(s.y[i], log_y);
            if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
            xlo = std::min(xlo, xv), xhi = std::max(xhi, xv);
            ylo = std::min(ylo, yv), yhi = std::max(yhi, yv);
        }
    if (xlo > xhi) { xlo = 0; xhi = 1; }
    if (ylo > yhi) { ylo = 0; yhi = 1; }
    if (xhi - xlo < 1e-12) { xhi += 1; xlo -= 1; }
    if (yhi - ylo < 1e-12) { yhi += 1; ylo -= 1; }

    auto px = [&](double v) { return ml + (tfm(v, log_x) - xlo) / (xhi - xlo) * (w - ml - mr); };
    auto py = [&](double v) { return h - mb - (tfm(v, log_y) - ylo) / (yhi - ylo) * (h - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    auto f = open_out(path);
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << w / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
      << "</text>\n";
    // axes
    f << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='"
      << h - mb << "' stroke='black'/>\n";
    f << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
      << "' stroke='black'/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xlo + (xhi - xlo) * i / 4.0;
        const double yv = ylo + (yhi - ylo) * i / 4.0;
        char bx[40], by[40];
        std::snprintf(bx, sizeof bx, "%.3g", log_x ? std::pow(10.0, xv) : xv);
        std::snprintf(by, sizeof by, "%.3g", log_y ? std::pow(10.0, yv) : yv);
        const double gx = ml + (w - ml - mr) * i / 4.0;
        const double gy = h - mb - (h - mt - mb) * i / 4.0;
        f << "<text x='" << gx << "' y='" << h - mb + 18
          << "' text-anchor='middle' font-size='11'>" << bx << "</text>\n";
        f << "<text x='" << ml - 8 << "' y='" << gy + 4
          << "' text-anchor='end' font-size='11'>" << by << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* col = colors[ci % 8];
        f << "<polyline fill='none' stroke='" << col << "' stroke-width='1.5' points='";
        for (size_t i = 0; i < s.x.size(); ++i) {
            const double xv = px(s.x[i]), yv = py(s.y[i]);
            if (std::isfinite(xv) && std::isfinite(yv)) f << xv << "," << yv << " ";
        }
        f << "'/>\n";
        f << "<text x='" << w - mr + 10 << "' y='" << mt + 16 * ci + 10
          << "' font-size='12' fill='" << col << "'>" << s.label << "</text>\n";
        ++ci;
    }
    f << "</svg>\n";
}

} // namespace vvlab
