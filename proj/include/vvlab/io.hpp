#pragma once

#include <string>
#include <vector>

#include "vvlab/diagnostics.hpp"
#include "vvlab/initial_data.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

std::string format_double(double v);  // shortest round-trip-safe decimal

void ensure_directory(const std::string& path);

// Generic column-oriented CSV with a header row.
void write_csv(const std::string& path, const std::vector<std::string>& names,
               const std::vector<std::vector<double>>& columns);

// Snapshot rows: xi, x, rho, u (rho of the cell left of each node; the first
// row repeats the first cell).
void write_snapshot_csv(const std::string& path, const MassGridState& s);

void write_initial_data_csv(const std::string& path, const ApproxInitialData& d);

struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};

// Small batch plot: polylines with axes and a legend.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series, bool log_x = false,
                    bool log_y = false);

} // namespace vvlab
