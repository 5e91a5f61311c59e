#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stc/sweep.hpp"

namespace stc {

struct PlotLabels {
    std::string title;
    std::string x_label;
    std::string y_label = "average min P_k [W-blocks]";
};

/// Standalone SVG with one polyline per method (STC, PK, AA-IS). The y axis
/// is logarithmic when every plotted value is positive.
std::string render_plot(const std::vector<ResultRow>& rows, const PlotLabels& labels);

void emit_plot(const std::vector<ResultRow>& rows, const PlotLabels& labels,
               const std::filesystem::path& path);

}  // namespace stc
