#pragma once

#include "smisga/bench.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace smisga {

/// Step plot of P_s(varsigma) against log2(varsigma), one polyline per solver.
void write_profile_svg(std::ostream& os, Metric metric, const std::vector<ProfileCurve>& curves);

struct TraceSeries {
    std::string label;
    std::vector<double> values;  // F_k for k = 0, 1, ...
};

/// F_k - F_min against k on a log10 axis, F_min taken over all series.
void write_trace_svg(std::ostream& os, const std::vector<TraceSeries>& series);

std::string xml_escape(std::string_view text);

}  // namespace smisga
