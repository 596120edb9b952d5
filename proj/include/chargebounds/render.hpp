#pragma once

#include <string>

#include "chargebounds/bounds.hpp"

namespace chargebounds {

enum class ReportFormat { Text, Json, Csv };

struct RenderOptions {
    ReportFormat format = ReportFormat::Text;
    bool approx = false;        // adds non-authoritative decimal columns
    bool certificates = false;  // LP primal/dual vectors and verification
    bool witnesses = false;     // path multisets as (tuple, multiplicity) pairs
};

std::string render_report(const BoundsReport& report, const RenderOptions& options);

} // namespace chargebounds
