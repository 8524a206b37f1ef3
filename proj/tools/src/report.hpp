#pragma once

#include <string>

#include "format.hpp"
#include "periodfn/criteria.hpp"
#include "periodfn/potential.hpp"

namespace periodfn::cli {

struct AnalyzeOptions {
  int order = 2;
  CoefficientPolicy policy = CoefficientPolicy::resolved;
  int grid = kDefaultScanGrid;
  int table_steps = 10;
};

/// Full analysis of a built potential as a deterministic JSON document.
Json analysis_report(const std::string& expression_text, const Potential& pot,
                     const AnalyzeOptions& opts);

/// Plain-text rendering of analysis_report's document.
std::string render_text(const Json& report);

}  // namespace periodfn::cli
