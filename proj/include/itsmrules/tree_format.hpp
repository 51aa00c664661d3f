#pragma once

// JSON documents for service trees and availability forecasts.
//
//   { "items": [ {"id", "kind", "label", "sla"?, "mtc"?} ],
//     "edges": [ {"parent", "child"} ] }
//
// Money is a decimal with at most two fraction digits, as a JSON number or string.

#include <optional>
#include <string>
#include <string_view>

#include "itsmrules/diagnostic.hpp"
#include "itsmrules/fines.hpp"
#include "itsmrules/service_tree.hpp"

namespace itsm {

struct TreeLoadResult {
  std::optional<ServiceTree> tree;
  Diagnostics diagnostics;

  bool ok() const { return tree.has_value(); }
};

TreeLoadResult load_tree(std::string_view json_text);

/// Inverse of load_tree; money is written as two-digit decimal strings.
std::string dump_tree(const ServiceTree& t);

struct ForecastDocument {
  AvailabilityForecast forecast;
  double horizon_years = 1.0;
};

/// `{"expected_failures_per_year": x, "expected_availability_percent":
/// {"Day": p, ...}, "horizon_years": y}`. Throws DiagnosticError.
ForecastDocument load_forecast(std::string_view json_text);

}  // namespace itsm
