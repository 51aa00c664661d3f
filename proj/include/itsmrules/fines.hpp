#pragma once

// SLA penalty computation over observed outages, and forecast-based
// selection between competing SLAs.

#include <chrono>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "itsmrules/money.hpp"
#include "itsmrules/service_tree.hpp"

namespace itsm {

using Timestamp = std::chrono::sys_seconds;

/// `YYYY-MM-DDTHH:MM:SSZ`. Throws DiagnosticError on anything else.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

struct OutageEvent {
  Timestamp start;
  Timestamp end;
};

struct Horizon {
  Timestamp start;
  Timestamp end;
};

struct FineReport {
  Money first_failure_total;
  Money concurrent_failure_total;
  Money availability_total;
  Money grand_total;

  bool operator==(const FineReport&) const = default;
};

/// Outages are clipped to the horizon. Availability periods are the
/// complete fixed-length periods counted from the horizon start; downtime
/// inside a period is the union of the outages overlapping it.
/// Throws DiagnosticError if the horizon is empty or an outage has start >= end.
FineReport compute_fines(const SlaTerms& s, const std::vector<OutageEvent>& outages,
                         Horizon horizon);

/// Number of outages that start while an earlier-ordered outage is still open.
std::size_t concurrent_failures(std::vector<OutageEvent> outages);

struct AvailabilityForecast {
  double expected_failures_per_year = 0.0;
  std::map<Period, double> expected_availability_percent;
};

/// Complete periods of kind `p` in `horizon_years` (fixed 360-day year).
std::int64_t periods_in_horizon(Period p, double horizon_years);

/// Closed-form expected fine cost over the horizon, in currency units.
/// With lambda = failures/year * years: first fine * min(1, lambda) +
/// concurrent fine * max(0, lambda - 1), plus each clause's fine for every
/// period whose forecast availability is below the clause minimum.
double expected_cost(const SlaTerms& s, const AvailabilityForecast& f, double horizon_years);

using SlaCandidate = std::pair<std::string, SlaTerms>;

/// Argmin of expected_cost; ties go to lower total fines, then lower id.
std::string optimal_sla(const std::vector<SlaCandidate>& candidates,
                        const AvailabilityForecast& f, double horizon_years);

}  // namespace itsm
