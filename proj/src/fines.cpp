#include "itsmrules/fines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

namespace itsm {

Timestamp parse_timestamp(std::string_view text) {
  int y, mo, d, h, mi, s;
  char tail = 0;
  const std::string str(text);
  if (str.size() != 20 ||
      std::sscanf(str.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &tail) != 7 ||
      tail != 'Z' || str[4] != '-' || str[7] != '-' || str[10] != 'T' || str[13] != ':' ||
      str[16] != ':')
    throw DiagnosticError({error(0, "invalid timestamp '" + str + "', expected YYYY-MM-DDTHH:MM:SSZ")});
  using namespace std::chrono;
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 59 || h < 0 || mi < 0 || s < 0)
    throw DiagnosticError({error(0, "invalid timestamp '" + str + "'")});
  return sys_days{date} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(t);
  const year_month_day date{days};
  const hh_mm_ss tod{t - days};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", int(date.year()),
                unsigned(date.month()), unsigned(date.day()), long(tod.hours().count()),
                long(tod.minutes().count()), long(tod.seconds().count()));
  return buf;
}

namespace {

using Interval = std::pair<std::int64_t, std::int64_t>;

std::int64_t secs(Timestamp t) { return t.time_since_epoch().count(); }

std::vector<Interval> merge(std::vector<Interval> v) {
  std::sort(v.begin(), v.end());
  std::vector<Interval> out;
  for (const auto& iv : v) {
    if (!out.empty() && iv.first <= out.back().second)
      out.back().second = std::max(out.back().second, iv.second);
    else
      out.push_back(iv);
  }
  return out;
}

}  // namespace

std::size_t concurrent_failures(std::vector<OutageEvent> outages) {
  std::sort(outages.begin(), outages.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });
  std::size_t count = 0;
  std::optional<Timestamp> open_until;
  for (const auto& o : outages) {
    if (open_until && o.start < *open_until) ++count;
    open_until = open_until ? std::max(*open_until, o.end) : o.end;
  }
  return count;
}

FineReport compute_fines(const SlaTerms& s, const std::vector<OutageEvent>& outages,
                         Horizon horizon) {
  if (horizon.start >= horizon.end)
    throw DiagnosticError({error(0, "invalid horizon: start must precede end")});

  std::vector<OutageEvent> clipped;
  for (const auto& o : outages) {
    if (o.start >= o.end)
      throw DiagnosticError({error(0, "outage " + format_timestamp(o.start) +
                                          " does not end after it starts")});
    OutageEvent c{std::max(o.start, horizon.start), std::min(o.end, horizon.end)};
    if (c.start < c.end) clipped.push_back(c);
  }

  FineReport r;
  if (!clipped.empty()) r.first_failure_total = s.first_failure_fine;
  r.concurrent_failure_total =
      s.concurrent_failure_fine * static_cast<std::int64_t>(concurrent_failures(clipped));

  std::vector<Interval> raw;
  for (const auto& o : clipped) raw.emplace_back(secs(o.start), secs(o.end));
  const auto down = merge(std::move(raw));

  const std::int64_t h0 = secs(horizon.start), h1 = secs(horizon.end);
  for (const auto& clause : s.availability_clauses) {
    const std::int64_t len = period_seconds(clause.period);
    const std::int64_t complete = (h1 - h0) / len;
    // Only periods touched by downtime can fall below a minimum of at most 100%.
    std::map<std::int64_t, std::int64_t> downtime;
    for (const auto& [a, b] : down) {
      for (std::int64_t k = (a - h0) / len; k < complete && h0 + k * len < b; ++k) {
        const std::int64_t lo = std::max(a, h0 + k * len);
        const std::int64_t hi = std::min(b, h0 + (k + 1) * len);
        if (hi > lo) downtime[k] += hi - lo;
      }
    }
    std::int64_t breached = 0;
    for (const auto& [k, d] : downtime) {
      const double percent = 100.0 * (1.0 - static_cast<double>(d) / static_cast<double>(len));
      if (percent < clause.min_percent) ++breached;
    }
    r.availability_total += clause.fine * breached;
  }
  r.grand_total = r.first_failure_total + r.concurrent_failure_total + r.availability_total;
  return r;
}

std::int64_t periods_in_horizon(Period p, double horizon_years) {
  return static_cast<std::int64_t>(std::floor(horizon_years * periods_per_year(p) + 1e-9));
}

double expected_cost(const SlaTerms& s, const AvailabilityForecast& f, double horizon_years) {
  if (!(horizon_years > 0.0))
    throw DiagnosticError({error(0, "horizon_years must be positive")});
  const double lambda = f.expected_failures_per_year * horizon_years;
  double cost = s.first_failure_fine.to_double() * std::min(1.0, lambda) +
                s.concurrent_failure_fine.to_double() * std::max(0.0, lambda - 1.0);
  for (const auto& clause : s.availability_clauses) {
    auto it = f.expected_availability_percent.find(clause.period);
    if (it == f.expected_availability_percent.end())
      throw DiagnosticError({error(0, "forecast has no " + std::string(to_string(clause.period)) +
                                          " availability entry")});
    if (it->second < clause.min_percent)
      cost += clause.fine.to_double() *
              static_cast<double>(periods_in_horizon(clause.period, horizon_years));
  }
  return cost;
}

std::string optimal_sla(const std::vector<SlaCandidate>& candidates,
                        const AvailabilityForecast& f, double horizon_years) {
  if (candidates.empty()) throw DiagnosticError({error(0, "no SLA candidates")});
  const SlaCandidate* best = nullptr;
  double best_cost = 0.0;
  Money best_total;
  for (const auto& c : candidates) {
    const double cost = expected_cost(c.second, f, horizon_years);
    const Money total = c.second.total_fines();
    if (!best || std::tie(cost, total, c.first) < std::tie(best_cost, best_total, best->first)) {
      best = &c;
      best_cost = cost;
      best_total = total;
    }
  }
  return best->first;
}

}  // namespace itsm
