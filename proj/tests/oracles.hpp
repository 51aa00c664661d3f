#pragma once

// Test-only generators and brute-force oracles. Nothing here calls into the
// resolution code it is used to check.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "itsmrules/fines.hpp"
#include "itsmrules/service_tree.hpp"
#include "itsmrules/vocabulary.hpp"

namespace itsm::testing {

inline std::string data_path(const std::string& name) {
  return std::string(ITSMRULES_TEST_DATA) + "/" + name;
}

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SlaTerms make_sla(int priority, double first, double concurrent,
                         std::vector<AvailabilityClause> clauses = {}) {
  SlaTerms s;
  s.priority = priority;
  s.first_failure_fine = *Money::from_double(first);
  s.concurrent_failure_fine = *Money::from_double(concurrent);
  s.availability_clauses = std::move(clauses);
  return s;
}

inline ConfigItem make_item(const std::string& id, CiKind kind) {
  ConfigItem item{id, kind, id, {}, {}};
  if (kind == CiKind::SLA) item.sla = make_sla(1, 0, 0);
  if (kind == CiKind::MTC) item.mtc = MtcTerms{Money::from_cents(0)};
  return item;
}

struct TreeSpec {
  int max_items = 30;
  int max_parents = 3;
  int priority_range = 4;  // small ranges make ties common
};

/// Random valid tree built in topological order; items and edges are shuffled.
inline ServiceTree random_tree(std::mt19937& rng, TreeSpec spec = {}) {
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int total = uniform(1, spec.max_items);
  const int rfcs = std::min(total, uniform(1, 3));

  std::vector<ConfigItem> items;
  std::vector<Edge> edges;
  for (int i = 0; i < rfcs; ++i) items.push_back(make_item("RFC" + std::to_string(i), CiKind::RFC));

  for (int i = rfcs; i < total; ++i) {
    static constexpr CiKind kinds[] = {CiKind::SVC, CiKind::SVC, CiKind::HOS, CiKind::HOS,
                                       CiKind::SLA, CiKind::MTC};
    const CiKind kind = kinds[uniform(0, 5)];
    ConfigItem item = make_item(std::string(to_string(kind)) + std::to_string(i), kind);
    if (kind == CiKind::SLA) {
      item.sla = make_sla(uniform(1, spec.priority_range), uniform(0, 500), uniform(0, 100));
    }
    if (kind == CiKind::MTC) item.mtc = MtcTerms{Money::from_cents(uniform(0, 100000))};

    std::vector<std::string> eligible;
    for (const auto& p : items)
      if (edge_allowed(p.kind, kind)) eligible.push_back(p.id);
    std::shuffle(eligible.begin(), eligible.end(), rng);
    const int parents = std::min<int>(static_cast<int>(eligible.size()), uniform(1, spec.max_parents));
    for (int p = 0; p < parents; ++p) edges.push_back({eligible[p], item.id});
    items.push_back(std::move(item));
  }
  std::shuffle(items.begin(), items.end(), rng);
  std::shuffle(edges.begin(), edges.end(), rng);
  return ServiceTree::create(std::move(items), std::move(edges));
}

/// Every root path, found by walking forward from RFC roots and scanning the
/// raw edge list at every step.
inline std::map<std::string, std::vector<std::vector<std::string>>> brute_force_paths(
    const ServiceTree& t) {
  std::map<std::string, CiKind> kind;
  for (const auto& item : t.items()) kind[item.id] = item.kind;
  std::map<std::string, std::vector<std::vector<std::string>>> out;
  std::vector<std::vector<std::string>> stack;
  for (const auto& item : t.items())
    if (item.kind == CiKind::RFC) stack.push_back({item.id});
  while (!stack.empty()) {
    auto path = stack.back();
    stack.pop_back();
    out[path.back()].push_back(path);
    for (const auto& e : t.edges()) {
      if (e.parent != path.back()) continue;
      auto next = path;
      next.push_back(e.child);
      stack.push_back(std::move(next));
    }
  }
  for (auto& [id, paths] : out) std::sort(paths.begin(), paths.end());
  return out;
}

struct BruteSla {
  bool tie = false;
  std::string winner;  // empty: none
};

inline BruteSla brute_force_sla(const ServiceTree& t, const std::vector<std::string>& path) {
  std::set<std::string> candidates;
  for (const auto& e : t.edges()) {
    if (std::find(path.begin(), path.end(), e.parent) == path.end()) continue;
    for (const auto& item : t.items())
      if (item.id == e.child && item.kind == CiKind::SLA) candidates.insert(item.id);
  }
  BruteSla r;
  int best = 0;
  int count = 0;
  for (const auto& c : candidates) {
    int prio = 0;
    for (const auto& item : t.items())
      if (item.id == c) prio = item.sla->priority;
    if (count == 0 || prio > best) {
      best = prio;
      count = 1;
      r.winner = c;
    } else if (prio == best) {
      ++count;
    }
  }
  r.tie = count > 1;
  if (r.tie) r.winner.clear();
  return r;
}

inline std::pair<std::set<std::string>, std::int64_t> brute_force_mtc(
    const ServiceTree& t, const std::vector<std::string>& path) {
  std::set<std::string> mtcs;
  for (const auto& e : t.edges()) {
    if (std::find(path.begin(), path.end(), e.parent) == path.end()) continue;
    for (const auto& item : t.items())
      if (item.id == e.child && item.kind == CiKind::MTC) mtcs.insert(item.id);
  }
  std::int64_t cents = 0;
  for (const auto& m : mtcs)
    for (const auto& item : t.items())
      if (item.id == m) cents += item.mtc->liability.cents();
  return {mtcs, cents};
}

/// Random well-formed vocabulary with at most 10 terms and 10 rules.
inline Vocabulary random_vocabulary(std::mt19937& rng) {
  static const std::vector<std::string> entity_pool = {
      "SLA", "SVC", "HOS", "MTC", "RFC", "service level", "Host", "Incident", "asset tag"};
  static const std::vector<std::string> attribute_pool = {
      "total fines", "priority", "uptime ratio", "liability", "response time", "cost"};
  static const std::vector<std::string> literals = {"0", "-5", "100", "12.5", "99.95"};
  auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  auto entities = entity_pool;
  auto attributes = attribute_pool;
  std::shuffle(entities.begin(), entities.end(), rng);
  std::shuffle(attributes.begin(), attributes.end(), rng);
  const int n_entities = uniform(1, 5);
  const int n_attributes = uniform(0, std::min<int>(5, 10 - n_entities));
  entities.resize(n_entities);
  attributes.resize(n_attributes);

  Vocabulary v;
  std::vector<std::string> names = entities;
  names.insert(names.end(), attributes.begin(), attributes.end());
  std::shuffle(names.begin(), names.end(), rng);
  for (const auto& n : names) v.terms.push_back({n, v.terms.size(), 0});

  std::vector<FactType> facts;
  for (const auto& a : attributes) {
    auto owners = entities;
    std::shuffle(owners.begin(), owners.end(), rng);
    const int count = uniform(1, std::min<int>(2, static_cast<int>(owners.size())));
    for (int i = 0; i < count; ++i) facts.push_back({FactKind::Attribute, owners[i], a, 0, 0});
  }
  for (int i = 0; i < n_entities; ++i)
    for (int j = 0; j < n_entities; ++j)
      if (i != j && uniform(0, 3) == 0) facts.push_back({FactKind::Link, entities[i], entities[j], 0, 0});
  std::shuffle(facts.begin(), facts.end(), rng);
  for (auto& f : facts) {
    f.declaration_index = v.fact_types.size();
    v.fact_types.push_back(f);
  }

  std::vector<const FactType*> attribute_facts;
  for (const auto& f : v.fact_types)
    if (f.kind == FactKind::Attribute) attribute_facts.push_back(&f);
  if (attribute_facts.empty()) return v;

  const int n_rules = uniform(0, 10);
  for (int i = 0; i < n_rules; ++i) {
    const auto* af = attribute_facts[uniform(0, static_cast<int>(attribute_facts.size()) - 1)];
    NormativeRule r;
    r.name = "NR" + std::to_string(i + 1);
    r.attribute = af->object;
    r.scope = TermScope{af->subject};
    std::vector<std::string> partners;
    for (const auto& f : v.fact_types)
      if (f.kind == FactKind::Link && f.subject == af->subject) partners.push_back(f.object);
    if (!partners.empty() && uniform(0, 1))
      r.scope = LinkScope{af->subject, partners[uniform(0, static_cast<int>(partners.size()) - 1)]};
    r.comparison = kAllComparisons[uniform(0, 4)];
    if (uniform(0, 1))
      r.rhs = OldAttribute{};
    else
      r.rhs = NumericLiteral{literals[uniform(0, static_cast<int>(literals.size()) - 1)]};
    v.rules.push_back(std::move(r));
  }
  return v;
}

/// Counts outages that start while another is open, by sweeping the sorted
/// endpoint events (ends before starts at equal times).
template <typename Outage>
std::size_t sweep_concurrent(const std::vector<Outage>& outages) {
  std::vector<std::pair<std::int64_t, int>> events;  // (time, 0=end / 1=start)
  for (const auto& o : outages) {
    events.emplace_back(o.start.time_since_epoch().count(), 1);
    events.emplace_back(o.end.time_since_epoch().count(), 0);
  }
  std::sort(events.begin(), events.end());
  std::size_t open = 0, concurrent = 0;
  for (const auto& [time, kind] : events) {
    if (kind == 1) {
      if (open > 0) ++concurrent;
      ++open;
    } else {
      --open;
    }
  }
  return concurrent;
}

/// Sample mean of the fine cost when the failure count is drawn by randomised
/// rounding of lambda (floor plus a Bernoulli on the fraction), so its
/// expectation of min(1, N) and max(0, N - 1) is exact. Availability breaches
/// are deterministic given the forecast and are recounted period by period.
inline double monte_carlo_cost(const SlaTerms& s, const AvailabilityForecast& f, double years,
                               int samples, std::mt19937_64& rng) {
  const double lambda = f.expected_failures_per_year * years;
  const double base = std::floor(lambda);
  std::bernoulli_distribution extra(lambda - base);
  double fines = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double n = base + (extra(rng) ? 1.0 : 0.0);
    fines += s.first_failure_fine.to_double() * (n >= 1 ? 1.0 : 0.0) +
             s.concurrent_failure_fine.to_double() * std::max(0.0, n - 1);
  }
  double availability = 0.0;
  for (const auto& c : s.availability_clauses) {
    const auto it = f.expected_availability_percent.find(c.period);
    if (it == f.expected_availability_percent.end() || !(it->second < c.min_percent)) continue;
    const double per_period = static_cast<double>(period_seconds(c.period));
    const double horizon = years * 360.0 * 86400.0;
    for (double t = per_period; t <= horizon + 1e-6; t += per_period) availability += c.fine.to_double();
  }
  return fines / samples + availability;
}

/// Random outages inside [start, start + span_seconds), minute resolution.
inline std::vector<OutageEvent> random_outages(std::mt19937& rng, Timestamp start,
                                               std::int64_t span_seconds, int max_count) {
  std::vector<OutageEvent> out;
  const int n = std::uniform_int_distribution<int>(0, max_count)(rng);
  const std::int64_t minutes = span_seconds / 60;
  for (int i = 0; i < n; ++i) {
    const auto a = std::uniform_int_distribution<std::int64_t>(0, minutes - 2)(rng);
    const auto len = std::uniform_int_distribution<std::int64_t>(1, std::min<std::int64_t>(600, minutes - 1 - a))(rng);
    out.push_back({start + std::chrono::minutes(a), start + std::chrono::minutes(a + len)});
  }
  return out;
}

}  // namespace itsm::testing
