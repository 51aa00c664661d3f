#pragma once

// ITSM service trees: multi-rooted DAGs of configuration items where SLAs
// and MTCs attached to a node apply to everything below it.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "itsmrules/diagnostic.hpp"
#include "itsmrules/money.hpp"

namespace itsm {

enum class CiKind { RFC, SVC, HOS, SLA, MTC };

std::string_view to_string(CiKind k);
std::optional<CiKind> ci_kind_from_string(std::string_view s);

/// Whether `parent -> child` is a permitted edge.
bool edge_allowed(CiKind parent, CiKind child);

enum class Period { Day, Month, Year };

inline constexpr Period kAllPeriods[] = {Period::Day, Period::Month, Period::Year};

std::string_view to_string(Period p);
std::optional<Period> period_from_string(std::string_view s);
/// Fixed calendar: a day is 24h, a month 30 days, a year 360 days.
std::int64_t period_seconds(Period p);
int periods_per_year(Period p);

struct AvailabilityClause {
  Period period = Period::Day;
  double min_percent = 0.0;
  Money fine;
};

struct SlaTerms {
  int priority = 0;  // higher wins
  Money first_failure_fine;
  Money concurrent_failure_fine;
  std::vector<AvailabilityClause> availability_clauses;

  Money total_fines() const;
};

struct MtcTerms {
  Money liability;
};

struct ConfigItem {
  std::string id;
  CiKind kind = CiKind::SVC;
  std::string label;
  std::optional<SlaTerms> sla;
  std::optional<MtcTerms> mtc;
};

struct Edge {
  std::string parent;
  std::string child;

  auto operator<=>(const Edge&) const = default;
};

/// Structural checks: ids, edge kinds, terms, acyclicity, RFC-only roots.
Diagnostics check_structure(const std::vector<ConfigItem>& items, const std::vector<Edge>& edges);

/// Immutable, structurally valid service tree.
class ServiceTree {
 public:
  ServiceTree() = default;

  /// Throws DiagnosticError with every structural violation.
  static ServiceTree create(std::vector<ConfigItem> items, std::vector<Edge> edges);

  const std::vector<ConfigItem>& items() const { return items_; }
  const std::vector<Edge>& edges() const { return edges_; }

  const ConfigItem* find(std::string_view id) const;
  const ConfigItem& at(std::string_view id) const;  // throws DiagnosticError
  bool has_edge(std::string_view parent, std::string_view child) const;

  /// Sorted ids.
  const std::vector<std::string>& children(std::string_view id) const;
  const std::vector<std::string>& parents(std::string_view id) const;
  std::vector<std::string> roots() const;

  const std::vector<std::string>& sla_children(std::string_view id) const;
  const std::vector<std::string>& mtc_children(std::string_view id) const;

 private:
  struct Node {
    std::vector<std::string> children, parents, slas, mtcs;
  };
  const Node& node(std::string_view id) const;

  std::vector<ConfigItem> items_;
  std::vector<Edge> edges_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::map<std::string, Node, std::less<>> nodes_;
};

/// One placement of an item: the ids on a walk from an RFC root down to it.
struct Occurrence {
  std::vector<std::string> path;

  const std::string& target() const { return path.back(); }
  auto operator<=>(const Occurrence&) const = default;
};

/// All root-to-item walks in lexicographic order of their id sequences.
std::vector<Occurrence> occurrences(const ServiceTree& t, std::string_view item_id);

/// Every occurrence of every SVC and HOS item.
std::vector<Occurrence> service_occurrences(const ServiceTree& t);

struct SlaResolution {
  enum class Status { None, Resolved, PriorityTie };
  Status status = Status::None;
  std::string sla_id;               // Resolved only
  std::vector<std::string> tied;    // PriorityTie only, sorted
};

/// SLA candidates along the path (the target included); highest priority wins.
SlaResolution effective_sla(const ServiceTree& t, const Occurrence& o);

struct MtcAccumulation {
  std::set<std::string> mtcs;
  Money total_liability;
};

/// Union of MTCs attached along the path, each counted once.
MtcAccumulation accumulated_mtc(const ServiceTree& t, const Occurrence& o);

/// Union over every occurrence of the item.
MtcAccumulation item_mtc(const ServiceTree& t, std::string_view item_id);

/// Structural diagnostics plus one PriorityTie error per tied SVC/HOS occurrence.
Diagnostics validate_tree(const ServiceTree& t);

struct RedundantMtc {
  std::string mtc_id;
  std::string reason;
};

/// MTCs whose covered SVC/HOS occurrences are all covered by one other MTC.
std::vector<RedundantMtc> find_redundant_mtcs(const ServiceTree& t);

struct ReplaceSla {
  std::string node_id;
  std::string old_sla_id;
  SlaTerms new_terms;
};

struct GateVerdict {
  bool accepted = false;
  std::string rule;  // "NR1" or "PriorityTie" when rejected
  std::string reason;
};

/// Model-level mirror of the guard trigger: the replacement must lower total
/// fines and must not create a priority tie. Never mutates `t`.
GateVerdict gate_change(const ServiceTree& t, const ReplaceSla& change);

/// The tree that results from applying `change`. The replacement SLA gets a
/// fresh id derived from the old one.
ServiceTree apply_change(const ServiceTree& t, const ReplaceSla& change);

std::string format_path(const Occurrence& o);

}  // namespace itsm
