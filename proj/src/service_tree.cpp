#include "itsmrules/service_tree.hpp"

#include <algorithm>
#include <deque>

namespace itsm {

std::string_view to_string(CiKind k) {
  switch (k) {
    case CiKind::RFC: return "RFC";
    case CiKind::SVC: return "SVC";
    case CiKind::HOS: return "HOS";
    case CiKind::SLA: return "SLA";
    case CiKind::MTC: return "MTC";
  }
  return "";
}

std::optional<CiKind> ci_kind_from_string(std::string_view s) {
  for (auto k : {CiKind::RFC, CiKind::SVC, CiKind::HOS, CiKind::SLA, CiKind::MTC})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

bool edge_allowed(CiKind parent, CiKind child) {
  switch (parent) {
    case CiKind::RFC:
    case CiKind::SVC: return child != CiKind::RFC;
    case CiKind::HOS: return child == CiKind::SVC || child == CiKind::SLA || child == CiKind::MTC;
    case CiKind::SLA:
    case CiKind::MTC: return false;
  }
  return false;
}

std::string_view to_string(Period p) {
  switch (p) {
    case Period::Day: return "Day";
    case Period::Month: return "Month";
    case Period::Year: return "Year";
  }
  return "";
}

std::optional<Period> period_from_string(std::string_view s) {
  for (auto p : kAllPeriods)
    if (to_string(p) == s) return p;
  return std::nullopt;
}

std::int64_t period_seconds(Period p) {
  constexpr std::int64_t day = 24 * 60 * 60;
  switch (p) {
    case Period::Day: return day;
    case Period::Month: return 30 * day;
    case Period::Year: return 360 * day;
  }
  return day;
}

int periods_per_year(Period p) {
  switch (p) {
    case Period::Day: return 360;
    case Period::Month: return 12;
    case Period::Year: return 1;
  }
  return 1;
}

Money SlaTerms::total_fines() const {
  Money total = first_failure_fine + concurrent_failure_fine;
  for (const auto& c : availability_clauses) total += c.fine;
  return total;
}

namespace {

void check_terms(const ConfigItem& item, Diagnostics& diags) {
  const bool is_sla = item.kind == CiKind::SLA;
  const bool is_mtc = item.kind == CiKind::MTC;
  if (is_sla != item.sla.has_value())
    diags.push_back(error(0, is_sla ? "SLA " + item.id + " is missing its sla terms"
                                    : item.id + " carries sla terms but is not an SLA"));
  if (is_mtc != item.mtc.has_value())
    diags.push_back(error(0, is_mtc ? "MTC " + item.id + " is missing its mtc terms"
                                    : item.id + " carries mtc terms but is not an MTC"));
  if (item.sla) {
    const auto& s = *item.sla;
    if (s.first_failure_fine < Money{} || s.concurrent_failure_fine < Money{})
      diags.push_back(error(0, "SLA " + item.id + " has a negative fine"));
    std::set<Period> periods;
    for (const auto& c : s.availability_clauses) {
      if (!periods.insert(c.period).second)
        diags.push_back(error(0, "SLA " + item.id + " has more than one " +
                                     std::string(to_string(c.period)) + " clause"));
      if (!(c.min_percent >= 0.0 && c.min_percent <= 100.0))
        diags.push_back(error(0, "SLA " + item.id + " has min_percent outside 0..100"));
      if (c.fine < Money{}) diags.push_back(error(0, "SLA " + item.id + " has a negative fine"));
    }
  }
  if (item.mtc && item.mtc->liability < Money{})
    diags.push_back(error(0, "MTC " + item.id + " has a negative liability"));
}

}  // namespace

Diagnostics check_structure(const std::vector<ConfigItem>& items, const std::vector<Edge>& edges) {
  Diagnostics diags;
  std::map<std::string, const ConfigItem*> by_id;
  for (const auto& item : items) {
    if (item.id.empty() || item.id.find_first_of("#\"\n") != std::string::npos)
      diags.push_back(error(0, "invalid item id '" + item.id + "'"));
    if (!by_id.emplace(item.id, &item).second)
      diags.push_back(error(0, "duplicate id " + item.id));
    check_terms(item, diags);
  }

  std::set<Edge> seen;
  std::map<std::string, std::vector<std::string>> children;
  std::map<std::string, int> in_degree;
  for (const auto& e : edges) {
    auto p = by_id.find(e.parent);
    auto c = by_id.find(e.child);
    if (p == by_id.end() || c == by_id.end()) {
      diags.push_back(error(0, "edge " + e.parent + " -> " + e.child + " refers to unknown item " +
                                   (p == by_id.end() ? e.parent : e.child)));
      continue;
    }
    if (!seen.insert(e).second) {
      diags.push_back(error(0, "duplicate edge " + e.parent + " -> " + e.child));
      continue;
    }
    const CiKind pk = p->second->kind, ck = c->second->kind;
    if (pk == CiKind::SLA || pk == CiKind::MTC) {
      diags.push_back(error(0, std::string(to_string(pk)) + " may not have children (" + e.parent +
                                   " -> " + e.child + ")"));
    } else if (!edge_allowed(pk, ck)) {
      diags.push_back(error(0, "illegal edge " + e.parent + " -> " + e.child + " (" +
                                   std::string(to_string(pk)) + " -> " +
                                   std::string(to_string(ck)) + ")"));
    }
    children[e.parent].push_back(e.child);
    ++in_degree[e.child];
  }

  for (const auto& item : items) {
    const bool has_parent = in_degree.count(item.id) > 0;
    if (item.kind == CiKind::RFC && has_parent)
      diags.push_back(error(0, "RFC " + item.id + " may not have a parent"));
    if (item.kind != CiKind::RFC && !has_parent)
      diags.push_back(error(0, std::string(to_string(item.kind)) + " " + item.id +
                                   " has no parent; only RFC items may be roots"));
  }

  // Kahn's algorithm; whatever cannot be ordered lies on or below a cycle.
  std::deque<std::string> ready;
  for (const auto& [id, item] : by_id)
    if (!in_degree.count(id)) ready.push_back(id);
  std::size_t ordered = 0;
  while (!ready.empty()) {
    auto id = ready.front();
    ready.pop_front();
    ++ordered;
    for (const auto& c : children[id])
      if (--in_degree[c] == 0) ready.push_back(c);
  }
  if (ordered < by_id.size()) {
    std::string members;
    for (const auto& [id, degree] : in_degree) {
      if (degree > 0) members += (members.empty() ? "" : ", ") + id;
    }
    diags.push_back(error(0, "cycle detected involving " + members));
  }
  return diags;
}

ServiceTree ServiceTree::create(std::vector<ConfigItem> items, std::vector<Edge> edges) {
  auto diags = check_structure(items, edges);
  if (has_errors(diags)) throw DiagnosticError(std::move(diags));

  ServiceTree t;
  t.items_ = std::move(items);
  t.edges_ = std::move(edges);
  for (std::size_t i = 0; i < t.items_.size(); ++i) {
    t.index_.emplace(t.items_[i].id, i);
    t.nodes_[t.items_[i].id];
  }
  for (const auto& e : t.edges_) {
    auto& parent = t.nodes_[e.parent];
    parent.children.push_back(e.child);
    t.nodes_[e.child].parents.push_back(e.parent);
    const CiKind kind = t.at(e.child).kind;
    if (kind == CiKind::SLA) parent.slas.push_back(e.child);
    if (kind == CiKind::MTC) parent.mtcs.push_back(e.child);
  }
  for (auto& [id, n] : t.nodes_)
    for (auto* v : {&n.children, &n.parents, &n.slas, &n.mtcs}) std::sort(v->begin(), v->end());
  return t;
}

const ConfigItem* ServiceTree::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &items_[it->second];
}

const ConfigItem& ServiceTree::at(std::string_view id) const {
  if (const auto* item = find(id)) return *item;
  throw DiagnosticError({error(0, "unknown item '" + std::string(id) + "'")});
}

const ServiceTree::Node& ServiceTree::node(std::string_view id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end())
    throw DiagnosticError({error(0, "unknown item '" + std::string(id) + "'")});
  return it->second;
}

bool ServiceTree::has_edge(std::string_view parent, std::string_view child) const {
  auto it = nodes_.find(parent);
  if (it == nodes_.end()) return false;
  return std::binary_search(it->second.children.begin(), it->second.children.end(), child);
}

const std::vector<std::string>& ServiceTree::children(std::string_view id) const {
  return node(id).children;
}
const std::vector<std::string>& ServiceTree::parents(std::string_view id) const {
  return node(id).parents;
}
const std::vector<std::string>& ServiceTree::sla_children(std::string_view id) const {
  return node(id).slas;
}
const std::vector<std::string>& ServiceTree::mtc_children(std::string_view id) const {
  return node(id).mtcs;
}

std::vector<std::string> ServiceTree::roots() const {
  std::vector<std::string> out;
  for (const auto& item : items_)
    if (item.kind == CiKind::RFC) out.push_back(item.id);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void collect_paths(const ServiceTree& t, const std::string& id, std::vector<std::string>& suffix,
                   std::vector<Occurrence>& out) {
  suffix.push_back(id);
  const auto& parents = t.parents(id);
  if (parents.empty()) {
    out.push_back({{suffix.rbegin(), suffix.rend()}});
  } else {
    for (const auto& p : parents) collect_paths(t, p, suffix, out);
  }
  suffix.pop_back();
}

void check_occurrence(const ServiceTree& t, const Occurrence& o) {
  auto fail = [&](const std::string& why) {
    throw DiagnosticError({error(0, "invalid occurrence " + format_path(o) + ": " + why)});
  };
  if (o.path.empty()) fail("empty path");
  const auto* root = t.find(o.path.front());
  if (!root || root->kind != CiKind::RFC) fail("path does not start at an RFC");
  for (std::size_t i = 1; i < o.path.size(); ++i)
    if (!t.has_edge(o.path[i - 1], o.path[i]))
      fail("no edge " + o.path[i - 1] + " -> " + o.path[i]);
}

void check_service_target(const ServiceTree& t, const Occurrence& o) {
  check_occurrence(t, o);
  const auto kind = t.at(o.target()).kind;
  if (kind != CiKind::SVC && kind != CiKind::HOS)
    throw DiagnosticError(
        {error(0, "occurrence " + format_path(o) + " does not end at a service or host")});
}

}  // namespace

std::vector<Occurrence> occurrences(const ServiceTree& t, std::string_view item_id) {
  t.at(item_id);
  std::vector<Occurrence> out;
  std::vector<std::string> suffix;
  collect_paths(t, std::string(item_id), suffix, out);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Occurrence> service_occurrences(const ServiceTree& t) {
  std::vector<Occurrence> out;
  for (const auto& item : t.items()) {
    if (item.kind != CiKind::SVC && item.kind != CiKind::HOS) continue;
    auto occ = occurrences(t, item.id);
    out.insert(out.end(), occ.begin(), occ.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

SlaResolution effective_sla(const ServiceTree& t, const Occurrence& o) {
  check_service_target(t, o);
  std::set<std::string> candidates;
  for (const auto& id : o.path) {
    const auto& slas = t.sla_children(id);
    candidates.insert(slas.begin(), slas.end());
  }
  SlaResolution r;
  if (candidates.empty()) return r;

  int best = 0;
  std::vector<std::string> leaders;
  for (const auto& id : candidates) {
    const int prio = t.at(id).sla->priority;
    if (leaders.empty() || prio > best) {
      best = prio;
      leaders = {id};
    } else if (prio == best) {
      leaders.push_back(id);
    }
  }
  if (leaders.size() > 1) {
    r.status = SlaResolution::Status::PriorityTie;
    r.tied = std::move(leaders);
  } else {
    r.status = SlaResolution::Status::Resolved;
    r.sla_id = leaders.front();
  }
  return r;
}

MtcAccumulation accumulated_mtc(const ServiceTree& t, const Occurrence& o) {
  check_occurrence(t, o);
  MtcAccumulation acc;
  for (const auto& id : o.path) {
    for (const auto& m : t.mtc_children(id))
      if (acc.mtcs.insert(m).second) acc.total_liability += t.at(m).mtc->liability;
  }
  return acc;
}

MtcAccumulation item_mtc(const ServiceTree& t, std::string_view item_id) {
  MtcAccumulation acc;
  for (const auto& o : occurrences(t, item_id)) {
    for (const auto& m : accumulated_mtc(t, o).mtcs)
      if (acc.mtcs.insert(m).second) acc.total_liability += t.at(m).mtc->liability;
  }
  return acc;
}

Diagnostics validate_tree(const ServiceTree& t) {
  Diagnostics diags = check_structure(t.items(), t.edges());
  if (has_errors(diags)) return diags;
  for (const auto& o : service_occurrences(t)) {
    auto r = effective_sla(t, o);
    if (r.status != SlaResolution::Status::PriorityTie) continue;
    std::string tied;
    for (const auto& id : r.tied) tied += (tied.empty() ? "" : ", ") + id;
    diags.push_back(error(0, "PriorityTie at " + format_path(o) + ": " + tied + " share priority " +
                                 std::to_string(t.at(r.tied.front()).sla->priority)));
  }
  return diags;
}

std::vector<RedundantMtc> find_redundant_mtcs(const ServiceTree& t) {
  std::map<std::string, std::set<Occurrence>> coverage;
  for (const auto& item : t.items())
    if (item.kind == CiKind::MTC) coverage[item.id];
  for (const auto& o : service_occurrences(t))
    for (const auto& m : accumulated_mtc(t, o).mtcs) coverage[m].insert(o);

  std::vector<RedundantMtc> out;
  for (const auto& [id, covered] : coverage) {
    for (const auto& [other, other_covered] : coverage) {
      if (other == id) continue;
      if (std::includes(other_covered.begin(), other_covered.end(), covered.begin(),
                        covered.end())) {
        std::string reason =
            covered.empty() ? "covers no service or host; " + other + " makes it moot"
                            : "all " + std::to_string(covered.size()) +
                                  " covered occurrence(s) are also covered by " + other;
        out.push_back({id, std::move(reason)});
        break;
      }
    }
  }
  return out;
}

namespace {

std::string fresh_id(const ServiceTree& t, const std::string& base) {
  std::string id = base + "'";
  while (t.find(id)) id += "'";
  return id;
}

void check_change(const ServiceTree& t, const ReplaceSla& change) {
  t.at(change.node_id);
  const auto& old = t.at(change.old_sla_id);
  if (old.kind != CiKind::SLA)
    throw DiagnosticError({error(0, change.old_sla_id + " is not an SLA")});
  if (!t.has_edge(change.node_id, change.old_sla_id))
    throw DiagnosticError(
        {error(0, change.old_sla_id + " is not attached to " + change.node_id)});
}

}  // namespace

ServiceTree apply_change(const ServiceTree& t, const ReplaceSla& change) {
  check_change(t, change);
  const auto& old = t.at(change.old_sla_id);
  const bool still_used = t.parents(change.old_sla_id).size() > 1;

  ConfigItem replacement{fresh_id(t, old.id), CiKind::SLA, old.label, change.new_terms, {}};
  std::vector<ConfigItem> items;
  for (const auto& item : t.items())
    if (still_used || item.id != old.id) items.push_back(item);
  items.push_back(replacement);

  std::vector<Edge> edges;
  for (const auto& e : t.edges()) {
    if (e.parent == change.node_id && e.child == old.id)
      edges.push_back({change.node_id, replacement.id});
    else
      edges.push_back(e);
  }
  return ServiceTree::create(std::move(items), std::move(edges));
}

GateVerdict gate_change(const ServiceTree& t, const ReplaceSla& change) {
  check_change(t, change);
  const auto& old_terms = *t.at(change.old_sla_id).sla;
  GateVerdict v;
  if (!(change.new_terms.total_fines() < old_terms.total_fines())) {
    v.rule = "NR1";
    v.reason = "total fines " + change.new_terms.total_fines().str() + " of the new SLA are not "
               "less than " + old_terms.total_fines().str() + " of " + change.old_sla_id;
    return v;
  }

  std::set<Occurrence> tied_before;
  for (const auto& o : service_occurrences(t))
    if (effective_sla(t, o).status == SlaResolution::Status::PriorityTie) tied_before.insert(o);

  const auto next = apply_change(t, change);
  for (const auto& o : service_occurrences(next)) {
    if (tied_before.count(o)) continue;
    if (effective_sla(next, o).status == SlaResolution::Status::PriorityTie) {
      v.rule = "PriorityTie";
      v.reason = "replacement creates a priority tie at " + format_path(o);
      return v;
    }
  }
  v.accepted = true;
  return v;
}

std::string format_path(const Occurrence& o) {
  std::string out;
  for (const auto& id : o.path) out += (out.empty() ? "" : " > ") + id;
  return out;
}

}  // namespace itsm
