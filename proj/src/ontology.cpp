#include "itsmrules/ontology.hpp"

#include <algorithm>
#include <map>

namespace itsm {

InstanceGraph expand_instances(const ServiceTree& t) {
  InstanceGraph g;
  std::map<std::vector<std::string>, std::string> by_path;
  for (const auto& item : t.items()) {
    const auto occ = occurrences(t, item.id);
    for (std::size_t k = 0; k < occ.size(); ++k) {
      InstanceNode n{item.id + "#" + std::to_string(k + 1), item.id, item.kind, occ[k]};
      by_path.emplace(occ[k].path, n.instance_id);
      g.nodes.push_back(std::move(n));
    }
  }
  for (const auto& n : g.nodes) {
    const auto& path = n.occurrence.path;
    if (path.size() < 2) continue;
    std::vector<std::string> parent_path(path.begin(), path.end() - 1);
    g.edges.push_back({by_path.at(parent_path), n.instance_id});
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<Triple> to_triples(const ServiceTree& t) {
  const auto g = expand_instances(t);
  std::vector<Triple> out;
  for (const auto& e : g.edges) out.push_back({e.child, "is linked to", e.parent});
  for (const auto& n : g.nodes) {
    const auto& item = t.at(n.item_id);
    if (item.sla) {
      const auto& s = *item.sla;
      out.push_back({n.instance_id, "has", "priority " + std::to_string(s.priority)});
      out.push_back({n.instance_id, "has", "first failure fine " + s.first_failure_fine.str()});
      out.push_back(
          {n.instance_id, "has", "concurrent failure fine " + s.concurrent_failure_fine.str()});
      out.push_back({n.instance_id, "has", "total fines " + s.total_fines().str()});
    }
    if (item.mtc) out.push_back({n.instance_id, "has", "liability " + item.mtc->liability.str()});
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string render_triples(const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& tr : triples) out += tr.subject + "\t" + tr.predicate + "\t" + tr.object + "\n";
  return out;
}

namespace {

std::string dot_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

const char* shape(CiKind k) {
  switch (k) {
    case CiKind::RFC: return "box";
    case CiKind::SVC: return "ellipse";
    case CiKind::HOS: return "component";
    case CiKind::SLA: return "note";
    case CiKind::MTC: return "folder";
  }
  return "box";
}

}  // namespace

std::string to_dot(const ServiceTree& t) {
  const auto g = expand_instances(t);
  std::string out = "digraph \"service_tree\" {\n";
  for (const auto& n : g.nodes) {
    const auto& item = t.at(n.item_id);
    out += "  " + dot_string(n.instance_id) +
           " [label=" + dot_string(std::string(to_string(n.kind)) + ":" + item.label) +
           ", shape=" + shape(n.kind) + "];\n";
  }
  for (const auto& e : g.edges)
    out += "  " + dot_string(e.parent) + " -> " + dot_string(e.child) + ";\n";
  out += "}\n";
  return out;
}

}  // namespace itsm
