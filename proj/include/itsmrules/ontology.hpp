#pragma once

// Instance-expanded views of a service tree. A CI reached along several
// root paths becomes one instance per path, `<id>#<k>`, so the expansion of
// the DAG is a forest.

#include <string>
#include <vector>

#include "itsmrules/service_tree.hpp"

namespace itsm {

struct InstanceNode {
  std::string instance_id;
  std::string item_id;
  CiKind kind = CiKind::SVC;
  Occurrence occurrence;
};

struct InstanceEdge {
  std::string parent;
  std::string child;
  auto operator<=>(const InstanceEdge&) const = default;
};

struct InstanceGraph {
  std::vector<InstanceNode> nodes;  // by item order in the tree, then k
  std::vector<InstanceEdge> edges;  // sorted
};

InstanceGraph expand_instances(const ServiceTree& t);

struct Triple {
  std::string subject;
  std::string predicate;  // "is linked to" or "has"
  std::string object;
  auto operator<=>(const Triple&) const = default;
};

/// Child-to-parent "is linked to" triples plus "has" literals for SLA and
/// MTC terms, sorted.
std::vector<Triple> to_triples(const ServiceTree& t);

/// `subject<TAB>predicate<TAB>object` lines.
std::string render_triples(const std::vector<Triple>& triples);

std::string to_dot(const ServiceTree& t);

}  // namespace itsm
