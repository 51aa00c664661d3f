#include <doctest.h>

#include <random>

#include "dot_oracle.hpp"
#include "itsmrules/ontology.hpp"
#include "itsmrules/tree_format.hpp"
#include "oracles.hpp"

using namespace itsm;
using namespace itsm::testing;

namespace {

ServiceTree sample_tree() { return *load_tree(read_data("sample.tree.json")).tree; }

std::size_t occurrence_total(const ServiceTree& t) {
  const auto paths = brute_force_paths(t);
  std::size_t n = 0;
  for (const auto& [id, p] : paths) n += p.size();
  return n;
}

std::size_t attribute_literals(const ServiceTree& t) {
  const auto paths = brute_force_paths(t);
  std::size_t n = 0;
  for (const auto& item : t.items()) {
    const std::size_t per = item.kind == CiKind::SLA ? 4 : item.kind == CiKind::MTC ? 1 : 0;
    n += per * paths.at(item.id).size();
  }
  return n;
}

std::string item_of(const std::string& instance_id) {
  return instance_id.substr(0, instance_id.rfind('#'));
}

}  // namespace

TEST_CASE("expand_instances on the sample tree") {
  const auto t = sample_tree();
  const auto g = expand_instances(t);
  CHECK(g.nodes.size() == occurrence_total(t));

  std::vector<std::string> hos2;
  for (const auto& n : g.nodes)
    if (n.item_id == "HOS2") hos2.push_back(n.instance_id);
  CHECK(hos2 == std::vector<std::string>{"HOS2#1", "HOS2#2"});

  const auto has = [&](const char* p, const char* c) {
    return std::find(g.edges.begin(), g.edges.end(), InstanceEdge{p, c}) != g.edges.end();
  };
  CHECK(has("SVC1#1", "HOS2#1"));
  CHECK(has("SVC4#1", "HOS2#2"));
  CHECK(has("HOS2#1", "SLA2#1"));
  CHECK(has("HOS2#2", "SLA2#2"));
  CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));

  // Every instance node is a tree: at most one parent instance.
  std::map<std::string, int> in_degree;
  for (const auto& e : g.edges) ++in_degree[e.child];
  for (const auto& [id, d] : in_degree) CHECK(d == 1);
}

TEST_CASE("to_triples on the sample tree") {
  const auto t = sample_tree();
  const auto triples = to_triples(t);
  CHECK(std::is_sorted(triples.begin(), triples.end()));
  CHECK(triples.size() == expand_instances(t).edges.size() + attribute_literals(t));

  const auto contains = [&](Triple x) {
    return std::find(triples.begin(), triples.end(), x) != triples.end();
  };
  CHECK(contains({"SLA1#1", "has", "total fines 800.00"}));
  CHECK(contains({"SLA1#1", "is linked to", "SVC1#1"}));
  CHECK(contains({"MTC1#1", "has", "liability 10.00"}));

  const auto text = render_triples({{"a#1", "has", "priority 2"}, {"b#1", "is linked to", "a#1"}});
  CHECK(text == "a#1\thas\tpriority 2\nb#1\tis linked to\ta#1\n");
}

TEST_CASE("to_dot is well-formed and quotes labels") {
  auto items = std::vector<ConfigItem>{make_item("RFC1", CiKind::RFC), make_item("SVC 1", CiKind::SVC)};
  items[1].label = "say \"hi\"\\ now";
  const auto t = ServiceTree::create(items, {{"RFC1", "SVC 1"}});
  const auto dot = to_dot(t);
  CHECK(dot.rfind("digraph \"service_tree\" {\n", 0) == 0);
  const auto parsed = parse_dot(dot);
  REQUIRE(parsed);
  CHECK(parsed->nodes == std::set<std::string>{"RFC1#1", "SVC 1#1"});
  CHECK(parsed->edges.count({"RFC1#1", "SVC 1#1"}) == 1);

  CHECK(parse_dot(to_dot(ServiceTree::create({}, {}))));
  CHECK_FALSE(parse_dot("digraph { a -> }"));  // the oracle does reject bad input
}

TEST_CASE("property: expansion contracts to the original graph and exports agree") {
  std::mt19937 rng(515);
  for (int i = 0; i < 100; ++i) {
    const auto t = random_tree(rng);
    const auto g = expand_instances(t);
    CHECK(g.nodes.size() == occurrence_total(t));

    std::set<Edge> contracted;
    std::set<std::string> items;
    for (const auto& n : g.nodes) items.insert(n.item_id);
    for (const auto& e : g.edges) contracted.insert({item_of(e.parent), item_of(e.child)});
    CHECK(contracted == std::set<Edge>(t.edges().begin(), t.edges().end()));
    CHECK(items.size() == t.items().size());

    const auto parsed = parse_dot(to_dot(t));
    REQUIRE(parsed);
    CHECK(parsed->nodes.size() == g.nodes.size());
    CHECK(parsed->edges.size() == g.edges.size());

    CHECK(to_triples(t).size() == g.edges.size() + attribute_literals(t));
  }
}
