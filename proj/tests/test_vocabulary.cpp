#include <doctest.h>

#include <random>

#include "itsmrules/vocabulary.hpp"
#include "oracles.hpp"

using namespace itsm;
using itsm::testing::read_data;

namespace {

bool mentions(const Diagnostics& diags, std::string_view text) {
  for (const auto& d : diags)
    if (d.message.find(text) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("SLA guard block parses into three terms, two facts and NR1") {
  auto r = parse_vocabulary(read_data("sla_guard.sbvr"));
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  const auto& v = *r.vocabulary;

  REQUIRE(v.terms.size() == 3);
  CHECK(v.terms[0].name == "SLA");
  CHECK(v.terms[1].name == "SVC");
  CHECK(v.terms[2].name == "total fines");

  REQUIRE(v.fact_types.size() == 2);
  CHECK(v.fact_types[0] == FactType{FactKind::Attribute, "SLA", "total fines", 0, 0});
  CHECK(v.fact_types[1] == FactType{FactKind::Link, "SLA", "SVC", 1, 0});

  REQUIRE(v.rules.size() == 1);
  const auto& nr = v.rules[0];
  CHECK(nr.name == "NR1");
  CHECK(nr.scope == RuleScope{LinkScope{"SLA", "SVC"}});
  CHECK(nr.attribute == "total fines");
  CHECK(nr.comparison == Comparison::LessThan);
  CHECK(std::holds_alternative<OldAttribute>(nr.rhs));
  CHECK(nr.line == 6);
}

TEST_CASE("empty input gives an empty vocabulary") {
  auto r = parse_vocabulary("");
  REQUIRE(r.ok());
  CHECK(r.diagnostics.empty());
  CHECK(r.vocabulary->terms.empty());
  CHECK(r.vocabulary->rules.empty());
}

TEST_CASE("rule on an attribute with no fact type is rejected") {
  auto r = parse_vocabulary(
      "T:SLA\n"
      "NR: For an SLA it is obligatory that the total fines of the new SLA are less than 100.\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].message == "undeclared attribute 'total fines' for term 'SLA'");
  CHECK(r.diagnostics[0].line == 2);
}

TEST_CASE("line prefixes are exact") {
  auto r = parse_vocabulary("T:SLA\nTX:SVC\n");
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].line == 2);
  CHECK(mentions(r.diagnostics, "unknown line prefix 'TX:'"));

  auto no_colon = parse_vocabulary("SLA\n");
  REQUIRE_FALSE(no_colon.ok());
  CHECK(mentions(no_colon.diagnostics, "unknown line prefix"));
}

TEST_CASE("comments, blank lines, CRLF and optional space after the colon") {
  auto r = parse_vocabulary("# header\r\n\r\nT: SLA\r\nT:  total   fines \r\nF:SLA has total fines\r\n");
  REQUIRE(r.ok());
  CHECK(r.vocabulary->terms[1].name == "total fines");
  CHECK(r.vocabulary->fact_types.size() == 1);
}

TEST_CASE("duplicate term declaration") {
  auto r = parse_vocabulary("T:SLA\nT:SLA\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.size() == 1);
  CHECK(mentions(r.diagnostics, "duplicate term declaration 'SLA'"));
  CHECK(r.diagnostics[0].line == 2);
}

TEST_CASE("fact types referring to unknown terms") {
  auto r = parse_vocabulary("T:SLA\nF: SLA has penalty\n");
  REQUIRE_FALSE(r.ok());
  CHECK(mentions(r.diagnostics, "undeclared term 'penalty'"));

  auto bad = parse_vocabulary("T:SLA\nT:SVC\nF: SLA owns SVC\n");
  REQUIRE_FALSE(bad.ok());
  CHECK(mentions(bad.diagnostics, "malformed fact type"));
}

TEST_CASE("malformed sentences carry an expected-token hint") {
  const std::string head = "T:SLA\nT:total fines\nF: SLA has total fines\n";
  SUBCASE("wrong modal") {
    auto r = parse_vocabulary(head + "NR: For an SLA it is permitted that the total fines of the "
                                     "new SLA are less than 100.\n");
    REQUIRE_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "expected 'obligatory' but found 'permitted'"));
  }
  SUBCASE("unknown comparison") {
    auto r = parse_vocabulary(head + "NR: For an SLA it is obligatory that the total fines of the "
                                     "new SLA are smaller than 100.\n");
    REQUIRE_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "expected a comparison"));
  }
  SUBCASE("missing full stop") {
    auto r = parse_vocabulary(head + "NR: For an SLA it is obligatory that the total fines of the "
                                     "new SLA are less than 100\n");
    REQUIRE_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "expected '.'"));
  }
  SUBCASE("non-numeric right-hand side") {
    auto r = parse_vocabulary(head + "NR: For an SLA it is obligatory that the total fines of the "
                                     "new SLA are less than lots.\n");
    REQUIRE_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "expected a number"));
  }
  SUBCASE("different term after 'of the new'") {
    auto r = parse_vocabulary("T:SVC\n" + head + "NR: For an SLA it is obligatory that the total "
                                                 "fines of the new SVC are less than 5.\n");
    REQUIRE_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "expected 'SLA' but found 'SVC'"));
  }
  SUBCASE("link scope without a link fact") {
    auto r = parse_vocabulary("T:SVC\n" + head + "NR: For an SLA that is linked to an SVC it is "
                                                 "obligatory that the total fines of the new SLA "
                                                 "are less than 5.\n");
    REQUIRE_FALSE(r.ok());
    CHECK(mentions(r.diagnostics, "undeclared fact type 'SLA is linked to SVC'"));
  }
}

TEST_CASE("articles and copulas are interchangeable; every comparison phrase parses") {
  for (auto c : kAllComparisons) {
    const std::string src = "T:SLA\nT:total fines\nF: SLA has total fines\nNR: For a SLA it is "
                            "obligatory that the total fines of the new SLA is " +
                            std::string(comparison_phrase(c)) + " -2.5.\n";
    auto r = parse_vocabulary(src);
    REQUIRE(r.ok());
    CHECK(r.vocabulary->rules[0].comparison == c);
    CHECK(r.vocabulary->rules[0].rhs == RuleRhs{NumericLiteral{"-2.5"}});
  }
}

TEST_CASE("validate_vocabulary") {
  auto guard = parse_vocabulary_or_throw(read_data("sla_guard.sbvr"));
  CHECK(validate_vocabulary(guard).empty());

  SUBCASE("term declared twice") {
    auto v = guard;
    v.terms.push_back({"SVC", 3, 0});
    auto diags = validate_vocabulary(v);
    CHECK(diags.size() == 1);
    CHECK(mentions(diags, "duplicate term declaration 'SVC'"));
  }
  SUBCASE("attribute used as a link participant") {
    auto v = guard;
    v.fact_types.push_back({FactKind::Link, "total fines", "SVC", 2, 0});
    auto diags = validate_vocabulary(v);
    CHECK(diags.size() == 1);
    CHECK(mentions(diags, "both an attribute and a link participant"));
  }
  SUBCASE("rule names follow source order") {
    auto v = guard;
    v.rules[0].name = "NR7";
    CHECK(mentions(validate_vocabulary(v), "should be named NR1"));
  }
  SUBCASE("dangling reference") {
    auto v = guard;
    v.fact_types[0].object = "penalty";
    CHECK(mentions(validate_vocabulary(v), "undeclared term 'penalty'"));
  }
}

TEST_CASE("canonical_render") {
  CHECK(canonical_render(Vocabulary{}).empty());

  auto guard = parse_vocabulary_or_throw(read_data("sla_guard.sbvr"));
  const auto text = canonical_render(guard);
  CHECK(text ==
        "T:SLA\nT:SVC\nT:total fines\nF: SLA has total fines\nF: SLA is linked to SVC\n"
        "NR: For a SLA that is linked to a SVC it is obligatory that the total fines of the new "
        "SLA are less than the total fines of the old SLA.\n");
  CHECK(parse_vocabulary_or_throw(text) == guard);

  auto at_least = guard;
  at_least.rules[0].comparison = Comparison::AtLeast;
  const auto rendered = canonical_render(at_least);
  CHECK(rendered.find("are at least the total fines") != std::string::npos);
  CHECK(parse_vocabulary_or_throw(rendered) == at_least);
}

TEST_CASE("property: canonical rendering round-trips random vocabularies") {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 200; ++i) {
    const auto v = itsm::testing::random_vocabulary(rng);
    REQUIRE(validate_vocabulary(v).empty());
    auto r = parse_vocabulary(canonical_render(v));
    INFO(canonical_render(v));
    REQUIRE(r.ok());
    CHECK(*r.vocabulary == v);
    for (std::size_t k = 0; k < r.vocabulary->rules.size(); ++k)
      CHECK(r.vocabulary->rules[k].name == "NR" + std::to_string(k + 1));
  }
}

TEST_CASE("property: parsing is total") {
  // Every mutation of a valid source either parses or yields an error.
  const std::string base = read_data("sla_guard.sbvr");
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    std::string s = base;
    const int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      const auto pos = rng() % s.size();
      switch (rng() % 3) {
        case 0: s.erase(pos, 1 + rng() % 6); break;
        case 1: s.insert(pos, 1, "T:F.NR x#\n"[rng() % 10]); break;
        default: s[pos] = static_cast<char>('a' + rng() % 26);
      }
      if (s.empty()) s = "x";
    }
    auto r = parse_vocabulary(s);
    CHECK((r.ok() || has_errors(r.diagnostics)));
    CHECK_FALSE((r.ok() && has_errors(r.diagnostics)));
  }
}
