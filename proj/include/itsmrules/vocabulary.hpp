#pragma once

// Structured-English vocabularies: terms (`T:`), fact types (`F:`) and
// normative rules (`NR:`).

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "itsmrules/diagnostic.hpp"

namespace itsm {

struct Term {
  std::string name;
  std::size_t declaration_index = 0;
  int line = 0;

  bool operator==(const Term& o) const {
    return name == o.name && declaration_index == o.declaration_index;
  }
};

enum class FactKind { Attribute, Link };

/// `<subject> has <object>` (Attribute) or `<subject> is linked to <object>` (Link).
struct FactType {
  FactKind kind = FactKind::Attribute;
  std::string subject;
  std::string object;
  std::size_t declaration_index = 0;
  int line = 0;

  bool operator==(const FactType& o) const {
    return kind == o.kind && subject == o.subject && object == o.object &&
           declaration_index == o.declaration_index;
  }
};

enum class Comparison { LessThan, GreaterThan, EqualTo, AtLeast, AtMost };

std::string_view comparison_phrase(Comparison c);   // "less than", ...
std::string_view comparison_operator(Comparison c); // "<", ...
std::optional<Comparison> comparison_from_phrase(std::string_view phrase);
bool evaluate(Comparison c, double lhs, double rhs);

inline constexpr Comparison kAllComparisons[] = {
    Comparison::LessThan, Comparison::GreaterThan, Comparison::EqualTo,
    Comparison::AtLeast, Comparison::AtMost};

struct LinkScope {
  std::string subject;
  std::string object;
  bool operator==(const LinkScope&) const = default;
};

struct TermScope {
  std::string subject;
  bool operator==(const TermScope&) const = default;
};

using RuleScope = std::variant<LinkScope, TermScope>;

/// Right-hand side "the <attr> of the old <subject>".
struct OldAttribute {
  bool operator==(const OldAttribute&) const = default;
};

/// A plain decimal literal, kept verbatim (`-?digits(.digits)?`).
struct NumericLiteral {
  std::string text;
  double value() const;
  bool operator==(const NumericLiteral&) const = default;
};

using RuleRhs = std::variant<OldAttribute, NumericLiteral>;

struct NormativeRule {
  std::string name;
  RuleScope scope;
  std::string attribute;
  Comparison comparison = Comparison::LessThan;
  RuleRhs rhs;
  int line = 0;

  const std::string& subject() const;

  bool operator==(const NormativeRule& o) const {
    return name == o.name && scope == o.scope && attribute == o.attribute &&
           comparison == o.comparison && rhs == o.rhs;
  }
};

struct Vocabulary {
  std::vector<Term> terms;
  std::vector<FactType> fact_types;
  std::vector<NormativeRule> rules;
  std::string source_text;

  const Term* find_term(std::string_view name) const;
  bool is_attribute_term(std::string_view name) const;
  bool has_attribute(std::string_view subject, std::string_view attribute) const;
  bool has_link(std::string_view subject, std::string_view object) const;

  /// Structural equality; source text and line numbers are ignored.
  bool operator==(const Vocabulary& o) const {
    return terms == o.terms && fact_types == o.fact_types && rules == o.rules;
  }
};

struct ParseResult {
  std::optional<Vocabulary> vocabulary;
  Diagnostics diagnostics;

  bool ok() const { return vocabulary.has_value(); }
};

/// Parses structured-English source. Either a vocabulary is returned, or at
/// least one error diagnostic; warnings may accompany a vocabulary.
ParseResult parse_vocabulary(std::string_view source);

/// Re-checks every model invariant. Empty result iff the vocabulary is well formed.
Diagnostics validate_vocabulary(const Vocabulary& v);

/// Canonical LF-separated source. Re-parsing yields a structurally equal model.
std::string canonical_render(const Vocabulary& v);

/// Throws DiagnosticError when parsing fails.
Vocabulary parse_vocabulary_or_throw(std::string_view source);

}  // namespace itsm
