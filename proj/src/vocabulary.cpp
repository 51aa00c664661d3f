#include "itsmrules/vocabulary.hpp"

#include <algorithm>
#include <charconv>
#include <regex>
#include <set>

#include "text_util.hpp"

namespace itsm {

namespace {

const std::regex kNumberPattern(R"(-?[0-9]+(\.[0-9]+)?)");

struct Statement {
  enum Kind { TermDecl, FactDecl, RuleDecl } kind;
  std::string text;
  int line;
};

bool looks_prefixed(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i]))) ++i;
  return i > 0 && i < line.size() && line[i] == ':';
}

// Word-level matcher for the two canonical rule sentences.
class RuleMatcher {
 public:
  RuleMatcher(std::vector<std::string> words, int line, const Vocabulary& v,
              Diagnostics& diags)
      : words_(std::move(words)), line_(line), diags_(diags) {
    for (const auto& t : v.terms) term_words_.push_back(split_words(t.name));
    std::stable_sort(term_words_.begin(), term_words_.end(),
                     [](const auto& a, const auto& b) { return a.size() > b.size(); });
  }

  bool at_end() const { return pos_ >= words_.size(); }
  const std::string& peek() const { return words_[pos_]; }

  bool expect(std::initializer_list<std::string_view> alternatives) {
    if (!at_end()) {
      for (auto alt : alternatives) {
        if (peek() == alt) {
          ++pos_;
          return true;
        }
      }
    }
    std::string want;
    for (auto alt : alternatives) {
      if (!want.empty()) want += "' or '";
      want += alt;
    }
    fail("expected '" + want + "' but " + found());
    return false;
  }

  bool expect_phrase(std::string_view phrase) {
    for (const auto& w : split_words(phrase))
      if (!expect({w})) return false;
    return true;
  }

  // Reads a term name. Declared terms are matched longest first; otherwise
  // the words up to the first anchor are returned with `declared` false.
  struct Slot {
    std::string name;
    bool declared = false;
  };

  std::optional<Slot> term(std::initializer_list<std::string_view> anchors) {
    for (const auto& tw : term_words_) {
      if (pos_ + tw.size() > words_.size()) continue;
      if (std::equal(tw.begin(), tw.end(), words_.begin() + pos_)) {
        pos_ += tw.size();
        return Slot{join_words(tw), true};
      }
    }
    std::size_t end = pos_;
    while (end < words_.size() &&
           std::find(anchors.begin(), anchors.end(), words_[end]) == anchors.end())
      ++end;
    if (end == pos_) {
      fail("expected a term but " + found());
      return std::nullopt;
    }
    std::vector<std::string> name(words_.begin() + pos_, words_.begin() + end);
    pos_ = end;
    return Slot{join_words(name), false};
  }

  std::optional<Comparison> comparison() {
    if (pos_ + 2 <= words_.size()) {
      auto phrase = words_[pos_] + " " + words_[pos_ + 1];
      if (auto c = comparison_from_phrase(phrase)) {
        pos_ += 2;
        return c;
      }
    }
    fail("expected a comparison ('less than', 'greater than', 'equal to', "
         "'at least' or 'at most') but " + found());
    return std::nullopt;
  }

  void fail(std::string message) {
    if (!failed_) diags_.push_back(error(line_, "malformed rule: " + message));
    failed_ = true;
  }

  void report(std::string message) { diags_.push_back(error(line_, std::move(message))); }

  bool failed() const { return failed_; }
  int line() const { return line_; }

 private:
  std::string found() const {
    return at_end() ? std::string("reached end of rule") : "found '" + peek() + "'";
  }

  std::vector<std::string> words_;
  std::size_t pos_ = 0;
  int line_;
  Diagnostics& diags_;
  std::vector<std::vector<std::string>> term_words_;
  bool failed_ = false;
};

std::optional<NormativeRule> parse_rule(const Statement& st, const Vocabulary& v,
                                        std::size_t ordinal, Diagnostics& diags) {
  std::string text = trim(st.text);
  if (text.empty() || text.back() != '.') {
    diags.push_back(error(st.line, "malformed rule: expected '.' at end of rule"));
    return std::nullopt;
  }
  text.pop_back();
  RuleMatcher m(split_words(text), st.line, v, diags);

  auto undeclared_term = [&](const RuleMatcher::Slot& s) {
    if (!s.declared) m.report("undeclared term '" + s.name + "'");
    return !s.declared;
  };

  if (!m.expect({"For"}) || !m.expect({"a", "an"})) return std::nullopt;
  auto subject = m.term({"that", "it"});
  if (!subject) return std::nullopt;
  if (undeclared_term(*subject)) return std::nullopt;

  NormativeRule rule;
  rule.name = "NR" + std::to_string(ordinal);
  rule.line = st.line;
  rule.scope = TermScope{subject->name};

  if (!m.at_end() && m.peek() == "that") {
    m.expect({"that"});
    if (!m.expect({"is", "are"}) || !m.expect_phrase("linked to") || !m.expect({"a", "an"}))
      return std::nullopt;
    auto object = m.term({"it"});
    if (!object) return std::nullopt;
    if (undeclared_term(*object)) return std::nullopt;
    if (!v.has_link(subject->name, object->name)) {
      m.report("undeclared fact type '" + subject->name + " is linked to " + object->name + "'");
      return std::nullopt;
    }
    rule.scope = LinkScope{subject->name, object->name};
  }

  if (!m.expect_phrase("it is obligatory that the")) return std::nullopt;
  auto attribute = m.term({"of"});
  if (!attribute) return std::nullopt;
  if (!v.has_attribute(subject->name, attribute->name)) {
    m.report("undeclared attribute '" + attribute->name + "' for term '" + subject->name + "'");
    return std::nullopt;
  }
  rule.attribute = attribute->name;

  auto expect_same_term = [&](const std::string& expected,
                              std::initializer_list<std::string_view> anchors) {
    auto t = m.term(anchors);
    if (!t) return false;
    if (t->name != expected) {
      m.fail("expected '" + expected + "' but found '" + t->name + "'");
      return false;
    }
    return true;
  };

  if (!m.expect_phrase("of the new") || !expect_same_term(subject->name, {"is", "are"}))
    return std::nullopt;
  if (!m.expect({"is", "are"})) return std::nullopt;
  auto cmp = m.comparison();
  if (!cmp) return std::nullopt;
  rule.comparison = *cmp;

  if (m.at_end()) {
    m.fail("expected a number or 'the <attribute> of the old <term>' but reached end of rule");
    return std::nullopt;
  }
  if (m.peek() == "the") {
    m.expect({"the"});
    if (!expect_same_term(rule.attribute, {"of"})) return std::nullopt;
    if (!m.expect_phrase("of the old") || !expect_same_term(subject->name, {}))
      return std::nullopt;
    rule.rhs = OldAttribute{};
  } else {
    std::string literal = m.peek();
    if (!std::regex_match(literal, kNumberPattern)) {
      m.fail("expected a number or 'the <attribute> of the old <term>' but found '" +
             literal + "'");
      return std::nullopt;
    }
    m.expect({literal});
    rule.rhs = NumericLiteral{literal};
  }
  if (!m.at_end()) {
    m.fail("expected end of rule but found '" + m.peek() + "'");
    return std::nullopt;
  }
  return rule;
}

struct FactVerb {
  std::string_view phrase;
  FactKind kind;
};

constexpr FactVerb kFactVerbs[] = {
    {" is linked to ", FactKind::Link},
    {" are linked to ", FactKind::Link},
    {" has ", FactKind::Attribute},
    {" have ", FactKind::Attribute},
};

std::optional<FactType> parse_fact(const Statement& st, const Vocabulary& v,
                                   Diagnostics& diags) {
  const std::string text = normalize_spaces(st.text);
  std::optional<FactType> first_split;
  for (const auto& verb : kFactVerbs) {
    for (auto at = text.find(verb.phrase); at != std::string::npos;
         at = text.find(verb.phrase, at + 1)) {
      FactType f;
      f.kind = verb.kind;
      f.subject = text.substr(0, at);
      f.object = text.substr(at + verb.phrase.size());
      f.line = st.line;
      if (v.find_term(f.subject) && v.find_term(f.object)) return f;
      if (!first_split) first_split = f;
    }
  }
  if (!first_split) {
    diags.push_back(error(st.line, "malformed fact type: expected '<term> has <term>' or "
                                   "'<term> is linked to <term>'"));
    return std::nullopt;
  }
  const auto& name = v.find_term(first_split->subject) ? first_split->object
                                                       : first_split->subject;
  diags.push_back(error(st.line, "undeclared term '" + name + "'"));
  return std::nullopt;
}

}  // namespace

std::string_view comparison_phrase(Comparison c) {
  switch (c) {
    case Comparison::LessThan: return "less than";
    case Comparison::GreaterThan: return "greater than";
    case Comparison::EqualTo: return "equal to";
    case Comparison::AtLeast: return "at least";
    case Comparison::AtMost: return "at most";
  }
  return {};
}

std::string_view comparison_operator(Comparison c) {
  switch (c) {
    case Comparison::LessThan: return "<";
    case Comparison::GreaterThan: return ">";
    case Comparison::EqualTo: return "=";
    case Comparison::AtLeast: return ">=";
    case Comparison::AtMost: return "<=";
  }
  return {};
}

std::optional<Comparison> comparison_from_phrase(std::string_view phrase) {
  for (auto c : kAllComparisons)
    if (comparison_phrase(c) == phrase) return c;
  return std::nullopt;
}

bool evaluate(Comparison c, double lhs, double rhs) {
  switch (c) {
    case Comparison::LessThan: return lhs < rhs;
    case Comparison::GreaterThan: return lhs > rhs;
    case Comparison::EqualTo: return lhs == rhs;
    case Comparison::AtLeast: return lhs >= rhs;
    case Comparison::AtMost: return lhs <= rhs;
  }
  return false;
}

double NumericLiteral::value() const { return std::stod(text); }

const std::string& NormativeRule::subject() const {
  return std::visit([](const auto& s) -> const std::string& { return s.subject; }, scope);
}

const Term* Vocabulary::find_term(std::string_view name) const {
  for (const auto& t : terms)
    if (t.name == name) return &t;
  return nullptr;
}

bool Vocabulary::is_attribute_term(std::string_view name) const {
  return std::any_of(fact_types.begin(), fact_types.end(), [&](const FactType& f) {
    return f.kind == FactKind::Attribute && f.object == name;
  });
}

bool Vocabulary::has_attribute(std::string_view subject, std::string_view attribute) const {
  return std::any_of(fact_types.begin(), fact_types.end(), [&](const FactType& f) {
    return f.kind == FactKind::Attribute && f.subject == subject && f.object == attribute;
  });
}

bool Vocabulary::has_link(std::string_view subject, std::string_view object) const {
  return std::any_of(fact_types.begin(), fact_types.end(), [&](const FactType& f) {
    return f.kind == FactKind::Link && f.subject == subject && f.object == object;
  });
}

ParseResult parse_vocabulary(std::string_view source) {
  ParseResult result;
  Diagnostics& diags = result.diagnostics;
  std::vector<Statement> statements;

  const auto lines = split_lines(source);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i + 1);
    const std::string line = trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;

    // A rule sentence may wrap onto following unprefixed lines until its '.'.
    if (!statements.empty() && statements.back().kind == Statement::RuleDecl &&
        statements.back().text.back() != '.' && !looks_prefixed(line)) {
      statements.back().text += " " + line;
      continue;
    }

    auto colon = line.find(':');
    if (colon == std::string::npos) {
      diags.push_back(error(line_no, "unknown line prefix: expected 'T:', 'F:' or 'NR:'"));
      continue;
    }
    const std::string prefix = line.substr(0, colon);
    std::string body = trim(std::string_view(line).substr(colon + 1));
    if (prefix == "T") {
      statements.push_back({Statement::TermDecl, std::move(body), line_no});
    } else if (prefix == "F") {
      statements.push_back({Statement::FactDecl, std::move(body), line_no});
    } else if (prefix == "NR") {
      statements.push_back({Statement::RuleDecl, body.empty() ? std::string(" ") : std::move(body),
                            line_no});
    } else {
      diags.push_back(error(line_no, "unknown line prefix '" + prefix + ":'"));
    }
  }

  Vocabulary v;
  v.source_text = std::string(source);

  for (const auto& st : statements) {
    if (st.kind != Statement::TermDecl) continue;
    std::string name = normalize_spaces(st.text);
    if (name.empty()) {
      diags.push_back(error(st.line, "empty term name"));
    } else if (name.find('"') != std::string::npos) {
      diags.push_back(error(st.line, "term name may not contain '\"': " + name));
    } else if (v.find_term(name)) {
      diags.push_back(error(st.line, "duplicate term declaration '" + name + "'"));
    } else {
      v.terms.push_back({std::move(name), v.terms.size(), st.line});
    }
  }
  for (const auto& st : statements) {
    if (st.kind != Statement::FactDecl) continue;
    if (auto f = parse_fact(st, v, diags)) {
      f->declaration_index = v.fact_types.size();
      v.fact_types.push_back(std::move(*f));
    }
  }
  std::size_t ordinal = 0;
  for (const auto& st : statements) {
    if (st.kind != Statement::RuleDecl) continue;
    ++ordinal;
    if (auto r = parse_rule(st, v, ordinal, diags)) v.rules.push_back(std::move(*r));
  }

  if (has_errors(diags)) return result;

  auto structural = validate_vocabulary(v);
  diags.insert(diags.end(), structural.begin(), structural.end());
  if (!has_errors(diags)) result.vocabulary = std::move(v);
  return result;
}

Diagnostics validate_vocabulary(const Vocabulary& v) {
  Diagnostics diags;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < v.terms.size(); ++i) {
    const auto& t = v.terms[i];
    if (t.name.empty()) {
      diags.push_back(error(t.line, "empty term name"));
    } else if (t.name.find_first_of("\"\r\n") != std::string::npos) {
      diags.push_back(error(t.line, "term name contains a quote or line break: " + t.name));
    } else if (t.name != normalize_spaces(t.name) || t.name.back() == '.') {
      diags.push_back(error(t.line, "term name is not in canonical spelling: '" + t.name + "'"));
    }
    if (!seen.insert(t.name).second)
      diags.push_back(error(t.line, "duplicate term declaration '" + t.name + "'"));
    if (t.declaration_index != i)
      diags.push_back(error(t.line, "term '" + t.name + "' has declaration index " +
                                        std::to_string(t.declaration_index) + ", expected " +
                                        std::to_string(i)));
  }

  std::set<std::string> link_participants;
  for (const auto& f : v.fact_types) {
    if (f.kind == FactKind::Link) {
      link_participants.insert(f.subject);
      link_participants.insert(f.object);
    }
  }

  std::set<std::tuple<FactKind, std::string, std::string>> facts_seen;
  for (std::size_t i = 0; i < v.fact_types.size(); ++i) {
    const auto& f = v.fact_types[i];
    bool resolved = true;
    for (const auto* name : {&f.subject, &f.object}) {
      if (!v.find_term(*name)) {
        diags.push_back(error(f.line, "undeclared term '" + *name + "'"));
        resolved = false;
      }
    }
    if (f.declaration_index != i)
      diags.push_back(error(f.line, "fact type has declaration index " +
                                        std::to_string(f.declaration_index) + ", expected " +
                                        std::to_string(i)));
    if (!facts_seen.insert({f.kind, f.subject, f.object}).second)
      diags.push_back(error(f.line, "duplicate fact type '" + f.subject +
                                        (f.kind == FactKind::Link ? " is linked to " : " has ") +
                                        f.object + "'"));
    if (!resolved) continue;
    if (f.kind == FactKind::Link) {
      if (f.subject == f.object)
        diags.push_back(error(f.line, "term '" + f.subject + "' may not be linked to itself"));
    } else {
      if (link_participants.count(f.object))
        diags.push_back(error(f.line, "term '" + f.object +
                                          "' is both an attribute and a link participant"));
      if (v.is_attribute_term(f.subject))
        diags.push_back(error(f.line, "attribute term '" + f.subject +
                                          "' may not have attributes of its own"));
      if (f.subject == f.object)
        diags.push_back(error(f.line, "term '" + f.subject + "' may not have itself"));
    }
  }

  for (std::size_t i = 0; i < v.rules.size(); ++i) {
    const auto& r = v.rules[i];
    const std::string expected_name = "NR" + std::to_string(i + 1);
    if (r.name != expected_name)
      diags.push_back(error(r.line, "rule '" + r.name + "' should be named " + expected_name));
    const auto& subject = r.subject();
    if (!v.find_term(subject)) {
      diags.push_back(error(r.line, "undeclared term '" + subject + "'"));
      continue;
    }
    if (const auto* link = std::get_if<LinkScope>(&r.scope)) {
      if (!v.has_link(link->subject, link->object))
        diags.push_back(error(r.line, "undeclared fact type '" + link->subject +
                                          " is linked to " + link->object + "'"));
    }
    if (!v.has_attribute(subject, r.attribute))
      diags.push_back(error(r.line, "undeclared attribute '" + r.attribute + "' for term '" +
                                        subject + "'"));
    if (const auto* lit = std::get_if<NumericLiteral>(&r.rhs)) {
      if (!std::regex_match(lit->text, kNumberPattern))
        diags.push_back(error(r.line, "invalid numeric literal '" + lit->text + "'"));
    }
  }
  return diags;
}

namespace {

std::string article_for(std::string_view word) {
  if (!word.empty() && std::string_view("aeiouAEIOU").find(word.front()) != std::string_view::npos)
    return "an";
  return "a";
}

}  // namespace

std::string canonical_render(const Vocabulary& v) {
  std::string out;
  for (const auto& t : v.terms) out += "T:" + t.name + "\n";
  for (const auto& f : v.fact_types) {
    out += "F: " + f.subject + (f.kind == FactKind::Link ? " is linked to " : " has ") +
           f.object + "\n";
  }
  for (const auto& r : v.rules) {
    const auto& subject = r.subject();
    out += "NR: For " + article_for(subject) + " " + subject;
    if (const auto* link = std::get_if<LinkScope>(&r.scope))
      out += " that is linked to " + article_for(link->object) + " " + link->object;
    out += " it is obligatory that the " + r.attribute + " of the new " + subject + " are ";
    out += comparison_phrase(r.comparison);
    out += " ";
    if (const auto* lit = std::get_if<NumericLiteral>(&r.rhs))
      out += lit->text;
    else
      out += "the " + r.attribute + " of the old " + subject;
    out += ".\n";
  }
  return out;
}

Vocabulary parse_vocabulary_or_throw(std::string_view source) {
  auto result = parse_vocabulary(source);
  if (!result.ok()) throw DiagnosticError(std::move(result.diagnostics));
  return std::move(*result.vocabulary);
}

}  // namespace itsm
