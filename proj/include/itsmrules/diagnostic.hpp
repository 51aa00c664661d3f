#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace itsm {

enum class Severity { Error, Warning };

/// A message tied to an input line. `line` is 1-based; 0 means the
/// diagnostic is not associated with a particular line.
struct Diagnostic {
  Severity severity = Severity::Error;
  int line = 0;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline Diagnostic error(int line, std::string message) {
  return {Severity::Error, line, std::move(message)};
}

inline bool has_errors(const Diagnostics& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

/// `<severity> <line?> <message>`, the form printed by the command-line tool.
std::string format_diagnostic(const Diagnostic& d);

std::ostream& operator<<(std::ostream& os, const Diagnostic& d);

/// Thrown by operations whose contract has a single error result.
class DiagnosticError : public std::exception {
 public:
  explicit DiagnosticError(Diagnostics diags);
  const Diagnostics& diagnostics() const noexcept { return diags_; }
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  Diagnostics diags_;
  std::string what_;
};

}  // namespace itsm
