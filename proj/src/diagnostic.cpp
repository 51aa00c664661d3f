#include "itsmrules/diagnostic.hpp"

namespace itsm {

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::Error ? "error" : "warning";
  if (d.line > 0) out += " " + std::to_string(d.line);
  out += " ";
  out += d.message;
  return out;
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
  return os << format_diagnostic(d);
}

DiagnosticError::DiagnosticError(Diagnostics diags) : diags_(std::move(diags)) {
  for (const auto& d : diags_) {
    if (!what_.empty()) what_ += "\n";
    what_ += format_diagnostic(d);
  }
}

}  // namespace itsm
