#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "itsmrules/diagnostic.hpp"
#include "itsmrules/fines.hpp"
#include "itsmrules/harness.hpp"
#include "itsmrules/ontology.hpp"
#include "itsmrules/schema.hpp"
#include "itsmrules/service_tree.hpp"
#include "itsmrules/tree_format.hpp"
#include "itsmrules/trigger.hpp"
#include "itsmrules/vocabulary.hpp"

namespace itsm::cli {

namespace {

struct Failure {
  Diagnostics diagnostics;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{{error(0, "cannot read '" + path + "'")}};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw Failure{{error(0, "cannot write '" + path + "'")}};
}

Vocabulary read_vocabulary(const std::string& path) {
  auto parsed = parse_vocabulary(read_file(path));
  if (!parsed.ok()) {
    for (auto& d : parsed.diagnostics) d.message = path + ": " + d.message;
    throw Failure{std::move(parsed.diagnostics)};
  }
  return std::move(*parsed.vocabulary);
}

ServiceTree read_tree(const std::string& path) {
  auto loaded = load_tree(read_file(path));
  if (!loaded.ok()) throw Failure{std::move(loaded.diagnostics)};
  return std::move(*loaded.tree);
}

std::string money(double value) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << value;
  return os.str();
}

int compile_command(const std::string& input, const std::string& emit, const std::string& output,
                    std::ostream& out) {
  const auto vocab = read_vocabulary(input);
  std::string text;
  if (emit == "ddl")
    text = emit_ddl(derive_schema(vocab));
  else if (emit == "triggers")
    text = compile_triggers(vocab);
  else
    text = compile_all(vocab);
  write_output(output, text, out);
  return 0;
}

int validate_command(const std::string& path, std::ostream& out, std::ostream& err) {
  const auto diags = validate_tree(read_tree(path));
  for (const auto& d : diags) err << format_diagnostic(d) << "\n";
  if (has_errors(diags)) return 1;
  out << "ok\n";
  return 0;
}

int resolve_command(const std::string& path, const std::string& item_id, std::ostream& out) {
  const auto tree = read_tree(path);
  const auto* item = tree.find(item_id);
  if (!item) throw Failure{{error(0, "unknown item '" + item_id + "'")}};
  if (item->kind != CiKind::SVC && item->kind != CiKind::HOS)
    throw Failure{{error(0, item_id + " is not a service or host")}};
  for (const auto& o : occurrences(tree, item_id)) {
    const auto sla = effective_sla(tree, o);
    const auto mtc = accumulated_mtc(tree, o);
    out << format_path(o) << " sla=";
    switch (sla.status) {
      case SlaResolution::Status::None: out << "none"; break;
      case SlaResolution::Status::Resolved: out << sla.sla_id; break;
      case SlaResolution::Status::PriorityTie: {
        out << "PRIORITY-TIE(";
        for (std::size_t i = 0; i < sla.tied.size(); ++i) out << (i ? "," : "") << sla.tied[i];
        out << ")";
        break;
      }
    }
    out << " mtc=";
    if (mtc.mtcs.empty()) out << "-";
    std::size_t i = 0;
    for (const auto& m : mtc.mtcs) out << (i++ ? "," : "") << m;
    out << " liability=" << mtc.total_liability.str() << "\n";
  }
  return 0;
}

int analyze_command(const std::string& path, const std::string& forecast_path,
                    std::ostream& out) {
  const auto tree = read_tree(path);
  std::optional<ForecastDocument> forecast;
  if (!forecast_path.empty()) {
    try {
      forecast = load_forecast(read_file(forecast_path));
    } catch (const DiagnosticError& e) {
      throw Failure{e.diagnostics()};
    }
  }

  const auto diags = validate_tree(tree);
  out << "priority ties: " << diags.size() << "\n";
  for (const auto& d : diags) out << "  " << d.message << "\n";

  const auto redundant = find_redundant_mtcs(tree);
  out << "redundant MTCs: " << redundant.size() << "\n";
  for (const auto& r : redundant) out << "  " << r.mtc_id << ": " << r.reason << "\n";

  if (!forecast) return 0;
  out << "optimal SLAs (horizon " << forecast->horizon_years << " years):\n";
  for (const auto& item : tree.items()) {
    if (item.kind != CiKind::SVC && item.kind != CiKind::HOS) continue;
    std::set<std::string> ids;
    for (const auto& o : occurrences(tree, item.id))
      for (const auto& id : o.path)
        for (const auto& s : tree.sla_children(id)) ids.insert(s);
    if (ids.empty()) continue;
    std::vector<SlaCandidate> candidates;
    for (const auto& id : ids) candidates.emplace_back(id, *tree.at(id).sla);
    const auto best = optimal_sla(candidates, forecast->forecast, forecast->horizon_years);
    out << "  " << item.id << ": " << best << " (";
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out << (i ? ", " : "") << candidates[i].first << " "
          << money(expected_cost(candidates[i].second, forecast->forecast,
                                 forecast->horizon_years));
    }
    out << ")\n";
  }
  return 0;
}

int export_command(const std::string& path, const std::string& format, const std::string& output,
                   std::ostream& out) {
  const auto tree = read_tree(path);
  write_output(output, format == "dot" ? to_dot(tree) : render_triples(to_triples(tree)), out);
  return 0;
}

int run_command(const std::string& vocab_path, const std::string& scenario_path,
                std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = load_scenario(read_file(scenario_path));
  } catch (const DiagnosticError& e) {
    throw Failure{e.diagnostics()};
  }
  scenario.vocabulary_source = read_file(vocab_path);
  const auto result = run_scenario(scenario);
  for (const auto& o : result.outcomes) out << format_outcome(o) << "\n";
  for (const auto& d : result.diagnostics) err << format_diagnostic(d) << "\n";
  return result.ok() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured-English business rules compiler and ITSM service tree toolkit",
               "itsmrules"};
  app.require_subcommand(1, 1);

  std::string input, emit = "all", output;
  auto* compile = app.add_subcommand("compile", "Compile a .sbvr vocabulary to SQL");
  compile->add_option("input", input, "Structured-English source")->required();
  compile->add_option("--emit", emit, "ddl, triggers or all")
      ->check(CLI::IsMember({"ddl", "triggers", "all"}));
  compile->add_option("-o,--output", output, "Output file (default stdout)");

  auto* tree = app.add_subcommand("tree", "Service tree queries");
  tree->require_subcommand(1, 1);
  std::string tree_file, item_id, forecast_file, format;
  auto* validate = tree->add_subcommand("validate", "Check structure and SLA priorities");
  validate->add_option("tree", tree_file, "Tree document")->required();
  auto* resolve = tree->add_subcommand("resolve", "Effective SLA and MTCs per occurrence");
  resolve->add_option("tree", tree_file, "Tree document")->required();
  resolve->add_option("--item", item_id, "Service or host id")->required();
  auto* analyze = tree->add_subcommand("analyze", "Priority ties, redundant MTCs, optimal SLAs");
  analyze->add_option("tree", tree_file, "Tree document")->required();
  analyze->add_option("--forecast", forecast_file, "Availability forecast document");
  auto* exp = tree->add_subcommand("export", "Instance-expanded ontological view");
  exp->add_option("tree", tree_file, "Tree document")->required();
  exp->add_option("--format", format, "dot or triples")
      ->required()
      ->check(CLI::IsMember({"dot", "triples"}));
  exp->add_option("-o,--output", output, "Output file (default stdout)");

  std::string vocab_file, scenario_file;
  auto* run_cmd = app.add_subcommand("run", "Execute a scenario against compiled triggers");
  run_cmd->add_option("vocabulary", vocab_file, "Structured-English source")->required();
  run_cmd->add_option("scenario", scenario_file, "Scenario document")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*compile) return compile_command(input, emit, output, out);
    if (*validate) return validate_command(tree_file, out, err);
    if (*resolve) return resolve_command(tree_file, item_id, out);
    if (*analyze) return analyze_command(tree_file, forecast_file, out);
    if (*exp) return export_command(tree_file, format, output, out);
    if (*run_cmd) return run_command(vocab_file, scenario_file, out, err);
  } catch (const Failure& f) {
    for (const auto& d : f.diagnostics) err << format_diagnostic(d) << "\n";
    return 1;
  } catch (const DiagnosticError& e) {
    for (const auto& d : e.diagnostics()) err << format_diagnostic(d) << "\n";
    return 1;
  }
  return 2;
}

}  // namespace itsm::cli
