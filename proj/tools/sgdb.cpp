// Command-line front end: REPL, one-shot statements, scripts, CSV transfer
// and the differential self-check.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sgdb/csv.hpp"
#include "sgdb/difftest.hpp"
#include "sgdb/shell.hpp"

namespace {

int report(const sgdb::Error& e) {
  std::cerr << e.what() << "\n";
  return sgdb::kExitEval;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgdb - a star-graph relational store"};
  app.require_subcommand(1);

  std::string db_dir;
  app.add_option("--db", db_dir, "Database directory")->envname("SGDB_DB");

  std::string format = "table";
  std::string null_text = "NULL";
  auto add_render_options = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json"}))
        ->capture_default_str();
    sub->add_option("--null", null_text, "Text shown for null cells in tables")->capture_default_str();
  };

  auto* repl = app.add_subcommand("repl", "Interactive session");
  add_render_options(repl);

  std::string statement;
  auto* exec = app.add_subcommand("exec", "Run statements given on the command line");
  exec->add_option("-e,--execute", statement, "Statement text")->required();
  add_render_options(exec);

  std::string script_path;
  auto* run = app.add_subcommand("run", "Run a script file");
  run->add_option("script", script_path, "Script (.sgq)")->required()->check(CLI::ExistingFile);
  add_render_options(run);

  std::string table, csv_path, pk;
  auto* import = app.add_subcommand("import", "Create a table from a CSV file");
  import->add_option("table", table)->required();
  import->add_option("file", csv_path)->required()->check(CLI::ExistingFile);
  import->add_option("--pk", pk, "Primary-key column")->required();

  auto* exprt = app.add_subcommand("export", "Write a table as CSV");
  exprt->add_option("table", table)->required();
  exprt->add_option("file", csv_path)->required();

  std::uint64_t seeds = 1000;
  std::uint64_t first_seed = 0;
  std::vector<std::string> op_names;
  auto* difftest = app.add_subcommand("difftest", "Compare the operators against the reference oracle");
  difftest->add_option("--seeds", seeds, "Number of seeds")->capture_default_str();
  difftest->add_option("--first-seed", first_seed, "First seed")->capture_default_str();
  difftest->add_option("--ops", op_names, "Operators to check (default: all)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? sgdb::kExitOk : sgdb::kExitUsage;
  }

  sgdb::RenderSpec spec;
  spec.format = format == "csv" ? sgdb::RenderFormat::Csv : format == "json" ? sgdb::RenderFormat::Json
                                                                              : sgdb::RenderFormat::Table;
  spec.null_text = null_text;

  if (*difftest) {
    std::vector<sgdb::OpName> ops;
    for (const auto& name : op_names) {
      auto op = sgdb::op_from_string(name);
      if (!op) {
        std::cerr << "unknown operator '" << name << "'\n";
        return sgdb::kExitUsage;
      }
      ops.push_back(*op);
    }
    if (ops.empty()) ops = sgdb::all_ops();
    auto start = std::chrono::steady_clock::now();
    auto reports = sgdb::differential_check(sgdb::seed_range(first_seed, seeds), ops);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    for (const auto& r : reports) std::cout << sgdb::format_report(r);
    std::cout << "difftest: " << seeds << " seeds x " << ops.size() << " operators, " << reports.size()
              << " divergences (" << ms.count() << " ms)\n";
    return reports.empty() ? sgdb::kExitOk : sgdb::kExitEval;
  }

  if (db_dir.empty()) {
    std::cerr << "--db is required (or set SGDB_DB)\n";
    return sgdb::kExitUsage;
  }
  try {
    sgdb::Database db(db_dir);
    if (*repl) return sgdb::run_repl(db, std::cin, std::cout, std::cerr, spec);
    if (*exec) return sgdb::execute_script(db, statement, spec, std::cout, std::cerr);
    if (*run) {
      std::ifstream in(script_path, std::ios::binary);
      std::stringstream text;
      text << in.rdbuf();
      return sgdb::execute_script(db, text.str(), spec, std::cout, std::cerr);
    }
    if (*import) {
      auto n = sgdb::import_csv(db, table, csv_path, pk);
      std::cout << "imported " << n << " rows into " << table << "\n";
      return sgdb::kExitOk;
    }
    if (*exprt) {
      auto n = sgdb::export_csv(db, table, csv_path);
      std::cout << "exported " << n << " rows from " << table << "\n";
      return sgdb::kExitOk;
    }
  } catch (const sgdb::Error& e) {
    return report(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sgdb::kExitEval;
  }
  return sgdb::kExitOk;
}
