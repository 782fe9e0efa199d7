#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "sgdb/evaluator.hpp"
#include "sgdb/parser.hpp"
#include "sgdb/render.hpp"

namespace sgdb {

enum ExitStatus : int { kExitOk = 0, kExitUsage = 1, kExitParse = 2, kExitEval = 3 };

/// The offending source line followed by a caret under `pos`.
inline std::string caret_excerpt(std::string_view text, SourcePos pos) {
  std::size_t begin = 0;
  for (int line = 1; line < pos.line && begin < text.size(); ++line) {
    auto nl = text.find('\n', begin);
    if (nl == std::string_view::npos) break;
    begin = nl + 1;
  }
  auto end = text.find('\n', begin);
  std::string_view line = text.substr(begin, end == std::string_view::npos ? text.size() - begin : end - begin);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

  std::string pad;
  int col = 1;
  for (std::size_t i = 0; i < line.size() && col < pos.column; ++col) {
    pad += line[i] == '\t' ? '\t' : ' ';
    i += std::max<std::size_t>(1, detail::utf8_sequence_length(line, i));
  }
  return "  " + std::string(line) + "\n  " + pad + "^\n";
}

inline void report_syntax_error(const SyntaxError& e, std::string_view text, std::ostream& err) {
  err << e.what() << "\n" << caret_excerpt(text, e.position());
}

inline void print_result(const EvalResult& r, const RenderSpec& spec, std::ostream& out) {
  if (const auto* rel = std::get_if<Relation>(&r)) {
    out << render(*rel, spec);
  } else {
    out << std::get<StatusResult>(r).message << "\n";
  }
}

/// Parses all of `text`, then evaluates the statements in order, stopping at
/// the first failure. Nothing runs if any part fails to parse.
inline int execute_script(const Database& db, std::string_view text, const RenderSpec& spec, std::ostream& out,
                          std::ostream& err) {
  std::vector<Statement> stmts;
  try {
    stmts = parse_script(text);
  } catch (const SyntaxError& e) {
    report_syntax_error(e, text, err);
    return kExitParse;
  }
  for (const auto& s : stmts) {
    try {
      print_result(evaluate(s, db), spec, out);
    } catch (const Error& e) {
      err << e.what() << "\n";
      return kExitEval;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitEval;
    }
  }
  return kExitOk;
}

namespace detail {

/// True when the parse failure could go away by reading more input: the
/// parser ran into the end, or a string literal is still open.
inline bool needs_more_input(std::string_view text) {
  try {
    parse_script(text);
    return false;
  } catch (const SyntaxError& e) {
    if (e.code() == ErrorCode::LexError) return e.detail() == "unterminated string";
    return e.position() == tokenize(text).back().pos;
  }
}

inline bool is_blank(std::string_view s) {
  if (s.find_first_not_of(" \t\r\n") == std::string_view::npos) return true;
  try {
    return tokenize(s).size() == 1;  // comments only
  } catch (const SyntaxError&) {
    return false;
  }
}

inline constexpr std::string_view kReplHelp =
    "Statements end with ';' (optional on a single complete line).\n"
    "  <table> | select f = v | project a, b | rename a -> b\n"
    "  <table> | ijoin|ljoin|rjoin|ojoin <table> on <field> | cross <table> as <field> | njoin <table>\n"
    "  create table t pk k fields k, a, b   drop table t   show tables\n"
    "  insert t { k: \"1\", a: \"x\" }   delete t key \"1\"\n"
    "Commands: .help  .format table|csv|json  .null <text>  .quit\n";

}  // namespace detail

/// Line-oriented read-eval-print loop. Buffered text runs as soon as it
/// parses, or fails for a reason more input cannot fix; an empty line forces
/// whatever is buffered to run. Errors never end the session.
inline int run_repl(const Database& db, std::istream& in, std::ostream& out, std::ostream& err,
                    RenderSpec spec = {}, bool prompts = true) {
  std::string buffer;
  std::string line;
  auto flush = [&] {
    if (!detail::is_blank(buffer)) execute_script(db, buffer, spec, out, err);
    buffer.clear();
  };

  while (true) {
    if (prompts) out << (buffer.empty() ? "sgdb> " : "  ...> ") << std::flush;
    if (!std::getline(in, line)) break;

    if (buffer.empty()) {
      std::string_view cmd = detail::trim(line);
      if (!cmd.empty() && cmd.front() == '.') {
        auto space = cmd.find(' ');
        std::string_view name = cmd.substr(0, space);
        std::string_view arg = space == std::string_view::npos ? std::string_view() : detail::trim(cmd.substr(space));
        if (name == ".quit" || name == ".exit") return kExitOk;
        if (name == ".help") {
          out << detail::kReplHelp;
        } else if (name == ".format" && (arg == "table" || arg == "csv" || arg == "json")) {
          spec.format = arg == "table" ? RenderFormat::Table : arg == "csv" ? RenderFormat::Csv : RenderFormat::Json;
        } else if (name == ".null") {
          spec.null_text = std::string(arg);
        } else {
          err << "unknown command " << cmd << " (try .help)\n";
        }
        continue;
      }
      if (detail::is_blank(line)) continue;
    }

    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      flush();
      continue;
    }
    buffer += line;
    buffer += '\n';
    if (!detail::needs_more_input(buffer)) flush();
  }
  flush();
  return kExitOk;
}

}  // namespace sgdb
