#pragma once

// Recursive-descent parser for the pipeline language:
//
//   script    := statement (";" statement)* ";"?
//   statement := query | create | drop | insert | delete | show
//   query     := IDENT ("|" step)*
//   step      := "select" IDENT "=" literal
//              | "project" ("*" | IDENT ("," IDENT)*)
//              | "rename" IDENT "->" IDENT
//              | ("ijoin"|"ljoin"|"rjoin"|"ojoin") IDENT "on" IDENT
//              | "cross" IDENT "as" IDENT
//              | "njoin" IDENT
//   create    := "create" "table" IDENT "pk" IDENT "fields" IDENT ("," IDENT)*
//   drop      := "drop" "table" IDENT
//   insert    := "insert" IDENT "{" IDENT ":" literal ("," IDENT ":" literal)* "}"
//   delete    := "delete" IDENT "key" literal
//   show      := "show" "tables"
//   literal   := STRING | bare word

#include <string>
#include <string_view>
#include <vector>

#include "sgdb/ast.hpp"
#include "sgdb/lexer.hpp"

namespace sgdb {

namespace detail {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : toks_(tokens) {
    if (toks_.empty() || toks_.back().kind != TokenKind::End)
      throw SyntaxError(ErrorCode::ParseError, {}, "token stream is not terminated", {"end of input"});
  }

  std::vector<Statement> script() {
    std::vector<Statement> out;
    if (peek().kind == TokenKind::End) return out;
    out.push_back(statement());
    while (accept(TokenKind::Semi)) {
      if (peek().kind == TokenKind::End) break;
      out.push_back(statement());
    }
    expect_end({"';'", "end of input"});
    return out;
  }

  Statement single() {
    Statement s = statement();
    accept(TokenKind::Semi);
    expect_end({"end of input"});
    return s;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  const Token& take() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    take();
    return true;
  }

  bool peek_keyword(std::string_view word) const {
    return peek().kind == TokenKind::Keyword && peek().text == word;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(ErrorCode::ParseError, t.pos, "unexpected " + found, std::move(expected));
  }

  void expect(TokenKind kind) {
    if (!accept(kind)) fail({std::string(to_string(kind))});
  }

  void expect_keyword(std::string_view word) {
    if (!peek_keyword(word)) fail({"'" + std::string(word) + "'"});
    take();
  }

  void expect_end(std::vector<std::string> expected) {
    if (peek().kind != TokenKind::End) fail(std::move(expected));
  }

  /// Identifiers may be bare, quoted, or a keyword spelled bare.
  std::string ident(std::string_view what) {
    const Token& t = peek();
    if (t.kind != TokenKind::Ident && t.kind != TokenKind::Keyword) fail({std::string(what)});
    return take().text;
  }

  std::string literal() {
    const Token& t = peek();
    if (t.kind != TokenKind::String && t.kind != TokenKind::Ident && t.kind != TokenKind::Keyword)
      fail({"string", "bare word"});
    return take().text;
  }

  std::vector<FieldName> ident_list(std::string_view what) {
    std::vector<FieldName> out{ident(what)};
    while (accept(TokenKind::Comma)) out.push_back(ident(what));
    return out;
  }

  Statement statement() {
    const Token& t = peek();
    if (t.kind == TokenKind::Keyword && (t.text == "create" || t.text == "drop" || t.text == "insert" ||
                                         t.text == "delete" || t.text == "show")) {
      if (t.text == "create") return create();
      if (t.text == "drop") {
        take();
        expect_keyword("table");
        return DropTableStmt{ident("table name")};
      }
      if (t.text == "insert") return insert();
      if (t.text == "delete") {
        take();
        DeleteStmt d;
        d.table = ident("table name");
        expect_keyword("key");
        d.key = literal();
        return d;
      }
      if (t.text == "show") {
        take();
        expect_keyword("tables");
        return ShowTablesStmt{};
      }
    }
    if (t.kind == TokenKind::Ident || t.kind == TokenKind::Keyword) return query();
    fail({"table name", "'create'", "'drop'", "'insert'", "'delete'", "'show'"});
  }

  QueryAst query() {
    QueryAst q;
    q.source = ident("table name");
    while (accept(TokenKind::Pipe)) q.steps.push_back(step());
    if (peek().kind != TokenKind::Semi && peek().kind != TokenKind::End) fail({"'|'", "';'", "end of input"});
    return q;
  }

  Step step() {
    static const std::vector<std::string> kSteps = {"'select'", "'project'", "'rename'", "'ijoin'", "'ljoin'",
                                                    "'rjoin'",  "'ojoin'",   "'cross'",  "'njoin'"};
    const Token& t = peek();
    if (t.kind != TokenKind::Keyword) fail(kSteps);
    const std::string word = t.text;
    if (word == "select") {
      take();
      SelectStep s;
      s.condition.field = ident("field name");
      expect(TokenKind::Equals);
      s.condition.value = literal();
      return s;
    }
    if (word == "project") {
      take();
      if (accept(TokenKind::Star)) return ProjectStep{AllColumns{}};
      const Token& first = peek();
      if (first.kind != TokenKind::Ident && first.kind != TokenKind::Keyword) fail({"'*'", "field name"});
      return ProjectStep{ident_list("field name")};
    }
    if (word == "rename") {
      take();
      RenameStep r;
      r.from = ident("field name");
      expect(TokenKind::Arrow);
      r.to = ident("field name");
      return r;
    }
    if (word == "ijoin" || word == "ljoin" || word == "rjoin" || word == "ojoin") {
      take();
      JoinStep j;
      j.kind = word == "ijoin" ? JoinKind::Inner
               : word == "ljoin" ? JoinKind::Left
               : word == "rjoin" ? JoinKind::Right
                                 : JoinKind::Outer;
      j.table = ident("table name");
      expect_keyword("on");
      j.key = ident("field name");
      return j;
    }
    if (word == "cross") {
      take();
      CrossStep c;
      c.table = ident("table name");
      expect_keyword("as");
      c.nest_field = ident("field name");
      return c;
    }
    if (word == "njoin") {
      take();
      return NaturalJoinStep{ident("table name")};
    }
    fail(kSteps);
  }

  CreateTableStmt create() {
    take();
    expect_keyword("table");
    CreateTableStmt c;
    c.table = ident("table name");
    expect_keyword("pk");
    c.primary_key = ident("field name");
    expect_keyword("fields");
    c.fields = ident_list("field name");
    return c;
  }

  InsertStmt insert() {
    take();
    InsertStmt ins;
    ins.table = ident("table name");
    expect(TokenKind::LBrace);
    do {
      const SourcePos at = peek().pos;
      FieldName f = ident("field name");
      expect(TokenKind::Colon);
      if (!ins.record.emplace(f, Value(literal())).second)
        throw SyntaxError(ErrorCode::ParseError, at, "duplicate field '" + f + "'", {"a new field name"});
    } while (accept(TokenKind::Comma));
    expect(TokenKind::RBrace);
    return ins;
  }

  const std::vector<Token>& toks_;
  std::size_t i_ = 0;
};

}  // namespace detail

/// Parses exactly one statement (an optional trailing ';' is allowed).
inline Statement parse(const std::vector<Token>& tokens) { return detail::Parser(tokens).single(); }

inline std::vector<Statement> parse_script(const std::vector<Token>& tokens) {
  return detail::Parser(tokens).script();
}

inline Statement parse(std::string_view text) { return parse(tokenize(text)); }
inline std::vector<Statement> parse_script(std::string_view text) { return parse_script(tokenize(text)); }

}  // namespace sgdb
