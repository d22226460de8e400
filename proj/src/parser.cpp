// Copyright 2026 The Migrator Authors
// SPDX-License-Identifier: Apache-2.0

#include "migrator/parser.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "migrator/validate.hpp"

namespace migrator {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Ident, Int, String, Hex, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

const std::set<std::string, std::less<>> kKeywords = {"table", "int", "str",  "bin", "pk",   "fk",   "update", "query",
                                                     "ins",   "del", "upd",  "proj", "sel", "join", "on",   "in"};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      tok.kind = Tok::Ident;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
      std::size_t j = i + 2;
      while (j < text.size() && std::isxdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Tok::Hex;
      tok.text = std::string(text.substr(i + 2, j - i - 2));
      if (tok.text.size() % 2 != 0) throw ParseError("odd number of hex digits", line, col);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.kind = Tok::Int;
      tok.text = std::string(text.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      tok.kind = Tok::String;
      advance();
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '"') {
          advance();
          closed = true;
          break;
        }
        if (d == '\n') break;
        if (d == '\\') {
          if (i + 1 >= text.size()) break;
          char e = text[i + 1];
          if (e == 'n')
            tok.text += '\n';
          else if (e == '"' || e == '\\')
            tok.text += e;
          else
            throw ParseError(std::string("unknown escape \\") + e, line, col);
          advance(2);
          continue;
        }
        tok.text += d;
        advance();
      }
      if (!closed) throw ParseError("unterminated string", tok.line, tok.column);
    } else {
      static const char* kTwo[] = {"<>", "<=", ">=", "&&", "||"};
      tok.kind = Tok::Punct;
      for (const char* p : kTwo) {
        if (text.substr(i, 2) == p) tok.text = p;
      }
      if (tok.text.empty()) {
        if (std::string_view("{}()[],:;.=<>!-").find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        tok.text = std::string(1, c);
      }
      advance(tok.text.size());
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

ValueType parse_type_name(const Token& tok) {
  if (tok.kind == Tok::Ident) {
    if (tok.text == "int") return ValueType::Int;
    if (tok.text == "str") return ValueType::Str;
    if (tok.text == "bin") return ValueType::Bin;
  }
  throw ParseError("expected type (int, str, bin), found '" + tok.text + "'", tok.line, tok.column);
}

std::optional<int> uid_slot(const std::string& ident) {
  if (ident.size() <= 3 || ident.compare(0, 3, "uid") != 0) return std::nullopt;
  for (std::size_t k = 3; k < ident.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(ident[k]))) return std::nullopt;
  return std::stoi(ident.substr(3));
}

std::vector<std::uint8_t> decode_hex(const std::string& hex) {
  std::vector<std::uint8_t> out;
  for (std::size_t k = 0; k + 1 < hex.size(); k += 2)
    out.push_back(static_cast<std::uint8_t>(std::stoi(hex.substr(k, 2), nullptr, 16)));
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Schema* schema) : toks_(lex(text)), schema_(schema) {}

  Schema schema() {
    std::vector<Table> tables;
    std::vector<std::pair<const Token, std::pair<std::size_t, std::size_t>>> fks;
    while (!at_end()) {
      expect_keyword("table");
      Token name = expect_ident();
      for (const auto& t : tables)
        if (t.name == name.text) throw error_at(name, "duplicate table " + name.text);
      Table table{name.text, {}};
      expect("{");
      do {
        Token attr = expect_ident();
        if (table.find(attr.text)) throw error_at(attr, "duplicate attribute " + attr.text);
        expect(":");
        Attribute a{table.name, attr.text, parse_type_name(next()), KeyKind::Plain, {}};
        if (accept("[")) {
          Token key = next();
          if (key.kind == Tok::Ident && key.text == "pk") {
            if (table.primary_key()) throw error_at(key, "more than one primary key in " + table.name);
            a.key = KeyKind::PrimaryKey;
          } else if (key.kind == Tok::Ident && key.text == "fk") {
            a.key = KeyKind::ForeignKey;
            a.references = expect_ident().text;
            fks.push_back({key, {tables.size(), table.attributes.size()}});
          } else {
            throw error_at(key, "expected pk or fk");
          }
          expect("]");
        }
        table.attributes.push_back(std::move(a));
      } while (accept(","));
      expect("}");
      tables.push_back(std::move(table));
    }
    Schema result(tables);
    for (const auto& [tok, where] : fks) {
      const Attribute& a = tables[where.first].attributes[where.second];
      const Table* ref = result.find_table(a.references);
      if (!ref) throw error_at(tok, "foreign key references unknown table " + a.references);
      const Attribute* pk = ref->primary_key();
      if (!pk) throw error_at(tok, "foreign key target " + a.references + " has no primary key");
      if (pk->type != a.type) throw error_at(tok, "foreign key type differs from " + ref->name + "." + pk->name);
    }
    return result;
  }

  Program program() {
    Program prog;
    while (!at_end()) prog.functions.push_back(function());
    return prog;
  }

 private:
  using Scope = std::vector<QualifiedAttr>;

  // -- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  static ParseError error_at(const Token& tok, const std::string& message) {
    return ParseError(message, tok.line, tok.column);
  }
  bool is_punct(const char* p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool is_keyword(const char* k) const { return peek().kind == Tok::Ident && peek().text == k; }
  bool accept(const char* p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect(const char* p) {
    if (!accept(p)) {
      const Token& t = peek();
      throw error_at(t, std::string("expected '") + p + "', found '" + describe(t) + "'");
    }
  }
  void expect_keyword(const char* k) {
    if (!is_keyword(k)) throw error_at(peek(), std::string("expected '") + k + "', found '" + describe(peek()) + "'");
    next();
  }
  Token expect_ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text))
      throw error_at(t, "expected identifier, found '" + describe(t) + "'");
    return next();
  }
  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : t.text; }

  // Index just past the next top-level ',' (or the closing bracket) starting
  // at the current position, without consuming anything.
  std::size_t skip_argument() const {
    int depth = 0;
    for (std::size_t k = pos_; k < toks_.size(); ++k) {
      const Token& t = toks_[k];
      if (t.kind == Tok::End) break;
      if (t.kind != Tok::Punct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
      if (t.text == ")" || t.text == "]" || t.text == "}") {
        if (depth == 0) return k;
        --depth;
      }
      if (t.text == "," && depth == 0) return k;
    }
    throw error_at(peek(), "unterminated argument list");
  }

  // -- functions -----------------------------------------------------------

  Function function() {
    Function fn;
    Token kind = next();
    if (kind.kind == Tok::Ident && kind.text == "update")
      fn.kind = FunctionKind::Update;
    else if (kind.kind == Tok::Ident && kind.text == "query")
      fn.kind = FunctionKind::Query;
    else
      throw error_at(kind, "expected 'update' or 'query', found '" + describe(kind) + "'");
    fn.name = expect_ident().text;
    expect("(");
    if (!is_punct(")")) {
      do {
        Token p = expect_ident();
        if (uid_slot(p.text)) throw error_at(p, "parameter name " + p.text + " is reserved for fresh uids");
        expect(":");
        fn.params.push_back(Parameter{p.text, parse_type_name(next())});
      } while (accept(","));
    }
    expect(")");
    params_ = &fn.params;
    expect("{");
    while (!accept("}")) {
      if (at_end()) throw error_at(peek(), "unterminated function body");
      fn.body.push_back(statement());
    }
    params_ = nullptr;
    return fn;
  }

  bool is_param(const std::string& name) const {
    if (!params_) return false;
    for (const auto& p : *params_)
      if (p.name == name) return true;
    return false;
  }

  Statement statement() {
    if (is_keyword("ins")) {
      next();
      expect("(");
      auto [join, scope] = join_expr();
      expect(",");
      expect("{");
      InsertStmt ins{std::move(join), {}};
      if (!is_punct("}")) {
        do {
          QualifiedAttr attr = attr_ref(scope);
          expect(":");
          ins.row.emplace_back(std::move(attr), term());
        } while (accept(","));
      }
      expect("}");
      expect(")");
      expect(";");
      return ins;
    }
    if (is_keyword("del")) {
      next();
      expect("(");
      Token open = peek();
      expect("[");
      std::vector<std::string> tables;
      if (is_punct("]")) throw error_at(open, "non-empty subset required");
      do {
        tables.push_back(expect_ident().text);
      } while (accept(","));
      expect("]");
      expect(",");
      auto [join, scope] = join_expr();
      expect(",");
      Predicate pred = predicate(scope);
      DeleteStmt del{std::move(tables), std::move(join), std::move(pred)};
      expect(")");
      expect(";");
      return del;
    }
    if (is_keyword("upd")) {
      next();
      expect("(");
      auto [join, scope] = join_expr();
      expect(",");
      Predicate pred = predicate(scope);
      expect(",");
      QualifiedAttr attr = attr_ref(scope);
      expect(",");
      Term value = term();
      expect(")");
      expect(";");
      return UpdateStmt{std::move(join), std::move(pred), std::move(attr), std::move(value)};
    }
    auto [q, scope] = query();
    expect(";");
    return QueryStmt{std::move(q)};
  }

  // -- joins and queries ---------------------------------------------------

  std::pair<JoinChain, Scope> join_primary() {
    if (accept("(")) {
      auto result = join_expr();
      expect(")");
      return result;
    }
    Token name = expect_ident();
    const Table* t = schema_->find_table(name.text);
    if (!t) throw error_at(name, "unknown table " + name.text);
    Scope scope;
    for (const auto& a : t->attributes) scope.push_back(a.qualified());
    return {JoinChain::table(t->name), std::move(scope)};
  }

  static bool in_scope(const Scope& scope, const QualifiedAttr& a) {
    return std::find(scope.begin(), scope.end(), a) != scope.end();
  }

  std::pair<JoinChain, Scope> join_expr() {
    auto [left, left_scope] = join_primary();
    while (is_keyword("join")) {
      Token join_tok = next();
      auto [right, right_scope] = join_primary();
      QualifiedAttr la, ra;
      if (is_keyword("on")) {
        next();
        Scope both = left_scope;
        both.insert(both.end(), right_scope.begin(), right_scope.end());
        Token at = peek();
        la = attr_ref(both);
        expect("=");
        ra = attr_ref(both);
        if (in_scope(right_scope, la) && in_scope(left_scope, ra)) std::swap(la, ra);
        if (!in_scope(left_scope, la) || !in_scope(right_scope, ra))
          throw error_at(at, "join condition must relate the left and right operands");
      } else {
        std::vector<std::pair<QualifiedAttr, QualifiedAttr>> shared;
        for (const auto& l : left_scope)
          for (const auto& r : right_scope)
            if (l.name == r.name) shared.emplace_back(l, r);
        if (shared.size() != 1)
          throw error_at(join_tok, shared.empty() ? "natural join without a shared column"
                                                  : "natural join on several columns; use 'on'");
        la = shared.front().first;
        ra = shared.front().second;
      }
      left = JoinChain::join(std::move(left), std::move(la), std::move(right), std::move(ra));
      left_scope.insert(left_scope.end(), right_scope.begin(), right_scope.end());
    }
    return {std::move(left), std::move(left_scope)};
  }

  std::pair<Query, Scope> query() {
    if (is_keyword("proj") || is_keyword("sel")) {
      bool proj = is_keyword("proj");
      next();
      expect("(");
      std::size_t arg_start = pos_;
      pos_ = skip_argument();
      expect(",");
      auto [source, scope] = query();
      expect(")");
      std::size_t end = pos_;
      pos_ = arg_start;
      std::optional<std::pair<Query, Scope>> result;
      if (proj) {
        expect("[");
        std::vector<QualifiedAttr> attrs;
        do {
          attrs.push_back(attr_ref(scope));
        } while (accept(","));
        expect("]");
        result.emplace(Query::project(attrs, std::move(source)), attrs);
      } else {
        Predicate pred = predicate(scope);
        result.emplace(Query::select(std::move(pred), std::move(source)), std::move(scope));
      }
      expect(",");
      pos_ = end;
      return std::move(*result);
    }
    auto [join, scope] = join_expr();
    return {Query::from(std::move(join)), std::move(scope)};
  }

  QualifiedAttr attr_ref(const Scope& scope) {
    Token first = expect_ident();
    if (accept(".")) {
      Token second = expect_ident();
      QualifiedAttr a{first.text, second.text};
      if (!in_scope(scope, a)) throw error_at(first, "unknown attribute " + a.to_string());
      return a;
    }
    std::optional<QualifiedAttr> found;
    for (const auto& a : scope) {
      if (a.name != first.text) continue;
      if (found && *found != a) throw error_at(first, "ambiguous attribute " + first.text);
      found = a;
    }
    if (!found) throw error_at(first, "unknown attribute " + first.text);
    return *found;
  }

  // -- predicates and terms ------------------------------------------------

  Predicate predicate(const Scope& scope) {
    Predicate lhs = conjunction(scope);
    while (accept("||")) lhs = make_or(std::move(lhs), conjunction(scope));
    return lhs;
  }

  Predicate conjunction(const Scope& scope) {
    Predicate lhs = unary(scope);
    while (accept("&&")) lhs = make_and(std::move(lhs), unary(scope));
    return lhs;
  }

  Predicate unary(const Scope& scope) {
    if (accept("!")) return make_not(unary(scope));
    if (accept("(")) {
      Predicate inner = predicate(scope);
      expect(")");
      return inner;
    }
    QualifiedAttr lhs = attr_ref(scope);
    if (is_keyword("in")) {
      next();
      expect("(");
      auto [sub, sub_scope] = query();
      expect(")");
      return Predicate{Predicate::In{std::move(lhs), std::move(sub)}};
    }
    Token op_tok = next();
    static const std::map<std::string, CmpOp> kOps = {{"=", CmpOp::Eq},  {"<>", CmpOp::Ne}, {"<", CmpOp::Lt},
                                                      {"<=", CmpOp::Le}, {">", CmpOp::Gt},  {">=", CmpOp::Ge}};
    auto op = kOps.find(op_tok.text);
    if (op_tok.kind != Tok::Punct || op == kOps.end())
      throw error_at(op_tok, "expected comparison operator, found '" + describe(op_tok) + "'");
    return make_cmp(std::move(lhs), op->second, operand(scope));
  }

  Operand operand(const Scope& scope) {
    const Token& t = peek();
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      if (!is_punct(".", 1) && is_param(t.text)) return Param{next().text};
      return attr_ref(scope);
    }
    return literal();
  }

  Value literal() {
    Token t = next();
    bool negative = false;
    if (t.kind == Tok::Punct && t.text == "-") {
      negative = true;
      t = next();
      if (t.kind != Tok::Int) throw error_at(t, "expected integer after '-'");
    }
    switch (t.kind) {
      case Tok::Int:
        try {
          return Value::integer(negative ? -std::stoll(t.text) : std::stoll(t.text));
        } catch (const std::out_of_range&) {
          throw error_at(t, "integer literal out of range");
        }
      case Tok::String:
        return Value::string(t.text);
      case Tok::Hex:
        return Value::bytes(decode_hex(t.text));
      default:
        throw error_at(t, "expected literal, found '" + describe(t) + "'");
    }
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      Token id = next();
      if (auto slot = uid_slot(id.text)) return FreshUid{*slot};
      if (!is_param(id.text)) throw error_at(id, "unknown parameter " + id.text);
      return Param{id.text};
    }
    return literal();
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Schema* schema_;
  const std::vector<Parameter>* params_ = nullptr;
};

std::string type_text(ValueType t) { return std::string(to_string(t)); }

}  // namespace

Schema parse_schema(std::string_view text) { return Parser(text, nullptr).schema(); }

Program parse_program(std::string_view text, const Schema& schema) {
  Program program = Parser(text, &schema).program();
  auto diagnostics = validate_program(program, schema);
  if (!diagnostics.empty()) throw ValidationError(std::move(diagnostics));
  return program;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& term) {
  if (const auto* p = std::get_if<Param>(&term)) return p->name;
  if (const auto* v = std::get_if<Value>(&term)) return v->to_string();
  return "uid" + std::to_string(std::get<FreshUid>(term).slot);
}

std::string to_string(const Predicate& pred) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Predicate::Cmp>) {
          std::string rhs;
          if (const auto* a = std::get_if<QualifiedAttr>(&node.rhs))
            rhs = a->to_string();
          else if (const auto* v = std::get_if<Value>(&node.rhs))
            rhs = v->to_string();
          else
            rhs = std::get<Param>(node.rhs).name;
          return node.lhs.to_string() + " " + std::string(to_string(node.op)) + " " + rhs;
        } else if constexpr (std::is_same_v<T, Predicate::In>) {
          return node.attr.to_string() + " in (" + to_string(*node.query) + ")";
        } else if constexpr (std::is_same_v<T, Predicate::And>) {
          return "(" + to_string(*node.lhs) + " && " + to_string(*node.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Predicate::Or>) {
          return "(" + to_string(*node.lhs) + " || " + to_string(*node.rhs) + ")";
        } else {
          return "!" + to_string(*node.operand);
        }
      },
      pred.node);
}

std::string to_string(const Query& query) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Query::Project>) {
          std::string attrs;
          for (const auto& a : node.attrs) attrs += (attrs.empty() ? "" : ", ") + a.to_string();
          return "proj([" + attrs + "], " + to_string(*node.source) + ")";
        } else if constexpr (std::is_same_v<T, Query::Select>) {
          return "sel(" + to_string(node.pred) + ", " + to_string(*node.source) + ")";
        } else {
          return to_string(node.join);
        }
      },
      query.node);
}

std::string to_string(const Statement& stmt) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, InsertStmt>) {
          std::string row;
          for (const auto& [attr, term] : s.row)
            row += (row.empty() ? "" : ", ") + attr.to_string() + ": " + to_string(term);
          return "ins(" + to_string(s.join) + ", {" + row + "});";
        } else if constexpr (std::is_same_v<T, DeleteStmt>) {
          std::string tables;
          for (const auto& t : s.tables) tables += (tables.empty() ? "" : ", ") + t;
          return "del([" + tables + "], " + to_string(s.join) + ", " + to_string(s.pred) + ");";
        } else if constexpr (std::is_same_v<T, UpdateStmt>) {
          return "upd(" + to_string(s.join) + ", " + to_string(s.pred) + ", " + s.attr.to_string() + ", " +
                 to_string(s.value) + ");";
        } else {
          return to_string(s.query) + ";";
        }
      },
      stmt);
}

std::string pretty_print(const Program& program) {
  std::ostringstream out;
  bool first = true;
  for (const auto& fn : program.functions) {
    if (!first) out << "\n";
    first = false;
    out << (fn.kind == FunctionKind::Update ? "update " : "query ") << fn.name << "(";
    for (std::size_t i = 0; i < fn.params.size(); ++i)
      out << (i ? ", " : "") << fn.params[i].name << ": " << type_text(fn.params[i].type);
    out << ") {\n";
    for (const auto& stmt : fn.body) out << "  " << to_string(stmt) << "\n";
    out << "}\n";
  }
  return out.str();
}

std::string pretty_print(const Schema& schema) {
  std::ostringstream out;
  for (const auto& t : schema.tables()) {
    out << "table " << t.name << " {\n";
    for (std::size_t i = 0; i < t.attributes.size(); ++i) {
      const auto& a = t.attributes[i];
      out << "  " << a.name << ": " << type_text(a.type);
      if (a.key == KeyKind::PrimaryKey) out << " [pk]";
      if (a.key == KeyKind::ForeignKey) out << " [fk " << a.references << "]";
      out << (i + 1 < t.attributes.size() ? ",\n" : "\n");
    }
    out << "}\n";
  }
  return out.str();
}

SourceFile read_source(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  SourceFile file{path, buf.str(), SourceKind::ProgramFile};
  if (path.extension() == ".schema") file.kind = SourceKind::SchemaFile;
  return file;
}

}  // namespace migrator
