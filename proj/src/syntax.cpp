#include "cslcheck/syntax.hpp"

#include <cctype>
#include <sstream>

namespace csl {

// ---------------------------------------------------------------- SizePoly

SizePoly::SizePoly(std::vector<std::uint64_t> coeffs) : coeffs_(std::move(coeffs)) {
  while (coeffs_.size() > 1 && coeffs_.back() == 0) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(0);
}

std::uint64_t SizePoly::eval(std::uint64_t n) const {
  std::uint64_t acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * n + *it;
  return acc;
}

SizePoly SizePoly::operator+(const SizePoly& o) const {
  std::vector<std::uint64_t> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
  return SizePoly(std::move(c));
}

std::optional<SizePoly> SizePoly::minus(const SizePoly& o) const {
  std::vector<std::uint64_t> c = coeffs_;
  if (o.coeffs_.size() > c.size()) c.resize(o.coeffs_.size(), 0);
  for (size_t i = 0; i < o.coeffs_.size(); ++i) {
    if (c[i] < o.coeffs_[i]) return std::nullopt;
    c[i] -= o.coeffs_[i];
  }
  return SizePoly(std::move(c));
}

std::string SizePoly::str() const {
  std::string out;
  for (size_t d = coeffs_.size(); d-- > 0;) {
    std::uint64_t c = coeffs_[d];
    if (c == 0) continue;
    if (!out.empty()) out += "+";
    if (d == 0) {
      out += std::to_string(c);
    } else {
      if (c != 1) out += std::to_string(c);
      out += "n";
      if (d > 1) out += "^" + std::to_string(d);
    }
  }
  return out.empty() ? "0" : out;
}

std::uint64_t poly_eval(const SizePoly& p, std::uint64_t n) { return p.eval(n); }

std::string Type::str() const { return is_bool() ? "Bool" : "Str[" + size.str() + "]"; }

std::string env_str(const Env& env) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : env) {
    if (!first) out += ", ";
    first = false;
    out += v + ": " + t.str();
  }
  return out + "}";
}

// ------------------------------------------------------------- SymbolTable

namespace {
const std::set<std::string> kBuiltins = {"rnd", "head", "tail", "xor", "concat", "setzero", "not", "0", "1"};
const std::set<std::string> kReserved = {"skip", "if", "then", "else", "end", "decl", "det", "rand",
                                         "T", "F", "U", "Bool", "Str"};
}  // namespace

bool SymbolTable::is_builtin(const std::string& name) { return kBuiltins.count(name) > 0; }

void SymbolTable::declare(const FuncSym& f) {
  if (is_builtin(f.name)) throw std::invalid_argument("cannot redeclare built-in symbol " + f.name);
  auto it = decls_.find(f.name);
  if (it != decls_.end()) {
    const FuncSym& o = it->second;
    if (o.args == f.args && o.result == f.result && o.kind == f.kind) return;
    throw std::invalid_argument("conflicting declaration of symbol " + f.name);
  }
  decls_.emplace(f.name, f);
}

const FuncSym* SymbolTable::find(const std::string& name) const {
  auto it = decls_.find(name);
  return it == decls_.end() ? nullptr : &it->second;
}

std::vector<Program> flatten_seq(const Program& p) {
  if (p.kind != Program::Kind::Seq) return {p};
  auto a = flatten_seq(p.kids[0]);
  auto b = flatten_seq(p.kids[1]);
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Formula with_ann(Formula f, Env a) {
  f.ann = std::move(a);
  return f;
}

// ------------------------------------------------------------------- Lexer

namespace {

struct Token {
  enum class Kind { Ident, Number, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> lex(const std::string& src) {
  static const std::vector<std::string> syms = {":=", "->", "~~", "==", ".=", "/\\", ";", ",", ":", "(", ")",
                                                "{",  "}",  "[",  "]",  "*",  "+",   "^"};
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](size_t k) {
    for (size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Token::Kind::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::Number;
      t.text = src.substr(i, j - i);
      advance(j - i);
      out.push_back(t);
      continue;
    }
    bool matched = false;
    for (const auto& s : syms) {
      if (src.compare(i, s.size(), s) == 0) {
        t.kind = Token::Kind::Sym;
        t.text = s;
        advance(s.size());
        out.push_back(t);
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

// ------------------------------------------------------------------ Parser

struct RawFormula {
  Formula::Kind kind = Formula::Kind::Top;
  std::optional<Env> ann;
  std::vector<Expr> ops;
  std::vector<RawFormula> kids;
  int line = 0;
  int col = 0;
};

class Parser {
 public:
  Parser(const std::string& src, SymbolTable* syms) : toks_(lex(src)), syms_(syms) {}

  const Token& peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  bool is_sym(const std::string& s, size_t k = 0) const {
    return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
  }
  bool is_ident(const std::string& s, size_t k = 0) const {
    return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(msg, peek().line, peek().col); }
  std::string describe() const {
    if (at_end()) return "end of input";
    return "'" + peek().text + "'";
  }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "', got " + describe());
    ++pos_;
  }
  void expect_ident(const std::string& s) {
    if (!is_ident(s)) fail("expected '" + s + "', got " + describe());
    ++pos_;
  }
  std::string ident() {
    if (peek().kind != Token::Kind::Ident) fail("expected identifier, got " + describe());
    return toks_[pos_++].text;
  }
  std::uint64_t number() {
    if (peek().kind != Token::Kind::Number) fail("expected number, got " + describe());
    return std::stoull(toks_[pos_++].text);
  }
  void finish() {
    if (!at_end()) fail("unexpected trailing input " + describe());
  }

  std::string var_name() {
    if (peek().kind != Token::Kind::Ident) fail("expected variable, got " + describe());
    const std::string& v = peek().text;
    if (kReserved.count(v)) fail("reserved word '" + v + "' used as variable");
    if (syms_ && syms_->known(v)) fail("function symbol '" + v + "' used as variable");
    return toks_[pos_++].text;
  }

  SizePoly poly() {
    SizePoly acc = SizePoly::constant(0);
    bool any = false;
    do {
      if (any) expect_sym("+");
      any = true;
      std::uint64_t coeff = 1;
      bool have_num = false;
      if (peek().kind == Token::Kind::Number) {
        coeff = number();
        have_num = true;
        if (is_sym("*")) {
          ++pos_;
          if (!is_ident("n")) fail("expected 'n' after '*'");
        }
      }
      if (is_ident("n")) {
        ++pos_;
        std::uint64_t deg = 1;
        if (is_sym("^")) {
          ++pos_;
          deg = number();
        }
        std::vector<std::uint64_t> c(deg + 1, 0);
        c[deg] = coeff;
        acc = acc + SizePoly(c);
      } else if (have_num) {
        acc = acc + SizePoly::constant(coeff);
      } else {
        fail("expected size polynomial term, got " + describe());
      }
    } while (is_sym("+"));
    return acc;
  }

  Type type() {
    if (is_ident("Bool")) {
      ++pos_;
      return Type::boolean();
    }
    if (is_ident("Str")) {
      ++pos_;
      expect_sym("[");
      SizePoly p = poly();
      expect_sym("]");
      return Type::str(p);
    }
    fail("expected type, got " + describe());
  }

  Env env() {
    expect_sym("{");
    Env out;
    if (!is_sym("}")) {
      while (true) {
        int l = peek().line, c = peek().col;
        std::string v = var_name();
        expect_sym(":");
        Type t = type();
        if (!out.emplace(v, t).second) throw SyntaxError("duplicate variable '" + v + "' in environment", l, c);
        if (is_sym(",")) {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect_sym("}");
    return out;
  }

  FuncSym decl() {
    expect_ident("decl");
    int l = peek().line, c = peek().col;
    FuncSym f;
    f.name = ident();
    if (kReserved.count(f.name) || SymbolTable::is_builtin(f.name))
      throw SyntaxError("cannot declare reserved or built-in name '" + f.name + "'", l, c);
    expect_sym(":");
    if (is_sym("(") && is_sym(")", 1)) {
      pos_ += 2;
    } else {
      f.args.push_back(type());
      while (is_sym(",")) {
        ++pos_;
        f.args.push_back(type());
      }
    }
    expect_sym("->");
    f.result = type();
    if (is_ident("det")) {
      f.kind = SymKind::Det;
    } else if (is_ident("rand")) {
      f.kind = SymKind::Rand;
    } else {
      fail("expected 'det' or 'rand', got " + describe());
    }
    ++pos_;
    expect_sym(";");
    return f;
  }

  void preamble() {
    while (is_ident("decl")) {
      int l = peek().line, c = peek().col;
      FuncSym f = decl();
      try {
        syms_->declare(f);
      } catch (const std::invalid_argument& e) {
        throw SyntaxError(e.what(), l, c);
      }
    }
  }

  Expr expr() {
    if (peek().kind == Token::Kind::Number) {
      std::string t = peek().text;
      if (t != "0" && t != "1") fail("only the boolean literals 0 and 1 may appear in expressions");
      ++pos_;
      return Expr::app(t, {});
    }
    if (peek().kind != Token::Kind::Ident) fail("expected expression, got " + describe());
    if (is_sym("(", 1) || is_sym("[", 1)) {
      int l = peek().line, c = peek().col;
      std::string f = ident();
      if (!syms_->known(f)) throw SyntaxError("unknown function symbol '" + f + "'", l, c);
      std::vector<SizePoly> idx;
      if (is_sym("[")) {
        ++pos_;
        idx.push_back(poly());
        while (is_sym(",")) {
          ++pos_;
          idx.push_back(poly());
        }
        expect_sym("]");
      }
      expect_sym("(");
      std::vector<Expr> args;
      if (!is_sym(")")) {
        args.push_back(expr());
        while (is_sym(",")) {
          ++pos_;
          args.push_back(expr());
        }
      }
      expect_sym(")");
      return Expr::app(f, std::move(args), std::move(idx));
    }
    return Expr::var(var_name());
  }

  Program stmt() {
    if (is_ident("skip")) {
      ++pos_;
      return Program::skip();
    }
    if (is_ident("if")) {
      ++pos_;
      std::string g = var_name();
      if (!is_ident("then")) fail("guard of 'if' must be a variable followed by 'then', got " + describe());
      ++pos_;
      Program a = seq();
      expect_ident("else");
      Program b = seq();
      expect_ident("end");
      return Program::ite(g, std::move(a), std::move(b));
    }
    if (is_sym("{")) {
      ++pos_;
      Program p = seq();
      expect_sym("}");
      return p;
    }
    std::string r = var_name();
    expect_sym(":=");
    return Program::assign(r, expr());
  }

  Program seq() {
    Program p = stmt();
    while (is_sym(";")) {
      ++pos_;
      if (at_end() || is_ident("else") || is_ident("end") || is_sym("}")) break;
      p = Program::seq(std::move(p), stmt());
    }
    return p;
  }

  RawFormula starf() {
    RawFormula l = andf();
    while (is_sym("*")) {
      RawFormula r;
      r.line = peek().line;
      r.col = peek().col;
      ++pos_;
      r.kind = Formula::Kind::Star;
      r.kids.push_back(std::move(l));
      r.kids.push_back(andf());
      l = std::move(r);
    }
    return l;
  }

  RawFormula andf() {
    RawFormula l = prim();
    while (is_sym("/\\")) {
      RawFormula r;
      r.line = peek().line;
      r.col = peek().col;
      ++pos_;
      r.kind = Formula::Kind::And;
      r.kids.push_back(std::move(l));
      r.kids.push_back(prim());
      l = std::move(r);
    }
    return l;
  }

  RawFormula prim() {
    int l = peek().line, c = peek().col;
    RawFormula f = base();
    if (is_sym("{")) {
      if (f.ann) fail("duplicate annotation");
      f.ann = env();
    }
    f.line = l;
    f.col = c;
    return f;
  }

  RawFormula base() {
    RawFormula f;
    if (is_sym("(")) {
      ++pos_;
      f = starf();
      expect_sym(")");
      return f;
    }
    if (is_ident("T") && !is_sym("(", 1)) {
      ++pos_;
      f.kind = Formula::Kind::Top;
      return f;
    }
    if (is_ident("F") && !is_sym("(", 1)) {
      ++pos_;
      f.kind = Formula::Kind::Bot;
      return f;
    }
    if (is_ident("U") && is_sym("(", 1)) {
      pos_ += 2;
      f.kind = Formula::Kind::U;
      f.ops.push_back(expr());
      expect_sym(")");
      return f;
    }
    Expr a = expr();
    if (is_sym("~~")) {
      f.kind = Formula::Kind::Ind;
    } else if (is_sym("==")) {
      f.kind = Formula::Kind::Eq;
    } else if (is_sym(".=")) {
      f.kind = Formula::Kind::ESpl;
    } else {
      fail("expected '~~', '==' or '.=' after expression, got " + describe());
    }
    ++pos_;
    f.ops.push_back(std::move(a));
    f.ops.push_back(expr());
    return f;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  SymbolTable* syms_;
};

Formula resolve(const RawFormula& r, const std::optional<Env>& inherited) {
  Formula f;
  f.kind = r.kind;
  f.ops = r.ops;
  if (r.ann) {
    f.ann = *r.ann;
  } else if (inherited) {
    f.ann = *inherited;
  } else {
    throw SyntaxError("annotation omitted where required", r.line, r.col);
  }
  if (r.kind == Formula::Kind::And) {
    for (const auto& k : r.kids) f.kids.push_back(resolve(k, f.ann));
  } else if (r.kind == Formula::Kind::Star) {
    for (const auto& k : r.kids) f.kids.push_back(resolve(k, std::nullopt));
  }
  return f;
}

}  // namespace

SizePoly parse_poly(const std::string& text) {
  Parser p(text, nullptr);
  SizePoly out = p.poly();
  p.finish();
  return out;
}

Type parse_type(const std::string& text) {
  Parser p(text, nullptr);
  Type out = p.type();
  p.finish();
  return out;
}

Env parse_env(const std::string& text) {
  Parser p(text, nullptr);
  Env out = p.env();
  p.finish();
  return out;
}

FuncSym parse_decl(const std::string& text) {
  Parser p(text, nullptr);
  FuncSym f = p.decl();
  p.finish();
  return f;
}

Expr parse_expr(const std::string& text, SymbolTable& syms) {
  Parser p(text, &syms);
  p.preamble();
  Expr e = p.expr();
  p.finish();
  return e;
}

Program parse_program(const std::string& text, SymbolTable& syms) {
  Parser p(text, &syms);
  p.preamble();
  Program out = p.seq();
  p.finish();
  return out;
}

Formula parse_formula(const std::string& text, SymbolTable& syms, const std::optional<Env>& ctx) {
  Parser p(text, &syms);
  p.preamble();
  RawFormula raw = p.starf();
  p.finish();
  return resolve(raw, ctx);
}

// ---------------------------------------------------------------- Printers

std::string print_expr(const Expr& e) {
  if (e.is_var()) return e.name;
  if ((e.name == "0" || e.name == "1") && e.args.empty() && e.idx.empty()) return e.name;
  std::string out = e.name;
  if (!e.idx.empty()) {
    out += "[";
    for (size_t i = 0; i < e.idx.size(); ++i) out += (i ? "," : "") + e.idx[i].str();
    out += "]";
  }
  out += "(";
  for (size_t i = 0; i < e.args.size(); ++i) out += (i ? ", " : "") + print_expr(e.args[i]);
  return out + ")";
}

std::string print_program(const Program& p) {
  switch (p.kind) {
    case Program::Kind::Skip:
      return "skip";
    case Program::Kind::Assign:
      return p.var + " := " + print_expr(p.rhs);
    case Program::Kind::Seq: {
      std::string right = print_program(p.kids[1]);
      if (p.kids[1].kind == Program::Kind::Seq) right = "{ " + right + " }";
      return print_program(p.kids[0]) + "; " + right;
    }
    case Program::Kind::If:
      return "if " + p.var + " then " + print_program(p.kids[0]) + " else " + print_program(p.kids[1]) + " end";
  }
  return "";
}

std::string print_formula(const Formula& f) {
  std::string body;
  switch (f.kind) {
    case Formula::Kind::Top:
      body = "T";
      break;
    case Formula::Kind::Bot:
      body = "F";
      break;
    case Formula::Kind::U:
      body = "U(" + print_expr(f.ops[0]) + ")";
      break;
    case Formula::Kind::Ind:
      body = print_expr(f.ops[0]) + " ~~ " + print_expr(f.ops[1]);
      break;
    case Formula::Kind::Eq:
      body = print_expr(f.ops[0]) + " == " + print_expr(f.ops[1]);
      break;
    case Formula::Kind::ESpl:
      body = print_expr(f.ops[0]) + " .= " + print_expr(f.ops[1]);
      break;
    case Formula::Kind::And:
      body = print_formula(f.kids[0]) + " /\\ " + print_formula(f.kids[1]);
      break;
    case Formula::Kind::Star:
      body = print_formula(f.kids[0]) + " * " + print_formula(f.kids[1]);
      break;
  }
  return "(" + body + ")" + env_str(f.ann);
}

std::string print_decl(const FuncSym& f) {
  std::string out = "decl " + f.name + " : ";
  if (f.args.empty()) {
    out += "()";
  } else {
    for (size_t i = 0; i < f.args.size(); ++i) out += (i ? ", " : "") + f.args[i].str();
  }
  out += " -> " + f.result.str() + (f.kind == SymKind::Det ? " det;" : " rand;");
  return out;
}

}  // namespace csl
