#include "hamosc/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "hamosc/errors.hpp"

namespace hamosc {

namespace {

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

constexpr int kMaxDepth = 200;

struct FuncName {
  std::string_view name;
  ScalarExpr::Func func;
};

constexpr FuncName kFuncs[] = {
    {"sin", ScalarExpr::Func::Sin},   {"cos", ScalarExpr::Func::Cos},
    {"tan", ScalarExpr::Func::Tan},   {"exp", ScalarExpr::Func::Exp},
    {"log", ScalarExpr::Func::Log},   {"sqrt", ScalarExpr::Func::Sqrt},
    {"abs", ScalarExpr::Func::Abs},   {"sinh", ScalarExpr::Func::Sinh},
    {"cosh", ScalarExpr::Func::Cosh},
};

std::string_view func_name(ScalarExpr::Func f) {
  for (const auto& entry : kFuncs)
    if (entry.func == f) return entry.name;
  return "?";
}

double finite_or_throw(double v, double t, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what, t);
  return v;
}

double eval_node(const ScalarExpr::Node& n, double t) {
  using K = ScalarExpr::Kind;
  switch (n.kind) {
    case K::Number:
      return n.value;
    case K::Var:
      return t;
    case K::Neg:
      return -eval_node(*n.lhs, t);
    case K::Add:
      return finite_or_throw(eval_node(*n.lhs, t) + eval_node(*n.rhs, t), t, "+");
    case K::Sub:
      return finite_or_throw(eval_node(*n.lhs, t) - eval_node(*n.rhs, t), t, "-");
    case K::Mul:
      return finite_or_throw(eval_node(*n.lhs, t) * eval_node(*n.rhs, t), t, "*");
    case K::Div: {
      const double den = eval_node(*n.rhs, t);
      if (den == 0.0) throw DomainError("division by zero", t);
      return finite_or_throw(eval_node(*n.lhs, t) / den, t, "/");
    }
    case K::Pow:
      return finite_or_throw(std::pow(eval_node(*n.lhs, t), eval_node(*n.rhs, t)), t, "^");
    case K::Call: {
      const double x = eval_node(*n.lhs, t);
      using F = ScalarExpr::Func;
      switch (n.func) {
        case F::Sin: return std::sin(x);
        case F::Cos: return std::cos(x);
        case F::Tan: return finite_or_throw(std::tan(x), t, "tan");
        case F::Exp: return finite_or_throw(std::exp(x), t, "exp");
        case F::Log:
          if (!(x > 0.0)) throw DomainError("log of a nonpositive value", t);
          return std::log(x);
        case F::Sqrt:
          if (x < 0.0) throw DomainError("sqrt of a negative value", t);
          return std::sqrt(x);
        case F::Abs: return std::abs(x);
        case F::Sinh: return finite_or_throw(std::sinh(x), t, "sinh");
        case F::Cosh: return finite_or_throw(std::cosh(x), t, "cosh");
      }
    }
  }
  return 0.0;
}

std::string number_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ScalarExpr::Node& n, std::string& out) {
  using K = ScalarExpr::Kind;
  auto bin = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: out += number_text(n.value); break;
    case K::Var: out += 't'; break;
    case K::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      break;
    case K::Add: bin(" + "); break;
    case K::Sub: bin(" - "); break;
    case K::Mul: bin(" * "); break;
    case K::Div: bin(" / "); break;
    case K::Pow: bin(" ^ "); break;
    case K::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      break;
  }
}

NodePtr make(ScalarExpr::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto node = std::make_shared<ScalarExpr::Node>();
  node->kind = kind;
  node->depends_on_t = kind == ScalarExpr::Kind::Var || (lhs && lhs->depends_on_t) ||
                       (rhs && rhs->depends_on_t);
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

NodePtr make_number(double v) {
  auto node = std::make_shared<ScalarExpr::Node>();
  node->kind = ScalarExpr::Kind::Number;
  node->value = v;
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_ws();
    NodePtr root = expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return root;
  }

 private:
  NodePtr expr() {
    Guard guard(*this);
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      NodePtr rhs = term();
      lhs = make(c == '+' ? ScalarExpr::Kind::Add : ScalarExpr::Kind::Sub, lhs, rhs);
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip_ws();
      const char c = peek();
      if (c != '*' && c != '/') return lhs;
      ++pos_;
      NodePtr rhs = unary();
      lhs = make(c == '*' ? ScalarExpr::Kind::Mul : ScalarExpr::Kind::Div, lhs, rhs);
    }
  }

  NodePtr unary() {
    Guard guard(*this);
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return make(ScalarExpr::Kind::Neg, unary());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      return make(ScalarExpr::Kind::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    skip_ws();
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == "t") return make(ScalarExpr::Kind::Var);
      if (ident == "pi") return make_number(std::numbers::pi);
      if (ident == "e") return make_number(std::numbers::e);
      for (const auto& f : kFuncs) {
        if (f.name == ident) {
          skip_ws();
          expect('(');
          NodePtr arg = expr();
          expect(')');
          auto node = std::make_shared<ScalarExpr::Node>();
          node->kind = ScalarExpr::Kind::Call;
          node->func = f.func;
          node->depends_on_t = arg->depends_on_t;
          node->lhs = std::move(arg);
          return node;
        }
      }
      pos_ = start;
      fail({"t", "pi", "e", "function name"});
    }
    fail({"number", "t", "pi", "e", "function", "'('", "'-'"});
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (peek() == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail({"number"});
    }
    // Exponent only when followed by digits, so "2e" stays a (rejected) juxtaposition.
    if (peek() == 'e' || peek() == 'E') {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string token(text_.substr(start, pos_ - start));
    const double v = std::strtod(token.c_str(), nullptr);
    if (!std::isfinite(v)) {
      pos_ = start;
      fail({"finite number"});
    }
    return make_number(v);
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) fail({std::string("'") + c + "'"});
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string found;
    if (pos_ >= text_.size()) {
      found = "end of input";
    } else {
      const unsigned char ch = static_cast<unsigned char>(text_[pos_]);
      if (std::isprint(ch)) {
        found = std::string("'") + static_cast<char>(ch) + "'";
      } else {
        char buf[8];
        std::snprintf(buf, sizeof buf, "0x%02x", ch);
        found = buf;
      }
    }
    throw ParseError(pos_, std::move(expected), found);
  }

  struct Guard {
    explicit Guard(Parser& p) : parser(p) {
      if (++parser.depth_ > kMaxDepth) parser.fail({"shallower nesting"});
    }
    ~Guard() { --parser.depth_; }
    Parser& parser;
  };

  std::string_view text_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

ScalarExpr::ScalarExpr() : node_(make_number(0.0)) {}

ScalarExpr ScalarExpr::constant(double value) { return ScalarExpr(make_number(value)); }

ScalarExpr ScalarExpr::variable() { return ScalarExpr(make(Kind::Var)); }

ScalarExpr ScalarExpr::negate(ScalarExpr operand) {
  return ScalarExpr(make(Kind::Neg, std::move(operand.node_)));
}

ScalarExpr ScalarExpr::binary(Kind op, ScalarExpr lhs, ScalarExpr rhs) {
  if (op == Kind::Number || op == Kind::Var || op == Kind::Neg || op == Kind::Call) {
    throw std::invalid_argument("not a binary operator");
  }
  return ScalarExpr(make(op, std::move(lhs.node_), std::move(rhs.node_)));
}

ScalarExpr ScalarExpr::call(Func fn, ScalarExpr arg) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Call;
  node->func = fn;
  node->depends_on_t = arg.node_->depends_on_t;
  node->lhs = std::move(arg.node_);
  return ScalarExpr(std::move(node));
}

double ScalarExpr::eval(double t) const { return eval_node(*node_, t); }

bool ScalarExpr::is_constant() const noexcept { return !node_->depends_on_t; }

std::string ScalarExpr::to_string() const {
  std::string out;
  print_node(*node_, out);
  return out;
}

ScalarExpr parse_expr(std::string_view text) {
  Parser parser(text);
  return ScalarExpr(parser.parse());
}

}  // namespace hamosc
