#include "mw/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include "mw/domain.hpp"
#include "mw/error.hpp"

namespace mw {

namespace detail {

enum class Op { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Bar };

struct Node {
  Op op = Op::Const;
  cplx value = 0.0;
  int exponent = 0;
  std::shared_ptr<const Node> a, b;

  mutable std::once_flag derivative_once;
  mutable std::unique_ptr<Expr> derivative;
  mutable std::once_flag rational_once;
  mutable std::unique_ptr<Rational> rational;

  static Expr make(Op op, std::shared_ptr<const Node> a, std::shared_ptr<const Node> b = nullptr,
                   int exponent = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->exponent = exponent;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
  }
  static Expr leaf(Op op, cplx v) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = v;
    return Expr(std::shared_ptr<const Node>(std::move(n)));
  }
  static const std::shared_ptr<const Node>& of(const Expr& e) { return e.node_; }
};

}  // namespace detail

using detail::Node;
using detail::Op;

namespace {

bool is_const(const Expr& e, cplx* v = nullptr);

cplx eval_node(const Node& n, cplx z) {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var: return z;
    case Op::Add: return eval_node(*n.a, z) + eval_node(*n.b, z);
    case Op::Sub: return eval_node(*n.a, z) - eval_node(*n.b, z);
    case Op::Mul: return eval_node(*n.a, z) * eval_node(*n.b, z);
    case Op::Div: return eval_node(*n.a, z) / eval_node(*n.b, z);
    case Op::Neg: return -eval_node(*n.a, z);
    case Op::Pow: {
      const cplx base = eval_node(*n.a, z);
      cplx r = 1.0;
      cplx b = n.exponent >= 0 ? base : 1.0 / base;
      for (unsigned k = static_cast<unsigned>(std::abs(n.exponent)); k; k >>= 1) {
        if (k & 1u) r *= b;
        b *= b;
      }
      return r;
    }
    case Op::Bar: return std::conj(eval_node(*n.a, involution(z)));
  }
  return 0.0;
}

std::string fmt_number(cplx v) {
  char buf[96];
  if (v.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", v.real());
    return v.real() < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
  }
  if (v.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", v.imag());
    return v.imag() < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
  }
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", v.real(), v.imag());
  return buf;
}

std::string print(const Node& n) {
  switch (n.op) {
    case Op::Const: return fmt_number(n.value);
    case Op::Var: return "z";
    case Op::Add: return "(" + print(*n.a) + "+" + print(*n.b) + ")";
    case Op::Sub: return "(" + print(*n.a) + "-" + print(*n.b) + ")";
    case Op::Mul: return print(*n.a) + "*" + print(*n.b);
    case Op::Div: return print(*n.a) + "/(" + print(*n.b) + ")";
    case Op::Neg: return "(-" + print(*n.a) + ")";
    case Op::Pow: {
      std::string base = print(*n.a);
      if (n.a->op == Op::Mul || n.a->op == Op::Div || n.a->op == Op::Pow) base = "(" + base + ")";
      return base + "^" + (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent));
    }
    case Op::Bar: return "bar(" + print(*n.a) + ")";
  }
  return "";
}

Rational to_rational(const Node& n) {
  switch (n.op) {
    case Op::Const: return Rational::constant(n.value);
    case Op::Var: return Rational::variable();
    case Op::Add: return to_rational(*n.a) + to_rational(*n.b);
    case Op::Sub: return to_rational(*n.a) - to_rational(*n.b);
    case Op::Mul: return to_rational(*n.a) * to_rational(*n.b);
    case Op::Div: return to_rational(*n.a) / to_rational(*n.b);
    case Op::Neg: return -to_rational(*n.a);
    case Op::Pow: return to_rational(*n.a).pow(n.exponent);
    case Op::Bar: return to_rational(*n.a).bar_pullback();
  }
  return {};
}

bool is_const(const Expr& e, cplx* v) {
  const auto& n = Node::of(e);
  if (n->op != Op::Const) return false;
  if (v) *v = n->value;
  return true;
}

}  // namespace

Expr::Expr() : Expr(cplx(0.0)) {}

Expr::Expr(cplx c) : node_(Node::of(Node::leaf(Op::Const, c))) {}

Expr Expr::z() { return Node::leaf(Op::Var, 0.0); }

cplx Expr::operator()(cplx z) const { return eval_node(*node_, z); }

bool Expr::is_constant() const {
  if (is_const(*this)) return true;
  const Rational& r = rational();
  return r.is_zero() || (r.shift() == 0 && r.num().degree() == 0 && r.den().degree() == 0);
}

bool Expr::is_zero() const {
  cplx v;
  if (is_const(*this, &v)) return v == cplx(0.0);
  return rational().is_zero();
}

std::string Expr::str() const { return print(*node_); }

Expr operator+(const Expr& a, const Expr& b) {
  cplx va, vb;
  const bool ca = is_const(a, &va), cb = is_const(b, &vb);
  if (ca && cb) return Expr(va + vb);
  if (ca && va == cplx(0.0)) return b;
  if (cb && vb == cplx(0.0)) return a;
  return Node::make(Op::Add, Node::of(a), Node::of(b));
}

Expr operator-(const Expr& a, const Expr& b) {
  cplx va, vb;
  const bool ca = is_const(a, &va), cb = is_const(b, &vb);
  if (ca && cb) return Expr(va - vb);
  if (cb && vb == cplx(0.0)) return a;
  if (ca && va == cplx(0.0)) return -b;
  return Node::make(Op::Sub, Node::of(a), Node::of(b));
}

Expr operator*(const Expr& a, const Expr& b) {
  cplx va, vb;
  const bool ca = is_const(a, &va), cb = is_const(b, &vb);
  if (ca && cb) return Expr(va * vb);
  if ((ca && va == cplx(0.0)) || (cb && vb == cplx(0.0))) return Expr(0.0);
  if (ca && va == cplx(1.0)) return b;
  if (cb && vb == cplx(1.0)) return a;
  return Node::make(Op::Mul, Node::of(a), Node::of(b));
}

Expr operator/(const Expr& a, const Expr& b) {
  cplx va, vb;
  const bool ca = is_const(a, &va), cb = is_const(b, &vb);
  if (cb && vb == cplx(0.0)) throw DomainError("division by the zero constant");
  if (ca && cb) return Expr(va / vb);
  if (ca && va == cplx(0.0)) return Expr(0.0);
  if (cb && vb == cplx(1.0)) return a;
  return Node::make(Op::Div, Node::of(a), Node::of(b));
}

Expr operator-(const Expr& a) {
  cplx va;
  if (is_const(a, &va)) return Expr(-va);
  if (Node::of(a)->op == Op::Neg) return Expr(Node::of(a)->a);
  return Node::make(Op::Neg, Node::of(a));
}

Expr Expr::pow(int n) const {
  cplx v;
  if (n == 0) return Expr(1.0);
  if (n == 1) return *this;
  if (is_const(*this, &v)) {
    if (v == cplx(0.0) && n < 0) throw DomainError("negative power of zero");
    return Expr(eval_node(*Node::of(Node::make(Op::Pow, node_, nullptr, n)), 0.0));
  }
  return Node::make(Op::Pow, node_, nullptr, n);
}

Expr Expr::bar_pullback() const {
  cplx v;
  if (is_const(*this, &v)) return Expr(std::conj(v));
  if (node_->op == Op::Bar) return Expr(node_->a);  // the pullback is an involution
  return Node::make(Op::Bar, node_);
}

const Expr& Expr::derivative() const {
  const Node& n = *node_;
  std::call_once(n.derivative_once, [&n] {
    auto wrap = [](const std::shared_ptr<const Node>& p) { return Expr(p); };
    Expr d;
    switch (n.op) {
      case Op::Const: d = Expr(0.0); break;
      case Op::Var: d = Expr(1.0); break;
      case Op::Add: d = wrap(n.a).derivative() + wrap(n.b).derivative(); break;
      case Op::Sub: d = wrap(n.a).derivative() - wrap(n.b).derivative(); break;
      case Op::Mul:
        d = wrap(n.a).derivative() * wrap(n.b) + wrap(n.a) * wrap(n.b).derivative();
        break;
      case Op::Div:
        d = (wrap(n.a).derivative() * wrap(n.b) - wrap(n.a) * wrap(n.b).derivative()) / wrap(n.b).pow(2);
        break;
      case Op::Neg: d = -wrap(n.a).derivative(); break;
      case Op::Pow:
        d = Expr(static_cast<double>(n.exponent)) * wrap(n.a).pow(n.exponent - 1) * wrap(n.a).derivative();
        break;
      case Op::Bar:
        // d/dz conj(h(I z)) = conj(h'(I z)) / z^2
        d = wrap(n.a).derivative().bar_pullback() * Expr::z().pow(-2);
        break;
    }
    n.derivative = std::make_unique<Expr>(std::move(d));
  });
  return *n.derivative;
}

const Rational& Expr::rational() const {
  const Node& n = *node_;
  std::call_once(n.rational_once, [&n] { n.rational = std::make_unique<Rational>(to_rational(n)); });
  return *n.rational;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  Expr parse() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts(const char* word) const { return s_.compare(pos_, std::strlen(word), word) == 0; }

  bool at_primary() {
    skip();
    if (pos_ >= s_.size()) return false;
    const char c = s_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == 'z' || c == 'i' ||
           starts("ζ") || starts("bar");
  }

  Expr expr() {
    Expr acc;
    if (eat('-')) acc = -term();
    else {
      eat('+');
      acc = term();
    }
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (eat('*')) acc = acc * unary();
      else if (eat('/')) acc = acc / unary();
      else if (at_primary()) acc = acc * power();
      else return acc;
    }
  }

  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (eat('^')) {
      int sign = 1;
      bool paren = eat('(');
      if (eat('-')) sign = -1;
      else eat('+');
      skip();
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected integer exponent", pos_);
      if (pos_ < s_.size() && s_[pos_] == '.') throw ParseError("exponent must be an integer", pos_);
      if (pos_ - start > 6) throw ParseError("exponent too large", start);
      const int n = std::stoi(s_.substr(start, pos_ - start));
      if (paren && !eat(')')) throw ParseError("expected ')' after exponent", pos_);
      return base.pow(sign * n);
    }
    return base;
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    if (starts("bar")) {
      pos_ += 3;
      if (!eat('(')) throw ParseError("expected '(' after bar", pos_);
      Expr e = expr();
      if (!eat(')')) throw ParseError("expected ')'", pos_);
      return e.bar_pullback();
    }
    if (starts("zeta")) {
      pos_ += 4;
      return Expr::z();
    }
    if (starts("ζ")) {
      pos_ += std::strlen("ζ");
      return Expr::z();
    }
    if (c == 'z') {
      ++pos_;
      return Expr::z();
    }
    if (c == 'i') {
      ++pos_;
      return Expr(kI);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t begin = pos_;
      auto digits = [&] {
        const std::size_t from = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return pos_ - from;
      };
      std::size_t mantissa = digits();
      if (pos_ < s_.size() && s_[pos_] == '.') {
        ++pos_;
        mantissa += digits();
      }
      if (mantissa == 0) throw ParseError("malformed number", begin);
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        if (digits() == 0) throw ParseError("malformed exponent", pos_);
      }
      if (pos_ < s_.size() && (s_[pos_] == '.' || std::isdigit(static_cast<unsigned char>(s_[pos_]))))
        throw ParseError("malformed number", pos_);
      const double v = std::strtod(s_.substr(begin, pos_ - begin).c_str(), nullptr);
      if (pos_ < s_.size() && s_[pos_] == 'i') {
        ++pos_;
        return Expr(cplx(0.0, v));
      }
      return Expr(v);
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(const std::string& text) { return Parser(text).parse(); }

}  // namespace mw
