#include "foliagraph/expr.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <vector>

namespace foliagraph {

double EvalEnv::rho() const { return std::sqrt(x * x + y * y); }
double EvalEnv::phi() const { return std::atan2(y, x); }

namespace {

struct Number final : Expr {
  double value;
  double eval(const EvalEnv&) const override { return value; }
  void print(std::string& out) const override {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    out += buf;
  }
};

struct Var final : Expr {
  enum Which { X, Y, Z, Rho, Phi } which;
  double eval(const EvalEnv& env) const override {
    switch (which) {
      case X: return env.x;
      case Y: return env.y;
      case Z: return env.z;
      case Rho: return env.rho();
      case Phi: return env.phi();
    }
    return 0;
  }
  void print(std::string& out) const override {
    static const char* names[] = {"x", "y", "z", "rho", "phi"};
    out += names[which];
  }
};

struct Unary final : Expr {
  ExprPtr inner;
  double eval(const EvalEnv& env) const override { return -inner->eval(env); }
  void print(std::string& out) const override {
    out += "-(";
    inner->print(out);
    out += ")";
  }
};

struct Binary final : Expr {
  char op;
  ExprPtr lhs, rhs;
  double eval(const EvalEnv& env) const override {
    double a = lhs->eval(env), b = rhs->eval(env);
    switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/':
        if (b == 0.0) throw EvalError("division by zero", offset);
        return a / b;
    }
    return 0;
  }
  void print(std::string& out) const override {
    out += "(";
    lhs->print(out);
    out += op;
    rhs->print(out);
    out += ")";
  }
};

struct Pow final : Expr {
  ExprPtr base;
  long exponent;
  double eval(const EvalEnv& env) const override {
    double b = base->eval(env);
    if (exponent < 0 && b == 0.0) throw EvalError("zero raised to negative power", offset);
    return std::pow(b, static_cast<double>(exponent));
  }
  void print(std::string& out) const override {
    out += "(";
    base->print(out);
    out += ")^" + std::to_string(exponent);
  }
};

struct Call final : Expr {
  enum Fn { Sin, Cos, Exp, Sqrt, Abs } fn;
  ExprPtr arg;
  double eval(const EvalEnv& env) const override {
    double a = arg->eval(env);
    switch (fn) {
      case Sin: return std::sin(a);
      case Cos: return std::cos(a);
      case Exp: return std::exp(a);
      case Sqrt:
        if (a < 0) throw EvalError("sqrt of negative value", offset);
        return std::sqrt(a);
      case Abs: return std::fabs(a);
    }
    return 0;
  }
  void print(std::string& out) const override {
    static const char* names[] = {"sin", "cos", "exp", "sqrt", "abs"};
    out += names[fn];
    out += "(";
    arg->print(out);
    out += ")";
  }
};

struct Piecewise final : Expr {
  ExprPtr var;  // a Var node
  enum Cmp { LT, LE, GT, GE } cmp;
  double threshold;
  ExprPtr then_branch, else_branch;
  double eval(const EvalEnv& env) const override {
    double v = var->eval(env);
    bool cond = false;
    switch (cmp) {
      case LT: cond = v < threshold; break;
      case LE: cond = v <= threshold; break;
      case GT: cond = v > threshold; break;
      case GE: cond = v >= threshold; break;
    }
    return cond ? then_branch->eval(env) : else_branch->eval(env);
  }
  void print(std::string& out) const override {
    static const char* ops[] = {"<", "<=", ">", ">="};
    out += "piecewise(";
    var->print(out);
    out += ops[cmp];
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", threshold);
    out += buf;
    out += ",";
    then_branch->print(out);
    out += ",";
    else_branch->print(out);
    out += ")";
  }
};

class Parser {
 public:
  explicit Parser(const std::string& src) : src_(src) {}

  ExprPtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("end of input");
    return e;
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) { throw SyntaxError(pos_ + 1, expected); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalpha(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    return src_.substr(start, pos_ - start);
  }

  double number() {
    skip_ws();
    const char* begin = src_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  ExprPtr expr() {
    auto lhs = term();
    while (true) {
      std::size_t at = pos_;
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      auto node = std::make_shared<Binary>();
      node->op = c;
      node->offset = at + 1;
      node->lhs = lhs;
      node->rhs = term();
      lhs = node;
    }
    return lhs;
  }

  ExprPtr term() {
    auto lhs = factor();
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') break;
      std::size_t at = pos_;
      ++pos_;
      auto node = std::make_shared<Binary>();
      node->op = c;
      node->offset = at + 1;
      node->lhs = lhs;
      node->rhs = factor();
      lhs = node;
    }
    return lhs;
  }

  ExprPtr factor() {
    if (peek() == '-') {
      std::size_t at = pos_;
      ++pos_;
      auto node = std::make_shared<Unary>();
      node->offset = at + 1;
      node->inner = factor();
      return node;
    }
    auto base = atom();
    if (peek() == '^') {
      std::size_t at = pos_;
      ++pos_;
      skip_ws();
      bool neg = accept('-');
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("integer exponent");
      long e = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        e = e * 10 + (src_[pos_++] - '0');
      auto node = std::make_shared<Pow>();
      node->offset = at + 1;
      node->base = base;
      node->exponent = neg ? -e : e;
      return node;
    }
    return base;
  }

  ExprPtr make_var(const std::string& name, std::size_t at) {
    auto v = std::make_shared<Var>();
    v->offset = at + 1;
    if (name == "x") v->which = Var::X;
    else if (name == "y") v->which = Var::Y;
    else if (name == "z") v->which = Var::Z;
    else if (name == "rho") v->which = Var::Rho;
    else if (name == "phi") v->which = Var::Phi;
    else {
      pos_ = at;
      fail("variable or function");
    }
    return v;
  }

  ExprPtr atom() {
    char c = peek();
    std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      auto node = std::make_shared<Number>();
      node->offset = at + 1;
      node->value = number();
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name = ident();
      if (name == "piecewise") {
        expect('(');
        return piecewise(at);
      }
      static const std::pair<const char*, Call::Fn> fns[] = {
          {"sin", Call::Sin}, {"cos", Call::Cos}, {"exp", Call::Exp}, {"sqrt", Call::Sqrt}, {"abs", Call::Abs}};
      for (const auto& [fname, fn] : fns) {
        if (name == fname) {
          expect('(');
          auto node = std::make_shared<Call>();
          node->offset = at + 1;
          node->fn = fn;
          node->arg = expr();
          expect(')');
          return node;
        }
      }
      return make_var(name, at);
    }
    fail("number, variable, function or '('");
  }

  ExprPtr piecewise(std::size_t at) {
    auto node = std::make_shared<Piecewise>();
    node->offset = at + 1;
    std::size_t vat = pos_;
    skip_ws();
    vat = pos_;
    node->var = make_var(ident(), vat);
    skip_ws();
    if (accept('<')) node->cmp = accept('=') ? Piecewise::LE : Piecewise::LT;
    else if (accept('>')) node->cmp = accept('=') ? Piecewise::GE : Piecewise::GT;
    else fail("comparison operator");
    node->threshold = number();
    expect(',');
    node->then_branch = expr();
    expect(',');
    node->else_branch = expr();
    expect(')');
    return node;
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& source) { return Parser(source).parse(); }

std::string print_expr(const ExprPtr& e) {
  std::string out;
  e->print(out);
  return out;
}

double eval_expr(const ExprPtr& e, const EvalEnv& env) { return e->eval(env); }

}  // namespace foliagraph
