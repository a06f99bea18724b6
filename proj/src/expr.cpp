#include "cbf/expr.hpp"

#include <cmath>
#include <sstream>

namespace cbf {

namespace {

NodeRef make(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

const NodeRef& zero_node() {
  static const NodeRef z = make({.kind = NodeKind::Constant, .value = 0.0});
  return z;
}

bool node_is_const(const NodeRef& n, double* out = nullptr) {
  if (n->kind != NodeKind::Constant) return false;
  if (out) *out = n->value;
  return true;
}

}  // namespace

Expr::Expr() : root_(zero_node()) {}

Expr Expr::constant(double c) {
  if (c == 0.0) return Expr(zero_node());
  return Expr(make({.kind = NodeKind::Constant, .value = c}));
}

Expr Expr::var(int index) {
  if (index < 0) throw Error("Expr::var: negative variable index");
  return Expr(make({.kind = NodeKind::Variable, .var = index}));
}

Expr Expr::sum(std::vector<Expr> terms) {
  std::vector<NodeRef> kids;
  double c = 0.0;
  auto absorb = [&](auto&& self, const NodeRef& n) -> void {
    double v;
    if (node_is_const(n, &v)) {
      c += v;
    } else if (n->kind == NodeKind::Sum) {
      for (const auto& k : n->kids) self(self, k);
    } else {
      kids.push_back(n);
    }
  };
  for (const auto& t : terms) absorb(absorb, t.node());
  if (c != 0.0) kids.push_back(Expr::constant(c).node());
  if (kids.empty()) return Expr(zero_node());
  if (kids.size() == 1) return Expr(kids[0]);
  return Expr(make({.kind = NodeKind::Sum, .kids = std::move(kids)}));
}

Expr Expr::product(std::vector<Expr> factors) {
  std::vector<NodeRef> kids;
  double c = 1.0;
  bool saw_zero = false;
  auto absorb = [&](auto&& self, const NodeRef& n) -> void {
    double v;
    if (node_is_const(n, &v)) {
      if (v == 0.0) saw_zero = true;
      c *= v;
    } else if (n->kind == NodeKind::Product) {
      for (const auto& k : n->kids) self(self, k);
    } else {
      kids.push_back(n);
    }
  };
  for (const auto& f : factors) absorb(absorb, f.node());
  if (saw_zero || c == 0.0) return Expr(zero_node());
  if (kids.empty()) return Expr::constant(c);
  if (c != 1.0) kids.insert(kids.begin(), Expr::constant(c).node());
  if (kids.size() == 1) return Expr(kids[0]);
  return Expr(make({.kind = NodeKind::Product, .kids = std::move(kids)}));
}

Expr Expr::call(Builtin fn, const Expr& arg) {
  double v;
  if (node_is_const(arg.node(), &v)) {
    switch (fn) {
      case Builtin::Sin: return Expr::constant(std::sin(v));
      case Builtin::Cos: return Expr::constant(std::cos(v));
      case Builtin::Exp: return Expr::constant(std::exp(v));
    }
  }
  return Expr(make({.kind = NodeKind::Call, .fn = fn, .kids = {arg.node()}}));
}

Expr Expr::pow(int k) const {
  if (k < 0) throw Error("Expr::pow: exponent must be a non-negative integer");
  if (k == 0) return Expr::constant(1.0);
  if (k == 1) return *this;
  double v;
  if (node_is_const(root_, &v)) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= v;
    return Expr::constant(r);
  }
  return Expr(make({.kind = NodeKind::Power, .exponent = k, .kids = {root_}}));
}

Expr Expr::operator-() const {
  double v;
  if (node_is_const(root_, &v)) return Expr::constant(-v);
  if (root_->kind == NodeKind::Negate) return Expr(root_->kids[0]);
  return Expr(make({.kind = NodeKind::Negate, .kids = {root_}}));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }

namespace {

double eval_node(const ExprNode& n, std::span<const double> vals) {
  switch (n.kind) {
    case NodeKind::Constant: return n.value;
    case NodeKind::Variable:
      if (n.var >= static_cast<int>(vals.size()))
        throw Error("Expr::eval: not enough values for variable index " +
                    std::to_string(n.var));
      return vals[n.var];
    case NodeKind::Sum: {
      double s = 0.0;
      for (const auto& k : n.kids) s += eval_node(*k, vals);
      return s;
    }
    case NodeKind::Product: {
      double s = 1.0;
      for (const auto& k : n.kids) s *= eval_node(*k, vals);
      return s;
    }
    case NodeKind::Power: {
      double b = eval_node(*n.kids[0], vals);
      double r = 1.0;
      for (int i = 0; i < n.exponent; ++i) r *= b;
      return r;
    }
    case NodeKind::Negate: return -eval_node(*n.kids[0], vals);
    case NodeKind::Call: {
      double a = eval_node(*n.kids[0], vals);
      switch (n.fn) {
        case Builtin::Sin: return std::sin(a);
        case Builtin::Cos: return std::cos(a);
        case Builtin::Exp: return std::exp(a);
      }
    }
  }
  throw Error("Expr::eval: corrupt node");
}

Expr diff_node(const NodeRef& n, int var) {
  switch (n->kind) {
    case NodeKind::Constant: return Expr();
    case NodeKind::Variable:
      return n->var == var ? Expr::constant(1.0) : Expr();
    case NodeKind::Sum: {
      std::vector<Expr> terms;
      terms.reserve(n->kids.size());
      for (const auto& k : n->kids) terms.push_back(diff_node(k, var));
      return Expr::sum(std::move(terms));
    }
    case NodeKind::Product: {
      std::vector<Expr> terms;
      for (size_t i = 0; i < n->kids.size(); ++i) {
        Expr d = diff_node(n->kids[i], var);
        if (d.is_zero()) continue;
        std::vector<Expr> factors;
        factors.reserve(n->kids.size());
        for (size_t j = 0; j < n->kids.size(); ++j)
          factors.push_back(i == j ? d : Expr(n->kids[j]));
        terms.push_back(Expr::product(std::move(factors)));
      }
      return Expr::sum(std::move(terms));
    }
    case NodeKind::Power: {
      Expr base(n->kids[0]);
      Expr db = diff_node(n->kids[0], var);
      if (db.is_zero()) return Expr();
      return Expr::constant(n->exponent) * base.pow(n->exponent - 1) * db;
    }
    case NodeKind::Negate: return -diff_node(n->kids[0], var);
    case NodeKind::Call: {
      Expr arg(n->kids[0]);
      Expr da = diff_node(n->kids[0], var);
      if (da.is_zero()) return Expr();
      switch (n->fn) {
        case Builtin::Sin: return Expr::call(Builtin::Cos, arg) * da;
        case Builtin::Cos: return -(Expr::call(Builtin::Sin, arg) * da);
        case Builtin::Exp: return Expr::call(Builtin::Exp, arg) * da;
      }
    }
  }
  throw Error("Expr::diff: corrupt node");
}

Expr subst_node(const NodeRef& n, std::span<const Expr> repl) {
  switch (n->kind) {
    case NodeKind::Constant: return Expr(n);
    case NodeKind::Variable:
      if (n->var >= static_cast<int>(repl.size()))
        throw Error("Expr::substitute: no replacement for variable index " +
                    std::to_string(n->var));
      return repl[n->var];
    case NodeKind::Sum: {
      std::vector<Expr> ts;
      for (const auto& k : n->kids) ts.push_back(subst_node(k, repl));
      return Expr::sum(std::move(ts));
    }
    case NodeKind::Product: {
      std::vector<Expr> fs;
      for (const auto& k : n->kids) fs.push_back(subst_node(k, repl));
      return Expr::product(std::move(fs));
    }
    case NodeKind::Power:
      return subst_node(n->kids[0], repl).pow(n->exponent);
    case NodeKind::Negate: return -subst_node(n->kids[0], repl);
    case NodeKind::Call: return Expr::call(n->fn, subst_node(n->kids[0], repl));
  }
  throw Error("Expr::substitute: corrupt node");
}

int max_var_node(const ExprNode& n) {
  int m = n.kind == NodeKind::Variable ? n.var : -1;
  for (const auto& k : n.kids) m = std::max(m, max_var_node(*k));
  return m;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// precedence: atoms > power > negate > product > sum
enum Prec { PREC_SUM = 0, PREC_PROD, PREC_NEG, PREC_POW, PREC_ATOM };

std::string print_node(const ExprNode& n, std::span<const std::string> names,
                       int* prec_out) {
  auto wrap = [](const std::string& s, int inner, int needed) {
    return inner < needed ? "(" + s + ")" : s;
  };
  switch (n.kind) {
    case NodeKind::Constant: {
      *prec_out = n.value < 0 ? PREC_NEG : PREC_ATOM;
      return fmt_double(n.value);
    }
    case NodeKind::Variable: {
      *prec_out = PREC_ATOM;
      if (n.var >= static_cast<int>(names.size()))
        throw Error("Expr::str: variable index out of range");
      return names[n.var];
    }
    case NodeKind::Sum: {
      std::string out;
      for (size_t i = 0; i < n.kids.size(); ++i) {
        const ExprNode& k = *n.kids[i];
        int p;
        if (k.kind == NodeKind::Negate) {
          std::string inner = print_node(*k.kids[0], names, &p);
          inner = wrap(inner, p, PREC_PROD);
          out += (i == 0) ? "-" + inner : " - " + inner;
        } else {
          std::string s = print_node(k, names, &p);
          s = wrap(s, p, PREC_PROD);
          out += (i == 0) ? s : " + " + s;
        }
      }
      *prec_out = PREC_SUM;
      return out;
    }
    case NodeKind::Product: {
      std::string out;
      for (size_t i = 0; i < n.kids.size(); ++i) {
        int p;
        std::string s = print_node(*n.kids[i], names, &p);
        s = wrap(s, p, PREC_NEG);
        out += (i == 0) ? s : "*" + s;
      }
      *prec_out = PREC_PROD;
      return out;
    }
    case NodeKind::Power: {
      int p;
      std::string b = print_node(*n.kids[0], names, &p);
      b = wrap(b, p, PREC_ATOM);
      *prec_out = PREC_POW;
      return b + "^" + std::to_string(n.exponent);
    }
    case NodeKind::Negate: {
      int p;
      std::string s = print_node(*n.kids[0], names, &p);
      *prec_out = PREC_NEG;
      return "-" + wrap(s, p, PREC_NEG);
    }
    case NodeKind::Call: {
      int p;
      std::string a = print_node(*n.kids[0], names, &p);
      const char* f = n.fn == Builtin::Sin ? "sin"
                    : n.fn == Builtin::Cos ? "cos"
                                           : "exp";
      *prec_out = PREC_ATOM;
      return std::string(f) + "(" + a + ")";
    }
  }
  throw Error("Expr::str: corrupt node");
}

}  // namespace

double Expr::eval(std::span<const double> values) const {
  return eval_node(*root_, values);
}

Expr Expr::diff(int var) const { return diff_node(root_, var); }

Expr Expr::substitute(std::span<const Expr> replacements) const {
  return subst_node(root_, replacements);
}

bool Expr::is_zero() const {
  return root_->kind == NodeKind::Constant && root_->value == 0.0;
}

bool Expr::constant_value(double* out) const {
  return node_is_const(root_, out);
}

int Expr::max_var() const { return max_var_node(*root_); }

std::string Expr::str(std::span<const std::string> names) const {
  int p;
  return print_node(*root_, names, &p);
}

SymbolTable SymbolTable::darboux(int n, std::vector<std::string> params) {
  if (n < 1) throw Error("SymbolTable: dimension count n must be >= 1");
  SymbolTable t;
  t.n = n;
  for (int i = 1; i <= n; ++i) t.names.push_back("q" + std::to_string(i));
  for (int i = 1; i <= n; ++i) t.names.push_back("p" + std::to_string(i));
  t.names.push_back("z");
  for (auto& s : params) {
    if (t.find(s) >= 0) throw Error("SymbolTable: duplicate name '" + s + "'");
    t.names.push_back(std::move(s));
  }
  return t;
}

int SymbolTable::find(std::string_view name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  return -1;
}

}  // namespace cbf
