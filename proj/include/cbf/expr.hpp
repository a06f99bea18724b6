#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cbf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class NodeKind { Constant, Variable, Sum, Product, Power, Negate, Call };
enum class Builtin { Sin, Cos, Exp };

struct ExprNode;
using NodeRef = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;          // Constant
  int var = -1;                // Variable: index into the owning symbol table
  int exponent = 0;            // Power (non-negative integer)
  Builtin fn = Builtin::Sin;   // Call
  std::vector<NodeRef> kids;   // Sum/Product children, Power base, Negate/Call arg
};

/// Immutable algebraic expression over an ordered list of real variables.
/// Nodes are shared; all building functions apply constant folding and
/// zero/one elimination but no deeper canonicalization.
class Expr {
 public:
  Expr();  // the zero constant
  static Expr constant(double c);
  static Expr var(int index);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr call(Builtin fn, const Expr& arg);

  Expr pow(int k) const;
  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);

  double eval(std::span<const double> values) const;
  Expr diff(int var) const;
  /// Replace every variable i by replacements[i]. The result is an expression
  /// over whatever table the replacements refer to.
  Expr substitute(std::span<const Expr> replacements) const;

  bool is_zero() const;
  bool constant_value(double* out) const;
  int max_var() const;  // largest variable index used, -1 if none
  std::string str(std::span<const std::string> names) const;

  const NodeRef& node() const { return root_; }
  explicit Expr(NodeRef n) : root_(std::move(n)) {}

 private:
  NodeRef root_;
};

/// Variable layout for a Darboux chart: q1..qn, p1..pn, z, then parameters.
struct SymbolTable {
  int n = 0;
  std::vector<std::string> names;

  static SymbolTable darboux(int n, std::vector<std::string> params = {});

  int coords() const { return 2 * n + 1; }
  int q(int i) const { return i; }          // 0-based
  int p(int i) const { return n + i; }      // 0-based
  int z() const { return 2 * n; }
  int size() const { return static_cast<int>(names.size()); }
  int param_count() const { return size() - coords(); }
  int find(std::string_view name) const;    // -1 if absent
};

}  // namespace cbf
