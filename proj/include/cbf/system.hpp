#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <mutex>

#include "cbf/expr.hpp"

namespace cbf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;

/// Third-order Taylor data of H at a point, over the 2n+1 coordinates.
/// Cubic coefficients follow the monomial convention: P(i,j,k) multiplies
/// x_i x_j x_k once for each i <= j <= k, so P(i,i,i) = H_iii / 6 and a
/// doubled index carries a factor 1/2.
struct Jet3 {
  Vec x0;
  double value = 0.0;
  Vec gradient;
  Mat hessian;
  int dim = 0;
  std::vector<double> third;  // raw partials, packed for i <= j <= k

  double third_partial(int i, int j, int k) const;
  double P(int i, int j, int k) const;
};

/// A Hamiltonian over Darboux coordinates with memoized symbolic partial
/// derivatives up to total order 3 (over coordinates and parameters).
class HamiltonianSystem {
 public:
  HamiltonianSystem(SymbolTable table, Expr h);

  const SymbolTable& table() const { return table_; }
  int n() const { return table_.n; }
  int dim() const { return table_.coords(); }
  const Expr& hamiltonian() const { return h_; }

  /// Symbolic partial derivative for a multi-index given as a list of
  /// variable indices (order <= 3, order of entries irrelevant).
  Expr derivative(std::span<const int> vars) const;

  double eval(std::span<const double> point,
              std::span<const double> params = {}) const;
  double eval_derivative(std::span<const int> vars,
                         std::span<const double> point,
                         std::span<const double> params = {}) const;

  Jet3 jet3(std::span<const double> point,
            std::span<const double> params = {}) const;

  /// Exact translation of the chart so that `point` becomes the origin:
  /// (q,p,z) -> (q0+Q, p0+P, z0+Z+p0.Q) preserves eta = dz - p.dq, so every
  /// origin formula applies to the returned system.
  HamiltonianSystem recenter(std::span<const double> point) const;

  std::vector<double> pack_values(std::span<const double> point,
                                  std::span<const double> params) const;

 private:
  SymbolTable table_;
  Expr h_;
  mutable std::mutex mu_;
  mutable std::map<std::array<int, 3>, Expr> cache_;

  const Expr& cached_derivative_locked(std::array<int, 3> key) const;
};

/// Convenience front door: parse the expression and build the system.
HamiltonianSystem parse_system(std::string_view source, int n,
                               std::vector<std::string> params = {});

}  // namespace cbf
