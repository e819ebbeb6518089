#pragma once

#include <vector>

#include "hamforge/jet.hpp"
#include "hamforge/tensor.hpp"

namespace hamforge {

/// A metric with both index positions kept in sync.
struct Metric {
  ExprMatrix lower;  // g_{ij}
  ExprMatrix upper;  // g^{ij}

  static Metric from_lower(ExprMatrix g);
  static Metric from_upper(ExprMatrix g);
  int dim() const { return static_cast<int>(lower.rows()); }
};

/// V^i_j = dV^i/du^j. Throws InvalidInput when a flux contains jet variables.
ExprMatrix velocity_matrix(const JetSpace& jet, const std::vector<Expr>& fluxes);

/// N^i_{jk} as N(i, j, k).
Tensor3 nijenhuis_tensor(const ExprMatrix& V, const std::vector<Symbol>& u);
/// H^i_{jk} as H(i, j, k), built from V and its Nijenhuis tensor.
Tensor3 haantjes_tensor(const ExprMatrix& V, const Tensor3& N);
/// H_{ij} = H^a_{ib} H^b_{ja}.
ExprMatrix haantjes_square_contraction(const Tensor3& H);

/// Levi-Civita Gamma^i_{jk} as G(i, j, k).
Tensor3 christoffel(const Metric& g, const std::vector<Symbol>& u);
/// Gamma^{ij}_k = -g^{is} Gamma^j_{sk}, as G(i, j, k).
Tensor3 christoffel_contravariant(const Metric& g, const Tensor3& gamma);

/// R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{ks} Gamma^s_{lj} - Gamma^i_{ls} Gamma^s_{kj}.
Tensor4 riemann_mixed(const Tensor3& gamma, const std::vector<Symbol>& u);
/// R^{ij}_{kl} = g^{is} R^j_{slk}. This orientation gives the unit sphere
/// constant curvature +1 and pairs with R^{ij}_{kl} = alpha (V^i_k V^j_l - ...) + gamma (delta delta - ...).
Tensor4 riemann_curvature(const Metric& g, const Tensor3& gamma, const std::vector<Symbol>& u);

/// nabla_k V^i_j as D(k, i, j).
Tensor3 covariant_derivative_11(const Tensor3& gamma, const ExprMatrix& V, const std::vector<Symbol>& u);

}  // namespace hamforge
