#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamforge/geometry.hpp"
#include "hamforge/linsolve.hpp"

namespace hamforge {

/// Concrete values for the declared sign parameters.
using ParamCase = std::map<Symbol, mpq_class>;

/// Every assignment of +1/-1 to `params` (one empty case when there are none).
std::vector<ParamCase> sign_cases(const std::vector<Symbol>& params);

/// The unique representative multilinear in `params` that agrees with e on
/// every sign case. Identity when params is empty.
Expr reduce_sign_cases(const Expr& e, const std::vector<Symbol>& params);
ExprMatrix reduce_sign_cases(const ExprMatrix& m, const std::vector<Symbol>& params);

Metric specialize(const Metric& g, const ParamCase& c);
ExprMatrix substitute(const ExprMatrix& m, const ParamCase& c);

/// One residual of a named condition; indices are 1-based.
struct Residual {
  std::string condition;
  std::vector<int> indices;
  Expr value;
};

struct Report {
  bool passed = true;
  std::vector<Residual> failures;    // nonzero residuals after substitution
  std::optional<ParamCase> failing_case;
  std::size_t checked = 0;
};

/// Substitutes each case into every residual; the first case with a nonzero
/// residual is reported (at most `limit` failures are kept).
Report evaluate(const std::vector<Residual>& residuals, const std::vector<ParamCase>& cases, std::size_t limit = 16);

std::string describe(const Residual& r, const Workspace& ws);

/// H_{ih}V^h_j - H_{jh}V^h_i for i < j.
std::vector<Residual> check_symmetry_gV(const ExprMatrix& H, const ExprMatrix& V);

/// Contravariant form g^{ik}V^j_k - g^{jk}V^i_k for i < j.
std::vector<Residual> check_symmetry_upper(const ExprMatrix& g, const ExprMatrix& V);

struct ConformalFactor {
  Expr f;                                        // up to a constant factor
  std::vector<std::pair<Poly, mpq_class>> powers;  // f = prod P^e
  std::vector<Expr> log_gradient;                // p_k = d_k log f
  Metric g;                                      // g_{ij} = f H_{ij}
};

/// Finds f with g = f H satisfying nabla_k V^i_j = nabla_j V^i_k.
/// Throws MathError for an inconsistent or underdetermined gradient system,
/// a non-closed gradient, or an f outside the power-product class.
ConformalFactor solve_conformal_factor(const JetSpace& jet, const ExprMatrix& H, const ExprMatrix& V);

/// nabla_k V^i_j - nabla_j V^i_k for j < k.
std::vector<Residual> check_flat_velocity(const Metric& g, const ExprMatrix& V, const std::vector<Symbol>& u);

/// R^{ij}_{kl} - alpha(...) - beta(...) - gamma(...) for i < j, k < l.
std::vector<Residual> curvature_residuals(const Metric& g, const ExprMatrix& V, const std::vector<Symbol>& u,
                                          const Expr& alpha, const Expr& beta, const Expr& gamma);

struct CurvatureConstants {
  Expr alpha, beta, gamma;
  bool per_case = false;  // solved case by case, then interpolated
};

/// Solves the curvature condition for constant alpha, beta, gamma. With
/// parameters each sign case is solved over Q and the results are
/// interpolated multilinearly. Throws MathError when no unique constants exist.
CurvatureConstants solve_curvature_constants(const JetSpace& jet, const Metric& g, const ExprMatrix& V,
                                             const std::vector<Symbol>& params);

struct FirstOrderCertificate {
  Metric g;
  Expr alpha, beta, gamma;
  Expr f;  // conformal factor relative to the Haantjes contraction
};

/// Symmetry, flatness-of-V and curvature conditions.
Report check_first_order_hamiltonian(const FirstOrderCertificate& cert, const ExprMatrix& V,
                                     const std::vector<Symbol>& u, const std::vector<ParamCase>& cases);

/// Three-step search: Haantjes contraction, conformal factor, curvature constants. n = 3 only.
/// With parameters the metric and constants are reduced over the sign cases; the
/// free scale is fixed so that the first nonzero constant has leading coefficient 1.
FirstOrderCertificate find_first_order(const JetSpace& jet, const std::vector<Expr>& fluxes,
                                       const std::vector<Symbol>& params);

struct MongeAnsatz {
  int n = 0;
  ExprMatrix h;                    // h_{ij} in the free unknowns
  std::vector<Symbol> unknowns;    // free unknowns
  std::vector<Symbol> all_unknowns;
  std::size_t constraint_rows = 0;
  std::size_t constraint_rank = 0;
  std::size_t dimension() const { return unknowns.size(); }
};

/// Symmetric quadratic h with h_{mk,s} + h_{ks,m} + h_{ms,k} = 0 solved exactly.
MongeAnsatz monge_ansatz(const JetSpace& jet);

/// h_{ij} = sum phi_{ab} psi^a_i psi^b_j over the Pluecker covectors of the line
/// through (1, u) in direction du; phi symmetric and constant. Every such h is a
/// Monge metric, and the Pluecker relations make the map non-injective.
struct PluckerAnsatz {
  ExprMatrix h;
  std::vector<Symbol> unknowns;  // phi_{ab}, a <= b
  std::size_t rank = 0;          // rank of phi -> coefficients of h
  std::size_t kernel() const { return unknowns.size() - rank; }
};

PluckerAnsatz plucker_ansatz(const JetSpace& jet);

struct Identity {
  std::string family;  // "h-symmetry", "c-cyclic" or "hessian"
  std::vector<int> indices;
  Expr value;
};

struct CompatibilitySystem {
  std::vector<Identity> identities;  // all index tuples, zeros included
  LinSystem<Expr> system;            // collected, nonzero rows only
};

/// Second derivatives V^k_{ij} as T(k, i, j).
Tensor3 velocity_hessian(const ExprMatrix& V, const std::vector<Symbol>& u);

std::vector<Identity> compatibility_identities(const ExprMatrix& h, const ExprMatrix& V, const std::vector<Symbol>& u);

CompatibilitySystem assemble_compatibility_system(const MongeAnsatz& ansatz, const ExprMatrix& V,
                                                  const std::vector<Symbol>& u);

/// Only the h-symmetry identities with i, j <= m (sum over the contracted index unrestricted).
CompatibilitySystem restrict_compatibility_system(const CompatibilitySystem& full, int m,
                                                  const std::vector<Symbol>& unknowns,
                                                  const std::vector<Symbol>& u);

struct ThirdOrderSolution {
  SolutionSpace<Expr> space;
  ExprMatrix h;                 // normalized representative when dimension == 1
  std::size_t dimension = 0;
  std::size_t rows = 0;
  std::size_t identities = 0;
  std::size_t batches = 0;
  bool verified = false;
};

/// Solves the compatibility system, optionally seeding with the restricted
/// system for indices <= restrict_to, and normalizes the ray so that the
/// leading coefficient of h(norm_i, norm_j) is 1.
ThirdOrderSolution find_third_order(const JetSpace& jet, const ExprMatrix& V, const std::vector<Symbol>& params = {},
                                    std::size_t batch_size = 64, int restrict_to = 0, int norm_i = -1, int norm_j = -1);

/// Monge condition and c_{msk,l} + h^{pq} c_{pml} c_{qsk} = 0.
Report check_third_order_hamiltonian(const Metric& h, const std::vector<Symbol>& u,
                                     const std::vector<ParamCase>& cases);

/// Compatibility identities of h with V under each case.
Report check_third_order_compatibility(const ExprMatrix& h, const ExprMatrix& V, const std::vector<Symbol>& u,
                                       const std::vector<ParamCase>& cases);

}  // namespace hamforge
