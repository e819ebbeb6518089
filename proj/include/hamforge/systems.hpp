#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hamforge/conditions.hpp"
#include "hamforge/jet.hpp"

namespace hamforge {

/// Constant symmetric nondegenerate eta_{ab}, entries over Q and sign parameters.
struct EtaSpec {
  ExprMatrix eta;
  ExprMatrix inverse;
  std::vector<Symbol> params;  // parameters appearing in eta, in declaration order
  std::string text;            // canonical spelling, rows separated by ';'

  int N() const { return static_cast<int>(eta.rows()); }
};

/// "antidiagonal", "eta4", or rows such as "0,0,1;0,1,0;1,0,0".
/// Identifiers are declared as sign parameters.
EtaSpec parse_eta(std::string_view text, Workspace& ws);

struct HydroSystem {
  int n = 0;
  std::vector<Expr> fluxes;   // u^i_t = D_x fluxes[i]
  std::string provenance;     // "generated-n3 <eta>" or "user-file"
};

struct WdvvN3 {
  Expr equation;  // in u1 = f_xxx, u2 = f_xxt, u3 = f_xtt and fttt
  Symbol fttt;
  HydroSystem system;
};

/// The single associativity equation for N = 3 and the conservative form
/// obtained by solving it for f_ttt. Needs a jet space with three fields.
WdvvN3 generate_wdvv_n3(const JetSpace& jet, const EtaSpec& eta);

/// Parameter names used in a system file, in order of first appearance.
std::vector<std::string> system_file_parameters(std::string_view text);

/// Reads "fields n" followed by "flux <i> = <expr>" lines.
HydroSystem parse_system(std::string_view text, const JetSpace& jet);
/// Only the leading "fields n" line.
int system_file_fields(std::string_view text);

std::string format_system(const HydroSystem& sys, const Workspace& ws);

/// Equal in every sign case of `params`.
bool same_system(const HydroSystem& a, const HydroSystem& b, const std::vector<Symbol>& params);

}  // namespace hamforge
