#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hamforge {

/// Handle to a declared symbol. The index is the declaration position and
/// doubles as the variable order used by monomial comparison.
struct Symbol {
  std::uint32_t index = 0;
  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol, Symbol) = default;
};

enum class SymbolKind {
  field,      // u^i
  jet,        // u^i_{kx}, k >= 1
  parameter,  // lam, mu, alp, ...
  unknown,    // unknown constants of an ansatz
  covector,   // psi^{(s)}_{i,k}
  nonlocal,   // phi_{op,alpha,s}
};

struct SymbolInfo {
  std::string name;
  SymbolKind kind = SymbolKind::parameter;
  int field = -1;  // field / component index (0-based) for field, jet, covector
  int order = 0;   // jet order for jet and covector
  int arg = -1;    // argument index for covector and nonlocal
  int tail = -1;   // tail index for nonlocal
  std::string tag; // operator tag for nonlocal
};

/// Symbol table shared by every expression of one computation.
///
/// Names are unique and the kind of a symbol never changes. Expressions do
/// not carry a pointer to their workspace; mixing expressions built over two
/// different workspaces is meaningless.
class Workspace {
 public:
  Symbol declare(SymbolInfo info);
  Symbol declare(std::string name, SymbolKind kind);
  /// Returns the existing symbol when `name` is already declared with `kind`.
  Symbol ensure(std::string name, SymbolKind kind);

  std::optional<Symbol> find(std::string_view name) const;
  Symbol at(std::string_view name) const;
  const SymbolInfo& info(Symbol s) const { return symbols_.at(s.index); }
  const std::string& name(Symbol s) const { return info(s).name; }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::vector<Symbol> symbols_of_kind(SymbolKind kind) const;

  /// When set, the parser declares unknown identifiers as parameters.
  bool auto_declare = false;

 private:
  std::vector<SymbolInfo> symbols_;
  std::unordered_map<std::string, std::uint32_t> by_name_;
};

bool is_identifier(std::string_view name);

}  // namespace hamforge
