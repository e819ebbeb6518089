#include "hamforge/workspace.hpp"

#include <cctype>

#include "hamforge/error.hpp"

namespace hamforge {

bool is_identifier(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return false;
  for (char ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
  }
  return true;
}

Symbol Workspace::declare(SymbolInfo info) {
  if (!is_identifier(info.name)) throw InvalidInput("invalid symbol name '" + info.name + "'");
  if (by_name_.contains(info.name)) throw InvalidInput("symbol '" + info.name + "' already declared");
  if (symbols_.size() >= 0xFFFF) throw InvalidInput("too many symbols");
  const auto index = static_cast<std::uint32_t>(symbols_.size());
  by_name_.emplace(info.name, index);
  symbols_.push_back(std::move(info));
  return Symbol{index};
}

Symbol Workspace::declare(std::string name, SymbolKind kind) {
  SymbolInfo info;
  info.name = std::move(name);
  info.kind = kind;
  return declare(std::move(info));
}

Symbol Workspace::ensure(std::string name, SymbolKind kind) {
  if (auto s = find(name)) {
    if (info(*s).kind != kind) throw InvalidInput("symbol '" + name + "' already declared with another kind");
    return *s;
  }
  return declare(std::move(name), kind);
}

std::optional<Symbol> Workspace::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return Symbol{it->second};
}

Symbol Workspace::at(std::string_view name) const {
  if (auto s = find(name)) return *s;
  throw InvalidInput("unknown symbol '" + std::string(name) + "'");
}

std::vector<Symbol> Workspace::symbols_of_kind(SymbolKind kind) const {
  std::vector<Symbol> out;
  for (std::uint32_t i = 0; i < symbols_.size(); ++i) {
    if (symbols_[i].kind == kind) out.push_back(Symbol{i});
  }
  return out;
}

}  // namespace hamforge
