#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hamforge/conditions.hpp"
#include "hamforge/operators.hpp"
#include "hamforge/systems.hpp"

namespace hamforge {

/// Named artifacts of one pipeline run, persisted as text.
///
/// Symbols are declared in a fixed order (parameters, then the jet space), so
/// a reloaded session prints every expression exactly as it was saved.
class Session {
 public:
  static constexpr int format_version = 1;

  Session();
  Session(Session&&) noexcept;
  Session& operator=(Session&&) noexcept;
  ~Session();

  /// Declares the parameters and a jet space with n fields. Only once.
  void init(int n, const std::vector<std::string>& params, int max_order = 10);
  bool initialized() const { return jet_ != nullptr; }

  Workspace& workspace() { return *ws_; }
  const Workspace& workspace() const { return *ws_; }
  JetSpace& jet();
  const JetSpace& jet() const;
  const std::vector<Symbol>& params() const { return params_; }

  /// The fixed case when one was requested, else every sign case.
  std::vector<ParamCase> cases() const;
  /// Parameters still free (empty once a case is fixed).
  std::vector<Symbol> free_params() const { return fixed ? std::vector<Symbol>{} : params_; }
  /// Parses "lam=1,mu=-1".
  void fix_case(std::string_view assignments);

  std::optional<ParamCase> fixed;
  std::optional<HydroSystem> system;
  std::optional<FirstOrderCertificate> first_order;
  std::optional<ExprMatrix> third_order;  // h_{ij}
  std::size_t third_order_dimension = 0;
  std::map<std::string, WnlOperator> operators;
  std::map<std::string, std::string> verdicts;

  std::string save() const;
  static Session load(std::string_view text);

 private:
  std::unique_ptr<Workspace> ws_;
  std::unique_ptr<JetSpace> jet_;
  std::vector<Symbol> params_;
};

}  // namespace hamforge
