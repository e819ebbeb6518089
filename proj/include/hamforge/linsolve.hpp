#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hamforge/expr.hpp"

namespace hamforge {

inline bool is_zero(const mpq_class& q) { return sgn(q) == 0; }
inline bool is_zero(const Expr& e) { return e.is_zero(); }

/// One linear equation sum_j a_j x_j = rhs, entries sorted by column.
template <class Scalar>
struct LinRow {
  std::vector<std::pair<int, Scalar>> entries;
  Scalar rhs{0};

  bool is_trivial() const { return entries.empty() && is_zero(rhs); }
  friend bool operator==(const LinRow& a, const LinRow& b) { return a.entries == b.entries && a.rhs == b.rhs; }
};

/// Sparse linear system over Q or over a rational-function field.
template <class Scalar>
struct LinSystem {
  std::vector<Symbol> unknowns;  // column j is unknowns[j]
  std::vector<LinRow<Scalar>> rows;
  /// Substitutions already applied to produce `rows` (unknown, value).
  std::vector<std::pair<Symbol, Scalar>> history;

  int columns() const { return static_cast<int>(unknowns.size()); }
  void add_row(LinRow<Scalar> r) { rows.push_back(std::move(r)); }
};

/// Affine solution space in reduced row echelon form.
///
/// Pivot column p satisfies x_p = rhs_p - sum_f c_{p,f} x_f over free columns f.
template <class Scalar>
struct SolutionSpace {
  int columns = 0;
  bool consistent = true;
  std::optional<std::size_t> witness_row;  // index of an inconsistent row of the input
  std::map<int, LinRow<Scalar>> pivots;    // pivot column -> row with coefficient 1 at the pivot

  std::size_t rank() const { return pivots.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(columns) - pivots.size(); }
  std::vector<int> free_columns() const {
    std::vector<int> f;
    for (int c = 0; c < columns; ++c)
      if (!pivots.count(c)) f.push_back(c);
    return f;
  }

  /// Value of every unknown as particular solution plus free parameters:
  /// result[j] maps -1 to the constant part and free column f to its coefficient.
  std::vector<std::map<int, Scalar>> parametrization() const {
    std::vector<std::map<int, Scalar>> out(static_cast<std::size_t>(columns));
    for (int c = 0; c < columns; ++c) {
      auto it = pivots.find(c);
      if (it == pivots.end()) {
        out[c][c] = Scalar(1);
        continue;
      }
      if (!is_zero(it->second.rhs)) out[c][-1] = it->second.rhs;
      for (const auto& [f, a] : it->second.entries)
        if (f != c) out[c][f] = -a;
    }
    return out;
  }

  friend bool operator==(const SolutionSpace& a, const SolutionSpace& b) {
    return a.columns == b.columns && a.consistent == b.consistent && a.pivots == b.pivots;
  }
};

namespace detail {

template <class Scalar>
using WorkRow = std::map<int, Scalar>;

template <class Scalar>
void axpy(WorkRow<Scalar>& row, Scalar& rhs, const Scalar& factor, const LinRow<Scalar>& p) {
  for (const auto& [c, a] : p.entries) {
    auto [it, fresh] = row.try_emplace(c, Scalar(0));
    it->second = it->second - factor * a;
    if (is_zero(it->second)) row.erase(it);
  }
  rhs = rhs - factor * p.rhs;
}

}  // namespace detail

/// Incremental echelon form; rows can be inserted in any order and the
/// final reduced form does not depend on that order.
template <class Scalar>
class Echelon {
 public:
  explicit Echelon(int columns) { space_.columns = columns; }

  /// Reduces a row against the current pivots.
  std::pair<detail::WorkRow<Scalar>, Scalar> reduce(const LinRow<Scalar>& r) const {
    detail::WorkRow<Scalar> row(r.entries.begin(), r.entries.end());
    Scalar rhs = r.rhs;
    auto it = row.begin();
    while (it != row.end()) {
      auto p = space_.pivots.find(it->first);
      if (p == space_.pivots.end()) {
        ++it;
        continue;
      }
      const int col = it->first;
      const Scalar factor = it->second;
      detail::axpy(row, rhs, factor, p->second);
      it = row.upper_bound(col);
    }
    return {std::move(row), std::move(rhs)};
  }

  /// Inserts a row. Returns false when it is inconsistent with the rows so far.
  bool insert(const LinRow<Scalar>& r, std::size_t source_index) {
    auto [row, rhs] = reduce(r);
    if (row.empty()) {
      if (!is_zero(rhs) && space_.consistent) {
        space_.consistent = false;
        space_.witness_row = source_index;
      }
      return is_zero(rhs);
    }
    const int lead = row.begin()->first;
    const Scalar inv = Scalar(1) / row.begin()->second;
    LinRow<Scalar> p;
    for (auto& [c, a] : row) p.entries.emplace_back(c, c == lead ? Scalar(1) : a * inv);
    p.rhs = rhs * inv;
    space_.pivots.emplace(lead, std::move(p));
    return true;
  }

  /// Back-substitution to reduced row echelon form.
  SolutionSpace<Scalar> finish() const {
    SolutionSpace<Scalar> s = space_;
    for (auto it = s.pivots.rbegin(); it != s.pivots.rend(); ++it) {
      LinRow<Scalar>& row = it->second;
      detail::WorkRow<Scalar> work(row.entries.begin(), row.entries.end());
      Scalar rhs = row.rhs;
      bool changed = false;
      for (auto e = std::next(work.begin()); e != work.end();) {
        auto p = s.pivots.find(e->first);
        if (p == s.pivots.end()) {
          ++e;
          continue;
        }
        const int col = e->first;
        const Scalar factor = e->second;
        detail::axpy(work, rhs, factor, p->second);
        changed = true;
        e = work.upper_bound(col);
      }
      if (changed) {
        row.entries.assign(work.begin(), work.end());
        row.rhs = rhs;
      }
    }
    return s;
  }

  const SolutionSpace<Scalar>& state() const { return space_; }
  std::size_t rank() const { return space_.pivots.size(); }
  bool consistent() const { return space_.consistent; }

 private:
  SolutionSpace<Scalar> space_;
};

/// Exact solve; pivots are leading columns in unknown declaration order.
template <class Scalar>
SolutionSpace<Scalar> solve(const LinSystem<Scalar>& sys) {
  Echelon<Scalar> e(sys.columns());
  for (std::size_t i = 0; i < sys.rows.size(); ++i) e.insert(sys.rows[i], i);
  return e.finish();
}

/// True when every row of `sys` holds on the whole solution space.
template <class Scalar>
bool satisfies(const SolutionSpace<Scalar>& s, const LinSystem<Scalar>& sys, std::size_t* failing = nullptr) {
  Echelon<Scalar> e(s.columns);
  for (const auto& [c, row] : s.pivots) e.insert(row, 0);
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    auto [row, rhs] = e.reduce(sys.rows[i]);
    if (!row.empty() || !is_zero(rhs)) {
      if (failing) *failing = i;
      return false;
    }
  }
  return true;
}

/// Progress record written after each batch.
template <class Scalar>
struct Checkpoint {
  std::size_t batch = 0;
  std::size_t rows_done = 0;
  std::size_t rows_dropped = 0;                     // rows already implied by earlier batches
  std::vector<std::pair<int, Scalar>> resolved;     // columns with a fixed value
  std::size_t remaining_rows = 0;
  std::size_t rank = 0;
};

template <class Scalar>
struct BatchedResult {
  SolutionSpace<Scalar> space;
  std::size_t batches = 0;
  std::optional<std::size_t> failed_batch;  // batch index where inconsistency appeared
  bool verified = false;
};

/// Solves batch by batch. Each batch is reduced against the partial solution
/// (the substitution step), rows that reduce to 0 = 0 are dropped, the rest
/// enter the echelon form. `verify` is called with the final space and must
/// check it against the full original system.
template <class Scalar>
BatchedResult<Scalar> solve_batched(const LinSystem<Scalar>& sys, std::size_t batch_size,
                                    const std::function<bool(const SolutionSpace<Scalar>&)>& verify,
                                    const std::function<void(const Checkpoint<Scalar>&)>& checkpoint = {}) {
  if (batch_size == 0) throw InvalidInput("batch size must be at least 1");
  Echelon<Scalar> e(sys.columns());
  BatchedResult<Scalar> out;
  std::size_t dropped = 0;
  for (std::size_t start = 0; start < sys.rows.size(); start += batch_size) {
    const std::size_t stop = std::min(sys.rows.size(), start + batch_size);
    for (std::size_t i = start; i < stop; ++i) {
      const std::size_t before = e.rank();
      const bool ok = e.insert(sys.rows[i], i);
      if (ok && e.rank() == before) ++dropped;
    }
    ++out.batches;
    if (!e.consistent() && !out.failed_batch) out.failed_batch = out.batches - 1;
    if (checkpoint) {
      Checkpoint<Scalar> cp;
      cp.batch = out.batches - 1;
      cp.rows_done = stop;
      cp.rows_dropped = dropped;
      cp.remaining_rows = sys.rows.size() - stop;
      cp.rank = e.rank();
      SolutionSpace<Scalar> partial = e.finish();
      for (const auto& [c, row] : partial.pivots)
        if (row.entries.size() == 1) cp.resolved.emplace_back(c, row.rhs);
      checkpoint(cp);
    }
    if (out.failed_batch) break;
  }
  out.space = e.finish();
  out.verified = out.space.consistent && (!verify || verify(out.space));
  return out;
}

/// Drops duplicate rows (after scaling each to a leading coefficient of 1).
template <class Scalar>
LinSystem<Scalar> deduplicate(const LinSystem<Scalar>& sys) {
  LinSystem<Scalar> out;
  out.unknowns = sys.unknowns;
  out.history = sys.history;
  std::vector<LinRow<Scalar>> seen;
  std::map<std::size_t, std::vector<std::size_t>> buckets;
  for (const auto& r : sys.rows) {
    if (r.is_trivial()) continue;
    LinRow<Scalar> n = r;
    const Scalar lead = n.entries.empty() ? n.rhs : n.entries.front().second;
    for (auto& [c, a] : n.entries) a = a / lead;
    n.rhs = n.rhs / lead;
    std::size_t h = n.entries.size();
    for (const auto& [c, a] : n.entries) h = h * 131u + static_cast<std::size_t>(c);
    auto& bucket = buckets[h];
    bool dup = false;
    for (auto idx : bucket)
      if (out.rows[idx] == n) {
        dup = true;
        break;
      }
    if (dup) continue;
    bucket.push_back(out.rows.size());
    out.rows.push_back(std::move(n));
  }
  return out;
}

/// Collects coefficients of polynomial identities.
///
/// Each identity is cleared of its denominator (which must not involve the
/// unknowns), expanded, and split by monomials in `collect`. Every coefficient
/// must be affine in the unknowns; its coefficients go into one row.
/// Scalar = mpq_class requires everything else to be numeric; Scalar = Expr
/// keeps the remaining symbols (parameters) in the row coefficients.
template <class Scalar>
LinSystem<Scalar> collect_coefficients(const std::vector<Expr>& identities, const std::vector<Symbol>& unknowns,
                                       const std::vector<Symbol>& collect);

extern template LinSystem<mpq_class> collect_coefficients(const std::vector<Expr>&, const std::vector<Symbol>&,
                                                          const std::vector<Symbol>&);
extern template LinSystem<Expr> collect_coefficients(const std::vector<Expr>&, const std::vector<Symbol>&,
                                                     const std::vector<Symbol>&);

/// Substitutes a solution into an expression that is affine in the unknowns.
Expr substitute_solution(const Expr& e, const std::vector<Symbol>& unknowns,
                         const std::vector<std::map<int, mpq_class>>& values, const std::map<int, Expr>& free_values);
Expr substitute_solution(const Expr& e, const std::vector<Symbol>& unknowns,
                         const std::vector<std::map<int, Expr>>& values, const std::map<int, Expr>& free_values);

}  // namespace hamforge
