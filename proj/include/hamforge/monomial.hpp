#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>

#include <boost/container/small_vector.hpp>

namespace hamforge {

/// Power product of variables, stored sparsely as (variable, exponent) words
/// sorted by variable index. Ordered graded-lexicographically with lower
/// variable indices ranking higher.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(std::uint32_t var, std::uint32_t exp = 1) {
    Monomial m;
    if (exp != 0) {
      m.words_.push_back(pack(var, exp));
      m.degree_ = exp;
    }
    return m;
  }

  std::size_t size() const noexcept { return words_.size(); }
  bool is_one() const noexcept { return words_.empty(); }
  std::uint32_t degree() const noexcept { return degree_; }
  std::uint32_t var_at(std::size_t i) const noexcept { return words_[i] >> 16; }
  std::uint32_t exp_at(std::size_t i) const noexcept { return words_[i] & 0xFFFFu; }

  std::uint32_t exponent(std::uint32_t var) const noexcept {
    for (auto w : words_) {
      if ((w >> 16) == var) return w & 0xFFFFu;
      if ((w >> 16) > var) break;
    }
    return 0;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.words_.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const auto va = a.var_at(i), vb = b.var_at(j);
      if (va == vb) {
        r.words_.push_back(pack(va, a.exp_at(i) + b.exp_at(j)));
        ++i, ++j;
      } else if (va < vb) {
        r.words_.push_back(a.words_[i++]);
      } else {
        r.words_.push_back(b.words_[j++]);
      }
    }
    while (i < a.size()) r.words_.push_back(a.words_[i++]);
    while (j < b.size()) r.words_.push_back(b.words_[j++]);
    r.degree_ = a.degree_ + b.degree_;
    return r;
  }

  /// True when this monomial divides `other`.
  bool divides(const Monomial& other) const noexcept {
    if (degree_ > other.degree_) return false;
    std::size_t j = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto v = var_at(i);
      while (j < other.size() && other.var_at(j) < v) ++j;
      if (j == other.size() || other.var_at(j) != v || other.exp_at(j) < exp_at(i)) return false;
    }
    return true;
  }

  /// Quotient; requires `b.divides(*this)`.
  Monomial operator/(const Monomial& b) const {
    Monomial r;
    std::size_t j = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto v = var_at(i);
      std::uint32_t e = exp_at(i);
      if (j < b.size() && b.var_at(j) == v) e -= b.exp_at(j++);
      if (e != 0) r.words_.push_back(pack(v, e));
    }
    r.degree_ = degree_ - b.degree_;
    return r;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
      const auto va = a.var_at(i), vb = b.var_at(j);
      if (va == vb) {
        const auto e = std::min(a.exp_at(i), b.exp_at(j));
        r.words_.push_back(pack(va, e));
        r.degree_ += e;
        ++i, ++j;
      } else if (va < vb) {
        ++i;
      } else {
        ++j;
      }
    }
    return r;
  }

  static Monomial lcm(const Monomial& a, const Monomial& b) { return (a * b) / gcd(a, b); }

  /// Same monomial with `var` set to exponent `exp` (0 removes it).
  Monomial with_exponent(std::uint32_t var, std::uint32_t exp) const {
    Monomial r;
    bool placed = false;
    for (std::size_t i = 0; i < size(); ++i) {
      const auto v = var_at(i);
      if (!placed && v >= var) {
        placed = true;
        if (exp != 0) r.words_.push_back(pack(var, exp));
        if (v == var) continue;
      }
      r.words_.push_back(words_[i]);
    }
    if (!placed && exp != 0) r.words_.push_back(pack(var, exp));
    r.degree_ = 0;
    for (std::size_t i = 0; i < r.size(); ++i) r.degree_ += r.exp_at(i);
    return r;
  }

  /// Three-way graded-lex comparison: positive when *this ranks higher.
  int compare(const Monomial& o) const noexcept {
    if (degree_ != o.degree_) return degree_ > o.degree_ ? 1 : -1;
    std::size_t i = 0;
    for (; i < size() && i < o.size(); ++i) {
      const auto va = var_at(i), vb = o.var_at(i);
      if (va != vb) return va < vb ? 1 : -1;
      const auto ea = exp_at(i), eb = o.exp_at(i);
      if (ea != eb) return ea > eb ? 1 : -1;
    }
    if (i < size()) return 1;
    if (i < o.size()) return -1;
    return 0;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) noexcept { return a.words_ == b.words_; }

  std::size_t hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto w : words_) h = (h ^ w) * 0x100000001b3ull + (h >> 29);
    return h;
  }

 private:
  static std::uint32_t pack(std::uint32_t var, std::uint32_t exp) { return (var << 16) | exp; }

  boost::container::small_vector<std::uint32_t, 4> words_;
  std::uint32_t degree_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept { return m.hash(); }
};

}  // namespace hamforge
