#pragma once

// Finite permutation groups on small domains, enumerated in full.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tdlc/tree.hpp"

namespace tdlc {

class Perm {
public:
  Perm() = default;
  explicit Perm(std::vector<std::uint8_t> images);
  static Perm identity(std::size_t m);

  std::size_t size() const { return img_.size(); }
  std::uint8_t operator()(std::size_t x) const { return img_[x]; }
  const std::vector<std::uint8_t>& images() const { return img_; }

  /// (p * q)(x) = p(q(x)).
  Perm operator*(const Perm& q) const;
  Perm inverse() const;
  bool is_identity() const;

  std::string str() const;
  static Perm parse(const std::string& text);

  auto operator<=>(const Perm&) const = default;
  bool operator==(const Perm&) const = default;

private:
  std::vector<std::uint8_t> img_;
};

/// Transposition of a and b on {0..m-1}.
Perm transposition(std::size_t m, std::size_t a, std::size_t b);

class PermGroup {
public:
  static constexpr std::size_t kDefaultBound = 1'000'000;

  PermGroup() = default;
  /// Closes the generators under products; throws when the group outgrows bound.
  PermGroup(std::size_t domain, std::vector<Perm> generators,
            std::size_t bound = kDefaultBound);

  static PermGroup symmetric(std::size_t m);
  static PermGroup cyclic(std::size_t m);
  static PermGroup trivial(std::size_t m);
  /// Builds a group from an explicit, already closed element list.
  static PermGroup from_elements(std::size_t domain, std::vector<Perm> elements);

  std::size_t domain() const { return domain_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Perm>& generators() const { return gens_; }
  /// Sorted element list.
  const std::vector<Perm>& elements() const { return elements_; }

  bool contains(const Perm& p) const;
  /// Position of p in elements(), or -1.
  int index_of(const Perm& p) const;

  std::vector<std::size_t> orbit(std::size_t x) const;
  PermGroup point_stabilizer(std::size_t x) const;

  bool operator==(const PermGroup& o) const {
    return domain_ == o.domain_ && elements_ == o.elements_;
  }

private:
  std::size_t domain_ = 0;
  std::vector<Perm> gens_;
  std::vector<Perm> elements_;
};

/// True iff h^-1 g lies in B.
bool in_coset(const Perm& g, const Perm& h, const PermGroup& b);

/// Color index of the pair (i, j) in Z/n x Z/n.
inline std::size_t wreath_color(std::size_t n, std::size_t i, std::size_t j) {
  return (i % n) + n * (j % n);
}

/// Sym(n) wr C_n on Z/n x Z/n: the j-th Sym(n) acts on column j and the
/// cyclic top sends (i, j) to (i, j+1).
PermGroup wreath_sym_cyclic(std::size_t n);

/// The top generator (i, j) -> (i, j+1).
Perm wreath_top(std::size_t n);

/// The block S_j: Sym(n) acting on column j, fixing the other columns.
PermGroup wreath_column_block(std::size_t n, std::size_t j);

}  // namespace tdlc
