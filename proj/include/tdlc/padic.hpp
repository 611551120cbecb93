#pragma once

// Bounded-precision model of the Bruhat-Tits tree of GL2(Q_p) modulo
// scalars. Vertices are lattice classes in Hermite normal form; matrices act
// on column bases.

#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace tdlc::padic {

/// Element of Z_p known modulo p^prec.
class PAdicInt {
public:
  PAdicInt() = default;
  PAdicInt(int p, int prec, std::int64_t v = 0);
  static PAdicInt pow_p(int p, int prec, int k);

  int p() const { return p_; }
  int prec() const { return prec_; }
  std::int64_t residue() const { return v_; }
  std::int64_t modulus() const;

  bool is_zero() const { return v_ == 0; }
  /// prec when the residue is zero.
  int valuation() const;
  bool is_unit() const { return v_ % p_ != 0; }
  PAdicInt inverse() const;
  /// Exact division by p^k; the result is known modulo p^(prec - k).
  PAdicInt div_p(int k) const;
  PAdicInt with_prec(int prec) const;

  PAdicInt operator+(const PAdicInt& o) const;
  PAdicInt operator-(const PAdicInt& o) const;
  PAdicInt operator*(const PAdicInt& o) const;
  PAdicInt operator-() const;
  bool operator==(const PAdicInt& o) const { return p_ == o.p_ && v_ == o.v_; }

private:
  int p_ = 2;
  int prec_ = 1;
  std::int64_t v_ = 0;
};

/// p^-den * n, n an integral matrix (row-major).
struct Mat2 {
  std::array<PAdicInt, 4> n;
  int den = 0;

  const PAdicInt& at(int i, int j) const { return n[2 * i + j]; }
  PAdicInt& at(int i, int j) { return n[2 * i + j]; }
  int p() const { return n[0].p(); }
  int prec() const { return n[0].prec(); }

  static Mat2 integral(int p, int prec, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);
  static Mat2 identity(int p, int prec) { return integral(p, prec, 1, 0, 0, 1); }
  /// diag(p, 1)
  static Mat2 standard_g(int p, int prec) { return integral(p, prec, p, 0, 0, 1); }
  /// u_a with a = num / p^k.
  static Mat2 unipotent(int p, int prec, std::int64_t num, int k = 0);
  /// Entries as strings "n" or "n/p^k", row-major, e.g. [["1","1/p^2"],["0","1"]].
  static Mat2 parse(const nlohmann::json& j, int p, int prec);

  Mat2 operator*(const Mat2& o) const;
  /// Valuation of the determinant of the integral part.
  int det_valuation() const;
};

/// The class of the lattice spanned by the columns of [[p^a, c], [0, p^b]],
/// with 0 <= c < p^a and not all of p^a, c, p^b divisible by p. The
/// representative lies in L0 but not in p L0, and d([L], [L0]) = a + b.
struct LatticeClass {
  int p = 2;
  int a = 0;
  int b = 0;
  std::int64_t c = 0;

  static LatticeClass origin(int p) { return {p, 0, 0, 0}; }
  /// The axis lattices L_i of diag(p, 1): L_i = <p^i e1, e2> for i >= 0 and
  /// <e1, p^-i e2> for i < 0.
  static LatticeClass axis(int p, int i);

  int depth() const { return a + b; }
  Mat2 basis(int prec) const;
  std::string str() const;
  nlohmann::json to_json() const;

  auto operator<=>(const LatticeClass&) const = default;
};

/// Hermite reduction of the column lattice, then division by the largest
/// power of p. Throws HorizonError when the precision cannot resolve it.
LatticeClass canonicalize(const Mat2& basis);
LatticeClass act(const Mat2& m, const LatticeClass& l, int prec);
/// Class of the column lattice of [[p^a, c], [0, p^b]] for any a, b >= 0 and
/// integer c.
LatticeClass from_triangular(int p, int a, int b, __int128 c);
/// v(det N) - 2 min v(N) for N = adj(B1) B2: the elementary divisor gap.
/// Exact integer arithmetic on the canonical bases.
int distance(const LatticeClass& l1, const LatticeClass& l2);
/// The p + 1 classes at distance one: the index-p sublattices containing pL.
std::vector<LatticeClass> neighbors(const LatticeClass& l);
/// All classes within distance r of L0, by breadth-first search.
std::vector<LatticeClass> ball(int p, int r);

/// P = 2R + 4.
int default_precision(int radius);

/// u_a for a = 0, ..., p^R - 1.
std::vector<Mat2> w_sample(int p, int radius, int prec);
std::set<LatticeClass> fixed_set(const std::vector<Mat2>& s, int p, int radius, int prec = -1);
/// Some L_-n with n >= 0 lies within distance n of l.
bool in_horoball(const LatticeClass& l);
std::set<LatticeClass> horoball_Z0(int p, int radius);

struct Sl2Report {
  int p = 0;
  int radius = 0;
  int prec = 0;
  std::size_t ball_size = 0;
  std::size_t fixed_size = 0;
  std::size_t z0_size = 0;
  bool regular = false;           // every ball vertex has p + 1 neighbours
  bool fixed_equals_z0 = false;   // X^W = Z0 on the ball
  bool sample_stable = false;     // enlarging the W sample changes nothing
  bool z0_in_gz0 = false;
  bool strict = false;            // g Z0 has a ball vertex outside Z0
  bool covers = false;            // the translates g^n Z0, n <= R, cover the ball
  bool ok() const {
    return regular && fixed_equals_z0 && sample_stable && z0_in_gz0 && strict && covers;
  }
  nlohmann::json to_json() const;
};

Sl2Report verify_sl2(int p, int radius);

}  // namespace tdlc::padic
