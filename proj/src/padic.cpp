#include "tdlc/padic.hpp"

#include <algorithm>
#include <regex>

#include "tdlc/tree.hpp"

namespace tdlc::padic {

namespace {

using i128 = __int128;

i128 ipow(int p, int k) {
  i128 r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

// Valuation of a non-zero integer.
int ival(i128 x, int p) {
  if (x == 0) throw Error("valuation of zero");
  if (x < 0) x = -x;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

i128 mod(i128 x, i128 m) {
  i128 r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

PAdicInt::PAdicInt(int p, int prec, std::int64_t v) : p_(p), prec_(prec) {
  if (p < 2) throw Error("p must be a prime >= 2");
  if (prec < 1) throw HorizonError("p-adic precision exhausted");
  i128 m = ipow(p, prec);
  if (m > (i128(1) << 62)) throw Error("precision too large for 64-bit residues");
  v_ = static_cast<std::int64_t>(mod(v, m));
}

PAdicInt PAdicInt::pow_p(int p, int prec, int k) {
  if (k >= prec) return PAdicInt(p, prec, 0);
  return PAdicInt(p, prec, static_cast<std::int64_t>(ipow(p, k)));
}

std::int64_t PAdicInt::modulus() const { return static_cast<std::int64_t>(ipow(p_, prec_)); }

int PAdicInt::valuation() const {
  if (v_ == 0) return prec_;
  return ival(v_, p_);
}

PAdicInt PAdicInt::inverse() const {
  if (!is_unit()) throw Error("inverse of a non-unit");
  i128 m = modulus();
  i128 r0 = m, r1 = v_, s0 = 0, s1 = 1;
  while (r1 != 0) {
    i128 q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  return PAdicInt(p_, prec_, static_cast<std::int64_t>(mod(s0, m)));
}

PAdicInt PAdicInt::div_p(int k) const {
  if (k == 0) return *this;
  if (valuation() < k) throw Error("division by p^k of an element with smaller valuation");
  return PAdicInt(p_, prec_ - k, static_cast<std::int64_t>(v_ / ipow(p_, k)));
}

PAdicInt PAdicInt::with_prec(int prec) const {
  if (prec > prec_) throw HorizonError("cannot raise p-adic precision");
  return PAdicInt(p_, prec, v_);
}

PAdicInt PAdicInt::operator+(const PAdicInt& o) const {
  int prec = std::min(prec_, o.prec_);
  return PAdicInt(p_, prec, static_cast<std::int64_t>(mod(i128(v_) + o.v_, ipow(p_, prec))));
}

PAdicInt PAdicInt::operator-(const PAdicInt& o) const { return *this + (-o); }

PAdicInt PAdicInt::operator*(const PAdicInt& o) const {
  int prec = std::min(prec_, o.prec_);
  return PAdicInt(p_, prec, static_cast<std::int64_t>(mod(i128(v_) * o.v_, ipow(p_, prec))));
}

PAdicInt PAdicInt::operator-() const { return PAdicInt(p_, prec_, v_ == 0 ? 0 : modulus() - v_); }

Mat2 Mat2::integral(int p, int prec, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
  return {{PAdicInt(p, prec, a), PAdicInt(p, prec, b), PAdicInt(p, prec, c), PAdicInt(p, prec, d)}, 0};
}

Mat2 Mat2::unipotent(int p, int prec, std::int64_t num, int k) {
  auto pk = static_cast<std::int64_t>(ipow(p, k));
  return {{PAdicInt(p, prec, pk), PAdicInt(p, prec, num), PAdicInt(p, prec, 0), PAdicInt(p, prec, pk)}, k};
}

Mat2 Mat2::parse(const nlohmann::json& j, int p, int prec) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
      j[1].size() != 2)
    throw Error("matrix must be a 2x2 JSON array");
  static const std::regex entry(R"(\s*(-?\d+)\s*(?:/\s*p\^(\d+))?\s*)");
  std::array<std::pair<std::int64_t, int>, 4> raw;
  int den = 0;
  for (int i = 0; i < 4; ++i) {
    const auto& e = j[i / 2][i % 2];
    std::string text = e.is_string() ? e.get<std::string>() : e.dump();
    std::smatch m;
    if (!std::regex_match(text, m, entry)) throw Error("bad matrix entry '" + text + "'");
    raw[i] = {std::stoll(m[1]), m[2].matched ? std::stoi(m[2]) : 0};
    den = std::max(den, raw[i].second);
  }
  Mat2 out;
  out.den = den;
  for (int i = 0; i < 4; ++i)
    out.n[i] = PAdicInt(p, prec, raw[i].first) * PAdicInt::pow_p(p, prec, den - raw[i].second);
  if (out.det_valuation() >= prec) throw Error("matrix is singular at the working precision");
  return out;
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) r.at(i, k) = at(i, 0) * o.at(0, k) + at(i, 1) * o.at(1, k);
  r.den = den + o.den;
  return r;
}

int Mat2::det_valuation() const { return (at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0)).valuation(); }

LatticeClass LatticeClass::axis(int p, int i) {
  if (i >= 0) return {p, i, 0, 0};
  return {p, 0, -i, 0};
}

Mat2 LatticeClass::basis(int prec) const {
  return {{PAdicInt::pow_p(p, prec, a), PAdicInt(p, prec, c), PAdicInt(p, prec, 0), PAdicInt::pow_p(p, prec, b)},
          0};
}

std::string LatticeClass::str() const {
  return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
}

nlohmann::json LatticeClass::to_json() const { return {{"a", a}, {"b", b}, {"c", c}}; }

LatticeClass from_triangular(int p, int a, int b, i128 c) {
  c = mod(c, ipow(p, a));
  int m = std::min(a, b);
  if (c != 0) m = std::min(m, ival(c, p));
  LatticeClass out{p, a - m, b - m, 0};
  out.c = static_cast<std::int64_t>(mod(c / ipow(p, m), ipow(p, out.a)));
  return out;
}

LatticeClass canonicalize(const Mat2& basis) {
  int p = basis.p();
  PAdicInt x = basis.at(0, 0), y = basis.at(1, 0), u = basis.at(0, 1), w = basis.at(1, 1);
  // Put the column with the smaller bottom valuation second.
  if (y.valuation() < w.valuation()) {
    std::swap(x, u);
    std::swap(y, w);
  }
  if (w.is_zero()) throw HorizonError("lattice basis is degenerate at the working precision");
  int k = w.valuation();
  PAdicInt unit = w.div_p(k);
  PAdicInt f = y.div_p(k) * unit.inverse();
  PAdicInt top = x - f * u;  // first column is now (top, 0)
  if (top.is_zero()) throw HorizonError("lattice basis is degenerate at the working precision");
  int j = top.valuation();
  PAdicInt c = u * unit.inverse();
  if (j > c.prec()) throw HorizonError("precision too small to reduce the lattice basis");
  return from_triangular(p, j, k, i128(c.residue()) % ipow(p, j));
}

LatticeClass act(const Mat2& m, const LatticeClass& l, int prec) {
  Mat2 mm = m;
  for (auto& e : mm.n) e = e.with_prec(std::min(prec, e.prec()));
  return canonicalize(mm * l.basis(mm.prec()));
}

int distance(const LatticeClass& l1, const LatticeClass& l2) {
  if (l1.p != l2.p) throw Error("lattices over different primes");
  int p = l1.p;
  // adj(B1) = [[p^b1, -c1], [0, p^a1]]; N = adj(B1) B2 is upper triangular.
  int v00 = l1.b + l2.a;
  int v11 = l1.a + l2.b;
  i128 n01 = ipow(p, l1.b) * l2.c - i128(l1.c) * ipow(p, l2.b);
  int lo = std::min(v00, v11);
  if (n01 != 0) lo = std::min(lo, ival(n01, p));
  return l1.depth() + l2.depth() - 2 * lo;
}

std::vector<LatticeClass> neighbors(const LatticeClass& l) {
  int p = l.p;
  std::vector<LatticeClass> out;
  // B [[1, 0], [0, p]] and B [[p, t], [0, 1]]: pL plus one line of L / pL.
  out.push_back(from_triangular(p, l.a, l.b + 1, i128(p) * l.c));
  for (int t = 0; t < p; ++t)
    out.push_back(from_triangular(p, l.a + 1, l.b, i128(t) * ipow(p, l.a) + l.c));
  return out;
}

std::vector<LatticeClass> ball(int p, int r) {
  std::vector<LatticeClass> out{LatticeClass::origin(p)};
  std::set<LatticeClass> seen(out.begin(), out.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].depth() >= r) continue;
    for (const auto& n : neighbors(out[i]))
      if (seen.insert(n).second) out.push_back(n);
  }
  return out;
}

int default_precision(int radius) { return 2 * radius + 4; }

std::vector<Mat2> w_sample(int p, int radius, int prec) {
  std::vector<Mat2> out;
  auto n = static_cast<std::int64_t>(ipow(p, radius));
  for (std::int64_t a = 0; a < n; ++a) out.push_back(Mat2::unipotent(p, prec, a));
  return out;
}

std::set<LatticeClass> fixed_set(const std::vector<Mat2>& s, int p, int radius, int prec) {
  if (prec < 0) prec = default_precision(radius);
  std::set<LatticeClass> out;
  for (const auto& v : ball(p, radius)) {
    bool fixed = true;
    for (const auto& m : s)
      if (act(m, v, prec) != v) {
        fixed = false;
        break;
      }
    if (fixed) out.insert(v);
  }
  return out;
}

bool in_horoball(const LatticeClass& l) {
  // d(l, L_-n) - n is non-increasing in n and constant once n >= depth(l).
  for (int n = 0; n <= l.depth(); ++n)
    if (distance(l, LatticeClass::axis(l.p, -n)) <= n) return true;
  return false;
}

std::set<LatticeClass> horoball_Z0(int p, int radius) {
  std::set<LatticeClass> out;
  for (const auto& v : ball(p, radius))
    if (in_horoball(v)) out.insert(v);
  return out;
}

nlohmann::json Sl2Report::to_json() const {
  return {{"p", p},
          {"radius", radius},
          {"precision", prec},
          {"ball_size", ball_size},
          {"fixed_size", fixed_size},
          {"z0_size", z0_size},
          {"regular", regular},
          {"fixed_equals_z0", fixed_equals_z0},
          {"sample_stable", sample_stable},
          {"z0_in_gz0", z0_in_gz0},
          {"strict", strict},
          {"covers", covers},
          {"ok", ok()}};
}

Sl2Report verify_sl2(int p, int radius) {
  Sl2Report r;
  r.p = p;
  r.radius = radius;
  r.prec = default_precision(radius);
  auto b = ball(p, radius);
  r.ball_size = b.size();

  r.regular = true;
  for (const auto& v : b) {
    auto ns = neighbors(v);
    std::set<LatticeClass> distinct(ns.begin(), ns.end());
    bool ok = distinct.size() == static_cast<std::size_t>(p + 1);
    for (const auto& n : ns) ok = ok && distance(v, n) == 1;
    r.regular = r.regular && ok;
  }

  auto fixed = fixed_set(w_sample(p, radius, r.prec), p, radius, r.prec);
  auto more = fixed_set(w_sample(p, radius + 1, r.prec), p, radius, r.prec);
  auto z0 = horoball_Z0(p, radius);
  r.fixed_size = fixed.size();
  r.z0_size = z0.size();
  r.fixed_equals_z0 = fixed == z0;
  r.sample_stable = fixed == more;

  // g^-1 = diag(1, p) up to scalars; v lies in g^n Z0 iff g^-n v lies in Z0.
  Mat2 ginv = Mat2::integral(p, r.prec, 1, 0, 0, p);
  r.z0_in_gz0 = true;
  r.strict = false;
  r.covers = true;
  for (const auto& v : b) {
    bool in_z0 = z0.count(v) > 0;
    LatticeClass w = act(ginv, v, r.prec);
    if (in_z0 && !in_horoball(w)) r.z0_in_gz0 = false;
    if (!in_z0 && in_horoball(w)) r.strict = true;
    bool hit = in_z0;
    for (int n = 1; n <= radius && !hit; ++n) {
      hit = in_horoball(w);
      w = act(ginv, w, r.prec);
    }
    r.covers = r.covers && hit;
  }
  return r;
}

}  // namespace tdlc::padic
