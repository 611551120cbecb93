#include <deque>
#include <map>
#include <random>

#include "doctest.h"
#include "tdlc/padic.hpp"
#include "tdlc/tree.hpp"

using namespace tdlc::padic;

namespace {

// Shortest path inside the ball, by breadth-first search over neighbors().
int bfs_distance(const std::vector<LatticeClass>& b, const LatticeClass& from, const LatticeClass& to) {
  std::set<LatticeClass> in(b.begin(), b.end());
  std::map<LatticeClass, int> dist{{from, 0}};
  std::deque<LatticeClass> q{from};
  while (!q.empty()) {
    auto v = q.front();
    q.pop_front();
    if (v == to) return dist[v];
    for (const auto& n : neighbors(v))
      if (in.count(n) && !dist.count(n)) {
        dist[n] = dist[v] + 1;
        q.push_back(n);
      }
  }
  return -1;
}

int nu(std::int64_t x, int p, int cap) {
  if (x == 0) return cap;
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

}  // namespace

TEST_CASE("p-adic integers") {
  PAdicInt a(3, 4, 10), b(3, 4, 27);
  CHECK((a * b).residue() == (270 % 81));
  CHECK(b.valuation() == 3);
  CHECK(PAdicInt(3, 4, 0).valuation() == 4);
  CHECK((a * a.inverse()).residue() == 1);
  CHECK((-a + a).is_zero());
  CHECK(b.div_p(3).residue() == 1);
  CHECK(b.div_p(3).prec() == 1);
  CHECK_THROWS_AS(a.div_p(1), tdlc::Error);
  CHECK_THROWS_AS(b.inverse(), tdlc::Error);
}

TEST_CASE("canonical lattice classes") {
  int P = 12;
  CHECK(canonicalize(Mat2::identity(2, P)) == LatticeClass::origin(2));
  CHECK(canonicalize(Mat2::integral(2, P, 2, 0, 0, 2)) == LatticeClass::origin(2));
  // <e2, p e1> in either column order is L_1.
  CHECK(canonicalize(Mat2::integral(3, P, 0, 3, 1, 0)) == LatticeClass::axis(3, 1));
  CHECK(canonicalize(Mat2::integral(3, P, 3, 0, 0, 1)) == LatticeClass::axis(3, 1));
  CHECK(act(Mat2::standard_g(3, P), LatticeClass::origin(3), P) == LatticeClass::axis(3, 1));
  // Column operations do not change the class.
  CHECK(canonicalize(Mat2::integral(2, P, 4, 4 + 3, 0, 2)) == canonicalize(Mat2::integral(2, P, 4, 3, 0, 2)));
  CHECK_THROWS_AS(canonicalize(Mat2::integral(2, P, 1, 2, 2, 4)), tdlc::HorizonError);
}

TEST_CASE("spheres have the size of a (p+1)-regular tree") {
  for (int p : {2, 3, 5}) {
    auto b = ball(p, 4);
    std::map<int, std::size_t> sphere;
    for (const auto& v : b) sphere[v.depth()]++;
    CHECK(sphere[0] == 1);
    std::size_t expect = p + 1;
    for (int n = 1; n <= 4; ++n) {
      CHECK(sphere[n] == expect);
      expect *= p;
    }
    for (const auto& v : b) {
      CHECK(distance(v, LatticeClass::origin(p)) == v.depth());
      auto ns = neighbors(v);
      CHECK(std::set<LatticeClass>(ns.begin(), ns.end()).size() == std::size_t(p + 1));
    }
  }
}

TEST_CASE("distance") {
  CHECK(distance(LatticeClass::origin(2), LatticeClass::origin(2)) == 0);
  for (int p : {2, 3})
    for (int i = -4; i <= 4; ++i)
      for (int j = -4; j <= 4; ++j)
        CHECK(distance(LatticeClass::axis(p, i), LatticeClass::axis(p, j)) == std::abs(i - j));

  auto b = ball(2, 5);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto& u = b[rng() % b.size()];
    auto& v = b[rng() % b.size()];
    CHECK(distance(u, v) == bfs_distance(b, u, v));
    CHECK(distance(u, v) == distance(v, u));
  }
}

TEST_CASE("matrix action") {
  int P = 16;
  for (int p : {2, 3}) {
    auto g = Mat2::standard_g(p, P);
    for (int i = -5; i <= 5; ++i)
      CHECK(act(g, LatticeClass::axis(p, i), P) == LatticeClass::axis(p, i + 1));
    for (int a = 0; a < 9; ++a) CHECK(act(Mat2::unipotent(p, P, a), LatticeClass::origin(p), P) == LatticeClass::origin(p));
    CHECK(act(Mat2::unipotent(p, P, 1, 1), LatticeClass::origin(p), P) != LatticeClass::origin(p));
    for (const auto& v : ball(p, 3)) CHECK(act(Mat2::integral(p, P, p, 0, 0, p), v, P) == v);
  }

  std::mt19937 rng(8);
  auto b = ball(2, 4);
  int tested = 0;
  while (tested < 100) {
    auto m = Mat2::integral(2, 20, rng() % 16, rng() % 16, rng() % 16, rng() % 16);
    if (m.det_valuation() > 3) continue;
    auto& u = b[rng() % b.size()];
    auto& v = b[rng() % b.size()];
    CHECK(distance(act(m, u, 20), act(m, v, 20)) == distance(u, v));
    ++tested;
  }
}

TEST_CASE("matrix parsing") {
  auto m = Mat2::parse(nlohmann::json::parse(R"([["1","1/p^2"],["0","1"]])"), 3, 12);
  CHECK(m.den == 2);
  CHECK(m.at(0, 0).residue() == 9);
  CHECK(m.at(0, 1).residue() == 1);
  CHECK(act(m, LatticeClass::origin(3), 12) == canonicalize(Mat2::unipotent(3, 12, 1, 2)));
  CHECK_THROWS_AS(Mat2::parse(nlohmann::json::parse(R"([["1","x"],["0","1"]])"), 3, 12), tdlc::Error);
  CHECK_THROWS_AS(Mat2::parse(nlohmann::json::parse(R"([["1","1"],["1","1"]])"), 3, 12), tdlc::Error);
}

TEST_CASE("fixed sets and the horoball") {
  int p = 2, R = 4, P = default_precision(R);
  auto all = ball(p, R);
  CHECK(fixed_set({Mat2::identity(p, P)}, p, R).size() == all.size());
  CHECK(fixed_set({Mat2::standard_g(p, P)}, p, R).empty());
  auto u1 = fixed_set({Mat2::unipotent(p, P, 1)}, p, R);
  for (int n = 0; n <= R / 2; ++n)
    for (const auto& v : all)
      if (distance(v, LatticeClass::axis(p, -n)) <= n) CHECK(u1.count(v));

  CHECK(in_horoball(LatticeClass::origin(p)));
  CHECK_FALSE(in_horoball(LatticeClass::axis(p, 1)));
  CHECK(in_horoball(LatticeClass::axis(p, -3)));

  // With nu(l2) < k, [span(l, p^k L0)] lies in Z0 iff 2 nu(l2) >= nu(l1) + k.
  std::mt19937 rng(21);
  for (int q : {2, 3}) {
    int checked = 0;
    while (checked < 50) {
      int k = int(rng() % 5);
      std::int64_t pk = 1;
      for (int i = 0; i < k; ++i) pk *= q;
      std::int64_t l1 = rng() % (pk * q), l2 = rng() % (pk * q);
      int v1 = nu(l1, q, 99), v2 = nu(l2, q, 99);
      if (std::min(v1, v2) != 0) continue;
      Mat2 basis = v1 == 0 ? Mat2::integral(q, 20, l1, 0, l2, pk) : Mat2::integral(q, 20, l1, pk, l2, 0);
      auto cls = canonicalize(basis);
      if (v2 >= k) CHECK(in_horoball(cls));  // the class of L_-k
      else CHECK(in_horoball(cls) == (2 * v2 >= v1 + k));
      ++checked;
    }
  }
}

TEST_CASE("X^W = Z0 and its translates") {
  for (auto [p, r] : {std::pair{2, 5}, std::pair{3, 4}, std::pair{5, 2}}) {
    auto rep = verify_sl2(p, r);
    CHECK(rep.regular);
    CHECK(rep.fixed_equals_z0);
    CHECK(rep.sample_stable);
    CHECK(rep.z0_in_gz0);
    CHECK(rep.strict);
    CHECK(rep.covers);
    CHECK(rep.ok());
    CHECK(rep.z0_size < rep.ball_size);
  }
}
