#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tdlc/scale.hpp"

using namespace tdlc;
using testutil::make;
using testutil::V;

namespace {

struct Instance {
  SchemePtr s;
  CocycleElement g;
};

Instance full4() {
  auto s = make(GroupScheme::full(4));
  return {s, builtin_element(s, "translation", {{"length", 2}})};
}
Instance full3() {
  auto s = make(GroupScheme::full(3));
  return {s, builtin_element(s, "translation")};
}
Instance coupled2() {
  auto s = make(GroupScheme::coupled_wreath(2));
  return {s, builtin_element(s, "standard_translation")};
}

std::set<VertexAddr> pts(const Axis& ax, std::initializer_list<long> ts) {
  std::set<VertexAddr> out;
  for (long t : ts) out.insert(ax.at(t));
  return out;
}

}  // namespace

TEST_CASE("scale routes") {
  auto [s4, g4] = full4();
  auto a = scale_axis(g4);
  auto b = scale_branching(g4);
  auto c = scale_search(g4, 2);
  for (const auto* r : {&a, &b, &c}) {
    CHECK(r->s_g == 9);
    CHECK(r->s_ginv == 9);
    CHECK(r->delta() == Rational{1, 1});
  }
  CHECK(a.t0 == 2);

  auto [s3, g3] = full3();
  CHECK(scale_axis(g3).s_g == 2);
  CHECK(scale_branching(g3).s_g == 2);
  auto c3 = scale_search(g3, 3);
  CHECK(c3.s_g == 2);
  CHECK(c3.s_ginv == 2);
  REQUIRE(c3.certifying);

  auto [sc, gc] = coupled2();
  auto ac = scale_axis(gc);
  CHECK(ac.s_g == 1);
  CHECK(ac.s_ginv == 1);
  CHECK(ac.t0 > 1);
  CHECK(scale_branching(gc).s_g == 1);
  CHECK(scale_search(gc, 2).s_g == 1);
}

TEST_CASE("scale search counts every subtree once") {
  // Subtrees of the radius-1 ball of a d-regular tree: d single leaves, and
  // the centre with any subset of its neighbours.
  for (int d : {3, 4}) {
    auto s = make(GroupScheme::full(d));
    auto r = scale_search(CocycleElement::identity(s), 1);
    CHECK(r.examined == std::size_t(d + (1 << d)));
    CHECK(r.s_g == 1);
  }
  auto [s3, g3] = full3();
  // Radius 2, degree 3: through the centre each neighbour is absent or
  // present with any subset of its two leaves (5^3); without the centre a
  // neighbour with a leaf subset (3 * 4); single leaves (6).
  auto r = scale_search(g3, 2);
  CHECK(r.examined == 125 + 12 + 6);
}

TEST_CASE("scale against the brute-force oracle") {
  // For U = Fix(gamma[0, 1]) the index of U in gUg^-1 is, after conjugating
  // by g^-1, the orbit size of gamma(-1) under U. The oracle only sees
  // elements fixing the base vertex, which U does.
  auto [s3, g3] = full3();
  Axis ax = classify(g3).require_axis();
  REQUIRE(ax.origin().is_base());
  auto imgs = oracle_restrictions(s3, 2, pts(ax, {0, 1}), {ax.at(-1)});
  CHECK(imgs.size() == 2);
  CHECK(check_tidy(FixatorSpec(s3, pts(ax, {0, 1})), g3).index == imgs.size());
}

TEST_CASE("scale of powers") {
  auto [s3, g3] = full3();
  for (int k = 1; k <= 3; ++k) {
    auto gk = g3.power(k);
    CHECK(scale_branching(gk).s_g == std::size_t(1) << k);
    CHECK(scale_axis(gk).s_g == std::size_t(1) << k);
  }
}

TEST_CASE("check_tidy examples") {
  auto [sc, gc] = coupled2();
  Axis axc = classify(gc).require_axis();
  auto v = check_tidy(FixatorSpec(sc, pts(axc, {1, 2})), gc);
  CHECK_FALSE(v.gta.value);
  CHECK(v.gta.cert.is_exact());
  CHECK_FALSE(v.minimizing.value);

  for (auto inst : {full3(), full4()}) {
    Axis ax = classify(inst.g).require_axis();
    for (long t = ax.ell; t <= 2 * ax.ell + 1; ++t) {
      auto w = check_tidy(FixatorSpec(inst.s, pts(ax, {0, t})), inst.g);
      CHECK(w.minimizing.value);
      CHECK(w.ta.value);
      CHECK(w.gt_plus_forms == std::array<bool, 4>{true, true, true, true});
      for (const auto& lv : w.gta_levels) CHECK(lv.pairs == lv.plus * lv.minus);
    }
  }
}

TEST_CASE("exact GTA certificates survive deeper horizons") {
  TidyOptions deep;
  deep.gta_horizon = 6;
  std::mt19937 rng(17);
  for (auto inst : {full3(), coupled2()}) {
    Axis ax = classify(inst.g).require_axis();
    auto around = ball(ax.origin(), 2, inst.s->degree());
    int exact = 0;
    for (int trial = 0; trial < 16; ++trial) {
      std::set<VertexAddr> a{around[rng() % around.size()], around[rng() % around.size()]};
      FixatorSpec u(inst.s, a);
      auto v = check_tidy(u, inst.g);
      if (!v.gta.value || !v.gta.cert.is_exact()) continue;
      ++exact;
      CHECK(check_tidy(u, inst.g, deep).gta.value);
    }
    CHECK(exact > 0);
  }
}

TEST_CASE("minimizing for g iff minimizing for g inverse") {
  std::mt19937 rng(5);
  for (auto inst : {full3(), coupled2()}) {
    Axis ax = classify(inst.g).require_axis();
    auto around = ball(ax.origin(), 2, inst.s->degree());
    int minimizing = 0, not_minimizing = 0;
    for (int trial = 0; trial < 24; ++trial) {
      std::set<VertexAddr> a;
      int k = 1 + int(rng() % 3);
      while (int(a.size()) < k) a.insert(around[rng() % around.size()]);
      FixatorSpec u(inst.s, a);
      auto f = check_tidy(u, inst.g);
      auto b = check_tidy(u, inst.g.inverse());
      CHECK(f.minimizing.value == b.minimizing.value);
      CHECK(f.gt_plus.value == b.gt_minus.value);
      CHECK(f.index == b.index_inv);
      (f.minimizing.value ? minimizing : not_minimizing)++;
    }
    CHECK(minimizing > 0);
    CHECK(not_minimizing > 0);
  }
}

TEST_CASE("modular function") {
  for (auto inst : {full3(), full4(), coupled2()}) {
    auto sc = scale_axis(inst.g);
    auto m = modular(inst.g, &sc);
    CHECK(m.delta == Rational{1, 1});
    CHECK(m.plus.num == sc.s_g * m.plus.den);
  }
  auto [s3, g3] = full3();
  auto rot = local_perturbation(s3, VertexAddr(), transposition(3, 0, 1));
  auto m = modular(rot);
  CHECK(m.bounded);
  CHECK(m.delta == Rational{1, 1});
  auto br = scale_axis(rot);
  CHECK(br.s_g == 1);
  CHECK(br.s_ginv == 1);
  CHECK(scale_search(rot, 1).s_g == 1);

  ScaleReport wrong;
  wrong.s_g = 2;
  wrong.s_ginv = 1;
  CHECK_THROWS_AS(modular(g3, &wrong), InvariantViolation);
}

TEST_CASE("uniscalar battery") {
  auto f3 = uniscalar_battery(full3().g);
  CHECK(f3.verdict == "not-uniscalar");
  for (const auto& f : f3.flags) CHECK_FALSE(f.value);

  auto f4 = uniscalar_battery(full4().g);
  CHECK(f4.verdict == "not-uniscalar");

  auto c2 = uniscalar_battery(coupled2().g);
  CHECK(c2.verdict == "uniscalar");
  for (const auto& f : c2.flags) {
    CHECK(f.value);
  }
  CHECK(c2.flags[3].cert.is_exact());

  auto s3 = full3().s;
  auto b = uniscalar_battery(local_perturbation(s3, VertexAddr(), transposition(3, 0, 1)));
  CHECK(b.verdict == "bounded");
}

TEST_CASE("tidy neighbourhood") {
  auto [s3, g3] = full3();
  Axis ax = classify(g3).require_axis();
  FixatorSpec u(s3, {ax.origin()});
  auto r1 = tidy_neighbourhood_check(u, g3, 1);
  REQUIRE(r1.found);
  auto r2 = tidy_neighbourhood_check(u, g3.power(2), 1);
  REQUIRE(r2.found);
  CHECK(r1.radius == r2.radius);

  FixatorSpec seg(s3, pts(ax, {0, 1}));
  auto r3 = tidy_neighbourhood_check(seg, g3, 1);
  CHECK(r3.found);
  CHECK(r3.radius <= 1);
}

TEST_CASE("arrow classification") {
  auto c = arrow_classify(coupled2().g);
  CHECK(c.kind == ArrowCase::UniscalarPair);
  REQUIRE(c.stabilizers_equal);
  CHECK(*c.stabilizers_equal);
  auto f = arrow_classify(full3().g);
  CHECK(f.kind == ArrowCase::NoArrows);
  CHECK_FALSE(f.stabilizers_equal);
  auto fi = arrow_classify(full3().g.inverse());
  CHECK(fi.kind == ArrowCase::NoArrows);
}

TEST_CASE("end parts equal Willis parts for minimizing subgroups") {
  for (auto inst : {full3(), full4(), coupled2()}) {
    auto sc = scale_axis(inst.g);
    REQUIRE(sc.certifying);
    Axis ax = classify(inst.g).require_axis();
    auto target = ball(ax.origin(), 2, inst.s->degree());
    for (int sign : {+1, -1}) {
      auto e = end_part(*sc.certifying, inst.g, sign, target);
      auto w = willis_part(*sc.certifying, inst.g, sign, target, 6);
      CHECK(e.images == w.images);
    }
  }
}
