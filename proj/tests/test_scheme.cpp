#include "doctest.h"
#include "helpers.hpp"

using namespace tdlc;
using testutil::make;
using testutil::V;

TEST_CASE("scheme construction") {
  auto full3 = make(GroupScheme::full(3));
  CHECK(full3->local_order() == 6);
  CHECK(full3->edge_group(0).size() == 2);
  auto uni = make(GroupScheme::universal(PermGroup::symmetric(3)));
  CHECK(uni->local_group() == full3->local_group());
  for (Color c = 0; c < 3; ++c) CHECK(uni->edge_group(c) == full3->edge_group(c));
  auto cw = make(GroupScheme::coupled_wreath(2));
  CHECK(cw->degree() == 4);
  CHECK(cw->local_order() == 8);
  // For n = 2 each S_j fixes only the identity on a point of its own column.
  for (Color c = 0; c < 4; ++c) CHECK(cw->edge_group(c).size() == 1);
  auto cw3 = make(GroupScheme::coupled_wreath(3));
  for (Color c = 0; c < 9; ++c) CHECK(cw3->edge_group(c).size() == 2);
  CHECK_THROWS_AS(GroupScheme::full(2), Error);
  auto flagged = GroupScheme::universal(PermGroup(4, {transposition(4, 0, 1)}));
  CHECK(std::find(flagged.flags().begin(), flagged.flags().end(), "local_group_not_transitive") !=
        flagged.flags().end());
  CHECK(GroupScheme::from_json(cw->to_json()).to_json() == cw->to_json());
  CHECK(GroupScheme::from_json(nlohmann::json::parse(R"({"scheme":"universal","degree":3,"F":"cyclic"})"))
            .local_order() == 3);
}

TEST_CASE("legality") {
  auto cw = make(GroupScheme::coupled_wreath(2));
  auto id = CocycleElement::identity(cw);
  CHECK(id.is_legal());
  auto g = builtin_element(cw, "standard_translation");
  CHECK(g.is_legal());
  // sigma(eps) = c with an adjacent identity: c^-1 is not in S_0.
  Perm c = wreath_top(2);
  std::map<VertexAddr, Perm> sig;
  for (auto& v : base_ball(1, 4)) sig.emplace(v, v == V("0") ? Perm::identity(4) : c);
  CHECK_FALSE(CocycleElement(cw, V("0"), 1, sig).is_legal());
  // Missing local action below the depth.
  sig.erase(V("3"));
  CHECK_THROWS_AS(CocycleElement(cw, V("0"), 1, sig), Error);
  // Local actions outside A.
  auto bad = CocycleElement::constant(cw, VertexAddr(), transposition(4, 0, 2));
  CHECK_FALSE(bad.is_legal());
}

TEST_CASE("apply") {
  auto cw = make(GroupScheme::coupled_wreath(2));
  auto g = builtin_element(cw, "standard_translation");
  // Axis x_j: edge (x_j, x_{j+1}) has color (0, j mod 2).
  std::vector<VertexAddr> x{VertexAddr()};
  for (int j = 0; j < 12; ++j) x.push_back(neighbor(x.back(), Color(wreath_color(2, 0, j))));
  for (int j = 0; j + 1 < int(x.size()); ++j) CHECK(g.apply(x[j]) == x[j + 1]);
  CHECK(distance(g.apply(VertexAddr()), VertexAddr()) == 1);
  auto id = CocycleElement::identity(cw);
  for (auto& v : ball(VertexAddr(), 3, 4)) CHECK(id.apply(v) == v);
}

TEST_CASE("builtins") {
  auto cw = make(GroupScheme::coupled_wreath(2));
  auto swap0 = transposition(4, wreath_color(2, 0, 0), wreath_color(2, 1, 0));
  auto p = local_perturbation(cw, VertexAddr(), swap0);
  CHECK(p.is_legal());
  CHECK(p.apply(VertexAddr()) == VertexAddr());
  CHECK_THROWS_AS(local_perturbation(cw, V("0"), swap0), Error);
  auto full3 = make(GroupScheme::full(3));
  auto q = builtin_element(full3, "local_perturbation",
                           nlohmann::json::parse(R"({"vertex":"0","perm":[0,2,1]})"));
  CHECK(q.is_legal());
  CHECK(q.apply(V("0.1")) == V("0.2"));
  CHECK(q.apply(V("1.2")) == V("1.2"));
  auto t2 = builtin_element(make(GroupScheme::full(4)), "translation", {{"length", 2}});
  CHECK(t2.apply(VertexAddr()) == V("0.1"));
  CHECK(t2.apply(V("0.1")) == V("0.1.0.1"));
  CHECK_THROWS_AS(builtin_element(cw, "nope"), Error);
}

TEST_CASE("element json") {
  auto full3 = make(GroupScheme::full(3));
  auto g = CocycleElement::from_json(
      full3, nlohmann::json::parse(R"({"base_image":"0","depth":1,"sigma":{"":"[1,0,2]"},"default":[1,0,2]})"));
  CHECK(g == CocycleElement::constant(full3, V("0"), transposition(3, 0, 1)));
  CHECK(CocycleElement::from_json(full3, g.to_json()) == g);
  CHECK_THROWS_AS(CocycleElement::from_json(full3, nlohmann::json::parse(R"({"base_image":"0","depth":1,"sigma":{"":[1,0,2]}})")),
                  Error);
}

TEST_CASE("group axioms on random elements") {
  std::mt19937 rng(11);
  std::vector<SchemePtr> schemes{make(GroupScheme::full(3)), make(GroupScheme::coupled_wreath(2)),
                                 make(GroupScheme::universal(PermGroup::cyclic(3))),
                                 make(GroupScheme::coupled_wreath(3))};
  for (auto& s : schemes) {
    auto probe = ball(VertexAddr(), s->degree() > 4 ? 3 : 5, s->degree());
    for (int trial = 0; trial < 25; ++trial) {
      auto g = testutil::random_element(s, int(rng() % 3), 2, rng);
      auto h = testutil::random_element(s, int(rng() % 3), 2, rng);
      auto k = testutil::random_element(s, int(rng() % 2), 1, rng);
      REQUIRE(g.is_legal());
      auto gh = g * h;
      CHECK(gh.is_legal());
      CHECK(gh.depth() <= g.depth() + h.depth() + int(h.base_image().depth()));
      for (auto& v : probe) CHECK(gh.apply(v) == g.apply(h.apply(v)));
      auto gi = g.inverse();
      CHECK(gi.is_legal());
      CHECK(g * gi == CocycleElement::identity(s));
      CHECK(gi * g == CocycleElement::identity(s));
      for (auto& v : probe) CHECK(gi.apply(g.apply(v)) == v);
      CHECK((g * h) * k == g * (h * k));
      CHECK(g.power(3) == g * g * g);
      CHECK(g.power(-2) == gi * gi);
    }
  }
}
