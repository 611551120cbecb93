#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "tdlc/dynamics.hpp"

using namespace tdlc;
using testutil::make;
using testutil::V;

namespace {

// Distance from v to the axis, found by walking the axis window.
int axis_distance(const Axis& ax, const VertexAddr& v, long span) {
  int best = 1 << 30;
  for (long t = -span; t <= span; ++t) best = std::min(best, distance(v, ax.at(t)));
  return best;
}

// h(rho(t)) by direct evaluation, for an independent end-shift check.
std::optional<int> brute_shift(const CocycleElement& h, const End& xi, std::size_t far) {
  for (std::size_t t = far; t < far + 8; ++t) {
    VertexAddr img = h.apply(xi.at(t));
    if (img != xi.at(img.depth())) return std::nullopt;
  }
  return static_cast<int>(far) - static_cast<int>(h.apply(xi.at(far)).depth());
}

}  // namespace

TEST_CASE("classify examples") {
  auto cw = make(GroupScheme::coupled_wreath(2));
  CHECK(classify(CocycleElement::identity(cw)).fixed_vertex == VertexAddr());

  auto g = builtin_element(cw, "standard_translation");
  auto rep = classify(g);
  REQUIRE(rep.hyperbolic());
  CHECK(rep.ell == 1);
  auto rep2 = classify(g.power(2));
  CHECK(rep2.ell == 2);
  CHECK(rep2.axis->plus == rep.axis->plus);
  CHECK(rep2.axis->minus == rep.axis->minus);

  auto full3 = make(GroupScheme::full(3));
  auto t1 = classify(builtin_element(full3, "translation"));
  REQUIRE(t1.hyperbolic());
  CHECK(t1.axis->plus == End::parse("|0.1"));
  CHECK(t1.axis->minus == End::parse("|1.0"));
  CHECK(t1.axis->origin() == VertexAddr());

  auto full4 = make(GroupScheme::full(4));
  auto t2 = classify(builtin_element(full4, "translation", {{"length", 2}}));
  CHECK(t2.ell == 2);

  // Inversion of the edge (eps, "0").
  auto inv = CocycleElement::constant(full3, V("0"), Perm::identity(3));
  auto ri = classify(inv);
  CHECK_FALSE(ri.hyperbolic());
  REQUIRE(ri.fixed_edge.has_value());
}

TEST_CASE("displacement is ell plus twice the distance to the axis") {
  std::mt19937 rng(17);
  std::vector<SchemePtr> schemes{make(GroupScheme::full(3)), make(GroupScheme::coupled_wreath(2)),
                                 make(GroupScheme::universal(PermGroup::cyclic(3))),
                                 make(GroupScheme::full(4))};
  int hyperbolic = 0, bounded = 0;
  for (auto& s : schemes) {
    for (int trial = 0; trial < 25; ++trial) {
      auto g = testutil::random_element(s, 2, 2, rng);
      auto rep = classify(g);
      for (const auto& v : ball(VertexAddr(), 3, s->degree())) {
        int d = distance(g.apply(v), v);
        if (rep.hyperbolic()) {
          CHECK(d == rep.ell + 2 * axis_distance(*rep.axis, v, 12));
        } else if (rep.fixed_vertex) {
          // The fixed set is convex, so the nearest fixed vertex lies
          // within distance(v, fixed_vertex) of it.
          int near = distance(v, *rep.fixed_vertex);
          for (const auto& u : ball(*rep.fixed_vertex, distance(v, *rep.fixed_vertex), s->degree()))
            if (g.apply(u) == u) near = std::min(near, distance(u, v));
          CHECK(d == 2 * near);
        } else {
          auto [a, b] = *rep.fixed_edge;
          CHECK(d == 1 + 2 * std::min(distance(v, a), distance(v, b)));
        }
      }
      if (rep.hyperbolic()) {
        ++hyperbolic;
        // Ends are fixed, and the orbit of any vertex heads to xi_plus.
        CHECK(end_shift(g, rep.axis->plus) == -rep.ell);
        CHECK(end_shift(g, rep.axis->minus) == rep.ell);
      } else {
        ++bounded;
      }
    }
  }
  CHECK(hyperbolic > 10);
  CHECK(bounded > 10);
}

TEST_CASE("stabilizes_end") {
  auto full3 = make(GroupScheme::full(3));
  auto g = builtin_element(full3, "translation");
  auto ax = classify(g).require_axis();
  CHECK(stabilizes_end(g, ax.plus));
  CHECK(stabilizes_end(g, ax.minus));
  // Swap the two branches below "0.1" that the ray |0.1 could continue into.
  auto h = local_perturbation(full3, V("0.1"), transposition(3, 0, 2));
  CHECK_FALSE(stabilizes_end(h, ax.plus));
  CHECK(stabilizes_end(h, ax.minus));
  CHECK_THROWS_AS(stabilizes_end(g, ax.plus, 1), HorizonError);

  std::mt19937 rng(3);
  auto cw = make(GroupScheme::coupled_wreath(2));
  for (auto& s : {full3, cw}) {
    std::vector<End> ends{End::parse("|0.1"), End::parse("2|0.1"), End::parse("|0.2.1")};
    for (int trial = 0; trial < 40; ++trial) {
      auto k = testutil::random_element(s, 2, 1, rng);
      for (auto& xi : ends) CHECK(end_shift(k, xi) == brute_shift(k, xi, 40));
    }
  }
}

TEST_CASE("in_parabolic") {
  auto full3 = make(GroupScheme::full(3));
  auto g = builtin_element(full3, "translation");
  auto ax = classify(g).require_axis();
  CHECK(in_parabolic(g, g));
  CHECK(in_parabolic(g.inverse(), g));
  // Fixes the forward ray.
  CHECK(in_parabolic(local_perturbation(full3, V("1"), transposition(3, 0, 2)), g));
  // Moves the forward ray off its end.
  CHECK_FALSE(in_parabolic(local_perturbation(full3, V("0.1"), transposition(3, 0, 2)), g));
  CHECK_FALSE(in_parabolic(local_perturbation(full3, VertexAddr(), transposition(3, 0, 2)), g));

  // Random pairs: the two routes must agree (disagreement throws).
  std::mt19937 rng(23);
  int agree = 0;
  for (auto& s : {full3, make(GroupScheme::coupled_wreath(2))}) {
    auto gg = builtin_element(s, "standard_translation");
    for (int trial = 0; trial < 30; ++trial) {
      auto h = testutil::random_element(s, 2, 2, rng);
      auto v = parabolic_routes(h, gg);
      CHECK(v.definitional == v.geometric);
      ++agree;
    }
  }
  CHECK(agree == 60);
}

TEST_CASE("in_contraction") {
  auto full3 = make(GroupScheme::full(3));
  auto g = builtin_element(full3, "translation");
  CHECK(in_contraction(CocycleElement::identity(full3), g));
  CHECK_FALSE(in_contraction(g, g));
  // Supported on the forward side: fixes every ball around gamma(-n).
  CHECK(in_contraction(local_perturbation(full3, V("0.2"), transposition(3, 0, 1)), g));
  // Supported on the backward ray: moves it forever.
  CHECK_FALSE(in_contraction(local_perturbation(full3, V("1.0"), transposition(3, 1, 2)), g));

  // A branch off the backward ray is only visited finitely often.
  FixatorSpec axis_fix(full3, {});
  auto ax = classify(g).require_axis();
  axis_fix.rays = {ax.forward_ray(0), ax.backward_ray(0)};
  auto k = local_perturbation(full3, V("1.0.2"), transposition(3, 0, 1));
  CHECK(in_contraction(k, g));
  CHECK(in_contraction(k, g, axis_fix));
  CHECK_FALSE(in_contraction(g, g, axis_fix));
  CHECK_THROWS_AS(in_contraction(k, g, FixatorSpec(full3, {V("2")})), Error);
}

TEST_CASE("absorbing sets") {
  auto full3 = make(GroupScheme::full(3));
  auto g = builtin_element(full3, "translation");
  auto ax = classify(g).require_axis();
  auto ray = ax.backward_ray(0);
  CHECK(is_absorbing({}, ray, Subspace::whole(), 3).absorbing);
  auto rot = CocycleElement::constant(full3, VertexAddr(), Perm({1, 2, 0}));
  auto single = is_absorbing({rot}, ray, Subspace::whole(), 3);
  CHECK_FALSE(single.absorbing);
  CHECK(single.radii[0] == 0);
  auto forward = local_perturbation(full3, V("0.2"), transposition(3, 0, 1));
  auto w = is_absorbing({forward}, ray, Subspace::whole(), 3);
  CHECK(w.absorbing);
  for (std::size_t i = 1; i < w.regularized.size(); ++i)
    CHECK(w.regularized[i] >= w.regularized[i - 1]);

  CHECK(contraction_geometric({CocycleElement::identity(full3)}, g, Subspace::whole()).geometric);
  CHECK_FALSE(contraction_geometric({g}, g, Subspace::whole()).geometric);
  CHECK(contraction_geometric({forward}, g, Subspace::whole()).geometric);
  CHECK_FALSE(contraction_geometric({local_perturbation(full3, V("1.0"), transposition(3, 1, 2))},
                                    g, Subspace::whole())
                  .geometric);
  CHECK(contraction_geometric({forward}, g, Subspace::along(ax)).geometric);
}

TEST_CASE("nub approximation") {
  auto full3 = make(GroupScheme::full(3));
  auto g = builtin_element(full3, "translation");
  auto ax = classify(g).require_axis();
  FixatorSpec u(full3, {ax.at(0), ax.at(1)});
  auto nub = nub_approx(g, u, 3);
  CHECK(nub.cert.kind == Certification::Kind::StabilizedAt);
  FixatorSpec axis_fix(full3, {});
  axis_fix.rays = {ax.forward_ray(0), ax.backward_ray(0)};
  CHECK(nub.images == enumerate_restrictions(axis_fix, nub.target).images);

  auto cw = make(GroupScheme::coupled_wreath(2));
  auto t = builtin_element(cw, "standard_translation");
  auto cax = classify(t).require_axis();
  auto cn = nub_approx(t, FixatorSpec(cw, {cax.at(0), cax.at(1), cax.at(2)}), 2);
  CHECK(cn.size() == 1);

  // Bounded: a rotation about eps normalizes the fixator of the unit ball.
  auto rot = CocycleElement::constant(full3, VertexAddr(), Perm({1, 2, 0}));
  std::set<VertexAddr> b1;
  for (auto& v : ball(VertexAddr(), 1, 3)) b1.insert(v);
  auto bn = nub_approx(rot, FixatorSpec(full3, b1), 2);
  CHECK(bn.images == enumerate_restrictions(FixatorSpec(full3, b1), bn.target).images);
}

TEST_CASE("contraction space") {
  auto full3 = make(GroupScheme::full(3));
  auto g = builtin_element(full3, "translation");
  auto ax = classify(g).require_axis();
  int r = 2, n = 6;
  auto w = contraction_fixator(ax, full3, ax.origin(), r + n * ax.ell + 1);
  auto rep = contraction_space_check(g, Subspace::whole(), w, r, n);
  CHECK(rep.z_subset_gz);
  CHECK(rep.intersection_empty);
  CHECK_FALSE(rep.covers_y);
  // Degree 3: a vertex fixing two of its edges fixes the third, so Z is the
  // backward ray together with one branch vertex at each interior point.
  CHECK(rep.z_size == 4);
  for (const auto& v : ball(ax.origin(), r, 3)) {
    bool near_axis = false;
    for (long t = -4; t <= 4; ++t) near_axis = near_axis || distance(v, ax.at(t)) <= 1;
    bool cov = std::find(rep.covered.begin(), rep.covered.end(), v) != rep.covered.end();
    CHECK(cov == near_axis);
  }

  // Degree 4: Z is exactly a ray and its translates sweep out the axis.
  auto full4 = make(GroupScheme::full(4));
  auto g4 = builtin_element(full4, "translation");
  auto ax4 = classify(g4).require_axis();
  auto rep4 = contraction_space_check(g4, Subspace::whole(),
                                      contraction_fixator(ax4, full4, ax4.origin(), r + n + 1), r, n);
  CHECK(rep4.z_subset_gz);
  CHECK(rep4.union_is_axis);
  CHECK(rep4.intersection_empty);
  CHECK(rep4.z_size == 3);

  auto triv = contraction_space_check(g, Subspace::whole(), std::nullopt, r, n);
  CHECK(triv.z_subset_gz);
  CHECK(triv.covers_y);
  CHECK(triv.z_size == triv.y_size);

  auto cw = make(GroupScheme::coupled_wreath(2));
  auto t = builtin_element(cw, "standard_translation");
  auto cax = classify(t).require_axis();
  auto along = contraction_space_check(t, Subspace::along(cax), std::nullopt, r, n);
  CHECK(along.covers_y);
  CHECK(along.union_is_axis);
}
