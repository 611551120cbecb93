#include <algorithm>
#include <deque>
#include <map>

#include "tdlc/dynamics.hpp"

namespace tdlc {

namespace {

bool on_axis(const Axis& a, const VertexAddr& v) {
  long d = distance(v, a.origin());
  return v == a.at(d) || v == a.at(-d);
}

}  // namespace

bool Subspace::contains(const VertexAddr& v) const {
  switch (kind) {
    case Kind::Whole:
      return true;
    case Kind::Axis:
      return on_axis(*axis, v);
    case Kind::FixedBy:
      return std::all_of(elements.begin(), elements.end(),
                         [&](const CocycleElement& e) { return e.apply(v) == v; });
  }
  return false;
}

std::vector<VertexAddr> Subspace::ball(const VertexAddr& c, int r, int degree) const {
  std::vector<VertexAddr> out;
  if (!contains(c)) return out;
  std::set<VertexAddr> seen{c};
  std::deque<std::pair<VertexAddr, int>> queue{{c, 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    out.push_back(v);
    if (d == r) continue;
    for (int col = 0; col < degree; ++col) {
      VertexAddr w = neighbor(v, static_cast<Color>(col));
      if (seen.count(w) || !contains(w)) continue;
      seen.insert(w);
      queue.push_back({w, d + 1});
    }
  }
  return out;
}

std::string Subspace::str() const {
  switch (kind) {
    case Kind::Whole:
      return "whole";
    case Kind::Axis:
      return "axis";
    case Kind::FixedBy:
      return "fixed-by(" + std::to_string(elements.size()) + ")";
  }
  return "";
}

AbsorbingWitness is_absorbing(const std::vector<CocycleElement>& c, const Ray& ray,
                              const Subspace& y, int degree, int horizon, int stretch, int cap) {
  if (stretch < 1) throw Error("is_absorbing: stretch must be positive");
  if (cap < 0) cap = horizon / stretch + 1;
  AbsorbingWitness w;
  w.xi = ray.end;
  w.horizon = horizon;
  w.stretch = stretch;
  auto in_z = [&](const VertexAddr& v) {
    if (!y.contains(v)) return false;
    for (const auto& e : c)
      if (e.apply(v) != v) return false;
    return true;
  };
  for (int t = 0; t <= horizon; ++t) {
    VertexAddr v = ray.at(static_cast<std::size_t>(t));
    int r = -1;
    if (in_z(v)) {
      r = std::min(t, cap);
      auto b = y.ball(v, r, degree);
      // Largest radius whose Y-ball stays inside Z.
      int bad = r + 1;
      for (const auto& u : b)
        if (!in_z(u)) bad = std::min(bad, distance(u, v));
      r = std::min(r, bad - 1);
    }
    w.times.push_back(t);
    w.radii.push_back(r);
  }
  w.regularized = w.radii;
  for (int i = static_cast<int>(w.regularized.size()) - 2; i >= 0; --i)
    w.regularized[i] = std::min(w.regularized[i], w.regularized[i + 1]);
  w.absorbing = true;
  for (std::size_t i = 0; i < w.times.size(); ++i)
    if (w.regularized[i] < w.times[i] / stretch) w.absorbing = false;
  return w;
}

ContractionReport contraction_geometric(const std::vector<CocycleElement>& c,
                                        const CocycleElement& g, const Subspace& y,
                                        int horizon) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  int degree = g.scheme()->degree();
  ContractionReport out;
  out.witness = is_absorbing(c, ax.backward_ray(0), y, degree, horizon);
  out.geometric = out.witness.absorbing;
  // K = Fix(Y) enters only through its fixed region, which is Y itself.
  auto region = y.ball(ax.origin(), 3, degree);
  bool all = true;
  for (const auto& e : c) {
    bool v = in_contraction_region(e, g, region);
    out.per_element.push_back(v);
    all = all && v;
  }
  if (all != out.geometric)
    throw InvariantViolation("contraction: absorbing-set and definitional routes disagree");
  return out;
}

namespace {

FixatorSpec translate(const FixatorSpec& u, const CocycleElement& g) {
  FixatorSpec out(u.scheme, {});
  for (const auto& a : u.fixed) out.fixed.insert(g.apply(a));
  for (const auto& h : u.halftrees) out.halftrees.push_back({g.apply(h.inner), g.apply(h.outer)});
  if (!u.rays.empty()) throw Error("translate: ray constraints are not supported here");
  return out;
}

void merge_into(FixatorSpec& acc, const FixatorSpec& more) {
  acc.fixed.insert(more.fixed.begin(), more.fixed.end());
  acc.halftrees.insert(acc.halftrees.end(), more.halftrees.begin(), more.halftrees.end());
}

}  // namespace

RestrictionSet nub_approx(const CocycleElement& g, const FixatorSpec& u, int radius,
                          int max_shift, int window) {
  auto rep = classify(g);
  VertexAddr center = rep.hyperbolic() ? rep.axis->origin()
                      : rep.fixed_vertex ? *rep.fixed_vertex
                                         : rep.fixed_edge->first;
  auto target = ball(center, radius, g.scheme()->degree());
  CocycleElement ginv = g.inverse();
  FixatorSpec acc = u;
  FixatorSpec fwd = u, back = u;
  RestrictionSet last = enumerate_restrictions(acc, target);
  int unchanged = 0;
  for (int k = 1; k <= max_shift; ++k) {
    fwd = translate(fwd, g);
    back = translate(back, ginv);
    merge_into(acc, fwd);
    merge_into(acc, back);
    auto cur = enumerate_restrictions(acc, target);
    unchanged = cur.images == last.images ? unchanged + 1 : 0;
    last = std::move(cur);
    if (unchanged >= window) {
      last.cert = Certification::stabilized(k);
      return last;
    }
  }
  last.cert = Certification::undetermined(max_shift);
  return last;
}

FixatorSpec contraction_fixator(const Axis& axis, const SchemePtr& s, const VertexAddr& x, int m) {
  FixatorSpec w(s, {x});
  w.halftrees.push_back({axis.at(-m), axis.at(-m - 1)});
  return w;
}

ContractionSpaceReport contraction_space_check(const CocycleElement& g, const Subspace& y,
                                               const std::optional<FixatorSpec>& w, int radius,
                                               int horizon) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  int degree = g.scheme()->degree();
  CocycleElement ginv = g.inverse();
  auto yb = y.ball(ax.origin(), radius, degree);

  // Every vertex whose Z-membership is queried.
  std::vector<VertexAddr> queries;
  for (const auto& v : yb) {
    VertexAddr f = v, b = v;
    queries.push_back(v);
    for (int n = 1; n <= horizon; ++n) {
      f = g.apply(f);
      b = ginv.apply(b);
      queries.push_back(f);
      queries.push_back(b);
    }
  }
  std::map<VertexAddr, bool> in_z;
  if (w) {
    FixatorEngine eng(*w, queries);
    for (const auto& q : queries)
      if (!in_z.count(q)) in_z[q] = y.contains(q) && eng.fixes_vertex(q);
  } else {
    for (const auto& q : queries) in_z[q] = y.contains(q);
  }

  ContractionSpaceReport out;
  out.horizon = horizon;
  out.y_size = yb.size();
  out.z_subset_gz = true;
  out.covers_y = true;
  out.intersection_empty = true;
  out.union_is_axis = true;
  for (const auto& v : yb) {
    if (in_z.at(v)) {
      ++out.z_size;
      if (!in_z.at(ginv.apply(v))) out.z_subset_gz = false;
    }
    bool covered = false, escapes = false;
    VertexAddr f = v, b = v;
    for (int n = 0; n <= horizon; ++n) {
      covered = covered || in_z.at(b);
      escapes = escapes || !in_z.at(f);
      f = g.apply(f);
      b = ginv.apply(b);
    }
    if (covered) out.covered.push_back(v);
    if (!covered) out.covers_y = false;
    if (!escapes) out.intersection_empty = false;
    if (covered != on_axis(ax, v)) out.union_is_axis = false;
  }
  return out;
}

}  // namespace tdlc
