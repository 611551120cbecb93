#include "tdlc/scale.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

namespace tdlc {

namespace {

using VSet = std::set<VertexAddr>;
using VVec = std::vector<VertexAddr>;

VSet translate(const CocycleElement& g, const VSet& a) {
  VSet out;
  for (const auto& v : a) out.insert(g.apply(v));
  return out;
}

VSet translate(const CocycleElement& g, const VSet& a, int times) {
  VSet out = a;
  for (int i = 0; i < times; ++i) out = translate(g, out);
  return out;
}

VertexAddr translate(const CocycleElement& g, VertexAddr v, int times) {
  for (int i = 0; i < times; ++i) v = g.apply(v);
  return v;
}

VVec as_vec(const VSet& a) { return VVec(a.begin(), a.end()); }

VSet as_set(const VVec& a) { return VSet(a.begin(), a.end()); }

std::size_t count(const FixatorSpec& u, const VVec& target) {
  return count_restrictions(u, target);
}

FixatorSpec with_ray(const FixatorSpec& u, const Ray& r) {
  FixatorSpec out = u;
  out.rays.push_back(r);
  return out;
}

// The first n vertices of r outside the convex set hull.
VVec beyond(const VSet& hull, const Ray& r, int n) {
  VVec out;
  for (std::size_t t = 0; static_cast<int>(out.size()) < n; ++t) {
    VertexAddr v = r.at(t);
    if (!hull.count(v)) out.push_back(v);
  }
  return out;
}

// Last vertex of the convex set hull on the ray r, which starts inside it.
VertexAddr exit_vertex(const VSet& hull, const Ray& r) {
  VertexAddr last = r.at(0);
  for (std::size_t t = 1;; ++t) {
    VertexAddr v = r.at(t);
    if (!hull.count(v)) return last;
    last = v;
  }
}

VVec around(const VertexAddr& v, int degree) {
  VVec out;
  for (int c = 0; c < degree; ++c) out.push_back(neighbor(v, static_cast<Color>(c)));
  return out;
}

VVec ray_prefix(const Ray& r, int n) {
  VVec out;
  for (int t = 0; t <= n; ++t) out.push_back(r.at(static_cast<std::size_t>(t)));
  return out;
}

Certification weakest(const std::vector<Certification>& cs) {
  Certification out = Certification::exact();
  for (const auto& c : cs) {
    if (c.kind == Certification::Kind::Undetermined) return c;
    if (c.kind == Certification::Kind::StabilizedAt)
      out = Certification::stabilized(std::max(out.horizon, c.horizon));
  }
  return out;
}

void require_plain(const FixatorSpec& u) {
  if (!u.rays.empty() || !u.halftrees.empty() || u.fixed.empty())
    throw Error("subgroup must be the fixator of a finite non-empty vertex set");
}

struct GtForms {
  std::array<bool, 4> forms{};
  Certification cert;
};

// GT+ for (h, xi) = (g, xi_plus), GT- for (g^-1, xi_minus).
GtForms gt_forms(const FixatorSpec& u, const CocycleElement& h, const End& xi,
                 const TidyOptions& opts) {
  const auto& s = u.scheme;
  const VSet& p = u.fixed;
  const VertexAddr& p0 = *p.begin();
  VVec pv = as_vec(p);
  FixatorSpec w = with_ray(u, Ray{p0, xi});
  CocycleElement hinv = h.inverse();
  GtForms out;

  // (a) h^-1 U_xi h <= U.
  FixatorSpec v = with_ray(FixatorSpec(s, translate(hinv, p)), Ray{hinv.apply(p0), xi});
  out.forms[0] = count(v, pv) == 1;
  // (b) h^-1 U_xi h <= U_xi.
  out.forms[1] = out.forms[0] && fixes_ray(v, p0, xi);
  // (c) U_xi tidy for h inside G_xi: indices of powers are powers of the index.
  std::size_t first = 0;
  bool powers = true;
  for (int k = 1; k <= opts.moller_powers && powers; ++k) {
    VertexAddr hp0 = translate(h, p0, k);
    FixatorSpec wk = with_ray(FixatorSpec(s, translate(h, p, k)), Ray{hp0, xi});
    VSet q = p;
    for (const auto& x : ray_prefix(Ray{p0, xi}, distance(p0, hp0))) q.insert(x);
    std::size_t idx = count(wk, as_vec(q));
    if (k == 1) first = idx;
    std::size_t want = 1;
    for (int i = 0; i < k; ++i) want *= first;
    powers = idx == want;
  }
  out.forms[2] = powers;
  // (d) U_xi <= U_{h+}: U_xi fixes h^n P for 0 <= n <= plus_horizon.
  VSet shifted, cur = p;
  for (int n = 0; n <= opts.plus_horizon; ++n) {
    shifted.insert(cur.begin(), cur.end());
    cur = translate(h, cur);
  }
  out.forms[3] = count(w, as_vec(shifted)) == 1;

  if (!std::all_of(out.forms.begin(), out.forms.end(), [&](bool b) { return b == out.forms[0]; }))
    throw InvariantViolation("GT forms disagree: (a)=" + std::to_string(out.forms[0]) +
                             " (b)=" + std::to_string(out.forms[1]) + " (c)=" +
                             std::to_string(out.forms[2]) + " (d)=" + std::to_string(out.forms[3]));
  out.cert = Certification::exact();
  return out;
}

}  // namespace

std::string Verdict::str() const {
  return std::string(value ? "true" : "false") + " (" + cert.str() + ")";
}

Rational Rational::of(std::size_t n, std::size_t d) {
  if (d == 0) throw Error("rational with zero denominator");
  std::size_t g = std::gcd(n, d);
  return {n / g, d / g};
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string route_name(ScaleRoute r) {
  switch (r) {
    case ScaleRoute::AxisSegment: return "axis";
    case ScaleRoute::Branching: return "branching";
    case ScaleRoute::Search: return "search";
  }
  return "?";
}

std::string arrow_case_name(ArrowCase c) {
  switch (c) {
    case ArrowCase::UniscalarPair: return "uniscalar-pair";
    case ArrowCase::OpenStabilizer: return "open-stabilizer";
    case ArrowCase::ArrowToRepelling: return "arrow-to-repelling";
    case ArrowCase::NoArrows: return "no-arrows";
  }
  return "?";
}

TidyVerdict check_tidy(const FixatorSpec& u, const CocycleElement& g, const TidyOptions& opts) {
  require_plain(u);
  const auto& s = u.scheme;
  const VSet& p = u.fixed;
  VVec pv = as_vec(p);
  TidyVerdict out;
  out.index = count(FixatorSpec(s, translate(g, p)), pv);
  out.index_inv = count(FixatorSpec(s, translate(g.inverse(), p)), pv);

  auto rep = classify(g);
  if (!rep.hyperbolic()) {
    // s(g) = 1, so U is minimizing iff it is normalized by g.
    bool m = out.index == 1;
    out.minimizing = out.ta = out.gta = out.gt_plus = out.gt_minus = {m, Certification::exact()};
    return out;
  }
  const Axis& ax = *rep.axis;
  const VertexAddr& p0 = *p.begin();
  VSet hull = convex_hull(p);

  // GTA: pair counts against the product of the separate counts.
  bool gta = true;
  for (int r = 1; r <= opts.gta_horizon; ++r) {
    VVec ap = beyond(hull, Ray{p0, ax.plus}, r);
    VVec am = beyond(hull, Ray{p0, ax.minus}, r);
    VVec both = ap;
    both.insert(both.end(), am.begin(), am.end());
    auto res = enumerate_restrictions(u, both);
    std::set<VVec> plus, minus;
    for (const auto& img : res.images) {
      plus.insert(VVec(img.begin(), img.begin() + r));
      minus.insert(VVec(img.begin() + r, img.end()));
    }
    out.gta_levels.push_back({r, res.size(), plus.size(), minus.size()});
    if (res.size() != plus.size() * minus.size()) {
      gta = false;
      break;
    }
  }
  // Failure at a finite depth is already exact. Success is exact when the
  // local actions at the two exit vertices vary independently: constraints
  // are edge-local, so the branch past an exit vertex only sees its local
  // action, which the images of its neighbours determine.
  Certification gta_cert = Certification::exact();
  if (gta) {
    gta_cert = Certification::stabilized(opts.gta_horizon);
    VertexAddr ep = exit_vertex(hull, Ray{p0, ax.plus});
    VertexAddr em = exit_vertex(hull, Ray{p0, ax.minus});
    if (ep != em) {
      VVec np = around(ep, s->degree()), nm = around(em, s->degree());
      VVec nb = np;
      nb.insert(nb.end(), nm.begin(), nm.end());
      if (count(u, nb) == count(u, np) * count(u, nm)) gta_cert = Certification::exact();
    }
  }
  out.gta = {gta, gta_cert};

  auto plus = gt_forms(u, g, ax.plus, opts);
  auto minus = gt_forms(u, g.inverse(), ax.minus, opts);
  out.gt_plus_forms = plus.forms;
  out.gt_minus_forms = minus.forms;
  out.gt_plus = {plus.forms[0], plus.cert};
  out.gt_minus = {minus.forms[0], minus.cert};

  // TA: U- acts on the forward translates as fully as U does.
  VSet qp, qm, fwd = p, bwd = p;
  CocycleElement gi = g.inverse();
  for (int n = 1; n <= opts.ta_horizon; ++n) {
    fwd = translate(g, fwd);
    bwd = translate(gi, bwd);
    qp.insert(fwd.begin(), fwd.end());
    qm.insert(bwd.begin(), bwd.end());
  }
  VSet pq = p;
  pq.insert(qm.begin(), qm.end());
  VVec qpv = as_vec(qp);
  bool ta = count(u, qpv) == count(FixatorSpec(s, pq), qpv);
  out.ta = {ta, Certification::stabilized(opts.ta_horizon)};

  bool m = out.gta.value && out.gt_plus.value && out.gt_minus.value;
  if (m) {
    out.minimizing = {true, weakest({out.gta.cert, out.gt_plus.cert, out.gt_minus.cert})};
  } else {
    Certification c = Certification::undetermined();
    for (const auto* v : {&out.gta, &out.gt_plus, &out.gt_minus})
      if (!v->value) c = v->cert;
    out.minimizing = {false, c};
  }
  if (m && !ta) throw InvariantViolation("minimizing subgroup fails U = U+ U-");
  return out;
}


namespace {

ScaleReport bounded_report(const CocycleElement& g, const IsometryReport& rep, ScaleRoute route) {
  ScaleReport out;
  out.route = route;
  VSet a;
  if (rep.fixed_vertex) a.insert(*rep.fixed_vertex);
  else a = {rep.fixed_edge->first, rep.fixed_edge->second};
  FixatorSpec u(g.scheme(), a);
  out.s_g = count(FixatorSpec(g.scheme(), translate(g, a)), as_vec(a));
  out.s_ginv = count(FixatorSpec(g.scheme(), translate(g.inverse(), a)), as_vec(a));
  if (out.s_g != 1 || out.s_ginv != 1)
    throw InvariantViolation("bounded element does not normalize the fixator of its fixed set");
  out.certifying = u;
  out.cert = Certification::exact();
  return out;
}

}  // namespace

ScaleReport scale_axis(const CocycleElement& g, int max_t, const TidyOptions& opts) {
  auto rep = classify(g);
  if (!rep.hyperbolic()) return bounded_report(g, rep, ScaleRoute::AxisSegment);
  const Axis& ax = *rep.axis;
  for (int t = ax.ell; t <= max_t; t += ax.ell) {
    auto seg = ax.window(0, t);
    FixatorSpec u(g.scheme(), as_set(seg));
    auto v = check_tidy(u, g, opts);
    if (!v.minimizing.value) continue;
    ScaleReport out;
    out.route = ScaleRoute::AxisSegment;
    out.s_g = v.index;
    out.s_ginv = v.index_inv;
    out.certifying = u;
    out.t0 = t;
    out.horizon = max_t;
    out.cert = v.minimizing.cert;
    return out;
  }
  throw HorizonError("scale_axis: no minimizing axis segment up to t = " + std::to_string(max_t));
}

ScaleReport scale_branching(const CocycleElement& g, int radius) {
  auto rep = classify(g);
  if (!rep.hyperbolic()) return bounded_report(g, rep, ScaleRoute::Branching);
  int ell = rep.ell;
  if (radius < 0) radius = 2 * ell;
  if (radius < ell) throw HorizonError("scale_branching: radius below the translation length");
  ScaleReport out;
  out.route = ScaleRoute::Branching;
  out.horizon = radius;
  auto tp = build_axis_tree(g, radius, true);
  out.s_g = branching_sigma(tp, tp.rho.start, ell);
  for (const auto& x : tp.members)
    if (distance(x, tp.rho.start) + ell <= radius && branching_sigma(tp, x, ell) != out.s_g)
      throw InvariantViolation("branching number depends on the base point");
  auto tm = build_axis_tree(g, ell, false);
  out.s_ginv = branching_sigma(tm, tm.rho.start, ell);
  // T is g-invariant, so the level sizes below gamma(0) are exact once the
  // radius reaches ell.
  out.cert = Certification::exact();
  return out;
}

ScaleReport scale_search(const CocycleElement& g, int bound, std::size_t budget) {
  auto rep = classify(g);
  VertexAddr c;
  if (rep.hyperbolic()) c = rep.axis->origin();
  else c = rep.fixed_vertex ? *rep.fixed_vertex : rep.fixed_edge->first;
  const auto& s = g.scheme();
  VVec verts = ball(c, bound, s->degree());
  std::size_t n = verts.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (distance(verts[i], verts[j]) == 1) adj[i].push_back(j);

  CocycleElement gi = g.inverse();
  ScaleReport out;
  out.route = ScaleRoute::Search;
  out.horizon = bound;
  out.s_g = out.s_ginv = static_cast<std::size_t>(-1);
  auto visit = [&](const std::vector<std::size_t>& sub) {
    if (++out.examined > budget)
      throw HorizonError("scale_search: more than " + std::to_string(budget) + " subtrees");
    VSet a;
    for (auto i : sub) a.insert(verts[i]);
    VVec av = as_vec(a);
    std::size_t i1 = count(FixatorSpec(s, translate(g, a)), av);
    std::size_t i2 = count(FixatorSpec(s, translate(gi, a)), av);
    if (i1 < out.s_g) {
      out.s_g = i1;
      out.certifying = FixatorSpec(s, a);
    }
    out.s_ginv = std::min(out.s_ginv, i2);
  };

  // ESU enumeration of connected vertex subsets, each exactly once.
  std::vector<char> in_sub(n, 0), near(n, 0);
  std::vector<std::size_t> sub;
  std::function<void(std::vector<std::size_t>, std::size_t)> extend =
      [&](std::vector<std::size_t> ext, std::size_t root) {
        visit(sub);
        while (!ext.empty()) {
          std::size_t w = ext.back();
          ext.pop_back();
          std::vector<std::size_t> next = ext;
          std::vector<std::size_t> marked;
          for (auto u : adj[w])
            if (u > root && !in_sub[u] && !near[u]) {
              next.push_back(u);
            }
          // Neighbours of w become excluded for deeper levels of this branch.
          for (auto u : adj[w])
            if (!near[u]) {
              near[u] = 1;
              marked.push_back(u);
            }
          sub.push_back(w);
          in_sub[w] = 1;
          extend(next, root);
          in_sub[w] = 0;
          sub.pop_back();
          for (auto u : marked) near[u] = 0;
        }
      };
  for (std::size_t v = 0; v < n; ++v) {
    sub = {v};
    in_sub[v] = 1;
    std::vector<std::size_t> marked, ext;
    for (auto u : adj[v]) {
      if (u > v) ext.push_back(u);
      if (!near[u]) {
        near[u] = 1;
        marked.push_back(u);
      }
    }
    near[v] = 1;
    marked.push_back(v);
    extend(ext, v);
    for (auto u : marked) near[u] = 0;
    in_sub[v] = 0;
  }
  out.cert = Certification::stabilized(bound);
  return out;
}


namespace {

// Delta_{G_xi}(h) = |hVh^-1 : V and hVh^-1| / |V : V and hVh^-1| with
// V = Fix(B_1(x) and the ray from x to xi), x on the axis of h.
Rational end_modular(const CocycleElement& h, const VertexAddr& x, const End& xi) {
  const auto& s = h.scheme();
  VVec b1 = ball(x, 1, s->degree());
  VSet sb = as_set(b1);
  VertexAddr hx = h.apply(x);
  FixatorSpec v = with_ray(FixatorSpec(s, sb), Ray{x, xi});
  FixatorSpec hv = with_ray(FixatorSpec(s, translate(h, sb)), Ray{hx, xi});
  VSet q = sb;
  for (const auto& y : geodesic(x, hx)) q.insert(y);
  std::size_t num = count(hv, as_vec(q));
  std::size_t den = count(v, as_vec(translate(h, sb)));
  return Rational::of(num, den);
}

bool same_ratio(const Rational& r, std::size_t a, std::size_t b) { return r.num * b == r.den * a; }

}  // namespace

ModularReport modular(const CocycleElement& g, const ScaleReport* known) {
  ModularReport out;
  auto rep = classify(g);
  if (!rep.hyperbolic()) {
    out.bounded = true;
    return out;
  }
  const Axis& ax = *rep.axis;
  out.plus = end_modular(g, ax.origin(), ax.plus);
  out.minus = end_modular(g.inverse(), ax.origin(), ax.minus);
  out.delta = Rational::of(out.plus.num * out.minus.den, out.plus.den * out.minus.num);
  if (known) {
    if (!same_ratio(out.delta, known->s_g, known->s_ginv))
      throw InvariantViolation("modular function " + out.delta.str() + " differs from s(g)/s(g^-1)");
    if (!same_ratio(out.plus, known->s_g, 1) || !same_ratio(out.minus, known->s_ginv, 1))
      throw InvariantViolation("end stabilizer modular function differs from the scale");
  }
  return out;
}

BatteryReport uniscalar_battery(const CocycleElement& g, const BatteryOptions& opts) {
  BatteryReport out;
  auto rep = classify(g);
  if (!rep.hyperbolic()) {
    out.bounded = true;
    out.verdict = "bounded";
    return out;
  }
  const Axis& ax = *rep.axis;
  const auto& s = g.scheme();
  const int ell = ax.ell;
  VertexAddr x = ax.origin();
  auto exact = Certification::exact();

  // (i) s(g) = 1.
  out.scale = scale_axis(g);
  out.flags[0] = {out.scale.s_g == 1, out.scale.cert};
  // (ii) the ray fixator from gamma(ell) does not move gamma[0, ell).
  {
    FixatorSpec u = with_ray(FixatorSpec(s, {ax.at(ell)}), ax.forward_ray(ell));
    out.flags[1] = {count(u, ax.window(0, ell - 1)) == 1, exact};
  }
  // (iii) Delta_{G_xi+}(g) = 1.
  {
    auto m = modular(g);
    out.flags[2] = {m.plus.num == m.plus.den, exact};
  }
  // (iv), (v): some ball fixator (with the forward ray) fixes the backward ray.
  auto openness = [&](bool with_forward) {
    for (int r = 0; r <= opts.ball_horizon; ++r) {
      FixatorSpec u(s, as_set(ball(x, r, s->degree())));
      if (with_forward) u.rays.push_back(ax.forward_ray(0));
      if (fixes_ray(u, x, ax.minus)) return Verdict{true, exact};
    }
    return Verdict{false, Certification::stabilized(opts.ball_horizon)};
  };
  out.flags[3] = openness(false);
  out.flags[4] = openness(true);
  // (vi) fixing the forward ray fixes the backward ray.
  out.flags[5] = {fixes_ray(with_ray(FixatorSpec(s, {x}), ax.forward_ray(0)), x, ax.minus), exact};
  // (vii) the axis tree toward xi+ is a line.
  {
    auto t = build_axis_tree(g, ell + 1, true);
    bool line = true;
    for (int m = 1; m <= ell + 1; ++m) line = line && t.level_size(m) == 1;
    out.flags[6] = {line, exact};
  }

  std::optional<bool> exact_value;
  bool all_same = true;
  for (const auto& f : out.flags) {
    all_same = all_same && f.value == out.flags[0].value;
    if (!f.cert.is_exact()) continue;
    if (exact_value && *exact_value != f.value)
      throw InvariantViolation("uniscalar conditions disagree");
    exact_value = f.value;
  }
  out.agree = all_same;
  if (!all_same) out.verdict = "undetermined";
  else out.verdict = out.flags[0].value ? "uniscalar" : "not-uniscalar";
  return out;
}

RestrictionSet end_part(const FixatorSpec& u, const CocycleElement& g, int sign, const VVec& target) {
  require_plain(u);
  Axis ax = classify(g).require_axis();
  return enumerate_restrictions(with_ray(u, Ray{*u.fixed.begin(), sign > 0 ? ax.plus : ax.minus}),
                                target);
}

RestrictionSet willis_part(const FixatorSpec& u, const CocycleElement& g, int sign, const VVec& target,
                           int shifts) {
  require_plain(u);
  CocycleElement h = sign > 0 ? g : g.inverse();
  VSet all, cur = u.fixed;
  for (int n = 0; n <= shifts; ++n) {
    all.insert(cur.begin(), cur.end());
    cur = translate(h, cur);
  }
  auto res = enumerate_restrictions(FixatorSpec(u.scheme, all), target);
  res.cert = Certification::stabilized(shifts);
  return res;
}

NeighbourhoodReport tidy_neighbourhood_check(const FixatorSpec& u, const CocycleElement& g,
                                             int horizon) {
  require_plain(u);
  const auto& s = u.scheme;
  const VertexAddr& x = *u.fixed.begin();
  VVec b = ball(x, horizon + 1, s->degree());
  std::map<VertexAddr, std::size_t> pos;
  for (std::size_t i = 0; i < b.size(); ++i) pos[b[i]] = i;
  auto plus = end_part(u, g, +1, b);
  auto minus = end_part(u, g, -1, b);

  // q lies in res(U+) res(U-) iff p^-1 q lies in res(U-) for some p in res(U+).
  auto in_product = [&](const VVec& q) {
    for (const auto& p : plus.images) {
      std::map<VertexAddr, VertexAddr> pinv;
      for (std::size_t i = 0; i < b.size(); ++i) pinv[p[i]] = b[i];
      VVec r(b.size());
      for (std::size_t i = 0; i < b.size(); ++i) r[i] = pinv.at(q[i]);
      if (minus.images.count(r)) return true;
    }
    return false;
  };
  NeighbourhoodReport out;
  for (int r = 0; r <= horizon; ++r) {
    auto res = enumerate_restrictions(FixatorSpec(s, as_set(ball(x, r, s->degree()))), b);
    if (std::all_of(res.images.begin(), res.images.end(), in_product)) {
      out.found = true;
      out.radius = r;
      out.cert = Certification::stabilized(horizon + 1);
      return out;
    }
  }
  out.cert = Certification::undetermined(horizon);
  return out;
}

ArrowReport arrow_classify(const CocycleElement& g) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  auto sc = scale_branching(g);
  ArrowReport out;
  out.s_g = sc.s_g;
  out.s_ginv = sc.s_ginv;
  if (out.s_g == 1 && out.s_ginv == 1) {
    out.kind = ArrowCase::UniscalarPair;
    const auto& s = g.scheme();
    VertexAddr x = ax.origin();
    bool fwd = fixes_ray(with_ray(FixatorSpec(s, {x}), ax.forward_ray(0)), x, ax.minus);
    bool bwd = fixes_ray(with_ray(FixatorSpec(s, {x}), ax.backward_ray(0)), x, ax.plus);
    out.stabilizers_equal = fwd && bwd;
  } else if (out.s_ginv == 1) {
    out.kind = ArrowCase::OpenStabilizer;
  } else if (out.s_g == 1) {
    out.kind = ArrowCase::ArrowToRepelling;
  } else {
    out.kind = ArrowCase::NoArrows;
  }
  return out;
}

}  // namespace tdlc
