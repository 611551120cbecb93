#include "tdlc/report.hpp"

namespace tdlc::report {

json cert(const Certification& c) {
  switch (c.kind) {
    case Certification::Kind::Exact:
      return {{"kind", "exact"}};
    case Certification::Kind::StabilizedAt:
      return {{"kind", "stabilized_at"}, {"horizon", c.horizon}};
    case Certification::Kind::Undetermined:
      return {{"kind", "undetermined"}, {"horizon", c.horizon}};
  }
  return nullptr;
}

json verdict(const Verdict& v) {
  json out{{"cert", cert(v.cert)}};
  out["value"] = v.determined() ? json(v.value) : json(nullptr);
  return out;
}

json rational(const Rational& r) { return {{"num", r.num}, {"den", r.den}, {"str", r.str()}}; }

json vertices(const std::vector<VertexAddr>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(v.str());
  return out;
}

json fixator(const FixatorSpec& u) {
  json out{{"fixed", vertices({u.fixed.begin(), u.fixed.end()})}};
  if (!u.rays.empty()) {
    json rays = json::array();
    for (const auto& r : u.rays) rays.push_back({{"start", r.start.str()}, {"end", r.end.str()}});
    out["rays"] = rays;
  }
  if (!u.halftrees.empty()) {
    json hs = json::array();
    for (const auto& h : u.halftrees) hs.push_back({{"inner", h.inner.str()}, {"outer", h.outer.str()}});
    out["halftrees"] = hs;
  }
  return out;
}

json axis(const Axis& a) {
  json window = json::array();
  for (long t = -a.ell; t <= 2L * a.ell; ++t) window.push_back({{"t", t}, {"vertex", a.at(t).str()}});
  return {{"xi_plus", a.plus.str()}, {"xi_minus", a.minus.str()}, {"ell", a.ell},
          {"origin", a.origin().str()}, {"window", window}};
}

json isometry(const IsometryReport& r) {
  json out{{"type", r.hyperbolic() ? "hyperbolic" : "bounded"}, {"ell", r.ell}, {"cert", cert({})}};
  if (r.fixed_vertex) out["fixed_vertex"] = r.fixed_vertex->str();
  if (r.fixed_edge) out["fixed_edge"] = {r.fixed_edge->first.str(), r.fixed_edge->second.str()};
  if (r.axis) out["axis"] = axis(*r.axis);
  return out;
}

json scale(const ScaleReport& r) {
  json out{{"route", route_name(r.route)}, {"s", r.s_g}, {"s_inv", r.s_ginv},
           {"delta", rational(r.delta())}, {"horizon", r.horizon}, {"cert", cert(r.cert)}};
  if (r.route == ScaleRoute::AxisSegment) out["t0"] = r.t0;
  if (r.route == ScaleRoute::Search) out["examined"] = r.examined;
  if (r.certifying) out["certifying"] = fixator(*r.certifying);
  return out;
}

json tidy(const TidyVerdict& v) {
  json levels = json::array();
  for (const auto& l : v.gta_levels)
    levels.push_back({{"depth", l.depth}, {"pairs", l.pairs}, {"plus", l.plus}, {"minus", l.minus}});
  return {{"TA", verdict(v.ta)},
          {"GTA", verdict(v.gta)},
          {"GT_plus", verdict(v.gt_plus)},
          {"GT_minus", verdict(v.gt_minus)},
          {"minimizing", verdict(v.minimizing)},
          {"GT_plus_forms", v.gt_plus_forms},
          {"GT_minus_forms", v.gt_minus_forms},
          {"GTA_levels", levels},
          {"index", v.index},
          {"index_inv", v.index_inv}};
}

json modular(const ModularReport& m) {
  return {{"bounded", m.bounded}, {"plus", rational(m.plus)}, {"minus", rational(m.minus)},
          {"delta", rational(m.delta)}, {"cert", cert({})}};
}

json battery(const BatteryReport& b) {
  json flags = json::array();
  for (const auto& f : b.flags) flags.push_back(verdict(f));
  json out{{"verdict", b.verdict}, {"bounded", b.bounded}, {"agree", b.agree}, {"flags", flags}};
  if (!b.bounded) out["scale"] = scale(b.scale);
  return out;
}

json neighbourhood(const NeighbourhoodReport& n) {
  json out{{"found", n.found}, {"cert", cert(n.cert)}};
  out["radius"] = n.found ? json(n.radius) : json(nullptr);
  return out;
}

json arrows(const ArrowReport& a) {
  json out{{"case", arrow_case_name(a.kind)}, {"s", a.s_g}, {"s_inv", a.s_ginv}};
  if (a.stabilizers_equal) out["stabilizers_equal"] = *a.stabilizers_equal;
  return out;
}

json absorbing(const AbsorbingWitness& w) {
  return {{"end", w.xi.str()},     {"times", w.times},     {"radii", w.radii},
          {"regularized", w.regularized}, {"horizon", w.horizon}, {"stretch", w.stretch},
          {"absorbing", w.absorbing}};
}

json contraction(const ContractionReport& c) {
  return {{"geometric", c.geometric}, {"per_element", c.per_element}, {"witness", absorbing(c.witness)}};
}

json contraction_space(const ContractionSpaceReport& c) {
  return {{"Z_subset_gZ", c.z_subset_gz},
          {"covers_Y", c.covers_y},
          {"intersection_empty", c.intersection_empty},
          {"union_is_axis", c.union_is_axis},
          {"Z_size", c.z_size},
          {"Y_size", c.y_size},
          {"covered", c.covered.size()},
          {"horizon", c.horizon}};
}

json axis_tree(const AxisTree& t, int max_m) {
  json levels = json::array();
  for (int m = 0; m <= t.radius; ++m) levels.push_back(t.level_size(m));
  json sigma = json::array();
  for (int m = 0; m <= max_m; ++m) {
    json row{{"m", m}};
    try {
      row["sigma"] = branching_sigma(t, t.rho.start, m);
      row["cert"] = cert(t.cert);
    } catch (const HorizonError&) {
      row["sigma"] = nullptr;
      row["cert"] = cert(Certification::undetermined(t.radius));
    }
    sigma.push_back(row);
  }
  return {{"root", t.rho.start.str()}, {"end", t.xi().str()},      {"radius", t.radius},
          {"k_max", t.k_max},           {"lambda", t.lambda},       {"members", t.members.size()},
          {"levels", levels},           {"tail", vertices(t.tail)}, {"sigma", sigma},
          {"cert", cert(t.cert)}};
}

json envelope(const std::string& kind, json body) {
  json out{{"format", kFormat}, {"kind", kind}};
  out.update(body);
  return out;
}

}  // namespace tdlc::report
