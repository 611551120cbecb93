#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "tdlc/report.hpp"

using namespace tdlc;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kViolation = 1, kUndetermined = 2, kParse = 3 };

struct ParseFailure : Error {
  using Error::Error;
};

json load(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw ParseFailure("cannot open " + arg);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseFailure(arg + ": " + e.what());
  }
}

SchemePtr load_scheme(const std::string& arg) {
  auto j = load(arg);
  // A group file may also carry the element.
  return std::make_shared<const GroupScheme>(GroupScheme::from_json(j.contains("group") ? j.at("group") : j));
}

CocycleElement load_element(const SchemePtr& s, const std::string& arg) {
  auto j = load(arg);
  return CocycleElement::from_json(s, j.contains("element") ? j.at("element") : j);
}

/// x<t> is gamma(t) on the axis of g, "e" the base vertex, anything else a
/// dotted color word.
VertexAddr named_point(const std::string& tok, const std::optional<Axis>& ax) {
  if (tok == "e" || tok.empty()) return VertexAddr();
  if (tok.front() == 'x') {
    if (!ax) throw ParseFailure("point " + tok + " needs a hyperbolic element");
    long t = 0;
    try {
      std::size_t used = 0;
      t = std::stol(tok.substr(1), &used);
      if (used + 1 != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseFailure("bad axis point: " + tok);
    }
    return ax->at(t);
  }
  return VertexAddr::parse(tok);
}

std::set<VertexAddr> parse_points(const std::string& list, const std::optional<Axis>& ax) {
  std::set<VertexAddr> out;
  std::stringstream in(list);
  std::string tok;
  while (std::getline(in, tok, ',')) out.insert(named_point(tok, ax));
  return out;
}

FixatorSpec parse_subgroup(const SchemePtr& s, const std::string& text, const std::optional<Axis>& ax) {
  if (text.rfind("fix:", 0) != 0) throw ParseFailure("subgroup must be written fix:v1,v2,...");
  auto pts = parse_points(text.substr(4), ax);
  if (pts.empty()) throw ParseFailure("empty fixed set");
  return FixatorSpec(s, pts);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

bool undetermined(const Verdict& v) { return !v.determined(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scales, tidy subgroups and contraction on trees"};
  app.require_subcommand(1);

  std::string group, element, method = "all", subgroup, out = "json";
  std::vector<std::string> members, matrices;
  int horizon = -1, radius = -1, bound = 2, p = 2, max_m = -1;
  std::size_t budget = 200000;
  bool minus = false, axis_space = false;
  std::string l1, l2, fixed;

  auto* dyn = app.add_subcommand("dynamics", "classify an element");
  auto* sc = app.add_subcommand("scale", "scale by the axis, branching and search routes");
  auto* tc = app.add_subcommand("tidy-check", "geometric tidiness of a fixator");
  auto* at = app.add_subcommand("axis-tree", "axis tree and branching table");
  auto* ct = app.add_subcommand("contract", "contraction membership and absorbing sets");
  auto* bt = app.add_subcommand("bt", "Bruhat-Tits tree of GL2(Q_p)");
  auto* orc = app.add_subcommand("oracle", "engine against brute-force enumeration");

  for (auto* c : {dyn, sc, tc, at, ct}) {
    c->add_option("--group", group, "group scheme JSON (file or inline)")->required();
    c->add_option("--element", element, "element JSON (file or inline)")->required();
  }
  sc->add_option("--method", method)->check(CLI::IsMember({"axis", "branching", "search", "all"}));
  sc->add_option("--horizon", horizon, "axis route: largest segment length");
  sc->add_option("--radius", radius, "branching route: axis tree radius");
  sc->add_option("--bound", bound, "search route: ball radius")->check(CLI::PositiveNumber);
  sc->add_option("--budget", budget, "search route: subgroup budget")->check(CLI::PositiveNumber);
  tc->add_option("--subgroup", subgroup, "fix:v1,v2 with v a color word, e or x<t>")->required();
  at->add_option("--radius", radius)->check(CLI::PositiveNumber);
  at->add_option("--out", out)->check(CLI::IsMember({"json", "dot"}));
  at->add_option("--sigma-depth", max_m, "largest m in the sigma table (default: the radius)")
      ->check(CLI::NonNegativeNumber);
  at->add_flag("--minus", minus, "explore toward the repelling end");
  ct->add_option("--member", members, "element of C (repeatable)")->required()->allow_extra_args(false);
  ct->add_option("--horizon", horizon);
  ct->add_flag("--axis", axis_space, "take Y to be the axis instead of the whole tree");
  orc->add_option("--group", group)->required();
  orc->add_option("--radius", radius)->required()->check(CLI::Range(1, 3));
  orc->add_option("--fixed", fixed, "extra fixed vertices, comma separated");

  auto* bt_dist = bt->add_subcommand("distance", "distance between two lattice classes");
  auto* bt_fix = bt->add_subcommand("fixset", "vertices of the ball fixed by matrices");
  auto* bt_horo = bt->add_subcommand("horoball", "the horoball Z0 within the ball");
  auto* bt_sl2 = bt->add_subcommand("verify-sl2", "X^W = Z0 and its translates");
  bt->require_subcommand(1);
  for (auto* c : {bt_dist, bt_fix, bt_horo, bt_sl2}) c->add_option("--p", p)->check(CLI::IsMember({2, 3, 5, 7}));
  for (auto* c : {bt_fix, bt_horo, bt_sl2}) c->add_option("--radius", radius)->required()->check(CLI::Range(0, 8));
  bt_dist->add_option("--l1", l1, "basis matrix, JSON rows of \"n\" or \"n/p^k\"")->required();
  bt_dist->add_option("--l2", l2)->required();
  bt_fix->add_option("--matrix", matrices, "JSON rows, repeat for several")->required()->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kParse;
  }

  try {
    if (*bt) {
      using namespace tdlc::padic;
      int prec = default_precision(std::max(radius, 8));
      if (*bt_dist) {
        auto a = canonicalize(Mat2::parse(load(l1), p, prec));
        auto b = canonicalize(Mat2::parse(load(l2), p, prec));
        emit(report::envelope("bt-distance", {{"p", p}, {"l1", a.to_json()}, {"l2", b.to_json()},
                                              {"distance", distance(a, b)}, {"cert", report::cert({})}}));
        return kOk;
      }
      if (*bt_fix) {
        prec = default_precision(radius);
        std::vector<Mat2> ms;
        for (const auto& m : matrices) ms.push_back(Mat2::parse(load(m), p, prec));
        auto f = fixed_set(ms, p, radius, prec);
        json vs = json::array();
        for (const auto& v : f) vs.push_back(v.to_json());
        emit(report::envelope("bt-fixset", {{"p", p}, {"radius", radius}, {"size", f.size()},
                                            {"vertices", vs}, {"cert", report::cert({})}}));
        return kOk;
      }
      if (*bt_horo) {
        auto z = horoball_Z0(p, radius);
        json vs = json::array();
        for (const auto& v : z) vs.push_back(v.to_json());
        emit(report::envelope("bt-horoball", {{"p", p}, {"radius", radius}, {"size", z.size()},
                                              {"vertices", vs}, {"cert", report::cert({})}}));
        return kOk;
      }
      auto rep = verify_sl2(p, radius);
      json body = rep.to_json();
      body["pass"] = rep.ok();
      emit(report::envelope("bt-verify-sl2", body));
      return rep.ok() ? kOk : kViolation;
    }

    if (*orc) {
      auto s = load_scheme(group);
      auto pts = parse_points(fixed, std::nullopt);
      pts.insert(VertexAddr());
      auto target = base_ball(radius, s->degree());
      auto engine = enumerate_restrictions(FixatorSpec(s, pts), target);
      auto brute = oracle_restrictions(s, radius, pts, target);
      bool same = engine.images == brute;
      emit(report::envelope("oracle", {{"group", s->to_json()}, {"radius", radius},
                                       {"fixed", report::vertices({pts.begin(), pts.end()})},
                                       {"engine", engine.size()}, {"oracle", brute.size()},
                                       {"equal", same}, {"cert", report::cert({})}}));
      return same ? kOk : kViolation;
    }

    auto s = load_scheme(group);
    auto g = load_element(s, element);
    auto iso = classify(g);

    if (*dyn) {
      json body = report::isometry(iso);
      body["element"] = g.to_json();
      if (iso.hyperbolic()) body["modular"] = report::modular(modular(g));
      emit(report::envelope("dynamics", body));
      return kOk;
    }

    if (*sc) {
      std::vector<ScaleReport> reps;
      if (method == "axis" || method == "all") reps.push_back(scale_axis(g, horizon > 0 ? horizon : 12));
      if (method == "branching" || method == "all") reps.push_back(scale_branching(g, radius));
      if (method == "search" || method == "all") reps.push_back(scale_search(g, bound, budget));
      json routes = json::array();
      bool agree = true;
      for (const auto& r : reps) {
        routes.push_back(report::scale(r));
        agree = agree && r.s_g == reps.front().s_g && r.s_ginv == reps.front().s_ginv;
      }
      if (!agree) {
        emit(report::envelope("scale", {{"routes", routes}, {"agree", false}}));
        return kViolation;
      }
      auto m = modular(g, &reps.front());
      emit(report::envelope("scale", {{"s", reps.front().s_g}, {"s_inv", reps.front().s_ginv},
                                      {"routes", routes}, {"agree", true},
                                      {"modular", report::modular(m)}}));
      return kOk;
    }

    if (*tc) {
      auto u = parse_subgroup(s, subgroup, iso.axis);
      auto v = check_tidy(u, g);
      json body = report::tidy(v);
      body["subgroup"] = report::fixator(u);
      emit(report::envelope("tidy-check", body));
      for (const auto* x : {&v.ta, &v.gta, &v.gt_plus, &v.gt_minus, &v.minimizing})
        if (undetermined(*x)) return kUndetermined;
      return kOk;
    }

    if (*at) {
      auto t = build_axis_tree(g, radius > 0 ? radius : 2 * iso.require_axis().ell, !minus);
      if (out == "dot") {
        std::cout << to_dot(t);
        return kOk;
      }
      json body = report::axis_tree(t, max_m < 0 ? t.radius : max_m);
      emit(report::envelope("axis-tree", body));
      for (const auto& row : body.at("sigma"))
        if (row.at("sigma").is_null()) return kUndetermined;
      return kOk;
    }

    if (*ct) {
      std::vector<CocycleElement> c;
      for (const auto& m : members) c.push_back(load_element(s, m));
      auto y = axis_space ? Subspace::along(iso.require_axis()) : Subspace::whole();
      auto rep = contraction_geometric(c, g, y, horizon > 0 ? horizon : 16);
      json par = json::array();
      for (const auto& h : c) {
        auto pv = parabolic_routes(h, g);
        par.push_back({{"definitional", pv.definitional}, {"geometric", pv.geometric}, {"horizon", pv.horizon}});
      }
      json body = report::contraction(rep);
      body["subspace"] = y.str();
      body["parabolic"] = par;
      emit(report::envelope("contract", body));
      return kOk;
    }
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kViolation;
  } catch (const HorizonError& e) {
    std::cerr << "undetermined: " << e.what() << "\n";
    return kUndetermined;
  } catch (const ParseFailure& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return kOk;
}
