#include "tdlc/scheme.hpp"

#include <algorithm>

namespace tdlc {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxBall = 4'000'000;

std::size_t ball_size(int r, int degree) {
  std::size_t total = 1, layer = 1;
  for (int k = 1; k <= r; ++k) {
    layer *= static_cast<std::size_t>(k == 1 ? degree : degree - 1);
    total += layer;
    if (total > kMaxBall) throw HorizonError("element depth too large to tabulate");
  }
  return total;
}

Perm perm_from_json(const json& j) {
  if (j.is_string()) return Perm::parse(j.get<std::string>());
  if (!j.is_array()) throw Error("permutation must be an image array");
  std::vector<std::uint8_t> img;
  for (auto& v : j) img.push_back(v.get<std::uint8_t>());
  return Perm(std::move(img));
}

json perm_to_json(const Perm& p) {
  json a = json::array();
  for (auto v : p.images()) a.push_back(int(v));
  return a;
}

void step(Word& w, Color c) {
  if (!w.empty() && w.back() == c)
    w.pop_back();
  else
    w.push_back(c);
}

}  // namespace

std::vector<VertexAddr> base_ball(int r, int degree) {
  ball_size(r, degree);
  return ball(VertexAddr(), r, degree);
}

GroupScheme GroupScheme::full(int degree) {
  TreeParams{degree}.validate();
  GroupScheme s;
  s.kind_ = SchemeKind::Full;
  s.degree_ = degree;
  s.local_ = PermGroup::symmetric(static_cast<std::size_t>(degree));
  s.coupling_.assign(static_cast<std::size_t>(degree), s.local_);
  s.finish();
  return s;
}

GroupScheme GroupScheme::universal(const PermGroup& f) {
  GroupScheme s;
  s.kind_ = SchemeKind::Universal;
  s.degree_ = static_cast<int>(f.domain());
  if (s.degree_ < 3) s.flags_.push_back("degree_below_3");
  s.local_ = f;
  s.coupling_.assign(f.domain(), f);
  if (f.orbit(0).size() != f.domain()) s.flags_.push_back("local_group_not_transitive");
  s.finish();
  return s;
}

GroupScheme GroupScheme::coupled_wreath(int n) {
  if (n < 2) throw Error("coupled wreath scheme needs n >= 2");
  GroupScheme s;
  s.kind_ = SchemeKind::CoupledWreath;
  s.wreath_n_ = n;
  s.degree_ = n * n;
  auto un = static_cast<std::size_t>(n);
  s.local_ = wreath_sym_cyclic(un);
  for (int c = 0; c < s.degree_; ++c)
    s.coupling_.push_back(wreath_column_block(un, static_cast<std::size_t>(c / n)));
  s.finish();
  return s;
}

void GroupScheme::finish() {
  int m = local_order();
  const auto& el = local_.elements();
  mul_.resize(static_cast<std::size_t>(m) * m);
  inv_.resize(static_cast<std::size_t>(m));
  identity_ = local_.index_of(Perm::identity(local_.domain()));
  for (int a = 0; a < m; ++a) {
    inv_[a] = local_.index_of(el[a].inverse());
    for (int b = 0; b < m; ++b) mul_[a * m + b] = local_.index_of(el[a] * el[b]);
  }
  edge_.assign(static_cast<std::size_t>(degree_), {});
  edge_member_.assign(static_cast<std::size_t>(degree_), std::vector<bool>(m, false));
  bool all_trivial = true;
  for (int c = 0; c < degree_; ++c) {
    for (int a = 0; a < m; ++a)
      if (el[a](c) == c && coupling_[c].contains(el[a])) {
        edge_[c].push_back(a);
        edge_member_[c][a] = true;
      }
    if (edge_[c].size() > 1) all_trivial = false;
  }
  if (all_trivial) flags_.push_back("trivial_edge_groups");
}

bool GroupScheme::coupling_ok(const Perm& a, const Perm& b, Color c) const {
  return coupling_[c].contains(a.inverse() * b);
}

std::string GroupScheme::name() const {
  switch (kind_) {
    case SchemeKind::Full:
      return "Full(" + std::to_string(degree_) + ")";
    case SchemeKind::Universal:
      return "Universal(order " + std::to_string(local_.order()) + " on " +
             std::to_string(degree_) + ")";
    case SchemeKind::CoupledWreath:
      return "CoupledWreath(" + std::to_string(wreath_n_) + ")";
  }
  return "?";
}

GroupScheme GroupScheme::from_json(const json& j) {
  std::string kind = j.at("scheme").get<std::string>();
  if (kind == "full") return full(j.at("degree").get<int>());
  if (kind == "coupled_wreath") return coupled_wreath(j.at("n").get<int>());
  if (kind != "universal") throw Error("unknown scheme: " + kind);
  auto d = j.at("degree").get<std::size_t>();
  const json& f = j.at("F");
  if (f.is_string()) {
    auto name = f.get<std::string>();
    if (name == "symmetric") return universal(PermGroup::symmetric(d));
    if (name == "cyclic") return universal(PermGroup::cyclic(d));
    throw Error("unknown local group: " + name);
  }
  std::vector<Perm> gens;
  for (auto& g : f.at("generators")) gens.push_back(perm_from_json(g));
  return universal(PermGroup(d, std::move(gens)));
}

json GroupScheme::to_json() const {
  switch (kind_) {
    case SchemeKind::Full:
      return {{"scheme", "full"}, {"degree", degree_}};
    case SchemeKind::CoupledWreath:
      return {{"scheme", "coupled_wreath"}, {"n", wreath_n_}};
    case SchemeKind::Universal: {
      json gens = json::array();
      for (auto& g : local_.generators()) gens.push_back(perm_to_json(g));
      return {{"scheme", "universal"}, {"degree", degree_}, {"F", {{"generators", gens}}}};
    }
  }
  return {};
}

CocycleElement::CocycleElement(SchemePtr scheme, VertexAddr base_image, int depth,
                               std::map<VertexAddr, Perm> sigma)
    : scheme_(std::move(scheme)), base_(std::move(base_image)), depth_(depth),
      sigma_(std::move(sigma)) {
  if (!scheme_) throw Error("element needs a scheme");
  if (depth_ < 0) throw Error("negative element depth");
  int d = scheme_->degree();
  for (Color c : base_.word())
    if (c >= d) throw Error("base image uses a color outside the degree");
  std::size_t expected = ball_size(depth_, d);
  for (const auto& [v, p] : sigma_) {
    if (static_cast<int>(v.depth()) > depth_) throw Error("local action beyond element depth: " + v.str());
    for (Color c : v.word())
      if (c >= d) throw Error("vertex uses a color outside the degree: " + v.str());
    if (static_cast<int>(p.size()) != d) throw Error("local action has wrong degree at " + v.str());
  }
  if (sigma_.size() != expected) throw Error("local actions missing below element depth");
}

CocycleElement CocycleElement::identity(SchemePtr scheme) {
  auto d = static_cast<std::size_t>(scheme->degree());
  return constant(std::move(scheme), VertexAddr(), Perm::identity(d));
}

CocycleElement CocycleElement::constant(SchemePtr scheme, VertexAddr base_image, const Perm& p) {
  return CocycleElement(std::move(scheme), std::move(base_image), 0, {{VertexAddr(), p}});
}

const Perm& CocycleElement::sigma(const VertexAddr& v) const {
  if (static_cast<int>(v.depth()) <= depth_) return sigma_.at(v);
  return sigma_.at(v.ancestor(static_cast<std::size_t>(depth_)));
}

VertexAddr CocycleElement::apply(const VertexAddr& v) const {
  Word img = base_.word();
  const auto& w = v.word();
  auto lim = static_cast<std::size_t>(depth_);
  const Perm* tail = nullptr;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Perm* s;
    if (k <= lim) {
      s = &sigma_.at(v.ancestor(k));
      if (k == lim) tail = s;
    } else {
      s = tail;
    }
    step(img, (*s)(w[k]));
  }
  return VertexAddr(std::move(img));
}

VertexAddr CocycleElement::preimage(const VertexAddr& v) const {
  VertexAddr u;
  for (Color c : path_colors(base_, v)) u = neighbor(u, sigma(u).inverse()(c));
  return u;
}

std::vector<std::string> CocycleElement::legality_problems() const {
  std::vector<std::string> out;
  const auto& s = *scheme_;
  for (const auto& [v, p] : sigma_) {
    int a = s.index(p);
    if (a < 0) {
      out.push_back("local action " + p.str() + " at '" + v.str() + "' is outside the local group");
      continue;
    }
    if (v.is_base()) continue;
    int b = s.index(sigma_.at(v.parent()));
    if (b >= 0 && !s.edge_ok(b, a, v.last()))
      out.push_back("edge into '" + v.str() + "' breaks the edge condition");
  }
  return out;
}

bool CocycleElement::is_legal() const { return legality_problems().empty(); }

CocycleElement CocycleElement::compose(const CocycleElement& h) const {
  if (scheme_ != h.scheme_ && !(scheme_->to_json() == h.scheme_->to_json()))
    throw Error("composing elements of different schemes");
  int dh = h.depth_;
  int nd = std::max(dh, depth_ + static_cast<int>(h.base_.depth()));
  std::map<VertexAddr, Perm> sig;
  for (auto& v : base_ball(nd, scheme_->degree())) {
    Perm p = sigma(h.apply(v)) * h.sigma(v);
    sig.emplace(std::move(v), std::move(p));
  }
  return CocycleElement(scheme_, apply(h.base_), nd, std::move(sig)).normalized();
}

CocycleElement CocycleElement::inverse() const {
  int nd = depth_ + static_cast<int>(base_.depth());
  std::map<VertexAddr, Perm> sig;
  for (auto& v : base_ball(nd, scheme_->degree())) {
    Perm p = sigma(preimage(v)).inverse();
    sig.emplace(std::move(v), std::move(p));
  }
  return CocycleElement(scheme_, preimage(VertexAddr()), nd, std::move(sig)).normalized();
}

CocycleElement CocycleElement::power(int k) const {
  CocycleElement base = k < 0 ? inverse() : *this;
  int n = k < 0 ? -k : k;
  CocycleElement acc = identity(scheme_);
  while (n > 0) {
    if (n & 1) acc = acc.compose(base);
    n >>= 1;
    if (n) base = base.compose(base);
  }
  return acc;
}

CocycleElement CocycleElement::normalized() const {
  CocycleElement out = *this;
  while (out.depth_ > 0) {
    bool same = true;
    for (const auto& [v, p] : out.sigma_)
      if (static_cast<int>(v.depth()) == out.depth_ && p != out.sigma_.at(v.parent())) {
        same = false;
        break;
      }
    if (!same) break;
    std::erase_if(out.sigma_, [&](const auto& kv) {
      return static_cast<int>(kv.first.depth()) == out.depth_;
    });
    --out.depth_;
  }
  return out;
}

bool CocycleElement::operator==(const CocycleElement& o) const {
  auto a = normalized();
  auto b = o.normalized();
  return a.base_ == b.base_ && a.depth_ == b.depth_ && a.sigma_ == b.sigma_;
}

CocycleElement operator*(const CocycleElement& g, const CocycleElement& h) { return g.compose(h); }

json CocycleElement::to_json() const {
  json sig = json::object();
  for (const auto& [v, p] : sigma_) sig[v.str()] = perm_to_json(p);
  return {{"base_image", base_.str()}, {"depth", depth_}, {"sigma", sig}};
}

CocycleElement CocycleElement::from_json(SchemePtr scheme, const json& j) {
  if (j.contains("builtin")) return builtin_element(scheme, j.at("builtin").get<std::string>(), j);
  auto base = VertexAddr::parse(j.value("base_image", std::string()));
  int depth = j.value("depth", 0);
  std::map<VertexAddr, Perm> sig;
  if (j.contains("sigma"))
    for (auto& [k, v] : j.at("sigma").items()) sig.emplace(VertexAddr::parse(k), perm_from_json(v));
  if (j.contains("default")) {
    Perm def = perm_from_json(j.at("default"));
    for (auto& v : base_ball(depth, scheme->degree())) sig.emplace(v, def);
  }
  CocycleElement g(std::move(scheme), std::move(base), depth, std::move(sig));
  if (!j.value("allow_illegal", false)) {
    auto problems = g.legality_problems();
    if (!problems.empty()) throw Error("illegal element: " + problems.front());
  }
  return g;
}

CocycleElement local_perturbation(SchemePtr scheme, const VertexAddr& v, const Perm& p) {
  int d = scheme->degree();
  auto id = Perm::identity(static_cast<std::size_t>(d));
  int depth = static_cast<int>(v.depth());
  std::map<VertexAddr, Perm> sig;
  for (auto& w : base_ball(depth, d)) sig.emplace(w, w == v ? p : id);
  CocycleElement g(std::move(scheme), VertexAddr(), depth, std::move(sig));
  auto problems = g.legality_problems();
  if (!problems.empty()) throw Error("perturbation is not legal: " + problems.front());
  return g.normalized();
}

CocycleElement builtin_element(SchemePtr scheme, const std::string& name, const json& params) {
  const auto& s = *scheme;
  auto d = static_cast<std::size_t>(s.degree());
  if (name == "identity") return CocycleElement::identity(scheme);
  if (name == "standard_translation") {
    if (s.kind() == SchemeKind::CoupledWreath)
      return CocycleElement::constant(scheme, VertexAddr(Word{0}),
                                      wreath_top(static_cast<std::size_t>(s.wreath_n())));
    for (const auto& p : s.local_group().elements()) {
      for (std::size_t a = 0; a < d; ++a)
        if (p(a) != a) return CocycleElement::constant(scheme, VertexAddr(Word{Color(a)}), p);
    }
    throw Error("local group is trivial; no translation exists");
  }
  if (name == "translation") {
    int len = params.value("length", 1);
    if (len < 1) throw Error("translation length must be positive");
    Word w;
    for (int i = 0; i < len; ++i) w.push_back(static_cast<Color>(i % 2));
    Perm p = len % 2 ? transposition(d, 0, 1) : Perm::identity(d);
    if (!s.local_group().contains(p)) throw Error("local group lacks the transposition (0 1)");
    return CocycleElement::constant(scheme, VertexAddr(std::move(w)), p);
  }
  if (name == "local_perturbation") {
    auto v = VertexAddr::parse(params.value("vertex", std::string()));
    return local_perturbation(scheme, v, perm_from_json(params.at("perm")));
  }
  throw Error("unknown builtin element: " + name);
}

}  // namespace tdlc
