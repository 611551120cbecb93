#include "tdlc/restrict.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace tdlc {

std::string Certification::str() const {
  switch (kind) {
    case Kind::Exact:
      return "exact";
    case Kind::StabilizedAt:
      return "stabilized_at(" + std::to_string(horizon) + ")";
    case Kind::Undetermined:
      return "undetermined";
  }
  return "?";
}

FixatorSpec FixatorSpec::with(const std::set<VertexAddr>& more) const {
  FixatorSpec out = *this;
  out.fixed.insert(more.begin(), more.end());
  return out;
}

std::string FixatorSpec::str() const {
  std::string out = "Fix{";
  bool first = true;
  for (const auto& v : fixed) {
    out += (first ? "'" : ", '") + v.str() + "'";
    first = false;
  }
  for (const auto& r : rays) {
    out += (first ? "" : ", ") + ("ray('" + r.start.str() + "' -> " + r.end.str() + ")");
    first = false;
  }
  for (const auto& h : halftrees) {
    out += (first ? "" : ", ") + ("half('" + h.inner.str() + "' -> '" + h.outer.str() + "')");
    first = false;
  }
  return out + "}";
}

namespace {

bool in_halftree(const VertexAddr& x, const Halftree& h) {
  return distance(x, h.outer) < distance(x, h.inner);
}

}  // namespace

FixatorEngine::FixatorEngine(const FixatorSpec& u, const std::vector<VertexAddr>& target,
                             EngineOptions opts)
    : s_(u.scheme), opts_(opts), target_(target), halftrees_(u.halftrees) {
  if (!s_) throw Error("fixator needs a scheme");
  for (const auto& h : halftrees_)
    if (distance(h.inner, h.outer) != 1) throw Error("halftree must be given by an edge");

  // Root: a fixed vertex outside every halftree.
  std::vector<VertexAddr> candidates(u.fixed.begin(), u.fixed.end());
  for (const auto& r : u.rays) candidates.push_back(r.start);
  for (const auto& h : halftrees_) candidates.push_back(h.inner);
  bool found = false;
  for (const auto& c : candidates) {
    bool inside = false;
    for (const auto& h : halftrees_) inside = inside || in_halftree(c, h);
    if (!inside) {
      root_ = c;
      found = true;
      break;
    }
  }
  if (!found) throw Error("fixator of an empty set is not compact");

  std::set<VertexAddr> fixed(u.fixed.begin(), u.fixed.end());
  fixed.insert(root_);
  for (const auto& r : u.rays) fixed.insert(r.start);
  for (const auto& h : halftrees_) {
    fixed.insert(h.inner);
    fixed.insert(h.outer);
  }

  // A ray from any start is fixed iff its start and the ray from the root
  // to the same end are; rays toward one end collapse to one.
  std::vector<End> ends;
  for (const auto& r : u.rays)
    if (std::find(ends.begin(), ends.end(), r.end) == ends.end()) ends.push_back(r.end);

  fixed = convex_hull(fixed);
  std::set<VertexAddr> hull0 = fixed;
  for (const auto& b : target_) hull0.insert(b);
  hull0 = convex_hull(hull0);

  for (std::size_t i = 0; i < ends.size(); ++i) {
    Ray ray{root_, ends[i]};
    std::size_t diverge = 0;
    for (std::size_t j = 0; j < ends.size(); ++j) {
      if (j == i) continue;
      Ray other{root_, ends[j]};
      std::size_t k = 0;
      while (ray.letter(k) == other.letter(k)) ++k;
      diverge = std::max(diverge, k);
    }
    std::size_t t0 = std::max(ray.periodic_from(), diverge);
    while (hull0.count(ray.at(t0 + 1))) ++t0;
    for (std::size_t t = 0; t <= t0; ++t) fixed.insert(ray.at(t));
    TailInfo info{ray, t0, ends[i].period().size(), {}};
    info.allowed = tail_sets(ray, t0);
    tails_.push_back(std::move(info));
  }

  std::set<VertexAddr> hull = fixed;
  for (const auto& b : target_) hull.insert(b);
  hull = convex_hull(hull);

  // Nodes in BFS order from the root.
  std::deque<VertexAddr> queue{root_};
  index_[root_] = 0;
  nodes_.emplace_back();
  nodes_.back().v = root_;
  while (!queue.empty()) {
    VertexAddr v = queue.front();
    queue.pop_front();
    int n = index_.at(v);
    for (int c = 0; c < s_->degree(); ++c) {
      VertexAddr w = neighbor(v, Color(c));
      if (!hull.count(w) || index_.count(w)) continue;
      int m = static_cast<int>(nodes_.size());
      index_[w] = m;
      Node node;
      node.v = w;
      node.parent = n;
      node.up = Color(c);
      nodes_.push_back(std::move(node));
      nodes_[n].children.emplace_back(Color(c), m);
      if (fixed.count(w)) nodes_[n].fixed_children.push_back(Color(c));
      queue.push_back(w);
    }
  }
  for (auto& node : nodes_)
    for (const auto& h : halftrees_) node.frozen = node.frozen || in_halftree(node.v, h);
  for (std::size_t i = 0; i < tails_.size(); ++i)
    nodes_[index_.at(tails_[i].ray.at(tails_[i].t0))].tail = static_cast<int>(i);

  // Target slots in DFS preorder.
  for (std::size_t i = 0; i < target_.size(); ++i) {
    int n = index_.at(target_[i]);
    if (nodes_[n].target_slot < 0) nodes_[n].target_slot = static_cast<int>(i);
  }
  for (std::size_t k = nodes_.size(); k-- > 0;) {
    auto& node = nodes_[k];
    node.has_target_below = node.target_slot >= 0;
    for (auto& [c, w] : node.children) node.has_target_below = node.has_target_below || nodes_[w].has_target_below;
  }
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int n = stack.back();
    stack.pop_back();
    if (nodes_[n].target_slot >= 0) slot_order_.push_back(nodes_[n].target_slot);
    const auto& ch = nodes_[n].children;
    for (auto it = ch.rbegin(); it != ch.rend(); ++it)
      if (nodes_[it->second].has_target_below) stack.push_back(it->second);
  }

  int m = s_->local_order();
  viable_.assign(nodes_.size(), std::vector<signed char>(m, -1));
  maps_.resize(nodes_.size());
  for (auto& row : maps_) row.resize(m);
}

std::vector<std::vector<bool>> FixatorEngine::tail_sets(const Ray& ray, std::size_t t0) const {
  std::size_t p = ray.end.period().size();
  int m = s_->local_order();
  std::vector<std::vector<bool>> sets(p, std::vector<bool>(m, false));
  for (std::size_t k = 0; k < p; ++k) {
    Color c = ray.letter(t0 + k);
    for (int a = 0; a < m; ++a) sets[k][a] = s_->act(a, c) == c;
  }
  // Greatest fixpoint: keep a only if some continuation stays inside.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < p; ++k) {
      Color c = ray.letter(t0 + k);
      const auto& next = sets[(k + 1) % p];
      for (int a = 0; a < m; ++a) {
        if (!sets[k][a]) continue;
        bool ok = false;
        for (int e : s_->edge_group(c)) ok = ok || next[s_->mul(a, e)];
        if (!ok) {
          sets[k][a] = false;
          changed = true;
        }
      }
    }
  }
  return sets;
}

bool FixatorEngine::local_ok(int n, int a) const {
  const Node& node = nodes_[n];
  if (node.frozen && a != s_->identity_index()) return false;
  for (Color c : node.fixed_children)
    if (s_->act(a, c) != c) return false;
  if (node.tail >= 0 && !tails_[node.tail].allowed[0][a]) return false;
  return true;
}

bool FixatorEngine::viable(int n, int a) {
  auto& memo = viable_[n][a];
  if (memo >= 0) return memo;
  bool ok = local_ok(n, a);
  for (const auto& [c, w] : nodes_[n].children) {
    if (!ok) break;
    bool any = false;
    for (int e : s_->edge_group(c)) {
      if (viable(w, s_->mul(a, e))) {
        any = true;
        break;
      }
    }
    ok = any;
  }
  memo = ok ? 1 : 0;
  return ok;
}

namespace {

constexpr char kEnd = '\xff';

std::string encode(const std::vector<Word>& words) {
  std::string out;
  for (const auto& w : words) {
    for (Color c : w) out.push_back(static_cast<char>(c));
    out.push_back(kEnd);
  }
  return out;
}

std::vector<Word> decode(const std::string& part) {
  std::vector<Word> out(1);
  for (char ch : part) {
    if (ch == kEnd) out.emplace_back();
    else out.back().push_back(static_cast<Color>(ch));
  }
  out.pop_back();
  return out;
}

}  // namespace

const FixatorEngine::PartialSet& FixatorEngine::maps(int n, int a) {
  auto& slot = maps_[n][a];
  if (slot) return *slot;
  PartialSet acc;
  acc.insert(nodes_[n].target_slot >= 0 ? Partial(1, kEnd) : Partial());
  for (const auto& [c, w] : nodes_[n].children) {
    if (!nodes_[w].has_target_below) continue;
    // The options depend on a only through the coset a E_c.
    int rep = a;
    for (int e : s_->edge_group(c)) rep = std::min(rep, s_->mul(a, e));
    auto& cached = options_[{w, rep}];
    if (!cached) {
      Color step = s_->act(a, c);
      cached = std::make_unique<PartialSet>();
      for (int e : s_->edge_group(c)) {
        int b = s_->mul(a, e);
        if (!viable(w, b)) continue;
        for (const auto& part : maps(w, b)) {
          Partial shifted;
          shifted.reserve(part.size() * 2);
          bool start = true;
          for (char ch : part) {
            if (start) shifted.push_back(static_cast<char>(step));
            shifted.push_back(ch);
            start = ch == kEnd;
          }
          cached->insert(std::move(shifted));
        }
      }
    }
    const PartialSet& options = *cached;
    PartialSet next;
    for (const auto& x : acc)
      for (const auto& y : options) {
        next.insert(x + y);
      }
    stored_ += next.size();
    if (stored_ > opts_.budget) throw HorizonError("restriction enumeration exceeded its budget");
    acc = std::move(next);
  }
  slot = std::make_unique<PartialSet>(std::move(acc));
  return *slot;
}

bool FixatorEngine::nonempty() {
  for (int a = 0; a < s_->local_order(); ++a)
    if (viable(0, a)) return true;
  return false;
}

RestrictionSet FixatorEngine::restrictions() {
  RestrictionSet out;
  out.target = target_;
  for (int a = 0; a < s_->local_order(); ++a) {
    if (!viable(0, a)) continue;
    for (const auto& enc : maps(0, a)) {
      auto part = decode(enc);
      std::vector<VertexAddr> img(target_.size());
      for (std::size_t i = 0; i < part.size(); ++i) img[slot_order_[i]] = walk(root_, part[i]);
      // Repeated target vertices share the first slot's image.
      for (std::size_t i = 0; i < target_.size(); ++i)
        if (nodes_[index_.at(target_[i])].target_slot != static_cast<int>(i))
          img[i] = img[nodes_[index_.at(target_[i])].target_slot];
      out.images.insert(std::move(img));
    }
  }
  out.cert = Certification::exact();
  return out;
}

std::size_t FixatorEngine::count() {
  PartialSet all;
  for (int a = 0; a < s_->local_order(); ++a)
    if (viable(0, a)) {
      const auto& m = maps(0, a);
      all.insert(m.begin(), m.end());
    }
  return all.size();
}

void FixatorEngine::compute_realizable() {
  if (realizable_done_) return;
  int m = s_->local_order();
  realizable_.assign(nodes_.size(), std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a) realizable_[0][a] = viable(0, a);
  for (std::size_t n = 1; n < nodes_.size(); ++n) {
    const Node& node = nodes_[n];
    const auto& up = realizable_[node.parent];
    for (int a = 0; a < m; ++a) {
      if (!viable(static_cast<int>(n), a)) continue;
      bool ok = false;
      for (int e : s_->edge_group(node.up)) ok = ok || up[s_->mul(a, e)];
      realizable_[n][a] = ok;
    }
  }
  realizable_done_ = true;
}

std::vector<int> FixatorEngine::realizable(const VertexAddr& x) {
  compute_realizable();
  std::vector<int> out;
  const auto& row = realizable_[index_.at(x)];
  for (int a = 0; a < s_->local_order(); ++a)
    if (row[a]) out.push_back(a);
  return out;
}

bool FixatorEngine::fixes_vertex(const VertexAddr& x) {
  compute_realizable();
  int n = index_.at(x);
  while (n != 0) {
    const Node& node = nodes_[n];
    for (int a = 0; a < s_->local_order(); ++a)
      if (realizable_[node.parent][a] && s_->act(a, node.up) != node.up) return false;
    n = node.parent;
  }
  return true;
}

bool FixatorEngine::fixes_root_ray(const End& xi) {
  compute_realizable();
  int m = s_->local_order();
  Ray q{root_, xi};
  std::size_t pf = q.periodic_from();
  std::size_t period = xi.period().size();
  std::vector<bool> on(tails_.size(), true);
  std::vector<bool> cur;
  bool frozen = false;
  VertexAddr x = root_;
  std::set<std::vector<int>> seen;
  for (std::size_t t = 0;; ++t) {
    auto it = index_.find(x);
    if (t > 0)
      for (std::size_t i = 0; i < tails_.size(); ++i)
        on[i] = on[i] && q.letter(t - 1) == tails_[i].ray.letter(t - 1);
    if (it != index_.end()) {
      cur = realizable_[it->second];
      frozen = frozen || nodes_[it->second].frozen;
    } else {
      Color c = q.letter(t - 1);
      std::vector<bool> next(m, false);
      for (int a = 0; a < m; ++a)
        if (cur[a])
          for (int e : s_->edge_group(c)) next[s_->mul(a, e)] = true;
      for (std::size_t i = 0; i < tails_.size(); ++i)
        if (on[i] && t > tails_[i].t0) {
          const auto& allow = tails_[i].allowed[(t - tails_[i].t0) % tails_[i].period];
          for (int a = 0; a < m; ++a) next[a] = next[a] && allow[a];
        }
      if (frozen)
        for (int a = 0; a < m; ++a) next[a] = next[a] && a == s_->identity_index();
      cur = std::move(next);
    }
    Color c = q.letter(t);
    for (int a = 0; a < m; ++a)
      if (cur[a] && s_->act(a, c) != c) return false;
    if (it == index_.end() && t >= pf) {
      std::vector<int> key{static_cast<int>((t - pf) % period)};
      for (int a = 0; a < m; ++a) key.push_back(cur[a]);
      for (std::size_t i = 0; i < tails_.size(); ++i)
        key.push_back(on[i] ? static_cast<int>((t - tails_[i].t0) % tails_[i].period) : -1);
      if (!seen.insert(std::move(key)).second) return true;
    }
    x = neighbor(x, c);
  }
}

std::size_t FixatorEngine::slots_below(int n) const {
  std::size_t k = nodes_[n].target_slot >= 0 ? 1 : 0;
  for (const auto& [c, w] : nodes_[n].children)
    if (nodes_[w].has_target_below) k += slots_below(w);
  return k;
}

bool FixatorEngine::assign(int n, int a, const std::vector<Word>& need, std::size_t from,
                           std::vector<int>& sigma, std::mt19937* rng) {
  sigma[n] = a;
  std::size_t pos = from + (nodes_[n].target_slot >= 0 ? 1 : 0);
  for (const auto& [c, w] : nodes_[n].children) {
    std::vector<Word> sub;
    if (nodes_[w].has_target_below) {
      std::size_t k = slots_below(w);
      for (std::size_t i = pos; i < pos + k; ++i) sub.emplace_back(need[i].begin() + 1, need[i].end());
      pos += k;
    }
    std::vector<int> options;
    for (int e : s_->edge_group(c)) {
      int b = s_->mul(a, e);
      if (!viable(w, b)) continue;
      if (nodes_[w].has_target_below && !maps(w, b).count(encode(sub))) continue;
      options.push_back(b);
    }
    if (options.empty()) return false;
    int b = rng ? options[(*rng)() % options.size()] : options.front();
    if (!assign(w, b, sub, 0, sigma, rng)) return false;
  }
  return true;
}

std::optional<CocycleElement> FixatorEngine::realize(const std::vector<VertexAddr>& images,
                                                     std::mt19937* rng) {
  if (images.size() != target_.size()) throw Error("realize: image list does not match the target");
  for (std::size_t i = 0; i < target_.size(); ++i) {
    int first = nodes_[index_.at(target_[i])].target_slot;
    if (images[i] != images[first]) return std::nullopt;
  }
  std::vector<Word> need;
  for (int slot : slot_order_) need.push_back(path_colors(root_, images[slot]));
  Partial key = encode(need);

  std::vector<int> roots;
  for (int a = 0; a < s_->local_order(); ++a)
    if (viable(0, a) && maps(0, a).count(key)) roots.push_back(a);
  if (roots.empty()) return std::nullopt;
  if (rng) std::shuffle(roots.begin(), roots.end(), *rng);
  std::vector<int> sigma(nodes_.size(), -1);
  if (!assign(0, roots.front(), need, 0, sigma, rng)) return std::nullopt;

  std::map<VertexAddr, int> explicit_sigma;
  for (std::size_t n = 0; n < nodes_.size(); ++n) explicit_sigma[nodes_[n].v] = sigma[n];

  // Along each fixed ray, walk the tail automaton to a local action that is
  // allowed in every phase; from there on it can stay constant.
  for (const auto& tail : tails_) {
    std::size_t p = tail.period;
    int m = s_->local_order();
    auto stable = [&](int a) {
      for (const auto& row : tail.allowed)
        if (!row[a]) return false;
      return true;
    };
    int a0 = explicit_sigma.at(tail.ray.at(tail.t0));
    std::map<std::pair<std::size_t, int>, std::pair<std::size_t, int>> parent;
    std::deque<std::pair<std::size_t, int>> queue{{0, a0}};
    parent[{0, a0}] = {p, -1};
    std::optional<std::pair<std::size_t, int>> goal;
    std::size_t steps = 0;
    while (!queue.empty() && !goal) {
      auto st = queue.front();
      queue.pop_front();
      if (stable(st.second)) {
        goal = st;
        break;
      }
      Color c = tail.ray.letter(tail.t0 + st.first);
      std::size_t nk = (st.first + 1) % p;
      for (int e : s_->edge_group(c)) {
        int b = s_->mul(st.second, e);
        if (!tail.allowed[nk][b] || parent.count({nk, b})) continue;
        parent[{nk, b}] = st;
        queue.push_back({nk, b});
      }
      if (++steps > static_cast<std::size_t>(m) * p + 1) break;
    }
    if (!goal) return std::nullopt;
    std::vector<int> path;
    for (auto st = *goal; st.second >= 0; st = parent.at(st)) {
      path.push_back(st.second);
    }
    std::reverse(path.begin(), path.end());
    for (std::size_t j = 1; j < path.size(); ++j) explicit_sigma[tail.ray.at(tail.t0 + j)] = path[j];
  }

  // Copy local actions outward from the explicit region, which is extended
  // to a convex set containing the base vertex.
  std::set<VertexAddr> keys;
  for (const auto& kv : explicit_sigma) keys.insert(kv.first);
  keys.insert(VertexAddr());
  std::set<VertexAddr> hull = convex_hull(keys);
  std::map<VertexAddr, int> on_hull = explicit_sigma;
  std::deque<VertexAddr> queue;
  for (const auto& kv : explicit_sigma) queue.push_back(kv.first);
  while (!queue.empty()) {
    VertexAddr v = queue.front();
    queue.pop_front();
    for (int c = 0; c < s_->degree(); ++c) {
      VertexAddr w = neighbor(v, Color(c));
      if (!hull.count(w) || on_hull.count(w)) continue;
      on_hull[w] = on_hull.at(v);
      queue.push_back(w);
    }
  }
  int depth = 0;
  for (const auto& v : hull) depth = std::max(depth, static_cast<int>(v.depth()));
  std::map<VertexAddr, int> idx;
  std::map<VertexAddr, Perm> sig;
  for (const auto& v : base_ball(depth, s_->degree())) {
    auto it = on_hull.find(v);
    int a = it != on_hull.end() ? it->second : idx.at(v.parent());
    idx[v] = a;
    sig.emplace(v, s_->perm(a));
  }
  VertexAddr cur = root_, img = root_;
  for (Color c : path_colors(root_, VertexAddr())) {
    img = neighbor(img, s_->act(on_hull.at(cur), c));
    cur = neighbor(cur, c);
  }
  CocycleElement g(s_, img, depth, std::move(sig));
  if (!g.is_legal()) throw InvariantViolation("realize produced an illegal element");
  return g.normalized();
}

RestrictionSet enumerate_restrictions(const FixatorSpec& u, const std::vector<VertexAddr>& b,
                                      EngineOptions opts) {
  FixatorEngine engine(u, b, opts);
  return engine.restrictions();
}

std::size_t count_restrictions(const FixatorSpec& u, const std::vector<VertexAddr>& b,
                               EngineOptions opts) {
  FixatorEngine engine(u, b, opts);
  return engine.count();
}

IndexResult fixator_index(const FixatorSpec& u, const std::vector<VertexAddr>& extra,
                          EngineOptions opts) {
  auto r = enumerate_restrictions(u, extra, opts);
  return {r.size(), r.cert};
}

bool fixes_ray(const FixatorSpec& u, const VertexAddr& y, const End& xi) {
  FixatorEngine engine(u, {y});
  return engine.fixes_vertex(y) && engine.fixes_root_ray(xi);
}

}  // namespace tdlc
