#include "tdlc/axis_tree.hpp"

#include <deque>
#include <sstream>

namespace tdlc {

bool admits_shift(const GroupScheme& s, const VertexAddr& v, const End& xi, int k) {
  Ray r{v, xi};
  std::size_t pf = r.periodic_from();
  std::size_t q = xi.period().size();
  int n = s.local_order();
  auto step_ok = [&](std::size_t t, int a) { return s.act(a, r.letter(t)) == r.letter(t + k); };
  // a_{t+1} must lie in a_t E_{c_t}.
  auto can_continue = [&](std::size_t t, int a, const std::vector<bool>& next) {
    for (int e : s.edge_group(r.letter(t)))
      if (next[s.mul(a, e)]) return true;
    return false;
  };

  // Periodic part: greatest fixpoint over the q phases starting at pf.
  std::vector<std::vector<bool>> phase(q, std::vector<bool>(n));
  for (std::size_t p = 0; p < q; ++p)
    for (int a = 0; a < n; ++a) phase[p][a] = step_ok(pf + p, a);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t p = 0; p < q; ++p)
      for (int a = 0; a < n; ++a)
        if (phase[p][a] && !can_continue(pf + p, a, phase[(p + 1) % q])) {
          phase[p][a] = false;
          changed = true;
        }
  }
  std::vector<bool> cur = phase[0];
  for (std::size_t t = pf; t-- > 0;) {
    std::vector<bool> prev(n);
    for (int a = 0; a < n; ++a) prev[a] = step_ok(t, a) && can_continue(t, a, cur);
    cur = std::move(prev);
  }
  for (bool b : cur)
    if (b) return true;
  return false;
}

std::optional<int> axis_shift(const GroupScheme& s, const VertexAddr& v, const End& xi, int k_max) {
  for (int k = 1; k <= k_max; ++k)
    if (admits_shift(s, v, xi, k)) return k;
  return std::nullopt;
}

bool AxisTree::contains(const VertexAddr& v) const {
  if (members.count(v)) return true;
  for (const auto& t : tail)
    if (t == v) return true;
  return false;
}

bool AxisTree::below(const VertexAddr& y, const VertexAddr& x) const {
  int d = distance(y, x);
  return Ray{y, rho.end}.at(static_cast<std::size_t>(d)) == x;
}

std::size_t AxisTree::level_size(int m) const {
  std::size_t n = 0;
  for (const auto& y : members)
    if (distance(y, rho.start) == m) ++n;
  return n;
}

AxisTree build_axis_tree(const SchemePtr& s, const Ray& rho, int radius, int k_max) {
  AxisTree t;
  t.scheme = s;
  t.rho = rho;
  t.radius = radius;
  t.k_max = k_max;
  for (int i = 1; i <= radius; ++i) t.tail.push_back(rho.at(static_cast<std::size_t>(i)));

  auto first = axis_shift(*s, rho.start, rho.end, k_max);
  if (!first) throw Error("axis tree: the ray start lies on no axis with shift <= k_max");
  t.lambda = *first;
  t.members.insert(rho.start);
  std::deque<std::pair<VertexAddr, int>> queue{{rho.start, 0}};
  while (!queue.empty()) {
    auto [v, d] = queue.front();
    queue.pop_front();
    if (d == radius) continue;
    VertexAddr up = Ray{v, rho.end}.at(1);
    for (int c = 0; c < s->degree(); ++c) {
      VertexAddr w = neighbor(v, static_cast<Color>(c));
      if (w == up) continue;
      auto k = axis_shift(*s, w, rho.end, k_max);
      if (!k) continue;
      t.lambda = std::min(t.lambda, *k);
      t.members.insert(w);
      queue.push_back({w, d + 1});
    }
  }
  t.cert = Certification::exact();
  return t;
}

AxisTree build_axis_tree(const CocycleElement& g, int radius, bool toward_plus, int k_max) {
  auto rep = classify(g);
  const Axis& ax = rep.require_axis();
  if (k_max < 0) k_max = 4 * ax.ell;
  Ray rho = toward_plus ? ax.forward_ray(0) : ax.backward_ray(0);
  return build_axis_tree(g.scheme(), rho, radius, k_max);
}

int busemann_beta(const CocycleElement& h, const AxisTree& t) {
  auto b = end_shift(h, t.xi());
  if (!b) throw Error("busemann_beta: element does not stabilize the end of the axis tree");
  return *b;
}

std::size_t branching_sigma(const AxisTree& t, const VertexAddr& x0, int m) {
  if (m <= 0) return 1;
  if (!t.members.count(x0)) throw Error("branching_sigma: x0 is not an explored member");
  if (distance(x0, t.rho.start) + m > t.radius)
    throw HorizonError("branching_sigma: radius " + std::to_string(t.radius) + " too small");
  std::size_t n = 0;
  for (const auto& y : t.members)
    if (distance(y, x0) == m && t.below(y, x0)) ++n;
  return n;
}

std::string to_dot(const AxisTree& t) {
  std::ostringstream out;
  auto name = [](const VertexAddr& v) { return "\"" + (v.is_base() ? std::string("e") : v.str()) + "\""; };
  out << "graph axis_tree {\n  node [shape=point];\n";
  out << "  " << name(t.rho.start) << " [shape=circle, color=red, label=\"x0\"];\n";
  VertexAddr prev = t.rho.start;
  for (const auto& v : t.tail) {
    out << "  " << name(prev) << " -- " << name(v) << " [color=red, penwidth=2];\n";
    prev = v;
  }
  for (const auto& v : t.members) {
    if (v == t.rho.start) continue;
    out << "  " << name(v) << " -- " << name(Ray{v, t.rho.end}.at(1)) << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace tdlc
