// Exhaustive ground truth for the restriction engine. Deliberately shares no
// code with it: every assignment of local actions to the interior of the ball
// is tried, legality is checked from the scheme's definition, and images are
// computed by walking.

#include <map>

#include "tdlc/restrict.hpp"

namespace tdlc {

namespace {

struct Walker {
  const GroupScheme& s;
  std::vector<VertexAddr> verts;
  std::vector<int> parent;
  std::vector<Color> up;
  std::vector<int> interior;  // vertices whose local action matters

  Walker(const GroupScheme& scheme, int r) : s(scheme) {
    verts = ball(VertexAddr(), r, s.degree());
    std::map<VertexAddr, int> pos;
    for (std::size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<int>(i);
    for (const auto& v : verts) {
      parent.push_back(v.is_base() ? -1 : pos.at(v.parent()));
      up.push_back(v.is_base() ? 0 : v.last());
    }
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (static_cast<int>(verts[i].depth()) < r) interior.push_back(static_cast<int>(i));
  }
};

template <class Visit>
std::size_t exhaust(const GroupScheme& s, int r, std::size_t budget, Visit visit) {
  Walker w(s, r);
  const auto& el = s.local_group().elements();
  std::size_t k = w.interior.size();
  double total = 1;
  for (std::size_t i = 0; i < k; ++i) total *= static_cast<double>(el.size());
  if (total > static_cast<double>(budget)) throw HorizonError("oracle budget exceeded");

  std::vector<std::size_t> choice(k, 0);
  std::vector<const Perm*> sigma(w.verts.size(), nullptr);
  std::vector<VertexAddr> image(w.verts.size());
  std::size_t tried = 0;
  while (true) {
    ++tried;
    for (std::size_t i = 0; i < k; ++i) sigma[w.interior[i]] = &el[choice[i]];
    bool legal = true;
    for (std::size_t i = 1; i < w.verts.size() && legal; ++i) {
      const Perm* p = sigma[w.parent[i]];
      const Perm* q = sigma[i];
      Color c = w.up[i];
      if (!q) continue;  // boundary vertex: copies its parent
      legal = (*p)(c) == (*q)(c) && s.coupling_ok(*p, *q, c);
    }
    if (legal) {
      image[0] = VertexAddr();
      for (std::size_t i = 1; i < w.verts.size(); ++i)
        image[i] = neighbor(image[w.parent[i]], (*sigma[w.parent[i]])(w.up[i]));
      visit(w.verts, image);
    }
    std::size_t i = 0;
    while (i < k && ++choice[i] == el.size()) choice[i++] = 0;
    if (i == k) break;
  }
  return tried;
}

}  // namespace

OracleResult oracle_ball_group(const SchemePtr& s, int r, std::size_t budget) {
  OracleResult out;
  out.assignments_tried = exhaust(*s, r, budget, [&](const auto& verts, const auto& image) {
    if (out.ball.empty()) out.ball = verts;
    out.images.insert(image);
  });
  return out;
}

std::set<std::vector<VertexAddr>> oracle_restrictions(const SchemePtr& s, int r,
                                                      const std::set<VertexAddr>& fixed,
                                                      const std::vector<VertexAddr>& target,
                                                      std::size_t budget) {
  std::set<std::vector<VertexAddr>> out;
  exhaust(*s, r, budget, [&](const std::vector<VertexAddr>& verts, const std::vector<VertexAddr>& image) {
    std::map<VertexAddr, const VertexAddr*> at;
    for (std::size_t i = 0; i < verts.size(); ++i) at[verts[i]] = &image[i];
    for (const auto& f : fixed)
      if (*at.at(f) != f) return;
    std::vector<VertexAddr> img;
    for (const auto& b : target) img.push_back(*at.at(b));
    out.insert(std::move(img));
  });
  return out;
}

}  // namespace tdlc
