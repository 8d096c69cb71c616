#include "nusim/gacs_korner.hpp"

#include <algorithm>
#include <numeric>

namespace nusim {

namespace {

struct UnionFind {
  std::vector<Index> parent;

  explicit UnionFind(Index n) : parent(std::size_t(n)) {
    std::iota(parent.begin(), parent.end(), Index(0));
  }
  Index find(Index a) {
    while (parent[std::size_t(a)] != a) {
      parent[std::size_t(a)] = parent[std::size_t(parent[std::size_t(a)])];
      a = parent[std::size_t(a)];
    }
    return a;
  }
  void unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::size_t(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

CommonPart common_part(const JointPmf& joint) {
  if (joint.num_vars() != 2) throw ConfigError("common part: two-variable joint required");
  const Index nx = joint.dim(0);
  const Index ny = joint.dim(1);

  // nodes 0..nx-1 are X symbols, nx..nx+ny-1 are Y symbols
  UnionFind uf(nx + ny);
  for (Index x = 0; x < nx; ++x) {
    for (Index y = 0; y < ny; ++y) {
      if (joint.at2(x, y) > kSupportZero) uf.unite(x, nx + y);
    }
  }

  const Pmf px = joint.marginal(0);
  const Pmf py = joint.marginal(1);

  // label components by smallest contained X symbol (scan order)
  std::vector<Index> root_label(std::size_t(nx + ny), -1);
  Index next = 0;
  std::vector<Index> u_of_x(std::size_t(nx), -1);
  std::vector<Index> u_of_y(std::size_t(ny), -1);
  for (Index x = 0; x < nx; ++x) {
    if (px(x) <= kSupportZero) continue;
    const Index r = uf.find(x);
    if (root_label[std::size_t(r)] < 0) root_label[std::size_t(r)] = next++;
    u_of_x[std::size_t(x)] = root_label[std::size_t(r)];
  }
  for (Index y = 0; y < ny; ++y) {
    if (py(y) <= kSupportZero) continue;
    const Index r = uf.find(nx + y);
    if (root_label[std::size_t(r)] < 0) root_label[std::size_t(r)] = next++;  // y-only component
    u_of_y[std::size_t(y)] = root_label[std::size_t(r)];
  }

  Vec u_mass = Vec::Zero(std::max<Index>(next, 1));
  for (Index x = 0; x < nx; ++x) {
    if (u_of_x[std::size_t(x)] >= 0) u_mass(u_of_x[std::size_t(x)]) += px(x);
  }
  if (next == 0) throw ConfigError("common part: empty support");
  // a component containing no supported x can only arise from numerical
  // dust; fold it into the mass renormalization
  Alphabet u_alpha = Alphabet::indexed("u", next);
  return CommonPart{u_alpha, std::move(u_of_x), std::move(u_of_y),
                    Pmf(u_alpha, u_mass.head(next))};
}

bool is_nontrivial(const CommonPart& cp) { return cp.u_alphabet.size() >= 2; }

}  // namespace nusim
