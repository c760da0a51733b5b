#include "mhdmr/qtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mhdmr/riemann.hpp"

namespace mhdmr {

double ThresholdPolicy::level_threshold(int level) const {
  if (level < 0 || level > max_level - 1) {
    fail("LevelOutOfRange", "threshold level " + std::to_string(level));
  }
  if (mode == Mode::Constant) {
    return epsilon;
  }
  return std::ldexp(epsilon0 / domain_area, dim * (level - max_level + 1));
}

namespace {

// Tensor-product third-order prediction from a 3x3 parent neighborhood.
// Children conserve the parent mean by construction.
ConservedState predict_child(const std::array<std::array<ConservedState, 3>, 3>& s,
                             int ci, int cj) {
  const double sx = ci ? 1.0 : -1.0;
  const double sy = cj ? 1.0 : -1.0;
  ConservedState out;
  for (int k = 0; k < kNcomp; ++k) {
    const double dx = 0.125 * (s[1][2].comp(k) - s[1][0].comp(k));
    const double dy = 0.125 * (s[2][1].comp(k) - s[0][1].comp(k));
    const double dxy = (1.0 / 64.0) * ((s[2][2].comp(k) - s[2][0].comp(k)) -
                                       (s[0][2].comp(k) - s[0][0].comp(k)));
    out.set_comp(k, s[1][1].comp(k) + sx * dx + sy * dy + (sx * sy) * dxy);
  }
  return out;
}

ConservedState project4(const ConservedState& c00, const ConservedState& c10,
                        const ConservedState& c01, const ConservedState& c11) {
  ConservedState out;
  for (int k = 0; k < kNcomp; ++k) {
    out.set_comp(k, ((c00.comp(k) + c10.comp(k)) + (c01.comp(k) + c11.comp(k))) * 0.25);
  }
  return out;
}

constexpr double kDetailNormFloor = 1e-14;

}  // namespace

QuadtreeMesh::QuadtreeMesh(int max_level, BoundaryMode bc, double x0, double y0,
                           double width, double height)
    : L_(max_level), bc_(bc), x0_(x0), y0_(y0), wx_(width), hy_(height) {
  index_.resize(L_ + 1);
  pool_.resize(L_ + 1);
  free_.resize(L_ + 1);
  for (int l = 0; l <= L_; ++l) {
    const size_t n = size_t(1) << l;
    index_[l].assign(n * n, -1);
  }
  // root always exists
  TreeNode root;
  root.kind = NodeKind::Leaf;
  place(0, 0, 0, root);
}

int32_t QuadtreeMesh::id_at(int l, long i, long j) const {
  const long n = 1L << l;
  if (i < 0 || j < 0 || i >= n || j >= n) return -1;
  return index_[l][size_t(j) * n + i];
}

int32_t QuadtreeMesh::alloc(int l) {
  if (!free_[l].empty()) {
    const int32_t id = free_[l].back();
    free_[l].pop_back();
    return id;
  }
  pool_[l].emplace_back();
  return int32_t(pool_[l].size()) - 1;
}

void QuadtreeMesh::place(int l, long i, long j, const TreeNode& n) {
  const int32_t id = alloc(l);
  pool_[l][id] = n;
  index_[l][size_t(j) * (1L << l) + i] = id;
}

void QuadtreeMesh::release(int l, long i, long j) {
  const long n = 1L << l;
  int32_t& slot = index_[l][size_t(j) * n + i];
  if (slot >= 0) {
    free_[l].push_back(slot);
    slot = -1;
  }
}

TreeNode* QuadtreeMesh::find(int l, long i, long j) {
  const int32_t id = id_at(l, i, j);
  return id >= 0 ? &pool_[l][id] : nullptr;
}

const TreeNode* QuadtreeMesh::find(int l, long i, long j) const {
  const int32_t id = id_at(l, i, j);
  return id >= 0 ? &pool_[l][id] : nullptr;
}

bool QuadtreeMesh::map_neighbor(int l, long& i, long& j) const {
  const long n = 1L << l;
  if (bc_ == BoundaryMode::Periodic) {
    i = ((i % n) + n) % n;
    j = ((j % n) + n) % n;
    return true;
  }
  return i >= 0 && j >= 0 && i < n && j < n;
}

void QuadtreeMesh::clamp_map(int l, long& i, long& j) const {
  const long n = 1L << l;
  if (bc_ == BoundaryMode::Periodic) {
    i = ((i % n) + n) % n;
    j = ((j % n) + n) % n;
  } else {
    i = std::clamp(i, 0L, n - 1);
    j = std::clamp(j, 0L, n - 1);
  }
}

ConservedState QuadtreeMesh::value(int l, long i, long j) const {
  clamp_map(l, i, j);
  const int32_t id = id_at(l, i, j);
  if (id >= 0) {
    const TreeNode& n = pool_[l][id];
    if (n.kind != NodeKind::Virtual) return n.q;
  }
  return predict_at(l, i, j);
}

ConservedState QuadtreeMesh::predict_at(int l, long i, long j) const {
  if (l <= 0) {
    fail("IncompleteStencil", "prediction requested at the root level");
  }
  std::array<std::array<ConservedState, 3>, 3> s;
  const long pi = i >> 1, pj = j >> 1;
  for (int dy = 0; dy < 3; ++dy) {
    for (int dx = 0; dx < 3; ++dx) {
      s[dy][dx] = value(l - 1, pi + dx - 1, pj + dy - 1);
    }
  }
  return predict_child(s, int(i & 1), int(j & 1));
}

std::array<ConservedState, 4> QuadtreeMesh::predict_children(int l, long i,
                                                             long j) const {
  if (l >= L_) {
    fail("MaxLevelReached", "prediction below level " + std::to_string(L_));
  }
  std::array<std::array<ConservedState, 3>, 3> s;
  for (int dy = 0; dy < 3; ++dy) {
    for (int dx = 0; dx < 3; ++dx) {
      s[dy][dx] = value(l, i + dx - 1, j + dy - 1);
    }
  }
  return {predict_child(s, 0, 0), predict_child(s, 1, 0), predict_child(s, 0, 1),
          predict_child(s, 1, 1)};
}

ConservedState QuadtreeMesh::project(int l, long i, long j) const {
  const TreeNode* c00 = find(l + 1, 2 * i, 2 * j);
  const TreeNode* c10 = find(l + 1, 2 * i + 1, 2 * j);
  const TreeNode* c01 = find(l + 1, 2 * i, 2 * j + 1);
  const TreeNode* c11 = find(l + 1, 2 * i + 1, 2 * j + 1);
  if (!c00 || !c10 || !c01 || !c11 || c00->kind == NodeKind::Virtual ||
      c10->kind == NodeKind::Virtual || c01->kind == NodeKind::Virtual ||
      c11->kind == NodeKind::Virtual) {
    fail("MissingChild", "projection at level " + std::to_string(l));
  }
  return project4(c00->q, c10->q, c01->q, c11->q);
}

std::array<std::array<double, kNcomp>, 4> QuadtreeMesh::details_of(int l, long i,
                                                                   long j) const {
  const std::array<ConservedState, 4> pred = predict_children(l, i, j);
  const std::array<std::array<long, 2>, 4> off = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
  std::array<std::array<double, kNcomp>, 4> out{};
  for (int c = 0; c < 4; ++c) {
    const ConservedState actual = value(l + 1, 2 * i + off[c][0], 2 * j + off[c][1]);
    for (int k = 0; k < kNcomp; ++k) {
      out[c][k] = actual.comp(k) - pred[c].comp(k);
    }
  }
  return out;
}

void QuadtreeMesh::init_full(const std::function<ConservedState(double, double)>& ic) {
  for (int l = 0; l <= L_; ++l) {
    const size_t n = size_t(1) << l;
    index_[l].assign(n * n, -1);
    pool_[l].clear();
    free_[l].clear();
  }
  for (int l = 0; l <= L_; ++l) {
    const long n = 1L << l;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) {
        TreeNode node;
        node.kind = l == L_ ? NodeKind::Leaf : NodeKind::Internal;
        if (l == L_) {
          node.q = ic(xc(l, i), yc(l, j));
        }
        place(l, i, j, node);
      }
    }
  }
  project_up();
}

void QuadtreeMesh::init_adapted(const std::function<ConservedState(double, double)>& ic,
                                const ThresholdPolicy& pol) {
  init_full(ic);
  compute_details();
  coarsen(pol);
}

long QuadtreeMesh::leaf_count() const {
  long n = 0;
  for_each_leaf([&](int, long, long, const TreeNode&) { ++n; });
  return n;
}

long QuadtreeMesh::virtual_count() const {
  long n = 0;
  for (const CellRef& c : collect(NodeKind::Virtual)) {
    (void)c;
    ++n;
  }
  return n;
}

int QuadtreeMesh::finest_leaf_level() const {
  int finest = -1;
  for_each_leaf([&](int l, long, long, const TreeNode&) { finest = std::max(finest, l); });
  if (finest < 0) {
    fail("EmptyGrid", "mesh has no leaves");
  }
  return finest;
}

std::vector<CellRef> QuadtreeMesh::collect(NodeKind kind) const {
  std::vector<CellRef> out;
  for (int l = 0; l <= L_; ++l) {
    const long n = 1L << l;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) {
        const int32_t id = index_[l][size_t(j) * n + i];
        if (id >= 0 && pool_[l][id].kind == kind) {
          out.push_back({l, i, j});
        }
      }
    }
  }
  return out;
}

void QuadtreeMesh::project_up() {
  for (int l = L_ - 1; l >= 0; --l) {
    const long n = 1L << l;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) {
        const int32_t id = index_[l][size_t(j) * n + i];
        if (id >= 0 && pool_[l][id].kind == NodeKind::Internal) {
          pool_[l][id].q = project(l, i, j);
        }
      }
    }
  }
}

void QuadtreeMesh::compute_details() {
  project_up();
  std::array<double, kNcomp> norm{};
  for_each_leaf([&](int, long, long, const TreeNode& n) {
    for (int k = 0; k < kNcomp; ++k) {
      norm[k] = std::max(norm[k], std::abs(n.q.comp(k)));
    }
  });
  for (int k = 0; k < kNcomp; ++k) {
    norm[k] = std::max(norm[k], kDetailNormFloor);
  }
  if (TreeNode* root = find(0, 0, 0)) {
    root->sigma = 0.0;
  }
  for (int l = 1; l <= L_; ++l) {
    const long n = 1L << l;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) {
        const int32_t id = index_[l][size_t(j) * n + i];
        if (id < 0 || pool_[l][id].kind == NodeKind::Virtual) continue;
        const ConservedState pred = predict_at(l, i, j);
        double sig = 0.0;
        const ConservedState& q = pool_[l][id].q;
        for (int k = 0; k < kNcomp; ++k) {
          sig = std::max(sig, std::abs(q.comp(k) - pred.comp(k)) / norm[k]);
        }
        pool_[l][id].sigma = sig;
      }
    }
  }
}

void QuadtreeMesh::split_cell(int l, long i, long j) {
  if (l >= L_) {
    fail("MaxLevelReached", "refinement past level " + std::to_string(L_));
  }
  TreeNode* n = find(l, i, j);
  if (!n || n->kind != NodeKind::Leaf) return;
  const std::array<ConservedState, 4> kids = predict_children(l, i, j);
  n->kind = NodeKind::Internal;
  const std::array<std::array<long, 2>, 4> off = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
  for (int c = 0; c < 4; ++c) {
    TreeNode child;
    child.kind = NodeKind::Leaf;
    child.q = kids[c];
    child.sigma = 0.0;  // freshly predicted: zero detail by construction
    place(l + 1, 2 * i + off[c][0], 2 * j + off[c][1], child);
  }
}

void QuadtreeMesh::ensure_exists(int l, long i, long j) {
  const TreeNode* n = find(l, i, j);
  if (n && n->kind != NodeKind::Virtual) return;
  // walk up to the covering real leaf
  int la = l;
  long ia = i, ja = j;
  while (la > 0) {
    --la;
    ia >>= 1;
    ja >>= 1;
    const TreeNode* a = find(la, ia, ja);
    if (a && a->kind != NodeKind::Virtual) break;
  }
  for (int lev = la; lev < l; ++lev) {
    split_cell(lev, i >> (l - lev), j >> (l - lev));
  }
}

void QuadtreeMesh::make_graded() {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = L_; l >= 2; --l) {
      for (const CellRef& c : collect(NodeKind::Leaf)) {
        if (c.l != l) continue;
        const std::array<std::array<long, 2>, 4> dirs = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
        for (const auto& d : dirs) {
          long ni = c.i + d[0], nj = c.j + d[1];
          if (!map_neighbor(l, ni, nj)) continue;
          const TreeNode* nb = find(l, ni, nj);
          if (nb && nb->kind != NodeKind::Virtual) continue;
          const TreeNode* par = find(l - 1, ni >> 1, nj >> 1);
          if (par && par->kind != NodeKind::Virtual) continue;
          ensure_exists(l - 1, ni >> 1, nj >> 1);
          changed = true;
        }
      }
    }
  }
}

void QuadtreeMesh::refine_for_evolution(const ThresholdPolicy& pol) {
  std::vector<CellRef> significant;
  for_each_leaf([&](int l, long i, long j, const TreeNode& n) {
    const int tl = std::min(l, L_ - 1);
    if (n.sigma > 0.5 * pol.level_threshold(tl)) {
      significant.push_back({l, i, j});
    }
  });
  for (const CellRef& c : significant) {
    if (c.l < L_) {
      split_cell(c.l, c.i, c.j);
    }
    const std::array<std::array<long, 2>, 4> dirs = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& d : dirs) {
      long ni = c.i + d[0], nj = c.j + d[1];
      if (!map_neighbor(c.l, ni, nj)) continue;
      ensure_exists(c.l, ni, nj);
    }
  }
  make_graded();
}

void QuadtreeMesh::coarsen(const ThresholdPolicy& pol) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int l = L_; l >= 1; --l) {
      const long np = 1L << (l - 1);
      for (long pj = 0; pj < np; ++pj) {
        for (long pi = 0; pi < np; ++pi) {
          const int32_t pid = index_[l - 1][size_t(pj) * np + pi];
          if (pid < 0 || pool_[l - 1][pid].kind != NodeKind::Internal) continue;
          const std::array<std::array<long, 2>, 4> off = {{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
          double maxsig = 0.0;
          bool all_leaves = true;
          for (const auto& o : off) {
            const TreeNode* c = find(l, 2 * pi + o[0], 2 * pj + o[1]);
            if (!c || c->kind != NodeKind::Leaf) {
              all_leaves = false;
              break;
            }
            maxsig = std::max(maxsig, c->sigma);
          }
          if (!all_leaves) continue;
          if (!(maxsig < pol.level_threshold(l - 1))) continue;  // strictly below
          // merging must keep adjacent leaves within one level
          bool graded_ok = true;
          const std::array<std::array<long, 4>, 4> faces = {{
              {2 * pi + 2, 2 * pj, 2 * pi + 2, 2 * pj + 1},      // east
              {2 * pi - 1, 2 * pj, 2 * pi - 1, 2 * pj + 1},      // west
              {2 * pi, 2 * pj + 2, 2 * pi + 1, 2 * pj + 2},      // north
              {2 * pi, 2 * pj - 1, 2 * pi + 1, 2 * pj - 1},      // south
          }};
          for (const auto& f : faces) {
            for (int s = 0; s < 2 && graded_ok; ++s) {
              long ni = f[2 * s], nj = f[2 * s + 1];
              if (!map_neighbor(l, ni, nj)) continue;
              const TreeNode* nb = find(l, ni, nj);
              if (nb && nb->kind == NodeKind::Internal) graded_ok = false;
            }
            if (!graded_ok) break;
          }
          if (!graded_ok) continue;
          pool_[l - 1][pid].kind = NodeKind::Leaf;
          for (const auto& o : off) {
            release(l, 2 * pi + o[0], 2 * pj + o[1]);
          }
          changed = true;
        }
      }
    }
  }
}

void QuadtreeMesh::install_virtual_leaves() {
  const std::array<std::array<long, 2>, 4> dirs = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (int l = 1; l <= L_; ++l) {
    for (const CellRef& c : collect(NodeKind::Leaf)) {
      if (c.l != l) continue;
      for (const auto& d : dirs) {
        long ni = c.i + d[0], nj = c.j + d[1];
        if (!map_neighbor(l, ni, nj)) continue;
        if (id_at(l, ni, nj) >= 0) continue;
        const TreeNode* par = find(l - 1, ni >> 1, nj >> 1);
        if (!par || par->kind != NodeKind::Leaf) {
          fail("SolverFailure", "gradedness violated while installing virtual leaves");
        }
        TreeNode v;
        v.kind = NodeKind::Virtual;
        place(l, ni, nj, v);
      }
    }
  }
}

void QuadtreeMesh::fill_virtual() {
  for (const CellRef& c : collect(NodeKind::Virtual)) {
    const ConservedState q = predict_at(c.l, c.i, c.j);
    find(c.l, c.i, c.j)->q = q;
  }
}

void QuadtreeMesh::clear_virtual() {
  for (const CellRef& c : collect(NodeKind::Virtual)) {
    release(c.l, c.i, c.j);
  }
}

double QuadtreeMesh::compute_dt(double gamma, double c_cfl) const {
  const int lf = finest_leaf_level();
  const double dxf = dx_at(lf);
  const double dyf = dy_at(lf);
  double bound = std::numeric_limits<double>::infinity();
  for_each_leaf([&](int, long, long, const TreeNode& n) {
    bound = std::min(bound, cfl_bound(n.q, gamma, dxf, dyf));
  });
  return c_cfl * bound;
}

void QuadtreeMesh::sweep_x(double gamma, double ch, double dt) {
  const std::vector<CellRef> leaves = collect(NodeKind::Leaf);
  for (const CellRef& c : leaves) {
    TreeNode* n = find(c.l, c.i, c.j);
    n->acc_lo = FluxVector{};
    n->acc_hi = FluxVector{};
  }
  for (const CellRef& c : leaves) {
    TreeNode* P = find(c.l, c.i, c.j);
    // east face
    {
      long ni = c.i + 1, nj = c.j;
      if (!map_neighbor(c.l, ni, nj)) {
        const FluxVector f = hlld_flux_x(P->q, P->q, gamma, ch);
        accumulate(P->acc_hi, f, 1.0);
      } else {
        TreeNode* N = find(c.l, ni, nj);
        if (!N) {
          fail("SolverFailure", "missing east neighbor in x-sweep");
        }
        if (N->kind == NodeKind::Leaf) {
          const FluxVector f = hlld_flux_x(P->q, N->q, gamma, ch);
          accumulate(P->acc_hi, f, 1.0);
          accumulate(N->acc_lo, f, 1.0);
        } else if (N->kind == NodeKind::Virtual) {
          const FluxVector f = hlld_flux_x(P->q, N->q, gamma, ch);
          accumulate(P->acc_hi, f, 1.0);
          TreeNode* C = find(c.l - 1, ni >> 1, nj >> 1);
          accumulate(C->acc_lo, f, 0.5);  // two fine faces per coarse face
        }
        // Internal: the face belongs to the finer level
      }
    }
    // west face: only physical boundaries and virtual neighbors
    {
      long ni = c.i - 1, nj = c.j;
      if (!map_neighbor(c.l, ni, nj)) {
        const FluxVector f = hlld_flux_x(P->q, P->q, gamma, ch);
        accumulate(P->acc_lo, f, 1.0);
      } else {
        TreeNode* N = find(c.l, ni, nj);
        if (!N) {
          fail("SolverFailure", "missing west neighbor in x-sweep");
        }
        if (N->kind == NodeKind::Virtual) {
          const FluxVector f = hlld_flux_x(N->q, P->q, gamma, ch);
          accumulate(P->acc_lo, f, 1.0);
          TreeNode* C = find(c.l - 1, ni >> 1, nj >> 1);
          accumulate(C->acc_hi, f, 0.5);
        }
      }
    }
  }
  for (const CellRef& c : leaves) {
    TreeNode* n = find(c.l, c.i, c.j);
    apply_flux_update(n->q, n->acc_lo, n->acc_hi, dt / dx_at(c.l));
  }
}

void QuadtreeMesh::sweep_y(double gamma, double ch, double dt) {
  const std::vector<CellRef> leaves = collect(NodeKind::Leaf);
  for (const CellRef& c : leaves) {
    TreeNode* n = find(c.l, c.i, c.j);
    n->acc_lo = FluxVector{};
    n->acc_hi = FluxVector{};
  }
  for (const CellRef& c : leaves) {
    TreeNode* P = find(c.l, c.i, c.j);
    // north face
    {
      long ni = c.i, nj = c.j + 1;
      if (!map_neighbor(c.l, ni, nj)) {
        const FluxVector f = hlld_flux_y(P->q, P->q, gamma, ch);
        accumulate(P->acc_hi, f, 1.0);
      } else {
        TreeNode* N = find(c.l, ni, nj);
        if (!N) {
          fail("SolverFailure", "missing north neighbor in y-sweep");
        }
        if (N->kind == NodeKind::Leaf) {
          const FluxVector f = hlld_flux_y(P->q, N->q, gamma, ch);
          accumulate(P->acc_hi, f, 1.0);
          accumulate(N->acc_lo, f, 1.0);
        } else if (N->kind == NodeKind::Virtual) {
          const FluxVector f = hlld_flux_y(P->q, N->q, gamma, ch);
          accumulate(P->acc_hi, f, 1.0);
          TreeNode* C = find(c.l - 1, ni >> 1, nj >> 1);
          accumulate(C->acc_lo, f, 0.5);
        }
      }
    }
    // south face
    {
      long ni = c.i, nj = c.j - 1;
      if (!map_neighbor(c.l, ni, nj)) {
        const FluxVector f = hlld_flux_y(P->q, P->q, gamma, ch);
        accumulate(P->acc_lo, f, 1.0);
      } else {
        TreeNode* N = find(c.l, ni, nj);
        if (!N) {
          fail("SolverFailure", "missing south neighbor in y-sweep");
        }
        if (N->kind == NodeKind::Virtual) {
          const FluxVector f = hlld_flux_y(N->q, P->q, gamma, ch);
          accumulate(P->acc_lo, f, 1.0);
          TreeNode* C = find(c.l - 1, ni >> 1, nj >> 1);
          accumulate(C->acc_hi, f, 0.5);
        }
      }
    }
  }
  for (const CellRef& c : leaves) {
    TreeNode* n = find(c.l, c.i, c.j);
    apply_flux_update(n->q, n->acc_lo, n->acc_hi, dt / dy_at(c.l));
  }
}

void QuadtreeMesh::damp_psi(double dt, double ch, double cp2_over_ch) {
  const double f = psi_damp_factor(dt, ch, cp2_over_ch);
  for (const CellRef& c : collect(NodeKind::Leaf)) {
    find(c.l, c.i, c.j)->q.psi *= f;
  }
}

void QuadtreeMesh::heun_advance(double gamma, double ch, double dt,
                                double cp2_over_ch, bool damp_per_stage) {
  const std::vector<CellRef> leaves = collect(NodeKind::Leaf);
  for (const CellRef& c : leaves) {
    TreeNode* n = find(c.l, c.i, c.j);
    n->saved = n->q;
  }
  for (int stage = 0; stage < 2; ++stage) {
    project_up();
    fill_virtual();
    sweep_x(gamma, ch, dt);
    project_up();
    fill_virtual();
    sweep_y(gamma, ch, dt);
    if (damp_per_stage) {
      damp_psi(dt, ch, cp2_over_ch);
    }
  }
  for (const CellRef& c : leaves) {
    TreeNode* n = find(c.l, c.i, c.j);
    n->q = heun_average(n->saved, n->q);
  }
  if (!damp_per_stage) {
    damp_psi(dt, ch, cp2_over_ch);
  }
}

UniformGrid QuadtreeMesh::synthesize(int level) const {
  const int lf = finest_leaf_level();
  if (level < lf) {
    fail("IncompatibleDomains", "synthesis level below finest leaf level");
  }
  UniformGrid g = UniformGrid::make(1 << level, 1 << level, bc_, x0_, y0_, wx_, hy_);
  for_each_leaf([&](int l, long i, long j, const TreeNode& n) {
    const long span = 1L << (level - l);
    for (long dj = 0; dj < span; ++dj) {
      for (long di = 0; di < span; ++di) {
        g.at(int(i * span + di), int(j * span + dj)) = n.q;
      }
    }
  });
  return g;
}

bool QuadtreeMesh::audit_families() const {
  for (int l = 0; l <= L_; ++l) {
    const long n = 1L << l;
    for (long j = 0; j < n; ++j) {
      for (long i = 0; i < n; ++i) {
        const TreeNode* t = find(l, i, j);
        if (!t) continue;
        if (t->kind == NodeKind::Internal) {
          for (int c = 0; c < 4; ++c) {
            const TreeNode* ch = find(l + 1, 2 * i + (c & 1), 2 * j + (c >> 1));
            if (!ch || ch->kind == NodeKind::Virtual) return false;
          }
        }
        if (l > 0) {
          const TreeNode* par = find(l - 1, i >> 1, j >> 1);
          if (!par) return false;
          if (t->kind == NodeKind::Virtual) {
            if (par->kind != NodeKind::Leaf) return false;
          } else if (par->kind != NodeKind::Internal) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

bool QuadtreeMesh::audit_graded() const {
  // every real leaf's face-adjacent leaves differ by at most one level
  bool ok = true;
  for_each_leaf([&](int l, long i, long j, const TreeNode&) {
    const std::array<std::array<long, 2>, 4> dirs = {{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
    for (const auto& d : dirs) {
      long ni = i + d[0], nj = j + d[1];
      if (!map_neighbor(l, ni, nj)) continue;
      const TreeNode* nb = find(l, ni, nj);
      if (!nb || nb->kind == NodeKind::Virtual) {
        // covered by a coarser leaf; require it one level up at most
        const TreeNode* par = find(l - 1, ni >> 1, nj >> 1);
        if (l == 0 || !par || par->kind == NodeKind::Virtual) ok = false;
      } else if (nb->kind == NodeKind::Internal) {
        // children adjacent to the shared face must be leaves
        for (int s = 0; s < 2; ++s) {
          long ci, cj;
          if (d[0] != 0) {
            ci = d[0] > 0 ? 2 * ni : 2 * ni + 1;
            cj = 2 * nj + s;
          } else {
            ci = 2 * ni + s;
            cj = d[1] > 0 ? 2 * nj : 2 * nj + 1;
          }
          const TreeNode* ch = find(l + 1, ci, cj);
          if (!ch || ch->kind != NodeKind::Leaf) ok = false;
        }
      }
    }
  });
  return ok;
}

MrStepRecord mr_step(QuadtreeMesh& mesh, TimeController& tc, const GlmParams& par,
                     const ThresholdPolicy& pol, bool damp_per_stage) {
  mesh.compute_details();
  mesh.refine_for_evolution(pol);
  mesh.install_virtual_leaves();

  const double dt_raw = mesh.compute_dt(par.gamma, tc.c_cfl);
  const TimeController::Plan plan = tc.plan(dt_raw);
  const int lf = mesh.finest_leaf_level();
  const double ch = compute_ch(mesh.dx_at(lf), mesh.dy_at(lf), plan.dt, tc.c_cfl);

  MrStepRecord rec;
  rec.evolved_leaves = mesh.leaf_count();
  rec.virtual_cells = mesh.virtual_count();

  mesh.heun_advance(par.gamma, ch, plan.dt, par.cp2_over_ch, damp_per_stage);

  mesh.clear_virtual();
  mesh.compute_details();
  mesh.coarsen(pol);

  tc.t = plan.t_next;
  tc.dt = plan.dt;
  rec.dt = plan.dt;
  rec.ch = ch;
  rec.hit_event = plan.hit_event;
  rec.adapted_leaves = mesh.leaf_count();
  return rec;
}

double compression_ratio(const std::vector<long>& leaf_counts, int max_level) {
  if (leaf_counts.empty()) {
    fail("EmptyHistory", "no leaf counts recorded");
  }
  const double full = double(1L << max_level) * double(1L << max_level);
  double sum = 0.0;
  for (long c : leaf_counts) sum += double(c);
  return 100.0 * sum / (full * double(leaf_counts.size()));
}

}  // namespace mhdmr
