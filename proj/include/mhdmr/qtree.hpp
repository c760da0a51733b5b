#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "mhdmr/grid.hpp"
#include "mhdmr/state.hpp"

namespace mhdmr {

enum class NodeKind : uint8_t { Leaf, Internal, Virtual };

struct TreeNode {
  ConservedState q;
  ConservedState saved;       // stage-0 value of the current Heun step
  FluxVector acc_lo, acc_hi;  // per-sweep face-flux accumulators
  double sigma = 0.0;         // normalized detail magnitude (union over components)
  NodeKind kind = NodeKind::Leaf;
};

// Level-dependent significance threshold.
struct ThresholdPolicy {
  enum class Mode { Constant, Harten };
  Mode mode = Mode::Harten;
  double epsilon = 0.0;     // constant mode value
  double epsilon0 = 0.01;   // harten base value
  double domain_area = 4.0;
  int dim = 2;
  int max_level = 6;

  // harten: eps^l = (epsilon0 / |Omega|) * 2^(dim (l - L + 1)), 0 <= l <= L-1
  double level_threshold(int level) const;
};

struct CellRef {
  int l = 0;
  long i = 0, j = 0;
};

// Graded dyadic quadtree of cell averages. Nodes are addressed by
// (level, i, j) with i, j in [0, 2^level). Internal nodes always carry the
// projection (mean) of their four children; virtual leaves are temporary
// same-level cells beside a level jump and are never time-evolved.
class QuadtreeMesh {
 public:
  QuadtreeMesh(int max_level, BoundaryMode bc, double x0 = -1.0, double y0 = -1.0,
               double width = 2.0, double height = 2.0);

  int max_level() const { return L_; }
  BoundaryMode boundary() const { return bc_; }
  double x0() const { return x0_; }
  double y0() const { return y0_; }
  double width() const { return wx_; }
  double height() const { return hy_; }
  double domain_area() const { return wx_ * hy_; }
  double dx_at(int l) const { return wx_ / double(1L << l); }
  double dy_at(int l) const { return hy_ / double(1L << l); }
  double xc(int l, long i) const { return x0_ + (i + 0.5) * dx_at(l); }
  double yc(int l, long j) const { return y0_ + (j + 0.5) * dy_at(l); }

  // Full tree to max level, leaf values sampled at cell centers.
  void init_full(const std::function<ConservedState(double, double)>& ic);
  // Full tree followed by one thresholded coarsening pass.
  void init_adapted(const std::function<ConservedState(double, double)>& ic,
                    const ThresholdPolicy& pol);

  long leaf_count() const;
  long virtual_count() const;
  int finest_leaf_level() const;

  TreeNode* find(int l, long i, long j);
  const TreeNode* find(int l, long i, long j) const;
  // Boundary-mapped neighbor index; false means outside a Neumann boundary.
  bool map_neighbor(int l, long& i, long& j) const;

  // Cell average at any (level, i, j): the stored value where a real node
  // exists, otherwise the prediction recursively evaluated from coarser
  // data. Out-of-domain indices are clamped (Neumann) or wrapped (periodic).
  ConservedState value(int l, long i, long j) const;
  ConservedState predict_at(int l, long i, long j) const;
  std::array<ConservedState, 4> predict_children(int l, long i, long j) const;
  // Mean of the four children; MissingChild if any is absent.
  ConservedState project(int l, long i, long j) const;
  // Detail (actual - predicted) of the four children of (l, i, j),
  // child order (0,0), (1,0), (0,1), (1,1); three are independent.
  std::array<std::array<double, kNcomp>, 4> details_of(int l, long i, long j) const;

  void project_up();
  // Per-node normalized detail magnitudes; includes a project_up pass.
  void compute_details();
  void refine_for_evolution(const ThresholdPolicy& pol);
  void coarsen(const ThresholdPolicy& pol);
  void install_virtual_leaves();
  void fill_virtual();
  void clear_virtual();

  double compute_dt(double gamma, double c_cfl) const;
  void sweep_x(double gamma, double ch, double dt);
  void sweep_y(double gamma, double ch, double dt);
  void damp_psi(double dt, double ch, double cp2_over_ch);
  void heun_advance(double gamma, double ch, double dt, double cp2_over_ch,
                    bool damp_per_stage);

  // Piecewise-constant synthesis onto a uniform grid (level >= finest leaf).
  UniformGrid synthesize(int level) const;

  std::vector<CellRef> collect(NodeKind kind) const;

  template <typename Fn>
  void for_each_leaf(Fn&& fn) const {
    for (int l = 0; l <= L_; ++l) {
      const long n = 1L << l;
      for (long j = 0; j < n; ++j) {
        for (long i = 0; i < n; ++i) {
          const int32_t id = index_[l][size_t(j) * n + i];
          if (id >= 0 && pool_[l][id].kind == NodeKind::Leaf) {
            fn(l, i, j, pool_[l][id]);
          }
        }
      }
    }
  }

  // Tree audits used by the test suite.
  bool audit_graded() const;
  bool audit_families() const;

  // Splits a leaf into four predicted children (MaxLevelReached at the cap).
  void split_cell(int l, long i, long j);

 private:
  int L_;
  BoundaryMode bc_;
  double x0_, y0_, wx_, hy_;
  std::vector<std::vector<int32_t>> index_;
  std::vector<std::vector<TreeNode>> pool_;
  std::vector<std::vector<int32_t>> free_;

  int32_t id_at(int l, long i, long j) const;
  int32_t alloc(int l);
  void release(int l, long i, long j);
  void place(int l, long i, long j, const TreeNode& n);
  void clamp_map(int l, long& i, long& j) const;
  void ensure_exists(int l, long i, long j);
  void make_graded();
};

struct MrStepRecord {
  double dt = 0.0;
  double ch = 0.0;
  bool hit_event = false;
  long adapted_leaves = 0;   // after coarsening
  long evolved_leaves = 0;   // extended mesh advanced in time
  long virtual_cells = 0;    // companion cells of the extended mesh
};

// One refine -> evolve -> coarsen cycle.
MrStepRecord mr_step(QuadtreeMesh& mesh, TimeController& tc, const GlmParams& par,
                     const ThresholdPolicy& pol, bool damp_per_stage);

// D_c = 100 * sum(C_n) / (cells of the full finest mesh * iterations).
double compression_ratio(const std::vector<long>& leaf_counts, int max_level);

}  // namespace mhdmr
