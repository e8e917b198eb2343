#include "ocp/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ocp/dense.hpp"

namespace ocp {

std::string to_string(TimeScheme s) {
  switch (s) {
    case TimeScheme::stationary:
      return "stationary";
    case TimeScheme::backward_euler:
      return "backward_euler";
    case TimeScheme::trapezoidal:
      return "trapezoidal";
  }
  return "unknown";
}

TimeScheme parse_time_scheme(const std::string& name) {
  if (name == "stationary") return TimeScheme::stationary;
  if (name == "backward_euler" || name == "be") return TimeScheme::backward_euler;
  if (name == "trapezoidal" || name == "cn") return TimeScheme::trapezoidal;
  throw ConfigError("unknown time scheme '" + name +
                    "' (choices: stationary, backward_euler, trapezoidal)");
}

TimeGrid::TimeGrid(double t0_, double tf_, int n_t_) : t0(t0_), tf(tf_), n_t(n_t_) {
  if (n_t < 2) throw ConfigError("TimeGrid: n_t must be >= 2, got " + std::to_string(n_t));
  if (!(tf > t0)) throw ConfigError("TimeGrid: tf must exceed t0");
}

Vector SaddleSystem::rhs() const {
  Vector b(rhs_v);
  b.insert(b.end(), rhs_zeta.begin(), rhs_zeta.end());
  return b;
}

std::shared_ptr<const BlockOperator> SaddleSystem::op() const {
  const Index n = block_size();
  auto blk = std::make_shared<BlockOperator>(n, n, n, n);
  blk->set_block(0, 0, make_operator(A));
  blk->set_block(0, 1, make_operator(B1t));
  blk->set_block(1, 0, make_operator(B2));
  blk->set_block(1, 1, make_operator(scaled(-1.0, C)));
  return blk;
}

namespace {

struct PlacedBlock {
  Index row_off;
  Index col_off;
  const SparseMatrix* m;
  double factor;
};

SparseMatrix place_blocks(Index rows, Index cols, const std::vector<PlacedBlock>& blocks) {
  std::vector<Triplet> t;
  Index nnz = 0;
  for (const auto& b : blocks) nnz += b.m->nnz();
  t.reserve(nnz);
  for (const auto& b : blocks) {
    const auto offs = b.m->row_offsets();
    const auto cs = b.m->col_indices();
    const auto vs = b.m->values();
    for (Index i = 0; i < b.m->rows(); ++i) {
      for (Index p = offs[i]; p < offs[i + 1]; ++p) {
        t.push_back({b.row_off + i, b.col_off + cs[p], b.factor * vs[p]});
      }
    }
  }
  return SparseMatrix::from_triplets(rows, cols, t);
}

Vector nodal(const Mesh& mesh, const SpaceTimeField& f, double t) {
  if (!f) return Vector(mesh.num_nodes(), 0.0);
  return interpolate(mesh, [&](double x, double y) { return f(x, y, t); });
}

/// Dirichlet data on boundary nodes, zero elsewhere.
Vector boundary_vector(const ControlProblem& p, const Mesh& mesh, double t) {
  Vector g(mesh.num_nodes(), 0.0);
  if (!p.boundary_value) return g;
  for (Index n : mesh.boundary_nodes()) {
    g[n] = p.boundary_value(mesh.nodes()[n].x, mesh.nodes()[n].y, t);
  }
  return g;
}

SparseMatrix forward_at(const ControlProblem& p, const Mesh& mesh, std::span<const double> state,
                        double t) {
  if (!p.forward_operator) throw ConfigError("ControlProblem: forward_operator is required");
  SparseMatrix d = p.forward_operator(mesh, state, t);
  if (d.rows() != mesh.num_nodes() || d.cols() != mesh.num_nodes()) {
    throw DimensionError("ControlProblem: forward operator does not match the mesh");
  }
  return d;
}

/// Assembles the global blocks and right-hand side once the per-block
/// matrices and lifted data are in place.
void finalize(SaddleSystem& sys) {
  const Index n = sys.n_state;
  const int nb = sys.num_blocks;
  const Index total = n * nb;
  std::vector<PlacedBlock> a_place, c_place, b_place;
  for (int k = 0; k < nb; ++k) {
    a_place.push_back({k * n, k * n, &sys.mass, sys.weights[k]});
    c_place.push_back({k * n, k * n, &sys.mass, sys.weights[k] / sys.beta});
    b_place.push_back({k * n, k * n, &sys.diag_blocks[k], 1.0});
    if (k > 0) b_place.push_back({k * n, (k - 1) * n, &sys.sub_blocks[k - 1], 1.0});
  }
  sys.A = place_blocks(total, total, a_place);
  sys.C = place_blocks(total, total, c_place);
  sys.B2 = place_blocks(total, total, b_place);
  sys.B1t = derive_adjoint(sys.B2);
}

}  // namespace

SparseMatrix derive_adjoint(const SparseMatrix& forward_block) {
  if (forward_block.rows() != forward_block.cols()) {
    throw DimensionError("derive_adjoint: forward block must be square");
  }
  return transpose(forward_block);
}

SparseMatrix SaddleSystem::assemble() const {
  const Index n = block_size();
  const SparseMatrix minus_c = scaled(-1.0, C);
  return place_blocks(2 * n, 2 * n,
                      {{0, 0, &A, 1.0}, {0, n, &B1t, 1.0}, {n, 0, &B2, 1.0}, {n, n, &minus_c, 1.0}});
}

SaddleSystem build_stationary_kkt(const ControlProblem& p, const Mesh& mesh,
                                  std::span<const double> state) {
  if (!(p.beta > 0.0)) throw ConfigError("ControlProblem: beta must be positive");
  const Index n = mesh.num_nodes();
  Vector zero_state;
  if (state.empty()) {
    zero_state.assign(n, 0.0);
    state = zero_state;
  }
  if (static_cast<Index>(state.size()) != n) {
    throw DimensionError("build_stationary_kkt: state has the wrong size");
  }
  const auto& mask = mesh.boundary_mask();
  SaddleSystem sys;
  sys.scheme = TimeScheme::stationary;
  sys.beta = p.beta;
  sys.n_state = n;
  sys.num_blocks = 1;
  sys.weights = {1.0};
  sys.constrained = mask;
  sys.mass_full = assemble_mass(mesh);
  sys.mass = constrain(sys.mass_full, mask, 1.0);

  const SparseMatrix d = forward_at(p, mesh, state, 0.0);
  sys.diag_blocks.push_back(constrain(d, mask, 1.0));

  const Vector g = boundary_vector(p, mesh, 0.0);
  sys.desired = nodal(mesh, p.desired_state, 0.0);
  sys.boundary_data = g;
  const Vector f = spmv(sys.mass_full, nodal(mesh, p.force, 0.0));
  const Vector mv = spmv(sys.mass_full, subtract(sys.desired, g));
  const Vector dg = spmv(d, g);
  sys.rhs_v.resize(n);
  sys.rhs_zeta.resize(n);
  for (Index i = 0; i < n; ++i) {
    sys.rhs_v[i] = mask[i] ? g[i] : mv[i];
    sys.rhs_zeta[i] = mask[i] ? g[i] : f[i] - dg[i];
  }
  finalize(sys);
  return sys;
}

SaddleSystem build_instationary_kkt(const ControlProblem& p, const Mesh& mesh, const TimeGrid& grid,
                                    TimeScheme scheme, std::span<const double> state) {
  if (!(p.beta > 0.0)) throw ConfigError("ControlProblem: beta must be positive");
  if (grid.n_t < 2) throw ConfigError("build_instationary_kkt: n_t must be >= 2");
  if (scheme == TimeScheme::stationary) {
    throw ConfigError("build_instationary_kkt: a time-stepping scheme is required");
  }
  const Index n = mesh.num_nodes();
  const int nb = grid.num_steps();
  Vector zero_state;
  if (state.empty()) {
    zero_state.assign(n * nb, 0.0);
    state = zero_state;
  }
  if (static_cast<Index>(state.size()) != n * nb) {
    throw DimensionError("build_instationary_kkt: state trajectory has the wrong size");
  }
  const auto& mask = mesh.boundary_mask();
  const double tau = grid.tau();
  const bool trap = scheme == TimeScheme::trapezoidal;

  SaddleSystem sys;
  sys.scheme = scheme;
  sys.beta = p.beta;
  sys.n_state = n;
  sys.num_blocks = nb;
  sys.time = grid;
  sys.constrained = mask;
  sys.mass_full = assemble_mass(mesh);
  sys.mass = constrain(sys.mass_full, mask, 1.0);
  const SparseMatrix& m = sys.mass_full;

  // Initial state with its boundary values replaced by the Dirichlet data.
  Vector v0 = p.initial_condition ? interpolate(mesh, p.initial_condition) : Vector(n, 0.0);
  Vector g_prev = boundary_vector(p, mesh, grid.time(0));
  for (Index i = 0; i < n; ++i)
    if (mask[i]) v0[i] = g_prev[i];

  SparseMatrix d_prev;
  if (trap) d_prev = forward_at(p, mesh, v0, grid.time(0));
  Vector f_prev = nodal(mesh, p.force, grid.time(0));
  Vector known_prev = v0;  // the part of v_{k-1} already fixed

  sys.rhs_v.resize(n * nb);
  sys.rhs_zeta.resize(n * nb);
  sys.desired.resize(n * nb);
  sys.boundary_data.resize(n * nb);
  for (int k = 1; k <= nb; ++k) {
    const double t = grid.time(k);
    const auto blk_state = state.subspan((k - 1) * n, n);
    const SparseMatrix d = forward_at(p, mesh, blk_state, t);
    const double w = (trap && k == nb) ? 0.5 * tau : tau;
    sys.weights.push_back(w);

    SparseMatrix l_diag, l_sub;
    Vector force;
    const Vector f = nodal(mesh, p.force, t);
    if (trap) {
      l_diag = linear_combination(1.0, m, 0.5 * tau, d);
      l_sub = linear_combination(-1.0, m, 0.5 * tau, d_prev);
      force = scaled(0.5 * tau, spmv(m, add(f, f_prev)));
    } else {
      l_diag = linear_combination(1.0, m, tau, d);
      l_sub = scaled(-1.0, m);
      force = scaled(tau, spmv(m, f));
    }
    sys.diag_blocks.push_back(constrain(l_diag, mask, 1.0));
    if (k > 1) sys.sub_blocks.push_back(constrain(l_sub, mask, 0.0));

    const Vector g = boundary_vector(p, mesh, t);
    const Vector vd = nodal(mesh, p.desired_state, t);
    const Vector lift = add(spmv(l_diag, g), spmv(l_sub, known_prev));
    const Vector mv = spmv(m, subtract(vd, g));
    for (Index i = 0; i < n; ++i) {
      const Index r = (k - 1) * n + i;
      sys.rhs_v[r] = mask[i] ? w * g[i] : w * mv[i];
      sys.rhs_zeta[r] = mask[i] ? g[i] : force[i] - lift[i];
      sys.desired[r] = vd[i];
      sys.boundary_data[r] = g[i];
    }
    known_prev = g;
    f_prev = f;
    if (trap) d_prev = d;
  }
  finalize(sys);
  return sys;
}

KktSolution split_solution(const SaddleSystem& sys, std::span<const double> x) {
  const Index n = sys.block_size();
  if (static_cast<Index>(x.size()) != 2 * n) throw DimensionError("split_solution: size mismatch");
  KktSolution s;
  s.state.assign(x.begin(), x.begin() + n);
  s.adjoint.assign(x.begin() + n, x.end());
  s.control = scaled(1.0 / sys.beta, s.adjoint);
  return s;
}

void block_forward_substitution(const std::vector<SparseMatrix>& sub_blocks, Index n,
                                const BlockSolve& diag_solve, std::span<const double> r,
                                std::span<double> x) {
  const int nb = static_cast<int>(sub_blocks.size()) + 1;
  if (static_cast<Index>(r.size()) != n * nb || x.size() != r.size()) {
    throw DimensionError("block_forward_substitution: dimension mismatch");
  }
  Vector rhs(n), tmp(n);
  for (int k = 0; k < nb; ++k) {
    std::copy_n(r.begin() + k * n, n, rhs.begin());
    if (k > 0) {
      sub_blocks[k - 1].multiply(x.subspan((k - 1) * n, n), tmp);
      axpy(-1.0, tmp, rhs);
    }
    diag_solve(k, rhs, x.subspan(k * n, n));
  }
}

void block_backward_substitution(const std::vector<SparseMatrix>& sub_blocks, Index n,
                                 const BlockSolve& diag_solve_t, std::span<const double> r,
                                 std::span<double> x) {
  const int nb = static_cast<int>(sub_blocks.size()) + 1;
  if (static_cast<Index>(r.size()) != n * nb || x.size() != r.size()) {
    throw DimensionError("block_backward_substitution: dimension mismatch");
  }
  Vector rhs(n), tmp(n);
  for (int k = nb - 1; k >= 0; --k) {
    std::copy_n(r.begin() + k * n, n, rhs.begin());
    if (k + 1 < nb) {
      sub_blocks[k].multiply_transpose(x.subspan((k + 1) * n, n), tmp);
      axpy(-1.0, tmp, rhs);
    }
    diag_solve_t(k, rhs, x.subspan(k * n, n));
  }
}

struct ExactForwardSolver::Impl {
  std::vector<std::shared_ptr<const DenseLU>> lu;  // one per block, shared when equal
};

ExactForwardSolver::ExactForwardSolver(const SaddleSystem& sys) : sys_(&sys) {
  auto impl = std::make_shared<Impl>();
  for (int k = 0; k < sys.num_blocks; ++k) {
    std::shared_ptr<const DenseLU> found;
    for (int j = 0; j < k && !found; ++j) {
      if (sys.diag_blocks[j] == sys.diag_blocks[k]) found = impl->lu[j];
    }
    impl->lu.push_back(found ? found : std::make_shared<DenseLU>(sys.diag_blocks[k].to_dense()));
  }
  impl_ = impl;
}

Vector ExactForwardSolver::solve(std::span<const double> r) const {
  Vector x(r.size());
  block_forward_substitution(
      sys_->sub_blocks, sys_->n_state,
      [&](int k, std::span<const double> b, std::span<double> out) {
        const Vector s = impl_->lu[k]->solve(b);
        std::copy(s.begin(), s.end(), out.begin());
      },
      r, x);
  return x;
}

Vector ExactForwardSolver::solve_transpose(std::span<const double> r) const {
  Vector x(r.size());
  block_backward_substitution(
      sys_->sub_blocks, sys_->n_state,
      [&](int k, std::span<const double> b, std::span<double> out) {
        const Vector s = impl_->lu[k]->solve_transpose(b);
        std::copy(s.begin(), s.end(), out.begin());
      },
      r, x);
  return x;
}

ReducedProblem::ReducedProblem(const SaddleSystem& sys) : sys_(&sys), solver_(sys) {}

namespace {

Vector interior_only(const SaddleSystem& sys, std::span<const double> v) {
  Vector out(v.begin(), v.end());
  for (int k = 0; k < sys.num_blocks; ++k)
    for (Index i = 0; i < sys.n_state; ++i)
      if (sys.constrained[i]) out[k * sys.n_state + i] = 0.0;
  return out;
}

}  // namespace

Vector ReducedProblem::state(std::span<const double> control) const {
  if (static_cast<Index>(control.size()) != sys_->block_size()) {
    throw DimensionError("ReducedProblem::state: control has the wrong size");
  }
  const Vector u = interior_only(*sys_, control);
  const Vector rhs = add(sys_->rhs_zeta, spmv(sys_->A, u));
  return solver_.solve(rhs);
}

Vector ReducedProblem::adjoint(std::span<const double> state) const {
  const Vector rhs = subtract(sys_->rhs_v, spmv(sys_->A, state));
  return solver_.solve_transpose(rhs);
}

double ReducedProblem::cost(std::span<const double> state, std::span<const double> control) const {
  const Index n = sys_->n_state;
  const Vector u = interior_only(*sys_, control);
  double j = 0.0;
  for (int k = 0; k < sys_->num_blocks; ++k) {
    const auto vk = state.subspan(k * n, n);
    const auto vdk = std::span<const double>(sys_->desired).subspan(k * n, n);
    const auto uk = std::span<const double>(u).subspan(k * n, n);
    const Vector e = subtract(vk, vdk);
    j += sys_->weights[k] *
         (0.5 * dot(e, spmv(sys_->mass_full, e)) + 0.5 * sys_->beta * dot(uk, spmv(sys_->mass_full, uk)));
  }
  return j;
}

double ReducedProblem::cost(std::span<const double> control) const {
  return cost(state(control), control);
}

double ReducedProblem::directional_derivative(std::span<const double> control,
                                              std::span<const double> direction) const {
  const Vector u = interior_only(*sys_, control);
  const Vector zeta = adjoint(state(u));
  Vector g(u.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = sys_->beta * u[i] - zeta[i];
  return dot(g, spmv(sys_->A, interior_only(*sys_, direction)));
}

Vector forward_march(const ControlProblem& p, const Mesh& mesh, const TimeGrid& grid,
                     TimeScheme scheme, std::span<const double> control) {
  if (scheme == TimeScheme::stationary) throw ConfigError("forward_march: a time scheme is required");
  const Index n = mesh.num_nodes();
  const int nt = grid.n_t;
  if (!control.empty() && static_cast<Index>(control.size()) != n * nt) {
    throw DimensionError("forward_march: control must hold n_t stacked vectors");
  }
  const auto& mask = mesh.boundary_mask();
  const SparseMatrix m = assemble_mass(mesh);
  const double tau = grid.tau();
  const bool trap = scheme == TimeScheme::trapezoidal;
  auto control_at = [&](int k) {
    if (control.empty()) return Vector(n, 0.0);
    return Vector(control.begin() + k * n, control.begin() + (k + 1) * n);
  };

  Vector out(n * nt, 0.0);
  Vector v = p.initial_condition ? interpolate(mesh, p.initial_condition) : Vector(n, 0.0);
  {
    const Vector g0 = boundary_vector(p, mesh, grid.time(0));
    for (Index i = 0; i < n; ++i)
      if (mask[i]) v[i] = g0[i];
  }
  std::copy(v.begin(), v.end(), out.begin());
  SparseMatrix d_prev = forward_at(p, mesh, v, grid.time(0));
  Vector src_prev = add(spmv(m, control_at(0)), spmv(m, nodal(mesh, p.force, grid.time(0))));
  for (int k = 1; k < nt; ++k) {
    const double t = grid.time(k);
    // The forward operator sees the previous state (linearly implicit in time).
    const SparseMatrix d = forward_at(p, mesh, v, t);
    const Vector src = add(spmv(m, control_at(k)), spmv(m, nodal(mesh, p.force, t)));
    SparseMatrix lhs;
    Vector rhs;
    if (trap) {
      lhs = linear_combination(1.0, m, 0.5 * tau, d);
      rhs = spmv(linear_combination(1.0, m, -0.5 * tau, d_prev), v);
      axpy(0.5 * tau, add(src, src_prev), rhs);
    } else {
      lhs = linear_combination(1.0, m, tau, d);
      rhs = spmv(m, v);
      axpy(tau, src, rhs);
    }
    const Vector g = boundary_vector(p, mesh, t);
    std::vector<Index> bnd = mesh.boundary_nodes();
    Vector bval(bnd.size());
    for (std::size_t b = 0; b < bnd.size(); ++b) bval[b] = g[bnd[b]];
    const AssembledForm form = apply_dirichlet(lhs, rhs, bnd, bval);
    v = dense_solve(form.matrix.to_dense(), form.rhs);
    std::copy(v.begin(), v.end(), out.begin() + k * n);
    d_prev = d;
    src_prev = src;
  }
  return out;
}

}  // namespace ocp
