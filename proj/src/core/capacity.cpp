#include "core/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "core/fft.hpp"
#include "core/potentials.hpp"
#include "core/semigroup.hpp"

namespace fractrace {

void CompactSetApprox::validate(int dim) const {
  if (samples.empty()) throw std::invalid_argument("compact set: needs at least one sample");
  (void)dim;
  for (const auto& s : samples)
    if (!(s.t > 0.0)) throw std::invalid_argument("compact set: samples need t > 0");
}

CompactSetApprox CompactSetApprox::from_ball(const ParabolicBall& ball, double alpha,
                                             int dim, int nt, int nx) {
  if (!(ball.r > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  CompactSetApprox K;
  K.provenance = Provenance::Ball;
  const double r2a = std::pow(ball.r, 2.0 * alpha);
  for (int it = 0; it < nt; ++it) {
    const double t = ball.t0 + r2a * (1.0 + (it + 0.5) / nt);
    if (dim == 1) {
      for (int ix = 0; ix < nx; ++ix) {
        const double x = ball.x0[0] - ball.r + 2.0 * ball.r * (ix + 0.5) / nx;
        K.samples.push_back({t, make_point(x)});
      }
    } else {
      for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < nx; ++iy) {
          const SpacePoint x = make_point(ball.x0[0] - ball.r + 2.0 * ball.r * (ix + 0.5) / nx,
                                          ball.x0[1] - ball.r + 2.0 * ball.r * (iy + 0.5) / nx);
          if (dist(x, ball.x0, dim) < ball.r) K.samples.push_back({t, x});
        }
    }
  }
  return K;
}

CompactSetApprox CompactSetApprox::from_csv(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("compact set: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("compact set: empty file " + path);
  CompactSetApprox K;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> v;
    while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
    if (static_cast<int>(v.size()) != dim + 1)
      throw std::runtime_error("compact set: bad row in " + path);
    SpaceTimePoint p;
    p.t = v[0];
    for (int i = 0; i < dim; ++i) p.x[i] = v[1 + i];
    K.samples.push_back(p);
  }
  K.validate(dim);
  return K;
}

void CompactSetApprox::save_csv(const std::string& path, int dim) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("compact set: cannot write " + path);
  out << "t";
  for (int i = 0; i < dim; ++i) out << ",x" << (i + 1);
  out << "\n";
  char buf[64];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.12g", s.t);
    out << buf;
    for (int i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", s.x[i]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

XGridSpec default_ball_grid(CapacityVariant variant, const ParabolicBall& ball, double alpha,
                            int dim) {
  if (dim != 1)
    throw std::invalid_argument("capacity grids are 1-d (see module non-goals)");
  const double r = ball.r;
  const double r2a = std::pow(r, 2.0 * alpha);
  const double width_lo = std::pow(ball.t0 + r2a, 1.0 / (2.0 * alpha));
  const double width_hi = std::pow(ball.t0 + 2.0 * r2a, 1.0 / (2.0 * alpha));

  XGridSpec xg;
  xg.space.dim = 1;
  const double h_target = std::min(r, width_lo) / 12.0;
  double L = std::max(std::abs(ball.x0[0]) + r + 20.0 * width_hi,
                      std::abs(ball.x0[0]) + 14.0 * r);
  int N = 256;
  while (N < 2.0 * L / h_target && N < 8192) N *= 2;
  xg.space.L = L;
  xg.space.n_nodes = N;
  if (variant == CapacityVariant::S) {
    xg.T = (ball.t0 + 2.0 * r2a) * 1.02;
    xg.M = 48;
  }
  return xg;
}

XGridSpec grid_for_samples(CapacityVariant variant, const std::vector<SpaceTimePoint>& pts,
                           double alpha) {
  if (pts.empty()) throw std::invalid_argument("grid_for_samples: no points");
  double tmin = kInf, tmax = 0.0, span = 0.0;
  for (const auto& s : pts) {
    tmin = std::min(tmin, s.t);
    tmax = std::max(tmax, s.t);
    span = std::max(span, std::abs(s.x[0]));
  }
  const double width = std::pow(tmax, 1.0 / (2.0 * alpha));
  XGridSpec xg;
  xg.space.dim = 1;
  xg.space.L = std::max(8.0 * width + span, 4.0);
  const double h_target =
      std::max(std::pow(tmin, 1.0 / (2.0 * alpha)) / 8.0, xg.space.L / 2048.0);
  int N = 256;
  while (N < 2.0 * xg.space.L / h_target && N < 4096) N *= 2;
  xg.space.n_nodes = N;
  if (variant == CapacityVariant::S) {
    xg.T = tmax * 1.02;
    xg.M = 48;
  }
  return xg;
}

// ---------------------------------------------------------------------------

struct CapacityProblem::Iterate {
  std::vector<double> phi;
  std::vector<double> h;
  std::vector<double> Bh;
  double g = -kInf;
  double obj_h = 0.0;
  double min_Bh = 0.0;
  double primal = kInf;
  double sum_lambda = 0.0;
  double phi_norm = 0.0;  // || phi ||_{p', V}
};

CapacityProblem::CapacityProblem(CapacityVariant variant, double alpha, double p,
                                 const XGridSpec& xgrid, const CompactSetApprox& K,
                                 SolverControls controls)
    : variant_(variant), alpha_(alpha), p_(p), pc_(conjugate_exponent(p)), xgrid_(xgrid),
      controls_(controls) {
  xgrid_.space.validate();
  if (xgrid_.space.dim != 1)
    throw std::invalid_argument("capacity: only 1-d spatial grids are supported");
  if (!(alpha > 0.0) || !(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("capacity: alpha must lie in (0, 1]");
  K.validate(xgrid_.space.dim);

  const long cells = xgrid_.space.cells();
  if (variant_ == CapacityVariant::S) {
    if (!(p < 1.0 + xgrid_.space.dim / (2.0 * alpha)))
      throw std::invalid_argument("capacity: S-variant requires p < 1 + n/(2 alpha)");
    if (xgrid_.M < 2 || !(xgrid_.T > 0.0))
      throw std::invalid_argument("capacity: S-variant needs a time grid (T > 0, M >= 2)");
    const double dt = xgrid_.T / xgrid_.M;
    volume_.resize(static_cast<std::size_t>(xgrid_.M + 1) * cells);
    for (int j = 0; j <= xgrid_.M; ++j) {
      const double w = dt * ((j == 0 || j == xgrid_.M) ? 0.5 : 1.0) * xgrid_.space.cell_volume();
      for (long c = 0; c < cells; ++c) volume_[static_cast<std::size_t>(j) * cells + c] = w;
    }
  } else {
    volume_.assign(cells, xgrid_.space.cell_volume());
  }

  // snap samples onto the grid and dedupe
  std::map<std::pair<long, double>, int> seen;
  for (const auto& s : K.samples) {
    SpaceTimePoint q = s;
    long cell;
    double tkey;
    if (variant_ == CapacityVariant::S) {
      const double dt = xgrid_.T / xgrid_.M;
      int jt = static_cast<int>(std::lround(s.t / dt));
      jt = std::clamp(jt, 1, xgrid_.M);
      const long node = xgrid_.space.flat_index(s.x);
      q.t = jt * dt;
      q.x = xgrid_.space.node_point(node);
      cell = static_cast<long>(jt) * cells + node;
      tkey = 0.0;  // cell already encodes time
    } else {
      const long node = xgrid_.space.flat_index(s.x);
      q.x = xgrid_.space.node_point(node);
      cell = node;
      tkey = q.t;
    }
    if (seen.emplace(std::make_pair(cell, tkey), 1).second) {
      samples_.push_back(q);
      sample_cell_.push_back(cell);
    }
  }
  if (samples_.empty()) throw std::invalid_argument("capacity: no samples after snapping");

  if (variant_ == CapacityVariant::R) {
    std::map<double, std::vector<int>> groups;
    for (std::size_t j = 0; j < samples_.size(); ++j)
      groups[samples_[j].t].push_back(static_cast<int>(j));
    for (auto& [t, members] : groups) {
      group_time_.push_back(t);
      group_members_.push_back(std::move(members));
    }
  }

  // a sample whose kernel row vanishes makes the program infeasible
  const std::vector<double> ones(volume_.size(), 1.0);
  const std::vector<double> row_mass = apply(ones);
  for (std::size_t j = 0; j < row_mass.size(); ++j)
    if (!(row_mass[j] > 1e-14))
      throw std::runtime_error(
          "capacity: a K-sample has an all-zero kernel row on this grid (ill-posed)");
}

std::vector<double> CapacityProblem::apply(const std::vector<double>& h) const {
  if (h.size() != volume_.size()) throw std::invalid_argument("capacity: apply size mismatch");
  std::vector<double> out(samples_.size(), 0.0);
  if (variant_ == CapacityVariant::R) {
    SpectralTransform ft(xgrid_.space);
    std::vector<std::complex<double>> coeff, work;
    ft.forward(h, coeff);
    std::vector<double> field;
    for (std::size_t g = 0; g < group_time_.size(); ++g) {
      work = coeff;
      for (long f = 0; f < ft.n_freq(); ++f)
        work[f] *= std::exp(-group_time_[g] * std::pow(ft.xi_sq(f), alpha_));
      ft.backward(work, field);
      for (int j : group_members_[g]) out[j] = field[sample_cell_[j]];
    }
  } else {
    SpaceTimeField g(xgrid_.space, xgrid_.T, xgrid_.M);
    g.v = h;
    KernelSpec spec;
    spec.alpha = alpha_;
    spec.dim = xgrid_.space.dim;
    const SpaceTimeField sg = apply_S_periodic(g, spec);
    for (std::size_t j = 0; j < samples_.size(); ++j) out[j] = sg.v[sample_cell_[j]];
  }
  return out;
}

std::vector<double> CapacityProblem::apply_transpose(const std::vector<double>& w) const {
  if (w.size() != samples_.size())
    throw std::invalid_argument("capacity: transpose size mismatch");
  if (variant_ == CapacityVariant::R) {
    SpectralTransform ft(xgrid_.space);
    const long cells = xgrid_.space.cells();
    std::vector<double> scatter(cells);
    std::vector<std::complex<double>> acc(ft.n_freq(), {0.0, 0.0}), coeff;
    for (std::size_t g = 0; g < group_time_.size(); ++g) {
      std::fill(scatter.begin(), scatter.end(), 0.0);
      for (int j : group_members_[g]) scatter[sample_cell_[j]] += w[j];
      ft.forward(scatter, coeff);
      for (long f = 0; f < ft.n_freq(); ++f)
        acc[f] += coeff[f] * std::exp(-group_time_[g] * std::pow(ft.xi_sq(f), alpha_));
    }
    std::vector<double> out;
    ft.backward(acc, out);
    return out;
  }
  SpaceTimeField u(xgrid_.space, xgrid_.T, xgrid_.M);
  for (std::size_t j = 0; j < samples_.size(); ++j) u.v[sample_cell_[j]] += w[j];
  KernelSpec spec;
  spec.alpha = alpha_;
  spec.dim = xgrid_.space.dim;
  return apply_S_transpose(u, spec).v;
}

void CapacityProblem::eval_lambda(const std::vector<double>& lambda, Iterate& it) const {
  const std::size_t C = volume_.size();
  it.phi = apply_transpose(lambda);
  for (std::size_t c = 0; c < C; ++c) it.phi[c] /= volume_[c];
  it.h.resize(C);
  double phi_pp = 0.0;
  for (std::size_t c = 0; c < C; ++c) {
    const double f = it.phi[c];
    if (f > 0.0) {
      it.h[c] = std::pow(f / p_, 1.0 / (p_ - 1.0));
      phi_pp += std::pow(f, pc_) * volume_[c];
    } else {
      it.h[c] = 0.0;
    }
  }
  it.sum_lambda = 0.0;
  for (double l : lambda) it.sum_lambda += l;
  const double kappa = (p_ - 1.0) * std::pow(p_, -pc_);
  it.g = it.sum_lambda - kappa * phi_pp;
  it.phi_norm = std::pow(phi_pp, 1.0 / pc_);

  it.obj_h = 0.0;
  for (std::size_t c = 0; c < C; ++c)
    if (it.h[c] > 0.0) it.obj_h += std::pow(it.h[c], p_) * volume_[c];
  it.Bh = apply(it.h);
  it.min_Bh = kInf;
  for (double v : it.Bh) it.min_Bh = std::min(it.min_Bh, v);
  it.primal = it.min_Bh > 0.0 ? it.obj_h / std::pow(it.min_Bh, p_) : kInf;
}

double CapacityProblem::dual_norm(const std::vector<double>& w, std::vector<double>* phi) const {
  std::vector<double> vphi = apply_transpose(w);
  double s = 0.0;
  for (std::size_t c = 0; c < vphi.size(); ++c) {
    vphi[c] /= volume_[c];
    if (vphi[c] > 0.0) s += std::pow(vphi[c], pc_) * volume_[c];
  }
  if (phi) *phi = std::move(vphi);
  return std::pow(s, 1.0 / pc_);
}

CapacityEstimate CapacityProblem::solve_primal() const {
  const std::size_t J = samples_.size();
  CapacityEstimate est;

  // scale a uniform multiplier to the ray optimum
  std::vector<double> lambda(J, 1.0);
  Iterate it;
  eval_lambda(lambda, it);
  const double kappa = (p_ - 1.0) * std::pow(p_, -pc_);
  const double S1 = std::pow(it.phi_norm, pc_);
  if (S1 > 0.0) {
    const double c0 = std::pow(J / (pc_ * kappa * S1), 1.0 / (pc_ - 1.0));
    lambda.assign(J, c0);
  }
  eval_lambda(lambda, it);

  double best_primal = it.primal;
  std::vector<double> best_h = it.h;
  double best_scale = it.min_Bh;
  double best_dual = 0.0;
  std::vector<double> best_w = lambda;
  if (it.phi_norm > 0.0) {
    best_dual = std::pow(it.sum_lambda / it.phi_norm, p_);
  }

  double eta = 0.25 * (it.sum_lambda / J + 1e-30);
  Iterate trial;
  std::vector<double> grad(J), lam_new(J);
  int iters = 0;
  bool converged = false;
  while (iters < controls_.max_iter) {
    for (std::size_t j = 0; j < J; ++j) grad[j] = 1.0 - it.Bh[j];
    bool accepted = false;
    for (int bt = 0; bt < 40 && iters < controls_.max_iter; ++bt) {
      ++iters;
      for (std::size_t j = 0; j < J; ++j) lam_new[j] = std::max(0.0, lambda[j] + eta * grad[j]);
      eval_lambda(lam_new, trial);
      if (trial.g >= it.g) {
        lambda.swap(lam_new);
        it = trial;
        eta *= 1.25;
        accepted = true;
        break;
      }
      eta *= 0.4;
    }
    if (!accepted) break;  // no ascent direction at float resolution

    if (it.primal < best_primal) {
      best_primal = it.primal;
      best_h = it.h;
      best_scale = it.min_Bh;
    }
    if (it.phi_norm > 0.0) {
      const double d = std::pow(it.sum_lambda / it.phi_norm, p_);
      if (d > best_dual) {
        best_dual = d;
        best_w = lambda;
      }
    }
    const double lb = std::max(best_dual, it.g);
    if (best_primal < kInf && best_primal - lb <= controls_.tol * best_primal) {
      converged = true;
      break;
    }
  }

  est.primal_value = best_primal;
  est.dual_value = best_dual;
  est.iterations = iters;
  est.converged = converged;
  if (best_scale > 0.0) {
    est.witness_h = std::move(best_h);
    for (double& v : est.witness_h) v /= best_scale;
  }
  double wn = dual_norm(best_w);
  if (wn > 0.0) {
    for (double& v : best_w) v /= wn;
    est.witness_mu = measure_from_weights(best_w);
  }
  return est;
}

CapacityEstimate CapacityProblem::solve_dual() const {
  const std::size_t J = samples_.size();
  std::vector<double> w(J, 1.0), phi;
  double nrm = dual_norm(w, &phi);
  for (double& v : w) v /= nrm;
  for (double& v : phi) v /= nrm;
  double sum_w = 0.0;
  for (double v : w) sum_w += v;
  double ratio = sum_w;

  std::vector<double> hphi(volume_.size()), grad(J), w_new(J);
  double eta = 0.5 / (std::sqrt(static_cast<double>(J)) + 1.0);
  int iters = 0;
  int stall = 0;
  const int budget = std::max(200, controls_.max_iter / 2);
  while (iters < budget && stall < 40) {
    for (std::size_t c = 0; c < volume_.size(); ++c)
      hphi[c] = phi[c] > 0.0 ? std::pow(phi[c], pc_ - 1.0) : 0.0;
    const std::vector<double> G = apply(hphi);
    for (std::size_t j = 0; j < J; ++j) grad[j] = 1.0 - sum_w * G[j];

    bool accepted = false;
    for (int bt = 0; bt < 30 && iters < budget; ++bt) {
      ++iters;
      for (std::size_t j = 0; j < J; ++j) w_new[j] = std::max(0.0, w[j] + eta * grad[j]);
      std::vector<double> phi_new;
      const double n_new = dual_norm(w_new, &phi_new);
      if (n_new <= 0.0) {
        eta *= 0.4;
        continue;
      }
      double s_new = 0.0;
      for (double v : w_new) s_new += v;
      if (s_new / n_new > ratio) {
        for (std::size_t j = 0; j < J; ++j) w[j] = w_new[j] / n_new;
        for (std::size_t c = 0; c < phi_new.size(); ++c) phi[c] = phi_new[c] / n_new;
        const double improved = s_new / n_new;
        stall = (improved - ratio <= 1e-4 * controls_.tol * ratio) ? stall + 1 : 0;
        ratio = improved;
        sum_w = improved;
        eta *= 1.2;
        accepted = true;
        break;
      }
      eta *= 0.4;
    }
    if (!accepted) ++stall;
  }

  CapacityEstimate est;
  est.dual_value = std::pow(ratio, p_);
  est.iterations = iters;
  est.converged = false;  // lower bound only; solve() judges the bracket
  est.witness_mu = measure_from_weights(w);
  return est;
}

CapacityEstimate CapacityProblem::solve() const {
  CapacityEstimate a = solve_primal();
  CapacityEstimate b = solve_dual();
  CapacityEstimate est = a;
  est.iterations = a.iterations + b.iterations;
  if (b.dual_value > est.dual_value) {
    est.dual_value = b.dual_value;
    est.witness_mu = b.witness_mu;
  }
  est.converged = est.primal_value < kInf &&
                  est.primal_value - est.dual_value <=
                      std::max(controls_.tol, 0.05) * est.primal_value;
  return est;
}

DiscreteMeasure CapacityProblem::measure_from_weights(const std::vector<double>& w) const {
  std::vector<Atom> atoms;
  atoms.reserve(w.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    if (w[j] > 0.0) atoms.push_back({samples_[j].t, samples_[j].x, w[j]});
  if (atoms.empty()) atoms.push_back({samples_[0].t, samples_[0].x, 0.0});
  return DiscreteMeasure(std::move(atoms), xgrid_.space.dim);
}

// ---------------------------------------------------------------------------

EquilibriumResult equilibrium_measure(const CompactSetApprox& K, double p, double alpha,
                                      const XGridSpec& xgrid, SolverControls controls) {
  CapacityProblem prob(CapacityVariant::S, alpha, p, xgrid, K, controls);
  const CapacityEstimate primal = prob.solve_primal();
  const CapacityEstimate dual = prob.solve_dual();

  EquilibriumResult res;
  res.primal_value = primal.primal_value;
  res.dual_value = std::max(primal.dual_value, dual.dual_value);
  const DiscreteMeasure& mu =
      dual.dual_value >= primal.dual_value ? dual.witness_mu : primal.witness_mu;

  const double C = res.dual_value;
  const double pc = conjugate_exponent(p);
  res.mu_K = mu.scaled(std::pow(C, 1.0 / pc));
  res.mass = res.mu_K.total();

  // energy along the transpose path
  std::vector<double> w(prob.samples().size(), 0.0);
  {
    // witness atoms correspond 1:1 to positive-weight samples; rebuild weights
    std::size_t a = 0;
    for (std::size_t j = 0; j < prob.samples().size() && a < res.mu_K.size(); ++j) {
      const auto& s = prob.samples()[j];
      const Atom& at = res.mu_K.atoms()[a];
      if (s.t == at.t && s.x == at.x) {
        w[j] = at.w;
        ++a;
      }
    }
  }
  std::vector<double> phi = prob.apply_transpose(w);
  const auto& V = prob.cell_volumes();
  double energy = 0.0;
  std::vector<double> hphi(V.size(), 0.0);
  for (std::size_t c = 0; c < V.size(); ++c) {
    phi[c] /= V[c];
    if (phi[c] > 0.0) {
      energy += std::pow(phi[c], pc) * V[c];
      hphi[c] = std::pow(phi[c], pc - 1.0);
    }
  }
  res.energy = energy;

  // mutual energy along the forward path
  const std::vector<double> shp = prob.apply(hphi);
  double mutual = 0.0;
  for (std::size_t j = 0; j < shp.size(); ++j) mutual += w[j] * shp[j];
  res.mutual = mutual;

  res.converged = primal.primal_value < kInf &&
                  primal.primal_value - res.dual_value <=
                      std::max(controls.tol, 0.05) * primal.primal_value;
  return res;
}

SuperlevelResult superlevel_capacity(const SpaceTimeField& g, double lambda, double p,
                                     double alpha, int coarsen_space, int coarsen_time,
                                     SolverControls controls) {
  if (!(lambda > 0.0)) throw std::invalid_argument("superlevel: lambda must be positive");
  for (double v : g.v)
    if (v < 0.0) throw std::invalid_argument("superlevel: g must be nonnegative");

  KernelSpec spec;
  spec.alpha = alpha;
  spec.dim = g.grid.dim;
  const SpaceTimeField sg = apply_S_periodic(g, spec);

  SuperlevelResult res;
  res.level = lambda;
  CompactSetApprox K;
  K.provenance = CompactSetApprox::Provenance::Superlevel;
  const long cells = g.grid.cells();
  for (int j = 1; j <= g.M; j += std::max(1, coarsen_time)) {
    const double* sl = sg.slice(j);
    for (long c = 0; c < cells; c += std::max(1, coarsen_space)) {
      if (sl[c] >= lambda) K.samples.push_back({g.time(j), g.grid.node_point(c)});
    }
  }
  res.n_samples = K.samples.size();
  if (K.samples.empty()) {
    res.empty = true;
    res.estimate.primal_value = 0.0;
    res.estimate.dual_value = 0.0;
    res.estimate.converged = true;
    return res;
  }

  XGridSpec xg{g.grid, g.T, g.M};
  CapacityProblem prob(CapacityVariant::S, alpha, p, xg, K, controls);
  res.estimate = prob.solve();

  // g/lambda is feasible for this very program by construction of the samples
  const double candidate = std::pow(norm_lp(g, p) / lambda, p);
  if (candidate < res.estimate.primal_value) {
    res.estimate.primal_value = candidate;
    res.estimate.witness_h = g.v;
    for (double& v : res.estimate.witness_h) v /= lambda;
  }
  return res;
}

MassThresholdBracket mass_threshold_capacity(const DiscreteMeasure& mu, double lambda,
                                             CapacityVariant variant, double p, double alpha,
                                             SolverControls controls) {
  if (mu.empty()) throw std::invalid_argument("mass threshold: empty measure");
  if (!(lambda > 0.0) || lambda > mu.total() * (1.0 + 1e-9))
    throw std::invalid_argument("mass threshold: need 0 < lambda <= ||mu||");
  if (mu.dim() != 1)
    throw std::invalid_argument("mass threshold: capacity solves are 1-d only");

  struct Candidate {
    std::string label;
    double mass;
    CompactSetApprox K;
  };
  std::vector<Candidate> cands;

  auto atoms_to_set = [&](const std::vector<Atom>& atoms) {
    CompactSetApprox K;
    for (const Atom& a : atoms) K.samples.push_back({a.t, a.x});
    return K;
  };

  // whole support
  cands.push_back({"support", mu.total(), atoms_to_set(mu.atoms())});

  // heaviest atoms until the mass threshold is met
  std::vector<Atom> order = mu.atoms();
  std::sort(order.begin(), order.end(), [](const Atom& a, const Atom& b) { return a.w > b.w; });
  {
    std::vector<Atom> prefix;
    double m = 0.0;
    for (const Atom& a : order) {
      prefix.push_back(a);
      m += a.w;
      if (m >= lambda) break;
    }
    if (m >= lambda) cands.push_back({"top-atoms", m, atoms_to_set(prefix)});
  }

  // smallest parabolic ball around the heaviest atom that captures lambda
  {
    const Atom& heavy = order.front();
    for (int i = 0; i < 40; ++i) {
      const double r = 0.05 * std::pow(1.3, i);
      const double r2a = std::pow(r, 2.0 * alpha);
      const double t0 = heavy.t - 1.5 * r2a;
      if (t0 < 0.0) break;
      ParabolicBall B{t0, heavy.x, r};
      if (measure_of_region(mu, B, alpha) >= lambda) {
        CompactSetApprox K = CompactSetApprox::from_ball(B, alpha, mu.dim(), 8, 16);
        cands.push_back({"ball", measure_of_region(mu, B, alpha), K});
        break;
      }
    }
  }

  // atoms ranked by their Wolff potential
  {
    std::vector<std::pair<double, Atom>> ranked;
    for (const Atom& a : mu.atoms()) {
      const SpaceTimePoint at{a.t, a.x};
      const double val = variant == CapacityVariant::R ? wolff_R(mu, p, at, alpha).value
                                                       : wolff_S(mu, p, at, alpha).value;
      ranked.emplace_back(val, a);
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Atom> prefix;
    double m = 0.0;
    for (const auto& [val, a] : ranked) {
      prefix.push_back(a);
      m += a.w;
      if (m >= lambda) break;
    }
    if (m >= lambda) cands.push_back({"wolff-top", m, atoms_to_set(prefix)});
  }

  MassThresholdBracket bracket;
  for (const Candidate& c : cands) {
    const XGridSpec xg = grid_for_samples(variant, c.K.samples, alpha);
    CapacityProblem prob(variant, alpha, p, xg, c.K, controls);
    const CapacityEstimate est = prob.solve();
    bracket.candidates.emplace_back(c.label, c.mass, est.primal_value, est.dual_value);
    if (est.primal_value < bracket.upper) {
      bracket.upper = est.primal_value;
      bracket.lower = est.dual_value;
      bracket.best_candidate = c.label;
    }
  }
  return bracket;
}

}  // namespace fractrace
