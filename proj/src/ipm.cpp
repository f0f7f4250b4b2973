#include "windsched/ipm.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <vector>

namespace windsched {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kBigStep = 1e30;

// ---------------------------------------------------------------------------
// cone layout: nonnegative orthant block followed by second-order cones
// ---------------------------------------------------------------------------

struct ConeDims {
  int orth = 0;
  std::vector<int> soc;
  std::vector<int> soc_off;  // offsets into the m-vector
  int m = 0;

  void finalize() {
    soc_off.clear();
    int off = orth;
    for (int d : soc) {
      soc_off.push_back(off);
      off += d;
    }
    m = off;
  }
  int degree() const { return orth + static_cast<int>(soc.size()); }
};

double soc_residual(const double* u, int d) {  // u0^2 - |u1|^2
  double n1 = 0;
  for (int i = 1; i < d; ++i) n1 += u[i] * u[i];
  return u[0] * u[0] - n1;
}

void cone_identity(const ConeDims& dims, VectorXd& e) {
  e = VectorXd::Zero(dims.m);
  e.head(dims.orth).setOnes();
  for (size_t k = 0; k < dims.soc.size(); ++k) e[dims.soc_off[k]] = 1.0;
}

// largest t with u + t*du staying in the cone (capped)
double cone_max_step(const ConeDims& dims, const VectorXd& u, const VectorXd& du) {
  double step = kBigStep;
  for (int i = 0; i < dims.orth; ++i)
    if (du[i] < 0) step = std::min(step, -u[i] / du[i]);
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    const double c0 = std::max(0.0, soc_residual(u.data() + o, d));
    double b = u[o] * du[o];
    for (int i = 1; i < d; ++i) b -= u[o + i] * du[o + i];
    const double a = soc_residual(du.data() + o, d);
    if (c0 <= 0) {
      if (b < 0) step = 0.0;
      continue;
    }
    // smallest positive root of a t^2 + 2 b t + c0 = 0
    const double disc = b * b - a * c0;
    if (std::abs(a) < 1e-300) {
      if (b < 0) step = std::min(step, -c0 / (2 * b));
      continue;
    }
    if (disc < 0) continue;  // no boundary crossing
    const double sq = std::sqrt(disc);
    const double r1 = (-b - sq) / a, r2 = (-b + sq) / a;
    double best = kBigStep;
    if (r1 > 0) best = std::min(best, r1);
    if (r2 > 0) best = std::min(best, r2);
    step = std::min(step, best);
  }
  return step;
}

// jordan product u o v
void cone_circ(const ConeDims& dims, const VectorXd& u, const VectorXd& v,
               VectorXd& out) {
  out.resize(dims.m);
  out.head(dims.orth) = u.head(dims.orth).cwiseProduct(v.head(dims.orth));
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    double dot = 0;
    for (int i = 0; i < d; ++i) dot += u[o + i] * v[o + i];
    for (int i = 1; i < d; ++i) out[o + i] = u[o] * v[o + i] + v[o] * u[o + i];
    out[o] = dot;
  }
}

// solve lambda o out = d
void cone_circ_solve(const ConeDims& dims, const VectorXd& lambda,
                     const VectorXd& d, VectorXd& out) {
  out.resize(dims.m);
  out.head(dims.orth) =
      d.head(dims.orth).cwiseQuotient(lambda.head(dims.orth));
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], dd = dims.soc[k];
    const double jres = soc_residual(lambda.data() + o, dd);
    double l1d1 = 0;
    for (int i = 1; i < dd; ++i) l1d1 += lambda[o + i] * d[o + i];
    const double u0 = (lambda[o] * d[o] - l1d1) / jres;
    out[o] = u0;
    for (int i = 1; i < dd; ++i)
      out[o + i] = (d[o + i] - u0 * lambda[o + i]) / lambda[o];
  }
}

// ---------------------------------------------------------------------------
// Nesterov-Todd scaling
// ---------------------------------------------------------------------------

struct Scaling {
  VectorXd orth_w2;     // s/z  (W^2 diagonal)
  VectorXd orth_w2inv;  // z/s
  struct Soc {
    double eta = 1.0;
    VectorXd wbar;  // unit-hyperbolic scaling point
  };
  std::vector<Soc> socs;
  VectorXd lambda;  // W z = W^{-1} s

  static Scaling identity(const ConeDims& dims) {
    Scaling sc;
    sc.orth_w2 = VectorXd::Ones(dims.orth);
    sc.orth_w2inv = VectorXd::Ones(dims.orth);
    sc.socs.resize(dims.soc.size());
    for (size_t k = 0; k < dims.soc.size(); ++k) {
      sc.socs[k].eta = 1.0;
      sc.socs[k].wbar = VectorXd::Zero(dims.soc[k]);
      sc.socs[k].wbar[0] = 1.0;
    }
    return sc;
  }
};

bool compute_scaling(const ConeDims& dims, const VectorXd& s, const VectorXd& z,
                     Scaling& sc) {
  sc.orth_w2.resize(dims.orth);
  sc.orth_w2inv.resize(dims.orth);
  for (int i = 0; i < dims.orth; ++i) {
    if (s[i] <= 0 || z[i] <= 0) return false;
    sc.orth_w2[i] = s[i] / z[i];
    sc.orth_w2inv[i] = z[i] / s[i];
  }
  sc.socs.resize(dims.soc.size());
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    const double js = soc_residual(s.data() + o, d);
    const double jz = soc_residual(z.data() + o, d);
    if (js <= 0 || jz <= 0 || s[o] <= 0 || z[o] <= 0) return false;
    const double sqjs = std::sqrt(js), sqjz = std::sqrt(jz);
    double dot = 0;
    for (int i = 0; i < d; ++i) dot += s[o + i] * z[o + i];
    const double gamma = std::sqrt((1.0 + dot / (sqjs * sqjz)) / 2.0);
    auto& blk = sc.socs[k];
    blk.eta = std::sqrt(sqjs / sqjz);
    blk.wbar.resize(d);
    blk.wbar[0] = (s[o] / sqjs + z[o] / sqjz) / (2 * gamma);
    for (int i = 1; i < d; ++i)
      blk.wbar[i] = (s[o + i] / sqjs - z[o + i] / sqjz) / (2 * gamma);
  }
  return true;
}

// W u (symmetric scaling matrix)
void apply_W(const ConeDims& dims, const Scaling& sc, const VectorXd& u,
             VectorXd& out) {
  out.resize(dims.m);
  out.head(dims.orth) =
      u.head(dims.orth).cwiseProduct(sc.orth_w2.cwiseSqrt());
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    const auto& w = sc.socs[k].wbar;
    double w1u1 = 0;
    for (int i = 1; i < d; ++i) w1u1 += w[i] * u[o + i];
    out[o] = sc.socs[k].eta * (w[0] * u[o] + w1u1);
    const double coef = u[o] + w1u1 / (1.0 + w[0]);
    for (int i = 1; i < d; ++i)
      out[o + i] = sc.socs[k].eta * (u[o + i] + coef * w[i]);
  }
}

// W^{-1} u
void apply_Winv(const ConeDims& dims, const Scaling& sc, const VectorXd& u,
                VectorXd& out) {
  out.resize(dims.m);
  out.head(dims.orth) =
      u.head(dims.orth).cwiseProduct(sc.orth_w2inv.cwiseSqrt());
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    const auto& w = sc.socs[k].wbar;
    double w1u1 = 0;
    for (int i = 1; i < d; ++i) w1u1 += w[i] * u[o + i];
    out[o] = (w[0] * u[o] - w1u1) / sc.socs[k].eta;
    const double coef = -u[o] + w1u1 / (1.0 + w[0]);
    for (int i = 1; i < d; ++i)
      out[o + i] = (u[o + i] + coef * w[i]) / sc.socs[k].eta;
  }
}

// W^2 u = 2 wbar (wbar'u) - Jbar u, per block (eta^2 scaled)
void apply_W2(const ConeDims& dims, const Scaling& sc, const VectorXd& u,
              VectorXd& out) {
  out.resize(dims.m);
  out.head(dims.orth) = u.head(dims.orth).cwiseProduct(sc.orth_w2);
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    const auto& w = sc.socs[k].wbar;
    const double eta2 = sc.socs[k].eta * sc.socs[k].eta;
    double wu = w[0] * u[o];
    for (int i = 1; i < d; ++i) wu += w[i] * u[o + i];
    out[o] = eta2 * (2 * w[0] * wu - u[o]);
    for (int i = 1; i < d; ++i) out[o + i] = eta2 * (2 * w[i] * wu + u[o + i]);
  }
}

// W^{-2} u with vbar = (wbar0, -wbar1)
void apply_W2inv(const ConeDims& dims, const Scaling& sc, const VectorXd& u,
                 VectorXd& out) {
  out.resize(dims.m);
  out.head(dims.orth) = u.head(dims.orth).cwiseProduct(sc.orth_w2inv);
  for (size_t k = 0; k < dims.soc.size(); ++k) {
    const int o = dims.soc_off[k], d = dims.soc[k];
    const auto& w = sc.socs[k].wbar;
    const double inv_eta2 = 1.0 / (sc.socs[k].eta * sc.socs[k].eta);
    double vu = w[0] * u[o];
    for (int i = 1; i < d; ++i) vu -= w[i] * u[o + i];
    out[o] = inv_eta2 * (2 * w[0] * vu - u[o]);
    for (int i = 1; i < d; ++i)
      out[o + i] = inv_eta2 * (-2 * w[i] * vu + u[o + i]);
  }
}

// ---------------------------------------------------------------------------
// conelp core:  min c'x  s.t.  A x = b,  G x + s = h,  s in K
// ---------------------------------------------------------------------------

struct ConelpResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  VectorXd x, y, z, s;
  double pobj = 0, dobj = 0;
  int iterations = 0;
  std::string message;
};

class ConelpSolver {
 public:
  ConelpSolver(VectorXd c, SpMat A, VectorXd b, SpMat G, VectorXd h,
               ConeDims dims, const SolveOptions& opts)
      : c_(std::move(c)),
        A_(std::move(A)),
        b_(std::move(b)),
        G_(std::move(G)),
        h_(std::move(h)),
        dims_(std::move(dims)),
        opts_(opts),
        n_(static_cast<int>(c_.size())),
        p_(static_cast<int>(b_.size())),
        m_(dims_.m) {
    GR_ = G_;  // row-major copy for per-row scaling work
    GT_ = SpMat(G_.transpose());
    AT_ = SpMat(A_.transpose());
    cnorm_ = c_.size() ? c_.lpNorm<Eigen::Infinity>() : 0.0;
    bnorm_ = b_.size() ? b_.lpNorm<Eigen::Infinity>() : 0.0;
    hnorm_ = h_.size() ? h_.lpNorm<Eigen::Infinity>() : 0.0;
  }

  ConelpResult solve();

 private:
  void factor(const Scaling& sc);
  void kkt_solve(const Scaling& sc, const VectorXd& bx, const VectorXd& by,
                 const VectorXd& bz, VectorXd& dx, VectorXd& dy, VectorXd& dz,
                 bool refine) const;

  VectorXd c_;
  SpMat A_;
  VectorXd b_;
  SpMat G_;
  VectorXd h_;
  ConeDims dims_;
  SolveOptions opts_;
  int n_, p_, m_;

  Eigen::SparseMatrix<double, Eigen::RowMajor> GR_;
  SpMat GT_, AT_;
  double cnorm_, bnorm_, hnorm_;

  Eigen::PartialPivLU<MatrixXd> lu_;
  double reg_ = 0.0;
};

void ConelpSolver::factor(const Scaling& sc) {
  // W^{-2} G assembled by scaling orthant rows and mixing SOC blocks
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(G_.nonZeros()) * 2);
  for (int r = 0; r < dims_.orth; ++r)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(GR_, r);
         it; ++it)
      trips.emplace_back(r, static_cast<int>(it.col()),
                         sc.orth_w2inv[r] * it.value());
  std::vector<std::pair<int, double>> acc;
  for (size_t k = 0; k < dims_.soc.size(); ++k) {
    const int o = dims_.soc_off[k], d = dims_.soc[k];
    const auto& w = sc.socs[k].wbar;
    const double inv_eta2 = 1.0 / (sc.socs[k].eta * sc.socs[k].eta);
    // vbar' B, vbar = (w0, -w1)
    acc.clear();
    for (int j = 0; j < d; ++j) {
      const double vj = (j == 0) ? w[0] : -w[j];
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(GR_,
                                                                          o + j);
           it; ++it)
        acc.emplace_back(static_cast<int>(it.col()), vj * it.value());
    }
    for (int j = 0; j < d; ++j) {
      const double vj = (j == 0) ? w[0] : -w[j];
      for (const auto& [col, val] : acc)
        trips.emplace_back(o + j, col, inv_eta2 * 2.0 * vj * val);
      const double sign = (j == 0) ? -1.0 : 1.0;  // -Jbar part
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(GR_,
                                                                          o + j);
           it; ++it)
        trips.emplace_back(o + j, static_cast<int>(it.col()),
                           inv_eta2 * sign * it.value());
    }
  }
  SpMat w2inv_g(m_, n_);
  w2inv_g.setFromTriplets(trips.begin(), trips.end());
  SpMat hsys = GT_ * w2inv_g;

  MatrixXd kkt = MatrixXd::Zero(n_ + p_, n_ + p_);
  kkt.topLeftCorner(n_, n_) = MatrixXd(hsys);
  if (p_ > 0) {
    kkt.topRightCorner(n_, p_) = MatrixXd(AT_);
    kkt.bottomLeftCorner(p_, n_) = MatrixXd(A_);
  }
  // static regularization keeps the LU factorization well-posed
  reg_ = 1e-11 * std::max(1.0, kkt.topLeftCorner(n_, n_).diagonal().cwiseAbs().maxCoeff());
  kkt.topLeftCorner(n_, n_).diagonal().array() += reg_;
  kkt.bottomRightCorner(p_, p_).diagonal().array() -= reg_;
  lu_.compute(kkt);
}

void ConelpSolver::kkt_solve(const Scaling& sc, const VectorXd& bx,
                             const VectorXd& by, const VectorXd& bz,
                             VectorXd& dx, VectorXd& dy, VectorXd& dz,
                             bool refine) const {
  VectorXd w(m_);
  apply_W2inv(dims_, sc, bz, w);
  VectorXd rhs(n_ + p_);
  rhs.head(n_) = bx + GT_ * w;
  rhs.tail(p_) = by;
  VectorXd sol = lu_.solve(rhs);
  dx = sol.head(n_);
  dy = sol.tail(p_);
  VectorXd gdx = G_ * dx;
  apply_W2inv(dims_, sc, gdx - bz, dz);

  if (!refine) return;
  for (int pass = 0; pass < 2; ++pass) {
    VectorXd w2dz(m_);
    apply_W2(dims_, sc, dz, w2dz);
    VectorXd r1 = bx - (AT_ * dy + GT_ * dz);
    VectorXd r2 = by - A_ * dx;
    VectorXd r3 = bz - (G_ * dx - w2dz);
    const double res = std::max({r1.size() ? r1.lpNorm<Eigen::Infinity>() : 0.0,
                                 r2.size() ? r2.lpNorm<Eigen::Infinity>() : 0.0,
                                 r3.size() ? r3.lpNorm<Eigen::Infinity>() : 0.0});
    const double scale = std::max(
        {1.0, bx.size() ? bx.lpNorm<Eigen::Infinity>() : 0.0,
         by.size() ? by.lpNorm<Eigen::Infinity>() : 0.0,
         bz.size() ? bz.lpNorm<Eigen::Infinity>() : 0.0});
    if (res <= 1e-13 * scale) break;
    VectorXd ex, ey, ez;
    kkt_solve(sc, r1, r2, r3, ex, ey, ez, false);
    dx += ex;
    dy += ey;
    dz += ez;
  }
}

ConelpResult ConelpSolver::solve() {
  ConelpResult res;
  bool numerical_failure = false;
  VectorXd e;
  cone_identity(dims_, e);
  const int degree = dims_.degree() + 1;

  // --- initialization: least-norm primal/dual points shifted into the cone
  Scaling sc = Scaling::identity(dims_);
  factor(sc);
  VectorXd x, y, z, s;
  auto min_eig = [&](const VectorXd& u) {
    double me = std::numeric_limits<double>::infinity();
    for (int i = 0; i < dims_.orth; ++i) me = std::min(me, u[i]);
    for (size_t k = 0; k < dims_.soc.size(); ++k) {
      const int o = dims_.soc_off[k], d = dims_.soc[k];
      double n1 = 0;
      for (int i = 1; i < d; ++i) n1 += u[o + i] * u[o + i];
      me = std::min(me, u[o] - std::sqrt(n1));
    }
    return me;
  };
  {
    VectorXd dx, dy, dz;
    kkt_solve(sc, VectorXd::Zero(n_), b_, h_, dx, dy, dz, true);
    x = dx;
    s = -dz;  // h - G x
    const double me_s = min_eig(s);
    if (me_s <= 0) s += (1.0 - me_s) * e;

    kkt_solve(sc, -c_, VectorXd::Zero(p_), VectorXd::Zero(m_), dx, dy, dz, true);
    y = dy;
    z = dz;
    const double me_z = min_eig(z);
    if (me_z <= 0) z += (1.0 - me_z) * e;
  }
  double tau = 1.0, kappa = 1.0;

  VectorXd rx(n_), ry(p_), rz(m_);
  VectorXd dx1, dy1, dz1, dx2, dy2, dz2;
  VectorXd lam_sq(m_), ds(m_), vtmp(m_), wdz(m_), winvds(m_), corr(m_);

  for (int iter = 0; iter < opts_.max_iter; ++iter) {
    rx = AT_ * y + GT_ * z + c_ * tau;
    ry = A_ * x - b_ * tau;
    rz = G_ * x + s - h_ * tau;
    const double cx = c_.dot(x), by = b_.dot(y), hz = h_.dot(z);
    const double rt = kappa + cx + by + hz;
    const double gap = s.dot(z);
    const double mu = (gap + tau * kappa) / degree;

    const double pcost = cx / tau;
    const double dcost = -(by + hz) / tau;
    const double pres =
        std::max(p_ ? ry.lpNorm<Eigen::Infinity>() / (1 + bnorm_) : 0.0,
                 rz.lpNorm<Eigen::Infinity>() / (1 + hnorm_)) /
        tau;
    const double dres = rx.lpNorm<Eigen::Infinity>() / (1 + cnorm_) / tau;
    const double den = std::max({1.0, std::abs(pcost), std::abs(dcost)});
    const double relgap = gap / (tau * tau) / den;

    if (opts_.verbose)
      std::cerr << "iter " << iter << " pcost " << pcost << " pres " << pres
                << " dres " << dres << " relgap " << relgap << " tau " << tau
                << " kappa " << kappa << "\n";

    res.iterations = iter;
    if (pres <= opts_.feastol && dres <= opts_.feastol && relgap <= opts_.tol) {
      res.status = SolveStatus::Optimal;
      res.x = x / tau;
      res.y = y / tau;
      res.z = z / tau;
      res.s = s / tau;
      res.pobj = pcost;
      res.dobj = dcost;
      return res;
    }
    // infeasibility certificates
    if (by + hz < 0) {
      const double scale = -1.0 / (by + hz);
      const double cert =
          (AT_ * y + GT_ * z).lpNorm<Eigen::Infinity>() * scale / (1 + cnorm_);
      if (cert <= opts_.feastol) {
        res.status = SolveStatus::Infeasible;
        res.y = y * scale;
        res.z = z * scale;
        res.message = "primal infeasibility certificate";
        return res;
      }
    }
    if (cx < 0) {
      const double scale = -1.0 / cx;
      const double cert = std::max(
          p_ ? (A_ * x).lpNorm<Eigen::Infinity>() * scale / (1 + bnorm_) : 0.0,
          (G_ * x + s).lpNorm<Eigen::Infinity>() * scale / (1 + hnorm_));
      if (cert <= opts_.feastol) {
        res.status = SolveStatus::Unbounded;
        res.x = x * scale;
        res.message = "dual infeasibility certificate";
        return res;
      }
    }

    if (!compute_scaling(dims_, s, z, sc)) {
      numerical_failure = true;
      res.message = "iterate left the cone interior";
      break;
    }
    apply_W(dims_, sc, z, sc.lambda);
    factor(sc);

    // u1 = K^{-1} (-c, b, h), shared by both passes
    kkt_solve(sc, -c_, b_, h_, dx1, dy1, dz1, true);
    const double cbh_u1 = c_.dot(dx1) + b_.dot(dy1) + h_.dot(dz1);

    auto direction = [&](const VectorXd& d_s, double d_kappa, double sigma,
                         VectorXd& ox, VectorXd& oy, VectorXd& oz, VectorXd& os,
                         double& otau, double& okappa) {
      cone_circ_solve(dims_, sc.lambda, d_s, vtmp);
      VectorXd wv(m_);
      apply_W(dims_, sc, vtmp, wv);
      const double f = 1.0 - sigma;
      // z-row: G dx - W^2 dz - h dtau = -(1-sigma) rz + W (lambda \ d_s)
      kkt_solve(sc, -f * rx, -f * ry, -f * rz + wv, dx2, dy2, dz2, true);
      const double cbh_u2 = c_.dot(dx2) + b_.dot(dy2) + h_.dot(dz2);
      const double numer = -f * rt + d_kappa / tau - cbh_u2;
      const double denom = cbh_u1 - kappa / tau;
      otau = numer / denom;
      ox = dx2 + otau * dx1;
      oy = dy2 + otau * dy1;
      oz = dz2 + otau * dz1;
      // ds = -W(lambda \ d_s) - W^2 dz
      VectorXd w2dz(m_);
      apply_W2(dims_, sc, oz, w2dz);
      os = -wv - w2dz;
      okappa = -(d_kappa + kappa * otau) / tau;
    };

    // affine pass
    cone_circ(dims_, sc.lambda, sc.lambda, lam_sq);
    VectorXd ax, ay, az, as;
    double atau, akappa;
    direction(lam_sq, tau * kappa, 0.0, ax, ay, az, as, atau, akappa);

    double alpha = cone_max_step(dims_, s, as);
    alpha = std::min(alpha, cone_max_step(dims_, z, az));
    if (atau < 0) alpha = std::min(alpha, -tau / atau);
    if (akappa < 0) alpha = std::min(alpha, -kappa / akappa);
    const double alpha_aff = std::min(1.0, alpha);
    const double mu_aff =
        ((s + alpha_aff * as).dot(z + alpha_aff * az) +
         (tau + alpha_aff * atau) * (kappa + alpha_aff * akappa)) /
        degree;
    double sigma = std::pow(std::max(0.0, mu_aff / mu), 3);
    sigma = std::min(1.0, sigma);

    // combined pass with Mehrotra correction
    apply_Winv(dims_, sc, as, winvds);
    apply_W(dims_, sc, az, wdz);
    cone_circ(dims_, winvds, wdz, corr);
    ds = lam_sq + corr - sigma * mu * e;
    const double dk = tau * kappa + atau * akappa - sigma * mu;
    VectorXd fx, fy, fz, fs;
    double ftau, fkappa;
    direction(ds, dk, sigma, fx, fy, fz, fs, ftau, fkappa);

    alpha = cone_max_step(dims_, s, fs);
    alpha = std::min(alpha, cone_max_step(dims_, z, fz));
    if (ftau < 0) alpha = std::min(alpha, -tau / ftau);
    if (fkappa < 0) alpha = std::min(alpha, -kappa / fkappa);
    alpha = std::min(1.0, 0.99 * alpha);
    if (alpha < 1e-11) {
      numerical_failure = true;
      res.message = "step length collapsed";
      break;
    }

    x += alpha * fx;
    y += alpha * fy;
    z += alpha * fz;
    s += alpha * fs;
    tau += alpha * ftau;
    kappa += alpha * fkappa;
    res.iterations = iter + 1;
  }

  res.status = numerical_failure ? SolveStatus::NumericalFailure
                                 : SolveStatus::IterationLimit;
  res.x = x / tau;
  res.y = y / tau;
  res.z = z / tau;
  res.s = s / tau;
  res.pobj = c_.dot(x) / tau;
  res.dobj = -(b_.dot(y) + h_.dot(z)) / tau;
  if (res.message.empty()) res.message = "iteration limit reached";
  return res;
}

// ---------------------------------------------------------------------------
// ConicProgram -> conelp conversion (presolve + cone assembly)
// ---------------------------------------------------------------------------

struct Conversion {
  VectorXd c;
  SpMat A, G;
  VectorXd b, h;
  ConeDims dims;
  double obj_const = 0.0;
  std::vector<int> var_map;           // original var -> internal index or -1
  std::vector<double> fixed_value;    // original var -> value when fixed
  std::vector<int> eq_map;            // original eq -> internal row or -1
  std::vector<double> eq_scale;       // internal eq row scaling
  std::vector<int> ineq_row;          // original ineq -> orthant row
  std::vector<double> ineq_scale;     // per orthant row scaling
  bool trivially_infeasible = false;
  std::string infeas_reason;
};

Conversion convert(const ConicProgram& prog) {
  Conversion cv;
  const int n0 = prog.num_vars();
  cv.var_map.assign(n0, -1);
  cv.fixed_value.assign(n0, 0.0);
  int n = 0;
  for (int v = 0; v < n0; ++v) {
    const double lo = prog.lower_bounds()[v], hi = prog.upper_bounds()[v];
    if (lo == hi) {
      cv.fixed_value[v] = lo;
    } else {
      cv.var_map[v] = n++;
    }
  }
  cv.c = VectorXd::Zero(n);
  cv.obj_const = prog.objective_constant();
  for (int v = 0; v < n0; ++v) {
    if (cv.var_map[v] >= 0)
      cv.c[cv.var_map[v]] = prog.objective()[v];
    else
      cv.obj_const += prog.objective()[v] * cv.fixed_value[v];
  }

  auto reduce = [&](const LinExpr& e, std::vector<Triplet>& trips, int row,
                    double& shift, double scale) {
    for (const auto& t : e) {
      if (cv.var_map[t.var] >= 0)
        trips.emplace_back(row, cv.var_map[t.var], scale * t.coef);
      else
        shift += t.coef * cv.fixed_value[t.var];
    }
  };
  auto expr_norm = [&](const LinExpr& e) {
    double nrm = 0;
    for (const auto& t : e)
      if (cv.var_map[t.var] >= 0) nrm = std::max(nrm, std::abs(t.coef));
    return nrm;
  };

  // equalities
  std::vector<Triplet> atrips;
  std::vector<double> brhs;
  cv.eq_map.assign(prog.num_eq(), -1);
  for (int r = 0; r < prog.num_eq(); ++r) {
    const double nrm = expr_norm(prog.eq_rows()[r]);
    if (nrm == 0.0) {
      double shift = 0;
      std::vector<Triplet> dummy;
      reduce(prog.eq_rows()[r], dummy, 0, shift, 1.0);
      if (std::abs(shift - prog.eq_rhs()[r]) > 1e-9 * std::max(1.0, std::abs(prog.eq_rhs()[r]))) {
        cv.trivially_infeasible = true;
        cv.infeas_reason = "equality '" + prog.eq_name(r) + "' unsatisfiable after fixing";
      }
      continue;
    }
    const double scale = 1.0 / std::max(1.0, nrm);
    double shift = 0;
    const int row = static_cast<int>(brhs.size());
    reduce(prog.eq_rows()[r], atrips, row, shift, scale);
    brhs.push_back(scale * (prog.eq_rhs()[r] - shift));
    cv.eq_map[r] = row;
    cv.eq_scale.push_back(scale);
  }

  // orthant rows: user inequalities then finite bounds
  std::vector<Triplet> gtrips;
  std::vector<double> hrhs;
  cv.ineq_row.assign(prog.num_ineq(), -1);
  for (int r = 0; r < prog.num_ineq(); ++r) {
    const double nrm = expr_norm(prog.ineq_rows()[r]);
    double shift = 0;
    if (nrm == 0.0) {
      std::vector<Triplet> dummy;
      reduce(prog.ineq_rows()[r], dummy, 0, shift, 1.0);
      if (shift > prog.ineq_rhs()[r] + 1e-9 * std::max(1.0, std::abs(prog.ineq_rhs()[r]))) {
        cv.trivially_infeasible = true;
        cv.infeas_reason = "inequality '" + prog.ineq_name(r) + "' unsatisfiable after fixing";
      }
      continue;
    }
    const double scale = 1.0 / std::max(1.0, nrm);
    const int row = static_cast<int>(hrhs.size());
    reduce(prog.ineq_rows()[r], gtrips, row, shift, scale);
    hrhs.push_back(scale * (prog.ineq_rhs()[r] - shift));
    cv.ineq_row[r] = row;
    cv.ineq_scale.push_back(scale);
  }
  for (int v = 0; v < n0; ++v) {
    if (cv.var_map[v] < 0) continue;
    const double lo = prog.lower_bounds()[v], hi = prog.upper_bounds()[v];
    if (hi < kInf) {
      gtrips.emplace_back(static_cast<int>(hrhs.size()), cv.var_map[v], 1.0);
      hrhs.push_back(hi);
    }
    if (lo > -kInf) {
      gtrips.emplace_back(static_cast<int>(hrhs.size()), cv.var_map[v], -1.0);
      hrhs.push_back(-lo);
    }
  }
  if (hrhs.empty() && prog.socs().empty()) {
    // keep the cone nonempty so the embedding is well-posed
    hrhs.push_back(1.0);
  }
  cv.dims.orth = static_cast<int>(hrhs.size());

  // second-order cones: s0 = rhs row, s1.. = norm rows
  for (const auto& soc : prog.socs()) {
    double block_nrm = expr_norm(soc.rhs_expr);
    for (const auto& row : soc.norm_rows) block_nrm = std::max(block_nrm, expr_norm(row));
    const double scale = 1.0 / std::max(1.0, block_nrm);
    int row = static_cast<int>(hrhs.size());
    double shift = 0;
    for (const auto& t : soc.rhs_expr)
      if (cv.var_map[t.var] >= 0)
        gtrips.emplace_back(row, cv.var_map[t.var], -scale * t.coef);
      else
        shift += t.coef * cv.fixed_value[t.var];
    hrhs.push_back(scale * (soc.rhs_const + shift));
    for (size_t i = 0; i < soc.norm_rows.size(); ++i) {
      row = static_cast<int>(hrhs.size());
      shift = 0;
      for (const auto& t : soc.norm_rows[i])
        if (cv.var_map[t.var] >= 0)
          gtrips.emplace_back(row, cv.var_map[t.var], -scale * t.coef);
        else
          shift += t.coef * cv.fixed_value[t.var];
      hrhs.push_back(scale * (soc.norm_consts[i] + shift));
    }
    cv.dims.soc.push_back(static_cast<int>(soc.norm_rows.size()) + 1);
  }
  cv.dims.finalize();

  cv.A = SpMat(static_cast<int>(brhs.size()), n);
  cv.A.setFromTriplets(atrips.begin(), atrips.end());
  cv.b = VectorXd::Zero(static_cast<int>(brhs.size()));
  for (size_t i = 0; i < brhs.size(); ++i) cv.b[static_cast<int>(i)] = brhs[i];
  cv.G = SpMat(static_cast<int>(hrhs.size()), n);
  cv.G.setFromTriplets(gtrips.begin(), gtrips.end());
  cv.h = VectorXd::Zero(static_cast<int>(hrhs.size()));
  for (size_t i = 0; i < hrhs.size(); ++i) cv.h[static_cast<int>(i)] = hrhs[i];
  return cv;
}

}  // namespace

Solution solve_convex(const ConicProgram& prog, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  prog.validate();
  Solution out;
  Conversion cv = convert(prog);
  const int n0 = prog.num_vars();

  auto finish = [&](Solution& sol) {
    sol.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
  };

  if (cv.trivially_infeasible) {
    out.status = SolveStatus::Infeasible;
    out.message = cv.infeas_reason;
    return finish(out);
  }

  if (cv.c.size() == 0) {
    // every variable fixed; evaluate feasibility directly
    VectorXd x(n0);
    for (int v = 0; v < n0; ++v) x[v] = cv.fixed_value[v];
    const auto rep = check_solution(prog, x);
    out.x = x;
    out.objective = prog.objective().dot(x) + prog.objective_constant();
    out.eq_duals = VectorXd::Zero(prog.num_eq());
    out.ineq_duals = VectorXd::Zero(prog.num_ineq());
    out.status = rep.max_violation() <= 1e-7 ? SolveStatus::Optimal
                                             : SolveStatus::Infeasible;
    if (out.status == SolveStatus::Infeasible)
      out.message = "fixed point violates '" + rep.worst.name + "'";
    return finish(out);
  }

  ConelpSolver solver(cv.c, cv.A, cv.b, cv.G, cv.h, cv.dims, opts);
  ConelpResult r = solver.solve();
  out.status = r.status;
  out.iterations = r.iterations;
  out.message = r.message;

  if (r.x.size() > 0) {
    VectorXd x(n0);
    for (int v = 0; v < n0; ++v)
      x[v] = cv.var_map[v] >= 0 ? r.x[cv.var_map[v]] : cv.fixed_value[v];
    out.x = x;
    out.objective = prog.objective().dot(x) + prog.objective_constant();
  }
  if (r.status == SolveStatus::Optimal || r.status == SolveStatus::IterationLimit) {
    out.eq_duals = VectorXd::Zero(prog.num_eq());
    for (int rr = 0; rr < prog.num_eq(); ++rr)
      if (cv.eq_map[rr] >= 0)
        out.eq_duals[rr] = r.y[cv.eq_map[rr]] * cv.eq_scale[cv.eq_map[rr]];
    out.ineq_duals = VectorXd::Zero(prog.num_ineq());
    for (int rr = 0; rr < prog.num_ineq(); ++rr)
      if (cv.ineq_row[rr] >= 0)
        out.ineq_duals[rr] = r.z[cv.ineq_row[rr]] * cv.ineq_scale[cv.ineq_row[rr]];
  }
  return finish(out);
}

}  // namespace windsched
