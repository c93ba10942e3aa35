// Copyright 2026 The qfitn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qfitn/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace qfitn::sdp {

const char* to_string(SdpStatus s) { return s == SdpStatus::converged ? "converged" : "max_iters"; }

namespace {

Mat pt(const Mat& m, int d_out, int d_in) { return transpose_second(m, d_out, d_in); }

Mat lift(const Mat& lambda, int d_out) { return kron(Mat::Identity(d_out, d_out), lambda); }

struct Certificate {
  Mat c;
  Mat lambda;
  Mat w;
  double primal = 0.0;
  double gap = 0.0;
};

// Mix an affine-feasible C toward I/d_out until it is PSD (and PPT when asked).
Mat repair_positivity(Mat c, int d_out, int d_in, bool ppt) {
  double m = min_eigenvalue(c);
  if (ppt) m = std::min(m, min_eigenvalue(pt(c, d_out, d_in)));
  if (m < 0.0) {
    const double floor = 1.0 / d_out;
    const double tau = -m / (floor - m);
    const auto n = c.rows();
    c = (1.0 - tau) * c + (tau / d_out) * Mat::Identity(n, n);
  }
  return c;
}

Certificate certify(const Mat& a, Mat c, Mat lambda, Mat w, int d_out, int d_in) {
  Certificate out;
  Mat lhs = a - lift(lambda, d_out);
  if (w.size() > 0) lhs += pt(w, d_out, d_in);
  lambda += max_eigenvalue(hermitian_part(lhs)) * Mat::Identity(d_in, d_in);
  out.primal = trace_product(c, a).real();
  out.gap = lambda.trace().real() - out.primal;
  out.c = std::move(c);
  out.lambda = std::move(lambda);
  out.w = std::move(w);
  return out;
}

SdpSolution trivial_solution(int d_out, int d_in, bool ppt) {
  const int n = d_out * d_in;
  SdpSolution s;
  s.C_star = {Mat::Identity(n, n) / static_cast<double>(d_out), d_out, d_in};
  s.dual_Lambda = Mat::Zero(d_in, d_in);
  if (ppt) s.dual_W = Mat::Zero(n, n);
  s.status = SdpStatus::converged;
  return s;
}

SdpSolution to_solution(const Certificate& cert, double scale, int d_out, int d_in, int iters, bool ok) {
  SdpSolution s;
  s.C_star = {cert.c, d_out, d_in};
  s.primal_value = cert.primal * scale;
  s.dual_Lambda = cert.lambda * scale;
  if (cert.w.size() > 0) s.dual_W = cert.w * scale;
  s.gap = cert.gap * scale;
  s.iterations = iters;
  s.status = ok ? SdpStatus::converged : SdpStatus::max_iters;
  return s;
}

double spectral_scale(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(es.eigenvalues().size() - 1)));
}

// ---------------------------------------------------------------------------
// Operator splitting

Certificate splitting_solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts, double tol, int& iters,
                            bool& ok) {
  const int n = d_out * d_in;
  const bool ppt = opts.ppt;
  const Mat eye = Mat::Identity(n, n);
  auto project_affine = [&](const Mat& m) {
    const Mat excess = trace_first(m, d_out, d_in) - Mat::Identity(d_in, d_in);
    return Mat(m - lift(excess, d_out) / static_cast<double>(d_out));
  };

  double rho = opts.rho;
  Mat c = eye / static_cast<double>(d_out);
  Mat z1 = c, u1 = Mat::Zero(n, n);
  Mat z2 = pt(c, d_out, d_in), u2 = Mat::Zero(n, n);
  Certificate best;
  best.gap = std::numeric_limits<double>::infinity();
  constexpr int kCheckEvery = 10;
  ok = false;
  iters = 0;

  for (int k = 1; k <= opts.max_iters; ++k) {
    iters = k;
    Mat target = z1 - u1 + a / rho;
    if (ppt) target = (z1 - u1 + pt(z2 - u2, d_out, d_in) + a / rho) / 2.0;
    c = hermitian_part(project_affine(target));

    const Mat z1_old = z1;
    z1 = psd_projection(c + u1);
    u1 += c - z1;
    double r2 = (c - z1).squaredNorm();
    double s2 = (z1 - z1_old).squaredNorm();
    if (ppt) {
      const Mat ct = pt(c, d_out, d_in);
      const Mat z2_old = z2;
      z2 = psd_projection(ct + u2);
      u2 += ct - z2;
      r2 += (ct - z2).squaredNorm();
      s2 += (z2 - z2_old).squaredNorm();
    }
    const double r = std::sqrt(r2);
    const double s = rho * std::sqrt(s2);

    if (k % kCheckEvery == 0 || k == opts.max_iters) {
      Mat lambda_src = a - rho * u1;
      Mat w;
      if (ppt) {
        lambda_src -= rho * pt(u2, d_out, d_in);
        w = psd_projection(hermitian_part(-rho * u2));
      }
      const Mat lambda = hermitian_part(trace_first(lambda_src, d_out, d_in)) / static_cast<double>(d_out);
      Certificate cert = certify(a, repair_positivity(c, d_out, d_in, ppt), lambda, w, d_out, d_in);
      if (cert.gap < best.gap) best = std::move(cert);
      if (r <= tol && s <= tol && best.gap <= tol) {
        ok = true;
        break;
      }
      if (r > 10.0 * s) {
        rho *= 2.0;
        u1 /= 2.0;
        u2 /= 2.0;
      } else if (s > 10.0 * r) {
        rho /= 2.0;
        u1 *= 2.0;
        u2 *= 2.0;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Primal-dual interior point
//
// Standard form over block-diagonal Hermitian X = diag(X_b):
//   min sum_b <K_b, X_b>  s.t.  sum_b <A_pb, X_b> = rhs_p,  X_b >= 0
//   max rhs . y           s.t.  Z_b = K_b - sum_p y_p A_pb >= 0
// with <P, Q> = Re Tr(P Q).

// Orthonormal basis of k x k Hermitian matrices.
std::vector<Mat> hermitian_basis(int k) {
  std::vector<Mat> basis;
  basis.reserve(k * k);
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) {
    Mat e = Mat::Zero(k, k);
    e(i, i) = 1.0;
    basis.push_back(e);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      Mat s = Mat::Zero(k, k);
      s(i, j) = r;
      s(j, i) = r;
      basis.push_back(s);
      Mat t = Mat::Zero(k, k);
      t(i, j) = cplx(0, r);
      t(j, i) = cplx(0, -r);
      basis.push_back(t);
    }
  return basis;
}

// The interior-point core is templated on the real type so that solves that
// stall in double precision can be repeated in long double.
template <class R>
using CMat = Eigen::Matrix<std::complex<R>, Eigen::Dynamic, Eigen::Dynamic>;
template <class R>
using RVecT = Eigen::Matrix<R, Eigen::Dynamic, 1>;

template <class R>
CMat<R> herm(const CMat<R>& m) {
  return (m + m.adjoint()) / R(2);
}

// Constraint matrices are sparse (basis elements and their lifts), stored as
// entry lists per constraint and block.
template <class R>
struct Entry {
  int row;
  int col;
  std::complex<R> value;
};

template <class R>
struct BlockProblem {
  std::vector<CMat<R>> cost;                          // K_b
  std::vector<std::vector<std::vector<Entry<R>>>> a;  // a[p][b]
  RVecT<R> rhs;

  int blocks() const { return static_cast<int>(cost.size()); }
  int constraints() const { return static_cast<int>(a.size()); }
};

template <class R>
std::vector<Entry<R>> entries_of(const Mat& m) {
  std::vector<Entry<R>> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != cplx(0.0))
        out.push_back({static_cast<int>(r), static_cast<int>(c),
                       std::complex<R>(static_cast<R>(m(r, c).real()), static_cast<R>(m(r, c).imag()))});
  return out;
}

// Re Tr(A_p P) for Hermitian A_p.
template <class R>
R inner(const std::vector<Entry<R>>& ap, const CMat<R>& p) {
  std::complex<R> acc = 0;
  for (const auto& e : ap) acc += e.value * p(e.col, e.row);
  return acc.real();
}

template <class R>
R inner(const CMat<R>& p, const CMat<R>& q) {
  return (p.transpose().cwiseProduct(q)).sum().real();
}

template <class R>
RVecT<R> apply_constraints(const BlockProblem<R>& pr, const std::vector<CMat<R>>& x) {
  RVecT<R> out = RVecT<R>::Zero(pr.constraints());
  for (int p = 0; p < pr.constraints(); ++p)
    for (int b = 0; b < pr.blocks(); ++b) out(p) += inner(pr.a[p][b], x[b]);
  return out;
}

template <class R>
std::vector<CMat<R>> adjoint_constraints(const BlockProblem<R>& pr, const RVecT<R>& y) {
  std::vector<CMat<R>> out;
  for (const auto& k : pr.cost) out.push_back(CMat<R>::Zero(k.rows(), k.cols()));
  for (int p = 0; p < pr.constraints(); ++p)
    for (int b = 0; b < pr.blocks(); ++b)
      for (const auto& e : pr.a[p][b]) out[b](e.row, e.col) += y(p) * e.value;
  return out;
}

// Largest alpha with x + alpha * dx >= 0 (infinity when unbounded).
template <class R>
R max_step(const CMat<R>& x, const CMat<R>& dx) {
  Eigen::LLT<CMat<R>> llt(x);
  if (llt.info() != Eigen::Success) return R(0);
  const auto n = x.rows();
  const CMat<R> linv = llt.matrixL().solve(CMat<R>::Identity(n, n));
  Eigen::SelfAdjointEigenSolver<CMat<R>> es(herm<R>(linv * dx * linv.adjoint()), Eigen::EigenvaluesOnly);
  const R lmin = es.eigenvalues()(0);
  return lmin >= R(0) ? std::numeric_limits<R>::infinity() : R(-1) / lmin;
}

template <class R>
struct PdState {
  std::vector<CMat<R>> x, z;
  RVecT<R> y;
};

// Once the surrogate gap <X, Z> drops below `near`, every iterate is offered
// to `done`, which returns true to stop. Near the optimum the Schur system is
// ill-conditioned and primal feasibility drifts, so the caller certifies
// iterates itself rather than trusting the residuals. Also stops at the
// first numerical breakdown.
template <class R, class Done>
void pd_solve(const BlockProblem<R>& pr, PdState<R>& st, double near, int max_iters, int& iters, Done&& done) {
  using M = CMat<R>;
  using V = RVecT<R>;
  const int nb = pr.blocks();
  const int m = pr.constraints();
  int dim_total = 0;
  for (const auto& k : pr.cost) dim_total += static_cast<int>(k.rows());
  st.x.clear();
  st.z.clear();
  for (const auto& k : pr.cost) {
    st.x.push_back(M::Identity(k.rows(), k.cols()));
    st.z.push_back(M::Identity(k.rows(), k.cols()));
  }
  st.y = V::Zero(m);
  const R tau = R(0.98);
  constexpr int kRefinements = 2;

  iters = 0;
  for (; iters < max_iters; ++iters) {
    const V rp = pr.rhs - apply_constraints(pr, st.x);
    const auto aty = adjoint_constraints(pr, st.y);
    std::vector<M> rd(nb);
    R gap = 0;
    for (int b = 0; b < nb; ++b) {
      rd[b] = pr.cost[b] - aty[b] - st.z[b];
      gap += inner<R>(st.x[b], st.z[b]);
    }
    if (gap < near && done(st)) return;
    const R mu = gap / dim_total;

    std::vector<M> zinv(nb);
    for (int b = 0; b < nb; ++b) {
      Eigen::LLT<M> llt(st.z[b]);
      if (llt.info() != Eigen::Success) return;
      zinv[b] = herm<R>(llt.solve(M::Identity(st.z[b].rows(), st.z[b].cols())));
    }

    // Schur complement M_pq = sum_b Re Tr(A_pb X_b A_qb Z_b^{-1})
    //                       = sum Re A_p[i,j] X[j,k] A_q[k,l] Zinv[l,i].
    Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic> schur =
        Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
    for (int b = 0; b < nb; ++b)
      for (int p = 0; p < m; ++p)
        for (const auto& ep : pr.a[p][b])
          for (int q = p; q < m; ++q) {
            std::complex<R> acc = 0;
            for (const auto& eq : pr.a[q][b])
              acc += st.x[b](ep.col, eq.row) * eq.value * zinv[b](eq.col, ep.row);
            schur(p, q) += (ep.value * acc).real();
          }
    schur.template triangularView<Eigen::StrictlyLower>() = schur.transpose();
    const Eigen::LDLT<Eigen::Matrix<R, Eigen::Dynamic, Eigen::Dynamic>> ldlt(schur);
    if (ldlt.info() != Eigen::Success) return;

    // HKM direction for complementarity target rc: dX = rc - sym(X dZ Z^{-1}).
    auto direction = [&](const std::vector<M>& rc, std::vector<M>& dx, std::vector<M>& dz, V& dy) {
      std::vector<M> t(nb);
      for (int b = 0; b < nb; ++b) t[b] = rc[b] + st.x[b] * rd[b] * zinv[b];
      dy = ldlt.solve(V(rp - apply_constraints(pr, t)));
      dx.assign(nb, M());
      dz.assign(nb, M());
      // A(dX) = rp - A(t) + M dy; iterative refinement with the same factorization
      // repairs the roundoff of the ill-conditioned Schur solve.
      for (int refine = 0;; ++refine) {
        const auto ady = adjoint_constraints(pr, dy);
        for (int b = 0; b < nb; ++b) {
          dz[b] = herm<R>(rd[b] - ady[b]);
          dx[b] = herm<R>(rc[b] - st.x[b] * dz[b] * zinv[b]);
        }
        if (refine == kRefinements) break;
        dy += ldlt.solve(V(rp - apply_constraints(pr, dx)));
      }
    };
    auto steps = [&](const std::vector<M>& dx, const std::vector<M>& dz) {
      R ap = std::numeric_limits<R>::infinity(), ad = ap;
      for (int b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step<R>(st.x[b], dx[b]));
        ad = std::min(ad, max_step<R>(st.z[b], dz[b]));
      }
      return std::make_pair(std::min(R(1), tau * ap), std::min(R(1), tau * ad));
    };

    // Predictor.
    std::vector<M> rc(nb), dx, dz;
    V dy;
    for (int b = 0; b < nb; ++b) rc[b] = -st.x[b];
    direction(rc, dx, dz, dy);
    auto [ap, ad] = steps(dx, dz);
    R gap_aff = 0;
    for (int b = 0; b < nb; ++b) gap_aff += inner<R>(M(st.x[b] + ap * dx[b]), M(st.z[b] + ad * dz[b]));
    const R ratio = std::clamp(gap_aff / gap, R(0), R(1));
    const R sigma = ratio * ratio * ratio;

    // Corrector.
    for (int b = 0; b < nb; ++b) rc[b] = sigma * mu * zinv[b] - st.x[b] - herm<R>(dx[b] * dz[b] * zinv[b]);
    direction(rc, dx, dz, dy);
    std::tie(ap, ad) = steps(dx, dz);
    if (!(ap > R(0)) || !(ad > R(0)) || !dy.allFinite()) return;

    for (int b = 0; b < nb; ++b) {
      st.x[b] = herm<R>(st.x[b] + ap * dx[b]);
      st.z[b] = herm<R>(st.z[b] + ad * dz[b]);
    }
    st.y += ad * dy;
  }
}

template <class R>
CMat<R> widen(const Mat& m) {
  return m.cast<std::complex<R>>();
}

template <class R>
Mat narrow(const CMat<R>& m) {
  return m.template cast<cplx>();
}

// Makes C exactly trace preserving by the congruence (I (x) T^{-1/2}) C (I (x) T^{-1/2}),
// which keeps C >= 0 and maps PPT operators to PPT operators.
Mat make_trace_preserving(const Mat& c_in, int d_out, int d_in) {
  const Mat c = hermitian_part(c_in);
  const Mat fix = lift(inverse_sqrt_psd(hermitian_part(trace_first(c, d_out, d_in))), d_out);
  return hermitian_part(fix * c * fix);
}

// Primal recovery on the optimal face. The dual slack Z is accurate where X is
// not, so C is restricted to the span V of the r eigenvectors of Z with the
// smallest eigenvalues, r being the number of directions where X dominates Z
// (complementary slackness). The block V^+ X V then gets the minimum-norm
// correction towards Tr_out C = I; the caller repairs the remaining residual.
std::optional<Mat> face_primal(const Mat& x, const Mat& z, int d_out, int d_in,
                               const std::vector<Mat>& lambda_basis) {
  Eigen::SelfAdjointEigenSolver<Mat> ex(hermitian_part(x));
  int r = 0;
  for (int k = 0; k < x.rows(); ++k) {
    const Vec v = ex.eigenvectors().col(k);
    if (ex.eigenvalues()(k) > (v.adjoint() * z * v)(0).real()) ++r;
  }
  if (r == 0) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Mat> ez(hermitian_part(z));
  const Mat v = ez.eigenvectors().leftCols(r);
  const Mat m0 = hermitian_part(v.adjoint() * x * v);

  const auto face_basis = hermitian_basis(r);
  const int ml = static_cast<int>(lambda_basis.size());
  auto coords = [&](const Mat& t) {
    RVec c(ml);
    for (int p = 0; p < ml; ++p) c(p) = trace_product(lambda_basis[p], t).real();
    return c;
  };
  Eigen::MatrixXd lin(ml, face_basis.size());
  for (std::size_t k = 0; k < face_basis.size(); ++k)
    lin.col(static_cast<Eigen::Index>(k)) = coords(trace_first(v * face_basis[k] * v.adjoint(), d_out, d_in));
  const RVec target = coords(Mat::Identity(d_in, d_in) - trace_first(v * m0 * v.adjoint(), d_out, d_in));
  const RVec delta = lin.completeOrthogonalDecomposition().solve(target);
  Mat m = m0;
  for (std::size_t k = 0; k < face_basis.size(); ++k) m += delta(static_cast<Eigen::Index>(k)) * face_basis[k];
  return hermitian_part(v * psd_projection(hermitian_part(m)) * v.adjoint());
}

constexpr double kNearFactor = 100.0;
constexpr int kMaxInteriorIters = 200;

// One interior-point solve in real type R; returns the best certificate seen.
template <class R>
Certificate interior_attempt(const Mat& a, int d_out, int d_in, const SdpOptions& opts, double tol, int& iters) {
  const int n = d_out * d_in;
  const auto lambda_basis = hermitian_basis(d_in);
  const int ml = static_cast<int>(lambda_basis.size());
  const int mw = opts.ppt ? n * n : 0;
  std::vector<Mat> w_basis;
  if (opts.ppt) w_basis = hermitian_basis(n);

  BlockProblem<R> pr;
  pr.cost.push_back(widen<R>(-a));
  const int nb = opts.ppt ? 2 : 1;
  if (opts.ppt) pr.cost.push_back(CMat<R>::Zero(n, n));
  pr.rhs = RVecT<R>::Zero(ml + mw);
  for (int p = 0; p < ml; ++p) {
    std::vector<std::vector<Entry<R>>> row(nb);
    row[0] = entries_of<R>(lift(lambda_basis[p], d_out));
    pr.a.push_back(std::move(row));
    pr.rhs(p) = static_cast<R>(lambda_basis[p].trace().real());
  }
  // Coupling X_2 = X_1^{T_in}: <G^{T_in}, X_1> - <G, X_2> = 0 for every basis element G.
  for (int q = 0; q < mw; ++q)
    pr.a.push_back({entries_of<R>(pt(w_basis[q], d_out, d_in)), entries_of<R>(-w_basis[q])});

  auto certificate_of = [&](const PdState<R>& st) {
    CMat<R> lambda_r = CMat<R>::Zero(d_in, d_in);
    for (int p = 0; p < ml; ++p) lambda_r -= st.y(p) * widen<R>(lambda_basis[p]);
    const Mat lambda = narrow<R>(lambda_r);
    // The second dual slack block is W itself.
    Mat w;
    if (opts.ppt) w = psd_projection(hermitian_part(narrow<R>(st.z[1])));
    const Mat x = hermitian_part(narrow<R>(st.x[0]));
    const Mat c = repair_positivity(make_trace_preserving(x, d_out, d_in), d_out, d_in, opts.ppt);
    Certificate cert = certify(a, c, lambda, w, d_out, d_in);
    if (!opts.ppt) {
      if (auto face = face_primal(x, hermitian_part(narrow<R>(st.z[0])), d_out, d_in, lambda_basis)) {
        const Mat repaired = repair_positivity(make_trace_preserving(*face, d_out, d_in), d_out, d_in, false);
        Certificate alt = certify(a, repaired, lambda, w, d_out, d_in);
        if (alt.gap < cert.gap) cert = std::move(alt);
      }
    }
    return cert;
  };

  PdState<R> st;
  std::optional<Certificate> best;
  pd_solve<R>(pr, st, kNearFactor * tol, std::min(opts.max_iters, kMaxInteriorIters), iters,
              [&](const PdState<R>& s) {
                Certificate cert = certificate_of(s);
                if (!best || cert.gap < best->gap) best = std::move(cert);
                return best->gap <= tol;
              });
  if (!best || certificate_of(st).gap < best->gap) best = certificate_of(st);
  return *best;
}

Certificate interior_solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts, double tol, int& iters,
                           bool& ok) {
  Certificate best = interior_attempt<double>(a, d_out, d_in, opts, tol, iters);
  if (best.gap > tol) {
    // Environments with a large dynamic range need more than double precision
    // for an absolute gap tolerance.
    int more = 0;
    Certificate wide = interior_attempt<long double>(a, d_out, d_in, opts, tol, more);
    iters += more;
    if (wide.gap < best.gap) best = std::move(wide);
  }
  ok = best.gap <= tol;
  return best;
}

void check_problem(const Mat& a, int d_out, int d_in) {
  if (d_out < 1 || d_in < 1) throw DimensionError("sdp: dimensions must be positive");
  const int n = d_out * d_in;
  if (a.rows() != n || a.cols() != n) throw DimensionError("sdp: A must be (d_out*d_in)-square");
  if (!a.allFinite()) throw NumericalError("sdp: A has non-finite entries");
  if (hermiticity_defect(a) > 1e-9 * std::max(1.0, a.norm())) throw std::invalid_argument("sdp: A is not Hermitian");
}

template <typename Solver>
SdpSolution scaled_solve(const Mat& a_in, int d_out, int d_in, const SdpOptions& opts, Solver&& solver) {
  const Mat a = hermitian_part(a_in);
  const double scale = spectral_scale(a);
  if (scale == 0.0) return trivial_solution(d_out, d_in, opts.ppt);
  int iters = 0;
  bool ok = false;
  const Certificate cert = solver(Mat(a / scale), d_out, d_in, opts, opts.tol / scale, iters, ok);
  SdpSolution s = to_solution(cert, scale, d_out, d_in, iters, ok);
  // Report value and gap against the unscaled A.
  s.primal_value = trace_product(s.C_star.mat, a).real();
  s.gap = s.dual_Lambda.trace().real() - s.primal_value;
  return s;
}

}  // namespace

SdpSolution SplittingBackend::solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts) const {
  return scaled_solve(a, d_out, d_in, opts, splitting_solve);
}

SdpSolution InteriorPointBackend::solve(const Mat& a, int d_out, int d_in, const SdpOptions& opts) const {
  return scaled_solve(a, d_out, d_in, opts, interior_solve);
}

std::unique_ptr<SdpBackend> make_backend(const std::string& name) {
  if (name == "splitting") return std::make_unique<SplittingBackend>();
  if (name == "interior") return std::make_unique<InteriorPointBackend>();
  throw std::invalid_argument("unknown SDP backend '" + name + "' (expected splitting or interior)");
}

SdpSolution solve_cptp_linear(const Mat& a, int d_out, int d_in, const SdpOptions& opts, const SdpBackend* backend) {
  check_problem(a, d_out, d_in);
  if (!(opts.tol > 0.0) || opts.max_iters < 1 || !(opts.rho > 0.0))
    throw std::invalid_argument("sdp: tolerances, iteration cap and penalty must be positive");
  static const SplittingBackend fallback;
  return (backend ? *backend : static_cast<const SdpBackend&>(fallback)).solve(a, d_out, d_in, opts);
}

SdpSolution solve_cptp_ppt_linear(const Mat& a, int d_out, int d_in, const SdpOptions& opts,
                                  const SdpBackend* backend) {
  SdpOptions o = opts;
  o.ppt = true;
  return solve_cptp_linear(a, d_out, d_in, o, backend);
}

double feasibility_defect(const Mat& c, int d_out, int d_in, bool ppt) {
  const double herm = hermiticity_defect(c);
  const Mat h = hermitian_part(c);
  double defect = std::max(herm, -min_eigenvalue(h));
  defect = std::max(defect, (trace_first(h, d_out, d_in) - Mat::Identity(d_in, d_in)).cwiseAbs().maxCoeff());
  if (ppt) defect = std::max(defect, -min_eigenvalue(pt(h, d_out, d_in)));
  return defect;
}

double dual_slack(const Mat& a, const Mat& lambda, const Mat& w, int d_out, int d_in) {
  Mat s = lift(lambda, d_out) - a;
  if (w.size() > 0) s -= pt(w, d_out, d_in);
  return min_eigenvalue(hermitian_part(s));
}

}  // namespace qfitn::sdp
