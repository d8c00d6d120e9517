#include "cissir/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace cissir {

namespace {

double inner(const CMat& a, const CMat& b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

double max_abs(const CMat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }
double max_abs(const RVec& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

CMat hermitian_part(const CMat& a) { return 0.5 * (a + a.adjoint()); }

CMat project_psd(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a));
  const RVec ev = es.eigenvalues().cwiseMax(0.0);
  const CMat& v = es.eigenvectors();
  return v * ev.asDiagonal() * v.adjoint();
}

double max_eigenvalue(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_hermitian(const CMat& a, double tol) {
  return a.rows() == a.cols() && (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, max_abs(a));
}

// Constraint rows normalized to unit Frobenius norm; lo = -inf marks inequalities.
struct Rows {
  std::vector<CMat> a;
  RVec lo, hi, scale;
  std::vector<bool> eq;
  Eigen::MatrixXd gram;

  RVec apply(const CMat& x) const {
    RVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out(i) = inner(a[i], x);
    return out;
  }
  CMat adjoint(const RVec& y, int P) const {
    CMat out = CMat::Zero(P, P);
    for (std::size_t i = 0; i < a.size(); ++i) out += y(i) * a[i];
    return out;
  }
};

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::MaxIter: return "max_iter";
    case SdpStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

void SdpProblem::validate() const {
  if (dimension < 1) throw std::invalid_argument("SDP dimension must be positive");
  auto check = [&](const CMat& m, const char* what) {
    if (m.rows() != dimension || m.cols() != dimension)
      throw std::invalid_argument(std::string(what) + " has wrong dimension");
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + " has non-finite entries");
    if (!is_hermitian(m, 1e-12)) throw std::invalid_argument(std::string(what) + " is not Hermitian");
  };
  check(cost, "cost matrix");
  for (const auto& c : inequalities) check(c.a, "inequality matrix");
  for (const auto& c : equalities) check(c.a, "equality matrix");
}

double rank_one_metric(const CMat& z) {
  const double tr = z.trace().real();
  if (!(tr > 0.0)) throw std::invalid_argument("rank-one metric needs positive trace");
  return max_eigenvalue(z) / tr;
}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& opt) {
  problem.validate();
  const int P = problem.dimension;
  const double inf = std::numeric_limits<double>::infinity();

  Rows rows;
  std::vector<double> lo, hi, sc;
  auto add = [&](const SdpConstraint& c, bool eq) {
    const double n = c.a.norm();
    if (n == 0.0) {
      if ((eq && c.b != 0.0) || (!eq && c.b < 0.0))
        throw std::invalid_argument("constraint with zero matrix is unsatisfiable");
      return;
    }
    rows.a.push_back(hermitian_part(c.a) / n);
    rows.eq.push_back(eq);
    lo.push_back(eq ? c.b / n : -inf);
    hi.push_back(c.b / n);
    sc.push_back(n);
  };
  for (const auto& c : problem.equalities) add(c, true);
  for (const auto& c : problem.inequalities) add(c, false);
  const int m = static_cast<int>(rows.a.size());
  rows.lo = Eigen::Map<RVec>(lo.data(), m);
  rows.hi = Eigen::Map<RVec>(hi.data(), m);
  rows.scale = Eigen::Map<RVec>(sc.data(), m);
  rows.gram.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) rows.gram(i, j) = rows.gram(j, i) = inner(rows.a[i], rows.a[j]);

  const double cnorm = problem.cost.norm();
  const double cscale = cnorm > 0.0 ? cnorm : 1.0;
  const CMat q = -hermitian_part(problem.cost) / cscale;

  const double sigma = 1e-6;
  const double alpha = opt.alpha;
  const double tol = opt.tolerance;
  double rho = opt.rho;
  RVec rho_b(m);
  double rho_s = rho;
  Eigen::LDLT<Eigen::MatrixXd> kkt;
  auto factor = [&]() {
    for (int i = 0; i < m; ++i) rho_b(i) = rows.eq[i] ? 1e3 * rho : rho;
    rho_s = rho;
    const double a = sigma + rho_s;
    Eigen::MatrixXd k = rows.gram;
    for (int i = 0; i < m; ++i) k(i, i) += a / rho_b(i);
    kkt.compute(k);
  };
  factor();

  CMat x = CMat::Zero(P, P), zs = CMat::Zero(P, P), ys = CMat::Zero(P, P);
  RVec zb = RVec::Zero(m), yb = RVec::Zero(m);

  SdpSolution sol;
  sol.status = SdpStatus::MaxIter;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const CMat rhs = sigma * x - q + rows.adjoint(rho_b.cwiseProduct(zb) - yb, P) + (rho_s * zs - ys);
    const double a = sigma + rho_s;
    const RVec t = m ? RVec(kkt.solve(rows.apply(rhs))) : RVec();
    const CMat xt = hermitian_part((rhs - rows.adjoint(t, P)) / a);
    const RVec zbt = rows.apply(xt);

    const CMat x_new = alpha * xt + (1.0 - alpha) * x;
    const RVec vb = alpha * zbt + (1.0 - alpha) * zb;
    const CMat vs = alpha * xt + (1.0 - alpha) * zs;
    RVec zb_new = (vb + yb.cwiseQuotient(rho_b)).cwiseMax(rows.lo).cwiseMin(rows.hi);
    const CMat zs_new = project_psd(vs + ys / rho_s);
    const RVec dyb = rho_b.cwiseProduct(vb - zb_new);
    const CMat dys = rho_s * (vs - zs_new);
    yb += dyb;
    ys += dys;
    x = x_new;
    zb = std::move(zb_new);
    zs = zs_new;

    const RVec ax = rows.apply(x);
    const double r_prim = std::max(max_abs(RVec(ax - zb)), max_abs(CMat(x - zs)));
    const CMat aty = rows.adjoint(yb, P);
    const double r_dual = max_abs(CMat(q + aty + ys));
    const double n_prim = std::max({max_abs(ax), max_abs(x), max_abs(zb), max_abs(zs)});
    const double n_dual = std::max({max_abs(q), max_abs(aty), max_abs(ys)});

    double bound = 0.0;
    for (int i = 0; i < m; ++i)
      bound += rows.eq[i] ? rows.hi(i) * yb(i) : rows.hi(i) * std::max(yb(i), 0.0);
    const double pobj = -inner(q, zs);

    if (r_prim <= tol * (1.0 + n_prim) && r_dual <= tol * (1.0 + n_dual) &&
        std::abs(pobj - bound) <= tol * (1.0 + std::abs(pobj))) {
      sol.status = SdpStatus::Optimal;
      ++it;
      break;
    }

    // Primal infeasibility certificate from the dual increment.
    if (it > 100 && it % 10 == 0) {
      const double nd = std::max(max_abs(dyb), max_abs(dys));
      if (nd > 1e-12) {
        const double eps_p = 1e-5 * nd;
        double support = 0.0;
        bool finite = true;
        for (int i = 0; i < m; ++i) {
          if (rows.eq[i]) support += rows.hi(i) * dyb(i);
          else if (dyb(i) >= 0.0) support += rows.hi(i) * dyb(i);
          else if (dyb(i) < -eps_p) finite = false;
        }
        if (finite && max_abs(CMat(rows.adjoint(dyb, P) + dys)) <= eps_p &&
            max_eigenvalue(dys) <= eps_p && support < -eps_p) {
          sol.status = SdpStatus::Infeasible;
          ++it;
          break;
        }
      }
    }

    if (it % 50 == 49) {
      const double pr = r_prim / std::max(n_prim, 1e-30);
      const double du = r_dual / std::max(n_dual, 1e-30);
      const double ratio = std::sqrt(pr / std::max(du, 1e-30));
      if (std::isfinite(ratio) && (ratio > 5.0 || ratio < 0.2)) {
        rho = std::clamp(rho * ratio, 1e-6, 1e6);
        factor();
      }
    }
  }

  sol.iterations = it;
  sol.z_matrix = hermitian_part(zs);
  sol.objective = inner(problem.cost, sol.z_matrix);
  double bound = 0.0;
  for (int i = 0; i < m; ++i)
    bound += rows.eq[i] ? rows.hi(i) * yb(i) : rows.hi(i) * std::max(yb(i), 0.0);
  sol.dual_bound = bound * cscale;
  const RVec az = rows.apply(sol.z_matrix);
  double res = 0.0;
  for (int i = 0; i < m; ++i) {
    const double v = rows.eq[i] ? std::abs(az(i) - rows.hi(i)) : std::max(0.0, az(i) - rows.hi(i));
    res = std::max(res, v / (1.0 + std::abs(rows.hi(i))));
  }
  sol.primal_residual = res;
  return sol;
}

}  // namespace cissir
