#pragma once

// Eigenvalue kernels. Dense Hermitian problems go to Eigen; large real symmetric
// operators go through a thick-restart Lanczos with full reorthogonalization.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "qlr/core.hpp"

namespace qlr {

struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double res) : Error(what), residual(res) {}
  double residual;
};

inline constexpr std::size_t kDenseLimit = 2048;

/// y = A x for a real symmetric operator of dimension `dim`.
struct LinearOperator {
  std::size_t dim = 0;
  std::function<void(const double*, double*)> apply;
};

struct LanczosOptions {
  int k = 1;
  double tol = 1e-10;
  int basis = 0;  // 0 = pick from dim and k
  int max_restarts = 2000;
  bool want_vectors = false;
};

struct EigenPairs {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;  // only when requested
  int restarts = 0;
  double max_residual = 0.0;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

inline std::vector<double> start_vector(std::size_t dim) {
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = 1.0 + 0.01 * std::sin(1.0 + static_cast<double>(i));
  const double nrm = std::sqrt(dot(v, v));
  for (auto& x : v) x /= nrm;
  return v;
}

template <class Matrix>
void require_hermitian(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) throw Error("matrix is not square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * scale) throw Error("matrix is not Hermitian");
}

}  // namespace detail

/// k lowest eigenpairs of a real symmetric operator.
///
/// Krylov-Schur form A V = V H + f e_m^T is kept throughout; each restart keeps the
/// lowest Ritz vectors, so converged pairs are never lost.
inline EigenPairs lanczos_lowest(const LinearOperator& op, LanczosOptions opt = {}) {
  const std::size_t dim = op.dim;
  if (dim == 0) throw Error("lanczos: empty operator");
  const int k = std::max(1, std::min<int>(opt.k, static_cast<int>(dim)));
  int m = opt.basis > 0 ? opt.basis : (dim > (std::size_t{1} << 19) ? std::max(2 * k + 8, 20) : std::max(2 * k + 16, 40));
  m = std::min<int>(m, static_cast<int>(dim));
  const int keep = std::min(m - 1, std::max(k + 4, m / 2));

  std::vector<std::vector<double>> V;
  V.reserve(static_cast<std::size_t>(m));
  V.push_back(detail::start_vector(dim));
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> w(dim);
  std::size_t fresh = 0;  // next unit vector to try after a breakdown

  EigenPairs out;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    double beta = 0.0;
    std::vector<double> f;
    for (int j = static_cast<int>(V.size()) - 1; j < m; ++j) {
      op.apply(V[static_cast<std::size_t>(j)].data(), w.data());
      Eigen::VectorXd h = Eigen::VectorXd::Zero(j + 1);
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= j; ++i) {
          const double c = detail::dot(V[static_cast<std::size_t>(i)], w);
          h(i) += c;
          detail::axpy(-c, V[static_cast<std::size_t>(i)], w);
        }
      }
      for (int i = 0; i <= j; ++i) H(i, j) = H(j, i) = h(i);
      beta = std::sqrt(detail::dot(w, w));
      if (j == m - 1) {
        f = w;
        break;
      }
      if (beta <= 1e-13 * std::max(1.0, std::abs(h(j)))) {
        // Invariant subspace: continue with an unused direction.
        std::vector<double> v;
        double nrm = 0.0;
        while (fresh < dim) {
          v.assign(dim, 0.0);
          v[fresh++] = 1.0;
          for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : V) detail::axpy(-detail::dot(b, v), b, v);
          }
          nrm = std::sqrt(detail::dot(v, v));
          if (nrm > 1e-8) break;
        }
        if (nrm <= 1e-8) {
          m = j + 1;
          f.assign(dim, 0.0);
          beta = 0.0;
          break;
        }
        for (auto& x : v) x /= nrm;
        V.push_back(std::move(v));
      } else {
        for (auto& x : w) x /= beta;
        V.push_back(w);
      }
    }

    const int cols = static_cast<int>(V.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.topLeftCorner(cols, cols));
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& S = es.eigenvectors();
    const int want = std::min(k, cols);

    bool converged = true;
    double worst = 0.0;
    for (int i = 0; i < want; ++i) {
      const double res = beta * std::abs(S(cols - 1, i));
      worst = std::max(worst, res);
      if (res > opt.tol * std::max(1.0, std::abs(theta(i)))) converged = false;
    }
    out.max_residual = worst;
    out.restarts = restart;

    const int nkeep = converged ? want : std::min(keep, cols);
    std::vector<std::vector<double>> Y(static_cast<std::size_t>(nkeep), std::vector<double>(dim, 0.0));
    for (int i = 0; i < nkeep; ++i) {
      for (int c = 0; c < cols; ++c) detail::axpy(S(c, i), V[static_cast<std::size_t>(c)], Y[static_cast<std::size_t>(i)]);
    }

    if (converged) {
      for (int i = 0; i < want; ++i) out.values.push_back(theta(i));
      if (opt.want_vectors) out.vectors = std::move(Y);
      return out;
    }
    if (beta == 0.0) throw ConvergenceError("lanczos: exhausted space before convergence", worst);

    V = std::move(Y);
    H.setZero();
    for (int i = 0; i < nkeep; ++i) H(i, i) = theta(i);
    for (auto& x : f) x /= beta;
    // Reorthogonalize the continuation vector against the compressed basis.
    for (const auto& b : V) detail::axpy(-detail::dot(b, f), b, f);
    const double nf = std::sqrt(detail::dot(f, f));
    for (auto& x : f) x /= nf;
    V.push_back(std::move(f));
  }
  throw ConvergenceError("lanczos: no convergence after " + std::to_string(opt.max_restarts) +
                             " restarts (residual " + std::to_string(out.max_residual) + ")",
                         out.max_residual);
}

/// Ascending eigenvalues of a dense Hermitian matrix (real or complex).
template <class Matrix>
std::vector<double> dense_eigenvalues(const Matrix& m, int k = -1) {
  detail::require_hermitian(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", 0.0);
  const int count = k < 0 ? static_cast<int>(m.rows()) : std::min<int>(k, static_cast<int>(m.rows()));
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  return out;
}

/// Smallest eigenvalue of a Hermitian matrix; dense below kDenseLimit, Lanczos above (real only).
inline double smallest_eigenvalue(const Eigen::MatrixXd& m, double tol = 1e-10) {
  detail::require_hermitian(m);
  if (static_cast<std::size_t>(m.rows()) <= kDenseLimit) return dense_eigenvalues(m, 1).at(0);
  LinearOperator op{static_cast<std::size_t>(m.rows()), [&m](const double* x, double* y) {
                      Eigen::Map<const Eigen::VectorXd> xv(x, m.rows());
                      Eigen::Map<Eigen::VectorXd> yv(y, m.rows());
                      yv.noalias() = m * xv;
                    }};
  LanczosOptions opt;
  opt.tol = tol;
  return lanczos_lowest(op, opt).values.at(0);
}

inline double smallest_eigenvalue(const Eigen::MatrixXcd& m, double tol = 1e-10) {
  detail::require_hermitian(m);
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) return smallest_eigenvalue(Eigen::MatrixXd(m.real()), tol);
  if (static_cast<std::size_t>(m.rows()) > 4 * kDenseLimit) throw CapExceeded("complex matrix above dense cap");
  return dense_eigenvalues(m, 1).at(0);
}

/// Compressed sparse row storage for real symmetric matrices.
struct SparseSym {
  std::size_t dim = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> val;

  void apply(const double* x, double* y) const {
    for (std::size_t r = 0; r < dim; ++r) {
      double s = 0.0;
      for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += val[p] * x[col[p]];
      y[r] = s;
    }
  }
  LinearOperator op() const {
    return {dim, [this](const double* x, double* y) { apply(x, y); }};
  }
  Eigen::MatrixXd dense() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col[p])) += val[p];
      }
    }
    return m;
  }
};

}  // namespace qlr
