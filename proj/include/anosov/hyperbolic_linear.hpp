// Integer unimodular matrices, hyperbolic splittings and the adapted max-norm.
#pragma once

#include "anosov/core.hpp"
#include "anosov/integer.hpp"
#include "anosov/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace anosov {

class ToralAutomorphism {
 public:
  ToralAutomorphism() = default;

  explicit ToralAutomorphism(const IMat& m) : m_(m) {
    require(m.rows() == m.cols() && m.rows() >= 1 && m.rows() <= kMaxDim,
            ErrorKind::InvalidArgument, "matrix must be square with dimension 1.." +
                                            std::to_string(kMaxDim));
    BigInt d = bareiss_det(BigMat::from(m));
    require(d == 1 || d == -1, ErrorKind::NotUnimodular,
            "determinant is " + d.str() + ", expected +-1");
    det_sign_ = d == 1 ? 1 : -1;
    inv_ = integer_inverse();
  }

  static ToralAutomorphism from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    require(n >= 1 && n <= kMaxDim, ErrorKind::InvalidArgument, "bad matrix dimension");
    IMat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      require(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) == n,
              ErrorKind::InvalidArgument, "matrix rows must have equal length");
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    return ToralAutomorphism(m);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  int det_sign() const { return det_sign_; }
  const IMat& matrix() const { return m_; }
  const IMat& inverse_matrix() const { return inv_; }
  Mat real() const { return m_.cast<double>(); }
  Mat real_inverse() const { return inv_.cast<double>(); }

  std::vector<std::vector<std::int64_t>> rows() const {
    std::vector<std::vector<std::int64_t>> r(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) r[static_cast<std::size_t>(i)].push_back(m_(i, j));
    return r;
  }

  ToralAutomorphism power(int k) const {
    require(k >= 1, ErrorKind::InvalidArgument, "power must be positive");
    BigMat p = anosov::power(BigMat::from(m_), k);
    IMat out(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) out(i, j) = to_i64(p(i, j));
    return ToralAutomorphism(out);
  }

  friend bool operator==(const ToralAutomorphism& x, const ToralAutomorphism& y) {
    return x.m_ == y.m_;
  }
  friend bool operator<(const ToralAutomorphism& x, const ToralAutomorphism& y) {
    if (x.dim() != y.dim()) return x.dim() < y.dim();
    return x.row_major() < y.row_major();
  }

  std::vector<std::int64_t> row_major() const {
    std::vector<std::int64_t> v;
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) v.push_back(m_(i, j));
    return v;
  }

 private:
  IMat integer_inverse() const {
    // adj(M) = det(M) * M^{-1}; cofactors computed exactly.
    const int n = dim();
    IMat inv(n, n);
    if (n == 1) {
      inv(0, 0) = det_sign_;
      return inv;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        BigMat minor(n - 1, n - 1);
        for (int r = 0, rr = 0; r < n; ++r) {
          if (r == j) continue;
          for (int c = 0, cc = 0; c < n; ++c) {
            if (c == i) continue;
            minor(rr, cc++) = m_(r, c);
          }
          ++rr;
        }
        BigInt cof = bareiss_det(minor);
        if ((i + j) % 2 == 1) cof = -cof;
        inv(i, j) = to_i64(cof * det_sign_);
      }
    return inv;
  }

  IMat m_;
  IMat inv_;
  int det_sign_ = 1;
};

// Exact test for the eigenvalues +1 and -1.
inline bool has_unit_real_eigenvalue(const IMat& m) {
  BigMat p = BigMat::from(m), q = BigMat::from(m);
  for (int i = 0; i < p.rows; ++i) {
    p(i, i) -= 1;
    q(i, i) += 1;
  }
  return bareiss_det(p) == 0 || bareiss_det(q) == 0;
}

// One real eigenvalue (size 1) or one complex-conjugate pair (size 2) in the
// eigen-coordinate system of a splitting.
struct EigenBlock {
  int offset = 0;
  int size = 1;
  double modulus = 0.0;
  double re = 0.0;
  double im = 0.0;
  bool stable = false;
};

class HyperbolicSplitting {
 public:
  static constexpr double kUnitTolerance = 1e-9;
  static constexpr double kMargin = 1e-6;

  HyperbolicSplitting() = default;

  explicit HyperbolicSplitting(const ToralAutomorphism& m) { build(m); }

  int dim() const { return n_; }
  int stable_dim() const { return ds_; }
  int unstable_dim() const { return n_ - ds_; }
  double lambda_s() const { return lambda_s_; }
  double lambda_u() const { return lambda_u_; }
  double a() const { return a_; }
  double spectral_radius() const { return lambda_max_; }
  double min_modulus() const { return lambda_min_; }
  const std::vector<EigenBlock>& blocks() const { return blocks_; }
  const Mat& basis() const { return V_; }
  const Mat& coordinates_matrix() const { return Vinv_; }
  const Mat& block_matrix() const { return Lambda_; }
  const Mat& block_matrix_inverse() const { return LambdaInv_; }
  const Mat& stable_projector() const { return Ps_; }
  const Mat& unstable_projector() const { return Pu_; }
  Mat stable_basis() const { return V_.leftCols(ds_); }
  Mat unstable_basis() const { return V_.rightCols(n_ - ds_); }

  Vec coords(const Vec& x) const { return Vinv_ * x; }
  Vec from_coords(const Vec& c) const { return V_ * c; }

  double coord_norm(const Vec& c) const {
    return std::max(c.head(ds_).norm(), c.tail(n_ - ds_).norm());
  }
  double norm(const Vec& x) const { return coord_norm(Vinv_ * x); }
  double stable_norm(const Vec& x) const { return (Vinv_ * x).head(ds_).norm(); }
  double unstable_norm(const Vec& x) const { return (Vinv_ * x).tail(n_ - ds_).norm(); }

  // ||x||_2 <= euclid_upper * ||x||_adapted and ||x||_adapted <= adapted_upper * ||x||_2.
  double euclid_upper() const { return std::sqrt(2.0) * V_.operatorNorm(); }
  double adapted_upper() const { return Vinv_.operatorNorm(); }

  // Smallest adapted norm of a nonzero integer vector, scanning shells |t|_inf = R
  // until R exceeds the Euclidean radius that could still beat the current best.
  double lattice_minimum() const {
    double best = std::numeric_limits<double>::infinity();
    const double scale = euclid_upper();
    Vec t(n_);
    for (long R = 1;; ++R) {
      if (static_cast<double>(R) > best * scale) break;
      long side = 2 * R + 1, total = 1;
      for (int i = 0; i < n_; ++i) {
        total *= side;
        require(total <= 50000000, ErrorKind::BudgetExceeded, "lattice search too large");
      }
      for (long code = 0; code < total; ++code) {
        long k = code;
        long linf = 0;
        for (int i = 0; i < n_; ++i) {
          const long v = k % side - R;
          t[i] = static_cast<double>(v);
          linf = std::max(linf, v < 0 ? -v : v);
          k /= side;
        }
        if (linf == R) best = std::min(best, norm(t));
      }
    }
    return best;
  }

  // alpha with: dist(f^k x, f^k y) <= alpha for all k implies x = y.
  double expansivity_constant() const {
    return 0.999 * lattice_minimum() / (lambda_max_ + 1.0);
  }

  const std::vector<std::complex<double>>& eigenvalues() const { return eigenvalues_; }

 private:
  void build(const ToralAutomorphism& m) {
    n_ = m.dim();
    require(!has_unit_real_eigenvalue(m.matrix()), ErrorKind::NotHyperbolic,
            "matrix has eigenvalue +1 or -1");
    const Mat A = m.real();
    Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(A), true);
    require(es.info() == Eigen::Success, ErrorKind::NotDiagonalizable, "eigen-solver failed");
    const Eigen::VectorXcd ev = es.eigenvalues();
    const Eigen::MatrixXcd evec = es.eigenvectors();

    struct Item {
      std::complex<double> value;
      Eigen::VectorXcd vec;
    };
    std::vector<Item> items;
    for (int i = 0; i < n_; ++i) {
      std::complex<double> l = ev[i];
      const double mod = std::abs(l);
      require(std::abs(mod - 1.0) > kUnitTolerance, ErrorKind::NotHyperbolic,
              "eigenvalue modulus " + std::to_string(mod) + " too close to 1");
      const bool real = std::abs(l.imag()) <= 1e-12 * std::max(1.0, mod);
      if (!real && l.imag() < 0) continue;
      if (real) l = {l.real(), 0.0};
      items.push_back({l, evec.col(i)});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
      const double mx = std::abs(x.value), my = std::abs(y.value);
      if (mx != my) return mx < my;
      return std::arg(x.value) < std::arg(y.value);
    });

    V_.resize(n_, n_);
    Lambda_ = Mat::Zero(n_, n_);
    int col = 0;
    for (auto& it : items) {
      Eigen::VectorXcd v = it.vec;
      Eigen::Index k = 0;
      const double vmax = v.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v[i]) >= vmax * (1.0 - 1e-9)) {
          k = i;
          break;
        }
      v *= std::conj(v[k]) / std::abs(v[k]);
      EigenBlock b;
      b.offset = col;
      b.modulus = std::abs(it.value);
      b.re = it.value.real();
      b.im = it.value.imag();
      b.stable = b.modulus < 1.0;
      if (it.value.imag() == 0.0) {
        Eigen::VectorXd r = v.real();
        r.normalize();
        V_.col(col) = r;
        Lambda_(col, col) = b.re;
        b.size = 1;
        col += 1;
      } else {
        v.normalize();
        V_.col(col) = v.real();
        V_.col(col + 1) = v.imag();
        Lambda_(col, col) = b.re;
        Lambda_(col, col + 1) = b.im;
        Lambda_(col + 1, col) = -b.im;
        Lambda_(col + 1, col + 1) = b.re;
        b.size = 2;
        col += 2;
      }
      blocks_.push_back(b);
    }
    require(col == n_, ErrorKind::NotDiagonalizable, "eigenvalue bookkeeping mismatch");

    Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(V_)};
    require(lu.isInvertible() && lu.rcond() > 1e-10, ErrorKind::NotDiagonalizable,
            "eigenvector basis is singular");
    Vinv_ = lu.inverse();
    const double recon = (V_ * Lambda_ * Vinv_ - A).cwiseAbs().maxCoeff();
    require(recon <= 1e-8 * std::max(1.0, A.cwiseAbs().maxCoeff()), ErrorKind::NotDiagonalizable,
            "matrix is not diagonalizable to working precision");
    LambdaInv_ = Lambda_.inverse();

    ds_ = 0;
    lambda_s_ = 0.0;
    lambda_u_ = std::numeric_limits<double>::infinity();
    for (const auto& b : blocks_) {
      if (b.stable) {
        ds_ += b.size;
        lambda_s_ = std::max(lambda_s_, b.modulus);
      } else {
        lambda_u_ = std::min(lambda_u_, b.modulus);
      }
      for (int s = 0; s < b.size; ++s)
        eigenvalues_.push_back(s == 0 ? std::complex<double>(b.re, b.im)
                                      : std::complex<double>(b.re, -b.im));
    }
    lambda_max_ = blocks_.back().modulus;
    lambda_min_ = blocks_.front().modulus;
    const double raw = std::max(lambda_s_, 1.0 / lambda_u_);
    a_ = raw * (1.0 + kMargin);
    if (a_ >= 1.0) a_ = 0.5 * (raw + 1.0);

    Mat sel = Mat::Zero(n_, n_);
    for (int i = 0; i < ds_; ++i) sel(i, i) = 1.0;
    Ps_ = V_ * sel * Vinv_;
    Pu_ = Mat::Identity(n_, n_) - Ps_;
  }

  int n_ = 0;
  int ds_ = 0;
  double lambda_s_ = 0, lambda_u_ = 0, a_ = 0, lambda_max_ = 0, lambda_min_ = 0;
  std::vector<EigenBlock> blocks_;
  std::vector<std::complex<double>> eigenvalues_;
  Mat V_, Vinv_, Lambda_, LambdaInv_, Ps_, Pu_;
};

inline HyperbolicSplitting spectral_split(const ToralAutomorphism& m) {
  return HyperbolicSplitting(m);
}

inline double adapted_norm(const HyperbolicSplitting& s, const Vec& v) { return s.norm(v); }

enum class SpectrumShape { THREE_REAL_ORDERED, REAL_PLUS_COMPLEX_STABLE, FOUR_REAL_TWO_EACH_SIDE };

inline const char* to_string(SpectrumShape s) {
  switch (s) {
    case SpectrumShape::THREE_REAL_ORDERED: return "THREE_REAL_ORDERED";
    case SpectrumShape::REAL_PLUS_COMPLEX_STABLE: return "REAL_PLUS_COMPLEX_STABLE";
    case SpectrumShape::FOUR_REAL_TWO_EACH_SIDE: return "FOUR_REAL_TWO_EACH_SIDE";
  }
  return "?";
}

inline bool matches_shape(const IMat& m, SpectrumShape shape) {
  const int n = static_cast<int>(m.rows());
  if (has_unit_real_eigenvalue(m)) return false;
  Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(m.cast<double>()), false);
  if (es.info() != Eigen::Success) return false;
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  for (const auto& l : ev)
    if (std::abs(std::abs(l) - 1.0) <= HyperbolicSplitting::kUnitTolerance) return false;
  auto is_real = [](std::complex<double> l) { return std::abs(l.imag()) <= 1e-9; };
  std::vector<double> st, un;
  int nonreal = 0;
  bool nonreal_stable = true;
  for (const auto& l : ev) {
    if (!is_real(l)) {
      ++nonreal;
      if (std::abs(l) >= 1.0) nonreal_stable = false;
      continue;
    }
    (std::abs(l) < 1.0 ? st : un).push_back(l.real());
  }
  auto by_mod = [](double x, double y) { return std::abs(x) < std::abs(y); };
  std::sort(st.begin(), st.end(), by_mod);
  std::sort(un.begin(), un.end(), by_mod);
  auto distinct = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (std::abs(v[i]) - std::abs(v[i - 1]) <= 1e-6) return false;
    return true;
  };
  switch (shape) {
    case SpectrumShape::THREE_REAL_ORDERED: {
      if (n < 3 || nonreal != 0 || st.empty() || un.size() < 2) return false;
      for (double l : st)
        if (l <= 0) return false;
      for (double l : un)
        if (l <= 0) return false;
      return std::abs(un[1]) - std::abs(un[0]) > 1e-6;
    }
    case SpectrumShape::REAL_PLUS_COMPLEX_STABLE:
      return n >= 3 && nonreal == 2 && nonreal_stable && st.empty() && !un.empty();
    case SpectrumShape::FOUR_REAL_TWO_EACH_SIDE:
      return n == 4 && nonreal == 0 && st.size() == 2 && un.size() == 2 && distinct(st) &&
             distinct(un);
  }
  return false;
}

// Companion matrices of x^n + c_{n-1}x^{n-1} + ... + c_0 with c_0 = +-1 and |c_i| <= bound,
// then full matrices when the search space is small.
inline std::vector<ToralAutomorphism> find_example_matrix(int dim, SpectrumShape shape,
                                                          int entry_bound,
                                                          long full_search_limit = 200000) {
  require(dim >= 1 && dim <= kMaxDim, ErrorKind::InvalidArgument, "dimension out of range");
  require(entry_bound >= 0 && entry_bound <= 8, ErrorKind::InvalidArgument,
          "entry bound must be in 0..8");
  std::vector<IMat> candidates;
  {
    const int free = dim - 1;
    long total = 2;
    for (int i = 0; i < free; ++i) total *= 2 * entry_bound + 1;
    for (long code = 0; code < total; ++code) {
      long k = code;
      IMat c = IMat::Zero(dim, dim);
      for (int i = 0; i + 1 < dim; ++i) c(i, i + 1) = 1;
      const std::int64_t c0 = (k % 2 == 0) ? 1 : -1;
      k /= 2;
      c(dim - 1, 0) = -c0;
      for (int i = 1; i < dim; ++i) {
        c(dim - 1, i) = -(k % (2 * entry_bound + 1) - entry_bound);
        k /= 2 * entry_bound + 1;
      }
      candidates.push_back(c);
    }
  }
  {
    long total = 1;
    bool small = true;
    for (int i = 0; i < dim * dim && small; ++i) {
      total *= 2 * entry_bound + 1;
      if (total > full_search_limit) small = false;
    }
    if (small) {
      for (long code = 0; code < total; ++code) {
        long k = code;
        IMat c(dim, dim);
        for (int i = 0; i < dim * dim; ++i) {
          c(i / dim, i % dim) = k % (2 * entry_bound + 1) - entry_bound;
          k /= 2 * entry_bound + 1;
        }
        const BigInt d = bareiss_det(BigMat::from(c));
        if (d == 1 || d == -1) candidates.push_back(c);
      }
    }
  }
  std::vector<char> keep(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t i) {
    keep[i] = matches_shape(candidates[i], shape) ? 1 : 0;
  });
  std::vector<ToralAutomorphism> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) out.emplace_back(candidates[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace anosov
