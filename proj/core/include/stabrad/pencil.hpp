#pragma once

// Chain combinatorics of a pencil lambda -> T - lambda S: the N_m / R_m
// recursions, the limit spaces, the stability number, chains and gamma_m.

#include <vector>

#include "stabrad/matrixcore.hpp"
#include "stabrad/subspace.hpp"

namespace stabrad {

/// The pair (T, S), both y_dim x x_dim.
class Pencil {
 public:
  Pencil(CMatrix T, CMatrix S);

  const CMatrix& T() const { return T_; }
  const CMatrix& S() const { return S_; }
  Index x_dim() const { return T_.cols(); }
  Index y_dim() const { return T_.rows(); }

  /// T - lambda S.
  CMatrix at(Complex lambda) const { return T_ - lambda * S_; }

 private:
  CMatrix T_;
  CMatrix S_;
};

struct LimitSpaces {
  std::vector<Subspace> n_seq;  ///< N_0 ... N_{m*}
  std::vector<Subspace> r_seq;  ///< R_0 ... R_{m*}
  Subspace x_inf;               ///< intersection of the R_m
  Subspace y_inf;               ///< intersection of the T R_m
  Subspace kernel_T;            ///< N(T) = N_1
  int stabilized_at = 0;        ///< m*
  Index k = 0;                  ///< stability number dim N(T) / (N(T) cap X_inf)
  double gap_ratio = kInf;      ///< smallest gap ratio over all rank decisions

  /// N_m for any m >= 0 (constant beyond m*).
  const Subspace& N(int m) const;
  /// R_m for any m >= 0 (constant beyond m*).
  const Subspace& R(int m) const;
};

/// Default iteration cap 4 * min(n, p) + 4.
int default_m_cap(const Pencil& P);

/// Runs N_{m+1} = T^{-1} S N_m and R_{m+1} = S^{-1} T R_m until both
/// dimensions repeat. Throws NotStabilized if that takes more than m_cap steps.
LimitSpaces limit_spaces(const Pencil& P, int m_cap = 0, double eps_rel = kDefaultEpsRel);

/// Chains (x_1, ..., x_m) with T x_i = S x_{i-1}, stacked into C^{m n}.
struct ChainSpace {
  int m = 1;
  Index x_dim = 0;
  CMatrix basis;  ///< (m * x_dim) x dim, orthonormal columns
  double gap_ratio = kInf;

  Index dim() const { return basis.cols(); }
  /// Rows of block i (1-based) of the basis, i.e. the x_i components.
  auto block(int i) const { return basis.middleRows((i - 1) * x_dim, x_dim); }
};

ChainSpace chain_space(const Pencil& P, int m, double eps_rel = kDefaultEpsRel);

/// gamma_m(T; S): the largest c with ||T x_1|| >= c dist(x_m, N_m) over all chains.
/// +inf when no chain has x_m outside N_m.
double gamma_m(const Pencil& P, int m, double eps_rel = kDefaultEpsRel);

/// Same, reusing precomputed limit spaces.
double gamma_m(const Pencil& P, const LimitSpaces& limits, int m,
               double eps_rel = kDefaultEpsRel);

struct GammaEntry {
  int m = 0;
  double gamma = kInf;
  double gap_ratio = kInf;
};

/// gamma_1 ... gamma_{m_max}; the entries are independent of evaluation order.
std::vector<GammaEntry> gamma_sequence(const Pencil& P, const LimitSpaces& limits, int m_max,
                                       double eps_rel = kDefaultEpsRel);

/// Smallest singular value above the rank tolerance; +inf for the zero matrix.
double reduced_min_modulus(const CMatrix& A, double eps_rel = kDefaultEpsRel);

}  // namespace stabrad
