#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "expmatch/graph.hpp"

namespace expmatch {

/// Slack absorbed by every spectral bound check.
inline constexpr double kBoundSlack = 1e-8;

struct EigenOptions {
  /// Stop once the off-diagonal Frobenius norm drops to this value.
  double tol = 1e-10;
  int max_sweeps = 100;
  int max_dimension = 2048;
};

/// Eigenvalues of the normalized adjacency matrix, sorted descending.
struct SpectralSummary {
  std::vector<double> eigenvalues;
  /// max(lambda_2, |lambda_min|).
  double sigma2 = 0.0;
  std::optional<int> degree;

  double lambda1() const { return eigenvalues.front(); }
  double lambda2() const { return eigenvalues.size() > 1 ? eigenvalues[1] : eigenvalues.front(); }
  double lambda_min() const { return eigenvalues.back(); }
};

/// D^{-1/2} A D^{-1/2}. Throws ValidationError on isolated vertices.
Eigen::MatrixXd normalized_adjacency(const Graph& g);

/// All eigenvalues of a symmetric matrix, descending, by cyclic Jacobi
/// rotations. Throws BudgetError if max_sweeps is exhausted.
std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& a, const EigenOptions& options = {});

SpectralSummary spectrum(const Graph& g, const EigenOptions& options = {});

/// sigma2 <= eps (+1e-8). eps must lie in (0, 1).
bool is_eps_expander(const SpectralSummary& summary, double eps);
bool is_eps_expander(const Graph& g, double eps);

/// d*sigma2*sqrt(|S||T|) - | |E(S,T)| - d|S||T|/2n |. Nonnegative whenever
/// sigma2 is exact. Throws ValidationError for non-regular graphs.
double mixing_lemma_slack(const Graph& g, double sigma2, const VertexSet& s, const VertexSet& t);

struct TannerCheck {
  /// |S| / (eps^2 + (1 - eps^2)|S|/2n) with eps = sigma2.
  double bound = 0.0;
  /// |S| / (eps^2 + eps), meaningful when |S| <= 2*eps*n.
  double corollary_bound = 0.0;
  bool corollary_applies = false;
  /// |N(S)|: neighbors outside S.
  std::size_t actual = 0;
  /// Every vertex adjacent to S, members of S included. The full-range
  /// inequality is stated against this set.
  std::size_t neighborhood = 0;

  bool holds() const { return static_cast<double>(neighborhood) >= bound - kBoundSlack; }
  /// Corollary against the inclusive neighborhood, where it follows from the
  /// full-range bound.
  bool corollary_holds() const {
    return !corollary_applies || static_cast<double>(neighborhood) >= corollary_bound - kBoundSlack;
  }
  /// Stricter reading with |N(S)| excluding S. Holds on complete and cocktail
  /// party graphs but not on every expander.
  bool corollary_holds_exclusive() const {
    return !corollary_applies || static_cast<double>(actual) >= corollary_bound - kBoundSlack;
  }
};

TannerCheck tanner_lower_bound(const Graph& g, double sigma2, const VertexSet& s);

struct DegreeWitness {
  Vertex vertex = 0;
  int degree = 0;
  /// ceil(d(|S|/2n - eps)); may be nonpositive.
  int bound = 0;
};

/// Lowest-id vertex of S with maximum degree inside G[S].
DegreeWitness average_degree_witness(const Graph& g, double eps, const VertexSet& s);

double frobenius_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

struct HoffmanWielandt {
  double eigen_gap_sq = 0.0;
  double frobenius_sq = 0.0;
  bool holds = false;
};

HoffmanWielandt hoffman_wielandt_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       const EigenOptions& options = {});

/// Appends `extra` all-zero rows and columns.
Eigen::MatrixXd zero_pad(const Eigen::MatrixXd& a, int extra);

/// Spectral side of the pendant construction: compares G with
/// pendant_augment(G) through the zero-padded normalized adjacency.
struct PendantSpectralReport {
  int degree = 0;
  double sigma2_base = 0.0;
  double sigma2_augmented = 0.0;
  double frobenius_sq = 0.0;
  /// sigma2_base + sqrt(5/d).
  double sigma2_bound = 0.0;
  bool frobenius_within_5_over_d = false;
  bool hoffman_wielandt_ok = false;
  bool sigma2_bound_ok = false;
};

PendantSpectralReport pendant_spectral_check(const Graph& base, const EigenOptions& options = {});

}  // namespace expmatch
