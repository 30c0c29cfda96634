#include "expmatch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "expmatch/error.hpp"

namespace expmatch {

Eigen::MatrixXd normalized_adjacency(const Graph& g) {
  const int size = g.num_vertices();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size, size);
  for (Vertex v = 0; v < size; ++v) {
    if (g.degree(v) == 0) {
      throw ValidationError("normalized adjacency undefined: vertex " + std::to_string(v) + " is isolated");
    }
  }
  for (const auto& e : g.edges()) {
    const double w = 1.0 / std::sqrt(static_cast<double>(g.degree(e.u)) * g.degree(e.v));
    a(e.u, e.v) = w;
    a(e.v, e.u) = w;
  }
  return a;
}

std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& input, const EigenOptions& options) {
  const auto size = static_cast<std::size_t>(input.rows());
  if (input.rows() != input.cols()) throw ValidationError("eigenvalues need a square matrix");
  if (input.rows() > options.max_dimension) {
    throw ValidationError("matrix dimension " + std::to_string(input.rows()) +
                          " exceeds dense solver cap " + std::to_string(options.max_dimension));
  }
  if (input.size() > 0 && (input - input.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("eigenvalues need a symmetric matrix");
  }

  // Row-major working copy; rotations touch two rows and two columns at a time.
  std::vector<double> a(size * size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      a[i * size + j] = input(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * size + j]; };

  auto off_norm = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = i + 1; j < size; ++j) sum += at(i, j) * at(i, j);
    }
    return std::sqrt(2.0 * sum);
  };

  bool converged = false;
  for (int sweep = 0; sweep <= options.max_sweeps; ++sweep) {
    if (off_norm() <= options.tol) {
      converged = true;
      break;
    }
    if (sweep == options.max_sweeps) break;
    for (std::size_t p = 0; p + 1 < size; ++p) {
      for (std::size_t q = p + 1; q < size; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < size; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < size; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        at(p, q) = 0.0;
        at(q, p) = 0.0;
      }
    }
  }
  if (!converged) {
    throw BudgetError("Jacobi eigensolver did not converge within " + std::to_string(options.max_sweeps) +
                      " sweeps");
  }

  std::vector<double> eigenvalues(size);
  for (std::size_t i = 0; i < size; ++i) eigenvalues[i] = at(i, i);
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  return eigenvalues;
}

SpectralSummary spectrum(const Graph& g, const EigenOptions& options) {
  SpectralSummary summary;
  summary.eigenvalues = symmetric_eigenvalues(normalized_adjacency(g), options);
  summary.sigma2 = std::max(summary.lambda2(), std::abs(summary.lambda_min()));
  summary.degree = g.regular_degree();
  return summary;
}

bool is_eps_expander(const SpectralSummary& summary, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("expander threshold must lie in (0, 1)");
  return summary.sigma2 <= eps + kBoundSlack;
}

bool is_eps_expander(const Graph& g, double eps) { return is_eps_expander(spectrum(g), eps); }

namespace {

int require_regular(const Graph& g, const char* what) {
  const auto d = g.regular_degree();
  if (!d) throw ValidationError(std::string(what) + " needs a regular graph");
  return *d;
}

}  // namespace

double mixing_lemma_slack(const Graph& g, double sigma2, const VertexSet& s, const VertexSet& t) {
  const int d = require_regular(g, "expander mixing check");
  const double size_s = static_cast<double>(s.size());
  const double size_t_ = static_cast<double>(t.size());
  const double edges = static_cast<double>(edge_count_between(g, s, t));
  const double mean = d * size_s * size_t_ / g.num_vertices();
  return d * sigma2 * std::sqrt(size_s * size_t_) - std::abs(edges - mean);
}

TannerCheck tanner_lower_bound(const Graph& g, double sigma2, const VertexSet& s) {
  require_regular(g, "Tanner bound");
  if (s.empty()) throw ValidationError("Tanner bound needs a nonempty set");
  const double eps = sigma2;
  const double size_s = static_cast<double>(s.size());
  TannerCheck check;
  check.bound = size_s / (eps * eps + (1.0 - eps * eps) * size_s / g.num_vertices());
  check.corollary_bound = size_s / (eps * eps + eps);
  check.corollary_applies = size_s <= eps * g.num_vertices() + kBoundSlack;
  check.actual = neighbors_of_set(g, s).size();
  check.neighborhood = closed_neighborhood_of_set(g, s).size();
  return check;
}

DegreeWitness average_degree_witness(const Graph& g, double eps, const VertexSet& s) {
  const int d = require_regular(g, "average degree witness");
  if (s.empty()) throw ValidationError("average degree witness needs a nonempty set");
  check_vertex_set(g, s);
  std::vector<char> in(static_cast<std::size_t>(g.num_vertices()), 0);
  for (Vertex v : s) in[static_cast<std::size_t>(v)] = 1;

  DegreeWitness witness{s.front(), -1, 0};
  for (Vertex u : s) {
    int inside = 0;
    for (Vertex v : g.neighbors(u)) inside += in[static_cast<std::size_t>(v)];
    if (inside > witness.degree) witness = {u, inside, 0};
  }
  const double raw = d * (static_cast<double>(s.size()) / g.num_vertices() - eps);
  witness.bound = static_cast<int>(std::ceil(raw - 1e-9));
  return witness;
}

double frobenius_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError("Frobenius distance needs equal dimensions");
  }
  return (a - b).norm();
}

HoffmanWielandt hoffman_wielandt_check(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                                       const EigenOptions& options) {
  const double distance = frobenius_distance(a, b);
  const auto ea = symmetric_eigenvalues(a, options);
  const auto eb = symmetric_eigenvalues(b, options);
  HoffmanWielandt result;
  for (std::size_t i = 0; i < ea.size(); ++i) result.eigen_gap_sq += (ea[i] - eb[i]) * (ea[i] - eb[i]);
  result.frobenius_sq = distance * distance;
  result.holds = result.eigen_gap_sq <= result.frobenius_sq + kBoundSlack;
  return result;
}

Eigen::MatrixXd zero_pad(const Eigen::MatrixXd& a, int extra) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.rows() + extra, a.cols() + extra);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

PendantSpectralReport pendant_spectral_check(const Graph& base, const EigenOptions& options) {
  const Graph augmented = pendant_augment(base);
  PendantSpectralReport report;
  report.degree = *base.regular_degree();

  const Eigen::MatrixXd padded = zero_pad(normalized_adjacency(base), 2);
  const Eigen::MatrixXd target = normalized_adjacency(augmented);
  report.sigma2_base = spectrum(base, options).sigma2;
  report.sigma2_augmented = spectrum(augmented, options).sigma2;

  const auto hw = hoffman_wielandt_check(padded, target, options);
  report.frobenius_sq = hw.frobenius_sq;
  report.hoffman_wielandt_ok = hw.holds;
  report.frobenius_within_5_over_d = hw.frobenius_sq <= 5.0 / report.degree + kBoundSlack;
  report.sigma2_bound = report.sigma2_base + std::sqrt(5.0 / report.degree);
  report.sigma2_bound_ok = report.sigma2_augmented <= report.sigma2_bound + kBoundSlack;
  return report;
}

}  // namespace expmatch
