#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace pseudoent {

/// Dense cap on the t-copy Hilbert dimension N^t.
inline constexpr std::int64_t kMomentDenseCap = 8192;

/// Exact t-copy ensemble average on (C^N)^{x t}. All operators handled
/// here are real symmetric, trace 1, and PSD up to a -1e-10 clamp.
struct MomentOperator {
  int t = 0;
  int single_dim = 0;  // N
  Eigen::MatrixXd matrix;

  std::int64_t dim() const { return matrix.rows(); }
  double trace() const { return matrix.trace(); }
};

/// Frequency vector of a tuple: entry i counts occurrences of level i.
using TypeVector = std::vector<int>;

/// type(v) for v in [N]^t.
TypeVector type_of(const std::vector<int>& tuple, int single_dim);

/// Normalized equal superposition over all arrangements v with
/// type(v) = T, as a vector in (C^N)^{x t} (real entries).
Eigen::VectorXd type_state(const TypeVector& type, int t);

/// Haar moment: symmetric-subspace projector normalized by its trace
/// C(N+t-1, t). Requires N^t <= dense cap and t <= 4.
MomentOperator sym_projector_moment(int single_dim, int t);

/// Projector onto the symmetric subspace of the span of `levels`,
/// normalized by its trace C(|S|+t-1, t), embedded in (C^N)^{x t}.
MomentOperator sym_projector_moment_subset(int single_dim,
                                           const std::vector<int>& levels,
                                           int t);

/// Average of |psi_{f,S}><psi_{f,S}|^{x t} over all 2^{|S|} binary phase
/// functions, in closed form: <y|M|x> = 1[type(x) = type(y) mod 2] / |S|^t
/// for tuples over S.
MomentOperator subset_phase_moment_exact(int single_dim,
                                         const std::vector<int>& levels,
                                         int t);

/// Uniform average of subset_phase_moment_exact over all K-subsets of
/// [N]. Requires N <= 16.
MomentOperator averaged_subset_moment(int single_dim, int subset_size, int t);

/// Average of |type_T><type_T| over T drawn from the weight-t 0/1 type
/// vectors supported on `levels`.
MomentOperator type_state_moment(int single_dim,
                                 const std::vector<int>& levels, int t);

/// (1/2) sum |eig(M1 - M2)|.
double trace_distance(const MomentOperator& m1, const MomentOperator& m2);

struct Theorem31Result {
  int single_dim = 0;
  int subset_size = 0;
  int t = 0;
  double td = 0.0;
  double bound_ratio = 0.0;  // td * K / t^2
};

/// Exact trace distance between the subset-phase ensemble moment
/// (averaged over subsets and phases) and the Haar moment, plus the
/// ratio normalized by t^2/K. The derived acceptance constant is 2.
Theorem31Result verify_theorem31(int single_dim, int subset_size, int t);

std::string theorem31_csv_header();
std::string theorem31_csv_row(const Theorem31Result& r);

}  // namespace pseudoent
