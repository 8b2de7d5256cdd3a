#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pseudoent/keys.hpp"
#include "pseudoent/statevector.hpp"

namespace pseudoent {

/// +/-1 matrix with power-of-two dimensions (2^rows_log x 2^cols_log).
struct SignMatrix {
  int rows_log = 0;
  int cols_log = 0;
  std::vector<std::int8_t> entries;  // row-major
  std::string provenance;

  std::int64_t rows() const { return std::int64_t{1} << rows_log; }
  std::int64_t cols() const { return std::int64_t{1} << cols_log; }

  int at(std::int64_t i, std::int64_t j) const {
    return entries[static_cast<std::size_t>((i << cols_log) | j)];
  }
  void set(std::int64_t i, std::int64_t j, int v) {
    entries[static_cast<std::size_t>((i << cols_log) | j)] =
        static_cast<std::int8_t>(v);
  }

  Eigen::MatrixXd to_dense() const;
};

/// A_{ij} = h(p(flat(i,j))) with h a 4-wise polynomial over
/// GF(2^{m1+m2}) mapped to a sign, p a keyed permutation of the flat
/// index space. Requires m1+m2 in the supported field-degree set.
SignMatrix build_high_entropy(int rows_log, int cols_log,
                              const SeededKey& key);

/// Variant with explicit components (trivial hashes / permutations in
/// tests).
SignMatrix build_high_entropy(int rows_log, int cols_log,
                              const FourWiseHash& hash,
                              const std::function<std::uint64_t(std::uint64_t)>&
                                  flat_permutation);

/// ||(1/2^{m1+m2}) M M^T||_F via the Gram matrix of the smaller side.
double frobenius_stat(const SignMatrix& m);

/// B_{ij} = A_{g(i), j}; rank(B) <= |image(g)|.
SignMatrix subsample_rows(const SignMatrix& a,
                          const std::function<std::uint64_t(std::uint64_t)>& g,
                          const std::string& provenance = "subsampled");

/// Tunable composition: C_{ij} = A_{g(i), j} with A the 4-wise high
/// entropy matrix on [2^{n/2}] x [2^{n/2}] and g a 2^{n/2-k}-to-1
/// permutation composition. Requires even n and k <= n/2.
SignMatrix build_tunable(int n, int k, const SeededKey& key);

/// Parameters for the iterative bond-dimension hashing procedure.
struct AreaLawPlan {
  int n = 0;        // total index width (qubits of the resulting state)
  int m2 = 0;       // log2 of the column budget
  int k = 0;        // log2 of the row-hash image
  int iterations = 0;

  int m1() const { return n - m2; }
  void validate() const;
};

struct AreaLawTrace {
  SignMatrix matrix;
  std::vector<int> ranks;          // numeric rank of A' before each step
                                    // and after the last one
  std::vector<int> hashed_ranks;   // numeric rank of each B' (<= 2^k)
};

/// Iteratively reshape t row bits into the columns, hash the remaining
/// rows down to 2^k with a KToOneFunction, and reshape back. Every row
/// of each iterate is a row of the previous one, so the rank never
/// increases.
AreaLawTrace area_law_iterate(const AreaLawPlan& plan, const SeededKey& key);

/// Phase state of the matrix: amp[(i << m2) | j] = M_ij / 2^{(m1+m2)/2}.
StateVector matrix_to_state(const SignMatrix& m,
                            int qubit_cap = kDefaultQubitCap);

/// Numeric rank at the shared 1e-10 relative singular-value tolerance.
int numeric_rank(const SignMatrix& m, double tol = 1e-10);
int numeric_rank(const Eigen::MatrixXd& m, double tol = 1e-10);

/// Row-major sign bits, packed 8 per byte (+1 -> 0, -1 -> 1).
void dump_sign_matrix(const SignMatrix& m, const std::string& path);
SignMatrix load_sign_matrix(const std::string& path);
std::string sign_matrix_csv(const SignMatrix& m);

}  // namespace pseudoent
