#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pseudoent/statevector.hpp"

namespace pseudoent {

/// Relative tolerance for numeric rank decisions, shared repo-wide.
inline constexpr double kRankTolerance = 1e-10;

/// Bipartition of n qubits. Bit q of `left_mask` (LSB = qubit 0) selects
/// qubit q into subsystem X; the rest form Y.
struct Cut {
  std::uint32_t left_mask = 0;
  int n = 0;

  Cut() = default;
  Cut(std::uint32_t mask, int n_qubits);

  int nx() const { return __builtin_popcount(left_mask); }
  int ny() const { return n - nx(); }
  Cut complement() const;

  /// X = first `len` qubits (contiguous prefix).
  static Cut prefix(int n_qubits, int len);
  /// Equipartition (first n/2 qubits vs the rest).
  static Cut half(int n_qubits);
};

/// Descending reduced-density eigenvalues (squared Schmidt coefficients);
/// negatives above -1e-12 are clamped to zero. Trailing exact zeros may
/// be omitted.
struct SchmidtSpectrum {
  Eigen::ArrayXd lambdas;

  double sum() const { return lambdas.sum(); }
  double max() const { return lambdas.size() ? lambdas[0] : 0.0; }
};

/// Entry (i, j) is the amplitude whose X-qubit bits spell i and Y-qubit
/// bits spell j (qubit order preserved, most significant first).
Eigen::MatrixXcd amplitude_matrix(const StateVector& state, const Cut& cut);

/// Eigenvalues of the reduced density matrix across the cut, via the
/// Gram matrix of whichever side is smaller. States with small support
/// are analyzed through their nonzero amplitudes only; both paths give
/// the same nonzero spectrum.
SchmidtSpectrum schmidt_spectrum(const StateVector& state, const Cut& cut);

double von_neumann_entropy(const SchmidtSpectrum& spectrum);  // bits
double renyi2_entropy(const SchmidtSpectrum& spectrum);       // bits
double min_entropy(const SchmidtSpectrum& spectrum);          // bits
int schmidt_rank(const SchmidtSpectrum& spectrum, double tol = kRankTolerance);
double frobenius_of_rho(const SchmidtSpectrum& spectrum);

/// sqrt(max(0, 1 - sum of the top r eigenvalues)): distance to the set
/// of states with Schmidt rank at most r across this cut.
double dist_r(const SchmidtSpectrum& spectrum, int r);

enum class CutFamilyKind { AllCuts, Contiguous1D, Snake2D, Random };

struct CutFamily {
  CutFamilyKind kind = CutFamilyKind::Contiguous1D;
  int snake_width = 0;       // Snake2D
  int count = 0;             // Random
  std::uint64_t seed = 0;    // Random

  static CutFamily all_cuts();
  static CutFamily contiguous();
  static CutFamily snake(int width);
  static CutFamily random(int count, std::uint64_t seed);

  /// Parses "all", "contig", "snake:W", "random:N" (":seed" optional).
  static CutFamily parse(const std::string& text);
  std::string name() const;
};

/// Materialize the family for n qubits, ordered by mask value.
/// AllCuts is refused for n > 16 (use contig/snake/random instead).
std::vector<Cut> enumerate_cuts(int n, const CutFamily& family);

/// Snake arrangement helpers: qubit labels follow the 1D snake order on
/// an (n/width) x width grid. Straight grid-line cuts only; the family
/// has (width-1) vertical plus (n/width - 1) horizontal members.
std::uint32_t snake_vertical_mask(int n, int width, int col_boundary);
std::uint32_t snake_horizontal_mask(int n, int width, int row_boundary);
/// Grid edges crossed by the cut (its boundary size).
int snake_boundary_size(int n, int width, const Cut& cut);
/// Number of adjacent snake-order pairs separated by the cut.
int snake_order_crossings(const Cut& cut);

struct EntropyRecord {
  std::uint32_t mask = 0;
  int nx = 0;
  int ny = 0;
  double von_neumann = 0.0;
  double renyi2 = 0.0;
  double min_entropy = 0.0;
  int schmidt_rank = 0;
  double frobenius_rho = 0.0;
  std::optional<double> dist_r;
};

struct EntropyReport {
  int n = 0;
  std::string family;
  std::vector<EntropyRecord> records;

  double max_von_neumann() const;
  int max_rank() const;
  std::string to_csv() const;
  std::string to_json() const;
};

/// One record per cut, deterministic ordering by mask value. Pass
/// `dist_rank` to also report the distance to rank-r states.
EntropyReport entropy_scan(const StateVector& state, const CutFamily& family,
                           std::optional<int> dist_rank = std::nullopt);

}  // namespace pseudoent
