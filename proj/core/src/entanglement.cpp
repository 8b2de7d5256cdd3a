#include "pseudoent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pseudoent/format.hpp"
#include "pseudoent/parallel.hpp"

namespace pseudoent {

namespace {

// Split an amplitude index into (X bits, Y bits), qubit order preserved.
inline void split_index(std::uint64_t idx, int n, std::uint32_t mask,
                        std::uint64_t& row, std::uint64_t& col) {
  row = 0;
  col = 0;
  for (int q = 0; q < n; ++q) {
    const std::uint64_t bit = (idx >> (n - 1 - q)) & 1;
    if ((mask >> q) & 1) {
      row = (row << 1) | bit;
    } else {
      col = (col << 1) | bit;
    }
  }
}

SchmidtSpectrum spectrum_from_gram(Eigen::MatrixXcd gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram,
                                                         Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("schmidt_spectrum: eigensolver did not converge");
  }
  Eigen::ArrayXd vals = solver.eigenvalues().array().reverse();
  for (Eigen::Index i = 0; i < vals.size(); ++i) {
    if (vals[i] < 0.0) {
      vals[i] = 0.0;  // noise floor; values below kEigClamp also clamp
    }
  }
  SchmidtSpectrum spectrum;
  spectrum.lambdas = vals;
  return spectrum;
}

// Spectrum through the nonzero amplitudes only: dedupe row/col patterns
// of the support, then eigensolve the compact Gram matrix.
SchmidtSpectrum sparse_spectrum(const std::vector<std::uint64_t>& support,
                                const Eigen::VectorXcd& amps, int n,
                                std::uint32_t mask) {
  std::map<std::uint64_t, int> row_ids;
  std::map<std::uint64_t, int> col_ids;
  std::vector<std::pair<std::pair<int, int>, std::complex<double>>> entries;
  entries.reserve(support.size());
  for (std::uint64_t idx : support) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    split_index(idx, n, mask, row, col);
    const int ri = static_cast<int>(
        row_ids.emplace(row, static_cast<int>(row_ids.size())).first->second);
    const int ci = static_cast<int>(
        col_ids.emplace(col, static_cast<int>(col_ids.size())).first->second);
    entries.push_back({{ri, ci}, amps[static_cast<Eigen::Index>(idx)]});
  }
  Eigen::MatrixXcd compact = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(row_ids.size()),
      static_cast<Eigen::Index>(col_ids.size()));
  for (const auto& [pos, amp] : entries) {
    compact(pos.first, pos.second) += amp;
  }
  if (compact.rows() <= compact.cols()) {
    return spectrum_from_gram(compact * compact.adjoint());
  }
  return spectrum_from_gram(compact.adjoint() * compact);
}

// Supports up to this many points go through the sparse path.
constexpr std::size_t kSparseSupportCap = 2048;

}  // namespace

Cut::Cut(std::uint32_t mask, int n_qubits) : left_mask(mask), n(n_qubits) {
  if (n_qubits < 2 || n_qubits > 30) {
    throw std::invalid_argument("Cut: need at least 2 qubits");
  }
  if (mask == 0 || mask >= (std::uint32_t{1} << n_qubits) - 1) {
    throw std::invalid_argument("Cut: both sides must be non-empty");
  }
}

Cut Cut::complement() const {
  return Cut(~left_mask & ((std::uint32_t{1} << n) - 1), n);
}

Cut Cut::prefix(int n_qubits, int len) {
  return Cut((std::uint32_t{1} << len) - 1, n_qubits);
}

Cut Cut::half(int n_qubits) { return prefix(n_qubits, n_qubits / 2); }

Eigen::MatrixXcd amplitude_matrix(const StateVector& state, const Cut& cut) {
  if (cut.n != state.n) {
    throw std::invalid_argument("amplitude_matrix: cut/state size mismatch");
  }
  const int nx = cut.nx();
  const int ny = cut.ny();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(
      static_cast<Eigen::Index>(1) << nx, static_cast<Eigen::Index>(1) << ny);
  for (std::uint64_t idx = 0; idx < state.dim(); ++idx) {
    std::uint64_t row = 0;
    std::uint64_t col = 0;
    split_index(idx, state.n, cut.left_mask, row, col);
    mat(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
        state.amps[static_cast<Eigen::Index>(idx)];
  }
  return mat;
}

SchmidtSpectrum schmidt_spectrum(const StateVector& state, const Cut& cut) {
  if (cut.n != state.n) {
    throw std::invalid_argument("schmidt_spectrum: cut/state size mismatch");
  }
  const auto support = state.support();
  const int min_side = std::min(cut.nx(), cut.ny());
  if (support.size() <= kSparseSupportCap &&
      support.size() < (std::uint64_t{1} << min_side)) {
    return sparse_spectrum(support, state.amps, state.n, cut.left_mask);
  }
  const Eigen::MatrixXcd mat = amplitude_matrix(state, cut);
  if (mat.rows() <= mat.cols()) {
    return spectrum_from_gram(mat * mat.adjoint());
  }
  return spectrum_from_gram(mat.adjoint() * mat);
}

double von_neumann_entropy(const SchmidtSpectrum& spectrum) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < spectrum.lambdas.size(); ++i) {
    const double lam = spectrum.lambdas[i];
    if (lam > 0.0) {
      s -= lam * std::log2(lam);
    }
  }
  return s;
}

double renyi2_entropy(const SchmidtSpectrum& spectrum) {
  return -std::log2(spectrum.lambdas.square().sum());
}

double min_entropy(const SchmidtSpectrum& spectrum) {
  return -std::log2(spectrum.max());
}

int schmidt_rank(const SchmidtSpectrum& spectrum, double tol) {
  const double cutoff = tol * spectrum.max();
  int rank = 0;
  for (Eigen::Index i = 0; i < spectrum.lambdas.size(); ++i) {
    if (spectrum.lambdas[i] > cutoff) {
      ++rank;
    }
  }
  return rank;
}

double frobenius_of_rho(const SchmidtSpectrum& spectrum) {
  return std::sqrt(spectrum.lambdas.square().sum());
}

double dist_r(const SchmidtSpectrum& spectrum, int r) {
  if (r < 1) {
    throw std::invalid_argument("dist_r: require r >= 1");
  }
  // 1 - sum of the top r eigenvalues, evaluated as the tail sum so that
  // rank <= r gives an exact zero instead of sqrt of a cancellation
  // residual.
  double tail = 0.0;
  for (Eigen::Index i = r; i < spectrum.lambdas.size(); ++i) {
    tail += spectrum.lambdas[i];
  }
  return std::sqrt(std::max(0.0, tail));
}

CutFamily CutFamily::all_cuts() {
  CutFamily f;
  f.kind = CutFamilyKind::AllCuts;
  return f;
}

CutFamily CutFamily::contiguous() {
  CutFamily f;
  f.kind = CutFamilyKind::Contiguous1D;
  return f;
}

CutFamily CutFamily::snake(int width) {
  CutFamily f;
  f.kind = CutFamilyKind::Snake2D;
  f.snake_width = width;
  return f;
}

CutFamily CutFamily::random(int count, std::uint64_t seed) {
  CutFamily f;
  f.kind = CutFamilyKind::Random;
  f.count = count;
  f.seed = seed;
  return f;
}

CutFamily CutFamily::parse(const std::string& text) {
  if (text == "all") {
    return all_cuts();
  }
  if (text == "contig") {
    return contiguous();
  }
  if (text.rfind("snake:", 0) == 0) {
    return snake(std::stoi(text.substr(6)));
  }
  if (text.rfind("random:", 0) == 0) {
    const std::string rest = text.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) {
      return random(std::stoi(rest), 0);
    }
    return random(std::stoi(rest.substr(0, colon)),
                  std::stoull(rest.substr(colon + 1)));
  }
  throw std::invalid_argument(
      "cut family must be all|contig|snake:W|random:N[:seed], got '" + text +
      "'");
}

std::string CutFamily::name() const {
  switch (kind) {
    case CutFamilyKind::AllCuts:
      return "all";
    case CutFamilyKind::Contiguous1D:
      return "contig";
    case CutFamilyKind::Snake2D:
      return "snake:" + std::to_string(snake_width);
    case CutFamilyKind::Random:
      return "random:" + std::to_string(count);
  }
  return "?";
}

namespace {

// Snake layout: qubit s sits at row s/width; within an even row columns
// run left to right, within an odd row right to left.
inline int snake_row(int s, int width) { return s / width; }
inline int snake_col(int s, int width) {
  const int r = s / width;
  const int offset = s % width;
  return (r % 2 == 0) ? offset : width - 1 - offset;
}

void check_snake(int n, int width) {
  if (width < 2 || n % width != 0 || n / width < 2) {
    throw std::invalid_argument(
        "snake family: width must be >= 2 and divide n with >= 2 rows");
  }
}

}  // namespace

std::uint32_t snake_vertical_mask(int n, int width, int col_boundary) {
  check_snake(n, width);
  std::uint32_t mask = 0;
  for (int s = 0; s < n; ++s) {
    if (snake_col(s, width) < col_boundary) {
      mask |= std::uint32_t{1} << s;
    }
  }
  return mask;
}

std::uint32_t snake_horizontal_mask(int n, int width, int row_boundary) {
  check_snake(n, width);
  std::uint32_t mask = 0;
  for (int s = 0; s < n; ++s) {
    if (snake_row(s, width) < row_boundary) {
      mask |= std::uint32_t{1} << s;
    }
  }
  return mask;
}

int snake_boundary_size(int n, int width, const Cut& cut) {
  check_snake(n, width);
  const int rows = n / width;
  int boundary = 0;
  auto side = [&](int r, int c) {
    // invert the layout: qubit index from grid position
    const int offset = (r % 2 == 0) ? c : width - 1 - c;
    const int s = r * width + offset;
    return (cut.left_mask >> s) & 1u;
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < width; ++c) {
      if (c + 1 < width && side(r, c) != side(r, c + 1)) {
        ++boundary;
      }
      if (r + 1 < rows && side(r, c) != side(r + 1, c)) {
        ++boundary;
      }
    }
  }
  return boundary;
}

int snake_order_crossings(const Cut& cut) {
  int crossings = 0;
  for (int s = 0; s + 1 < cut.n; ++s) {
    if (((cut.left_mask >> s) & 1u) != ((cut.left_mask >> (s + 1)) & 1u)) {
      ++crossings;
    }
  }
  return crossings;
}

std::vector<Cut> enumerate_cuts(int n, const CutFamily& family) {
  std::vector<Cut> cuts;
  switch (family.kind) {
    case CutFamilyKind::AllCuts: {
      if (n > 16) {
        throw std::invalid_argument(
            "all-cuts enumeration is capped at n = 16 (2^n - 2 masks); use "
            "contig, snake:W or random:N for larger states");
      }
      const std::uint32_t top = (std::uint32_t{1} << n) - 1;
      cuts.reserve(top - 1);
      for (std::uint32_t mask = 1; mask < top; ++mask) {
        cuts.emplace_back(mask, n);
      }
      break;
    }
    case CutFamilyKind::Contiguous1D: {
      for (int len = 1; len < n; ++len) {
        cuts.push_back(Cut::prefix(n, len));
      }
      break;
    }
    case CutFamilyKind::Snake2D: {
      check_snake(n, family.snake_width);
      const int rows = n / family.snake_width;
      for (int j = 1; j < family.snake_width; ++j) {
        cuts.emplace_back(snake_vertical_mask(n, family.snake_width, j), n);
      }
      for (int i = 1; i < rows; ++i) {
        cuts.emplace_back(snake_horizontal_mask(n, family.snake_width, i), n);
      }
      break;
    }
    case CutFamilyKind::Random: {
      if (family.count < 1) {
        throw std::invalid_argument("random cut family: count must be >= 1");
      }
      std::mt19937_64 rng(family.seed);
      const std::uint32_t top = (std::uint32_t{1} << n) - 1;
      std::uniform_int_distribution<std::uint32_t> dist(1, top - 1);
      for (int i = 0; i < family.count; ++i) {
        cuts.emplace_back(dist(rng), n);
      }
      break;
    }
  }
  std::sort(cuts.begin(), cuts.end(),
            [](const Cut& a, const Cut& b) { return a.left_mask < b.left_mask; });
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](const Cut& a, const Cut& b) {
                           return a.left_mask == b.left_mask;
                         }),
             cuts.end());
  return cuts;
}

double EntropyReport::max_von_neumann() const {
  double m = 0.0;
  for (const auto& rec : records) {
    m = std::max(m, rec.von_neumann);
  }
  return m;
}

int EntropyReport::max_rank() const {
  int m = 0;
  for (const auto& rec : records) {
    m = std::max(m, rec.schmidt_rank);
  }
  return m;
}

std::string EntropyReport::to_csv() const {
  std::ostringstream out;
  out << "mask,nx,ny,von_neumann_bits,renyi2_bits,min_entropy_bits,"
         "schmidt_rank,frobenius_rho,dist_r\n";
  for (const auto& rec : records) {
    out << rec.mask << ',' << rec.nx << ',' << rec.ny << ','
        << format_double(rec.von_neumann) << ',' << format_double(rec.renyi2)
        << ',' << format_double(rec.min_entropy) << ',' << rec.schmidt_rank
        << ',' << format_double(rec.frobenius_rho) << ','
        << (rec.dist_r ? format_double(*rec.dist_r) : std::string()) << '\n';
  }
  return out.str();
}

std::string EntropyReport::to_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["family"] = family;
  j["records"] = nlohmann::json::array();
  for (const auto& rec : records) {
    nlohmann::json r;
    r["mask"] = rec.mask;
    r["nx"] = rec.nx;
    r["ny"] = rec.ny;
    r["von_neumann_bits"] = rec.von_neumann;
    r["renyi2_bits"] = rec.renyi2;
    r["min_entropy_bits"] = rec.min_entropy;
    r["schmidt_rank"] = rec.schmidt_rank;
    r["frobenius_rho"] = rec.frobenius_rho;
    if (rec.dist_r) {
      r["dist_r"] = *rec.dist_r;
    }
    j["records"].push_back(std::move(r));
  }
  return j.dump(2);
}

EntropyReport entropy_scan(const StateVector& state, const CutFamily& family,
                           std::optional<int> dist_rank) {
  EntropyReport report;
  report.n = state.n;
  report.family = family.name();
  const auto cuts = enumerate_cuts(state.n, family);
  report.records.resize(cuts.size());

  // Hoist the support so sparse-path scans do one O(2^n) pass, not one
  // per cut.
  const auto support = state.support();

  parallel_for(cuts.size(), [&](std::size_t i) {
    const Cut& cut = cuts[i];
    SchmidtSpectrum spectrum;
    const int min_side = std::min(cut.nx(), cut.ny());
    if (support.size() <= kSparseSupportCap &&
        support.size() < (std::uint64_t{1} << min_side)) {
      spectrum = sparse_spectrum(support, state.amps, state.n, cut.left_mask);
    } else {
      const Eigen::MatrixXcd mat = amplitude_matrix(state, cut);
      spectrum = (mat.rows() <= mat.cols())
                     ? spectrum_from_gram(mat * mat.adjoint())
                     : spectrum_from_gram(mat.adjoint() * mat);
    }
    EntropyRecord rec;
    rec.mask = cut.left_mask;
    rec.nx = cut.nx();
    rec.ny = cut.ny();
    rec.von_neumann = von_neumann_entropy(spectrum);
    rec.renyi2 = renyi2_entropy(spectrum);
    rec.min_entropy = min_entropy(spectrum);
    rec.schmidt_rank = schmidt_rank(spectrum);
    rec.frobenius_rho = frobenius_of_rho(spectrum);
    if (dist_rank) {
      rec.dist_r = dist_r(spectrum, *dist_rank);
    }
    report.records[i] = rec;
  });
  return report;
}

}  // namespace pseudoent
