#include "pseudoent/prmatrix.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pseudoent/gf2m.hpp"
#include "pseudoent/oracles.hpp"

namespace pseudoent {

Eigen::MatrixXd SignMatrix::to_dense() const {
  Eigen::MatrixXd out(rows(), cols());
  for (std::int64_t i = 0; i < rows(); ++i) {
    for (std::int64_t j = 0; j < cols(); ++j) {
      out(i, j) = static_cast<double>(at(i, j));
    }
  }
  return out;
}

SignMatrix build_high_entropy(int rows_log, int cols_log,
                              const SeededKey& key) {
  const int width = rows_log + cols_log;
  if (rows_log < 0 || cols_log < 0 || width > 24) {
    throw std::invalid_argument("build_high_entropy: m1 + m2 must be <= 24");
  }
  if (!GF2m::supported(width)) {
    throw std::invalid_argument(
        "build_high_entropy: m1 + m2 must be a supported field degree "
        "(4, 8, 12, 16, 20, 24)");
  }
  const DomainPermutation perm(width, key.substream(KeyRole::OuterPerm));
  const FourWiseHash hash(width, key);
  return build_high_entropy(
      rows_log, cols_log, hash,
      [&perm](std::uint64_t flat) { return perm.forward(flat); });
}

SignMatrix build_high_entropy(
    int rows_log, int cols_log, const FourWiseHash& hash,
    const std::function<std::uint64_t(std::uint64_t)>& flat_permutation) {
  const int width = rows_log + cols_log;
  if (rows_log < 0 || cols_log < 0 || width > 24 ||
      hash.field_degree() != width) {
    throw std::invalid_argument(
        "build_high_entropy: hash degree must equal m1 + m2 <= 24");
  }
  SignMatrix m;
  m.rows_log = rows_log;
  m.cols_log = cols_log;
  m.provenance = "high-entropy";
  m.entries.resize(std::size_t{1} << width);
  for (std::uint64_t flat = 0; flat < (std::uint64_t{1} << width); ++flat) {
    m.entries[flat] =
        static_cast<std::int8_t>(hash.sign(flat_permutation(flat)));
  }
  return m;
}

double frobenius_stat(const SignMatrix& m) {
  // || (1/2^n) M M^T ||_F^2 = Tr((MM^T)^2)/2^{2n} = Tr((M^T M)^2)/2^{2n},
  // so the Gram of the smaller side suffices.
  if (std::min(m.rows_log, m.cols_log) > 12) {
    throw std::invalid_argument(
        "frobenius_stat: smaller dimension capped at 2^12");
  }
  const Eigen::MatrixXd dense = m.to_dense();
  Eigen::MatrixXd gram;
  if (m.rows() <= m.cols()) {
    gram.noalias() = dense * dense.transpose();
  } else {
    gram.noalias() = dense.transpose() * dense;
  }
  const double scale =
      std::pow(2.0, -static_cast<double>(m.rows_log + m.cols_log));
  return scale * gram.norm();
}

SignMatrix subsample_rows(const SignMatrix& a,
                          const std::function<std::uint64_t(std::uint64_t)>& g,
                          const std::string& provenance) {
  SignMatrix b;
  b.rows_log = a.rows_log;
  b.cols_log = a.cols_log;
  b.provenance = provenance;
  b.entries.resize(a.entries.size());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    const std::uint64_t src = g(static_cast<std::uint64_t>(i));
    if (src >= static_cast<std::uint64_t>(a.rows())) {
      throw std::invalid_argument("subsample_rows: row map out of range");
    }
    std::memcpy(&b.entries[static_cast<std::size_t>(i << a.cols_log)],
                &a.entries[static_cast<std::size_t>(src << a.cols_log)],
                std::size_t{1} << a.cols_log);
  }
  return b;
}

SignMatrix build_tunable(int n, int k, const SeededKey& key) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("build_tunable: n must be even");
  }
  if (k < 0 || k > n / 2) {
    throw std::invalid_argument("build_tunable: require 0 <= k <= n/2");
  }
  const SignMatrix a =
      build_high_entropy(n / 2, n / 2, key.substream(KeyRole::HashCoeffs));
  const KToOneFunction g(n / 2, k, key.substream(KeyRole::InnerPerm));
  SignMatrix c = subsample_rows(
      a, [&g](std::uint64_t i) { return g.eval(i); },
      "tunable(k=" + std::to_string(k) + ")");
  return c;
}

void AreaLawPlan::validate() const {
  if (n < 4 || n > 24 || m2 < 1 || m2 >= n || k < 0) {
    throw std::invalid_argument("AreaLawPlan: bad sizes");
  }
  if (iterations < 0 || iterations > n - 2 * m2) {
    throw std::invalid_argument(
        "AreaLawPlan: iteration count must lie in [0, n - 2*m2]");
  }
  if (k > m2) {
    throw std::invalid_argument("AreaLawPlan: require k <= m2");
  }
}

namespace {

// Reshape A' (2^{m1} x 2^{m2}) to B (2^{m1-t} x 2^{m2+t}) by moving the
// low t row bits to the top of the column index.
SignMatrix reshape_down(const SignMatrix& a, int t) {
  SignMatrix b;
  b.rows_log = a.rows_log - t;
  b.cols_log = a.cols_log + t;
  b.provenance = a.provenance;
  b.entries.resize(a.entries.size());
  for (std::int64_t p = 0; p < b.rows(); ++p) {
    for (std::int64_t q = 0; q < b.cols(); ++q) {
      const std::int64_t moved = q >> a.cols_log;          // top t bits of q
      const std::int64_t col = q & (a.cols() - 1);         // low m2 bits
      const std::int64_t row = (p << t) | moved;
      b.set(p, q, a.at(row, col));
    }
  }
  return b;
}

// Inverse reshape: B' (2^{m1-t} x 2^{m2+t}) back to 2^{m1} x 2^{m2}.
SignMatrix reshape_up(const SignMatrix& b, int t, int m2) {
  SignMatrix a;
  a.rows_log = b.rows_log + t;
  a.cols_log = m2;
  a.provenance = b.provenance;
  a.entries.resize(b.entries.size());
  for (std::int64_t i = 0; i < a.rows(); ++i) {
    for (std::int64_t j = 0; j < a.cols(); ++j) {
      const std::int64_t p = i >> t;
      const std::int64_t q = ((i & ((std::int64_t{1} << t) - 1)) << m2) | j;
      a.set(i, j, b.at(p, q));
    }
  }
  return a;
}

}  // namespace

AreaLawTrace area_law_iterate(const AreaLawPlan& plan, const SeededKey& key) {
  plan.validate();
  AreaLawTrace trace;
  SignMatrix current = build_high_entropy(plan.m1(), plan.m2, key);
  current.provenance = "area-law(n=" + std::to_string(plan.n) +
                       ",m2=" + std::to_string(plan.m2) +
                       ",k=" + std::to_string(plan.k) + ")";
  trace.ranks.push_back(numeric_rank(current));
  for (int t = 0; t < plan.iterations; ++t) {
    const SignMatrix b = reshape_down(current, t);
    const KToOneFunction g(b.rows_log, plan.k,
                           key.substream(KeyRole::InnerPerm).stream(
                               static_cast<std::uint64_t>(t)));
    const SignMatrix hashed = subsample_rows(
        b, [&g](std::uint64_t p) { return g.eval(p); }, b.provenance);
    trace.hashed_ranks.push_back(numeric_rank(hashed));
    current = reshape_up(hashed, t, plan.m2);
    trace.ranks.push_back(numeric_rank(current));
  }
  trace.matrix = std::move(current);
  return trace;
}

StateVector matrix_to_state(const SignMatrix& m, int qubit_cap) {
  const int n = m.rows_log + m.cols_log;
  if (n < 1 || n > qubit_cap) {
    throw std::invalid_argument("matrix_to_state: size exceeds qubit cap");
  }
  StateVector state;
  state.n = n;
  state.amps.resize(static_cast<Eigen::Index>(1) << n);
  const double mag = std::pow(2.0, -0.5 * n);
  for (std::size_t flat = 0; flat < m.entries.size(); ++flat) {
    state.amps[static_cast<Eigen::Index>(flat)] =
        static_cast<double>(m.entries[flat]) * mag;
  }
  return state;
}

int numeric_rank(const Eigen::MatrixXd& m, double tol) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) {
    return 0;
  }
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * sv[0]) {
      ++rank;
    }
  }
  return rank;
}

int numeric_rank(const SignMatrix& m, double tol) {
  return numeric_rank(m.to_dense(), tol);
}

namespace {
constexpr char kMatrixMagic[4] = {'P', 'S', 'M', '1'};
}

void dump_sign_matrix(const SignMatrix& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("dump_sign_matrix: cannot open " + path);
  }
  out.write(kMatrixMagic, 4);
  const std::uint32_t rows_log = static_cast<std::uint32_t>(m.rows_log);
  const std::uint32_t cols_log = static_cast<std::uint32_t>(m.cols_log);
  out.write(reinterpret_cast<const char*>(&rows_log), 4);
  out.write(reinterpret_cast<const char*>(&cols_log), 4);
  std::uint8_t packed = 0;
  int filled = 0;
  for (std::size_t idx = 0; idx < m.entries.size(); ++idx) {
    if (m.entries[idx] < 0) {
      packed |= static_cast<std::uint8_t>(1u << filled);
    }
    if (++filled == 8) {
      out.put(static_cast<char>(packed));
      packed = 0;
      filled = 0;
    }
  }
  if (filled != 0) {
    out.put(static_cast<char>(packed));
  }
  if (!out) {
    throw std::runtime_error("dump_sign_matrix: write failed for " + path);
  }
}

SignMatrix load_sign_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_sign_matrix: cannot open " + path);
  }
  char magic[4];
  std::uint32_t rows_log = 0;
  std::uint32_t cols_log = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&rows_log), 4);
  in.read(reinterpret_cast<char*>(&cols_log), 4);
  if (!in || std::memcmp(magic, kMatrixMagic, 4) != 0 ||
      rows_log + cols_log > 24) {
    throw std::runtime_error("load_sign_matrix: bad header in " + path);
  }
  SignMatrix m;
  m.rows_log = static_cast<int>(rows_log);
  m.cols_log = static_cast<int>(cols_log);
  m.provenance = "loaded";
  m.entries.resize(std::size_t{1} << (rows_log + cols_log));
  std::uint8_t packed = 0;
  for (std::size_t idx = 0; idx < m.entries.size(); ++idx) {
    if (idx % 8 == 0) {
      int byte = in.get();
      if (byte == EOF) {
        throw std::runtime_error("load_sign_matrix: truncated " + path);
      }
      packed = static_cast<std::uint8_t>(byte);
    }
    m.entries[idx] = (packed >> (idx % 8)) & 1 ? -1 : 1;
  }
  return m;
}

std::string sign_matrix_csv(const SignMatrix& m) {
  if (m.rows_log + m.cols_log > 16) {
    throw std::invalid_argument("sign_matrix_csv: matrix too large for CSV");
  }
  std::ostringstream out;
  for (std::int64_t i = 0; i < m.rows(); ++i) {
    for (std::int64_t j = 0; j < m.cols(); ++j) {
      if (j) {
        out << ',';
      }
      out << static_cast<int>(m.at(i, j));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pseudoent
