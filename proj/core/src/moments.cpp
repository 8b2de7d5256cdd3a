#include "pseudoent/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pseudoent/format.hpp"

namespace pseudoent {

namespace {

std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    out *= base;
  }
  return out;
}

void check_dense_cap(int single_dim, int t) {
  if (t < 1 || t > 4) {
    throw std::invalid_argument("moments: t must be in [1,4]");
  }
  if (single_dim < 1 || ipow(single_dim, t) > kMomentDenseCap) {
    throw std::invalid_argument(
        "moments: N^t exceeds the dense cap of 8192; reduce N or t");
  }
}

// Decode a tuple index (big-endian base-N digits) into its levels.
void decode_tuple(std::int64_t code, int single_dim, int t,
                  std::vector<int>& out) {
  out.resize(static_cast<std::size_t>(t));
  for (int i = t - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<int>(code % single_dim);
    code /= single_dim;
  }
}

std::int64_t encode_tuple(const std::vector<int>& tuple, int single_dim) {
  std::int64_t code = 0;
  for (int level : tuple) {
    code = code * single_dim + level;
  }
  return code;
}

// All tuple codes over the given levels, in lexicographic order.
std::vector<std::int64_t> subset_tuple_codes(int single_dim,
                                             const std::vector<int>& levels,
                                             int t) {
  std::vector<std::int64_t> codes;
  codes.reserve(static_cast<std::size_t>(ipow(
      static_cast<std::int64_t>(levels.size()), t)));
  std::vector<int> tuple(static_cast<std::size_t>(t), 0);
  std::vector<std::size_t> digits(static_cast<std::size_t>(t), 0);
  while (true) {
    for (int i = 0; i < t; ++i) {
      tuple[static_cast<std::size_t>(i)] =
          levels[digits[static_cast<std::size_t>(i)]];
    }
    codes.push_back(encode_tuple(tuple, single_dim));
    int pos = t - 1;
    while (pos >= 0 && ++digits[static_cast<std::size_t>(pos)] ==
                           levels.size()) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) {
      break;
    }
  }
  return codes;
}

// Mod-2 type of a tuple as a bitmask over levels (level i toggles bit i).
std::uint32_t parity_mask(std::int64_t code, int single_dim, int t) {
  std::uint32_t mask = 0;
  for (int i = 0; i < t; ++i) {
    mask ^= std::uint32_t{1} << (code % single_dim);
    code /= single_dim;
  }
  return mask;
}

void validate_levels(int single_dim, const std::vector<int>& levels) {
  for (int level : levels) {
    if (level < 0 || level >= single_dim) {
      throw std::invalid_argument("moments: subset level out of range");
    }
  }
}

}  // namespace

TypeVector type_of(const std::vector<int>& tuple, int single_dim) {
  TypeVector type(static_cast<std::size_t>(single_dim), 0);
  for (int level : tuple) {
    if (level < 0 || level >= single_dim) {
      throw std::invalid_argument("type_of: level out of range");
    }
    ++type[static_cast<std::size_t>(level)];
  }
  return type;
}

Eigen::VectorXd type_state(const TypeVector& type, int t) {
  const int single_dim = static_cast<int>(type.size());
  const int total = std::accumulate(type.begin(), type.end(), 0);
  if (total != t) {
    throw std::invalid_argument("type_state: type entries must sum to t");
  }
  check_dense_cap(single_dim, t);
  const std::int64_t dim = ipow(single_dim, t);
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(dim);
  std::vector<int> tuple;
  std::int64_t arrangements = 0;
  for (std::int64_t code = 0; code < dim; ++code) {
    decode_tuple(code, single_dim, t, tuple);
    if (type_of(tuple, single_dim) == type) {
      vec[code] = 1.0;
      ++arrangements;
    }
  }
  if (arrangements == 0) {
    throw std::invalid_argument("type_state: no arrangements for this type");
  }
  vec /= std::sqrt(static_cast<double>(arrangements));
  return vec;
}

MomentOperator sym_projector_moment(int single_dim, int t) {
  std::vector<int> levels(static_cast<std::size_t>(single_dim));
  std::iota(levels.begin(), levels.end(), 0);
  return sym_projector_moment_subset(single_dim, levels, t);
}

MomentOperator sym_projector_moment_subset(int single_dim,
                                           const std::vector<int>& levels,
                                           int t) {
  check_dense_cap(single_dim, t);
  validate_levels(single_dim, levels);
  const std::int64_t dim = ipow(single_dim, t);
  MomentOperator op;
  op.t = t;
  op.single_dim = single_dim;
  op.matrix = Eigen::MatrixXd::Zero(dim, dim);

  // (1/t!) sum over permutations of tuple-reordering operators.
  std::vector<int> perm(static_cast<std::size_t>(t));
  std::iota(perm.begin(), perm.end(), 0);
  const auto codes = subset_tuple_codes(single_dim, levels, t);
  std::vector<int> tuple;
  std::vector<int> permuted(static_cast<std::size_t>(t));
  double factorial = 1.0;
  for (int i = 2; i <= t; ++i) {
    factorial *= i;
  }
  do {
    for (std::int64_t code : codes) {
      decode_tuple(code, single_dim, t, tuple);
      for (int i = 0; i < t; ++i) {
        permuted[static_cast<std::size_t>(i)] =
            tuple[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
      }
      op.matrix(encode_tuple(permuted, single_dim), code) += 1.0 / factorial;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  const double trace = op.matrix.trace();  // C(|S|+t-1, t)
  op.matrix /= trace;
  return op;
}

MomentOperator subset_phase_moment_exact(int single_dim,
                                         const std::vector<int>& levels,
                                         int t) {
  check_dense_cap(single_dim, t);
  validate_levels(single_dim, levels);
  if (levels.empty()) {
    throw std::invalid_argument("subset_phase_moment_exact: empty subset");
  }
  const std::int64_t tuple_count =
      ipow(static_cast<std::int64_t>(levels.size()), t);
  if (tuple_count > (std::int64_t{1} << 20)) {
    throw std::invalid_argument(
        "subset_phase_moment_exact: |S|^t exceeds the 2^20 loop budget");
  }
  const std::int64_t dim = ipow(single_dim, t);
  MomentOperator op;
  op.t = t;
  op.single_dim = single_dim;
  op.matrix = Eigen::MatrixXd::Zero(dim, dim);

  // Phase averaging kills every term except pairs of tuples whose types
  // agree mod 2; group tuples by their parity mask and take outer sums.
  const auto codes = subset_tuple_codes(single_dim, levels, t);
  const double weight = 1.0 / static_cast<double>(tuple_count);
  std::vector<std::pair<std::uint32_t, std::int64_t>> keyed;
  keyed.reserve(codes.size());
  for (std::int64_t code : codes) {
    keyed.emplace_back(parity_mask(code, single_dim, t), code);
  }
  std::sort(keyed.begin(), keyed.end());
  std::size_t start = 0;
  while (start < keyed.size()) {
    std::size_t stop = start;
    while (stop < keyed.size() && keyed[stop].first == keyed[start].first) {
      ++stop;
    }
    for (std::size_t a = start; a < stop; ++a) {
      for (std::size_t b = start; b < stop; ++b) {
        op.matrix(keyed[a].second, keyed[b].second) += weight;
      }
    }
    start = stop;
  }
  return op;
}

MomentOperator averaged_subset_moment(int single_dim, int subset_size,
                                      int t) {
  check_dense_cap(single_dim, t);
  if (single_dim > 16) {
    throw std::invalid_argument(
        "averaged_subset_moment: subset enumeration capped at N = 16");
  }
  if (subset_size < 1 || subset_size > single_dim) {
    throw std::invalid_argument(
        "averaged_subset_moment: require 1 <= K <= N");
  }
  const std::int64_t dim = ipow(single_dim, t);
  MomentOperator op;
  op.t = t;
  op.single_dim = single_dim;
  op.matrix = Eigen::MatrixXd::Zero(dim, dim);

  // Fixed enumeration order over K-subsets keeps the sum deterministic.
  std::vector<int> levels(static_cast<std::size_t>(subset_size));
  std::iota(levels.begin(), levels.end(), 0);
  std::int64_t subsets = 0;
  while (true) {
    op.matrix += subset_phase_moment_exact(single_dim, levels, t).matrix;
    ++subsets;
    int pos = subset_size - 1;
    while (pos >= 0 &&
           levels[static_cast<std::size_t>(pos)] ==
               single_dim - subset_size + pos) {
      --pos;
    }
    if (pos < 0) {
      break;
    }
    ++levels[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < subset_size; ++i) {
      levels[static_cast<std::size_t>(i)] =
          levels[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  op.matrix /= static_cast<double>(subsets);
  return op;
}

MomentOperator type_state_moment(int single_dim,
                                 const std::vector<int>& levels, int t) {
  check_dense_cap(single_dim, t);
  validate_levels(single_dim, levels);
  if (static_cast<int>(levels.size()) < t) {
    throw std::invalid_argument(
        "type_state_moment: need |S| >= t for weight-t binary types");
  }
  const std::int64_t dim = ipow(single_dim, t);
  MomentOperator op;
  op.t = t;
  op.single_dim = single_dim;
  op.matrix = Eigen::MatrixXd::Zero(dim, dim);

  std::vector<int> pick(static_cast<std::size_t>(t));
  std::iota(pick.begin(), pick.end(), 0);
  const int s = static_cast<int>(levels.size());
  std::int64_t count = 0;
  while (true) {
    TypeVector type(static_cast<std::size_t>(single_dim), 0);
    for (int idx : pick) {
      type[static_cast<std::size_t>(levels[static_cast<std::size_t>(idx)])] =
          1;
    }
    const Eigen::VectorXd vec = type_state(type, t);
    op.matrix.noalias() += vec * vec.transpose();
    ++count;
    int pos = t - 1;
    while (pos >= 0 &&
           pick[static_cast<std::size_t>(pos)] == s - t + pos) {
      --pos;
    }
    if (pos < 0) {
      break;
    }
    ++pick[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < t; ++i) {
      pick[static_cast<std::size_t>(i)] =
          pick[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  op.matrix /= static_cast<double>(count);
  return op;
}

double trace_distance(const MomentOperator& m1, const MomentOperator& m2) {
  if (m1.dim() != m2.dim()) {
    throw std::invalid_argument("trace_distance: shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      m1.matrix - m2.matrix, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("trace_distance: eigensolver did not converge");
  }
  return 0.5 * solver.eigenvalues().array().abs().sum();
}

Theorem31Result verify_theorem31(int single_dim, int subset_size, int t) {
  Theorem31Result result;
  result.single_dim = single_dim;
  result.subset_size = subset_size;
  result.t = t;
  const MomentOperator avg =
      averaged_subset_moment(single_dim, subset_size, t);
  const MomentOperator haar = sym_projector_moment(single_dim, t);
  result.td = trace_distance(avg, haar);
  result.bound_ratio = result.td * static_cast<double>(subset_size) /
                       static_cast<double>(t * t);
  return result;
}

std::string theorem31_csv_header() { return "N,K,t,td,bound_ratio\n"; }

std::string theorem31_csv_row(const Theorem31Result& r) {
  std::ostringstream out;
  out << r.single_dim << ',' << r.subset_size << ',' << r.t << ','
      << format_double(r.td) << ',' << format_double(r.bound_ratio) << '\n';
  return out.str();
}

}  // namespace pseudoent
