#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "pseudoent/moments.hpp"

using namespace pseudoent;

namespace {

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t out = 1;
  while (e-- > 0) {
    out *= b;
  }
  return out;
}

double binom(int n, int k) {
  if (k < 0 || k > n) {
    return 0.0;
  }
  double out = 1.0;
  for (int i = 0; i < k; ++i) {
    out *= static_cast<double>(n - i) / (i + 1);
  }
  return out;
}

// Independent oracle: average |psi_{f,S}><psi_{f,S}|^t over all 2^{|S|}
// binary phase functions by direct enumeration, with exact integer
// accumulation of the +/-1 outer products.
Eigen::MatrixXd brute_force_phase_average(int single_dim,
                                          const std::vector<int>& levels,
                                          int t) {
  const int s = static_cast<int>(levels.size());
  const std::int64_t tuples = ipow(s, t);
  const std::int64_t dim = ipow(single_dim, t);

  // tuple code in the full space + per-tuple phase parity under f
  std::vector<std::int64_t> codes(static_cast<std::size_t>(tuples));
  std::vector<std::uint32_t> members(static_cast<std::size_t>(tuples));
  for (std::int64_t ti = 0; ti < tuples; ++ti) {
    std::int64_t rest = ti;
    std::int64_t code = 0;
    std::uint32_t member_mask = 0;
    for (int pos = 0; pos < t; ++pos) {
      const int level_idx = static_cast<int>(rest % s);
      rest /= s;
      code = code * single_dim + levels[static_cast<std::size_t>(level_idx)];
      member_mask ^= 1u << level_idx;
    }
    // positions were consumed little-endian; code built big-endian over
    // reversed digits, which still enumerates all tuples exactly once
    codes[static_cast<std::size_t>(ti)] = code;
    members[static_cast<std::size_t>(ti)] = member_mask;
  }

  std::vector<std::int64_t> accum(
      static_cast<std::size_t>(tuples * tuples), 0);
  for (std::uint32_t f = 0; f < (1u << s); ++f) {
    std::vector<int> sign(static_cast<std::size_t>(tuples));
    for (std::int64_t ti = 0; ti < tuples; ++ti) {
      sign[static_cast<std::size_t>(ti)] =
          __builtin_popcount(members[static_cast<std::size_t>(ti)] & f) % 2
              ? -1
              : 1;
    }
    for (std::int64_t a = 0; a < tuples; ++a) {
      const int sa = sign[static_cast<std::size_t>(a)];
      for (std::int64_t b = 0; b < tuples; ++b) {
        accum[static_cast<std::size_t>(a * tuples + b)] +=
            sa * sign[static_cast<std::size_t>(b)];
      }
    }
  }

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  const double scale = 1.0 / (std::pow(2.0, s) * static_cast<double>(tuples));
  for (std::int64_t a = 0; a < tuples; ++a) {
    for (std::int64_t b = 0; b < tuples; ++b) {
      out(codes[static_cast<std::size_t>(a)],
          codes[static_cast<std::size_t>(b)]) =
          scale * static_cast<double>(
                      accum[static_cast<std::size_t>(a * tuples + b)]);
    }
  }
  return out;
}

std::vector<std::vector<int>> all_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    out.push_back(pick);
    int pos = k - 1;
    while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == n - k + pos) {
      --pos;
    }
    if (pos < 0) {
      break;
    }
    ++pick[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i) {
      pick[static_cast<std::size_t>(i)] =
          pick[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return out;
}

void check_moment_wellformed(const MomentOperator& op) {
  CHECK((op.matrix - op.matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(op.trace() == doctest::Approx(1.0).epsilon(1e-9));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      op.matrix, Eigen::EigenvaluesOnly);
  CHECK(solver.eigenvalues().minCoeff() >= -1e-10);
}

}  // namespace

TEST_CASE("symmetric projector moment: trivial shapes") {
  const auto t1 = sym_projector_moment(4, 1);
  CHECK((t1.matrix - Eigen::MatrixXd::Identity(4, 4) / 4.0)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  // N=2, t=2: unnormalized projector has trace C(3,2) = 3
  const auto p22 = sym_projector_moment(2, 2);
  const Eigen::MatrixXd unnorm = p22.matrix * 3.0;
  CHECK(unnorm.trace() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK((unnorm * unnorm - unnorm).cwiseAbs().maxCoeff() <= 1e-10);

  // N=4, t=3 idempotence
  const auto p43 = sym_projector_moment(4, 3);
  const double tr = binom(4 + 3 - 1, 3);
  const Eigen::MatrixXd proj = p43.matrix * tr;
  CHECK((proj * proj - proj).cwiseAbs().maxCoeff() <= 1e-10);
  check_moment_wellformed(p43);
}

TEST_CASE("type states: trivial forms and orthonormality") {
  SUBCASE("all weight on one level gives |i>^t") {
    TypeVector type(4, 0);
    type[2] = 3;
    const auto vec = type_state(type, 3);
    // tuple (2,2,2) encodes to 2*16 + 2*4 + 2 = 42
    CHECK(vec[42] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vec.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("N=2, T=(1,1) is (|01> + |10>)/sqrt(2)") {
    const auto vec = type_state(TypeVector{1, 1}, 2);
    CHECK(vec[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(vec[2] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(vec[0] == 0.0);
    CHECK(vec[3] == 0.0);
  }

  SUBCASE("all N=4, t=2 types are mutually orthonormal") {
    std::vector<Eigen::VectorXd> states;
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        TypeVector type(4, 0);
        ++type[static_cast<std::size_t>(i)];
        ++type[static_cast<std::size_t>(j)];
        states.push_back(type_state(type, 2));
      }
    }
    CHECK(states.size() == 10);  // C(4,2) + 4
    for (std::size_t a = 0; a < states.size(); ++a) {
      for (std::size_t b = 0; b < states.size(); ++b) {
        const double expected = a == b ? 1.0 : 0.0;
        CHECK(states[a].dot(states[b]) ==
              doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }

  CHECK_THROWS_AS(type_state(TypeVector{1, 1}, 3), std::invalid_argument);
}

TEST_CASE("subset phase moment: closed-form degenerate cases") {
  SUBCASE("singleton subset gives a pure tuple state") {
    const auto op = subset_phase_moment_exact(4, {2}, 3);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(64, 64);
    expected(42, 42) = 1.0;
    CHECK((op.matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }

  SUBCASE("t=1 is maximally mixed on the subset span") {
    const auto op = subset_phase_moment_exact(8, {1, 3, 4}, 1);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(8, 8);
    expected(1, 1) = expected(3, 3) = expected(4, 4) = 1.0 / 3;
    CHECK((op.matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("subset phase moment equals brute-force phase enumeration") {
  const auto op = subset_phase_moment_exact(8, {0, 1, 2, 3}, 2);
  const auto brute = brute_force_phase_average(8, {0, 1, 2, 3}, 2);
  CHECK((op.matrix - brute).cwiseAbs().maxCoeff() <= 1e-12);
  check_moment_wellformed(op);

  // non-contiguous levels and t=3
  const auto op3 = subset_phase_moment_exact(6, {0, 2, 5}, 3);
  const auto brute3 = brute_force_phase_average(6, {0, 2, 5}, 3);
  CHECK((op3.matrix - brute3).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("averaged subset moment: trivial identities") {
  const auto full = averaged_subset_moment(2, 2, 1);
  CHECK((full.matrix - Eigen::MatrixXd::Identity(2, 2) / 2.0)
            .cwiseAbs()
            .maxCoeff() <= 1e-12);

  const auto avg44 = averaged_subset_moment(4, 4, 2);
  const auto single = subset_phase_moment_exact(4, {0, 1, 2, 3}, 2);
  CHECK((avg44.matrix - single.matrix).cwiseAbs().maxCoeff() <= 1e-12);

  check_moment_wellformed(averaged_subset_moment(8, 4, 2));
}

TEST_CASE("averaged subset moment matches the combinatorial closed form") {
  // Second algebraic route: entry (x,y) averages the parity indicator
  // over the C(N-u, K-u) subsets containing all levels of both tuples.
  const int N = 6;
  const int K = 3;
  const int t = 2;
  const auto avg = averaged_subset_moment(N, K, t);

  const std::int64_t dim = ipow(N, t);
  auto decode = [&](std::int64_t code) {
    std::vector<int> tuple(static_cast<std::size_t>(t));
    for (int i = t - 1; i >= 0; --i) {
      tuple[static_cast<std::size_t>(i)] = static_cast<int>(code % N);
      code /= N;
    }
    return tuple;
  };
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(dim, dim);
  for (std::int64_t x = 0; x < dim; ++x) {
    for (std::int64_t y = 0; y < dim; ++y) {
      const auto tx = decode(x);
      const auto ty = decode(y);
      std::uint32_t px = 0;
      std::uint32_t py = 0;
      std::uint32_t uni = 0;
      for (int v : tx) {
        px ^= 1u << v;
        uni |= 1u << v;
      }
      for (int v : ty) {
        py ^= 1u << v;
        uni |= 1u << v;
      }
      if (px != py) {
        continue;
      }
      const int u = __builtin_popcount(uni);
      expected(x, y) = binom(N - u, K - u) / binom(N, K) /
                       std::pow(static_cast<double>(K), t);
    }
  }
  CHECK((avg.matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("trace distance: closed forms") {
  const auto a = sym_projector_moment(4, 2);
  CHECK(trace_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));

  // orthogonal pure states: distance 1
  MomentOperator p1;
  p1.t = 1;
  p1.single_dim = 4;
  p1.matrix = Eigen::MatrixXd::Zero(4, 4);
  p1.matrix(0, 0) = 1.0;
  MomentOperator p2 = p1;
  p2.matrix(0, 0) = 0.0;
  p2.matrix(3, 3) = 1.0;
  CHECK(trace_distance(p1, p2) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(trace_distance(p1, sym_projector_moment(3, 2)),
                  std::invalid_argument);
}

TEST_CASE("haar-moment closeness: exact checks at small sizes") {
  SUBCASE("K=N, t=1: both are maximally mixed") {
    const auto r = verify_theorem31(4, 4, 1);
    CHECK(r.td <= 1e-9);
  }

  SUBCASE("distance decreases in the subset size while K < N") {
    // Exact values (verified against literal phase-function enumeration):
    // at K = N the ensemble collapses to a single subset and the
    // distance rises again, so the decrease only holds below N.
    const auto r2 = verify_theorem31(8, 2, 2);
    const auto r4 = verify_theorem31(8, 4, 2);
    const auto r8 = verify_theorem31(8, 8, 2);
    CHECK(r2.td == doctest::Approx(5.0 / 18).epsilon(1e-9));
    CHECK(r4.td == doctest::Approx(7.0 / 72).epsilon(1e-9));
    CHECK(r8.td == doctest::Approx(7.0 / 36).epsilon(1e-9));
    CHECK(r2.td > r4.td);
    CHECK(r8.td > r4.td);  // single-subset endpoint breaks monotonicity

    const auto s2 = verify_theorem31(16, 2, 2);
    const auto s4 = verify_theorem31(16, 4, 2);
    const auto s8 = verify_theorem31(16, 8, 2);
    CHECK(s2.td == doctest::Approx(13.0 / 34).epsilon(1e-9));
    CHECK(s4.td == doctest::Approx(9.0 / 68).epsilon(1e-9));
    CHECK(s8.td == doctest::Approx(15.0 / 272).epsilon(1e-9));
    CHECK(s2.td > s4.td);
    CHECK(s4.td > s8.td);
  }

  SUBCASE("bound ratio at N=8, K=4, t=2 is within the derived constant") {
    const auto r = verify_theorem31(8, 4, 2);
    CHECK(r.td <= 2.0 * 2 * 2 / 4.0);
    CHECK(r.bound_ratio <= 2.0);
  }
}

TEST_CASE("type-state average approaches the subset projector") {
  // TD <= 2 t^2 / |S| for every tested size
  for (int s : {4, 6, 8}) {
    for (int t : {2, 3}) {
      if (ipow(8, t) > kMomentDenseCap) {
        continue;
      }
      std::vector<int> levels(static_cast<std::size_t>(s));
      std::iota(levels.begin(), levels.end(), 0);
      const auto types = type_state_moment(8, levels, t);
      const auto proj = sym_projector_moment_subset(8, levels, t);
      const double td = trace_distance(types, proj);
      CHECK(td <= 2.0 * t * t / static_cast<double>(s));
    }
  }
}

TEST_CASE("subset-averaged projector approaches the full projector") {
  // TD(E_S proj_S, proj_N) <= 2 t^2 / K
  const int N = 8;
  const int t = 2;
  for (int K : {3, 4, 6}) {
    Eigen::MatrixXd avg = Eigen::MatrixXd::Zero(64, 64);
    const auto subsets = all_subsets(N, K);
    for (const auto& subset : subsets) {
      avg += sym_projector_moment_subset(N, subset, t).matrix;
    }
    avg /= static_cast<double>(subsets.size());
    MomentOperator avg_op;
    avg_op.t = t;
    avg_op.single_dim = N;
    avg_op.matrix = std::move(avg);
    const double td = trace_distance(avg_op, sym_projector_moment(N, t));
    CHECK(td <= 2.0 * t * t / static_cast<double>(K));
  }
}

TEST_CASE("budget refusals") {
  CHECK_THROWS_AS(sym_projector_moment(16, 4), std::invalid_argument);
  CHECK_THROWS_AS(averaged_subset_moment(17, 4, 2), std::invalid_argument);
  CHECK_THROWS_AS(subset_phase_moment_exact(4, {0, 9}, 2),
                  std::invalid_argument);
}

TEST_CASE("theorem csv formatting") {
  const auto r = verify_theorem31(4, 2, 1);
  const std::string row = theorem31_csv_row(r);
  CHECK(row.find("4,2,1,") == 0);
  CHECK(theorem31_csv_header() == "N,K,t,td,bound_ratio\n");
}
