#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pseudoent/entanglement.hpp"
#include "pseudoent/statevector.hpp"

using namespace pseudoent;

namespace {

StateVector bell_pair() {
  StateVector state;
  state.n = 2;
  state.amps = Eigen::VectorXcd::Zero(4);
  state.amps[0] = 1.0 / std::sqrt(2.0);
  state.amps[3] = 1.0 / std::sqrt(2.0);
  return state;
}

StateVector basis_state(int n, std::uint64_t idx) {
  StateVector state;
  state.n = n;
  state.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(1) << n);
  state.amps[static_cast<Eigen::Index>(idx)] = 1.0;
  return state;
}

}  // namespace

TEST_CASE("amplitude matrix: product and Bell states") {
  const StateVector zero = basis_state(4, 0);
  const auto m0 = amplitude_matrix(zero, Cut::prefix(4, 2));
  CHECK(m0.rows() == 4);
  CHECK(m0.cols() == 4);
  CHECK(std::abs(m0(0, 0) - 1.0) < 1e-15);
  CHECK(m0.cwiseAbs().sum() == doctest::Approx(1.0));

  const auto mb = amplitude_matrix(bell_pair(), Cut(0b01, 2));
  CHECK(mb.rows() == 2);
  const Eigen::MatrixXcd expected =
      Eigen::MatrixXcd::Identity(2, 2) / std::sqrt(2.0);
  CHECK((mb - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("amplitude matrix: subset phase support limits nonzero rows") {
  auto spec = SubsetPhaseSpec::from_seed(6, 2, 77);
  const StateVector state = build_subset_phase_direct(spec);
  for (std::uint32_t mask = 1; mask < 63; ++mask) {
    const auto mat = amplitude_matrix(state, Cut(mask, 6));
    int nonzero_rows = 0;
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
      if (mat.row(r).cwiseAbs().maxCoeff() > 1e-14) {
        ++nonzero_rows;
      }
    }
    CHECK(nonzero_rows <= 4);
  }
}

TEST_CASE("schmidt spectrum: closed forms") {
  const auto bell = schmidt_spectrum(bell_pair(), Cut(0b01, 2));
  REQUIRE(bell.lambdas.size() >= 2);
  CHECK(bell.lambdas[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bell.lambdas[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto product = schmidt_spectrum(basis_state(4, 9), Cut::half(4));
  CHECK(product.max() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(schmidt_rank(product) == 1);

  const auto haar = schmidt_spectrum(haar_sample(8, 5ull), Cut::half(8));
  CHECK(haar.lambdas.size() == 16);
  CHECK(haar.sum() == doctest::Approx(1.0).epsilon(1e-9));
  for (Eigen::Index i = 0; i < haar.lambdas.size(); ++i) {
    CHECK(haar.lambdas[i] > 0.0);
  }
}

TEST_CASE("entropies of flat and trivial spectra") {
  SchmidtSpectrum flat;
  flat.lambdas = Eigen::ArrayXd::Constant(8, 1.0 / 8);
  CHECK(von_neumann_entropy(flat) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(renyi2_entropy(flat) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(min_entropy(flat) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(schmidt_rank(flat) == 8);

  SchmidtSpectrum pure;
  pure.lambdas = Eigen::ArrayXd::Zero(4);
  pure.lambdas[0] = 1.0;
  CHECK(von_neumann_entropy(pure) == 0.0);
  CHECK(schmidt_rank(pure) == 1);
}

TEST_CASE("subset phase: every-cut entropy cap") {
  const int n = 12;
  const int k = 4;
  auto spec = SubsetPhaseSpec::from_seed(n, k, 8);
  const StateVector state = build_subset_phase_direct(spec);
  const auto report = entropy_scan(state, CutFamily::all_cuts());
  CHECK(report.records.size() == (1u << n) - 2);
  CHECK(report.max_von_neumann() <= k + 1e-9);
  CHECK(report.max_rank() <= 1 << k);
}

TEST_CASE("dist_r: closed forms and monotonicity") {
  const auto bell = schmidt_spectrum(bell_pair(), Cut(0b01, 2));
  CHECK(dist_r(bell, 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(dist_r(bell, 2) == doctest::Approx(0.0).epsilon(1e-12));

  const auto haar = schmidt_spectrum(haar_sample(10, 3ull), Cut::half(10));
  double prev = 1.0;
  for (int r = 1; r <= 32; ++r) {
    const double d = dist_r(haar, r);
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
  CHECK(dist_r(haar, schmidt_rank(haar)) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK_THROWS_AS(dist_r(haar, 0), std::invalid_argument);
}

TEST_CASE("random phase states are far from low-rank states") {
  // half-cut distance to rank-4 states is >= 1/sqrt(2) for nearly all
  // seeds at n=16
  const int n = 16;
  int far = 0;
  const int seeds = 32;
  for (int seed = 0; seed < seeds; ++seed) {
    const SeededKey key(31000 + seed, KeyRole::Phase);
    const StateVector state = build_phase_state(
        n, [key](std::uint64_t x) { return prf_sign(key, x); });
    const auto spectrum = schmidt_spectrum(state, Cut::half(n));
    if (dist_r(spectrum, 4) >= 1.0 / std::sqrt(2.0)) {
      ++far;
    }
  }
  CHECK(far >= seeds - 2);  // expected failure rate is at most 2^{-n/4}
}

TEST_CASE("entropy chain holds on random states") {
  for (int seed = 0; seed < 10; ++seed) {
    const StateVector state = haar_sample(9, 600 + seed);
    for (std::uint32_t mask : {0b000000001u, 0b000001111u, 0b101010101u}) {
      const auto spectrum = schmidt_spectrum(state, Cut(mask, 9));
      const double s = von_neumann_entropy(spectrum);
      const double s2 = renyi2_entropy(spectrum);
      const double smin = min_entropy(spectrum);
      const int rank = schmidt_rank(spectrum);
      CHECK(smin <= s2 + 1e-9);
      CHECK(s2 <= s + 1e-9);
      CHECK(s <= std::log2(static_cast<double>(rank)) + 1e-9);
    }
  }
}

TEST_CASE("cut complementation symmetry") {
  const StateVector state = haar_sample(8, 12ull);
  for (std::uint32_t mask : {0b00000001u, 0b00110101u, 0b01111111u}) {
    const Cut cut(mask, 8);
    const auto a = schmidt_spectrum(state, cut);
    const auto b = schmidt_spectrum(state, cut.complement());
    const Eigen::Index common = std::min(a.lambdas.size(), b.lambdas.size());
    for (Eigen::Index i = 0; i < common; ++i) {
      CHECK(a.lambdas[i] == doctest::Approx(b.lambdas[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("sparse and dense spectrum paths agree") {
  // subset phase states take the sparse path; forcing the dense path by
  // an explicit amplitude matrix must give the same nonzero spectrum
  auto spec = SubsetPhaseSpec::from_seed(10, 3, 55);
  const StateVector state = build_subset_phase_direct(spec);
  for (std::uint32_t mask : {0b0000000001u, 0b0000011111u, 0b1010101010u}) {
    const Cut cut(mask, 10);
    const auto sparse = schmidt_spectrum(state, cut);
    const Eigen::MatrixXcd mat = amplitude_matrix(state, cut);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        mat.rows() <= mat.cols() ? Eigen::MatrixXcd(mat * mat.adjoint())
                                 : Eigen::MatrixXcd(mat.adjoint() * mat),
        Eigen::EigenvaluesOnly);
    Eigen::ArrayXd dense = solver.eigenvalues().array().reverse();
    for (Eigen::Index i = 0; i < sparse.lambdas.size(); ++i) {
      CHECK(sparse.lambdas[i] == doctest::Approx(dense[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("subset phase rank bounded by subset and cut sizes") {
  auto spec = SubsetPhaseSpec::from_seed(10, 4, 21);
  const StateVector state = build_subset_phase_direct(spec);
  for (std::uint32_t mask : {0b0000000011u, 0b0001111111u, 0b0110011001u}) {
    const Cut cut(mask, 10);
    const int rank = schmidt_rank(schmidt_spectrum(state, cut));
    const int bound = std::min({16, 1 << cut.nx(), 1 << cut.ny()});
    CHECK(rank <= bound);
  }
}

TEST_CASE("entropy scan: families and verdict surfaces") {
  SUBCASE("all cuts of a product state have zero entropy") {
    const auto report =
        entropy_scan(basis_state(4, 7), CutFamily::all_cuts());
    CHECK(report.records.size() == 14);
    for (const auto& rec : report.records) {
      CHECK(rec.von_neumann == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(rec.schmidt_rank == 1);
    }
  }

  SUBCASE("contiguous family size") {
    const auto report = entropy_scan(haar_sample(6, 1ull),
                                     CutFamily::contiguous());
    CHECK(report.records.size() == 5);
  }

  SUBCASE("snake family size matches the grid boundary count") {
    // 4x4 grid: 3 vertical + 3 horizontal straight lines
    const auto cuts = enumerate_cuts(16, CutFamily::snake(4));
    CHECK(cuts.size() == 6);
  }

  SUBCASE("all-cuts refused above n = 16") {
    CHECK_THROWS_WITH_AS(enumerate_cuts(18, CutFamily::all_cuts()),
                         doctest::Contains("capped at n = 16"),
                         std::invalid_argument);
  }

  SUBCASE("random family is deterministic in the seed") {
    const auto a = enumerate_cuts(10, CutFamily::random(20, 7));
    const auto b = enumerate_cuts(10, CutFamily::random(20, 7));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].left_mask == b[i].left_mask);
    }
    // ordering by mask value
    for (std::size_t i = 1; i < a.size(); ++i) {
      CHECK(a[i - 1].left_mask < a[i].left_mask);
    }
  }
}

TEST_CASE("snake geometry: straight cuts cross the order at most B times") {
  const int n = 16;
  const int width = 4;
  for (int j = 1; j < width; ++j) {
    const Cut cut(snake_vertical_mask(n, width, j), n);
    const int boundary = snake_boundary_size(n, width, cut);
    CHECK(boundary == 4);
    CHECK(snake_order_crossings(cut) <= boundary);  // c = 1
  }
  for (int i = 1; i < n / width; ++i) {
    const Cut cut(snake_horizontal_mask(n, width, i), n);
    const int boundary = snake_boundary_size(n, width, cut);
    CHECK(boundary == 4);
    CHECK(snake_order_crossings(cut) == 1);
  }
}

TEST_CASE("entropy report serialization") {
  auto spec = SubsetPhaseSpec::from_seed(6, 2, 3);
  const auto report = entropy_scan(build_subset_phase_direct(spec),
                                   CutFamily::contiguous(), 4);
  const std::string csv = report.to_csv();
  CHECK(csv.find("mask,nx,ny") == 0);
  // header + one row per cut
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  const std::string json = report.to_json();
  CHECK(json.find("\"records\"") != std::string::npos);
}

TEST_CASE("cut family parsing") {
  CHECK(CutFamily::parse("all").kind == CutFamilyKind::AllCuts);
  CHECK(CutFamily::parse("contig").kind == CutFamilyKind::Contiguous1D);
  CHECK(CutFamily::parse("snake:4").snake_width == 4);
  CHECK(CutFamily::parse("random:32").count == 32);
  CHECK(CutFamily::parse("random:32:9").seed == 9);
  CHECK_THROWS_AS(CutFamily::parse("bogus"), std::invalid_argument);
}

TEST_CASE("cuts reject empty sides") {
  CHECK_THROWS_AS(Cut(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(Cut(0b1111, 4), std::invalid_argument);
}

TEST_CASE("scans are identical regardless of worker count") {
  const StateVector state = haar_sample(10, 99ull);
  setenv("PSEUDOENT_THREADS", "1", 1);
  const auto serial = entropy_scan(state, CutFamily::all_cuts(), 4);
  unsetenv("PSEUDOENT_THREADS");
  const auto parallel = entropy_scan(state, CutFamily::all_cuts(), 4);
  REQUIRE(serial.records.size() == parallel.records.size());
  CHECK(serial.to_csv() == parallel.to_csv());
}
