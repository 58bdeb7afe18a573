#include <gtest/gtest.h>

#include "lucorr/lucorr.hpp"
#include "oracle.hpp"

using namespace lucorr;

namespace {

Eigen::MatrixXcd swap_operator(std::size_t d) {
  const auto D = static_cast<Eigen::Index>(d);
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(D * D, D * D);
  for (Eigen::Index i = 0; i < D; ++i)
    for (Eigen::Index j = 0; j < D; ++j) s(i * D + j, j * D + i) = 1.0;
  return s;
}

}  // namespace

TEST(Pattern, ParseAndPrint) {
  const auto p = ContractionPattern::parse("0,j,k; i,j,0; i,0,k");
  EXPECT_EQ(p.degree(), 3u);
  EXPECT_EQ(p.parties(), 3u);
  EXPECT_EQ(p.variable_count(), 3u);
  EXPECT_EQ(p.to_string(), "0,j,k; i,j,0; i,0,k");
  EXPECT_EQ(ContractionPattern::strength(PartySet::of({0, 2}), 3).to_string(), "i1,0,i3; i1,0,i3");
}

TEST(Pattern, RejectsMalformed) {
  for (const char* bad : {"i,0; i,0; i,0", "i,0; 0,i", "i,j; i", "i,0; 1,0", "i,0; i-,0", ""}) {
    try {
      ContractionPattern::parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::pattern) << bad;
    }
  }
}

TEST(Pattern, StrengthPatternEqualsStrength) {
  Rng rng(51);
  for (const auto& dims : std::vector<Dims>{{2, 2, 2}, {2, 3}, {3, 2, 2}}) {
    const auto rho = random_state(dims, 2, rng);
    const auto t = expand(rho);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dims.size()); ++mask) {
      const PartySet s(mask);
      EXPECT_NEAR(contract(t, ContractionPattern::strength(s, dims.size())), strength_from_coeffs(t, s), 1e-12);
    }
    EXPECT_NEAR(contract(t, ContractionPattern::trivial(dims.size())), 1.0, 1e-12);
  }
}

TEST(Pattern, XabcMatchesPatternAndProductOverlap) {
  Rng rng(52);
  const Dims dims{2, 3, 2};
  const auto rho = random_state(dims, 2, rng);
  const auto t = expand(rho);
  const double x = x_abc(t);
  EXPECT_NEAR(contract(t, ContractionPattern::parse("i,0,0; 0,j,0; 0,0,k; i,j,k")), x, 1e-12);
  const auto r1 = partial_trace(rho, PartySet::of({0}));
  const auto r2 = partial_trace(rho, PartySet::of({1}));
  const auto r3 = partial_trace(rho, PartySet::of({2}));
  const Eigen::MatrixXcd marginals = tensor(tensor(r1, r2), r3).matrix();
  const Eigen::MatrixXcd xi = xi_projection(rho, PartySet::full(3));
  EXPECT_NEAR(x, static_cast<double>(rho.dimension()) * (marginals * xi).trace().real(), 1e-12);
}

TEST(Pattern, RandomPatternsAreLocalUnitaryInvariant) {
  Rng rng(53);
  std::mt19937_64 prng(54);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims{2, 2, 2};
    const auto pattern = ContractionPattern::parse(oracle::random_pattern(3, 4, prng));
    const auto rho = random_state(dims, 2, rng);
    const auto moved = apply_local(rho, random_local_unitary(dims, rng));
    EXPECT_NEAR(contract(expand(rho), pattern), contract(expand(moved), pattern), 1e-10) << pattern.to_string();
  }
}

TEST(KCopy, MsOnBell) {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(4);
  ket(0) = ket(3) = 1.0;
  const auto bell = pure_state(ket, {2, 2});
  EXPECT_NEAR(evaluate_k_copy(m_s_observable(PartySet::full(2), {2, 2}), bell), 3.0, 1e-12);
}

TEST(KCopy, MsMatchesStrength) {
  Rng rng(55);
  for (const auto& dims : std::vector<Dims>{{2, 2}, {2, 3}, {2, 2, 2}}) {
    const auto rho = random_state(dims, 2, rng);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dims.size()); ++mask)
      EXPECT_NEAR(evaluate_k_copy(m_s_observable(PartySet(mask), dims), rho), strength_from_purities(rho, PartySet(mask)),
                  1e-10);
  }
}

TEST(KCopy, SwapGivesPurityAndIdentityGivesOne) {
  Rng rng(56);
  const Dims dims{2, 3};
  const auto rho = random_state(dims, 3, rng);
  EXPECT_NEAR(evaluate_k_copy(KCopyObservable{2, dims, swap_operator(6)}, rho), purity(rho), 1e-12);
  EXPECT_NEAR(evaluate_k_copy(KCopyObservable{3, dims, Eigen::MatrixXcd::Identity(216, 216)}, rho), 1.0, 1e-12);
}

TEST(KCopy, CapAndShapeErrors) {
  try {
    KCopyObservable{3, {2, 2, 2, 2, 2}, Eigen::MatrixXcd::Identity(2, 2)}.check();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_cap);
  }
  EXPECT_THROW((KCopyObservable{2, {2}, Eigen::MatrixXcd::Identity(3, 3)}.check()), Error);
  EXPECT_THROW(m_s_observable(PartySet::full(7), Dims(7, 2)), Error);
}

TEST(Commutant, AcceptsInvariantsAndRejectsOthers) {
  const Dims dims{2, 2};
  EXPECT_TRUE(commutant_check(m_s_observable(PartySet::of({0}), dims), 10, 1));
  EXPECT_TRUE(commutant_check(KCopyObservable{2, dims, swap_operator(4)}, 10, 2));
  Eigen::MatrixXcd zi = Eigen::MatrixXcd::Zero(16, 16);
  zi.diagonal().setConstant(1.0);
  zi.topLeftCorner(8, 8) *= -1.0;  // Z on the first qubit of copy 1
  EXPECT_FALSE(commutant_check(KCopyObservable{2, dims, zi}, 10, 3));
}

TEST(Symmetrize, SplitsIntoHermitianParts) {
  Rng rng(57);
  const Eigen::MatrixXcd f = ginibre(5, 5, rng);
  const auto [a, b] = symmetrize(f);
  EXPECT_LT((a - a.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((b - b.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((a + cplx(0, 1) * b - f).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Pattern, HomogeneousOfItsDegree) {
  Rng rng(58);
  std::mt19937_64 prng(59);
  const auto t = expand(random_state({2, 2, 2}, 2, rng));
  for (int trial = 0; trial < 5; ++trial) {
    const auto pattern = ContractionPattern::parse(oracle::random_pattern(3, 2 + static_cast<std::size_t>(trial % 3), prng));
    auto scaled = t;
    const double lambda = 1.7;
    for (auto& v : scaled.values()) v *= lambda;
    EXPECT_NEAR(contract(scaled, pattern), std::pow(lambda, static_cast<double>(pattern.degree())) * contract(t, pattern),
                1e-9 * std::pow(lambda, static_cast<double>(pattern.degree())));
  }
}
