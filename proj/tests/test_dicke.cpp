#include <gtest/gtest.h>

#include "lucorr/lucorr.hpp"
#include "oracle.hpp"

using namespace lucorr;

namespace {

std::vector<double> dense_strengths(const DensityMatrix& rho) {
  return strengths_from_subset_purities(rho.dims(), subset_purities(rho));
}

}  // namespace

TEST(DickeState, AmplitudesAndNormalization) {
  const auto v = dicke_vector(3, 1);
  EXPECT_NEAR(std::abs(v(0b100)), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(std::abs(v(0b011)), 0.0, 1e-15);
  EXPECT_NEAR(v.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(dicke_vector(4, 0)(0)), 1.0, 1e-15);
}

TEST(DickeState, SectorWeightsGiveReducedState) {
  const DickeState s(5, 2);
  const auto rho = dicke_state(5, 2);
  for (std::size_t k = 1; k <= 4; ++k) {
    const auto w = s.sector_weights(k);
    double sum = 0.0, pur = 0.0;
    for (double x : w) {
      sum += x;
      pur += x * x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
    const std::uint64_t keep = (std::uint64_t{1} << k) - 1;
    const Eigen::MatrixXcd reduced = oracle::partial_trace(rho.matrix(), rho.dims(), keep);
    EXPECT_NEAR((reduced * reduced).trace().real(), pur, 1e-12);
  }
}

TEST(DickeState, RejectsBadParameters) {
  EXPECT_THROW(DickeState(0, 0), Error);
  EXPECT_THROW(DickeState(3, 4), Error);
  EXPECT_THROW(dicke_vector(11, 1), Error);
}

TEST(Dicke, WFormula) {
  for (std::size_t n = 2; n <= 20; ++n)
    for (std::size_t s = 0; s <= n; ++s) {
      const double nn = static_cast<double>(n), ss = static_cast<double>(s);
      EXPECT_NEAR(dicke_strength(n, 1, s), (nn * nn + 8 * ss * ss - 4 * (nn + 1) * ss) / (nn * nn), 1e-12);
    }
  EXPECT_NEAR(dicke_strength(3, 1, 3), 11.0 / 3.0, 1e-15);
}

TEST(Dicke, MatchesDense) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t m = 0; m <= n; ++m) {
      const auto dense = dense_strengths(dicke_state(n, m));
      for (std::uint64_t mask = 1; mask < dense.size(); ++mask)
        EXPECT_NEAR(dicke_strength(n, m, PartySet(mask).size()), dense[mask], 1e-10) << n << ',' << m;
    }
}

TEST(Dicke, SymmetryUnderFlip) {
  for (std::size_t n = 2; n <= 30; n += 7)
    for (std::size_t m = 0; m <= n; ++m)
      for (std::size_t s = 0; s <= n; ++s) EXPECT_DOUBLE_EQ(dicke_strength(n, m, s), dicke_strength(n, n - m, s));
}

TEST(Dicke, WThreshold) {
  EXPECT_EQ(w_detection_threshold(2), 2u);
  EXPECT_EQ(w_detection_threshold(3), 3u);
  for (std::size_t n = 2; n <= 40; ++n) {
    const auto t = w_detection_threshold(n);
    EXPECT_GT(2 * t, n + 1);
    EXPECT_LE(2 * (t - 1), n + 1);
  }
}

TEST(Dicke, LargeNStaysExact) {
  // L_P(W_n) - (n^2 + 8n^2 - 4(n+1)n)/n^2 = 0 even where doubles would cancel badly
  const double n = 60.0;
  EXPECT_NEAR(dicke_strength(60, 1, 60), (n * n + 8 * n * n - 4 * (n + 1) * n) / (n * n), 1e-12);
  EXPECT_NEAR(dicke_strength(60, 30, 0), 1.0, 1e-15);
  EXPECT_THROW(dicke_strength(3, 4, 1), Error);
}
