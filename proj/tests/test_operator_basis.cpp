#include <gtest/gtest.h>

#include "lucorr/lucorr.hpp"
#include "oracle.hpp"

using namespace lucorr;

class BasisDims : public ::testing::TestWithParam<std::size_t> {};

TEST_P(BasisDims, OrthogonalWithTraceD) {
  const std::size_t d = GetParam();
  const auto& basis = shared_local_basis(d);
  ASSERT_EQ(basis.size(), d * d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& gi = basis.generator(i);
    EXPECT_LT((gi - gi.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    if (i > 0) EXPECT_NEAR(std::abs(gi.trace()), 0.0, 1e-13);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const cplx g = (gi * basis.generator(j)).trace();
      EXPECT_NEAR(g.real(), i == j ? static_cast<double>(d) : 0.0, 1e-12);
      EXPECT_NEAR(g.imag(), 0.0, 1e-12);
    }
  }
}

TEST_P(BasisDims, MatchesReferenceGellMann) {
  const std::size_t d = GetParam();
  const auto ref = oracle::gell_mann(d);
  const auto& basis = shared_local_basis(d);
  for (std::size_t i = 0; i < basis.size(); ++i) EXPECT_LT((basis.generator(i) - ref[i]).cwiseAbs().maxCoeff(), 1e-13);
}

TEST_P(BasisDims, SparseMatchesDense) {
  const std::size_t d = GetParam();
  const auto& basis = shared_local_basis(d);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& e : basis.nonzeros(i)) m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
    EXPECT_LT((m - basis.generator(i)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

INSTANTIATE_TEST_SUITE_P(Dims, BasisDims, ::testing::Values(2, 3, 4, 5));

TEST(OperatorBasis, QubitIsPauli) {
  const auto& b = shared_local_basis(2);
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  z << 1, 0, 0, -1;
  EXPECT_LT((b.generator(1) - x).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((b.generator(2) - y).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((b.generator(3) - z).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(OperatorBasis, RejectsDimensionBelowTwo) {
  EXPECT_THROW(LocalBasis(1), Error);
  EXPECT_THROW(LocalBasis(0), Error);
  try {
    LocalBasis b(1);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_dimension);
  }
}

TEST(MultiIndex, LinearRoundTrip) {
  const Dims dims{2, 3, 2};
  for (std::size_t k = 0; k < 4 * 9 * 4; ++k) {
    const auto idx = MultiIndex::from_linear(k, dims);
    EXPECT_EQ(idx.linear(), k);
  }
  EXPECT_EQ(MultiIndex({1, 0, 0}, dims).linear(), 36u);
  EXPECT_THROW(MultiIndex({4, 0, 0}, dims), Error);
  EXPECT_THROW(MultiIndex({0, 0}, dims), Error);
}

TEST(MultiIndex, SupportAndEnumeration) {
  const Dims dims{2, 3, 2};
  const PartySet s = PartySet::of({0, 1});
  const auto all = indices_with_support(s, dims);
  EXPECT_EQ(all.size(), 3u * 8u);
  for (std::size_t k = 0; k < all.size(); ++k) {
    EXPECT_EQ(support(all[k]), s);
    if (k) EXPECT_LT(all[k - 1].linear(), all[k].linear());
  }
  EXPECT_EQ(indices_with_support(PartySet(), dims).size(), 1u);
}

TEST(MultiIndex, SparseProductMatchesKronecker) {
  const Dims dims{2, 3};
  for (std::size_t k = 0; k < 4 * 9; ++k) {
    const auto idx = MultiIndex::from_linear(k, dims);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(6, 6);
    for_each_basis_nonzero(idx, [&](std::size_t r, std::size_t c, cplx v) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) += v;
    });
    const auto ref = oracle::kron(oracle::gell_mann(2)[idx[0]], oracle::gell_mann(3)[idx[1]]);
    EXPECT_LT((m - ref).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((basis_element(idx) - ref).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(PartySet, Basics) {
  const auto s = PartySet::of({0, 2});
  EXPECT_EQ(s.label(), "{1,3}");
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.complement(3), PartySet::of({1}));
  EXPECT_TRUE(s.subset_of(PartySet::full(3)));
  EXPECT_THROW(check_parties(s, 2), Error);
  EXPECT_EQ(dimension_of(Dims{2, 3, 4}, s), 8u);
}

TEST(MultiIndex, SupportsPartitionAllIndices) {
  for (const auto& dims : std::vector<Dims>{{2, 2, 2}, {3, 2}, {2, 3, 3}}) {
    std::vector<int> hits(dimension_of(dims) * dimension_of(dims), 0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dims.size()); ++mask)
      for (const auto& idx : indices_with_support(PartySet(mask), dims)) ++hits.at(idx.linear());
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}

TEST(MultiIndex, ProductBasisIsOrthogonalExhaustive) {
  // tr(B B') from the sparse entries, every pair, n <= 3 and d_a <= 3
  for (const auto& dims : std::vector<Dims>{{2}, {3}, {2, 3}, {3, 3}, {2, 2, 2}, {3, 2, 3}, {3, 3, 3}}) {
    const std::size_t d = dimension_of(dims);
    const std::size_t count = d * d;
    std::vector<std::vector<SparseEntry>> elems(count);
    for (std::size_t k = 0; k < count; ++k)
      for_each_basis_nonzero(MultiIndex::from_linear(k, dims),
                             [&](std::size_t r, std::size_t c, cplx v) { elems[k].push_back({r, c, v}); });
    std::size_t bad = 0;
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i; j < count; ++j) {
        cplx tr(0.0, 0.0);
        for (const auto& a : elems[i])
          for (const auto& b : elems[j])
            if (a.col == b.row && a.row == b.col) tr += a.value * b.value;
        const double expected = i == j ? static_cast<double>(d) : 0.0;
        if (std::abs(tr - expected) > 1e-12) ++bad;
      }
    EXPECT_EQ(bad, 0u);
  }
}
