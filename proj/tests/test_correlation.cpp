#include <gtest/gtest.h>

#include "lucorr/lucorr.hpp"
#include "oracle.hpp"

using namespace lucorr;

namespace {

const std::vector<Dims> kShapes{{2, 2}, {2, 3}, {3, 3}, {2, 2, 2}, {2, 3, 2}};

DensityMatrix bell() {
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(4);
  ket(0) = ket(3) = 1.0;
  return pure_state(ket, {2, 2});
}

std::vector<double> all_strengths(const DensityMatrix& rho) {
  return strengths_from_subset_purities(rho.dims(), subset_purities(rho));
}

}  // namespace

TEST(Strength, ThreeRoutesAgreeWithOracle) {
  Rng rng(21);
  for (const auto& dims : kShapes) {
    for (std::size_t rank : {1, 3}) {
      const auto rho = random_state(dims, rank, rng);
      const auto t = expand(rho);
      const auto table = all_strengths(rho);
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dims.size()); ++mask) {
        const PartySet s(mask);
        const double ref = oracle::strength(rho.matrix(), dims, mask);
        EXPECT_NEAR(strength_from_coeffs(t, s), ref, 1e-10);
        EXPECT_NEAR(strength_from_purities(rho, s), ref, 1e-10);
        EXPECT_NEAR(table[mask], ref, 1e-10);
        const Eigen::MatrixXcd xi = xi_projection(rho, s);
        EXPECT_NEAR(static_cast<double>(rho.dimension()) * (xi.adjoint() * xi).trace().real(), ref, 1e-10);
      }
    }
  }
}

TEST(Strength, ProductBound) {
  EXPECT_DOUBLE_EQ(pure_product_bound(PartySet::of({0, 1}), {2, 2}), 1.0);
  EXPECT_DOUBLE_EQ(pure_product_bound(PartySet::of({0, 1}), {3, 3}), 4.0);
  EXPECT_DOUBLE_EQ(pure_product_bound(PartySet::of({0, 2}), {2, 5, 4}), 3.0);
}

TEST(Strength, PureProductStatesSaturateTheBound) {
  Rng rng(22);
  for (const auto& dims : kShapes) {
    const auto rho = pure_state(random_product_ket(dims, rng), dims);
    const auto table = all_strengths(rho);
    for (std::uint64_t mask = 1; mask < table.size(); ++mask)
      EXPECT_NEAR(table[mask], pure_product_bound(PartySet(mask), dims), 1e-10);
  }
}

TEST(Strength, SumRule) {
  Rng rng(23);
  for (const auto& dims : kShapes) {
    for (std::size_t rank = 1; rank <= 4; ++rank) {
      const auto rho = random_state(dims, rank, rng);
      const auto table = all_strengths(rho);
      double total = 0.0;
      for (std::size_t mask = 1; mask < table.size(); ++mask) total += table[mask];
      EXPECT_NEAR(total, static_cast<double>(rho.dimension()) * purity(rho) - 1.0, 1e-10);
    }
  }
}

TEST(Strength, LocalUnitaryInvariance) {
  Rng rng(24);
  for (const auto& dims : kShapes) {
    const auto rho = random_state(dims, 2, rng);
    const auto moved = apply_local(rho, random_local_unitary(dims, rng));
    const auto a = all_strengths(rho);
    const auto b = all_strengths(moved);
    for (std::size_t mask = 1; mask < a.size(); ++mask) EXPECT_NEAR(a[mask], b[mask], 1e-10);
  }
}

TEST(Strength, SqrtIsConvex) {
  // sqrt(L_S) is a norm of a linear image of rho, hence convex under mixing.
  Rng rng(25);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims{2, 2, 2};
    const auto r1 = random_state(dims, 1, rng);
    const auto r2 = random_state(dims, 2, rng);
    const double p = unit(rng);
    const DensityMatrix mix(p * r1.matrix() + (1 - p) * r2.matrix(), dims);
    const auto a = all_strengths(r1);
    const auto b = all_strengths(r2);
    const auto m = all_strengths(mix);
    for (std::size_t mask = 1; mask < m.size(); ++mask)
      EXPECT_LE(std::sqrt(m[mask]), p * std::sqrt(a[mask]) + (1 - p) * std::sqrt(b[mask]) + 1e-12);
  }
}

TEST(Verdict, BellIsEntangled) {
  const auto report = entanglement_verdict(bell());
  ASSERT_EQ(report.records.size(), 3u);
  const auto* full = report.find(PartySet::of({0, 1}));
  ASSERT_NE(full, nullptr);
  EXPECT_NEAR(full->strength, 3.0, 1e-12);
  EXPECT_TRUE(full->exceeded);
  EXPECT_NEAR(report.find(PartySet::of({0}))->strength, 0.0, 1e-12);
  EXPECT_TRUE(report.entangled());
  ASSERT_TRUE(report.sum_residual);
  EXPECT_LT(*report.sum_residual, 1e-12);
}

TEST(Verdict, MaximallyMixedIsNotFlagged) {
  const auto report = entanglement_verdict(maximally_mixed({2, 3, 2}));
  EXPECT_FALSE(report.entangled());
  for (const auto& r : report.records) EXPECT_NEAR(r.strength, 0.0, 1e-12);
}

TEST(Verdict, RejectsInvalidState) {
  const DensityMatrix scaled(0.9 * maximally_mixed({2, 2}).matrix(), {2, 2});
  try {
    entanglement_verdict(scaled);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::validation);
    EXPECT_NE(std::string(e.what()).find("trace defect"), std::string::npos);
  }
}

TEST(Verdict, SubsetCapKeepsFullSet) {
  const auto subsets = sweep_subsets(5, 2);
  EXPECT_EQ(subsets.size(), 5u + 10u + 1u);
  EXPECT_EQ(subsets.back(), PartySet::full(5));
  EXPECT_EQ(sweep_subsets(4, std::nullopt).size(), 15u);
  EXPECT_FALSE(default_subset_cap(12));
  EXPECT_EQ(default_subset_cap(13), std::size_t{4});
}

TEST(Coarsening, AdjacentMergeMatchesDenseRegrouping) {
  Rng rng(26);
  for (const auto& dims : std::vector<Dims>{{2, 2, 2}, {2, 3, 2}, {2, 2, 3, 2}}) {
    const auto rho = random_state(dims, 2, rng);
    for (std::size_t a = 0; a + 1 < dims.size(); ++a) {
      const auto coarse = coarsen_strengths(strength_map(rho), a, a + 1);
      Dims merged = dims;
      merged[a] = dims[a] * dims[a + 1];
      merged.erase(merged.begin() + static_cast<std::ptrdiff_t>(a + 1));
      const auto direct = strength_map(DensityMatrix(rho.matrix(), merged));
      ASSERT_EQ(coarse.dims, merged);
      for (std::size_t mask = 0; mask < coarse.strength.size(); ++mask) {
        EXPECT_NEAR(coarse.strength[mask], direct.strength[mask], 1e-10);
        EXPECT_NEAR(coarse.bound[mask], direct.bound[mask], 1e-12);
      }
    }
  }
}

TEST(Coarsening, GhzMergeOfLastTwo) {
  const auto coarse = coarsen_strengths(strength_map(ghz_state(3)), 1, 2);
  EXPECT_EQ(coarse.dims, (Dims{2, 4}));
  EXPECT_NEAR(coarse.strength[0b11], 6.0, 1e-12);
  EXPECT_NEAR(coarse.bound[0b11], 3.0, 1e-12);
  EXPECT_NEAR(coarse.strength[0b10], 1.0, 1e-12);
}

TEST(Coarsening, BellMergedIsSingleParty) {
  const auto coarse = coarsen_strengths(strength_map(bell()), 0, 1);
  EXPECT_EQ(coarse.dims, (Dims{4}));
  EXPECT_NEAR(coarse.strength[1], 3.0, 1e-12);
  EXPECT_NEAR(coarse.bound[1], 3.0, 1e-12);
}

TEST(Coarsening, RejectsBadParties) {
  const auto fine = strength_map(bell());
  EXPECT_THROW(coarsen_strengths(fine, 0, 0), Error);
  EXPECT_THROW(coarsen_strengths(fine, 0, 2), Error);
}

TEST(Streaming, BellDetectsOnSecondCorrelator) {
  const Dims dims{2, 2};
  StreamingLowerBound stream(PartySet::of({0, 1}), dims);
  const auto rho = bell();
  const std::vector<std::vector<std::size_t>> order{{3, 3}, {1, 1}, {2, 2}};
  std::vector<double> running;
  for (const auto& i : order) {
    const MultiIndex idx(i, dims);
    running.push_back(stream.push(idx, coefficient(rho, idx)));
  }
  EXPECT_NEAR(running[0], 1.0, 1e-12);
  EXPECT_NEAR(running[1], 2.0, 1e-12);
  EXPECT_NEAR(running[2], 3.0, 1e-12);
  ASSERT_TRUE(stream.detection_step());
  EXPECT_EQ(*stream.detection_step(), 2u);
}

TEST(Streaming, IgnoresOtherSupportsAndRejectsDuplicates) {
  const Dims dims{2, 2};
  StreamingLowerBound stream(PartySet::of({0, 1}), dims);
  stream.push(MultiIndex({3, 0}, dims), 0.9);
  EXPECT_EQ(stream.value(), 0.0);
  EXPECT_EQ(stream.steps(), 1u);
  try {
    stream.push(MultiIndex({3, 0}, dims), 0.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::duplicate_measurement);
  }
}

TEST(Streaming, FullStreamEqualsBatch) {
  Rng rng(27);
  const Dims dims{2, 3, 2};
  const auto rho = random_state(dims, 1, rng);
  const PartySet s = PartySet::of({0, 1, 2});
  StreamingLowerBound stream(s, dims);
  for (const auto& idx : indices_with_support(s, dims)) stream.push(idx, coefficient(rho, idx));
  EXPECT_NEAR(stream.value(), strength_from_coeffs(expand(rho), s), 1e-14);
}

TEST(Streaming, FreeFunctionIsMonotoneAndEndsAtBatch) {
  Rng rng(28);
  const Dims dims{2, 2, 2};
  const auto rho = random_state(dims, 2, rng);
  const PartySet s = PartySet::of({0, 2});
  std::vector<std::pair<MultiIndex, double>> coeffs;
  for (std::size_t k = 0; k < 64; ++k) {
    const auto idx = MultiIndex::from_linear(k, dims);
    coeffs.emplace_back(idx, coefficient(rho, idx));
  }
  std::shuffle(coeffs.begin(), coeffs.end(), rng);
  const auto trace = streaming_lower_bound(coeffs, s, dims);
  ASSERT_EQ(trace.running.size(), 64u);
  for (std::size_t k = 1; k < trace.running.size(); ++k) EXPECT_GE(trace.running[k], trace.running[k - 1]);
  EXPECT_NEAR(trace.running.back(), strength_from_coeffs(expand(rho), s), 1e-14);
}

TEST(Streaming, ZeroStreamStaysZero) {
  const Dims dims{2, 2};
  std::vector<std::pair<MultiIndex, double>> coeffs;
  for (const auto& idx : indices_with_support(PartySet::full(2), dims)) coeffs.emplace_back(idx, 0.0);
  const auto trace = streaming_lower_bound(coeffs, PartySet::full(2), dims);
  for (double v : trace.running) EXPECT_EQ(v, 0.0);
  EXPECT_FALSE(trace.detection_step);
}

TEST(Streaming, GhzDetectsAfterTwoUnitCoefficients) {
  const auto rho = ghz_state(3);
  const PartySet s = PartySet::full(3);
  std::vector<std::pair<MultiIndex, double>> units;
  for (const auto& idx : indices_with_support(s, rho.dims())) {
    const double c = coefficient(rho, idx);
    if (std::abs(c) > 0.5) units.emplace_back(idx, c);
  }
  ASSERT_EQ(units.size(), 4u);
  for (const auto& [idx, c] : units) EXPECT_NEAR(std::abs(c), 1.0, 1e-12);
  const auto trace = streaming_lower_bound(units, s, rho.dims());
  ASSERT_TRUE(trace.detection_step);
  EXPECT_EQ(*trace.detection_step, 2u);
  EXPECT_NEAR(trace.running.back(), 4.0, 1e-12);
}

TEST(Coarsening, NeverStrongerThanFine) {
  Rng rng(29);
  std::size_t checked = 0;
  for (int t = 0; t < 200 && checked < 30; ++t) {
    const Dims dims{2, 2, 2};
    const auto rho = random_separable_state(dims, 1 + static_cast<std::size_t>(t % 4), rng);
    const auto fine = strength_map(rho);
    bool all_within = true;
    for (std::size_t mask = 1; mask < fine.strength.size(); ++mask)
      all_within = all_within && fine.strength[mask] <= fine.bound[mask] + 1e-9;
    if (!all_within) continue;
    ++checked;
    for (std::size_t a1 = 0; a1 < 3; ++a1)
      for (std::size_t a2 = a1 + 1; a2 < 3; ++a2) {
        const auto coarse = coarsen_strengths(fine, a1, a2);
        for (std::size_t mask = 1; mask < coarse.strength.size(); ++mask)
          EXPECT_LE(coarse.strength[mask], coarse.bound[mask] + 1e-9);
      }
  }
  EXPECT_EQ(checked, 30u);
}

TEST(Coarsening, ProductStateSaturatesCoarseBound) {
  Rng rng(30);
  const Dims dims{2, 3, 2};
  const auto coarse = coarsen_strengths(strength_map(pure_state(random_product_ket(dims, rng), dims)), 0, 2);
  for (std::size_t mask = 1; mask < coarse.strength.size(); ++mask)
    EXPECT_NEAR(coarse.strength[mask], coarse.bound[mask], 1e-10);
}

TEST(Strength, MultiplicativeOverTensorProducts) {
  Rng rng(31);
  const auto a = random_state({2, 3}, 2, rng);
  const auto b = random_state({2, 2}, 1, rng);
  const auto ab = tensor(a, b);
  const auto la = all_strengths(a);
  const auto lb = all_strengths(b);
  const auto lab = all_strengths(ab);
  for (std::uint64_t ma = 0; ma < 4; ++ma)
    for (std::uint64_t mb = 0; mb < 4; ++mb) EXPECT_NEAR(lab[ma | (mb << 2)], la[ma] * lb[mb], 1e-10);
}
