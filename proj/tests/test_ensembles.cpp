#include <gtest/gtest.h>

#include <distillcert/ensembles.hpp>
#include <distillcert/range.hpp>

#include "oracles.hpp"

using namespace distillcert;

TEST(Werner, BoundaryAndBadParams) {
    const BipartiteState w = werner({2, 1.0, -1e-9});
    EXPECT_LT(linalg::max_abs(w.matrix() - Matrix::Identity(4, 4) / 4.0), 1e-9);
    EXPECT_NEAR(min_pt_eig(werner({3, 1.0, -1.0}), Side::A).value, -1.0 / 3.0, 1e-12);
    for (WernerParams bad : {WernerParams{1, 1.0, -0.5}, WernerParams{3, 1.0, 0.5}, WernerParams{3, 1.0, -1.5}}) {
        try {
            werner(bad);
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::BadParams);
        }
    }
}

TEST(Werner, SpectrumOfFiftyDraws) {
    // a I + b F: eigenvalue a + b on the symmetric, a - b on the antisymmetric subspace
    auto rng = random::engine(81);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const int n = 2 + k % 3;
        const double a = 0.1 + u(rng), b = -a * u(rng);
        const linalg::Eigh eig = linalg::eigh_desc(werner({n, a, b}).matrix());
        const double tr = a * n * n + b * n;
        const int anti = n * (n - 1) / 2;
        for (int i = 0; i < anti; ++i) ASSERT_NEAR(eig.values(i), (a - b) / tr, 1e-10);
        for (int i = anti; i < n * n; ++i) ASSERT_NEAR(eig.values(i), (a + b) / tr, 1e-10);
        const auto pt = oracle::werner_pt_spectrum(n, a, b);
        ASSERT_NEAR(min_pt_eig(werner({n, a, b}), Side::A).value, *std::min_element(pt.begin(), pt.end()), 1e-10);
    }
}

TEST(Tiles, PptRankFourNoReductionWitness) {
    const BipartiteState t = tiles_upb_state();
    EXPECT_EQ(rank_of(t), 4);
    EXPECT_GE(min_pt_eig(t, Side::A).value, -1e-12);
    EXPECT_GE(min_pt_eig(t, Side::B).value, -1e-12);
    EXPECT_FALSE(reduction_witness(t));
}

TEST(RandomRank, DeterministicAndFullRank) {
    EXPECT_EQ(rank_of(random_rank_r({3, 3}, 1, 5)), 1);
    EXPECT_EQ(linalg::max_abs(random_rank_r({3, 3}, 3, 9).matrix() - random_rank_r({3, 3}, 3, 9).matrix()), 0.0);
    for (int seed = 1; seed <= 1000; ++seed) ASSERT_EQ(rank_of(random_rank_r({3, 3}, 3, seed)), 3) << seed;
    try {
        random_rank_r({2, 2}, 5, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::BadRank);
    }
}

TEST(RandomRankThreeNpt, AcceptanceCondition) {
    for (int seed = 1; seed <= 200; ++seed) {
        const SampledState s = random_rank3_npt(seed);
        ASSERT_LT(min_pt_eig(s.state, Side::A).value, -1e-6);
        ASSERT_EQ(rank_of(s.state), 3);
        ASSERT_EQ(linalg::max_abs(s.state.matrix() - random_rank3_npt(seed).state.matrix()), 0.0);
    }
}

TEST(Sigma3, DegenerateAndGeneric) {
    Sigma3Params zero;
    const BipartiteState s = sigma3_state(zero);  // |00>, |11>, (|0>+|1>)|2>: all products
    EXPECT_EQ(rank_of(s), 3);
    EXPECT_GE(min_pt_eig(s, Side::A).value, -1e-12);

    // the |00>, |11>, |02> components keep the vectors independent for finite parameters
    Sigma3Params nan = random_sigma3_params(1);
    nan.alpha = std::numeric_limits<double>::quiet_NaN();
    try {
        sigma3_state(nan);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateParams);
    }

    Sigma3Params generic = random_sigma3_params(2);
    generic.x = Vector::Zero(3);
    generic.x(1) = 1.0;
    EXPECT_LT(min_pt_eig(sigma3_state(generic), Side::A).value, -1e-8);
}

TEST(SharedFactorFamily, ConstructionAndValidation) {
    for (int seed = 1; seed <= 50; ++seed) {
        Eq15Params p = random_eq15_params(seed);
        EXPECT_EQ(rank_of(eq15_state(p)), 4);
        p.lambdas = {0.3, 0.3, 0.2, 0.2};
        EXPECT_EQ(rank_of(eq15_state(p)), 4);
    }
    Eq15Params bad = random_eq15_params(1);
    bad.lambdas = {0.5, 0.5, 0.1, 0.1};
    EXPECT_THROW(eq15_state(bad), Error);
    bad = random_eq15_params(1);
    bad.c(0, 0) = 0.5;
    EXPECT_THROW(eq15_state(bad), Error);
}

TEST(Fixtures, PlantedFamiliesHaveTheirStructure) {
    for (int seed = 1; seed <= 10; ++seed) {
        const BipartiteState l2 = equal_weight_rank3_npt(seed, true).state;
        EXPECT_EQ(rank_of(l2), 3);
        EXPECT_TRUE(find_product_in_range(l2).found);
        for (int da : {3, 4}) {
            const BipartiteState l3 = planted_rank4_npt(da, seed).state;
            EXPECT_EQ(rank_of(l3), 4);
            EXPECT_LT(linalg::max_abs(partial_trace(l3, Side::B) - Matrix::Identity(4, 4) / 4.0), 1e-8);
            EXPECT_TRUE(find_product_in_range(l3).found);
        }
        const BipartiteState ew = equal_weight_rank3_npt(seed, false).state;
        EXPECT_LT(linalg::max_abs(partial_trace(ew, Side::B) - Matrix::Identity(3, 3) / 3.0), 1e-8);
    }
}
