#include <gtest/gtest.h>

#include <distillcert/distill.hpp>
#include <distillcert/ensembles.hpp>

using namespace distillcert;

namespace {

LocalOperator random_operator(random::Engine& rng, Side side, int dim) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return make_operator(side, random::invertible(rng, dim), OpKind::ILO);
    case 1: return make_operator(side, random::unitary(rng, dim), OpKind::Unitary);
    default: return make_operator(side, linalg::orthonormalize(random::gaussian_matrix(rng, dim, 2)).adjoint(),
                                  OpKind::Projector);
    }
}

}  // namespace

TEST(Verify, NoClaimFails) {
    const BipartiteState s = random_rank3_npt(1).state;
    Certificate c = certify(s);
    c.claim = Claim::None;
    EXPECT_FALSE(verify(s, c).pass);
}

TEST(Verify, ReportsTerminalDataAndProbability) {
    const BipartiteState s = equal_weight_rank3_npt(2, false).state;
    const Certificate c = certify(s);
    const VerificationReport r = verify(s, c);
    ASSERT_TRUE(r.pass);
    EXPECT_EQ(r.terminal_dims, (Dims{2, 3}));
    EXPECT_LT(r.terminal_min_pt_eig, -1e-8);
    EXPECT_GT(r.cumulative_probability, 0.0);
    EXPECT_LE(r.cumulative_probability, 1.0);
}

TEST(Verify, RandomFakeCertificatesOnTilesAllFail) {
    const BipartiteState tiles = tiles_upb_state();
    auto rng = random::engine(60);
    for (int k = 0; k < 100; ++k) {
        Certificate c;
        BipartiteState t = tiles;
        const int steps = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int i = 0; i < steps; ++i) {
            const Side side = i % 2 ? Side::B : Side::A;
            if (t.dims().of(side) < 3) continue;
            CertificateStep step;
            (side == Side::A ? step.op_a : step.op_b) = random_operator(rng, side, t.dims().of(side));
            t = apply_local(t, step.op_a, step.op_b).state;
            c.steps.push_back(step);
        }
        // witnesses either forged or honestly recomputed on the (PPT) terminal
        const bool honest = k % 2 == 0;
        if (k % 4 < 2) {
            c.claim = Claim::TwoByN_NPT;
            const PtResult pt = min_pt_eig(t, Side::A, -1.0);
            PureVector v = honest ? pt.witness->eigenvector : PureVector(t.dims(), random::unit_vector(rng, t.dims().total()));
            c.claim_data = NptWitness{Side::A, honest ? pt.value : -0.1, v};
        } else {
            c.claim = Claim::ReductionViolated;
            const auto w = reduction_witness_on(t, Side::B, -1.0);
            PureVector v = honest ? w->vector : PureVector(t.dims(), random::unit_vector(rng, t.dims().total()));
            c.claim_data = ReductionWitness{Side::B, v, honest ? w->value : -0.1};
        }
        ASSERT_FALSE(verify(tiles, c).pass) << k;
    }
}

TEST(Verify, RejectsPerturbedCertificates) {
    auto rng = random::engine(61);
    std::normal_distribution<double> noise(0.0, 1.0);
    int total = 0, rejected = 0;
    for (int seed = 1; seed <= 40; ++seed) {
        const BipartiteState s = seed % 2 ? equal_weight_rank3_npt(seed, false).state : planted_rank4_npt(4, seed).state;
        const Certificate c = certify(s);
        ASSERT_TRUE(verify(s, c).pass);
        for (int k = 0; k < 5; ++k) {
            Certificate bad = c;
            for (auto& step : bad.steps)
                for (auto* op : {&step.op_a, &step.op_b})
                    if (*op)
                        for (Eigen::Index i = 0; i < (*op)->matrix.size(); ++i)
                            (*op)->matrix(i) *= 1.0 + 0.1 * Complex(noise(rng), noise(rng));
            if (bad.steps.empty()) {
                if (auto* w = std::get_if<NptWitness>(&bad.claim_data)) w->eigenvalue *= 1.1;
                if (auto* w = std::get_if<ReductionWitness>(&bad.claim_data)) w->value *= 1.1;
            }
            ++total;
            rejected += !verify(s, bad).pass;
        }
    }
    EXPECT_GE(rejected, 0.95 * total) << rejected << "/" << total;
}

TEST(Verify, BrokenOperatorInvariantFails) {
    const BipartiteState s = equal_weight_rank3_npt(3, false).state;
    Certificate c = certify(s);
    ASSERT_FALSE(c.steps.empty());
    auto& step = c.steps.front();
    auto& op = step.op_a ? *step.op_a : *step.op_b;
    op.matrix.setZero();
    const VerificationReport r = verify(s, c);
    EXPECT_FALSE(r.pass);
    ASSERT_FALSE(r.failures.empty());
}

TEST(Verify, TwoByNClaimNeedsQubitFactor) {
    const BipartiteState s = random_rank3_npt(4).state;
    Certificate c;
    c.claim = Claim::TwoByN_NPT;
    c.claim_data = *min_pt_eig(s, Side::A).witness;
    EXPECT_FALSE(verify(s, c).pass);
}
