// Acceptance run: one PASS/FAIL line per criterion; exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include <distillcert/distillcert.hpp>

using namespace distillcert;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool contains(const std::vector<std::string>& trace, const std::string& tag) {
    return std::find(trace.begin(), trace.end(), tag) != trace.end();
}

bool certified(const BipartiteState& s, const Certificate& c) { return c.claim != Claim::None && verify(s, c).pass; }

struct Result {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Result rank3_suite() {
    const auto t0 = Clock::now();
    int ok = 0;
    long rejections = 0;
    std::vector<std::string> failures;
    for (int seed = 1; seed <= 500; ++seed) {
        const SampledState s = random_rank3_npt(seed);
        rejections += s.rejections;
        const Certificate c = certify(s.state);
        if (certified(s.state, c))
            ++ok;
        else
            failures.push_back(std::to_string(seed) + ":" + (c.branch_trace.empty() ? "" : c.branch_trace.back()));
    }
    const double wall = seconds_since(t0);
    for (const auto& f : failures) std::cerr << "criterion 1 failure seed " << f << '\n';
    return {ok >= 495 && wall < 120.0,
            fmt("%d/500 certified and verified, %.2f s, mean rejections %.3f", ok, wall, rejections / 500.0)};
}

Result rank_deficit_suite() {
    int ok = 0;
    for (int seed = 1; seed <= 200; ++seed) {
        const BipartiteState s = random_rank_r({3, 4}, 3, seed);
        const bool shape = rank_of(s) == 3 && reduced_rank(s, Side::B) == 4;
        ok += shape && lemma1_check(s) && reduction_witness(s).has_value();
    }
    return {ok == 200, fmt("%d/200 fixtures with lemma1_check and a reduction witness", ok)};
}

Result product_rank3_suite() {
    int ok = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        const BipartiteState s = equal_weight_rank3_npt(seed, true).state;
        const Certificate c = certify(s);
        ok += contains(c.branch_trace, "product-projector") && certified(s, c);
    }
    return {ok == 100, fmt("%d/100 planted-product states certified through the product-projector branch", ok)};
}

Result rank2_suite() {
    int ok = 0;
    for (int seed = 1; seed <= 200; ++seed) {
        const BipartiteState s = random_rank2_npt(seed).state;
        ok += certified(s, certify(s));
    }
    return {ok == 200, fmt("%d/200 rank-2 NPT states certified and verified", ok)};
}

Result shared_factor_suite() {
    int ok = 0;
    for (int seed = 1; seed <= 100; ++seed) {
        const BipartiteState s = random_eq15_npt(seed).state;
        ok += certified(s, certify(s));
    }
    return {ok >= 99, fmt("%d/100 rank-4 shared-factor states certified and verified", ok)};
}

Result product_rank4_suite() {
    int ok = 0;
    for (int da : {4, 3})
        for (int seed = 1; seed <= 50; ++seed) {
            const BipartiteState s = planted_rank4_npt(da, seed).state;
            const Certificate c = certify(s);
            ok += contains(c.branch_trace, "product-projector-4") && certified(s, c);
        }
    return {ok >= 99, fmt("%d/100 (4x4 and 3x4) certified through the rank-4 product-projector branch", ok)};
}

LocalOperator random_operator(random::Engine& rng, Side side, int dim) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return make_operator(side, random::invertible(rng, dim), OpKind::ILO);
    case 1: return make_operator(side, random::unitary(rng, dim), OpKind::Unitary);
    default: return make_operator(side, linalg::orthonormalize(random::gaussian_matrix(rng, dim, 2)).adjoint(),
                                  OpKind::Projector);
    }
}

Result negative_control() {
    const BipartiteState tiles = tiles_upb_state();
    const double pt = min_pt_eig(tiles, Side::A).value;
    const Certificate c = certify(tiles);
    auto rng = random::engine(700);
    int rejected = 0;
    for (int k = 0; k < 100; ++k) {
        Certificate fake;
        BipartiteState t = tiles;
        const int steps = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int i = 0; i < steps; ++i) {
            const Side side = i % 2 ? Side::B : Side::A;
            if (t.dims().of(side) < 3) continue;
            CertificateStep step;
            (side == Side::A ? step.op_a : step.op_b) = random_operator(rng, side, t.dims().of(side));
            t = apply_local(t, step.op_a, step.op_b).state;
            fake.steps.push_back(step);
        }
        const bool honest = k % 2 == 0;
        if (k % 4 < 2) {
            const PtResult r = min_pt_eig(t, Side::A, -1.0);
            fake.claim = Claim::TwoByN_NPT;
            fake.claim_data = NptWitness{Side::A, honest ? r.value : -0.1,
                                         honest ? r.witness->eigenvector
                                                : PureVector(t.dims(), random::unit_vector(rng, t.dims().total()))};
        } else {
            const auto w = reduction_witness_on(t, Side::B, -1.0);
            fake.claim = Claim::ReductionViolated;
            fake.claim_data = ReductionWitness{Side::B,
                                               honest ? w->vector
                                                      : PureVector(t.dims(), random::unit_vector(rng, t.dims().total())),
                                               honest ? w->value : -0.1};
        }
        rejected += !verify(tiles, fake).pass;
    }
    return {pt >= -1e-12 && c.claim == Claim::None && rejected == 100,
            fmt("min PT eig %.3e, certify claim %s, %d/100 fake certificates rejected", pt, to_string(c.claim),
                rejected)};
}

Result werner_analytics() {
    double worst = 0.0;
    int boundary_mismatch = 0;
    for (int n : {2, 3, 4}) {
        const double step = 1.0 / 20.0;
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) {
                const double a = i / 20.0;
                const double b = -a * (j / 20.0);  // a + b >= 0
                const BipartiteState w = werner({n, a, b});
                const linalg::Eigh eig = linalg::eigh_desc(partial_transpose(w, Side::A));
                const double tr = a * n * n + b * n;
                // analytic: a/tr with multiplicity n^2 - 1, (a + b n)/tr once
                std::vector<double> expect(n * n - 1, a / tr);
                expect.push_back((a + b * n) / tr);
                std::sort(expect.begin(), expect.end(), std::greater<double>());
                for (int k = 0; k < n * n; ++k) worst = std::max(worst, std::abs(eig.values(k) - expect[k]));
                const bool npt = min_pt_eig(w, Side::A).value < -1e-10;
                const bool analytic = a < n * std::abs(b);
                if (npt != analytic && std::abs(a - n * std::abs(b)) > n * a * step) ++boundary_mismatch;
            }
    }
    return {worst <= 1e-10 && boundary_mismatch == 0,
            fmt("max spectrum deviation %.2e on 3 x 20x20 grids, %d boundary mismatches", worst, boundary_mismatch)};
}

Result numerical_core() {
    auto rng = random::engine(900);
    bool involution = true;
    for (int k = 0; k < 100; ++k) {
        const Dims d{2 + k % 3, 2 + (k / 3) % 3};
        const Matrix m = random::gaussian_matrix(rng, d.total(), d.total());
        for (Side s : {Side::A, Side::B})
            involution &= linalg::max_abs(linalg::partial_transpose(linalg::partial_transpose(m, d, s), d, s) - m) == 0.0;
    }
    double schmidt_dev = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const Dims d{2 + k % 3, 2 + (k / 3) % 3};
        const PureVector v(d, random::unit_vector(rng, d.total()));
        const RealVector c = schmidt_decompose(v).coefficients;
        // singular values from the Gram matrix of the reshaped amplitudes
        const Matrix r = linalg::reshape(v.amplitudes(), d);
        Eigen::SelfAdjointEigenSolver<Matrix> es(r * r.adjoint());
        RealVector sv = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().reverse();
        for (Eigen::Index i = 0; i < c.size(); ++i) schmidt_dev = std::max(schmidt_dev, std::abs(c(i) - sv(i)));
    }
    std::normal_distribution<double> noise(0.0, 1.0);
    int total = 0, rejected = 0;
    for (int seed = 1; seed <= 40; ++seed) {
        const BipartiteState s = seed % 2 ? equal_weight_rank3_npt(seed, false).state : planted_rank4_npt(4, seed).state;
        const Certificate c = certify(s);
        for (int k = 0; k < 5; ++k) {
            Certificate bad = c;
            for (auto& step : bad.steps)
                for (auto* op : {&step.op_a, &step.op_b})
                    if (*op)
                        for (Eigen::Index i = 0; i < (*op)->matrix.size(); ++i)
                            (*op)->matrix(i) *= 1.0 + 0.1 * Complex(noise(rng), noise(rng));
            ++total;
            rejected += !verify(s, bad).pass;
        }
    }
    return {involution && schmidt_dev <= 1e-12 && rejected >= 0.95 * total,
            fmt("involution %s, Schmidt deviation %.2e over 1000 vectors, %d/%d perturbed certificates rejected",
                involution ? "exact" : "broken", schmidt_dev, rejected, total)};
}

Result bbpssw_demo() {
    const auto t = bbpssw_recurrence(0.6, 50);
    bool monotone = true;
    int first_above = -1;
    for (std::size_t k = 1; k < t.size(); ++k) {
        monotone &= t[k] > t[k - 1];
        if (first_above < 0 && t[k] > 0.999) first_above = static_cast<int>(k);
    }
    double fixed_dev = 0.0;
    for (double f : bbpssw_recurrence(1.0, 50)) fixed_dev = std::max(fixed_dev, std::abs(f - 1.0));
    return {monotone && first_above > 0 && fixed_dev == 0.0,
            fmt("monotone %s, exceeds 0.999 at iteration %d, fixed-point deviation %.1e", monotone ? "yes" : "no",
                first_above, fixed_dev)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
        {"rank-3 NPT suite", rank3_suite},
        {"rank deficit implies reduction witness", rank_deficit_suite},
        {"product vector in rank-3 range", product_rank3_suite},
        {"rank-2 NPT suite", rank2_suite},
        {"rank-4 shared product factor suite", shared_factor_suite},
        {"rank-4 product vector in range", product_rank4_suite},
        {"UPB negative control", negative_control},
        {"Werner analytics", werner_analytics},
        {"numerical core", numerical_core},
        {"BBPSSW demonstrator", bbpssw_demo},
    };
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Result r{false, ""};
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        all &= r.pass;
        std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first
                  << "): " << r.detail << std::endl;
    }
    return all ? 0 : 1;
}
