#include <doctest.h>

#include <cmath>

#include "acbound/core.hpp"
#include "acbound/lb_family.hpp"
#include "acbound/rng.hpp"

using namespace acbound;

namespace {

LowerBoundFamily reference_family() {
    FamilyParams p;
    p.d = 1;
    p.q = 16;
    p.delta = 0.2;
    p.alpha = 1.0;
    p.C = 0.5;
    p.c2 = 0.25;
    return build_family(p);
}

PredictionRule flipped_rule(const LowerBoundFamily& fam, int code, const std::vector<long>& flip_cells) {
    PredictionRule::Cellwise cw;
    cw.grid = fam.grid();
    cw.labels.resize(fam.b);
    for (long j = 0; j < fam.b; ++j) cw.labels[j] = fam.codes[code][j] > 0 ? 1 : 0;
    for (long j : flip_cells) cw.labels[j] ^= 1;
    return PredictionRule::cellwise(std::move(cw));
}

} // namespace

TEST_CASE("bayes_rule constants and tie convention") {
    const auto above = bayes_rule(RegressionFn::constant(1, 0.7));
    const auto tie = bayes_rule(RegressionFn::constant(2, 0.5));
    const double x1[] = {0.3};
    const double x2[] = {0.3, 0.9};
    CHECK(above(Coords{x1, 1}) == 1);
    CHECK(tie(Coords{x2, 2}) == 1); // eta >= 1/2 maps ties to 1
}

TEST_CASE("bayes_rule of a cellwise eta is the cellwise sign rule") {
    const auto fam = reference_family();
    const int code = static_cast<int>(fam.num_codes()) / 3;
    const auto eta = fam.eta(code);
    const auto rule = bayes_rule(eta);
    const auto* cw = rule.cellwise_repr();
    REQUIRE(cw != nullptr);
    for (long j = 0; j < fam.b; ++j) CHECK(cw->labels[j] == (fam.codes[code][j] + 1) / 2);
    CHECK(cw->null_label == 1);

    // dense pointwise agreement with 1{eta >= 1/2}
    for (int i = 0; i <= 4096; ++i) {
        const double x = static_cast<double>(i) / 4096.0;
        CHECK(rule(Coords{&x, 1}) == (eta(Coords{&x, 1}) >= 0.5 ? 1 : 0));
    }
}

TEST_CASE("empirical risk counting and edge cases") {
    Dataset D(1);
    const double xs[] = {0.1, 0.3, 0.6, 0.9};
    D.push_back(Coords{&xs[0], 1}, 1);
    D.push_back(Coords{&xs[1], 1}, 1);
    D.push_back(Coords{&xs[2], 1}, 0);
    D.push_back(Coords{&xs[3], 1}, 1);

    const auto ones = PredictionRule::constant(1, 1);
    CHECK(empirical_risk(ones, D) == doctest::Approx(0.25)); // one mismatch out of four

    const auto match = PredictionRule::from_fn(1, [](Coords x) { return x[0] < 0.5 || x[0] > 0.8 ? 1 : 0; });
    CHECK(empirical_risk(match, D) == 0.0);

    Dataset both(1);
    both.push_back(Coords{&xs[0], 1}, 0);
    both.push_back(Coords{&xs[0], 1}, 1);
    CHECK(empirical_risk(ones, both) == doctest::Approx(0.5)); // exactly one of two labels mismatches

    Dataset empty(1);
    CHECK_THROWS_WITH_AS(empirical_risk(ones, empty), "empirical_risk: empty sample", std::invalid_argument);

    // values live on the lattice {0, 1/n, ..., 1}
    CHECK(empirical_mismatches(ones, D) == 1);
}

TEST_CASE("excess risk: Bayes rule has zero excess, flips cost C*c2*delta/b each") {
    const auto fam = reference_family();
    const int code = 5;
    const auto P = fam.distribution(code);

    CHECK(excess_risk_quadrature(fam.bayes(code), P) == 0.0);

    const auto one_flip = flipped_rule(fam, code, {3});
    const auto two_flip = flipped_rule(fam, code, {3, 11});
    CHECK(excess_risk_quadrature(one_flip, P) == doctest::Approx(0.0015625).epsilon(1e-12));
    CHECK(excess_risk_quadrature(two_flip, P) == doctest::Approx(0.003125).epsilon(1e-12));

    // quadrature route (closed form disabled) agrees within 1e-6 at high resolution
    Distribution quad = P;
    quad.exact_excess = nullptr;
    CHECK(excess_risk_quadrature(one_flip, quad, 10000) == doctest::Approx(0.0015625).epsilon(1e-6));
    CHECK(excess_risk_quadrature(two_flip, quad, 10000) == doctest::Approx(0.003125).epsilon(1e-6));
}

TEST_CASE("l1 disagreement closed form and null-set exclusion") {
    const auto fam = reference_family();
    // pick a pair with Hamming distance exactly 2
    int i = 0, j = -1;
    for (int c = 1; c < fam.num_codes(); ++c)
        if (fam.hamming(0, c) == 2) { j = c; break; }
    REQUIRE(j > 0);
    const auto P = fam.distribution(i);
    const auto fi = fam.bayes(i);
    const auto fj = fam.bayes(j);

    CHECK(l1_disagreement(fi, fi, P, true) == 0.0);
    CHECK(l1_disagreement(fi, fj, P, true) == doctest::Approx(0.05590170).epsilon(1e-7)); // 2*H*w

    // rules differing only on the null set: excluded -> 0, included -> A0 mass (x2 scale)
    auto base = *fi.cellwise_repr();
    base.null_label = 0;
    const auto null_flip = PredictionRule::cellwise(base);
    CHECK(l1_disagreement(fi, null_flip, P, true) == 0.0);
    CHECK(l1_disagreement(fi, null_flip, P, false) == doctest::Approx(2.0 * (1.0 - fam.bw)).epsilon(1e-12));

    // pseudometric properties on closed forms
    CHECK(l1_disagreement(fj, fi, P, true) == l1_disagreement(fi, fj, P, true));
    for (int k = 1; k < 40; ++k) {
        const auto fk = fam.bayes(k);
        const double dij = l1_disagreement(fi, fj, P, true);
        const double dik = l1_disagreement(fi, fk, P, true);
        const double dkj = l1_disagreement(fk, fj, P, true);
        CHECK(dij <= dik + dkj + 1e-12);
    }

    // quadrature path matches the closed form
    Distribution quad = P;
    quad.cells.reset();
    CHECK(l1_disagreement(fi, fj, quad, true, 2048) == doctest::Approx(0.05590170).epsilon(1e-6));
}

TEST_CASE("excess is zero iff agreement with Bayes off the null set (cellwise rules)") {
    const auto fam = reference_family();
    const auto P = fam.distribution(2);
    auto cw = *fam.bayes(2).cellwise_repr();
    cw.null_label = 0; // differs only where |2 eta - 1| = 0
    CHECK(excess_risk_quadrature(PredictionRule::cellwise(cw), P) == 0.0);

    Xoshiro256pp rng(11);
    for (int t = 0; t < 50; ++t) {
        auto labels = *fam.bayes(2).cellwise_repr();
        bool differs = false;
        for (auto& lab : labels.labels)
            if (rng.uniform01() < 0.3) { lab ^= 1; differs = true; }
        const double excess = excess_risk_quadrature(PredictionRule::cellwise(labels), P);
        CHECK(excess >= 0.0);
        CHECK((excess == 0.0) == !differs);
    }
}

TEST_CASE("quadrature rejects unsupported distributions") {
    Distribution P;
    P.dim = 1;
    P.eta = RegressionFn::constant(1, 0.7);
    P.bayes = bayes_rule(P.eta);
    const auto zero = PredictionRule::constant(1, 0);
    CHECK_THROWS_AS(excess_risk_quadrature(zero, P), std::invalid_argument);
}

TEST_CASE("MarginSpec derived quantities are recomputed, never stored") {
    const auto spec = MarginSpec::make(1.0, 0.5);
    CHECK(spec.kappa() == doctest::Approx(2.0));
    CHECK(spec.c_M() == doctest::Approx(1.0));
    const auto inf_spec = MarginSpec::make(std::numeric_limits<double>::infinity(), 2.0);
    CHECK(inf_spec.kappa() == 1.0);
    CHECK(inf_spec.c_M() == 1.0);
    CHECK_THROWS_AS(MarginSpec::make(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(MarginSpec::make(1.0, 0.0), std::invalid_argument);
}
