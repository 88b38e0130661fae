#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acbound/classifiers.hpp"
#include "acbound/mc.hpp"
#include "acbound/rng.hpp"

using namespace acbound;

namespace {

// family with a strong per-cell signal (a ~ 0.43), for selection tests
LowerBoundFamily strong_family() {
    FamilyParams p;
    p.d = 1;
    p.q = 16;
    p.delta = 0.9;
    p.alpha = 1.0;
    p.C = 1.0;
    p.c2 = 0.45;
    return build_family(p);
}

double sup_distance_dense(const RegressionFn& f, const RegressionFn& g, int points = 2000) {
    double sup = 0.0;
    for (int i = 0; i <= points; ++i) {
        const double x = static_cast<double>(i) / points;
        sup = std::max(sup, std::abs(f(Coords{&x, 1}) - g(Coords{&x, 1})));
    }
    return sup;
}

Dataset shuffled(const Dataset& D, std::uint64_t seed) {
    std::vector<std::size_t> order(D.size());
    std::iota(order.begin(), order.end(), 0);
    Xoshiro256pp rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    Dataset out(D.dim(), D.provenance());
    out.reserve(D.size());
    for (std::size_t i : order) out.push_back(D.x(i), D.y(i));
    return out;
}

} // namespace

TEST_CASE("holder net: flat class and basic shape") {
    const auto flat = build_holder_net(1, 1.0, 0.0, 0.5);
    CHECK(flat.materialized);
    CHECK(flat.members.size() == 5); // constants {0, eps/2, ..., 1}
    for (const auto& m : flat.members) {
        const double x = 0.37;
        CHECK(m(Coords{&x, 1}) == m(Coords{&x, 1}));
    }
    CHECK_THROWS_AS(build_holder_net(1, 1.5, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_holder_net(1, 1.0, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("holder net covers random Lipschitz functions within epsilon") {
    const double eps = 0.5;
    const auto net = build_holder_net(1, 1.0, 1.0, eps);
    REQUIRE(net.materialized);
    CHECK(net.meta.h == doctest::Approx(0.25));

    Xoshiro256pp rng(71);
    for (int t = 0; t < 100; ++t) {
        // random piecewise-linear 1-Lipschitz function with range in [0,1]
        const int knots = 9;
        std::vector<double> v(knots);
        v[0] = rng.uniform01();
        const double step = 1.0 / (knots - 1);
        for (int k = 1; k < knots; ++k) {
            const double lo = std::max(0.0, v[k - 1] - step);
            const double hi = std::min(1.0, v[k - 1] + step);
            v[k] = lo + (hi - lo) * rng.uniform01();
        }
        const auto g = RegressionFn::from_fn(1, [v, step](Coords x) {
            const double pos = std::min(x[0] / step, static_cast<double>(v.size() - 1) - 1e-12);
            const int k = static_cast<int>(pos);
            const double frac = pos - k;
            return v[k] * (1.0 - frac) + v[k + 1] * frac;
        });
        double best = 1e9;
        for (const auto& m : net.members) best = std::min(best, sup_distance_dense(g, m));
        CHECK(best <= eps);
    }
}

TEST_CASE("holder net log-cardinality slope tracks d/beta") {
    const double eps_list[] = {0.4, 0.2, 0.1, 0.05};
    for (double beta : {1.0, 0.5}) {
        std::vector<double> xs, ys;
        for (double eps : eps_list) {
            const auto net = build_holder_net(1, beta, 1.0, eps, /*materialize_budget=*/1);
            xs.push_back(std::log(1.0 / eps));
            ys.push_back(std::log(net.log_cardinality));
        }
        const auto fit = stats::linear_fit(xs, ys);
        const double target = 1.0 / beta;
        CHECK(std::abs(fit.slope - target) <= 0.3 * target);
    }
}

TEST_CASE("holder net without materialization still counts; d > 1 throws when too large") {
    const auto big = build_holder_net(1, 0.5, 1.0, 0.05, /*materialize_budget=*/10);
    CHECK(!big.materialized);
    CHECK(big.members.empty());
    CHECK(big.log_cardinality > 100.0);
    Dataset D(1);
    const double x = 0.5;
    D.push_back(Coords{&x, 1}, 1);
    CHECK_THROWS_AS(net_erm(big, D), std::invalid_argument);
    CHECK_THROWS_AS(build_holder_net(2, 1.0, 1.0, 0.05, 1000), std::invalid_argument);
}

TEST_CASE("epsilon schedule") {
    CHECK(epsilon_schedule(1024, 1.0, 1.0) == doctest::Approx(0.17677670).epsilon(1e-8));
    CHECK(epsilon_schedule(1, 2.0, 3.0) == 1.0);
    std::string warning;
    CHECK(epsilon_schedule(100, 1.0, 1e12, &warning) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(!warning.empty());
    CHECK_THROWS_AS(epsilon_schedule(0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("net ERM on constant dictionaries") {
    NetDictionary net;
    net.members.push_back(RegressionFn::constant(1, 0.9));
    net.members.push_back(RegressionFn::constant(1, 0.1));
    net.epsilon = 0.1;
    Dataset D(1);
    for (int i = 0; i < 8; ++i) {
        const double x = (i + 0.5) / 8.0;
        D.push_back(Coords{&x, 1}, 1);
    }
    const auto fit = net_erm(net, D);
    CHECK(fit.member_index == 0);
    CHECK(fit.mismatches == 0);
    const double probe = 0.3;
    CHECK(fit.rule(Coords{&probe, 1}) == 1);

    // duplicated induced rule keeps the smaller index
    NetDictionary dup;
    dup.members.push_back(RegressionFn::constant(1, 0.6));
    dup.members.push_back(RegressionFn::constant(1, 0.8)); // same induced rule
    dup.members.push_back(RegressionFn::constant(1, 0.2));
    const auto pick = net_erm(dup, D);
    CHECK(pick.member_index == 0);

    Dataset empty(1);
    CHECK_THROWS_AS(net_erm(net, empty), std::invalid_argument);
}

TEST_CASE("net ERM over the family dictionary recovers the generating code") {
    const auto fam = strong_family();
    const auto net = family_net(fam);
    const auto compiled = CompiledNet::compile(net);
    const int truth = 12;
    const long n = 4096;
    const int reps = 200;
    int exact_hits = 0;
    for (int rep = 0; rep < reps; ++rep) {
        const auto D = fam.sample_dataset(truth, n, derive_seed(404, truth, rep));
        const auto fit = compiled.erm(D);
        if (fam.exact_excess_cellwise(truth, fit.rule) == 0.0) ++exact_hits;
    }
    // per-cell flip probability ~ Phi(-a sqrt(n w)) ~ 1e-11 here, so the
    // selected rule should essentially always match the Bayes labels
    CHECK(exact_hits >= 0.95 * reps);
}

TEST_CASE("net and class ERM are order- and duplicate-invariant") {
    const auto fam = strong_family();
    const auto D = fam.sample_dataset(3, 500, 7);
    const auto Dp = shuffled(D, 99);

    const auto net = family_net(fam);
    const auto a = net_erm(net, D);
    const auto b = net_erm(net, Dp);
    CHECK(a.member_index == b.member_index);
    CHECK(a.mismatches == b.mismatches);

    const auto cls = RuleClass::cellwise_product(fam.grid());
    const auto ca = class_erm(cls, D);
    const auto cb = class_erm(cls, Dp);
    CHECK(ca.mismatches == cb.mismatches);
    CHECK(ca.rule.cellwise_repr()->labels == cb.rule.cellwise_repr()->labels);
}

TEST_CASE("class ERM picks the Bayes rule out of {f*, not f*}") {
    const auto fam = strong_family();
    std::vector<PredictionRule> rules;
    rules.push_back(fam.bayes(4));
    auto flipped = *fam.bayes(4).cellwise_repr();
    for (auto& lab : flipped.labels) lab ^= 1;
    flipped.null_label ^= 1;
    rules.push_back(PredictionRule::cellwise(flipped));
    const auto cls = RuleClass::explicit_list(rules);
    for (int rep = 0; rep < 20; ++rep) {
        const auto D = fam.sample_dataset(4, 1000, derive_seed(11, 4, rep));
        CHECK(class_erm(cls, D).member_index == 0);
    }
}

TEST_CASE("decomposed product ERM: empty cells label 1, ties label 1") {
    CellGrid grid{1, 4};
    Dataset D(1);
    // cell 0: two zeros -> label 0; cell 1: 1-1 tie -> label 1; cell 2: empty;
    // null region: single 0 -> label 0
    const double c0[] = {0.125 / 1.0 + 0.0 + 0.1};     // plateau of cell 0 is [1/16, 3/16]
    (void)c0;
    auto plateau_point = [&](long cell) { return (static_cast<double>(cell) + 0.5) / 4.0; };
    double x = plateau_point(0);
    D.push_back(Coords{&x, 1}, 0);
    D.push_back(Coords{&x, 1}, 0);
    x = plateau_point(1);
    D.push_back(Coords{&x, 1}, 0);
    D.push_back(Coords{&x, 1}, 1);
    x = plateau_point(3);
    D.push_back(Coords{&x, 1}, 1);
    x = 0.01; // null region of cell 0
    D.push_back(Coords{&x, 1}, 0);

    const auto fit = class_erm(RuleClass::cellwise_product(grid), D);
    const auto& cw = *fit.rule.cellwise_repr();
    CHECK(cw.labels[0] == 0);
    CHECK(cw.labels[1] == 1); // tie
    CHECK(cw.labels[2] == 1); // empty
    CHECK(cw.labels[3] == 1);
    CHECK(cw.null_label == 0);
    CHECK(fit.mismatches == 1); // the tie cell contributes one mismatch
}

TEST_CASE("decomposed product ERM equals brute force over all 2^5 assignments (b = 4)") {
    FamilyParams p;
    p.d = 1;
    p.q = 4;
    p.delta = 0.3;
    p.alpha = 1.0;
    p.C = 0.5;
    p.c2 = 0.25;
    const auto fam = build_family(p);

    std::vector<PredictionRule> all_rules;
    for (int labels = 0; labels < 16; ++labels) {
        for (int null_label = 0; null_label < 2; ++null_label) {
            PredictionRule::Cellwise cw;
            cw.grid = fam.grid();
            cw.labels = {static_cast<std::uint8_t>(labels & 1), static_cast<std::uint8_t>((labels >> 1) & 1),
                         static_cast<std::uint8_t>((labels >> 2) & 1), static_cast<std::uint8_t>((labels >> 3) & 1)};
            cw.null_label = static_cast<std::uint8_t>(null_label);
            all_rules.push_back(PredictionRule::cellwise(std::move(cw)));
        }
    }
    const auto brute_class = RuleClass::explicit_list(all_rules);
    const auto product_class = RuleClass::cellwise_product(fam.grid());

    Xoshiro256pp rng(2718);
    for (int t = 0; t < 50; ++t) {
        const int code = static_cast<int>(rng.below(fam.num_codes()));
        const long n = 20 + static_cast<long>(rng.below(180));
        const auto D = fam.sample_dataset(code, n, rng.next());
        const auto fast = class_erm(product_class, D);
        const auto brute = class_erm(brute_class, D);
        CHECK(fast.mismatches == brute.mismatches); // both attain the global minimum
    }
}

TEST_CASE("ERM risk is minimal among random members (large class spot check)") {
    const auto fam = strong_family();
    const auto net = family_net(fam);
    const auto compiled = CompiledNet::compile(net);
    const auto D = fam.sample_dataset(9, 800, 123);
    const auto fit = compiled.erm(D);
    Xoshiro256pp rng(55);
    for (int t = 0; t < 100; ++t) {
        const int other = static_cast<int>(rng.below(fam.num_codes()));
        CHECK(fit.mismatches <= empirical_mismatches(fam.bayes(other), D));
    }
}

TEST_CASE("covering numbers: greedy and exact") {
    // spread points on a line
    std::vector<double> pts{0.0, 0.1, 0.2, 0.9, 1.0};
    auto dist = [&](long i, long j) { return std::abs(pts[i] - pts[j]); };

    CHECK(covering_number_greedy(5, dist, 2.0) == 1);                 // epsilon beyond the diameter
    CHECK(covering_number_greedy(5, dist, 0.0) == 5);                 // distinct members
    std::vector<double> dup{0.4, 0.4, 0.7};
    auto ddist = [&](long i, long j) { return std::abs(dup[i] - dup[j]); };
    CHECK(covering_number_greedy(3, ddist, 0.0) == 2);                // duplicates collapse

    CHECK(covering_number_exact(5, dist, 0.15) <= covering_number_greedy(5, dist, 0.15));
    CHECK(covering_number_exact(5, dist, 2.0) == 1);
    CHECK_THROWS_AS(covering_number_exact(30, dist, 0.1), std::invalid_argument);

    // family codes at epsilon = w: the cover is the whole code set
    FamilyParams p;
    p.d = 1;
    p.q = 8;
    p.delta = 0.3;
    p.alpha = 1.0;
    p.C = 0.5;
    p.c2 = 0.25;
    const auto fam = build_family(p); // min_hamming defaults to 1 here
    auto code_dist = [&](long i, long j) {
        return fam.pairwise_stats(static_cast<int>(i), static_cast<int>(j)).l1_bayes;
    };
    CHECK(covering_number_greedy(fam.num_codes(), code_dist, fam.w) == fam.num_codes());
}
