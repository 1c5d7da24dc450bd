#include <gtest/gtest.h>

#include <cmath>

#include "hybridsom/errors.hpp"
#include "hybridsom/lvq.hpp"
#include "support.hpp"

namespace hybridsom {
namespace {

using testing::random_unit;

// Independent bisection oracle on the gap after the renormalized repel.
double oracle_rate(std::span<const double> w, std::span<const double> p, std::span<const double> x) {
    const double target = testing::reference_dot(p, x);
    const auto cos_after = [&](double eta) {
        std::vector<double> v(w.size());
        for (std::size_t d = 0; d < w.size(); ++d) v[d] = w[d] - eta * (x[d] - w[d]);
        return testing::reference_dot(v, x) / testing::reference_norm(v);
    };
    double lo = 0.0;
    double hi = 1.0 - 1e-15;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cos_after(mid) > target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

LabeledCodebook two_class() { return LabeledCodebook(Codebook({{1.0, 0.0}, {0.0, 1.0}}, {0, 1})); }

TEST(UpdateLvq, MatchingLabelAttracts) {
    LabeledCodebook cb = two_class();
    Codebook wta = cb.codebook();
    const UnitVector x{0.8, 0.6};
    const LvqStep s = update_lvq(cb, x, 0, 0.25);
    EXPECT_TRUE(s.attracted);
    EXPECT_EQ(s.winner, 0u);
    attract(wta, 0, x, 0.25);
    wta.record_win(0);
    EXPECT_EQ(cb.codebook(), wta);
}

TEST(UpdateLvq, MismatchRepelsHandComputed) {
    LabeledCodebook cb(Codebook({{1.0, 0.0}, {0.0, -1.0}}, {0, 1}));
    const UnitVector x{0.6, 0.8};
    const double before = activation(cb.codebook().weight(0), x);
    const LvqStep s = update_lvq(cb, x, 1, 0.25);
    EXPECT_EQ(s.winner, 0u);
    EXPECT_FALSE(s.attracted);
    // (1,0) - 0.25((0.6,0.8) - (1,0)) = (1.1, -0.2).
    const double len = std::hypot(1.1, -0.2);
    EXPECT_NEAR(cb.codebook().weight(0)[0], 1.1 / len, 1e-15);
    EXPECT_NEAR(cb.codebook().weight(0)[1], -0.2 / len, 1e-15);
    EXPECT_LT(activation(cb.codebook().weight(0), x), before);
    EXPECT_EQ(cb.codebook().weight(1)[1], -1.0);
}

TEST(UpdateLvq, ZeroRateIsIdentityForEitherBranch) {
    LabeledCodebook cb = two_class();
    const Codebook before = cb.codebook();
    update_lvq(cb, UnitVector{0.8, 0.6}, 0, 0.0);
    update_lvq(cb, UnitVector{0.8, 0.6}, 1, 0.0);
    EXPECT_EQ(cb.codebook().weights(), before.weights());
}

TEST(UpdateLvq, Errors) {
    LabeledCodebook cb = two_class();
    EXPECT_THROW(update_lvq(cb, UnitVector{1.0, 0.0}, 7, 0.1), UnknownLabel);
    Codebook unlabeled({{1.0, 0.0}});
    EXPECT_THROW(update_lvq(unlabeled, UnitVector{1.0, 0.0}, 0, 0.1), UnknownLabel);
    EXPECT_THROW(LabeledCodebook(Codebook({{1.0, 0.0}})), std::invalid_argument);
    EXPECT_THROW(update_lvq(cb, UnitVector{1.0, 0.0}, 0, 1.5), std::invalid_argument);
}

TEST(PushbackRate, Examples) {
    const UnitVector w{1.0, 0.0};
    const UnitVector p{0.0, 1.0};
    EXPECT_EQ(pushback_rate(w, w, UnitVector{0.8, 0.6}).eta, 0.0);
    EXPECT_EQ(pushback_rate(w, p, UnitVector{1.0, 1.0}).eta, 0.0);

    const UnitVector x{0.8, 0.6};
    const PushbackRate r = pushback_rate(w, p, x);
    EXPECT_TRUE(r.bracketed);
    EXPECT_NEAR(r.eta, oracle_rate(w, p, x), 1e-9);
    const auto moved = repelled(w, x, r.eta);
    EXPECT_NEAR(activation(moved, x), 0.6, 1e-9);
}

TEST(PushbackRate, PreconditionViolation) {
    EXPECT_THROW(pushback_rate(UnitVector{0.0, 1.0}, UnitVector{1.0, 0.0}, UnitVector{0.8, 0.6}),
                 std::invalid_argument);
}

TEST(PushbackRate, ClosedFormDiffersFromNormalizedRoot) {
    const UnitVector w{1.0, 0.0};
    const UnitVector p{0.0, 1.0};
    const UnitVector x{0.8, 0.6};
    // (0.8 - 0.6) / 1.8 ignores renormalization and does not reach equidistance.
    EXPECT_NEAR(pushback_rate_closed_form(w, p, x), 0.2 / 1.8, 1e-15);
    const auto moved = repelled(w, x, pushback_rate_closed_form(w, p, x));
    EXPECT_GT(std::abs(activation(moved, x) - 0.6), 1e-6);
}

TEST(PushbackRate, EquidistanceOnRandomAdmissibleTriples) {
    Rng rng(2718);
    int checked = 0;
    while (checked < 1000) {
        const std::size_t n = 2 + rng.index(11);
        UnitVector w = random_unit(rng, n);
        UnitVector p = random_unit(rng, n);
        const UnitVector x = random_unit(rng, n);
        if (activation(w, x) < activation(p, x)) std::swap(w, p);
        const PushbackRate r = pushback_rate(w, p, x);
        if (!r.bracketed) continue;
        ++checked;
        EXPECT_NEAR(r.eta, oracle_rate(w, p, x), 1e-9);
        EXPECT_GE(r.eta, 0.0);
        EXPECT_LT(r.eta, 1.0);
        const auto moved = repelled(w, x, r.eta);
        EXPECT_NEAR(activation(moved, x), activation(p, x), 1e-9);
    }
}

TEST(PushbackRate, GapIsDecreasingOnGrid) {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + rng.index(10);
        const UnitVector w = random_unit(rng, n);
        const UnitVector x = random_unit(rng, n);
        if (activation(w, x) <= -1.0 + 1e-6) continue;
        double prev = activation(w, x);
        for (int i = 1; i < 100; ++i) {
            const double c = activation(repelled(w, x, i / 100.0), x);
            EXPECT_LT(c, prev + 1e-15);
            prev = c;
        }
    }
}

TEST(PushbackRate, UnreachableTargetIsFlagged) {
    // x almost on w, the correct prototype far on the far side: pushing w
    // with eta < 1 cannot bring its cosine down to -0.99.
    const UnitVector w{1.0, 0.0};
    const UnitVector p{-0.99, std::sqrt(1.0 - 0.99 * 0.99)};
    const UnitVector x{1.0, 0.0};
    const PushbackRate r = pushback_rate(w, p, x);
    EXPECT_FALSE(r.bracketed);
    EXPECT_EQ(r.eta, kMaxRepelRate);
}

TEST(EquidistantPushback, HalfHalfMemberships) {
    LabeledCodebook cb(Codebook({{1.0, 0.0}, {0.0, 1.0}}, {0, 1}));
    const UnitVector x{0.8, 0.6};
    const PushbackStep s = equidistant_pushback(cb, x, 1);
    EXPECT_EQ(s.winner, 0u);
    EXPECT_EQ(s.correct, 1u);
    const auto mu = membership(x, cb.codebook().weights());
    EXPECT_NEAR(mu[0], 0.5, 1e-9);
    EXPECT_NEAR(mu[1], 0.5, 1e-9);
    EXPECT_EQ(cb.codebook().weight(1)[1], 1.0);
}

TEST(EquidistantPushback, AlreadyEquidistantIsUnchanged) {
    LabeledCodebook cb(Codebook({{1.0, 0.0}, {0.0, 1.0}}, {0, 1}));
    const Codebook before = cb.codebook();
    equidistant_pushback(cb, UnitVector{1.0, 1.0}, 1);
    EXPECT_EQ(cb.codebook().weights(), before.weights());
}

TEST(EquidistantPushback, RequiresWrongWinner) {
    LabeledCodebook cb(Codebook({{1.0, 0.0}, {0.0, 1.0}}, {0, 1}));
    EXPECT_ANY_THROW(equidistant_pushback(cb, UnitVector{0.8, 0.6}, 0));
    EXPECT_THROW(equidistant_pushback(cb, UnitVector{0.8, 0.6}, 5), UnknownLabel);
}

TEST(EquidistantPushback, RandomFiveDimensionalInstances) {
    Rng rng(5);
    int checked = 0;
    while (checked < 200) {
        const UnitVector a = random_unit(rng, 5);
        const UnitVector b = random_unit(rng, 5);
        const UnitVector x = random_unit(rng, 5);
        LabeledCodebook cb(Codebook({a.components(), b.components()}, {0, 1}));
        const std::size_t winner = find_winner(x, cb.codebook());
        const ClassId wrong = winner == 0 ? 1 : 0;
        if (!pushback_rate(cb.codebook().weight(winner), cb.codebook().weight(1 - winner), x).bracketed) continue;
        equidistant_pushback(cb, x, wrong);
        ++checked;
        EXPECT_NEAR(similarity(cb.codebook().weight(0), x), similarity(cb.codebook().weight(1), x), 1e-9);
    }
}

TEST(LvqProperties, AttractRaisesAndRepelLowersActivation) {
    Rng rng(17);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t n = 2 + rng.index(10);
        const UnitVector w = random_unit(rng, n);
        const UnitVector x = random_unit(rng, n);
        const double eta = rng.uniform(1e-3, 0.999);
        const double before = activation(w, x);
        Codebook a({w.components()});
        attract(a, 0, x, eta);
        EXPECT_GT(activation(a.weight(0), x), before);
        const auto r = repelled(w, x, eta);
        EXPECT_LT(activation(r, x), before);
    }
}

TEST(LvqProperties, OnlyTheWinnerChanges) {
    Rng rng(23);
    Codebook base = Codebook::random(6, 4, 23, {0, 1, 2, 0, 1, 2});
    for (int t = 0; t < 1000; ++t) {
        const UnitVector x = random_unit(rng, 4);
        const Codebook before = base;
        const LvqStep s = update_lvq(base, x, static_cast<ClassId>(rng.index(3)), rng.uniform(0.0, 0.5));
        for (std::size_t j = 0; j < base.size(); ++j) {
            if (j == s.winner) continue;
            ASSERT_EQ(std::vector<double>(base.weight(j).begin(), base.weight(j).end()),
                      std::vector<double>(before.weight(j).begin(), before.weight(j).end()));
        }
    }
}

TEST(InitLabeledCodebook, RoundRobinClassMeans) {
    const std::vector<UnitVector> xs{UnitVector{1.0, 0.0}, UnitVector{0.0, 1.0}, UnitVector{1.0, 0.2},
                                     UnitVector{0.2, 1.0}, UnitVector{0.0, -1.0}};
    const std::vector<std::optional<ClassId>> labels{4, 9, 4, 9, std::nullopt};
    const LabeledCodebook cb = init_labeled_codebook(xs, labels, 2, 1);
    ASSERT_EQ(cb.size(), 4u);
    EXPECT_EQ(cb.label(0), 4);
    EXPECT_EQ(cb.label(1), 9);
    EXPECT_EQ(cb.label(2), 4);
    EXPECT_EQ(cb.label(3), 9);
    EXPECT_EQ(cb.classes(), (std::vector<ClassId>{4, 9}));
    // First prototype of class 4 sits on the normalized mean of its two samples.
    const std::vector<double> mean{xs[0][0] + xs[2][0], xs[0][1] + xs[2][1]};
    const UnitVector expect(mean);
    EXPECT_NEAR(cb.codebook().weight(0)[0], expect[0], 1e-15);
    EXPECT_NEAR(cb.codebook().weight(0)[1], expect[1], 1e-15);
    EXPECT_EQ(cb.codebook().win_count(0), 2u);
    EXPECT_EQ(cb.codebook().win_count(2), 1u);
    EXPECT_THROW(init_labeled_codebook(xs, std::vector<std::optional<ClassId>>(5), 1, 1), EmptyInput);
}

TEST(TrainLvq, IgnoresUnlabeledSamples) {
    const std::vector<UnitVector> xs{UnitVector{1.0, 0.1}, UnitVector{0.1, 1.0}, UnitVector{-1.0, 0.0}};
    const std::vector<std::optional<ClassId>> with{0, 1, std::nullopt};
    const std::vector<UnitVector> xs2{xs[0], xs[1]};
    const std::vector<std::optional<ClassId>> without{0, 1};
    LvqTrainConfig cfg;
    cfg.epochs = 3;
    const LabeledCodebook a = train_lvq(xs, with, cfg);
    const LabeledCodebook b = train_lvq(xs2, without, cfg);
    EXPECT_EQ(a.codebook().weights(), b.codebook().weights());
}

}  // namespace
}  // namespace hybridsom
