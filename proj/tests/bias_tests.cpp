/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "recaudit/bias.hpp"

using namespace recaudit;

namespace {

/// Labeled ranking straight from a bias-score sequence (-1/0/+1 by rank).
LabeledRanking<Stance> from_scores(const std::vector<int>& scores) {
    LabeledRanking<Stance> lr;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        const Stance label = scores[j] < 0   ? Stance::Pro
                             : scores[j] > 0 ? Stance::Anti
                                             : Stance::Neutral;
        lr.entries.push_back({static_cast<std::uint32_t>(j + 1), "v" + std::to_string(j), label,
                              scores[j]});
    }
    return lr;
}

/// Independent evaluation of the weighted sum, term by term in doubles.
double total_bias_reference(const std::vector<int>& scores) {
    const std::size_t n = scores.size();
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        sum += 2.0 * static_cast<double>(n - j) /
               (static_cast<double>(n) * (static_cast<double>(n) + 1.0)) *
               static_cast<double>(scores[j]);
    return sum;
}

std::vector<VideoId> id_list(const std::vector<int>& xs) {
    std::vector<VideoId> out;
    out.reserve(xs.size());
    for (int x : xs) out.push_back("v" + std::to_string(x));
    return out;
}

} // namespace

TEST_CASE("rank weights telescope to exactly one") {
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{7}, std::size_t{100},
                          std::size_t{1234}}) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += rank_weight(n, j);
        CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("total bias hits the bounds exactly on uniform labelings") {
    CHECK(total_bias(from_scores(std::vector<int>(17, -1))).total_bias == -1.0);
    CHECK(total_bias(from_scores(std::vector<int>(17, +1))).total_bias == +1.0);
    CHECK(total_bias(from_scores(std::vector<int>(17, 0))).total_bias == 0.0);
}

TEST_CASE("total bias of (+1,-1) is +1/3") {
    const auto rep = total_bias(from_scores({+1, -1}));
    CHECK_THAT(rep.total_bias, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
    CHECK(rep.n == 2);
}

TEST_CASE("total bias of an empty selection is an error") {
    LabeledRanking<Stance> empty;
    CHECK_THROWS_AS(total_bias(empty), ParameterError);
}

TEST_CASE("a 33-video fixture with 14 pro / 14 neutral / 5 anti lands near -0.63") {
    // ranked: the pro block on top, anti block at the bottom
    std::vector<int> scores;
    scores.insert(scores.end(), 14, -1);
    scores.insert(scores.end(), 14, 0);
    scores.insert(scores.end(), 5, +1);
    REQUIRE(scores.size() == 33);
    const auto rep = total_bias(from_scores(scores));
    CHECK_THAT(rep.total_bias, Catch::Matchers::WithinAbs(total_bias_reference(scores), 1e-12));
    CHECK_THAT(rep.total_bias, Catch::Matchers::WithinAbs(-0.63, 0.01));
}

TEST_CASE("total bias matches the term-by-term reference on random labelings") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> scores;
        const std::size_t n = 1 + rng() % 60;
        for (std::size_t j = 0; j < n; ++j) scores.push_back(static_cast<int>(rng() % 3) - 1);
        CHECK_THAT(total_bias(from_scores(scores)).total_bias,
                   Catch::Matchers::WithinAbs(total_bias_reference(scores), 1e-12));
    }
}

TEST_CASE("moving a -1 item above a +1 item never increases total bias") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> scores;
        const std::size_t n = 2 + rng() % 40;
        for (std::size_t j = 0; j < n; ++j) scores.push_back(static_cast<int>(rng() % 3) - 1);
        // pick a (+1, -1) pair with the +1 ranked better, then swap them
        std::vector<std::pair<std::size_t, std::size_t>> candidates;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (scores[i] == +1 && scores[j] == -1) candidates.emplace_back(i, j);
        if (candidates.empty()) continue;
        const auto [i, j] = candidates[rng() % candidates.size()];
        const double before = total_bias(from_scores(scores)).total_bias;
        std::swap(scores[i], scores[j]);
        const double after = total_bias(from_scores(scores)).total_bias;
        CHECK(after <= before + 1e-15);
    }
}

TEST_CASE("overlap coefficient") {
    const auto a = id_list({1, 2, 3});
    const auto b = id_list({1, 2, 3, 4, 5});
    CHECK(overlap_coefficient(a, b) == 1.0); // subset
    CHECK(overlap_coefficient(b, a) == 1.0); // symmetric
    CHECK(overlap_coefficient(id_list({1, 2}), id_list({3, 4})) == 0.0);
    CHECK_THROWS_AS(overlap_coefficient({}, a), ParameterError);

    // |a & b| = 39, |a| = 50, |b| = 60 -> 0.78
    std::vector<VideoId> x, y;
    for (int i = 0; i < 50; ++i) x.push_back("s" + std::to_string(i));
    for (int i = 0; i < 39; ++i) y.push_back("s" + std::to_string(i));
    for (int i = 0; i < 21; ++i) y.push_back("t" + std::to_string(i));
    CHECK_THAT(overlap_coefficient(x, y), Catch::Matchers::WithinAbs(0.78, 1e-12));

    SECTION("equals one iff one set contains the other") {
        std::mt19937_64 rng(71);
        for (int trial = 0; trial < 50; ++trial) {
            std::set<int> sa, sb;
            for (int i = 0; i < 12; ++i) {
                if (rng() % 2) sa.insert(static_cast<int>(rng() % 10));
                if (rng() % 2) sb.insert(static_cast<int>(rng() % 10));
            }
            if (sa.empty() || sb.empty()) continue;
            const auto va = id_list({sa.begin(), sa.end()});
            const auto vb = id_list({sb.begin(), sb.end()});
            const double oc = overlap_coefficient(va, vb);
            CHECK(oc >= 0.0);
            CHECK(oc <= 1.0);
            const bool contained = std::includes(sa.begin(), sa.end(), sb.begin(), sb.end()) ||
                                   std::includes(sb.begin(), sb.end(), sa.begin(), sa.end());
            CHECK((oc == 1.0) == contained);
        }
    }
}

TEST_CASE("rbo of identical full-depth lists approaches one") {
    std::vector<VideoId> list;
    for (int i = 0; i < 1000; ++i) list.push_back("v" + std::to_string(i));
    const double value = rbo(list, list, 0.97, 1000);
    CHECK(value >= 1.0 - 1e-13);
    CHECK(value < 1.0);
}

TEST_CASE("rbo of disjoint lists is zero") {
    CHECK(rbo(id_list({1, 2, 3}), id_list({4, 5, 6})) == 0.0);
}

TEST_CASE("rbo rejects duplicates and bad parameters") {
    const auto dup = id_list({1, 1, 2});
    CHECK_THROWS_AS(rbo(dup, id_list({1, 2})), IntegrityError);
    CHECK_THROWS_AS(rbo(id_list({1}), id_list({2}), 1.0), ParameterError);
    CHECK_THROWS_AS(rbo(id_list({1}), id_list({2}), 0.0), ParameterError);
}

TEST_CASE("rbo matches the definitional brute force on random list pairs") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t la = rng() % 21, lb = rng() % 21;
        std::vector<int> pool(40);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<VideoId> a, b;
        for (std::size_t i = 0; i < la; ++i) a.push_back("v" + std::to_string(pool[i]));
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < lb; ++i) b.push_back("v" + std::to_string(pool[i]));
        const std::size_t depth = 1 + rng() % 30;
        const double p = 0.97;
        CHECK_THAT(rbo(a, b, p, depth),
                   Catch::Matchers::WithinAbs(oracle::rbo_bruteforce(a, b, p, depth), 1e-12));
        CHECK_THAT(rbo_extrapolated(a, b, p, depth),
                   Catch::Matchers::WithinAbs(oracle::rbo_ext_bruteforce(a, b, p, depth), 1e-12));
    }
}

TEST_CASE("rbo is symmetric") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> pool(30);
        std::iota(pool.begin(), pool.end(), 0);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<VideoId> a, b;
        const std::size_t la = 1 + rng() % 15, lb = 1 + rng() % 15;
        for (std::size_t i = 0; i < la; ++i) a.push_back("v" + std::to_string(pool[i]));
        std::shuffle(pool.begin(), pool.end(), rng);
        for (std::size_t i = 0; i < lb; ++i) b.push_back("v" + std::to_string(pool[i]));
        CHECK(rbo(a, b) == rbo(b, a));
        CHECK(rbo_extrapolated(a, b) == rbo_extrapolated(b, a));
    }
}

TEST_CASE("rbo is top-weighted: prefix agreement beats suffix agreement") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t shared = 2 + rng() % 5;
        const std::size_t tail = 2 + rng() % 5;
        auto fresh = [&, k = 0]() mutable { return "u" + std::to_string(k++); };
        std::vector<VideoId> common, a_rest, b_rest;
        for (std::size_t i = 0; i < shared; ++i) common.push_back(fresh());
        for (std::size_t i = 0; i < tail; ++i) a_rest.push_back(fresh());
        for (std::size_t i = 0; i < tail; ++i) b_rest.push_back(fresh());

        std::vector<VideoId> a_top(common), b_top(common);
        a_top.insert(a_top.end(), a_rest.begin(), a_rest.end());
        b_top.insert(b_top.end(), b_rest.begin(), b_rest.end());

        std::vector<VideoId> a_bottom(a_rest), b_bottom(b_rest);
        a_bottom.insert(a_bottom.end(), common.begin(), common.end());
        b_bottom.insert(b_bottom.end(), common.begin(), common.end());

        const double p = 0.9;
        CHECK(rbo(a_top, b_top, p, 100) > rbo(a_bottom, b_bottom, p, 100));
    }
}

TEST_CASE("rbo extrapolated closes identical lists to exactly one") {
    const auto list = id_list({1, 2, 3, 4, 5});
    CHECK_THAT(rbo_extrapolated(list, list, 0.9, 100),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("compare_rankings bundles oc and rbo") {
    const auto a = id_list({1, 2, 3, 4});
    const auto b = id_list({1, 2, 4, 5});
    const auto rep = compare_rankings("p1", a, "p2", b, 0.97, 1000);
    CHECK(rep.profile_a == "p1");
    CHECK_THAT(rep.oc, Catch::Matchers::WithinAbs(3.0 / 4.0, 1e-12));
    CHECK_THAT(rep.rbo,
               Catch::Matchers::WithinAbs(oracle::rbo_bruteforce(a, b, 0.97, 1000), 1e-12));
}
