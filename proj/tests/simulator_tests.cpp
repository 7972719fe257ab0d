/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "recaudit/bias.hpp"
#include "recaudit/centrality.hpp"
#include "recaudit/graph.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/ranking.hpp"
#include "recaudit/simulator.hpp"

using namespace recaudit;

namespace {

SimConfig<Stance> small_config(std::uint64_t seed) {
    SimConfig<Stance> cfg;
    cfg.corpus_size = 400;
    cfg.seed_count = 8;
    cfg.steps = 120;
    cfg.rng_seed = seed;
    return cfg;
}

std::string serialized(const SessionLog& log) {
    std::ostringstream os;
    write_session_log(log, os);
    return os.str();
}

} // namespace

TEST_CASE("corpus generation honours the class mix") {
    SECTION("degenerate mix puts every video in one class") {
        SimConfig<Stance> cfg = small_config(1);
        cfg.class_mix = {1.0, 0.0, 0.0};
        const auto corpus = generate_corpus(cfg);
        for (Stance l : corpus.labels) CHECK(l == Stance::Pro);
    }
    SECTION("empty corpus is valid") {
        SimConfig<Stance> cfg = small_config(1);
        cfg.corpus_size = 0;
        CHECK(generate_corpus(cfg).size() == 0);
    }
    SECTION("large draw lands within two points of the mix") {
        SimConfig<Stance> cfg = small_config(2);
        cfg.corpus_size = 10000;
        cfg.class_mix = {0.5, 0.3, 0.2};
        const auto corpus = generate_corpus(cfg);
        std::array<double, 3> freq{};
        for (Stance l : corpus.labels) freq[label_index(l)] += 1.0;
        for (auto& f : freq) f /= static_cast<double>(corpus.size());
        CHECK_THAT(freq[0], Catch::Matchers::WithinAbs(0.5, 0.02));
        CHECK_THAT(freq[1], Catch::Matchers::WithinAbs(0.3, 0.02));
        CHECK_THAT(freq[2], Catch::Matchers::WithinAbs(0.2, 0.02));
    }
    SECTION("a mix that does not sum to one is rejected") {
        SimConfig<Stance> cfg = small_config(1);
        cfg.class_mix = {0.5, 0.5, 0.5};
        CHECK_THROWS_AS(generate_corpus(cfg), ParameterError);
    }
    SECTION("titles carry the topic keyword and popularity is positive") {
        SimConfig<Stance> cfg = small_config(3);
        cfg.topic_keyword = "gardening";
        const auto corpus = generate_corpus(cfg);
        for (const auto& v : corpus.videos)
            CHECK(v.title.find("gardening") != std::string::npos);
        for (double p : corpus.popularity) CHECK(p > 0.0);
    }
    SECTION("generation is deterministic under a fixed seed") {
        const auto a = generate_corpus(small_config(7));
        const auto b = generate_corpus(small_config(7));
        CHECK(a.videos == b.videos);
        CHECK(a.labels == b.labels);
        CHECK(a.popularity == b.popularity);
    }
}

TEST_CASE("profile training derives affinity from exposure") {
    const auto corpus = generate_corpus(small_config(5));
    SECTION("no history means uniform affinity") {
        ProfileSpec spec{.profile_id = "fresh", .training_watch_count = 0};
        const auto state = train_profile(spec, corpus, small_config(5));
        for (double a : state.affinity)
            CHECK_THAT(a, Catch::Matchers::WithinAbs(1.0 / 3.0, 1e-12));
    }
    SECTION("single-topic history is maximal on that class") {
        ProfileSpec spec{.profile_id = "pro",
                         .training_topics = {1.0, 0.0, 0.0},
                         .training_watch_count = 50};
        const auto state = train_profile(spec, corpus, small_config(5));
        CHECK(state.affinity[label_index(Stance::Pro)] == 1.0);
        CHECK(state.affinity[label_index(Stance::Anti)] == 0.0);
    }
    SECTION("a 70/30 split shows up within five points") {
        ProfileSpec spec{.profile_id = "mixed",
                         .training_topics = {0.7, 0.0, 0.3},
                         .training_watch_count = 500};
        const auto state = train_profile(spec, corpus, small_config(5));
        CHECK_THAT(state.affinity[0], Catch::Matchers::WithinAbs(0.7, 0.05));
        CHECK_THAT(state.affinity[2], Catch::Matchers::WithinAbs(0.3, 0.05));
    }
}

TEST_CASE("the recommender excludes the playing and already-watched videos") {
    const auto cfg = small_config(9);
    const auto corpus = generate_corpus(cfg);
    const ProfileState<Stance> state{"p", {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    std::vector<bool> watched(corpus.size(), false);
    watched[3] = watched[5] = true;
    const auto recs = recommend(state, 7, corpus, cfg, watched, 10);
    REQUIRE(recs.size() == 10);
    for (auto r : recs) {
        CHECK(r != 7);
        CHECK_FALSE(watched[r]);
    }
}

TEST_CASE("with neutral settings the recommender follows popularity") {
    SimConfig<Stance> cfg = small_config(11);
    cfg.similarity_bonus = 0.0;
    cfg.affinity_strength = 0.0;
    const auto corpus = generate_corpus(cfg);
    const ProfileState<Stance> state{"p", {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    const std::vector<bool> watched(corpus.size(), false);
    const auto recs = recommend(state, 0, corpus, cfg, watched, 5);
    REQUIRE(recs.size() == 5);
    for (std::size_t i = 1; i < recs.size(); ++i)
        CHECK(corpus.popularity[recs[i - 1]] >= corpus.popularity[recs[i]]);
}

TEST_CASE("planted skew raises the favoured class above its corpus share") {
    SimConfig<Stance> cfg = small_config(13);
    cfg.corpus_size = 2000;
    cfg.class_skew = {10.0, 1.0, 1.0};
    const auto corpus = generate_corpus(cfg);
    const ProfileState<Stance> state{"p", {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    const std::vector<bool> watched(corpus.size(), false);
    double pro_share = 0.0, corpus_share = 0.0;
    for (Stance l : corpus.labels)
        if (l == Stance::Pro) corpus_share += 1.0;
    corpus_share /= static_cast<double>(corpus.size());
    const std::size_t k = 50;
    for (std::uint32_t w = 0; w < 20; ++w) {
        const auto recs = recommend(state, w, corpus, cfg, watched, k);
        for (auto r : recs)
            if (corpus.labels[r] == Stance::Pro) pro_share += 1.0;
    }
    pro_share /= static_cast<double>(20 * k);
    CHECK(pro_share > corpus_share + 0.1);
}

TEST_CASE("sock puppet runs satisfy the session-log contract") {
    const auto cfg = small_config(17);
    const auto corpus = generate_corpus(cfg);

    SECTION("steps=1 yields exactly one event") {
        SimConfig<Stance> one = cfg;
        one.steps = 1;
        const auto log = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, one);
        REQUIRE(log.events.size() == 1);
        CHECK(log.events[0].is_seed);
    }
    SECTION("no video is ever watched twice and lists never contain watched videos") {
        const auto log = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
        CHECK(log.events.size() == cfg.steps);
        CHECK_NOTHROW(validate(log));
        std::unordered_set<VideoId> watched;
        for (const auto& ev : log.events) {
            for (const auto& r : ev.recommendations) CHECK(watched.count(r) == 0);
            CHECK(watched.insert(ev.watched).second);
        }
    }
    SECTION("zero seeds is a parameter error") {
        SimConfig<Stance> bad = cfg;
        bad.seed_count = 0;
        CHECK_THROWS_AS(run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, bad),
                        ParameterError);
    }
    SECTION("every referenced video has metadata") {
        const auto log = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
        CHECK(log.missing_metadata().empty());
    }
    SECTION("runs are byte-identical under a fixed seed") {
        const auto a = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
        const auto b = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
        CHECK(serialized(a) == serialized(b));
    }
    SECTION("different profiles draw independent streams") {
        const auto a = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
        const auto b = run_sock_puppet(ProfileSpec{.profile_id = "q"}, corpus, cfg);
        CHECK(serialized(a) != serialized(b));
    }
}

TEST_CASE("list lengths average out to list_length_mean") {
    SimConfig<Stance> cfg = small_config(19);
    cfg.corpus_size = 5000;
    cfg.steps = 600;
    cfg.list_length_mean = 8.0;
    const auto corpus = generate_corpus(cfg);
    const auto log = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
    double mean = 0.0;
    for (const auto& ev : log.events) mean += static_cast<double>(ev.recommendations.size());
    mean /= static_cast<double>(log.events.size());
    CHECK_THAT(mean, Catch::Matchers::WithinAbs(8.0, 0.35));
}

TEST_CASE("planted bias oracle reads the skew direction") {
    SimConfig<Stance> cfg;
    cfg.class_skew = {5.0, 1.0, 1.0};
    CHECK(planted_bias_oracle(cfg) == -1);
    cfg.class_skew = {1.0, 1.0, 5.0};
    CHECK(planted_bias_oracle(cfg) == +1);
    cfg.class_skew = {2.0, 7.0, 2.0};
    CHECK(planted_bias_oracle(cfg) == 0);

    SimConfig<Veracity> vcfg;
    vcfg.class_skew = {1.0, 1.0, 5.0};
    CHECK(planted_bias_oracle(vcfg) == +1);
}

TEST_CASE("simulated logs flow through the whole analysis cleanly") {
    SimConfig<Stance> cfg = small_config(23);
    cfg.corpus_size = 2000;
    cfg.steps = 300;
    cfg.class_skew = {3.0, 1.0, 1.0};
    const auto corpus = generate_corpus(cfg);
    const auto log = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);

    IngestReport report;
    const auto cleaned =
        apply_ingest_pipeline(log, cfg.topic_keyword, TitlePolicy::KeepUntitled, report);
    const RecGraph graph = assign_weights(build_graph(cleaned));
    CHECK(graph.node_count() > 100);

    const CentralitySet cs = compute_centralities(graph);
    const RankedList ranking = rank_videos(graph, cs.composite_scores);
    const RankedList top = select_top_percent(ranking, 1.0);
    CHECK(top.entries.size() == selection_size(ranking.entries.size(), 1.0));

    std::unordered_map<VideoId, Stance> truth;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        truth.emplace(corpus.videos[i].id, corpus.labels[i]);
    const auto merged = merge_labels(top, truth);
    const auto rep = total_bias(merged.ranking, "p");
    CHECK(rep.total_bias >= -1.0);
    CHECK(rep.total_bias <= 1.0);
    CHECK(rep.n == top.entries.size());
}

TEST_CASE("an unbiased recommender keeps the influential set near the planted mix") {
    // no skew, no similarity, no history: the top videos are a class-blind
    // draw, so their pooled distribution tracks the corpus mix
    std::array<double, 3> pooled{};
    std::size_t pooled_total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SimConfig<Stance> cfg;
        cfg.corpus_size = 2000;
        cfg.seed_count = 10;
        cfg.steps = 300;
        cfg.class_mix = {0.7, 0.2, 0.1};
        cfg.similarity_bonus = 0.0;
        cfg.rng_seed = seed;
        const auto corpus = generate_corpus(cfg);
        const auto log = run_sock_puppet(ProfileSpec{.profile_id = "p"}, corpus, cfg);
        IngestReport report;
        const auto cleaned =
            apply_ingest_pipeline(log, cfg.topic_keyword, TitlePolicy::KeepUntitled, report);
        const RecGraph graph = assign_weights(build_graph(cleaned));
        const CentralitySet cs = compute_centralities(graph);
        const RankedList top =
            select_top_percent(rank_videos(graph, cs.composite_scores), 1.0);
        std::unordered_map<VideoId, Stance> truth;
        for (std::size_t i = 0; i < corpus.size(); ++i)
            truth.emplace(corpus.videos[i].id, corpus.labels[i]);
        const auto dist = class_distribution(merge_labels(top, truth).ranking);
        for (std::size_t c = 0; c < pooled.size(); ++c)
            pooled[c] += static_cast<double>(dist.counts[c]);
        pooled_total += dist.total;
    }
    REQUIRE(pooled_total > 50);
    CHECK_THAT(pooled[0] / static_cast<double>(pooled_total),
               Catch::Matchers::WithinAbs(0.7, 0.10));
    CHECK_THAT(pooled[1] / static_cast<double>(pooled_total),
               Catch::Matchers::WithinAbs(0.2, 0.10));
    CHECK_THAT(pooled[2] / static_cast<double>(pooled_total),
               Catch::Matchers::WithinAbs(0.1, 0.10));
}

TEST_CASE("opposed training histories separate distributions while overlap stays high") {
    // visible history effect, no planted recommender bias; affinity stays
    // moderate so the two bots still roam a mostly shared universe
    SimConfig<Stance> cfg;
    cfg.corpus_size = 3000;
    cfg.seed_count = 12;
    cfg.steps = 700;
    cfg.affinity_strength = 1.0;
    cfg.rng_seed = 101;
    const auto corpus = generate_corpus(cfg);

    const ProfileSpec pro{"pro_hist", {1.0, 0.0, 0.0}, 60, SeedPolicy::NeutralQuery};
    const ProfileSpec anti{"anti_hist", {0.0, 0.0, 1.0}, 60, SeedPolicy::NeutralQuery};

    auto top_fractions = [&](const ProfileSpec& spec, std::vector<VideoId>& full_ranking) {
        const auto log = run_sock_puppet(spec, corpus, cfg);
        IngestReport report;
        const auto cleaned =
            apply_ingest_pipeline(log, cfg.topic_keyword, TitlePolicy::KeepUntitled, report);
        const RecGraph graph = assign_weights(build_graph(cleaned));
        const CentralitySet cs = compute_centralities(graph);
        const RankedList ranking = rank_videos(graph, cs.composite_scores);
        for (const auto& e : ranking.entries) full_ranking.push_back(e.id);
        const RankedList top = select_top_percent(ranking, 1.0);
        std::unordered_map<VideoId, Stance> truth;
        for (std::size_t i = 0; i < corpus.size(); ++i)
            truth.emplace(corpus.videos[i].id, corpus.labels[i]);
        return class_distribution(merge_labels(top, truth).ranking).fractions;
    };

    std::vector<VideoId> ranking_a, ranking_b;
    const auto fa = top_fractions(pro, ranking_a);
    const auto fb = top_fractions(anti, ranking_b);

    double l1 = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) l1 += std::abs(fa[i] - fb[i]);
    CHECK(l1 > 0.25); // the two profiles' influential sets lean apart
    CHECK(fa[label_index(Stance::Pro)] > fb[label_index(Stance::Pro)]);
    CHECK(fb[label_index(Stance::Anti)] > fa[label_index(Stance::Anti)]);

    const double oc = overlap_coefficient(ranking_a, ranking_b);
    CHECK(oc > 0.5); // same corpus, same recommender: the universes overlap a lot
}
