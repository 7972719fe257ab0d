/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "recaudit/ranking.hpp"

using namespace recaudit;

namespace {

RankedList ranked(const std::vector<std::pair<VideoId, double>>& scored) {
    return rank_scored_ids(std::vector<std::pair<VideoId, double>>(scored));
}

std::unordered_map<VideoId, Stance> label_all(const RankedList& rl, Stance label) {
    std::unordered_map<VideoId, Stance> out;
    for (const auto& e : rl.entries) out.emplace(e.id, label);
    return out;
}

} // namespace

TEST_CASE("ranking is descending by score with id tie-break") {
    const auto rl = ranked({{"A", 3.0}, {"B", 1.0}, {"C", 2.0}});
    REQUIRE(rl.entries.size() == 3);
    CHECK(rl.entries[0].id == "A");
    CHECK(rl.entries[1].id == "C");
    CHECK(rl.entries[2].id == "B");
    CHECK(rl.entries[0].rank == 1);
    CHECK(rl.entries[2].rank == 3);

    const auto tie = ranked({{"B", 1.0}, {"A", 1.0}});
    CHECK(tie.entries[0].id == "A");
    CHECK(tie.entries[1].id == "B");
}

TEST_CASE("ranking matches an oracle sort on random scores") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::pair<VideoId, double>> scored;
        const std::size_t n = 1 + rng() % 12;
        for (std::size_t i = 0; i < n; ++i)
            scored.emplace_back("v" + std::to_string(i), std::floor(u(rng) * 4.0));
        auto want = scored;
        std::sort(want.begin(), want.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        const auto rl = ranked(scored);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(rl.entries[i].id == want[i].first);
            CHECK(rl.entries[i].rank == i + 1);
        }
    }
}

TEST_CASE("selection size uses ceiling semantics") {
    CHECK(selection_size(1, 1.0) == 1);
    CHECK(selection_size(99, 1.0) == 1);
    CHECK(selection_size(100, 1.0) == 1);
    CHECK(selection_size(101, 1.0) == 2);
    CHECK(selection_size(3241, 1.0) == 33);
    CHECK(selection_size(10, 100.0) == 10);
    CHECK(selection_size(1000, 0.5) == 5);
    CHECK(selection_size(999, 0.5) == 5);
    CHECK_THROWS_AS(selection_size(10, 0.0), ParameterError);
    CHECK_THROWS_AS(selection_size(10, 100.1), ParameterError);
}

TEST_CASE("selection size equals the exact rational ceiling for tenth-point percentages") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 1 + rng() % 20000;
        const unsigned pct10 = 1 + rng() % 1000; // pct in tenths of a percent
        const double pct = static_cast<double>(pct10) / 10.0;
        const std::size_t want = (n * pct10 + 999) / 1000; // ceil(n * pct10 / 1000)
        CHECK(selection_size(n, pct) == want);
    }
}

TEST_CASE("select_top_percent takes a prefix and preserves order") {
    const auto rl = ranked({{"a", 5.0}, {"b", 4.0}, {"c", 3.0}, {"d", 2.0}, {"e", 1.0}});
    const auto all = select_top_percent(rl, 100.0);
    CHECK(all.entries == rl.entries);
    const auto top = select_top_percent(rl, 40.0);
    REQUIRE(top.entries.size() == 2);
    CHECK(top.entries[0].id == "a");
    CHECK(top.entries[1].id == "b");
}

TEST_CASE("a tie crossing the cutoff is resolved by the tie-break, not expanded") {
    const auto rl = ranked({{"a", 1.0}, {"b", 1.0}, {"c", 1.0}, {"d", 1.0}});
    const auto top = select_top_percent(rl, 50.0);
    REQUIRE(top.entries.size() == 2);
    CHECK(top.entries[0].id == "a");
    CHECK(top.entries[1].id == "b");
}

TEST_CASE("label csv parsing") {
    SECTION("valid file, mixed case") {
        std::istringstream in("video_id,label\na,PRO\nb,neutral\nc,Anti\n");
        const auto labels = parse_label_csv<Stance>(in);
        CHECK(labels.at("a") == Stance::Pro);
        CHECK(labels.at("b") == Stance::Neutral);
        CHECK(labels.at("c") == Stance::Anti);
    }
    SECTION("unknown label string carries the line number") {
        std::istringstream in("video_id,label\na,pro\nb,bogus\n");
        try {
            parse_label_csv<Stance>(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SECTION("duplicate id is a parse error") {
        std::istringstream in("video_id,label\na,pro\na,anti\n");
        CHECK_THROWS_AS(parse_label_csv<Stance>(in), ParseError);
    }
    SECTION("scheme detection") {
        std::istringstream stance("video_id,label\na,pro\nb,neutral\n");
        CHECK(detect_label_scheme(stance) == LabelScheme::Stance);
        std::istringstream veracity("video_id,label\na,misinfo\n");
        CHECK(detect_label_scheme(veracity) == LabelScheme::Veracity);
        std::istringstream ambiguous("video_id,label\na,neutral\n");
        CHECK_FALSE(detect_label_scheme(ambiguous).has_value());
        std::istringstream mixed("video_id,label\na,pro\nb,misinfo\n");
        CHECK_THROWS_AS(detect_label_scheme(mixed), ParseError);
    }
}

TEST_CASE("merge_labels joins completely or fails loudly") {
    const auto rl = ranked({{"a", 3.0}, {"b", 2.0}, {"c", 1.0}});
    SECTION("complete labeling") {
        auto labels = label_all(rl, Stance::Pro);
        labels["b"] = Stance::Anti;
        const auto merged = merge_labels(rl, labels);
        REQUIRE(merged.ranking.entries.size() == 3);
        CHECK(merged.ranking.entries[0].bias == -1);
        CHECK(merged.ranking.entries[1].bias == +1);
        CHECK(merged.ignored_labels == 0);
        // ranks stay strictly increasing in list order
        for (std::size_t i = 1; i < merged.ranking.entries.size(); ++i)
            CHECK(merged.ranking.entries[i].rank > merged.ranking.entries[i - 1].rank);
    }
    SECTION("one missing label lists the offender") {
        auto labels = label_all(rl, Stance::Pro);
        labels.erase("b");
        try {
            merge_labels(rl, labels);
            FAIL("expected IncompleteLabelsError");
        } catch (const IncompleteLabelsError& e) {
            REQUIRE(e.missing_ids().size() == 1);
            CHECK(e.missing_ids()[0] == "b");
        }
    }
    SECTION("labels outside the selection are counted and ignored") {
        auto labels = label_all(rl, Stance::Neutral);
        labels["zz"] = Stance::Pro;
        labels["zy"] = Stance::Pro;
        const auto merged = merge_labels(rl, labels);
        CHECK(merged.ranking.entries.size() == 3);
        CHECK(merged.ignored_labels == 2);
    }
}

TEST_CASE("class distribution counts and fractions") {
    const auto rl = ranked({{"a", 4.0}, {"b", 3.0}, {"c", 2.0}, {"d", 1.0}});
    std::unordered_map<VideoId, Stance> labels{{"a", Stance::Pro},
                                               {"b", Stance::Pro},
                                               {"c", Stance::Anti},
                                               {"d", Stance::Neutral}};
    const auto dist = class_distribution(merge_labels(rl, labels).ranking);
    CHECK(dist.total == 4);
    CHECK(dist.counts[label_index(Stance::Pro)] == 2);
    CHECK_THAT(dist.fractions[label_index(Stance::Pro)],
               Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(dist.fractions[label_index(Stance::Neutral)],
               Catch::Matchers::WithinAbs(0.25, 1e-12));
    CHECK_THAT(dist.fractions[label_index(Stance::Anti)],
               Catch::Matchers::WithinAbs(0.25, 1e-12));
    double sum = 0.0;
    for (double f : dist.fractions) sum += f;
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));

    SECTION("all one class") {
        const auto mono = class_distribution(merge_labels(rl, label_all(rl, Stance::Pro)).ranking);
        CHECK_THAT(mono.fractions[label_index(Stance::Pro)],
                   Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
    SECTION("empty is an error") {
        LabeledRanking<Stance> empty;
        CHECK_THROWS_AS(class_distribution(empty), ParameterError);
    }
}

TEST_CASE("ranking and selection csv round-trips") {
    const auto rl = ranked({{"a,with comma", 2.5}, {"b", 1.0}});
    std::ostringstream os;
    write_ranking_csv(rl, os);
    std::istringstream in(os.str());
    const auto back = read_ranking_csv(in);
    CHECK(back.entries == rl.entries);

    MetadataMap metadata;
    metadata.emplace("b", VideoMeta{"b", "title b", 1, 2, "c"});
    std::ostringstream sel_os;
    write_selection_csv(rl, metadata, sel_os);
    std::istringstream sel_in(sel_os.str());
    const auto sel = read_selection_csv(sel_in);
    CHECK(sel.entries == rl.entries);
}

TEST_CASE("labeled csv round-trips") {
    const auto rl = ranked({{"a", 2.0}, {"b", 1.0}});
    std::unordered_map<VideoId, Veracity> labels{{"a", Veracity::Debunk},
                                                 {"b", Veracity::Misinfo}};
    const auto merged = merge_labels(rl, labels);
    std::ostringstream os;
    write_labeled_csv(merged.ranking, os);
    std::istringstream in(os.str());
    const auto back = read_labeled_csv<Veracity>(in);
    CHECK(back.entries == merged.ranking.entries);
}
