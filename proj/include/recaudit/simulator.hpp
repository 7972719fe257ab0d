/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Synthetic recommender and sock-puppet bots. The simulator plants a known
 * class bias (class_skew) into a generated video corpus and lets bots walk
 * the recommendation frontier exactly like a real crawl would: watch a
 * video, record the ranked suggestions, enqueue the unseen ones, repeat,
 * never watching anything twice. Because the ground truth is known, the
 * whole analysis pipeline can be validated end to end without platform
 * access.
 *
 * The recommender scores a candidate c while video w plays as
 *
 *   popularity(c) * class_skew[label(c)]
 *     * (1 + affinity_strength * affinity[label(c)])
 *     * (1 + similarity_bonus * [label(c) == label(w)])
 *
 * and returns the top k unwatched candidates. Content similarity is a
 * simple same-label bonus; that is enough structure to create
 * rank-correlated neighborhoods, which is all the pipeline needs.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "recaudit/domain.hpp"
#include "recaudit/errors.hpp"

namespace recaudit {

template <class L>
struct SimConfig {
    std::size_t corpus_size = 10000;
    /// Probability of each class when drawing video labels; must sum to 1.
    std::array<double, kLabelClassCount> class_mix{1.0 / 3, 1.0 / 3, 1.0 / 3};
    /// Multiplicative recommender boost per class; the planted bias.
    std::array<double, kLabelClassCount> class_skew{1.0, 1.0, 1.0};
    /// How strongly a profile's watch history skews its recommendations.
    double affinity_strength = 0.0;
    /// Same-label content-similarity bonus.
    double similarity_bonus = 0.5;
    /// Mean recommendation-list length; only the mean is contractual.
    double list_length_mean = 8.0;
    std::size_t seed_count = 20;
    std::size_t steps = 5000;
    std::uint64_t rng_seed = 0;
    /// Every generated title contains this token, so the title filter keeps
    /// synthetic corpora intact by construction.
    std::string topic_keyword = "topic";

    void check() const {
        double mix = 0.0;
        for (double m : class_mix) {
            if (m < 0.0) throw ParameterError("class_mix entries must be nonnegative");
            mix += m;
        }
        if (std::abs(mix - 1.0) > 1e-9)
            throw ParameterError("class_mix must sum to 1, got " + std::to_string(mix));
        for (double s : class_skew)
            if (s < 0.0) throw ParameterError("class_skew entries must be nonnegative");
        if (!(list_length_mean > 0.0))
            throw ParameterError("list_length_mean must be positive");
        if (affinity_strength < 0.0)
            throw ParameterError("affinity_strength must be nonnegative");
        if (similarity_bonus < 0.0)
            throw ParameterError("similarity_bonus must be nonnegative");
    }
};

template <class L>
struct SyntheticCorpus {
    std::vector<VideoMeta> videos;   // index is the corpus-internal id
    std::vector<L> labels;           // hidden ground truth per video
    std::vector<double> popularity;  // > 0, log-normal

    std::size_t size() const { return videos.size(); }
};

enum class SeedPolicy : std::uint8_t {
    NeutralQuery, // seed sampling follows popularity only
    BiasedQueries // seed sampling additionally boosts +1-scoring videos
};

inline std::optional<SeedPolicy> parse_seed_policy(std::string_view s) {
    if (s == "neutral") return SeedPolicy::NeutralQuery;
    if (s == "biased") return SeedPolicy::BiasedQueries;
    return std::nullopt;
}

struct ProfileSpec {
    std::string profile_id = "profile";
    /// Relative exposure per class during history training; empty history
    /// (training_watch_count = 0) models a fresh account.
    std::array<double, kLabelClassCount> training_topics{1.0, 1.0, 1.0};
    std::size_t training_watch_count = 22;
    SeedPolicy seed_policy = SeedPolicy::NeutralQuery;
};

template <class L>
struct ProfileState {
    std::string profile_id;
    /// Fraction of training exposure per class; sums to 1.
    std::array<double, kLabelClassCount> affinity{};
};

namespace detail {

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Independent per-purpose RNG streams derived from the run seed: a profile
/// run must not perturb another's draws.
inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::string_view purpose,
                                  std::string_view profile_id = "") {
    std::seed_seq seq{seed, fnv1a64(purpose), fnv1a64(profile_id)};
    return std::mt19937_64(seq);
}

/// List length: 1 + Binomial(2*(mean-1), 1/2), i.e. a symmetric integer
/// distribution on [1, 2*mean-1] with mean exactly list_length_mean (for
/// integral means; fractional means use a matching success probability).
inline std::size_t draw_list_length(std::mt19937_64& rng, double mean) {
    if (mean <= 1.0) return 1;
    const auto trials = static_cast<unsigned>(std::lround(2.0 * (mean - 1.0)));
    if (trials == 0) return 1;
    const double p = (mean - 1.0) / static_cast<double>(trials);
    std::size_t k = 1;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (unsigned t = 0; t < trials; ++t)
        if (u(rng) < p) ++k;
    return k;
}

inline std::size_t draw_class(std::mt19937_64& rng,
                              const std::array<double, kLabelClassCount>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    std::uniform_real_distribution<double> u(0.0, total);
    double x = u(rng);
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        if (x < weights[i]) return i;
        x -= weights[i];
    }
    return weights.size() - 1;
}

} // namespace detail

/// Generates the video universe: labels i.i.d. from class_mix, log-normal
/// popularity, titles always containing the topic keyword. Deterministic
/// for a given rng_seed.
template <class L>
SyntheticCorpus<L> generate_corpus(const SimConfig<L>& cfg) {
    cfg.check();
    SyntheticCorpus<L> corpus;
    corpus.videos.reserve(cfg.corpus_size);
    corpus.labels.reserve(cfg.corpus_size);
    corpus.popularity.reserve(cfg.corpus_size);

    auto rng = detail::seeded_rng(cfg.rng_seed, "corpus");
    std::lognormal_distribution<double> pop(0.0, 1.0);
    std::uniform_int_distribution<std::uint64_t> duration(30, 1800);
    std::uniform_int_distribution<int> channel(0, 49);
    static constexpr std::array<std::string_view, 6> kTopics{
        "explained", "debate", "news report", "documentary", "Q&A", "story"};

    char idbuf[24];
    for (std::size_t i = 0; i < cfg.corpus_size; ++i) {
        const std::size_t cls = detail::draw_class(rng, cfg.class_mix);
        const double popularity = pop(rng);
        std::snprintf(idbuf, sizeof idbuf, "v%06zu", i);
        VideoMeta m;
        m.id = idbuf;
        m.title = std::string(cfg.topic_keyword) + " " + std::string(kTopics[i % kTopics.size()]) +
                  " #" + std::to_string(i);
        m.duration_s = duration(rng);
        m.view_count = static_cast<std::uint64_t>(popularity * 1000.0) + 1;
        m.channel = "channel-" + std::to_string(channel(rng));
        corpus.videos.push_back(std::move(m));
        corpus.labels.push_back(label_traits<L>::values[cls]);
        corpus.popularity.push_back(popularity);
    }
    return corpus;
}

/// Derives a profile's affinity vector from its training watches. Training
/// content models off-topic history (the ideology feed watched before the
/// audit), so it does not consume corpus videos. A zero watch count yields
/// uniform affinity: the fresh-account baseline.
template <class L>
ProfileState<L> train_profile(const ProfileSpec& spec, const SyntheticCorpus<L>& corpus,
                              const SimConfig<L>& cfg) {
    (void)corpus;
    ProfileState<L> state;
    state.profile_id = spec.profile_id;
    if (spec.training_watch_count == 0) {
        state.affinity.fill(1.0 / static_cast<double>(kLabelClassCount));
        return state;
    }
    double total = 0.0;
    for (double w : spec.training_topics) {
        if (w < 0.0) throw ParameterError("training_topics entries must be nonnegative");
        total += w;
    }
    if (total <= 0.0) throw ParameterError("training_topics must not be all zero");
    auto rng = detail::seeded_rng(cfg.rng_seed, "train", spec.profile_id);
    std::array<std::size_t, kLabelClassCount> counts{};
    for (std::size_t i = 0; i < spec.training_watch_count; ++i)
        ++counts[detail::draw_class(rng, spec.training_topics)];
    for (std::size_t i = 0; i < counts.size(); ++i)
        state.affinity[i] =
            static_cast<double>(counts[i]) / static_cast<double>(spec.training_watch_count);
    return state;
}

/// Scores every unwatched candidate and returns the top-k (score
/// descending, corpus index ascending on ties). The playing video and
/// anything already watched are excluded; an exhausted corpus yields an
/// empty list and the walk ends there.
template <class L>
std::vector<std::uint32_t> recommend(const ProfileState<L>& state, std::uint32_t watched,
                                     const SyntheticCorpus<L>& corpus, const SimConfig<L>& cfg,
                                     const std::vector<bool>& watched_set, std::size_t k) {
    const std::size_t n = corpus.size();
    if (watched >= n) throw ParameterError("recommend: watched video not in corpus");
    // Static per-candidate factor; only the similarity bonus depends on the
    // playing video.
    std::vector<std::pair<double, std::uint32_t>> scored;
    scored.reserve(n);
    const std::size_t watched_cls = label_index(corpus.labels[watched]);
    for (std::uint32_t c = 0; c < n; ++c) {
        if (c == watched || watched_set[c]) continue;
        const std::size_t cls = label_index(corpus.labels[c]);
        double s = corpus.popularity[c] * cfg.class_skew[cls] *
                   (1.0 + cfg.affinity_strength * state.affinity[cls]);
        if (cls == watched_cls) s *= 1.0 + cfg.similarity_bonus;
        scored.emplace_back(s, c);
    }
    if (scored.empty()) return {};
    k = std::min(k, scored.size());
    auto better = [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    std::nth_element(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k - 1),
                     scored.end(), better);
    std::sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), better);
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(scored[i].second);
    return out;
}

/// Extra seed-sampling weight for +1-scoring videos under BiasedQueries,
/// modeling searches phrased to surface that content.
inline constexpr double kBiasedSeedBoost = 5.0;

/// Runs one bot: sample and shuffle seeds, then walk the frontier
/// breadth-wise until `steps` videos have been watched or the frontier
/// empties. The emitted log satisfies every session-log invariant by
/// construction and is byte-identical across runs for a fixed config.
template <class L>
SessionLog run_sock_puppet(const ProfileSpec& spec, const SyntheticCorpus<L>& corpus,
                           const SimConfig<L>& cfg) {
    cfg.check();
    if (cfg.seed_count == 0) throw ParameterError("run_sock_puppet: seed_count must be >= 1");
    if (corpus.size() == 0) throw ParameterError("run_sock_puppet: empty corpus");

    const ProfileState<L> state = train_profile(spec, corpus, cfg);
    auto rng = detail::seeded_rng(cfg.rng_seed, "run", spec.profile_id);
    const std::size_t n = corpus.size();

    // Weighted seed sampling without replacement.
    std::vector<double> weight(n);
    for (std::size_t c = 0; c < n; ++c) {
        weight[c] = corpus.popularity[c];
        if (spec.seed_policy == SeedPolicy::BiasedQueries && bias_score(corpus.labels[c]) > 0)
            weight[c] *= kBiasedSeedBoost;
    }
    std::vector<std::uint32_t> seeds;
    const std::size_t want = std::min(cfg.seed_count, n);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double total = 0.0;
    for (double w : weight) total += w;
    while (seeds.size() < want && total > 0.0) {
        double x = u01(rng) * total;
        std::uint32_t pick = 0;
        for (std::uint32_t c = 0; c < n; ++c) {
            if (weight[c] <= 0.0) continue;
            if (x < weight[c]) {
                pick = c;
                break;
            }
            x -= weight[c];
            pick = c;
        }
        seeds.push_back(pick);
        total -= weight[pick];
        weight[pick] = 0.0;
    }
    // Seeds are not watched in the order a search page would list them, so
    // no ranking bias from the (simulated) search engine leaks in.
    std::shuffle(seeds.begin(), seeds.end(), rng);

    std::vector<bool> watched(n, false);
    std::vector<bool> queued(n, false);
    std::vector<bool> is_seed(n, false);
    std::deque<std::uint32_t> frontier;
    for (std::uint32_t s : seeds) {
        frontier.push_back(s);
        queued[s] = true;
        is_seed[s] = true;
    }

    SessionLog log;
    log.profile_id = spec.profile_id;
    auto add_meta = [&](std::uint32_t ix) {
        const VideoId& id = corpus.videos[ix].id;
        if (log.metadata.count(id) == 0) log.metadata.emplace(id, corpus.videos[ix]);
    };
    std::normal_distribution<double> dwell(10.0, 2.0);
    std::uint64_t step = 0;
    while (step < cfg.steps && !frontier.empty()) {
        const std::uint32_t v = frontier.front();
        frontier.pop_front();
        watched[v] = true;
        const std::size_t k = detail::draw_list_length(rng, cfg.list_length_mean);
        const std::vector<std::uint32_t> recs = recommend(state, v, corpus, cfg, watched, k);

        RecEvent ev;
        ev.profile_id = spec.profile_id;
        ev.step = step++;
        ev.watched = corpus.videos[v].id;
        ev.is_seed = is_seed[v];
        ev.watch_seconds = std::max(1.0, std::round(dwell(rng) * 10.0) / 10.0);
        ev.recommendations.reserve(recs.size());
        add_meta(v);
        for (std::uint32_t r : recs) {
            ev.recommendations.push_back(corpus.videos[r].id);
            add_meta(r);
            if (!queued[r]) {
                queued[r] = true;
                frontier.push_back(r);
            }
        }
        log.events.push_back(std::move(ev));
    }
    return log;
}

/// Ground-truth direction of the planted bias: compares the skew mass on
/// -1-scoring labels against the mass on +1-scoring labels.
template <class L>
int planted_bias_oracle(const SimConfig<L>& cfg) {
    double minus = 0.0, plus = 0.0;
    for (std::size_t i = 0; i < kLabelClassCount; ++i) {
        const int s = bias_score(label_traits<L>::values[i]);
        if (s < 0) minus += cfg.class_skew[i];
        if (s > 0) plus += cfg.class_skew[i];
    }
    if (plus > minus + 1e-12) return +1;
    if (minus > plus + 1e-12) return -1;
    return 0;
}

/// Ground-truth label sheet for the whole corpus, in the standard label
/// CSV format; lets the pipeline's merge step run against planted truth.
template <class L>
void write_truth_labels(const SyntheticCorpus<L>& corpus, std::ostream& os) {
    os << "video_id,label\n";
    for (std::size_t i = 0; i < corpus.size(); ++i)
        os << corpus.videos[i].id << ',' << label_traits<L>::name(corpus.labels[i]) << '\n';
}

} // namespace recaudit
