/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Ranking and selection: order videos by composite influence, take the top
 * percent for manual annotation, join with label files, and report the
 * class distribution of the selection.
 *
 * Label file format: CSV with header `video_id,label`. Accepted label
 * strings (case-insensitive): pro | neutral | anti for the stance scheme,
 * debunk | neutral | misinfo for the veracity scheme. A file must use one
 * scheme throughout.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "recaudit/centrality.hpp"
#include "recaudit/csv.hpp"
#include "recaudit/domain.hpp"
#include "recaudit/graph.hpp"

namespace recaudit {

/// Ties are broken by ascending video id: the paper trail of an audit has
/// to be reproducible, so ordering can never depend on hash or input order.
enum class TieBreak : std::uint8_t { VideoIdAscending };

struct RankedEntry {
    std::uint32_t rank = 0; // 1-based, contiguous
    VideoId id;
    double composite_score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

struct RankedList {
    std::vector<RankedEntry> entries;
    TieBreak tie_break = TieBreak::VideoIdAscending;
};

/// Descending by score, ties by ascending id, ranks 1..N.
inline RankedList rank_scored_ids(std::vector<std::pair<VideoId, double>> scored) {
    RankedList rl;
    rl.entries.reserve(scored.size());
    for (auto& [id, score] : scored) rl.entries.push_back({0, std::move(id), score});
    std::sort(rl.entries.begin(), rl.entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.composite_score != b.composite_score) return a.composite_score > b.composite_score;
        return a.id < b.id;
    });
    for (std::size_t i = 0; i < rl.entries.size(); ++i)
        rl.entries[i].rank = static_cast<std::uint32_t>(i + 1);
    return rl;
}

inline RankedList rank_videos(const RecGraph& g, const ScoreVector& composite_scores) {
    if (composite_scores.scores.size() != g.node_count())
        throw IntegrityError("composite scores disagree with graph node set");
    std::vector<std::pair<VideoId, double>> scored;
    scored.reserve(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        scored.emplace_back(g.id(static_cast<RecGraph::NodeIx>(v)), composite_scores.scores[v]);
    return rank_scored_ids(std::move(scored));
}

/// ceil(pct/100 * N) so tiny graphs still select at least one video. A
/// score tie crossing the cutoff is resolved by the list's tie-break order,
/// never by expanding the selection.
inline std::size_t selection_size(std::size_t n, double pct) {
    if (!(pct > 0.0 && pct <= 100.0))
        throw ParameterError("selection percentage must lie in (0,100], got " +
                             std::to_string(pct));
    if (n == 0) return 0;
    // Exact integer ceiling when pct is integral (the common case, pct = 1).
    if (pct == std::floor(pct)) {
        const auto p = static_cast<std::size_t>(pct);
        return (n * p + 99) / 100;
    }
    const double q = pct * static_cast<double>(n) / 100.0;
    return static_cast<std::size_t>(std::ceil(q - 1e-9));
}

inline RankedList select_top_percent(const RankedList& rl, double pct = 1.0) {
    const std::size_t k = selection_size(rl.entries.size(), pct);
    RankedList out;
    out.tie_break = rl.tie_break;
    out.entries.assign(rl.entries.begin(), rl.entries.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

// ---------------------------------------------------------------------------
// Label files and labeled rankings.
// ---------------------------------------------------------------------------

template <class L>
struct LabeledEntry {
    std::uint32_t rank = 0;
    VideoId id;
    L label{};
    int bias = 0; // bias_score(label), in {-1, 0, +1}

    friend bool operator==(const LabeledEntry&, const LabeledEntry&) = default;
};

template <class L>
struct LabeledRanking {
    static constexpr LabelScheme scheme = label_traits<L>::scheme;
    std::vector<LabeledEntry<L>> entries; // rank order inherited from the RankedList
};

/// Peeks at the label strings to decide which scheme a file uses. Files
/// containing only `neutral` fit either scheme and report nullopt; mixing
/// schemes is a parse error.
inline std::optional<LabelScheme> detect_label_scheme(std::istream& in) {
    std::string line;
    bool header = true;
    std::int64_t lineno = 0;
    bool saw_stance = false, saw_veracity = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (header) {
            header = false;
            continue;
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_row(line, lineno);
        if (fields.size() != 2) continue;
        const std::string lower = detail::ascii_lower(fields[1]);
        if (lower == "pro" || lower == "anti") saw_stance = true;
        else if (lower == "debunk" || lower == "misinfo") saw_veracity = true;
    }
    if (saw_stance && saw_veracity)
        throw ParseError("label file mixes stance and veracity label strings");
    if (saw_stance) return LabelScheme::Stance;
    if (saw_veracity) return LabelScheme::Veracity;
    return std::nullopt;
}

/// Parses `video_id,label` rows into a map. Unknown label strings and
/// duplicate ids are parse errors carrying the line number.
template <class L>
std::unordered_map<VideoId, L> parse_label_csv(std::istream& in) {
    std::unordered_map<VideoId, L> out;
    std::string line;
    std::int64_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_row(line, lineno);
        if (header) {
            header = false;
            if (fields.size() != 2 || detail::ascii_lower(fields[0]) != "video_id" ||
                detail::ascii_lower(fields[1]) != "label")
                throw ParseError("expected header video_id,label", lineno);
            continue;
        }
        if (fields.size() != 2) throw ParseError("expected 2 fields", lineno);
        if (fields[0].empty()) throw ParseError("empty video_id", lineno);
        const auto label = parse_label<L>(fields[1]);
        if (!label)
            throw ParseError("unknown " + std::string(to_string(label_traits<L>::scheme)) +
                                 " label string: " + fields[1],
                             lineno);
        if (!out.emplace(fields[0], *label).second)
            throw ParseError("duplicate label for " + fields[0], lineno);
    }
    return out;
}

template <class L>
struct MergeResult {
    LabeledRanking<L> ranking;
    std::size_t ignored_labels = 0; // labels for ids outside the selection
};

/// Inner-joins a ranked selection with a label map. Every selected video
/// must be labeled: silently dropping holes would bias the rank-weighted
/// score, so gaps are a hard error listing the unlabeled ids. Labels for
/// videos outside the selection are counted and ignored.
template <class L>
MergeResult<L> merge_labels(const RankedList& rl, const std::unordered_map<VideoId, L>& labels) {
    MergeResult<L> res;
    std::vector<VideoId> missing;
    res.ranking.entries.reserve(rl.entries.size());
    for (const RankedEntry& e : rl.entries) {
        auto it = labels.find(e.id);
        if (it == labels.end()) {
            missing.push_back(e.id);
            continue;
        }
        res.ranking.entries.push_back({e.rank, e.id, it->second, bias_score(it->second)});
    }
    if (!missing.empty()) {
        std::string msg = std::to_string(missing.size()) + " selected video(s) lack labels";
        throw IncompleteLabelsError(msg, std::move(missing));
    }
    res.ignored_labels = labels.size() - res.ranking.entries.size();
    return res;
}

template <class L>
struct ClassDistribution {
    static constexpr LabelScheme scheme = label_traits<L>::scheme;
    std::array<std::size_t, kLabelClassCount> counts{};
    std::array<double, kLabelClassCount> fractions{};
    std::size_t total = 0;
};

template <class L>
ClassDistribution<L> class_distribution(const LabeledRanking<L>& lr) {
    if (lr.entries.empty()) throw ParameterError("class_distribution: empty labeled ranking");
    ClassDistribution<L> dist;
    dist.total = lr.entries.size();
    for (const auto& e : lr.entries) ++dist.counts[label_index(e.label)];
    for (std::size_t i = 0; i < dist.counts.size(); ++i)
        dist.fractions[i] = static_cast<double>(dist.counts[i]) / static_cast<double>(dist.total);
    return dist;
}

// ---------------------------------------------------------------------------
// CSV exports.
// ---------------------------------------------------------------------------

inline void write_ranking_csv(const RankedList& rl, std::ostream& os) {
    os << "rank,video_id,composite_score\n";
    for (const RankedEntry& e : rl.entries)
        os << e.rank << ',' << csv::escape(e.id) << ',' << fmt_double(e.composite_score) << '\n';
}

inline RankedList read_ranking_csv(std::istream& in) {
    RankedList rl;
    std::string line;
    std::int64_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_row(line, lineno);
        if (header) {
            header = false;
            if (fields.size() < 3 || fields[0] != "rank" || fields[1] != "video_id")
                throw ParseError("expected header rank,video_id,composite_score", lineno);
            continue;
        }
        if (fields.size() < 3) throw ParseError("expected 3 fields", lineno);
        try {
            rl.entries.push_back({static_cast<std::uint32_t>(std::stoul(fields[0])), fields[1],
                                  std::stod(fields[2])});
        } catch (const std::exception&) {
            throw ParseError("bad numeric field", lineno);
        }
    }
    return rl;
}

/// Reads a selection sheet back (title column ignored).
inline RankedList read_selection_csv(std::istream& in) {
    RankedList rl;
    std::string line;
    std::int64_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_row(line, lineno);
        if (header) {
            header = false;
            if (fields.size() < 4 || fields[0] != "rank" || fields[1] != "video_id")
                throw ParseError("expected header rank,video_id,title,composite_score", lineno);
            continue;
        }
        if (fields.size() < 4) throw ParseError("expected 4 fields", lineno);
        try {
            rl.entries.push_back({static_cast<std::uint32_t>(std::stoul(fields[0])), fields[1],
                                  std::stod(fields[3])});
        } catch (const std::exception&) {
            throw ParseError("bad numeric field", lineno);
        }
    }
    return rl;
}

template <class L>
LabeledRanking<L> read_labeled_csv(std::istream& in) {
    LabeledRanking<L> lr;
    std::string line;
    std::int64_t lineno = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto fields = csv::split_row(line, lineno);
        if (header) {
            header = false;
            if (fields.size() < 3 || fields[0] != "rank" || fields[1] != "video_id" ||
                fields[2] != "label")
                throw ParseError("expected header rank,video_id,label,bias", lineno);
            continue;
        }
        if (fields.size() < 3) throw ParseError("expected at least 3 fields", lineno);
        const auto label = parse_label<L>(fields[2]);
        if (!label) throw ParseError("unknown label string: " + fields[2], lineno);
        try {
            lr.entries.push_back({static_cast<std::uint32_t>(std::stoul(fields[0])), fields[1],
                                  *label, bias_score(*label)});
        } catch (const std::exception&) {
            throw ParseError("bad rank field", lineno);
        }
    }
    return lr;
}

/// Hand-off sheet for annotators: rank, id, title (when known), score.
inline void write_selection_csv(const RankedList& rl, const MetadataMap& metadata,
                                std::ostream& os) {
    os << "rank,video_id,title,composite_score\n";
    for (const RankedEntry& e : rl.entries) {
        auto it = metadata.find(e.id);
        os << e.rank << ',' << csv::escape(e.id) << ','
           << csv::escape(it != metadata.end() ? it->second.title : "") << ','
           << fmt_double(e.composite_score) << '\n';
    }
}

template <class L>
void write_labeled_csv(const LabeledRanking<L>& lr, std::ostream& os) {
    os << "rank,video_id,label,bias\n";
    for (const auto& e : lr.entries)
        os << e.rank << ',' << csv::escape(e.id) << ',' << label_traits<L>::name(e.label) << ','
           << e.bias << '\n';
}

template <class L>
void write_distribution_csv(std::string_view profile, const ClassDistribution<L>& dist,
                            std::ostream& os, bool header = true) {
    if (header) os << "profile,label,count,fraction\n";
    for (std::size_t i = 0; i < dist.counts.size(); ++i)
        os << csv::escape(std::string(profile)) << ','
           << label_traits<L>::name(label_traits<L>::values[i]) << ',' << dist.counts[i] << ','
           << fmt_double(dist.fractions[i]) << '\n';
}

} // namespace recaudit
