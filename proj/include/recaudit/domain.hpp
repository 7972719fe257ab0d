/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Shared vocabulary types: videos, watch events, session logs, and the two
 * annotation schemes (viewpoint stance and information veracity).
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "recaudit/errors.hpp"

namespace recaudit {

/// Opaque video token. Real crawls carry platform ids, synthetic corpora
/// carry generated ones; everything downstream treats them the same way.
using VideoId = std::string;

struct VideoMeta {
    VideoId id;
    std::string title;
    std::uint64_t duration_s = 0;
    std::uint64_t view_count = 0;
    std::string channel;

    friend bool operator==(const VideoMeta&, const VideoMeta&) = default;
};

using MetadataMap = std::unordered_map<VideoId, VideoMeta>;

/// One watch step: the video that was played and the ranked list of
/// suggestions observed while it played (rank 0 = top of the list).
struct RecEvent {
    std::string profile_id;
    std::uint64_t step = 0;
    VideoId watched;
    std::vector<VideoId> recommendations;
    bool is_seed = false;
    /// Seconds the bot stayed on the video. Informational only; none of the
    /// graph math reads it.
    double watch_seconds = 0.0;

    friend bool operator==(const RecEvent&, const RecEvent&) = default;
};

struct SessionLog {
    std::string profile_id;
    std::vector<RecEvent> events;
    std::unordered_map<VideoId, VideoMeta> metadata;

    const VideoMeta* meta_of(const VideoId& id) const {
        auto it = metadata.find(id);
        return it == metadata.end() ? nullptr : &it->second;
    }

    /// Ids referenced by any event (watched or recommended) that have no
    /// metadata entry. Missing metadata is a flag, not a failure: only ids
    /// and ranks are required for the math.
    std::vector<VideoId> missing_metadata() const {
        std::vector<VideoId> out;
        std::unordered_set<std::string_view> seen;
        auto check = [&](const VideoId& id) {
            if (metadata.count(id) == 0 && seen.insert(id).second) out.push_back(id);
        };
        for (const RecEvent& e : events) {
            check(e.watched);
            for (const VideoId& r : e.recommendations) check(r);
        }
        return out;
    }
};

/// Throws IntegrityError if the log violates a structural invariant:
/// a video watched twice, non-increasing steps, duplicate recommendations
/// within one list, or a video recommending itself.
inline void validate(const SessionLog& log) {
    std::unordered_set<std::string_view> watched;
    bool first = true;
    std::uint64_t prev_step = 0;
    for (const RecEvent& e : log.events) {
        if (e.watched.empty()) throw IntegrityError("event with empty watched id");
        if (!watched.insert(e.watched).second)
            throw IntegrityError("video watched twice: " + e.watched);
        if (!first && e.step <= prev_step)
            throw IntegrityError("steps not strictly increasing at step " +
                                 std::to_string(e.step));
        prev_step = e.step;
        first = false;
        std::unordered_set<std::string_view> recs;
        for (const VideoId& r : e.recommendations) {
            if (r == e.watched)
                throw IntegrityError("video appears in its own recommendations: " + r);
            if (!recs.insert(r).second)
                throw IntegrityError("duplicate recommendation " + r + " under " + e.watched);
        }
    }
}

// ---------------------------------------------------------------------------
// Annotation schemes.
//
// A dataset is labeled under exactly one of two disjoint schemes. Keeping
// them as distinct enum types means stance and veracity labels cannot be
// mixed in one ranking at compile time.
// ---------------------------------------------------------------------------

enum class LabelScheme : std::uint8_t { Stance, Veracity };

inline const char* to_string(LabelScheme s) {
    return s == LabelScheme::Stance ? "stance" : "veracity";
}

inline std::optional<LabelScheme> parse_label_scheme(std::string_view s) {
    if (s == "stance") return LabelScheme::Stance;
    if (s == "veracity") return LabelScheme::Veracity;
    return std::nullopt;
}

/// Viewpoint on the audited topic.
enum class Stance : std::uint8_t { Pro = 0, Neutral = 1, Anti = 2 };

/// Information quality of the video.
enum class Veracity : std::uint8_t { Debunk = 0, Neutral = 1, Misinfo = 2 };

/// Per-item bias score: -1 for content that argues for the topic or debunks
/// falsehoods, 0 for neutral, +1 for content against the topic or deceptive.
constexpr int bias_score(Stance l) {
    switch (l) {
        case Stance::Pro: return -1;
        case Stance::Neutral: return 0;
        case Stance::Anti: return +1;
    }
    return 0;
}

constexpr int bias_score(Veracity l) {
    switch (l) {
        case Veracity::Debunk: return -1;
        case Veracity::Neutral: return 0;
        case Veracity::Misinfo: return +1;
    }
    return 0;
}

constexpr std::size_t kLabelClassCount = 3;

template <class L>
struct label_traits;

template <>
struct label_traits<Stance> {
    static constexpr LabelScheme scheme = LabelScheme::Stance;
    static constexpr std::array<Stance, kLabelClassCount> values{Stance::Pro, Stance::Neutral,
                                                                 Stance::Anti};
    static constexpr std::string_view name(Stance l) {
        switch (l) {
            case Stance::Pro: return "pro";
            case Stance::Neutral: return "neutral";
            case Stance::Anti: return "anti";
        }
        return "?";
    }
};

template <>
struct label_traits<Veracity> {
    static constexpr LabelScheme scheme = LabelScheme::Veracity;
    static constexpr std::array<Veracity, kLabelClassCount> values{
        Veracity::Debunk, Veracity::Neutral, Veracity::Misinfo};
    static constexpr std::string_view name(Veracity l) {
        switch (l) {
            case Veracity::Debunk: return "debunk";
            case Veracity::Neutral: return "neutral";
            case Veracity::Misinfo: return "misinfo";
        }
        return "?";
    }
};

namespace detail {
inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}
} // namespace detail

/// Case-insensitive label parsing. Accepted strings per scheme:
/// stance: pro | neutral | anti, veracity: debunk | neutral | misinfo.
template <class L>
std::optional<L> parse_label(std::string_view s) {
    const std::string lower = detail::ascii_lower(s);
    for (L v : label_traits<L>::values)
        if (lower == label_traits<L>::name(v)) return v;
    return std::nullopt;
}

template <class L>
constexpr std::size_t label_index(L l) {
    return static_cast<std::size_t>(l);
}

} // namespace recaudit
