/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Session-log ingestion: parse the line-delimited log and metadata formats,
 * apply the topic title filter, and prune never-recommended seed videos.
 *
 * File formats (one JSON record per line, UTF-8):
 *
 *   sessions.jsonl
 *     {"profile_id":"p1","step":0,"watched_id":"v12","is_seed":true,
 *      "watch_seconds":9.5,
 *      "recommendations":[{"video_id":"v7","rank":0},{"video_id":"v9","rank":1}]}
 *
 *   metadata.jsonl
 *     {"video_id":"v7","title":"...","duration_s":63,"view_count":1200,
 *      "channel":"c4"}
 *
 * Ranks are 0-based and must be contiguous within a record. watch_seconds is
 * optional. A malformed record is rejected and counted, not fatal; a video
 * watched twice is a fatal integrity error.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "recaudit/domain.hpp"
#include "recaudit/errors.hpp"

namespace recaudit {

struct Rejection {
    std::int64_t line = -1;
    std::string reason;
};

struct IngestReport {
    std::size_t events_read = 0; // accepted + rejected
    std::vector<Rejection> rejections;
    std::size_t metadata_read = 0;
    std::size_t videos_missing_metadata = 0;
    std::size_t videos_filtered_by_title = 0; // distinct ids removed by the filter
    std::size_t events_dropped_by_title = 0;
    std::size_t seeds_pruned = 0;

    std::size_t events_accepted() const { return events_read - rejections.size(); }
};

struct ParseResult {
    SessionLog log;
    IngestReport report;
};

namespace detail {

inline bool get_string(const nlohmann::json& j, const char* key, std::string& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    out = it->get<std::string>();
    return true;
}

inline bool get_uint(const nlohmann::json& j, const char* key, std::uint64_t& out) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_unsigned()) return false;
    out = it->get<std::uint64_t>();
    return true;
}

} // namespace detail

/// Parses a session-log stream. Malformed records are rejected and recorded
/// in the report; a duplicate watched id aborts with IntegrityError because
/// the remaining math assumes the no-rewatch rule.
inline ParseResult parse_session_log(std::istream& in) {
    ParseResult res;
    SessionLog& log = res.log;
    IngestReport& report = res.report;

    std::unordered_set<std::string> watched_ids;
    bool have_profile = false;
    bool have_step = false;
    std::uint64_t prev_step = 0;

    std::string line;
    std::int64_t lineno = 0;
    auto reject = [&](const std::string& why) {
        report.rejections.push_back({lineno, why});
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++report.events_read;

        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            reject("invalid JSON");
            continue;
        }

        RecEvent ev;
        std::uint64_t step = 0;
        if (!detail::get_string(j, "profile_id", ev.profile_id)) {
            reject("missing/invalid profile_id");
            continue;
        }
        if (!detail::get_uint(j, "step", step)) {
            reject("missing/invalid step");
            continue;
        }
        ev.step = step;
        if (!detail::get_string(j, "watched_id", ev.watched) || ev.watched.empty()) {
            reject("missing/invalid watched_id");
            continue;
        }
        auto seed_it = j.find("is_seed");
        if (seed_it == j.end() || !seed_it->is_boolean()) {
            reject("missing/invalid is_seed");
            continue;
        }
        ev.is_seed = seed_it->get<bool>();
        if (auto ws = j.find("watch_seconds"); ws != j.end() && ws->is_number())
            ev.watch_seconds = ws->get<double>();

        auto recs_it = j.find("recommendations");
        if (recs_it == j.end() || !recs_it->is_array()) {
            reject("missing/invalid recommendations");
            continue;
        }
        std::vector<std::pair<std::uint64_t, VideoId>> ranked;
        bool bad = false;
        for (const auto& r : *recs_it) {
            VideoId vid;
            std::uint64_t rank = 0;
            if (!r.is_object() || !detail::get_string(r, "video_id", vid) || vid.empty() ||
                !detail::get_uint(r, "rank", rank)) {
                bad = true;
                break;
            }
            ranked.emplace_back(rank, std::move(vid));
        }
        if (bad) {
            reject("malformed recommendation entry");
            continue;
        }
        std::sort(ranked.begin(), ranked.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        bool contiguous = true;
        for (std::size_t i = 0; i < ranked.size(); ++i)
            if (ranked[i].first != i) contiguous = false;
        if (!contiguous) {
            reject("ranks not contiguous from 0");
            continue;
        }
        std::unordered_set<std::string_view> seen;
        for (auto& [rank, vid] : ranked) {
            if (vid == ev.watched) {
                bad = true;
                reject("watched video appears in its own recommendations");
                break;
            }
            if (!seen.insert(vid).second) {
                bad = true;
                reject("duplicate video in recommendation list");
                break;
            }
        }
        if (bad) continue;
        ev.recommendations.reserve(ranked.size());
        for (auto& [rank, vid] : ranked) ev.recommendations.push_back(std::move(vid));

        if (!have_profile) {
            log.profile_id = ev.profile_id;
            have_profile = true;
        } else if (ev.profile_id != log.profile_id) {
            reject("profile_id differs from log profile (one profile per file)");
            continue;
        }
        if (have_step && ev.step <= prev_step) {
            reject("step not strictly increasing");
            continue;
        }
        prev_step = ev.step;
        have_step = true;

        if (!watched_ids.insert(ev.watched).second)
            throw IntegrityError("video watched twice in log: " + ev.watched);

        log.events.push_back(std::move(ev));
    }
    return res;
}

struct MetadataResult {
    std::unordered_map<VideoId, VideoMeta> metadata;
    std::vector<Rejection> rejections;
    std::size_t records_read = 0;
};

inline MetadataResult parse_metadata(std::istream& in) {
    MetadataResult res;
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++res.records_read;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            res.rejections.push_back({lineno, "invalid JSON"});
            continue;
        }
        VideoMeta m;
        if (!detail::get_string(j, "video_id", m.id) || m.id.empty()) {
            res.rejections.push_back({lineno, "missing/invalid video_id"});
            continue;
        }
        detail::get_string(j, "title", m.title);
        detail::get_uint(j, "duration_s", m.duration_s);
        detail::get_uint(j, "view_count", m.view_count);
        detail::get_string(j, "channel", m.channel);
        res.metadata[m.id] = std::move(m);
    }
    return res;
}

inline void write_session_log(const SessionLog& log, std::ostream& out) {
    for (const RecEvent& e : log.events) {
        nlohmann::json recs = nlohmann::json::array();
        for (std::size_t i = 0; i < e.recommendations.size(); ++i)
            recs.push_back({{"video_id", e.recommendations[i]}, {"rank", i}});
        nlohmann::json j{{"profile_id", e.profile_id},
                         {"step", e.step},
                         {"watched_id", e.watched},
                         {"is_seed", e.is_seed},
                         {"watch_seconds", e.watch_seconds},
                         {"recommendations", std::move(recs)}};
        out << j.dump() << '\n';
    }
}

inline void write_metadata(const std::unordered_map<VideoId, VideoMeta>& metadata,
                           std::ostream& out) {
    std::vector<const VideoMeta*> sorted;
    sorted.reserve(metadata.size());
    for (const auto& [id, m] : metadata) sorted.push_back(&m);
    std::sort(sorted.begin(), sorted.end(),
              [](const VideoMeta* a, const VideoMeta* b) { return a->id < b->id; });
    for (const VideoMeta* m : sorted) {
        nlohmann::json j{{"video_id", m->id},
                         {"title", m->title},
                         {"duration_s", m->duration_s},
                         {"view_count", m->view_count},
                         {"channel", m->channel}};
        out << j.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Topic filter.
// ---------------------------------------------------------------------------

/// What to do with videos whose title is unknown (no metadata entry or empty
/// title). The default keeps them; strict mode drops them.
enum class TitlePolicy { KeepUntitled, DropUntitled };

namespace detail {

/// Case-folds a UTF-8 string: ASCII A-Z and the Latin-1 supplement uppercase
/// range are lowered, other codepoints pass through unchanged. Full Unicode
/// folding would need ICU; titles in this domain are covered by this subset.
inline std::string fold_case_utf8(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size();) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (c < 0x80) {
            out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                               : static_cast<char>(c));
            ++i;
        } else if (c == 0xC3 && i + 1 < s.size()) {
            // Latin-1 supplement: U+00C0..U+00DE fold to +0x20, except U+00D7.
            unsigned char c2 = static_cast<unsigned char>(s[i + 1]);
            if (c2 >= 0x80 && c2 <= 0x9E && c2 != 0x97) c2 = static_cast<unsigned char>(c2 + 0x20);
            out.push_back(static_cast<char>(c));
            out.push_back(static_cast<char>(c2));
            i += 2;
        } else {
            out.push_back(static_cast<char>(c));
            ++i;
        }
    }
    return out;
}

inline bool title_contains(std::string_view title, std::string_view folded_keyword) {
    if (folded_keyword.empty()) return true;
    return fold_case_utf8(title).find(folded_keyword) != std::string::npos;
}

} // namespace detail

struct FilterStats {
    std::size_t videos_removed = 0; // distinct ids
    std::size_t events_removed = 0;
};

/// Keeps only videos whose title contains `keyword` (case-insensitive
/// substring). Events watching an off-topic video are dropped whole;
/// off-topic recommendations are removed from their lists and the remaining
/// ranks re-compacted. The empty keyword matches everything. Idempotent.
inline SessionLog filter_topic(const SessionLog& log, std::string_view keyword,
                               TitlePolicy policy = TitlePolicy::KeepUntitled,
                               FilterStats* stats = nullptr) {
    const std::string folded = detail::fold_case_utf8(keyword);
    std::unordered_set<VideoId> removed;

    auto keeps = [&](const VideoId& id) {
        const VideoMeta* m = log.meta_of(id);
        if (m == nullptr || m->title.empty())
            return policy == TitlePolicy::KeepUntitled;
        return detail::title_contains(m->title, folded);
    };

    SessionLog out;
    out.profile_id = log.profile_id;
    out.metadata = log.metadata;
    std::size_t events_removed = 0;
    for (const RecEvent& e : log.events) {
        if (!keeps(e.watched)) {
            removed.insert(e.watched);
            ++events_removed;
            continue;
        }
        RecEvent kept = e;
        kept.recommendations.clear();
        for (const VideoId& r : e.recommendations) {
            if (keeps(r))
                kept.recommendations.push_back(r);
            else
                removed.insert(r);
        }
        out.events.push_back(std::move(kept));
    }
    if (stats != nullptr) {
        stats->videos_removed = removed.size();
        stats->events_removed = events_removed;
    }
    return out;
}

/// Removes seed videos that never appear in any recommendation list (their
/// whole event goes, outgoing edges included). Iterates to a fixed point so
/// a seed recommended only by another pruned seed is pruned too. Idempotent.
inline SessionLog prune_unrecommended(const SessionLog& log, std::size_t* seeds_pruned = nullptr) {
    SessionLog out = log;
    std::size_t pruned = 0;
    for (;;) {
        std::unordered_set<std::string_view> recommended;
        for (const RecEvent& e : out.events)
            for (const VideoId& r : e.recommendations) recommended.insert(r);
        std::vector<RecEvent> kept;
        kept.reserve(out.events.size());
        std::size_t removed = 0;
        for (RecEvent& e : out.events) {
            if (e.is_seed && recommended.count(e.watched) == 0)
                ++removed;
            else
                kept.push_back(std::move(e));
        }
        out.events = std::move(kept);
        pruned += removed;
        if (removed == 0) break;
    }
    if (seeds_pruned != nullptr) *seeds_pruned = pruned;
    return out;
}

/// Canonical cleanup pipeline: title filter, then seed pruning.
inline SessionLog apply_ingest_pipeline(const SessionLog& log, std::string_view keyword,
                                        TitlePolicy policy, IngestReport& report) {
    FilterStats fs;
    SessionLog filtered = filter_topic(log, keyword, policy, &fs);
    report.videos_filtered_by_title = fs.videos_removed;
    report.events_dropped_by_title = fs.events_removed;
    std::size_t pruned = 0;
    SessionLog out = prune_unrecommended(filtered, &pruned);
    report.seeds_pruned = pruned;
    report.videos_missing_metadata = out.missing_metadata().size();
    return out;
}

} // namespace recaudit
