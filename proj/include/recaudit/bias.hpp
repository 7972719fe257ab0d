/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Audit metrics over labeled rankings:
 *
 *   total bias      sum_{j=0}^{n-1} 2(n-j) / (n(n+1)) * s_j with s_j the
 *                   {-1,0,+1} score of the item at 0-based position j. The
 *                   weights telescope to exactly 1, so the result lies in
 *                   [-1,+1]; +1 means the top of the ranking is saturated
 *                   with +1-scoring (anti/deceptive) content, -1 the
 *                   opposite.
 *
 *   overlap coefficient   |A & B| / min(|A|,|B|) over two profiles' videos.
 *
 *   rank-biased overlap   top-weighted agreement of two rankings,
 *                   (1-p) * sum_k p^{k-1} |a[..k] & b[..k]| / k, truncated
 *                   at a depth; smaller p concentrates the weight nearer
 *                   the top. The extrapolated variant is available behind
 *                   a flag.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "recaudit/domain.hpp"
#include "recaudit/errors.hpp"
#include "recaudit/ranking.hpp"

namespace recaudit {

/// Weight of the item at 0-based position j in a ranking of n items.
/// Decreases linearly with rank; the n weights sum to exactly 1.
inline double rank_weight(std::size_t n, std::size_t j) {
    return 2.0 * static_cast<double>(n - j) /
           (static_cast<double>(n) * (static_cast<double>(n) + 1.0));
}

struct BiasReport {
    std::string profile_id;
    double total_bias = 0.0; // in [-1, +1]
    std::size_t n = 0;       // selection size
    LabelScheme scheme = LabelScheme::Stance;
};

/// Rank-weighted total bias of a labeled selection. The weighted sum is
/// evaluated over an integer numerator (scores are -1/0/+1 and the weight
/// denominators agree), so all-(-1) and all-(+1) labelings hit the bounds
/// exactly.
template <class L>
BiasReport total_bias(const LabeledRanking<L>& lr, std::string profile_id = {}) {
    const std::size_t n = lr.entries.size();
    if (n == 0) throw ParameterError("total_bias: empty selection");
    std::int64_t numerator = 0; // sum of 2*(n-j)*s_j
    for (std::size_t j = 0; j < n; ++j)
        numerator += 2 * static_cast<std::int64_t>(n - j) * lr.entries[j].bias;
    const double denominator = static_cast<double>(n) * (static_cast<double>(n) + 1.0);
    BiasReport rep;
    rep.profile_id = std::move(profile_id);
    rep.total_bias = static_cast<double>(numerator) / denominator;
    rep.n = n;
    rep.scheme = label_traits<L>::scheme;
    return rep;
}

/// |A & B| / min(|A|, |B|); inputs are treated as sets.
inline double overlap_coefficient(std::span<const VideoId> a, std::span<const VideoId> b) {
    std::unordered_set<std::string_view> sa(a.begin(), a.end());
    std::unordered_set<std::string_view> sb(b.begin(), b.end());
    if (sa.empty() || sb.empty())
        throw ParameterError("overlap_coefficient: empty video set");
    const auto& small = sa.size() <= sb.size() ? sa : sb;
    const auto& large = sa.size() <= sb.size() ? sb : sa;
    std::size_t inter = 0;
    for (std::string_view id : small) inter += large.count(id);
    return static_cast<double>(inter) / static_cast<double>(small.size());
}

namespace detail {

inline void require_duplicate_free(std::span<const VideoId> list, const char* name) {
    std::unordered_set<std::string_view> seen;
    for (const VideoId& id : list)
        if (!seen.insert(id).second)
            throw IntegrityError(std::string("rbo: duplicate id in ") + name + ": " + id);
}

inline void check_rbo_params(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw ParameterError("rbo: p must lie in (0,1), got " + std::to_string(p));
}

/// Incremental prefix-overlap walk shared by both RBO variants. Calls
/// visit(k, overlap_at_k) for k = 1..d.
template <class F>
void rbo_walk(std::span<const VideoId> a, std::span<const VideoId> b, std::size_t d, F&& visit) {
    std::unordered_set<std::string_view> seen_once;
    std::size_t overlap = 0;
    for (std::size_t k = 1; k <= d; ++k) {
        const VideoId* ea = k <= a.size() ? &a[k - 1] : nullptr;
        const VideoId* eb = k <= b.size() ? &b[k - 1] : nullptr;
        if (ea && eb && *ea == *eb) {
            ++overlap;
        } else {
            // an element seen from the other list earlier completes a match
            if (ea) {
                if (seen_once.erase(*ea) == 1) ++overlap;
                else seen_once.insert(*ea);
            }
            if (eb) {
                if (seen_once.erase(*eb) == 1) ++overlap;
                else seen_once.insert(*eb);
            }
        }
        visit(k, overlap);
    }
}

} // namespace detail

/// Truncated base RBO: (1-p) * sum_{k=1..d} p^{k-1} A_k with agreement
/// A_k = |a[..k] & b[..k]| / k and d = min(depth, max list length). Result
/// lies in [0, 1 - p^d].
inline double rbo(std::span<const VideoId> a, std::span<const VideoId> b, double p = 0.97,
                  std::size_t depth = 1000) {
    detail::check_rbo_params(p);
    if (depth == 0) throw ParameterError("rbo: depth must be >= 1");
    detail::require_duplicate_free(a, "first list");
    detail::require_duplicate_free(b, "second list");
    const std::size_t d = std::min(depth, std::max(a.size(), b.size()));
    double sum = 0.0;
    double pk = 1.0; // p^{k-1}
    detail::rbo_walk(a, b, d, [&](std::size_t k, std::size_t overlap) {
        sum += pk * static_cast<double>(overlap) / static_cast<double>(k);
        pk *= p;
    });
    return (1.0 - p) * sum;
}

/// Extrapolated RBO (the fixed-point variant): the agreement observed at
/// the evaluation depth is assumed to continue, which closes the weight
/// mass the truncated sum leaves on the table. Lists are truncated to
/// `depth` before extrapolating.
inline double rbo_extrapolated(std::span<const VideoId> a, std::span<const VideoId> b,
                               double p = 0.97, std::size_t depth = 1000) {
    detail::check_rbo_params(p);
    if (depth == 0) throw ParameterError("rbo: depth must be >= 1");
    detail::require_duplicate_free(a, "first list");
    detail::require_duplicate_free(b, "second list");
    a = a.subspan(0, std::min(a.size(), depth));
    b = b.subspan(0, std::min(b.size(), depth));
    if (a.empty() && b.empty()) return 0.0;
    const std::size_t s = std::min(a.size(), b.size()); // short list length
    const std::size_t l = std::max(a.size(), b.size()); // long list length
    double sum = 0.0;
    double pk = 1.0; // p^{k-1}
    std::size_t x_s = 0, x_l = 0;
    detail::rbo_walk(a, b, l, [&](std::size_t k, std::size_t overlap) {
        double term = static_cast<double>(overlap) / static_cast<double>(k);
        if (k > s && s > 0) // uneven tail: extrapolate the short list's agreement
            term += static_cast<double>(x_s) * static_cast<double>(k - s) /
                    (static_cast<double>(k) * static_cast<double>(s));
        sum += pk * term;
        pk *= p;
        if (k == s) x_s = overlap;
        x_l = overlap;
    });
    const double p_l = std::pow(p, static_cast<double>(l));
    double tail = 0.0;
    if (s > 0)
        tail = (static_cast<double>(x_l - x_s) / static_cast<double>(l) +
                static_cast<double>(x_s) / static_cast<double>(s)) *
               p_l;
    return (1.0 - p) * sum + tail;
}

struct OverlapReport {
    std::string profile_a;
    std::string profile_b;
    double oc = 0.0;
    double rbo = 0.0;
    double p = 0.97;
    std::size_t depth = 1000;
    bool extrapolated = false;
};

/// OC and RBO between two profiles' full rankings (ids in rank order).
inline OverlapReport compare_rankings(std::string profile_a, std::span<const VideoId> a,
                                      std::string profile_b, std::span<const VideoId> b,
                                      double p = 0.97, std::size_t depth = 1000,
                                      bool extrapolated = false) {
    OverlapReport rep;
    rep.profile_a = std::move(profile_a);
    rep.profile_b = std::move(profile_b);
    rep.oc = overlap_coefficient(a, b);
    rep.rbo = extrapolated ? rbo_extrapolated(a, b, p, depth) : rbo(a, b, p, depth);
    rep.p = p;
    rep.depth = depth;
    rep.extrapolated = extrapolated;
    return rep;
}

inline void write_bias_csv_header(std::ostream& os) { os << "profile,total_bias\n"; }

inline void write_bias_csv_row(std::ostream& os, const BiasReport& rep) {
    os << csv::escape(rep.profile_id) << ',' << fmt_double(rep.total_bias) << '\n';
}

inline void write_overlap_csv_header(std::ostream& os) { os << "pair,oc,rbo\n"; }

inline void write_overlap_csv_row(std::ostream& os, const OverlapReport& rep) {
    os << csv::escape(rep.profile_a + " & " + rep.profile_b) << ',' << fmt_double(rep.oc) << ','
       << fmt_double(rep.rbo) << '\n';
}

} // namespace recaudit
