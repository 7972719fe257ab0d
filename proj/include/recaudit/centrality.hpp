/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * The six influence measures used to rank videos by prominence in the
 * recommendation network:
 *
 *   in-degree            how many times a video was recommended
 *   weighted in-degree   same, weighted by list rank (click probability)
 *   eigenvector          dominant left eigenvector of the weighted adjacency
 *   PageRank             damped random surfer, dangling mass spread uniformly
 *   Katz                 beta * sum_k alpha^k (A^T)^k 1, alpha below 1/rho(A)
 *   HITS authority       dominant eigenvector of A^T A on the link structure
 *
 * Each measure is min-max normalized to [0,1] and the six are summed into a
 * composite score; summing and averaging induce the same ranking. Iterative
 * solvers never throw on non-convergence: they return the last iterate with
 * a converged=false flag so callers can surface methodological fragility
 * instead of hiding it.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "recaudit/csv.hpp"
#include "recaudit/graph.hpp"

namespace recaudit {

enum class Measure : std::uint8_t {
    InDegree = 0,
    WeightedInDegree = 1,
    Eigen = 2,
    PageRank = 3,
    Katz = 4,
    Authority = 5,
    Composite = 6,
};

inline constexpr std::array<Measure, 6> kSixMeasures{
    Measure::InDegree, Measure::WeightedInDegree, Measure::Eigen,
    Measure::PageRank, Measure::Katz,             Measure::Authority};

inline const char* to_string(Measure m) {
    switch (m) {
        case Measure::InDegree: return "in_degree";
        case Measure::WeightedInDegree: return "weighted_in_degree";
        case Measure::Eigen: return "eigen";
        case Measure::PageRank: return "pagerank";
        case Measure::Katz: return "katz";
        case Measure::Authority: return "authority";
        case Measure::Composite: return "composite";
    }
    return "?";
}

struct SolverParams {
    double damping = 0.85;       // PageRank
    double katz_alpha = 0.0;     // <= 0: derive as alpha_fraction / spectral radius
    double katz_beta = 1.0;
    double tolerance = 1e-10;
    // Katz contracts by alpha_fraction per step, so the default tolerance
    // takes ~220 iterations to reach, and the HITS spectral gap on
    // crawl-scale graphs has needed a few thousand; the cap leaves
    // headroom for both while staying sub-second at that scale.
    int max_iterations = 5000;
    double alpha_fraction = 0.9; // Katz alpha as a fraction of 1/rho(A)

    void check() const {
        if (!(damping > 0.0 && damping < 1.0))
            throw ParameterError("damping must lie in (0,1)");
        if (!(tolerance > 0.0)) throw ParameterError("tolerance must be positive");
        if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
        if (!(alpha_fraction > 0.0 && alpha_fraction < 1.0))
            throw ParameterError("alpha_fraction must lie in (0,1)");
    }
};

/// Scores indexed by graph node; ids live on the RecGraph that produced it.
struct ScoreVector {
    Measure measure = Measure::InDegree;
    std::vector<double> scores;
    SolverParams params;
    bool converged = true;
    int iterations = 0;
    std::string note;
};

namespace detail {

inline double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double linf_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/// y += (A^T x), i.e. scores flow along edge direction from src to dst.
inline void accumulate_transposed(const RecGraph& g, std::span<const double> x,
                                  std::span<double> y, bool weighted) {
    for (const auto& e : g.edges()) y[e.dst] += (weighted ? e.weight : 1.0) * x[e.src];
}

inline void require_weights_if(const RecGraph& g, bool weighted, const char* who) {
    if (weighted && !g.weights_assigned())
        throw ParameterError(std::string(who) + " in weighted mode requires assigned weights");
}

inline void require_nonempty(const RecGraph& g, const char* who) {
    if (g.node_count() == 0) throw ParameterError(std::string(who) + ": empty graph");
}

} // namespace detail

inline ScoreVector in_degree(const RecGraph& g) {
    detail::require_nonempty(g, "in_degree");
    ScoreVector sv;
    sv.measure = Measure::InDegree;
    sv.scores.resize(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        sv.scores[v] = static_cast<double>(g.in_degree(static_cast<RecGraph::NodeIx>(v)));
    return sv;
}

inline ScoreVector weighted_in_degree(const RecGraph& g) {
    detail::require_nonempty(g, "weighted_in_degree");
    detail::require_weights_if(g, true, "weighted_in_degree");
    ScoreVector sv;
    sv.measure = Measure::WeightedInDegree;
    sv.scores.assign(g.node_count(), 0.0);
    for (const auto& e : g.edges()) sv.scores[e.dst] += e.weight;
    return sv;
}

/// Power-iteration estimate of the spectral radius. A complex dominant
/// eigenpair makes the per-step growth factors oscillate instead of
/// settling, so the estimate combines the maximum growth factor over the
/// tail window with the window's geometric mean (Gelfand); the max biases
/// upward, which errs on the safe side when the result scales a Katz
/// alpha. Collapsing iterates (nilpotent adjacency) report 0.
inline double spectral_radius_estimate(const RecGraph& g, bool weighted,
                                       int max_iterations = 1000) {
    const std::size_t n = g.node_count();
    if (n == 0 || g.edge_count() == 0) return 0.0;
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    std::vector<double> growth;
    growth.reserve(static_cast<std::size_t>(max_iterations));
    double lambda = 0.0;
    int stable = 0;
    for (int it = 0; it < max_iterations; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        detail::accumulate_transposed(g, x, y, weighted);
        const double norm = detail::l2_norm(y);
        if (norm < 1e-200) return 0.0;
        for (std::size_t i = 0; i < n; ++i) y[i] /= norm;
        growth.push_back(norm);
        stable = std::abs(norm - lambda) < 1e-13 * std::max(1.0, norm) ? stable + 1 : 0;
        lambda = norm;
        x.swap(y);
        if (stable >= 3) return norm;
    }
    const std::size_t window = std::min<std::size_t>(growth.size(), 500);
    double peak = 0.0;
    double log_sum = 0.0;
    for (std::size_t i = growth.size() - window; i < growth.size(); ++i) {
        peak = std::max(peak, growth[i]);
        log_sum += std::log(growth[i]);
    }
    const double gelfand = std::exp(log_sum / static_cast<double>(window));
    return std::max(peak, gelfand);
}

/// Classic eigenvector centrality: dominant eigenvector of the transposed
/// (by default weighted) adjacency, entrywise nonnegative, L2 norm 1.
/// Graphs without a positive dominant eigenpair (e.g. DAGs, where the
/// spectrum is all zero) come back flagged, not silently substituted.
inline ScoreVector eigen_centrality(const RecGraph& g, const SolverParams& params = {},
                                    bool weighted = true) {
    params.check();
    detail::require_nonempty(g, "eigen_centrality");
    if (g.edge_count() == 0) throw ParameterError("eigen_centrality: graph has no edges");
    detail::require_weights_if(g, weighted, "eigen_centrality");

    const std::size_t n = g.node_count();
    ScoreVector sv;
    sv.measure = Measure::Eigen;
    sv.params = params;
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    for (int it = 0; it < params.max_iterations; ++it) {
        std::fill(y.begin(), y.end(), 0.0);
        detail::accumulate_transposed(g, x, y, weighted);
        const double norm = detail::l2_norm(y);
        if (norm < 1e-200) {
            sv.scores = std::move(x);
            sv.converged = false;
            sv.iterations = it + 1;
            sv.note = "degenerate spectrum: iterate collapsed to zero (no positive "
                      "dominant eigenpair)";
            return sv;
        }
        for (std::size_t i = 0; i < n; ++i) y[i] /= norm;
        const double diff = detail::linf_diff(y, x);
        x.swap(y);
        if (diff < params.tolerance) {
            sv.scores = std::move(x);
            sv.converged = true;
            sv.iterations = it + 1;
            return sv;
        }
    }
    sv.scores = std::move(x);
    sv.converged = false;
    sv.iterations = params.max_iterations;
    sv.note = "power iteration did not converge";
    return sv;
}

/// Damped PageRank over edge weights (weights are treated as transition
/// probabilities; out-strength is normalized away so imported graphs with
/// unnormalized weights still work). Dangling mass is redistributed
/// uniformly, so scores always sum to 1.
inline ScoreVector pagerank(const RecGraph& g, const SolverParams& params = {},
                            bool weighted = true) {
    params.check();
    detail::require_nonempty(g, "pagerank");
    detail::require_weights_if(g, weighted, "pagerank");

    const std::size_t n = g.node_count();
    const double d = params.damping;
    // Per-source normalization factor for outgoing contributions.
    std::vector<double> inv_strength(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        double s = 0.0;
        for (const auto& e : g.out_edges(static_cast<RecGraph::NodeIx>(u)))
            s += weighted ? e.weight : 1.0;
        inv_strength[u] = s > 0.0 ? 1.0 / s : 0.0;
    }

    ScoreVector sv;
    sv.measure = Measure::PageRank;
    sv.params = params;
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);
    for (int it = 0; it < params.max_iterations; ++it) {
        double dangling = 0.0;
        for (std::size_t u = 0; u < n; ++u)
            if (g.out_degree(static_cast<RecGraph::NodeIx>(u)) == 0) dangling += x[u];
        const double base = (1.0 - d) / static_cast<double>(n) +
                            d * dangling / static_cast<double>(n);
        std::fill(y.begin(), y.end(), base);
        for (const auto& e : g.edges())
            y[e.dst] += d * (weighted ? e.weight : 1.0) * inv_strength[e.src] * x[e.src];
        double l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) l1 += std::abs(y[i] - x[i]);
        x.swap(y);
        if (l1 < params.tolerance) {
            sv.scores = std::move(x);
            sv.converged = true;
            sv.iterations = it + 1;
            return sv;
        }
    }
    sv.scores = std::move(x);
    sv.converged = false;
    sv.iterations = params.max_iterations;
    sv.note = "pagerank did not converge";
    return sv;
}

/// Katz centrality x = beta * sum_{k>=0} alpha^k (A^T)^k 1, computed by
/// iterating x <- alpha A^T x + beta 1. When katz_alpha is not given it is
/// chosen adaptively as alpha_fraction / rho(A), since a fixed alpha can
/// diverge from one graph to the next.
inline ScoreVector katz(const RecGraph& g, const SolverParams& params = {},
                        bool weighted = true) {
    params.check();
    detail::require_nonempty(g, "katz");
    detail::require_weights_if(g, weighted, "katz");
    if (!(params.katz_beta > 0.0)) throw ParameterError("katz_beta must be positive");

    const double rho = spectral_radius_estimate(g, weighted);
    double alpha = params.katz_alpha;
    if (alpha > 0.0) {
        if (rho > 0.0 && alpha * rho >= 1.0)
            throw ParameterError("katz_alpha " + std::to_string(alpha) +
                                 " >= 1/spectral_radius (rho = " + std::to_string(rho) + ")");
    } else {
        alpha = rho > 0.0 ? params.alpha_fraction / rho : params.alpha_fraction;
    }

    const std::size_t n = g.node_count();
    ScoreVector sv;
    sv.measure = Measure::Katz;
    sv.params = params;
    sv.params.katz_alpha = alpha; // record the alpha actually used
    const double beta = params.katz_beta;
    std::vector<double> x(n, beta);
    std::vector<double> y(n);
    for (int it = 0; it < params.max_iterations; ++it) {
        std::fill(y.begin(), y.end(), beta);
        for (const auto& e : g.edges())
            y[e.dst] += alpha * (weighted ? e.weight : 1.0) * x[e.src];
        const double diff = detail::linf_diff(y, x);
        x.swap(y);
        if (diff < params.tolerance) {
            sv.scores = std::move(x);
            sv.converged = true;
            sv.iterations = it + 1;
            return sv;
        }
        if (!std::isfinite(diff) || diff > 1e100) {
            sv.scores = std::move(x);
            sv.converged = false;
            sv.iterations = it + 1;
            sv.note = "katz iteration diverged (alpha too large for this graph)";
            return sv;
        }
    }
    sv.scores = std::move(x);
    sv.converged = false;
    sv.iterations = params.max_iterations;
    sv.note = "katz did not converge";
    return sv;
}

struct HitsScores {
    ScoreVector authority;
    std::vector<double> hub; // retained for inspection; not part of the six
};

/// HITS on the (by default unweighted) link structure: alternate hub and
/// authority updates; the authority vector converges to the dominant
/// eigenvector of A^T A, L2-normalized.
inline HitsScores hits(const RecGraph& g, const SolverParams& params = {},
                       bool weighted = false) {
    params.check();
    detail::require_nonempty(g, "hits");
    if (g.edge_count() == 0) throw ParameterError("hits: graph has no edges");
    detail::require_weights_if(g, weighted, "hits");

    const std::size_t n = g.node_count();
    std::vector<double> auth(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(n);
    std::vector<double> hub(n);
    HitsScores out;
    out.authority.measure = Measure::Authority;
    out.authority.params = params;
    for (int it = 0; it < params.max_iterations; ++it) {
        std::fill(hub.begin(), hub.end(), 0.0);
        for (const auto& e : g.edges()) hub[e.src] += (weighted ? e.weight : 1.0) * auth[e.dst];
        const double hn = detail::l2_norm(hub);
        if (hn > 0.0)
            for (double& h : hub) h /= hn;
        std::fill(next.begin(), next.end(), 0.0);
        for (const auto& e : g.edges()) next[e.dst] += (weighted ? e.weight : 1.0) * hub[e.src];
        const double an = detail::l2_norm(next);
        if (an < 1e-200) {
            out.authority.scores = std::move(auth);
            out.authority.converged = false;
            out.authority.iterations = it + 1;
            out.authority.note = "authority iterate collapsed to zero";
            out.hub = std::move(hub);
            return out;
        }
        for (double& a : next) a /= an;
        const double diff = detail::linf_diff(next, auth);
        auth.swap(next);
        if (diff < params.tolerance) {
            out.authority.scores = std::move(auth);
            out.authority.converged = true;
            out.authority.iterations = it + 1;
            out.hub = std::move(hub);
            return out;
        }
    }
    out.authority.scores = std::move(auth);
    out.authority.converged = false;
    out.authority.iterations = params.max_iterations;
    out.authority.note = "hits did not converge";
    out.hub = std::move(hub);
    return out;
}

inline ScoreVector hits_authority(const RecGraph& g, const SolverParams& params = {},
                                  bool weighted = false) {
    return hits(g, params, weighted).authority;
}

/// Min-max rescaling to [0,1]. A constant vector maps to all zeros so it
/// contributes nothing to the composite. Strictly monotone when max > min,
/// so rankings (and ties) are preserved.
inline ScoreVector normalize(const ScoreVector& sv) {
    ScoreVector out = sv;
    if (out.scores.empty()) return out;
    const auto [mn_it, mx_it] = std::minmax_element(out.scores.begin(), out.scores.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx == mn) {
        std::fill(out.scores.begin(), out.scores.end(), 0.0);
        return out;
    }
    const double span = mx - mn;
    for (double& s : out.scores) s = (s - mn) / span;
    return out;
}

/// Sum of the six normalized measures. Order of the inputs is irrelevant,
/// but each of the six must appear exactly once over the same node set.
inline ScoreVector composite(std::span<const ScoreVector> normalized) {
    if (normalized.size() != kSixMeasures.size())
        throw ParameterError("composite expects exactly six score vectors, got " +
                             std::to_string(normalized.size()));
    std::array<bool, 6> seen{};
    const std::size_t n = normalized.front().scores.size();
    for (const ScoreVector& sv : normalized) {
        const auto ix = static_cast<std::size_t>(sv.measure);
        if (ix >= seen.size()) throw ParameterError("composite input may not itself be composite");
        if (seen[ix])
            throw ParameterError(std::string("duplicate measure in composite: ") +
                                 to_string(sv.measure));
        seen[ix] = true;
        if (sv.scores.size() != n) throw IntegrityError("composite inputs disagree on node set");
        for (double s : sv.scores)
            if (!(s >= -1e-9 && s <= 1.0 + 1e-9))
                throw ParameterError(std::string("composite input not normalized: ") +
                                     to_string(sv.measure));
    }
    ScoreVector out;
    out.measure = Measure::Composite;
    out.scores.assign(n, 0.0);
    for (const ScoreVector& sv : normalized)
        for (std::size_t i = 0; i < n; ++i) out.scores[i] += sv.scores[i];
    return out;
}

namespace detail {

/// Ranks with ties averaged (1-based), the usual Spearman convention.
inline std::vector<double> fractional_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0; // no monotone association definable
    return cov / std::sqrt(va * vb);
}

} // namespace detail

/// Pairwise Spearman rank correlations between the measures (the downstream
/// use of the scores is ranking, so rank agreement is what matters).
/// Symmetric, unit diagonal, entries in [-1,1].
inline std::vector<std::vector<double>> measure_correlation(std::span<const ScoreVector> svs) {
    if (svs.empty()) throw ParameterError("measure_correlation: no score vectors");
    const std::size_t n = svs.front().scores.size();
    if (n < 2) throw ParameterError("measure_correlation needs at least 2 nodes");
    for (const ScoreVector& sv : svs)
        if (sv.scores.size() != n)
            throw IntegrityError("measure_correlation inputs disagree on node set");

    std::vector<std::vector<double>> ranks;
    ranks.reserve(svs.size());
    for (const ScoreVector& sv : svs) ranks.push_back(detail::fractional_ranks(sv.scores));

    std::vector<std::vector<double>> rho(svs.size(), std::vector<double>(svs.size(), 1.0));
    for (std::size_t i = 0; i < svs.size(); ++i)
        for (std::size_t j = i + 1; j < svs.size(); ++j)
            rho[i][j] = rho[j][i] = detail::pearson(ranks[i], ranks[j]);
    return rho;
}

/// Which adjacency each measure reads. In-degree and HITS are link-count
/// notions; eigenvector, PageRank and Katz propagate the click-probability
/// weights. Every choice is a flag so the alternative reading is one switch
/// away.
struct CentralityConfig {
    SolverParams params;
    bool eigen_weighted = true;
    bool pagerank_weighted = true;
    bool katz_weighted = true;
    bool hits_weighted = false;
};

struct CentralitySet {
    std::array<ScoreVector, 6> raw;        // canonical order of kSixMeasures
    std::array<ScoreVector, 6> normalized;
    ScoreVector composite_scores;
};

inline CentralitySet compute_centralities(const RecGraph& g, const CentralityConfig& cfg = {}) {
    CentralitySet out;
    out.raw[0] = in_degree(g);
    out.raw[1] = weighted_in_degree(g);
    out.raw[2] = eigen_centrality(g, cfg.params, cfg.eigen_weighted);
    out.raw[3] = pagerank(g, cfg.params, cfg.pagerank_weighted);
    out.raw[4] = katz(g, cfg.params, cfg.katz_weighted);
    out.raw[5] = hits_authority(g, cfg.params, cfg.hits_weighted);
    for (std::size_t i = 0; i < out.raw.size(); ++i) out.normalized[i] = normalize(out.raw[i]);
    out.composite_scores = composite(std::span<const ScoreVector>(out.normalized));
    return out;
}

inline void write_scores_long_csv(const RecGraph& g, const CentralitySet& cs, std::ostream& os) {
    os << "video_id,measure,raw,normalized\n";
    for (std::size_t m = 0; m < cs.raw.size(); ++m)
        for (std::size_t v = 0; v < g.node_count(); ++v)
            os << csv::escape(g.id(static_cast<RecGraph::NodeIx>(v))) << ','
               << to_string(cs.raw[m].measure) << ',' << fmt_double(cs.raw[m].scores[v]) << ','
               << fmt_double(cs.normalized[m].scores[v]) << '\n';
}

inline void write_scores_wide_csv(const RecGraph& g, const CentralitySet& cs, std::ostream& os) {
    os << "video_id";
    for (const auto& sv : cs.normalized) os << ',' << to_string(sv.measure);
    os << ",composite\n";
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        os << csv::escape(g.id(static_cast<RecGraph::NodeIx>(v)));
        for (const auto& sv : cs.normalized) os << ',' << fmt_double(sv.scores[v]);
        os << ',' << fmt_double(cs.composite_scores.scores[v]) << '\n';
    }
}

inline void write_correlation_csv(std::span<const ScoreVector> svs,
                                  const std::vector<std::vector<double>>& rho, std::ostream& os) {
    os << "measure";
    for (const ScoreVector& sv : svs) os << ',' << to_string(sv.measure);
    os << '\n';
    for (std::size_t i = 0; i < svs.size(); ++i) {
        os << to_string(svs[i].measure);
        for (std::size_t j = 0; j < svs.size(); ++j) os << ',' << fmt_double(rho[i][j]);
        os << '\n';
    }
}

} // namespace recaudit
