/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Full audit pipeline: simulate or ingest session logs, build the weighted
 * recommendation graph, compute and aggregate the six influence measures,
 * select and label the top percent, and emit the bias / overlap / class
 * distribution tables plus a run manifest, one artifact directory per run.
 *
 * One config file drives everything; see the repository README for the
 * schema. The config is validated up front so a bad parameter never leaves
 * partial artifacts behind.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recaudit/bias.hpp"
#include "recaudit/centrality.hpp"
#include "recaudit/graph.hpp"
#include "recaudit/graph_io.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/manifest.hpp"
#include "recaudit/ranking.hpp"
#include "recaudit/simulator.hpp"

namespace recaudit {

struct PipelineProfileConfig {
    std::string id;
    // simulate mode
    std::map<std::string, double> training_topics; // by label name; empty = uniform
    std::size_t training_watch_count = 22;
    std::string seed_policy = "neutral";
    // ingest mode
    std::string sessions_path;
    std::string metadata_path;
    std::string labels_path; // overrides the global label file
};

struct PipelineConfig {
    LabelScheme scheme = LabelScheme::Stance;
    std::uint64_t rng_seed = 0;
    bool rng_seed_set = false;

    bool simulate = false;
    std::size_t corpus_size = 10000;
    std::map<std::string, double> class_mix;  // empty = uniform
    std::map<std::string, double> class_skew; // empty = all ones
    double affinity_strength = 0.0;
    double similarity_bonus = 0.5;
    double list_length_mean = 8.0;
    std::size_t seed_count = 20;
    std::size_t steps = 5000;

    std::vector<PipelineProfileConfig> profiles;
    std::string labels_path; // global label file; empty in simulate mode = planted truth
    std::string topic_keyword;
    bool strict_titles = false;

    double weight_r = 0.9;
    PathMode path_mode = PathMode::Directed;
    CentralityConfig centrality;
    double selection_pct = 1.0;
    double rbo_p = 0.97;
    std::size_t rbo_depth = 1000;
    bool rbo_extrapolated = false;
    bool strict = false; // abort on non-converged solvers
};

namespace detail {

inline double get_or(const nlohmann::json& j, const char* key, double def) {
    auto it = j.find(key);
    return it != j.end() && it->is_number() ? it->get<double>() : def;
}

inline std::map<std::string, double> get_weight_map(const nlohmann::json& j, const char* key) {
    std::map<std::string, double> out;
    auto it = j.find(key);
    if (it == j.end()) return out;
    if (!it->is_object()) throw ParseError(std::string(key) + " must be an object");
    for (const auto& [k, v] : it->items()) {
        if (!v.is_number()) throw ParseError(std::string(key) + "." + k + " must be a number");
        out[k] = v.get<double>();
    }
    return out;
}

} // namespace detail

/// Parses and validates a pipeline config document. Throws ParseError on
/// schema problems and ParameterError on out-of-domain values, before any
/// artifact is written.
inline PipelineConfig parse_pipeline_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    PipelineConfig cfg;

    if (auto it = j.find("scheme"); it != j.end()) {
        const auto s = parse_label_scheme(it->get<std::string>());
        if (!s) throw ParameterError("unknown scheme: " + it->get<std::string>());
        cfg.scheme = *s;
    }
    if (auto it = j.find("rng_seed"); it != j.end()) {
        if (!it->is_number_unsigned()) throw ParseError("rng_seed must be a nonnegative integer");
        cfg.rng_seed = it->get<std::uint64_t>();
        cfg.rng_seed_set = true;
    }
    cfg.topic_keyword = j.value("topic_keyword", std::string{});
    cfg.strict_titles = j.value("strict_titles", false);
    cfg.labels_path = j.value("labels", std::string{});
    if (cfg.labels_path == "truth") cfg.labels_path.clear();
    cfg.strict = j.value("strict", false);

    if (auto it = j.find("simulate"); it != j.end()) {
        if (!it->is_object()) throw ParseError("simulate must be an object");
        cfg.simulate = true;
        const auto& s = *it;
        cfg.corpus_size = s.value("corpus_size", cfg.corpus_size);
        cfg.class_mix = detail::get_weight_map(s, "class_mix");
        cfg.class_skew = detail::get_weight_map(s, "class_skew");
        cfg.affinity_strength = detail::get_or(s, "affinity_strength", cfg.affinity_strength);
        cfg.similarity_bonus = detail::get_or(s, "similarity_bonus", cfg.similarity_bonus);
        cfg.list_length_mean = detail::get_or(s, "list_length_mean", cfg.list_length_mean);
        cfg.seed_count = s.value("seed_count", cfg.seed_count);
        cfg.steps = s.value("steps", cfg.steps);
    }

    if (auto it = j.find("profiles"); it != j.end()) {
        if (!it->is_array() || it->empty()) throw ParseError("profiles must be a non-empty array");
        for (const auto& pj : *it) {
            PipelineProfileConfig p;
            p.id = pj.value("id", std::string{});
            if (p.id.empty()) throw ParseError("profile without id");
            p.training_topics = detail::get_weight_map(pj, "training_topics");
            p.training_watch_count = pj.value("training_watch_count", p.training_watch_count);
            p.seed_policy = pj.value("seed_policy", p.seed_policy);
            p.sessions_path = pj.value("sessions", std::string{});
            p.metadata_path = pj.value("metadata", std::string{});
            p.labels_path = pj.value("labels", std::string{});
            cfg.profiles.push_back(std::move(p));
        }
    }

    if (auto it = j.find("graph"); it != j.end()) {
        cfg.weight_r = detail::get_or(*it, "r", cfg.weight_r);
        const std::string mode = it->value("path_mode", "directed");
        if (mode == "directed") cfg.path_mode = PathMode::Directed;
        else if (mode == "undirected") cfg.path_mode = PathMode::Undirected;
        else throw ParameterError("unknown path_mode: " + mode);
    }
    if (auto it = j.find("centrality"); it != j.end()) {
        SolverParams& p = cfg.centrality.params;
        p.damping = detail::get_or(*it, "damping", p.damping);
        p.tolerance = detail::get_or(*it, "tolerance", p.tolerance);
        p.max_iterations = it->value("max_iterations", p.max_iterations);
        p.alpha_fraction = detail::get_or(*it, "alpha_fraction", p.alpha_fraction);
        p.katz_beta = detail::get_or(*it, "katz_beta", p.katz_beta);
        p.katz_alpha = detail::get_or(*it, "katz_alpha", p.katz_alpha);
        cfg.centrality.eigen_weighted = it->value("eigen_weighted", cfg.centrality.eigen_weighted);
        cfg.centrality.pagerank_weighted =
            it->value("pagerank_weighted", cfg.centrality.pagerank_weighted);
        cfg.centrality.katz_weighted = it->value("katz_weighted", cfg.centrality.katz_weighted);
        cfg.centrality.hits_weighted = it->value("hits_weighted", cfg.centrality.hits_weighted);
    }
    if (auto it = j.find("selection"); it != j.end())
        cfg.selection_pct = detail::get_or(*it, "pct", cfg.selection_pct);
    if (auto it = j.find("rbo"); it != j.end()) {
        cfg.rbo_p = detail::get_or(*it, "p", cfg.rbo_p);
        cfg.rbo_depth = it->value("depth", cfg.rbo_depth);
        cfg.rbo_extrapolated = it->value("extrapolated", cfg.rbo_extrapolated);
    }
    return cfg;
}

namespace detail {

template <class L>
std::array<double, kLabelClassCount> to_class_array(const std::map<std::string, double>& m,
                                                    double missing_value) {
    std::array<double, kLabelClassCount> out;
    out.fill(missing_value);
    for (const auto& [name, value] : m) {
        const auto label = parse_label<L>(name);
        if (!label)
            throw ParameterError("unknown " + std::string(to_string(label_traits<L>::scheme)) +
                                 " label name: " + name);
        out[label_index(*label)] = value;
    }
    return out;
}

template <class L>
SimConfig<L> to_sim_config(const PipelineConfig& cfg) {
    SimConfig<L> sim;
    sim.corpus_size = cfg.corpus_size;
    if (!cfg.class_mix.empty()) {
        sim.class_mix = to_class_array<L>(cfg.class_mix, 0.0);
    }
    if (!cfg.class_skew.empty()) sim.class_skew = to_class_array<L>(cfg.class_skew, 1.0);
    sim.affinity_strength = cfg.affinity_strength;
    sim.similarity_bonus = cfg.similarity_bonus;
    sim.list_length_mean = cfg.list_length_mean;
    sim.seed_count = cfg.seed_count;
    sim.steps = cfg.steps;
    sim.rng_seed = cfg.rng_seed;
    if (!cfg.topic_keyword.empty()) sim.topic_keyword = cfg.topic_keyword;
    return sim;
}

template <class L>
ProfileSpec to_profile_spec(const PipelineProfileConfig& p) {
    ProfileSpec spec;
    spec.profile_id = p.id;
    if (!p.training_topics.empty())
        spec.training_topics = to_class_array<L>(p.training_topics, 0.0);
    spec.training_watch_count = p.training_watch_count;
    const auto policy = parse_seed_policy(p.seed_policy);
    if (!policy) throw ParameterError("unknown seed_policy: " + p.seed_policy);
    spec.seed_policy = *policy;
    return spec;
}

} // namespace detail

/// Full parameter validation, run before writing anything.
inline void validate_pipeline_config(const PipelineConfig& cfg) {
    if (!(cfg.weight_r > 0.0 && cfg.weight_r < 1.0))
        throw ParameterError("graph.r must lie in (0,1), got " + std::to_string(cfg.weight_r));
    cfg.centrality.params.check();
    if (!(cfg.selection_pct > 0.0 && cfg.selection_pct <= 100.0))
        throw ParameterError("selection.pct must lie in (0,100]");
    if (!(cfg.rbo_p > 0.0 && cfg.rbo_p < 1.0)) throw ParameterError("rbo.p must lie in (0,1)");
    if (cfg.rbo_depth == 0) throw ParameterError("rbo.depth must be >= 1");
    if (cfg.profiles.empty()) throw ParameterError("config needs at least one profile");
    if (cfg.simulate) {
        // every randomized stage must be pinned by an explicit seed
        if (!cfg.rng_seed_set)
            throw ParameterError("simulate mode requires an explicit rng_seed");
        if (cfg.scheme == LabelScheme::Stance)
            detail::to_sim_config<Stance>(cfg).check();
        else
            detail::to_sim_config<Veracity>(cfg).check();
        for (const auto& p : cfg.profiles)
            if (!parse_seed_policy(p.seed_policy))
                throw ParameterError("unknown seed_policy: " + p.seed_policy);
    } else {
        for (const auto& p : cfg.profiles) {
            if (p.sessions_path.empty() || p.metadata_path.empty())
                throw ParameterError("profile " + p.id +
                                     " needs sessions and metadata paths (no simulate section)");
            if (p.labels_path.empty() && cfg.labels_path.empty())
                throw ParameterError("profile " + p.id + " has no label file");
        }
    }
}

struct ProfileOutcome {
    std::string id;
    IngestReport ingest;
    GraphStats stats;
    std::size_t selection = 0;
    BiasReport bias;
    std::array<std::size_t, kLabelClassCount> class_counts{};
    std::array<double, kLabelClassCount> class_fractions{};
    std::vector<VideoId> ranking_ids; // full ranking, for overlaps
    std::vector<SolverFlag> flags;
};

struct PipelineResult {
    std::vector<ProfileOutcome> profiles;
    std::vector<OverlapReport> overlaps;
    std::filesystem::path out_dir;
    RunManifest manifest;
};

namespace detail {

/// Writes artifacts under a root directory and remembers what it wrote so
/// the manifest can digest everything at the end.
class ArtifactWriter {
  public:
    explicit ArtifactWriter(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
    }

    template <class F>
    void write(const std::filesystem::path& rel, F&& fill) {
        const auto path = root_ / rel;
        std::filesystem::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        fill(out);
        out.close();
        written_.push_back(rel.generic_string());
    }

    std::vector<FileDigest> digests() const {
        std::vector<FileDigest> out;
        out.reserve(written_.size());
        for (const auto& rel : written_) out.push_back({rel, sha256_of_file(root_ / rel)});
        return out;
    }

    const std::filesystem::path& root() const { return root_; }

  private:
    std::filesystem::path root_;
    std::vector<std::string> written_;
};

inline nlohmann::json ingest_report_json(const IngestReport& r) {
    nlohmann::json rej = nlohmann::json::array();
    for (const auto& x : r.rejections) rej.push_back({{"line", x.line}, {"reason", x.reason}});
    return nlohmann::json{{"events_read", r.events_read},
                          {"events_accepted", r.events_accepted()},
                          {"rejections", rej},
                          {"metadata_read", r.metadata_read},
                          {"videos_missing_metadata", r.videos_missing_metadata},
                          {"videos_filtered_by_title", r.videos_filtered_by_title},
                          {"events_dropped_by_title", r.events_dropped_by_title},
                          {"seeds_pruned", r.seeds_pruned}};
}

inline nlohmann::json pipeline_parameters_json(const PipelineConfig& cfg) {
    nlohmann::json profiles = nlohmann::json::array();
    for (const auto& p : cfg.profiles) {
        nlohmann::json pj{{"id", p.id}};
        if (cfg.simulate) {
            pj["training_watch_count"] = p.training_watch_count;
            pj["seed_policy"] = p.seed_policy;
            pj["training_topics"] = p.training_topics;
        } else {
            pj["sessions"] = p.sessions_path;
            pj["metadata"] = p.metadata_path;
            if (!p.labels_path.empty()) pj["labels"] = p.labels_path;
        }
        profiles.push_back(std::move(pj));
    }
    nlohmann::json params{
        {"scheme", to_string(cfg.scheme)},
        {"rng_seed", cfg.rng_seed},
        {"topic_keyword", cfg.topic_keyword},
        {"strict_titles", cfg.strict_titles},
        {"r", cfg.weight_r},
        {"path_mode", cfg.path_mode == PathMode::Directed ? "directed" : "undirected"},
        {"damping", cfg.centrality.params.damping},
        {"tolerance", cfg.centrality.params.tolerance},
        {"max_iterations", cfg.centrality.params.max_iterations},
        {"alpha_fraction", cfg.centrality.params.alpha_fraction},
        {"katz_alpha", cfg.centrality.params.katz_alpha},
        {"katz_beta", cfg.centrality.params.katz_beta},
        {"eigen_weighted", cfg.centrality.eigen_weighted},
        {"pagerank_weighted", cfg.centrality.pagerank_weighted},
        {"katz_weighted", cfg.centrality.katz_weighted},
        {"hits_weighted", cfg.centrality.hits_weighted},
        {"pct", cfg.selection_pct},
        {"rbo_p", cfg.rbo_p},
        {"rbo_depth", cfg.rbo_depth},
        {"rbo_extrapolated", cfg.rbo_extrapolated},
        {"tie_break", "video_id_ascending"},
        {"strict", cfg.strict},
        {"labels", cfg.labels_path.empty() ? (cfg.simulate ? "truth" : "") : cfg.labels_path},
        {"profiles", std::move(profiles)}};
    if (cfg.simulate)
        params["simulate"] = nlohmann::json{{"corpus_size", cfg.corpus_size},
                                            {"class_mix", cfg.class_mix},
                                            {"class_skew", cfg.class_skew},
                                            {"affinity_strength", cfg.affinity_strength},
                                            {"similarity_bonus", cfg.similarity_bonus},
                                            {"list_length_mean", cfg.list_length_mean},
                                            {"seed_count", cfg.seed_count},
                                            {"steps", cfg.steps}};
    return params;
}

template <class L>
PipelineResult run_pipeline_impl(const PipelineConfig& cfg, const std::filesystem::path& out_dir,
                                 std::vector<FileDigest> extra_inputs) {
    PipelineResult result;
    result.out_dir = out_dir;
    ArtifactWriter w(out_dir);
    RunManifest& manifest = result.manifest;
    manifest.command = "pipeline";
    manifest.parameters = pipeline_parameters_json(cfg);
    manifest.inputs = std::move(extra_inputs);

    std::optional<SyntheticCorpus<L>> corpus;
    std::unordered_map<VideoId, L> truth_labels;
    if (cfg.simulate) {
        const SimConfig<L> sim = to_sim_config<L>(cfg);
        corpus = generate_corpus(sim);
        for (std::size_t i = 0; i < corpus->size(); ++i)
            truth_labels.emplace(corpus->videos[i].id, corpus->labels[i]);
        w.write("labels_truth.csv", [&](std::ostream& os) { write_truth_labels(*corpus, os); });
    }

    std::ostringstream stats_csv, bias_csv, dist_csv;
    write_stats_csv_header(stats_csv);
    write_bias_csv_header(bias_csv);
    bool dist_header = true;

    for (const auto& pc : cfg.profiles) {
        ProfileOutcome outcome;
        outcome.id = pc.id;
        const std::filesystem::path pdir = pc.id;

        SessionLog raw;
        if (cfg.simulate) {
            const ProfileSpec spec = to_profile_spec<L>(pc);
            const SimConfig<L> sim = to_sim_config<L>(cfg);
            raw = run_sock_puppet(spec, *corpus, sim);
            outcome.ingest.events_read = raw.events.size();
            w.write(pdir / "sessions.jsonl",
                    [&](std::ostream& os) { write_session_log(raw, os); });
            w.write(pdir / "metadata.jsonl",
                    [&](std::ostream& os) { write_metadata(raw.metadata, os); });
        } else {
            std::ifstream sessions(pc.sessions_path);
            if (!sessions) throw IoError("cannot read " + pc.sessions_path);
            ParseResult pr = parse_session_log(sessions);
            raw = std::move(pr.log);
            outcome.ingest = std::move(pr.report);
            std::ifstream meta(pc.metadata_path);
            if (!meta) throw IoError("cannot read " + pc.metadata_path);
            MetadataResult mr = parse_metadata(meta);
            raw.metadata = std::move(mr.metadata);
            outcome.ingest.metadata_read = mr.records_read;
            for (auto& rej : mr.rejections) outcome.ingest.rejections.push_back(rej);
            manifest.inputs.push_back({pc.sessions_path, sha256_of_file(pc.sessions_path)});
            manifest.inputs.push_back({pc.metadata_path, sha256_of_file(pc.metadata_path)});
        }

        const TitlePolicy policy =
            cfg.strict_titles ? TitlePolicy::DropUntitled : TitlePolicy::KeepUntitled;
        const SessionLog cleaned =
            apply_ingest_pipeline(raw, cfg.topic_keyword, policy, outcome.ingest);
        w.write(pdir / "ingest_report.json", [&](std::ostream& os) {
            os << ingest_report_json(outcome.ingest).dump(2) << '\n';
        });

        const RecGraph graph = assign_weights(build_graph(cleaned), cfg.weight_r);
        outcome.stats = graph_stats(graph, cfg.path_mode);
        write_stats_csv_row(stats_csv, pc.id, outcome.stats);
        w.write(pdir / "graph.json",
                [&](std::ostream& os) { os << to_json_edge_list(graph).dump() << '\n'; });
        w.write(pdir / "graph.graphml",
                [&](std::ostream& os) { write_graphml(graph, os, &cleaned.metadata); });

        const CentralitySet cs = compute_centralities(graph, cfg.centrality);
        for (const ScoreVector& sv : cs.raw) {
            if (!sv.converged) {
                outcome.flags.push_back(
                    {pc.id, to_string(sv.measure), false, sv.iterations, sv.note});
                if (cfg.strict)
                    throw NonConvergenceError("profile " + pc.id + ": " +
                                              to_string(sv.measure) + ": " + sv.note);
            }
        }
        w.write(pdir / "scores_long.csv",
                [&](std::ostream& os) { write_scores_long_csv(graph, cs, os); });
        w.write(pdir / "scores_wide.csv",
                [&](std::ostream& os) { write_scores_wide_csv(graph, cs, os); });
        if (graph.node_count() >= 2) {
            const auto rho = measure_correlation(std::span<const ScoreVector>(cs.raw));
            w.write(pdir / "correlation.csv", [&](std::ostream& os) {
                write_correlation_csv(std::span<const ScoreVector>(cs.raw), rho, os);
            });
        }

        const RankedList ranking = rank_videos(graph, cs.composite_scores);
        w.write(pdir / "ranking.csv", [&](std::ostream& os) { write_ranking_csv(ranking, os); });
        const RankedList selection = select_top_percent(ranking, cfg.selection_pct);
        outcome.selection = selection.entries.size();
        w.write(pdir / "selection.csv",
                [&](std::ostream& os) { write_selection_csv(selection, cleaned.metadata, os); });

        std::unordered_map<VideoId, L> labels;
        if (!pc.labels_path.empty() || !cfg.labels_path.empty()) {
            const std::string& path = !pc.labels_path.empty() ? pc.labels_path : cfg.labels_path;
            std::ifstream in(path);
            if (!in) throw IoError("cannot read " + path);
            labels = parse_label_csv<L>(in);
            manifest.inputs.push_back({path, sha256_of_file(path)});
        } else {
            labels = truth_labels;
        }

        MergeResult<L> merged;
        try {
            merged = merge_labels(selection, labels);
        } catch (const IncompleteLabelsError& e) {
            const auto gap_rel = pdir / "unlabeled_selection.csv";
            w.write(gap_rel, [&](std::ostream& os) {
                os << "video_id\n";
                for (const auto& id : e.missing_ids()) os << csv::escape(id) << '\n';
            });
            throw IncompleteLabelsError(
                "profile " + pc.id + ": " + e.what() +
                    " (gap list: " + (out_dir / gap_rel).string() + ")",
                e.missing_ids());
        }
        w.write(pdir / "labeled_selection.csv",
                [&](std::ostream& os) { write_labeled_csv(merged.ranking, os); });

        outcome.bias = total_bias(merged.ranking, pc.id);
        write_bias_csv_row(bias_csv, outcome.bias);
        const auto dist = class_distribution(merged.ranking);
        outcome.class_counts = dist.counts;
        outcome.class_fractions = dist.fractions;
        write_distribution_csv(pc.id, dist, dist_csv, dist_header);
        dist_header = false;

        outcome.ranking_ids.reserve(ranking.entries.size());
        for (const auto& e : ranking.entries) outcome.ranking_ids.push_back(e.id);
        result.profiles.push_back(std::move(outcome));
    }

    w.write("stats.csv", [&](std::ostream& os) { os << stats_csv.str(); });
    w.write("bias.csv", [&](std::ostream& os) { os << bias_csv.str(); });
    w.write("class_distribution.csv", [&](std::ostream& os) { os << dist_csv.str(); });

    if (result.profiles.size() >= 2) {
        std::ostringstream overlap_csv;
        write_overlap_csv_header(overlap_csv);
        for (std::size_t i = 0; i < result.profiles.size(); ++i)
            for (std::size_t k = i + 1; k < result.profiles.size(); ++k) {
                const auto rep = compare_rankings(
                    result.profiles[i].id, result.profiles[i].ranking_ids,
                    result.profiles[k].id, result.profiles[k].ranking_ids, cfg.rbo_p,
                    cfg.rbo_depth, cfg.rbo_extrapolated);
                write_overlap_csv_row(overlap_csv, rep);
                result.overlaps.push_back(rep);
            }
        w.write("overlap.csv", [&](std::ostream& os) { os << overlap_csv.str(); });
    }

    for (const auto& p : result.profiles)
        for (const auto& f : p.flags) manifest.solver_flags.push_back(f);
    manifest.outputs = w.digests();
    manifest.stamp_now();
    manifest.write(out_dir / "manifest.json");
    return result;
}

} // namespace detail

/// Runs the whole audit pipeline into `out_dir`. `extra_inputs` lets the
/// CLI record the config file digest in the manifest.
inline PipelineResult run_pipeline(const PipelineConfig& cfg,
                                   const std::filesystem::path& out_dir,
                                   std::vector<FileDigest> extra_inputs = {}) {
    validate_pipeline_config(cfg);
    if (cfg.scheme == LabelScheme::Stance)
        return detail::run_pipeline_impl<Stance>(cfg, out_dir, std::move(extra_inputs));
    return detail::run_pipeline_impl<Veracity>(cfg, out_dir, std::move(extra_inputs));
}

} // namespace recaudit
