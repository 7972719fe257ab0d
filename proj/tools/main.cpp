/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Command-line front end. Subcommands mirror the pipeline stages so each
 * transformation is reproducible from files alone:
 *
 *   simulate      synthetic corpus + sock-puppet session logs
 *   ingest        parse, title-filter, and prune a session log
 *   build         ingest + construct the weighted recommendation graph
 *   stats         descriptive graph statistics table
 *   centrality    the six influence measures + composite + correlation
 *   rank          order videos by composite score
 *   select        take the top percent for annotation
 *   merge-labels  join a selection with a label file
 *   bias          rank-weighted total bias of a labeled selection
 *   compare       OC and RBO between two profiles' rankings
 *   export        convert a graph artifact to GraphML / DOT / JSON
 *   pipeline      everything above, driven by one config file
 *
 * Exit codes: 0 ok, 1 unclassified, 2 parse, 3 parameter, 4 integrity,
 * 5 incomplete labels, 6 non-convergence (strict mode), 7 io.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "recaudit/bias.hpp"
#include "recaudit/centrality.hpp"
#include "recaudit/graph.hpp"
#include "recaudit/graph_io.hpp"
#include "recaudit/ingest.hpp"
#include "recaudit/manifest.hpp"
#include "recaudit/pipeline.hpp"
#include "recaudit/ranking.hpp"
#include "recaudit/simulator.hpp"
#include "recaudit/version.hpp"

namespace fs = std::filesystem;
using namespace recaudit;

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    return in;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON in " + path);
    return j;
}

RecGraph load_graph(const std::string& path) {
    std::ifstream in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_edge_list(ss.str());
}

/// Small manifest for single-stage commands: parameters + digests.
void write_stage_manifest(const fs::path& out_dir, const std::string& command,
                          nlohmann::json parameters, const std::vector<std::string>& input_paths,
                          const std::vector<std::string>& output_rel_paths) {
    RunManifest m;
    m.command = command;
    m.parameters = std::move(parameters);
    for (const auto& p : input_paths) m.inputs.push_back({p, sha256_of_file(p)});
    for (const auto& rel : output_rel_paths)
        m.outputs.push_back({rel, sha256_of_file(out_dir / rel)});
    m.stamp_now();
    m.write(out_dir / "manifest.json");
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

struct IngestArgs {
    std::string sessions;
    std::string metadata;
    std::string keyword;
    bool strict_titles = false;
};

/// Shared parse -> filter -> prune stage.
std::pair<SessionLog, IngestReport> run_ingest_stage(const IngestArgs& a) {
    std::ifstream sin = open_input(a.sessions);
    ParseResult pr = parse_session_log(sin);
    std::ifstream min = open_input(a.metadata);
    MetadataResult mr = parse_metadata(min);
    pr.log.metadata = std::move(mr.metadata);
    pr.report.metadata_read = mr.records_read;
    for (auto& rej : mr.rejections) pr.report.rejections.push_back(rej);
    const TitlePolicy policy =
        a.strict_titles ? TitlePolicy::DropUntitled : TitlePolicy::KeepUntitled;
    SessionLog cleaned = apply_ingest_pipeline(pr.log, a.keyword, policy, pr.report);
    return {std::move(cleaned), std::move(pr.report)};
}

template <class L>
void simulate_cmd_impl(const PipelineConfig& cfg, const fs::path& out_dir,
                       const std::string& config_path) {
    const SimConfig<L> sim = detail::to_sim_config<L>(cfg);
    const SyntheticCorpus<L> corpus = generate_corpus(sim);
    std::vector<std::string> outputs;
    {
        auto out = open_output(out_dir / "labels_truth.csv");
        write_truth_labels(corpus, out);
        outputs.push_back("labels_truth.csv");
    }
    for (const auto& pc : cfg.profiles) {
        const ProfileSpec spec = detail::to_profile_spec<L>(pc);
        const SessionLog log = run_sock_puppet(spec, corpus, sim);
        {
            auto out = open_output(out_dir / pc.id / "sessions.jsonl");
            write_session_log(log, out);
        }
        {
            auto out = open_output(out_dir / pc.id / "metadata.jsonl");
            write_metadata(log.metadata, out);
        }
        outputs.push_back(pc.id + "/sessions.jsonl");
        outputs.push_back(pc.id + "/metadata.jsonl");
        std::cerr << "simulated profile " << pc.id << ": " << log.events.size() << " events\n";
    }
    write_stage_manifest(out_dir, "simulate", detail::pipeline_parameters_json(cfg),
                         {config_path}, outputs);
}

int dispatch(CLI::App& app) {
    // ---- pipeline ----------------------------------------------------------
    auto* pipeline_cmd = app.add_subcommand("pipeline", "run the full audit pipeline");
    static struct {
        std::string config;
        std::string out_dir;
        std::uint64_t seed = 0;
        bool seed_set = false;
        bool strict = false;
    } pl;
    pipeline_cmd->add_option("--config", pl.config, "pipeline config JSON")->required();
    pipeline_cmd->add_option("--out-dir", pl.out_dir, "artifact directory")->required();
    pipeline_cmd->add_option("--seed", pl.seed, "override config rng_seed")
        ->each([&](const std::string&) { pl.seed_set = true; });
    pipeline_cmd->add_flag("--strict", pl.strict, "abort on non-converged solvers");
    pipeline_cmd->callback([&] {
        PipelineConfig cfg = parse_pipeline_config(load_json(pl.config));
        if (pl.seed_set) {
            cfg.rng_seed = pl.seed;
            cfg.rng_seed_set = true;
        }
        if (pl.strict) cfg.strict = true;
        std::vector<FileDigest> inputs{{pl.config, sha256_of_file(pl.config)}};
        const PipelineResult res = run_pipeline(cfg, pl.out_dir, std::move(inputs));
        for (const auto& p : res.profiles) {
            std::cerr << p.id << ": " << p.stats.node_count << " nodes, " << p.stats.edge_count
                      << " edges, selection " << p.selection << ", total_bias "
                      << fmt_double(p.bias.total_bias) << '\n';
            for (const auto& f : p.flags)
                std::cerr << "  [flagged] " << f.measure << ": " << f.note << '\n';
        }
        std::cerr << "artifacts in " << res.out_dir.string() << '\n';
    });

    // ---- simulate ----------------------------------------------------------
    auto* simulate_cmd = app.add_subcommand("simulate", "generate sock-puppet session logs");
    static struct {
        std::string config;
        std::string out_dir;
        std::uint64_t seed = 0;
        bool seed_set = false;
    } sm;
    simulate_cmd->add_option("--config", sm.config, "pipeline config JSON with a simulate section")
        ->required();
    simulate_cmd->add_option("--out-dir", sm.out_dir, "output directory")->required();
    simulate_cmd->add_option("--seed", sm.seed, "override config rng_seed")
        ->each([&](const std::string&) { sm.seed_set = true; });
    simulate_cmd->callback([&] {
        PipelineConfig cfg = parse_pipeline_config(load_json(sm.config));
        if (sm.seed_set) {
            cfg.rng_seed = sm.seed;
            cfg.rng_seed_set = true;
        }
        if (!cfg.simulate) throw ParameterError("config has no simulate section");
        validate_pipeline_config(cfg);
        if (cfg.scheme == LabelScheme::Stance)
            simulate_cmd_impl<Stance>(cfg, sm.out_dir, sm.config);
        else
            simulate_cmd_impl<Veracity>(cfg, sm.out_dir, sm.config);
    });

    // ---- ingest ------------------------------------------------------------
    auto* ingest_cmd = app.add_subcommand("ingest", "parse, filter, and prune a session log");
    static IngestArgs ia;
    static std::string ingest_out;
    ingest_cmd->add_option("--sessions", ia.sessions, "session log (jsonl)")->required();
    ingest_cmd->add_option("--metadata", ia.metadata, "video metadata (jsonl)")->required();
    ingest_cmd->add_option("--keyword", ia.keyword, "topic keyword for the title filter");
    ingest_cmd->add_flag("--strict-titles", ia.strict_titles, "drop videos with unknown titles");
    ingest_cmd->add_option("--out-dir", ingest_out, "output directory")->required();
    ingest_cmd->callback([&] {
        auto [cleaned, report] = run_ingest_stage(ia);
        const fs::path out_dir(ingest_out);
        {
            auto out = open_output(out_dir / "sessions.jsonl");
            write_session_log(cleaned, out);
        }
        {
            auto out = open_output(out_dir / "metadata.jsonl");
            write_metadata(cleaned.metadata, out);
        }
        {
            auto out = open_output(out_dir / "ingest_report.json");
            out << detail::ingest_report_json(report).dump(2) << '\n';
        }
        write_stage_manifest(out_dir, "ingest",
                             {{"keyword", ia.keyword}, {"strict_titles", ia.strict_titles}},
                             {ia.sessions, ia.metadata},
                             {"sessions.jsonl", "metadata.jsonl", "ingest_report.json"});
        std::cerr << "accepted " << report.events_accepted() << "/" << report.events_read
                  << " events, " << cleaned.events.size() << " after filter+prune\n";
    });

    // ---- build -------------------------------------------------------------
    auto* build_cmd = app.add_subcommand("build", "construct the weighted recommendation graph");
    static IngestArgs ba;
    static std::string build_out;
    static double build_r = 0.9;
    build_cmd->add_option("--sessions", ba.sessions, "session log (jsonl)")->required();
    build_cmd->add_option("--metadata", ba.metadata, "video metadata (jsonl)")->required();
    build_cmd->add_option("--keyword", ba.keyword, "topic keyword for the title filter");
    build_cmd->add_flag("--strict-titles", ba.strict_titles, "drop videos with unknown titles");
    build_cmd->add_option("--r", build_r, "geometric weight ratio (0,1)");
    build_cmd->add_option("--out-dir", build_out, "output directory")->required();
    build_cmd->callback([&] {
        auto [cleaned, report] = run_ingest_stage(ba);
        const RecGraph graph = assign_weights(build_graph(cleaned), build_r);
        const fs::path out_dir(build_out);
        {
            auto out = open_output(out_dir / "graph.json");
            out << to_json_edge_list(graph).dump() << '\n';
        }
        {
            auto out = open_output(out_dir / "graph.graphml");
            write_graphml(graph, out, &cleaned.metadata);
        }
        {
            auto out = open_output(out_dir / "ingest_report.json");
            out << detail::ingest_report_json(report).dump(2) << '\n';
        }
        write_stage_manifest(out_dir, "build",
                             {{"keyword", ba.keyword},
                              {"strict_titles", ba.strict_titles},
                              {"r", build_r}},
                             {ba.sessions, ba.metadata},
                             {"graph.json", "graph.graphml", "ingest_report.json"});
        std::cerr << graph.node_count() << " nodes, " << graph.edge_count() << " edges\n";
    });

    // ---- stats -------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "graph statistics table");
    static std::string stats_graph, stats_out, stats_name = "graph";
    static bool stats_undirected = false;
    stats_cmd->add_option("--graph", stats_graph, "graph.json artifact")->required();
    stats_cmd->add_option("--name", stats_name, "row label");
    stats_cmd->add_flag("--undirected", stats_undirected,
                        "treat edges as undirected for path statistics");
    stats_cmd->add_option("--out-dir", stats_out, "output directory")->required();
    stats_cmd->callback([&] {
        const RecGraph g = load_graph(stats_graph);
        const GraphStats st =
            graph_stats(g, stats_undirected ? PathMode::Undirected : PathMode::Directed);
        const fs::path out_dir(stats_out);
        {
            auto out = open_output(out_dir / "stats.csv");
            write_stats_csv_header(out);
            write_stats_csv_row(out, stats_name, st);
        }
        write_stage_manifest(out_dir, "stats", {{"undirected", stats_undirected}}, {stats_graph},
                             {"stats.csv"});
    });

    // ---- centrality --------------------------------------------------------
    auto* cent_cmd = app.add_subcommand("centrality", "compute the six influence measures");
    static std::string cent_graph, cent_out;
    static CentralityConfig cent_cfg;
    static bool cent_strict = false;
    cent_cmd->add_option("--graph", cent_graph, "graph.json artifact")->required();
    cent_cmd->add_option("--damping", cent_cfg.params.damping, "PageRank damping");
    cent_cmd->add_option("--tolerance", cent_cfg.params.tolerance, "solver tolerance");
    cent_cmd->add_option("--max-iterations", cent_cfg.params.max_iterations, "iteration cap");
    cent_cmd->add_option("--alpha-fraction", cent_cfg.params.alpha_fraction,
                         "Katz alpha as a fraction of 1/spectral radius");
    cent_cmd->add_option("--katz-alpha", cent_cfg.params.katz_alpha,
                         "explicit Katz alpha (0 = adaptive)");
    cent_cmd->add_option("--katz-beta", cent_cfg.params.katz_beta, "Katz beta");
    cent_cmd->add_flag("!--eigen-unweighted", cent_cfg.eigen_weighted,
                       "eigenvector on the unweighted adjacency");
    cent_cmd->add_flag("!--pagerank-unweighted", cent_cfg.pagerank_weighted,
                       "PageRank on the unweighted adjacency");
    cent_cmd->add_flag("!--katz-unweighted", cent_cfg.katz_weighted,
                       "Katz on the unweighted adjacency");
    cent_cmd->add_flag("--hits-weighted", cent_cfg.hits_weighted,
                       "HITS on the weighted adjacency");
    cent_cmd->add_flag("--strict", cent_strict, "fail when a solver does not converge");
    cent_cmd->add_option("--out-dir", cent_out, "output directory")->required();
    cent_cmd->callback([&] {
        const RecGraph g = load_graph(cent_graph);
        const CentralitySet cs = compute_centralities(g, cent_cfg);
        for (const auto& sv : cs.raw) {
            if (!sv.converged) {
                if (cent_strict)
                    throw NonConvergenceError(std::string(to_string(sv.measure)) + ": " +
                                              sv.note);
                std::cerr << "[flagged] " << to_string(sv.measure) << ": " << sv.note << '\n';
            }
        }
        const fs::path out_dir(cent_out);
        {
            auto out = open_output(out_dir / "scores_long.csv");
            write_scores_long_csv(g, cs, out);
        }
        {
            auto out = open_output(out_dir / "scores_wide.csv");
            write_scores_wide_csv(g, cs, out);
        }
        std::vector<std::string> outputs{"scores_long.csv", "scores_wide.csv"};
        if (g.node_count() >= 2) {
            const auto rho = measure_correlation(std::span<const ScoreVector>(cs.raw));
            auto out = open_output(out_dir / "correlation.csv");
            write_correlation_csv(std::span<const ScoreVector>(cs.raw), rho, out);
            outputs.push_back("correlation.csv");
        }
        write_stage_manifest(out_dir, "centrality",
                             {{"damping", cent_cfg.params.damping},
                              {"tolerance", cent_cfg.params.tolerance},
                              {"max_iterations", cent_cfg.params.max_iterations},
                              {"alpha_fraction", cent_cfg.params.alpha_fraction},
                              {"katz_alpha", cent_cfg.params.katz_alpha},
                              {"katz_beta", cent_cfg.params.katz_beta},
                              {"eigen_weighted", cent_cfg.eigen_weighted},
                              {"pagerank_weighted", cent_cfg.pagerank_weighted},
                              {"katz_weighted", cent_cfg.katz_weighted},
                              {"hits_weighted", cent_cfg.hits_weighted}},
                             {cent_graph}, outputs);
    });

    // ---- rank --------------------------------------------------------------
    auto* rank_cmd = app.add_subcommand("rank", "rank videos by composite score");
    static std::string rank_scores, rank_out;
    rank_cmd->add_option("--scores", rank_scores, "scores_wide.csv artifact")->required();
    rank_cmd->add_option("--out-dir", rank_out, "output directory")->required();
    rank_cmd->callback([&] {
        std::ifstream in = open_input(rank_scores);
        std::string line;
        std::int64_t lineno = 0;
        std::size_t id_col = 0, composite_col = 0;
        bool header = true;
        std::vector<std::pair<VideoId, double>> scored;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            const auto fields = csv::split_row(line, lineno);
            if (header) {
                header = false;
                bool found = false;
                for (std::size_t i = 0; i < fields.size(); ++i) {
                    if (fields[i] == "video_id") id_col = i;
                    if (fields[i] == "composite") {
                        composite_col = i;
                        found = true;
                    }
                }
                if (!found) throw ParseError("no composite column in " + rank_scores, lineno);
                continue;
            }
            if (fields.size() <= std::max(id_col, composite_col))
                throw ParseError("short row", lineno);
            try {
                scored.emplace_back(fields[id_col], std::stod(fields[composite_col]));
            } catch (const std::exception&) {
                throw ParseError("bad composite value", lineno);
            }
        }
        const RankedList rl = rank_scored_ids(std::move(scored));
        const fs::path out_dir(rank_out);
        {
            auto out = open_output(out_dir / "ranking.csv");
            write_ranking_csv(rl, out);
        }
        write_stage_manifest(out_dir, "rank", {{"tie_break", "video_id_ascending"}},
                             {rank_scores}, {"ranking.csv"});
    });

    // ---- select ------------------------------------------------------------
    auto* select_cmd = app.add_subcommand("select", "take the top percent of a ranking");
    static std::string select_ranking, select_out, select_metadata;
    static double select_pct = 1.0;
    select_cmd->add_option("--ranking", select_ranking, "ranking.csv artifact")->required();
    select_cmd->add_option("--pct", select_pct, "selection percentage (0,100]");
    select_cmd->add_option("--metadata", select_metadata, "metadata.jsonl for titles");
    select_cmd->add_option("--out-dir", select_out, "output directory")->required();
    select_cmd->callback([&] {
        std::ifstream in = open_input(select_ranking);
        const RankedList rl = read_ranking_csv(in);
        const RankedList top = select_top_percent(rl, select_pct);
        MetadataMap metadata;
        std::vector<std::string> inputs{select_ranking};
        if (!select_metadata.empty()) {
            std::ifstream min = open_input(select_metadata);
            metadata = parse_metadata(min).metadata;
            inputs.push_back(select_metadata);
        }
        const fs::path out_dir(select_out);
        {
            auto out = open_output(out_dir / "selection.csv");
            write_selection_csv(top, metadata, out);
        }
        write_stage_manifest(out_dir, "select", {{"pct", select_pct}}, inputs,
                             {"selection.csv"});
        std::cerr << "selected " << top.entries.size() << " of " << rl.entries.size() << '\n';
    });

    // ---- merge-labels ------------------------------------------------------
    auto* merge_cmd = app.add_subcommand("merge-labels", "join a selection with a label file");
    static std::string merge_selection, merge_labels_path, merge_out, merge_scheme;
    merge_cmd->add_option("--selection", merge_selection, "selection.csv artifact")->required();
    merge_cmd->add_option("--labels", merge_labels_path, "label CSV (video_id,label)")->required();
    merge_cmd->add_option("--scheme", merge_scheme, "stance|veracity (default: detect)");
    merge_cmd->add_option("--out-dir", merge_out, "output directory")->required();
    merge_cmd->callback([&] {
        std::ifstream sin = open_input(merge_selection);
        const RankedList selection = read_selection_csv(sin);
        LabelScheme scheme;
        if (!merge_scheme.empty()) {
            const auto s = parse_label_scheme(merge_scheme);
            if (!s) throw ParameterError("unknown scheme: " + merge_scheme);
            scheme = *s;
        } else {
            std::ifstream lin = open_input(merge_labels_path);
            const auto detected = detect_label_scheme(lin);
            if (!detected)
                throw ParameterError(
                    "label file is all-neutral; pass --scheme stance|veracity explicitly");
            scheme = *detected;
        }
        const fs::path out_dir(merge_out);
        auto run = [&]<class L>() {
            std::ifstream lin = open_input(merge_labels_path);
            const auto labels = parse_label_csv<L>(lin);
            MergeResult<L> merged;
            try {
                merged = merge_labels(selection, labels);
            } catch (const IncompleteLabelsError& e) {
                auto out = open_output(out_dir / "unlabeled_selection.csv");
                out << "video_id\n";
                for (const auto& id : e.missing_ids()) out << csv::escape(id) << '\n';
                throw IncompleteLabelsError(
                    std::string(e.what()) +
                        " (gap list: " + (out_dir / "unlabeled_selection.csv").string() + ")",
                    e.missing_ids());
            }
            if (merged.ignored_labels > 0)
                std::cerr << "warning: " << merged.ignored_labels
                          << " label(s) outside the selection ignored\n";
            auto out = open_output(out_dir / "labeled_selection.csv");
            write_labeled_csv(merged.ranking, out);
        };
        if (scheme == LabelScheme::Stance)
            run.template operator()<Stance>();
        else
            run.template operator()<Veracity>();
        write_stage_manifest(out_dir, "merge-labels", {{"scheme", to_string(scheme)}},
                             {merge_selection, merge_labels_path}, {"labeled_selection.csv"});
    });

    // ---- bias --------------------------------------------------------------
    auto* bias_cmd = app.add_subcommand("bias", "rank-weighted total bias of a labeled selection");
    static std::string bias_labeled, bias_out, bias_profile = "profile";
    bias_cmd->add_option("--labeled", bias_labeled, "labeled_selection.csv artifact")->required();
    bias_cmd->add_option("--profile", bias_profile, "profile name for the report row");
    bias_cmd->add_option("--out-dir", bias_out, "output directory")->required();
    bias_cmd->callback([&] {
        // scheme detection: labeled CSV reuses the label-string vocabulary
        std::ifstream din = open_input(bias_labeled);
        std::string header_line;
        std::getline(din, header_line);
        std::string body_line;
        bool saw_stance = false, saw_veracity = false;
        while (std::getline(din, body_line)) {
            const auto fields = csv::split_row(body_line);
            if (fields.size() < 3) continue;
            if (parse_label<Stance>(fields[2]) &&
                *parse_label<Stance>(fields[2]) != Stance::Neutral)
                saw_stance = true;
            if (parse_label<Veracity>(fields[2]) &&
                *parse_label<Veracity>(fields[2]) != Veracity::Neutral)
                saw_veracity = true;
        }
        const fs::path out_dir(bias_out);
        auto run = [&]<class L>() {
            std::ifstream in = open_input(bias_labeled);
            const LabeledRanking<L> lr = read_labeled_csv<L>(in);
            const BiasReport rep = total_bias(lr, bias_profile);
            auto out = open_output(out_dir / "bias.csv");
            write_bias_csv_header(out);
            write_bias_csv_row(out, rep);
            std::cerr << bias_profile << ": total_bias " << fmt_double(rep.total_bias) << " (n="
                      << rep.n << ")\n";
        };
        if (saw_veracity && !saw_stance)
            run.template operator()<Veracity>();
        else
            run.template operator()<Stance>(); // stance also covers all-neutral files
        write_stage_manifest(out_dir, "bias", {{"profile", bias_profile}}, {bias_labeled},
                             {"bias.csv"});
    });

    // ---- compare -----------------------------------------------------------
    auto* compare_cmd =
        app.add_subcommand("compare", "OC and RBO between two profiles' rankings");
    static std::string cmp_a, cmp_b, cmp_out;
    static double cmp_p = 0.97;
    static std::size_t cmp_depth = 1000;
    static bool cmp_ext = false;
    compare_cmd->add_option("dir_a", cmp_a, "first profile artifact directory")->required();
    compare_cmd->add_option("dir_b", cmp_b, "second profile artifact directory")->required();
    compare_cmd->add_option("--p", cmp_p, "RBO persistence parameter (0,1)");
    compare_cmd->add_option("--depth", cmp_depth, "RBO evaluation depth");
    compare_cmd->add_flag("--extrapolated", cmp_ext, "extrapolated RBO variant");
    compare_cmd->add_option("--out-dir", cmp_out, "output directory")->required();
    compare_cmd->callback([&] {
        auto read_ranking_ids = [](const fs::path& dir) {
            const fs::path path = dir / "ranking.csv";
            std::ifstream in(path);
            if (!in) throw IoError("missing ranking file: " + path.string());
            const RankedList rl = read_ranking_csv(in);
            std::vector<VideoId> ids;
            ids.reserve(rl.entries.size());
            for (const auto& e : rl.entries) ids.push_back(e.id);
            return ids;
        };
        const auto ids_a = read_ranking_ids(cmp_a);
        const auto ids_b = read_ranking_ids(cmp_b);
        const auto name_of = [](const std::string& dir) {
            const fs::path p(dir);
            return p.filename().empty() ? p.parent_path().filename().string()
                                        : p.filename().string();
        };
        const OverlapReport rep = compare_rankings(name_of(cmp_a), ids_a, name_of(cmp_b), ids_b,
                                                   cmp_p, cmp_depth, cmp_ext);
        const fs::path out_dir(cmp_out);
        {
            auto out = open_output(out_dir / "overlap.csv");
            write_overlap_csv_header(out);
            write_overlap_csv_row(out, rep);
        }
        write_stage_manifest(out_dir, "compare",
                             {{"p", cmp_p}, {"depth", cmp_depth}, {"extrapolated", cmp_ext}},
                             {(fs::path(cmp_a) / "ranking.csv").string(),
                              (fs::path(cmp_b) / "ranking.csv").string()},
                             {"overlap.csv"});
        std::cerr << rep.profile_a << " & " << rep.profile_b << ": oc " << fmt_double(rep.oc)
                  << ", rbo " << fmt_double(rep.rbo) << '\n';
    });

    // ---- export ------------------------------------------------------------
    auto* export_cmd = app.add_subcommand("export", "convert a graph artifact");
    static std::string exp_graph, exp_format = "graphml", exp_out, exp_metadata;
    export_cmd->add_option("--graph", exp_graph, "graph.json artifact")->required();
    export_cmd->add_option("--format", exp_format, "graphml|dot|json");
    export_cmd->add_option("--metadata", exp_metadata, "metadata.jsonl for node attributes");
    export_cmd->add_option("--out", exp_out, "output file")->required();
    export_cmd->callback([&] {
        const auto format = parse_graph_format(exp_format);
        if (!format) throw ParameterError("unknown graph format: " + exp_format);
        const RecGraph g = load_graph(exp_graph);
        MetadataMap metadata;
        if (!exp_metadata.empty()) {
            std::ifstream min = open_input(exp_metadata);
            metadata = parse_metadata(min).metadata;
        }
        auto out = open_output(exp_out);
        export_graph(g, *format, out, exp_metadata.empty() ? nullptr : &metadata);
    });

    app.require_subcommand(1);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolName) + " " + kToolVersion +
                 " -- black-box recommendation-audit toolkit"};
    dispatch(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.category()) << "): " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
