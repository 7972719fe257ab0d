/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Graph serialization: GraphML 1.0 and DOT for external tooling, and a JSON
 * edge-list format that round-trips losslessly. No layout information is
 * ever written; plotting is left to downstream tools.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>

#include <json.hpp>

#include "recaudit/csv.hpp"
#include "recaudit/graph.hpp"

namespace recaudit {

enum class GraphFormat { GraphML, JSONEdgeList, DOT };

inline std::optional<GraphFormat> parse_graph_format(std::string_view s) {
    if (s == "graphml") return GraphFormat::GraphML;
    if (s == "json") return GraphFormat::JSONEdgeList;
    if (s == "dot") return GraphFormat::DOT;
    return std::nullopt;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string dot_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    out.push_back('"');
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline void require_weights(const RecGraph& g) {
    if (!g.weights_assigned())
        throw ParameterError("graph export requires assigned weights");
}

} // namespace detail

inline void write_graphml(const RecGraph& g, std::ostream& os,
                          const MetadataMap* metadata = nullptr) {
    detail::require_weights(g);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\"\n"
          "         xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\"\n"
          "         xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
          "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
          "  <key id=\"title\" for=\"node\" attr.name=\"title\" attr.type=\"string\"/>\n"
          "  <key id=\"views\" for=\"node\" attr.name=\"view_count\" attr.type=\"long\"/>\n"
          "  <key id=\"duration\" for=\"node\" attr.name=\"duration_s\" attr.type=\"long\"/>\n"
          "  <key id=\"rank\" for=\"edge\" attr.name=\"rank\" attr.type=\"int\"/>\n"
          "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
          "  <graph id=\"G\" edgedefault=\"directed\">\n";
    for (const VideoId& id : g.ids()) {
        os << "    <node id=\"" << detail::xml_escape(id) << "\"";
        const VideoMeta* m = nullptr;
        if (metadata != nullptr) {
            auto it = metadata->find(id);
            if (it != metadata->end()) m = &it->second;
        }
        if (m == nullptr) {
            os << "/>\n";
        } else {
            os << ">\n";
            if (!m->title.empty())
                os << "      <data key=\"title\">" << detail::xml_escape(m->title) << "</data>\n";
            os << "      <data key=\"views\">" << m->view_count << "</data>\n"
               << "      <data key=\"duration\">" << m->duration_s << "</data>\n"
               << "    </node>\n";
        }
    }
    for (const auto& e : g.edges()) {
        os << "    <edge source=\"" << detail::xml_escape(g.id(e.src)) << "\" target=\""
           << detail::xml_escape(g.id(e.dst)) << "\">\n"
           << "      <data key=\"rank\">" << e.rank << "</data>\n"
           << "      <data key=\"weight\">" << fmt_double(e.weight) << "</data>\n"
           << "    </edge>\n";
    }
    os << "  </graph>\n</graphml>\n";
}

inline void write_dot(const RecGraph& g, std::ostream& os, const MetadataMap* metadata = nullptr) {
    detail::require_weights(g);
    os << "digraph recommendations {\n";
    for (const VideoId& id : g.ids()) {
        os << "  " << detail::dot_escape(id);
        if (metadata != nullptr) {
            auto it = metadata->find(id);
            if (it != metadata->end())
                os << " [view_count=" << it->second.view_count
                   << ", duration_s=" << it->second.duration_s << "]";
        }
        os << ";\n";
    }
    for (const auto& e : g.edges())
        os << "  " << detail::dot_escape(g.id(e.src)) << " -> " << detail::dot_escape(g.id(e.dst))
           << " [rank=" << e.rank << ", weight=" << fmt_double(e.weight) << "];\n";
    os << "}\n";
}

inline constexpr std::string_view kEdgeListFormatName = "recaudit-edge-list";
inline constexpr int kEdgeListFormatVersion = 1;

inline nlohmann::json to_json_edge_list(const RecGraph& g) {
    detail::require_weights(g);
    nlohmann::json nodes = nlohmann::json::array();
    for (const VideoId& id : g.ids()) nodes.push_back({{"id", id}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges())
        edges.push_back({{"src", g.id(e.src)},
                         {"dst", g.id(e.dst)},
                         {"rank", e.rank},
                         {"weight", e.weight}});
    return nlohmann::json{{"format", kEdgeListFormatName},
                          {"version", kEdgeListFormatVersion},
                          {"directed", true},
                          {"weights_assigned", true},
                          {"nodes", std::move(nodes)},
                          {"edges", std::move(edges)}};
}

inline RecGraph from_json_edge_list(const nlohmann::json& j) {
    if (!j.is_object() || j.value("format", "") != kEdgeListFormatName)
        throw ParseError("not a " + std::string(kEdgeListFormatName) + " document");
    std::vector<VideoId> ids;
    for (const auto& nj : j.at("nodes")) ids.push_back(nj.at("id").get<std::string>());
    std::unordered_map<std::string, RecGraph::NodeIx> index;
    for (RecGraph::NodeIx i = 0; i < ids.size(); ++i) index.emplace(ids[i], i);
    std::vector<RecGraph::Edge> edges;
    for (const auto& ej : j.at("edges")) {
        const auto src = index.find(ej.at("src").get<std::string>());
        const auto dst = index.find(ej.at("dst").get<std::string>());
        if (src == index.end() || dst == index.end())
            throw ParseError("edge references unknown node");
        edges.push_back({src->second, dst->second, ej.at("rank").get<std::uint32_t>(),
                         ej.at("weight").get<double>()});
    }
    return RecGraph::from_parts(std::move(ids), std::move(edges),
                                j.value("weights_assigned", false));
}

inline RecGraph parse_json_edge_list(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("invalid JSON in edge-list document");
    return from_json_edge_list(j);
}

inline void export_graph(const RecGraph& g, GraphFormat format, std::ostream& os,
                         const MetadataMap* metadata = nullptr) {
    switch (format) {
        case GraphFormat::GraphML: write_graphml(g, os, metadata); return;
        case GraphFormat::JSONEdgeList:
            detail::require_weights(g);
            os << to_json_edge_list(g).dump(2) << '\n';
            return;
        case GraphFormat::DOT: write_dot(g, os, metadata); return;
    }
    throw ParameterError("unknown graph export format");
}

/// One row per graph, matching the stats table layout used in reports.
inline void write_stats_csv_header(std::ostream& os) {
    os << "graph,nodes,edges,avg_degree,avg_path_length,diameter\n";
}

inline void write_stats_csv_row(std::ostream& os, std::string_view name, const GraphStats& st) {
    os << csv::escape(std::string(name)) << ',' << st.node_count << ',' << st.edge_count << ','
       << fmt_double(st.avg_degree) << ',' << fmt_double(st.avg_path_length) << ',' << st.diameter
       << '\n';
}

} // namespace recaudit
