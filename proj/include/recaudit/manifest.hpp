/**
 * recaudit -- black-box recommendation-audit toolkit
 *
 * Run manifest: every parameter, input digest, and output digest of a run,
 * written next to the artifacts. A manifest pins everything needed to
 * re-execute the run; all randomized stages take their seed from it, so
 * two runs with matching manifests produce byte-identical numeric
 * artifacts.
 *
 * This code is released under the
 * Apache License Version 2.0 http://www.apache.org/licenses/.
 */
#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "recaudit/detail/sha256.hpp"
#include "recaudit/errors.hpp"
#include "recaudit/version.hpp"

namespace recaudit {

inline std::string sha256_of_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    detail::Sha256 h;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    const auto d = h.digest();
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : d) {
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 0xf]);
    }
    return out;
}

struct FileDigest {
    std::string path; // relative to the artifact directory for outputs
    std::string sha256;
};

struct SolverFlag {
    std::string profile;
    std::string measure;
    bool converged = true;
    int iterations = 0;
    std::string note;
};

struct RunManifest {
    std::string command;
    nlohmann::json parameters; // every knob that shaped the run
    std::vector<FileDigest> inputs;
    std::vector<FileDigest> outputs;
    std::vector<SolverFlag> solver_flags;
    std::string created_utc;

    void stamp_now() {
        const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        created_utc = buf;
    }

    nlohmann::json to_json() const {
        nlohmann::json inputs_j = nlohmann::json::array();
        for (const auto& f : inputs) inputs_j.push_back({{"path", f.path}, {"sha256", f.sha256}});
        nlohmann::json outputs_j = nlohmann::json::array();
        for (const auto& f : outputs) outputs_j.push_back({{"path", f.path}, {"sha256", f.sha256}});
        nlohmann::json flags_j = nlohmann::json::array();
        for (const auto& f : solver_flags)
            flags_j.push_back({{"profile", f.profile},
                               {"measure", f.measure},
                               {"converged", f.converged},
                               {"iterations", f.iterations},
                               {"note", f.note}});
        return nlohmann::json{{"tool", kToolName},       {"version", kToolVersion},
                              {"command", command},      {"created_utc", created_utc},
                              {"parameters", parameters}, {"inputs", inputs_j},
                              {"outputs", outputs_j},    {"solver_flags", flags_j}};
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path.string());
        out << to_json().dump(2) << '\n';
    }
};

} // namespace recaudit
