#pragma once

// Run manifests and the fixed-width comparison table: one row per
// (prompt, model) within per-turn panels, columns Accuracy / Distance
// (bbox) / Distance (Center) / element-wise accuracy by granularity.

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "curseval/engine.hpp"
#include "curseval/hash.hpp"
#include "curseval/schema.hpp"

namespace curseval {

inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::string file_checksum(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot checksum " + path);
    Sha1 h;
    char buf[65536];
    while (f.read(buf, sizeof(buf)) || f.gcount() > 0) h.update(buf, std::size_t(f.gcount()));
    auto d = h.finish();
    return to_hex(d.data(), d.size());
}

struct RunManifest {
    json config = json::object();  // fully resolved parameters
    std::string dataset_path;
    std::string dataset_checksum;
    std::map<std::string, std::string> prompt_checksums;
    std::uint64_t seed = 0;
    std::string tool_version{kToolVersion};
    std::string started_at;
    std::string finished_at;
    std::string backend;  // identity only, never credentials
};

inline json to_json(const RunManifest& m) {
    return json{{"tool_version", m.tool_version},
                {"config", m.config},
                {"dataset_path", m.dataset_path},
                {"dataset_checksum", m.dataset_checksum},
                {"prompt_checksums", m.prompt_checksums},
                {"seed", m.seed},
                {"backend", m.backend},
                {"started_at", m.started_at},
                {"finished_at", m.finished_at}};
}

inline RunManifest manifest_from_json(const json& j) {
    RunManifest m;
    m.tool_version = j.value("tool_version", "");
    m.config = j.value("config", json::object());
    m.dataset_path = j.value("dataset_path", "");
    m.dataset_checksum = j.value("dataset_checksum", "");
    if (j.contains("prompt_checksums"))
        m.prompt_checksums = j.at("prompt_checksums").get<std::map<std::string, std::string>>();
    m.seed = j.value("seed", std::uint64_t(0));
    m.backend = j.value("backend", "");
    m.started_at = j.value("started_at", "");
    m.finished_at = j.value("finished_at", "");
    return m;
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << "\n";
}

inline json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot read " + path);
    return json::parse(f);
}

struct ReportRow {
    std::string prompt;
    std::string model;
    MetricsSummary metrics;
};

namespace report_detail {

inline std::string pct(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v * 100.0 << "%";
    return os.str();
}

inline std::string num(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

}  // namespace report_detail

inline std::string format_report_table(const std::vector<ReportRow>& rows) {
    if (rows.empty()) return "(no runs)\n";
    int max_turns = 0;
    for (const auto& r : rows) max_turns = std::max(max_turns, int(r.metrics.per_turn.size()));

    std::ostringstream os;
    auto emit_row = [&os](const std::string& a, const std::string& b, const std::string& c,
                          const std::string& d, const std::string& e, const std::string& f,
                          const std::string& g, const std::string& h) {
        os << std::left << std::setw(16) << a << std::setw(22) << b << std::right << std::setw(10)
           << c << std::setw(17) << d << std::setw(19) << e << std::setw(11) << f << std::setw(9)
           << g << std::setw(9) << h << "\n";
    };

    for (int turn = 1; turn <= max_turns; ++turn) {
        os << std::string(113, '=') << "\n";
        os << std::string(52, ' ') << "Turn " << turn << "\n";
        os << std::string(113, '-') << "\n";
        emit_row("Prompt", "Model", "Accuracy", "Distance (bbox)", "Distance (Center)",
                 "Character", "Word", "Line");
        os << std::string(113, '-') << "\n";
        for (const auto& r : rows) {
            if (turn > int(r.metrics.per_turn.size())) continue;
            const auto& t = r.metrics.per_turn[std::size_t(turn - 1)];
            emit_row(r.prompt, r.model, report_detail::pct(t.accuracy),
                     report_detail::num(t.mean_dist_box), report_detail::num(t.mean_dist_center),
                     report_detail::pct(t.accuracy_character), report_detail::pct(t.accuracy_word),
                     report_detail::pct(t.accuracy_line));
        }
    }
    os << std::string(113, '=') << "\n";
    return os.str();
}

}  // namespace curseval
