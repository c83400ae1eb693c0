#pragma once

// Dataset schema and JSONL interchange. Collection files carry one header
// object followed by per-character cursor records; eval files carry one
// Sample per line. Field names are the fixed snake_case wire contract, see
// docs/formats.md.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "curseval/geometry.hpp"

namespace curseval {

using json = nlohmann::ordered_json;

enum class Granularity { character, word, line };

inline std::string to_string(Granularity g) {
    switch (g) {
        case Granularity::character: return "character";
        case Granularity::word: return "word";
        case Granularity::line: return "line";
    }
    throw std::logic_error("unknown granularity");
}

inline Granularity granularity_from_string(const std::string& s) {
    if (s == "character") return Granularity::character;
    if (s == "word") return Granularity::word;
    if (s == "line") return Granularity::line;
    throw std::invalid_argument("unknown granularity: " + s);
}

// One grounding task.
struct Sample {
    std::string id;
    std::string image_path;
    std::string instruction;
    NormalizedBox target;
    Granularity granularity = Granularity::character;
    int image_width = 0;
    int image_height = 0;
};

struct WindowGeometry {
    double screen_x = 0.0;
    double screen_y = 0.0;
    double width = 0.0;
    double height = 0.0;
};

struct DatasetHeader {
    std::string file_content;
    std::int64_t char_count = 0;
    std::string font_family;
    double font_size = 0.0;
    double line_height = 0.0;
    int settle_delay_ms = 0;
    WindowGeometry window_geometry;
    std::string screenshot_path;
    std::string timestamp;  // ISO-8601
};

struct CursorRecord {
    std::string file_id;
    int line = 0;  // zero-based
    int col = 0;   // zero-based
    std::string character;  // "\n" at EOL, "" at the final stop
    double screen_x = 0.0;
    double screen_y = 0.0;
    double window_x = 0.0;
    double window_y = 0.0;
    double cursor_width = 0.0;
    double cursor_height = 0.0;
    double device_pixel_ratio = 1.0;
};

// ---- JSON conversions ----

inline json to_json(const NormalizedBox& b) {
    return json{{"x0", b.x0}, {"y0", b.y0}, {"x1", b.x1}, {"y1", b.y1}};
}

inline NormalizedBox normalized_box_from_json(const json& j) {
    NormalizedBox b{j.at("x0").get<double>(), j.at("y0").get<double>(), j.at("x1").get<double>(),
                    j.at("y1").get<double>()};
    if (!(b.x0 >= 0 && b.x0 <= b.x1 && b.x1 <= 1000 && b.y0 >= 0 && b.y0 <= b.y1 && b.y1 <= 1000))
        throw std::invalid_argument("normalized box out of [0,1000] order");
    return b;
}

inline json to_json(const Sample& s) {
    return json{{"id", s.id},
                {"image_path", s.image_path},
                {"instruction", s.instruction},
                {"target", to_json(s.target)},
                {"granularity", to_string(s.granularity)},
                {"image_width", s.image_width},
                {"image_height", s.image_height}};
}

inline Sample sample_from_json(const json& j) {
    Sample s;
    s.id = j.at("id").get<std::string>();
    s.image_path = j.at("image_path").get<std::string>();
    s.instruction = j.at("instruction").get<std::string>();
    s.target = normalized_box_from_json(j.at("target"));
    s.granularity = granularity_from_string(j.at("granularity").get<std::string>());
    s.image_width = j.at("image_width").get<int>();
    s.image_height = j.at("image_height").get<int>();
    if (s.image_width <= 0 || s.image_height <= 0)
        throw std::invalid_argument("sample image dimensions must be positive");
    return s;
}

inline json to_json(const DatasetHeader& h) {
    return json{{"file_content", h.file_content},
                {"char_count", h.char_count},
                {"font_family", h.font_family},
                {"font_size", h.font_size},
                {"line_height", h.line_height},
                {"settle_delay_ms", h.settle_delay_ms},
                {"window_geometry",
                 {{"screen_x", h.window_geometry.screen_x},
                  {"screen_y", h.window_geometry.screen_y},
                  {"width", h.window_geometry.width},
                  {"height", h.window_geometry.height}}},
                {"screenshot_path", h.screenshot_path},
                {"timestamp", h.timestamp}};
}

inline DatasetHeader header_from_json(const json& j) {
    DatasetHeader h;
    h.file_content = j.at("file_content").get<std::string>();
    h.char_count = j.at("char_count").get<std::int64_t>();
    h.font_family = j.at("font_family").get<std::string>();
    h.font_size = j.at("font_size").get<double>();
    h.line_height = j.at("line_height").get<double>();
    h.settle_delay_ms = j.at("settle_delay_ms").get<int>();
    const auto& g = j.at("window_geometry");
    h.window_geometry = {g.at("screen_x").get<double>(), g.at("screen_y").get<double>(),
                         g.at("width").get<double>(), g.at("height").get<double>()};
    h.screenshot_path = j.at("screenshot_path").get<std::string>();
    h.timestamp = j.at("timestamp").get<std::string>();
    return h;
}

inline json to_json(const CursorRecord& r) {
    return json{{"file_id", r.file_id},
                {"line", r.line},
                {"col", r.col},
                {"character", r.character},
                {"screen_x", r.screen_x},
                {"screen_y", r.screen_y},
                {"window_x", r.window_x},
                {"window_y", r.window_y},
                {"cursor_width", r.cursor_width},
                {"cursor_height", r.cursor_height},
                {"device_pixel_ratio", r.device_pixel_ratio}};
}

inline CursorRecord record_from_json(const json& j) {
    CursorRecord r;
    r.file_id = j.at("file_id").get<std::string>();
    r.line = j.at("line").get<int>();
    r.col = j.at("col").get<int>();
    r.character = j.at("character").get<std::string>();
    r.screen_x = j.at("screen_x").get<double>();
    r.screen_y = j.at("screen_y").get<double>();
    r.window_x = j.at("window_x").get<double>();
    r.window_y = j.at("window_y").get<double>();
    r.cursor_width = j.at("cursor_width").get<double>();
    r.cursor_height = j.at("cursor_height").get<double>();
    r.device_pixel_ratio = j.at("device_pixel_ratio").get<double>();
    if (r.line < 0 || r.col < 0 || r.cursor_width <= 0 || r.cursor_height <= 0 ||
        r.device_pixel_ratio <= 0)
        throw std::invalid_argument("cursor record field out of range");
    return r;
}

// ---- JSONL files ----

struct LineError {
    int line_number = 0;  // 1-based position in the file
    std::string message;
};

struct CollectionFile {
    DatasetHeader header;
    std::vector<CursorRecord> records;
    bool truncated = false;
    std::string truncation_reason;
    std::vector<LineError> errors;
};

struct SampleFile {
    std::vector<Sample> samples;
    std::vector<LineError> errors;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SchemaError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(f, line)) lines.push_back(line);
    return lines;
}

// Collection file: header line, then records in file order. Malformed record
// lines are collected with their line numbers and processing continues.
inline CollectionFile read_collection(const std::string& path) {
    auto lines = read_lines(path);
    if (lines.empty()) throw SchemaError(path + ": missing header line");
    CollectionFile out;
    try {
        out.header = header_from_json(json::parse(lines[0]));
    } catch (const std::exception& e) {
        throw SchemaError(path + ": line 1 is not a valid header: " + e.what());
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            json j = json::parse(lines[i]);
            if (j.contains("truncated")) {
                out.truncated = true;
                out.truncation_reason = j.value("reason", "");
                continue;
            }
            out.records.push_back(record_from_json(j));
        } catch (const std::exception& e) {
            out.errors.push_back({int(i + 1), e.what()});
        }
    }
    return out;
}

inline SampleFile read_samples(const std::string& path) {
    auto lines = read_lines(path);
    SampleFile out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        try {
            out.samples.push_back(sample_from_json(json::parse(lines[i])));
        } catch (const std::exception& e) {
            out.errors.push_back({int(i + 1), e.what()});
        }
    }
    return out;
}

inline void write_collection(const std::string& path, const DatasetHeader& header,
                             const std::vector<CursorRecord>& records) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path);
    f << to_json(header).dump() << "\n";
    for (const auto& r : records) f << to_json(r).dump() << "\n";
}

inline void write_samples(const std::string& path, const std::vector<Sample>& samples) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path);
    for (const auto& s : samples) f << to_json(s).dump() << "\n";
}

// Frame-consistency law every record must satisfy against its header.
inline bool frames_consistent(const CursorRecord& r, const DatasetHeader& h, double eps = 1e-9) {
    return std::abs(r.screen_x - (r.window_x + h.window_geometry.screen_x)) <= eps &&
           std::abs(r.screen_y - (r.window_y + h.window_geometry.screen_y)) <= eps;
}

}  // namespace curseval
