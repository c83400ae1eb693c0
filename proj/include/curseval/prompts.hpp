#pragma once

// System-prompt variants, feedback templates, and the coordinate extractor.
// The template texts live as data files under prompts/ and are loaded
// verbatim; substitution fills {width}/{height} and {cross_x}/{cross_y}
// slots and nothing else.

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curseval/geometry.hpp"
#include "curseval/hash.hpp"

namespace curseval {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::array<std::string_view, 7> kSystemPromptNames = {
    "baseline", "baseline_cot", "cursor_aware", "step_by_step", "minimal", "visual_anchor",
    "custom"};

inline constexpr std::array<std::string_view, 2> kFeedbackTemplateNames = {"baseline", "spatial"};

namespace prompt_detail {

inline std::string replace_all(std::string text, std::string_view slot, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(slot, pos)) != std::string::npos) {
        text.replace(pos, slot.size(), value);
        pos += value.size();
    }
    return text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read prompt file: " + path);
    return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

}  // namespace prompt_detail

class PromptLibrary {
public:
    static PromptLibrary load(const std::string& dir) {
        PromptLibrary lib;
        for (auto name : kSystemPromptNames) {
            std::string path = dir + "/system_" + std::string(name) + ".txt";
            lib.system_[std::string(name)] = prompt_detail::read_file(path);
            lib.checksums_["system_" + std::string(name)] =
                sha1_hex(lib.system_[std::string(name)]);
        }
        for (auto name : kFeedbackTemplateNames) {
            std::string path = dir + "/feedback_" + std::string(name) + ".txt";
            lib.feedback_[std::string(name)] = prompt_detail::read_file(path);
            lib.checksums_["feedback_" + std::string(name)] =
                sha1_hex(lib.feedback_[std::string(name)]);
        }
        return lib;
    }

    const std::string& system_template(const std::string& variant) const {
        auto it = system_.find(variant);
        if (it == system_.end()) throw ConfigError("unknown system prompt variant: " + variant);
        return it->second;
    }

    const std::string& feedback_template(const std::string& name) const {
        auto it = feedback_.find(name);
        if (it == feedback_.end()) throw ConfigError("unknown feedback template: " + name);
        return it->second;
    }

    std::string render_system(const std::string& variant, int width, int height) const {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("render_system: dimensions must be positive");
        const std::string& tmpl = system_template(variant);
        if (variant == "custom") {
            if (tmpl.find("PUT YOUR CUSTOM PROMPT HERE") != std::string::npos ||
                tmpl.find_first_not_of(" \t\r\n") == std::string::npos)
                throw ConfigError("custom system prompt has no content; edit system_custom.txt");
        }
        std::string out = prompt_detail::replace_all(tmpl, "{width}", std::to_string(width));
        out = prompt_detail::replace_all(out, "{height}", std::to_string(height));
        if (out.find("{width}") != std::string::npos || out.find("{height}") != std::string::npos)
            throw ConfigError("system prompt retains unsubstituted slot");
        return out;
    }

    std::string render_feedback(const std::string& name, long cross_x, long cross_y) const {
        std::string out = prompt_detail::replace_all(feedback_template(name), "{cross_x}",
                                                     std::to_string(cross_x));
        out = prompt_detail::replace_all(out, "{cross_y}", std::to_string(cross_y));
        if (out.find("{cross_x}") != std::string::npos || out.find("{cross_y}") != std::string::npos)
            throw ConfigError("feedback template retains unsubstituted slot");
        return out;
    }

    // sha1 per template file, keyed "system_<name>" / "feedback_<name>".
    const std::map<std::string, std::string>& checksums() const { return checksums_; }

private:
    std::map<std::string, std::string> system_;
    std::map<std::string, std::string> feedback_;
    std::map<std::string, std::string> checksums_;
};

enum class ParseStatus { parsed, parse_failure };

struct ParseOutcome {
    ParseStatus status = ParseStatus::parse_failure;
    std::optional<PixelPoint> point;
    std::size_t matched_begin = 0;  // offsets of the accepted match in raw_text
    std::size_t matched_end = 0;
    std::string raw_text;
};

// Accepted lexical pattern (documented in docs/formats.md): a pair of
// non-negative decimal numbers separated by a comma, inside matching round
// or square brackets, with optional interior whitespace. The LAST such pair
// in the text is the model decision; no pair means parse failure.
inline ParseOutcome extract_decision(const std::string& raw_text) {
    static const std::regex pair_re(
        R"(\(\s*(\d+(?:\.\d+)?)\s*,\s*(\d+(?:\.\d+)?)\s*\)|\[\s*(\d+(?:\.\d+)?)\s*,\s*(\d+(?:\.\d+)?)\s*\])");
    ParseOutcome out;
    out.raw_text = raw_text;
    for (auto it = std::sregex_iterator(raw_text.begin(), raw_text.end(), pair_re);
         it != std::sregex_iterator(); ++it) {
        const std::smatch& m = *it;
        const std::string xs = m[1].matched ? m[1].str() : m[3].str();
        const std::string ys = m[1].matched ? m[2].str() : m[4].str();
        out.status = ParseStatus::parsed;
        out.point = PixelPoint{std::stod(xs), std::stod(ys)};
        out.matched_begin = std::size_t(m.position(0));
        out.matched_end = out.matched_begin + std::size_t(m.length(0));
    }
    return out;
}

}  // namespace curseval
