#pragma once

// Natural-language instruction rendering and the reference resolver that
// maps an instruction back to its unique (line, col) cursor stop. The
// generator uses the resolver to guarantee every emitted instruction is
// unambiguous over the rendered text.

#include <optional>
#include <regex>
#include <stdexcept>
#include <string>
#include <vector>

#include "curseval/editor.hpp"
#include "curseval/schema.hpp"

namespace curseval {

struct CursorStop {
    int line = 0;  // zero-based
    int col = 0;
    friend bool operator==(const CursorStop&, const CursorStop&) = default;
};

namespace instr_detail {

struct WordHit {
    int col = 0;  // column of the word's first character
};

inline std::vector<WordHit> find_words(const std::string& line, const std::string& word) {
    std::vector<WordHit> hits;
    auto is_word_char = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    };
    for (std::size_t i = 0; i + word.size() <= line.size(); ++i) {
        if (line.compare(i, word.size(), word) != 0) continue;
        bool left_ok = i == 0 || !is_word_char(line[i - 1]);
        bool right_ok = i + word.size() == line.size() || !is_word_char(line[i + word.size()]);
        if (left_ok && right_ok) hits.push_back({int(i)});
    }
    return hits;
}

inline std::vector<int> find_pairs(const std::string& line, char left, char right) {
    std::vector<int> cols;  // boundary columns (position of the right char)
    for (std::size_t i = 1; i < line.size(); ++i)
        if (line[i - 1] == left && line[i] == right) cols.push_back(int(i));
    return cols;
}

}  // namespace instr_detail

// Renders the instruction for a character-boundary target between the
// characters at (line, col-1) and (line, col). `occurrence` is 1-based and
// included only when the pair repeats on the line.
inline std::string character_instruction(char left, char right, int line_1based,
                                         std::optional<int> occurrence) {
    std::string s = "Place the cursor between the characters '";
    s += left;
    s += "' and '";
    s += right;
    s += "' on line " + std::to_string(line_1based);
    if (occurrence) s += " (occurrence " + std::to_string(*occurrence) + " of this pair on the line)";
    s += ".";
    return s;
}

inline std::string word_instruction(const std::string& word, int line_1based,
                                    std::optional<int> occurrence) {
    std::string s = "Place the cursor immediately before the word '" + word + "' on line " +
                    std::to_string(line_1based);
    if (occurrence)
        s += " (occurrence " + std::to_string(*occurrence) + " of this word on the line)";
    s += ".";
    return s;
}

inline std::string line_instruction(int line_1based) {
    return "Place the cursor at the start of line " + std::to_string(line_1based) + ".";
}

// Maps an instruction produced by the renderers above back to its cursor
// stop over `text`. Returns nullopt when the instruction does not resolve to
// exactly one position.
inline std::optional<CursorStop> resolve_instruction(const std::string& instruction,
                                                     std::string_view text) {
    static const std::regex char_re(
        R"(^Place the cursor between the characters '(.)' and '(.)' on line (\d+)(?: \(occurrence (\d+) of this pair on the line\))?\.$)");
    static const std::regex word_re(
        R"(^Place the cursor immediately before the word '([A-Za-z_][A-Za-z0-9_]*)' on line (\d+)(?: \(occurrence (\d+) of this word on the line\))?\.$)");
    static const std::regex line_re(R"(^Place the cursor at the start of line (\d+)\.$)");

    auto lines = split_lines(text);
    std::smatch m;
    if (std::regex_match(instruction, m, char_re)) {
        int line = std::stoi(m[3]) - 1;
        if (line < 0 || line >= int(lines.size())) return std::nullopt;
        auto cols = instr_detail::find_pairs(lines[std::size_t(line)], m[1].str()[0], m[2].str()[0]);
        if (m[4].matched) {
            int k = std::stoi(m[4]);
            if (k < 1 || k > int(cols.size())) return std::nullopt;
            return CursorStop{line, cols[std::size_t(k - 1)]};
        }
        if (cols.size() != 1) return std::nullopt;
        return CursorStop{line, cols[0]};
    }
    if (std::regex_match(instruction, m, word_re)) {
        int line = std::stoi(m[2]) - 1;
        if (line < 0 || line >= int(lines.size())) return std::nullopt;
        auto hits = instr_detail::find_words(lines[std::size_t(line)], m[1].str());
        if (m[3].matched) {
            int k = std::stoi(m[3]);
            if (k < 1 || k > int(hits.size())) return std::nullopt;
            return CursorStop{line, hits[std::size_t(k - 1)].col};
        }
        if (hits.size() != 1) return std::nullopt;
        return CursorStop{line, hits[0].col};
    }
    if (std::regex_match(instruction, m, line_re)) {
        int line = std::stoi(m[1]) - 1;
        if (line < 0 || line >= int(lines.size())) return std::nullopt;
        return CursorStop{line, 0};
    }
    return std::nullopt;
}

}  // namespace curseval
