#pragma once

// Seeded eval-set generator. Picks cursor targets from a rendered corpus,
// renders unambiguous instructions for them, and stores each target as a
// degenerate normalized box at the closed-form ground-truth point.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "curseval/editor.hpp"
#include "curseval/instructions.hpp"
#include "curseval/rng.hpp"
#include "curseval/schema.hpp"

namespace curseval {

struct CorpusFile {
    std::string name;        // stable identifier, used in sample ids
    std::string text;        // tab-expanded source text
    std::string image_path;  // rendered screenshot for this file
};

struct Composition {
    int character = 171;
    int word = 48;
    int line = 38;

    int total() const { return character + word + line; }
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace gen_detail {

inline bool plain_char(char c) { return c > 0x20 && c <= 0x7E && c != '\''; }

struct Candidate {
    std::size_t file = 0;
    CursorStop stop;
    std::string instruction;
};

// All character-boundary candidates whose instruction resolves uniquely.
inline std::vector<Candidate> character_candidates(const std::vector<CorpusFile>& corpus) {
    std::vector<Candidate> out;
    for (std::size_t f = 0; f < corpus.size(); ++f) {
        auto lines = split_lines(corpus[f].text);
        for (std::size_t l = 0; l < lines.size(); ++l) {
            const auto& line = lines[l];
            for (std::size_t c = 1; c < line.size(); ++c) {
                char left = line[c - 1], right = line[c];
                if (!plain_char(left) || !plain_char(right)) continue;
                auto pairs = instr_detail::find_pairs(line, left, right);
                std::optional<int> occurrence;
                if (pairs.size() > 1) {
                    auto it = std::find(pairs.begin(), pairs.end(), int(c));
                    occurrence = int(it - pairs.begin()) + 1;
                }
                out.push_back({f, {int(l), int(c)},
                               character_instruction(left, right, int(l) + 1, occurrence)});
            }
        }
    }
    return out;
}

inline std::vector<Candidate> word_candidates(const std::vector<CorpusFile>& corpus) {
    std::vector<Candidate> out;
    auto is_word_char = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
    };
    for (std::size_t f = 0; f < corpus.size(); ++f) {
        auto lines = split_lines(corpus[f].text);
        for (std::size_t l = 0; l < lines.size(); ++l) {
            const auto& line = lines[l];
            std::size_t i = 0;
            while (i < line.size()) {
                if (!is_word_char(line[i]) || (line[i] >= '0' && line[i] <= '9')) {
                    ++i;
                    continue;
                }
                std::size_t start = i;
                while (i < line.size() && is_word_char(line[i])) ++i;
                std::string word = line.substr(start, i - start);
                auto hits = instr_detail::find_words(line, word);
                std::optional<int> occurrence;
                if (hits.size() > 1) {
                    for (std::size_t k = 0; k < hits.size(); ++k)
                        if (hits[k].col == int(start)) occurrence = int(k) + 1;
                }
                out.push_back(
                    {f, {int(l), int(start)}, word_instruction(word, int(l) + 1, occurrence)});
            }
        }
    }
    return out;
}

inline std::vector<Candidate> line_candidates(const std::vector<CorpusFile>& corpus) {
    std::vector<Candidate> out;
    for (std::size_t f = 0; f < corpus.size(); ++f) {
        auto lines = split_lines(corpus[f].text);
        for (std::size_t l = 0; l < lines.size(); ++l)
            out.push_back({f, {int(l), 0}, line_instruction(int(l) + 1)});
    }
    return out;
}

inline std::string pad4(int n) {
    std::string s = std::to_string(n);
    return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

}  // namespace gen_detail

// Draws `count` distinct candidates without replacement via a seeded shuffle.
inline std::vector<Sample> generate_dataset(const std::vector<CorpusFile>& corpus,
                                            const EditorLayout& layout,
                                            const Composition& composition, std::uint64_t seed) {
    if (corpus.empty()) throw GenerationError("generate_dataset: empty corpus");
    layout.validate();

    struct Group {
        Granularity granularity;
        int count;
        const char* label;
        std::vector<gen_detail::Candidate> candidates;
    };
    std::vector<Group> groups;
    groups.push_back({Granularity::character, composition.character, "character",
                      gen_detail::character_candidates(corpus)});
    groups.push_back(
        {Granularity::word, composition.word, "word", gen_detail::word_candidates(corpus)});
    groups.push_back(
        {Granularity::line, composition.line, "line", gen_detail::line_candidates(corpus)});

    std::vector<Sample> samples;
    for (auto& g : groups) {
        if (g.count < 0) throw GenerationError("generate_dataset: negative composition count");
        if (int(g.candidates.size()) < g.count)
            throw GenerationError(std::string("generate_dataset: corpus offers only ") +
                                  std::to_string(g.candidates.size()) + " unambiguous " + g.label +
                                  " targets, " + std::to_string(g.count) + " requested");
        SplitMix64 rng(derive_seed(seed, std::string("generate/") + g.label));
        // Fisher-Yates over candidate indices, take the first `count`.
        std::vector<std::size_t> order(g.candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[std::size_t(rng.bounded(i))]);

        for (int k = 0; k < g.count; ++k) {
            const auto& cand = g.candidates[order[std::size_t(k)]];
            const auto& file = corpus[cand.file];
            // Generator self-check: the instruction must resolve back to the
            // exact stop it was built from.
            auto resolved = resolve_instruction(cand.instruction, file.text);
            if (!resolved || !(*resolved == cand.stop))
                throw GenerationError("generate_dataset: ambiguous instruction: " +
                                      cand.instruction);
            PixelPoint gt = cursor_ground_truth(cand.stop.line, cand.stop.col, layout);
            Sample s;
            s.id = std::string(g.label) + "-" + gen_detail::pad4(k + 1);
            s.image_path = file.image_path;
            s.instruction = cand.instruction;
            s.granularity = g.granularity;
            s.image_width = layout.image_width;
            s.image_height = layout.image_height;
            NormalizedBox nb =
                normalize({gt.x, gt.y, gt.x, gt.y}, layout.image_width, layout.image_height);
            s.target = nb;
            samples.push_back(std::move(s));
        }
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const Sample& a, const Sample& b) { return a.id < b.id; });
    return samples;
}

}  // namespace curseval
