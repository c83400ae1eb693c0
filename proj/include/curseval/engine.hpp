#pragma once

// The T-turn prediction/refinement loop and the cumulative metric suite.
// Turn 1 sends the clean screenshot; every later turn redraws the red cross
// on a clean copy at the previous coordinate and sends the feedback
// template plus "Last attempt: [x, y]". A sample's loop stops at its first
// hit.

#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "curseval/backend.hpp"
#include "curseval/geometry.hpp"
#include "curseval/image.hpp"
#include "curseval/overlay.hpp"
#include "curseval/prompts.hpp"
#include "curseval/rng.hpp"
#include "curseval/schema.hpp"

namespace curseval {

struct HarnessConfig {
    int max_turns = 2;
    double tolerance_x = 4.0;  // half the default layout char_width
    double tolerance_y = 9.0;  // half the default layout line_height
    std::string system_prompt_variant = "baseline_cot";
    std::string feedback_template = "baseline";
    int parallelism = 1;
    bool save_turn_images = false;
    std::string turn_image_dir;
    OverlaySpec overlay;
    std::uint64_t seed = 0;

    void validate() const {
        if (max_turns < 1) throw std::invalid_argument("HarnessConfig: max_turns must be >= 1");
        if (tolerance_x < 0 || tolerance_y < 0)
            throw std::invalid_argument("HarnessConfig: tolerances must be >= 0");
        if (parallelism < 1) throw std::invalid_argument("HarnessConfig: parallelism must be >= 1");
        overlay.validate();
    }
};

struct TurnRecord {
    int turn_index = 0;  // 1-based
    std::string prompt_messages_digest;
    ParseOutcome parse;
    std::optional<PixelPoint> point;
    bool hit = false;
    double dist_box = std::numeric_limits<double>::quiet_NaN();
    double dist_center = std::numeric_limits<double>::quiet_NaN();
    long latency_ms = 0;
};

struct EvalTrace {
    std::string sample_id;
    Granularity granularity = Granularity::character;
    std::vector<TurnRecord> turns;
    std::optional<int> first_hit_turn;
    bool infrastructure_failed = false;
    std::string failure_reason;

    std::string terminal_status() const {
        return infrastructure_failed ? "infrastructure_failed"
                                     : (first_hit_turn ? "hit" : "exhausted");
    }
};

struct TurnMetrics {
    int turn = 0;
    double accuracy = 0.0;
    double mean_dist_box = 0.0;
    double mean_dist_center = 0.0;
    long distance_count = 0;  // samples contributing to the distance means
    double accuracy_character = 0.0;
    double accuracy_word = 0.0;
    double accuracy_line = 0.0;
};

struct MetricsSummary {
    long n_samples = 0;  // scored samples (infrastructure failures excluded)
    long infrastructure_failed = 0;
    std::vector<TurnMetrics> per_turn;
    double any_turn_hit_rate = 0.0;
    std::optional<double> correction_rate;  // nullopt when no sample missed turn 1
    double parse_failure_rate = 0.0;
};

namespace engine_detail {

inline std::string digest_messages(const std::vector<ChatTurn>& history) {
    // Credential-free: covers roles, texts, and image bytes only.
    Sha1 h;
    for (const auto& t : history) {
        h.update(to_string(t.role));
        h.update("\x1f");
        h.update(t.text);
        h.update("\x1f");
        if (t.image_png) h.update(*t.image_png);
        h.update("\x1e");
    }
    auto d = h.finish();
    return to_hex(d.data(), d.size());
}

}  // namespace engine_detail

// One scored prediction: parse, hit rule, both distances.
inline TurnRecord score_turn(int turn_index, const std::string& raw_text, const PixelBox& target,
                             const HarnessConfig& config) {
    TurnRecord rec;
    rec.turn_index = turn_index;
    rec.parse = extract_decision(raw_text);
    if (rec.parse.status == ParseStatus::parsed) {
        rec.point = rec.parse.point;
        auto d = distances(*rec.point, target);
        rec.dist_box = d.to_box;
        rec.dist_center = d.to_center;
        rec.hit = hit_test(*rec.point, target, config.tolerance_x, config.tolerance_y);
    }
    return rec;
}

// Caches decoded images and their encoded PNG bytes per path; shared across
// sample workers.
class ImageCache {
public:
    struct Entry {
        Image image;
        std::shared_ptr<const std::string> png;
    };

    std::shared_ptr<const Entry> get(const std::string& path) {
        {
            std::lock_guard lock(mu_);
            auto it = cache_.find(path);
            if (it != cache_.end()) return it->second;
        }
        auto entry = std::make_shared<Entry>();
        entry->image = load_png(path);
        entry->png = std::make_shared<const std::string>(encode_png(entry->image));
        std::lock_guard lock(mu_);
        return cache_.emplace(path, std::move(entry)).first->second;
    }

private:
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<const Entry>> cache_;
};

inline EvalTrace run_sample(const Sample& sample, Backend& backend, const HarnessConfig& config,
                            const PromptLibrary& prompts, const ImageCache::Entry& clean) {
    EvalTrace trace;
    trace.sample_id = sample.id;
    trace.granularity = sample.granularity;

    const PixelBox target =
        denormalize(sample.target, sample.image_width, sample.image_height);
    const std::uint64_t sample_seed = derive_seed(config.seed, "sample", fnv1a64(sample.id));

    std::vector<ChatTurn> history;
    history.push_back({Role::system,
                       prompts.render_system(config.system_prompt_variant, sample.image_width,
                                             sample.image_height),
                       nullptr});
    history.push_back({Role::user, sample.instruction, clean.png});

    // Cross position carried between turns; a parse-failure turn passes its
    // predecessor's cross forward, and a turn-1 failure falls back to the
    // image center so the loop still shows a marker.
    long cross_x = sample.image_width / 2;
    long cross_y = sample.image_height / 2;
    std::string last_raw;

    for (int turn = 1; turn <= config.max_turns; ++turn) {
        if (turn > 1) {
            auto marked = mark(clean.image, {double(cross_x), double(cross_y)}, config.overlay);
            cross_x = marked.center_x;
            cross_y = marked.center_y;
            auto marked_png = std::make_shared<const std::string>(encode_png(marked.image));
            if (config.save_turn_images && !config.turn_image_dir.empty())
                save_png(marked.image, config.turn_image_dir + "/" + sample.id + "_turn" +
                                           std::to_string(turn) + ".png");
            history.push_back({Role::assistant, last_raw, nullptr});
            std::string feedback =
                prompts.render_feedback(config.feedback_template, cross_x, cross_y);
            feedback += "\nLast attempt: [" + std::to_string(cross_x) + ", " +
                        std::to_string(cross_y) + "]";
            history.push_back({Role::user, std::move(feedback), marked_png});
        }

        ChatRequest request;
        request.history = history;
        request.sample = &sample;
        request.hidden_target = target.center();
        request.turn_index = turn;
        request.sample_seed = sample_seed;

        std::string raw;
        auto start = std::chrono::steady_clock::now();
        try {
            raw = backend.complete(request);
        } catch (const TransportError& e) {
            trace.infrastructure_failed = true;
            trace.failure_reason = e.what();
            return trace;
        }
        TurnRecord rec = score_turn(turn, raw, target, config);
        rec.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        rec.prompt_messages_digest = engine_detail::digest_messages(history);
        last_raw = raw;
        if (rec.point) {
            cross_x = round_half_away(rec.point->x);
            cross_y = round_half_away(rec.point->y);
        }
        bool is_hit = rec.hit;
        trace.turns.push_back(std::move(rec));
        if (is_hit) {
            trace.first_hit_turn = turn;
            break;  // early stopping on first hit
        }
    }
    return trace;
}

// Cumulative multi-turn semantics: a hit at turn t counts for every later
// turn; never-hit samples carry their final attempt's distances forward.
inline MetricsSummary aggregate(const std::vector<EvalTrace>& traces, const HarnessConfig& config) {
    if (traces.empty()) throw std::invalid_argument("aggregate: empty trace set");

    MetricsSummary out;
    std::vector<const EvalTrace*> scored;
    for (const auto& t : traces) {
        if (t.infrastructure_failed)
            ++out.infrastructure_failed;
        else
            scored.push_back(&t);
    }
    out.n_samples = long(scored.size());
    if (scored.empty()) throw std::invalid_argument("aggregate: all samples failed infrastructure");

    long total_turns = 0, failed_turns = 0;
    for (const auto* t : scored)
        for (const auto& rec : t->turns) {
            ++total_turns;
            if (rec.parse.status == ParseStatus::parse_failure) ++failed_turns;
        }
    out.parse_failure_rate = total_turns == 0 ? 0.0 : double(failed_turns) / double(total_turns);

    long n_char = 0, n_word = 0, n_line = 0;
    for (const auto* t : scored) {
        if (t->granularity == Granularity::character) ++n_char;
        if (t->granularity == Granularity::word) ++n_word;
        if (t->granularity == Granularity::line) ++n_line;
    }

    for (int turn = 1; turn <= config.max_turns; ++turn) {
        TurnMetrics tm;
        tm.turn = turn;
        long hits = 0, hits_char = 0, hits_word = 0, hits_line = 0;
        double sum_box = 0.0, sum_center = 0.0;
        for (const auto* t : scored) {
            if (t->first_hit_turn && *t->first_hit_turn <= turn) {
                ++hits;
                if (t->granularity == Granularity::character) ++hits_char;
                if (t->granularity == Granularity::word) ++hits_word;
                if (t->granularity == Granularity::line) ++hits_line;
            }
            if (t->turns.empty()) continue;
            const auto& rec = t->turns[std::size_t(std::min<long>(turn, long(t->turns.size())) - 1)];
            if (rec.parse.status == ParseStatus::parsed) {
                sum_box += rec.dist_box;
                sum_center += rec.dist_center;
                ++tm.distance_count;
            }
        }
        tm.accuracy = double(hits) / double(scored.size());
        tm.accuracy_character = n_char ? double(hits_char) / double(n_char) : 0.0;
        tm.accuracy_word = n_word ? double(hits_word) / double(n_word) : 0.0;
        tm.accuracy_line = n_line ? double(hits_line) / double(n_line) : 0.0;
        if (tm.distance_count > 0) {
            tm.mean_dist_box = sum_box / double(tm.distance_count);
            tm.mean_dist_center = sum_center / double(tm.distance_count);
        }
        out.per_turn.push_back(tm);
    }

    out.any_turn_hit_rate = out.per_turn.back().accuracy;

    long missed_turn1 = 0, corrected = 0;
    for (const auto* t : scored) {
        bool hit_turn1 = t->first_hit_turn && *t->first_hit_turn == 1;
        if (hit_turn1) continue;
        ++missed_turn1;
        if (t->first_hit_turn && *t->first_hit_turn >= 2) ++corrected;
    }
    if (missed_turn1 > 0) out.correction_rate = double(corrected) / double(missed_turn1);
    return out;
}

struct EvalRunResult {
    std::vector<EvalTrace> traces;  // in sample order
    MetricsSummary metrics;
};

inline EvalRunResult run_eval(const std::vector<Sample>& samples, Backend& backend,
                              const HarnessConfig& config, const PromptLibrary& prompts,
                              ImageCache& images) {
    config.validate();
    if (samples.empty()) throw std::invalid_argument("run_eval: no samples");

    std::vector<EvalTrace> traces(samples.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;

    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= samples.size()) return;
            try {
                auto clean = images.get(samples[i].image_path);
                traces[i] = run_sample(samples[i], backend, config, prompts, *clean);
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    int workers = std::min<int>(config.parallelism, int(samples.size()));
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    EvalRunResult result;
    result.metrics = aggregate(traces, config);
    result.traces = std::move(traces);
    return result;
}

// ---- serialization ----

inline json to_json(const TurnRecord& r) {
    json j{{"turn_index", r.turn_index},
           {"prompt_messages_digest", r.prompt_messages_digest},
           {"parse_status", r.parse.status == ParseStatus::parsed ? "parsed" : "parse_failure"},
           {"raw_text", r.parse.raw_text},
           {"hit", r.hit},
           {"latency_ms", r.latency_ms}};
    if (r.point) {
        j["point"] = {{"x", r.point->x}, {"y", r.point->y}};
        j["dist_box"] = r.dist_box;
        j["dist_center"] = r.dist_center;
    } else {
        j["point"] = nullptr;
        j["dist_box"] = nullptr;
        j["dist_center"] = nullptr;
    }
    return j;
}

inline json to_json(const EvalTrace& t) {
    json turns = json::array();
    for (const auto& rec : t.turns) turns.push_back(to_json(rec));
    json j{{"sample_id", t.sample_id},
           {"granularity", to_string(t.granularity)},
           {"turns", std::move(turns)},
           {"terminal_status", t.terminal_status()}};
    j["first_hit_turn"] = t.first_hit_turn ? json(*t.first_hit_turn) : json(nullptr);
    if (t.infrastructure_failed) j["failure_reason"] = t.failure_reason;
    return j;
}

inline json to_json(const MetricsSummary& m) {
    json per_turn = json::array();
    for (const auto& t : m.per_turn) {
        per_turn.push_back({{"turn", t.turn},
                            {"accuracy", t.accuracy},
                            {"mean_dist_box", t.mean_dist_box},
                            {"mean_dist_center", t.mean_dist_center},
                            {"distance_count", t.distance_count},
                            {"accuracy_character", t.accuracy_character},
                            {"accuracy_word", t.accuracy_word},
                            {"accuracy_line", t.accuracy_line}});
    }
    json j{{"n_samples", m.n_samples},
           {"infrastructure_failed", m.infrastructure_failed},
           {"per_turn", std::move(per_turn)},
           {"any_turn_hit_rate", m.any_turn_hit_rate},
           {"parse_failure_rate", m.parse_failure_rate}};
    j["correction_rate"] = m.correction_rate ? json(*m.correction_rate) : json(nullptr);
    return j;
}

inline void write_traces(const std::string& path, const std::vector<EvalTrace>& traces) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path);
    for (const auto& t : traces) f << to_json(t).dump() << "\n";
}

}  // namespace curseval
