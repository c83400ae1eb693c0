#pragma once

// Implementations behind the CLI subcommands (generate / collect / eval /
// report). Kept as library functions so tests drive the same code paths as
// the binary.

#include <filesystem>
#include <memory>
#include <sstream>

#include "curseval/bridge.hpp"
#include "curseval/dataset_gen.hpp"
#include "curseval/engine.hpp"
#include "curseval/http_backend.hpp"
#include "curseval/report.hpp"

namespace curseval {

namespace fs = std::filesystem;

// ---- generate ----

struct GenerateOptions {
    std::string output_dir;
    std::vector<std::string> corpus_paths;
    EditorLayout layout;
    Composition composition;
    std::uint64_t seed = 0;
};

struct GenerateOutcome {
    std::string samples_path;
    std::string dataset_checksum;
    std::vector<Sample> samples;
};

inline GenerateOutcome cmd_generate(const GenerateOptions& options) {
    if (options.corpus_paths.empty()) throw ConfigError("generate: no corpus files given");
    auto started = iso8601_now();
    fs::create_directories(fs::path(options.output_dir) / "images");

    std::vector<CorpusFile> corpus;
    for (const auto& path : options.corpus_paths) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw ConfigError("generate: cannot read corpus file " + path);
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        if (!text.empty() && text.back() == '\n') text.pop_back();
        CorpusFile cf;
        cf.name = fs::path(path).stem().string();
        cf.text = expand_tabs(text);
        cf.image_path = "images/" + cf.name + ".png";
        save_png(render(cf.text, options.layout),
                 (fs::path(options.output_dir) / cf.image_path).string());
        corpus.push_back(std::move(cf));
    }

    GenerateOutcome out;
    out.samples = generate_dataset(corpus, options.layout, options.composition, options.seed);
    out.samples_path = (fs::path(options.output_dir) / "samples.jsonl").string();
    write_samples(out.samples_path, out.samples);
    out.dataset_checksum = file_checksum(out.samples_path);

    RunManifest manifest;
    manifest.seed = options.seed;
    manifest.dataset_path = out.samples_path;
    manifest.dataset_checksum = out.dataset_checksum;
    manifest.started_at = started;
    manifest.finished_at = iso8601_now();
    manifest.backend = "none";
    json corpus_info = json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i)
        corpus_info.push_back({{"name", corpus[i].name},
                               {"path", options.corpus_paths[i]},
                               {"checksum", file_checksum(options.corpus_paths[i])}});
    manifest.config = {
        {"command", "generate"},
        {"corpus", std::move(corpus_info)},
        {"composition",
         {{"character", options.composition.character},
          {"word", options.composition.word},
          {"line", options.composition.line}}},
        {"layout",
         {{"origin_x", options.layout.origin_x},
          {"origin_y", options.layout.origin_y},
          {"char_width", options.layout.char_width},
          {"line_height", options.layout.line_height},
          {"gutter_width", options.layout.gutter_width},
          {"image_width", options.layout.image_width},
          {"image_height", options.layout.image_height}}},
        {"seed", options.seed}};
    write_json_file((fs::path(options.output_dir) / "manifest.json").string(), to_json(manifest));
    return out;
}

// ---- collect ----

struct CollectOptions {
    CollectorConfig config;
    EditorLayout layout;
    WindowGeometry window_geometry{0, 0, 1344, 1344};
    double device_pixel_ratio = 1.0;
    int renderer_stall_ms = 0;  // test fixture: stall every measurement reply
};

struct CollectOutcome {
    CollectResult result;
    int rejected_connections = 0;
};

inline CollectOutcome cmd_collect(const CollectOptions& options) {
    options.config.validate();
    std::ifstream f(options.config.corpus_path, std::ios::binary);
    if (!f) throw ConfigError("collect: cannot read corpus file " + options.config.corpus_path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (!text.empty() && text.back() == '\n') text.pop_back();
    text = expand_tabs(text);

    fs::path out_path(options.config.output_path);
    fs::create_directories(out_path.parent_path().empty() ? "." : out_path.parent_path());
    std::string screenshot_path = out_path.string() + ".png";
    save_png(render(text, options.layout), screenshot_path);

    auto state = std::make_shared<RendererState>();
    state->layout = options.layout;
    state->window_geometry = options.window_geometry;
    state->device_pixel_ratio = options.device_pixel_ratio;
    state->fault_rate = options.config.fault_rate;
    state->fault_seed = options.config.fault_seed;
    state->stall_ms = options.renderer_stall_ms;

    BridgeServer bridge(options.config.port);
    bridge.start();
    RendererSim renderer(state, bridge.port());
    renderer.start();
    if (!bridge.wait_for_client(3000)) throw TransportError("collect: renderer never connected");

    std::string file_id = fs::path(options.config.corpus_path).stem().string();
    CollectOutcome out;
    out.result = collect_file(bridge, *state, options.config, file_id, text, screenshot_path);
    write_collect_result(options.config.output_path, out.result);
    renderer.stop();
    bridge.stop();
    out.rejected_connections = bridge.rejected_connections();
    return out;
}

// ---- eval ----

// Backend spec grammar: "http" | "mock:perfect" | "mock:offset:<dx>,<dy>" |
// "mock:noise:<sigma>[,<sigma>...]" | "mock:feedback:<dx>,<dy>,<gamma>" |
// "mock:parse_breaker".
inline std::unique_ptr<Backend> make_backend(const std::string& spec,
                                             const HttpBackendConfig& http_config,
                                             std::uint64_t seed) {
    auto parse_doubles = [](const std::string& s) {
        std::vector<double> out;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
        return out;
    };
    if (spec == "http") return std::make_unique<HttpBackend>(http_config);
    if (spec.rfind("mock:", 0) != 0) throw ConfigError("unknown backend spec: " + spec);
    std::string rest = spec.substr(5);
    MockOracleConfig mc;
    mc.seed = seed;
    if (rest == "perfect") {
        mc.kind = MockOracleConfig::Kind::perfect;
    } else if (rest == "parse_breaker") {
        mc.kind = MockOracleConfig::Kind::parse_breaker;
    } else if (rest.rfind("offset:", 0) == 0) {
        auto v = parse_doubles(rest.substr(7));
        if (v.size() != 2) throw ConfigError("mock:offset needs dx,dy");
        mc.kind = MockOracleConfig::Kind::constant_offset;
        mc.offset = {v[0], v[1]};
    } else if (rest.rfind("noise:", 0) == 0) {
        auto v = parse_doubles(rest.substr(6));
        if (v.empty()) throw ConfigError("mock:noise needs at least one sigma");
        mc.kind = MockOracleConfig::Kind::seeded_noise;
        mc.noise_sigma = v;
    } else if (rest.rfind("feedback:", 0) == 0) {
        auto v = parse_doubles(rest.substr(9));
        if (v.size() != 3) throw ConfigError("mock:feedback needs dx,dy,gamma");
        mc.kind = MockOracleConfig::Kind::feedback_aware;
        mc.offset = {v[0], v[1]};
        mc.gamma = v[2];
    } else {
        throw ConfigError("unknown backend spec: " + spec);
    }
    return std::make_unique<MockBackend>(mc);
}

struct EvalOptions {
    std::string dataset_path;
    std::string backend_spec = "mock:perfect";
    HttpBackendConfig http;
    HarnessConfig harness;
    std::string prompt_dir = "prompts";
    std::string output_dir;
};

struct EvalOutcome {
    EvalRunResult run;
    std::string table;
    std::string metrics_path;
    std::string traces_path;
};

inline EvalOutcome cmd_eval(const EvalOptions& options) {
    options.harness.validate();
    auto started = iso8601_now();
    auto prompts = PromptLibrary::load(options.prompt_dir);
    auto file = read_samples(options.dataset_path);
    if (!file.errors.empty()) {
        std::string msg = "eval: dataset has malformed lines:";
        for (const auto& e : file.errors)
            msg += " line " + std::to_string(e.line_number) + " (" + e.message + ")";
        throw SchemaError(msg);
    }
    if (file.samples.empty()) throw SchemaError("eval: dataset is empty");

    // Relative image paths resolve against the dataset file's directory.
    fs::path dataset_dir = fs::path(options.dataset_path).parent_path();
    auto samples = file.samples;
    for (auto& s : samples) {
        fs::path p(s.image_path);
        if (p.is_relative()) s.image_path = (dataset_dir / p).string();
    }

    auto backend = make_backend(options.backend_spec, options.http,
                                derive_seed(options.harness.seed, "backend"));

    HarnessConfig harness = options.harness;
    fs::create_directories(options.output_dir);
    if (harness.save_turn_images) {
        harness.turn_image_dir = (fs::path(options.output_dir) / "turns").string();
        fs::create_directories(harness.turn_image_dir);
    }

    ImageCache images;
    EvalOutcome out;
    out.run = run_eval(samples, *backend, harness, prompts, images);

    out.traces_path = (fs::path(options.output_dir) / "traces.jsonl").string();
    out.metrics_path = (fs::path(options.output_dir) / "metrics.json").string();
    write_traces(out.traces_path, out.run.traces);
    write_json_file(out.metrics_path, to_json(out.run.metrics));

    out.table = format_report_table(
        {{harness.system_prompt_variant, backend->name(), out.run.metrics}});
    {
        std::ofstream rf((fs::path(options.output_dir) / "report.txt").string());
        rf << out.table;
    }

    RunManifest manifest;
    manifest.seed = harness.seed;
    manifest.dataset_path = options.dataset_path;
    manifest.dataset_checksum = file_checksum(options.dataset_path);
    manifest.prompt_checksums = prompts.checksums();
    manifest.backend = backend->name();
    manifest.started_at = started;
    manifest.finished_at = iso8601_now();
    manifest.config = {{"command", "eval"},
                       {"dataset", options.dataset_path},
                       {"backend", options.backend_spec},
                       {"model", options.http.model},
                       {"endpoint", options.http.endpoint},
                       {"api_key_env", options.http.api_key_env},
                       {"system_prompt", harness.system_prompt_variant},
                       {"feedback_template", harness.feedback_template},
                       {"max_turns", harness.max_turns},
                       {"tolerance_x", harness.tolerance_x},
                       {"tolerance_y", harness.tolerance_y},
                       {"parallelism", harness.parallelism},
                       {"save_turn_images", harness.save_turn_images},
                       {"seed", harness.seed}};
    write_json_file((fs::path(options.output_dir) / "manifest.json").string(), to_json(manifest));
    return out;
}

// ---- report ----

inline MetricsSummary metrics_summary_from_json(const json& j) {
    MetricsSummary m;
    m.n_samples = j.at("n_samples").get<long>();
    m.infrastructure_failed = j.at("infrastructure_failed").get<long>();
    for (const auto& t : j.at("per_turn")) {
        TurnMetrics tm;
        tm.turn = t.at("turn").get<int>();
        tm.accuracy = t.at("accuracy").get<double>();
        tm.mean_dist_box = t.at("mean_dist_box").get<double>();
        tm.mean_dist_center = t.at("mean_dist_center").get<double>();
        tm.distance_count = t.at("distance_count").get<long>();
        tm.accuracy_character = t.at("accuracy_character").get<double>();
        tm.accuracy_word = t.at("accuracy_word").get<double>();
        tm.accuracy_line = t.at("accuracy_line").get<double>();
        m.per_turn.push_back(tm);
    }
    m.any_turn_hit_rate = j.at("any_turn_hit_rate").get<double>();
    if (!j.at("correction_rate").is_null())
        m.correction_rate = j.at("correction_rate").get<double>();
    m.parse_failure_rate = j.at("parse_failure_rate").get<double>();
    return m;
}

struct ComparisonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Merges eval run directories into one comparison table. All runs must have
// been produced from the same dataset (checksum-verified).
inline std::string cmd_report(const std::vector<std::string>& run_dirs) {
    if (run_dirs.empty()) throw ComparisonError("report: no run directories given");
    std::vector<ReportRow> rows;
    std::string dataset_checksum;
    for (const auto& dir : run_dirs) {
        auto manifest = manifest_from_json(read_json_file((fs::path(dir) / "manifest.json").string()));
        if (dataset_checksum.empty())
            dataset_checksum = manifest.dataset_checksum;
        else if (manifest.dataset_checksum != dataset_checksum)
            throw ComparisonError("report: run " + dir +
                                  " was produced from a different dataset (checksum mismatch)");
        ReportRow row;
        row.prompt = manifest.config.value("system_prompt", "?");
        row.model = manifest.backend;
        row.metrics =
            metrics_summary_from_json(read_json_file((fs::path(dir) / "metrics.json").string()));
        rows.push_back(std::move(row));
    }
    return format_report_table(rows);
}

}  // namespace curseval
