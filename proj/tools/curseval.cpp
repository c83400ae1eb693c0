// curseval command-line tool: generate / collect / eval / report.

#include <CLI11.hpp>

#include <iostream>

#include "curseval/cli_commands.hpp"

namespace {

using namespace curseval;

void add_layout_flags(CLI::App* cmd, EditorLayout& layout) {
    cmd->add_option("--origin-x", layout.origin_x, "text origin x in px");
    cmd->add_option("--origin-y", layout.origin_y, "text origin y in px");
    cmd->add_option("--char-width", layout.char_width, "monospace advance in px");
    cmd->add_option("--line-height", layout.line_height, "line height in px");
    cmd->add_option("--gutter-width", layout.gutter_width, "line-number gutter width in px");
    cmd->add_option("--image-width", layout.image_width, "canvas width in px");
    cmd->add_option("--image-height", layout.image_height, "canvas height in px");
}

int run(int argc, char** argv) {
    CLI::App app{"cursor-grounding evaluation harness"};
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI/TOML file");

    // ---- generate ----
    GenerateOptions gen;
    auto* cmd_gen = app.add_subcommand("generate", "render corpus screenshots and emit samples.jsonl");
    cmd_gen->add_option("--corpus", gen.corpus_paths, "corpus source files")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_gen->add_option("--output-dir", gen.output_dir, "dataset output directory")->required();
    cmd_gen->add_option("--characters", gen.composition.character, "character-level sample count");
    cmd_gen->add_option("--words", gen.composition.word, "word-level sample count");
    cmd_gen->add_option("--lines", gen.composition.line, "line-level sample count");
    cmd_gen->add_option("--seed", gen.seed, "generation seed");
    add_layout_flags(cmd_gen, gen.layout);

    // ---- collect ----
    CollectOptions col;
    auto* cmd_col = app.add_subcommand("collect", "traverse a file over the renderer bridge");
    cmd_col->add_option("--corpus", col.config.corpus_path, "source file to traverse")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_col->add_option("--output", col.config.output_path, "collection JSONL output path")
        ->required();
    cmd_col->add_option("--port", col.config.port, "bridge WebSocket port (0 = ephemeral)");
    cmd_col->add_option("--settle-delay-ms", col.config.settle_delay_ms,
                        "wait after each cursor move before measuring");
    cmd_col->add_option("--request-timeout-ms", col.config.request_timeout_ms,
                        "per-request bridge timeout");
    cmd_col->add_option("--eof-repeat-threshold", col.config.eof_repeat_threshold,
                        "identical positions in a row that signal end of file");
    cmd_col->add_option("--fault-rate", col.config.fault_rate,
                        "injected measurement fault probability [0,1]");
    cmd_col->add_option("--fault-seed", col.config.fault_seed, "fault injection seed");
    cmd_col->add_option("--device-pixel-ratio", col.device_pixel_ratio, "renderer DPR");
    cmd_col->add_option("--window-screen-x", col.window_geometry.screen_x,
                        "window origin on screen, x");
    cmd_col->add_option("--window-screen-y", col.window_geometry.screen_y,
                        "window origin on screen, y");
    add_layout_flags(cmd_col, col.layout);

    // ---- eval ----
    EvalOptions ev;
    auto* cmd_ev = app.add_subcommand("eval", "run the multi-turn feedback loop over a dataset");
    cmd_ev->add_option("--dataset", ev.dataset_path, "samples.jsonl path")
        ->required()
        ->check(CLI::ExistingFile);
    cmd_ev->add_option("--output-dir", ev.output_dir, "run output directory")->required();
    cmd_ev->add_option("--backend", ev.backend_spec,
                       "http | mock:perfect | mock:offset:dx,dy | mock:noise:s1[,s2...] | "
                       "mock:feedback:dx,dy,gamma | mock:parse_breaker");
    cmd_ev->add_option("--endpoint", ev.http.endpoint, "chat completions endpoint URL");
    cmd_ev->add_option("--model", ev.http.model, "model name sent to the endpoint");
    cmd_ev->add_option("--api-key-env", ev.http.api_key_env,
                       "environment variable holding the API key");
    cmd_ev->add_option("--max-attempts", ev.http.max_attempts, "HTTP retry budget");
    cmd_ev->add_option("--requests-per-second", ev.http.requests_per_second,
                       "client-side rate limit (0 = off)");
    cmd_ev->add_option("--max-turns", ev.harness.max_turns, "feedback turns per sample");
    cmd_ev->add_option("--tolerance-x", ev.harness.tolerance_x, "hit tolerance, x (px)");
    cmd_ev->add_option("--tolerance-y", ev.harness.tolerance_y, "hit tolerance, y (px)");
    cmd_ev->add_option("--system-prompt", ev.harness.system_prompt_variant,
                       "system prompt variant name");
    cmd_ev->add_option("--feedback-template", ev.harness.feedback_template,
                       "feedback template name (baseline | spatial)");
    cmd_ev->add_option("--parallelism", ev.harness.parallelism, "concurrent sample workers");
    cmd_ev->add_flag("--save-turn-images", ev.harness.save_turn_images,
                     "write every marked turn image under <output-dir>/turns/");
    cmd_ev->add_option("--seed", ev.harness.seed, "run seed");
    cmd_ev->add_option("--prompt-dir", ev.prompt_dir, "directory holding prompt text files");

    // ---- report ----
    std::vector<std::string> run_dirs;
    auto* cmd_rep = app.add_subcommand("report", "merge eval runs into one comparison table");
    cmd_rep->add_option("runs", run_dirs, "eval output directories")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_gen->parsed()) {
        auto out = cmd_generate(gen);
        std::cout << "wrote " << out.samples.size() << " samples to " << out.samples_path
                  << " (sha1 " << out.dataset_checksum << ")\n";
    } else if (cmd_col->parsed()) {
        auto out = cmd_collect(col);
        std::cout << "recorded " << out.result.records.size() << " cursor stops to "
                  << col.config.output_path << " (faults skipped: " << out.result.skipped_faults
                  << ", timeouts: " << out.result.timeouts << ")\n";
        for (const auto& line : out.result.log) std::cerr << line << "\n";
        if (out.result.truncated) {
            std::cerr << "collection truncated: " << out.result.truncation_reason << "\n";
            return 2;
        }
    } else if (cmd_ev->parsed()) {
        auto out = cmd_eval(ev);
        std::cout << out.table;
        std::cout << "metrics: " << out.metrics_path << "\ntraces:  " << out.traces_path << "\n";
    } else if (cmd_rep->parsed()) {
        std::cout << cmd_report(run_dirs);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
