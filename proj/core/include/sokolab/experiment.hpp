#pragma once

// Batch experiment layer behind the CLI.
//
// Config files are flat key = value text ('#' or ';' comments). Recognized
// keys: corpus, output, eval, weight, beta, dropout, sigma, seed, budget,
// runs, schedule (none|fixed|luby), cutoff, scale, jobs, checkpoints
// (comma-separated), wall_times. CLI flags override file values.
//
// Seeds derive per (instance index, run id) through the splittable scheme in
// rng.hpp: run_key = derive_key(seed, instance, run), and scheduled attempts
// extend the chain with the attempt index. Records are emitted in (instance,
// run) order whatever the job count, so output bytes never depend on threading.
// Wall-clock timings are nondeterministic and therefore stay out of the JSONL
// unless wall_times is set; timing goes to stderr instead.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sokolab/board.hpp"
#include "sokolab/oracle.hpp"
#include "sokolab/restart.hpp"
#include "sokolab/search.hpp"

namespace sokolab {

inline const std::vector<std::uint64_t> kDefaultCheckpoints{1000, 2000, 4000, 8000, 16000, 32000};

struct ExperimentConfig {
    std::string corpus_path;
    std::string output_path;
    EvalFunction eval{EvalVariant::Ours, 1.0};
    OracleConfig oracle; // beta, dropout, sigma, seed
    std::uint64_t budget = 1000;
    std::uint32_t runs_per_instance = 1;
    RestartSchedule schedule = RestartSchedule::none();
    std::uint32_t jobs = 1;
    std::vector<std::uint64_t> checkpoints = kDefaultCheckpoints;
    bool wall_times = false;
    bool seed_set = false; // seeds never default to entropy; experiments demand one
};

// Parses a config file; unknown keys raise UsageError, as does a missing file.
ExperimentConfig load_config_file(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct ResultRecord {
    std::uint32_t instance = 0;
    std::uint32_t run = 0;
    std::string eval;
    double weight = 1.0;
    std::uint64_t seed = 0;   // the derived run key
    std::uint64_t budget = 0; // cap M the run was granted
    std::uint64_t cost = 0;   // expansions consumed, <= budget
    bool solved = false;
    std::optional<std::uint64_t> plan_length; // present iff solved
    std::optional<double> wall_millis;        // only with wall_times
};

std::string record_to_json(const ResultRecord& r);
ResultRecord record_from_json(const std::string& line); // throws UsageError

void write_jsonl(const std::string& path, std::span<const ResultRecord> records);
std::vector<ResultRecord> read_jsonl(const std::string& path);

struct ExperimentOutput {
    std::vector<ResultRecord> records; // (instance, run) order
    std::string summary_json;
};

struct SkippedLevel {
    std::size_t index = 0;
    std::string error;
};

// Runs the full corpus; per-instance failures are reported in the summary's
// "skipped" list rather than aborting the batch.
ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::span<const Board> corpus,
                                std::span<const SkippedLevel> skipped = {});

// Collection loader that records malformed levels instead of throwing.
struct LoadedCorpus {
    std::vector<Board> boards;
    std::vector<SkippedLevel> skipped;
};

LoadedCorpus load_corpus_lenient(const std::string& path);

// Per-instance restart statistics from experiment records. Instances with no
// solved run get null t_S/l_S and a raised flag instead of an error.
struct InstanceRestartStats {
    std::uint32_t instance = 0;
    std::size_t runs = 0;
    std::size_t solved = 0;
    double mean_cost = 0.0;
    std::optional<std::uint64_t> t_s;
    std::optional<double> l_s;
    double l_univ = 0.0;
    bool no_solved_runs = false;
};

std::vector<InstanceRestartStats> restart_stats_from_records(std::span<const ResultRecord> records,
                                                             std::uint64_t luby_scale = 1);
std::string restart_stats_csv(std::span<const InstanceRestartStats> stats);

// Random solvable levels for experiments: bordered w x h grids with sprinkled
// interior walls, rejection-sampled until the brute-force oracle solves them
// with a plan of at least min_plan moves.
struct CorpusGenConfig {
    std::uint32_t count = 10;
    int width = 7;  // full grid, outer walls included; at most 8
    int height = 7; // at most 8
    std::uint32_t boxes = 2; // 1..3
    std::uint64_t seed = 0;
    std::uint64_t min_plan = 1;
    std::size_t min_visited = 0; // floor on brute-force states, filters trivial layouts
    double wall_prob = 0.15;
    std::size_t oracle_max_states = 200000;
    std::uint64_t max_attempts = 0; // 0: 10000 * count
};

std::vector<Board> generate_corpus(const CorpusGenConfig& cfg); // UsageError, GenerationTimeout
std::string corpus_to_text(std::span<const Board> corpus);
std::vector<Board> load_corpus_file(const std::string& path);

// Sokoban adapter for n_restart_experiment: each run searches under the
// per-run budget with run key derive_key(seed, instance, run).
std::vector<InstanceRunner> corpus_runners(std::span<const Board> corpus, EvalFunction eval,
                                           const OracleConfig& cfg);

} // namespace sokolab
