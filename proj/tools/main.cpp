#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sokolab/analysis.hpp"
#include "sokolab/board.hpp"
#include "sokolab/errors.hpp"
#include "sokolab/experiment.hpp"
#include "sokolab/restart.hpp"
#include "sokolab/search.hpp"
#include "sokolab/treemodel.hpp"

using nlohmann::ordered_json;
using namespace sokolab;

namespace {

enum ExitCode : int { ExitOk = 0, ExitUsage = 1, ExitBudget = 2, ExitUnsolvable = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty())
        std::cout << text;
    else
        write_file(output_path, text);
}

// Flat key = value file shared by treemodel parameter files; same comment
// rules as experiment configs.
std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::istringstream in(read_file(path));
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#' || line[first] == ';') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("bad line in " + path + ": " + line);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

int cmd_solve(const std::string& level_path, int index, ExperimentConfig cfg, bool want_trace,
              const std::string& trace_path) {
    auto boards = parse_level_collection(read_file(level_path));
    if (index < 0 || static_cast<std::size_t>(index) >= boards.size())
        throw UsageError("level index " + std::to_string(index) + " out of range (file has " +
                         std::to_string(boards.size()) + " levels)");
    const Board& board = boards[static_cast<std::size_t>(index)];

    StochasticOracle oracle(board, cfg.oracle, derive_key(cfg.oracle.seed, 0));
    auto out = best_first_search(board, cfg.eval, oracle, cfg.budget, want_trace);

    if (want_trace && !trace_path.empty()) write_file(trace_path, trace_to_edge_list(out.trace));

    switch (out.status) {
        case SearchStatus::Solved: {
            std::string plan;
            for (Move m : out.plan) plan += move_letter(m);
            std::cout << "solved in " << out.expansions << " expansions\n";
            std::cout << "plan " << (plan.empty() ? "(empty)" : plan) << "\n";
            return ExitOk;
        }
        case SearchStatus::BudgetExhausted:
            std::cout << "budget exhausted after " << out.expansions << " expansions\n";
            return ExitBudget;
        case SearchStatus::ProvedUnsolvable:
            std::cout << "proved unsolvable after " << out.expansions << " expansions\n";
            return ExitUnsolvable;
    }
    return ExitUsage;
}

int cmd_experiment(const ExperimentConfig& cfg) {
    if (cfg.corpus_path.empty()) throw UsageError("experiment needs a corpus (corpus key or --corpus)");
    if (cfg.output_path.empty()) throw UsageError("experiment needs an output path (output key or --output)");
    auto loaded = load_corpus_lenient(cfg.corpus_path);
    auto out = run_experiment(cfg, loaded.boards, loaded.skipped);
    write_jsonl(cfg.output_path, out.records);
    std::cout << out.summary_json << "\n";
    return ExitOk;
}

int cmd_restart_stats(const std::string& jsonl_path, std::uint64_t scale,
                      const std::string& output_path) {
    auto records = read_jsonl(jsonl_path);
    auto stats = restart_stats_from_records(records, scale);
    emit(output_path, restart_stats_csv(stats));
    return ExitOk;
}

ordered_json theorem1_json(const Theorem1Report& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["n"] = r.n;
        row["k"] = r.k;
        row["planLength"] = r.plan_length;
        row["polyThreshold"] = r.poly_threshold;
        row["analytic"] = r.analytic;
        row["empirical"] = r.empirical;
        row["ciHalfwidth"] = r.ci_halfwidth;
        row["withinCi"] = r.within_ci;
        rows.push_back(row);
    }
    ordered_json j;
    j["rows"] = rows;
    j["allWithinCi"] = report.all_within_ci;
    j["strictlyDecreasing"] = report.strictly_decreasing;
    return j;
}

ordered_json theorem2_json(const Theorem2Report& report) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : report.rows) {
        ordered_json row;
        row["n"] = r.n;
        row["tS"] = r.t_s;
        row["lS"] = r.l_s;
        row["meanCost"] = r.mean_cost;
        row["wrongSubtreeCost"] = r.wrong_subtree_cost;
        row["pPoly"] = r.p_poly;
        rows.push_back(row);
    }
    ordered_json j;
    j["rows"] = rows;
    j["slope"] = report.slope;
    j["intercept"] = report.intercept;
    j["r2"] = report.r2;
    j["meanTracksExponential"] = report.mean_tracks_exponential;
    return j;
}

std::string survival_csv(const RuntimeSample& sample) {
    auto sf = survival_function(sample);
    std::string csv = "cost,survival\n";
    char line[64];
    for (auto [cost, prob] : sf) {
        std::snprintf(line, sizeof line, "%llu,%.17g\n", static_cast<unsigned long long>(cost), prob);
        csv += line;
    }
    return csv;
}

int cmd_treemodel(const std::string& report, const LeftTailModelParams& left,
                  const RightTailModelParams& right, const std::vector<std::uint64_t>& grid,
                  std::uint64_t trials, std::uint64_t seed, const std::string& model,
                  const std::string& output_path) {
    if (report == "theorem1") {
        emit(output_path, theorem1_json(verify_theorem1(left, grid, trials, seed)).dump(2) + "\n");
    } else if (report == "theorem2") {
        emit(output_path, theorem2_json(verify_theorem2(left, grid, trials, seed)).dump(2) + "\n");
    } else if (report == "both") {
        ordered_json j;
        j["theorem1"] = theorem1_json(verify_theorem1(left, grid, trials, seed));
        j["theorem2"] = theorem2_json(verify_theorem2(left, grid, trials, seed));
        emit(output_path, j.dump(2) + "\n");
    } else if (report == "survival") {
        RuntimeSample sample = model == "right" ? sample_right_runtime(right, trials, seed)
                                                : sample_left_runtime(left, trials, seed);
        emit(output_path, survival_csv(sample));
    } else {
        throw UsageError("unknown report: " + report);
    }
    return ExitOk;
}

RuntimeSample sample_from_records(std::span<const ResultRecord> records) {
    RuntimeSample s;
    for (const auto& r : records) {
        s.costs.push_back(r.cost);
        s.solved.push_back(r.solved ? 1 : 0);
        s.cap = std::max(s.cap, r.budget);
    }
    return s;
}

int cmd_analyze_tails(const std::string& jsonl_path, double gamma, const std::string& output_path) {
    auto records = read_jsonl(jsonl_path);
    std::map<std::uint32_t, std::vector<ResultRecord>> per_instance;
    for (const auto& r : records) per_instance[r.instance].push_back(r);

    auto classification_json = [](const TailClassification& c) {
        ordered_json j;
        j["label"] = tail_label_name(c.label);
        j["unsolvedRatio"] = c.unsolved_ratio;
        if (c.alpha)
            j["alpha"] = *c.alpha;
        else
            j["alpha"] = nullptr;
        if (c.alpha_spread)
            j["alphaSpread"] = *c.alpha_spread;
        else
            j["alphaSpread"] = nullptr;
        j["plateauStable"] = c.plateau_stable;
        return j;
    };

    ordered_json instances = ordered_json::array();
    for (const auto& [instance, recs] : per_instance) {
        auto c = classify_tail(sample_from_records(recs), gamma);
        ordered_json row = classification_json(c);
        row["instance"] = instance;
        row["runs"] = recs.size();
        instances.push_back(row);
    }
    ordered_json j;
    j["overall"] = classification_json(classify_tail(sample_from_records(records), gamma));
    j["instances"] = instances;
    emit(output_path, j.dump(2) + "\n");
    return ExitOk;
}

int cmd_analyze_survival(const std::string& jsonl_path, const std::string& output_path) {
    auto records = read_jsonl(jsonl_path);
    emit(output_path, survival_csv(sample_from_records(records)));
    return ExitOk;
}

int cmd_analyze_subtrees(const std::string& trace_path, const std::string& output_path) {
    auto trace = trace_from_edge_list(read_file(trace_path));
    auto hist = dead_subtree_histogram(trace);
    ordered_json bins = ordered_json::array();
    for (auto [size, count] : hist.bins) {
        ordered_json row;
        row["size"] = size;
        row["count"] = count;
        bins.push_back(row);
    }
    ordered_json j;
    j["bins"] = bins;
    j["totalNodes"] = hist.total_nodes();
    emit(output_path, j.dump(2) + "\n");
    return ExitOk;
}

int cmd_analyze_deadends(const std::string& corpus_path, const OracleConfig& oracle,
                         std::size_t samples, std::size_t max_states,
                         const std::string& output_path) {
    auto corpus = load_corpus_file(corpus_path);
    auto result = dead_end_benchmark(corpus, oracle, samples, max_states);
    ordered_json j;
    j["statesSampled"] = result.states_sampled;
    j["statesEvaluated"] = result.states_evaluated;
    j["policyAccuracy"] = result.policy_accuracy;
    j["valueAccuracy"] = result.value_accuracy;
    emit(output_path, j.dump(2) + "\n");
    return ExitOk;
}

int cmd_gen_corpus(const CorpusGenConfig& gen, const std::string& output_path) {
    auto corpus = generate_corpus(gen);
    emit(output_path, corpus_to_text(corpus));
    return ExitOk;
}

void add_oracle_flags(CLI::App* app, std::map<std::string, std::string>& overrides) {
    for (const char* key : {"eval", "weight", "beta", "dropout", "sigma", "seed", "budget"}) {
        app->add_option_function<std::string>(
            std::string("--") + key, [&overrides, key](const std::string& v) { overrides[key] = v; });
    }
}

void apply_overrides(ExperimentConfig& cfg, const std::map<std::string, std::string>& overrides) {
    for (const auto& [key, value] : overrides) apply_config_line(cfg, key, value);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"policy-guided Sokoban search workbench"};
    app.require_subcommand(1);

    // solve
    auto* solve = app.add_subcommand("solve", "solve one level and print the plan");
    std::string solve_level;
    int solve_index = 0;
    bool solve_trace = false;
    std::string solve_trace_path;
    std::map<std::string, std::string> solve_overrides;
    solve->add_option("level", solve_level, "level file (XSB text)")->required();
    solve->add_option("--index", solve_index, "level index within a collection");
    add_oracle_flags(solve, solve_overrides);
    solve->add_flag("--trace", solve_trace, "record the expansion trace");
    solve->add_option("--trace-out", solve_trace_path, "write the trace edge list here");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "batch runs over a corpus, JSONL out");
    std::string exp_config;
    std::map<std::string, std::string> exp_overrides;
    bool exp_wall_times = false;
    experiment->add_option("--config", exp_config, "key = value config file");
    add_oracle_flags(experiment, exp_overrides);
    for (const char* key : {"corpus", "output", "runs", "schedule", "cutoff", "scale", "jobs",
                            "checkpoints"}) {
        experiment->add_option_function<std::string>(
            std::string("--") + key,
            [&exp_overrides, key](const std::string& v) { exp_overrides[key] = v; });
    }
    experiment->add_flag("--wall-times", exp_wall_times, "include wall-clock times in the JSONL");

    // restart-stats
    auto* rstats = app.add_subcommand("restart-stats", "per-instance restart statistics CSV");
    std::string rs_jsonl, rs_output;
    std::uint64_t rs_scale = 1;
    rstats->add_option("records", rs_jsonl, "experiment JSONL")->required();
    rstats->add_option("--scale", rs_scale, "Luby scale for the universal estimate");
    rstats->add_option("--output", rs_output, "write CSV here instead of stdout");

    // treemodel
    auto* treemodel = app.add_subcommand("treemodel", "abstract model samples and theorem checks");
    std::string tm_report = "both", tm_model = "left", tm_params, tm_output, tm_grid = "16,32,64,128,256,512,1024";
    std::uint64_t tm_trials = 100000, tm_seed = 0;
    LeftTailModelParams tm_left;
    RightTailModelParams tm_right;
    treemodel->add_option("--report", tm_report, "theorem1 | theorem2 | both | survival");
    treemodel->add_option("--model", tm_model, "survival report: left | right");
    treemodel->add_option("--params", tm_params, "key = value model parameter file");
    treemodel->add_option("--grid", tm_grid, "comma-separated n values for theorem reports");
    treemodel->add_option("--trials", tm_trials, "samples per grid point");
    treemodel->add_option("--seed", tm_seed, "sampling seed");
    treemodel->add_option("--n", tm_left.n, "left model n");
    treemodel->add_option("--p", tm_left.p, "success probability per critical pick");
    treemodel->add_option("--c", tm_left.c, "critical picks per log2 n");
    treemodel->add_option("--a", tm_left.a, "plan length exponent");
    treemodel->add_option("--detour-max", tm_left.detour_max, "per-step detour bound");
    treemodel->add_option("--cap", tm_left.cost_cap, "cost saturation cap");
    treemodel->add_option("--right-p", tm_right.p, "right model miss probability");
    treemodel->add_option("--right-b", tm_right.b, "right model blowup base");
    treemodel->add_option("--output", tm_output, "write the report here instead of stdout");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "tail labels, dead subtrees, dead-end benchmark");
    analyze->require_subcommand(1);

    auto* tails = analyze->add_subcommand("tails", "classify per-instance runtime tails");
    std::string tails_jsonl, tails_output;
    double tails_gamma = 0.1;
    tails->add_option("records", tails_jsonl, "experiment JSONL")->required();
    tails->add_option("--gamma", tails_gamma, "fast-solve fraction of the cap for left-heavy");
    tails->add_option("--output", tails_output, "write JSON here instead of stdout");

    auto* survival = analyze->add_subcommand("survival", "empirical survival function CSV");
    std::string surv_jsonl, surv_output;
    survival->add_option("records", surv_jsonl, "experiment JSONL")->required();
    survival->add_option("--output", surv_output, "write CSV here instead of stdout");

    auto* subtrees = analyze->add_subcommand("subtrees", "dead subtree size histogram of a trace");
    std::string sub_trace, sub_output;
    subtrees->add_option("trace", sub_trace, "trace edge list from solve --trace-out")->required();
    subtrees->add_option("--output", sub_output, "write JSON here instead of stdout");

    auto* deadends = analyze->add_subcommand("deadends", "oracle accuracy at dead-end children");
    std::string de_corpus, de_output;
    std::size_t de_samples = 8, de_max_states = 1000000;
    std::map<std::string, std::string> de_overrides;
    deadends->add_option("corpus", de_corpus, "level collection")->required();
    deadends->add_option("--samples", de_samples, "plan states sampled per level");
    deadends->add_option("--max-states", de_max_states, "brute-force state cap");
    add_oracle_flags(deadends, de_overrides);
    deadends->add_option("--output", de_output, "write JSON here instead of stdout");

    // gen-corpus
    auto* gen = app.add_subcommand("gen-corpus", "generate a solvable random corpus");
    CorpusGenConfig gen_cfg;
    std::string gen_output;
    gen->add_option("--count", gen_cfg.count, "levels to generate");
    gen->add_option("--width", gen_cfg.width, "grid width (<= 8)");
    gen->add_option("--height", gen_cfg.height, "grid height (<= 8)");
    gen->add_option("--boxes", gen_cfg.boxes, "boxes per level (1..3)");
    gen->add_option("--seed", gen_cfg.seed, "generation seed");
    gen->add_option("--min-plan", gen_cfg.min_plan, "minimum optimal plan length");
    gen->add_option("--min-visited", gen_cfg.min_visited, "minimum brute-force search space");
    gen->add_option("--wall-prob", gen_cfg.wall_prob, "interior wall probability");
    gen->add_option("--max-attempts", gen_cfg.max_attempts, "rejection cap (0: 10000 * count)");
    gen->add_option("--output", gen_output, "write the collection here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            ExperimentConfig cfg;
            cfg.budget = 100000;
            apply_overrides(cfg, solve_overrides);
            return cmd_solve(solve_level, solve_index, cfg, solve_trace || !solve_trace_path.empty(),
                             solve_trace_path);
        }
        if (experiment->parsed()) {
            ExperimentConfig cfg;
            if (!exp_config.empty()) cfg = load_config_file(exp_config);
            apply_overrides(cfg, exp_overrides);
            if (exp_wall_times) cfg.wall_times = true;
            return cmd_experiment(cfg);
        }
        if (rstats->parsed()) return cmd_restart_stats(rs_jsonl, rs_scale, rs_output);
        if (treemodel->parsed()) {
            if (!tm_params.empty()) {
                for (const auto& [key, value] : parse_kv_file(tm_params)) {
                    if (key == "report") tm_report = value;
                    else if (key == "model") tm_model = value;
                    else if (key == "grid") tm_grid = value;
                    else if (key == "trials") tm_trials = std::stoull(value);
                    else if (key == "seed") tm_seed = std::stoull(value);
                    else if (key == "n") tm_left.n = std::stoull(value);
                    else if (key == "p") tm_left.p = std::stod(value);
                    else if (key == "c") tm_left.c = std::stod(value);
                    else if (key == "a") tm_left.a = std::stod(value);
                    else if (key == "detour_max") tm_left.detour_max = static_cast<std::uint32_t>(std::stoul(value));
                    else if (key == "cap") tm_left.cost_cap = std::stoull(value);
                    else if (key == "right_p") tm_right.p = std::stod(value);
                    else if (key == "right_b") tm_right.b = std::stod(value);
                    else throw UsageError("unknown model parameter: " + key);
                }
            }
            std::vector<std::uint64_t> grid;
            std::istringstream gs(tm_grid);
            for (std::string tok; std::getline(gs, tok, ',');)
                if (!tok.empty()) grid.push_back(std::stoull(tok));
            if (grid.empty()) throw UsageError("empty n grid");
            return cmd_treemodel(tm_report, tm_left, tm_right, grid, tm_trials, tm_seed, tm_model,
                                 tm_output);
        }
        if (tails->parsed()) return cmd_analyze_tails(tails_jsonl, tails_gamma, tails_output);
        if (survival->parsed()) return cmd_analyze_survival(surv_jsonl, surv_output);
        if (subtrees->parsed()) return cmd_analyze_subtrees(sub_trace, sub_output);
        if (deadends->parsed()) {
            ExperimentConfig cfg;
            apply_overrides(cfg, de_overrides);
            return cmd_analyze_deadends(de_corpus, cfg.oracle, de_samples, de_max_states, de_output);
        }
        if (gen->parsed()) return cmd_gen_corpus(gen_cfg, gen_output);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitUsage;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ExitUsage;
    }
    return ExitUsage;
}
