#include "sokolab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sokolab/brute_force.hpp"

namespace sokolab {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::vector<std::uint64_t> parse_checkpoint_list(const std::string& value) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stoull(item));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw UsageError("not a boolean: " + v);
}

} // namespace

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    try {
        if (key == "corpus") {
            cfg.corpus_path = value;
        } else if (key == "output") {
            cfg.output_path = value;
        } else if (key == "eval") {
            cfg.eval = parse_eval(value, cfg.eval.weight);
        } else if (key == "weight") {
            cfg.eval.weight = std::stod(value);
        } else if (key == "beta") {
            cfg.oracle.beta = std::stod(value);
        } else if (key == "dropout") {
            cfg.oracle.dropout = std::stod(value);
        } else if (key == "sigma") {
            cfg.oracle.sigma = std::stod(value);
        } else if (key == "seed") {
            cfg.oracle.seed = std::stoull(value);
            cfg.seed_set = true;
        } else if (key == "budget") {
            cfg.budget = std::stoull(value);
        } else if (key == "runs") {
            cfg.runs_per_instance = static_cast<std::uint32_t>(std::stoul(value));
        } else if (key == "schedule") {
            if (value == "none")
                cfg.schedule = RestartSchedule::none();
            else if (value == "fixed")
                cfg.schedule.kind = RestartSchedule::Kind::Fixed;
            else if (value == "luby")
                cfg.schedule.kind = RestartSchedule::Kind::Luby;
            else
                throw UsageError("unknown schedule: " + value);
        } else if (key == "cutoff" || key == "scale") {
            cfg.schedule.param = std::stoull(value);
        } else if (key == "jobs") {
            cfg.jobs = static_cast<std::uint32_t>(std::stoul(value));
        } else if (key == "checkpoints") {
            cfg.checkpoints = parse_checkpoint_list(value);
        } else if (key == "wall_times") {
            cfg.wall_times = parse_bool(value);
        } else {
            throw UsageError("unknown config key: " + key);
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("bad value for config key '" + key + "': " + value);
    }
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

std::string record_to_json(const ResultRecord& r) {
    ordered_json j;
    j["instance"] = r.instance;
    j["run"] = r.run;
    j["eval"] = r.eval;
    j["weight"] = r.weight;
    j["seed"] = r.seed;
    j["budget"] = r.budget;
    j["cost"] = r.cost;
    j["solved"] = r.solved;
    if (r.plan_length) j["planLength"] = *r.plan_length;
    if (r.wall_millis) j["wallMillis"] = *r.wall_millis;
    return j.dump();
}

ResultRecord record_from_json(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const std::exception& e) {
        throw UsageError(std::string("bad JSONL record: ") + e.what());
    }
    ResultRecord r;
    try {
        r.instance = j.at("instance").get<std::uint32_t>();
        r.run = j.at("run").get<std::uint32_t>();
        r.eval = j.at("eval").get<std::string>();
        r.weight = j.at("weight").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.budget = j.at("budget").get<std::uint64_t>();
        r.cost = j.at("cost").get<std::uint64_t>();
        r.solved = j.at("solved").get<bool>();
        if (j.contains("planLength")) r.plan_length = j["planLength"].get<std::uint64_t>();
        if (j.contains("wallMillis")) r.wall_millis = j["wallMillis"].get<double>();
    } catch (const std::exception& e) {
        throw UsageError(std::string("JSONL record missing field: ") + e.what());
    }
    return r;
}

void write_jsonl(const std::string& path, std::span<const ResultRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open output file: " + path);
    for (const ResultRecord& r : records) out << record_to_json(r) << '\n';
}

std::vector<ResultRecord> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open results file: " + path);
    std::vector<ResultRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        out.push_back(record_from_json(line));
    }
    return out;
}

namespace {

ResultRecord run_one(const Board& board, const ExperimentConfig& cfg, std::uint32_t instance,
                     std::uint32_t run) {
    ResultRecord rec;
    rec.instance = instance;
    rec.run = run;
    rec.eval = eval_name(cfg.eval.variant);
    rec.weight = cfg.eval.weight;
    rec.budget = cfg.budget;
    rec.seed = derive_key(cfg.oracle.seed, instance, run);

    const auto start = std::chrono::steady_clock::now();
    std::vector<Move> plan;

    if (cfg.schedule.kind == RestartSchedule::Kind::None) {
        StochasticOracle oracle(board, cfg.oracle, rec.seed);
        const SearchOutcome out = best_first_search(board, cfg.eval, oracle, cfg.budget, false);
        rec.solved = out.status == SearchStatus::Solved;
        rec.cost = rec.solved ? std::max<std::uint64_t>(out.expansions, 1) : cfg.budget;
        if (rec.solved) plan = out.plan;
    } else {
        const AttemptRunner attempt = [&](std::uint64_t attempt_id, std::uint64_t cutoff) {
            StochasticOracle oracle(board, cfg.oracle, derive_key(rec.seed, attempt_id));
            const SearchOutcome out = best_first_search(board, cfg.eval, oracle, cutoff, false);
            AttemptOutcome a;
            a.solved = out.status == SearchStatus::Solved;
            a.cost = a.solved ? std::max<std::uint64_t>(out.expansions, 1) : cutoff;
            if (a.solved) plan = out.plan;
            return a;
        };
        const ScheduleOutcome out = run_with_schedule(attempt, cfg.schedule, cfg.budget);
        rec.solved = out.solved;
        rec.cost = rec.solved ? std::max<std::uint64_t>(out.total_cost, 1) : cfg.budget;
    }

    if (rec.solved) rec.plan_length = plan.size();
    if (cfg.wall_times) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        rec.wall_millis = std::chrono::duration<double, std::milli>(elapsed).count();
    }
    return rec;
}

} // namespace

ExperimentOutput run_experiment(const ExperimentConfig& cfg, std::span<const Board> corpus,
                                std::span<const SkippedLevel> skipped) {
    if (!cfg.seed_set) throw UsageError("experiment requires an explicit seed");
    if (cfg.jobs == 0) throw UsageError("jobs must be at least 1");

    struct Job {
        std::uint32_t instance;
        std::uint32_t run;
    };
    std::vector<Job> jobs;
    for (std::uint32_t i = 0; i < corpus.size(); ++i)
        for (std::uint32_t r = 0; r < cfg.runs_per_instance; ++r) jobs.push_back({i, r});

    ExperimentOutput out;
    out.records.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            out.records[i] = run_one(corpus[jobs[i].instance], cfg, jobs[i].instance, jobs[i].run);
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(cfg.jobs, std::max<std::size_t>(jobs.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // summary with Table-style checkpoint columns: a run counts at checkpoint c
    // when it solved within c expansions (a budget-c run is a prefix of the
    // budget-M run, so prefixes are exact)
    ordered_json summary;
    summary["instances"] = corpus.size();
    summary["runsPerInstance"] = cfg.runs_per_instance;
    summary["records"] = out.records.size();
    summary["eval"] = eval_name(cfg.eval.variant);
    summary["weight"] = cfg.eval.weight;
    summary["budget"] = cfg.budget;
    summary["seed"] = cfg.oracle.seed;

    std::size_t solved = 0;
    for (const ResultRecord& r : out.records)
        if (r.solved) ++solved;
    summary["solved"] = solved;
    summary["solveRatio"] =
        out.records.empty() ? 0.0 : static_cast<double>(solved) / static_cast<double>(out.records.size());

    ordered_json checkpoints = ordered_json::array();
    for (std::uint64_t c : cfg.checkpoints) {
        if (c > cfg.budget) continue;
        std::size_t hits = 0;
        for (const ResultRecord& r : out.records)
            if (r.solved && r.cost <= c) ++hits;
        ordered_json row;
        row["budget"] = c;
        row["solved"] = hits;
        row["ratio"] = out.records.empty()
                           ? 0.0
                           : static_cast<double>(hits) / static_cast<double>(out.records.size());
        checkpoints.push_back(row);
    }
    summary["checkpoints"] = checkpoints;
    ordered_json skips = ordered_json::array();
    for (const SkippedLevel& s : skipped) {
        ordered_json row;
        row["index"] = s.index;
        row["error"] = s.error;
        skips.push_back(row);
    }
    summary["skipped"] = skips;
    out.summary_json = summary.dump(2);
    return out;
}

LoadedCorpus load_corpus_lenient(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open corpus file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    LoadedCorpus out;
    const std::vector<std::string> blocks = split_level_blocks(ss.str());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        try {
            out.boards.push_back(parse_level(blocks[i]));
        } catch (const MalformedLevel& e) {
            out.skipped.push_back({i, e.what()});
        }
    }
    return out;
}

std::vector<InstanceRestartStats> restart_stats_from_records(std::span<const ResultRecord> records,
                                                             std::uint64_t luby_scale) {
    std::vector<std::uint32_t> ids;
    for (const ResultRecord& r : records) ids.push_back(r.instance);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

    std::vector<InstanceRestartStats> out;
    for (std::uint32_t id : ids) {
        RuntimeSample sample;
        for (const ResultRecord& r : records) {
            if (r.instance != id) continue;
            sample.costs.push_back(r.cost);
            sample.solved.push_back(r.solved ? 1 : 0);
            sample.cap = std::max(sample.cap, r.budget);
        }
        InstanceRestartStats stats;
        stats.instance = id;
        stats.runs = sample.costs.size();
        for (std::uint8_t s : sample.solved) stats.solved += s;
        double total = 0.0;
        for (std::uint64_t c : sample.costs) total += static_cast<double>(c);
        stats.mean_cost = total / static_cast<double>(sample.costs.size());
        stats.l_univ = universal_strategy_estimate(sample, luby_scale);
        try {
            const SampleRestartStats s = sample_restart_stats(sample);
            stats.t_s = s.t;
            stats.l_s = s.l;
        } catch (const NoSolvedRuns&) {
            stats.no_solved_runs = true;
        }
        out.push_back(stats);
    }
    return out;
}

std::string restart_stats_csv(std::span<const InstanceRestartStats> stats) {
    std::ostringstream out;
    out << "instance,runs,solved,mean_cost,t_s,l_s,l_univ,no_solved_runs\n";
    out.precision(10);
    for (const InstanceRestartStats& s : stats) {
        out << s.instance << ',' << s.runs << ',' << s.solved << ',' << s.mean_cost << ',';
        if (s.t_s)
            out << *s.t_s;
        out << ',';
        if (s.l_s)
            out << *s.l_s;
        out << ',' << s.l_univ << ',' << (s.no_solved_runs ? 1 : 0) << '\n';
    }
    return out.str();
}

std::vector<Board> generate_corpus(const CorpusGenConfig& cfg) {
    if (cfg.boxes == 0) throw UsageError("corpus generation needs at least one box");
    if (cfg.boxes > 3) throw UsageError("corpus generation supports at most 3 boxes");
    if (cfg.width > 8 || cfg.height > 8) throw UsageError("corpus levels are at most 8x8");
    if (cfg.width < 3 || cfg.height < 3) throw UsageError("corpus levels need interior space");

    const std::uint64_t attempt_cap =
        cfg.max_attempts ? cfg.max_attempts : std::uint64_t{10000} * cfg.count;
    Rng rng(cfg.seed);
    std::vector<Board> out;
    std::uint64_t attempts = 0;

    while (out.size() < cfg.count) {
        if (++attempts > attempt_cap)
            throw GenerationTimeout("corpus generation exceeded " + std::to_string(attempt_cap) +
                                    " attempts");
        Board b;
        b.width = cfg.width;
        b.height = cfg.height;
        b.wall.assign(static_cast<std::size_t>(cfg.width * cfg.height), 0);
        b.goal.assign(static_cast<std::size_t>(cfg.width * cfg.height), 0);
        std::vector<std::int32_t> floor;
        for (int y = 0; y < cfg.height; ++y)
            for (int x = 0; x < cfg.width; ++x) {
                const int idx = b.cell(x, y);
                if (x == 0 || y == 0 || x == cfg.width - 1 || y == cfg.height - 1 ||
                    rng.uniform() < cfg.wall_prob)
                    b.wall[idx] = 1;
                else
                    floor.push_back(idx);
            }
        if (floor.size() < 2 * cfg.boxes + 1) continue;

        // Fisher-Yates prefix: boxes, goals, player (all distinct)
        for (std::size_t i = 0; i < 2 * cfg.boxes + 1; ++i) {
            const std::size_t j = i + rng.below(floor.size() - i);
            std::swap(floor[i], floor[j]);
        }
        for (std::uint32_t i = 0; i < cfg.boxes; ++i) b.initial_boxes.push_back(floor[i]);
        for (std::uint32_t i = 0; i < cfg.boxes; ++i) {
            b.goal[floor[cfg.boxes + i]] = 1;
            b.goals.push_back(floor[cfg.boxes + i]);
        }
        b.initial_player = floor[2 * cfg.boxes];
        std::sort(b.initial_boxes.begin(), b.initial_boxes.end());
        std::sort(b.goals.begin(), b.goals.end());

        const BruteForceResult truth = brute_force_solve(b, cfg.oracle_max_states);
        if (truth.status != BruteForceStatus::Solved || truth.plan.size() < cfg.min_plan ||
            truth.visited < cfg.min_visited)
            continue;
        out.push_back(std::move(b));
    }
    return out;
}

std::string corpus_to_text(std::span<const Board> corpus) {
    std::string out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        out += "; " + std::to_string(i) + "\n";
        out += serialize_level(corpus[i]);
        out += "\n";
    }
    return out;
}

std::vector<Board> load_corpus_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open corpus file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_level_collection(ss.str());
}

std::vector<InstanceRunner> corpus_runners(std::span<const Board> corpus, EvalFunction eval,
                                           const OracleConfig& cfg) {
    std::vector<InstanceRunner> runners;
    runners.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const Board* board = &corpus[i];
        runners.push_back([board, eval, cfg, i](std::uint32_t run, std::uint64_t budget) {
            StochasticOracle oracle(*board, cfg, derive_key(cfg.seed, i, run));
            const SearchOutcome out = best_first_search(*board, eval, oracle, budget, false);
            AttemptOutcome a;
            a.solved = out.status == SearchStatus::Solved;
            a.cost = a.solved ? std::max<std::uint64_t>(out.expansions, 1) : budget;
            return a;
        });
    }
    return runners;
}

} // namespace sokolab
