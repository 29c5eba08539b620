#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sokolab/brute_force.hpp"
#include "sokolab/errors.hpp"
#include "sokolab/experiment.hpp"

using namespace sokolab;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("sokolab_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<Board> tiny_corpus() {
    return parse_level_collection(
        "#######\n"
        "#     #\n"
        "# @$. #\n"
        "#     #\n"
        "#######\n"
        "\n"
        "#######\n"
        "#  .  #\n"
        "# @$  #\n"
        "#     #\n"
        "#######\n");
}

} // namespace

TEST_CASE("config files parse with comments and overrides") {
    TempDir dir;
    auto path = dir.file("run.conf");
    write_text(path,
               "# experiment setup\n"
               "corpus = levels.txt\n"
               "eval = phs\n"
               "weight = 2.5\n"
               "beta=1.5\n"
               "dropout = 0.2\n"
               "sigma = 0.4\n"
               "seed = 99\n"
               "budget = 5000\n"
               "runs = 7\n"
               "schedule = luby\n"
               "scale = 32\n"
               "jobs = 4\n"
               "; trailing comment\n"
               "checkpoints = 100, 200, 400\n");
    auto cfg = load_config_file(path);
    CHECK(cfg.corpus_path == "levels.txt");
    CHECK(cfg.eval.variant == EvalVariant::PHS);
    CHECK(cfg.eval.weight == 2.5);
    CHECK(cfg.oracle.beta == 1.5);
    CHECK(cfg.oracle.dropout == 0.2);
    CHECK(cfg.oracle.sigma == 0.4);
    CHECK(cfg.oracle.seed == 99);
    CHECK(cfg.seed_set);
    CHECK(cfg.budget == 5000);
    CHECK(cfg.runs_per_instance == 7);
    CHECK(cfg.schedule.kind == RestartSchedule::Kind::Luby);
    CHECK(cfg.schedule.param == 32);
    CHECK(cfg.jobs == 4);
    CHECK(cfg.checkpoints == std::vector<std::uint64_t>{100, 200, 400});

    ExperimentConfig c2;
    apply_config_line(c2, "schedule", "fixed");
    apply_config_line(c2, "cutoff", "17");
    CHECK(c2.schedule.kind == RestartSchedule::Kind::Fixed);
    CHECK(c2.schedule.param == 17);

    CHECK_THROWS_AS(apply_config_line(c2, "nope", "1"), UsageError);
    CHECK_THROWS_AS(apply_config_line(c2, "budget", "banana"), UsageError);
    CHECK_THROWS_AS(apply_config_line(c2, "eval", "dijkstra"), UsageError);
    CHECK_THROWS_AS(load_config_file(dir.file("missing.conf")), UsageError);
}

TEST_CASE("result records round-trip through JSON") {
    ResultRecord r;
    r.instance = 3;
    r.run = 14;
    r.eval = "ours";
    r.weight = 1.5;
    r.seed = 0xDEADBEEF;
    r.budget = 4000;
    r.cost = 123;
    r.solved = true;
    r.plan_length = 17;

    auto line = record_to_json(r);
    auto back = record_from_json(line);
    CHECK(back.instance == r.instance);
    CHECK(back.run == r.run);
    CHECK(back.eval == r.eval);
    CHECK(back.weight == r.weight);
    CHECK(back.seed == r.seed);
    CHECK(back.budget == r.budget);
    CHECK(back.cost == r.cost);
    CHECK(back.solved == r.solved);
    CHECK(back.plan_length == r.plan_length);
    CHECK(!back.wall_millis.has_value());

    // Unsolved: no planLength key at all.
    ResultRecord f = r;
    f.solved = false;
    f.plan_length.reset();
    auto fline = record_to_json(f);
    CHECK(fline.find("planLength") == std::string::npos);
    CHECK(!record_from_json(fline).plan_length.has_value());

    CHECK_THROWS_AS(record_from_json("{broken"), UsageError);
}

TEST_CASE("jsonl files round-trip") {
    TempDir dir;
    auto path = dir.file("out.jsonl");
    std::vector<ResultRecord> records(3);
    for (int i = 0; i < 3; ++i) {
        records[i].instance = static_cast<std::uint32_t>(i);
        records[i].eval = "greedy";
        records[i].cost = static_cast<std::uint64_t>(10 * (i + 1));
        records[i].budget = 100;
        records[i].solved = i != 1;
        if (records[i].solved) records[i].plan_length = 4;
    }
    write_jsonl(path, records);
    auto back = read_jsonl(path);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back[i].instance == records[i].instance);
        CHECK(back[i].cost == records[i].cost);
        CHECK(back[i].solved == records[i].solved);
    }
    CHECK_THROWS_AS(read_jsonl(dir.file("absent.jsonl")), UsageError);
}

TEST_CASE("run_experiment produces ordered records and a consistent summary") {
    auto corpus = tiny_corpus();
    ExperimentConfig cfg;
    cfg.eval = {EvalVariant::Depth, 1.0};
    cfg.oracle.seed = 5;
    cfg.oracle.dropout = 0.0;
    cfg.seed_set = true;
    cfg.budget = 2000;
    cfg.runs_per_instance = 3;
    cfg.checkpoints = {1, 10, 2000};

    auto out = run_experiment(cfg, corpus);
    REQUIRE(out.records.size() == corpus.size() * 3);

    // (instance, run) lexicographic order.
    for (std::size_t i = 0; i < out.records.size(); ++i) {
        CHECK(out.records[i].instance == i / 3);
        CHECK(out.records[i].run == i % 3);
        CHECK(out.records[i].budget == 2000);
    }

    // Summary recount: solved counts and checkpoint counts recomputed here.
    auto summary = nlohmann::json::parse(out.summary_json);
    CHECK(summary["instances"] == corpus.size());
    CHECK(summary["runsPerInstance"] == 3);
    CHECK(summary["records"] == out.records.size());

    std::size_t solved = 0;
    for (const auto& r : out.records)
        if (r.solved) ++solved;
    CHECK(summary["solved"] == solved);

    for (const auto& cp : summary["checkpoints"]) {
        std::uint64_t c = cp["budget"];
        std::size_t expect = 0;
        for (const auto& r : out.records)
            if (r.solved && r.cost <= c) ++expect;
        CHECK(cp["solved"] == expect);
    }

    // These deterministic levels solve well within budget.
    for (const auto& r : out.records) {
        CHECK(r.solved);
        REQUIRE(r.plan_length.has_value());
        CHECK(*r.plan_length >= 1);
    }
}

TEST_CASE("run_experiment is byte-identical across job counts") {
    auto corpus = tiny_corpus();
    ExperimentConfig cfg;
    cfg.eval = {EvalVariant::Ours, 1.0};
    cfg.oracle.seed = 31;
    cfg.seed_set = true;
    cfg.budget = 500;
    cfg.runs_per_instance = 8;

    cfg.jobs = 1;
    auto one = run_experiment(cfg, corpus);
    cfg.jobs = 8;
    auto eight = run_experiment(cfg, corpus);

    REQUIRE(one.records.size() == eight.records.size());
    TempDir dir;
    write_jsonl(dir.file("a.jsonl"), one.records);
    write_jsonl(dir.file("b.jsonl"), eight.records);
    CHECK(read_text(dir.file("a.jsonl")) == read_text(dir.file("b.jsonl")));
    CHECK(one.summary_json == eight.summary_json);
}

TEST_CASE("run_experiment demands an explicit seed") {
    auto corpus = tiny_corpus();
    ExperimentConfig cfg;
    cfg.seed_set = false;
    CHECK_THROWS_AS(run_experiment(cfg, corpus), UsageError);
}

TEST_CASE("scheduled experiments restart within the budget") {
    auto corpus = tiny_corpus();
    ExperimentConfig cfg;
    cfg.eval = {EvalVariant::PurePolicy, 1.0};
    cfg.oracle.seed = 11;
    cfg.seed_set = true;
    cfg.budget = 600;
    cfg.runs_per_instance = 4;
    cfg.schedule = RestartSchedule::luby(16);

    auto out = run_experiment(cfg, corpus);
    for (const auto& r : out.records) {
        CHECK(r.cost <= cfg.budget);
        if (!r.solved) CHECK(r.cost == cfg.budget);
    }
}

TEST_CASE("lenient corpus loading skips malformed blocks") {
    TempDir dir;
    auto path = dir.file("levels.txt");
    write_text(path,
               "#####\n"
               "#@$.#\n"
               "#####\n"
               "\n"
               "#####\n"
               "#@$$#\n"
               "#####\n"
               "\n"
               "#####\n"
               "#.$@#\n"
               "#####\n");
    auto loaded = load_corpus_lenient(path);
    CHECK(loaded.boards.size() == 2);
    REQUIRE(loaded.skipped.size() == 1);
    CHECK(loaded.skipped[0].index == 1);
    CHECK(!loaded.skipped[0].error.empty());

    // The skip list flows into the summary.
    ExperimentConfig cfg;
    cfg.eval = {EvalVariant::Depth, 1.0};
    cfg.oracle.seed = 3;
    cfg.seed_set = true;
    cfg.budget = 100;
    auto out = run_experiment(cfg, loaded.boards, loaded.skipped);
    auto summary = nlohmann::json::parse(out.summary_json);
    REQUIRE(summary["skipped"].size() == 1);
    CHECK(summary["skipped"][0]["index"] == 1);
}

TEST_CASE("restart stats aggregate records per instance") {
    std::vector<ResultRecord> records;
    auto add = [&](std::uint32_t inst, std::uint64_t cost, bool solved) {
        ResultRecord r;
        r.instance = inst;
        r.run = static_cast<std::uint32_t>(records.size());
        r.eval = "ours";
        r.budget = 100;
        r.cost = cost;
        r.solved = solved;
        records.push_back(r);
    };
    add(0, 2, true);
    add(0, 100, false);
    add(0, 4, true);
    add(1, 100, false);
    add(1, 100, false);

    auto stats = restart_stats_from_records(records);
    REQUIRE(stats.size() == 2);
    CHECK(stats[0].instance == 0);
    CHECK(stats[0].runs == 3);
    CHECK(stats[0].solved == 2);
    CHECK(stats[0].mean_cost == doctest::Approx((2 + 100 + 4) / 3.0));
    REQUIRE(stats[0].t_s.has_value());
    // candidates: t=2 -> 2*3/1 = 6, t=4 -> 4*3/2 = 6; tie keeps 2.
    CHECK(*stats[0].t_s == 2);
    CHECK(*stats[0].l_s == doctest::Approx(6.0));
    CHECK(stats[0].l_univ > 0.0);
    CHECK(!stats[0].no_solved_runs);

    CHECK(stats[1].no_solved_runs);
    CHECK(!stats[1].t_s.has_value());

    auto csv = restart_stats_csv(stats);
    CHECK(csv.find("instance,runs,solved,mean_cost,t_s,l_s,l_univ,no_solved_runs") == 0);
    CHECK(csv.find("\n0,3,2,") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("generate_corpus yields solvable levels meeting the constraints") {
    CorpusGenConfig gen;
    gen.count = 6;
    gen.width = 6;
    gen.height = 6;
    gen.boxes = 2;
    gen.seed = 2024;
    gen.min_plan = 3;
    auto corpus = generate_corpus(gen);
    REQUIRE(corpus.size() == 6);
    for (const auto& b : corpus) {
        CHECK(b.width == 6);
        CHECK(b.height == 6);
        CHECK(b.initial_boxes.size() == 2);
        auto bf = brute_force_solve(b, gen.oracle_max_states);
        REQUIRE(bf.status == BruteForceStatus::Solved);
        CHECK(bf.plan.size() >= 3);
    }

    // Same seed, same corpus; different seed, different corpus.
    auto again = generate_corpus(gen);
    REQUIRE(again.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(again[i] == corpus[i]);
    gen.seed = 2025;
    auto other = generate_corpus(gen);
    bool same = true;
    for (std::size_t i = 0; i < corpus.size(); ++i) same = same && other[i] == corpus[i];
    CHECK(!same);

    // Round-trip through text.
    auto text = corpus_to_text(corpus);
    auto parsed = parse_level_collection(text);
    REQUIRE(parsed.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) CHECK(parsed[i] == corpus[i]);

    CorpusGenConfig bad = gen;
    bad.boxes = 9;
    CHECK_THROWS_AS(generate_corpus(bad), UsageError);
    CorpusGenConfig huge = gen;
    huge.width = 9;
    CHECK_THROWS_AS(generate_corpus(huge), UsageError);

    CorpusGenConfig hopeless = gen;
    hopeless.min_plan = 100000; // no 6x6 level has such a plan
    hopeless.max_attempts = 200;
    CHECK_THROWS_AS(generate_corpus(hopeless), GenerationTimeout);
}

TEST_CASE("corpus runners adapt instances for the restart experiment") {
    auto corpus = tiny_corpus();
    OracleConfig oracle;
    oracle.seed = 8;
    auto runners = corpus_runners(corpus, {EvalVariant::Depth, 1.0}, oracle);
    REQUIRE(runners.size() == corpus.size());

    auto out = runners[0](0, 5000);
    CHECK(out.solved);
    CHECK(out.cost <= 5000);
    CHECK(out.cost >= 1);

    // Tiny budget: the second level needs more than one expansion, so the run
    // fails and reports the budget as cost.
    auto starved = runners[1](0, 1);
    CHECK(!starved.solved);
    CHECK(starved.cost == 1);

    auto solved = n_restart_experiment(runners, 10000, 2);
    CHECK(solved.size() == corpus.size());
}
