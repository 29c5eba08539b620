#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "sokolab/board.hpp"
#include "sokolab/brute_force.hpp"
#include "sokolab/errors.hpp"
#include "sokolab/rng.hpp"

using namespace sokolab;

namespace {

const char* kTiny =
    "#####\n"
    "#@$.#\n"
    "#####\n";

// Depth-limited DFS used as an independent check on the breadth-first oracle.
// Returns true if a plan of exactly `limit` moves reaches a goal.
bool dfs_exact(const Board& b, const State& s, int limit) {
    if (limit == 0) return is_goal(b, s);
    for (Move m : legal_moves(b, s)) {
        if (dfs_exact(b, apply_move(b, s, m), limit - 1)) return true;
    }
    return false;
}

int iddfs_optimal(const Board& b, int max_depth) {
    for (int d = 0; d <= max_depth; ++d) {
        if (dfs_exact(b, initial_state(b), d)) return d;
    }
    return -1;
}

} // namespace

TEST_CASE("parse_level reads the basic markers") {
    Board b = parse_level(kTiny);
    CHECK(b.width == 5);
    CHECK(b.height == 3);
    CHECK(b.initial_player == b.cell(1, 1));
    REQUIRE(b.initial_boxes.size() == 1);
    CHECK(b.initial_boxes[0] == b.cell(2, 1));
    REQUIRE(b.goals.size() == 1);
    CHECK(b.goals[0] == b.cell(3, 1));
    CHECK(b.is_wall(0, 0));
    CHECK(!b.is_wall(1, 1));
}

TEST_CASE("parse_level handles overlap markers and '-' floor") {
    Board b = parse_level(
        "######\n"
        "#+*-$#\n"
        "#----#\n"
        "######\n");
    CHECK(b.initial_player == b.cell(1, 1));
    CHECK(b.initial_boxes == std::vector<std::int32_t>{b.cell(2, 1), b.cell(4, 1)});
    CHECK(b.is_goal_cell(b.cell(1, 1))); // under the player
    CHECK(b.is_goal_cell(b.cell(2, 1))); // under a box
    CHECK(!b.is_wall(3, 1));             // '-' is floor
    CHECK(!b.is_wall(3, 2));
}

TEST_CASE("parse_level pads ragged lines with floor") {
    Board b = parse_level(
        "#####\n"
        "#@$.#\n"
        "#####\n"
        "###\n");
    // The padded cells sit outside the play area, sealed off by the wall row.
    CHECK(b.width == 5);
    CHECK(b.height == 4);
    CHECK(b.is_wall(2, 3));
    CHECK(!b.is_wall(3, 3));
    CHECK(parse_level(serialize_level(b)) == b);
}

TEST_CASE("parse_level rejects malformed input") {
    CHECK_THROWS_AS(parse_level(""), MalformedLevel);
    CHECK_THROWS_AS(parse_level("###\n#x#\n###\n"), MalformedLevel);
    CHECK_THROWS_AS(parse_level("#####\n# $.#\n#####\n"), MalformedLevel);      // no player
    CHECK_THROWS_AS(parse_level("#####\n#@@.#\n#####\n"), MalformedLevel);      // two players
    CHECK_THROWS_AS(parse_level("#####\n#@$ #\n#####\n"), MalformedLevel);      // counts differ
    CHECK_THROWS_AS(parse_level("#####\n#@ .#\n#####\n"), MalformedLevel);      // zero boxes
    CHECK_THROWS_AS(parse_level("## ##\n#@$.#\n#####\n"), MalformedLevel);      // hole in border
    CHECK_THROWS_AS(parse_level("@$.\n"), MalformedLevel);                      // no walls at all
}

TEST_CASE("serialize_level round-trips and trims trailing floor") {
    Board b = parse_level(kTiny);
    std::string text = serialize_level(b);
    CHECK(parse_level(text) == b);
    for (std::size_t pos = text.find('\n'); pos != std::string::npos; pos = text.find('\n', pos + 1)) {
        if (pos > 0) CHECK(text[pos - 1] != ' ');
    }
}

TEST_CASE("parse_level_collection splits on blank lines and skips comments") {
    std::string text =
        "; first\n" +
        std::string(kTiny) +
        "\n"
        "; second\n"
        "#####\n"
        "#.$@#\n"
        "#####\n";
    auto boards = parse_level_collection(text);
    REQUIRE(boards.size() == 2);
    CHECK(boards[0] == parse_level(kTiny));
    CHECK(boards[1].initial_player == boards[1].cell(3, 1));
}

TEST_CASE("state ordering is canonical") {
    Board b = parse_level(
        "######\n"
        "#@$$.#\n"
        "#  . #\n"
        "######\n");
    State s1 = initial_state(b);
    State s2 = s1;
    std::swap(s2.boxes[0], s2.boxes[1]);
    std::sort(s2.boxes.begin(), s2.boxes.end());
    CHECK(s1 == s2);
    CHECK(state_key(s1) == state_key(s2));
}

TEST_CASE("moves walk, push, and respect blocking") {
    Board b = parse_level(
        "#######\n"
        "#     #\n"
        "# @$. #\n"
        "#     #\n"
        "#######\n");
    State s = initial_state(b);

    auto ms = legal_moves(b, s);
    CHECK(ms == std::vector<Move>{Move::Up, Move::Down, Move::Left, Move::Right});

    State pushed = apply_move(b, s, Move::Right);
    CHECK(pushed.player == b.cell(3, 2));
    CHECK(pushed.boxes == std::vector<std::int32_t>{b.cell(4, 2)});
    CHECK(is_goal(b, pushed));

    State walked = apply_move(b, s, Move::Up);
    CHECK(walked.player == b.cell(2, 1));
    CHECK(walked.boxes == s.boxes);

    // Box against the wall: push is illegal, walk into wall is illegal.
    Board tight = parse_level(
        "#####\n"
        "#.$@#\n"
        "#####\n");
    State t = initial_state(tight);
    CHECK(legal_moves(tight, t) == std::vector<Move>{Move::Left});
    CHECK(!is_legal_move(tight, t, Move::Right));
    CHECK(!is_legal_move(tight, t, Move::Up));
    CHECK_THROWS_AS(apply_move(tight, t, Move::Up), IllegalMove);

    // Two boxes in a row cannot be pushed together.
    Board chain = parse_level(
        "######\n"
        "#@$$.#\n"
        "# . ##\n"
        "######\n");
    CHECK(!is_legal_move(chain, initial_state(chain), Move::Right));
}

TEST_CASE("apply_move keeps boxes sorted") {
    Board b = parse_level(
        "######\n"
        "# .$ #\n"
        "# @$.#\n"
        "######\n");
    State s = initial_state(b);
    State after = apply_move(b, s, Move::Right);
    CHECK(std::is_sorted(after.boxes.begin(), after.boxes.end()));
}

TEST_CASE("reachable_cells floods around boxes unless told otherwise") {
    Board b = parse_level(
        "#####\n"
        "#@$.#\n"
        "#####\n");
    State s = initial_state(b);
    auto blocked = reachable_cells(b, s);
    CHECK(blocked[b.cell(1, 1)] == 1);
    CHECK(blocked[b.cell(2, 1)] == 0);
    CHECK(blocked[b.cell(3, 1)] == 0);
    auto open = reachable_cells(b, s, true);
    CHECK(open[b.cell(2, 1)] == 1);
    CHECK(open[b.cell(3, 1)] == 1);
}

TEST_CASE("brute force solves, proves unsolvable, and reports exhaustion") {
    Board solvable = parse_level(kTiny);
    auto r = brute_force_solve(solvable, 10000);
    REQUIRE(r.status == BruteForceStatus::Solved);
    CHECK(r.plan == std::vector<Move>{Move::Right});
    CHECK(plan_solves(solvable, r.plan));

    // Box in a corner that is not a goal: nothing can ever move it.
    Board dead = parse_level(
        "#####\n"
        "#$  #\n"
        "# @.#\n"
        "#####\n");
    CHECK(brute_force_solve(dead, 10000).status == BruteForceStatus::Unsolvable);

    Board roomy = parse_level(
        "########\n"
        "#      #\n"
        "# @ $  #\n"
        "#   .  #\n"
        "########\n");
    CHECK(brute_force_solve(roomy, 2).status == BruteForceStatus::Exhausted);
}

TEST_CASE("brute force plans match iterative deepening on micro levels") {
    // Enumerate small enclosed one-box layouts and compare optimal plan length
    // against a separately written depth-limited search.
    Rng rng(0x5EED5u);
    int compared = 0;
    while (compared < 40) {
        int w = 4 + static_cast<int>(rng.below(2)); // 4..5
        int h = 4 + static_cast<int>(rng.below(2));
        std::string text;
        std::vector<int> interior;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
                text += border ? '#' : ' ';
                if (!border) interior.push_back(y * (w + 1) + x);
            }
            text += '\n';
        }
        if (interior.size() < 3) continue;
        // Pick three distinct interior cells.
        std::set<int> picks;
        while (picks.size() < 3) picks.insert(interior[rng.below(interior.size())]);
        auto it = picks.begin();
        text[*it++] = '@';
        text[*it++] = '$';
        text[*it] = '.';

        Board b = parse_level(text);
        auto bf = brute_force_solve(b, 100000);
        if (bf.status == BruteForceStatus::Solved && bf.plan.size() <= 8) {
            CHECK(iddfs_optimal(b, 8) == static_cast<int>(bf.plan.size()));
            CHECK(plan_solves(b, bf.plan));
        } else if (bf.status == BruteForceStatus::Unsolvable) {
            CHECK(iddfs_optimal(b, 6) == -1);
        } else {
            continue; // deep plan, too slow for the depth-limited cross-check
        }
        ++compared;
    }
}

TEST_CASE("move letters round-trip") {
    for (Move m : kAllMoves) CHECK(move_from_letter(move_letter(m)) == m);
    CHECK_THROWS_AS(move_from_letter('x'), UsageError);
}
