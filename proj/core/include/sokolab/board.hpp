#pragma once

// Sokoban domain under MOVE semantics: an action moves the player one cell;
// stepping into a box pushes it one cell further if that cell is free.
//
// Level text format (XSB):
//   #  wall          @  player        $  box
//   .  goal          *  box on goal   +  player on goal
//   space or -       floor
// Lines may be ragged; short lines are right-padded with floor. Collections
// hold several levels separated by blank lines; lines starting with ';' are
// comments and are skipped.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sokolab/errors.hpp"
#include "sokolab/rng.hpp"

namespace sokolab {

enum class Move : std::uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline constexpr std::array<Move, 4> kAllMoves{Move::Up, Move::Down, Move::Left, Move::Right};

constexpr char move_letter(Move m) {
    constexpr char letters[4] = {'u', 'd', 'l', 'r'};
    return letters[static_cast<int>(m)];
}

constexpr int move_dx(Move m) {
    constexpr int dx[4] = {0, 0, -1, 1};
    return dx[static_cast<int>(m)];
}

constexpr int move_dy(Move m) {
    constexpr int dy[4] = {-1, 1, 0, 0};
    return dy[static_cast<int>(m)];
}

Move move_from_letter(char c); // throws UsageError on anything but u/d/l/r

// Search state: player cell plus box cells kept sorted ascending, so two states
// with the same occupancy compare equal regardless of construction order.
struct State {
    std::int32_t player = -1;
    std::vector<std::int32_t> boxes;

    bool operator==(const State&) const = default;
};

std::uint64_t state_key(const State& s); // stable 64-bit identity for caching/noise

struct StateHash {
    std::size_t operator()(const State& s) const { return static_cast<std::size_t>(state_key(s)); }
};

struct Board {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> wall; // width*height masks
    std::vector<std::uint8_t> goal;
    std::vector<std::int32_t> goals; // sorted cell list
    std::int32_t initial_player = -1;
    std::vector<std::int32_t> initial_boxes; // sorted

    int cell(int x, int y) const { return y * width + x; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    bool is_wall(int x, int y) const { return !in_bounds(x, y) || wall[cell(x, y)] != 0; }
    bool is_goal_cell(std::int32_t c) const { return goal[c] != 0; }

    bool operator==(const Board&) const = default;
};

// Throws MalformedLevel on: empty input, unknown characters, zero or several
// players, box/goal count mismatch or zero boxes, or any player/box/goal cell
// that can walk off the grid (unenclosed interior).
Board parse_level(std::string_view text);

std::string serialize_level(const Board& b);

// Blank-line separated collection; ';' comment lines ignored.
std::vector<Board> parse_level_collection(std::string_view text);

// Raw text blocks of a collection, same splitting rules as above.
std::vector<std::string> split_level_blocks(std::string_view text);

State initial_state(const Board& b);

bool is_goal(const Board& b, const State& s);

// Legal moves in fixed Up, Down, Left, Right order.
std::vector<Move> legal_moves(const Board& b, const State& s);

bool is_legal_move(const Board& b, const State& s, Move m);

State apply_move(const Board& b, const State& s, Move m); // throws IllegalMove

// Player-reachable cell mask via flood fill; boxes block unless ignore_boxes.
std::vector<std::uint8_t> reachable_cells(const Board& b, const State& s, bool ignore_boxes = false);

} // namespace sokolab
