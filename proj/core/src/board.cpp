#include "sokolab/board.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

namespace sokolab {

Move move_from_letter(char c) {
    switch (c) {
        case 'u': return Move::Up;
        case 'd': return Move::Down;
        case 'l': return Move::Left;
        case 'r': return Move::Right;
        default: throw UsageError(std::string("not a move letter: '") + c + "'");
    }
}

std::uint64_t state_key(const State& s) {
    std::uint64_t h = mix_bits(static_cast<std::uint64_t>(s.player) + 0x51ull);
    for (std::int32_t b : s.boxes)
        h = mix_bits(h ^ (static_cast<std::uint64_t>(b) * 0x9e3779b97f4a7c15ull + 0xb5ull));
    return h;
}

namespace {

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t-") == std::string::npos;
}

Board parse_block(const std::vector<std::string>& lines) {
    std::size_t width = 0;
    for (const auto& l : lines) width = std::max(width, l.size());
    if (lines.empty() || width == 0) throw MalformedLevel("empty level");

    Board b;
    b.width = static_cast<int>(width);
    b.height = static_cast<int>(lines.size());
    b.wall.assign(width * lines.size(), 0);
    b.goal.assign(width * lines.size(), 0);

    int players = 0;
    for (int y = 0; y < b.height; ++y) {
        const std::string& row = lines[static_cast<std::size_t>(y)];
        for (int x = 0; x < b.width; ++x) {
            const char c = x < static_cast<int>(row.size()) ? row[static_cast<std::size_t>(x)] : ' ';
            const int idx = b.cell(x, y);
            switch (c) {
                case '#': b.wall[idx] = 1; break;
                case ' ':
                case '-': break;
                case '@':
                    b.initial_player = idx;
                    ++players;
                    break;
                case '+':
                    b.initial_player = idx;
                    ++players;
                    b.goal[idx] = 1;
                    break;
                case '$': b.initial_boxes.push_back(idx); break;
                case '*':
                    b.initial_boxes.push_back(idx);
                    b.goal[idx] = 1;
                    break;
                case '.': b.goal[idx] = 1; break;
                default:
                    throw MalformedLevel(std::string("unknown character '") + c + "' at row " +
                                         std::to_string(y));
            }
        }
    }

    if (players == 0) throw MalformedLevel("no player");
    if (players > 1) throw MalformedLevel("multiple players");
    std::sort(b.initial_boxes.begin(), b.initial_boxes.end());
    for (int c = 0; c < b.width * b.height; ++c)
        if (b.goal[c]) b.goals.push_back(c);
    if (b.initial_boxes.empty()) throw MalformedLevel("no boxes");
    if (b.goals.size() != b.initial_boxes.size())
        throw MalformedLevel("box/goal count mismatch: " + std::to_string(b.initial_boxes.size()) +
                             " boxes vs " + std::to_string(b.goals.size()) + " goals");

    // Enclosure: everything semantically placed (player, boxes, goals) must sit in
    // a wall-bounded pocket. Flood over non-wall cells; reaching the grid rim means
    // the next step would leave the grid.
    std::vector<std::uint8_t> seen(b.wall.size(), 0);
    std::deque<int> queue;
    auto push = [&](int idx) {
        if (!seen[idx]) {
            seen[idx] = 1;
            queue.push_back(idx);
        }
    };
    push(b.initial_player);
    for (int c : b.initial_boxes) push(c);
    for (int c : b.goals) push(c);
    while (!queue.empty()) {
        const int idx = queue.front();
        queue.pop_front();
        const int x = idx % b.width, y = idx / b.width;
        if (x == 0 || y == 0 || x == b.width - 1 || y == b.height - 1)
            throw MalformedLevel("unenclosed level: open cell on the grid rim");
        for (Move m : kAllMoves) {
            const int nx = x + move_dx(m), ny = y + move_dy(m);
            if (!b.is_wall(nx, ny)) push(b.cell(nx, ny));
        }
    }
    return b;
}

} // namespace

Board parse_level(std::string_view text) {
    auto lines = split_lines(text);
    std::vector<std::string> block;
    for (auto& l : lines) {
        if (!l.empty() && l[0] == ';') continue;
        if (blank(l)) {
            if (!block.empty()) break; // first level only
            continue;
        }
        block.push_back(l);
    }
    if (block.empty()) throw MalformedLevel("empty level");
    return parse_block(block);
}

std::vector<Board> parse_level_collection(std::string_view text) {
    std::vector<Board> out;
    for (const std::string& block : split_level_blocks(text)) out.push_back(parse_level(block));
    if (out.empty()) throw MalformedLevel("empty collection");
    return out;
}

std::vector<std::string> split_level_blocks(std::string_view text) {
    auto lines = split_lines(text);
    std::vector<std::string> out;
    std::string block;
    auto flush = [&] {
        if (!block.empty()) {
            out.push_back(block);
            block.clear();
        }
    };
    for (auto& l : lines) {
        if (!l.empty() && l[0] == ';') continue;
        if (blank(l)) {
            flush();
        } else {
            block += l;
            block += '\n';
        }
    }
    flush();
    return out;
}

std::string serialize_level(const Board& b) {
    std::string out;
    for (int y = 0; y < b.height; ++y) {
        std::string row;
        for (int x = 0; x < b.width; ++x) {
            const int idx = b.cell(x, y);
            char c = ' ';
            if (b.wall[idx])
                c = '#';
            else if (idx == b.initial_player)
                c = b.goal[idx] ? '+' : '@';
            else if (std::binary_search(b.initial_boxes.begin(), b.initial_boxes.end(), idx))
                c = b.goal[idx] ? '*' : '$';
            else if (b.goal[idx])
                c = '.';
            row += c;
        }
        while (!row.empty() && row.back() == ' ') row.pop_back();
        out += row;
        out += '\n';
    }
    return out;
}

State initial_state(const Board& b) {
    State s;
    s.player = b.initial_player;
    s.boxes = b.initial_boxes;
    return s;
}

bool is_goal(const Board& b, const State& s) {
    for (std::int32_t c : s.boxes)
        if (!b.goal[c]) return false;
    return true;
}

namespace {

inline bool has_box(const State& s, std::int32_t c) {
    return std::binary_search(s.boxes.begin(), s.boxes.end(), c);
}

} // namespace

bool is_legal_move(const Board& b, const State& s, Move m) {
    const int x = s.player % b.width, y = s.player / b.width;
    const int tx = x + move_dx(m), ty = y + move_dy(m);
    if (b.is_wall(tx, ty)) return false;
    const std::int32_t target = b.cell(tx, ty);
    if (!has_box(s, target)) return true;
    const int bx = tx + move_dx(m), by = ty + move_dy(m);
    if (b.is_wall(bx, by)) return false;
    return !has_box(s, b.cell(bx, by));
}

std::vector<Move> legal_moves(const Board& b, const State& s) {
    std::vector<Move> out;
    for (Move m : kAllMoves)
        if (is_legal_move(b, s, m)) out.push_back(m);
    return out;
}

State apply_move(const Board& b, const State& s, Move m) {
    if (!is_legal_move(b, s, m))
        throw IllegalMove(std::string("illegal move '") + move_letter(m) + "'");
    const int x = s.player % b.width, y = s.player / b.width;
    const std::int32_t target = b.cell(x + move_dx(m), y + move_dy(m));
    State next;
    next.player = target;
    next.boxes = s.boxes;
    if (has_box(s, target)) {
        const std::int32_t pushed = b.cell(x + 2 * move_dx(m), y + 2 * move_dy(m));
        auto it = std::lower_bound(next.boxes.begin(), next.boxes.end(), target);
        next.boxes.erase(it);
        next.boxes.insert(std::lower_bound(next.boxes.begin(), next.boxes.end(), pushed), pushed);
    }
    return next;
}

std::vector<std::uint8_t> reachable_cells(const Board& b, const State& s, bool ignore_boxes) {
    std::vector<std::uint8_t> seen(b.wall.size(), 0);
    std::deque<int> queue;
    seen[s.player] = 1;
    queue.push_back(s.player);
    while (!queue.empty()) {
        const int idx = queue.front();
        queue.pop_front();
        const int x = idx % b.width, y = idx / b.width;
        for (Move m : kAllMoves) {
            const int nx = x + move_dx(m), ny = y + move_dy(m);
            if (b.is_wall(nx, ny)) continue;
            const int n = b.cell(nx, ny);
            if (seen[n]) continue;
            if (!ignore_boxes && has_box(s, n)) continue;
            seen[n] = 1;
            queue.push_back(n);
        }
    }
    return seen;
}

} // namespace sokolab
