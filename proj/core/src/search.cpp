#include "sokolab/search.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace sokolab {

const char* eval_name(EvalVariant v) {
    switch (v) {
        case EvalVariant::Depth: return "depth";
        case EvalVariant::Greedy: return "greedy";
        case EvalVariant::DepthValue: return "depth-value";
        case EvalVariant::PurePolicy: return "pure-policy";
        case EvalVariant::PHS: return "phs";
        case EvalVariant::PHSStar: return "phs-star";
        case EvalVariant::PolicyGreedy: return "policy-greedy";
        case EvalVariant::Ours: return "ours";
    }
    return "?";
}

EvalFunction parse_eval(const std::string& name, double weight) {
    for (EvalVariant v : {EvalVariant::Depth, EvalVariant::Greedy, EvalVariant::DepthValue,
                          EvalVariant::PurePolicy, EvalVariant::PHS, EvalVariant::PHSStar,
                          EvalVariant::PolicyGreedy, EvalVariant::Ours})
        if (name == eval_name(v)) return {v, weight};
    throw UsageError("unknown evaluation function: " + name);
}

double eval_f(EvalFunction eval, std::uint64_t g, double h, double p, double pi) {
    p = std::max(p, 1e-9);
    pi = std::max(pi, DBL_MIN);
    const double gd = static_cast<double>(g);
    switch (eval.variant) {
        case EvalVariant::Depth: return gd;
        case EvalVariant::Greedy: return h;
        case EvalVariant::DepthValue: return gd + eval.weight * h;
        case EvalVariant::PurePolicy: return 1.0 / p;
        case EvalVariant::PHS: return (gd + h) / pi;
        case EvalVariant::PHSStar: return (gd + h) / std::pow(pi, 1.0 + h / gd);
        case EvalVariant::PolicyGreedy: return h / p;
        case EvalVariant::Ours: return (gd + eval.weight * h) / p;
    }
    return 0.0;
}

namespace {

struct Node {
    State state;
    std::int64_t parent = -1; // arena index
    Move via = Move::Up;
    std::uint64_t g = 0;
    double h = 0.0;
    double p = 1.0;  // edge probability from the parent
    double pi = 1.0; // path probability product
    double f = 0.0;
};

struct OpenEntry {
    double f;
    std::uint64_t seq; // FIFO tie-break: earlier generated first
    std::size_t node;
};

struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        return a.seq > b.seq;
    }
};

std::vector<Move> plan_through(const std::vector<Node>& arena, std::int64_t leaf) {
    std::vector<Move> plan;
    for (std::int64_t i = leaf; i > 0; i = arena[i].parent) plan.push_back(arena[i].via);
    std::reverse(plan.begin(), plan.end());
    return plan;
}

} // namespace

SearchOutcome best_first_search(const Board& b, EvalFunction eval, const StochasticOracle& oracle,
                                std::uint64_t budget, bool record_trace) {
    SearchOutcome out;

    std::vector<Node> arena;
    std::unordered_map<State, std::size_t, StateHash> seen;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
    std::vector<std::int64_t> expand_id; // arena index -> trace node id
    std::uint64_t seq = 0;

    const State root = initial_state(b);
    {
        Node n;
        n.state = root;
        n.h = oracle.value(root);
        arena.push_back(n);
        expand_id.push_back(-1);
        seen.emplace(root, 0);
    }

    auto record_expansion = [&](std::size_t idx) {
        if (!record_trace) return;
        expand_id[idx] = static_cast<std::int64_t>(out.trace.log.size());
        const Node& n = arena[idx];
        const std::int64_t parent_id = n.parent < 0 ? -1 : expand_id[n.parent];
        out.trace.log.push_back({static_cast<std::uint64_t>(expand_id[idx]), parent_id,
                                 state_key(n.state), n.g, n.h, n.p, n.f});
    };

    auto solved_at = [&](std::size_t idx) {
        // idx is the goal node; log it as the final entry
        if (record_trace) {
            record_expansion(idx);
            out.trace.goal_node = static_cast<std::uint64_t>(expand_id[idx]);
        } else {
            out.trace.goal_node = out.expansions; // dense id it would have received
        }
        out.status = SearchStatus::Solved;
        out.plan = plan_through(arena, static_cast<std::int64_t>(idx));
    };

    if (is_goal(b, root)) {
        solved_at(0);
        return out;
    }

    open.push({0.0, seq++, 0});

    while (!open.empty()) {
        if (out.expansions == budget) {
            out.status = SearchStatus::BudgetExhausted;
            return out;
        }
        const std::size_t cur = open.top().node;
        open.pop();
        record_expansion(cur);
        ++out.expansions;

        const PolicyEstimate policy = oracle.policy(arena[cur].state);
        const std::uint64_t child_g = arena[cur].g + 1;
        const double parent_pi = arena[cur].pi;

        for (Move m : kAllMoves) {
            if (!is_legal_move(b, arena[cur].state, m)) continue;
            State child = apply_move(b, arena[cur].state, m);
            if (seen.count(child)) continue;

            const double p = std::max(policy.prob[static_cast<int>(m)], 1e-9);
            const double pi = std::max(parent_pi * p, DBL_MIN);
            Node n;
            n.parent = static_cast<std::int64_t>(cur);
            n.via = m;
            n.g = child_g;
            n.p = p;
            n.pi = pi;
            n.h = oracle.value(child);
            n.f = eval_f(eval, child_g, n.h, p, pi);
            n.state = std::move(child);

            const bool goal = is_goal(b, n.state);
            seen.emplace(n.state, arena.size());
            arena.push_back(std::move(n));
            expand_id.push_back(-1);
            if (goal) {
                solved_at(arena.size() - 1);
                return out;
            }
            open.push({arena.back().f, seq++, arena.size() - 1});
        }
    }

    out.status = SearchStatus::ProvedUnsolvable;
    return out;
}

RuntimeSample run_randomized(const Board& b, EvalFunction eval, const OracleConfig& cfg,
                             std::uint64_t budget, std::uint32_t n_runs) {
    RuntimeSample sample;
    sample.cap = budget;
    sample.costs.reserve(n_runs);
    sample.solved.reserve(n_runs);
    for (std::uint32_t run = 0; run < n_runs; ++run) {
        StochasticOracle oracle(b, cfg, derive_key(cfg.seed, run));
        const SearchOutcome out = best_first_search(b, eval, oracle, budget, false);
        if (out.status == SearchStatus::Solved) {
            sample.costs.push_back(std::max<std::uint64_t>(out.expansions, 1));
            sample.solved.push_back(1);
        } else {
            sample.costs.push_back(budget);
            sample.solved.push_back(0);
        }
    }
    return sample;
}

std::string trace_to_edge_list(const SearchTrace& t) {
    std::string out;
    char line[160];
    for (const TraceEntry& e : t.log) {
        std::snprintf(line, sizeof line, "%llu %lld %016llx %llu %.17g %.17g %.17g\n",
                      static_cast<unsigned long long>(e.node), static_cast<long long>(e.parent),
                      static_cast<unsigned long long>(e.state),
                      static_cast<unsigned long long>(e.g), e.h, e.p, e.f);
        out += line;
    }
    if (t.goal_node) {
        std::snprintf(line, sizeof line, "goal %llu\n",
                      static_cast<unsigned long long>(*t.goal_node));
        out += line;
    }
    return out;
}

SearchTrace trace_from_edge_list(const std::string& text) {
    SearchTrace t;
    std::istringstream in(text);
    std::string token;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        ls >> token;
        if (token == "goal") {
            std::uint64_t id = 0;
            if (!(ls >> id)) throw UsageError("trace: malformed goal line");
            t.goal_node = id;
            continue;
        }
        TraceEntry e;
        try {
            e.node = std::stoull(token);
        } catch (const std::exception&) {
            throw UsageError("trace: malformed node id '" + token + "'");
        }
        std::string hex;
        if (!(ls >> e.parent >> hex >> e.g >> e.h >> e.p >> e.f))
            throw UsageError("trace: malformed entry for node " + token);
        e.state = std::stoull(hex, nullptr, 16);
        t.log.push_back(e);
    }
    return t;
}

} // namespace sokolab
