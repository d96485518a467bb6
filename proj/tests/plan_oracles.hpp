// Test-only planning oracles: forward breadth-first search over the ground
// state space, derived straight from the TaskDescription. Independent of the
// sign-network machinery and of the regression planner.
#pragma once

#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "signpath/pddl.hpp"

namespace oracles {

using signpath::ActionSchema;
using signpath::Literal;
using signpath::LiteralTemplate;
using signpath::TaskDescription;
using signpath::TermRef;

using State = std::set<Literal>;

struct GroundOp {
    std::string name;
    std::vector<std::string> args;
    State pre, add, del;
};

inline Literal instantiate(const LiteralTemplate& t, const std::vector<std::string>& args) {
    Literal l;
    l.pred = t.pred;
    for (const TermRef& ref : t.args) l.args.push_back(ref.is_var() ? args[ref.var] : ref.constant);
    return l;
}

inline std::vector<GroundOp> ground_all(const TaskDescription& task) {
    std::vector<GroundOp> out;
    for (const ActionSchema& schema : task.actions) {
        std::vector<std::vector<std::string>> choices;
        for (const auto& [pname, ptype] : schema.params)
            choices.push_back(task.objects_of_type(ptype));
        std::vector<std::size_t> pick(choices.size(), 0);
        while (true) {
            bool ok = true;
            std::vector<std::string> args;
            for (std::size_t i = 0; i < choices.size(); ++i) {
                if (choices[i].empty()) {
                    ok = false;
                    break;
                }
                args.push_back(choices[i][pick[i]]);
            }
            if (ok) {
                GroundOp op;
                op.name = schema.name;
                op.args = args;
                for (const auto& t : schema.precondition) op.pre.insert(instantiate(t, args));
                for (const auto& t : schema.add_effects) op.add.insert(instantiate(t, args));
                for (const auto& t : schema.del_effects) op.del.insert(instantiate(t, args));
                out.push_back(std::move(op));
            }
            if (choices.empty()) break;
            std::size_t k = choices.size();
            while (k > 0) {
                if (++pick[k - 1] < choices[k - 1].size()) break;
                pick[k - 1] = 0;
                --k;
            }
            if (k == 0) break;
        }
    }
    return out;
}

inline std::string state_key(const State& s) {
    std::string key;
    for (const Literal& l : s) key += l.key();
    return key;
}

inline bool satisfies(const State& s, const State& goal) {
    for (const Literal& l : goal)
        if (!s.count(l)) return false;
    return true;
}

inline State apply_op(const State& s, const GroundOp& op) {
    State out;
    for (const Literal& l : s)
        if (!op.del.count(l)) out.insert(l);
    out.insert(op.add.begin(), op.add.end());
    return out;
}

/// Optimal plan length from init to goal, or -1 when unreachable.
inline int bfs_optimal_length(const TaskDescription& task, const State& init, const State& goal) {
    auto ops = ground_all(task);
    if (satisfies(init, goal)) return 0;
    std::deque<std::pair<State, int>> frontier{{init, 0}};
    std::unordered_set<std::string> seen{state_key(init)};
    while (!frontier.empty()) {
        auto [state, depth] = frontier.front();
        frontier.pop_front();
        for (const GroundOp& op : ops) {
            if (!satisfies(state, op.pre)) continue;
            State next = apply_op(state, op);
            if (satisfies(next, goal)) return depth + 1;
            if (seen.insert(state_key(next)).second) frontier.emplace_back(next, depth + 1);
        }
    }
    return -1;
}

/// All distinct arm-empty block configurations for the given block names,
/// as full state literal sets (without type literals). Every state is some
/// permutation of the blocks cut into consecutive towers, so enumerating
/// permutations x cut patterns and deduplicating covers them all
/// (13 states for 3 blocks, 73 for 4).
inline std::vector<State> enumerate_block_states(const std::vector<std::string>& blocks) {
    std::vector<std::string> perm = blocks;
    std::sort(perm.begin(), perm.end());
    std::vector<State> out;
    std::set<std::string> seen;
    const std::size_t n = perm.size();
    do {
        for (std::size_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
            State s;
            s.insert({"handempty", {}});
            std::size_t base = 0;
            for (std::size_t i = 0; i < n; ++i) {
                bool last_in_tower = (i == n - 1) || (cuts & (1u << i));
                if (i == base) s.insert({"ontable", {perm[i]}});
                if (i > base) s.insert({"on", {perm[i], perm[i - 1]}});
                if (last_in_tower) {
                    s.insert({"clear", {perm[i]}});
                    base = i + 1;
                }
            }
            if (seen.insert(state_key(s)).second) out.push_back(std::move(s));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace oracles
