#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "signpath/pddl.hpp"

namespace signpath {

/// Bit table over feature links: rows are features, columns are moments in
/// time. For procedural signs the condition columns precede the effect
/// columns.
struct PredictionMatrix {
    struct Row {
        std::string label;  // e.g. "(on ?x ?y)"
        std::string target; // referenced sign
        friend bool operator==(const Row&, const Row&) = default;
    };

    std::vector<Row> rows;
    std::vector<std::vector<bool>> bits; // rows x cols
    int condition_cols = 0;

    int cols() const { return rows.empty() ? 0 : static_cast<int>(bits.front().size()); }

    bool well_formed() const {
        int c = cols();
        for (const auto& row : bits) {
            if (static_cast<int>(row.size()) != c) return false;
            if (std::none_of(row.begin(), row.end(), [](bool b) { return b; })) return false;
        }
        for (int j = 0; j < c; ++j) {
            bool any = false;
            for (const auto& row : bits) any = any || row[j];
            if (!any) return false;
        }
        return true;
    }
};

/// Grounded instantiation of a sign's significance plus the preference score
/// it accumulated from executed plans.
struct PersonalMeaning {
    std::vector<std::string> bindings;
    int score = 0;
};

struct Sign {
    enum class Kind { Type, Object, Predicate, Action };

    std::string name;
    Kind kind = Kind::Object;
    std::vector<PredictionMatrix> image;
    std::vector<PersonalMeaning> meanings;
};

struct RoleSlot {
    std::string name;
    std::string type;
};

/// Sign whose matrices carry a fixed condition-then-effect ordering: a
/// deterministic action. `deviation` is the permitted lateral corridor
/// (in meters) for relocation actions.
struct ProceduralSign {
    std::string name;
    std::vector<RoleSlot> roles;
    std::vector<LiteralTemplate> condition;
    std::vector<LiteralTemplate> added;
    std::vector<LiteralTemplate> removed;
    std::optional<std::pair<double, double>> deviation;
};

using Situation = std::set<Literal>;

struct GroundAction {
    std::string name;
    std::vector<std::string> args;

    std::string key() const {
        std::string s = "(" + name;
        for (const auto& a : args) s += " " + a;
        return s + ")";
    }

    friend bool operator==(const GroundAction&, const GroundAction&) = default;
    friend auto operator<=>(const GroundAction&, const GroundAction&) = default;
};

/// The semiotic network: signs plus the three relation views (image,
/// significance, meaning links). The views are derived from sign components
/// and never edited on their own.
class SignNetwork {
public:
    const std::map<std::string, Sign>& signs() const { return signs_; }
    const std::map<std::string, ProceduralSign>& procedural() const { return actions_; }
    const std::map<std::string, std::string>& object_types() const { return objects_; }
    const std::map<std::string, std::string>& type_parents() const { return types_; }

    bool has_sign(const std::string& name) const { return signs_.count(name) > 0; }

    bool is_subtype(const std::string& t, const std::string& ancestor) const {
        if (ancestor == "object") return true;
        std::string cur = t;
        while (!cur.empty()) {
            if (cur == ancestor) return true;
            auto it = types_.find(cur);
            cur = it == types_.end() ? std::string() : it->second;
        }
        return false;
    }

    std::vector<std::string> objects_of_type(const std::string& type) const {
        std::vector<std::string> out;
        for (const auto& [name, t] : objects_)
            if (is_subtype(t, type)) out.push_back(name);
        return out;
    }

    /// Wp view: signs referenced by this sign's image matrices.
    std::vector<std::string> image_links(const std::string& name) const {
        std::set<std::string> out;
        auto it = signs_.find(name);
        if (it != signs_.end())
            for (const PredictionMatrix& m : it->second.image)
                for (const auto& row : m.rows) out.insert(row.target);
        return {out.begin(), out.end()};
    }

    /// Wm view: signs whose image requires this sign.
    std::vector<std::string> significance_links(const std::string& name) const {
        std::vector<std::string> out;
        for (const auto& [other, sign] : signs_) {
            (void)sign;
            auto links = image_links(other);
            if (std::binary_search(links.begin(), links.end(), name)) out.push_back(other);
        }
        return out;
    }

    /// Wa view: objects bound in this sign's personal meanings.
    std::vector<std::string> meaning_links(const std::string& name) const {
        std::set<std::string> out;
        auto it = signs_.find(name);
        if (it != signs_.end())
            for (const PersonalMeaning& m : it->second.meanings)
                for (const auto& b : m.bindings) out.insert(b);
        return {out.begin(), out.end()};
    }

    int meaning_score(const GroundAction& action) const {
        auto it = scores_.find(action.key());
        return it == scores_.end() ? 0 : it->second;
    }

    /// Counts one more execution of the action in a realized plan.
    void bump_meaning(const GroundAction& action) {
        int& score = scores_[action.key()];
        ++score;
        auto sit = signs_.find(action.name);
        if (sit == signs_.end()) return;
        for (PersonalMeaning& m : sit->second.meanings) {
            if (m.bindings == action.args) {
                m.score = score;
                return;
            }
        }
        sit->second.meanings.push_back({action.args, score});
    }

    void set_meaning_score(const GroundAction& action, int score) {
        scores_[action.key()] = score;
        auto sit = signs_.find(action.name);
        if (sit == signs_.end()) return;
        for (PersonalMeaning& m : sit->second.meanings) {
            if (m.bindings == action.args) {
                m.score = score;
                return;
            }
        }
        sit->second.meanings.push_back({action.args, score});
    }

    void set_action_deviation(const std::string& name, double h1, double h2) {
        auto it = actions_.find(name);
        if (it == actions_.end()) throw not_found("unknown procedural sign: " + name);
        it->second.deviation = {h1, h2};
    }

    friend SignNetwork build_sign_network(const TaskDescription& task);

private:
    std::map<std::string, Sign> signs_;
    std::map<std::string, ProceduralSign> actions_;
    std::map<std::string, std::string> objects_;
    std::map<std::string, std::string> types_;
    std::unordered_map<std::string, int> scores_;
};

namespace signworld_detail {

inline std::string template_label(const LiteralTemplate& t, const std::vector<RoleSlot>& roles) {
    std::string s = "(" + t.pred;
    for (const TermRef& a : t.args) s += " " + (a.is_var() ? roles[a.var].name : a.constant);
    return s + ")";
}

inline PredictionMatrix action_matrix(const ProceduralSign& a) {
    PredictionMatrix m;
    std::vector<std::pair<std::string, std::string>> labels; // (label, target)
    auto add_rows = [&](const std::vector<LiteralTemplate>& ts) {
        for (const LiteralTemplate& t : ts) {
            std::string label = template_label(t, a.roles);
            if (std::none_of(labels.begin(), labels.end(),
                             [&](auto& p) { return p.first == label; }))
                labels.emplace_back(label, t.pred);
        }
    };
    add_rows(a.condition);
    add_rows(a.added);
    m.condition_cols = a.condition.empty() ? 0 : 1;
    int effect_cols = a.added.empty() ? 0 : 1;
    int ncols = m.condition_cols + effect_cols;
    for (auto& [label, target] : labels) {
        m.rows.push_back({label, target});
        std::vector<bool> bits(ncols, false);
        auto member = [&](const std::vector<LiteralTemplate>& ts) {
            return std::any_of(ts.begin(), ts.end(), [&](const LiteralTemplate& t) {
                return template_label(t, a.roles) == label;
            });
        };
        if (m.condition_cols && member(a.condition)) bits[0] = true;
        if (effect_cols && member(a.added)) bits[m.condition_cols] = true;
        m.bits.push_back(std::move(bits));
    }
    return m;
}

} // namespace signworld_detail

/// Translates a parsed task into the sign network: one sign per type, object
/// and predicate schema, one procedural sign per action schema.
inline SignNetwork build_sign_network(const TaskDescription& task) {
    SignNetwork net;
    net.types_ = task.types;
    net.objects_ = task.objects;

    for (const auto& [type, parent] : task.types) {
        Sign s;
        s.name = type;
        s.kind = Sign::Kind::Type;
        if (!parent.empty()) {
            PredictionMatrix m;
            m.rows.push_back({parent, parent});
            m.bits.push_back({true});
            s.image.push_back(std::move(m));
        }
        net.signs_[type] = std::move(s);
    }

    for (const auto& [name, type] : task.objects) {
        Sign s;
        s.name = name;
        s.kind = Sign::Kind::Object;
        PredictionMatrix m;
        m.rows.push_back({type, type});
        m.bits.push_back({true});
        s.image.push_back(std::move(m));
        net.signs_[name] = std::move(s);
    }

    for (const auto& [name, param_types] : task.predicates) {
        Sign s;
        s.name = name;
        s.kind = Sign::Kind::Predicate;
        if (!param_types.empty()) {
            PredictionMatrix m;
            for (const std::string& t : param_types) m.rows.push_back({t, t});
            for (std::size_t i = 0; i < param_types.size(); ++i) m.bits.push_back({true});
            s.image.push_back(std::move(m));
        }
        net.signs_[name] = std::move(s);
    }

    for (const ActionSchema& schema : task.actions) {
        ProceduralSign a;
        a.name = schema.name;
        for (const auto& [pname, ptype] : schema.params) a.roles.push_back({pname, ptype});
        a.condition = schema.precondition;
        a.added = schema.add_effects;
        a.removed = schema.del_effects;

        Sign s;
        s.name = schema.name;
        s.kind = Sign::Kind::Action;
        s.image.push_back(signworld_detail::action_matrix(a));
        net.signs_[schema.name] = std::move(s);
        net.actions_[schema.name] = std::move(a);
    }
    return net;
}

// --- MAP steps --------------------------------------------------------------

/// Partially bound procedural sign produced by the M-step. Unbound roles
/// hold an empty string.
struct ActionCandidate {
    std::string action;
    std::vector<std::string> binding;

    friend bool operator==(const ActionCandidate&, const ActionCandidate&) = default;
    friend auto operator<=>(const ActionCandidate&, const ActionCandidate&) = default;
};

namespace signworld_detail {

inline std::optional<std::vector<std::string>> unify(const SignNetwork& net,
                                                     const ProceduralSign& a,
                                                     const LiteralTemplate& tpl,
                                                     const Literal& fact) {
    if (tpl.pred != fact.pred || tpl.args.size() != fact.args.size()) return std::nullopt;
    std::vector<std::string> binding(a.roles.size());
    for (std::size_t i = 0; i < tpl.args.size(); ++i) {
        const TermRef& ref = tpl.args[i];
        const std::string& value = fact.args[i];
        if (ref.is_var()) {
            if (!net.is_subtype(net.object_types().count(value) ? net.object_types().at(value)
                                                                : std::string("object"),
                                a.roles[ref.var].type))
                return std::nullopt;
            if (!binding[ref.var].empty() && binding[ref.var] != value) return std::nullopt;
            binding[ref.var] = value;
        } else if (ref.constant != value) {
            return std::nullopt;
        }
    }
    return binding;
}

inline Literal ground_template(const LiteralTemplate& tpl, const std::vector<std::string>& args) {
    Literal out;
    out.pred = tpl.pred;
    for (const TermRef& ref : tpl.args)
        out.args.push_back(ref.is_var() ? args[ref.var] : ref.constant);
    return out;
}

} // namespace signworld_detail

/// M-step: selects the procedural signs with at least one added effect that
/// unifies against a situation literal, paired with the partial role
/// assignment from that unification. Deterministic: sorted by sign name,
/// then binding.
inline std::vector<ActionCandidate> m_step(const SignNetwork& net, const Situation& situation) {
    std::set<ActionCandidate> out;
    for (const auto& [name, action] : net.procedural()) {
        for (const LiteralTemplate& add : action.added) {
            for (const Literal& fact : situation) {
                if (auto binding = signworld_detail::unify(net, action, add, fact))
                    out.insert({name, *binding});
            }
        }
    }
    return {out.begin(), out.end()};
}

/// A-step: completes the partial bindings over typed objects and rates each
/// ground action by its personal-meaning score plus a literal-count bonus
/// (effects already in the situation minus missing conditions). Descending
/// by score, ties broken by name then binding.
inline std::vector<GroundAction> a_step(const SignNetwork& net,
                                        const std::vector<ActionCandidate>& candidates,
                                        const Situation& situation) {
    std::set<GroundAction> grounded;
    for (const ActionCandidate& cand : candidates) {
        auto it = net.procedural().find(cand.action);
        if (it == net.procedural().end()) continue;
        const ProceduralSign& action = it->second;
        std::vector<std::string> binding = cand.binding;
        std::vector<int> open_slots;
        for (std::size_t i = 0; i < binding.size(); ++i)
            if (binding[i].empty()) open_slots.push_back(static_cast<int>(i));

        std::vector<std::vector<std::string>> choices;
        for (int slot : open_slots)
            choices.push_back(net.objects_of_type(action.roles[slot].type));

        std::vector<std::size_t> pick(open_slots.size(), 0);
        while (true) {
            bool ok = true;
            for (std::size_t i = 0; i < open_slots.size(); ++i) {
                if (choices[i].empty()) {
                    ok = false;
                    break;
                }
                binding[open_slots[i]] = choices[i][pick[i]];
            }
            if (!ok) break;
            grounded.insert({cand.action, binding});
            if (open_slots.empty()) break;
            std::size_t k = open_slots.size();
            while (k > 0) {
                if (++pick[k - 1] < choices[k - 1].size()) break;
                pick[k - 1] = 0;
                --k;
            }
            if (k == 0) break;
        }
    }

    auto score_of = [&](const GroundAction& ga) {
        const ProceduralSign& action = net.procedural().at(ga.name);
        int matched = 0, missing = 0;
        for (const LiteralTemplate& t : action.added)
            if (situation.count(signworld_detail::ground_template(t, ga.args))) ++matched;
        for (const LiteralTemplate& t : action.condition)
            if (!situation.count(signworld_detail::ground_template(t, ga.args))) ++missing;
        return net.meaning_score(ga) + matched - missing;
    };

    std::vector<std::pair<int, GroundAction>> scored;
    for (const GroundAction& ga : grounded) scored.emplace_back(score_of(ga), ga);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<GroundAction> out;
    out.reserve(scored.size());
    for (auto& [s, ga] : scored) {
        (void)s;
        out.push_back(std::move(ga));
    }
    return out;
}

/// P-step: regression through a ground action. The action must achieve part
/// of the situation and must not delete any of it; the predecessor situation
/// swaps the achieved effects for the action's condition.
inline std::optional<Situation> p_step(const SignNetwork& net, const GroundAction& action,
                                       const Situation& situation) {
    auto it = net.procedural().find(action.name);
    if (it == net.procedural().end()) return std::nullopt;
    const ProceduralSign& schema = it->second;

    std::set<Literal> adds, dels, conds;
    for (const LiteralTemplate& t : schema.added)
        adds.insert(signworld_detail::ground_template(t, action.args));
    for (const LiteralTemplate& t : schema.removed)
        dels.insert(signworld_detail::ground_template(t, action.args));
    for (const LiteralTemplate& t : schema.condition)
        conds.insert(signworld_detail::ground_template(t, action.args));

    bool achieves = std::any_of(adds.begin(), adds.end(),
                                [&](const Literal& l) { return situation.count(l) > 0; });
    if (!achieves) return std::nullopt;
    for (const Literal& l : dels)
        if (situation.count(l)) return std::nullopt;

    Situation prev;
    for (const Literal& l : situation)
        if (!adds.count(l)) prev.insert(l);
    prev.insert(conds.begin(), conds.end());
    return prev;
}

// --- plan search -------------------------------------------------------------

struct PlanLimits {
    std::size_t max_iterations = 200000;
    std::size_t max_frontier = 1000000;
};

enum class PlanStatus { Found, Unsolvable, ResourceExhausted };

struct PlanStep {
    GroundAction action;
    Situation expected; // situation after the step under forward simulation
};

struct Plan {
    std::vector<PlanStep> steps;
};

struct PlanResult {
    PlanStatus status = PlanStatus::Unsolvable;
    Plan plan;
    std::size_t expanded = 0;
};

namespace signworld_detail {

// Interned-literal planning engine. Semantics match m_step/a_step/p_step;
// the interning exists so situation hashing and set algebra stay cheap over
// thousands of episodes.
struct Engine {
    const SignNetwork& net;
    std::unordered_map<std::string, int> lit_ids;
    std::vector<Literal> lits;

    struct Ground {
        GroundAction action;
        std::vector<int> pre, add, del;
    };
    std::vector<Ground> ground;
    std::unordered_map<int, std::vector<int>> by_add; // literal -> ground actions adding it

    explicit Engine(const SignNetwork& n) : net(n) { ground_all(); }

    int intern(const Literal& l) {
        auto [it, fresh] = lit_ids.try_emplace(l.key(), static_cast<int>(lits.size()));
        if (fresh) lits.push_back(l);
        return it->second;
    }

    std::vector<int> intern_all(const Situation& s) {
        std::vector<int> out;
        out.reserve(s.size());
        for (const Literal& l : s) out.push_back(intern(l));
        std::sort(out.begin(), out.end());
        return out;
    }

    void ground_all() {
        for (const auto& [name, action] : net.procedural()) {
            std::vector<std::vector<std::string>> choices;
            for (const RoleSlot& role : action.roles)
                choices.push_back(net.objects_of_type(role.type));
            std::vector<std::size_t> pick(choices.size(), 0);
            while (true) {
                bool ok = true;
                GroundAction ga;
                ga.name = name;
                for (std::size_t i = 0; i < choices.size(); ++i) {
                    if (choices[i].empty()) {
                        ok = false;
                        break;
                    }
                    ga.args.push_back(choices[i][pick[i]]);
                }
                if (ok) {
                    Ground g;
                    g.action = ga;
                    for (const LiteralTemplate& t : action.condition)
                        g.pre.push_back(intern(ground_template(t, ga.args)));
                    for (const LiteralTemplate& t : action.added)
                        g.add.push_back(intern(ground_template(t, ga.args)));
                    for (const LiteralTemplate& t : action.removed)
                        g.del.push_back(intern(ground_template(t, ga.args)));
                    auto dedup = [](std::vector<int>& v) {
                        std::sort(v.begin(), v.end());
                        v.erase(std::unique(v.begin(), v.end()), v.end());
                    };
                    dedup(g.pre);
                    dedup(g.add);
                    dedup(g.del);
                    int idx = static_cast<int>(ground.size());
                    for (int lit : g.add) by_add[lit].push_back(idx);
                    ground.push_back(std::move(g));
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
    }

    static bool subset(const std::vector<int>& a, const std::vector<int>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }

    static std::string key_of(const std::vector<int>& sit) {
        std::string key;
        key.reserve(sit.size() * 4);
        for (int v : sit) {
            key.append(reinterpret_cast<const char*>(&v), sizeof(v));
        }
        return key;
    }
};

} // namespace signworld_detail

/// MAP planning: best-first regression from the goal situation, iterating
/// M-, A- and P-steps until a frontier situation is included in the start
/// situation. Uniform step cost makes the search breadth-first over plan
/// length, so returned plans are as short as possible; the A-step ranking
/// decides which optimal plan is found first. Returned plans are validated
/// by forward simulation.
inline PlanResult map_plan(const SignNetwork& net, const Situation& start, const Situation& goal,
                           const PlanLimits& limits = {}) {
    using signworld_detail::Engine;
    PlanResult result;
    Engine eng(net);

    std::vector<int> start_sit = eng.intern_all(start);
    std::vector<int> goal_sit = eng.intern_all(goal);

    struct Node {
        std::vector<int> sit;
        int parent = -1;
        int ga = -1;
        int depth = 0;
    };
    std::vector<Node> arena;
    std::deque<int> frontier;
    std::unordered_set<std::string> visited;

    auto finish = [&](int leaf) {
        // Leaf-to-root order is already forward execution order.
        std::vector<GroundAction> actions;
        for (int at = leaf; at >= 0 && arena[at].ga >= 0; at = arena[at].parent)
            actions.push_back(eng.ground[arena[at].ga].action);

        // Forward validation against the public step semantics.
        Situation current = start;
        result.plan.steps.clear();
        for (const GroundAction& ga : actions) {
            const ProceduralSign& schema = net.procedural().at(ga.name);
            for (const LiteralTemplate& t : schema.condition) {
                Literal need = signworld_detail::ground_template(t, ga.args);
                if (!current.count(need))
                    throw error("plan validation failed: missing condition " + need.key());
            }
            for (const LiteralTemplate& t : schema.removed)
                current.erase(signworld_detail::ground_template(t, ga.args));
            for (const LiteralTemplate& t : schema.added)
                current.insert(signworld_detail::ground_template(t, ga.args));
            result.plan.steps.push_back({ga, current});
        }
        for (const Literal& l : goal)
            if (!current.count(l)) throw error("plan validation failed: goal " + l.key());
        result.status = PlanStatus::Found;
    };

    if (Engine::subset(goal_sit, start_sit)) {
        result.status = PlanStatus::Found;
        return result;
    }

    arena.push_back({goal_sit, -1, -1, 0});
    frontier.push_back(0);
    visited.insert(Engine::key_of(goal_sit));

    while (!frontier.empty()) {
        if (result.expanded >= limits.max_iterations || arena.size() >= limits.max_frontier) {
            result.status = PlanStatus::ResourceExhausted;
            return result;
        }
        int at = frontier.front();
        frontier.pop_front();
        ++result.expanded;
        const std::vector<int> sit = arena[at].sit;

        // M-step over the interned situation: actions achieving some literal.
        std::set<int> cand_set;
        for (int lit : sit) {
            auto it = eng.by_add.find(lit);
            if (it != eng.by_add.end()) cand_set.insert(it->second.begin(), it->second.end());
        }

        // A-step ranking: meaning score plus the literal-count bonus.
        std::vector<std::pair<int, int>> ranked; // (score, ground idx)
        ranked.reserve(cand_set.size());
        for (int gi : cand_set) {
            const Engine::Ground& g = eng.ground[gi];
            int matched = 0, missing = 0;
            for (int lit : g.add)
                if (std::binary_search(sit.begin(), sit.end(), lit)) ++matched;
            for (int lit : g.pre)
                if (!std::binary_search(sit.begin(), sit.end(), lit)) ++missing;
            ranked.emplace_back(net.meaning_score(g.action) + matched - missing, gi);
        }
        std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return eng.ground[a.second].action < eng.ground[b.second].action;
        });

        for (auto& [score, gi] : ranked) {
            (void)score;
            const Engine::Ground& g = eng.ground[gi];
            // P-step: the action must not delete anything still required.
            bool consistent = true;
            for (int lit : g.del) {
                if (std::binary_search(sit.begin(), sit.end(), lit)) {
                    consistent = false;
                    break;
                }
            }
            if (!consistent) continue;
            std::vector<int> prev;
            prev.reserve(sit.size() + g.pre.size());
            std::set_difference(sit.begin(), sit.end(), g.add.begin(), g.add.end(),
                                std::back_inserter(prev));
            std::vector<int> merged;
            merged.reserve(prev.size() + g.pre.size());
            std::set_union(prev.begin(), prev.end(), g.pre.begin(), g.pre.end(),
                           std::back_inserter(merged));

            if (!visited.insert(Engine::key_of(merged)).second) continue;
            arena.push_back({std::move(merged), at, gi, arena[at].depth + 1});
            int node = static_cast<int>(arena.size()) - 1;
            if (Engine::subset(arena[node].sit, start_sit)) {
                finish(node);
                return result;
            }
            frontier.push_back(node);
        }
    }

    result.status = PlanStatus::Unsolvable;
    return result;
}

/// Feeds an executed plan back into personal meanings: every action instance
/// in the plan gains one point of preference.
inline void record_plan_execution(SignNetwork& net, const Plan& plan) {
    for (const PlanStep& step : plan.steps) net.bump_meaning(step.action);
}

} // namespace signpath
