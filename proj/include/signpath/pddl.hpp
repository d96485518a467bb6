#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "signpath/errors.hpp"

namespace signpath {

struct SourcePos {
    int line = 1;
    int col = 1;
};

struct parse_error : error {
    parse_error(SourcePos p, const std::string& expected_what)
        : error("parse error at " + std::to_string(p.line) + ":" + std::to_string(p.col) +
                ": expected " + expected_what),
          pos(p), expected(expected_what) {}
    SourcePos pos;
    std::string expected;
};

struct unsupported_feature : error {
    unsupported_feature(SourcePos p, const std::string& name)
        : error("unsupported construct '" + name + "' at " + std::to_string(p.line) + ":" +
                std::to_string(p.col)),
          pos(p), feature(name) {}
    SourcePos pos;
    std::string feature;
};

/// Ground literal: predicate applied to object names.
struct Literal {
    std::string pred;
    std::vector<std::string> args;

    std::string key() const {
        std::string s = "(" + pred;
        for (const auto& a : args) s += " " + a;
        return s + ")";
    }

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

/// Term of a schema literal: either a parameter slot or a constant.
struct TermRef {
    int var = -1; // parameter index, or -1 for a constant
    std::string constant;

    bool is_var() const { return var >= 0; }
    friend bool operator==(const TermRef&, const TermRef&) = default;
};

struct LiteralTemplate {
    std::string pred;
    std::vector<TermRef> args;

    friend bool operator==(const LiteralTemplate&, const LiteralTemplate&) = default;
};

struct ActionSchema {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params; // (name, type)
    std::vector<LiteralTemplate> precondition;
    std::vector<LiteralTemplate> add_effects;
    std::vector<LiteralTemplate> del_effects;

    friend bool operator==(const ActionSchema&, const ActionSchema&) = default;
};

/// STRIPS+typing task. Typed objects additionally materialize as unary type
/// literals in `init`, so typing is visible to set-level reasoning; type
/// names and predicate names live in one namespace and must not collide.
struct TaskDescription {
    std::string domain_name;
    std::string problem_name;
    std::vector<std::string> requirements;
    std::map<std::string, std::string> types;   // type -> parent ("" above object)
    std::map<std::string, std::string> objects; // name -> type (constants included)
    std::map<std::string, std::vector<std::string>> predicates;
    std::vector<ActionSchema> actions;
    std::set<Literal> init;
    std::set<Literal> goal;

    bool is_subtype(const std::string& t, const std::string& ancestor) const {
        if (ancestor == "object") return true;
        std::string cur = t;
        while (!cur.empty()) {
            if (cur == ancestor) return true;
            auto it = types.find(cur);
            cur = it == types.end() ? std::string() : it->second;
        }
        return false;
    }

    std::vector<std::string> objects_of_type(const std::string& t) const {
        std::vector<std::string> out;
        for (const auto& [name, type] : objects)
            if (is_subtype(type, t)) out.push_back(name);
        return out;
    }

    const ActionSchema* find_action(const std::string& name) const {
        for (const ActionSchema& a : actions)
            if (a.name == name) return &a;
        return nullptr;
    }

    friend bool operator==(const TaskDescription&, const TaskDescription&) = default;
};

namespace pddl_detail {

struct Sx {
    bool is_atom = false;
    std::string atom;
    SourcePos pos;
    std::vector<Sx> list;
};

struct Lexer {
    const std::string& text;
    std::size_t at = 0;
    SourcePos pos;

    explicit Lexer(const std::string& t) : text(t) {}

    void advance() {
        if (text[at] == '\n') {
            ++pos.line;
            pos.col = 1;
        } else {
            ++pos.col;
        }
        ++at;
    }

    void skip_ws() {
        while (at < text.size()) {
            char c = text[at];
            if (c == ';') {
                while (at < text.size() && text[at] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    Sx parse_one() {
        skip_ws();
        if (at >= text.size()) throw parse_error(pos, "an expression, found end of input");
        SourcePos start = pos;
        if (text[at] == '(') {
            advance();
            Sx node;
            node.pos = start;
            while (true) {
                skip_ws();
                if (at >= text.size()) throw parse_error(pos, "')' before end of input");
                if (text[at] == ')') {
                    advance();
                    return node;
                }
                node.list.push_back(parse_one());
            }
        }
        if (text[at] == ')') throw parse_error(start, "an expression, found ')'");
        Sx node;
        node.is_atom = true;
        node.pos = start;
        while (at < text.size()) {
            char c = text[at];
            if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c)))
                break;
            node.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            advance();
        }
        return node;
    }

    Sx parse_top() {
        Sx root = parse_one();
        skip_ws();
        if (at < text.size()) throw parse_error(pos, "end of input after the top-level form");
        return root;
    }
};

inline const Sx& expect_list(const Sx& x, const std::string& what) {
    if (x.is_atom) throw parse_error(x.pos, what);
    return x;
}

inline const std::string& expect_atom(const Sx& x, const std::string& what) {
    if (!x.is_atom) throw parse_error(x.pos, what);
    return x.atom;
}

// `a b - t c - u d` style typed lists; untyped trailing names get `fallback`.
inline std::vector<std::pair<std::string, std::string>> parse_typed_list(
    const std::vector<Sx>& items, std::size_t from, const std::string& fallback) {
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> pending;
    for (std::size_t i = from; i < items.size(); ++i) {
        const std::string& a = expect_atom(items[i], "a name in a typed list");
        if (a == "-") {
            if (i + 1 >= items.size())
                throw parse_error(items[i].pos, "a type name after '-'");
            const std::string& type = expect_atom(items[i + 1], "a type name after '-'");
            if (!type.empty() && type[0] == '(')
                throw parse_error(items[i + 1].pos, "a plain type name");
            for (auto& name : pending) out.emplace_back(name, type);
            pending.clear();
            ++i;
        } else {
            pending.push_back(a);
        }
    }
    for (auto& name : pending) out.emplace_back(name, fallback);
    return out;
}

inline void reject_unsupported_head(const Sx& form) {
    static const std::set<std::string> kUnsupported = {
        "forall", "exists", "or", "imply", "when", "increase",
        "decrease", "assign", "scale-up", "scale-down", "=", "preference"};
    if (!form.list.empty() && form.list.front().is_atom &&
        kUnsupported.count(form.list.front().atom))
        throw unsupported_feature(form.list.front().pos, form.list.front().atom);
}

} // namespace pddl_detail

class PddlParser {
public:
    TaskDescription parse(const std::string& domain_text, const std::string& problem_text) {
        task_ = TaskDescription{};
        task_.types["object"] = "";
        parse_domain(domain_text);
        parse_problem(problem_text);
        synthesize_type_literals();
        return task_;
    }

private:
    using Sx = pddl_detail::Sx;
    TaskDescription task_;

    void parse_domain(const std::string& text) {
        pddl_detail::Lexer lex(text);
        Sx root = lex.parse_top();
        pddl_detail::expect_list(root, "a (define ...) form");
        if (root.list.empty() || !root.list[0].is_atom || root.list[0].atom != "define")
            throw parse_error(root.pos, "(define (domain ...) ...)");
        const Sx& head = pddl_detail::expect_list(root.list.at(1), "(domain NAME)");
        if (head.list.size() != 2 || pddl_detail::expect_atom(head.list[0], "'domain'") != "domain")
            throw parse_error(head.pos, "(domain NAME)");
        task_.domain_name = pddl_detail::expect_atom(head.list[1], "a domain name");

        for (std::size_t i = 2; i < root.list.size(); ++i) {
            const Sx& section = pddl_detail::expect_list(root.list[i], "a domain section");
            if (section.list.empty())
                throw parse_error(section.pos, "a non-empty domain section");
            const std::string& kind = pddl_detail::expect_atom(section.list[0], "a section keyword");
            if (kind == ":requirements") {
                parse_requirements(section);
            } else if (kind == ":types") {
                for (auto& [name, parent] : pddl_detail::parse_typed_list(section.list, 1, "object")) {
                    if (name == "object") continue;
                    task_.types[name] = parent;
                }
                for (auto& [name, parent] : task_.types)
                    if (!parent.empty() && !task_.types.count(parent))
                        throw parse_error(section.pos, "a declared parent type for '" + name + "'");
            } else if (kind == ":constants") {
                for (auto& [name, type] : pddl_detail::parse_typed_list(section.list, 1, "object"))
                    declare_object(name, type, section.pos);
            } else if (kind == ":predicates") {
                for (std::size_t p = 1; p < section.list.size(); ++p)
                    parse_predicate_decl(section.list[p]);
            } else if (kind == ":action") {
                parse_action(section);
            } else if (kind == ":functions" || kind == ":durative-action" || kind == ":derived" ||
                       kind == ":constraints" || kind == ":axiom") {
                throw unsupported_feature(section.list[0].pos, kind);
            } else {
                throw parse_error(section.list[0].pos, "a supported domain section");
            }
        }
    }

    void parse_requirements(const Sx& section) {
        for (std::size_t i = 1; i < section.list.size(); ++i) {
            const std::string& req = pddl_detail::expect_atom(section.list[i], "a requirement flag");
            if (req != ":strips" && req != ":typing")
                throw unsupported_feature(section.list[i].pos, req);
            task_.requirements.push_back(req);
        }
    }

    void parse_predicate_decl(const Sx& decl) {
        pddl_detail::expect_list(decl, "a predicate declaration");
        if (decl.list.empty()) throw parse_error(decl.pos, "a predicate name");
        std::string name = pddl_detail::expect_atom(decl.list[0], "a predicate name");
        if (task_.predicates.count(name))
            throw parse_error(decl.list[0].pos, "a unique predicate name ('" + name +
                                                    "' redeclared)");
        if (task_.types.count(name))
            throw parse_error(decl.list[0].pos,
                              "a predicate name distinct from type '" + name + "'");
        std::vector<std::string> param_types;
        for (auto& [pname, ptype] : pddl_detail::parse_typed_list(decl.list, 1, "object")) {
            if (pname.empty() || pname[0] != '?')
                throw parse_error(decl.pos, "a '?variable' in the predicate declaration");
            require_type(ptype, decl.pos);
            param_types.push_back(ptype);
        }
        task_.predicates[name] = std::move(param_types);
    }

    void declare_object(const std::string& name, const std::string& type, SourcePos pos) {
        require_type(type, pos);
        if (task_.objects.count(name))
            throw parse_error(pos, "a unique object name ('" + name + "' redeclared)");
        task_.objects[name] = type;
    }

    void require_type(const std::string& type, SourcePos pos) {
        if (!task_.types.count(type)) throw parse_error(pos, "a declared type ('" + type + "')");
    }

    void parse_action(const Sx& section) {
        ActionSchema schema;
        if (section.list.size() < 2)
            throw parse_error(section.pos, "an action name after :action");
        schema.name = pddl_detail::expect_atom(section.list[1], "an action name");

        std::map<std::string, int> param_index;
        const Sx* precondition = nullptr;
        const Sx* effect = nullptr;
        for (std::size_t i = 2; i < section.list.size(); i += 2) {
            const std::string& key = pddl_detail::expect_atom(section.list[i], "an action keyword");
            if (i + 1 >= section.list.size())
                throw parse_error(section.list[i].pos, "a value after " + key);
            const Sx& value = section.list[i + 1];
            if (key == ":parameters") {
                const Sx& params = pddl_detail::expect_list(value, "a parameter list");
                for (auto& [pname, ptype] : pddl_detail::parse_typed_list(params.list, 0, "object")) {
                    if (pname.empty() || pname[0] != '?')
                        throw parse_error(params.pos, "a '?variable' parameter");
                    require_type(ptype, params.pos);
                    if (param_index.count(pname))
                        throw parse_error(params.pos, "a unique parameter name ('" + pname + "')");
                    param_index[pname] = static_cast<int>(schema.params.size());
                    schema.params.emplace_back(pname, ptype);
                }
            } else if (key == ":precondition") {
                precondition = &value;
            } else if (key == ":effect") {
                effect = &value;
            } else {
                throw parse_error(section.list[i].pos, "':parameters', ':precondition' or ':effect'");
            }
        }

        if (precondition)
            for (const Sx& lit : conjunction_members(*precondition, false))
                schema.precondition.push_back(parse_template(lit, param_index));
        if (effect) {
            for (const Sx& lit : conjunction_members(*effect, true)) {
                if (!lit.is_atom && !lit.list.empty() && lit.list[0].is_atom &&
                    lit.list[0].atom == "not") {
                    if (lit.list.size() != 2)
                        throw parse_error(lit.pos, "a single literal inside (not ...)");
                    schema.del_effects.push_back(parse_template(lit.list[1], param_index));
                } else {
                    schema.add_effects.push_back(parse_template(lit, param_index));
                }
            }
        }
        for (const LiteralTemplate& a : schema.add_effects)
            for (const LiteralTemplate& d : schema.del_effects)
                if (a == d) throw parse_error(section.pos, "a consistent effect (adds and deletes '" +
                                                               a.pred + "')");
        task_.actions.push_back(std::move(schema));
    }

    // `(and L*)`, a bare literal, or `()`; `allow_not` admits (not L) members.
    std::vector<Sx> conjunction_members(const Sx& expr, bool allow_not) {
        pddl_detail::expect_list(expr, "a conjunction or literal");
        if (expr.list.empty()) return {};
        pddl_detail::reject_unsupported_head(expr);
        if (expr.list.front().is_atom && expr.list.front().atom == "and") {
            std::vector<Sx> out(expr.list.begin() + 1, expr.list.end());
            for (const Sx& m : out) {
                pddl_detail::expect_list(m, "a literal");
                pddl_detail::reject_unsupported_head(m);
                if (!allow_not && !m.list.empty() && m.list.front().is_atom &&
                    m.list.front().atom == "not")
                    throw unsupported_feature(m.list.front().pos, "negative-precondition");
            }
            return out;
        }
        if (expr.list.front().is_atom && expr.list.front().atom == "not" && !allow_not)
            throw unsupported_feature(expr.list.front().pos, "negative-precondition");
        return {expr};
    }

    LiteralTemplate parse_template(const Sx& lit, const std::map<std::string, int>& params) {
        pddl_detail::expect_list(lit, "a literal");
        if (lit.list.empty()) throw parse_error(lit.pos, "a predicate name");
        pddl_detail::reject_unsupported_head(lit);
        LiteralTemplate tpl;
        tpl.pred = pddl_detail::expect_atom(lit.list[0], "a predicate name");
        auto decl = task_.predicates.find(tpl.pred);
        if (decl == task_.predicates.end())
            throw parse_error(lit.list[0].pos, "a declared predicate ('" + tpl.pred + "')");
        for (std::size_t i = 1; i < lit.list.size(); ++i) {
            const std::string& term = pddl_detail::expect_atom(lit.list[i], "a term");
            TermRef ref;
            if (!term.empty() && term[0] == '?') {
                auto it = params.find(term);
                if (it == params.end())
                    throw parse_error(lit.list[i].pos, "a declared parameter ('" + term + "')");
                ref.var = it->second;
            } else {
                if (!task_.objects.count(term))
                    throw parse_error(lit.list[i].pos, "a declared constant ('" + term + "')");
                ref.constant = term;
            }
            tpl.args.push_back(ref);
        }
        if (tpl.args.size() != decl->second.size())
            throw parse_error(lit.pos, std::to_string(decl->second.size()) + " argument(s) for '" +
                                           tpl.pred + "'");
        return tpl;
    }

    void parse_problem(const std::string& text) {
        pddl_detail::Lexer lex(text);
        Sx root = lex.parse_top();
        pddl_detail::expect_list(root, "a (define ...) form");
        if (root.list.empty() || !root.list[0].is_atom || root.list[0].atom != "define")
            throw parse_error(root.pos, "(define (problem ...) ...)");
        const Sx& head = pddl_detail::expect_list(root.list.at(1), "(problem NAME)");
        if (head.list.size() != 2 ||
            pddl_detail::expect_atom(head.list[0], "'problem'") != "problem")
            throw parse_error(head.pos, "(problem NAME)");
        task_.problem_name = pddl_detail::expect_atom(head.list[1], "a problem name");

        for (std::size_t i = 2; i < root.list.size(); ++i) {
            const Sx& section = pddl_detail::expect_list(root.list[i], "a problem section");
            if (section.list.empty())
                throw parse_error(section.pos, "a non-empty problem section");
            const std::string& kind = pddl_detail::expect_atom(section.list[0], "a section keyword");
            if (kind == ":domain") {
                const std::string& ref = pddl_detail::expect_atom(section.list.at(1), "a domain name");
                if (ref != task_.domain_name)
                    throw parse_error(section.list[1].pos,
                                      "the domain name '" + task_.domain_name + "'");
            } else if (kind == ":objects") {
                for (auto& [name, type] : pddl_detail::parse_typed_list(section.list, 1, "object"))
                    declare_object(name, type, section.pos);
            } else if (kind == ":init") {
                for (std::size_t k = 1; k < section.list.size(); ++k) {
                    const Sx& lit = section.list[k];
                    pddl_detail::expect_list(lit, "a ground literal");
                    if (!lit.list.empty() && lit.list.front().is_atom &&
                        lit.list.front().atom == "not")
                        throw unsupported_feature(lit.list.front().pos, "negative-init");
                    task_.init.insert(parse_ground(lit));
                }
            } else if (kind == ":goal") {
                if (section.list.size() != 2)
                    throw parse_error(section.pos, "a single goal expression");
                for (const Sx& lit : conjunction_members(section.list[1], false))
                    task_.goal.insert(parse_ground(lit));
            } else if (kind == ":metric" || kind == ":constraints") {
                throw unsupported_feature(section.list[0].pos, kind);
            } else {
                throw parse_error(section.list[0].pos, "a supported problem section");
            }
        }
    }

    Literal parse_ground(const Sx& lit) {
        pddl_detail::expect_list(lit, "a ground literal");
        if (lit.list.empty()) throw parse_error(lit.pos, "a predicate name");
        pddl_detail::reject_unsupported_head(lit);
        Literal out;
        out.pred = pddl_detail::expect_atom(lit.list[0], "a predicate name");
        auto decl = task_.predicates.find(out.pred);
        if (decl == task_.predicates.end())
            throw parse_error(lit.list[0].pos, "a declared predicate ('" + out.pred + "')");
        for (std::size_t i = 1; i < lit.list.size(); ++i) {
            const std::string& term = pddl_detail::expect_atom(lit.list[i], "an object name");
            if (!term.empty() && term[0] == '?')
                throw parse_error(lit.list[i].pos, "a ground term, not a variable");
            auto obj = task_.objects.find(term);
            if (obj == task_.objects.end())
                throw parse_error(lit.list[i].pos, "a declared object ('" + term + "')");
            out.args.push_back(term);
        }
        if (out.args.size() != decl->second.size())
            throw parse_error(lit.pos, std::to_string(decl->second.size()) + " argument(s) for '" +
                                           out.pred + "'");
        for (std::size_t i = 0; i < out.args.size(); ++i)
            if (!task_.is_subtype(task_.objects.at(out.args[i]), decl->second[i]))
                throw parse_error(lit.pos, "an argument of type '" + decl->second[i] + "' for '" +
                                               out.pred + "'");
        return out;
    }

    void synthesize_type_literals() {
        for (const auto& [name, type] : task_.objects) {
            std::string cur = type;
            while (!cur.empty() && cur != "object") {
                task_.init.insert({cur, {name}});
                auto it = task_.types.find(cur);
                cur = it == task_.types.end() ? std::string() : it->second;
            }
        }
    }
};

inline TaskDescription parse_pddl(const std::string& domain_text, const std::string& problem_text) {
    return PddlParser().parse(domain_text, problem_text);
}

namespace pddl_detail {

inline std::string template_to_string(const LiteralTemplate& t, const ActionSchema& schema) {
    std::string s = "(" + t.pred;
    for (const TermRef& a : t.args)
        s += " " + (a.is_var() ? schema.params[a.var].first : a.constant);
    return s + ")";
}

inline std::string typed_names(const std::vector<std::pair<std::string, std::string>>& items) {
    std::string s;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) s += " ";
        s += items[i].first + " - " + items[i].second;
    }
    return s;
}

} // namespace pddl_detail

/// Canonical text form; parse(pretty_print(task)) reproduces the task.
inline std::string pretty_print_domain(const TaskDescription& task) {
    std::ostringstream out;
    out << "(define (domain " << task.domain_name << ")\n";
    out << "  (:requirements";
    for (const auto& r : task.requirements) out << " " << r;
    out << ")\n";
    if (task.types.size() > 1) {
        out << "  (:types";
        for (const auto& [name, parent] : task.types) {
            if (name == "object") continue;
            out << " " << name << " - " << (parent.empty() ? "object" : parent);
        }
        out << ")\n";
    }
    out << "  (:predicates";
    for (const auto& [name, param_types] : task.predicates) {
        out << "\n    (" << name;
        for (std::size_t i = 0; i < param_types.size(); ++i)
            out << " ?a" << i << " - " << param_types[i];
        out << ")";
    }
    out << ")\n";
    for (const ActionSchema& a : task.actions) {
        out << "  (:action " << a.name << "\n";
        out << "    :parameters (" << pddl_detail::typed_names(a.params) << ")\n";
        out << "    :precondition (and";
        for (const LiteralTemplate& t : a.precondition)
            out << " " << pddl_detail::template_to_string(t, a);
        out << ")\n";
        out << "    :effect (and";
        for (const LiteralTemplate& t : a.add_effects)
            out << " " << pddl_detail::template_to_string(t, a);
        for (const LiteralTemplate& t : a.del_effects)
            out << " (not " << pddl_detail::template_to_string(t, a) << ")";
        out << "))\n";
    }
    out << ")\n";
    return out.str();
}

inline std::string pretty_print_problem(const TaskDescription& task) {
    std::ostringstream out;
    out << "(define (problem " << task.problem_name << ")\n";
    out << "  (:domain " << task.domain_name << ")\n";
    out << "  (:objects " << pddl_detail::typed_names({task.objects.begin(), task.objects.end()})
        << ")\n";
    out << "  (:init";
    for (const Literal& l : task.init) {
        if (task.types.count(l.pred)) continue; // synthesized type literal
        out << " " << l.key();
    }
    out << ")\n";
    out << "  (:goal (and";
    for (const Literal& l : task.goal) out << " " << l.key();
    out << ")))\n";
    return out.str();
}

} // namespace signpath
