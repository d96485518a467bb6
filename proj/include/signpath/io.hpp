#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "signpath/blockage.hpp"
#include "signpath/grid.hpp"
#include "signpath/signworld.hpp"
#include "signpath/srt.hpp"

namespace signpath {

/// Grid text format: `type octile`, `height H`, `width W`, `map`, then H
/// rows of `.` (free), `@` (blocked) and `D` (blocked, destroyable). Each
/// maximal 4-connected run of the same character becomes one obstacle, ids
/// assigned in row-major discovery order.
inline GridMap parse_grid_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int width = -1, height = -1;
    bool saw_type = false, saw_map = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "type") {
            std::string value;
            ls >> value;
            if (value != "octile") throw error("grid text: unsupported type '" + value + "'");
            saw_type = true;
        } else if (key == "height") {
            ls >> height;
        } else if (key == "width") {
            ls >> width;
        } else if (key == "map") {
            saw_map = true;
            break;
        } else {
            throw error("grid text: unexpected header '" + key + "' at line " +
                        std::to_string(lineno));
        }
    }
    if (!saw_type || !saw_map || width <= 0 || height <= 0)
        throw error("grid text: incomplete header");

    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && static_cast<int>(rows.size()) == height) continue;
        rows.push_back(line);
    }
    if (static_cast<int>(rows.size()) != height) throw error("grid text: row count mismatch");

    GridMap grid(width, height);
    for (int r = 0; r < height; ++r) {
        if (static_cast<int>(rows[r].size()) != width)
            throw error("grid text: row length mismatch at row " + std::to_string(r));
        for (int c = 0; c < width; ++c) {
            char ch = rows[r][c];
            if (ch != '.' && ch != '@' && ch != 'D')
                throw error(std::string("grid text: unknown cell character '") + ch + "'");
        }
    }

    // Label 4-connected components per character class.
    ObstacleId next_id = 0;
    std::vector<char> seen(static_cast<std::size_t>(width) * height, 0);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            char ch = rows[r][c];
            if (ch == '.') continue;
            std::size_t at = static_cast<std::size_t>(r) * width + c;
            if (seen[at]) continue;
            ObstacleId id = next_id++;
            grid.register_obstacle(id, ch == 'D');
            std::vector<CellIndex> stack{{c, r}};
            seen[at] = 1;
            while (!stack.empty()) {
                CellIndex cur = stack.back();
                stack.pop_back();
                grid.set_blocked(cur, id);
                static constexpr int kCardinal[4][2] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
                for (auto [dx, dy] : kCardinal) {
                    int nc = cur.col + dx, nr = cur.row + dy;
                    if (nc < 0 || nr < 0 || nc >= width || nr >= height) continue;
                    if (rows[nr][nc] != ch) continue;
                    std::size_t ni = static_cast<std::size_t>(nr) * width + nc;
                    if (!seen[ni]) {
                        seen[ni] = 1;
                        stack.push_back({nc, nr});
                    }
                }
            }
        }
    }
    return grid;
}

inline std::string grid_to_text(const GridMap& grid) {
    std::ostringstream out;
    out << "type octile\n";
    out << "height " << grid.height() << "\n";
    out << "width " << grid.width() << "\n";
    out << "map\n";
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c) {
            auto id = grid.obstacle_at({c, r});
            if (!id) {
                out << '.';
            } else {
                auto flag = grid.obstacle_destroyable(*id);
                out << ((flag && *flag) ? 'D' : '@');
            }
        }
        out << '\n';
    }
    return out.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write file: " + path);
    out << content;
}

inline GridMap load_grid(const std::string& path) { return parse_grid_text(read_file(path)); }

inline WorldDescription world_from_json(const nlohmann::json& j) {
    WorldDescription w;
    const auto& b = j.at("bounds");
    w.bounds = {b.at("x_min").get<double>(), b.at("y_min").get<double>(),
                b.at("x_max").get<double>(), b.at("y_max").get<double>()};
    const auto& a = j.at("agent");
    w.agent_position = {a.at("position").at(0).get<double>(), a.at("position").at(1).get<double>()};
    w.agent_radius = a.at("radius").get<double>();
    const auto& gs = j.at("goal_square");
    for (std::size_t i = 0; i < 4; ++i)
        w.goal_square[i] = {gs.at(i).at(0).get<double>(), gs.at(i).at(1).get<double>()};
    for (const auto& jo : j.value("obstacles", nlohmann::json::array())) {
        Obstacle o;
        o.id = jo.at("id").get<ObstacleId>();
        o.destroyable = jo.at("destroyable").get<bool>();
        for (const auto& v : jo.at("vertices"))
            o.vertices.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
        w.obstacles.push_back(std::move(o));
    }
    w.validate();
    return w;
}

inline nlohmann::json world_to_json(const WorldDescription& w) {
    nlohmann::json j;
    j["bounds"] = {{"x_min", w.bounds.x0},
                   {"x_max", w.bounds.x1},
                   {"y_min", w.bounds.y0},
                   {"y_max", w.bounds.y1}};
    j["agent"] = {{"position", {w.agent_position.x, w.agent_position.y}},
                  {"radius", w.agent_radius}};
    j["goal_square"] = nlohmann::json::array();
    for (const Point& p : w.goal_square) j["goal_square"].push_back({p.x, p.y});
    j["obstacles"] = nlohmann::json::array();
    for (const Obstacle& o : w.obstacles) {
        nlohmann::json jo;
        jo["id"] = o.id;
        jo["destroyable"] = o.destroyable;
        jo["vertices"] = nlohmann::json::array();
        for (const Point& v : o.vertices) jo["vertices"].push_back({v.x, v.y});
        j["obstacles"].push_back(std::move(jo));
    }
    return j;
}

inline WorldDescription load_world(const std::string& path) {
    return world_from_json(nlohmann::json::parse(read_file(path)));
}

inline nlohmann::json cell_to_json(CellIndex c) { return nlohmann::json::array({c.col, c.row}); }

inline nlohmann::json report_to_json(const ContourReport& r) {
    nlohmann::json j;
    j["seed"] = cell_to_json(r.seed);
    j["contour"] = nlohmann::json::array();
    for (CellIndex c : r.contour) j["contour"].push_back(cell_to_json(c));
    j["obstacle_ids"] = r.obstacle_ids;
    j["destroyable"] = r.destroyable;
    j["reachable_contour"] = nlohmann::json::array();
    for (CellIndex c : r.reachable_contour) j["reachable_contour"].push_back(cell_to_json(c));
    return j;
}

// --- plans and situations ------------------------------------------------------

inline nlohmann::json situation_to_json(const Situation& s) {
    nlohmann::json j = nlohmann::json::array();
    for (const Literal& l : s) j.push_back(l.key());
    return j;
}

/// One ground action per line: `(name arg1 arg2)`.
inline std::string plan_to_text(const Plan& plan) {
    std::string out;
    for (const PlanStep& step : plan.steps) out += step.action.key() + "\n";
    return out;
}

inline nlohmann::json plan_to_json(const Plan& plan) {
    nlohmann::json steps = nlohmann::json::array();
    for (const PlanStep& step : plan.steps) {
        nlohmann::json js;
        js["action"] = step.action.name;
        js["args"] = step.action.args;
        js["expected"] = situation_to_json(step.expected);
        steps.push_back(std::move(js));
    }
    return nlohmann::json{{"steps", std::move(steps)}};
}

// --- execution traces ------------------------------------------------------------

inline nlohmann::json trace_to_json(const ExecutionTrace& trace) {
    nlohmann::json events = nlohmann::json::array();
    for (const TraceEvent& e : trace.events) {
        nlohmann::json je;
        if (const auto* sym = std::get_if<SymbolicActionEvent>(&e)) {
            je["type"] = "symbolic_action";
            je["name"] = sym->action.name;
            je["args"] = sym->action.args;
        } else if (const auto* path = std::get_if<GridPathEvent>(&e)) {
            je["type"] = "grid_path";
            je["revision"] = path->revision;
            je["cost"] = path->cost;
            je["cells"] = nlohmann::json::array();
            for (CellIndex c : path->cells) je["cells"].push_back(cell_to_json(c));
        } else if (const auto* det = std::get_if<DetectionEvent>(&e)) {
            je["type"] = "detection";
            je["report"] = report_to_json(det->report);
        } else if (const auto* des = std::get_if<DestroyEvent>(&e)) {
            je["type"] = "destroy";
            je["obstacle"] = des->obstacle;
        }
        events.push_back(std::move(je));
    }
    nlohmann::json j;
    j["events"] = std::move(events);
    j["rounds"] = trace.rounds;
    j["status"] = trace.status == TraceStatus::GoalReached ? "goal_reached" : "unsolvable";
    switch (trace.reason) {
        case UnsolvableReason::None: break;
        case UnsolvableReason::BlockedByIndestructible:
            j["reason"] = "blocked_by_indestructible";
            break;
        case UnsolvableReason::ResourceExhausted: j["reason"] = "resource_exhausted"; break;
        case UnsolvableReason::SymbolicFailure: j["reason"] = "symbolic_failure"; break;
    }
    return j;
}

// --- sign network snapshots --------------------------------------------------------

namespace io_detail {

inline nlohmann::json template_to_json(const LiteralTemplate& t) {
    nlohmann::json args = nlohmann::json::array();
    for (const TermRef& ref : t.args) {
        if (ref.is_var())
            args.push_back(nlohmann::json{{"var", ref.var}});
        else
            args.push_back(nlohmann::json{{"const", ref.constant}});
    }
    return nlohmann::json{{"pred", t.pred}, {"args", std::move(args)}};
}

inline LiteralTemplate template_from_json(const nlohmann::json& j) {
    LiteralTemplate t;
    t.pred = j.at("pred").get<std::string>();
    for (const auto& ja : j.at("args")) {
        TermRef ref;
        if (ja.contains("var"))
            ref.var = ja.at("var").get<int>();
        else
            ref.constant = ja.at("const").get<std::string>();
        t.args.push_back(ref);
    }
    return t;
}

} // namespace io_detail

/// Persistent snapshot: enough structure to rebuild the network plus the
/// accumulated meaning scores. The matrices are included for inspection.
inline nlohmann::json network_to_json(const SignNetwork& net) {
    nlohmann::json j;
    j["types"] = net.type_parents();
    j["objects"] = net.object_types();

    nlohmann::json preds = nlohmann::json::object();
    for (const auto& [name, sign] : net.signs()) {
        if (sign.kind != Sign::Kind::Predicate) continue;
        std::vector<std::string> param_types;
        if (!sign.image.empty())
            for (const auto& row : sign.image.front().rows) param_types.push_back(row.target);
        preds[name] = param_types;
    }
    j["predicates"] = std::move(preds);

    nlohmann::json actions = nlohmann::json::array();
    for (const auto& [name, action] : net.procedural()) {
        nlohmann::json ja;
        ja["name"] = name;
        ja["roles"] = nlohmann::json::array();
        for (const RoleSlot& r : action.roles)
            ja["roles"].push_back(nlohmann::json::array({r.name, r.type}));
        for (auto [field, list] : {std::pair{"condition", &action.condition},
                                   std::pair{"added", &action.added},
                                   std::pair{"removed", &action.removed}}) {
            nlohmann::json jl = nlohmann::json::array();
            for (const LiteralTemplate& t : *list) jl.push_back(io_detail::template_to_json(t));
            ja[field] = std::move(jl);
        }
        if (action.deviation)
            ja["deviation"] = nlohmann::json::array({action.deviation->first,
                                                     action.deviation->second});
        actions.push_back(std::move(ja));
    }
    j["actions"] = std::move(actions);

    nlohmann::json signs = nlohmann::json::array();
    for (const auto& [name, sign] : net.signs()) {
        nlohmann::json js;
        js["name"] = name;
        js["kind"] = static_cast<int>(sign.kind);
        js["matrices"] = nlohmann::json::array();
        for (const PredictionMatrix& m : sign.image) {
            nlohmann::json jm;
            jm["condition_cols"] = m.condition_cols;
            jm["rows"] = nlohmann::json::array();
            for (const auto& row : m.rows)
                jm["rows"].push_back(nlohmann::json::array({row.label, row.target}));
            jm["bits"] = m.bits;
            js["matrices"].push_back(std::move(jm));
        }
        signs.push_back(std::move(js));
    }
    j["signs"] = std::move(signs);

    nlohmann::json scores = nlohmann::json::object();
    for (const auto& [name, sign] : net.signs())
        for (const PersonalMeaning& m : sign.meanings) {
            GroundAction ga{name, m.bindings};
            scores[ga.key()] = m.score;
        }
    j["meaning_scores"] = std::move(scores);
    return j;
}

inline SignNetwork network_from_json(const nlohmann::json& j) {
    TaskDescription task;
    task.domain_name = "snapshot";
    task.problem_name = "snapshot";
    task.types = j.at("types").get<std::map<std::string, std::string>>();
    task.objects = j.at("objects").get<std::map<std::string, std::string>>();
    task.predicates =
        j.at("predicates").get<std::map<std::string, std::vector<std::string>>>();

    std::vector<std::pair<std::string, std::pair<double, double>>> deviations;
    for (const auto& ja : j.at("actions")) {
        ActionSchema schema;
        schema.name = ja.at("name").get<std::string>();
        for (const auto& jr : ja.at("roles"))
            schema.params.emplace_back(jr.at(0).get<std::string>(), jr.at(1).get<std::string>());
        for (const auto& jt : ja.at("condition"))
            schema.precondition.push_back(io_detail::template_from_json(jt));
        for (const auto& jt : ja.at("added"))
            schema.add_effects.push_back(io_detail::template_from_json(jt));
        for (const auto& jt : ja.at("removed"))
            schema.del_effects.push_back(io_detail::template_from_json(jt));
        if (ja.contains("deviation"))
            deviations.emplace_back(schema.name,
                                    std::pair{ja["deviation"].at(0).get<double>(),
                                              ja["deviation"].at(1).get<double>()});
        task.actions.push_back(std::move(schema));
    }

    SignNetwork net = build_sign_network(task);
    for (auto& [name, dev] : deviations) net.set_action_deviation(name, dev.first, dev.second);
    if (j.contains("meaning_scores")) {
        for (const auto& [key, score] : j.at("meaning_scores").items()) {
            // key has the form "(name arg1 arg2)"
            std::string inner = key.substr(1, key.size() - 2);
            std::istringstream ss(inner);
            GroundAction ga;
            ss >> ga.name;
            std::string arg;
            while (ss >> arg) ga.args.push_back(arg);
            net.set_meaning_score(ga, score.get<int>());
        }
    }
    return net;
}

} // namespace signpath
