#include <catch2/catch_amalgamated.hpp>

#include "signpath/io.hpp"
#include "signpath/pddl.hpp"

using namespace signpath;

namespace {

std::string fixture(const std::string& name) {
    return read_file(std::string(SIGNPATH_FIXTURE_DIR) + "/" + name);
}

TaskDescription blocks_task() {
    return parse_pddl(fixture("blocks_domain.pddl"), fixture("blocks_sussman.pddl"));
}

} // namespace

TEST_CASE("blocks fixture parses to the expected structure") {
    TaskDescription t = blocks_task();
    REQUIRE(t.domain_name == "blocks");
    REQUIRE(t.problem_name == "sussman");
    REQUIRE(t.actions.size() == 4);
    REQUIRE(t.predicates.size() == 5);
    REQUIRE(t.init.size() == 9); // 6 state literals + 3 type literals
    REQUIRE(t.goal.size() == 2);
    REQUIRE(t.objects.size() == 3);
    REQUIRE(t.init.count({"block", {"a"}}) == 1);
    REQUIRE(t.init.count({"on", {"c", "a"}}) == 1);

    const ActionSchema* stack = t.find_action("stack");
    REQUIRE(stack != nullptr);
    REQUIRE(stack->params.size() == 2);
    REQUIRE(stack->precondition.size() == 2);
    REQUIRE(stack->add_effects.size() == 3);
    REQUIRE(stack->del_effects.size() == 2);
    REQUIRE(stack->add_effects[0] ==
            LiteralTemplate{"on", {TermRef{0, ""}, TermRef{1, ""}}});
}

TEST_CASE("names are case-normalized") {
    TaskDescription t = parse_pddl(fixture("blocks_domain.pddl"),
                                   "(define (problem P) (:domain BLOCKS)\n"
                                   "  (:objects A B - block)\n"
                                   "  (:init (ON A B) (CLEAR A) (ontable b) (handempty))\n"
                                   "  (:goal (and (on b a))))");
    REQUIRE(t.problem_name == "p");
    REQUIRE(t.init.count({"on", {"a", "b"}}) == 1);
}

TEST_CASE("empty goal conjunction is a valid task") {
    TaskDescription t = parse_pddl(fixture("blocks_domain.pddl"),
                                   "(define (problem trivial) (:domain blocks)\n"
                                   "  (:objects a - block)\n"
                                   "  (:init (ontable a) (clear a) (handempty))\n"
                                   "  (:goal (and)))");
    REQUIRE(t.goal.empty());
}

TEST_CASE("quantifiers and other unsupported constructs are reported by name") {
    std::string domain =
        "(define (domain bad)\n"
        "  (:requirements :strips)\n"
        "  (:predicates (p ?x))\n"
        "  (:action a\n"
        "    :parameters (?x)\n"
        "    :precondition (forall (?y) (p ?y))\n"
        "    :effect (p ?x)))";
    try {
        parse_pddl(domain, "(define (problem x) (:domain bad) (:init) (:goal (and)))");
        FAIL("expected unsupported_feature");
    } catch (const unsupported_feature& e) {
        REQUIRE(e.feature == "forall");
        REQUIRE(e.pos.line == 6);
        REQUIRE(e.pos.col == 20);
    }
}

TEST_CASE("negative preconditions are out of the supported subset") {
    std::string domain =
        "(define (domain bad)\n"
        "  (:requirements :strips)\n"
        "  (:predicates (p ?x) (q ?x))\n"
        "  (:action a\n"
        "    :parameters (?x)\n"
        "    :precondition (and (p ?x) (not (q ?x)))\n"
        "    :effect (q ?x)))";
    REQUIRE_THROWS_AS(
        parse_pddl(domain, "(define (problem x) (:domain bad) (:init) (:goal (and)))"),
        unsupported_feature);
}

TEST_CASE("numeric fluents and ADL requirements are rejected") {
    REQUIRE_THROWS_AS(parse_pddl("(define (domain f) (:requirements :strips)\n"
                                 "  (:functions (cost)))",
                                 ""),
                      unsupported_feature);
    REQUIRE_THROWS_AS(parse_pddl("(define (domain f) (:requirements :adl))", ""),
                      unsupported_feature);
}

TEST_CASE("semantic errors carry a position and an expectation") {
    // Unknown predicate in :init, on line 4 column 11.
    std::string problem =
        "(define (problem x)\n"
        "  (:domain blocks)\n"
        "  (:objects a - block)\n"
        "  (:init (owns a))\n"
        "  (:goal (and)))";
    try {
        parse_pddl(fixture("blocks_domain.pddl"), problem);
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        REQUIRE(e.pos.line == 4);
        REQUIRE(e.pos.col == 11);
        REQUIRE(e.expected.find("owns") != std::string::npos);
    }
}

TEST_CASE("arity and unknown-object errors are detected") {
    REQUIRE_THROWS_AS(parse_pddl(fixture("blocks_domain.pddl"),
                                 "(define (problem x) (:domain blocks)\n"
                                 "  (:objects a - block)\n"
                                 "  (:init (on a)) (:goal (and)))"),
                      parse_error);
    REQUIRE_THROWS_AS(parse_pddl(fixture("blocks_domain.pddl"),
                                 "(define (problem x) (:domain blocks)\n"
                                 "  (:objects a - block)\n"
                                 "  (:init (clear z)) (:goal (and)))"),
                      parse_error);
}

TEST_CASE("unbalanced parentheses point at the failure site") {
    std::string domain = "(define (domain d)\n  (:requirements :strips)\n  (:predicates (p)";
    try {
        parse_pddl(domain, "");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        REQUIRE(e.pos.line == 3);
        REQUIRE(e.expected.find(")") != std::string::npos);
    }
}

TEST_CASE("contradictory effects are rejected") {
    std::string domain =
        "(define (domain bad)\n"
        "  (:requirements :strips)\n"
        "  (:predicates (p ?x))\n"
        "  (:action a\n"
        "    :parameters (?x)\n"
        "    :precondition (p ?x)\n"
        "    :effect (and (p ?x) (not (p ?x)))))";
    REQUIRE_THROWS_AS(
        parse_pddl(domain, "(define (problem x) (:domain bad) (:init) (:goal (and)))"),
        parse_error);
}

TEST_CASE("pretty-print round trip reproduces the blocks task") {
    TaskDescription t = blocks_task();
    TaskDescription again = parse_pddl(pretty_print_domain(t), pretty_print_problem(t));
    REQUIRE(again == t);
}
