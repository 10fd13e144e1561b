#include <gtest/gtest.h>

#include <cctype>
#include <random>

#include "ipt/logic.hpp"
#include "oracles.hpp"

using namespace ipt::logic;

namespace {

const char* kInductive = "eastbound(T) :- has_car(T,C), car_color(C,red).";

std::string error_detail(std::string_view text) {
    try {
        parse_program(text);
    } catch (const ParseError& e) {
        return e.detail();
    }
    return "no error";
}

ParseError parse_error(std::string_view text) {
    try {
        parse_program(text);
    } catch (const ParseError& e) {
        return e;
    }
    throw std::logic_error("expected a parse error");
}

} // namespace

TEST(parse_program, inductive_rule) {
    const auto p = parse_program(kInductive);
    ASSERT_EQ(p.clauses.size(), 1u);
    const auto& c = p.clauses[0];
    EXPECT_EQ(print_atom(c.head), "eastbound(T)");
    ASSERT_EQ(c.body.size(), 1u);
    ASSERT_EQ(c.body[0].size(), 2u);
    EXPECT_EQ(print_atom(c.body[0][0]), "has_car(T,C)");
    EXPECT_EQ(print_atom(c.body[0][1]), "car_color(C,red)");
    EXPECT_TRUE(c.body[0][1].args[1].is_constant());
}

TEST(parse_program, empty_input) {
    EXPECT_TRUE(parse_program("").empty());
    EXPECT_TRUE(parse_program("  % only a comment\n\n").empty());
}

TEST(parse_program, disjunction_binds_looser_than_conjunction) {
    const auto p = parse_program("eastbound(T) :- has_car(T,car0_1); has_car(T,car1_1).");
    ASSERT_EQ(p.clauses.size(), 1u);
    EXPECT_EQ(p.clauses[0].body.size(), 2u);

    const auto q = parse_program("h(X) :- a(X), b(X); c(X).");
    ASSERT_EQ(q.clauses[0].body.size(), 2u);
    EXPECT_EQ(q.clauses[0].body[0].size(), 2u);
    EXPECT_EQ(q.clauses[0].body[1].size(), 1u);
}

TEST(parse_program, whitespace_and_comments) {
    const auto a = parse_program("eastbound( T ) :-\n  has_car(T , C) , % first\n car_color(C,red) .");
    EXPECT_EQ(a, parse_program(kInductive));
}

TEST(parse_program, anonymous_variables_are_distinct) {
    const auto p = parse_program("h(X) :- e(X,_), e(_,X).");
    const auto& body = p.clauses[0].body[0];
    EXPECT_NE(body[0].args[1].name, body[1].args[0].name);
}

TEST(parse_program, errors_carry_location) {
    const auto e = parse_error("p(a).\nq(b)");
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("2:"), std::string::npos);
}

TEST(parse_program, rejects_malformed_input) {
    EXPECT_NE(error_detail("p(a)").find("missing final '.'"), std::string::npos);
    EXPECT_NE(error_detail("p(a.").find("unbalanced '('"), std::string::npos);
    EXPECT_NE(error_detail("p(a)).").find("unbalanced ')'"), std::string::npos);
    EXPECT_NE(error_detail("p(a). p(a,b).").find("arity"), std::string::npos);
    EXPECT_NE(error_detail("eastbound(T).").find("ground"), std::string::npos);
    EXPECT_NE(error_detail("h(X,Y) :- e(X).").find("range"), std::string::npos);
    EXPECT_NE(error_detail("h(X) :- e(X); f(a).").find("range"), std::string::npos);
    EXPECT_NE(error_detail("p(1a).").find("unexpected"), std::string::npos);
    EXPECT_NE(error_detail("p(a) :- .").find("expected"), std::string::npos);
}

TEST(parse_ground_atom, with_and_without_period) {
    EXPECT_EQ(print_atom(parse_ground_atom("eastbound(train0)")), "eastbound(train0)");
    EXPECT_EQ(print_atom(parse_ground_atom(" eastbound(train0). ")), "eastbound(train0)");
    EXPECT_THROW(parse_ground_atom("eastbound(T)"), ParseError);
    EXPECT_THROW(parse_ground_atom("a(b). c(d)."), ParseError);
}

TEST(print_program, canonical_forms) {
    EXPECT_EQ(print_program(parse_program("eastbound(train0).")), "eastbound(train0).");
    EXPECT_EQ(print_program(Program{}), "");
    EXPECT_EQ(print_program(parse_program("h(X):-a(X),b(X);c(X).")), "h(X) :- a(X), b(X); c(X).");
    EXPECT_EQ(print_program(parse_program("a(b). c(d).")), "a(b).\nc(d).");
}

TEST(print_program, random_programs_round_trip) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 500; ++i) {
        const auto p = ipt::testing::random_program(rng);
        EXPECT_EQ(parse_program(print_program(p)), p) << print_program(p);
    }
}

TEST(names, variable_and_constant_namespaces) {
    EXPECT_TRUE(is_variable_name("T"));
    EXPECT_TRUE(is_variable_name("_x"));
    EXPECT_TRUE(is_constant_name("car0_1"));
    EXPECT_FALSE(is_constant_name("Car"));
    EXPECT_FALSE(is_variable_name("car"));
    EXPECT_FALSE(is_constant_name(""));
    EXPECT_FALSE(is_constant_name("a-b"));
}

TEST(desugar, splits_disjuncts) {
    const auto c = parse_program("eastbound(T) :- has_car(T,car0_1); has_car(T,car1_1).").clauses[0];
    const auto parts = desugar(c);
    ASSERT_EQ(parts.size(), 2u);
    EXPECT_EQ(print_clause(parts[0]), "eastbound(T) :- has_car(T,car0_1).");
    EXPECT_EQ(print_clause(parts[1]), "eastbound(T) :- has_car(T,car1_1).");

    const auto plain = parse_program(kInductive).clauses[0];
    EXPECT_EQ(desugar(plain), std::vector<Clause>{plain});
    const auto fact = parse_program("p(a).").clauses[0];
    EXPECT_EQ(desugar(fact), std::vector<Clause>{fact});
}

TEST(rename_constants, toy_mapping) {
    const auto b = parse_program("has_car(train0,car0). car_color(car0,red). has_car(train1,car1). car_color(car1,blue).");
    const ConstantMap phi{{"train0", "t1"}, {"car0", "c1"}, {"train1", "t2"}, {"car1", "c2"}};
    EXPECT_EQ(print_program(rename_constants(b, phi)),
              "has_car(t1,c1).\ncar_color(c1,red).\nhas_car(t2,c2).\ncar_color(c2,blue).");
    EXPECT_EQ(rename_constants(b, ConstantMap{}), b);
}

TEST(rename_constants, inverse_restores) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        const auto p = ipt::testing::random_program(rng);
        ConstantMap m, inv;
        int k = 0;
        for (const auto& c : constants_of(p)) {
            if (rng() % 2) continue;
            const std::string to = "fresh" + std::to_string(k++);
            m[c] = to;
            inv[to] = c;
        }
        EXPECT_EQ(rename_constants(rename_constants(p, m), inv), p);
    }
}

TEST(constants_of, toy_background) {
    const auto b = parse_program("has_car(train0,car0). car_color(car0,red). has_car(train1,car1). car_color(car1,blue).");
    EXPECT_EQ(constants_of(b), (std::set<std::string>{"train0", "car0", "red", "train1", "car1", "blue"}));
    EXPECT_TRUE(constants_of(Program{}).empty());
}

TEST(constants_of, matches_token_scan) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const auto p = ipt::testing::random_program(rng);
        const std::string text = print_program(p);
        // Lowercase identifiers directly after '(' or ',' are constants.
        std::set<std::string> scanned;
        for (std::size_t j = 0; j < text.size(); ++j) {
            if ((text[j] == '(' || text[j] == ',') && j + 1 < text.size() && std::islower(text[j + 1])) {
                std::size_t end = j + 1;
                while (end < text.size() && (std::isalnum(text[end]) || text[end] == '_')) ++end;
                scanned.insert(text.substr(j + 1, end - j - 1));
            }
        }
        EXPECT_EQ(constants_of(p), scanned) << text;
    }
}

TEST(arity_conflict, detects_mixed_use) {
    Program p;
    p.clauses.push_back({Atom{"p", {Term::constant("a")}}, {}});
    p.clauses.push_back({Atom{"p", {Term::constant("a"), Term::constant("b")}}, {}});
    EXPECT_TRUE(arity_conflict(p).has_value());
    EXPECT_FALSE(arity_conflict(parse_program(kInductive)).has_value());
}
