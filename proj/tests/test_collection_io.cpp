#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "opcx/collection_io.hpp"

#include <sstream>

using namespace opcx;
using namespace opcx::ops;
using exact::RingDesc;

TEST_CASE("builtin collections round-trip through the description format") {
    for (const std::string name : {"unit", "com", "com-nonunital", "assoc-nonunital"}) {
        for (const RingDesc ring :
             {RingDesc::rationals(), RingDesc::prime_field(5), RingDesc::integers()}) {
            const SymmetricCollection o = builtin_operad(name, ring, 3);
            const std::string text = save_collection(o);
            std::istringstream is(text);
            const SymmetricCollection back = load_collection(is);
            CHECK(save_collection(back) == text);
            CHECK(back.ring() == ring);
            CHECK(back.max_arity() == o.max_arity());
            CHECK(back.unit_label() == o.unit_label());
            for (int m = 0; m <= 3; ++m) {
                CHECK(back.component(m) == o.component(m));
                CHECK(back.action_generators(m).size() == o.action_generators(m).size());
                for (std::size_t k = 0; k < o.action_generators(m).size(); ++k)
                    CHECK(back.action_generators(m)[k] == o.action_generators(m)[k]);
            }
        }
    }
}

TEST_CASE("a collection with differentials and fractional scalars") {
    std::istringstream is("# a unary operation killed by the differential\n"
                          "ring Q\n"
                          "max-arity 2\n"
                          "arity 1\n"
                          "unit e\n"
                          "gen e 0\n"
                          "gen x 0\n"
                          "gen y 1\n"
                          "diff y x 2/3\n"
                          "arity 2\n"
                          "gen mu 0\n"
                          "act 1 mu mu 1\n");
    const SymmetricCollection o = load_collection(is);
    CHECK(o.component(1).dims() == std::map<int, std::size_t>{{0, 2}, {1, 1}});
    CHECK(o.reduced_unary().dims() == std::map<int, std::size_t>{{0, 1}, {1, 1}});
    CHECK(chain::is_acyclic(o.reduced_unary()));
    const std::string text = save_collection(o);
    CHECK(text.find("2/3") != std::string::npos);
    std::istringstream is2(text);
    CHECK(save_collection(load_collection(is2)) == text);
}

TEST_CASE("malformed inputs are rejected") {
    auto load = [](const std::string& text) {
        std::istringstream is(text);
        return load_collection(is);
    };
    // missing ring
    CHECK_THROWS_AS(load("max-arity 1\narity 1\nunit e\ngen e 0\n"), Error);
    // missing max-arity
    CHECK_THROWS_AS(load("ring Q\narity 1\nunit e\ngen e 0\n"), Error);
    // no unit designation
    CHECK_THROWS_AS(load("ring Q\nmax-arity 1\narity 1\ngen e 0\n"), Error);
    // unknown label in a differential
    CHECK_THROWS_AS(load("ring Q\nmax-arity 1\narity 1\nunit e\ngen e 0\ndiff a b 1\n"), Error);
    // differential that does not lower degree
    CHECK_THROWS_AS(
        load("ring Q\nmax-arity 1\narity 1\nunit e\ngen e 0\ngen x 1\ndiff x x 1\n"), Error);
    // differential into the unit line
    CHECK_THROWS_AS(
        load("ring Q\nmax-arity 1\narity 1\nunit e\ngen e 0\ngen y 1\ndiff y e 1\n"), Error);
    // action generator index out of range
    CHECK_THROWS_AS(
        load("ring Q\nmax-arity 2\narity 1\nunit e\ngen e 0\narity 2\ngen mu 0\nact 2 mu mu 1\n"),
        Error);
    // missing action generator
    CHECK_THROWS_AS(load("ring Q\nmax-arity 3\narity 1\nunit e\ngen e 0\narity 3\ngen mu 0\n"
                         "act 1 mu mu 1\n"),
                    Error);
    // act scalar that is not a sign
    CHECK_THROWS_AS(
        load("ring Q\nmax-arity 2\narity 1\nunit e\ngen e 0\narity 2\ngen mu 0\nact 1 mu mu 2\n"),
        Error);
    // an involution that is not: g^2 = -1
    CHECK_THROWS_AS(load("ring Q\nmax-arity 2\narity 1\nunit e\ngen e 0\n"
                         "arity 2\ngen p 0\ngen q 0\nact 1 p q 1\nact 1 q p -1\n"),
                    Error);
    // unknown directive
    CHECK_THROWS_AS(load("ring Q\nmax-arity 1\narity 1\nunit e\ngen e 0\nfrobnicate\n"), Error);
    // duplicate label
    CHECK_THROWS_AS(load("ring Q\nmax-arity 1\narity 1\nunit e\ngen e 0\ngen e 1\n"), Error);
}

TEST_CASE("braid relations are enforced for small arities") {
    // s1 = -1, s2 = +1 on a one-dimensional component breaks the braid relation
    CHECK_THROWS_AS(
        [] {
            std::istringstream is("ring Q\nmax-arity 3\narity 1\nunit e\ngen e 0\n"
                                  "arity 3\ngen mu 0\nact 1 mu mu -1\nact 2 mu mu 1\n");
            return load_collection(is);
        }(),
        Error);
}
