#include <catch2/catch_amalgamated.hpp>

#include "urntubes/dist.hpp"
#include "urntubes/error.hpp"
#include "urntubes/parse.hpp"

using namespace urntubes;

TEST_CASE("construction checks the total mass") {
    CHECK_NOTHROW(Dist<Color>::from_entries({{"a", Rational(1, 3)}, {"b", Rational(2, 3)}}));
    CHECK_THROWS_AS(Dist<Color>::from_entries({{"a", Rational(1, 3)}}), DomainError);
    CHECK_THROWS_AS(Dist<Color>::from_entries({{"a", Rational(-1)}, {"b", Rational(2)}}),
                    DomainError);
    // Zero-probability outcomes are pruned, so equality is canonical.
    auto d = Dist<Color>::from_entries({{"a", Rational(1)}, {"b", Rational(0)}});
    CHECK(d == Dist<Color>::point_mass("a"));
    CHECK(d.support() == std::vector<Color>{"a"});
    CHECK(d.at("b") == Rational(0));
}

TEST_CASE("flrn") {
    CHECK(flrn(parse_multiset("4a+6b")) == parse_dist("2/5 a + 3/5 b"));
    CHECK_THROWS_AS(flrn(Multiset{}), DomainError);
    // Scaling invariance: Flrn(c·φ) = Flrn(φ).
    CHECK(flrn(parse_multiset("8a+12b")) == flrn(parse_multiset("2a+3b")));
}

TEST_CASE("tensor") {
    auto a = parse_dist("1/2 x + 1/2 y");
    auto b = parse_dist("1/3 u + 2/3 v");
    auto t = tensor(a, b);
    CHECK(t.at({"x", "u"}) == Rational(1, 6));
    CHECK(t.at({"y", "v"}) == Rational(1, 3));

    auto p = tensor_pow(a, 3);
    CHECK(p.at({"x", "y", "x"}) == Rational(1, 8));
    CHECK_THROWS_AS(tensor_pow(a, 0), DomainError);

    // Associativity through the entry values.
    auto c = parse_dist("1/4 s + 3/4 t");
    auto left = tensor(tensor(a, b), c);
    auto right = tensor(a, tensor(b, c));
    for (const auto& [xy, pr] : left.entries()) {
        CHECK(pr == right.at({xy.first.first, {xy.first.second, xy.second}}));
    }
}

TEST_CASE("validity and conditioning") {
    auto d = parse_dist("1/2 a + 1/3 b + 1/6 c");
    Predicate<Color> not_c = [](const Color& x) { return Rational(x == "c" ? 0 : 1); };
    CHECK(validity(d, not_c) == Rational(5, 6));
    CHECK(condition(d, not_c) == parse_dist("3/5 a + 2/5 b"));

    Predicate<Color> none = [](const Color&) { return Rational(0); };
    CHECK_THROWS_AS(condition(d, none), ConditioningError);

    Predicate<Color> bad = [](const Color&) { return Rational(2); };
    CHECK_THROWS_AS(validity(d, bad), DomainError);

    // Fuzzy evidence scales pointwise.
    Predicate<Color> soft = [](const Color& x) {
        return x == "a" ? Rational(1, 2) : Rational(1);
    };
    auto cond = condition(d, soft);
    CHECK(cond.at("a") == Rational(1, 3));
    CHECK(cond.at("b") == Rational(4, 9));
    CHECK(cond.at("c") == Rational(2, 9));
}

TEST_CASE("conditioning composes") {
    auto d = parse_dist("1/2 a + 1/4 b + 1/4 c");
    Predicate<Color> p = [](const Color& x) { return Rational(x == "c" ? 0 : 1); };
    Predicate<Color> q = [](const Color& x) {
        return x == "a" ? Rational(1, 3) : Rational(1, 2);
    };
    Predicate<Color> pq = [&](const Color& x) { return p(x) * q(x); };
    CHECK(condition(condition(d, p), q) == condition(d, pq));
}
