#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "urntubes/firstfull.hpp"
#include "urntubes/mmo.hpp"
#include "urntubes/parse.hpp"

using namespace urntubes;

namespace {
Multiset ms(const std::string& spec) { return parse_multiset(spec); }
using MnStep = Step<Multiset, Color>;
}

TEST_CASE("multinomial automaton iteration") {
    auto omega = parse_dist("1/3 a + 2/3 b");
    Multiset tau = ms("2a+3b");
    Mmo<Multiset, Color> mn = mn_firstfull_mmo(omega);

    auto one = mn.kernel(tau);
    CHECK(one.at(MnStep::cont(ms("1a+3b"))) == Rational(1, 3));
    CHECK(one.at(MnStep::cont(ms("2a+2b"))) == Rational(2, 3));

    auto two = mn.iterate(tau, 2);
    CHECK(two.entries().size() == 3);
    CHECK(two.at(MnStep::output("a")) == Rational(1, 9));
    CHECK(two.at(MnStep::cont(ms("1a+2b"))) == Rational(4, 9));
    CHECK(two.at(MnStep::cont(ms("2a+1b"))) == Rational(4, 9));

    auto three = mn.iterate(tau, 3);
    CHECK(three.at(MnStep::output("a")) == Rational(7, 27));
    CHECK(three.at(MnStep::cont(ms("1a+1b"))) == Rational(12, 27));
    CHECK(three.at(MnStep::output("b")) == Rational(8, 27));

    auto four = mn.iterate(tau, 4);
    CHECK(four.at(MnStep::output("a")) == Rational(11, 27));
    CHECK(four.at(MnStep::output("b")) == Rational(16, 27));
}

TEST_CASE("absorption stops with zero residual at the step bound") {
    auto omega = parse_dist("1/3 a + 2/3 b");
    Multiset tau = ms("2a+3b");
    // ‖τ‖ − |X| + 1 = 4 steps absorb everything.
    auto absorbed = run_to_absorption(mn_firstfull_mmo(omega), tau, 4);
    CHECK(absorbed.residual == Rational(0));
    CHECK(absorbed.output.at("a") == Rational(11, 27));
    CHECK(absorbed.output.at("b") == Rational(16, 27));
    CHECK(absorbed.distribution() == mnff(omega, tau));

    // One step short leaves continuation mass behind.
    auto early = run_to_absorption(mn_firstfull_mmo(omega), tau, 3);
    CHECK(early.residual == Rational(12, 27));
    CHECK_THROWS_AS(early.distribution(), DomainError);
}

TEST_CASE("urn-carrying automata") {
    auto hg = run_to_absorption(hg_firstfull_mmo(), {ms("3R+6B"), ms("2R+3B")}, 4);
    CHECK(hg.residual == Rational(0));
    CHECK(hg.output.at("R") == Rational(17, 42));

    auto pl = run_to_absorption(pl_firstfull_mmo(), {ms("1R+1B"), ms("2R+3B")}, 4);
    CHECK(pl.residual == Rational(0));
    CHECK(pl.output.at("R") == Rational(3, 5));
}

TEST_CASE("cross-path equivalence on random instances") {
    std::mt19937_64 rng(31);
    static const std::vector<Color> colors = {"a", "b", "c", "d"};
    for (int trial = 0; trial < 60; ++trial) {
        Multiset::Entries te, ue;
        long long nc = 1 + static_cast<long long>(rng() % 4);
        for (long long i = 0; i < nc; ++i) {
            long long len = 1 + static_cast<long long>(rng() % 4);
            te[colors[static_cast<std::size_t>(i)]] = len;
            ue[colors[static_cast<std::size_t>(i)]] =
                len + static_cast<long long>(rng() % 5);
        }
        Multiset tubes(te), urn(ue);
        Dist<Color> omega = flrn(urn);

        CHECK(firstfull_via_mmo(DrawMode::Multinomial, omega, tubes) == mnff(omega, tubes));
        CHECK(firstfull_via_mmo(DrawMode::Hypergeometric, urn, tubes) == hgff(urn, tubes));
        CHECK(firstfull_via_mmo(DrawMode::Polya, urn, tubes) == plff(urn, tubes));
    }
}

TEST_CASE("dispatch validates inputs like the pointwise path") {
    CHECK_THROWS_AS(firstfull_via_mmo(DrawMode::Hypergeometric, ms("1a+5b"), ms("2a+3b")),
                    DomainError);
    CHECK_THROWS_AS(firstfull_via_mmo(DrawMode::Polya, ms("1a"), ms("1a+1b")), DomainError);
    CHECK_THROWS_AS(
        firstfull_via_mmo(DrawMode::Multinomial, parse_dist("1 a"), Multiset{}),
        DomainError);
}
