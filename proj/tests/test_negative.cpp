#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "urntubes/error.hpp"
#include "urntubes/negative.hpp"
#include "urntubes/parse.hpp"

using namespace urntubes;

namespace {
Multiset ms(const std::string& spec) { return parse_multiset(spec); }
}

TEST_CASE("committee does not fill before the fourth draw") {
    NatDist d = nhg(ms("5M+4F"), ms("2M+2F"));
    CHECK(d.k_min == 4);
    CHECK(d.k_max == 7);
    CHECK(d.at(4) == Rational(10, 21));
    CHECK(d.at(5) == Rational(20, 63));
    CHECK(d.at(6) == Rational(10, 63));
    CHECK(d.at(7) == Rational(1, 21));
    CHECK(d.residual == Rational(0));
}

TEST_CASE("three-colour negative multinomial") {
    auto omega = parse_dist("1/6 a + 1/2 b + 1/3 c");
    Multiset tau = ms("2a+4b+3c");
    NatDist d = nmn(omega, tau, Cutoff::at(24));
    CHECK(d.k_min == 9);
    CHECK(d.at(9) == Rational(35, 432));
    CHECK(d.at(10) == Rational(875, 7776));
    CHECK(d.at(11) == Rational(3605, 31104));
    CHECK(d.at(12) == Rational(1243, 11664));
    // The plotted range k = 9..24 carries roughly 0.92 of the mass.
    CHECK(std::abs(d.entry_mass().approx() - 0.92) < 0.02);
    CHECK(d.entry_mass() + d.residual == Rational(1));
}

TEST_CASE("three-colour negative hypergeometric support end") {
    NatDist d = nhg(ms("10a+6b+8c"), ms("2a+4b+3c"));
    CHECK(d.k_min == 9);
    // The last possible completion: all of a and c drawn before b fills.
    CHECK(d.k_max == 22);
    CHECK(d.residual == Rational(0));
    CHECK(d.at(22) > Rational(0));
    CHECK(d.entry_mass() == Rational(1));
}

TEST_CASE("three-colour negative polya") {
    NatDist d = npl(ms("3a+2b+1c"), ms("2a+4b+3c"), Cutoff::at(24));
    CHECK(d.k_min == 9);
    // Heavy tail: the plotted range only carries about 0.42.
    CHECK(std::abs(d.entry_mass().approx() - 0.42) < 0.02);
    CHECK(d.residual > Rational(1, 2));
}

TEST_CASE("entries are cutoff-independent") {
    auto omega = parse_dist("1/6 a + 1/2 b + 1/3 c");
    Multiset tau = ms("2a+4b+3c");
    NatDist lo = nmn(omega, tau, Cutoff::at(12));
    NatDist hi = nmn(omega, tau, Cutoff::at(18));
    for (long long k = 9; k <= 12; ++k) CHECK(lo.at(k) == hi.at(k));
    CHECK(lo.residual > hi.residual);
}

TEST_CASE("tail bound dominates the true residual") {
    auto omega = parse_dist("1/6 a + 1/2 b + 1/3 c");
    Multiset tau = ms("2a+4b+3c");
    for (long long k = 9; k <= 20; ++k) {
        NatDist d = nmn(omega, tau, Cutoff::at(k));
        CHECK(d.residual <= negative_tail_bound(DrawMode::Multinomial, omega, tau, k));
    }
    Multiset urn = ms("3a+2b+1c");
    for (long long k = 9; k <= 16; ++k) {
        NatDist d = npl(urn, tau, Cutoff::at(k));
        CHECK(d.residual <= negative_tail_bound(DrawMode::Polya, urn, tau, k));
    }
    // Vacuous before any tube can be complete.
    CHECK(negative_tail_bound(DrawMode::Multinomial, omega, tau, 8) == Rational(1));
    CHECK_THROWS_AS(negative_tail_bound(DrawMode::Hypergeometric, urn, tau, 9), DomainError);
}

TEST_CASE("tail_eps cutoff policy") {
    auto omega = parse_dist("1/2 a + 1/2 b");
    Multiset tau = ms("1a+1b");
    NatDist d = nmn(omega, tau, Cutoff::tol(Rational(1, 1000)));
    CHECK(d.residual < Rational(1, 1000));
    CHECK_THROWS_AS(nmn(omega, tau, Cutoff::tol(Rational(0))), DomainError);
    CHECK_THROWS_AS(nmn(omega, tau, Cutoff::at(1)), DomainError);
    CHECK_THROWS_AS(nmn(omega, tau, Cutoff{}), DomainError);
}

TEST_CASE("automaton path agrees with the pointwise sums") {
    std::mt19937_64 rng(13);
    static const std::vector<Color> colors = {"a", "b", "c"};
    for (int trial = 0; trial < 30; ++trial) {
        Multiset::Entries te, ue;
        long long nc = 1 + static_cast<long long>(rng() % 3);
        for (long long i = 0; i < nc; ++i) {
            te[colors[static_cast<std::size_t>(i)]] = 1 + static_cast<long long>(rng() % 3);
            ue[colors[static_cast<std::size_t>(i)]] =
                te[colors[static_cast<std::size_t>(i)]] + static_cast<long long>(rng() % 3);
        }
        Multiset tubes(te), urn(ue);
        Dist<Color> omega = flrn(urn);
        long long k_max = size(tubes) + 5;

        NatDist a = nmn(omega, tubes, Cutoff::at(k_max));
        NatDist b = negative_via_mmo(DrawMode::Multinomial, omega, tubes, k_max);
        CHECK(a == b);

        a = npl(urn, tubes, Cutoff::at(k_max));
        b = negative_via_mmo(DrawMode::Polya, urn, tubes, k_max);
        CHECK(a == b);

        a = nhg(urn, tubes);
        b = negative_via_mmo(DrawMode::Hypergeometric, urn, tubes, a.k_max);
        CHECK(a == b);
    }
}

TEST_CASE("single tube closed forms") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 25; ++trial) {
        long long m = 1 + static_cast<long long>(rng() % 4);
        long long uy = m + static_cast<long long>(rng() % 4);
        long long uz = 1 + static_cast<long long>(rng() % 5);
        Multiset urn(Multiset::Entries{{"y", uy}, {"z", uz}});
        Multiset tube = Multiset::single("y", m);
        Dist<Color> omega = flrn(urn);
        long long k_max = m + 6;

        NatDist d = nmn(omega, tube, Cutoff::at(k_max));
        for (long long k = 0; k <= k_max - m; ++k) {
            CHECK(d.at(m + k) ==
                  single_tube_negative(DrawMode::Multinomial, omega, "y", m, k));
        }
        // The closed form is exactly the negative binomial pmf.
        NatDist nb = negbinomial_pmf(m, omega.at("y"), k_max);
        CHECK(d == nb);

        d = nhg(urn, tube);
        for (long long k = 0; k <= d.k_max - m; ++k) {
            CHECK(d.at(m + k) ==
                  single_tube_negative(DrawMode::Hypergeometric, urn, "y", m, k));
        }

        d = npl(urn, tube, Cutoff::at(k_max));
        for (long long k = 0; k <= k_max - m; ++k) {
            CHECK(d.at(m + k) == single_tube_negative(DrawMode::Polya, urn, "y", m, k));
        }
    }
}

TEST_CASE("domain checks") {
    CHECK_THROWS_AS(nhg(ms("1M+4F"), ms("2M+2F")), DomainError);
    CHECK_THROWS_AS(nmn(parse_dist("1/2 a + 1/2 b"), ms("1a+1c"), Cutoff::at(5)), DomainError);
    CHECK_THROWS_AS(npl(ms("2a"), Multiset{}, Cutoff::at(5)), DomainError);
    CHECK_THROWS_AS(negative_via_mmo(DrawMode::Multinomial, parse_dist("1 a"), ms("3a"), 2),
                    DomainError);
}
