#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "urntubes/analysis.hpp"
#include "urntubes/error.hpp"
#include "urntubes/parse.hpp"

using namespace urntubes;

namespace {

const std::vector<Rational> interior_r = {Rational(1, 3), Rational(1, 2), Rational(3, 5)};

Multiset tuple_to_multiset(const Tuple& t, const std::vector<Color>& colors) {
    Multiset::Entries e;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] > 0) e[colors[i]] = t[i];
    }
    return Multiset(std::move(e));
}

}  // namespace

TEST_CASE("sum predicate") {
    auto p = sum_predicate(3, 2);
    CHECK(p({1, 2}) == Rational(1));
    CHECK(p({1, 1}) == Rational(0));
    CHECK_THROWS_AS(p({1, 2, 3}), DomainError);
    CHECK_THROWS_AS(sum_predicate(3, 0), DomainError);

    // Validity of the sum predicate under parallel binomials is the
    // binomial of the pooled draws.
    Rational r(2, 5);
    auto pair = tensor(binomial_pmf(2, r), binomial_pmf(3, r));
    Predicate<std::pair<long long, long long>> sum3 =
        [](const std::pair<long long, long long>& t) {
            return Rational(t.first + t.second == 3 ? 1 : 0);
        };
    CHECK(validity(pair, sum3) == binomial_pmf(5, r).at(3));
}

TEST_CASE("conditioned binomials are hypergeometric") {
    auto small = hypergeometric_via_conditioning({1, 2}, Rational(1, 2), 1);
    CHECK(small.at({1, 0}) == Rational(1, 3));
    CHECK(small.at({0, 1}) == Rational(2, 3));

    for (const auto& r : interior_r) {
        auto d = hypergeometric_via_conditioning({4, 6}, r, 3);
        CHECK(d.at({3, 0}) == Rational(1, 30));
        CHECK(d.at({2, 1}) == Rational(3, 10));
        CHECK(d.at({1, 2}) == Rational(1, 2));
        CHECK(d.at({0, 3}) == Rational(1, 6));
    }

    CHECK_THROWS_AS(hypergeometric_via_conditioning({1, 2}, Rational(1), 1), DomainError);
    CHECK_THROWS_AS(hypergeometric_via_conditioning({1, 2}, Rational(1, 2), 4), DomainError);
}

TEST_CASE("conditioned negative binomials are polya") {
    // Total draw count K against K − Σks Pólya draws, brute force both ways.
    for (long long K = 2; K <= 5; ++K) {
        auto omega = polya_pmf(parse_multiset("1a+1b"), K - 2);
        auto d = polya_via_conditioning({1, 1}, Rational(1, 2), K);
        for (const auto& [t, p] : d.entries()) {
            Multiset phi(Multiset::Entries{{"a", t[0] - 1}, {"b", t[1] - 1}});
            CHECK(p == omega.at(phi));
        }
    }

    for (const auto& r : interior_r) {
        auto big = polya_via_conditioning({4, 6}, r, 13);
        CHECK(big.at({7, 6}) == Rational(1, 11));
        CHECK(big.at({6, 7}) == Rational(3, 11));
        CHECK(big.at({5, 8}) == Rational(21, 55));
        CHECK(big.at({4, 9}) == Rational(14, 55));
    }

    CHECK_THROWS_AS(polya_via_conditioning({1, 1}, Rational(1, 2), 1), DomainError);
    CHECK_THROWS_AS(polya_via_conditioning({0, 1}, Rational(1, 2), 3), DomainError);
}

TEST_CASE("conditioning equivalences on random instances") {
    std::mt19937_64 rng(47);
    static const std::vector<Color> colors = {"a", "b", "c", "d"};
    for (int trial = 0; trial < 15; ++trial) {
        std::size_t ell = 2 + rng() % 3;
        std::vector<long long> ks;
        Multiset::Entries ue;
        long long total = 0;
        for (std::size_t i = 0; i < ell; ++i) {
            ks.push_back(1 + static_cast<long long>(rng() % 4));
            ue[colors[i]] = ks.back();
            total += ks.back();
        }
        Multiset urn(ue);
        std::vector<Color> supp(colors.begin(), colors.begin() + static_cast<long>(ell));

        long long K = static_cast<long long>(rng() % (total + 1));
        auto hg = hypergeometric_pmf(urn, K);
        for (const auto& r : interior_r) {
            auto cond = hypergeometric_via_conditioning(ks, r, K);
            for (const auto& [t, p] : cond.entries()) {
                CHECK(p == hg.at(tuple_to_multiset(t, supp)));
            }
            CHECK(cond.entries().size() == hg.entries().size());
        }

        if (ell <= 3) {
            long long draws = static_cast<long long>(rng() % 5);
            auto pl = polya_pmf(urn, draws);
            for (const auto& r : interior_r) {
                auto cond = polya_via_conditioning(ks, r, total + draws);
                for (const auto& [t, p] : cond.entries()) {
                    Tuple extra;
                    for (std::size_t i = 0; i < ell; ++i) extra.push_back(t[i] - ks[i]);
                    CHECK(p == pl.at(tuple_to_multiset(extra, supp)));
                }
            }
        }
    }
}

TEST_CASE("first-full corollary items") {
    auto one = check_firstfull_identity(1, {.n = 1, .m = 1, .r = Rational(1, 2)});
    CHECK(one.lhs == Rational(1));
    CHECK(one.rhs == Rational(1));
    CHECK(one.holds);

    auto two = check_firstfull_identity(2, {.n = 2, .m = 3, .N = 3, .M = 6});
    CHECK(two.lhs == Rational(84));
    CHECK(two.holds);

    auto three = check_firstfull_identity(3, {.n = 2, .m = 3, .N = 1, .M = 1});
    CHECK(three.lhs == Rational(2));
    CHECK(three.rhs == Rational(2));
    CHECK(three.holds);

    CHECK_THROWS_AS(check_firstfull_identity(2, {.n = 3, .m = 1, .N = 2, .M = 1}), DomainError);
    CHECK_THROWS_AS(check_firstfull_identity(4, {}), DomainError);
}

TEST_CASE("first-full corollary sweep") {
    for (long long n = 1; n <= 4; ++n) {
        for (long long m = 1; m <= 4; ++m) {
            for (const auto& r : interior_r) {
                CHECK(check_firstfull_identity(1, {.n = n, .m = m, .r = r}).holds);
            }
            for (long long N = n; N <= 8; ++N) {
                for (long long M = m; M <= 8; ++M) {
                    CorollaryParams p{.n = n, .m = m, .N = N, .M = M};
                    CHECK(check_firstfull_identity(2, p).holds);
                    CHECK(check_firstfull_identity(3, p).holds);
                    CHECK(check_negative_identity(2, p, 0).holds);
                }
            }
        }
    }
}

TEST_CASE("negative corollary items") {
    auto two = check_negative_identity(2, {.n = 2, .m = 2, .N = 5, .M = 4}, 0);
    CHECK(two.lhs == Rational(126));
    CHECK(two.holds);

    // Partial sums of the infinite identities approach the closed form from
    // below; at generous tolerances the reports hold.
    auto one = check_negative_identity(1, {.n = 1, .m = 1, .r = Rational(1, 2)}, 20,
                                       Rational(1, 100));
    CHECK(one.rhs == Rational(4));
    CHECK(one.lhs < one.rhs);
    CHECK(one.holds);

    auto three = check_negative_identity(3, {.n = 1, .m = 1, .N = 1, .M = 1}, 50,
                                         Rational(1, 10));
    CHECK(three.rhs == Rational(2));
    CHECK(three.lhs == Rational(2) - Rational(4, 53));
    CHECK(three.holds);

    // Too tight a tolerance flips the verdict without erroring.
    CHECK_FALSE(
        check_negative_identity(3, {.n = 1, .m = 1, .N = 1, .M = 1}, 50, Rational(1, 100))
            .holds);
}

TEST_CASE("truncation 200 brings the gap under 1/100") {
    auto one = check_negative_identity(1, {.n = 1, .m = 1, .r = Rational(1, 2)}, 200);
    CHECK(one.holds);
    auto three = check_negative_identity(3, {.n = 1, .m = 1, .N = 2, .M = 2}, 200);
    CHECK(three.holds);
    CHECK(three.rhs - three.lhs < Rational(1, 100));
}

TEST_CASE("vandermonde report helpers") {
    auto b = check_multiset_vandermonde(parse_multiset("4a+6b"), 3);
    CHECK(b.holds);
    CHECK(b.rhs == Rational(120));
    auto m = check_multichoose_vandermonde(parse_multiset("4a+6b"), 3);
    CHECK(m.holds);
    CHECK(m.rhs == Rational(220));
}
