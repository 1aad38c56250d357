#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "urntubes/dist.hpp"
#include "urntubes/draws.hpp"
#include "urntubes/error.hpp"
#include "urntubes/multiset.hpp"

namespace urntubes {

namespace detail {

inline void check_tubes(const Multiset& tubes) {
    if (tubes.empty()) throw DomainError("tubes: at least one tube required");
}

inline bool same_support(const Multiset& a, const std::vector<Color>& b_support) {
    return a.support() == b_support;
}

// Enumerate φ ≺ τ with φ(x) = τ(x)−1 and accumulate prob(φ)·last(φ,x) over
// all x; the draw-size parameter of the inner pmf is recovered as ‖φ‖.
inline Dist<Color> firstfull_sum(
    const Multiset& tubes,
    const std::function<Rational(const Multiset&)>& draw_prob,
    const std::function<Rational(const Multiset&, const Color&)>& last_ball_prob) {
    std::vector<Color> colors = tubes.support();
    typename Dist<Color>::Entries result;
    for (const auto& x : colors) {
        Rational total(0);
        // Per-colour caps: exactly τ(x)−1 for x, up to τ(y)−1 for the rest.
        std::vector<Multiset> partials{Multiset::single(x, tubes.count(x) - 1)};
        for (const auto& y : colors) {
            if (y == x) continue;
            std::vector<Multiset> next;
            for (const auto& p : partials) {
                for (long long c = 0; c < tubes.count(y); ++c) {
                    next.push_back(c == 0 ? p : add(p, Multiset::single(y, c)));
                }
            }
            partials = std::move(next);
        }
        for (const auto& phi : partials) total += draw_prob(phi) * last_ball_prob(phi, x);
        if (!total.is_zero()) result.emplace(x, total);
    }
    return Dist<Color>::from_entries(std::move(result));
}

}  // namespace detail

/// Multinomial first-full: for each colour, the probability its tube fills
/// strictly first when drawing with replacement from ω.
inline Dist<Color> mnff(const Dist<Color>& omega, const Multiset& tubes) {
    detail::check_tubes(tubes);
    if (!detail::same_support(tubes, omega.support())) {
        throw DomainError("mnff: urn and tube supports differ");
    }
    return detail::firstfull_sum(
        tubes,
        [&](const Multiset& phi) { return multinomial_prob(omega, phi); },
        [&](const Multiset&, const Color& x) { return omega.at(x); });
}

/// Hypergeometric first-full: balls are removed; requires υ ≥ τ.
inline Dist<Color> hgff(const Multiset& urn, const Multiset& tubes) {
    detail::check_tubes(tubes);
    if (!leq(tubes, urn)) throw DomainError("hgff: urn does not cover tubes");
    if (urn.support() != tubes.support()) {
        throw DomainError("hgff: urn and tube supports differ");
    }
    return detail::firstfull_sum(
        tubes,
        [&](const Multiset& phi) { return hypergeometric_prob(urn, phi); },
        [&](const Multiset& phi, const Color& x) { return flrn(sub(urn, phi)).at(x); });
}

/// Pólya first-full: drawn balls are returned with a duplicate; requires one
/// ball of every tube colour in the urn, and no others.
inline Dist<Color> plff(const Multiset& urn, const Multiset& tubes) {
    detail::check_tubes(tubes);
    if (urn.support() != tubes.support()) {
        throw DomainError("plff: urn and tube supports differ");
    }
    return detail::firstfull_sum(
        tubes,
        [&](const Multiset& phi) { return polya_prob(urn, phi); },
        [&](const Multiset& phi, const Color& x) { return flrn(add(urn, phi)).at(x); });
}

struct PointsShare {
    Dist<Color> rho;      // winning chances for players "A" and "B"
    Rational share_a;     // fair share of the stake for A
};

/// Problem of points: the race to `target` wins, abandoned at (wins_a,
/// wins_b), divides the stake by the multinomial first-full distribution of
/// the remaining tubes.
inline PointsShare points_share(long long target, long long wins_a, long long wins_b,
                                const Rational& p_a, const Rational& stake) {
    if (wins_a >= target || wins_b >= target) {
        throw DomainError("points_share: a player already reached the target");
    }
    if (p_a <= Rational(0) || p_a >= Rational(1)) {
        throw DomainError("points_share: win probability must be in (0,1)");
    }
    Dist<Color> omega = Dist<Color>::from_entries({{"A", p_a}, {"B", Rational(1) - p_a}});
    Multiset tubes = add(Multiset::single("A", target - wins_a),
                         Multiset::single("B", target - wins_b));
    Dist<Color> rho = mnff(omega, tubes);
    return PointsShare{rho, rho.at("A") * stake};
}

/// Mode dispatch over the three pointwise first-full distributions.
inline Dist<Color> firstfull(DrawMode mode, const Urn& urn, const Multiset& tubes) {
    switch (mode) {
        case DrawMode::Multinomial: return mnff(std::get<Dist<Color>>(urn), tubes);
        case DrawMode::Hypergeometric: return hgff(std::get<Multiset>(urn), tubes);
        case DrawMode::Polya: return plff(std::get<Multiset>(urn), tubes);
    }
    throw DomainError("firstfull: unknown mode");
}

}  // namespace urntubes
