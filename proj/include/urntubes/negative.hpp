#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "urntubes/dist.hpp"
#include "urntubes/draws.hpp"
#include "urntubes/error.hpp"
#include "urntubes/mmo.hpp"
#include "urntubes/multiset.hpp"

namespace urntubes {

/// Truncation policy for the infinite-support negatives: either a hard k_max
/// or a tail tolerance. With tail_eps, k_max grows until the exact tail
/// bound drops below it.
struct Cutoff {
    std::optional<long long> k_max;
    std::optional<Rational> tail_eps;

    static Cutoff at(long long k) { return Cutoff{k, std::nullopt}; }
    static Cutoff tol(Rational eps) { return Cutoff{std::nullopt, std::move(eps)}; }
};

namespace detail {

// Enumerate the draws φ of the negative sums: φ(x) = τ(x)−1, φ(y) ≥ τ(y) for
// the other colours, ‖φ‖ = k−1, over the colour space `colors`.
inline std::vector<Multiset> negative_draws(const std::vector<Color>& colors,
                                            const Multiset& tubes, const Color& x,
                                            long long k) {
    std::vector<Multiset> out;
    Multiset base = Multiset::single(x, tubes.count(x) - 1);
    std::vector<Color> others;
    for (const auto& y : colors) {
        if (y != x) {
            others.push_back(y);
            if (tubes.count(y) > 0) base = add(base, Multiset::single(y, tubes.count(y)));
        }
    }
    long long extra = k - 1 - size(base);
    if (extra < 0) return out;
    if (others.empty()) {
        if (extra == 0) out.push_back(base);
        return out;
    }
    // Distribute `extra` overflow balls over the other colours.
    std::vector<long long> caps(others.size(), extra);
    Multiset::Entries current;
    std::vector<Multiset> extras;
    enumerate_bounded(others, caps, 0, extra, current, extras);
    out.reserve(extras.size());
    for (const auto& e : extras) out.push_back(add(base, e));
    return out;
}

inline void check_negative_args(const std::vector<Color>& urn_support, const Multiset& tubes) {
    if (tubes.empty()) throw DomainError("negative: tubes must be non-empty");
    for (const auto& [x, _] : tubes.entries()) {
        if (std::find(urn_support.begin(), urn_support.end(), x) == urn_support.end()) {
            throw DomainError("negative: tube colour " + x + " missing from urn");
        }
    }
}

}  // namespace detail

/// Exact upper bound on the probability that completion takes more than k
/// draws, by the union bound over colours whose tube is not yet full. The
/// per-colour count is binomial in multinomial mode and beta-binomial
/// (bivariate Pólya) in Pólya mode. Unsupported for hypergeometric, whose
/// support is finite.
inline Rational negative_tail_bound(DrawMode mode, const Urn& urn, const Multiset& tubes,
                                    long long k) {
    if (mode == DrawMode::Hypergeometric) {
        throw DomainError("negative_tail_bound: not needed for finite hypergeometric support");
    }
    Rational bound(0);
    for (const auto& [x, need] : tubes.entries()) {
        if (mode == DrawMode::Multinomial) {
            const auto& omega = std::get<Dist<Color>>(urn);
            Rational px = omega.at(x);
            for (long long j = 0; j < need && j <= k; ++j) {
                bound += Rational(binom(k, j)) * pow(px, j) * pow(Rational(1) - px, k - j);
            }
        } else {
            const auto& u = std::get<Multiset>(urn);
            long long ux = u.count(x);
            long long rest = size(u) - ux;
            for (long long j = 0; j < need && j <= k; ++j) {
                // Count of colour x in k Pólya draws is bivariate Pólya.
                BigInt w = multichoose(ux, j);
                w *= (rest >= 1) ? multichoose(rest, k - j) : BigInt(k == j ? 1 : 0);
                bound += Rational(w, multichoose(size(u), k));
            }
        }
    }
    return bound > Rational(1) ? Rational(1) : bound;
}

namespace detail {

// Shared driver for nmn/npl: per-k entries from the pointwise double sum,
// cutoff either fixed or grown until the tail bound is small enough.
inline NatDist negative_pointwise(
    DrawMode mode, const Urn& urn, const std::vector<Color>& colors, const Multiset& tubes,
    const Cutoff& cutoff,
    const std::function<Rational(const Multiset&)>& draw_prob,
    const std::function<Rational(const Multiset&, const Color&)>& last_ball_prob) {
    long long L = size(tubes);
    long long k_max;
    if (cutoff.k_max) {
        k_max = *cutoff.k_max;
        if (k_max < L) throw DomainError("negative: k_max below tube size");
    } else if (cutoff.tail_eps) {
        if (*cutoff.tail_eps <= Rational(0)) throw DomainError("negative: tail_eps must be > 0");
        k_max = L;
        while (negative_tail_bound(mode, urn, tubes, k_max) > *cutoff.tail_eps) ++k_max;
    } else {
        throw DomainError("negative: cutoff required");
    }
    NatDist d;
    d.k_min = L;
    d.k_max = k_max;
    Rational total(0);
    for (long long k = L; k <= k_max; ++k) {
        Rational pk(0);
        for (const auto& [x, _] : tubes.entries()) {
            for (const auto& phi : negative_draws(colors, tubes, x, k)) {
                pk += draw_prob(phi) * last_ball_prob(phi, x);
            }
        }
        if (!pk.is_zero()) d.entries[k] = pk;
        total += pk;
    }
    d.residual = Rational(1) - total;
    return d;
}

}  // namespace detail

/// Negative multinomial: distribution of the number of draws after which all
/// tubes are full for the first time, drawing with replacement from ω.
inline NatDist nmn(const Dist<Color>& omega, const Multiset& tubes, const Cutoff& cutoff) {
    detail::check_negative_args(omega.support(), tubes);
    return detail::negative_pointwise(
        DrawMode::Multinomial, omega, omega.support(), tubes, cutoff,
        [&](const Multiset& phi) { return multinomial_prob(omega, phi); },
        [&](const Multiset&, const Color& x) { return omega.at(x); });
}

/// Negative hypergeometric: finite support, exact zero residual. The support
/// ends at max_x [τ(x) + Σ_{y≠x} υ(y)], the last draw that can complete
/// tube x after every other colour is exhausted.
inline NatDist nhg(const Multiset& urn, const Multiset& tubes) {
    if (tubes.empty()) throw DomainError("nhg: tubes must be non-empty");
    if (!leq(tubes, urn)) throw DomainError("nhg: urn does not cover tubes");
    long long L = size(urn);
    long long k_end = 0;
    for (const auto& [x, need] : tubes.entries()) {
        k_end = std::max(k_end, need + (L - urn.count(x)));
    }
    NatDist d = detail::negative_pointwise(
        DrawMode::Hypergeometric, urn, urn.support(), tubes, Cutoff::at(k_end),
        [&](const Multiset& phi) {
            return leq(phi, urn) ? hypergeometric_prob(urn, phi) : Rational(0);
        },
        [&](const Multiset& phi, const Color& x) {
            if (!leq(phi, urn)) return Rational(0);
            Multiset left = sub(urn, phi);
            return left.empty() ? Rational(0) : flrn(left).at(x);
        });
    return d;
}

/// Negative Pólya: heavy-tailed; entries up to the cutoff with exact residual.
inline NatDist npl(const Multiset& urn, const Multiset& tubes, const Cutoff& cutoff) {
    detail::check_negative_args(urn.support(), tubes);
    return detail::negative_pointwise(
        DrawMode::Polya, urn, urn.support(), tubes, cutoff,
        [&](const Multiset& phi) { return polya_prob(urn, phi); },
        [&](const Multiset& phi, const Color& x) { return flrn(add(urn, phi)).at(x); });
}

/// Dispatch helper used by the CLI and cross-path tests.
inline NatDist negative_dist(DrawMode mode, const Urn& urn, const Multiset& tubes,
                             const Cutoff& cutoff) {
    switch (mode) {
        case DrawMode::Multinomial: return nmn(std::get<Dist<Color>>(urn), tubes, cutoff);
        case DrawMode::Hypergeometric: return nhg(std::get<Multiset>(urn), tubes);
        case DrawMode::Polya: return npl(std::get<Multiset>(urn), tubes, cutoff);
    }
    throw DomainError("negative_dist: unknown mode");
}

// ---------------------------------------------------------------------------
// Automaton path. Positions hold the remaining tubes (and the urn when it
// changes); the stage counter is deliberately not part of the position, so
// that equal positions merge. The output value is the iteration index at
// which the mass absorbs.

namespace detail {

struct NegativeTrace {
    // One row per iteration: exact output mass emitted at that step.
    std::vector<std::pair<long long, Rational>> emitted;
};

// Kernel result for the negative automata: continue-positions plus the mass
// absorbed this step.
template <typename P>
struct NegativeStep {
    std::map<P, Rational> cont;
    Rational emit{0};
};

template <typename P>
NatDist run_negative(const std::function<NegativeStep<P>(const P&)>& kernel, const P& start,
                     long long L, long long k_max,
                     std::function<void(long long, const std::map<P, Rational>&, const Rational&)>
                         observer = nullptr) {
    NatDist d;
    d.k_min = L;
    d.k_max = k_max;
    std::map<P, Rational> positions{{start, Rational(1)}};
    Rational total(0);
    for (long long step = 1; step <= k_max && !positions.empty(); ++step) {
        std::map<P, Rational> next;
        Rational emitted(0);
        for (const auto& [pos, mass] : positions) {
            NegativeStep<P> s = kernel(pos);
            for (const auto& [succ, p] : s.cont) next[succ] += mass * p;
            emitted += mass * s.emit;
        }
        if (!emitted.is_zero()) {
            d.entries[step] = emitted;
            total += emitted;
        }
        if (observer) observer(step, next, emitted);
        positions = std::move(next);
    }
    d.residual = Rational(1) - total;
    return d;
}

}  // namespace detail

/// Negative distribution computed through the absorbing automaton, as an
/// independent path cross-checking the pointwise sums. The three-way case
/// split per colour: overflow on a full tube / emit when the last tube
/// fills / drop into an unfilled tube.
inline NatDist negative_via_mmo(
    DrawMode mode, const Urn& urn, const Multiset& tubes, long long k_max,
    std::function<void(long long, const std::string&, const Rational&)> tracer = nullptr) {
    if (tubes.empty()) throw DomainError("negative_via_mmo: tubes must be non-empty");
    long long L = size(tubes);
    if (k_max < L) throw DomainError("negative_via_mmo: k_max below tube size");

    if (mode == DrawMode::Multinomial) {
        const auto& omega = std::get<Dist<Color>>(urn);
        detail::check_negative_args(omega.support(), tubes);
        auto kernel = [&omega](const Multiset& t) {
            detail::NegativeStep<Multiset> s;
            for (const auto& [x, p] : omega.entries()) {
                if (t.count(x) == 0) {
                    s.cont[t] += p;  // overflow
                } else if (size(t) == 1) {
                    s.emit += p;
                } else {
                    s.cont[sub(t, Multiset::single(x))] += p;
                }
            }
            return s;
        };
        auto observer = tracer
            ? std::function<void(long long, const std::map<Multiset, Rational>&, const Rational&)>(
                  [&tracer](long long step, const std::map<Multiset, Rational>& pos,
                            const Rational& emitted) {
                      for (const auto& [t, m] : pos) tracer(step, t.str(), m);
                      if (!emitted.is_zero()) tracer(step, "<output>", emitted);
                  })
            : nullptr;
        return detail::run_negative<Multiset>(kernel, tubes, L, k_max, observer);
    }

    const auto& u0 = std::get<Multiset>(urn);
    if (mode == DrawMode::Hypergeometric && !leq(tubes, u0)) {
        throw DomainError("negative_via_mmo: urn does not cover tubes");
    }
    detail::check_negative_args(u0.support(), tubes);
    bool polya = mode == DrawMode::Polya;
    auto kernel = [polya](const UrnTubes& pos) {
        const auto& [u, t] = pos;
        detail::NegativeStep<UrnTubes> s;
        Dist<Color> draw = flrn(u);
        for (const auto& [x, p] : draw.entries()) {
            Multiset u2 = polya ? add(u, Multiset::single(x)) : sub(u, Multiset::single(x));
            if (t.count(x) == 0) {
                s.cont[{u2, t}] += p;  // overflow
            } else if (size(t) == 1) {
                s.emit += p;
            } else {
                s.cont[{u2, sub(t, Multiset::single(x))}] += p;
            }
        }
        return s;
    };
    auto observer = tracer
        ? std::function<void(long long, const std::map<UrnTubes, Rational>&, const Rational&)>(
              [&tracer](long long step, const std::map<UrnTubes, Rational>& pos,
                        const Rational& emitted) {
                  for (const auto& [ut, m] : pos) {
                      tracer(step, "(" + ut.first.str() + " | " + ut.second.str() + ")", m);
                  }
                  if (!emitted.is_zero()) tracer(step, "<output>", emitted);
              })
        : nullptr;
    return detail::run_negative<UrnTubes>(kernel, {u0, tubes}, L, k_max, observer);
}

/// Closed forms of the single-tube case τ = m·y, value at k_min+k.
inline Rational single_tube_negative(DrawMode mode, const Urn& urn, const Color& y,
                                     long long m, long long k) {
    if (m < 1) throw DomainError("single_tube_negative: m must be >= 1");
    if (k < 0) throw DomainError("single_tube_negative: k must be >= 0");
    switch (mode) {
        case DrawMode::Multinomial: {
            const auto& omega = std::get<Dist<Color>>(urn);
            Rational wy = omega.at(y);
            if (wy <= Rational(0) || wy >= Rational(1)) {
                throw DomainError("single_tube_negative: requires 0 < w(y) < 1");
            }
            return Rational(multichoose(m, k)) * pow(wy, m) * pow(Rational(1) - wy, k);
        }
        case DrawMode::Hypergeometric: {
            const auto& u = std::get<Multiset>(urn);
            long long uy = u.count(y);
            long long L = size(u);
            if (uy < m) throw DomainError("single_tube_negative: urn lacks colour balls");
            if (m + k > L) return Rational(0);
            return Rational(m, m + k) *
                   Rational(binom(uy, m) * binom(L - uy, k), binom(L, m + k));
        }
        case DrawMode::Polya: {
            const auto& u = std::get<Multiset>(urn);
            long long uy = u.count(y);
            long long L = size(u);
            if (uy <= 0) throw DomainError("single_tube_negative: colour missing from urn");
            BigInt rest = (L - uy >= 1) ? multichoose(L - uy, k) : BigInt(k == 0 ? 1 : 0);
            return Rational(m, m + k) *
                   Rational(multichoose(uy, m) * rest, multichoose(L, m + k));
        }
    }
    throw DomainError("single_tube_negative: unknown mode");
}

}  // namespace urntubes
