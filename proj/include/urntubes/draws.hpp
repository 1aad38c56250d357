#pragma once

#include <cmath>
#include <map>
#include <set>
#include <variant>
#include <vector>

#include "urntubes/dist.hpp"
#include "urntubes/error.hpp"
#include "urntubes/multiset.hpp"
#include "urntubes/rational.hpp"

namespace urntubes {

/// The three drawing modes: ball returned ("0"), removed ("-1"),
/// returned with a duplicate ("+1").
enum class DrawMode { Multinomial, Hypergeometric, Polya };

/// An urn is a distribution in multinomial mode and a multiset otherwise.
using Urn = std::variant<Dist<Color>, Multiset>;

/// Distribution on naturals with an exact residual tail mass, for the
/// infinite-support negative cases. Invariant: Σ entries + residual = 1.
struct NatDist {
    std::map<long long, Rational> entries;
    Rational residual{0};
    long long k_min = 0;
    long long k_max = 0;

    Rational at(long long k) const {
        auto it = entries.find(k);
        return it == entries.end() ? Rational(0) : it->second;
    }

    Rational entry_mass() const {
        Rational total(0);
        for (const auto& [_, p] : entries) total += p;
        return total;
    }

    friend bool operator==(const NatDist&, const NatDist&) = default;
};

/// mn(ω)(φ): coefm(φ)·∏_x ω(x)^φ(x).
inline Rational multinomial_prob(const Dist<Color>& omega, const Multiset& phi) {
    Rational p(coefm(phi));
    for (const auto& [x, n] : phi.entries()) p *= pow(omega.at(x), n);
    return p;
}

/// hg(υ)(φ): mbinom(υ,φ) / C(‖υ‖,‖φ‖); requires φ ≤ υ.
inline Rational hypergeometric_prob(const Multiset& urn, const Multiset& phi) {
    return Rational(mbinom(urn, phi), binom(size(urn), size(phi)));
}

/// pl(υ)(φ): mmultichoose(υ,φ) / ⦅‖υ‖,‖φ‖⦆; requires supp(φ) ⊆ supp(υ).
inline Rational polya_prob(const Multiset& urn, const Multiset& phi) {
    return Rational(mmultichoose(urn, phi), multichoose(size(urn), size(phi)));
}

inline Dist<Multiset> multinomial_pmf(const Dist<Color>& omega, long long K) {
    std::set<Color> support;
    for (const auto& [x, _] : omega.entries()) support.insert(x);
    typename Dist<Multiset>::Entries e;
    for (const auto& phi : multisets_of_size(support, K)) {
        e.emplace(phi, multinomial_prob(omega, phi));
    }
    return Dist<Multiset>::from_entries(std::move(e));
}

inline Dist<Multiset> hypergeometric_pmf(const Multiset& urn, long long K) {
    if (K > size(urn)) throw DomainError("hypergeometric_pmf: draw exceeds urn size");
    typename Dist<Multiset>::Entries e;
    for (const auto& phi : submultisets_of_size(urn, K)) {
        e.emplace(phi, hypergeometric_prob(urn, phi));
    }
    return Dist<Multiset>::from_entries(std::move(e));
}

inline Dist<Multiset> polya_pmf(const Multiset& urn, long long K) {
    if (urn.empty()) throw DomainError("polya_pmf: empty urn");
    std::set<Color> support;
    for (const auto& [x, _] : urn.entries()) support.insert(x);
    typename Dist<Multiset>::Entries e;
    for (const auto& phi : multisets_of_size(support, K)) {
        e.emplace(phi, polya_prob(urn, phi));
    }
    return Dist<Multiset>::from_entries(std::move(e));
}

/// bn[K](r): k ↦ C(K,k)·r^k·(1−r)^{K−k}.
inline Dist<long long> binomial_pmf(long long K, const Rational& r) {
    if (r < Rational(0) || r > Rational(1)) throw DomainError("binomial_pmf: r outside [0,1]");
    typename Dist<long long>::Entries e;
    for (long long k = 0; k <= K; ++k) {
        Rational p = Rational(binom(K, k)) * pow(r, k) * pow(Rational(1) - r, K - k);
        if (!p.is_zero()) e.emplace(k, p);
    }
    return Dist<long long>::from_entries(std::move(e));
}

/// nbn[m](s) truncated at k_max: entries at m+i with ⦅m,i⦆·s^m·(1−s)^i and
/// an exact residual. s=1 degenerates to a point mass at m; s=0 never
/// terminates and is rejected.
inline NatDist negbinomial_pmf(long long m, const Rational& s, long long k_max) {
    if (m < 1) throw DomainError("negbinomial_pmf: m must be >= 1");
    if (s <= Rational(0) || s > Rational(1)) throw DomainError("negbinomial_pmf: s outside (0,1]");
    if (k_max < m) throw DomainError("negbinomial_pmf: k_max below m");
    NatDist d;
    d.k_min = m;
    d.k_max = k_max;
    if (s == Rational(1)) {
        d.entries[m] = Rational(1);
        return d;
    }
    Rational total(0);
    for (long long i = 0; i + m <= k_max; ++i) {
        Rational p = Rational(multichoose(m, i)) * pow(s, m) * pow(Rational(1) - s, i);
        d.entries[m + i] = p;
        total += p;
    }
    d.residual = Rational(1) - total;
    return d;
}

namespace detail {

inline void oracle_walk(DrawMode mode, const Dist<Color>& omega, const Multiset& urn0,
                        const std::vector<Color>& colors, const Multiset& drawn,
                        const Rational& weight, long long remaining,
                        std::map<Multiset, Rational>& out) {
    if (remaining == 0) {
        out[drawn] += weight;
        return;
    }
    for (const auto& x : colors) {
        Rational step;
        switch (mode) {
            case DrawMode::Multinomial:
                step = omega.at(x);
                break;
            case DrawMode::Hypergeometric: {
                Multiset left = sub(urn0, drawn);
                step = Rational(left.count(x), size(left));
                break;
            }
            case DrawMode::Polya: {
                Multiset grown = add(urn0, drawn);
                step = Rational(grown.count(x), size(grown));
                break;
            }
        }
        if (step.is_zero()) continue;
        oracle_walk(mode, omega, urn0, colors, add(drawn, Multiset::single(x)),
                    weight * step, remaining - 1, out);
    }
}

}  // namespace detail

/// Brute-force draw distribution from stepwise sequence probabilities,
/// independent of the closed-form pmfs above. Enumerates |support|^K
/// sequences, guarded against blowup.
inline Dist<Multiset> sequence_oracle(DrawMode mode, const Urn& urn, long long K) {
    std::vector<Color> colors;
    Dist<Color> omega = Dist<Color>::point_mass("_unused");
    Multiset urn_ms;
    if (mode == DrawMode::Multinomial) {
        omega = std::get<Dist<Color>>(urn);
        colors = omega.support();
    } else {
        urn_ms = std::get<Multiset>(urn);
        colors = urn_ms.support();
    }
    double sequences = std::pow(static_cast<double>(colors.size()), static_cast<double>(K));
    if (sequences > 1e7) throw ResourceError("sequence_oracle: enumeration too large");
    std::map<Multiset, Rational> acc;
    detail::oracle_walk(mode, omega, urn_ms, colors, Multiset{}, Rational(1), K, acc);
    return Dist<Multiset>::from_entries(std::move(acc));
}

/// Mode dispatch over the three closed-form pmfs.
inline Dist<Multiset> draw_pmf(DrawMode mode, const Urn& urn, long long K) {
    switch (mode) {
        case DrawMode::Multinomial: return multinomial_pmf(std::get<Dist<Color>>(urn), K);
        case DrawMode::Hypergeometric: return hypergeometric_pmf(std::get<Multiset>(urn), K);
        case DrawMode::Polya: return polya_pmf(std::get<Multiset>(urn), K);
    }
    throw DomainError("draw_pmf: unknown mode");
}

}  // namespace urntubes
