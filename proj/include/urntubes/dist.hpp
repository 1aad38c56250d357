#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "urntubes/error.hpp"
#include "urntubes/multiset.hpp"
#include "urntubes/rational.hpp"

namespace urntubes {

/// Finite exact distribution: outcomes with positive probability, summing to
/// exactly 1. Zero-probability outcomes are pruned on construction, so
/// equality of distributions is equality of their entry maps.
template <typename T>
class Dist {
public:
    using Entries = std::map<T, Rational>;

    static Dist from_entries(Entries entries) {
        Rational total(0);
        for (auto it = entries.begin(); it != entries.end();) {
            if (it->second < Rational(0)) throw DomainError("dist: negative probability");
            if (it->second.is_zero()) {
                it = entries.erase(it);
            } else {
                total += it->second;
                ++it;
            }
        }
        if (total != Rational(1)) {
            throw DomainError("dist: probabilities sum to " + total.str() + ", not 1");
        }
        return Dist(std::move(entries));
    }

    static Dist point_mass(const T& outcome) {
        return Dist(Entries{{outcome, Rational(1)}});
    }

    const Entries& entries() const { return entries_; }

    /// Probability of an outcome; 0 when outside the support.
    Rational at(const T& outcome) const {
        auto it = entries_.find(outcome);
        return it == entries_.end() ? Rational(0) : it->second;
    }

    std::vector<T> support() const {
        std::vector<T> s;
        s.reserve(entries_.size());
        for (const auto& [t, _] : entries_) s.push_back(t);
        return s;
    }

    friend bool operator==(const Dist&, const Dist&) = default;

private:
    explicit Dist(Entries entries) : entries_(std::move(entries)) {}

    Entries entries_;
};

/// Fuzzy predicate: total evaluation into [0,1]. Kept as a function rather
/// than a table so predicates over unbounded tuple spaces are expressible.
template <typename T>
using Predicate = std::function<Rational(const T&)>;

/// Frequentist learning: normalise a non-empty multiset, x ↦ φ(x)/‖φ‖.
inline Dist<Color> flrn(const Multiset& phi) {
    if (phi.empty()) throw DomainError("flrn: empty multiset");
    BigInt total = size(phi);
    typename Dist<Color>::Entries e;
    for (const auto& [x, n] : phi.entries()) e.emplace(x, Rational(n, total));
    return Dist<Color>::from_entries(std::move(e));
}

template <typename A, typename B>
Dist<std::pair<A, B>> tensor(const Dist<A>& omega, const Dist<B>& rho) {
    typename Dist<std::pair<A, B>>::Entries e;
    for (const auto& [a, p] : omega.entries()) {
        for (const auto& [b, q] : rho.entries()) e.emplace(std::make_pair(a, b), p * q);
    }
    return Dist<std::pair<A, B>>::from_entries(std::move(e));
}

/// ω^K as a distribution over K-tuples.
template <typename A>
Dist<std::vector<A>> tensor_pow(const Dist<A>& omega, long long K) {
    if (K == 0) throw DomainError("tensor_pow: power must be >= 1");
    typename Dist<std::vector<A>>::Entries e{{std::vector<A>{}, Rational(1)}};
    for (long long i = 0; i < K; ++i) {
        typename Dist<std::vector<A>>::Entries next;
        for (const auto& [tuple, p] : e) {
            for (const auto& [a, q] : omega.entries()) {
                std::vector<A> t = tuple;
                t.push_back(a);
                next.emplace(std::move(t), p * q);
            }
        }
        e = std::move(next);
    }
    return Dist<std::vector<A>>::from_entries(std::move(e));
}

/// Validity (expected value) of p in ω: Σ_t ω(t)·p(t).
template <typename T>
Rational validity(const Dist<T>& omega, const Predicate<T>& p) {
    Rational v(0);
    for (const auto& [t, prob] : omega.entries()) {
        Rational pt = p(t);
        if (pt < Rational(0) || pt > Rational(1)) {
            throw DomainError("validity: predicate value outside [0,1]");
        }
        v += prob * pt;
    }
    return v;
}

/// Updated distribution ω|_p: normalised pointwise product. Conditioning on
/// a predicate with zero validity is an error distinct from domain errors.
template <typename T>
Dist<T> condition(const Dist<T>& omega, const Predicate<T>& p) {
    Rational v = validity(omega, p);
    if (v.is_zero()) throw ConditioningError("condition: zero validity");
    typename Dist<T>::Entries e;
    for (const auto& [t, prob] : omega.entries()) {
        Rational w = prob * p(t) / v;
        if (!w.is_zero()) e.emplace(t, w);
    }
    return Dist<T>::from_entries(std::move(e));
}

}  // namespace urntubes
