#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "urntubes/error.hpp"
#include "urntubes/rational.hpp"

namespace urntubes {

/// Colour labels compare lexicographically; that order drives every
/// deterministic iteration and enumeration in the library.
using Color = std::string;

/// Finite multiset of colours. Zero-count entries are never stored, so
/// support, equality and the orders below are all canonical.
/// Urns, draws and tubes are all values of this type.
class Multiset {
public:
    using Entries = std::map<Color, long long>;

    Multiset() = default;

    explicit Multiset(Entries entries) {
        for (auto it = entries.begin(); it != entries.end();) {
            if (it->second < 0) throw DomainError("multiset: negative count for " + it->first);
            if (it->second == 0) it = entries.erase(it);
            else ++it;
        }
        entries_ = std::move(entries);
    }

    static Multiset single(const Color& x, long long n = 1) {
        return Multiset(Entries{{x, n}});
    }

    const Entries& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    long long count(const Color& x) const {
        auto it = entries_.find(x);
        return it == entries_.end() ? 0 : it->second;
    }

    std::vector<Color> support() const {
        std::vector<Color> s;
        s.reserve(entries_.size());
        for (const auto& [x, _] : entries_) s.push_back(x);
        return s;
    }

    friend bool operator==(const Multiset&, const Multiset&) = default;
    friend auto operator<=>(const Multiset& a, const Multiset& b) {
        return a.entries_ <=> b.entries_;
    }

    /// "2a + 3b"; "0" for the empty multiset.
    std::string str() const {
        if (entries_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [x, n] : entries_) {
            if (!first) os << " + ";
            os << n << x;
            first = false;
        }
        return os.str();
    }

private:
    Entries entries_;
};

/// ‖φ‖: total number of balls.
inline long long size(const Multiset& phi) {
    long long total = 0;
    for (const auto& [_, n] : phi.entries()) total += n;
    return total;
}

inline BigInt factorial(long long n) {
    BigInt r = 1;
    for (long long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt binom(long long n, long long m) {
    if (m < 0 || m > n) return 0;
    m = std::min(m, n - m);
    BigInt r = 1;
    for (long long i = 1; i <= m; ++i) {
        r *= (n - m + i);
        r /= i;
    }
    return r;
}

/// Multiset factorial: ∏_x φ(x)!.
inline BigInt facto(const Multiset& phi) {
    BigInt r = 1;
    for (const auto& [_, n] : phi.entries()) r *= factorial(n);
    return r;
}

/// Multinomial coefficient ‖φ‖! / facto(φ): the number of sequences
/// accumulating to φ.
inline BigInt coefm(const Multiset& phi) {
    return factorial(size(phi)) / facto(phi);
}

/// Pointwise order φ ≤ ψ.
inline bool leq(const Multiset& phi, const Multiset& psi) {
    for (const auto& [x, n] : phi.entries()) {
        if (n > psi.count(x)) return false;
    }
    return true;
}

/// Multiset binomial ∏_x C(ψ(x), φ(x)); requires φ ≤ ψ.
inline BigInt mbinom(const Multiset& psi, const Multiset& phi) {
    if (!leq(phi, psi)) throw DomainError("mbinom: draw exceeds urn");
    BigInt r = 1;
    for (const auto& [x, n] : psi.entries()) r *= binom(n, phi.count(x));
    return r;
}

/// Multichoose ⦅n,m⦆ = C(n+m−1, m): multisets of size m over n elements.
inline BigInt multichoose(long long n, long long m) {
    if (n < 1) throw DomainError("multichoose: base must be >= 1");
    return binom(n + m - 1, m);
}

/// Multichoose extended to multisets: ∏_{x ∈ supp(ψ)} ⦅ψ(x), φ(x)⦆.
/// Requires supp(φ) ⊆ supp(ψ).
inline BigInt mmultichoose(const Multiset& psi, const Multiset& phi) {
    for (const auto& [x, n] : phi.entries()) {
        if (psi.count(x) == 0) throw DomainError("mmultichoose: colour " + x + " not in urn");
    }
    BigInt r = 1;
    for (const auto& [x, n] : psi.entries()) r *= multichoose(n, phi.count(x));
    return r;
}

/// Accumulate a sequence of colours into a multiset (order-insensitive).
inline Multiset acc(const std::vector<Color>& seq) {
    Multiset::Entries e;
    for (const auto& x : seq) ++e[x];
    return Multiset(std::move(e));
}

inline Multiset add(const Multiset& phi, const Multiset& psi) {
    Multiset::Entries e = phi.entries();
    for (const auto& [x, n] : psi.entries()) e[x] += n;
    return Multiset(std::move(e));
}

inline Multiset sub(const Multiset& phi, const Multiset& psi) {
    if (!leq(psi, phi)) throw DomainError("sub: subtrahend not below");
    Multiset::Entries e = phi.entries();
    for (const auto& [x, n] : psi.entries()) e[x] -= n;
    return Multiset(std::move(e));
}

struct Relation {
    bool leq = false;
    bool lt = false;
    bool fully_below = false;
};

/// The three orders of interest between φ and ψ. `fully_below` is the strict
/// pointwise order ≺ read over supp(ψ): φ(x) < ψ(x) for every colour of ψ,
/// and φ carries no colour outside supp(ψ).
inline Relation relate(const Multiset& phi, const Multiset& psi) {
    Relation r;
    r.leq = leq(phi, psi);
    r.lt = r.leq && phi != psi;
    r.fully_below = true;
    for (const auto& [x, _] : phi.entries()) {
        if (psi.count(x) == 0) { r.fully_below = false; break; }
    }
    if (r.fully_below) {
        for (const auto& [x, n] : psi.entries()) {
            if (phi.count(x) >= n) { r.fully_below = false; break; }
        }
    }
    return r;
}

namespace detail {

// Counts for the first colour run from high to low, recursing on the rest;
// combined with lexicographic colour order this fixes the enumeration order
// the golden-file tests rely on.
inline void enumerate_bounded(const std::vector<Color>& colors,
                              const std::vector<long long>& caps,
                              std::size_t idx, long long remaining,
                              Multiset::Entries& current,
                              std::vector<Multiset>& out) {
    if (idx == colors.size()) {
        if (remaining == 0) out.emplace_back(current);
        return;
    }
    long long cap_rest = 0;
    for (std::size_t j = idx + 1; j < colors.size(); ++j) cap_rest += caps[j];
    long long hi = std::min(caps[idx], remaining);
    long long lo = std::max<long long>(0, remaining - cap_rest);
    for (long long c = hi; c >= lo; --c) {
        if (c > 0) current[colors[idx]] = c;
        enumerate_bounded(colors, caps, idx + 1, remaining - c, current, out);
        current.erase(colors[idx]);
    }
}

}  // namespace detail

/// All φ ≤ ψ with ‖φ‖ = K, deterministically ordered. Returns the empty
/// sequence when K exceeds ‖ψ‖.
inline std::vector<Multiset> submultisets_of_size(const Multiset& psi, long long K) {
    std::vector<Multiset> out;
    if (K > size(psi)) return out;
    std::vector<Color> colors = psi.support();
    std::vector<long long> caps;
    caps.reserve(colors.size());
    for (const auto& x : colors) caps.push_back(psi.count(x));
    Multiset::Entries current;
    detail::enumerate_bounded(colors, caps, 0, K, current, out);
    return out;
}

/// All multisets of size K over the given support; there are
/// multichoose(|support|, K) of them.
inline std::vector<Multiset> multisets_of_size(const std::set<Color>& support, long long K) {
    if (support.empty() && K > 0) throw DomainError("multisets_of_size: empty support");
    std::vector<Multiset> out;
    std::vector<Color> colors(support.begin(), support.end());
    std::vector<long long> caps(colors.size(), K);
    Multiset::Entries current;
    detail::enumerate_bounded(colors, caps, 0, K, current, out);
    return out;
}

}  // namespace urntubes
