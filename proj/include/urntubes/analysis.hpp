#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "urntubes/dist.hpp"
#include "urntubes/draws.hpp"
#include "urntubes/error.hpp"
#include "urntubes/multiset.hpp"

namespace urntubes {

/// Result of checking one identity: both sides exactly, a verdict, and an
/// optional note (e.g. truncation details for infinite sums).
struct IdentityReport {
    std::string identity;
    std::map<std::string, std::string> params;
    Rational lhs;
    Rational rhs;
    bool holds = false;
    std::string note;
};

using Tuple = std::vector<long long>;

/// Indicator of n_1 + … + n_ℓ = K on ℓ-tuples.
inline Predicate<Tuple> sum_predicate(long long K, long long ell) {
    if (ell < 1) throw DomainError("sum_predicate: tuple length must be >= 1");
    return [K, ell](const Tuple& t) {
        if (static_cast<long long>(t.size()) != ell) {
            throw DomainError("sum_predicate: tuple length mismatch");
        }
        long long s = 0;
        for (long long n : t) s += n;
        return Rational(s == K ? 1 : 0);
    };
}

namespace detail {

inline Dist<Tuple> tuple_product(const std::vector<Dist<long long>>& factors) {
    std::map<Tuple, Rational> acc{{Tuple{}, Rational(1)}};
    for (const auto& f : factors) {
        std::map<Tuple, Rational> next;
        for (const auto& [t, p] : acc) {
            for (const auto& [n, q] : f.entries()) {
                Tuple t2 = t;
                t2.push_back(n);
                next.emplace(std::move(t2), p * q);
            }
        }
        acc = std::move(next);
    }
    return Dist<Tuple>::from_entries(std::move(acc));
}

}  // namespace detail

/// Conditioning ℓ parallel binomials Bin(k_i, r) on their sum being K gives
/// the hypergeometric draw distribution of the urn Σ k_i·⟨i⟩ — for any
/// interior r.
inline Dist<Tuple> hypergeometric_via_conditioning(const std::vector<long long>& ks,
                                                   const Rational& r, long long K) {
    if (ks.empty()) throw DomainError("hypergeometric_via_conditioning: no factors");
    if (r <= Rational(0) || r >= Rational(1)) {
        throw DomainError("hypergeometric_via_conditioning: r must be in (0,1)");
    }
    long long total = 0;
    std::vector<Dist<long long>> factors;
    factors.reserve(ks.size());
    for (long long k : ks) {
        if (k < 0) throw DomainError("hypergeometric_via_conditioning: negative k");
        total += k;
        factors.push_back(binomial_pmf(k, r));
    }
    if (K > total) throw DomainError("hypergeometric_via_conditioning: K exceeds urn size");
    return condition(detail::tuple_product(factors), sum_predicate(K, ks.size()));
}

/// Conditioning ℓ parallel negative binomials NegBin(k_i, r) on the total
/// draw count being K gives the Pólya draw distribution of the urn
/// Σ k_i·⟨i⟩ with K − Σk_i draws; tuples record total per-factor draws
/// k_i + n_i. Truncating each factor at K is exact because the sum
/// predicate kills all heavier tuples.
inline Dist<Tuple> polya_via_conditioning(const std::vector<long long>& ks, const Rational& r,
                                          long long K) {
    if (ks.empty()) throw DomainError("polya_via_conditioning: no factors");
    if (r <= Rational(0) || r >= Rational(1)) {
        throw DomainError("polya_via_conditioning: r must be in (0,1)");
    }
    long long total = 0;
    for (long long k : ks) {
        if (k < 1) throw DomainError("polya_via_conditioning: factor sizes must be >= 1");
        total += k;
    }
    if (K < total) throw DomainError("polya_via_conditioning: K below the urn size");
    std::vector<NatDist> factors;
    factors.reserve(ks.size());
    for (long long k : ks) factors.push_back(negbinomial_pmf(k, r, K));
    // Unnormalized pointwise product restricted to Σ t_i = K, normalized at
    // the end; residual mass never meets the predicate.
    std::map<Tuple, Rational> weights;
    std::function<void(std::size_t, const Tuple&, long long, const Rational&)> walk =
        [&](std::size_t idx, const Tuple& t, long long sum, const Rational& w) {
            if (idx == factors.size()) {
                if (sum == K && !w.is_zero()) weights[t] += w;
                return;
            }
            for (const auto& [n, p] : factors[idx].entries) {
                if (sum + n > K) break;
                Tuple t2 = t;
                t2.push_back(n);
                walk(idx + 1, t2, sum + n, w * p);
            }
        };
    walk(0, Tuple{}, 0, Rational(1));
    Rational v(0);
    for (const auto& [_, w] : weights) v += w;
    if (v.is_zero()) throw ConditioningError("polya_via_conditioning: zero validity");
    std::map<Tuple, Rational> e;
    for (const auto& [t, w] : weights) e.emplace(t, w / v);
    return Dist<Tuple>::from_entries(std::move(e));
}

// ---------------------------------------------------------------------------
// Identity checkers.

/// Parameters for the bivariate corollaries; each item reads the fields its
/// statement mentions (n,m always; r for the replacement case, N,M for the
/// urn cases).
struct CorollaryParams {
    long long n = 1;
    long long m = 1;
    Rational r{1, 2};
    long long N = 1;
    long long M = 1;
};

namespace detail {

inline std::map<std::string, std::string> corollary_param_map(int item,
                                                              const CorollaryParams& p) {
    std::map<std::string, std::string> out{{"n", std::to_string(p.n)},
                                           {"m", std::to_string(p.m)}};
    if (item == 1) {
        out["r"] = p.r.str();
        out["s"] = (Rational(1) - p.r).str();
    } else {
        out["N"] = std::to_string(p.N);
        out["M"] = std::to_string(p.M);
    }
    return out;
}

}  // namespace detail

/// Normalization identities of the bivariate first-full distributions with
/// tubes n·a + m·b; all three are finite sums checked exactly.
inline IdentityReport check_firstfull_identity(int item, const CorollaryParams& p) {
    if (p.n < 1 || p.m < 1) throw DomainError("check_firstfull_identity: n,m must be >= 1");
    IdentityReport rep;
    rep.params = detail::corollary_param_map(item, p);
    const long long n = p.n, m = p.m;
    switch (item) {
        case 1: {
            const Rational r = p.r, s = Rational(1) - p.r;
            if (r < Rational(0) || r > Rational(1)) {
                throw DomainError("check_firstfull_identity: r outside [0,1]");
            }
            rep.identity = "firstfull.replacement";
            Rational a(0), b(0);
            for (long long j = 0; j < m; ++j) a += Rational(multichoose(n, j)) * pow(s, j);
            for (long long i = 0; i < n; ++i) b += Rational(multichoose(m, i)) * pow(r, i);
            rep.lhs = pow(r, n) * a + pow(s, m) * b;
            rep.rhs = Rational(1);
            break;
        }
        case 2: {
            const long long N = p.N, M = p.M;
            if (N < n || M < m) throw DomainError("check_firstfull_identity: need N>=n, M>=m");
            rep.identity = "firstfull.draw-minus-one";
            Rational lhs(0);
            for (long long j = 0; j < m; ++j) {
                lhs += Rational(multichoose(n, j) * binom(N - n + M - j, N - n));
            }
            for (long long i = 0; i < n; ++i) {
                lhs += Rational(multichoose(m, i) * binom(N - i + M - m, M - m));
            }
            rep.lhs = lhs;
            rep.rhs = Rational(binom(N + M, N));
            break;
        }
        case 3: {
            const long long N = p.N, M = p.M;
            if (N < 1 || M < 1) throw DomainError("check_firstfull_identity: need N,M >= 1");
            rep.identity = "firstfull.draw-plus-one";
            Rational a(0), b(0);
            for (long long j = 0; j < m; ++j) {
                a += Rational(multichoose(M, j), multichoose(n + j, N + M));
            }
            for (long long i = 0; i < n; ++i) {
                b += Rational(multichoose(N, i), multichoose(i + m, N + M));
            }
            rep.lhs = Rational(n) * Rational(multichoose(N, n)) * a +
                      Rational(m) * Rational(multichoose(M, m)) * b;
            rep.rhs = Rational(N + M);
            break;
        }
        default: throw DomainError("check_firstfull_identity: item must be 1, 2 or 3");
    }
    rep.holds = rep.lhs == rep.rhs;
    return rep;
}

/// Normalization identities of the bivariate negative distributions. Item 2
/// is a finite sum checked exactly; items 1 and 3 are infinite sums checked
/// as monotone partial sums bounded by the closed form, with the gap
/// required to drop below `tol` at the given truncation.
inline IdentityReport check_negative_identity(int item, const CorollaryParams& p,
                                              long long truncation,
                                              const Rational& tol = Rational(1, 100)) {
    if (p.n < 1 || p.m < 1) throw DomainError("check_negative_identity: n,m must be >= 1");
    IdentityReport rep;
    rep.params = detail::corollary_param_map(item, p);
    const long long n = p.n, m = p.m;
    switch (item) {
        case 1: {
            const Rational r = p.r, s = Rational(1) - p.r;
            if (r <= Rational(0) || r >= Rational(1)) {
                throw DomainError("check_negative_identity: r must be in (0,1)");
            }
            rep.identity = "negative.replacement";
            rep.rhs = Rational(1) / (pow(r, n) * pow(s, m));
            if (truncation < 0) throw DomainError("check_negative_identity: bad truncation");
            Rational partial(0), prev(0);
            bool monotone = true;
            for (long long i = 0; i <= truncation; ++i) {
                partial += Rational(multichoose(n, m + i)) * pow(s, i) +
                           Rational(multichoose(m, n + i)) * pow(r, i);
                if (partial < prev) monotone = false;
                prev = partial;
            }
            rep.lhs = partial;
            rep.holds = monotone && partial <= rep.rhs && rep.rhs - partial < tol;
            rep.note = "partial sum at truncation " + std::to_string(truncation) +
                       ", gap " + (rep.rhs - partial).str();
            return rep;
        }
        case 2: {
            const long long N = p.N, M = p.M;
            if (N < n || M < m) throw DomainError("check_negative_identity: need N>=n, M>=m");
            rep.identity = "negative.draw-minus-one";
            Rational lhs(0);
            for (long long j = 0; j <= M - m; ++j) {
                lhs += Rational(multichoose(n, m + j) * binom(N - n + M - m - j, N - n));
            }
            for (long long i = 0; i <= N - n; ++i) {
                lhs += Rational(multichoose(m, n + i) * binom(N - n - i + M - m, M - m));
            }
            rep.lhs = lhs;
            rep.rhs = Rational(binom(N + M, N));
            rep.holds = rep.lhs == rep.rhs;
            return rep;
        }
        case 3: {
            const long long N = p.N, M = p.M;
            if (N < 1 || M < 1) throw DomainError("check_negative_identity: need N,M >= 1");
            rep.identity = "negative.draw-plus-one";
            rep.rhs = Rational(N + M);
            if (truncation < 0) throw DomainError("check_negative_identity: bad truncation");
            Rational partial(0), prev(0);
            bool monotone = true;
            for (long long t = 0; t <= truncation; ++t) {
                partial += Rational(n) * Rational(multichoose(N, n)) *
                           Rational(multichoose(M, m + t), multichoose(n + m + t, N + M));
                partial += Rational(m) * Rational(multichoose(M, m)) *
                           Rational(multichoose(N, n + t), multichoose(n + t + m, N + M));
                if (partial < prev) monotone = false;
                prev = partial;
            }
            rep.lhs = partial;
            rep.holds = monotone && partial <= rep.rhs && rep.rhs - partial < tol;
            rep.note = "partial sum at truncation " + std::to_string(truncation) +
                       ", gap " + (rep.rhs - partial).str();
            return rep;
        }
        default: throw DomainError("check_negative_identity: item must be 1, 2 or 3");
    }
}

/// Σ_{φ≤ψ, ‖φ‖=K} mbinom(ψ,φ) = C(‖ψ‖, K) — the multiset Vandermonde rule.
inline IdentityReport check_multiset_vandermonde(const Multiset& psi, long long K) {
    IdentityReport rep;
    rep.identity = "vandermonde.binomial";
    rep.params = {{"psi", psi.str()}, {"K", std::to_string(K)}};
    Rational lhs(0);
    for (const auto& phi : submultisets_of_size(psi, K)) lhs += Rational(mbinom(psi, phi));
    rep.lhs = lhs;
    rep.rhs = Rational(binom(size(psi), K));
    rep.holds = rep.lhs == rep.rhs;
    return rep;
}

/// Σ_{supp(φ)⊆supp(ψ), ‖φ‖=K} mmultichoose(ψ,φ) = ⦅‖ψ‖,K⦆.
inline IdentityReport check_multichoose_vandermonde(const Multiset& psi, long long K) {
    if (psi.empty()) throw DomainError("check_multichoose_vandermonde: empty multiset");
    IdentityReport rep;
    rep.identity = "vandermonde.multichoose";
    rep.params = {{"psi", psi.str()}, {"K", std::to_string(K)}};
    std::set<Color> support;
    for (const auto& [x, _] : psi.entries()) support.insert(x);
    Rational lhs(0);
    for (const auto& phi : multisets_of_size(support, K)) {
        lhs += Rational(mmultichoose(psi, phi));
    }
    rep.lhs = lhs;
    rep.rhs = Rational(multichoose(size(psi), K));
    rep.holds = rep.lhs == rep.rhs;
    return rep;
}

}  // namespace urntubes
