#pragma once

#include <functional>
#include <map>
#include <utility>
#include <variant>

#include "urntubes/dist.hpp"
#include "urntubes/draws.hpp"
#include "urntubes/error.hpp"
#include "urntubes/multiset.hpp"

namespace urntubes {

/// One step of a Markov model with output: either continue at a new position
/// or emit a terminal output. Positions must order canonically so equal
/// positions merge during iteration; that merging is what keeps iteration
/// polynomial instead of sequence-exponential.
template <typename P, typename O>
struct Step {
    std::variant<P, O> value;

    static Step cont(P p) { return Step{std::variant<P, O>(std::in_place_index<0>, std::move(p))}; }
    static Step output(O o) { return Step{std::variant<P, O>(std::in_place_index<1>, std::move(o))}; }

    bool is_output() const { return value.index() == 1; }
    const P& position() const { return std::get<0>(value); }
    const O& out() const { return std::get<1>(value); }

    friend bool operator==(const Step&, const Step&) = default;
    friend auto operator<=>(const Step& a, const Step& b) { return a.value <=> b.value; }
};

/// Markov model with output: a pure transition kernel from positions to
/// distributions over (position | output). Kernels are functions, not stored
/// tables; the reachable state space is generated lazily.
template <typename P, typename O>
class Mmo {
public:
    using StepDist = Dist<Step<P, O>>;
    using Kernel = std::function<StepDist(const P&)>;

    explicit Mmo(Kernel kernel) : kernel_(std::move(kernel)) {}

    StepDist kernel(const P& p) const { return kernel_(p); }

    /// One Kleisli iteration: continuation mass moves through the kernel,
    /// output mass is frozen. Equal positions/outputs merge.
    StepDist advance(const StepDist& current) const {
        typename StepDist::Entries next;
        for (const auto& [step, mass] : current.entries()) {
            if (step.is_output()) {
                next[step] += mass;
            } else {
                StepDist moved = kernel_(step.position());
                for (const auto& [succ, p] : moved.entries()) {
                    next[succ] += mass * p;
                }
            }
        }
        return StepDist::from_entries(std::move(next));
    }

    /// c^n applied to a point mass at `start`.
    StepDist iterate(const P& start, long long n) const {
        StepDist current = StepDist::point_mass(Step<P, O>::cont(start));
        for (long long i = 0; i < n; ++i) current = advance(current);
        return current;
    }

private:
    Kernel kernel_;
};

/// Output mass after iterating to (or towards) absorption. The residual is
/// the exact continuation mass left when max_steps ran out; 0 means the
/// output map is itself a distribution.
template <typename O>
struct Absorption {
    std::map<O, Rational> output;
    Rational residual{0};

    Dist<O> distribution() const {
        if (!residual.is_zero()) {
            throw DomainError("absorption: residual mass " + residual.str() + " remains");
        }
        return Dist<O>::from_entries(output);
    }
};

template <typename P, typename O>
Absorption<O> run_to_absorption(const Mmo<P, O>& mmo, const P& start, long long max_steps) {
    if (max_steps < 1) throw DomainError("run_to_absorption: max_steps must be >= 1");
    auto current = Mmo<P, O>::StepDist::point_mass(Step<P, O>::cont(start));
    for (long long i = 0; i < max_steps; ++i) {
        bool any_continue = false;
        for (const auto& [step, _] : current.entries()) {
            if (!step.is_output()) { any_continue = true; break; }
        }
        if (!any_continue) break;
        current = mmo.advance(current);
    }
    Absorption<O> result;
    for (const auto& [step, mass] : current.entries()) {
        if (step.is_output()) result.output[step.out()] += mass;
        else result.residual += mass;
    }
    return result;
}

/// Tubes-as-position automaton for the multinomial mode: tubes of remaining
/// length > 1 decrement, length-1 tubes emit their colour.
inline Mmo<Multiset, Color> mn_firstfull_mmo(const Dist<Color>& omega) {
    return Mmo<Multiset, Color>([omega](const Multiset& tubes) {
        using S = Step<Multiset, Color>;
        typename Dist<S>::Entries e;
        for (const auto& [x, p] : omega.entries()) {
            if (tubes.count(x) > 1) {
                e[S::cont(sub(tubes, Multiset::single(x)))] += p;
            } else {
                e[S::output(x)] += p;
            }
        }
        return Dist<S>::from_entries(std::move(e));
    });
}

using UrnTubes = std::pair<Multiset, Multiset>;

/// Hypergeometric variant: the urn travels with the tubes and shrinks by the
/// drawn ball.
inline Mmo<UrnTubes, Color> hg_firstfull_mmo() {
    return Mmo<UrnTubes, Color>([](const UrnTubes& pos) {
        using S = Step<UrnTubes, Color>;
        const auto& [urn, tubes] = pos;
        typename Dist<S>::Entries e;
        Dist<Color> draw = flrn(urn);
        for (const auto& [x, p] : draw.entries()) {
            if (tubes.count(x) > 1) {
                e[S::cont({sub(urn, Multiset::single(x)), sub(tubes, Multiset::single(x))})] += p;
            } else {
                e[S::output(x)] += p;
            }
        }
        return Dist<S>::from_entries(std::move(e));
    });
}

/// Pólya variant: the urn grows by a duplicate of the drawn ball.
inline Mmo<UrnTubes, Color> pl_firstfull_mmo() {
    return Mmo<UrnTubes, Color>([](const UrnTubes& pos) {
        using S = Step<UrnTubes, Color>;
        const auto& [urn, tubes] = pos;
        typename Dist<S>::Entries e;
        Dist<Color> draw = flrn(urn);
        for (const auto& [x, p] : draw.entries()) {
            if (tubes.count(x) > 1) {
                e[S::cont({add(urn, Multiset::single(x)), sub(tubes, Multiset::single(x))})] += p;
            } else {
                e[S::output(x)] += p;
            }
        }
        return Dist<S>::from_entries(std::move(e));
    });
}

/// First-full via the automaton path: ‖τ‖−|X|+1 iterations absorb all mass.
/// Equals mnff/hgff/plff exactly; kept as the independent computation route.
inline Dist<Color> firstfull_via_mmo(DrawMode mode, const Urn& urn, const Multiset& tubes) {
    if (tubes.empty()) throw DomainError("firstfull_via_mmo: empty tubes");
    long long steps = size(tubes) - static_cast<long long>(tubes.support().size()) + 1;
    switch (mode) {
        case DrawMode::Multinomial: {
            const auto& omega = std::get<Dist<Color>>(urn);
            if (omega.support() != tubes.support()) {
                throw DomainError("firstfull_via_mmo: urn and tube supports differ");
            }
            return run_to_absorption(mn_firstfull_mmo(omega), tubes, steps).distribution();
        }
        case DrawMode::Hypergeometric: {
            const auto& u = std::get<Multiset>(urn);
            if (!leq(tubes, u) || u.support() != tubes.support()) {
                throw DomainError("firstfull_via_mmo: urn does not cover tubes");
            }
            return run_to_absorption(hg_firstfull_mmo(), {u, tubes}, steps).distribution();
        }
        case DrawMode::Polya: {
            const auto& u = std::get<Multiset>(urn);
            if (u.support() != tubes.support()) {
                throw DomainError("firstfull_via_mmo: urn and tube supports differ");
            }
            return run_to_absorption(pl_firstfull_mmo(), {u, tubes}, steps).distribution();
        }
    }
    throw DomainError("firstfull_via_mmo: unknown mode");
}

}  // namespace urntubes
