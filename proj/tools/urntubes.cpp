// urntubes: exact urn-and-tube probability computations on the command line.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "urntubes/analysis.hpp"
#include "urntubes/draws.hpp"
#include "urntubes/error.hpp"
#include "urntubes/firstfull.hpp"
#include "urntubes/mmo.hpp"
#include "urntubes/negative.hpp"
#include "urntubes/parse.hpp"
#include "urntubes/serialize.hpp"

namespace {

using namespace urntubes;

enum class Format { Table, Json, Csv };

Format parse_format(const std::string& name) {
    if (name == "table") return Format::Table;
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    throw CLI::ValidationError("--format", "unknown format '" + name + "'");
}

DrawMode parse_mode(const std::string& name) {
    if (name == "multinomial") return DrawMode::Multinomial;
    if (name == "hypergeometric") return DrawMode::Hypergeometric;
    if (name == "polya") return DrawMode::Polya;
    throw CLI::ValidationError("--mode", "unknown mode '" + name + "'");
}

Rational parse_rational(const std::string& text) {
    detail::SpecCursor c(text);
    Rational r = c.rational();
    if (!c.done()) throw ParseError("unexpected trailing input", c.pos());
    return r;
}

/// Urn spec: a distribution for multinomial mode, a multiset otherwise.
Urn parse_urn(DrawMode mode, const std::string& spec) {
    if (mode == DrawMode::Multinomial) return parse_dist(spec);
    return parse_multiset(spec);
}

template <typename Doc>
void emit(const Doc& doc, Format format) {
    switch (format) {
        case Format::Table: std::cout << to_table(doc); break;
        case Format::Json: std::cout << to_json(doc).dump(2) << "\n"; break;
        case Format::Csv: std::cout << to_csv(doc); break;
    }
}

// ---------------------------------------------------------------------------
// Check suites. Instance generation uses raw mt19937_64 output so identical
// seeds give identical reports on every platform.

long long pick(std::mt19937_64& rng, long long lo, long long hi) {
    return lo + static_cast<long long>(rng() % static_cast<unsigned long long>(hi - lo + 1));
}

const std::vector<Color> kColors = {"a", "b", "c", "d"};
const std::vector<std::string> kModeNames = {"multinomial", "hypergeometric", "polya"};
const std::vector<Rational> kInteriorR = {Rational(1, 3), Rational(1, 2), Rational(3, 5)};

Multiset random_multiset(std::mt19937_64& rng, long long max_colors, long long max_count,
                         long long max_size) {
    long long nc = pick(rng, 1, max_colors);
    Multiset::Entries e;
    long long total = 0;
    for (long long i = 0; i < nc; ++i) {
        long long n = pick(rng, 1, max_count);
        if (total + n > max_size) n = max_size - total;
        if (n <= 0) break;
        e[kColors[static_cast<std::size_t>(i)]] = n;
        total += n;
    }
    if (e.empty()) e[kColors[0]] = 1;
    return Multiset(std::move(e));
}

/// Random exact distribution on the support of φ, via normalized weights.
Dist<Color> random_dist(std::mt19937_64& rng, const Multiset& phi) {
    Multiset::Entries weights;
    for (const auto& [x, _] : phi.entries()) weights[x] = pick(rng, 1, 9);
    return flrn(Multiset(std::move(weights)));
}

IdentityReport cross_path_report(const std::string& identity,
                                 std::map<std::string, std::string> params,
                                 const Rational& max_diff) {
    IdentityReport rep;
    rep.identity = identity;
    rep.params = std::move(params);
    rep.lhs = max_diff;
    rep.rhs = Rational(0);
    rep.holds = max_diff == Rational(0);
    rep.note = "max |pointwise - automaton| over the support";
    return rep;
}

Rational abs_diff(const Rational& a, const Rational& b) { return a < b ? b - a : a - b; }

std::vector<IdentityReport> suite_vandermonde(std::mt19937_64& rng, long long trials) {
    std::vector<IdentityReport> out;
    for (long long t = 0; t < trials; ++t) {
        Multiset psi = random_multiset(rng, 4, 6, 12);
        out.push_back(check_multiset_vandermonde(psi, pick(rng, 0, size(psi))));
        out.push_back(check_multichoose_vandermonde(psi, pick(rng, 0, 12)));
    }
    return out;
}

std::vector<IdentityReport> suite_firstfull(std::mt19937_64& rng, long long trials) {
    std::vector<IdentityReport> out;
    for (long long t = 0; t < trials; ++t) {
        Multiset tubes = random_multiset(rng, 3, 3, 9);
        long long mode_idx = pick(rng, 0, 2);
        DrawMode mode = static_cast<DrawMode>(mode_idx);
        Urn urn = Multiset{};
        std::string urn_str;
        if (mode == DrawMode::Multinomial) {
            Dist<Color> omega = random_dist(rng, tubes);
            urn_str = print_dist(omega);
            urn = std::move(omega);
        } else {
            Multiset::Entries e;
            for (const auto& [x, n] : tubes.entries()) e[x] = n + pick(rng, 0, 4);
            Multiset u(std::move(e));
            urn_str = u.str();
            urn = std::move(u);
        }
        Dist<Color> pointwise = firstfull(mode, urn, tubes);
        Dist<Color> automaton = firstfull_via_mmo(mode, urn, tubes);
        Rational diff(0);
        for (const auto& [x, _] : tubes.entries()) {
            diff = std::max(diff, abs_diff(pointwise.at(x), automaton.at(x)));
        }
        out.push_back(cross_path_report(
            "firstfull.cross-path",
            {{"mode", kModeNames[static_cast<std::size_t>(mode_idx)]}, {"urn", urn_str}, {"tubes", tubes.str()}},
            diff));
    }
    return out;
}

std::vector<IdentityReport> suite_negative(std::mt19937_64& rng, long long trials) {
    std::vector<IdentityReport> out;
    for (long long t = 0; t < trials; ++t) {
        Multiset tubes = random_multiset(rng, 3, 3, 7);
        long long mode_idx = pick(rng, 0, 2);
        DrawMode mode = static_cast<DrawMode>(mode_idx);
        Urn urn = Multiset{};
        std::string urn_str;
        if (mode == DrawMode::Multinomial) {
            Dist<Color> omega = random_dist(rng, tubes);
            urn_str = print_dist(omega);
            urn = std::move(omega);
        } else {
            Multiset::Entries e;
            for (const auto& [x, n] : tubes.entries()) e[x] = n + pick(rng, 0, 3);
            Multiset u(std::move(e));
            urn_str = u.str();
            urn = std::move(u);
        }
        long long k_max = size(tubes) + 5;
        NatDist pointwise = mode == DrawMode::Hypergeometric
                                ? nhg(std::get<Multiset>(urn), tubes)
                                : negative_dist(mode, urn, tubes, Cutoff::at(k_max));
        NatDist automaton = negative_via_mmo(mode, urn, tubes, pointwise.k_max);
        Rational diff = abs_diff(pointwise.residual, automaton.residual);
        for (long long k = pointwise.k_min; k <= pointwise.k_max; ++k) {
            diff = std::max(diff, abs_diff(pointwise.at(k), automaton.at(k)));
        }
        out.push_back(cross_path_report(
            "negative.cross-path",
            {{"mode", kModeNames[static_cast<std::size_t>(mode_idx)]}, {"urn", urn_str}, {"tubes", tubes.str()}},
            diff));
    }
    return out;
}

std::vector<IdentityReport> suite_conditioning(std::mt19937_64& rng, long long trials) {
    std::vector<IdentityReport> out;
    for (long long t = 0; t < trials; ++t) {
        long long ell = pick(rng, 2, 3);
        std::vector<long long> ks;
        long long total = 0;
        std::string ks_str;
        for (long long i = 0; i < ell; ++i) {
            ks.push_back(pick(rng, 1, 4));
            total += ks.back();
            if (!ks_str.empty()) ks_str += ",";
            ks_str += std::to_string(ks.back());
        }
        Multiset::Entries urn_entries;
        for (long long i = 0; i < ell; ++i) {
            urn_entries[kColors[static_cast<std::size_t>(i)]] = ks[static_cast<std::size_t>(i)];
        }
        Multiset urn(std::move(urn_entries));

        // Parallel binomials conditioned on the draw total vs hypergeometric,
        // over all interior r.
        long long K = pick(rng, 0, total);
        Dist<Multiset> hg = hypergeometric_pmf(urn, K);
        Rational diff(0);
        for (const auto& r : kInteriorR) {
            Dist<Tuple> cond = hypergeometric_via_conditioning(ks, r, K);
            for (const auto& [tuple, p] : cond.entries()) {
                Multiset::Entries phi;
                for (long long i = 0; i < ell; ++i) {
                    phi[kColors[static_cast<std::size_t>(i)]] = tuple[static_cast<std::size_t>(i)];
                }
                diff = std::max(diff, abs_diff(p, hg.at(Multiset(phi))));
            }
        }
        out.push_back(cross_path_report(
            "conditioning.hypergeometric",
            {{"ks", ks_str}, {"K", std::to_string(K)}}, diff));

        // Parallel negative binomials conditioned on the total draw count vs
        // the Pólya draw distribution.
        long long draws = pick(rng, 0, 4);
        Dist<Multiset> pl = polya_pmf(urn, draws);
        diff = Rational(0);
        for (const auto& r : kInteriorR) {
            Dist<Tuple> cond = polya_via_conditioning(ks, r, total + draws);
            for (const auto& [tuple, p] : cond.entries()) {
                Multiset::Entries phi;
                for (long long i = 0; i < ell; ++i) {
                    long long extra = tuple[static_cast<std::size_t>(i)] - ks[static_cast<std::size_t>(i)];
                    if (extra > 0) phi[kColors[static_cast<std::size_t>(i)]] = extra;
                }
                diff = std::max(diff, abs_diff(p, pl.at(Multiset(phi))));
            }
        }
        out.push_back(cross_path_report(
            "conditioning.polya",
            {{"ks", ks_str}, {"K", std::to_string(total + draws)}}, diff));
    }
    return out;
}

std::vector<IdentityReport> suite_corollaries(std::mt19937_64& rng, long long trials) {
    std::vector<IdentityReport> out;
    for (long long t = 0; t < trials; ++t) {
        CorollaryParams p;
        p.n = pick(rng, 1, 4);
        p.m = pick(rng, 1, 4);
        p.r = kInteriorR[static_cast<std::size_t>(pick(rng, 0, 2))];
        p.N = pick(rng, p.n, 8);
        p.M = pick(rng, p.m, 8);
        out.push_back(check_firstfull_identity(1, p));
        out.push_back(check_firstfull_identity(2, p));
        out.push_back(check_firstfull_identity(3, p));
        out.push_back(check_negative_identity(2, p, 0));
    }
    // The two infinite-sum identities at a fixed truncation.
    CorollaryParams q;
    q.n = 1;
    q.m = 1;
    q.r = Rational(1, 2);
    q.N = 2;
    q.M = 2;
    out.push_back(check_negative_identity(1, q, 200));
    out.push_back(check_negative_identity(3, q, 200));
    return out;
}

int run_check(const std::string& suite, unsigned long long seed, long long trials,
              Format format) {
    std::mt19937_64 rng(seed);
    std::vector<IdentityReport> reports;
    if (suite == "vandermonde") reports = suite_vandermonde(rng, trials);
    else if (suite == "firstfull") reports = suite_firstfull(rng, trials);
    else if (suite == "negative") reports = suite_negative(rng, trials);
    else if (suite == "conditioning") reports = suite_conditioning(rng, trials);
    else if (suite == "corollaries") reports = suite_corollaries(rng, trials);
    else throw CLI::ValidationError("--suite", "unknown suite '" + suite + "'");

    switch (format) {
        case Format::Table: std::cout << to_table(reports); break;
        case Format::Json: {
            Json arr = Json::array();
            for (const auto& rep : reports) arr.push_back(to_json(rep));
            std::cout << arr.dump(2) << "\n";
            break;
        }
        case Format::Csv: std::cout << to_csv(reports); break;
    }
    for (const auto& rep : reports) {
        if (!rep.holds) return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact urn-and-tube probability distributions"};
    app.require_subcommand(1);

    std::string format_name = "table";
    if (const char* env = std::getenv("URNTUBES_FORMAT")) format_name = env;
    app.add_option("--format", format_name, "Output format: table, json or csv");

    std::string mode_name, urn_spec, tubes_spec;
    long long k = 0;
    auto* draw = app.add_subcommand("draw", "Distribution of a draw of k balls");
    draw->add_option("--mode", mode_name)->required();
    draw->add_option("--urn", urn_spec)->required();
    draw->add_option("-k,--draws", k)->required();

    auto* firstfull_cmd = app.add_subcommand("first-full", "Which tube fills first");
    firstfull_cmd->add_option("--mode", mode_name)->required();
    firstfull_cmd->add_option("--urn", urn_spec)->required();
    firstfull_cmd->add_option("--tubes", tubes_spec)->required();

    std::optional<long long> kmax_opt;
    std::string tail_eps_spec;
    bool trace = false;
    auto* negative_cmd =
        app.add_subcommand("negative", "Draws until all tubes are full, as a distribution");
    negative_cmd->add_option("--mode", mode_name)->required();
    negative_cmd->add_option("--urn", urn_spec)->required();
    negative_cmd->add_option("--tubes", tubes_spec)->required();
    negative_cmd->add_option("--kmax", kmax_opt, "Hard cutoff for infinite-support modes");
    negative_cmd->add_option("--tail-eps", tail_eps_spec,
                             "Grow the cutoff until the tail bound drops below this (default 1/1000)");
    negative_cmd->add_flag("--trace", trace, "Emit one JSON object per automaton step");

    long long target = 0, wins_a = 0, wins_b = 0;
    std::string prob_spec, stake_spec;
    auto* points_cmd = app.add_subcommand("points", "Problem of points: fair stake division");
    points_cmd->add_option("--target", target)->required();
    points_cmd->add_option("--wins-a", wins_a)->required();
    points_cmd->add_option("--wins-b", wins_b)->required();
    points_cmd->add_option("--prob", prob_spec, "Per-round win probability of A")->required();
    points_cmd->add_option("--stake", stake_spec)->required();

    std::string suite;
    unsigned long long seed = 0;
    long long trials = 50;
    auto* check_cmd = app.add_subcommand("check", "Run an identity check suite");
    check_cmd->add_option("--suite", suite)->required();
    check_cmd->add_option("--seed", seed);
    check_cmd->add_option("--trials", trials);

    // Let the global --format appear after the subcommand as well.
    for (auto* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        Format format = parse_format(format_name);
        if (*draw) {
            DrawMode mode = parse_mode(mode_name);
            emit(draw_pmf(mode, parse_urn(mode, urn_spec), k), format);
        } else if (*firstfull_cmd) {
            DrawMode mode = parse_mode(mode_name);
            emit(firstfull(mode, parse_urn(mode, urn_spec), parse_multiset(tubes_spec)), format);
        } else if (*negative_cmd) {
            DrawMode mode = parse_mode(mode_name);
            Urn urn = parse_urn(mode, urn_spec);
            Multiset tubes = parse_multiset(tubes_spec);
            if (kmax_opt && !tail_eps_spec.empty()) {
                throw CLI::ValidationError("--kmax", "give at most one of --kmax and --tail-eps");
            }
            Cutoff cutoff = kmax_opt ? Cutoff::at(*kmax_opt)
                                     : Cutoff::tol(tail_eps_spec.empty()
                                                       ? Rational(1, 1000)
                                                       : parse_rational(tail_eps_spec));
            NatDist result = negative_dist(mode, urn, tubes, cutoff);
            if (trace) {
                std::map<long long, Json> steps;
                negative_via_mmo(mode, urn, tubes, result.k_max,
                                 [&steps](long long step, const std::string& label,
                                          const Rational& mass) {
                                     auto [it, fresh] = steps.try_emplace(
                                         step, Json{{"step", step}, {"positions", Json::array()}});
                                     Json row{{"position", label}};
                                     row["num"] = mass.num().str();
                                     row["den"] = mass.den().str();
                                     it->second["positions"].push_back(std::move(row));
                                 });
                for (const auto& [_, j] : steps) std::cout << j.dump() << "\n";
            }
            emit(result, format);
        } else if (*points_cmd) {
            PointsShare ps =
                points_share(target, wins_a, wins_b, parse_rational(prob_spec),
                             parse_rational(stake_spec));
            switch (format) {
                case Format::Table:
                    std::cout << to_table(ps.rho);
                    std::cout << "share " << ps.share_a.str() << "  " << approx6(ps.share_a)
                              << "\n";
                    break;
                case Format::Json: {
                    Json j{{"rho", to_json(ps.rho)}, {"share", to_json(ps.share_a)}};
                    std::cout << j.dump(2) << "\n";
                    break;
                }
                case Format::Csv:
                    std::cout << to_csv(ps.rho);
                    std::cout << "share," << ps.share_a.num().str() << ","
                              << ps.share_a.den().str() << "," << approx6(ps.share_a) << "\n";
                    break;
            }
        } else if (*check_cmd) {
            return run_check(suite, seed, trials, parse_format(format_name));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
