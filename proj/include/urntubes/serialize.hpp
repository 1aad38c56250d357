#pragma once

#include <array>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "json.hpp"

#include "urntubes/analysis.hpp"
#include "urntubes/dist.hpp"
#include "urntubes/draws.hpp"
#include "urntubes/multiset.hpp"
#include "urntubes/rational.hpp"

namespace urntubes {

using Json = nlohmann::ordered_json;

/// Fixed 6-decimal approximation used by the table and CSV emitters;
/// snprintf keeps the rendering platform-independent.
inline std::string approx6(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", r.approx());
    return buf;
}

inline Json to_json(const Rational& r) {
    // num/den as strings: the exact values routinely exceed 64-bit range.
    return Json{{"num", r.num().str()}, {"den", r.den().str()}, {"approx", r.approx()}};
}

inline Json to_json(const Multiset& phi) {
    Json j = Json::object();
    for (const auto& [x, n] : phi.entries()) j[x] = n;
    return j;
}

namespace detail {

template <typename T>
Json outcome_json(const T& outcome) {
    if constexpr (std::is_same_v<T, Multiset>) return to_json(outcome);
    else return Json(outcome);
}

}  // namespace detail

template <typename T>
Json to_json(const Dist<T>& d) {
    Json outcomes = Json::array();
    for (const auto& [t, p] : d.entries()) {
        Json row{{"outcome", detail::outcome_json(t)}};
        row["num"] = p.num().str();
        row["den"] = p.den().str();
        row["approx"] = p.approx();
        outcomes.push_back(std::move(row));
    }
    return Json{{"outcomes", std::move(outcomes)}, {"total", "1/1"}};
}

inline Json to_json(const NatDist& d) {
    Json outcomes = Json::array();
    for (const auto& [k, p] : d.entries) {
        outcomes.push_back(Json{{"outcome", k},
                                {"num", p.num().str()},
                                {"den", p.den().str()},
                                {"approx", p.approx()}});
    }
    return Json{{"outcomes", std::move(outcomes)},
                {"residual", to_json(d.residual)},
                {"k_min", d.k_min},
                {"k_max", d.k_max}};
}

inline Json to_json(const IdentityReport& rep) {
    Json params = Json::object();
    for (const auto& [k, v] : rep.params) params[k] = v;
    return Json{{"identity", rep.identity}, {"params", std::move(params)},
                {"lhs", to_json(rep.lhs)},  {"rhs", to_json(rep.rhs)},
                {"holds", rep.holds},       {"note", rep.note}};
}

// ---------------------------------------------------------------------------
// CSV. Header `outcome,num,den,approx` for distributions over labels,
// `k,num,den,approx` for distributions over draw counts.

template <typename T>
std::string to_csv(const Dist<T>& d) {
    std::ostringstream os;
    os << "outcome,num,den,approx\n";
    for (const auto& [t, p] : d.entries()) {
        std::string name;
        if constexpr (std::is_same_v<T, Multiset>) name = t.str();
        else name = t;
        os << name << "," << p.num().str() << "," << p.den().str() << "," << approx6(p) << "\n";
    }
    return os.str();
}

inline std::string to_csv(const NatDist& d) {
    std::ostringstream os;
    os << "k,num,den,approx\n";
    for (const auto& [k, p] : d.entries) {
        os << k << "," << p.num().str() << "," << p.den().str() << "," << approx6(p) << "\n";
    }
    return os.str();
}

inline std::string to_csv(const std::vector<IdentityReport>& reports) {
    std::ostringstream os;
    os << "identity,params,lhs,rhs,holds\n";
    for (const auto& rep : reports) {
        std::string params;
        for (const auto& [k, v] : rep.params) {
            if (!params.empty()) params += " ";
            params += k + "=" + v;
        }
        os << rep.identity << "," << params << "," << rep.lhs.str() << "," << rep.rhs.str()
           << "," << (rep.holds ? "true" : "false") << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Tables: aligned columns with exact fractions plus 6-decimal approximations.

namespace detail {

inline std::string table_of(const std::vector<std::array<std::string, 3>>& rows) {
    std::size_t w0 = 0, w1 = 0;
    for (const auto& r : rows) {
        w0 = std::max(w0, r[0].size());
        w1 = std::max(w1, r[1].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        os << std::left << std::setw(static_cast<int>(w0)) << r[0] << "  "
           << std::right << std::setw(static_cast<int>(w1)) << r[1] << "  " << r[2] << "\n";
    }
    return os.str();
}

}  // namespace detail

template <typename T>
std::string to_table(const Dist<T>& d) {
    std::vector<std::array<std::string, 3>> rows;
    for (const auto& [t, p] : d.entries()) {
        std::string name;
        if constexpr (std::is_same_v<T, Multiset>) name = t.str();
        else name = t;
        rows.push_back({name, p.str(), approx6(p)});
    }
    return detail::table_of(rows);
}

inline std::string to_table(const NatDist& d) {
    std::vector<std::array<std::string, 3>> rows;
    for (const auto& [k, p] : d.entries) {
        rows.push_back({std::to_string(k), p.str(), approx6(p)});
    }
    rows.push_back({"residual", d.residual.str(), approx6(d.residual)});
    return detail::table_of(rows);
}

inline std::string to_table(const std::vector<IdentityReport>& reports) {
    std::vector<std::array<std::string, 3>> rows;
    for (const auto& rep : reports) {
        std::string params;
        for (const auto& [k, v] : rep.params) {
            if (!params.empty()) params += " ";
            params += k + "=" + v;
        }
        rows.push_back({rep.identity + " [" + params + "]",
                        rep.lhs.str() + " vs " + rep.rhs.str(),
                        rep.holds ? "ok" : "FAIL"});
    }
    return detail::table_of(rows);
}

}  // namespace urntubes
