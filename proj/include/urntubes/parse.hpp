#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>

#include "urntubes/dist.hpp"
#include "urntubes/error.hpp"
#include "urntubes/multiset.hpp"
#include "urntubes/rational.hpp"

namespace urntubes {
namespace detail {

// Shared cursor for the two spec grammars. Both are sums of terms
// NUMBER "*"? LABEL; only the number shape (natural vs rational) differs.
class SpecCursor {
public:
    explicit SpecCursor(const std::string& text) : text_(text) {}

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool done() {
        skip_ws();
        return pos_ == text_.size();
    }

    std::size_t pos() const { return pos_; }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    BigInt natural() {
        skip_ws();
        std::size_t start = pos_;
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            digits += text_[pos_++];
        }
        if (digits.empty()) throw ParseError("expected a number", start);
        return BigInt(digits);
    }

    Rational rational() {
        BigInt num = natural();
        if (pos_ < text_.size() && text_[pos_] == '/') {
            ++pos_;
            std::size_t den_at = pos_;
            BigInt den = natural();
            if (den == 0) throw ParseError("zero denominator", den_at);
            return Rational(num, den);
        }
        return Rational(num);
    }

    std::string label() {
        skip_ws();
        std::size_t start = pos_;
        std::string name;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            if (name.empty() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) break;
            name += text_[pos_++];
        }
        if (name.empty()) throw ParseError("expected a colour label", start);
        return name;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// "2a + 3b" → multiset; terms are NAT "*"? LABEL, repeated labels sum,
/// whitespace is insignificant. Zero counts are rejected.
inline Multiset parse_multiset(const std::string& text) {
    detail::SpecCursor c(text);
    Multiset::Entries entries;
    do {
        std::size_t at = c.pos();
        BigInt n = c.natural();
        if (n == 0) throw ParseError("zero count", at);
        c.accept('*');
        std::string x = c.label();
        entries[x] += n.convert_to<long long>();
    } while (c.accept('+'));
    if (!c.done()) throw ParseError("unexpected trailing input", c.pos());
    return Multiset(std::move(entries));
}

/// "1/3 a + 2/3 b" → distribution; terms are RAT "*"? LABEL with
/// RAT := NAT ("/" NAT)?. The probabilities must sum to exactly 1.
inline Dist<Color> parse_dist(const std::string& text) {
    detail::SpecCursor c(text);
    std::map<Color, Rational> entries;
    Rational total(0);
    do {
        std::size_t at = c.pos();
        Rational p = c.rational();
        if (p.is_zero()) throw ParseError("zero probability", at);
        c.accept('*');
        std::string x = c.label();
        entries[x] += p;
        total += p;
    } while (c.accept('+'));
    if (!c.done()) throw ParseError("unexpected trailing input", c.pos());
    if (total != Rational(1)) {
        throw ParseError("probabilities sum to " + total.str(), text.size());
    }
    return Dist<Color>::from_entries(std::move(entries));
}

/// Round-trip printer matching parse_dist: "1/3 a + 2/3 b".
inline std::string print_dist(const Dist<Color>& omega) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [x, p] : omega.entries()) {
        if (!first) os << " + ";
        os << p.str() << " " << x;
        first = false;
    }
    return os.str();
}

}  // namespace urntubes
