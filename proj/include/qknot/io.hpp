#pragma once

#include <cctype>
#include <sstream>
#include <string>

#include "qknot/qseries.hpp"
#include "qknot/upoly.hpp"

namespace qknot {

/// Series text form: header line `trunc <N>`, then one line per nonzero
/// term, `<u-exponent> <numerator>/<denominator>`. Round-trips bit-exactly.
inline std::string series_to_text(const Series& s) {
    std::ostringstream out;
    out << "trunc " << s.trunc() << "\n";
    for (long e = s.valuation(); e < s.trunc(); ++e) {
        const Rat& c = s.coeff(e);
        if (is_zero(c)) continue;
        out << e << " " << c.get_num().get_str() << "/" << c.get_den().get_str() << "\n";
    }
    return out.str();
}

inline Series series_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    if (!(in >> word) || word != "trunc") throw ParseError("expected 'trunc <N>' header", 1);
    long trunc;
    if (!(in >> trunc)) throw ParseError("bad truncation order", 1);
    std::vector<std::pair<long, Rat>> terms;
    long line = 1;
    long exp;
    while (in >> exp) {
        ++line;
        std::string frac;
        if (!(in >> frac)) throw ParseError("missing coefficient", (int)line);
        if (exp >= trunc) throw ParseError("term exponent beyond truncation", (int)line);
        terms.emplace_back(exp, rat_parse(frac));
    }
    if (terms.empty()) return Series::zero(trunc);
    long val = terms.front().first;
    for (auto& [e, c] : terms) val = std::min(val, e);
    std::vector<Rat> coeffs(trunc - val);
    for (auto& [e, c] : terms) coeffs[e - val] = c;
    return Series(val, std::move(coeffs), trunc);
}

namespace detail {

inline void print_term(std::ostringstream& out, bool first, const Rat& c, long e) {
    Rat a = c < 0 ? Rat(-c) : c;
    if (first) {
        if (c < 0) out << "-";
    } else {
        out << (c < 0 ? " - " : " + ");
    }
    bool unit = (a == 1);
    if (e == 0) {
        out << a.get_str();
    } else {
        if (!unit) out << a.get_str() << "*";
        out << "u";
        if (e != 1) out << "^" << e;
    }
}

struct PolyParser {
    const std::string& s;
    size_t i = 0;

    explicit PolyParser(const std::string& str) : s(str) {}

    void skip_ws() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    long parse_int() {
        skip_ws();
        size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (i == start || (i == start + 1 && !std::isdigit((unsigned char)s[start])))
            throw ParseError("expected integer in polynomial", 1, (int)start);
        return std::stol(s.substr(start, i - start));
    }

    Rat parse_number() {
        skip_ws();
        size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        if (i < s.size() && s[i] == '/') {
            ++i;
            while (i < s.size() && std::isdigit((unsigned char)s[i])) ++i;
        }
        return rat_parse(s.substr(start, i - start));
    }

    /// term := [sign] (number [*u[^e]] | u[^e])
    UPoly parse_poly() {
        UPoly p;
        bool any = false;
        while (!eof()) {
            char c = peek();
            int sign = 1;
            if (c == '+' || c == '-') {
                sign = c == '-' ? -1 : 1;
                ++i;
                skip_ws();
            } else if (any) {
                break;  // no joining sign: end of polynomial
            }
            Rat coeff(1);
            bool have_num = false;
            if (std::isdigit((unsigned char)peek())) {
                coeff = parse_number();
                have_num = true;
            }
            long e = 0;
            skip_ws();
            if (i < s.size() && s[i] == '*') {
                ++i;
                skip_ws();
            }
            if (i < s.size() && (s[i] == 'u' || s[i] == 'q')) {
                bool is_q = s[i] == 'q';
                ++i;
                e = 1;
                skip_ws();
                if (i < s.size() && s[i] == '^') {
                    ++i;
                    e = parse_int();
                }
                if (is_q) e *= 2;
            } else if (!have_num) {
                throw ParseError("expected term in polynomial", 1, (int)i);
            }
            if (sign < 0) coeff = -coeff;
            p = p + UPoly::monomial(coeff, e);
            any = true;
        }
        if (!any) throw ParseError("empty polynomial", 1);
        return p;
    }
};

}  // namespace detail

/// Canonical polynomial text: terms by ascending u-exponent.
inline std::string upoly_to_text(const UPoly& p) {
    if (p.is_zero_poly()) return "0";
    std::ostringstream out;
    bool first = true;
    for (long e = p.valuation(); e <= p.degree(); ++e) {
        const Rat c = p.coeff(e);
        if (is_zero(c)) continue;
        detail::print_term(out, first, c, e);
        first = false;
    }
    return out.str();
}

inline UPoly upoly_from_text(const std::string& text) {
    detail::PolyParser pp(text);
    if (pp.peek() == '0') {
        ++pp.i;
        if (pp.eof()) return UPoly::zero();
        pp.i = 0;
    }
    UPoly p = pp.parse_poly();
    if (!pp.eof()) throw ParseError("trailing input after polynomial", 1, (int)pp.i);
    return p;
}

/// RatFun text: `(<num>)/(<den>)` with both parts in canonical poly form.
inline std::string ratfun_to_text(const RatFun& f) {
    return "(" + upoly_to_text(f.num()) + ")/(" + upoly_to_text(f.den()) + ")";
}

inline RatFun ratfun_from_text(const std::string& text) {
    size_t open1 = text.find('(');
    if (open1 == std::string::npos) {
        // bare polynomial or number
        return RatFun(upoly_from_text(text), UPoly::one());
    }
    int depth = 0;
    size_t close1 = std::string::npos;
    for (size_t i = open1; i < text.size(); ++i) {
        if (text[i] == '(') ++depth;
        if (text[i] == ')' && --depth == 0) {
            close1 = i;
            break;
        }
    }
    if (close1 == std::string::npos) throw ParseError("unbalanced parentheses", 1);
    size_t slash = text.find('/', close1);
    size_t open2 = text.find('(', slash);
    size_t close2 = text.rfind(')');
    if (slash == std::string::npos || open2 == std::string::npos || close2 <= open2)
        throw ParseError("expected (num)/(den)", 1);
    UPoly num = upoly_from_text(text.substr(open1 + 1, close1 - open1 - 1));
    UPoly den = upoly_from_text(text.substr(open2 + 1, close2 - open2 - 1));
    return RatFun(num, den);
}

}  // namespace qknot
