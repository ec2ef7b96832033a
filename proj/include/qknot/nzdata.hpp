#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "qknot/errors.hpp"

namespace qknot {

/// Raw gluing-equation matrices of an ideal triangulation with N tetrahedra.
/// Rows: edges 0..N-1, meridian N, longitude N+1. Columns: tetrahedra.
struct GluingData {
    int N = 0;
    std::vector<std::vector<long>> G, Gp, Gpp;

    friend bool operator==(const GluingData&, const GluingData&) = default;
};

/// Reduced Neumann-Zagier data driving the index summation. Rows of A and B
/// are the first N-1 edge equations followed by the meridian equation;
/// lambda / lambdapp are half the longitude rows of G-G' and G''-G'.
struct NZReduced {
    int N = 0;
    std::vector<std::vector<long>> A, B;  // N x N
    std::vector<long> nu;                 // length N
    std::vector<long> lambda, lambdapp;   // length N
    long nu_lambda = 0;

    friend bool operator==(const NZReduced&, const NZReduced&) = default;
};

namespace detail {

inline std::vector<std::vector<long>> mat_sub(const std::vector<std::vector<long>>& a,
                                              const std::vector<std::vector<long>>& b) {
    std::vector<std::vector<long>> r = a;
    for (size_t i = 0; i < r.size(); ++i)
        for (size_t j = 0; j < r[i].size(); ++j) r[i][j] -= b[i][j];
    return r;
}

inline bool rows_even(const std::vector<long>& a, const std::vector<long>& b, long nu) {
    for (long x : a)
        if (x & 1) return false;
    for (long x : b)
        if (x & 1) return false;
    return (nu & 1) == 0;
}

}  // namespace detail

inline NZReduced reduce(const GluingData& g) {
    const int N = g.N;
    auto a_full = detail::mat_sub(g.G, g.Gp);
    auto b_full = detail::mat_sub(g.Gpp, g.Gp);
    std::vector<long> nu_full(N + 2);
    for (int i = 0; i < N + 2; ++i) {
        nu_full[i] = i < N ? 2 : 0;
        for (int j = 0; j < N; ++j) nu_full[i] -= g.Gp[i][j];
    }

    // Half the longitude row must be integral; if not, add edge rows (whole
    // gluing equations, so the nu entry comes along) until all parities
    // vanish. Deterministic: first working subset in lexicographic order.
    std::vector<long> la = a_full[N + 1], lb = b_full[N + 1];
    long lnu = nu_full[N + 1];
    if (!detail::rows_even(la, lb, lnu)) {
        bool fixed = false;
        for (unsigned mask = 1; mask < (1u << N) && !fixed; ++mask) {
            std::vector<long> ta = a_full[N + 1], tb = b_full[N + 1];
            long tnu = nu_full[N + 1];
            for (int i = 0; i < N; ++i) {
                if (!(mask >> i & 1)) continue;
                for (int j = 0; j < N; ++j) {
                    ta[j] += a_full[i][j];
                    tb[j] += b_full[i][j];
                }
                tnu += nu_full[i];
            }
            if (detail::rows_even(ta, tb, tnu)) {
                la = ta;
                lb = tb;
                lnu = tnu;
                fixed = true;
            }
        }
        if (!fixed) throw NonIntegralLongitude();
    }

    NZReduced r;
    r.N = N;
    for (int i = 0; i < N - 1; ++i) {
        r.A.push_back(a_full[i]);
        r.B.push_back(b_full[i]);
        r.nu.push_back(nu_full[i]);
    }
    r.A.push_back(a_full[N]);  // meridian row
    r.B.push_back(b_full[N]);
    r.nu.push_back(nu_full[N]);
    for (int j = 0; j < N; ++j) {
        r.lambda.push_back(la[j] / 2);
        r.lambdapp.push_back(lb[j] / 2);
    }
    r.nu_lambda = lnu / 2;
    return r;
}

inline GluingData builtin(const std::string& name) {
    GluingData g;
    if (name == "4_1") {
        g.N = 2;
        g.G = {{2, 2}, {0, 0}, {1, 0}, {1, 1}};
        g.Gp = {{1, 1}, {1, 1}, {0, 0}, {1, -1}};
        g.Gpp = {{0, 0}, {2, 2}, {0, -1}, {1, -3}};
    } else if (name == "5_2") {
        g.N = 3;
        g.G = {{1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {-1, 0, 0}, {3, 2, 1}};
        g.Gp = {{0, 2, 0}, {1, 0, 1}, {1, 0, 1}, {0, 0, 0}, {1, 2, 1}};
        g.Gpp = {{1, 0, 1}, {1, 2, 1}, {0, 0, 0}, {0, 1, 0}, {-1, 0, 3}};
    } else if (name == "m237" || name == "(-2,3,7)") {
        g.N = 3;
        g.G = {{1, 1, 1}, {1, 0, 0}, {0, 1, 1}, {0, 0, -1}, {-1, 1, -18}};
        g.Gp = {{1, 0, 0}, {0, 2, 2}, {1, 0, 0}, {0, 0, 0}, {1, -1, -2}};
        g.Gpp = {{0, 1, 0}, {2, 1, 0}, {0, 0, 2}, {2, 0, 0}, {35, 1, 0}};
    } else {
        throw UnknownKnot(name);
    }
    return g;
}

inline const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"4_1", "5_2", "m237"};
    return names;
}

/// Triangulation file: `N <count>`, then blocks headed `G`, `G'`, `G''`,
/// each with N+2 rows of N integers. `#` starts a comment.
inline GluingData parse_triangulation(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    auto next_line = [&](std::string& out) {
        while (std::getline(in, raw)) {
            ++lineno;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::istringstream probe(raw);
            std::string w;
            if (probe >> w) {
                out = raw;
                return true;
            }
        }
        return false;
    };

    std::string line;
    if (!next_line(line)) throw ParseError("empty triangulation", lineno ? lineno : 1);
    std::istringstream head(line);
    std::string tag;
    int n = 0;
    if (!(head >> tag >> n) || tag != "N" || n <= 0)
        throw ParseError("expected header 'N <count>'", lineno);

    GluingData g;
    g.N = n;
    for (const char* want : {"G", "G'", "G''"}) {
        if (!next_line(line)) throw ParseError("missing block header", lineno);
        std::istringstream hdr(line);
        std::string got;
        hdr >> got;
        if (got != want) throw ParseError(std::string("expected block '") + want + "'", lineno);
        std::vector<std::vector<long>> rows;
        for (int i = 0; i < n + 2; ++i) {
            if (!next_line(line)) throw ParseError("missing matrix row", lineno);
            std::istringstream rs(line);
            std::vector<long> row;
            long x;
            while (rs >> x) row.push_back(x);
            if ((int)row.size() != n)
                throw ParseError("expected " + std::to_string(n) + " integers in row", lineno);
            rows.push_back(std::move(row));
        }
        if (std::string(want) == "G")
            g.G = std::move(rows);
        else if (std::string(want) == "G'")
            g.Gp = std::move(rows);
        else
            g.Gpp = std::move(rows);
    }
    return g;
}

inline std::string write_triangulation(const GluingData& g) {
    std::ostringstream out;
    out << "N " << g.N << "\n";
    const std::vector<std::vector<long>>* mats[3] = {&g.G, &g.Gp, &g.Gpp};
    const char* names[3] = {"G", "G'", "G''"};
    for (int b = 0; b < 3; ++b) {
        out << names[b] << "\n";
        for (const auto& row : *mats[b]) {
            for (size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace qknot
