#include "hstab/ratlin.hpp"

#include <algorithm>
#include <cctype>

namespace hstab::ratlin {

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool valid_integer_text(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

Integer parse_integer(const std::string& s) {
    if (!valid_integer_text(s)) throw std::invalid_argument("not an integer: '" + s + "'");
    return Integer(s[0] == '+' ? s.substr(1) : s, 10);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_integer(s));
    Integer num = parse_integer(s.substr(0, slash));
    Integer den = parse_integer(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

nlohmann::json to_json(const Vec& v) {
    auto out = nlohmann::json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

nlohmann::json to_json(const Matrix& m) {
    auto out = nlohmann::json::array();
    for (const auto& row : m) out.push_back(to_json(row));
    return out;
}

Vec vec_from_json(const nlohmann::json& j) {
    Vec v;
    for (const auto& e : j) v.push_back(e.is_string() ? parse_rational(e.get<std::string>())
                                                      : Rational(e.get<long>()));
    return v;
}

Matrix matrix_from_json(const nlohmann::json& j) {
    Matrix m;
    for (const auto& row : j) m.push_back(vec_from_json(row));
    return m;
}

Rational dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
    return s;
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Integer binomial(unsigned long n, unsigned long k) {
    Integer r;
    if (k > n) return 0;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// ---------------------------------------------------------------------------

Vec EchelonState::reduce(Vec v) const {
    if (v.size() != dim_) throw DimensionError("vector length does not match echelon dimension");
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const std::size_t p = pivots_[r];
        if (sgn(v[p]) == 0) continue;
        const Rational factor = v[p];
        const Vec& row = rows_[r];
        for (std::size_t j = p; j < dim_; ++j)
            if (sgn(row[j]) != 0) v[j] -= factor * row[j];
    }
    return v;
}

bool EchelonState::try_insert(const Vec& v) {
    Vec w = reduce(v);
    std::size_t p = 0;
    while (p < dim_ && sgn(w[p]) == 0) ++p;
    if (p == dim_) return false;
    const Rational lead = w[p];
    for (std::size_t j = p; j < dim_; ++j)
        if (sgn(w[j]) != 0) w[j] /= lead;
    rows_.push_back(std::move(w));
    pivots_.push_back(p);
    return true;
}

std::vector<std::size_t> rref(Matrix& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t ncols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.size(); ++c) {
        std::size_t sel = r;
        while (sel < m.size() && sgn(m[sel][c]) == 0) ++sel;
        if (sel == m.size()) continue;
        std::swap(m[r], m[sel]);
        const Rational lead = m[r][c];
        for (auto& q : m[r]) q /= lead;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == r || sgn(m[i][c]) == 0) continue;
            const Rational factor = m[i][c];
            for (std::size_t j = c; j < ncols; ++j)
                if (sgn(m[r][j]) != 0) m[i][j] -= factor * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

std::size_t rank(const Matrix& m) {
    Matrix copy = m;
    return rref(copy).size();
}

std::optional<Vec> solve_linear(const Matrix& a, const Vec& b) {
    if (a.size() != b.size()) throw DimensionError("solve_linear: row count mismatch");
    const std::size_t n = a.empty() ? 0 : a[0].size();
    Matrix aug;
    aug.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != n) throw DimensionError("solve_linear: ragged matrix");
        Vec row = a[i];
        row.push_back(b[i]);
        aug.push_back(std::move(row));
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == n) return std::nullopt;
    Vec x(n, Rational(0));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r][n];
    return x;
}

Matrix nullspace(const Matrix& a, std::size_t ncols) {
    Matrix m = a;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(ncols, false);
    for (auto p : pivots) is_pivot[p] = true;
    Matrix basis;
    for (std::size_t free = 0; free < ncols; ++free) {
        if (is_pivot[free]) continue;
        Vec x(ncols, Rational(0));
        x[free] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m[r][free];
        basis.push_back(std::move(x));
    }
    return basis;
}

// ---------------------------------------------------------------------------

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

namespace {

// Dense tableau in equality form  T x = rhs, x >= 0, with one basic column per
// row. Column indices double as Bland's rule ordering.
struct Tableau {
    Matrix t;
    Vec rhs;
    std::vector<std::size_t> basis;
    Vec cost;   // current objective row (reduced costs)
    Rational value;  // objective value at current basis
    std::size_t pivots = 0;

    void pivot(std::size_t r, std::size_t e) {
        const Rational lead = t[r][e];
        std::vector<std::size_t> nz;
        for (std::size_t j = 0; j < t[r].size(); ++j) {
            if (sgn(t[r][j]) == 0) continue;
            t[r][j] /= lead;
            nz.push_back(j);
        }
        rhs[r] /= lead;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r || sgn(t[i][e]) == 0) continue;
            const Rational factor = t[i][e];
            for (auto j : nz) t[i][j] -= factor * t[r][j];
            rhs[i] -= factor * rhs[r];
        }
        if (sgn(cost[e]) != 0) {
            const Rational factor = cost[e];
            for (auto j : nz) cost[j] -= factor * t[r][j];
            value += factor * rhs[r];
        }
        basis[r] = e;
        ++pivots;
    }

    void set_objective(const Vec& c) {
        cost = c;
        value = 0;
        for (std::size_t r = 0; r < t.size(); ++r) {
            const Rational cb = c[basis[r]];
            if (sgn(cb) == 0) continue;
            for (std::size_t j = 0; j < cost.size(); ++j)
                if (sgn(t[r][j]) != 0) cost[j] -= cb * t[r][j];
            value += cb * rhs[r];
        }
    }

    // Maximizes the current objective over columns < allowed. Returns false
    // if unbounded.
    bool optimize(std::size_t allowed) {
        for (;;) {
            std::size_t e = allowed;
            for (std::size_t j = 0; j < allowed; ++j)
                if (sgn(cost[j]) > 0) { e = j; break; }
            if (e == allowed) return true;
            std::size_t leave = t.size();
            Rational best;
            for (std::size_t r = 0; r < t.size(); ++r) {
                if (sgn(t[r][e]) <= 0) continue;
                Rational ratio = rhs[r] / t[r][e];
                if (leave == t.size() || ratio < best ||
                    (ratio == best && basis[r] < basis[leave])) {
                    leave = r;
                    best = ratio;
                }
            }
            if (leave == t.size()) return false;
            pivot(leave, e);
        }
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& p) {
    const std::size_t n = p.c.size();
    const std::size_t m1 = p.a.size();
    const std::size_t m2 = p.e.size();
    if (p.b.size() != m1 || p.f.size() != m2) throw DimensionError("solve_lp: rhs size mismatch");
    if (!p.nonneg.empty() && p.nonneg.size() != n) throw DimensionError("solve_lp: nonneg flag size");
    for (const auto& row : p.a)
        if (row.size() != n) throw DimensionError("solve_lp: A row length");
    for (const auto& row : p.e)
        if (row.size() != n) throw DimensionError("solve_lp: E row length");

    // Structural columns: x_j = plus_j - minus_j for free variables.
    std::vector<std::size_t> plus(n), minus(n, SIZE_MAX);
    std::size_t ncol = 0;
    for (std::size_t j = 0; j < n; ++j) {
        plus[j] = ncol++;
        if (p.nonneg.empty() || !p.nonneg[j]) minus[j] = ncol++;
    }
    const std::size_t slack0 = ncol;
    ncol += m1;
    const std::size_t rows = m1 + m2;
    std::vector<bool> negated(rows, false);
    std::vector<std::size_t> unit_col(rows);
    std::size_t nart = 0;
    for (std::size_t i = 0; i < m1; ++i)
        if (sgn(p.b[i]) < 0) negated[i] = true;
    for (std::size_t i = 0; i < m2; ++i)
        if (sgn(p.f[i]) < 0) negated[m1 + i] = true;
    const std::size_t art0 = ncol;
    for (std::size_t i = 0; i < rows; ++i)
        if (i >= m1 || negated[i]) ++nart;
    ncol += nart;

    Tableau tab;
    tab.t.assign(rows, Vec(ncol, Rational(0)));
    tab.rhs.assign(rows, Rational(0));
    tab.basis.assign(rows, 0);
    std::size_t next_art = art0;
    for (std::size_t i = 0; i < rows; ++i) {
        const Vec& src = i < m1 ? p.a[i] : p.e[i - m1];
        const Rational sign = negated[i] ? -1 : 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(src[j]) == 0) continue;
            tab.t[i][plus[j]] = sign * src[j];
            if (minus[j] != SIZE_MAX) tab.t[i][minus[j]] = -sign * src[j];
        }
        tab.rhs[i] = sign * (i < m1 ? p.b[i] : p.f[i - m1]);
        if (i < m1) tab.t[i][slack0 + i] = sign;
        if (i >= m1 || negated[i]) {
            tab.t[i][next_art] = 1;
            unit_col[i] = next_art++;
        } else {
            unit_col[i] = slack0 + i;
        }
        tab.basis[i] = unit_col[i];
    }

    LpSolution sol;
    if (nart > 0) {
        Vec phase1(ncol, Rational(0));
        for (std::size_t j = art0; j < ncol; ++j) phase1[j] = -1;
        tab.set_objective(phase1);
        tab.optimize(art0);
        if (sgn(tab.value) < 0) {
            sol.status = LpStatus::infeasible;
            sol.pivots = tab.pivots;
            return sol;
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (tab.basis[r] < art0) continue;
            for (std::size_t j = 0; j < art0; ++j) {
                if (sgn(tab.t[r][j]) != 0) {
                    tab.pivot(r, j);
                    break;
                }
            }
        }
    }

    Vec phase2(ncol, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        phase2[plus[j]] = p.c[j];
        if (minus[j] != SIZE_MAX) phase2[minus[j]] = -p.c[j];
    }
    tab.set_objective(phase2);
    const bool bounded = tab.optimize(art0);
    sol.pivots = tab.pivots;
    if (!bounded) {
        sol.status = LpStatus::unbounded;
        return sol;
    }

    Vec colval(ncol, Rational(0));
    for (std::size_t r = 0; r < rows; ++r) colval[tab.basis[r]] = tab.rhs[r];
    sol.x.assign(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        sol.x[j] = colval[plus[j]];
        if (minus[j] != SIZE_MAX) sol.x[j] -= colval[minus[j]];
    }
    sol.objective = tab.value;

    // y = c_B B^{-1}; column unit_col[i] of the current tableau is B^{-1} e_i.
    Vec y(rows, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
        Rational s = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            const Rational& cb = phase2[tab.basis[r]];
            if (sgn(cb) != 0 && sgn(tab.t[r][unit_col[i]]) != 0) s += cb * tab.t[r][unit_col[i]];
        }
        y[i] = negated[i] ? Rational(-s) : s;
    }
    sol.dual_ineq.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m1));
    sol.dual_eq.assign(y.begin() + static_cast<std::ptrdiff_t>(m1), y.end());
    sol.status = LpStatus::optimal;
    return sol;
}

}  // namespace hstab::ratlin
