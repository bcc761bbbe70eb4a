#include "hstab/constructions.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace hstab::constructions {

using basiskit::CertEntry;
using basiskit::CertGroup;
using basiskit::CertMode;
using basiskit::make_concat;
using basiskit::make_concat_weighted;
using basiskit::make_leaf;
using basiskit::make_sum;
using basiskit::make_times;
using ratlin::Matrix;

namespace {

/// Exponent-vector builder that rejects out-of-range variables, so index
/// slips in a family table surface as errors instead of wrong monomials.
class Mono {
public:
    explicit Mono(std::size_t n) : e_(n, 0) {}
    Mono& mul(int var, int pw = 1) {
        if (var < 0 || static_cast<std::size_t>(var) >= e_.size())
            throw std::logic_error("variable index " + std::to_string(var) + " out of range");
        if (pw < 0) throw std::logic_error("negative exponent");
        e_[static_cast<std::size_t>(var)] += pw;
        return *this;
    }
    Monomial get() const { return Monomial(e_); }

private:
    std::vector<int> e_;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

/// mpq_class(num, den) does not reduce; every ratio goes through here.
Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

Monomial unit(std::size_t n) { return Monomial(std::vector<int>(n, 0)); }

/// a^t b^(r-t), t = 0..r.
std::vector<Monomial> powers_of_pair(std::size_t n, int a, int b, int r) {
    std::vector<Monomial> out;
    for (int t = 0; t <= r; ++t) out.push_back(Mono(n).mul(a, t).mul(b, r - t).get());
    return out;
}

std::vector<Monomial> products(const std::vector<Monomial>& a, const std::vector<Monomial>& b) {
    std::vector<Monomial> out;
    for (const auto& p : a)
        for (const auto& q : b) out.push_back(p * q);
    return out;
}

std::vector<Monomial> apply_perm(const std::vector<Monomial>& monos, const std::vector<int>& perm) {
    std::vector<Monomial> out;
    for (const auto& mo : monos) {
        std::vector<int> e(mo.size(), 0);
        for (std::size_t v = 0; v < mo.size(); ++v) e[static_cast<std::size_t>(perm[v])] += mo[v];
        out.emplace_back(std::move(e));
    }
    return out;
}

void append(std::vector<Monomial>& dst, const std::vector<Monomial>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

WeightForm form_on(std::size_t n, const std::vector<std::pair<int, Rational>>& terms) {
    WeightForm w(n);
    for (const auto& [v, c] : terms) w.coef[static_cast<std::size_t>(v)] += c;
    return w;
}

/// Scale a positive rational vector so the first entry is 1, then clear
/// denominators.
std::vector<Rational> normalize_first(std::vector<Rational> c) {
    if (c.empty() || sgn(c[0]) <= 0) throw std::logic_error("normalize_first needs a positive lead");
    const Rational lead = c[0];
    Integer den = 1;
    for (auto& x : c) {
        x /= lead;
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    }
    for (auto& x : c) x *= Rational(den);
    return c;
}

/// Positive coefficients c with sum c_t w_t = 0 on the hyperplane. A unique
/// direction is used as is; otherwise the LP maximizing min c_t (c <= 1).
std::optional<std::vector<Rational>> positive_dependence(const std::vector<WeightForm>& forms) {
    const std::size_t r = forms.size();
    std::vector<WeightForm> h;
    for (const auto& f : forms) h.push_back(basiskit::weight_form_on_hyperplane(f));
    const std::size_t n = h[0].size();
    Matrix a(n, Vec(r));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t c = 0; c < r; ++c) a[t][c] = h[c].coef[t];
    auto ns = ratlin::nullspace(a, r);
    if (ns.size() == 1) {
        auto v = ns[0];
        if (sgn(v[0]) < 0)
            for (auto& x : v) x = -x;
        for (const auto& x : v)
            if (sgn(x) <= 0) return std::nullopt;
        return v;
    }
    if (ns.empty()) return std::nullopt;
    ratlin::LpProblem lp;
    lp.c = Vec(r + 1, Rational(0));
    lp.c[r] = 1;
    for (std::size_t c = 0; c < r; ++c) {
        Vec row(r + 1, Rational(0));
        row[c] = -1;
        row[r] = 1;
        lp.a.push_back(row);
        lp.b.push_back(0);
        Vec cap(r + 1, Rational(0));
        cap[c] = 1;
        lp.a.push_back(cap);
        lp.b.push_back(1);
    }
    for (std::size_t t = 0; t < n; ++t) {
        Vec row = a[t];
        row.push_back(0);
        lp.e.push_back(row);
        lp.f.push_back(0);
    }
    auto sol = ratlin::solve_lp(lp);
    if (sol.status != ratlin::LpStatus::optimal || sgn(sol.objective) <= 0) return std::nullopt;
    sol.x.pop_back();
    return sol.x;
}

CertEntry entry(const Rational& c, const Family& f, nlohmann::json params) {
    CertEntry e;
    e.coefficient = c;
    e.form = f.expr->form;
    e.family = f.id;
    e.params = std::move(params);
    e.expr = f.expr;
    return e;
}

}  // namespace

nlohmann::json FamilySpec::to_json() const {
    nlohmann::json out{{"family", family}, {"g", g}, {"m", m}};
    if (family.rfind("wiman", 0) == 0 || family.rfind("kempf", 0) == 0) {
        out["k"] = k;
        out["n"] = n;
        out["i"] = i;
        out["j"] = j;
        out["u"] = u;
        out["eps"] = ratlin::to_string(eps);
        out["delta"] = ratlin::to_string(delta);
    }
    if (family.rfind("doubleA", 0) == 0) out["s"] = s;
    return out;
}

// ===========================================================================
// Ribbon

namespace {

struct Ribbon {
    int g, k;
    std::size_t n;
    explicit Ribbon(int g_) : g(g_), k((g_ - 1) / 2), n(static_cast<std::size_t>(g_)) {}
    int x(int i) const {
        if (i < 0 || i > k) throw std::logic_error("ribbon x" + std::to_string(i) + " undefined");
        return i;
    }
    int y(int j) const {
        if (j < k + 1 || j > 2 * k) throw std::logic_error("ribbon y" + std::to_string(j) + " undefined");
        return j;
    }
    // x_i <-> y_{2k-i}, x_k fixed
    std::vector<int> iota() const {
        std::vector<int> p(n);
        for (int t = 0; t <= 2 * k; ++t) p[static_cast<std::size_t>(t)] = 2 * k - t;
        return p;
    }
};

std::vector<Monomial> ribbon_bplus2(const Ribbon& r) {
    const int k = r.k;
    std::vector<Monomial> out;
    auto q = [&](int a, int b) { out.push_back(Mono(r.n).mul(a).mul(b).get()); };
    for (int i = 0; i <= k; ++i) q(r.x(0), r.x(i));
    for (int i = k + 1; i <= 2 * k; ++i) q(r.x(0), r.y(i));
    for (int i = 1; i <= k; ++i) q(r.x(k), r.x(i));
    for (int i = k + 1; i <= 2 * k; ++i) q(r.x(k), r.y(i));
    for (int i = 1; i <= k - 1; ++i) q(r.y(2 * k), r.x(i));
    for (int i = k + 1; i <= 2 * k; ++i) q(r.y(2 * k), r.y(i));
    return out;
}

std::vector<Monomial> ribbon_bminus2(const Ribbon& r) {
    const int k = r.k;
    std::vector<Monomial> out;
    auto q = [&](int a, int b) { out.push_back(Mono(r.n).mul(a).mul(b).get()); };
    for (int i = 0; i <= k; ++i) q(r.x(i), r.x(i));
    for (int i = k + 1; i <= 2 * k; ++i) q(r.y(i), r.y(i));
    for (int i = 0; i <= k - 1; ++i) q(r.x(i), r.x(i + 1));
    q(r.x(k), r.y(k + 1));
    for (int i = k + 1; i <= 2 * k - 1; ++i) q(r.y(i), r.y(i + 1));
    for (int i = 1; i <= k - 1; ++i) q(r.x(i), r.y(i + k));
    for (int i = 0; i <= k - 1; ++i) q(r.x(i), r.y(i + k + 1));
    return out;
}

std::vector<Monomial> dedupe(const std::vector<Monomial>& v) {
    std::set<Monomial> s(v.begin(), v.end());
    std::vector<Monomial> out(s.rbegin(), s.rend());
    return out;
}

std::vector<Monomial> ribbon_b1plus(const Ribbon& r, int m) {
    const int k = r.k;
    std::vector<Monomial> L;
    for (int i = 0; i <= k - 1; ++i) L.push_back(Mono(r.n).mul(r.x(i)).get());
    for (int j = k + 1; j <= 2 * k; ++j) L.push_back(Mono(r.n).mul(r.y(j)).get());
    std::vector<Monomial> all;
    append(all, products(powers_of_pair(r.n, r.x(0), r.x(k), m - 1), L));
    append(all, products(powers_of_pair(r.n, r.x(k), r.y(2 * k), m - 1), L));
    all.push_back(Mono(r.n).mul(r.x(k), m).get());
    return dedupe(all);
}

std::vector<Monomial> ribbon_b2plus(const Ribbon& r, int m) {
    const int k = r.k;
    std::vector<Monomial> Lp;
    for (int i = 1; i <= k - 1; ++i) Lp.push_back(Mono(r.n).mul(r.x(i)).get());
    for (int j = k + 1; j <= 2 * k - 1; ++j) Lp.push_back(Mono(r.n).mul(r.y(j)).get());
    const int a = r.x(0), b = r.y(2 * k), xk = r.x(k);
    auto xkp = [&](int p) { return std::vector<Monomial>{Mono(r.n).mul(xk, p).get()}; };
    std::vector<Monomial> all;
    append(all, products(powers_of_pair(r.n, a, b, m - 1), Lp));
    append(all, products(xkp(1), products(powers_of_pair(r.n, a, b, m - 2), Lp)));
    append(all, powers_of_pair(r.n, a, b, m));
    for (int p = 1; p <= 3 && p <= m; ++p) append(all, products(xkp(p), powers_of_pair(r.n, a, b, m - p)));
    return dedupe(all);
}

std::vector<Monomial> ribbon_bminus(const Ribbon& r, int m) {
    const int k = r.k;
    const int l = k / 2;
    const std::size_t n = r.n;
    const bool m_odd = m % 2 == 1;
    std::vector<Monomial> s0, s1, s2, s3, s4, s5;
    // S0
    s0.push_back(Mono(n).mul(r.x(k), m).get());
    if (m_odd)
        s0.push_back(Mono(n).mul(r.x(0)).mul(r.y(2 * k)).mul(r.x(k), m - 2).get());
    else
        s0.push_back(Mono(n).mul(r.x(l)).mul(r.y(2 * k - l)).mul(r.x(k), m - 2).get());
    // S1
    for (int i = 0; i <= k - 1; ++i)
        for (int d = 0; d <= m - 1; ++d) s1.push_back(Mono(n).mul(r.x(i), m - d).mul(r.x(i + 1), d).get());
    // S2
    for (int i = 0; i <= l - 2; ++i)
        for (int d = 0; d <= m - 1; ++d)
            s2.push_back(Mono(n).mul(r.x(i), m - 1 - d).mul(r.x(i + 1), d).mul(r.y(i + k + 1)).get());
    if (l >= 1)
        for (int d = 0; d <= m - 2; ++d)
            s2.push_back(Mono(n).mul(r.x(l - 1), m - 1 - d).mul(r.x(l), d).mul(r.y(l + k)).get());
    // S3
    const bool k_even = k % 2 == 0;
    const int i_hi = k_even ? k - 2 : k - 3;
    for (int i = l; i <= i_hi; ++i)
        for (int d = 1; d <= m - 2; ++d)
            s3.push_back(Mono(n).mul(r.x(i), m - 1 - d).mul(r.x(i + 1), d).mul(r.y(k + 2 * l - 1 - i)).get());
    if (!k_even && k >= 2)
        for (int d = 0; d <= m - 2; ++d)
            s3.push_back(
                Mono(n).mul(r.x(k - 2), m - 2 - d).mul(r.x(k - 1), d).mul(r.x(l)).mul(r.y(3 * l + 1)).get());
    // S4
    for (int d = 0; d <= m - 4; ++d)
        s4.push_back(Mono(n).mul(r.x(k - 1), m - 2 - d).mul(r.x(k), d).mul(r.x(0)).mul(r.y(2 * k)).get());
    // S5
    if (m_odd)
        s5.push_back(Mono(n).mul(r.x(k - 1)).mul(r.x(l), (m - 1) / 2).mul(r.y(2 * k - l), (m - 1) / 2).get());
    else
        s5.push_back(
            Mono(n).mul(r.x(k - 1)).mul(r.x(k)).mul(r.x(l), (m - 2) / 2).mul(r.y(2 * k - l), (m - 2) / 2).get());

    const auto io = r.iota();
    std::vector<Monomial> out = s0;
    for (const auto* s : {&s1, &s2, &s3, &s4, &s5}) {
        append(out, *s);
        append(out, apply_perm(*s, io));
    }
    return out;
}

}  // namespace

Family ribbon_family(int g, int m, const std::string& name) {
    require(g >= 3 && g % 2 == 1, "ribbon needs odd g >= 3");
    Ribbon r(g);
    const int k = r.k;
    const std::size_t n = r.n;
    const long gl = g;
    const long ml = m;
    Family f;
    f.id = "ribbon:" + name;
    std::vector<Monomial> monos;
    if (name == "Bplus2" || name == "Bminus2") {
        require(m == 2, name + " needs m = 2");
        const Rational c = name == "Bplus2" ? Rational(gl - 2) : Rational(-2);
        monos = name == "Bplus2" ? ribbon_bplus2(r) : ribbon_bminus2(r);
        f.expected = form_on(n, {{0, c}, {k, c}, {2 * k, c}});
    } else if (name == "B1plus" || name == "B2plus" || name == "Bminus") {
        require(m >= 3, name + " needs m >= 3");
        if (name == "B1plus") {
            monos = ribbon_b1plus(r, m);
            const Rational ck((ml - 1) * (ml - 1) * (gl - 1) - (2 * ml - 3));
            const Rational ce(ml * (ml - 1) * (gl - 1) / 2 - 1);
            f.expected = form_on(n, {{0, ce}, {k, ck}, {2 * k, ce}});
        } else if (name == "B2plus") {
            monos = ribbon_b2plus(r, m);
            const Rational ck((ml - 1) * (gl - 1) + (2 * ml - 5));
            const Rational ce((ml - 1) * (ml - 1) * (gl - 1) - (2 * ml - 3));
            f.expected = form_on(n, {{0, ce}, {k, ck}, {2 * k, ce}});
        } else {
            monos = ribbon_bminus(r, m);
            const bool odd = m % 2 == 1;
            const Rational ce = odd ? Rational(-(ml * ml - 3 * ml + 5)) : Rational(-(ml * ml - 3 * ml + 6));
            const Rational ck = odd ? Rational(-(5 * ml - 10)) : Rational(-(5 * ml - 12));
            f.expected = form_on(n, {{0, ce}, {k, ck}, {2 * k, ce}});
        }
    } else {
        throw std::invalid_argument("unknown ribbon family '" + name + "'");
    }
    f.expr = make_leaf(std::move(monos), n, f.id);
    return f;
}

Certificate ribbon_certificate(int g, int m) {
    require(g >= 3 && g % 2 == 1 && m >= 2, "ribbon certificate needs odd g >= 3, m >= 2");
    Certificate cert;
    cert.mode = CertMode::semistable;
    CertGroup grp;
    const nlohmann::json p{{"g", g}, {"m", m}};
    if (m == 2) {
        grp.entries.push_back(entry(2, ribbon_family(g, 2, "Bplus2"), p));
        grp.entries.push_back(entry(g - 2, ribbon_family(g, 2, "Bminus2"), p));
    } else {
        auto bm = ribbon_family(g, m, "Bminus");
        auto b1 = ribbon_family(g, m, "B1plus");
        auto b2 = ribbon_family(g, m, "B2plus");
        auto sol = positive_dependence({bm.expr->form, b1.expr->form, b2.expr->form});
        if (!sol) throw std::logic_error("ribbon m>=3 forms admit no positive dependence");
        auto c = normalize_first(*sol);
        grp.entries.push_back(entry(c[0], bm, p));
        grp.entries.push_back(entry(c[1], b1, p));
        grp.entries.push_back(entry(c[2], b2, p));
    }
    cert.groups.push_back(std::move(grp));
    return cert;
}

// ===========================================================================
// Double-A

namespace {

struct DoubleA {
    int k;
    std::size_t n;
    explicit DoubleA(int k_) : k(k_), n(2 * static_cast<std::size_t>(k_)) {}
    int x(int i) const {
        if (i < 1 || i > k) throw std::logic_error("doubleA x" + std::to_string(i) + " undefined");
        return i - 1;
    }
    int y(int i) const {
        if (i < 1 || i > k) throw std::logic_error("doubleA y" + std::to_string(i) + " undefined");
        return k + i - 1;
    }
    std::vector<int> iota() const {
        std::vector<int> p(n);
        for (int i = 0; i < k; ++i) {
            p[static_cast<std::size_t>(i)] = k + i;
            p[static_cast<std::size_t>(k + i)] = i;
        }
        return p;
    }
    int wdeg(const Monomial& mo) const {
        int d = 0;
        for (int i = 1; i <= k; ++i) d += i * (mo[static_cast<std::size_t>(x(i))] - mo[static_cast<std::size_t>(y(i))]);
        return d;
    }
    bool mixed(const Monomial& mo) const {
        bool hx = false, hy = false;
        for (int i = 1; i <= k; ++i) {
            hx = hx || mo[static_cast<std::size_t>(x(i))] > 0;
            hy = hy || mo[static_cast<std::size_t>(y(i))] > 0;
        }
        return hx && hy;
    }
};

std::vector<Monomial> acurve_t1(const DoubleA& a, int m) {
    std::set<Monomial> s;
    for (int p = 0; p <= m - 1; ++p) {
        for (std::size_t v = 0; v < a.n; ++v) {
            auto mo = Mono(a.n).mul(a.x(a.k), p).mul(a.y(a.k), m - 1 - p).mul(static_cast<int>(v)).get();
            if (a.mixed(mo)) s.insert(mo);
        }
    }
    return {s.rbegin(), s.rend()};
}

std::vector<Monomial> acurve_t2(const DoubleA& a, int m, int s) {
    std::vector<Monomial> out;
    for (int d = 1; d <= m - 2; ++d)
        out.push_back(
            Mono(a.n).mul(a.x(a.k), m - 2 - d).mul(a.y(a.k), d).mul(a.x(a.k - s)).mul(a.x(s)).get());
    return out;
}

std::vector<Monomial> acurve_s1(const DoubleA& a, int m) {
    const int k = a.k;
    const int l = k / 2;
    std::vector<Monomial> out;
    auto pw = [&](int i, int d, int yv) {
        return Mono(a.n).mul(a.x(i), m - 1 - d).mul(a.x(i - 1), d).mul(a.y(yv)).get();
    };
    if (k % 2 == 0) {
        for (int i = l + 2; i <= k; ++i)
            for (int d = 0; d <= m - 1; ++d) out.push_back(pw(i, d, k + 1 - i));
        for (int i = 2; i <= l + 1; ++i)
            for (int d = 0; d <= m - 3; ++d) out.push_back(pw(i, d, i - 1));
    } else {
        for (int i = l + 3; i <= k; ++i)
            for (int d = 0; d <= m - 1; ++d) out.push_back(pw(i, d, k + 1 - i));
        for (int i = 3; i <= l + 2; ++i)
            for (int d = 0; d <= m - 3; ++d) out.push_back(pw(i, d, i - 2));
        out.push_back(Mono(a.n).mul(a.x(l + 2)).mul(a.y(l)).mul(a.x(2), m - 2).get());
        for (int d = 0; d <= m - 2; ++d)
            out.push_back(Mono(a.n).mul(a.x(l + 1)).mul(a.y(l)).mul(a.x(2), m - 2 - d).mul(a.x(1), d).get());
    }
    return out;
}

std::vector<Monomial> acurve_s2(const DoubleA& a, int m, int s) {
    const int k = a.k;
    const int l = k / 2;
    const std::size_t n = a.n;
    std::vector<Monomial> out;
    auto xsys = [&](Mono mo, int i) { return mo.mul(a.x(s), i).mul(a.y(s), i); };
    auto xkyy = [&]() { return Mono(n).mul(a.x(k)).mul(a.y(s)).mul(a.y(k - s)); };
    if (k % 2 == 0) {
        out.push_back(Mono(n).mul(a.x(l + 1)).mul(a.y(l)).mul(a.x(1), m - 2).get());
        for (int i = 0; 2 * i <= m - 2; ++i)
            out.push_back(xsys(Mono(n).mul(a.x(l)).mul(a.y(l)), i).mul(a.x(1), m - 2 * i - 2).get());
        for (int i = 0; 2 * i < m - 2; ++i)
            out.push_back(xsys(Mono(n).mul(a.x(l)).mul(a.y(l)), i).mul(a.y(1), m - 2 * i - 2).get());
        for (int i = 0; 2 * i <= m - 3; ++i) out.push_back(xsys(xkyy(), i).mul(a.x(1), m - 2 * i - 3).get());
        for (int i = 0; 2 * i < m - 3; ++i) out.push_back(xsys(xkyy(), i).mul(a.y(1), m - 2 * i - 3).get());
        out.push_back(Mono(n).mul(a.y(l + 1)).mul(a.x(l)).mul(a.y(1), m - 2).get());
    } else {
        for (int i = 0; 2 * i <= m - 2; ++i)
            out.push_back(xsys(Mono(n).mul(a.x(l + 1)).mul(a.y(l + 1)), i).mul(a.x(1), m - 2 - 2 * i).get());
        for (int i = 0; 2 * i < m - 2; ++i)
            out.push_back(xsys(Mono(n).mul(a.x(l + 1)).mul(a.y(l + 1)), i).mul(a.y(1), m - 2 - 2 * i).get());
        for (int i = 0; 2 * i <= m - 3; ++i) out.push_back(xsys(xkyy(), i).mul(a.x(1), m - 3 - 2 * i).get());
        for (int i = 0; 2 * i < m - 3; ++i) out.push_back(xsys(xkyy(), i).mul(a.y(1), m - 3 - 2 * i).get());
    }
    return out;
}

std::vector<Monomial> acurve_members(const DoubleA& a, int m, const std::string& name, int s) {
    const int k = a.k;
    const auto io = a.iota();
    if (name == "B1" || name == "B2") {
        require(m == 2, name + " needs m = 2");
        std::vector<Monomial> out;
        auto q = [&](int u, int v) { out.push_back(Mono(a.n).mul(u).mul(v).get()); };
        if (name == "B1") {
            for (int i = 1; i <= k - 1; ++i) q(a.x(i), a.y(k - i));
            for (int i = 1; i <= k; ++i) q(a.x(i), a.y(k - i + 1));
        } else {
            for (int i = 1; i <= k; ++i) q(a.x(k), a.y(i));
            for (int i = 1; i <= k - 1; ++i) q(a.x(i), a.y(k));
        }
        return out;
    }
    require(m >= 3, name + " needs m >= 3");
    require(s >= 1 && s <= k - 1, "s must lie in [1, k-1]");
    if (name == "T" || name == "iT") {
        auto out = acurve_t1(a, m);
        auto t2 = acurve_t2(a, m, s);
        append(out, name == "T" ? t2 : apply_perm(t2, io));
        return out;
    }
    if (name == "S" || name == "iS") {
        auto s1 = acurve_s1(a, m);
        auto out = s1;
        append(out, apply_perm(s1, io));
        auto s2 = acurve_s2(a, m, s);
        append(out, name == "S" ? s2 : apply_perm(s2, io));
        return out;
    }
    throw std::invalid_argument("unknown doubleA family '" + name + "'");
}

}  // namespace

Family acurve_chi_family(int k, int m, const std::string& name, int s) {
    require(k >= 2, "doubleA needs k >= 2");
    require(m >= 2, "doubleA needs m >= 2");
    DoubleA a(k);
    Family f;
    f.id = "doubleA:" + name;
    const Rational kk(k);
    if (name == "plus" || name == "minus") {
        if (m == 2) {
            auto b = acurve_chi_family(k, 2, name == "plus" ? "B2" : "B1");
            f.expr = make_concat({b.expr}, {Integer(1)}, f.id);
            return f;
        }
        std::vector<Expr> kids;
        const std::string base = name == "plus" ? "T" : "S";
        for (int t = 1; t <= k - 1; ++t) {
            kids.push_back(acurve_chi_family(k, m, base, t).expr);
            kids.push_back(acurve_chi_family(k, m, "i" + base, t).expr);
        }
        f.expr = make_concat(kids, std::vector<Integer>(kids.size(), Integer(1)), f.id);
        return f;
    }
    auto monos = acurve_members(a, m, name, s);
    if (name == "B1") f.expected = form_on(a.n, {{a.x(k), Rational(-1)}, {a.y(k), Rational(-1)}});
    if (name == "B2") f.expected = form_on(a.n, {{a.x(k), kk - 1}, {a.y(k), kk - 1}});
    f.expr = make_leaf(std::move(monos), a.n, f.id);
    return f;
}

BasisVerdict is_chi_basis(const CurveModel& model, int m, const std::vector<Monomial>& monos) {
    BasisVerdict out;
    if (model.kind() != models::Kind::DoubleA) throw std::invalid_argument("chi bases live on the doubleA model");
    DoubleA a(model.k());
    const int hi = (m - 1) * a.k - 1;
    const std::size_t want = static_cast<std::size_t>(2 * a.k * (m - 1) - 1);
    if (monos.size() != want) {
        out.reason = "expected " + std::to_string(want) + " monomials, got " + std::to_string(monos.size());
        return out;
    }
    std::map<int, const Monomial*> by_deg;
    for (const auto& mo : monos) {
        if (mo.degree() != m || !a.mixed(mo)) {
            out.reason = model.monomial_string(mo) + " is not a mixed degree-" + std::to_string(m) + " monomial";
            out.witness = {mo};
            return out;
        }
        const int d = a.wdeg(mo);
        if (d < -hi || d > hi) {
            out.reason = model.monomial_string(mo) + " has weighted degree " + std::to_string(d) + " outside the range";
            out.witness = {mo};
            return out;
        }
        auto [it, fresh] = by_deg.emplace(d, &mo);
        if (!fresh) {
            out.reason = "weighted degree " + std::to_string(d) + " repeats";
            out.witness = {*it->second, mo};
            return out;
        }
    }
    return basiskit::is_independent(model, m, monos);
}

BasisCandidate acurve_nonpositive_basis(int k, int m, const Vec& rho) {
    DoubleA a(k);
    if (rho.size() != a.n) throw ratlin::DimensionError("rho length must be 2k");
    engine::make_rho(rho, false);
    BasisCandidate out;
    out.m = m;
    Rational part_w = 0;
    Rational lam = 0;
    for (int i = 1; i <= k; ++i) lam += rho[static_cast<std::size_t>(a.x(i))];
    lam /= k;
    // omega and eta parts: cheapest pure monomial per weighted degree
    for (int block = 0; block < 2; ++block) {
        std::map<int, std::pair<Rational, Monomial>> best;
        for (const auto& mo : models::all_monomials(static_cast<std::size_t>(k), m)) {
            std::vector<int> e(a.n, 0);
            for (int i = 0; i < k; ++i) e[static_cast<std::size_t>(block * k + i)] = mo[static_cast<std::size_t>(i)];
            Monomial full(e);
            Rational w = 0;
            for (std::size_t v = 0; v < a.n; ++v) w += rho[v] * full[v];
            const int d = std::abs(a.wdeg(full));
            auto it = best.find(d);
            if (it == best.end() || w < it->second.first) best[d] = {w, full};
        }
        Rational bw = 0;
        for (auto& [d, p] : best) {
            bw += p.first;
            out.monomials.push_back(p.second);
        }
        if (block == 0) part_w = bw;
    }
    const Rational bound = Rational(m) * Rational(m * k - m + 1) * lam;
    if (part_w > bound) throw std::logic_error("omega part exceeds the rational normal curve bound");
    const Rational s = rho[static_cast<std::size_t>(a.x(k))] + rho[static_cast<std::size_t>(a.y(k))];
    auto chi = acurve_chi_family(k, m, sgn(s) >= 0 ? "minus" : "plus");
    auto mem = basiskit::extract_member(chi.expr, rho);
    append(out.monomials, mem.monomials);
    Rational total = 0;
    for (const auto& mo : out.monomials)
        for (std::size_t v = 0; v < a.n; ++v) total += rho[v] * mo[v];
    if (sgn(total) > 0) throw std::logic_error("double-A basis has positive weight");
    return out;
}

// ===========================================================================
// Rosaries

namespace {

struct Rosary2 {
    int c;
    std::size_t n;
    explicit Rosary2(int g) : c(g - 1), n(3 * static_cast<std::size_t>(g - 1)) {}
    int md(int i) const { return ((i % c) + c) % c; }
    int x(int i) const { return md(i); }
    int y(int i) const { return c + md(i); }
    int z(int i) const { return 2 * c + md(i); }
};

std::vector<Monomial> rosary2_members(int g, int m, const std::string& name) {
    Rosary2 r(g);
    const std::size_t n = r.n;
    std::vector<Monomial> s0, s1, s2, s2p, t1;
    for (int i = 0; i < r.c; ++i) {
        s0.push_back(Mono(n).mul(r.x(i), m).get());
        s0.push_back(Mono(n).mul(r.x(i), m - 1).mul(r.y(i)).get());
        for (int d = 1; d <= m - 1; ++d) {
            s1.push_back(Mono(n).mul(r.x(i), d).mul(r.z(i), m - d).get());
            s1.push_back(Mono(n).mul(r.x(i), d).mul(r.z(i + 1), m - d).get());
        }
        for (int d = 0; d <= m - 2; ++d) {
            s1.push_back(Mono(n).mul(r.x(i), d).mul(r.y(i)).mul(r.z(i), m - d - 1).get());
            s1.push_back(Mono(n).mul(r.x(i), d).mul(r.y(i)).mul(r.z(i + 1), m - d - 1).get());
        }
        auto yy = [&](int p) { return Mono(n).mul(r.y(i - 1), p).mul(r.y(i), p); };
        if (m % 2 == 1) {
            const int l = (m - 1) / 2;
            s2.push_back(yy(l).mul(r.z(i)).get());
            s2p.push_back(yy(l).mul(r.z(i)).get());
        } else {
            const int l = (m - 2) / 2;
            s2.push_back(yy(l).mul(r.z(i), 2).get());
            s2p.push_back(yy(l + 1).get());
        }
        for (int d = 0; d <= m - 2; ++d) {
            t1.push_back(Mono(n).mul(r.x(i), d).mul(r.y(i), m - d).get());
            t1.push_back(Mono(n).mul(r.x(i), d + 1).mul(r.y(i), m - d - 2).mul(r.z(i)).get());
        }
        for (int d = 2; d <= m - 1; ++d) {
            t1.push_back(Mono(n).mul(r.y(i), d).mul(r.z(i), m - d).get());
            t1.push_back(Mono(n).mul(r.y(i), d).mul(r.z(i + 1), m - d).get());
        }
        t1.push_back(Mono(n).mul(r.y(i)).mul(r.z(i), m - 1).get());
        t1.push_back(Mono(n).mul(r.y(i)).mul(r.z(i + 1), m - 1).get());
    }
    if (g == 3 && m % 2 == 0) {
        // the two-component cycle identifies y_{i-1} y_i for both i
        const int l = (m - 2) / 2;
        auto yy = [&](int p) { return Mono(n).mul(r.y(0), p).mul(r.y(1), p); };
        s2 = {yy(l).mul(r.z(0), 2).get(), yy(l + 1).get()};
        s2p = {yy(l).mul(r.z(1), 2).get(), yy(l + 1).get()};
    }
    std::vector<Monomial> out = s0;
    const bool plus = name == "B1plus" || name == "B2plus";
    const bool one = name == "B1plus" || name == "B1minus";
    if (!plus && name != "B1minus" && name != "B2minus")
        throw std::invalid_argument("unknown rosary2 family '" + name + "'");
    append(out, plus ? s1 : t1);
    append(out, one ? s2 : s2p);
    return out;
}

}  // namespace

Family rosary2_family(int g, int m, const std::string& name) {
    require(g >= 3 && g % 2 == 1, "rosary2 needs odd g >= 3");
    require(m >= 2, "rosary2 needs m >= 2");
    Family f;
    f.id = "rosary2:" + name;
    f.expr = make_leaf(rosary2_members(g, m, name), 3 * static_cast<std::size_t>(g - 1), f.id);
    return f;
}

Certificate rosary2_certificate(int g, int m) {
    Certificate cert;
    cert.mode = CertMode::semistable;
    CertGroup grp;
    const nlohmann::json p{{"g", g}, {"m", m}};
    const Rational cp(m * m - m), cm(2 * m * m - 5 * m + 3);
    grp.entries.push_back(entry(cp, rosary2_family(g, m, "B1plus"), p));
    grp.entries.push_back(entry(cp, rosary2_family(g, m, "B2plus"), p));
    grp.entries.push_back(entry(cm, rosary2_family(g, m, "B1minus"), p));
    grp.entries.push_back(entry(cm, rosary2_family(g, m, "B2minus"), p));
    cert.groups.push_back(std::move(grp));
    return cert;
}

namespace {

Rational rosary1_plus_multiple(int g, int m) {
    return Rational(2L * m * m - 2L * m + 1 - static_cast<long>(m - 1) * (g - 1));
}
Rational rosary1_minus_multiple(int g, int m) {
    return Rational(static_cast<long>(m) * m + m - 1 - static_cast<long>(m - 1) * (m - 1) * (g - 1));
}

}  // namespace

Family rosary1_family(int g, int m, const std::string& name) {
    require(g >= 5 && g % 2 == 1, "rosary1 needs odd g >= 5");
    require(m >= 2, "rosary1 needs m >= 2");
    const int c = g - 1;
    const std::size_t n = static_cast<std::size_t>(g);
    auto w = [&](int i) { return ((i % c) + c) % c; };
    const int eta = c;
    std::vector<Monomial> out;
    Rational mult;
    for (int i = 0; i < c; ++i) {
        out.push_back(Mono(n).mul(w(i), m).get());
        out.push_back(Mono(n).mul(w(i), m - 1).mul(eta).get());
        if (name == "Bplus") {
            for (int d = 1; m - 2 * d >= 1; ++d) {
                out.push_back(Mono(n).mul(w(i), m - d).mul(w(i - 1), d).get());
                out.push_back(Mono(n).mul(w(i), d).mul(w(i - 1), m - d).get());
            }
            for (int d = 1; m - 2 * d >= 2; ++d) {
                out.push_back(Mono(n).mul(w(i), m - d - 1).mul(w(i - 1), d).mul(eta).get());
                out.push_back(Mono(n).mul(w(i), d).mul(w(i - 1), m - d - 1).mul(eta).get());
            }
            if (m % 2 == 0)
                out.push_back(Mono(n).mul(w(i), m / 2).mul(w(i - 1), m / 2).get());
            else
                out.push_back(Mono(n).mul(w(i), (m - 1) / 2).mul(w(i - 1), (m - 1) / 2).mul(eta).get());
        } else if (name == "Bminus") {
            for (int d = 1; d <= m - 2; ++d) {
                out.push_back(Mono(n).mul(w(i), d).mul(eta, m - d).get());
                out.push_back(Mono(n).mul(w(i)).mul(w(i - 1), d + 1).mul(eta, m - d - 2).get());
            }
            out.push_back(Mono(n).mul(w(i)).mul(w(i - 1)).mul(eta, m - 2).get());
        } else {
            throw std::invalid_argument("unknown rosary1 family '" + name + "'");
        }
    }
    mult = name == "Bplus" ? rosary1_plus_multiple(g, m) : rosary1_minus_multiple(g, m);
    Family f;
    f.id = "rosary1:" + name;
    f.expected = WeightForm(n);
    for (int i = 0; i < c; ++i) f.expected.coef[static_cast<std::size_t>(i)] = mult;
    f.expr = make_leaf(std::move(out), n, f.id);
    return f;
}

RosaryVerdict rosary1_decide(int g, int m) {
    require(g >= 5 && g % 2 == 1, "rosary1 needs odd g >= 5");
    require(m >= 2, "rosary1 needs m >= 2");
    RosaryVerdict out;
    const auto model = models::build_model(models::Kind::RosaryCanonical, g);
    if (g >= 2 * m + 3) {
        out.source = "destabilizer";
        out.rho = Vec(static_cast<std::size_t>(g), Rational(-1));
        out.rho.back() = g - 1;
        out.bound = Rational(static_cast<long>(g - 1) * (2 * m - 3));
        auto chk = engine::check_destabilizer(model, m, out.rho);
        out.min_weight = chk.min_weight;
        out.basis = chk.basis;
        if (out.min_weight < out.bound) throw std::logic_error("rosary destabilizer weight below the bound");
        out.semistable = false;
        return out;
    }
    out.semistable = true;
    if (g == 5 && m == 2) {
        out.source = "engine";
        auto v = engine::decide(model, m);
        if (!v.certificate || v.status == engine::Status::NonSemistable || v.status == engine::Status::Undecided)
            throw std::logic_error("engine found no certificate for rosary1(5,2)");
        out.certificate = v.certificate;
        return out;
    }
    out.source = "construction";
    const Rational ap = rosary1_plus_multiple(g, m), am = rosary1_minus_multiple(g, m);
    if (!(sgn(ap) > 0 && sgn(am) < 0)) throw std::logic_error("rosary1 multiples do not have opposite signs");
    auto c = normalize_first({-am, ap});
    Certificate cert;
    cert.mode = CertMode::semistable;
    CertGroup grp;
    const nlohmann::json p{{"g", g}, {"m", m}};
    grp.entries.push_back(entry(c[0], rosary1_family(g, m, "Bplus"), p));
    grp.entries.push_back(entry(c[1], rosary1_family(g, m, "Bminus"), p));
    cert.groups.push_back(std::move(grp));
    out.certificate = std::move(cert);
    return out;
}

// ===========================================================================
// Path lemma and rational normal curve multibases

std::vector<std::vector<Integer>> path_lemma_multiset(int n, int m) {
    require(n >= 0 && m >= 0, "path lemma needs n, m >= 0");
    std::vector<std::vector<Integer>> c(static_cast<std::size_t>(n + 1),
                                        std::vector<Integer>(static_cast<std::size_t>(m + 1)));
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= m; ++j)
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                ratlin::binomial(static_cast<unsigned long>(i + j), static_cast<unsigned long>(i)) *
                ratlin::binomial(static_cast<unsigned long>(n + m - i - j), static_cast<unsigned long>(n - i));
    return c;
}

PathBalance check_path_balance(const std::vector<std::vector<Integer>>& c) {
    PathBalance b;
    const std::size_t rows = c.size();
    const std::size_t cols = rows ? c[0].size() : 0;
    std::vector<Integer> deg(rows + cols - 1 + (rows + cols == 0), Integer(0)), row(rows, Integer(0)),
        col(cols, Integer(0));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            deg[i + j] += c[i][j];
            row[i] += c[i][j];
            col[j] += c[i][j];
        }
    auto uniform = [](const std::vector<Integer>& v) {
        return std::all_of(v.begin(), v.end(), [&](const Integer& x) { return x == v[0]; });
    };
    b.degree_uniform = uniform(deg);
    b.x_uniform = uniform(row);
    b.y_uniform = uniform(col);
    return b;
}

namespace {

Monomial quad(std::size_t nv, int a, int b) { return Mono(nv).mul(a).mul(b).get(); }

std::vector<Expr> singleton_leaves(const std::vector<Monomial>& monos, std::size_t nv) {
    std::vector<Expr> out;
    for (const auto& mo : monos) out.push_back(make_leaf({mo}, nv));
    return out;
}

Expr concat_equal(const std::vector<Expr>& kids, std::string label = "") {
    return make_concat(kids, std::vector<Integer>(kids.size(), Integer(1)), std::move(label));
}

}  // namespace

Expr kempf_multibasis(int n, int k, std::size_t nvars) {
    require(n >= 0 && k >= 0 && k <= n, "kempf multibasis needs 0 <= k <= n");
    const std::size_t nv = nvars ? nvars : static_cast<std::size_t>(n + 1);
    require(nv >= static_cast<std::size_t>(n + 1), "kempf multibasis needs n+1 variables");
    const std::string label = "H^" + std::to_string(n) + "_" + std::to_string(k);
    if (k == n) {
        std::vector<Monomial> monos;
        for (int i = 0; i <= n; ++i) monos.push_back(quad(nv, i, n - i));
        return concat_equal(singleton_leaves(monos, nv), label);
    }
    std::vector<Monomial> bm, bp;
    for (int i = 0; i <= n - k - 1; ++i) {
        bm.push_back(quad(nv, i, k + i));
        bm.push_back(quad(nv, i + 1, k + i));
    }
    bm.push_back(quad(nv, n - k, n));
    for (int i = k; i <= n; ++i) bp.push_back(quad(nv, 0, i));
    for (int i = 1; i <= n - k; ++i) bp.push_back(quad(nv, n, i));
    Expr lm = make_leaf(bm, nv, "B-");
    Expr lp = make_leaf(bp, nv, "B+");
    if (k == 0) return make_concat({lm, lp}, {Integer(n), Integer(1)}, label);
    Expr t0;
    if (k >= 2) {
        std::vector<Monomial> lo, hi;
        for (int i = 1; i <= k - 1; ++i) {
            lo.push_back(quad(nv, i, k - i));
            hi.push_back(quad(nv, n - i, n - k + i));
        }
        t0 = make_sum({kempf_multibasis(n, k + 1, nv), concat_equal(singleton_leaves(lo, nv)),
                       concat_equal(singleton_leaves(hi, nv))},
                      "T0");
    }
    auto mix = [&](const Expr& b, long wb, const std::string& lab) {
        if (!t0) return make_concat({b}, {Integer(wb)}, lab);
        return make_concat({t0, b}, {Integer(k - 1), Integer(wb)}, lab);
    };
    Expr tm = mix(lm, 1, "T-");
    Expr tp = mix(lp, 2, "T+");
    return make_concat_weighted({tm, tp}, {Rational(static_cast<long>(k) * (2 * n - 2 * k - 2)), Rational(3L * (k + 1))},
                                label);
}

WeightForm kempf_expected(int n, int k, std::size_t nvars) {
    WeightForm w(nvars ? nvars : static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) w.coef[static_cast<std::size_t>(i)] = ratio(2L * (2 * n - 2 * k + 1), n + 1);
    return w;
}

bool kempf_member_ok(int n, int k, const BasisCandidate& c) {
    std::set<int> degs;
    for (const auto& mo : c.monomials) {
        if (mo.degree() != 2) return false;
        int d = 0;
        for (std::size_t v = 0; v < mo.size(); ++v) {
            if (mo[v] && static_cast<int>(v) > n) return false;
            d += static_cast<int>(v) * mo[v];
        }
        if (d < k || d > 2 * n - k || !degs.insert(d).second) return false;
    }
    return degs.size() == static_cast<std::size_t>(2 * n - 2 * k + 1);
}

// ===========================================================================
// Wiman

namespace {

Rational type1_lambda(int g, int m) {
    const long G = g, M = m;
    return ratio((4 * G - 4) * M * M - (3 * G - 3) * M + G, 2 * G - 1);
}
Rational type1_n(int g, int m) {
    const long G = g, M = m;
    return ratio((2 * G - 2) * M - G, G - 2);
}

/// Convex weights w over `forms` (sum 1) with sum_c w_c F_c = alpha*1 + t*e_p
/// on the index block; the solution must be unique.
std::vector<Rational> solve_mix(const std::vector<WeightForm>& forms, const std::vector<int>& block, int p,
                                const Rational& t) {
    const std::size_t r = forms.size();
    Matrix a;
    Vec rhs;
    for (int b : block) {
        Vec row(r + 1);
        for (std::size_t c = 0; c < r; ++c) row[c] = forms[c].coef[static_cast<std::size_t>(b)];
        row[r] = -1;
        a.push_back(row);
        rhs.push_back(b == p ? t : Rational(0));
    }
    Vec ones(r + 1, Rational(1));
    ones[r] = 0;
    a.push_back(ones);
    rhs.push_back(1);
    auto sol = ratlin::solve_linear(a, rhs);
    if (!sol) throw std::logic_error("averaging system is inconsistent");
    if (!ratlin::nullspace(a, r + 1).empty()) throw std::logic_error("averaging system is not determined");
    sol->pop_back();
    return *sol;
}

/// Largest t >= 0 keeping every weight nonnegative (w is affine in t).
Rational mix_bound(const std::vector<WeightForm>& forms, const std::vector<int>& block, int p) {
    auto w0 = solve_mix(forms, block, p, 0);
    auto w1 = solve_mix(forms, block, p, 1);
    std::optional<Rational> best;
    for (std::size_t c = 0; c < w0.size(); ++c) {
        if (sgn(w0[c]) < 0) return 0;
        const Rational d = w1[c] - w0[c];
        if (sgn(d) < 0) {
            Rational lim = w0[c] / -d;
            if (!best || lim < *best) best = lim;
        }
    }
    if (!best) throw std::logic_error("averaging bound is unbounded");
    return *best;
}

class WimanBuilder {
public:
    explicit WimanBuilder(int g) : g_(g), nx_(2 * g - 1), ny_(g - 2), nv_(static_cast<std::size_t>(3 * g - 3)) {}

    int x(int i) const {
        if (i < 0 || i >= nx_) throw std::logic_error("wiman x" + std::to_string(i) + " undefined");
        return i;
    }
    int y(int j) const {
        if (j < 0 || j >= ny_) throw std::logic_error("wiman y" + std::to_string(j) + " undefined");
        return nx_ + j;
    }
    std::size_t nvars() const { return nv_; }
    std::vector<int> xblock() const {
        std::vector<int> b;
        for (int i = 0; i < nx_; ++i) b.push_back(x(i));
        return b;
    }
    std::vector<int> yblock() const {
        std::vector<int> b;
        for (int j = 0; j < ny_; ++j) b.push_back(y(j));
        return b;
    }

    /// Per-z-degree parts of the balanced (kx, ky) multibasis.
    const std::vector<Expr>& graded(int kx, int ky) {
        auto key = std::make_pair(kx, ky);
        auto it = graded_.find(key);
        if (it != graded_.end()) return it->second;
        std::vector<Expr> out;
        if (kx == 0 && ky == 0) {
            out.push_back(make_leaf({unit(nv_)}, nv_));
        } else {
            const bool use_x = kx > 0;
            const auto prev = use_x ? graded(kx - 1, ky) : graded(0, ky - 1);
            const int nn = use_x ? nx_ - 1 : ny_ - 1;
            const int D = static_cast<int>(prev.size()) - 1;
            const auto c = path_lemma_multiset(nn, D);
            std::vector<std::vector<Expr>> kids(static_cast<std::size_t>(nn + D + 1));
            std::vector<std::vector<Integer>> mult(kids.size());
            for (int i = 0; i <= nn; ++i) {
                const Monomial f = Mono(nv_).mul(use_x ? x(i) : y(i)).get();
                for (int d = 0; d <= D; ++d) {
                    kids[static_cast<std::size_t>(i + d)].push_back(make_times(f, prev[static_cast<std::size_t>(d)]));
                    mult[static_cast<std::size_t>(i + d)].push_back(c[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)]);
                }
            }
            for (std::size_t t = 0; t < kids.size(); ++t) out.push_back(make_concat(kids[t], mult[t]));
        }
        return graded_.emplace(key, std::move(out)).first->second;
    }

    Expr S(int kx, int ky) {
        return make_sum(graded(kx, ky), "S(" + std::to_string(kx) + "," + std::to_string(ky) + ")");
    }

    Expr kempf(int u) {
        auto it = kempf_.find(u);
        if (it != kempf_.end()) return it->second;
        Expr e = u == 0 ? kempf_multibasis(2 * g_ - 3, g_ - 3, nv_) : kempf_multibasis(2 * g_ - 2, g_ - 2, nv_);
        kempf_[u] = e;
        return e;
    }

    Expr Su(int u, int i, int j, int k, int m) {
        require(u == 0 || u == 1, "u must be 0 or 1");
        require(k >= 2 && k <= m, "Su needs 2 <= k <= m");
        const Monomial top = Mono(nv_).mul(x(2 * g_ - 2), k).mul(y(ny_ - 1), m - k).get();
        const Monomial f = Mono(nv_).mul(x(i), k - 2).mul(y(j), m - k).get();
        return make_sum({make_leaf({top}, nv_), make_times(f, kempf(u))},
                        "S" + std::to_string(u) + "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    }

    /// Inner x-averaged multibasis for a fixed j.
    struct Inner {
        std::vector<Expr> kids;
    };
    Inner inner_kids(int k, int m, int i, int j, bool pointed) {
        Inner in;
        if (k == 2) {
            in.kids.push_back(Su(0, 0, j, k, m));
        } else {
            std::vector<Expr> s0;
            for (int t = 0; t <= 2 * g_ - 3; ++t) s0.push_back(Su(0, t, j, k, m));
            in.kids.push_back(concat_equal(s0, "S0avg"));
        }
        in.kids.push_back(Su(1, 2 * g_ - 2, j, k, m));
        if (pointed && i != 2 * g_ - 2) in.kids.push_back(Su(1, i, j, k, m));
        return in;
    }

    std::vector<WeightForm> forms_of(const std::vector<Expr>& kids) {
        std::vector<WeightForm> f;
        for (const auto& e : kids) f.push_back(e->form);
        return f;
    }

    Rational eps_bound(int k, int m, int i) {
        require(k >= 3, "the x-pointed piece needs k >= 3");
        auto in = inner_kids(k, m, i, ny_ - 1, true);
        return mix_bound(forms_of(in.kids), xblock(), x(i));
    }

    std::vector<Expr> outer_kids(int k, int m, int i, const Rational& eps) {
        std::vector<Expr> per_j;
        const int jlo = m - k == 0 ? ny_ - 1 : 0;
        for (int j = jlo; j < ny_; ++j) {
            auto in = inner_kids(k, m, i, j, sgn(eps) != 0);
            auto w = solve_mix(forms_of(in.kids), xblock(), x(i), eps);
            for (const auto& q : w)
                if (sgn(q) < 0) throw std::invalid_argument("x-pointed weight out of the feasible range");
            per_j.push_back(make_concat_weighted(in.kids, w, "x-avg(j=" + std::to_string(j) + ")"));
        }
        return per_j;
    }

    Rational delta_bound(int k, int m, int j) {
        require(ny_ >= 2 && m - k >= 1, "the y-pointed piece needs g >= 4 and m - k >= 1");
        auto per_j = outer_kids(k, m, 0, 0);
        return mix_bound(forms_of(per_j), yblock(), y(j));
    }

    Expr piece(int k, int m, int i, int j, const Rational& eps, const Rational& delta) {
        require(k >= 2 && k <= m, "piece needs 2 <= k <= m");
        if (sgn(eps) != 0) require(k >= 3, "an x-pointed piece needs k >= 3");
        if (sgn(delta) != 0) require(ny_ >= 2 && m - k >= 1, "a y-pointed piece needs g >= 4 and m - k >= 1");
        if (sgn(eps) < 0 || sgn(delta) < 0) throw std::invalid_argument("eps and delta must be nonnegative");
        if (sgn(eps) > 0) {
            const Rational b = eps_bound(k, m, i);
            if (eps > b) throw std::invalid_argument("eps " + ratlin::to_string(eps) + " exceeds the bound " + ratlin::to_string(b));
        }
        auto per_j = outer_kids(k, m, i, eps);
        const std::string label = "piece" + std::to_string(k);
        if (per_j.size() == 1) return make_concat(per_j, {Integer(1)}, label);
        if (sgn(delta) > 0) {
            const Rational b = mix_bound(forms_of(per_j), yblock(), y(j));
            if (delta > b)
                throw std::invalid_argument("delta " + ratlin::to_string(delta) + " exceeds the bound " + ratlin::to_string(b));
        }
        auto p = solve_mix(forms_of(per_j), yblock(), sgn(delta) ? y(j) : -1, delta);
        return make_concat_weighted(per_j, p, label);
    }

    Expr type1(int m) { return make_sum({S(m, 0), S(m - 1, 1)}, "TypeI"); }

    Expr type2(int m, int i, int j, const Rational& eps, const Rational& delta) {
        std::vector<Expr> parts{S(0, m), S(1, m - 1)};
        for (int k = 2; k <= m; ++k) {
            const Rational e = k == 3 ? eps : Rational(0);
            const Rational d = k == 2 && m >= 3 ? delta : Rational(0);
            parts.push_back(piece(k, m, i, j, e, d));
        }
        if (sgn(eps) != 0) require(m >= 3, "eps needs m >= 3");
        if (sgn(delta) != 0) require(m >= 3, "delta needs m >= 3");
        return make_sum(parts, m == 2 ? "M2TypeII" : "TypeII");
    }

    int g() const { return g_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

private:
    int g_, nx_, ny_;
    std::size_t nv_;
    std::map<std::pair<int, int>, std::vector<Expr>> graded_;
    std::map<int, Expr> kempf_;
};

WeightForm block_form(const WimanBuilder& b, const Rational& xa, const Rational& yb, int pi, const Rational& eps,
                      int pj, const Rational& delta) {
    WeightForm w(b.nvars());
    for (int v : b.xblock()) w.coef[static_cast<std::size_t>(v)] = xa;
    for (int v : b.yblock()) w.coef[static_cast<std::size_t>(v)] = yb;
    if (pi >= 0) w.coef[static_cast<std::size_t>(b.x(pi))] += eps;
    if (pj >= 0) w.coef[static_cast<std::size_t>(b.y(pj))] += delta;
    return w;
}

/// Per-variable pointed term for the m >= 3 certificate.
struct Pointing {
    int i = 0, j = 0;
    Rational eps = 0, delta = 0;
};

Pointing default_pointing(WimanBuilder& b, int m, std::size_t v) {
    Pointing p;
    p.j = b.ny() - 1;
    if (static_cast<int>(v) < b.nx()) {
        p.i = static_cast<int>(v);
        p.eps = b.eps_bound(3, m, p.i) / 2;
    } else {
        p.j = static_cast<int>(v) - b.nx();
        if (b.ny() >= 2) p.delta = b.delta_bound(2, m, p.j) / 2;
    }
    return p;
}

struct PointedGroup {
    CertGroup group;
    Expr expr;
};

PointedGroup pointed_group(WimanBuilder& b, int m, std::size_t v) {
    const int g = b.g();
    const auto p = default_pointing(b, m, v);
    Family t1{b.type1(m), {}, "wiman:TypeI"};
    Family t2{b.type2(m, p.i, p.j, p.eps, p.delta), {}, "wiman:TypeII"};
    const nlohmann::json p1{{"g", g}, {"m", m}};
    const nlohmann::json p2{{"g", g}, {"m", m}, {"i", p.i}, {"j", p.j},
                            {"eps", ratlin::to_string(p.eps)}, {"delta", ratlin::to_string(p.delta)}};
    PointedGroup out;
    out.group.variable = static_cast<int>(v);
    const bool lone_y = static_cast<int>(v) >= b.nx() && b.ny() == 1;
    if (lone_y) {
        out.group.entries.push_back(entry(1, t2, p2));
        out.expr = t2.expr;
        return out;
    }
    // p (A_I - B_I) = q (b - a), read off an unpointed x and y coordinate
    const int xr = p.i == 0 ? b.x(1) : b.x(0);
    const int yr = b.ny() >= 2 && p.j == 0 ? b.y(1) : b.y(0);
    const Rational AI = t1.expr->form.coef[static_cast<std::size_t>(xr)];
    const Rational BI = t1.expr->form.coef[static_cast<std::size_t>(yr)];
    const Rational a = t2.expr->form.coef[static_cast<std::size_t>(xr)];
    const Rational bb = t2.expr->form.coef[static_cast<std::size_t>(yr)];
    auto c = normalize_first({bb - a, AI - BI});
    out.group.entries.push_back(entry(c[0], t1, p1));
    out.group.entries.push_back(entry(c[1], t2, p2));
    out.expr = make_concat_weighted({t1.expr, t2.expr}, {c[0], c[1]}, "pointed");
    return out;
}

}  // namespace

Rational wiman_type1_lambda(int g, int m) { return type1_lambda(g, m); }
Rational wiman_type1_n(int g, int m) { return type1_n(g, m); }
Rational wiman_type2_a(int g, int m, const Rational& eps) {
    const long G = g, M = m;
    return ratio((G + 1) * M * M + (2 * G - 2) * M - G, 2 * G - 1) - eps / Rational(2 * G - 1);
}
Rational wiman_type2_b(int g, int m, const Rational& delta) {
    const long G = g, M = m;
    return ratio((3 * G - 5) * M * M - (3 * G - 3) * M + G, G - 2) - delta / Rational(G - 2);
}

PieceBound wiman_piece_bounds(int g, int m, int i, int j) {
    require(g >= 3 && m >= 3, "piece bounds need g >= 3, m >= 3");
    WimanBuilder b(g);
    PieceBound out;
    out.eps_max = b.eps_bound(3, m, i);
    out.delta_max = b.ny() >= 2 ? b.delta_bound(2, m, j) : Rational(0);
    return out;
}

Family wiman_family(const FamilySpec& sp) {
    require(sp.g >= 3, "wiman needs g >= 3");
    const int g = sp.g, m = sp.m;
    WimanBuilder b(g);
    const std::string name = sp.family.substr(sp.family.find(':') + 1);
    Family f;
    f.id = "wiman:" + name;
    if (name == "S") {
        require(m >= 1 && sp.k >= 0 && sp.k <= m, "S needs 0 <= k <= m");
        f.expr = b.S(sp.k, m - sp.k);
        const long dim = static_cast<long>(2 * g - 2) * sp.k + static_cast<long>(g - 3) * (m - sp.k) + 1;
        f.expected = block_form(b, ratio(sp.k * dim, 2 * g - 1), ratio((m - sp.k) * dim, g - 2), -1, 0, -1, 0);
    } else if (name == "Su") {
        require(sp.i >= 0 && sp.i <= 2 * g - 2 && sp.j >= 0 && sp.j <= g - 3, "Su index out of range");
        f.expr = b.Su(sp.u, sp.i, sp.j, sp.k, m);
    } else if (name == "Piece") {
        f.expr = b.piece(sp.k, m, sp.i, sp.j, sp.eps, sp.delta);
        const long width = 2L * g + 2;
        f.expected = block_form(b, (Rational(sp.k * width) - sp.eps) / Rational(2 * g - 1),
                                (Rational((m - sp.k) * width) - sp.delta) / Rational(g - 2), sp.i, sp.eps, sp.j,
                                sp.delta);
    } else if (name == "ExampleV") {
        require(m == 2 || m == 0, "ExampleV lives in degree 2");
        f.expr = b.piece(2, 2, 0, g - 3, 0, 0);
        f.expected = block_form(b, ratio(2L * (2 * g + 2), 2 * g - 1), 0, -1, 0, -1, 0);
    } else if (name == "TypeI") {
        require(m >= 2, "TypeI needs m >= 2");
        f.expr = b.type1(m);
        f.expected = block_form(b, type1_lambda(g, m), type1_n(g, m), -1, 0, -1, 0);
    } else if (name == "TypeII" || name == "M2TypeII") {
        const int mm = name == "M2TypeII" ? 2 : m;
        require(mm >= 2, "TypeII needs m >= 2");
        f.expr = b.type2(mm, sp.i, sp.j, sp.eps, sp.delta);
        f.expected = block_form(b, wiman_type2_a(g, mm, sp.eps), wiman_type2_b(g, mm, sp.delta), sp.i, sp.eps, sp.j,
                                sp.delta);
    } else {
        throw std::invalid_argument("unknown wiman family '" + name + "'");
    }
    return f;
}

Certificate wiman_certificate(int g, int m) {
    if (g == 3 && m == 2)
        throw std::invalid_argument("wiman(3,2) is not semistable; no certificate exists");
    require(g >= 3 && m >= 2, "wiman certificate needs g >= 3, m >= 2");
    WimanBuilder b(g);
    Certificate cert;
    if (m == 2) {
        cert.mode = CertMode::semistable;
        Family t1{b.type1(2), {}, "wiman:TypeI"};
        Family t2{b.type2(2, 0, g - 3, 0, 0), {}, "wiman:M2TypeII"};
        const Rational AI = t1.expr->form.coef[0], BI = t1.expr->form.coef[static_cast<std::size_t>(b.y(0))];
        const Rational A2 = t2.expr->form.coef[0], B2 = t2.expr->form.coef[static_cast<std::size_t>(b.y(0))];
        auto c = normalize_first({B2 - A2, AI - BI});
        CertGroup grp;
        const nlohmann::json p{{"g", g}, {"m", 2}};
        grp.entries.push_back(entry(c[0], t1, p));
        grp.entries.push_back(entry(c[1], t2, p));
        cert.groups.push_back(std::move(grp));
        return cert;
    }
    cert.mode = CertMode::stable_pointed;
    for (std::size_t v = 0; v < b.nvars(); ++v) cert.groups.push_back(pointed_group(b, m, v).group);
    return cert;
}

BasisCandidate wiman_negative_basis(int g, int m, const Vec& rho) {
    require(m >= 3, "wiman_negative_basis needs m >= 3");
    WimanBuilder b(g);
    if (rho.size() != b.nvars()) throw ratlin::DimensionError("rho length does not match the wiman model");
    if (ratlin::is_zero(rho)) throw std::invalid_argument("rho must be nonzero");
    engine::make_rho(rho, false);
    const auto v = static_cast<std::size_t>(std::min_element(rho.begin(), rho.end()) - rho.begin());
    auto grp = pointed_group(b, m, v);
    auto mem = basiskit::extract_member(grp.expr, rho);
    Rational w = 0;
    for (const auto& mo : mem.monomials)
        for (std::size_t t = 0; t < rho.size(); ++t) w += rho[t] * mo[t];
    if (sgn(w) >= 0) throw std::logic_error("extracted wiman member is not negative");
    return mem;
}

// ===========================================================================
// Dispatch

std::vector<std::string> family_ids() {
    return {"ribbon:Bplus2",   "ribbon:Bminus2", "ribbon:B1plus",   "ribbon:B2plus",   "ribbon:Bminus",
            "doubleA:B1",      "doubleA:B2",     "doubleA:T",       "doubleA:iT",      "doubleA:S",
            "doubleA:iS",      "doubleA:plus",   "doubleA:minus",   "rosary1:Bplus",   "rosary1:Bminus",
            "rosary2:B1plus",  "rosary2:B2plus", "rosary2:B1minus", "rosary2:B2minus", "wiman:S",
            "wiman:Su",        "wiman:Piece",    "wiman:ExampleV",  "wiman:TypeI",     "wiman:TypeII",
            "wiman:M2TypeII",  "kempf:H"};
}

std::optional<CurveModel> family_model(const FamilySpec& sp) {
    const auto pos = sp.family.find(':');
    const std::string kind = sp.family.substr(0, pos);
    if (kind == "kempf") return std::nullopt;
    return models::build_model(models::parse_kind(kind), sp.g);
}

Family build_family(const FamilySpec& sp) {
    const auto pos = sp.family.find(':');
    if (pos == std::string::npos) throw std::invalid_argument("family id must look like kind:name");
    const std::string kind = sp.family.substr(0, pos);
    const std::string name = sp.family.substr(pos + 1);
    if (kind == "ribbon") return ribbon_family(sp.g, sp.m, name);
    if (kind == "doubleA") {
        require(sp.g % 2 == 0, "doubleA needs even g");
        return acurve_chi_family(sp.g / 2, sp.m, name, sp.s);
    }
    if (kind == "rosary1") return rosary1_family(sp.g, sp.m, name);
    if (kind == "rosary2") return rosary2_family(sp.g, sp.m, name);
    if (kind == "wiman") return wiman_family(sp);
    if (kind == "kempf") {
        Family f;
        f.id = "kempf:H";
        f.expr = kempf_multibasis(sp.n, sp.k);
        f.expected = kempf_expected(sp.n, sp.k, 0);
        return f;
    }
    throw std::invalid_argument("unknown family kind '" + kind + "'");
}

}  // namespace hstab::constructions
