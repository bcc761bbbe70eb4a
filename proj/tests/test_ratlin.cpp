#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "hstab/models.hpp"
#include "hstab/ratlin.hpp"

using namespace hstab;
using ratlin::Matrix;
using ratlin::Rational;
using ratlin::Vec;

namespace {

Vec vec(std::initializer_list<long> xs) {
    Vec v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    std::uniform_int_distribution<int> den(1, 4);
    Matrix m(rows, Vec(cols));
    for (auto& row : m)
        for (auto& x : row) {
            x = Rational(d(rng), den(rng));
            x.canonicalize();
        }
    return m;
}

// Rank via determinants of all square minors, independent of row reduction.
Rational det(Matrix a) {
    const std::size_t n = a.size();
    Rational d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return d;
}

std::size_t minor_rank(const Matrix& m) {
    const std::size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
    for (std::size_t r = std::min(rows, cols); r > 0; --r) {
        std::vector<bool> rs(rows, false), cs(cols, false);
        std::fill(rs.begin(), rs.begin() + static_cast<long>(r), true);
        do {
            std::fill(cs.begin(), cs.end(), false);
            std::fill(cs.begin(), cs.begin() + static_cast<long>(r), true);
            do {
                Matrix sub;
                for (std::size_t i = 0; i < rows; ++i) {
                    if (!rs[i]) continue;
                    Vec row;
                    for (std::size_t j = 0; j < cols; ++j)
                        if (cs[j]) row.push_back(m[i][j]);
                    sub.push_back(row);
                }
                if (det(sub) != 0) return r;
            } while (std::prev_permutation(cs.begin(), cs.end()));
        } while (std::prev_permutation(rs.begin(), rs.end()));
    }
    return 0;
}

}  // namespace

TEST_SUITE("ratlin") {

TEST_CASE("rationals stay canonical and print as p/q") {
    Rational a = Rational(2) / Rational(4);
    CHECK(a.get_num() == 1);
    CHECK(a.get_den() == 2);
    CHECK(ratlin::to_string(Rational(-6) / Rational(-3)) == "2");
    CHECK(ratlin::to_string(Rational(3) / Rational(-9)) == "-1/3");
    CHECK(ratlin::parse_rational("10/4") == Rational(5) / Rational(2));
    CHECK(ratlin::parse_rational(" -7 ") == -7);
    CHECK_THROWS_AS(ratlin::parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(ratlin::parse_rational("abc"), std::invalid_argument);
    const Vec v{Rational(1) / 3, Rational(-2), Rational(0)};
    CHECK(ratlin::vec_from_json(ratlin::to_json(v)) == v);
    CHECK(ratlin::to_json(v).dump() == R"(["1/3","-2","0"])");
}

TEST_CASE("binomial") {
    CHECK(ratlin::binomial(0, 0) == 1);
    CHECK(ratlin::binomial(5, 2) == 10);
    CHECK(ratlin::binomial(3, 5) == 0);
    CHECK(ratlin::binomial(40, 20) == ratlin::Integer("137846528820"));
}

TEST_CASE("try_insert accepts exactly the independent vectors") {
    ratlin::EchelonState st(2);
    CHECK(st.try_insert(vec({1, 0})));
    CHECK(st.try_insert(vec({0, 1})));
    CHECK_FALSE(st.try_insert(vec({1, 1})));
    CHECK(st.rank() == 2);

    ratlin::EchelonState z(3);
    CHECK_FALSE(z.try_insert(vec({0, 0, 0})));
    CHECK(z.rank() == 0);
    CHECK_THROWS_AS(z.try_insert(vec({1, 0})), ratlin::DimensionError);
}

TEST_CASE("rejected inserts leave the state unchanged") {
    ratlin::EchelonState st(3);
    st.try_insert(vec({1, 2, 3}));
    st.try_insert(vec({0, 1, 1}));
    const auto rows = st.pivot_rows();
    const auto piv = st.pivot_columns();
    CHECK_FALSE(st.try_insert(vec({2, 5, 7})));
    CHECK(st.pivot_rows() == rows);
    CHECK(st.pivot_columns() == piv);
}

TEST_CASE("ribbon g=3 quadrics are independent in every insertion order") {
    const auto model = models::build_model(models::Kind::Ribbon, 3);
    auto monos = models::all_monomials(3, 2);
    REQUIRE(monos.size() == 6);
    std::vector<int> order(6);
    std::iota(order.begin(), order.end(), 0);
    int perms = 0;
    do {
        ratlin::EchelonState st(model.axes(2).size());
        int accepted = 0;
        for (int i : order) accepted += st.try_insert(model.image(monos[static_cast<std::size_t>(i)]));
        CHECK(accepted == 6);
        ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(perms == 720);
}

TEST_CASE("rank of simple matrices") {
    Matrix id{vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})};
    CHECK(ratlin::rank(id) == 3);
    CHECK(ratlin::rank(Matrix(3, Vec(4, Rational(0)))) == 0);
    CHECK(ratlin::rank(Matrix{}) == 0);
}

TEST_CASE("ribbon g=5 quadric images have rank (2m-1)(g-1)") {
    const auto model = models::build_model(models::Kind::Ribbon, 5);
    Matrix m;
    for (const auto& mono : models::all_monomials(5, 2)) m.push_back(model.image(mono));
    CHECK(m.size() == 15);
    CHECK(ratlin::rank(m) == (2 * 2 - 1) * (5 - 1));
}

TEST_CASE("rank agrees with incremental insertion and with minors") {
    std::mt19937 rng(12345);
    for (int t = 0; t < 60; ++t) {
        const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        Matrix m = random_matrix(rng, rows, cols, -2, 2);
        if (t % 3 == 0 && rows >= 2) m[rows - 1] = m[0];  // force some dependence
        ratlin::EchelonState st(cols);
        for (const auto& row : m) st.try_insert(row);
        const auto r = ratlin::rank(m);
        CHECK(st.rank() == r);
        CHECK(minor_rank(m) == r);
        // order independence of the final rank
        std::shuffle(m.begin(), m.end(), rng);
        ratlin::EchelonState st2(cols);
        for (const auto& row : m) st2.try_insert(row);
        CHECK(st2.rank() == r);
    }
}

TEST_CASE("solve_linear and nullspace") {
    std::mt19937 rng(7);
    for (int t = 0; t < 40; ++t) {
        const std::size_t rows = 1 + rng() % 4, cols = 1 + rng() % 5;
        Matrix a = random_matrix(rng, rows, cols, -3, 3);
        auto ns = ratlin::nullspace(a, cols);
        CHECK(ns.size() + ratlin::rank(a) == cols);
        for (const auto& v : ns)
            for (const auto& row : a) CHECK(ratlin::dot(row, v) == 0);
        Vec x0 = random_matrix(rng, 1, cols, -3, 3)[0];
        Vec b;
        for (const auto& row : a) b.push_back(ratlin::dot(row, x0));
        auto x = ratlin::solve_linear(a, b);
        REQUIRE(x.has_value());
        for (std::size_t i = 0; i < rows; ++i) CHECK(ratlin::dot(a[i], *x) == b[i]);
    }
    Matrix a{vec({1, 1}), vec({2, 2})};
    CHECK_FALSE(ratlin::solve_linear(a, vec({1, 3})).has_value());
}

TEST_CASE("lp: interval") {
    ratlin::LpProblem p;
    p.c = vec({1});
    p.a = {vec({1}), vec({-1})};
    p.b = vec({1, 1});
    auto s = ratlin::solve_lp(p);
    REQUIRE(s.status == ratlin::LpStatus::optimal);
    CHECK(s.x[0] == 1);
    CHECK(s.objective == 1);
    CHECK(s.dual_ineq == vec({1, 0}));
}

TEST_CASE("lp: symmetric two-point master problem") {
    // variables (t, r1, r2): t <= <r, v>, r1 + r2 = 0, |ri| <= 1
    auto master = [](const std::vector<Vec>& cuts) {
        ratlin::LpProblem p;
        p.c = vec({1, 0, 0});
        for (const auto& v : cuts) {
            p.a.push_back(Vec{Rational(1), -v[0], -v[1]});
            p.b.push_back(0);
        }
        for (int i = 1; i <= 2; ++i)
            for (int s : {1, -1}) {
                Vec row(3, Rational(0));
                row[static_cast<std::size_t>(i)] = s;
                p.a.push_back(row);
                p.b.push_back(1);
            }
        p.e = {vec({0, 1, 1})};
        p.f = vec({0});
        return ratlin::solve_lp(p);
    };
    // one cut: best is rho = (1, -1) with t = 2
    auto one = master({vec({1, -1})});
    REQUIRE(one.status == ratlin::LpStatus::optimal);
    CHECK(one.objective == 2);
    CHECK(one.x == vec({2, 1, -1}));
    // both cuts: min(<r,v>, <r,-v>) = -|<r,v>| is maximized at rho = 0
    auto both = master({vec({1, -1}), vec({-1, 1})});
    REQUIRE(both.status == ratlin::LpStatus::optimal);
    CHECK(both.objective == 0);
}

TEST_CASE("lp: ribbon g=3 master after its single cut") {
    // the unique basis has projected weight vector 0, so the cut reads t <= 0
    ratlin::LpProblem p;
    p.c = vec({1, 0, 0, 0});
    p.a.push_back(vec({1, 0, 0, 0}));
    p.b.push_back(0);
    for (std::size_t i = 1; i <= 3; ++i)
        for (int s : {1, -1}) {
            Vec row(4, Rational(0));
            row[i] = s;
            p.a.push_back(row);
            p.b.push_back(1);
        }
    p.e = {vec({0, 1, 1, 1})};
    p.f = vec({0});
    auto s = ratlin::solve_lp(p);
    REQUIRE(s.status == ratlin::LpStatus::optimal);
    CHECK(s.objective == 0);
}

TEST_CASE("lp: infeasible and unbounded statuses") {
    ratlin::LpProblem inf;
    inf.c = vec({1});
    inf.a = {vec({1}), vec({-1})};
    inf.b = vec({-1, -1});
    CHECK(ratlin::solve_lp(inf).status == ratlin::LpStatus::infeasible);

    ratlin::LpProblem unb;
    unb.c = vec({1, 1});
    unb.a = {vec({1, -1})};
    unb.b = vec({0});
    CHECK(ratlin::solve_lp(unb).status == ratlin::LpStatus::unbounded);
}

TEST_CASE("lp: random problems satisfy exact strong duality") {
    std::mt19937 rng(2024);
    int optimal = 0;
    for (int t = 0; t < 80; ++t) {
        const std::size_t n = 1 + rng() % 4, rows = 1 + rng() % 5, eqs = rng() % 2;
        ratlin::LpProblem p;
        p.c = random_matrix(rng, 1, n, -3, 3)[0];
        p.a = random_matrix(rng, rows, n, -3, 3);
        p.b = random_matrix(rng, 1, rows, 0, 4)[0];
        for (std::size_t i = 0; i < n; ++i)  // box keeps the problem bounded
            for (int s : {1, -1}) {
                Vec row(n, Rational(0));
                row[i] = s;
                p.a.push_back(row);
                p.b.push_back(5);
            }
        if (eqs) {
            p.e = random_matrix(rng, 1, n, -2, 2);
            p.f = vec({0});
        }
        auto s = ratlin::solve_lp(p);
        if (s.status != ratlin::LpStatus::optimal) continue;
        ++optimal;
        CHECK(ratlin::dot(p.c, s.x) == s.objective);
        Rational dual_obj = ratlin::dot(p.b, s.dual_ineq);
        if (!p.f.empty()) dual_obj += ratlin::dot(p.f, s.dual_eq);
        CHECK(dual_obj == s.objective);
        for (std::size_t i = 0; i < p.a.size(); ++i) {
            const Rational slack = p.b[i] - ratlin::dot(p.a[i], s.x);
            CHECK(slack >= 0);
            CHECK(s.dual_ineq[i] >= 0);
            CHECK(slack * s.dual_ineq[i] == 0);
        }
        for (std::size_t i = 0; i < p.e.size(); ++i) CHECK(ratlin::dot(p.e[i], s.x) == p.f[i]);
        for (std::size_t j = 0; j < n; ++j) {  // A^T y + E^T z = c
            Rational col = 0;
            for (std::size_t i = 0; i < p.a.size(); ++i) col += p.a[i][j] * s.dual_ineq[i];
            for (std::size_t i = 0; i < p.e.size(); ++i) col += p.e[i][j] * s.dual_eq[i];
            CHECK(col == p.c[j]);
        }
    }
    CHECK(optimal > 40);
}

}  // TEST_SUITE
