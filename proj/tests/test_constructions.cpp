#include <doctest.h>

#include <algorithm>
#include <random>

#include "hstab/constructions.hpp"

using namespace hstab;
using namespace hstab::constructions;
using basiskit::equal_on_hyperplane;
using basiskit::member;
using basiskit::WeightForm;
using models::Kind;
using models::Monomial;
using ratlin::Rational;
using ratlin::Vec;

namespace {

Rational q(long n, long d = 1) { return Rational(n) / Rational(d); }

// a (rho_0 + rho_2k) + b rho_k on the ribbon variables
WeightForm ribbon_form(int g, const Rational& a, const Rational& b) {
    WeightForm w(static_cast<std::size_t>(g));
    const auto k = static_cast<std::size_t>(g / 2);
    w.coef[0] = a;
    w.coef[2 * k] = a;
    w.coef[k] = b;
    return w;
}

// lam on x_0..x_{2g-2}, n on y_0..y_{g-3}
WeightForm wiman_form(int g, const Rational& lam, const Rational& n) {
    WeightForm w(static_cast<std::size_t>(3 * g - 3));
    for (int i = 0; i < 3 * g - 3; ++i) w.coef[static_cast<std::size_t>(i)] = i < 2 * g - 1 ? lam : n;
    return w;
}

std::vector<Monomial> sorted(std::vector<Monomial> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::vector<Monomial> parse_all(const models::CurveModel& model, int m, std::initializer_list<const char*> xs) {
    std::vector<Monomial> out;
    for (const char* s : xs) out.push_back(model.parse_monomial(s, m));
    return out;
}

Rational weight_at(const basiskit::BasisCandidate& c, const Vec& rho) {
    return basiskit::weight_form(c, rho.size()).eval(rho);
}

Vec random_traceless(std::mt19937& rng, std::size_t n) {
    std::uniform_int_distribution<int> d(-9, 9), den(1, 4);
    Vec v(n);
    Rational s = 0;
    for (auto& x : v) {
        x = Rational(d(rng)) / Rational(den(rng));
        s += x;
    }
    for (auto& x : v) x -= s / Rational(static_cast<long>(n));
    return v;
}

}  // namespace

TEST_SUITE("constructions") {

TEST_CASE("ribbon m=2 families") {
    auto model = models::build_model(Kind::Ribbon, 5);
    auto bp = ribbon_family(5, 2, "Bplus2");
    CHECK(member(bp.expr, 0).size() == 12);
    WeightForm three(5);
    three.coef = {3, 0, 3, 0, 3};
    CHECK(equal_on_hyperplane(bp.expr->form, three));
    for (int g = 3; g <= 15; g += 2) {
        auto m = models::build_model(Kind::Ribbon, g);
        auto p = ribbon_family(g, 2, "Bplus2"), n = ribbon_family(g, 2, "Bminus2");
        CHECK(basiskit::is_monomial_basis(m, 2, member(p.expr, 0)).ok);
        CHECK(basiskit::is_monomial_basis(m, 2, member(n.expr, 0)).ok);
        CHECK(equal_on_hyperplane(n.expr->form, ribbon_form(g, -2, -2)));
        auto cert = ribbon_certificate(g, 2);
        CHECK(cert.groups[0].entries[0].coefficient == 2);
        CHECK(cert.groups[0].entries[1].coefficient == g - 2);
        CHECK(basiskit::verify_certificate(m, 2, cert).ok);
    }
}

TEST_CASE("ribbon m>=3 closed forms") {
    for (int g = 3; g <= 11; g += 2) {
        auto model = models::build_model(Kind::Ribbon, g);
        for (int m = 3; m <= 6; ++m) {
            const long G = g, M = m;
            const auto b1 = ribbon_form(g, q(M * (M - 1) * (G - 1) - 2, 2), (M - 1) * (M - 1) * (G - 1) - (2 * M - 3));
            const auto b2 = ribbon_form(g, (M - 1) * (M - 1) * (G - 1) - (2 * M - 3), (M - 1) * (G - 1) + (2 * M - 5));
            const auto bm = M % 2 ? ribbon_form(g, -(M * M - 3 * M + 5), -(5 * M - 10))
                                  : ribbon_form(g, -(M * M - 3 * M + 6), -(5 * M - 12));
            auto f1 = ribbon_family(g, m, "B1plus"), f2 = ribbon_family(g, m, "B2plus"), fm = ribbon_family(g, m, "Bminus");
            CHECK(equal_on_hyperplane(f1.expr->form, b1));
            CHECK(equal_on_hyperplane(f2.expr->form, b2));
            CHECK(equal_on_hyperplane(fm.expr->form, bm));
            for (const auto* f : {&f1, &f2, &fm}) CHECK(basiskit::is_monomial_basis(model, m, member(f->expr, 0)).ok);
            CHECK(basiskit::verify_certificate(model, m, ribbon_certificate(g, m)).ok);
        }
    }
}

TEST_CASE("ribbon (7,3) certificate coefficients") {
    // forms on (rho_0 + rho_6, rho_3): B- = (-5, -5), B1+ = (17, 21), B2+ = (21, 13)
    auto cert = ribbon_certificate(7, 3);
    const auto& e = cert.groups[0].entries;
    REQUIRE(e.size() == 3);
    CHECK(e[0].family == "ribbon:Bminus");
    const Rational c0 = e[0].coefficient, c1 = e[1].coefficient, c2 = e[2].coefficient;
    CHECK(c0 * -5 + c1 * 17 + c2 * 21 == 0);
    CHECK(c0 * -5 + c1 * 21 + c2 * 13 == 0);
    CHECK(c0 > 0);
    CHECK(c1 > 0);
    CHECK(c2 > 0);
}

TEST_CASE("double-A chi families at m=2") {
    auto model = models::build_model(Kind::DoubleA, 4);
    auto b1 = acurve_chi_family(2, 2, "B1"), b2 = acurve_chi_family(2, 2, "B2");
    CHECK(sorted(member(b1.expr, 0).monomials) == sorted(parse_all(model, 2, {"x1*y1", "x1*y2", "x2*y1"})));
    CHECK(sorted(member(b2.expr, 0).monomials) == sorted(parse_all(model, 2, {"x2*y1", "x2*y2", "x1*y2"})));
    WeightForm lk(4);
    lk.coef = {0, 1, 0, 1};
    CHECK(equal_on_hyperplane(b1.expr->form, lk * Rational(-1)));
    CHECK(equal_on_hyperplane(b2.expr->form, lk));
    for (int k = 2; k <= 8; ++k) {
        auto f1 = acurve_chi_family(k, 2, "B1"), f2 = acurve_chi_family(k, 2, "B2");
        auto mk = models::build_model(Kind::DoubleA, 2 * k);
        CHECK(is_chi_basis(mk, 2, member(f1.expr, 0).monomials).ok);
        CHECK(is_chi_basis(mk, 2, member(f2.expr, 0).monomials).ok);
        CHECK(basiskit::weight_form_on_hyperplane(f1.expr->form * Rational(k - 1) + f2.expr->form) ==
              WeightForm(static_cast<std::size_t>(2 * k)));
    }
}

TEST_CASE("double-A chi families at m>=3") {
    for (int k = 2; k <= 5; ++k) {
        auto model = models::build_model(Kind::DoubleA, 2 * k);
        const std::vector<std::size_t> kk{static_cast<std::size_t>(k - 1), static_cast<std::size_t>(2 * k - 1)};
        for (int m = 2; m <= 4; ++m) {
            if (m >= 3)
                for (int s = 1; s < k; ++s)
                    for (const char* name : {"T", "iT", "S", "iS"}) {
                        auto f = acurve_chi_family(k, m, name, s);
                        auto c = member(f.expr, 0);
                        CHECK(c.size() == static_cast<std::size_t>(2 * k * (m - 1) - 1));
                        CHECK(is_chi_basis(model, m, c.monomials).ok);
                    }
            auto plus = basiskit::multiple_of(acurve_chi_family(k, m, "plus").expr->form, kk);
            auto minus = basiskit::multiple_of(acurve_chi_family(k, m, "minus").expr->form, kk);
            REQUIRE(plus.has_value());
            REQUIRE(minus.has_value());
            CHECK(*plus > 0);
            CHECK(*minus < 0);
        }
    }
    CHECK_THROWS(acurve_chi_family(3, 3, "T", 3));
}

TEST_CASE("double-A nonpositive bases") {
    std::mt19937 rng(11);
    auto m4 = models::build_model(Kind::DoubleA, 4);
    for (const Vec& rho : {Vec(4, Rational(0)), Vec{1, 1, -1, -1}, Vec{0, 1, 0, -1}}) {
        auto c = acurve_nonpositive_basis(2, 2, rho);
        CHECK(basiskit::is_monomial_basis(m4, 2, c).ok);
        CHECK(weight_at(c, rho) <= 0);
    }
    CHECK(weight_at(acurve_nonpositive_basis(2, 2, Vec(4, Rational(0))), Vec(4, Rational(0))) == 0);
    for (int k = 2; k <= 4; ++k) {
        auto model = models::build_model(Kind::DoubleA, 2 * k);
        for (int m = 2; m <= 3; ++m)
            for (int t = 0; t < 5; ++t) {
                const auto rho = random_traceless(rng, model.num_vars());
                auto c = acurve_nonpositive_basis(k, m, rho);
                CHECK(basiskit::is_monomial_basis(model, m, c).ok);
                CHECK(weight_at(c, rho) <= 0);
            }
    }
}

TEST_CASE("rosary bicanonical") {
    auto model = models::build_model(Kind::RosaryBicanonical, 5);
    const int g = 5;
    auto block = [&](long x, long y, long z) {
        WeightForm w(12);
        for (int i = 0; i < g - 1; ++i) {
            w.coef[static_cast<std::size_t>(i)] = x;
            w.coef[static_cast<std::size_t>(i + g - 1)] = y;
            w.coef[static_cast<std::size_t>(i + 2 * g - 2)] = z;
        }
        return w;
    };
    auto mean = [&](const char* a, const char* b) {
        return (rosary2_family(5, 2, a).expr->form + rosary2_family(5, 2, b).expr->form) * Rational(1, 2);
    };
    CHECK(equal_on_hyperplane(mean("B1plus", "B2plus"), block(5, 4, 5)));
    CHECK(equal_on_hyperplane(mean("B1minus", "B2minus"), block(4, 6, 4)));

    for (int gg = 3; gg <= 9; gg += 2)
        for (int m = 2; m <= 4; ++m) {
            auto mm = models::build_model(Kind::RosaryBicanonical, gg);
            auto cert = rosary2_certificate(gg, m);
            const auto& e = cert.groups[0].entries;
            REQUIRE(e.size() == 4);
            CHECK(e[0].coefficient * (2 * m * m - 5 * m + 3) == e[2].coefficient * (m * m - m));
            CHECK(e[0].coefficient == e[1].coefficient);
            CHECK(e[2].coefficient == e[3].coefficient);
            CHECK(basiskit::verify_certificate(mm, m, cert).ok);
            for (const auto& en : e) CHECK(basiskit::is_monomial_basis(mm, m, member(en.expr, 0)).ok);
        }
}

TEST_CASE("rosary canonical") {
    auto p = rosary1_family(7, 3, "Bplus"), n = rosary1_family(7, 3, "Bminus");
    const auto hp = basiskit::weight_form_on_hyperplane(p.expr->form);
    CHECK(hp != WeightForm(7));
    CHECK(basiskit::weight_form_on_hyperplane(n.expr->form) == hp * Rational(-13));

    auto p5 = rosary1_family(5, 2, "Bplus"), n5 = rosary1_family(5, 2, "Bminus");
    CHECK(equal_on_hyperplane(p5.expr->form, n5.expr->form));

    auto v73 = rosary1_decide(7, 3);
    CHECK(v73.semistable);
    CHECK(v73.source == "construction");
    REQUIRE(v73.certificate.has_value());
    auto model7 = models::build_model(Kind::RosaryCanonical, 7);
    CHECK(basiskit::verify_certificate(model7, 3, *v73.certificate).ok);
    const auto& e = v73.certificate->groups[0].entries;
    CHECK(e[0].coefficient * 1 == e[1].coefficient * 13);

    auto v52 = rosary1_decide(5, 2);
    CHECK(v52.semistable);
    CHECK(v52.source == "engine");
    REQUIRE(v52.certificate.has_value());
    CHECK(basiskit::verify_certificate(models::build_model(Kind::RosaryCanonical, 5), 2, *v52.certificate).ok);

    auto v93 = rosary1_decide(9, 3);
    CHECK_FALSE(v93.semistable);
    CHECK(v93.source == "destabilizer");
    CHECK(v93.bound == 24);
    CHECK(v93.min_weight >= 24);
    CHECK(v93.rho == Vec{-1, -1, -1, -1, -1, -1, -1, -1, 8});
}

TEST_CASE("path lemma multisets") {
    auto c11 = path_lemma_multiset(1, 1);
    CHECK(c11 == std::vector<std::vector<ratlin::Integer>>{{2, 1}, {1, 2}});
    for (int n = 0; n <= 5; ++n)
        for (const auto& row : path_lemma_multiset(n, 0)) CHECK(row == std::vector<ratlin::Integer>{1});
    auto c21 = path_lemma_multiset(2, 1);
    CHECK(c21[0][0] == 3);
    CHECK(c21[0][1] == 1);
    CHECK(c21[2][1] == 3);

    for (int n = 0; n <= 8; ++n)
        for (int m = 0; m <= 8; ++m) {
            auto c = path_lemma_multiset(n, m);
            ratlin::Integer total = 0;
            std::vector<ratlin::Integer> deg(static_cast<std::size_t>(n + m + 1), 0), row(n + 1, 0), col(m + 1, 0);
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= m; ++j) {
                    const auto& v = c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    CHECK(v == ratlin::binomial(i + j, i) * ratlin::binomial(n + m - i - j, n - i));
                    total += v;
                    deg[static_cast<std::size_t>(i + j)] += v;
                    row[static_cast<std::size_t>(i)] += v;
                    col[static_cast<std::size_t>(j)] += v;
                }
            for (const auto& d : deg) CHECK(d * (n + m + 1) == total);
            for (const auto& r : row) CHECK(r * (n + 1) == total);
            for (const auto& s : col) CHECK(s * (m + 1) == total);
            CHECK(check_path_balance(c).ok());
        }
    std::vector<std::vector<ratlin::Integer>> skew{{1, 1}, {1, 2}};
    CHECK_FALSE(check_path_balance(skew).ok());
}

TEST_CASE("kempf multibases") {
    // every member: one quadric x_a x_b per z-degree a+b in [k, 2n-k]
    auto member_ok = [](int n, int k, const basiskit::BasisCandidate& c) {
        std::vector<int> seen;
        for (const auto& mono : c.monomials) {
            int d = 0;
            for (std::size_t v = 0; v < mono.size(); ++v) d += static_cast<int>(v) * mono[v];
            seen.push_back(d);
        }
        std::sort(seen.begin(), seen.end());
        std::vector<int> want;
        for (int d = k; d <= 2 * n - k; ++d) want.push_back(d);
        return seen == want;
    };
    for (int n = 1; n <= 7; ++n)
        for (int k = 0; k <= n; ++k) {
            auto h = kempf_multibasis(n, k);
            const Rational per = q(2 * (2 * n - 2 * k + 1), n + 1);
            CHECK(h->form == WeightForm(Vec(static_cast<std::size_t>(n + 1), per)));
            const auto count = basiskit::member_count(h);
            for (long t = 0; t < 6; ++t) {
                ratlin::Integer idx = (count * t) / 6;
                auto c = member(h, idx);
                CHECK(member_ok(n, k, c));
                CHECK(kempf_member_ok(n, k, c));
            }
        }
    auto h20 = kempf_multibasis(2, 0);
    CHECK(h20->form == WeightForm(Vec(3, q(10, 3))));
    CHECK(h20->kind == basiskit::NodeKind::Concat);
    CHECK(h20->mult == std::vector<ratlin::Integer>{2, 1});
    auto h42 = kempf_multibasis(4, 2);
    CHECK(h42->mult == std::vector<ratlin::Integer>{4, 9});
}

TEST_CASE("Wiman Type I") {
    FamilySpec sp;
    sp.family = "wiman:TypeI";
    sp.g = 4;
    sp.m = 2;
    CHECK(wiman_family(sp).expr->form == wiman_form(4, q(34, 7), 4));
    for (int g = 3; g <= 7; ++g) {
        const long G = g;
        sp.g = g;
        sp.m = 2;
        CHECK(wiman_family(sp).expr->form == wiman_form(g, q(11 * G - 10, 2 * G - 1), q(3 * G - 4, G - 2)));
        for (int m = 2; m <= 4; ++m) {
            const long M = m;
            sp.m = m;
            const auto lam = q((4 * G - 4) * M * M - (3 * G - 3) * M + G, 2 * G - 1);
            const auto n = q((2 * G - 2) * M - G, G - 2);
            CHECK(wiman_family(sp).expr->form == wiman_form(g, lam, n));
            CHECK(wiman_type1_lambda(g, m) == lam);
            CHECK(wiman_type1_n(g, m) == n);
        }
    }
}

TEST_CASE("Wiman Type II") {
    for (int g = 3; g <= 6; ++g)
        for (int m = 2; m <= 4; ++m) {
            const long G = g, M = m;
            FamilySpec sp;
            sp.family = "wiman:TypeII";
            sp.g = g;
            sp.m = m;
            sp.j = g - 3;
            auto f = wiman_family(sp);
            const auto a = q((G + 1) * M * M + (2 * G - 2) * M - G, 2 * G - 1);
            const auto b = q((3 * G - 5) * M * M - (3 * G - 3) * M + G, G - 2);
            CHECK(f.expr->form == wiman_form(g, a, b));
            CHECK(a < b);
        }
    FamilySpec m2;
    m2.family = "wiman:M2TypeII";
    m2.g = 4;
    CHECK(wiman_family(m2).expr->form == wiman_form(4, 4, 7));

    // the pointed terms shift single coefficients
    FamilySpec sp;
    sp.family = "wiman:TypeII";
    sp.g = 4;
    sp.m = 3;
    sp.i = 2;
    sp.j = 1;
    const auto bounds = wiman_piece_bounds(4, 3, 2, 1);
    CHECK(bounds.eps_max > 0);
    CHECK(bounds.delta_max > 0);
    sp.eps = bounds.eps_max / 2;
    sp.delta = bounds.delta_max / 2;
    auto f = wiman_family(sp);
    CHECK(f.expr->form == f.expected);
    const auto& c = f.expr->form.coef;
    CHECK(c[2] - c[0] == sp.eps);
    CHECK(c[7 + 1] - c[7] == sp.delta);
    CHECK(basiskit::verify_multibasis(models::build_model(Kind::Wiman, 4), 3, f.expr, 40, 2).ok);

    sp.eps = bounds.eps_max + 1;
    CHECK_THROWS(wiman_family(sp));
}

TEST_CASE("Wiman balanced pieces") {
    for (int g = 3; g <= 5; ++g) {
        auto model = models::build_model(Kind::Wiman, g);
        for (int m = 1; m <= 3; ++m)
            for (int k = 0; k <= m; ++k) {
                FamilySpec sp;
                sp.family = "wiman:S";
                sp.g = g;
                sp.m = m;
                sp.k = k;
                auto f = wiman_family(sp);
                CHECK(f.expr->form == f.expected);
                const std::size_t dim = static_cast<std::size_t>((2 * g - 2) * k + (g - 3) * (m - k) + 1);
                CHECK(f.expr->width == dim);
                CHECK(basiskit::verify_multibasis(model, m, f.expr, 20, 1, dim).ok);
            }
    }
}

TEST_CASE("Wiman certificates") {
    auto c42 = wiman_certificate(4, 2);
    const auto& e = c42.groups[0].entries;
    REQUIRE(e.size() == 2);
    CHECK(e[1].coefficient / e[0].coefficient == q(2, 7));
    CHECK(basiskit::verify_certificate(models::build_model(Kind::Wiman, 4), 2, c42).ok);
    CHECK_THROWS_AS(wiman_certificate(3, 2), std::invalid_argument);

    auto model = models::build_model(Kind::Wiman, 3);
    auto c33 = wiman_certificate(3, 3);
    CHECK(c33.mode == basiskit::CertMode::stable_pointed);
    CHECK(c33.groups.size() == 6);
    auto v = basiskit::verify_certificate(model, 3, c33);
    CHECK(v.ok);
    REQUIRE(v.epsilons.size() == 6);
    for (const auto& eps : v.epsilons) CHECK(eps > 0);
}

TEST_CASE("Wiman negative bases") {
    auto model = models::build_model(Kind::Wiman, 3);
    const Vec rho{2, -1, -1, 0, 0, 0};
    auto c = wiman_negative_basis(3, 3, rho);
    CHECK(basiskit::is_monomial_basis(model, 3, c).ok);
    const auto w = weight_at(c, rho);
    CHECK(w < 0);
    CHECK(w >= engine::greedy_min_basis(model, 3, rho).weight);

    Vec ev(6, Rational(0));
    ev[4] = 1;
    ev[5] = -1;
    auto d = wiman_negative_basis(3, 3, ev);
    CHECK(weight_at(d, ev) < 0);
    CHECK_THROWS(wiman_negative_basis(3, 3, Vec(6, Rational(0))));
}

TEST_CASE("family dispatch") {
    FamilySpec sp;
    sp.family = "ribbon:Bminus";
    sp.g = 7;
    sp.m = 3;
    auto f = build_family(sp);
    CHECK(f.id == "ribbon:Bminus");
    CHECK(f.expr->form == ribbon_family(7, 3, "Bminus").expr->form);
    CHECK(family_model(sp)->name() == "ribbon(g=7)");
    sp.family = "kempf:H";
    sp.n = 3;
    sp.k = 1;
    CHECK_FALSE(family_model(sp).has_value());
    CHECK(build_family(sp).expr->form == kempf_expected(3, 1, 4));
    sp.family = "ribbon";
    CHECK_THROWS_AS(build_family(sp), std::invalid_argument);
    sp.family = "nope:B";
    CHECK_THROWS_AS(build_family(sp), std::invalid_argument);
    const auto ids = family_ids();
    CHECK(std::find(ids.begin(), ids.end(), "wiman:TypeII") != ids.end());
    sp.family = "wiman:TypeII";
    CHECK(sp.to_json()["family"] == "wiman:TypeII");
}

}  // TEST_SUITE
