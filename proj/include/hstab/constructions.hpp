#pragma once
// Explicit basis families and certificates for the ribbon, double-A, rosary
// and Wiman models, each paired with its closed-form weight.

#include <optional>
#include <string>
#include <vector>

#include "hstab/basiskit.hpp"
#include "hstab/engine.hpp"

namespace hstab::constructions {

using basiskit::BasisCandidate;
using basiskit::BasisVerdict;
using basiskit::Certificate;
using basiskit::Expr;
using basiskit::WeightForm;
using models::CurveModel;
using models::Monomial;
using ratlin::Integer;
using ratlin::Rational;
using ratlin::Vec;

/// Family id plus parameters. Unused fields are ignored by a given family.
struct FamilySpec {
    std::string family;  // e.g. "ribbon:Bminus", "wiman:TypeII"
    int g = 0;
    int m = 0;
    int k = 0;  // x-degree for wiman:S / wiman:Su / wiman:Piece, n-k index for kempf
    int n = 0;  // kempf n
    int s = 1;
    int i = 0;
    int j = 0;
    int u = 0;
    Rational eps = 0;
    Rational delta = 0;

    nlohmann::json to_json() const;
};

struct Family {
    Expr expr;
    WeightForm expected;  // closed form; empty when the family has none
    std::string id;
};

/// Dispatch by family id (see family_ids()).
Family build_family(const FamilySpec& spec);
std::vector<std::string> family_ids();
/// The model a family lives on (kempf families use a rational normal curve
/// stand-in and return nullopt).
std::optional<CurveModel> family_model(const FamilySpec& spec);

// --- ribbon ----------------------------------------------------------------

/// name in {Bplus2, Bminus2, B1plus, B2plus, Bminus}.
Family ribbon_family(int g, int m, const std::string& name);
Certificate ribbon_certificate(int g, int m);

// --- double-A --------------------------------------------------------------

/// name in {B1, B2} (m = 2); {T, iT, S, iS} with s; {plus, minus}
/// aggregates for any m >= 2.
Family acurve_chi_family(int k, int m, const std::string& name, int s = 1);
/// Mixed monomials, one per weighted degree in the chi range, independent.
BasisVerdict is_chi_basis(const CurveModel& model, int m, const std::vector<Monomial>& monos);
BasisCandidate acurve_nonpositive_basis(int k, int m, const Vec& rho);

// --- rosaries --------------------------------------------------------------

/// name in {B1plus, B2plus, B1minus, B2minus}.
Family rosary2_family(int g, int m, const std::string& name);
Certificate rosary2_certificate(int g, int m);

/// name in {Bplus, Bminus}.
Family rosary1_family(int g, int m, const std::string& name);

struct RosaryVerdict {
    bool semistable = false;
    std::string source;  // "construction", "engine" or "destabilizer"
    std::optional<Certificate> certificate;
    Vec rho;
    Rational min_weight;
    Rational bound;
    BasisCandidate basis;
};
RosaryVerdict rosary1_decide(int g, int m);

// --- Wiman -----------------------------------------------------------------

/// c[i][j] = C(i+j, i) C(n+m-i-j, n-i).
std::vector<std::vector<Integer>> path_lemma_multiset(int n, int m);
struct PathBalance {
    bool degree_uniform = false;
    bool x_uniform = false;
    bool y_uniform = false;
    bool ok() const { return degree_uniform && x_uniform && y_uniform; }
};
PathBalance check_path_balance(const std::vector<std::vector<Integer>>& c);

/// Quadratic multibasis of span{z^i : k <= i <= 2n-k} in x_0..x_n, with the
/// variables placed at indices 0..n of an nvars-long exponent vector.
Expr kempf_multibasis(int n, int k, std::size_t nvars = 0);
/// 2(2n-2k+1)/(n+1) on x_0..x_n.
WeightForm kempf_expected(int n, int k, std::size_t nvars);
/// Every member of kempf_multibasis has one monomial per z-degree in [k, 2n-k].
bool kempf_member_ok(int n, int k, const BasisCandidate& c);

/// Feasible range of the pointed term of a Type II piece.
struct PieceBound {
    Rational eps_max;    // at k = 3 for the x-variable i
    Rational delta_max;  // at k = 2 for the y-variable j
};
PieceBound wiman_piece_bounds(int g, int m, int i, int j);

/// name in {S, Su, Piece, TypeI, TypeII, ExampleV, M2TypeII}.
Family wiman_family(const FamilySpec& spec);
Certificate wiman_certificate(int g, int m);
BasisCandidate wiman_negative_basis(int g, int m, const Vec& rho);

/// Lambda/N coefficients of a Type I / Type II form.
Rational wiman_type1_lambda(int g, int m);
Rational wiman_type1_n(int g, int m);
Rational wiman_type2_a(int g, int m, const Rational& eps);
Rational wiman_type2_b(int g, int m, const Rational& delta);

}  // namespace hstab::constructions
