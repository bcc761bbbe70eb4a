#pragma once
// Monomial-basis candidates, lazy multibasis expression trees, weight forms
// and certificate checking.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hstab/models.hpp"

namespace hstab::basiskit {

using models::CurveModel;
using models::Monomial;
using ratlin::Integer;
using ratlin::Rational;

struct BasisCandidate {
    std::vector<Monomial> monomials;
    int m = 0;

    std::size_t size() const { return monomials.size(); }
};

nlohmann::json candidate_to_json(const CurveModel& model, const BasisCandidate& c);

/// Covector in the rho-variables.
struct WeightForm {
    ratlin::Vec coef;

    WeightForm() = default;
    explicit WeightForm(std::size_t n) : coef(n, Rational(0)) {}
    explicit WeightForm(ratlin::Vec c) : coef(std::move(c)) {}

    std::size_t size() const { return coef.size(); }
    Rational eval(const ratlin::Vec& rho) const { return ratlin::dot(coef, rho); }
    WeightForm& operator+=(const WeightForm& o);
    WeightForm operator+(const WeightForm& o) const;
    WeightForm operator-(const WeightForm& o) const;
    WeightForm operator*(const Rational& s) const;
    friend bool operator==(const WeightForm& a, const WeightForm& b) { return a.coef == b.coef; }
    friend bool operator!=(const WeightForm& a, const WeightForm& b) { return a.coef != b.coef; }
};

WeightForm weight_form(const BasisCandidate& c, std::size_t nvars);
WeightForm weight_form_on_hyperplane(const WeightForm& w);
bool equal_on_hyperplane(const WeightForm& a, const WeightForm& b);
/// If w is s*e_v on the hyperplane, returns s.
std::optional<Rational> pointed_multiple(const WeightForm& w, std::size_t v);
/// If w is s*(sum of e_v over vs) on the hyperplane, returns s.
std::optional<Rational> multiple_of(const WeightForm& w, const std::vector<std::size_t>& vs);
std::string form_string(const CurveModel& model, const WeightForm& w);

// ---------------------------------------------------------------------------

struct BasisVerdict {
    bool ok = false;
    std::string reason;
    std::vector<Monomial> witness;  // duplicate pair or minimal dependent subset
};

/// |candidate| = hilbert_dim and images independent.
BasisVerdict is_monomial_basis(const CurveModel& model, int m, const BasisCandidate& c);
/// Images independent (no cardinality requirement).
BasisVerdict is_independent(const CurveModel& model, int m, const std::vector<Monomial>& monos);

// ---------------------------------------------------------------------------

enum class NodeKind { Leaf, Concat, Scale, Sum, Times };

struct Node;
using Expr = std::shared_ptr<const Node>;

/// Immutable multibasis expression node. Every node knows its weight form,
/// its number of distinct members and the number of monomials per member,
/// so nothing is materialized to evaluate a form.
struct Node {
    NodeKind kind = NodeKind::Leaf;
    std::string label;
    std::vector<Monomial> leaf;
    std::vector<Expr> children;
    std::vector<Integer> mult;  // Concat multiplicities
    Integer scale = 1;          // Scale factor
    Monomial factor;            // Times factor

    std::size_t nvars = 0;
    int degree = 0;          // -1 for an empty leaf
    std::size_t width = 0;   // monomials per member
    WeightForm form;
    Integer count = 1;       // distinct members
};

Expr make_leaf(std::vector<Monomial> monos, std::size_t nvars, std::string label = "");
Expr make_concat(std::vector<Expr> children, std::vector<Integer> mult, std::string label = "");
/// Concat with positive rational weights (denominators cleared); zero-weight
/// children are dropped.
Expr make_concat_weighted(const std::vector<Expr>& children, const std::vector<Rational>& w,
                          std::string label = "");
Expr make_scale(Integer d, Expr child);
/// Pairwise-union family of multibases of independent subspaces. When a
/// model is given, rank additivity is checked on the first members.
Expr make_sum(std::vector<Expr> children, std::string label = "",
              const CurveModel* model = nullptr);
Expr make_times(Monomial factor, Expr child, std::string label = "");

const WeightForm& multibasis_weight_form(const Expr& e);
Integer member_count(const Expr& e);
/// Member by mixed-radix index; `path` (if given) receives the tree path.
BasisCandidate member(const Expr& e, const Integer& index, std::string* path = nullptr);
BasisCandidate extract_member(const Expr& e, const ratlin::Vec& rho, std::string* path = nullptr);

struct MultibasisReport {
    bool ok = true;
    bool exhaustive = true;
    std::size_t checked = 0;
    Integer total;
    std::vector<std::string> failures;
    nlohmann::json to_json() const;
};

/// Verifies every member when there are at most `budget`, otherwise a
/// deterministic sample of `budget` members plus the members extracted at
/// +-e_v for every variable v. `subspace_dim` overrides the expected member
/// size (for multibases of a subspace); members are then checked for
/// independence only.
MultibasisReport verify_multibasis(const CurveModel& model, int m, const Expr& e,
                                   std::size_t budget = 100000, std::uint64_t seed = 0,
                                   std::optional<std::size_t> subspace_dim = std::nullopt);

// ---------------------------------------------------------------------------

enum class CertMode { semistable, stable_pointed };

struct CertEntry {
    Rational coefficient;
    WeightForm form;
    std::string family;
    nlohmann::json params = nlohmann::json::object();
    Expr expr;  // optional, for member verification
};

struct CertGroup {
    int variable = -1;  // pointed variable, -1 in semistable mode
    std::vector<CertEntry> entries;
};

struct Certificate {
    CertMode mode = CertMode::semistable;
    std::vector<CertGroup> groups;
};

struct CertVerdict {
    bool ok = false;
    std::string reason;
    std::vector<WeightForm> residuals;  // canonical residual per group
    std::vector<Rational> epsilons;     // pointed multiples (stable-pointed mode)
};

CertVerdict verify_certificate(const CurveModel& model, int m, const Certificate& cert);
/// Checks members of every entry that carries an expression.
bool verify_certificate_members(const CurveModel& model, int m, const Certificate& cert,
                                std::size_t budget, std::string* detail = nullptr);

nlohmann::json certificate_to_json(const Certificate& cert, const CertVerdict* verdict = nullptr);
Certificate certificate_from_json(const nlohmann::json& j);

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace hstab::basiskit
