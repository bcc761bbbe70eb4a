#pragma once
// The five curve families and their restriction engines: every degree-m
// monomial in the distinguished sections maps to an exact coordinate vector
// of its image in H^0(C, O(m)).

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "hstab/ratlin.hpp"

namespace hstab::models {

using ratlin::Rational;
using SectionVector = ratlin::Vec;

enum class Kind { Ribbon, DoubleA, RosaryCanonical, RosaryBicanonical, Wiman };

std::string kind_name(Kind k);          // "ribbon", "doubleA", "rosary1", "rosary2", "wiman"
Kind parse_kind(const std::string& s);  // throws std::invalid_argument

struct Variable {
    std::string name;
    int index = 0;    // subscript in the name
    long weight = 0;  // torus weight (Wiman: character mod 4g+2)
    int aux_degree = 0;  // ribbon u-degree, double-A weighted degree, Wiman z-degree
    int aux_flag = 0;    // Wiman w-flag, rosary block (0 x/omega, 1 y/eta, 2 z)
};

/// Exponent vector of a monomial; the degree is the sum of the entries.
struct Monomial {
    std::vector<int> exps;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exps(std::move(e)) {}
    int degree() const;
    std::size_t size() const { return exps.size(); }
    int operator[](std::size_t i) const { return exps[i]; }
    Monomial operator*(const Monomial& o) const;
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return a.exps != b.exps; }
    friend bool operator<(const Monomial& a, const Monomial& b) { return a.exps < b.exps; }
};

/// Axis of the degree-m coordinatization. `a`,`b` are kind specific:
/// ribbon (u-degree, eps flag); double-A and rosary (component, Laurent
/// degree); Wiman (z-degree, w-flag).
struct Axis {
    int a = 0;
    int b = 0;
    friend bool operator<(const Axis& x, const Axis& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
    friend bool operator==(const Axis& x, const Axis& y) { return x.a == y.a && x.b == y.b; }
};

class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CurveModel {
public:
    CurveModel(Kind kind, int g);  // throws std::invalid_argument on bad (kind, g)

    Kind kind() const { return kind_; }
    int g() const { return g_; }
    int k() const { return k_; }  // ribbon g=2k+1, double-A g=2k, else 0
    const std::vector<Variable>& variables() const { return vars_; }
    std::size_t num_vars() const { return vars_.size(); }
    int var_index(const std::string& name) const;  // throws if unknown
    std::string name() const;  // e.g. "ribbon(g=7)"

    /// Torus weights are integers, except for Wiman where they live in
    /// Z/(4g+2); modulus() is 0 for honest integer weights.
    long modulus() const;

    std::size_t hilbert_dim(int m) const;

    /// Ordered coordinate axes of the degree-m section space.
    const std::vector<Axis>& axes(int m) const;
    std::string axis_label(int m, std::size_t i) const;
    long axis_weight(int m, std::size_t i) const;

    /// Image of a monomial (cached per exponent vector).
    const SectionVector& image(const Monomial& mono) const;

    /// Uncached expansion by multiplying the variables' local images.
    SectionVector expand(const Monomial& mono) const;

    /// Sum of variable torus weights (reduced mod modulus() if nonzero).
    long monomial_weight(const Monomial& mono) const;

    std::string monomial_string(const Monomial& mono) const;
    Monomial parse_monomial(const std::string& text, int m) const;  // "x0^2*y2"
    Monomial var_power(int var, int power) const;

    nlohmann::json descriptor() const;
    nlohmann::json image_table(int m) const;

private:
    using Poly = std::map<Axis, Rational>;

    Poly local(int var) const;
    Poly multiply(const Poly& p, const Poly& q) const;
    std::vector<Axis> make_axes(int m) const;

    Kind kind_;
    int g_;
    int k_ = 0;
    std::vector<Variable> vars_;

    struct Cache {
        std::mutex mu;
        std::map<int, std::vector<Axis>> axes;
        std::map<int, std::map<Axis, std::size_t>> axis_index;
        std::map<std::vector<int>, SectionVector> images;
    };
    std::shared_ptr<Cache> cache_;

    const std::map<Axis, std::size_t>& axis_index(int m) const;
};

CurveModel build_model(Kind kind, int g);
SectionVector expand_monomial(const CurveModel& model, const Monomial& mono);
std::size_t hilbert_dim(const CurveModel& model, int m);

/// All degree-m monomials in n variables, in descending lexicographic order
/// (x0^m first).
std::vector<Monomial> all_monomials(std::size_t n, int m);

/// Rank of a family of vectors; vectors with disjoint supports are split
/// into independent blocks first.
std::size_t blocked_rank(const std::vector<const SectionVector*>& vecs);

struct ModelCheck {
    std::string name;
    bool ok = true;
    std::string detail;
};

struct ModelReport {
    std::vector<ModelCheck> checks;
    bool ok() const;
    nlohmann::json to_json() const;
};

ModelReport verify_model(const CurveModel& model, int m_max);

}  // namespace hstab::models
