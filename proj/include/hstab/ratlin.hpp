#pragma once
// Exact rational scalars, dense vectors/matrices, incremental echelon rank
// and a rational simplex solver with dual multipliers.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace hstab::ratlin {

// mpq_class keeps every value canonical (lowest terms, positive denominator)
// after each arithmetic operation.
using Rational = mpq_class;
using Integer = mpz_class;
using Vec = std::vector<Rational>;
using Matrix = std::vector<Vec>;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);  // throws std::invalid_argument

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const Matrix& m);
Vec vec_from_json(const nlohmann::json& j);
Matrix matrix_from_json(const nlohmann::json& j);

Rational dot(const Vec& a, const Vec& b);
bool is_zero(const Vec& v);
Integer binomial(unsigned long n, unsigned long k);

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Row echelon form built one vector at a time.
///
/// Rows are kept in insertion order; each stored row has a leading 1 at its
/// pivot column and zeros at the pivot columns of all earlier rows, so
/// reducing a new vector against the rows in order is exact.
class EchelonState {
public:
    explicit EchelonState(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    const std::vector<Vec>& pivot_rows() const { return rows_; }
    const std::vector<std::size_t>& pivot_columns() const { return pivots_; }

    /// Returns true (accepted) iff v is independent of the current rows.
    bool try_insert(const Vec& v);

    /// v minus its projection onto the current span (along pivot columns).
    Vec reduce(Vec v) const;

    bool in_span(const Vec& v) const { return is_zero(reduce(v)); }

private:
    std::size_t dim_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivots_;
};

std::size_t rank(const Matrix& m);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Matrix& m);

/// Some x with A x = b (free variables set to zero), or nullopt if the
/// system is inconsistent.
std::optional<Vec> solve_linear(const Matrix& a, const Vec& b);

/// Basis of {x : A x = 0}.
Matrix nullspace(const Matrix& a, std::size_t ncols);

// ---------------------------------------------------------------------------
// Linear programming

enum class LpStatus { optimal, infeasible, unbounded };
const char* to_string(LpStatus s);

/// maximize c.x  subject to  A x <= b,  E x = f.
/// Variables are free unless flagged in `nonneg`.
struct LpProblem {
    Vec c;
    Matrix a;
    Vec b;
    Matrix e;
    Vec f;
    std::vector<bool> nonneg;  // empty means all free
};

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Vec x;
    Rational objective;
    Vec dual_ineq;  // one per row of A, nonnegative
    Vec dual_eq;    // one per row of E
    std::size_t pivots = 0;
};

LpSolution solve_lp(const LpProblem& p);

}  // namespace hstab::ratlin
