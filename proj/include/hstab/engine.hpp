#pragma once
// Torus stability decisions: exact greedy minimum-weight monomial bases and a
// cutting-plane loop over the state polytope.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hstab/basiskit.hpp"

namespace hstab::engine {

using basiskit::BasisCandidate;
using basiskit::Certificate;
using basiskit::WeightForm;
using models::CurveModel;
using ratlin::Integer;
using ratlin::Rational;
using ratlin::Vec;

/// Traceless rho. `project` subtracts the mean; otherwise a nonzero trace throws.
Vec make_rho(const Vec& v, bool project);
Vec parse_rho(const std::string& text, std::size_t n, bool project);

struct GreedyResult {
    BasisCandidate basis;
    Rational weight;
    WeightForm form;
    std::size_t rank_ops = 0;
};

/// Monomial images of one degree, split into blocks of coordinates that no
/// monomial connects, ready for repeated greedy calls.
class GreedyOracle {
public:
    GreedyOracle(const CurveModel& model, int m);

    GreedyResult min_basis(const Vec& rho) const;
    const std::vector<models::Monomial>& monomials() const { return monos_; }
    std::size_t target() const { return target_; }
    std::size_t num_blocks() const { return block_dim_.size(); }
    std::size_t nvars() const { return nvars_; }
    int degree() const { return m_; }

private:
    int m_;
    std::size_t nvars_;
    std::size_t target_;
    std::vector<models::Monomial> monos_;
    std::vector<std::size_t> block_of_;
    std::vector<Vec> local_;
    std::vector<std::size_t> block_dim_;
};

GreedyResult greedy_min_basis(const CurveModel& model, int m, const Vec& rho);

enum class Status { Stable, StrictlySemistable, NonSemistable, Undecided };
std::string status_name(Status s);

struct DecideOptions {
    std::size_t max_cuts = 10000;
    std::size_t max_rank_ops = 100000000;
};

struct Verdict {
    Status status = Status::Undecided;
    /// NonSemistable: max of the min basis weight over traceless rho in the
    /// unit box. Otherwise: max over v of the same with rho_v = -1 (zero
    /// exactly when some nonzero rho has a weight-0 basis).
    Rational margin;
    std::optional<Certificate> certificate;
    std::optional<basiskit::CertVerdict> cert_check;
    Vec rho;                 // destabilizer, or a weight-0 direction
    Rational rho_weight;
    std::vector<std::string> rho_basis;  // min-weight basis at rho
    std::size_t cuts_used = 0;
    std::size_t lp_solves = 0;
    std::size_t rank_ops = 0;
    double runtime_ms = 0;
    std::string note;

    nlohmann::json to_json(bool timing = false) const;
};

/// Minimizing oracle over bases: returns the weight vector of a basis of
/// least rho-weight plus a printable description of that basis.
struct Cut {
    WeightForm form;
    std::vector<std::string> label;
};
using MinOracle = std::function<Cut(const Vec& rho, std::size_t& rank_ops)>;

Verdict decide_with_oracle(std::size_t nvars, const MinOracle& oracle, std::vector<Cut> initial,
                           const DecideOptions& opt = {});

Verdict decide(const CurveModel& model, int m, const DecideOptions& opt = {});

struct DestabCheck {
    bool destabilizes = false;
    Rational min_weight;
    BasisCandidate basis;
};

DestabCheck check_destabilizer(const CurveModel& model, int m, const Vec& rho);

struct BruteState {
    std::vector<WeightForm> vectors;  // distinct, sorted
    std::size_t bases = 0;
    std::size_t subsets = 0;
};

/// Every monomial basis by exhaustive search. Refuses (throws) when the
/// number of N-subsets exceeds `cap`.
BruteState brute_force_state(const CurveModel& model, int m, std::size_t cap = 1000000);
Rational brute_min_weight(const BruteState& s, const Vec& rho);
/// Verdict of a fully known state, computed with the same margin definition
/// as decide().
Verdict decide_state(const BruteState& s, std::size_t nvars);

/// s_g^m of the GIT polarization.
Rational slope(int g, int m);
/// Lower bound (g-1)(m(g+1) - 2m^2 - g) on bielliptic basis weights at
/// rho = (-1, ..., -1, g-1).
Rational bielliptic_bound(int g, int m);

}  // namespace hstab::engine
