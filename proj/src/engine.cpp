#include "hstab/engine.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hstab::engine {

using basiskit::CertEntry;
using basiskit::CertGroup;
using basiskit::CertMode;
using models::Monomial;

Vec make_rho(const Vec& v, bool project) {
    Rational sum = 0;
    for (const auto& q : v) sum += q;
    if (sgn(sum) == 0) return v;
    if (!project) throw std::invalid_argument("rho is not traceless (sum " + ratlin::to_string(sum) + ")");
    Vec out = v;
    const Rational mean = sum / Rational(static_cast<long>(v.size()));
    for (auto& q : out) q -= mean;
    return out;
}

Vec parse_rho(const std::string& text, std::size_t n, bool project) {
    Vec v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(ratlin::parse_rational(item));
    if (v.size() != n)
        throw std::invalid_argument("rho has " + std::to_string(v.size()) + " entries, model has " +
                                    std::to_string(n) + " variables");
    return make_rho(v, project);
}

// ---------------------------------------------------------------------------

GreedyOracle::GreedyOracle(const CurveModel& model, int m)
    : m_(m), nvars_(model.num_vars()), target_(model.hilbert_dim(m)) {
    monos_ = models::all_monomials(nvars_, m);
    std::vector<const Vec*> imgs;
    imgs.reserve(monos_.size());
    for (const auto& mono : monos_) imgs.push_back(&model.image(mono));
    const std::size_t dim = imgs.empty() ? 0 : imgs[0]->size();

    std::vector<std::size_t> parent(dim);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto* v : imgs) {
        std::size_t first = dim;
        for (std::size_t i = 0; i < dim; ++i) {
            if (sgn((*v)[i]) == 0) continue;
            if (first == dim) first = i;
            else parent[find(i)] = find(first);
        }
    }
    std::map<std::size_t, std::size_t> block_id;
    std::vector<std::size_t> local_pos(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        auto [it, fresh] = block_id.emplace(find(i), block_dim_.size());
        if (fresh) block_dim_.push_back(0);
        local_pos[i] = block_dim_[it->second]++;
    }
    block_of_.assign(monos_.size(), SIZE_MAX);
    local_.resize(monos_.size());
    for (std::size_t t = 0; t < monos_.size(); ++t) {
        const Vec& v = *imgs[t];
        for (std::size_t i = 0; i < dim; ++i) {
            if (sgn(v[i]) == 0) continue;
            const std::size_t b = block_id.at(find(i));
            if (block_of_[t] == SIZE_MAX) {
                block_of_[t] = b;
                local_[t].assign(block_dim_[b], Rational(0));
            }
            local_[t][local_pos[i]] = v[i];
        }
    }
}

GreedyResult GreedyOracle::min_basis(const Vec& rho) const {
    if (rho.size() != nvars_) throw ratlin::DimensionError("rho length does not match the model");
    std::vector<Rational> w(monos_.size());
    for (std::size_t t = 0; t < monos_.size(); ++t) {
        Rational s = 0;
        for (std::size_t i = 0; i < nvars_; ++i)
            if (monos_[t][i] != 0 && sgn(rho[i]) != 0) s += monos_[t][i] * rho[i];
        w[t] = s;
    }
    std::vector<std::size_t> order(monos_.size());
    std::iota(order.begin(), order.end(), 0);
    // monos_ is already in descending lex order, which breaks ties
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });

    std::vector<std::optional<ratlin::EchelonState>> states(block_dim_.size());
    GreedyResult out;
    out.basis.m = m_;
    out.form = WeightForm(nvars_);
    out.weight = 0;
    std::size_t rank = 0;
    for (auto t : order) {
        if (rank == target_) break;
        const std::size_t b = block_of_[t];
        if (b == SIZE_MAX) continue;
        if (!states[b]) states[b].emplace(block_dim_[b]);
        ++out.rank_ops;
        if (!states[b]->try_insert(local_[t])) continue;
        ++rank;
        out.basis.monomials.push_back(monos_[t]);
        out.weight += w[t];
        for (std::size_t i = 0; i < nvars_; ++i) out.form.coef[i] += monos_[t][i];
    }
    if (rank != target_)
        throw std::logic_error("monomial images span " + std::to_string(rank) + " dimensions, expected " +
                               std::to_string(target_));
    return out;
}

GreedyResult greedy_min_basis(const CurveModel& model, int m, const Vec& rho) {
    return GreedyOracle(model, m).min_basis(rho);
}

// ---------------------------------------------------------------------------

std::string status_name(Status s) {
    switch (s) {
        case Status::Stable: return "Stable";
        case Status::StrictlySemistable: return "StrictlySemistable";
        case Status::NonSemistable: return "NonSemistable";
        case Status::Undecided: return "Undecided";
    }
    return "?";
}

nlohmann::json Verdict::to_json(bool timing) const {
    nlohmann::json j;
    j["status"] = status_name(status);
    j["margin"] = ratlin::to_string(margin);
    nlohmann::json w = nlohmann::json::object();
    if (status == Status::NonSemistable || status == Status::StrictlySemistable) {
        w["rho"] = ratlin::to_json(rho);
        w["min_weight"] = ratlin::to_string(rho_weight);
        w["basis"] = rho_basis;
    }
    if (certificate) {
        basiskit::CertVerdict cv;
        if (cert_check) cv = *cert_check;
        w["certificate"] = basiskit::certificate_to_json(*certificate, cert_check ? &cv : nullptr);
    }
    j["witness"] = w;
    j["cuts_used"] = cuts_used;
    j["lp_solves"] = lp_solves;
    if (!note.empty()) j["note"] = note;
    if (timing) j["runtime_ms"] = runtime_ms;
    return j;
}

namespace {

class CutPool {
public:
    bool add(Cut c) {
        if (!seen_.insert(c.form.coef).second) return false;
        cuts_.push_back(std::move(c));
        return true;
    }
    const std::vector<Cut>& cuts() const { return cuts_; }
    std::size_t size() const { return cuts_.size(); }

private:
    std::vector<Cut> cuts_;
    std::set<Vec> seen_;
};

Rational min_over(const CutPool& pool, const Vec& rho) {
    Rational best = pool.cuts()[0].form.eval(rho);
    for (const auto& c : pool.cuts()) best = std::min(best, c.form.eval(rho));
    return best;
}

struct MasterResult {
    Rational value;  // max of min_{cuts} <v, rho> over the normalized region
    Vec rho;
    Vec y;           // convex multipliers on the cuts
};

// Reads rho from the equality duals and checks it against the primal value.
Vec recover_rho(const ratlin::LpSolution& sol, const CutPool& pool, std::size_t n, const Rational& value,
                const std::function<bool(const Vec&)>& admissible) {
    for (int s : {1, -1}) {
        Vec rho(n);
        for (std::size_t i = 0; i < n; ++i) rho[i] = sol.dual_eq[i + 1] * s;
        Rational sum = 0;
        for (const auto& q : rho) sum += q;
        if (sgn(sum) != 0 || !admissible(rho)) continue;
        if (min_over(pool, rho) == value) return rho;
    }
    throw std::logic_error("master LP duals do not give an optimal rho");
}

// max t  s.t. t <= <v_B, rho>, sum rho = 0, |rho_i| <= 1, solved in the dual:
// min sum(s+ + s-) over convex y with  sum y_B v_B - alpha 1 - s+ + s- = 0.
MasterResult solve_box(const CutPool& pool, std::size_t n) {
    const std::size_t K = pool.size();
    const std::size_t ncol = K + 1 + 2 * n;
    ratlin::LpProblem p;
    p.c.assign(ncol, Rational(0));
    p.nonneg.assign(ncol, true);
    p.nonneg[K] = false;
    for (std::size_t i = 0; i < 2 * n; ++i) p.c[K + 1 + i] = -1;
    p.e.assign(n + 1, Vec(ncol, Rational(0)));
    p.f.assign(n + 1, Rational(0));
    for (std::size_t b = 0; b < K; ++b) {
        p.e[0][b] = 1;
        for (std::size_t i = 0; i < n; ++i) p.e[i + 1][b] = pool.cuts()[b].form.coef[i];
    }
    p.f[0] = 1;
    for (std::size_t i = 0; i < n; ++i) {
        p.e[i + 1][K] = -1;
        p.e[i + 1][K + 1 + i] = -1;
        p.e[i + 1][K + 1 + n + i] = 1;
    }
    auto sol = ratlin::solve_lp(p);
    if (sol.status != ratlin::LpStatus::optimal)
        throw std::logic_error(std::string("box master LP ") + ratlin::to_string(sol.status));
    MasterResult r;
    r.value = -sol.objective;
    r.rho = recover_rho(sol, pool, n, r.value, [](const Vec& rho) {
        return std::all_of(rho.begin(), rho.end(), [](const Rational& q) { return abs(q) <= 1; });
    });
    r.y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(K));
    return r;
}

// max t  s.t. t <= <v_B, rho>, sum rho = 0, rho_v = -1, solved in the dual:
// max beta over convex y with  sum y_B v_B = alpha 1 + beta e_v;  t* = -beta*.
MasterResult solve_pointed(const CutPool& pool, std::size_t n, std::size_t v) {
    const std::size_t K = pool.size();
    const std::size_t ncol = K + 2;
    ratlin::LpProblem p;
    p.c.assign(ncol, Rational(0));
    p.c[K + 1] = 1;
    p.nonneg.assign(ncol, true);
    p.nonneg[K] = p.nonneg[K + 1] = false;
    p.e.assign(n + 1, Vec(ncol, Rational(0)));
    p.f.assign(n + 1, Rational(0));
    for (std::size_t b = 0; b < K; ++b) {
        p.e[0][b] = 1;
        for (std::size_t i = 0; i < n; ++i) p.e[i + 1][b] = pool.cuts()[b].form.coef[i];
    }
    p.f[0] = 1;
    for (std::size_t i = 0; i < n; ++i) p.e[i + 1][K] = -1;
    p.e[v + 1][K + 1] = -1;
    auto sol = ratlin::solve_lp(p);
    if (sol.status != ratlin::LpStatus::optimal)
        throw std::logic_error(std::string("pointed master LP ") + ratlin::to_string(sol.status));
    MasterResult r;
    r.value = -sol.objective;
    r.rho = recover_rho(sol, pool, n, r.value, [v](const Vec& rho) { return rho[v] == -1; });
    r.y.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(K));
    return r;
}

std::vector<CertEntry> entries_from(const CutPool& pool, const Vec& y) {
    std::vector<CertEntry> out;
    for (std::size_t b = 0; b < y.size(); ++b) {
        if (sgn(y[b]) == 0) continue;
        CertEntry e;
        e.coefficient = y[b];
        e.form = pool.cuts()[b].form;
        e.family = "basis";
        e.params = {{"monomials", pool.cuts()[b].label}};
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace

Verdict decide_with_oracle(std::size_t n, const MinOracle& oracle, std::vector<Cut> initial,
                           const DecideOptions& opt) {
    const auto start = std::chrono::steady_clock::now();
    Verdict out;
    auto finish = [&](Verdict& v) -> Verdict& {
        v.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return v;
    };
    CutPool pool;
    for (auto& c : initial) pool.add(std::move(c));
    if (pool.size() == 0) pool.add(oracle(Vec(n, Rational(0)), out.rank_ops));

    // Column generation on one master; returns false when a budget runs out.
    auto generate = [&](const std::function<MasterResult()>& solve, MasterResult& res, Cut& at) {
        std::optional<Rational> prev;
        for (;;) {
            if (pool.size() > opt.max_cuts || out.rank_ops > opt.max_rank_ops) return false;
            res = solve();
            ++out.lp_solves;
            if (prev && res.value > *prev) throw std::logic_error("master LP value increased after a cut");
            prev = res.value;
            at = oracle(res.rho, out.rank_ops);
            if (at.form.eval(res.rho) >= res.value) return true;
            if (!pool.add(at)) throw std::logic_error("oracle returned a known cut below the LP value");
        }
    };
    auto budget_out = [&]() -> Verdict& {
        out.status = Status::Undecided;
        out.note = "budget exceeded";
        out.cuts_used = pool.size();
        return finish(out);
    };

    MasterResult box;
    Cut at;
    if (!generate([&] { return solve_box(pool, n); }, box, at)) return budget_out();
    if (sgn(box.value) > 0) {
        out.status = Status::NonSemistable;
        out.margin = box.value;
        out.rho = box.rho;
        out.rho_weight = at.form.eval(box.rho);
        out.rho_basis = at.label;
        out.cuts_used = pool.size();
        return finish(out);
    }
    // Phase A cut set now contains a combination equal to a multiple of 1.
    Certificate semi;
    semi.mode = CertMode::semistable;
    semi.groups.push_back({-1, entries_from(pool, box.y)});

    Certificate pointed;
    pointed.mode = CertMode::stable_pointed;
    std::optional<Rational> worst;
    for (std::size_t v = 0; v < n; ++v) {
        MasterResult res;
        if (!generate([&] { return solve_pointed(pool, n, v); }, res, at)) return budget_out();
        if (sgn(res.value) == 0) {
            out.status = Status::StrictlySemistable;
            out.margin = 0;
            out.certificate = semi;
            out.rho = res.rho;
            out.rho_weight = at.form.eval(res.rho);
            out.rho_basis = at.label;
            out.cuts_used = pool.size();
            return finish(out);
        }
        if (!worst || res.value > *worst) worst = res.value;
        pointed.groups.push_back({static_cast<int>(v), entries_from(pool, res.y)});
    }
    out.status = Status::Stable;
    out.margin = *worst;
    out.certificate = pointed;
    out.cuts_used = pool.size();
    return finish(out);
}

namespace {

std::vector<std::string> labels(const CurveModel& model, const BasisCandidate& b) {
    std::vector<std::string> out;
    for (const auto& mono : b.monomials) out.push_back(model.monomial_string(mono));
    return out;
}

}  // namespace

Verdict decide(const CurveModel& model, int m, const DecideOptions& opt) {
    GreedyOracle oracle(model, m);
    MinOracle f = [&](const Vec& rho, std::size_t& ops) {
        auto r = oracle.min_basis(rho);
        ops += r.rank_ops;
        return Cut{r.form, labels(model, r.basis)};
    };
    Verdict v = decide_with_oracle(model.num_vars(), f, {}, opt);
    if (v.certificate) {
        v.cert_check = basiskit::verify_certificate(model, m, *v.certificate);
        if (!v.cert_check->ok) throw std::logic_error("engine certificate failed: " + v.cert_check->reason);
    }
    return v;
}

DestabCheck check_destabilizer(const CurveModel& model, int m, const Vec& rho) {
    if (rho.size() != model.num_vars()) throw ratlin::DimensionError("rho length does not match the model");
    if (ratlin::is_zero(rho)) throw std::invalid_argument("rho must be nonzero");
    make_rho(rho, false);
    auto r = greedy_min_basis(model, m, rho);
    return {sgn(r.weight) > 0, r.weight, r.basis};
}

// ---------------------------------------------------------------------------

BruteState brute_force_state(const CurveModel& model, int m, std::size_t cap) {
    const auto monos = models::all_monomials(model.num_vars(), m);
    const std::size_t N = model.hilbert_dim(m);
    const auto subsets = ratlin::binomial(monos.size(), N);
    if (subsets > Integer(static_cast<unsigned long>(cap)))
        throw std::runtime_error("brute force refused: " + subsets.get_str() + " subsets exceed cap " +
                                 std::to_string(cap));
    BruteState st;
    st.subsets = subsets.get_ui();
    std::vector<const Vec*> imgs;
    for (const auto& mono : monos) imgs.push_back(&model.image(mono));
    const std::size_t dim = imgs.empty() ? 0 : imgs[0]->size();
    std::set<Vec> found;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t, const ratlin::EchelonState&)> dfs = [&](std::size_t from,
                                                                            const ratlin::EchelonState& s) {
        if (chosen.size() == N) {
            ++st.bases;
            Vec w(model.num_vars(), Rational(0));
            for (auto t : chosen)
                for (std::size_t i = 0; i < w.size(); ++i) w[i] += monos[t][i];
            found.insert(std::move(w));
            return;
        }
        for (std::size_t t = from; t + (N - chosen.size()) <= monos.size(); ++t) {
            ratlin::EchelonState next = s;
            if (!next.try_insert(*imgs[t])) continue;
            chosen.push_back(t);
            dfs(t + 1, next);
            chosen.pop_back();
        }
    };
    dfs(0, ratlin::EchelonState(dim));
    for (const auto& v : found) st.vectors.emplace_back(v);
    return st;
}

Rational brute_min_weight(const BruteState& s, const Vec& rho) {
    if (s.vectors.empty()) throw std::invalid_argument("empty state");
    Rational best = s.vectors[0].eval(rho);
    for (const auto& w : s.vectors) best = std::min(best, w.eval(rho));
    return best;
}

Verdict decide_state(const BruteState& s, std::size_t nvars) {
    MinOracle f = [&](const Vec& rho, std::size_t&) {
        const WeightForm* best = &s.vectors.at(0);
        for (const auto& w : s.vectors)
            if (w.eval(rho) < best->eval(rho)) best = &w;
        return Cut{*best, {}};
    };
    std::vector<Cut> all;
    for (const auto& w : s.vectors) all.push_back({w, {}});
    return decide_with_oracle(nvars, f, std::move(all));
}

Rational slope(int g, int m) {
    if (g < 2 || m < 2) throw std::invalid_argument("slope needs g >= 2 and m >= 2");
    const Rational G(g), M(m);
    return Rational(8) + Rational(4) / G - Rational(2 * (g - 1)) / (G * M) + Rational(2) / (G * M * (M - 1));
}

Rational bielliptic_bound(int g, int m) {
    return Rational((g - 1) * (m * (g + 1) - 2 * m * m - g));
}

}  // namespace hstab::engine
