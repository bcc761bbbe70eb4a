#include "hstab/models.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace hstab::models {

using ratlin::Vec;

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Ribbon: return "ribbon";
        case Kind::DoubleA: return "doubleA";
        case Kind::RosaryCanonical: return "rosary1";
        case Kind::RosaryBicanonical: return "rosary2";
        case Kind::Wiman: return "wiman";
    }
    return "?";
}

Kind parse_kind(const std::string& s) {
    for (Kind k : {Kind::Ribbon, Kind::DoubleA, Kind::RosaryCanonical, Kind::RosaryBicanonical,
                   Kind::Wiman})
        if (kind_name(k) == s) return k;
    throw std::invalid_argument("unknown model kind '" + s +
                                "' (expected ribbon, doubleA, rosary1, rosary2, wiman)");
}

int Monomial::degree() const { return std::accumulate(exps.begin(), exps.end(), 0); }

Monomial Monomial::operator*(const Monomial& o) const {
    if (o.exps.size() != exps.size()) throw ratlin::DimensionError("monomial length mismatch");
    Monomial r(exps);
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += o.exps[i];
    return r;
}

namespace {

long mod_pos(long a, long n) { return ((a % n) + n) % n; }

int sign_pow(int i) { return i % 2 == 0 ? 1 : -1; }

}  // namespace

CurveModel::CurveModel(Kind kind, int g) : kind_(kind), g_(g), cache_(std::make_shared<Cache>()) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument(kind_name(kind) + " with g=" + std::to_string(g) + ": " + why);
    };
    switch (kind) {
        case Kind::Ribbon:
            if (g < 3 || g % 2 == 0) fail("ribbon requires odd g >= 3");
            k_ = (g - 1) / 2;
            for (int i = 0; i <= k_; ++i) vars_.push_back({"x" + std::to_string(i), i, i - k_, i, 0});
            for (int i = 1; i <= k_; ++i)
                vars_.push_back({"y" + std::to_string(k_ + i), k_ + i, i, k_ + i, 1});
            break;
        case Kind::DoubleA:
            if (g < 4 || g % 2 != 0) fail("double A-curve requires even g >= 4");
            k_ = g / 2;
            for (int i = 1; i <= k_; ++i) vars_.push_back({"x" + std::to_string(i), i, i, i, 0});
            for (int i = 1; i <= k_; ++i) vars_.push_back({"y" + std::to_string(i), i, -i, -i, 1});
            break;
        case Kind::RosaryCanonical:
            if (g < 5 || g % 2 == 0) fail("canonical rosary requires odd g >= 5");
            for (int i = 0; i <= g - 2; ++i)
                vars_.push_back({"omega" + std::to_string(i), i, sign_pow(i), 1, 0});
            vars_.push_back({"eta", g - 1, 0, 0, 1});
            break;
        case Kind::RosaryBicanonical:
            if (g < 3 || g % 2 == 0) fail("bicanonical rosary requires odd g >= 3");
            for (int i = 0; i <= g - 2; ++i) vars_.push_back({"x" + std::to_string(i), i, 2 * sign_pow(i), 2, 0});
            for (int i = 0; i <= g - 2; ++i) vars_.push_back({"y" + std::to_string(i), i, sign_pow(i), 1, 1});
            for (int i = 0; i <= g - 2; ++i) vars_.push_back({"z" + std::to_string(i), i, 0, 0, 2});
            break;
        case Kind::Wiman: {
            if (g < 3) fail("Wiman curve requires g >= 3");
            const long n = 4L * g + 2;
            for (int i = 0; i <= 2 * g - 2; ++i)
                vars_.push_back({"x" + std::to_string(i), i, mod_pos(2L * i - 4L * g + 2, n), i, 0});
            for (int j = 0; j <= g - 3; ++j)
                vars_.push_back({"y" + std::to_string(j), j, mod_pos(2L * j - 2L * g + 3, n), j, 1});
            break;
        }
    }
}

std::string CurveModel::name() const { return kind_name(kind_) + "(g=" + std::to_string(g_) + ")"; }

int CurveModel::var_index(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown variable '" + name + "' in " + this->name());
}

long CurveModel::modulus() const { return kind_ == Kind::Wiman ? 4L * g_ + 2 : 0; }

std::size_t CurveModel::hilbert_dim(int m) const {
    if (m < 1) throw std::invalid_argument("hilbert_dim requires m >= 1");
    const std::size_t g = static_cast<std::size_t>(g_);
    const std::size_t mm = static_cast<std::size_t>(m);
    switch (kind_) {
        case Kind::Ribbon:
        case Kind::RosaryCanonical:
            return m == 1 ? g : (2 * mm - 1) * (g - 1);
        case Kind::DoubleA:
            // canonical space has dimension g; the pluricanonical count starts at m=2
            return m == 1 ? g : (2 * mm - 1) * (2 * static_cast<std::size_t>(k_) - 1);
        case Kind::RosaryBicanonical:
            return (4 * mm - 1) * (g - 1);
        case Kind::Wiman:
            return m == 1 ? 3 * g - 3 : (4 * mm - 1) * (g - 1);
    }
    return 0;
}

CurveModel::Poly CurveModel::local(int var) const {
    const Variable& v = vars_[static_cast<std::size_t>(var)];
    Poly p;
    switch (kind_) {
        case Kind::Ribbon:
            // x_i = u^i ; y_{k+i} = u^{k+i} + i u^{i-1} eps
            p[{v.index, 0}] = 1;
            if (v.aux_flag == 1) {
                const int i = v.index - k_;
                p[{i - 1, 1}] = i;
            }
            break;
        case Kind::DoubleA:
            // x_i = (u0^i, u1^-i, 0), y_i = (0, u1^i, u2^-i) in the (du/u)^m frames
            if (v.aux_flag == 0) {
                p[{0, v.index}] = 1;
                p[{1, -v.index}] = 1;
            } else {
                p[{1, v.index}] = 1;
                p[{2, -v.index}] = 1;
            }
            break;
        case Kind::RosaryCanonical: {
            const int comps = g_ - 1;
            if (v.aux_flag == 0) {
                p[{v.index, 1}] = 1;
                p[{(v.index + 1) % comps, -1}] = 1;
            } else {
                for (int j = 0; j < comps; ++j) p[{j, 0}] = 1;
            }
            break;
        }
        case Kind::RosaryBicanonical: {
            const int comps = g_ - 1;
            // x_i = omega_i^2, y_i = omega_i eta, z_i = omega_{i-1} omega_i.
            // z_i is the unit of component i; for g=3 the two-component
            // cycle makes omega_0 omega_1 meet both components, so the
            // component unit is used directly.
            if (v.aux_flag == 2) {
                p[{v.index, 0}] = 1;
            } else {
                const int d = v.aux_flag == 0 ? 2 : 1;
                p[{v.index, d}] = 1;
                p[{(v.index + 1) % comps, -d}] = 1;
            }
            break;
        }
        case Kind::Wiman:
            p[{v.index, v.aux_flag}] = 1;
            break;
    }
    return p;
}

CurveModel::Poly CurveModel::multiply(const Poly& p, const Poly& q) const {
    Poly r;
    for (const auto& [a, ca] : p) {
        for (const auto& [b, cb] : q) {
            Rational c = ca * cb;
            switch (kind_) {
                case Kind::Ribbon:
                    if (a.b + b.b >= 2) continue;
                    r[{a.a + b.a, a.b + b.b}] += c;
                    break;
                case Kind::DoubleA:
                case Kind::RosaryCanonical:
                case Kind::RosaryBicanonical:
                    if (a.a != b.a) continue;
                    r[{a.a, a.b + b.b}] += c;
                    break;
                case Kind::Wiman: {
                    int d = a.a + b.a;
                    int e = a.b + b.b;
                    if (e < 2) {
                        r[{d, e}] += c;
                    } else {
                        // w^2 = z^{2g+1} + 1
                        r[{d + 2 * g_ + 1, e - 2}] += c;
                        r[{d, e - 2}] += c;
                    }
                    break;
                }
            }
        }
    }
    for (auto it = r.begin(); it != r.end();) {
        if (sgn(it->second) == 0) it = r.erase(it);
        else ++it;
    }
    return r;
}

std::vector<Axis> CurveModel::make_axes(int m) const {
    std::vector<Axis> ax;
    switch (kind_) {
        case Kind::Ribbon:
            for (int d = 0; d <= 2 * m * k_; ++d) ax.push_back({d, 0});
            for (int d = 0; d <= 2 * m * k_ - k_ - 1; ++d) ax.push_back({d, 1});
            break;
        case Kind::DoubleA:
            for (int d = 0; d <= m * k_; ++d) ax.push_back({0, d});
            for (int d = -m * k_; d <= m * k_; ++d) ax.push_back({1, d});
            for (int d = -m * k_; d <= 0; ++d) ax.push_back({2, d});
            break;
        case Kind::RosaryCanonical:
        case Kind::RosaryBicanonical: {
            const int w = kind_ == Kind::RosaryCanonical ? m : 2 * m;
            for (int j = 0; j < g_ - 1; ++j)
                for (int d = -w; d <= w; ++d) ax.push_back({j, d});
            break;
        }
        case Kind::Wiman:
            for (int d = 0; d <= (2 * g_ - 2) * m; ++d) ax.push_back({d, 0});
            for (int d = 0; d <= (2 * g_ - 2) * (m - 1) + g_ - 3; ++d) ax.push_back({d, 1});
            break;
    }
    return ax;
}

const std::vector<Axis>& CurveModel::axes(int m) const {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->axes.find(m);
    if (it == cache_->axes.end()) {
        it = cache_->axes.emplace(m, make_axes(m)).first;
        auto& idx = cache_->axis_index[m];
        for (std::size_t i = 0; i < it->second.size(); ++i) idx[it->second[i]] = i;
    }
    return it->second;
}

const std::map<Axis, std::size_t>& CurveModel::axis_index(int m) const {
    axes(m);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->axis_index.at(m);
}

std::string CurveModel::axis_label(int m, std::size_t i) const {
    const Axis& a = axes(m).at(i);
    switch (kind_) {
        case Kind::Ribbon:
            return "u^" + std::to_string(a.a) + (a.b ? "*eps" : "");
        case Kind::DoubleA:
        case Kind::RosaryCanonical:
        case Kind::RosaryBicanonical:
            return "C" + std::to_string(a.a) + ":u^" + std::to_string(a.b);
        case Kind::Wiman:
            return "z^" + std::to_string(a.a) + (a.b ? "*w" : "");
    }
    return "?";
}

long CurveModel::axis_weight(int m, std::size_t i) const {
    const Axis& a = axes(m).at(i);
    switch (kind_) {
        case Kind::Ribbon:
            // (du ^ deps / eps^2)^m has weight -mk under u -> tu, eps -> t^{k+1} eps
            return a.b == 0 ? a.a - m * k_ : a.a + k_ + 1 - m * k_;
        case Kind::DoubleA:
            return a.a == 1 ? -a.b : a.b;
        case Kind::RosaryCanonical:
        case Kind::RosaryBicanonical:
            return static_cast<long>(a.b) * sign_pow(a.a);
        case Kind::Wiman: {
            const long n = modulus();
            return mod_pos(2L * a.a + (2L * g_ + 1) * a.b + static_cast<long>(m) * (2 - 4L * g_), n);
        }
    }
    return 0;
}

SectionVector CurveModel::expand(const Monomial& mono) const {
    if (mono.size() != vars_.size()) throw ratlin::DimensionError("monomial length mismatch");
    const int m = mono.degree();
    if (m < 1) throw std::invalid_argument("expand requires degree >= 1");
    Poly p;
    switch (kind_) {
        case Kind::DoubleA:
            for (int c = 0; c < 3; ++c) p[{c, 0}] = 1;
            break;
        case Kind::RosaryCanonical:
        case Kind::RosaryBicanonical:
            for (int c = 0; c < g_ - 1; ++c) p[{c, 0}] = 1;
            break;
        default:
            p[{0, 0}] = 1;
    }
    for (std::size_t v = 0; v < vars_.size(); ++v) {
        if (mono[v] == 0) continue;
        const Poly lv = local(static_cast<int>(v));
        for (int e = 0; e < mono[v]; ++e) p = multiply(p, lv);
    }
    const auto& idx = axis_index(m);
    SectionVector out(idx.size(), Rational(0));
    for (const auto& [axis, c] : p) {
        auto it = idx.find(axis);
        if (it == idx.end())
            throw WindowError(name() + ": image of " + monomial_string(mono) +
                              " leaves the declared coordinate window");
        out[it->second] = c;
    }
    return out;
}

const SectionVector& CurveModel::image(const Monomial& mono) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->images.find(mono.exps);
        if (it != cache_->images.end()) return it->second;
    }
    SectionVector v = expand(mono);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->images.emplace(mono.exps, std::move(v)).first->second;
}

long CurveModel::monomial_weight(const Monomial& mono) const {
    long w = 0;
    for (std::size_t v = 0; v < vars_.size(); ++v) w += vars_[v].weight * mono[v];
    return modulus() ? mod_pos(w, modulus()) : w;
}

std::string CurveModel::monomial_string(const Monomial& mono) const {
    std::string s;
    for (std::size_t v = 0; v < vars_.size(); ++v) {
        if (mono[v] == 0) continue;
        if (!s.empty()) s += "*";
        s += vars_[v].name;
        if (mono[v] > 1) s += "^" + std::to_string(mono[v]);
    }
    return s.empty() ? "1" : s;
}

Monomial CurveModel::var_power(int var, int power) const {
    Monomial m(std::vector<int>(vars_.size(), 0));
    m.exps[static_cast<std::size_t>(var)] = power;
    return m;
}

Monomial CurveModel::parse_monomial(const std::string& text, int m) const {
    Monomial mono(std::vector<int>(vars_.size(), 0));
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '*')) {
        if (tok.empty()) throw std::invalid_argument("empty factor in monomial '" + text + "'");
        auto caret = tok.find('^');
        std::string nm = tok.substr(0, caret);
        int p = caret == std::string::npos ? 1 : std::stoi(tok.substr(caret + 1));
        mono.exps[static_cast<std::size_t>(var_index(nm))] += p;
    }
    if (mono.degree() != m)
        throw std::invalid_argument("monomial '" + text + "' does not have degree " + std::to_string(m));
    return mono;
}

nlohmann::json CurveModel::descriptor() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind_);
    j["g"] = g_;
    if (k_) j["k"] = k_;
    j["weight_modulus"] = modulus();
    auto vars = nlohmann::json::array();
    for (const auto& v : vars_)
        vars.push_back({{"name", v.name}, {"index", v.index}, {"weight", v.weight},
                        {"aux_degree", v.aux_degree}, {"aux_flag", v.aux_flag}});
    j["variables"] = vars;
    switch (kind_) {
        case Kind::Ribbon:
            j["window"] = "u-degrees 0..2mk, eps-column u-degrees 0..2mk-k-1";
            j["weight_convention"] = "weight(x_i)=i-k, weight(y_{k+i})=i (tool convention)";
            break;
        case Kind::DoubleA:
            j["window"] = "C0 degrees 0..mk, C1 degrees -mk..mk, C2 degrees -mk..0 in (du/u)^m frames";
            break;
        case Kind::RosaryCanonical:
            j["window"] = "each component: Laurent degrees -m..m in (du/u)^m frame";
            break;
        case Kind::RosaryBicanonical:
            j["window"] = "each component: Laurent degrees -2m..2m in (du/u)^{2m} frame";
            break;
        case Kind::Wiman:
            j["window"] = "z^d (d<=(2g-2)m) and z^d w (d<=(2g-2)(m-1)+g-3)";
            break;
    }
    return j;
}

nlohmann::json CurveModel::image_table(int m) const {
    nlohmann::json j;
    j["model"] = descriptor();
    j["m"] = m;
    auto labels = nlohmann::json::array();
    for (std::size_t i = 0; i < axes(m).size(); ++i) labels.push_back(axis_label(m, i));
    j["axes"] = labels;
    auto imgs = nlohmann::json::array();
    for (const auto& mono : all_monomials(vars_.size(), m))
        imgs.push_back({{"monomial", monomial_string(mono)}, {"image", ratlin::to_json(image(mono))}});
    j["images"] = imgs;
    return j;
}

CurveModel build_model(Kind kind, int g) { return CurveModel(kind, g); }

SectionVector expand_monomial(const CurveModel& model, const Monomial& mono) {
    return model.image(mono);
}

std::size_t hilbert_dim(const CurveModel& model, int m) { return model.hilbert_dim(m); }

std::vector<Monomial> all_monomials(std::size_t n, int m) {
    std::vector<Monomial> out;
    if (n == 0) return out;
    std::vector<int> e(n, 0);
    // recursive fill: first coordinate takes the largest value first
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos + 1 == n) {
            e[pos] = left;
            out.emplace_back(e);
            return;
        }
        for (int a = left; a >= 0; --a) {
            e[pos] = a;
            rec(pos + 1, left - a);
        }
    };
    rec(0, m);
    return out;
}

namespace {

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::size_t blocked_rank(const std::vector<const SectionVector*>& vecs) {
    if (vecs.empty()) return 0;
    const std::size_t dim = vecs[0]->size();
    UnionFind uf(dim);
    for (const auto* v : vecs) {
        std::size_t first = dim;
        for (std::size_t i = 0; i < dim; ++i) {
            if (sgn((*v)[i]) == 0) continue;
            if (first == dim) first = i;
            else uf.unite(first, i);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> block_coords;
    for (std::size_t i = 0; i < dim; ++i) block_coords[uf.find(i)].push_back(i);
    std::map<std::size_t, ratlin::EchelonState> states;
    std::map<std::size_t, std::size_t> local;
    for (const auto& [root, coords] : block_coords)
        for (std::size_t t = 0; t < coords.size(); ++t) local[coords[t]] = t;
    std::size_t r = 0;
    for (const auto* v : vecs) {
        std::size_t first = dim;
        for (std::size_t i = 0; i < dim; ++i)
            if (sgn((*v)[i]) != 0) { first = i; break; }
        if (first == dim) continue;
        const std::size_t root = uf.find(first);
        const auto& coords = block_coords[root];
        auto it = states.try_emplace(root, coords.size()).first;
        Vec w(coords.size());
        for (std::size_t t = 0; t < coords.size(); ++t) w[t] = (*v)[coords[t]];
        if (it->second.try_insert(w)) ++r;
    }
    return r;
}

bool ModelReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const ModelCheck& c) { return c.ok; });
}

nlohmann::json ModelReport::to_json() const {
    nlohmann::json j;
    j["ok"] = ok();
    auto arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e{{"check", c.name}, {"ok", c.ok}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        arr.push_back(e);
    }
    j["checks"] = arr;
    return j;
}

namespace {

ModelCheck check_weights_distinct(const CurveModel& model) {
    ModelCheck c{"weights_distinct", true, ""};
    std::set<std::pair<long, long>> seen;
    for (const auto& v : model.variables()) {
        // rosary blocks are indexed by the cyclic index; elsewhere one block
        long block = 0;
        if (model.kind() == Kind::RosaryCanonical || model.kind() == Kind::RosaryBicanonical)
            block = v.aux_flag == 1 && model.kind() == Kind::RosaryCanonical ? -1 : v.index;
        if (!seen.insert({block, v.weight}).second) {
            c.ok = false;
            c.detail = "repeated weight " + std::to_string(v.weight) + " at " + v.name;
            return c;
        }
    }
    return c;
}

ModelCheck check_ribbon_rpl(const CurveModel& model, int m) {
    ModelCheck c{"ribbon_product_formula_m" + std::to_string(m), true, ""};
    const int k = model.k();
    const auto& ax = model.axes(m);
    for (const auto& mono : all_monomials(model.num_vars(), m)) {
        int a = 0, b = 0, ny = 0;
        for (std::size_t v = 0; v < model.num_vars(); ++v) {
            const auto& var = model.variables()[v];
            a += var.index * mono[v];
            if (var.aux_flag == 0) b += var.index * mono[v];
            else ny += mono[v];
        }
        b += k * ny;
        SectionVector expect(ax.size(), Rational(0));
        for (std::size_t i = 0; i < ax.size(); ++i) {
            if (ax[i] == Axis{a, 0}) expect[i] = 1;
            if (ax[i] == Axis{a - k - 1, 1}) expect[i] = a - b;
        }
        if (expect != model.image(mono)) {
            c.ok = false;
            c.detail = "mismatch at " + model.monomial_string(mono);
            return c;
        }
    }
    return c;
}

}  // namespace

ModelReport verify_model(const CurveModel& model, int m_max) {
    ModelReport rep;
    rep.checks.push_back(check_weights_distinct(model));
    for (int m = 1; m <= m_max; ++m) {
        const auto monos = all_monomials(model.num_vars(), m);
        std::vector<const SectionVector*> imgs;
        ModelCheck win{"window_m" + std::to_string(m), true, ""};
        try {
            for (const auto& mono : monos) imgs.push_back(&model.image(mono));
        } catch (const WindowError& e) {
            win.ok = false;
            win.detail = e.what();
            rep.checks.push_back(win);
            continue;
        }
        rep.checks.push_back(win);

        const std::size_t r = blocked_rank(imgs);
        const std::size_t n = model.hilbert_dim(m);
        rep.checks.push_back({"rank_m" + std::to_string(m), r == n,
                              "rank " + std::to_string(r) + ", expected " + std::to_string(n)});

        ModelCheck eq{"equivariance_m" + std::to_string(m), true, ""};
        for (std::size_t t = 0; t < monos.size() && eq.ok; ++t) {
            const long w = model.monomial_weight(monos[t]);
            for (std::size_t i = 0; i < imgs[t]->size(); ++i) {
                if (sgn((*imgs[t])[i]) != 0 && model.axis_weight(m, i) != w) {
                    eq.ok = false;
                    eq.detail = model.monomial_string(monos[t]) + " hits axis " + model.axis_label(m, i);
                    break;
                }
            }
        }
        rep.checks.push_back(eq);
        if (model.kind() == Kind::Ribbon) rep.checks.push_back(check_ribbon_rpl(model, m));
    }

    if (model.kind() == Kind::DoubleA) {
        const int k = model.k();
        std::vector<std::string> row0, row1;
        for (int i = 1; i <= k - 1; ++i) row0.push_back("x" + std::to_string(i));
        for (int i = k; i >= 2; --i) row0.push_back("y" + std::to_string(i));
        for (int i = 2; i <= k; ++i) row1.push_back("x" + std::to_string(i));
        for (int i = k - 1; i >= 1; --i) row1.push_back("y" + std::to_string(i));
        ModelCheck c{"determinantal_minors", true, ""};
        std::size_t count = 0;
        for (std::size_t a = 0; a < row0.size() && c.ok; ++a) {
            for (std::size_t b = a + 1; b < row0.size(); ++b) {
                Monomial p = model.parse_monomial(row0[a] + "*" + row1[b], 2);
                Monomial q = model.parse_monomial(row0[b] + "*" + row1[a], 2);
                ++count;
                if (model.image(p) != model.image(q)) {
                    c.ok = false;
                    c.detail = "minor " + model.monomial_string(p) + " - " + model.monomial_string(q) +
                               " does not vanish";
                    break;
                }
            }
        }
        if (c.ok) c.detail = std::to_string(count) + " minors vanish";
        rep.checks.push_back(c);
    }

    if (model.kind() == Kind::RosaryCanonical) {
        const int n = model.g() - 1;
        SectionVector s(model.axes(2).size(), Rational(0));
        for (int i = 0; i < n; ++i) {
            Monomial p = model.parse_monomial(
                "omega" + std::to_string(i) + "*omega" + std::to_string((i + 1) % n), 2);
            const auto& img = model.image(p);
            for (std::size_t t = 0; t < s.size(); ++t) s[t] += img[t];
        }
        const auto& eta2 = model.image(model.var_power(model.var_index("eta"), 2));
        for (std::size_t t = 0; t < s.size(); ++t) s[t] -= eta2[t];
        rep.checks.push_back({"quadric_relation", ratlin::is_zero(s),
                              ratlin::is_zero(s) ? "sum omega_i omega_{i+1} - eta^2 = 0" : "nonzero section"});
    }
    return rep;
}

}  // namespace hstab::models
