#include "hstab/basiskit.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace hstab::basiskit {

using ratlin::Vec;

nlohmann::json candidate_to_json(const CurveModel& model, const BasisCandidate& c) {
    auto arr = nlohmann::json::array();
    for (const auto& mono : c.monomials) arr.push_back(model.monomial_string(mono));
    return {{"m", c.m}, {"monomials", arr}};
}

WeightForm& WeightForm::operator+=(const WeightForm& o) {
    if (coef.empty()) coef.assign(o.size(), Rational(0));
    if (o.size() != size()) throw ratlin::DimensionError("weight form length mismatch");
    for (std::size_t i = 0; i < coef.size(); ++i) coef[i] += o.coef[i];
    return *this;
}

WeightForm WeightForm::operator+(const WeightForm& o) const {
    WeightForm r = *this;
    r += o;
    return r;
}

WeightForm WeightForm::operator-(const WeightForm& o) const { return *this + o * Rational(-1); }

WeightForm WeightForm::operator*(const Rational& s) const {
    WeightForm r = *this;
    for (auto& q : r.coef) q *= s;
    return r;
}

WeightForm weight_form(const BasisCandidate& c, std::size_t nvars) {
    WeightForm w(nvars);
    for (const auto& mono : c.monomials)
        for (std::size_t i = 0; i < nvars; ++i) w.coef[i] += mono[i];
    return w;
}

WeightForm weight_form_on_hyperplane(const WeightForm& w) {
    if (w.size() == 0) return w;
    Rational mean = 0;
    for (const auto& q : w.coef) mean += q;
    mean /= static_cast<long>(w.size());
    WeightForm r = w;
    for (auto& q : r.coef) q -= mean;
    return r;
}

bool equal_on_hyperplane(const WeightForm& a, const WeightForm& b) {
    return weight_form_on_hyperplane(a) == weight_form_on_hyperplane(b);
}

std::optional<Rational> multiple_of(const WeightForm& w, const std::vector<std::size_t>& vs) {
    WeightForm target(w.size());
    for (auto v : vs) target.coef[v] += 1;
    const WeightForm cw = weight_form_on_hyperplane(w);
    const WeightForm ct = weight_form_on_hyperplane(target);
    std::size_t pivot = ct.size();
    for (std::size_t i = 0; i < ct.size(); ++i)
        if (sgn(ct.coef[i]) != 0) { pivot = i; break; }
    if (pivot == ct.size()) return std::nullopt;
    const Rational s = cw.coef[pivot] / ct.coef[pivot];
    if (ct * s != cw) return std::nullopt;
    return s;
}

std::optional<Rational> pointed_multiple(const WeightForm& w, std::size_t v) {
    return multiple_of(w, {v});
}

std::string form_string(const CurveModel& model, const WeightForm& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (sgn(w.coef[i]) == 0) continue;
        Rational c = w.coef[i];
        if (!s.empty()) s += sgn(c) > 0 ? " + " : " - ";
        else if (sgn(c) < 0) s += "-";
        c = abs(c);
        if (c != 1) s += ratlin::to_string(c) + "*";
        s += "rho[" + model.variables()[i].name + "]";
    }
    return s.empty() ? "0" : s;
}

// ---------------------------------------------------------------------------

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

BasisVerdict is_independent(const CurveModel& model, int m, const std::vector<Monomial>& monos) {
    BasisVerdict out;
    std::map<std::vector<int>, std::size_t> seen;
    for (std::size_t t = 0; t < monos.size(); ++t) {
        if (monos[t].degree() != m)
            throw std::invalid_argument("monomial " + model.monomial_string(monos[t]) +
                                        " does not have degree " + std::to_string(m));
        auto [it, fresh] = seen.emplace(monos[t].exps, t);
        if (!fresh) {
            out.reason = "repeated monomial " + model.monomial_string(monos[t]);
            out.witness = {monos[it->second], monos[t]};
            return out;
        }
    }
    if (monos.empty()) {
        out.ok = true;
        return out;
    }
    std::vector<const Vec*> imgs;
    for (const auto& mono : monos) imgs.push_back(&model.image(mono));
    const std::size_t dim = imgs[0]->size();
    UnionFind uf(dim);
    for (const auto* v : imgs) {
        std::size_t first = dim;
        for (std::size_t i = 0; i < dim; ++i) {
            if (sgn((*v)[i]) == 0) continue;
            if (first == dim) first = i;
            else uf.unite(first, i);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> coords;
    for (std::size_t i = 0; i < dim; ++i) coords[uf.find(i)].push_back(i);

    struct Block {
        ratlin::EchelonState state{0};
        std::vector<std::size_t> members;
        std::vector<Vec> vecs;
    };
    std::map<std::size_t, Block> blocks;
    for (std::size_t t = 0; t < monos.size(); ++t) {
        const Vec& v = *imgs[t];
        std::size_t first = dim;
        for (std::size_t i = 0; i < dim; ++i)
            if (sgn(v[i]) != 0) { first = i; break; }
        if (first == dim) {
            out.reason = "monomial " + model.monomial_string(monos[t]) + " maps to zero";
            out.witness = {monos[t]};
            return out;
        }
        const auto root = uf.find(first);
        const auto& cs = coords[root];
        auto [it, fresh] = blocks.try_emplace(root);
        if (fresh) it->second.state = ratlin::EchelonState(cs.size());
        Vec w(cs.size());
        for (std::size_t i = 0; i < cs.size(); ++i) w[i] = v[cs[i]];
        Block& b = it->second;
        if (b.state.try_insert(w)) {
            b.members.push_back(t);
            b.vecs.push_back(std::move(w));
            continue;
        }
        // circuit: w written in terms of the independent members of its block
        ratlin::Matrix a(cs.size(), Vec(b.vecs.size()));
        for (std::size_t r = 0; r < cs.size(); ++r)
            for (std::size_t c = 0; c < b.vecs.size(); ++c) a[r][c] = b.vecs[c][r];
        auto coeffs = ratlin::solve_linear(a, w);
        out.reason = "dependent set";
        if (coeffs)
            for (std::size_t c = 0; c < coeffs->size(); ++c)
                if (sgn((*coeffs)[c]) != 0) out.witness.push_back(monos[b.members[c]]);
        out.witness.push_back(monos[t]);
        return out;
    }
    out.ok = true;
    return out;
}

BasisVerdict is_monomial_basis(const CurveModel& model, int m, const BasisCandidate& c) {
    const std::size_t n = model.hilbert_dim(m);
    for (const auto& mono : c.monomials)
        if (mono.degree() != m)
            throw std::invalid_argument("mixed degrees: " + model.monomial_string(mono) +
                                        " is not of degree " + std::to_string(m));
    BasisVerdict v = is_independent(model, m, c.monomials);
    if (!v.ok) return v;
    if (c.size() != n) {
        v.ok = false;
        v.reason = "cardinality " + std::to_string(c.size()) + " != " + std::to_string(n);
    }
    return v;
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<Node> new_node(NodeKind k, std::string label) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->label = std::move(label);
    return n;
}

int merge_degree(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    if (a != b) throw std::invalid_argument("multibasis children have different degrees");
    return a;
}

}  // namespace

Expr make_leaf(std::vector<Monomial> monos, std::size_t nvars, std::string label) {
    auto n = new_node(NodeKind::Leaf, std::move(label));
    n->nvars = nvars;
    n->degree = -1;
    for (const auto& mono : monos) {
        if (mono.size() != nvars) throw ratlin::DimensionError("leaf monomial length mismatch");
        n->degree = merge_degree(n->degree, mono.degree());
    }
    n->leaf = std::move(monos);
    n->width = n->leaf.size();
    n->form = weight_form(BasisCandidate{n->leaf, n->degree}, nvars);
    n->count = 1;
    return n;
}

Expr make_concat(std::vector<Expr> children, std::vector<Integer> mult, std::string label) {
    if (children.empty()) throw std::invalid_argument("concat of nothing");
    if (mult.size() != children.size()) throw std::invalid_argument("concat multiplicity count");
    auto n = new_node(NodeKind::Concat, std::move(label));
    n->nvars = children[0]->nvars;
    n->degree = -1;
    n->width = children[0]->width;
    n->form = WeightForm(n->nvars);
    n->count = 0;
    Integer total = 0;
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (mult[i] <= 0) throw std::invalid_argument("concat multiplicities must be positive");
        if (children[i]->width != n->width)
            throw std::invalid_argument("concat children have different member sizes");
        n->degree = merge_degree(n->degree, children[i]->degree);
        n->form += children[i]->form * Rational(mult[i]);
        n->count += children[i]->count;
        total += mult[i];
    }
    n->form = n->form * (Rational(1) / Rational(total));
    n->children = std::move(children);
    n->mult = std::move(mult);
    return n;
}

Expr make_concat_weighted(const std::vector<Expr>& children, const std::vector<Rational>& w,
                          std::string label) {
    if (w.size() != children.size()) throw std::invalid_argument("concat weight count");
    Integer den = 1;
    for (const auto& q : w) {
        if (sgn(q) < 0) throw std::invalid_argument("concat weights must be nonnegative");
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    }
    std::vector<Expr> kids;
    std::vector<Integer> mult;
    Integer g = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (sgn(w[i]) == 0) continue;
        Integer v = w[i].get_num() * (den / w[i].get_den());
        kids.push_back(children[i]);
        mult.push_back(v);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    }
    for (auto& v : mult) v /= g;
    if (kids.size() == 1 && label.empty()) return kids[0];
    return make_concat(std::move(kids), std::move(mult), std::move(label));
}

Expr make_scale(Integer d, Expr child) {
    if (d <= 0) throw std::invalid_argument("scale factor must be positive");
    auto n = new_node(NodeKind::Scale, std::to_string(d.get_si()) + "*");
    n->nvars = child->nvars;
    n->degree = child->degree;
    n->width = child->width;
    n->form = child->form;
    n->count = child->count;
    n->scale = std::move(d);
    n->children = {std::move(child)};
    return n;
}

Expr make_sum(std::vector<Expr> children, std::string label, const CurveModel* model) {
    if (children.empty()) throw std::invalid_argument("sum of nothing");
    auto n = new_node(NodeKind::Sum, std::move(label));
    n->nvars = children[0]->nvars;
    n->degree = -1;
    n->width = 0;
    n->form = WeightForm(n->nvars);
    n->count = 1;
    for (const auto& c : children) {
        n->degree = merge_degree(n->degree, c->degree);
        n->width += c->width;
        n->form += c->form;
        n->count *= c->count;
    }
    n->children = std::move(children);
    if (model && n->degree > 0) {
        std::vector<Monomial> all;
        for (const auto& c : n->children) {
            auto mem = member(c, 0);
            all.insert(all.end(), mem.monomials.begin(), mem.monomials.end());
        }
        auto v = is_independent(*model, n->degree, all);
        if (!v.ok)
            throw std::invalid_argument("sum '" + n->label + "' is not a direct sum: " + v.reason);
    }
    return n;
}

Expr make_times(Monomial factor, Expr child, std::string label) {
    auto n = new_node(NodeKind::Times, std::move(label));
    n->nvars = child->nvars;
    if (factor.size() != n->nvars) throw ratlin::DimensionError("times factor length mismatch");
    n->degree = child->degree < 0 ? -1 : child->degree + factor.degree();
    n->width = child->width;
    n->form = child->form;
    for (std::size_t i = 0; i < n->nvars; ++i)
        n->form.coef[i] += Rational(static_cast<long>(n->width) * factor[i]);
    n->count = child->count;
    n->factor = std::move(factor);
    n->children = {std::move(child)};
    return n;
}

const WeightForm& multibasis_weight_form(const Expr& e) { return e->form; }

Integer member_count(const Expr& e) { return e->count; }

namespace {

std::string node_tag(const Node& n, std::size_t child) {
    std::string base = n.label.empty() ? std::string() : n.label;
    switch (n.kind) {
        case NodeKind::Concat: return (base.empty() ? "concat" : base) + "[" + std::to_string(child) + "]";
        case NodeKind::Sum: return (base.empty() ? "sum" : base) + "." + std::to_string(child);
        case NodeKind::Scale: return base;
        case NodeKind::Times: return base.empty() ? "times" : base;
        case NodeKind::Leaf: return base.empty() ? "leaf" : base;
    }
    return base;
}

void append_path(std::string* path, const std::string& s) {
    if (!path) return;
    if (!path->empty()) *path += "/";
    *path += s;
}

void collect_member(const Node& n, Integer idx, std::vector<Monomial>& out, const Monomial* factor,
                    std::string* path) {
    switch (n.kind) {
        case NodeKind::Leaf:
            append_path(path, node_tag(n, 0));
            for (const auto& mono : n.leaf) out.push_back(factor ? mono * *factor : mono);
            return;
        case NodeKind::Concat:
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (idx < n.children[i]->count) {
                    append_path(path, node_tag(n, i));
                    collect_member(*n.children[i], idx, out, factor, path);
                    return;
                }
                idx -= n.children[i]->count;
            }
            throw std::out_of_range("member index out of range");
        case NodeKind::Scale:
            collect_member(*n.children[0], idx, out, factor, path);
            return;
        case NodeKind::Times: {
            Monomial f = factor ? n.factor * *factor : n.factor;
            if (!n.label.empty()) append_path(path, n.label);
            collect_member(*n.children[0], idx, out, &f, path);
            return;
        }
        case NodeKind::Sum: {
            std::string sub;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                const Integer& c = n.children[i]->count;
                Integer q = idx / c;
                Integer r = idx - q * c;
                collect_member(*n.children[i], r, out, factor, nullptr);
                idx = q;
            }
            append_path(path, node_tag(n, 0) + "*");
            return;
        }
    }
}

void extract(const Node& n, const Vec& rho, std::vector<Monomial>& out, const Monomial* factor,
             std::string* path) {
    switch (n.kind) {
        case NodeKind::Leaf:
            append_path(path, node_tag(n, 0));
            for (const auto& mono : n.leaf) out.push_back(factor ? mono * *factor : mono);
            return;
        case NodeKind::Concat: {
            std::size_t best = 0;
            Rational bw = n.children[0]->form.eval(rho);
            for (std::size_t i = 1; i < n.children.size(); ++i) {
                Rational w = n.children[i]->form.eval(rho);
                if (w < bw) {
                    bw = w;
                    best = i;
                }
            }
            append_path(path, node_tag(n, best));
            extract(*n.children[best], rho, out, factor, path);
            return;
        }
        case NodeKind::Scale:
            extract(*n.children[0], rho, out, factor, path);
            return;
        case NodeKind::Times: {
            Monomial f = factor ? n.factor * *factor : n.factor;
            if (!n.label.empty()) append_path(path, n.label);
            extract(*n.children[0], rho, out, &f, path);
            return;
        }
        case NodeKind::Sum:
            for (const auto& c : n.children) extract(*c, rho, out, factor, nullptr);
            append_path(path, node_tag(n, 0) + "*");
            return;
    }
}

}  // namespace

BasisCandidate member(const Expr& e, const Integer& index, std::string* path) {
    if (index < 0 || index >= e->count) throw std::out_of_range("member index out of range");
    BasisCandidate c;
    c.m = e->degree;
    collect_member(*e, index, c.monomials, nullptr, path);
    return c;
}

BasisCandidate extract_member(const Expr& e, const Vec& rho, std::string* path) {
    if (rho.size() != e->nvars) throw ratlin::DimensionError("rho length mismatch");
    BasisCandidate c;
    c.m = e->degree;
    extract(*e, rho, c.monomials, nullptr, path);
    return c;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

nlohmann::json MultibasisReport::to_json() const {
    return {{"ok", ok},
            {"exhaustive", exhaustive},
            {"checked", checked},
            {"members", total.get_str()},
            {"failures", failures}};
}

MultibasisReport verify_multibasis(const CurveModel& model, int m, const Expr& e, std::size_t budget,
                                   std::uint64_t seed, std::optional<std::size_t> subspace_dim) {
    MultibasisReport rep;
    rep.total = e->count;
    auto check = [&](const BasisCandidate& c, const std::string& path) {
        ++rep.checked;
        BasisVerdict v;
        if (subspace_dim) {
            v = is_independent(model, m, c.monomials);
            if (v.ok && c.size() != *subspace_dim) {
                v.ok = false;
                v.reason = "member size " + std::to_string(c.size()) + " != " +
                           std::to_string(*subspace_dim);
            }
        } else {
            v = is_monomial_basis(model, m, c);
        }
        if (!v.ok && rep.failures.size() < 16) {
            std::string w;
            for (const auto& mono : v.witness) w += (w.empty() ? "" : ",") + model.monomial_string(mono);
            rep.failures.push_back(path + ": " + v.reason + (w.empty() ? "" : " {" + w + "}"));
        }
        if (!v.ok) rep.ok = false;
    };
    if (e->count <= Integer(static_cast<unsigned long>(budget))) {
        for (Integer i = 0; i < e->count; ++i) {
            std::string path;
            auto c = member(e, i, &path);
            check(c, "#" + i.get_str() + " " + path);
        }
        return rep;
    }
    rep.exhaustive = false;
    std::uint64_t state = seed;
    const std::size_t bits = mpz_sizeinbase(e->count.get_mpz_t(), 2) + 64;
    for (std::size_t s = 0; s < budget; ++s) {
        Integer r = 0;
        for (std::size_t b = 0; b < bits; b += 64) {
            r <<= 64;
            const std::uint64_t word = splitmix64(state);
            r += Integer(static_cast<unsigned long>(word >> 32)) * Integer(1UL << 32) +
                 Integer(static_cast<unsigned long>(word & 0xffffffffULL));
        }
        r %= e->count;
        std::string path;
        auto c = member(e, r, &path);
        check(c, "#" + r.get_str() + " " + path);
    }
    for (std::size_t v = 0; v < model.num_vars(); ++v) {
        for (int sgn_ : {1, -1}) {
            Vec rho(model.num_vars(), Rational(0));
            rho[v] = sgn_;
            std::string path;
            auto c = extract_member(e, rho, &path);
            check(c, std::string(sgn_ > 0 ? "min@+e_" : "min@-e_") + model.variables()[v].name + " " + path);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

CertVerdict verify_certificate(const CurveModel& model, int /*m*/, const Certificate& cert) {
    CertVerdict out;
    out.ok = true;
    const std::size_t n = model.num_vars();
    if (cert.groups.empty()) {
        out.ok = false;
        out.reason = "empty certificate";
        return out;
    }
    if (cert.mode == CertMode::semistable && cert.groups.size() != 1) {
        out.ok = false;
        out.reason = "semistable certificate must have exactly one group";
        return out;
    }
    std::set<int> pointed;
    for (const auto& grp : cert.groups) {
        WeightForm total(n);
        for (const auto& e : grp.entries) {
            if (sgn(e.coefficient) <= 0)
                throw std::invalid_argument("certificate coefficient " + ratlin::to_string(e.coefficient) +
                                            " is not positive");
            if (e.form.size() != n) throw ratlin::DimensionError("certificate form length mismatch");
            total += e.form * e.coefficient;
        }
        WeightForm residual = weight_form_on_hyperplane(total);
        out.residuals.push_back(residual);
        if (cert.mode == CertMode::semistable) {
            if (residual != WeightForm(n)) {
                out.ok = false;
                out.reason = "residual " + form_string(model, residual) + " is not zero on the hyperplane";
            }
            continue;
        }
        if (grp.variable < 0 || static_cast<std::size_t>(grp.variable) >= n) {
            out.ok = false;
            out.reason = "pointed group without a valid variable";
            continue;
        }
        pointed.insert(grp.variable);
        auto s = pointed_multiple(total, static_cast<std::size_t>(grp.variable));
        out.epsilons.push_back(s ? *s : Rational(0));
        if (!s || sgn(*s) <= 0) {
            out.ok = false;
            out.reason = "group for " + model.variables()[static_cast<std::size_t>(grp.variable)].name +
                         " reduces to " + form_string(model, residual);
        }
    }
    if (cert.mode == CertMode::stable_pointed && out.ok && pointed.size() != n) {
        out.ok = false;
        out.reason = "stable-pointed certificate covers " + std::to_string(pointed.size()) + " of " +
                     std::to_string(n) + " variables";
    }
    return out;
}

bool verify_certificate_members(const CurveModel& model, int m, const Certificate& cert,
                                std::size_t budget, std::string* detail) {
    for (const auto& grp : cert.groups) {
        for (const auto& e : grp.entries) {
            if (!e.expr) continue;
            auto rep = verify_multibasis(model, m, e.expr, budget);
            if (!rep.ok) {
                if (detail) *detail = e.family + ": " + (rep.failures.empty() ? "" : rep.failures[0]);
                return false;
            }
        }
    }
    return true;
}

namespace {

nlohmann::json entries_json(const std::vector<CertEntry>& es) {
    auto arr = nlohmann::json::array();
    for (const auto& e : es)
        arr.push_back({{"coefficient", ratlin::to_string(e.coefficient)},
                       {"family", e.family},
                       {"params", e.params},
                       {"form", ratlin::to_json(e.form.coef)}});
    return arr;
}

std::vector<CertEntry> entries_from(const nlohmann::json& arr) {
    std::vector<CertEntry> es;
    for (const auto& j : arr) {
        CertEntry e;
        e.coefficient = ratlin::parse_rational(j.at("coefficient").get<std::string>());
        e.family = j.at("family").get<std::string>();
        e.params = j.value("params", nlohmann::json::object());
        e.form = WeightForm(ratlin::vec_from_json(j.at("form")));
        es.push_back(std::move(e));
    }
    return es;
}

}  // namespace

nlohmann::json certificate_to_json(const Certificate& cert, const CertVerdict* verdict) {
    nlohmann::json j;
    if (cert.mode == CertMode::semistable) {
        j["mode"] = "semistable";
        j["entries"] = entries_json(cert.groups.at(0).entries);
        if (verdict && !verdict->residuals.empty()) j["residual"] = ratlin::to_json(verdict->residuals[0].coef);
    } else {
        j["mode"] = "stable-pointed";
        auto arr = nlohmann::json::array();
        for (std::size_t i = 0; i < cert.groups.size(); ++i) {
            nlohmann::json g{{"variable", cert.groups[i].variable},
                             {"entries", entries_json(cert.groups[i].entries)}};
            if (verdict && i < verdict->residuals.size())
                g["residual"] = ratlin::to_json(verdict->residuals[i].coef);
            if (verdict && i < verdict->epsilons.size())
                g["epsilon"] = ratlin::to_string(verdict->epsilons[i]);
            arr.push_back(g);
        }
        j["groups"] = arr;
    }
    if (verdict) j["verified"] = verdict->ok;
    return j;
}

Certificate certificate_from_json(const nlohmann::json& j) {
    Certificate c;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "semistable") {
        c.mode = CertMode::semistable;
        c.groups.push_back({-1, entries_from(j.at("entries"))});
    } else if (mode == "stable-pointed") {
        c.mode = CertMode::stable_pointed;
        for (const auto& g : j.at("groups")) c.groups.push_back({g.at("variable").get<int>(), entries_from(g.at("entries"))});
    } else {
        throw std::invalid_argument("unknown certificate mode '" + mode + "'");
    }
    return c;
}

}  // namespace hstab::basiskit
