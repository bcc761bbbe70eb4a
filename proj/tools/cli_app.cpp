#include "cli_app.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hstab/constructions.hpp"
#include "hstab/engine.hpp"

namespace hstab::cli {

namespace {

using nlohmann::json;
using ratlin::Rational;

constexpr const char* kCacheVersion = "hstab-cache-1";

struct Config {
    std::string model;
    std::string kind;  // positional kind for `cert`
    int g = 0;
    int m = 2;
    int mmax = 4;
    std::string g_range;
    std::string m_range;
    std::string family;
    int s = 1, i = 0, j = 0, u = 0, k = 0, n = 0;
    std::string eps = "0", delta = "0";
    std::string rho;
    bool project = false;
    std::size_t budget_cuts = 10000;
    std::size_t budget_members = 2000;
    std::uint64_t seed = 0;
    std::string out;
    std::string cache;
    bool check = false;
    bool approx = false;
    bool timing = false;
};

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string approx(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", q.get_d());
    return buf;
}

models::CurveModel model_of(const std::string& kind, int g) {
    if (kind.empty()) throw UsageError("--model is required");
    return models::build_model(models::parse_kind(kind), g);
}

engine::DecideOptions decide_options(const Config& c) {
    engine::DecideOptions o;
    o.max_cuts = c.budget_cuts;
    return o;
}

constructions::FamilySpec family_spec(const Config& c) {
    constructions::FamilySpec sp;
    sp.family = c.family;
    sp.g = c.g;
    sp.m = c.m;
    sp.k = c.k;
    sp.n = c.n;
    sp.s = c.s;
    sp.i = c.i;
    sp.j = c.j;
    sp.u = c.u;
    sp.eps = ratlin::parse_rational(c.eps);
    sp.delta = ratlin::parse_rational(c.delta);
    return sp;
}

void emit(const Config& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + c.out);
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- verify ------------------------------------------------------------------

int cmd_verify(const Config& c, std::ostream& out) {
    if (!c.family.empty()) {
        auto sp = family_spec(c);
        auto fam = constructions::build_family(sp);
        json j{{"command", "verify"}, {"family", sp.to_json()}};
        j["form"] = ratlin::to_json(fam.expr->form.coef);
        bool ok = true;
        if (!fam.expected.coef.empty()) {
            const bool match = basiskit::equal_on_hyperplane(fam.expr->form, fam.expected);
            j["expected_form"] = ratlin::to_json(fam.expected.coef);
            j["form_matches"] = match;
            ok = ok && match;
        }
        auto model = constructions::family_model(sp);
        if (model) {
            const bool chi = sp.family.rfind("doubleA", 0) == 0;
            const int m = fam.expr->degree;
            std::optional<std::size_t> sub;
            if (chi) sub = static_cast<std::size_t>(fam.expr->width);
            auto rep = basiskit::verify_multibasis(*model, m, fam.expr, c.budget_members, c.seed, sub);
            if (chi && rep.ok) {
                // chi bases also need the mixed, one-per-degree shape
                auto first = basiskit::member(fam.expr, 0);
                auto v = constructions::is_chi_basis(*model, m, first.monomials);
                if (!v.ok) {
                    rep.ok = false;
                    rep.failures.push_back("member 0: " + v.reason);
                }
            }
            j["members"] = rep.to_json();
            ok = ok && rep.ok;
        } else {
            std::size_t bad = 0, checked = 0;
            for (ratlin::Integer t = 0; t < fam.expr->count && checked < c.budget_members; ++t, ++checked)
                if (!constructions::kempf_member_ok(sp.n, sp.k, basiskit::member(fam.expr, t))) ++bad;
            j["members"] = {{"checked", checked}, {"ok", bad == 0}};
            ok = ok && bad == 0;
        }
        j["ok"] = ok;
        emit(c, dump(j), out);
        return ok ? kOk : kFailed;
    }
    auto model = model_of(c.model, c.g);
    auto rep = models::verify_model(model, c.mmax);
    json j{{"command", "verify"}, {"model", model.name()}, {"mmax", c.mmax}, {"report", rep.to_json()}};
    emit(c, dump(j), out);
    return rep.ok() ? kOk : kFailed;
}

// --- cert --------------------------------------------------------------------

int cmd_cert(const Config& c, std::ostream& out) {
    const std::string kind = c.kind.empty() ? c.model : c.kind;
    if (kind.empty()) throw UsageError("cert needs a model kind");
    auto model = model_of(kind, c.g);
    json j{{"command", "cert"}, {"model", model.name()}, {"m", c.m}};
    if (model.kind() == models::Kind::DoubleA) {
        if (c.rho.empty()) throw UsageError("doubleA certificates are per rho; pass --rho");
        auto rho = engine::parse_rho(c.rho, model.num_vars(), c.project);
        auto b = constructions::acurve_nonpositive_basis(model.k(), c.m, rho);
        Rational w = 0;
        for (const auto& mo : b.monomials)
            for (std::size_t v = 0; v < rho.size(); ++v) w += rho[v] * mo[v];
        auto v = basiskit::is_monomial_basis(model, c.m, b);
        j["basis"] = basiskit::candidate_to_json(model, b);
        j["weight"] = ratlin::to_string(w);
        j["is_basis"] = v.ok;
        const bool ok = v.ok && sgn(w) <= 0;
        j["ok"] = ok;
        emit(c, dump(j), out);
        return ok ? kOk : kFailed;
    }
    std::optional<basiskit::Certificate> cert;
    try {
        switch (model.kind()) {
            case models::Kind::Ribbon: cert = constructions::ribbon_certificate(c.g, c.m); break;
            case models::Kind::RosaryBicanonical: cert = constructions::rosary2_certificate(c.g, c.m); break;
            case models::Kind::Wiman: cert = constructions::wiman_certificate(c.g, c.m); break;
            case models::Kind::RosaryCanonical: {
                auto v = constructions::rosary1_decide(c.g, c.m);
                j["source"] = v.source;
                if (!v.semistable) {
                    j["refused"] = true;
                    j["reason"] = "not semistable: rho destabilizes";
                    j["rho"] = ratlin::to_json(v.rho);
                    j["min_weight"] = ratlin::to_string(v.min_weight);
                    j["bound"] = ratlin::to_string(v.bound);
                    emit(c, dump(j), out);
                    return kFailed;
                }
                cert = v.certificate;
                break;
            }
            default: break;
        }
    } catch (const std::invalid_argument& e) {
        if (model.kind() != models::Kind::Wiman || c.g != 3 || c.m != 2) throw;
        j["refused"] = true;
        j["reason"] = e.what();
        emit(c, dump(j), out);
        return kFailed;
    }
    const json canonical = basiskit::certificate_to_json(*cert);
    j["sha256"] = sha256_hex(canonical.dump());
    bool ok = true;
    if (c.check) {
        auto cv = basiskit::verify_certificate(model, c.m, *cert);
        j["certificate"] = basiskit::certificate_to_json(*cert, &cv);
        std::string detail;
        const bool members = basiskit::verify_certificate_members(model, c.m, *cert, c.budget_members, &detail);
        j["members_verified"] = members;
        if (!detail.empty()) j["member_failure"] = detail;
        ok = cv.ok && members;
    } else {
        j["certificate"] = canonical;
    }
    j["ok"] = ok;
    emit(c, dump(j), out);
    return ok ? kOk : kFailed;
}

// --- decide / destab -----------------------------------------------------------

json verdict_json(const engine::Verdict& v, const Config& c) {
    json j = v.to_json(c.timing);
    if (c.approx) j["margin_approx"] = approx(v.margin);
    return j;
}

int cmd_decide(const Config& c, std::ostream& out) {
    auto model = model_of(c.model, c.g);
    auto v = engine::decide(model, c.m, decide_options(c));
    json j{{"command", "decide"}, {"model", model.name()}, {"m", c.m}, {"verdict", verdict_json(v, c)}};
    emit(c, dump(j), out);
    return v.status == engine::Status::Undecided ? kBudget : kOk;
}

int cmd_destab(const Config& c, std::ostream& out) {
    auto model = model_of(c.model, c.g);
    if (c.rho.empty()) throw UsageError("destab needs --rho");
    auto rho = engine::parse_rho(c.rho, model.num_vars(), c.project);
    auto r = engine::check_destabilizer(model, c.m, rho);
    json j{{"command", "destab"}, {"model", model.name()}, {"m", c.m}, {"rho", ratlin::to_json(rho)}};
    j["destabilizes"] = r.destabilizes;
    j["min_weight"] = ratlin::to_string(r.min_weight);
    if (c.approx) j["min_weight_approx"] = approx(r.min_weight);
    j["basis"] = basiskit::candidate_to_json(model, r.basis);
    emit(c, dump(j), out);
    return r.destabilizes ? kOk : kFailed;
}

// --- scan ----------------------------------------------------------------------

json scan_cell(const Config& c, const models::CurveModel& model, int m) {
    const json key{{"version", kCacheVersion}, {"model", model.name()}, {"m", m}, {"budget_cuts", c.budget_cuts}};
    std::filesystem::path file;
    if (!c.cache.empty()) {
        file = std::filesystem::path(c.cache) / (sha256_hex(key.dump()) + ".json");
        std::ifstream in(file);
        if (in) {
            json cached = json::parse(in, nullptr, false);
            if (!cached.is_discarded() && cached.value("key", json()) == key) return cached["verdict"];
        }
    }
    auto v = engine::decide(model, m, decide_options(c));
    json verdict = v.to_json(false);
    if (!c.cache.empty()) {
        std::filesystem::create_directories(c.cache);
        std::ofstream f(file, std::ios::binary);
        f << json{{"key", key}, {"verdict", verdict}}.dump() << "\n";
    }
    return verdict;
}

int cmd_scan(const Config& c, std::ostream& out) {
    if (c.model.empty()) throw UsageError("--model is required");
    const auto kind = models::parse_kind(c.model);
    const auto gs = parse_int_range(c.g_range.empty() ? std::to_string(c.g) : c.g_range);
    const auto ms = parse_int_range(c.m_range.empty() ? std::to_string(c.m) : c.m_range);
    std::ostringstream csv;
    csv << "model,g,m,status,margin,slope,bielliptic_bound,cuts,certificate_sha256";
    if (c.approx) csv << ",margin_approx,slope_approx";
    csv << "\n";
    bool undecided = false;
    for (int g : gs) {
        std::optional<models::CurveModel> model;
        try {
            model = models::build_model(kind, g);
        } catch (const std::invalid_argument&) {
            continue;  // genus not admissible for this family
        }
        for (int m : ms) {
            json v = scan_cell(c, *model, m);
            const std::string status = v["status"];
            undecided = undecided || status == "Undecided";
            const Rational margin = ratlin::parse_rational(v["margin"].get<std::string>());
            std::string sha;
            if (v["witness"].contains("certificate")) {
                json cert = v["witness"]["certificate"];
                cert.erase("verified");
                sha = sha256_hex(cert.dump());
            }
            const Rational s = g >= 2 && m >= 2 ? engine::slope(g, m) : Rational(0);
            csv << models::kind_name(kind) << "," << g << "," << m << "," << status << "," << ratlin::to_string(margin)
                << "," << ratlin::to_string(s) << "," << ratlin::to_string(engine::bielliptic_bound(g, m)) << ","
                << v["cuts_used"].get<std::size_t>() << "," << sha;
            if (c.approx) csv << "," << approx(margin) << "," << approx(s);
            csv << "\n";
        }
    }
    emit(c, csv.str(), out);
    return undecided ? kBudget : kOk;
}

// --- report --------------------------------------------------------------------

int cmd_report(const Config& c, std::ostream& out) {
    auto model = model_of(c.model, c.g);
    json j{{"command", "report"}, {"model", model.descriptor()}, {"m", c.m}};
    j["hilbert_dim"] = model.hilbert_dim(c.m);
    auto rep = models::verify_model(model, c.m);
    j["model_checks_ok"] = rep.ok();
    auto v = engine::decide(model, c.m, decide_options(c));
    j["verdict"] = verdict_json(v, c);
    j["slope"] = ratlin::to_string(engine::slope(c.g, c.m));
    json cons = json::object();
    try {
        std::optional<basiskit::Certificate> cert;
        switch (model.kind()) {
            case models::Kind::Ribbon: cert = constructions::ribbon_certificate(c.g, c.m); break;
            case models::Kind::RosaryBicanonical: cert = constructions::rosary2_certificate(c.g, c.m); break;
            case models::Kind::Wiman: cert = constructions::wiman_certificate(c.g, c.m); break;
            case models::Kind::RosaryCanonical: {
                auto r = constructions::rosary1_decide(c.g, c.m);
                cons["semistable"] = r.semistable;
                cons["source"] = r.source;
                if (!r.semistable) {
                    cons["min_weight"] = ratlin::to_string(r.min_weight);
                    cons["bound"] = ratlin::to_string(r.bound);
                }
                cert = r.certificate;
                break;
            }
            case models::Kind::DoubleA: cons["note"] = "per-rho nonpositive bases; see `cert doubleA --rho`"; break;
        }
        if (cert) {
            auto cv = basiskit::verify_certificate(model, c.m, *cert);
            cons["certificate_ok"] = cv.ok;
            cons["mode"] = cert->mode == basiskit::CertMode::semistable ? "semistable" : "stable-pointed";
            cons["groups"] = cert->groups.size();
        }
    } catch (const std::invalid_argument& e) {
        cons["refused"] = e.what();
    }
    j["construction"] = cons;
    const bool ok = rep.ok() && v.status != engine::Status::Undecided;
    emit(c, dump(j), out);
    return v.status == engine::Status::Undecided ? kBudget : (ok ? kOk : kFailed);
}

void add_common(CLI::App* sub, Config& c, bool ranges = false) {
    sub->add_option("--model", c.model, "ribbon, doubleA, rosary1, rosary2 or wiman");
    if (ranges) {
        sub->add_option("--g", c.g_range, "genus range: a:b[:step] or a,b,c");
        sub->add_option("--m", c.m_range, "degree range");
    } else {
        sub->add_option("--g", c.g, "genus");
        sub->add_option("--m", c.m, "degree");
    }
    sub->add_option("--budget-cuts", c.budget_cuts, "cutting-plane budget");
    sub->add_option("--budget-members", c.budget_members, "members verified per multibasis");
    sub->add_option("--seed", c.seed, "member sampling seed");
    sub->add_option("--out", c.out, "write output to this file");
    sub->add_flag("--approx", c.approx, "add decimal renderings");
    sub->add_flag("--timing", c.timing, "include wall-clock timings");
}

}  // namespace

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int t = 0; t < len; ++t) {
        s.push_back(hex[md[t] >> 4]);
        s.push_back(hex[md[t] & 15]);
    }
    return s;
}

std::vector<int> parse_int_range(const std::string& text) {
    auto parts = [&](char sep) {
        std::vector<int> v;
        std::size_t from = 0;
        while (true) {
            const auto to = text.find(sep, from);
            const std::string part = text.substr(from, to == std::string::npos ? std::string::npos : to - from);
            std::size_t used = 0;
            int x = 0;
            try {
                x = std::stoi(part, &used);
            } catch (const std::logic_error&) {
                throw UsageError("bad range '" + text + "'");
            }
            if (used != part.size()) throw UsageError("bad range '" + text + "'");
            v.push_back(x);
            if (to == std::string::npos) return v;
            from = to + 1;
        }
    };
    if (text.find(',') != std::string::npos) return parts(',');
    const auto f = parts(':');
    if (f.size() == 1) return f;
    if (f.size() > 3) throw UsageError("bad range '" + text + "'");
    const int step = f.size() == 3 ? f[2] : 1;
    if (step <= 0) throw UsageError("range step must be positive");
    std::vector<int> out;
    for (int v = f[0]; v <= f[1]; v += step) out.push_back(v);
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Hilbert-point stability toolkit"};
    app.require_subcommand(1);

    auto* verify = app.add_subcommand("verify", "verify a model's restriction data or a basis family");
    add_common(verify, c);
    verify->add_option("--mmax", c.mmax, "largest degree to check");
    verify->add_option("--family", c.family, "family id, e.g. ribbon:Bminus");
    verify->add_option("--s", c.s);
    verify->add_option("--i", c.i);
    verify->add_option("--j", c.j);
    verify->add_option("--u", c.u);
    verify->add_option("--k", c.k);
    verify->add_option("--n", c.n);
    verify->add_option("--eps", c.eps);
    verify->add_option("--delta", c.delta);

    auto* cert = app.add_subcommand("cert", "emit a certificate from the explicit constructions");
    add_common(cert, c);
    cert->add_option("kind", c.kind, "model kind");
    cert->add_option("--rho", c.rho, "comma-separated rationals (doubleA)");
    cert->add_flag("--project", c.project, "project rho onto trace zero");
    cert->add_flag("--check", c.check, "verify the certificate and its members");

    auto* decide = app.add_subcommand("decide", "decide torus stability with the cutting-plane engine");
    add_common(decide, c);

    auto* destab = app.add_subcommand("destab", "test one rho as a destabilizer");
    add_common(destab, c);
    destab->add_option("--rho", c.rho, "comma-separated rationals");
    destab->add_flag("--project", c.project, "project rho onto trace zero");

    auto* scan = app.add_subcommand("scan", "decide a grid of (g, m) cells, CSV output");
    add_common(scan, c, true);
    scan->add_option("--cache", c.cache, "content-addressed verdict cache directory");

    auto* report = app.add_subcommand("report", "model checks, verdict and construction summary");
    add_common(report, c);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    try {
        if (verify->parsed()) return cmd_verify(c, out);
        if (cert->parsed()) return cmd_cert(c, out);
        if (decide->parsed()) return cmd_decide(c, out);
        if (destab->parsed()) return cmd_destab(c, out);
        if (scan->parsed()) return cmd_scan(c, out);
        if (report->parsed()) return cmd_report(c, out);
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}

}  // namespace hstab::cli
