// nfcli: dimension tables, conductors, packets, Whittaker values and the
// verification harness.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "nf/harness.hpp"

using json = nlohmann::ordered_json;
using namespace nf;

namespace {

enum Exit { kPass = 0, kUsage = 1, kMismatch = 2, kGuard = 3 };

struct Options {
    std::string format = "md";
    std::string backend = "mixed";
    int p = 0, f = 1, q = 3, N = 4;
    std::string family;
    int cchi = 1;
    bool chi2_trivial = false;
    int level = 1, rho0 = 0, member = 1;
    std::string chi;
    std::string m = "0..3";
    std::string tower = "both";
    bool explain = false;
    std::string kind = "F";
    std::string suite = "all";
    std::string qs = "3,5";
    bool q_only = false;  // --q given without --qs
    int max_m = 3;
    std::string psi = "all";
    u64 guard = 2000000;
    bool timing = false;
};

struct Table {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct Report {
    json j;
    std::vector<Table> tables;
    std::vector<std::string> notes;
    json explain;  // printed after the tables in csv/md
};

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

void render(const Report& r, const std::string& format) {
    if (format == "json") {
        std::cout << r.j.dump(2) << "\n";
        return;
    }
    bool first = true;
    for (auto& t : r.tables) {
        if (!first) std::cout << "\n";
        first = false;
        if (format == "csv") {
            for (size_t i = 0; i < t.columns.size(); ++i) std::cout << (i ? "," : "") << csv_cell(t.columns[i]);
            std::cout << "\n";
            for (auto& row : t.rows) {
                for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << csv_cell(row[i]);
                std::cout << "\n";
            }
        } else {
            if (!t.title.empty()) std::cout << "### " << t.title << "\n\n";
            std::cout << "|";
            for (auto& c : t.columns) std::cout << " " << c << " |";
            std::cout << "\n|";
            for (size_t i = 0; i < t.columns.size(); ++i) std::cout << "---|";
            std::cout << "\n";
            for (auto& row : t.rows) {
                std::cout << "|";
                for (auto& c : row) std::cout << " " << c << " |";
                std::cout << "\n";
            }
        }
    }
    const std::string lead = format == "csv" ? "# " : "";
    if (!r.notes.empty()) std::cout << (format == "csv" ? "" : "\n");
    for (auto& n : r.notes) std::cout << lead << n << "\n";
    if (!r.explain.is_null()) std::cout << r.explain.dump(2) << "\n";
}

RingParams ring_params(const Options& o) {
    RingParams r;
    r.backend = parse_backend(o.backend);
    if (o.p > 0) {
        r.p = o.p;
        r.f = o.f;
        return r;
    }
    for (int p = 2; p <= o.q; ++p) {
        int x = o.q, f = 0;
        while (x % p == 0) {
            x /= p;
            ++f;
        }
        if (f > 0) {
            if (x != 1) break;
            r.p = p;
            r.f = f;
            return r;
        }
    }
    throw std::invalid_argument("q must be a prime power");
}

std::pair<int, int> m_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int m = std::stoi(s);
            return {m, m};
        }
        int a = std::stoi(s.substr(0, dots)), b = std::stoi(s.substr(dots + 2));
        if (a < 0 || b < a) throw std::invalid_argument("");
        return {a, b};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad m range '" + s + "', expected a..b");
    }
}

std::vector<Tower> towers(const std::string& s) {
    if (s == "both") return {Tower::K, Tower::Kp};
    if (s == "K") return {Tower::K};
    if (s == "Kp" || s == "K'") return {Tower::Kp};
    throw std::invalid_argument("tower must be K, Kp or both");
}

ReprDescriptor descriptor(const Options& o) {
    if (o.family.empty()) throw std::invalid_argument("--family is required");
    ReprDescriptor d;
    d.family = parse_family(o.family);
    d.cchi = o.cchi;
    d.chi2_trivial = o.chi2_trivial;
    d.level = o.level;
    d.rho0 = o.rho0;
    d.member = o.member;
    validate(d);
    return d;
}

std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

json cyclo_json(const Cyclo& x) {
    json g = json::object();
    for (auto& [k, v] : x.terms()) g[std::to_string(k)] = v.get_str();
    auto z = x.to_complex();
    auto clean = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g%+.12gi", clean(z.real()), clean(z.imag()));
    return json{{"order", x.order()}, {"grades", g}, {"expr", x.str()}, {"approx", buf}};
}

json descriptor_json(const ReprDescriptor& d) {
    json j{{"family", family_name(d.family)}, {"label", d.label()}, {"member", member_name(d)}};
    switch (d.family) {
        case Family::RamPS: j["cchi"] = d.cchi; j["chi2_trivial"] = d.chi2_trivial; break;
        case Family::U11PS: j["cchi"] = d.cchi; break;
        case Family::SCUnram2:
        case Family::SCRam:
        case Family::U11SCRam: j["level"] = d.level; break;
        case Family::U11SCUnram: j["rho0"] = d.rho0; break;
        default: break;
    }
    return j;
}

json ring_json(const RingParams& r) { return json{{"backend", backend_name(r.backend)}, {"p", r.p}, {"f", r.f}, {"q", r.q()}}; }

// ---------------------------------------------------------------- ring-info

int cmd_ring_info(const Options& o, Report& rep) {
    RingParams rp = ring_params(o);
    if (o.N < 1) throw std::invalid_argument("N must be at least 1");
    auto R = make_ring(rp.backend, rp.p, rp.f, o.N);
    auto E = make_quad_ext(R);
    rep.j = ring_json(rp);
    rep.j["N"] = o.N;
    rep.j["eps_F"] = R->str(R->eps);
    rep.j["eps_E"] = E->str(E->epsE);
    Table t{"ring", {"key", "value"}, {}};
    for (auto& [k, v] : rep.j.items()) t.rows.push_back({k, v.is_string() ? v.get<std::string>() : v.dump()});
    Table g{"unit groups", {"group", "order", "invariant factors", "exponent"}, {}};
    json groups = json::array();
    for (auto kind : {UnitKind::F, UnitKind::E}) {
        auto G = unit_group(kind, rp.backend, rp.p, rp.f, o.N);
        std::ostringstream inv;
        for (size_t i = 0; i < G->d.size(); ++i) inv << (i ? "," : "") << G->d[i];
        std::string name = kind == UnitKind::F ? "(O/P^N)^x" : "(O_E/P^N)^x";
        groups.push_back({{"group", name}, {"order", G->size()}, {"invariant_factors", G->d}, {"exponent", G->exponent}});
        g.rows.push_back({name, std::to_string(G->size()), inv.str(), std::to_string(G->exponent)});
    }
    rep.j["unit_groups"] = groups;
    rep.tables = {t, g};
    return kPass;
}

// ---------------------------------------------------------------- chars

int cmd_chars(const Options& o, Report& rep) {
    RingParams rp = ring_params(o);
    UnitKind kind;
    if (o.kind == "F") kind = UnitKind::F;
    else if (o.kind == "E") kind = UnitKind::E;
    else throw std::invalid_argument("kind must be F or E");
    int n = std::max(1, o.level);
    auto all = enumerate_unit_chars(kind, rp.backend, rp.p, rp.f, n);
    rep.j = ring_json(rp);
    rep.j["kind"] = o.kind;
    rep.j["level"] = n;
    json arr = json::array();
    Table t{"characters of the unit group", {"id", "coords", "order", "conductor", "literal"}, {}};
    for (size_t i = 0; i < all.size(); ++i) {
        std::ostringstream c;
        for (size_t k = 0; k < all[i].a.size(); ++k) c << (k ? " " : "") << all[i].a[k];
        std::string lit = "table:" + std::to_string(i);
        arr.push_back({{"id", i}, {"coords", all[i].a}, {"order", all[i].order}, {"conductor", all[i].conductor}, {"literal", lit}});
        t.rows.push_back({std::to_string(i), c.str(), std::to_string(all[i].order), std::to_string(all[i].conductor), lit});
    }
    rep.j["characters"] = arr;
    rep.tables = {t};
    return kPass;
}

// ---------------------------------------------------------------- dim-table

json explain_json(const MackeyResult& r) {
    json cells = json::array();
    for (auto& c : r.cells)
        cells.push_back({{"shell", c.shell}, {"distance", c.distance}, {"point", c.point}, {"orbit_size", c.orbit_size},
                         {"image_size", c.image_size}, {"contribution", c.contribution}});
    return json{{"dim", r.dim}, {"shells_scanned", r.shells}, {"cells", cells}};
}

int cmd_dim_table(const Options& o, Report& rep) {
    RingParams rp = ring_params(o);
    ReprDescriptor d = descriptor(o);
    auto [m0, m1] = m_range(o.m);
    auto tws = towers(o.tower);
    Realization R = realize(d, rp, o.chi);
    bool all_match = true;
    json rows = json::array();
    json explain = json::array();
    Table t{R.desc.label(), {"m", "K-dim", "K'-dim", "formula-dim", "match"}, {}};
    for (int m = m0; m <= m1; ++m) {
        std::map<Tower, std::optional<int>> got;
        std::map<Tower, int> want;
        bool match = true, checked = false;
        json row{{"m", m}};
        for (Tower tw : tws) {
            MackeyResult mr;
            got[tw] = brute_dim(R, m, tw, o.explain ? &mr : nullptr, o.guard);
            want[tw] = dim_formula(R.desc, m, tw);
            const std::string key = tw == Tower::K ? "K" : "Kp";
            row[key + "_dim"] = got[tw] ? json(*got[tw]) : json(nullptr);
            row[key + "_formula"] = want[tw];
            if (got[tw]) {
                checked = true;
                if (*got[tw] != want[tw]) match = false;
            }
            if (o.explain && R.method == Method::Mackey)
                explain.push_back(json{{"m", m}, {"tower", tower_name(tw)}, {"mackey", explain_json(mr)}});
        }
        row["match"] = checked ? json(match) : json(nullptr);
        all_match = all_match && match;
        rows.push_back(row);
        auto cell = [&](Tower tw) { return got.count(tw) ? opt_int(got[tw]) : std::string("-"); };
        std::string fd;
        for (Tower tw : tws) fd += (fd.empty() ? "" : " / ") + std::to_string(want[tw]);
        t.rows.push_back({std::to_string(m), cell(Tower::K), cell(Tower::Kp), fd, checked ? (match ? "yes" : "NO") : "n/a"});
    }
    const ConductorInfo ci = conductor_formula(R.desc);
    rep.j = json{{"command", "dim-table"}, {"ring", ring_json(rp)}, {"descriptor", descriptor_json(R.desc)},
                 {"method", method_name(R.method)}, {"note", R.note}, {"eta_constraint", eta_constraint(R.desc)},
                 {"conductor", ci.conductor}, {"rows", rows}, {"all_match", all_match}};
    if (o.explain) {
        rep.j["explain"] = explain;
        rep.explain = explain;
    }
    rep.tables = {t};
    rep.notes.push_back("method: " + std::string(method_name(R.method)) + (R.note.empty() ? "" : " (" + R.note + ")"));
    rep.notes.push_back("eta: " + eta_constraint(R.desc));
    if (tws.size() == 2) rep.notes.push_back("formula-dim: K / K'");
    return all_match ? kPass : kMismatch;
}

// ---------------------------------------------------------------- conductor

int cmd_conductor(const Options& o, Report& rep) {
    RingParams rp = ring_params(o);
    ReprDescriptor d = descriptor(o);
    Realization R = realize(d, rp, o.chi);
    const ConductorInfo ci = conductor_formula(R.desc);
    const int mmax = std::max(o.max_m, ci.conductor);
    rep.j = json{{"command", "conductor"}, {"ring", ring_json(rp)}, {"descriptor", descriptor_json(R.desc)},
                 {"formula", {{"conductor", ci.conductor}, {"achieving", ci.achieving}, {"newform_dim", ci.newform_dim},
                              {"newform_tower", tower_name(ci.newform_tower)}}}};
    Table t{"conductor of " + R.desc.label(), {"quantity", "computed", "formula", "match"}, {}};
    bool ok = true;
    auto row = [&](const std::string& name, const std::string& got, const std::string& want) {
        bool m = got == want;
        ok = ok && m;
        t.rows.push_back({name, got, want, m ? "yes" : "NO"});
    };
    // first non-zero level of the member, from the brute-force dimensions
    std::optional<int> first;
    int newform = 0;
    if (R.method != Method::None) {
        for (int m = 0; m <= mmax && !first; ++m)
            for (Tower tw : {Tower::K, Tower::Kp}) {
                int v = *brute_dim(R, m, tw, nullptr, o.guard);
                if (v > 0) {
                    first = m;
                    newform = std::max(newform, v);
                }
            }
        rep.j["computed"] = {{"first_nonzero_level", first ? json(*first) : json(nullptr)}, {"newform_dim", newform}};
        row("first non-zero level", opt_int(first), std::to_string(ci.conductor));
        row("newform dimension", std::to_string(newform), std::to_string(ci.newform_dim));
    } else {
        rep.notes.push_back("no brute force for this family: " + R.note);
    }
    if (R.method == Method::FixedSpace) {
        // eta search over all characters of the unit group
        int eta_level = std::max(1, R.data.chi.conductor());
        auto S = eta_conductor_search(R.data, mmax, eta_level);
        json ach = json::array();
        for (auto& e : S.achieving) ach.push_back(e.label());
        rep.j["eta_search"] = {{"conductor", S.conductor}, {"achieving", ach}, {"characters_scanned", S.table.size()}};
        row("eta-search conductor", std::to_string(S.conductor), std::to_string(ci.conductor));
        std::vector<UnitChar> want;
        const UnitChar& chi = R.data.chi.unit;
        const int n = S.achieving.empty() ? eta_level : S.achieving[0].n();
        if (chi.conductor > 0 || !chi.is_trivial()) {
            UnitChar a = change_level(chi, n);
            UnitChar b = R.data.flavor == Flavor::U11 ? change_level(galois_twist(chi).inverse(), n) : change_level(chi.inverse(), n);
            want.push_back(a);
            if (!(b == a)) want.push_back(b);
        } else {
            want.push_back(trivial_unit_char(chi.G->kind, rp.backend, rp.p, rp.f, n));
        }
        bool same = S.achieving.size() == want.size();
        for (auto& w : want) same = same && std::find(S.achieving.begin(), S.achieving.end(), w) != S.achieving.end();
        std::string wname = R.data.flavor == Flavor::U11 ? "{chibar, s-chibar^-1}" : "{chi, chi^-1}";
        if (chi.is_trivial()) wname = "{trivial}";
        row("achieving set = " + wname, std::to_string(S.achieving.size()) + (same ? " (equal)" : " (differs)"),
            std::to_string(want.size()) + " (equal)");
        rep.j["achieving_matches"] = same;
    }
    rep.j["all_match"] = ok;
    rep.tables = {t};
    rep.notes.push_back("stated achieving condition: " + ci.achieving);
    if (!R.note.empty()) rep.notes.push_back(R.note);
    return ok ? kPass : kMismatch;
}

// ---------------------------------------------------------------- packet

int cmd_packet(const Options& o, Report& rep) {
    RingParams rp = ring_params(o);
    ReprDescriptor d = descriptor(o);
    auto names = member_names(d.family);
    if (names.size() < 2) throw std::invalid_argument(std::string(family_name(d.family)) + " is not a packet family");
    auto [m0, m1] = m_range(o.m);
    bool ok = true;
    json members = json::array();
    Table dims{"member dimensions", {"member", "tower"}, {}};
    for (int m = m0; m <= m1; ++m) dims.columns.push_back("m=" + std::to_string(m));
    Table gen{"genericity", {"member", "computed", "stated"}, {}};
    auto stated = genericity_assignment(d);
    for (int k = 1; k <= (int)names.size(); ++k) {
        ReprDescriptor dk = d;
        dk.member = k;
        Realization R = realize(dk, rp, o.chi);
        json mj{{"member", names[k - 1]}, {"method", method_name(R.method)}};
        for (Tower tw : {Tower::K, Tower::Kp}) {
            std::vector<std::string> row{names[k - 1], tower_name(tw)};
            json arr = json::array(), farr = json::array();
            for (int m = m0; m <= m1; ++m) {
                auto g = brute_dim(R, m, tw, nullptr, o.guard);
                int w = dim_formula(R.desc, m, tw);
                if (g && *g != w) ok = false;
                arr.push_back(g ? json(*g) : json(nullptr));
                farr.push_back(w);
                row.push_back(g ? (std::to_string(*g) + (*g == w ? "" : " (formula " + std::to_string(w) + ")")) : std::to_string(w) + " (formula)");
            }
            mj[std::string(tower_name(tw)) + "_dims"] = arr;
            mj[std::string(tower_name(tw)) + "_formula"] = farr;
            dims.rows.push_back(row);
        }
        std::string st;
        json sj = json::array();
        for (auto& [a, who] : stated)
            if (who == names[k - 1]) {
                st += (st.empty() ? "" : ", ") + std::string(psi_class_name(a));
                sj.push_back(psi_class_name(a));
            }
        mj["stated_generic"] = sj;
        std::string cg = "-";
        if (auto G = brute_genericity(R)) {
            cg.clear();
            json cj = json::array();
            for (auto& [a, g] : *G)
                if (g) {
                    cg += (cg.empty() ? "" : ", ") + std::string(psi_class_name(a));
                    cj.push_back(psi_class_name(a));
                }
            for (auto& [a, who] : stated)
                if (G->at(a) != (who == names[k - 1])) ok = false;
            mj["computed_generic"] = cj;
        }
        gen.rows.push_back({names[k - 1], cg, st});
        members.push_back(mj);
    }
    rep.j = json{{"command", "packet"}, {"ring", ring_json(rp)}, {"family", family_name(d.family)},
                 {"m_range", {m0, m1}}, {"members", members}, {"all_match", ok}};
    rep.tables = {dims, gen};
    return ok ? kPass : kMismatch;
}

// ---------------------------------------------------------------- whittaker

int cmd_whittaker(const Options& o, Report& rep) {
    RingParams rp = ring_params(o);
    ReprDescriptor d = descriptor(o);
    Realization R = realize(d, rp, o.chi);
    if (R.method == Method::None || R.method == Method::Mackey)
        throw std::invalid_argument("Whittaker functionals are computed on principal series models only");
    const ConductorInfo ci = conductor_formula(R.desc);
    int m = ci.conductor;
    if (o.m != "0..3") m = m_range(o.m).first;
    std::vector<PsiClass> classes;
    if (o.psi == "all") classes = {PsiClass::One, PsiClass::Eps, PsiClass::Pi, PsiClass::EpsPi};
    else classes = {parse_psi_class(o.psi)};
    const Tower tw = towers(o.tower == "both" ? "K" : o.tower).front();
    auto V = member_space(R, m, tw);
    json vals = json::array();
    Table t{"Whittaker functional on the basis of the fixed space, " + R.desc.label() + ", m = " + std::to_string(m) + " " +
                tower_name(tw),
            {"vector", "scaling", "value", "approx", "radius"}, {}};
    for (PsiClass a : classes) {
        int radius = -1;
        CVec v;
        if (R.method == Method::FixedSpace && V->ambient) {
            auto row = whittaker_row(*V->ambient, a);
            radius = row.radius;
            v = row.values;
        } else {
            v = whittaker_on(*V, a);
            if (V->ambient) radius = whittaker_row(*V->ambient, a).radius;
        }
        for (size_t i = 0; i < v.size(); ++i) {
            json cj = cyclo_json(v[i]);
            vals.push_back({{"vector", i}, {"value", cj}, {"radius", radius}, {"scaling", psi_class_name(a)}});
            t.rows.push_back({std::to_string(i), psi_class_name(a), v[i].str(), cj["approx"].get<std::string>(), std::to_string(radius)});
        }
    }
    rep.j = json{{"command", "whittaker"}, {"ring", ring_json(rp)}, {"descriptor", descriptor_json(R.desc)}, {"m", m},
                 {"tower", tower_name(tw)}, {"dim", V->dim()}, {"values", vals}};
    rep.tables = {t};
    if (V->dim() == 0) rep.notes.push_back("the fixed space is zero at this level");
    return kPass;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const Options& o, Report& rep) {
    SuiteOptions so;
    so.qs.clear();
    std::stringstream ss(o.q_only ? std::to_string(o.q) : o.qs);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            so.qs.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --qs list '" + o.qs + "'");
        }
    }
    so.max_m = o.max_m;
    auto res = verify_suite(o.suite, so);
    bool ok = true;
    json suites = json::array();
    Table t{"verify " + o.suite, {"suite", "cell", "pass", "detail"}, {}};
    for (auto& S : res) {
        json cells = json::array();
        for (auto& c : S.checks) {
            cells.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
            t.rows.push_back({S.name, c.name, c.pass ? "pass" : "FAIL", c.detail});
        }
        json sj{{"name", S.name}, {"pass", S.pass()}, {"cells", cells}};
        if (o.timing) sj["seconds"] = S.seconds;
        suites.push_back(sj);
        ok = ok && S.pass();
    }
    rep.j = json{{"command", "verify"}, {"suite", o.suite}, {"pass", ok}, {"suites", suites}};
    rep.tables = {t};
    rep.notes.push_back(ok ? "all cells pass" : "FAILURES present");
    return ok ? kPass : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nfcli: fixed vectors, conductors and Whittaker functionals for SL2 and U(1,1)"};
    app.set_config("--config", "", "key=value configuration file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default();
    Options o;
    app.add_option("--format", o.format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
    app.add_option("--backend", o.backend, "mixed or equal")->check(CLI::IsMember({"mixed", "equal"}));
    app.add_option("--p", o.p, "residue characteristic (overrides --q)");
    app.add_option("--f", o.f, "residue degree, used with --p");
    app.add_option("--q", o.q, "residue field size");
    app.add_option("--N", o.N, "precision for ring-info");
    app.add_option("--family", o.family, "representation family");
    app.add_option("--cchi", o.cchi, "conductor of chi (ram-ps) or of chibar|F (u11-ps)");
    app.add_flag("--chi2-trivial", o.chi2_trivial, "ram-ps with chi^2 trivial on units");
    app.add_option("--level", o.level, "supercuspidal level, or the character level for chars");
    app.add_option("--rho0", o.rho0, "minimal depth of u11-sc-unram");
    app.add_option("--member", o.member, "packet member (1-based)");
    app.add_option("--chi", o.chi, "character literal: trivial, legendre, omega_EF, unramified:zeta=M:a, table:<id>");
    app.add_option("--m", o.m, "level range a..b");
    app.add_option("--tower", o.tower, "K, Kp or both");
    app.add_flag("--explain", o.explain, "dump Mackey per-cell contributions as JSON");
    app.add_option("--kind", o.kind, "F or E (chars)");
    app.add_option("--suite", o.suite, "principal-series, theta-crosscheck, whittaker, supercuspidal, formulas, properties, all");
    app.add_option("--qs", o.qs, "residue field sizes for verify, comma separated");
    app.add_option("--max-m", o.max_m, "largest level for verify and conductor searches");
    app.add_option("--psi", o.psi, "psi, psi_eps, psi_pi, psi_eps_pi or all");
    app.add_option("--guard", o.guard, "point budget before exit code 3");
    app.add_flag("--timing", o.timing, "include timings in verify output");
    bool print_config = false;
    app.add_flag("--print-config", print_config, "print the effective configuration and exit")->configurable(false);

    std::map<std::string, std::function<int(const Options&, Report&)>> cmds = {
        {"ring-info", cmd_ring_info}, {"chars", cmd_chars},     {"dim-table", cmd_dim_table}, {"conductor", cmd_conductor},
        {"packet", cmd_packet},       {"whittaker", cmd_whittaker}, {"verify", cmd_verify}};
    const std::map<std::string, std::string> help = {
        {"ring-info", "ring parameters and unit groups"},
        {"chars", "enumerate characters of a unit group"},
        {"dim-table", "fixed-vector dimensions against the closed forms"},
        {"conductor", "conductor and achieving characters"},
        {"packet", "packet member dimensions and genericity"},
        {"whittaker", "Whittaker functionals on a fixed space"},
        {"verify", "verification suites"}};
    for (auto& [name, h] : help) app.add_subcommand(name, h)->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }
    if (print_config) {
        std::cout << app.config_to_str(true);
        return kPass;
    }
    std::string name = app.get_subcommands().front()->get_name();
    o.q_only = app.get_option("--q")->count() > 0 && app.get_option("--qs")->count() == 0;
    Report rep;
    int code;
    try {
        code = cmds.at(name)(o, rep);
    } catch (const GuardError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kGuard;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    render(rep, o.format);
    return code;
}
