// kisinlab: command-line front end for the lattice computations.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kisinlab/raynaud.hpp"

using namespace kisinlab;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kMismatch = 2, kPrecision = 3 };

struct Options {
    int p = 3;
    int ext = 1;
    std::string matrix;
    std::string normal_form;
    int e = 1;
    int r1 = 0;
    int r2 = 0;
    long long budget = kDefaultBudget;
    int prec = 64;
    int retries = 3;
    std::string format;
    std::string out;
    std::string suite = "all";
    int emax = 8;
    bool verify = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const FieldCtx& field(const Options& o) { return FieldCtx::get(o.p, o.ext); }

NormalForm normal_form(const Options& o)
{
    if (o.normal_form.empty()) throw UsageError("--normal-form is required");
    NormalForm nf = NormalForm::parse(field(o), o.normal_form);
    nf.validate();
    return nf;
}

VParams params(const Options& o)
{
    VParams v{o.e, o.r1, o.r2};
    v.validate();
    return v;
}

std::string point(const Lattice& L) { return lattice_to_point(L).to_string(); }

json point_list(const std::vector<Lattice>& v)
{
    json out = json::array();
    for (const auto& L : v) out.push_back(point(L));
    return out;
}

json divisors(const ElemDiv& d) { return json::array({d.a, d.b}); }

json header(const Options& o, const NormalForm* nf)
{
    json j;
    j["schema"] = "1";
    j["p"] = o.p;
    j["ext"] = o.ext;
    if (nf) j["normal_form"] = nf->to_string();
    return j;
}

json vparams(const VParams& v) { return {{"e", v.e}, {"r1", v.r1}, {"r2", v.r2}, {"dprime", v.dprime()}}; }

std::string csv(const std::vector<std::vector<std::string>>& rows)
{
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            const bool quote = row[i].find_first_of(",\"") != std::string::npos;
            if (!quote) {
                out += row[i];
                continue;
            }
            out += '"';
            for (char c : row[i]) out += c == '"' ? std::string("\"\"") : std::string(1, c);
            out += '"';
        }
        out += '\n';
    }
    return out;
}

struct Result {
    std::string text;
    int status = kOk;
};

Result emit_json(const json& j, int status = kOk) { return {j.dump(2) + "\n", status}; }

bool want_csv(const Options& o)
{
    if (o.format.empty() || o.format == "json") return false;
    if (o.format == "csv") return true;
    throw UsageError("--format must be json or csv here");
}

// ---- subcommands

Result cmd_classify(const Options& o)
{
    if (o.matrix.empty()) throw UsageError("--matrix is required");
    const FieldCtx& F = field(o);
    NormalForm nf;
    for (int attempt = 0, prec = o.prec;; ++attempt, prec *= 2) {
        try {
            nf = classify({&F, Mat2::parse(F, o.matrix), prec});
            break;
        } catch (const InsufficientPrecision&) {
            if (attempt >= o.retries) throw;
        }
    }
    json j = header(o, &nf);
    j["case"] = case_name(nf.kind);
    j["a"] = nf.a.to_string();
    j["s"] = nf.s;
    if (nf.reducible()) {
        j["b"] = nf.b.to_string();
        j["t"] = nf.t;
    }
    if (nf.kind == Case::NonSplit) j["gamma"] = nf.gamma.to_string();
    return emit_json(j);
}

Result cmd_enumerate(const Options& o)
{
    NormalForm nf = normal_form(o);
    VParams v = params(o);
    AdmissibleSet S = enumerate_admissible(nf, v, o.budget);
    if (want_csv(o)) {
        std::vector<std::vector<std::string>> rows = {{"point", "lattice", "a", "b"}};
        for (const auto& L : S.points) {
            ElemDiv d = phi_divisors(nf.module(), L);
            rows.push_back({point(L), L.to_string(), std::to_string(d.a), std::to_string(d.b)});
        }
        return {csv(rows)};
    }
    json j = header(o, &nf);
    j["params"] = vparams(v);
    j["m"] = S.m_v ? json(*S.m_v) : json(nullptr);
    j["radius"] = rat_string(S.radius);
    j["count"] = S.points.size();
    j["points"] = point_list(S.points);
    return emit_json(j);
}

Result cmd_strata(const Options& o)
{
    NormalForm nf = normal_form(o);
    VParams v = params(o);
    auto st = stratify(enumerate_admissible(nf, v, o.budget));
    int status = kOk;
    for (const auto& r : st)
        if ((r.predicted_count && *r.predicted_count != r.actual_count) ||
            (nf.kind == Case::Simple && r.predicted_nonempty != (r.actual_count > 0)))
            status = kMismatch;
    auto opt = [](const auto& x) { return x ? std::to_string(*x) : std::string(); };
    if (want_csv(o)) {
        std::vector<std::vector<std::string>> rows = {
            {"a", "b", "predicted_nonempty", "predicted_dim", "predicted_count", "actual_count"}};
        for (const auto& r : st)
            rows.push_back({std::to_string(r.divisors.a), std::to_string(r.divisors.b),
                            r.predicted_nonempty ? "true" : "false", opt(r.predicted_dim), opt(r.predicted_count),
                            std::to_string(r.actual_count)});
        return {csv(rows), status};
    }
    json j = header(o, &nf);
    j["params"] = vparams(v);
    j["strata"] = json::array();
    for (const auto& r : st) {
        json s;
        s["divisors"] = divisors(r.divisors);
        s["predicted_nonempty"] = r.predicted_nonempty;
        s["predicted_dim"] = r.predicted_dim ? json(*r.predicted_dim) : json(nullptr);
        s["predicted_count"] = r.predicted_count ? json(*r.predicted_count) : json(nullptr);
        s["actual_count"] = r.actual_count;
        s["members"] = point_list(r.members);
        j["strata"].push_back(s);
    }
    return emit_json(j, status);
}

Result cmd_components(const Options& o)
{
    NormalForm nf = normal_form(o);
    VParams v = params(o);
    ComponentReport C = components(enumerate_admissible(nf, v, o.budget));
    const int status = C.agreement ? kOk : kMismatch;
    if (want_csv(o)) {
        std::vector<std::vector<std::string>> rows = {{"label", "point"}};
        for (const auto& [label, pts] : C.members)
            for (const auto& L : pts) rows.push_back({label, point(L)});
        return {csv(rows), status};
    }
    json j = header(o, &nf);
    j["params"] = vparams(v);
    j["members"] = json::object();
    for (const auto& [label, pts] : C.members) j["members"][label] = point_list(pts);
    j["predictions"] = json::array();
    for (const auto& pr : C.predictions)
        j["predictions"].push_back(
            {{"label", pr.label}, {"shape", shape_name(pr.shape)}, {"count", pr.count}, {"where", point_list(pr.where)}});
    j["agreement"] = C.agreement;
    j["mismatches"] = C.mismatches;
    return emit_json(j, status);
}

Result cmd_x0(const Options& o)
{
    NormalForm nf = normal_form(o);
    if (!nf.reducible()) throw UsageError("x0 needs a reducible normal form");
    VParams v = params(o);
    AdmissibleSet S = enumerate_admissible(nf, v, o.budget);
    ComponentReport C = components(S);
    std::vector<Lattice> observed;
    if (auto it = C.members.find("X0"); it != C.members.end()) observed = it->second;
    ReportDiff d = diff_reports(predicted_x0_points(nf, v, o.budget), observed);
    auto D = predict_x0_decomposition(nf, v);
    const int status = d.empty() ? kOk : kMismatch;
    if (want_csv(o)) {
        std::vector<std::vector<std::string>> rows = {{"descriptor", "component", "center", "radius"}};
        for (const auto& desc : D)
            for (const auto& b : desc.balls)
                rows.push_back({desc.name, desc.component ? "true" : "false", b.center.to_string(),
                                std::to_string(b.radius)});
        return {csv(rows), status};
    }
    json j = header(o, &nf);
    j["params"] = vparams(v);
    j["descriptors"] = json::array();
    for (const auto& desc : D) {
        json balls = json::array();
        for (const auto& b : desc.balls) balls.push_back({{"center", b.center.to_string()}, {"radius", b.radius}});
        j["descriptors"].push_back({{"name", desc.name}, {"component", desc.component}, {"balls", balls}});
    }
    j["observed"] = point_list(observed);
    j["only_predicted"] = point_list(d.only_predicted);
    j["only_observed"] = point_list(d.only_observed);
    j["match"] = d.empty();
    return emit_json(j, status);
}

Result cmd_raynaud(const Options& o)
{
    NormalForm nf = normal_form(o);
    if (o.e < 1) throw UsageError("--e must be positive");
    ExtremalReport R = extremal_report(nf, o.e, o.budget);
    int status = kOk;
    json j = header(o, &nf);
    j["e"] = o.e;
    j["min"] = {{"lattice", R.min.to_string()}, {"point", point(R.min)}, {"divisors", divisors(R.min_div)}};
    j["max"] = {{"lattice", R.max.to_string()}, {"point", point(R.max)}, {"divisors", divisors(R.max_div)}};
    j["coincide"] = R.coincide;
    if (R.predicted)
        j["predicted"] = {{"min", divisors(R.predicted->min)},
                          {"max", divisors(R.predicted->max)},
                          {"min_row", R.predicted->min_row},
                          {"max_row", R.predicted->max_row}};
    else
        j["predicted"] = "no closed form for non-split modules";
    j["divisors_agree"] = R.divisors_agree;
    if (o.verify) {
        const bool ok = verify_extremal(nf, o.e, R, o.budget);
        j["verified"] = ok;
        if (o.ext == 1) {
            const bool descent = descent_check(nf, o.e, FieldCtx::get(o.p, 2), o.budget);
            j["descent_ok"] = descent;
            if (!descent) status = kMismatch;
        }
        if (!ok) status = kMismatch;
    }
    return emit_json(j, status);
}

// ---- verify suites: small versions of the dual-path comparisons

struct Suite {
    long long checked = 0;
    std::vector<std::string> failures;
    void check(bool ok, const std::string& what)
    {
        ++checked;
        if (!ok && failures.size() < 10) failures.push_back(what);
        if (!ok && failures.size() == 10) failures.push_back("...");
    }
};

std::vector<NormalForm> simple_forms(const FieldCtx& F)
{
    std::vector<NormalForm> out;
    for (int s = 0; s < F.p() * F.p() - 1; ++s)
        if (s % (F.p() + 1)) out.push_back(NormalForm::simple(FieldElem::one(F), s));
    return out;
}

std::vector<NormalForm> reducible_forms(const FieldCtx& F)
{
    const FieldCtx& Fp = FieldCtx::get(F.p(), 1);
    std::vector<NormalForm> out;
    const FieldElem one = FieldElem::one(Fp);
    for (int s = 0; s < F.p() - 1; ++s)
        for (int t = 0; t < F.p() - 1; ++t) {
            out.push_back(NormalForm::split(one, s, one, t).over(F));
            out.push_back(NormalForm::split(one, s, FieldElem(Fp, 2), t).over(F));
            NormalForm nf = maximize_gamma({&Fp, NormalForm::nonsplit(one, s, one, t, Series::u_pow(Fp, 0)).matrix(),
                                            kExact})
                                .nf;
            if (nf.kind == Case::NonSplit) out.push_back(nf.over(F));
        }
    return out;
}

std::vector<VParams> sweep(int emax)
{
    std::vector<VParams> out;
    for (int e = 1; e <= emax; ++e)
        for (int r1 = 0; r1 <= e; ++r1)
            for (int r2 = 0; r2 <= r1; ++r2) out.push_back({e, r1, r2});
    return out;
}

std::string tag(const NormalForm& nf, const VParams& v)
{
    return nf.to_string() + " e=" + std::to_string(v.e) + " r=(" + std::to_string(v.r1) + "," + std::to_string(v.r2) +
           ")";
}

Suite suite_distances(const Options& o)
{
    Suite s;
    const FieldCtx& F = field(o);
    auto forms = simple_forms(F);
    for (const auto& nf : reducible_forms(F)) forms.push_back(nf);
    for (const auto& nf : forms) {
        const PhiModule phi = nf.module();
        const BuildingPoint P = fixed_point(nf);
        for (int y : {0, 1})
            for_each_lattice_in_ball(
                BuildingPoint::make(P.x, Rat(y), P.q), Rat(4), y,
                [&](const Lattice& L) {
                    ElemDiv d = phi_divisors(phi, L);
                    auto [d1, d2] = predicted_phi_distances(nf, lattice_to_point(L));
                    s.check(d1 == Rat(d.d1()) && d2 == Rat(d.d2()), nf.to_string() + " " + L.to_string());
                },
                o.budget);
    }
    return s;
}

Suite suite_strata(const Options& o)
{
    Suite s;
    for (const auto& nf : simple_forms(field(o)))
        for (const auto& v : sweep(o.emax))
            for (const auto& r : stratify(enumerate_admissible(nf, v, o.budget)))
                s.check(r.predicted_count && *r.predicted_count == r.actual_count &&
                            r.predicted_nonempty == (r.actual_count > 0),
                        tag(nf, v) + " (" + std::to_string(r.divisors.a) + "," + std::to_string(r.divisors.b) + ")");
    return s;
}

Suite suite_components(const Options& o)
{
    Suite s;
    for (const auto& nf : reducible_forms(field(o)))
        for (const auto& v : sweep(o.emax)) {
            ComponentReport C = components(enumerate_admissible(nf, v, o.budget));
            int labels = 0;
            for (const auto& [label, pts] : C.members) labels += label != "X0" && !pts.empty();
            s.check(C.agreement && labels <= 2, tag(nf, v));
        }
    return s;
}

Suite suite_x0(const Options& o)
{
    Suite s;
    for (const auto& nf : reducible_forms(field(o)))
        for (const auto& v : sweep(o.emax)) {
            ComponentReport C = components(enumerate_admissible(nf, v, o.budget));
            std::vector<Lattice> x0;
            if (auto it = C.members.find("X0"); it != C.members.end()) x0 = it->second;
            s.check(diff_reports(predicted_x0_points(nf, v, o.budget), x0).empty(), tag(nf, v));
        }
    return s;
}

Suite suite_raynaud(const Options& o)
{
    Suite s;
    const FieldCtx& F = FieldCtx::get(o.p, 1);
    auto forms = simple_forms(F);
    for (const auto& nf : reducible_forms(F))
        if (nf.kind != Case::NonSplit) forms.push_back(nf);
    for (const auto& nf : forms)
        for (int e = 1; e <= o.emax; ++e) {
            ExtremalReport R;
            try {
                R = extremal_report(nf, e, o.budget);
            } catch (const NoAdmissibleLattice&) {
                continue;
            }
            const std::string t = nf.to_string() + " e=" + std::to_string(e);
            s.check(verify_extremal(nf, e, R, o.budget), t + " containment or divisors");
            if (e < o.p - 1) s.check(R.coincide, t + " min and max differ");
            if (e <= 3) s.check(descent_check(nf, e, FieldCtx::get(o.p, 2), o.budget), t + " descent");
        }
    return s;
}

Result cmd_verify(const Options& o)
{
    const std::map<std::string, Suite (*)(const Options&)> suites = {
        {"distances", suite_distances}, {"strata", suite_strata}, {"components", suite_components},
        {"x0", suite_x0},               {"raynaud", suite_raynaud}};
    std::vector<std::string> run;
    if (o.suite == "all")
        for (const auto& [name, f] : suites) run.push_back(name);
    else if (suites.count(o.suite))
        run.push_back(o.suite);
    else
        throw UsageError("unknown suite " + o.suite);
    json j = header(o, nullptr);
    j["emax"] = o.emax;
    j["suites"] = json::object();
    bool ok = true;
    std::vector<std::vector<std::string>> rows = {{"suite", "pass", "checked", "failures"}};
    for (const auto& name : run) {
        Suite s = suites.at(name)(o);
        const bool pass = s.failures.empty();
        ok = ok && pass;
        j["suites"][name] = {{"pass", pass}, {"checked", s.checked}, {"failures", s.failures}};
        rows.push_back({name, pass ? "true" : "false", std::to_string(s.checked), std::to_string(s.failures.size())});
    }
    j["pass"] = ok;
    if (want_csv(o)) return {csv(rows), ok ? kOk : kMismatch};
    return emit_json(j, ok ? kOk : kMismatch);
}

// ---- render

Result cmd_render(const Options& o)
{
    NormalForm nf = normal_form(o);
    VParams v = params(o);
    const std::string fmt = o.format.empty() ? "dot" : o.format;
    if (fmt != "dot" && fmt != "ascii") throw UsageError("--format must be dot or ascii for render");
    AdmissibleSet S = enumerate_admissible(nf, v, o.budget);
    std::map<Lattice, std::string> label;
    if (nf.reducible())
        for (const auto& [name, pts] : components(S).members)
            for (const auto& L : pts) label[L] = name;
    else
        for (const auto& r : stratify(S))
            for (const auto& L : r.members) label[L] = "(" + std::to_string(r.divisors.a) + "," + std::to_string(r.divisors.b) + ")";

    std::string caption = nf.to_string() + " e=" + std::to_string(v.e) + " r=(" + std::to_string(v.r1) + "," +
                          std::to_string(v.r2) + ")";
    std::vector<Lattice> ball;
    if (!S.m_v)
        caption += ": empty, the congruence for m(v) fails";
    else {
        ball = lattices_in_ball(fixed_point(nf), S.radius, *S.m_v, o.budget);
        caption += ", y=" + std::to_string(*S.m_v) + ", " + std::to_string(S.points.size()) + " admissible";
    }
    if (ball.size() > 4000) throw UsageError("ball has " + std::to_string(ball.size()) + " vertices, too many to draw");

    std::ostringstream out;
    if (fmt == "ascii") {
        out << caption << "\n";
        for (const auto& L : ball) {
            auto it = label.find(L);
            out << (it != label.end() ? "* " : "  ") << point(L);
            if (it != label.end()) out << "  " << it->second;
            out << "\n";
        }
        return {out.str()};
    }
    out << "graph building {\n  label=\"" << caption << "\";\n  node [shape=point];\n";
    std::vector<BuildingPoint> pts;
    for (std::size_t i = 0; i < ball.size(); ++i) {
        pts.push_back(lattice_to_point(ball[i]));
        out << "  n" << i << " [tooltip=\"" << pts[i].to_string() << "\"";
        if (auto it = label.find(ball[i]); it != label.end())
            out << ", shape=circle, style=filled, width=0.15, xlabel=\"" << it->second << "\"";
        out << "];\n";
    }
    // neighbours in the tree of fixed y are at distance 2
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t k = i + 1; k < pts.size(); ++k)
            if (tree_d1(pts[i], pts[k]) == Rat(2)) out << "  n" << i << " -- n" << k << ";\n";
    out << "}\n";
    return {out.str()};
}

}  // namespace

int main(int argc, char** argv)
{
    Options o;
    if (const char* env = std::getenv("KISINLAB_PREC")) {
        try {
            o.prec = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "KISINLAB_PREC must be an integer\n";
            return kUsage;
        }
    }

    CLI::App app{"Kisin varieties of rank 2 phi-modules: admissible lattices in the Bruhat-Tits tree"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--p", o.p, "characteristic")->check(CLI::Range(2, 251));
    app.add_option("--ext", o.ext, "extension degree k of the coefficient field F_{p^k}")->check(CLI::Range(1, 8));
    // config files split unquoted values on commas; join them back
    app.add_option("--matrix", o.matrix, "matrix of Phi, rows separated by ';', e.g. \"0,u^2;1,0\"")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--normal-form", o.normal_form,
                   "simple:a=..,s=.. | split:a=..,s=..,b=..,t=.. | nonsplit:a=..,s=..,b=..,t=..,gamma=..")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::Join);
    app.add_option("--e", o.e, "e");
    app.add_option("--r1", o.r1, "r1");
    app.add_option("--r2", o.r2, "r2 <= r1");
    app.add_option("--budget", o.budget, "maximum number of lattices visited")->check(CLI::PositiveNumber);
    app.add_option("--prec", o.prec, "series precision (default 64, or KISINLAB_PREC)")->check(CLI::PositiveNumber);
    app.add_option("--retries", o.retries, "precision doublings before giving up")->check(CLI::NonNegativeNumber);
    app.add_option("--format", o.format, "json | csv (tables), dot | ascii (render)");
    app.add_option("--out", o.out, "write to this file instead of stdout");
    app.add_option("--suite", o.suite, "distances | strata | components | x0 | raynaud | all");
    app.add_option("--emax", o.emax, "largest e in verify sweeps")->check(CLI::Range(1, 40));
    app.add_flag("--verify", o.verify, "raynaud: check the extremes against exhaustive enumeration");

    std::map<CLI::App*, Result (*)(const Options&)> commands;
    commands[app.add_subcommand("classify", "normal form of a phi-module given by --matrix")] = cmd_classify;
    commands[app.add_subcommand("enumerate", "v-admissible lattices")] = cmd_enumerate;
    commands[app.add_subcommand("strata", "stratification by elementary divisors")] = cmd_strata;
    commands[app.add_subcommand("components", "connected components by s-rank")] = cmd_components;
    commands[app.add_subcommand("x0", "Schubert ball decomposition of X0")] = cmd_x0;
    commands[app.add_subcommand("raynaud", "minimal and maximal lattices for --e")] = cmd_raynaud;
    commands[app.add_subcommand("verify", "dual-path comparison suites")] = cmd_verify;
    commands[app.add_subcommand("render", "draw the enumerated ball")] = cmd_render;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int rc = app.exit(ex);
        return rc == 0 ? kOk : kUsage;
    }

    Result r;
    try {
        for (const auto& [sub, run] : commands)
            if (sub->parsed()) r = run(o);
    } catch (const InsufficientPrecision& ex) {
        std::cerr << "error: insufficient precision: " << ex.what() << "\n";
        return kPrecision;
    } catch (const NoAdmissibleLattice& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kUsage;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kUsage;
    }

    if (o.out.empty())
        std::cout << r.text;
    else {
        std::ofstream f(o.out);
        if (!(f << r.text)) {
            std::cerr << "error: cannot write " << o.out << "\n";
            return kUsage;
        }
    }
    return r.status;
}
