// p4spec: spectra, potentials, zero modes and verification suites for the
// Painleve-IV superintegrable model family.
//
// Output rule: identical flags produce byte-identical files. Floats print
// with 17 significant digits, field order is fixed, run metadata only ever
// appears on '#'-prefixed lines (CSV) and never includes timestamps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "p4spectra/cubic_algebra.hpp"
#include "p4spectra/eigensolver.hpp"
#include "p4spectra/potentials.hpp"
#include "p4spectra/special_functions.hpp"
#include "p4spectra/susy.hpp"
#include "p4spectra/verify.hpp"

using json = nlohmann::ordered_json;
using namespace p4spectra;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// accepts plain decimals and fractions like -2/9
double parse_real(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return std::stod(s);
        const double num = std::stod(s.substr(0, slash));
        const double den = std::stod(s.substr(slash + 1));
        if (den == 0.0) throw std::invalid_argument("zero denominator");
        return num / den;
    } catch (const std::exception&) {
        throw CLI::ValidationError("could not parse real number '" + s + "'");
    }
}

struct CommonOpts {
    std::string case_id;
    std::string alpha_s, beta_s;
    int epsilon = 1;
    double t = 0.0;
    double hbar = 1.0, omega = 1.0;
    double grid_L = 0.0; // 0: 12 sqrt(hbar/omega)
    int grid_n = 2000;
    int p_max = 8;
    int levels = 8;
    double tol = 1e-6;
    std::string format = "csv";
    std::string output = "-";

    void attach(CLI::App* cmd, bool with_params = true) {
        if (with_params) {
            cmd->add_option("--case", case_id, "catalogue case: 4.1, 4.2, 4.3, 4.4 or 4.5");
            cmd->add_option("--alpha", alpha_s, "alpha (decimal or fraction)");
            cmd->add_option("--beta", beta_s, "beta (decimal or fraction, e.g. -2/9)");
            cmd->add_option("--epsilon", epsilon, "+1 or -1")->check(CLI::IsMember({1, -1}));
            cmd->add_option("--t", t, "erfc-family parameter (t < 1/2)");
            cmd->add_option("--hbar", hbar, "hbar (default 1)");
            cmd->add_option("--omega", omega, "omega (default 1)");
        }
        cmd->add_option("--grid-L", grid_L, "half-width of the grid");
        cmd->add_option("--grid-n", grid_n, "grid points");
        cmd->add_option("--p-max", p_max, "largest representation level to test");
        cmd->add_option("--levels", levels, "number of eigenvalues");
        cmd->add_option("--tol", tol, "refinement tolerance");
        cmd->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--output", output, "output path, '-' for stdout");
    }

    std::optional<PotentialCase> parse_case() const {
        if (case_id.empty()) return std::nullopt;
        if (case_id == "4.1") return PotentialCase::Case41;
        if (case_id == "4.2") return PotentialCase::Case42;
        if (case_id == "4.3") return PotentialCase::Case43;
        if (case_id == "4.4") return PotentialCase::Case44;
        if (case_id == "4.5") return PotentialCase::Case45;
        throw CLI::ValidationError("unknown --case '" + case_id + "'");
    }

    ModelParams params() const {
        if (auto c = parse_case()) return case_params(*c, hbar, omega);
        if (alpha_s.empty() || beta_s.empty())
            throw CLI::ValidationError("give either --case or both --alpha and --beta");
        return ModelParams(parse_real(alpha_s), parse_real(beta_s), epsilon, hbar, omega);
    }

    double default_L() const { return grid_L > 0.0 ? grid_L : 12.0 * std::sqrt(hbar / omega); }
};

struct Sink {
    std::ofstream file;
    std::ostream* os = &std::cout;
    explicit Sink(const std::string& path) {
        if (path != "-") {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file " + path);
            os = &file;
        }
    }
    std::ostream& out() { return *os; }
};

void emit(const CommonOpts& opt, const json& doc, const std::string& csv) {
    Sink sink(opt.output);
    if (opt.format == "json")
        sink.out() << doc.dump(2) << "\n";
    else
        sink.out() << csv;
}

json params_json(const ModelParams& mp) {
    return json{{"alpha", mp.alpha},
                {"beta", mp.beta},
                {"epsilon", mp.epsilon},
                {"hbar", mp.hbar},
                {"omega", mp.omega}};
}

// ---------------------------------------------------------------------------

int cmd_spectrum(const CommonOpts& opt) {
    const ModelParams mp = opt.params();
    DeriveDiagnostics diag;
    const auto series = derive_spectra(mp, opt.p_max, &diag);

    json doc;
    doc["schema_version"] = 1;
    doc["command"] = "spectrum";
    doc["params"] = params_json(mp);
    doc["p_max"] = opt.p_max;
    doc["series"] = json::array();
    std::ostringstream csv;
    csv << "# p4spec spectrum alpha=" << fmt(mp.alpha) << " beta=" << fmt(mp.beta)
        << " epsilon=" << mp.epsilon << " hbar=" << fmt(mp.hbar) << " omega=" << fmt(mp.omega)
        << " p_max=" << opt.p_max << "\n";
    csv << "case,base,slope,finite,valid_p,coincident_with,phi_roots_p0\n";
    for (const auto& s : series) {
        const StructureFunction phi = s.structure_function(0);
        json roots = json::array();
        std::ostringstream roots_csv;
        for (size_t i = 0; i < phi.roots.size(); ++i) {
            roots.push_back(json{{"re", phi.roots[i].real()}, {"im", phi.roots[i].imag()}});
            roots_csv << (i ? ";" : "") << fmt(phi.roots[i].real()) << "+"
                      << fmt(phi.roots[i].imag()) << "i";
        }
        json js;
        js["case"] = series_case_name(s.case_id);
        js["base"] = s.base;
        js["slope"] = s.slope;
        js["finite"] = s.finite;
        js["valid_p"] = s.valid_p;
        json cw = json::array();
        for (auto c : s.coincident_with) cw.push_back(series_case_name(c));
        js["coincident_with"] = cw;
        js["phi_roots_p0"] = roots;
        doc["series"].push_back(js);

        csv << series_case_name(s.case_id) << "," << fmt(s.base) << "," << fmt(s.slope) << ","
            << (s.finite ? "finite" : "infinite") << ",";
        for (size_t i = 0; i < s.valid_p.size(); ++i) csv << (i ? ";" : "") << s.valid_p[i];
        csv << ",";
        for (size_t i = 0; i < s.coincident_with.size(); ++i)
            csv << (i ? ";" : "") << series_case_name(s.coincident_with[i]);
        csv << "," << roots_csv.str() << "\n";
    }
    json pruned = json::array();
    for (auto c : diag.pruned_descending) pruned.push_back(series_case_name(c));
    for (auto c : diag.pruned_nonpositive) pruned.push_back(series_case_name(c));
    doc["pruned"] = pruned;
    emit(opt, doc, csv.str());
    return 0;
}

Potential1D x_potential_for(const CommonOpts& opt, const ModelParams& mp) {
    if (auto c = opt.parse_case()) {
        const double t = opt.t;
        if (*c == PotentialCase::Case45 && t != 0.0) {
            PotentialSpec spec = PotentialSpec::case_from_p4(*c, mp.hbar, mp.omega, t);
            return [spec](double x) { return g1(spec, x); };
        }
        return [c = *c, mp, t](double x) { return closed_form_x(c, mp, x, t); };
    }
    throw CLI::ValidationError("this command needs --case (closed-form potential) "
                               "or an explicit P4 seed");
}

int cmd_eigensolve(const CommonOpts& opt, bool with_y, double seed_z0, double seed_f0,
                   double seed_f0p, bool have_seed) {
    const ModelParams mp = opt.params();
    const double L = opt.default_L();
    Potential1D V;
    if (have_seed) {
        // build the potential from an integrated P4 solution sampled across
        // the whole grid
        std::vector<double> targets;
        const double zmax = std::sqrt(mp.omega / mp.hbar) * L;
        for (int i = 0; i <= 4000; ++i) targets.push_back(-zmax + 2.0 * zmax * i / 4000.0);
        const IntegrationResult r =
            p4_integrate(P4Params{mp.alpha, mp.beta}, seed_z0, seed_f0, seed_f0p, targets, 1e-12);
        if (r.status != IntegrationStatus::Ok) {
            std::cerr << "p4spec: P4 integration halted ("
                      << (r.status == IntegrationStatus::PoleEscape ? "pole escape"
                                                                    : "zero crossing")
                      << " near z = " << fmt(r.halt_z) << ")\n";
            return 1;
        }
        PotentialSpec spec = PotentialSpec::from_p4(mp, r.solution);
        V = [spec](double x) { return g1(spec, x); };
    } else {
        V = x_potential_for(opt, mp);
    }

    EigenResult er;
    try {
        er = refine(V, opt.levels, L, opt.tol, mp.hbar);
    } catch (const Error& e) {
        std::cerr << "p4spec: eigensolve failed: " << e.what() << "\n";
        return 1;
    }

    json doc;
    doc["schema_version"] = 1;
    doc["command"] = "eigensolve";
    doc["params"] = params_json(mp);
    doc["levels"] = json::array();
    std::ostringstream csv;
    csv << "# p4spec eigensolve alpha=" << fmt(mp.alpha) << " beta=" << fmt(mp.beta)
        << " epsilon=" << mp.epsilon << " L=" << fmt(L) << " tol=" << fmt(opt.tol) << "\n";
    csv << (with_y ? "kind,level,energy,error_estimate\n" : "level,energy,error_estimate\n");
    for (size_t i = 0; i < er.levels.size(); ++i) {
        doc["levels"].push_back(json{{"kind", "x"},
                                     {"level", i},
                                     {"energy", er.levels[i].energy},
                                     {"error_estimate", er.levels[i].error_estimate}});
        if (with_y) csv << "x,";
        csv << i << "," << fmt(er.levels[i].energy) << ","
            << fmt(er.levels[i].error_estimate) << "\n";
    }
    if (with_y) {
        // 2D levels: x levels plus the y oscillator ladder
        std::vector<std::pair<double, double>> lv2; // (energy, estimate)
        const double top = er.levels.back().energy + mp.hbar * mp.omega * 0.5;
        for (const auto& l : er.levels)
            for (int k = 0;; ++k) {
                const double e = l.energy + mp.hbar * mp.omega * (k + 0.5);
                if (e > top) break;
                lv2.emplace_back(e, l.error_estimate);
            }
        std::sort(lv2.begin(), lv2.end());
        for (size_t i = 0; i < lv2.size(); ++i) {
            doc["levels"].push_back(json{{"kind", "xy"},
                                         {"level", i},
                                         {"energy", lv2[i].first},
                                         {"error_estimate", lv2[i].second}});
            csv << "xy," << i << "," << fmt(lv2[i].first) << "," << fmt(lv2[i].second) << "\n";
        }
    }
    emit(opt, doc, csv.str());
    return 0;
}

int cmd_zero_modes(const CommonOpts& opt, const std::string& samples_path) {
    const ModelParams mp = opt.params();
    const auto pc = opt.parse_case();
    if (!pc)
        throw CLI::ValidationError("zero-modes needs --case (catalogue closed forms)");
    Superpotentials W(map_params(mp), P4Solution::catalogue(case_catalogue(*pc), opt.t));
    const SusyVariant variant = variant_for_epsilon(mp.epsilon);
    const auto hook = catalogue_closed_forms(*pc, mp.hbar, mp.omega, opt.t);
    ZeroModeOptions zopt;
    if (opt.grid_L > 0.0) zopt.L = opt.grid_L;

    double offset = 0.0;
    bool have_offset = true;
    try {
        offset = susy_physical_offset(mp, W, variant);
    } catch (const Error&) {
        have_offset = false;
    }

    json doc;
    doc["schema_version"] = 1;
    doc["command"] = "zero-modes";
    doc["params"] = params_json(mp);
    doc["variant"] = variant == SusyVariant::V1 ? "V1" : "V2";
    doc["calibration_offset"] = offset;
    doc["candidates"] = json::array();
    std::ostringstream csv;
    csv << "# p4spec zero-modes case=" << (pc ? potential_case_name(*pc) : "-")
        << " t=" << fmt(opt.t) << " offset=" << fmt(offset) << "\n";
    csv << "operator,index,energy_susy,energy_physical,normalizable,status\n";

    std::vector<std::pair<std::string, const ZeroModeCandidate*>> sampled;
    ZeroModeSet ann = zero_modes(W, variant, LadderOp::Annihilation, zopt, hook);
    ZeroModeSet cre = zero_modes(W, variant, LadderOp::Creation, zopt, hook);
    for (const auto* set : {&ann, &cre}) {
        const std::string op = set->op == LadderOp::Annihilation ? "annihilation" : "creation";
        for (const auto& c : set->candidates) {
            const double ephys = 0.5 * mp.hbar * mp.hbar * c.energy_susy + offset;
            json js;
            js["operator"] = op;
            js["index"] = c.index;
            js["energy_susy"] = c.energy_susy;
            if (have_offset) js["energy_physical"] = ephys;
            js["normalizable"] = c.normalizable;
            js["status"] = c.singular ? std::string("SingularWavefunction: ") + c.note : "ok";
            doc["candidates"].push_back(js);
            csv << op << "," << c.index << "," << fmt(c.energy_susy) << ","
                << (have_offset ? fmt(ephys) : "") << "," << (c.normalizable ? 1 : 0) << ","
                << (c.singular ? "SingularWavefunction" : "ok") << "\n";
            if (c.normalizable && c.psi)
                sampled.emplace_back(op + "_" + std::to_string(c.index), &c);
        }
    }
    emit(opt, doc, csv.str());

    if (!samples_path.empty() && !sampled.empty()) {
        std::ofstream sf(samples_path);
        if (!sf) throw std::runtime_error("cannot open samples file " + samples_path);
        sf << "x";
        for (const auto& [name, c] : sampled) sf << ",psi_" << name;
        sf << "\n";
        const GridFunction& g0 = *sampled.front().second->psi;
        for (int i = 0; i < g0.n; i += 8) {
            sf << fmt(g0.x(i));
            for (const auto& [name, c] : sampled) sf << "," << fmt(c->psi->values[i]);
            sf << "\n";
        }
    }
    return 0;
}

int cmd_potential(const CommonOpts& opt) {
    const ModelParams mp = opt.params();
    const double L = opt.default_L();
    Potential1D V;
    if (opt.parse_case()) {
        V = x_potential_for(opt, mp);
    } else {
        // generic parameters: g1 through the erfc family is not available,
        // require a catalogue case for closed forms
        throw CLI::ValidationError("potential needs --case");
    }
    json doc;
    doc["schema_version"] = 1;
    doc["command"] = "potential";
    doc["params"] = params_json(mp);
    doc["table"] = json::array();
    std::ostringstream csv;
    csv << "# p4spec potential case=" << opt.case_id << " t=" << fmt(opt.t) << "\n";
    csv << "x,V\n";
    const int n = std::max(16, opt.grid_n);
    for (int i = 0; i < n; ++i) {
        const double x = -L + 2.0 * L * i / (n - 1);
        double v;
        try {
            v = V(x);
        } catch (const Error&) {
            continue; // pole in the P4 route
        }
        doc["table"].push_back(json{{"x", x}, {"V", v}});
        csv << fmt(x) << "," << fmt(v) << "\n";
    }
    emit(opt, doc, csv.str());
    return 0;
}

int cmd_verify(const CommonOpts& opt, const std::string& suite) {
    std::vector<Check> checks;
    if (suite == "painleve")
        checks = verify_painleve();
    else if (suite == "algebra")
        checks = verify_algebra();
    else if (suite == "susy")
        checks = verify_susy();
    else if (suite == "spectra")
        checks = verify_spectra();
    else
        checks = verify_all();

    json doc;
    doc["schema_version"] = 1;
    doc["command"] = "verify";
    doc["suite"] = suite;
    doc["checks"] = json::array();
    std::ostringstream csv;
    csv << "# p4spec verify suite=" << suite << "\n";
    csv << "name,pass,measured,tolerance,note\n";
    bool ok = true;
    for (const auto& c : checks) {
        ok = ok && c.pass;
        doc["checks"].push_back(json{{"name", c.name},
                                     {"pass", c.pass},
                                     {"measured", c.measured},
                                     {"tolerance", c.tolerance},
                                     {"note", c.note}});
        std::string note = c.note;
        for (auto& ch : note)
            if (ch == ',') ch = ';';
        csv << c.name << "," << (c.pass ? 1 : 0) << "," << fmt(c.measured) << ","
            << fmt(c.tolerance) << "," << note << "\n";
    }
    doc["all_pass"] = ok;
    emit(opt, doc, csv.str());
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Painleve-IV superintegrable potentials: algebraic spectra, SUSY ladders "
                 "and an independent Schrodinger eigensolver"};
    app.require_subcommand(1);

    CommonOpts so;
    auto* spectrum = app.add_subcommand("spectrum", "derive energy series from the cubic algebra");
    so.attach(spectrum);

    CommonOpts eo;
    bool with_y = false;
    double seed_z0 = 0.0, seed_f0 = 0.0, seed_f0p = 0.0;
    auto* eig = app.add_subcommand("eigensolve", "bound states of the 1D x-part potential");
    eo.attach(eig);
    eig->add_flag("--with-y", with_y, "also list 2D levels (x plus y oscillator)");
    auto* oz0 = eig->add_option("--seed-z0", seed_z0, "P4 initial point");
    auto* of0 = eig->add_option("--seed-f0", seed_f0, "P4 initial value (nonzero)");
    auto* ofp = eig->add_option("--seed-f0p", seed_f0p, "P4 initial derivative");
    oz0->needs(of0);
    of0->needs(ofp);

    CommonOpts zo;
    std::string samples_path;
    auto* zm = app.add_subcommand("zero-modes", "SUSY zero-mode candidates and wavefunctions");
    zo.attach(zm);
    zm->add_option("--samples", samples_path, "write wavefunction samples to this CSV");

    CommonOpts po;
    auto* pot = app.add_subcommand("potential", "emit an (x, V) table");
    po.attach(pot);

    CommonOpts vo;
    std::string suite = "all";
    auto* ver = app.add_subcommand("verify", "run a verification suite");
    ver->add_option("--suite", suite, "painleve, algebra, susy, spectra or all")
        ->check(CLI::IsMember({"painleve", "algebra", "susy", "spectra", "all"}));
    vo.attach(ver, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(so);
        if (eig->parsed())
            return cmd_eigensolve(eo, with_y, seed_z0, seed_f0, seed_f0p,
                                  of0->count() > 0);
        if (zm->parsed()) return cmd_zero_modes(zo, samples_path);
        if (pot->parsed()) return cmd_potential(po);
        if (ver->parsed()) return cmd_verify(vo, suite);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "p4spec: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "p4spec: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "p4spec: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
