// gtheta: command-line front end.
//
// Exit codes: 0 pass, 1 verification failure, 2 configuration error,
// 3 precision exhaustion.
#include "app.hpp"

#include "gt/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace gt;
using namespace gt::app;

namespace {

void emit(const json& j, const std::string& file) {
    if (file.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot write " + file);
    out << j.dump(2) << "\n";
}

json embeddings_json(const CycloNum<KQ>& v, const QuadField& K, long M) {
    json a = json::array();
    for (auto& e : embeddings(M)) {
        cplx z = embed(v, K, e);
        a.push_back({{"embedding", e.str()}, {"re", z.real()}, {"im", z.imag()}, {"abs2", std::norm(z)}});
    }
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Anticyclotomic theta elements of definite quaternion algebras"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "Structured configuration file (key = value)");
    RunConfig c;
    app.add_option("--dk", c.d_k, "D_K of K = Q(sqrt(-D_K)); 0 selects the smallest admissible")->capture_default_str();
    app.add_option("--p", c.p, "The prime p")->capture_default_str();
    app.add_option("--nplus", c.n_plus, "N+ (primes split in K)")->capture_default_str();
    app.add_option("--nminus", c.n_minus, "N- (discriminant of B)")->capture_default_str();
    app.add_option("--k", c.k, "Weight")->capture_default_str();
    app.add_option("--nmax", c.n_max, "Tower depth")->capture_default_str();
    app.add_option("--precision", c.precision, "p-adic precision M (0: n + 4)")->capture_default_str();
    app.add_option("--branch", c.branch, "Branch character index t (-1: all)")->capture_default_str();
    app.add_option("--aux", c.aux, "Auxiliary prime for the algebra (0: p)")->capture_default_str();
    app.add_option("--eigenvalues", c.eigenvalues, "Pin the eigenform, e.g. 2:-2,3:-1");
    app.add_option("--tol", c.tol, "Numerical tolerance")->capture_default_str();
    app.add_option("--out", c.out, "Artifact directory (pipeline)")->capture_default_str();
    app.add_option("--jobs", c.jobs, "Worker cap (stages run sequentially)")->capture_default_str();
    std::string file;
    app.add_option("--file", file, "Write the JSON result to this file instead of stdout");

    auto* classset = app.add_subcommand("classset", "Right ideal classes and mass check");
    long brandt_q = 2;
    auto* brandt = app.add_subcommand("brandt", "Brandt / Hecke matrix");
    brandt->add_option("--q", brandt_q, "Prime q")->required();
    auto* eigen = app.add_subcommand("eigenform", "Eigenform, its p-stabilization and the hypotheses");
    int level_n = 1, weight_m = 0;
    auto* tower = app.add_subcommand("tower", "Ring class groups G_1 .. G_nmax");
    auto* theta = app.add_subcommand("theta", "Theta element at level n");
    theta->add_option("--n", level_n, "Level n")->capture_default_str();
    theta->add_option("--m", weight_m, "Weight index m")->capture_default_str();
    size_t char_index = 0;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Character evaluation of Theta_n");
    evaluate_cmd->add_option("--n", level_n, "Level n")->capture_default_str();
    evaluate_cmd->add_option("--char-index", char_index, "Index into the characters of G_n")->capture_default_str();
    auto* lvalue = app.add_subcommand("lvalue", "Central value L(f/K, chi, k/2)");
    lvalue->add_option("--n", level_n, "Level n of the character group")->capture_default_str();
    lvalue->add_option("--char-index", char_index, "Index into the characters of G_n")->capture_default_str();
    std::vector<std::string> suites;
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--suite", suites, "mass|hecke|tower|congruence|fe|mu|interp (repeatable; default all)")
        ->check(CLI::IsMember(suite_names()));
    bool rebuild = false;
    auto* pipeline = app.add_subcommand("pipeline", "Cached artifact pipeline");
    pipeline->add_flag("--rebuild", rebuild, "Ignore and overwrite cached artifacts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (pipeline->parsed()) {
            auto res = run_pipeline(c, rebuild);
            emit({{"ok", res.ok}, {"stages", res.stages}, {"out", c.out}}, file);
            return res.ok ? 0 : 1;
        }
        Instance I(c);
        const RunConfig& rc = I.config();
        if (classset->parsed()) {
            json j;
            for (auto S : {I.space(), I.pspace()}) {
                json cs = json::parse(S->classes().to_json());
                cs["mass"] = to_string(S->classes().mass());
                cs["closed_form_mass"] = to_string(eichler_mass(rc.n_minus, S->order().level));
                j.push_back(cs);
            }
            emit(j, file);
            return 0;
        }
        if (brandt->parsed()) {
            if (!is_prime(brandt_q) || rc.n_minus % brandt_q == 0) throw ConfigError("q must be a prime not dividing N-");
            auto S = (rc.n_plus * rc.p) % brandt_q == 0 ? I.pspace() : I.space();
            emit(json::parse(hecke_operator(*S, brandt_q).to_json()), file);
            return 0;
        }
        if (eigen->parsed()) {
            emit({{"form", json::parse(I.form().to_json())},
                  {"stabilized", json::parse(I.stabilized().to_json())},
                  {"hypotheses", I.hypotheses()}},
                 file);
            return 0;
        }
        if (tower->parsed()) {
            json t = json::array();
            for (int n = 1; n <= rc.n_max; ++n) t.push_back(json::parse(RingClassGroup(I.field(), rc.p, n).to_json()));
            emit(t, file);
            return 0;
        }
        if (theta->parsed()) {
            emit(theta_json(I.theta(level_n, weight_m), I.padic(level_n)), file);
            return 0;
        }
        if (evaluate_cmd->parsed()) {
            const ThetaElement& th = I.theta(level_n);
            auto chars = all_characters(*th.group);
            if (char_index >= chars.size()) throw ConfigError("char-index out of range");
            const TowerCharacter& chi = chars[char_index];
            auto v = evaluate(th, chi);
            long M = std::lcm(v.m, chi.order_modulus());
            emit({{"character", chi.str()},
                  {"conductor_exponent", chi.conductor_exponent()},
                  {"value", cyclo_str(v)},
                  {"zero", v.is_zero()},
                  {"embeddings", embeddings_json(v, I.field(), M)}},
                 file);
            return 0;
        }
        if (lvalue->parsed()) {
            emit(lvalue_report(I, level_n, char_index, rc.tol), file);
            return 0;
        }
        if (verify->parsed()) {
            if (suites.empty()) suites = suite_names();
            json rep = {{"config", rc.to_json()}, {"hypotheses", I.hypotheses()}, {"ok", true}};
            std::string first;
            for (auto& s : suites) {
                auto r = run_suite(I, s);
                rep["suites"].push_back(r.to_json());
                if (!r.ok) {
                    rep["ok"] = false;
                    if (first.empty()) first = s + ": " + r.counterexample;
                }
            }
            if (!first.empty()) rep["first_counterexample"] = first;
            emit(rep, file);
            return rep["ok"].get<bool>() ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const PrecisionError& e) {
        std::cerr << "precision exhausted: " << e.what() << "\n";
        return 3;
    } catch (const VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
