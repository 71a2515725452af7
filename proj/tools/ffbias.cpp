#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ffbias/acceptance.hpp"
#include "ffbias/asymptotics.hpp"
#include "ffbias/io.hpp"

namespace {

using namespace ffbias;

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flags that mirror config keys; set flags override the config file.
struct RunFlags {
    std::string config;
    bool no_header = false;
    bool json = false, csv = false;
    std::map<std::string, std::string> values;
    std::string n;  // shorthand for n-min = n-max

    RunConfig resolve() const {
        RunConfig c = config.empty() ? RunConfig{} : load_config(config);
        for (const auto& key : config_keys()) {
            const auto it = values.find(key);
            if (it != values.end() && !it->second.empty()) apply_config_value(c, key, it->second, 0);
        }
        if (!n.empty()) {
            apply_config_value(c, "n-min", n, 0);
            apply_config_value(c, "n-max", n, 0);
        }
        if (json) c.format = "json";
        if (csv) c.format = "csv";
        validate(c);
        return c;
    }
};

void add_run_flags(CLI::App* app, RunFlags& f, const std::vector<std::string>& keys) {
    app->add_option("--config", f.config, "key = value configuration file");
    app->add_flag("--no-header", f.no_header, "omit the # generated-by line");
    app->add_flag("--json", f.json, "emit JSON");
    app->add_flag("--csv", f.csv, "emit CSV (default)");
    for (const auto& k : keys) app->add_option("--" + k, f.values[k]);
    if (std::find(keys.begin(), keys.end(), "n-max") != keys.end()) app->add_option("--n", f.n, "single degree n");
}

const std::vector<std::string> kCharKeys = {"q", "modulus", "table-bound", "output"};
const std::vector<std::string> kSumKeys = {"q", "modulus", "char-index", "n-min", "n-max", "method", "enum-cap", "n-cap", "table-bound", "output", "format"};
const std::vector<std::string> kCompareKeys = {"q",      "modulus",      "char-index",  "n-min", "n-max", "k-mode", "k",
                                               "n-cap",  "euler-cutoff", "table-bound", "output", "format"};

Poly modulus_of(const RunConfig& c) {
    if (c.modulus.empty()) throw UsageError("--modulus is required");
    const Poly d = parse_poly(c.modulus, c.q);
    if (!d.is_monic() || d.degree() < 1) throw UsageError("modulus must be monic of degree >= 1");
    return d;
}

std::vector<Character> selected(const RunConfig& c, bool allow_principal) {
    const auto g = unit_group(modulus_of(c), c.table_bound);
    auto chis = characters(g);
    if (c.char_index) {
        if (*c.char_index >= chis.size()) throw UsageError("char-index out of range (phi(d) = " + std::to_string(chis.size()) + ")");
        if (!allow_principal && chis[*c.char_index].is_principal()) throw UsageError("char-index 0 is the principal character");
        return {chis[*c.char_index]};
    }
    std::vector<Character> out;
    for (auto& chi : chis)
        if (allow_principal || !chi.is_principal()) out.push_back(chi);
    return out;
}

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--no-header") continue;
        s += (s.empty() ? "" : " ") + a;
    }
    return s;
}

void emit(const Table& t, const RunConfig& c, bool header, const std::string& cmd) {
    std::ofstream file;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) throw UsageError("cannot open output file '" + c.output + "'");
    }
    std::ostream& os = c.output.empty() ? std::cout : file;
    if (c.format == "json") {
        nlohmann::ordered_json j;
        if (header) j["generated-by"] = "ffbias " + cmd;
        j["columns"] = t.columns;
        auto rows = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            auto row = nlohmann::ordered_json::array();
            for (const auto& cell : r) std::visit([&](const auto& v) { row.push_back(v); }, cell);
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        os << j.dump(1) << '\n';
    } else {
        write_csv(os, t, header, cmd);
    }
}

const char* kind_name(RootKind k) {
    switch (k) {
        case RootKind::PlusSqrtQ: return "+sqrtq";
        case RootKind::MinusSqrtQ: return "-sqrtq";
        case RootKind::NonReal: return "nonreal";
        case RootKind::Trivial: return "trivial";
    }
    return "?";
}

// ---------------------------------------------------------------------------

Table cmd_chars(const RunConfig& c) {
    Table t{{"index", "order", "real", "principal", "exponents"}, {}};
    for (const auto& chi : selected(c, true)) {
        std::string ex;
        for (auto e : chi.exponents()) ex += (ex.empty() ? "" : " ") + std::to_string(e);
        t.add({static_cast<long long>(chi.index()), static_cast<long long>(chi.order()), static_cast<long long>(chi.is_real()),
               static_cast<long long>(chi.is_principal()), ex});
    }
    return t;
}

Table cmd_lfunc(const RunConfig& c) {
    Table t{{"char_index", "field", "index", "re", "im", "abs", "angle", "multiplicity", "kind"}, {}};
    for (const auto& chi : selected(c, false)) {
        const auto l = l_function(chi);
        const auto ci = static_cast<long long>(chi.index());
        for (std::size_t i = 0; i < l.coeffs.size(); ++i)
            t.add({ci, "coeff", static_cast<long long>(i), l.coeffs[i].real(), l.coeffs[i].imag(), std::abs(l.coeffs[i]), 0.0, 0LL, ""});
        for (std::size_t i = 0; i < l.roots.size(); ++i) {
            const auto& r = l.roots[i];
            t.add({ci, "root", static_cast<long long>(i), r.value.real(), r.value.imag(), std::abs(r.value), r.angle,
                   static_cast<long long>(r.multiplicity), kind_name(r.kind)});
        }
        t.add({ci, "m_plus", 0LL, static_cast<double>(l.m_plus), 0.0, 0.0, 0.0, 0LL, ""});
        t.add({ci, "m_minus", 0LL, static_cast<double>(l.m_minus), 0.0, 0.0, 0.0, 0LL, ""});
        t.add({ci, "rh_deviation", 0LL, l.rh_deviation, 0.0, 0.0, 0.0, 0LL, l.rh_deviation <= acceptance::tol::kRh ? "ok" : "fail"});
    }
    return t;
}

Table cmd_sums(const RunConfig& c, bool normalized) {
    Table t{{"char_index", "n", "k", "re", "im"}, {}};
    if (normalized) t.columns.insert(t.columns.end(), {"tilde_re", "tilde_im"});
    for (const auto& chi : selected(c, true)) {
        std::vector<SumTable> tables;
        if (c.method == "enumerate") {
            for (unsigned n = c.n_min; n <= c.n_max; ++n) tables.push_back(pi_k_enumerate(chi, n, c.enum_cap));
        } else {
            auto all = pi_k_analytic_all(l_family(chi), c.n_max, c.n_cap);
            tables.assign(all.begin() + c.n_min, all.end());
        }
        for (const auto& tab : tables) {
            std::optional<NormalizedTable> nt;
            if (normalized && tab.n >= 2) nt = normalize(tab);
            for (unsigned k = 0; k <= tab.n; ++k) {
                const cplx v = tab.raw(k);
                std::vector<Cell> row{static_cast<long long>(chi.index()), static_cast<long long>(tab.n), static_cast<long long>(k),
                                      std::round(v.real()), std::round(v.imag())};
                if (tab.method == SumMethod::Analytic) {
                    row[3] = v.real();
                    row[4] = v.imag();
                }
                if (normalized) {
                    const cplx w = nt && k >= 1 ? nt->at(k) : cplx(0, 0);
                    row.push_back(w.real());
                    row.push_back(w.imag());
                }
                t.add(std::move(row));
            }
        }
    }
    return t;
}

unsigned k_for(const RunConfig& c, unsigned n) {
    const double ln = std::log(static_cast<double>(n));
    if (c.k_mode == "fixed") return static_cast<unsigned>(std::lround(c.k_param));
    if (c.k_mode == "log") return static_cast<unsigned>(std::lround(c.k_param * ln));
    if (c.k_mode == "sqrtlog") return static_cast<unsigned>(std::floor(c.k_param * std::sqrt(ln)));
    return static_cast<unsigned>(std::floor(std::pow(ln, c.k_param)));  // pow
}

Table cmd_compare(const RunConfig& c, const std::string& theorem) {
    Table t{{"char_index", "n", "k", "theorem", "exact_re", "exact_im", "main_re", "main_im", "osc_re", "osc_im", "bias_re", "bias_im", "residual",
             "error_scale", "ratio"},
            {}};
    const unsigned n0 = std::max(2u, c.n_min);
    for (const auto& chi : selected(c, false)) {
        const CharacterModel model(chi, std::max(c.euler_cutoff, kAsymptoticEulerCutoff));
        const auto tables = pi_k_analytic_all(model.family(), c.n_max, c.n_cap);
        for (unsigned n = n0; n <= c.n_max; ++n) {
            const unsigned k = k_for(c, n);
            if (k < 1 || k > n) continue;  // empty k range at this n
            FormulaReport rep;
            std::string th = theorem;
            if (th == "auto") th = model.real() ? "3a" : "1";
            if (th == "1") rep = thm1_main(model, tables[n], k);
            else if (th == "3a") rep = thm3_main(model, tables[n], k, Thm3Variant::First);
            else if (th == "3b") rep = thm3_main(model, tables[n], k, Thm3Variant::Second);
            else if (th == "4" || th == "2") rep = thm4_eval(model, tables[n], k);
            else throw UsageError("--theorem must be auto, 1, 2, 3a, 3b or 4");
            t.add({static_cast<long long>(chi.index()), static_cast<long long>(n), static_cast<long long>(k), rep.theorem, rep.exact.real(),
                   rep.exact.imag(), rep.main_term.real(), rep.main_term.imag(), rep.oscillating.real(), rep.oscillating.imag(), rep.bias.real(),
                   rep.bias.imag(), std::abs(rep.residual), rep.error_scale, rep.empirical_constant()});
        }
    }
    return t;
}

Table cmd_bias_curve(double lo, double hi, unsigned points) {
    if (!(lo > 0) || !(hi > lo) || points < 2) throw UsageError("need 0 < alpha-min < alpha-max and points >= 2");
    Table t{{"alpha", "s", "b"}, {}};
    for (unsigned i = 0; i < points; ++i) {
        const double a = lo + (hi - lo) * i / (points - 1);
        const auto p = bias_function(a);
        t.add({a, p.s, p.b});
    }
    return t;
}

Table cmd_hankel(const std::vector<double>& zs, const std::vector<double>& ns, double delta) {
    Table t{{"z", "n", "delta", "value_re", "value_im", "reference", "abs_error", "quad_error"}, {}};
    for (double z : zs)
        for (double n : ns) {
            const auto h = hankel_integral_detail(z, n, delta);
            const cplx ref = rgamma(cplx(-z, 0));
            t.add({z, n, delta, h.value.real(), h.value.imag(), ref.real(), std::abs(h.value - ref), h.quad_error});
        }
    return t;
}

int run(int argc, char** argv) {
    CLI::App app{"Chebyshev-bias lab for character sums over F_q[t]"};
    app.require_subcommand(1);

    RunFlags f_chars, f_lfunc, f_sums, f_cmp, f_curve, f_hankel;
    auto* chars = app.add_subcommand("chars", "character table of (F_q[t]/d)^*");
    add_run_flags(chars, f_chars, kCharKeys);

    auto* lfunc = app.add_subcommand("lfunc", "L(u, chi) coefficients, inverse roots, m_+-, RH verdict");
    add_run_flags(lfunc, f_lfunc, {"q", "modulus", "char-index", "table-bound", "output", "format"});

    bool normalized = false;
    auto* sums = app.add_subcommand("sums", "pi_k(n, chi) for k = 0..n");
    add_run_flags(sums, f_sums, kSumKeys);
    sums->add_flag("--normalized", normalized, "also emit the normalized values");

    std::string theorem = "auto";
    auto* cmp = app.add_subcommand("compare", "exact normalized sums against the asymptotic main terms");
    add_run_flags(cmp, f_cmp, kCompareKeys);
    cmp->add_option("--theorem", theorem, "auto, 1, 2, 3a, 3b or 4");

    auto* consts = app.add_subcommand("constants", "beta and gamma");

    double a_lo = 0.05, a_hi = 3.0;
    unsigned points = 60;
    auto* curve = app.add_subcommand("bias-curve", "s(alpha), b(alpha) on a grid");
    add_run_flags(curve, f_curve, {"output", "format"});
    curve->add_option("--alpha-min", a_lo);
    curve->add_option("--alpha-max", a_hi);
    curve->add_option("--points", points);

    std::vector<double> hz{-1.0, -0.5, 0.3}, hn{1e3, 1e4};
    double delta = 0.5;
    auto* hankel = app.add_subcommand("hankel", "truncated Hankel integral against 1/Gamma(-z)");
    add_run_flags(hankel, f_hankel, {"output", "format"});
    hankel->add_option("--z", hz);
    hankel->add_option("--n-values", hn);
    hankel->add_option("--delta", delta);

    bool quick = false;
    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_flag("--quick", quick, "oracle equivalence at n <= 10 and the RH check only");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const std::string cmd = command_line(argc, argv);
    auto go = [&](const RunFlags& f, auto&& make) {
        const RunConfig c = f.resolve();
        emit(make(c), c, !f.no_header, cmd);
        return kOk;
    };

    if (*chars) return go(f_chars, cmd_chars);
    if (*lfunc) return go(f_lfunc, cmd_lfunc);
    if (*sums) return go(f_sums, [&](const RunConfig& c) { return cmd_sums(c, normalized); });
    if (*cmp) return go(f_cmp, [&](const RunConfig& c) { return cmd_compare(c, theorem); });
    if (*curve) return go(f_curve, [&](const RunConfig&) { return cmd_bias_curve(a_lo, a_hi, points); });
    if (*hankel) return go(f_hankel, [&](const RunConfig&) { return cmd_hankel(hz, hn, delta); });
    if (*consts) {
        const auto k = solve_constants();
        std::cout << "beta=" << format_fixed(k.beta, 12) << '\n' << "gamma=" << format_fixed(k.gamma, 12) << '\n';
        return kOk;
    }
    if (*verify) {
        acceptance::Options opt;
        opt.quick = quick;
        bool all = true;
        acceptance::run_all(opt, [&](const acceptance::CriterionResult& r) {
            all = all && r.passed;
            std::cout << acceptance::format_line(r) << std::endl;
        });
        return all ? kOk : kCheckFailed;
    }
    return kUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const BudgetError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis check failed: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const RhViolation& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kCheckFailed;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailed;
    }
}
