// Command-line front end: sharp cone bounds for families or CSV matrices,
// oracle verification, convergence studies, monotonicity analyses, and
// inequality probes. Reports in json, csv or plain text.
//
// Exit codes: 0 ok, 1 claim violation found, 2 regime error, 3 input error,
// 4 configuration not covered by a published theorem.

#include <array>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mbounds/analysis.hpp"
#include "mbounds/core.hpp"
#include "mbounds/engine.hpp"
#include "mbounds/families.hpp"
#include "mbounds/jsonio.hpp"
#include "mbounds/oracle.hpp"

namespace {

using mbounds::ordered_json;

struct CommonOpts {
    std::string family;
    std::string matrix_path;
    double alpha = 0.0;
    double t = 1.0;
    std::string beta = "inf";
    double p = 2.0;
    double q = 0.0; // 0 -> defaults to p
    std::string regime;
    std::size_t size = 100;
    std::size_t rows = 0; // 0 = auto row policy
    std::size_t samples = 10000;
    std::uint64_t seed = 42;
    std::size_t threads = 0;
    std::string format = "text";
    std::string output;
};

double parse_beta(const std::string& s) {
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

mbounds::FamilySpec make_spec(const CommonOpts& o) {
    using mbounds::FamilySpec;
    if (o.family == "cesaro") return FamilySpec::cesaro();
    if (o.family == "tail-power") return FamilySpec::tail_power(o.alpha, o.t);
    if (o.family == "tail-alpha-k") return FamilySpec::tail_alpha_k(o.alpha);
    if (o.family == "gen-log-mean-tail")
        return FamilySpec::gen_log_mean_tail(o.alpha, parse_beta(o.beta));
    if (o.family == "weighted-mean-power") return FamilySpec::weighted_mean_power(o.alpha);
    if (o.family == "weighted-mean-power-diff")
        return FamilySpec::weighted_mean_power_diff(o.alpha);
    if (o.family == "norlund-power-diff") return FamilySpec::norlund_power_diff(o.alpha);
    if (o.family == "norlund-power-sum") return FamilySpec::norlund_power_sum(o.alpha);
    throw mbounds::InputError("unknown family: " + o.family);
}

mbounds::Regime parse_regime(const CommonOpts& o) {
    if (o.regime == "lower") return mbounds::Regime::LowerBound;
    if (o.regime == "upper") return mbounds::Regime::UpperBound;
    if (o.regime.empty()) // infer: p >= 1 can only be lower, p < 1 only upper
        return o.p >= 1.0 ? mbounds::Regime::LowerBound : mbounds::Regime::UpperBound;
    throw mbounds::InputError("regime must be 'lower' or 'upper'");
}

double effective_q(const CommonOpts& o) { return o.q > 0.0 ? o.q : o.p; }

void put_family_fields(ordered_json& j, const CommonOpts& o) {
    if (!o.family.empty()) {
        j["family"] = o.family;
        if (o.family != "cesaro") j["alpha"] = o.alpha;
        if (o.family == "tail-power") j["t"] = o.t;
        if (o.family == "gen-log-mean-tail") j["beta"] = parse_beta(o.beta);
    } else {
        j["matrix"] = o.matrix_path;
    }
}

void emit(const ordered_json& j, const std::string& csv_text, const std::string& plain,
          const CommonOpts& o) {
    std::string body;
    if (o.format == "json") {
        body = mbounds::render_json(j);
    } else if (o.format == "csv") {
        body = csv_text;
    } else {
        body = plain;
    }
    if (o.output.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(o.output, std::ios::binary);
        if (!f) throw mbounds::InputError("cannot open output file: " + o.output);
        f << body;
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

// Flattens a scalar-valued JSON object to a CSV header plus one row.
std::string scalar_csv(const ordered_json& j) {
    std::string header, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_object() || it.value().is_array()) continue;
        if (!header.empty()) {
            header += ',';
            row += ',';
        }
        header += it.key();
        if (it.value().is_number_float())
            row += fmt(it.value().get<double>());
        else if (it.value().is_string())
            row += csv_quote(it.value().get<std::string>());
        else
            row += it.value().dump();
    }
    return header + "\n" + row + "\n";
}

std::string scalar_text(const ordered_json& j) {
    std::string out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.value().is_object() || it.value().is_array()) continue;
        out += it.key() + " = ";
        if (it.value().is_number_float())
            out += fmt(it.value().get<double>());
        else if (it.value().is_string())
            out += it.value().get<std::string>();
        else
            out += it.value().dump();
        out += "\n";
    }
    return out;
}

int cmd_bound(const CommonOpts& o) {
    const double q = effective_q(o);
    const mbounds::ExponentPair pair(o.p, q, parse_regime(o));
    mbounds::BoundResult res{0, 0, 0, {}, mbounds::step_vector(1, 1)};
    std::string citation = "computed, not published";
    if (!o.family.empty()) {
        const auto spec = make_spec(o);
        res = mbounds::family_bound_streamed(spec, o.size, pair, {o.rows, o.threads});
        const auto cover = mbounds::theorem_range_check(spec, o.p, q, pair.regime);
        if (cover.covered) citation = cover.citation;
    } else {
        const auto a = mbounds::NonNegativeMatrix::from_csv_file(o.matrix_path);
        res = mbounds::compute_bound(a, pair, o.threads);
    }

    ordered_json j;
    j["command"] = "bound";
    put_family_fields(j, o);
    j["p"] = o.p;
    j["q"] = q;
    j["regime"] = mbounds::regime_name(pair.regime);
    j["size"] = o.family.empty() ? res.s_values.size() : o.size;
    j["lambda"] = res.lambda;
    j["lambda_pow_q"] = res.lambda_pow_q;
    j["lambda_pow_p"] = std::pow(res.lambda, o.p);
    j["optimal_r"] = res.optimal_r;
    j["citation"] = citation;
    emit(j, scalar_csv(j), scalar_text(j), o);
    return 0;
}

int cmd_verify(const CommonOpts& o) {
    const double q = effective_q(o);
    const mbounds::ExponentPair pair(o.p, q, parse_regime(o));
    std::optional<mbounds::NonNegativeMatrix> a;
    if (!o.family.empty()) {
        if (o.size > 2048) throw mbounds::InputError("verify materializes the matrix; size <= 2048");
        a = mbounds::generate(make_spec(o), o.size);
    } else {
        a = mbounds::NonNegativeMatrix::from_csv_file(o.matrix_path);
    }
    const auto rep = mbounds::oracle::verify(*a, pair, o.samples, o.seed, o.threads);

    ordered_json j;
    j["command"] = "verify";
    put_family_fields(j, o);
    j["p"] = o.p;
    j["q"] = q;
    j["regime"] = mbounds::regime_name(pair.regime);
    j["size"] = a->cols();
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
    j["formula_lambda"] = rep.formula_lambda;
    j["step_enum_lambda"] = rep.step_enum_lambda;
    j["sampled_best"] = rep.sampled_best;
    j["search_best"] = rep.search_best;
    j["verdict"] = rep.verdict == mbounds::oracle::Verdict::Consistent ? "consistent" : "violation";
    if (rep.verdict != mbounds::oracle::Verdict::Consistent) j["violation_gap"] = rep.violation_gap;
    emit(j, scalar_csv(j), scalar_text(j), o);
    return rep.verdict == mbounds::oracle::Verdict::Consistent ? 0 : 1;
}

int cmd_constant(const CommonOpts& o) {
    const double q = effective_q(o);
    const auto spec = make_spec(o);
    std::optional<mbounds::Regime> regime;
    if (!o.regime.empty()) regime = parse_regime(o);
    const auto k = mbounds::asymptotic_constant(spec, o.p, q, regime);

    ordered_json j;
    j["command"] = "constant";
    put_family_fields(j, o);
    j["p"] = o.p;
    j["q"] = q;
    if (k) {
        j["covered"] = true;
        j["value"] = k->value;
        j["regime"] = mbounds::regime_name(k->regime);
        j["citation"] = k->citation;
        j["validity"] = k->validity;
    } else {
        j["covered"] = false;
    }
    emit(j, scalar_csv(j), scalar_text(j), o);
    if (!k) {
        std::cerr << "not covered: no published theorem certifies this configuration\n";
        return 4;
    }
    return 0;
}

int cmd_converge(const CommonOpts& o, const std::string& sizes_arg) {
    const double q = effective_q(o);
    const mbounds::ExponentPair pair(o.p, q, parse_regime(o));
    std::vector<std::size_t> sizes;
    std::stringstream ss(sizes_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) sizes.push_back(std::stoul(tok));
    const auto table =
        mbounds::convergence_study(make_spec(o), pair, sizes, {o.rows, o.threads});

    ordered_json j;
    j["command"] = "converge";
    put_family_fields(j, o);
    j["p"] = o.p;
    j["q"] = q;
    j["regime"] = mbounds::regime_name(pair.regime);
    j["sizes"] = table.sizes;
    j["lambda_pow_q"] = table.lambda_pow_q;
    if (table.target) {
        j["target"] = table.target->value;
        j["target_citation"] = table.target->citation;
        j["gaps"] = table.gaps;
    }
    if (table.extrapolated) j["extrapolated"] = *table.extrapolated;

    std::string csv = "size,lambda_pow_q";
    if (table.target) csv += ",gap";
    csv += "\n";
    std::string txt;
    for (std::size_t i = 0; i < table.sizes.size(); ++i) {
        csv += std::to_string(table.sizes[i]) + "," + fmt(table.lambda_pow_q[i]);
        txt += "N=" + std::to_string(table.sizes[i]) + "  lambda^q=" + fmt(table.lambda_pow_q[i]);
        if (table.target) {
            csv += "," + fmt(table.gaps[i]);
            txt += "  gap=" + fmt(table.gaps[i]);
        }
        csv += "\n";
        txt += "\n";
    }
    if (table.target)
        txt += "target = " + fmt(table.target->value) + " (" + table.target->citation + ")\n";
    if (table.extrapolated) txt += "extrapolated = " + fmt(*table.extrapolated) + "\n";
    emit(j, csv, txt, o);
    return 0;
}

int cmd_analyze(const CommonOpts& o, const std::string& what, std::size_t n_max,
                std::size_t grid) {
    ordered_json j;
    j["command"] = "analyze";
    j["what"] = what;
    j["alpha"] = o.alpha;
    j["p"] = o.p;
    std::string csv, txt;
    if (what == "bennett") {
        auto values = mbounds::analysis::bennett_sequence(o.alpha, o.p, n_max);
        auto rep = mbounds::analysis::monotonicity_verdict(values, 1e-12);
        j["n_max"] = n_max;
        j["verdict"] = mbounds::analysis::monotonicity_name(rep.verdict);
        if (rep.first_violation_index) j["first_violation_index"] = *rep.first_violation_index;
        j["values"] = values;
        csv = "n,value\n";
        for (std::size_t n = 1; n <= values.size(); ++n)
            csv += std::to_string(n) + "," + fmt(values[n - 1]) + "\n";
        txt = "verdict = " + std::string(mbounds::analysis::monotonicity_name(rep.verdict)) +
              "\nb_1 = " + fmt(values.front()) + "\nb_" + std::to_string(values.size()) + " = " +
              fmt(values.back()) + "\n";
    } else if (what == "condition") {
        auto values = mbounds::analysis::condition_4_7_values(o.alpha, o.p, n_max);
        double worst = values[0];
        for (double v : values) worst = std::min(worst, v);
        j["n_max"] = n_max;
        j["min_value"] = worst;
        j["values"] = values;
        csv = "n,value\n";
        for (std::size_t n = 1; n <= values.size(); ++n)
            csv += std::to_string(n) + "," + fmt(values[n - 1]) + "\n";
        txt = "min over n of the sufficient-condition value = " + fmt(worst) + "\n";
    } else if (what == "convexity") {
        const double worst = mbounds::analysis::second_difference_min(o.alpha, o.p, grid);
        j["grid"] = grid;
        j["min_second_difference"] = worst;
        csv = "min_second_difference\n" + fmt(worst) + "\n";
        txt = "min central second difference of f_{alpha,p} = " + fmt(worst) + "\n";
    } else {
        throw mbounds::InputError("analyze subcommand must be bennett, condition or convexity");
    }
    emit(j, csv, txt, o);
    return 0;
}

int cmd_probe(const CommonOpts& o, const std::string& id, bool reversed,
              const std::optional<double>& amin, const std::optional<double>& amax,
              const std::optional<std::size_t>& grid, const std::optional<std::size_t>& n_max) {
    mbounds::analysis::ProbeOverrides over;
    over.alpha_min = amin;
    over.alpha_max = amax;
    over.grid = grid;
    over.n_max = n_max;
    const auto rep = mbounds::analysis::probe(id, reversed, over);

    ordered_json j;
    j["command"] = "probe";
    j["id"] = rep.inequality_id;
    j["reversed"] = rep.reversed;
    j["citation"] = rep.citation;
    j["box"] = rep.box;
    j["points"] = rep.points;
    j["passed"] = rep.passed;
    ordered_json viols = ordered_json::array();
    for (const auto& v : rep.violations) {
        ordered_json vj;
        vj["alpha"] = v.alpha;
        vj["second"] = v.second;
        vj["n"] = v.n;
        vj["lhs"] = v.lhs;
        vj["rhs"] = v.rhs;
        viols.push_back(vj);
        if (viols.size() >= 32) break;
    }
    j["violations"] = viols;

    std::string csv = "id,reversed,points,violations,passed\n";
    csv += rep.inequality_id + "," + (rep.reversed ? "true" : "false") + "," +
           std::to_string(rep.points) + "," + std::to_string(rep.violations.size()) + "," +
           (rep.passed ? "true" : "false") + "\n";
    std::string txt = rep.inequality_id + (rep.reversed ? " (reversed)" : "") + ": " +
                      (rep.passed ? "passed" : "FAILED") + " on " + rep.box + " (" +
                      std::to_string(rep.points) + " points, " +
                      std::to_string(rep.violations.size()) + " violations)\n";
    emit(j, csv, txt, o);
    return rep.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sharp lower/upper bounds of non-negative matrices on the monotone cone"};
    app.require_subcommand(1);

    CommonOpts o;
    const auto add_common = [&](CLI::App* sub, bool needs_matrix) {
        if (needs_matrix) {
            sub->add_option("--family", o.family, "family name");
            sub->add_option("--matrix", o.matrix_path, "CSV matrix path");
        } else {
            sub->add_option("--family", o.family, "family name")->required();
        }
        sub->add_option("--alpha", o.alpha, "family parameter alpha");
        sub->add_option("--t", o.t, "tail-power shift t in [0,1]");
        sub->add_option("--beta", o.beta, "log-mean order beta (number or 'inf')");
        sub->add_option("--p", o.p, "exponent p")->required();
        sub->add_option("--q", o.q, "exponent q (defaults to p)");
        sub->add_option("--regime", o.regime, "lower|upper");
        sub->add_option("--threads", o.threads, "worker threads (default: MB_THREADS or hardware)");
        sub->add_option("--format", o.format, "json|csv|text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--output", o.output, "write report to file instead of stdout");
    };

    auto* bound = app.add_subcommand("bound", "compute the sharp bound constant");
    add_common(bound, true);
    bound->add_option("--size", o.size, "truncation size N");
    bound->add_option("--rows", o.rows, "explicit row limit (0 = auto extension)");

    auto* verify = app.add_subcommand("verify", "oracle verification of the bound");
    add_common(verify, true);
    verify->add_option("--size", o.size, "truncation size N");
    verify->add_option("--samples", o.samples, "cone samples");
    verify->add_option("--seed", o.seed, "rng seed");

    auto* constant = app.add_subcommand("constant", "published asymptotic constant");
    add_common(constant, false);

    std::string sizes_arg = "100,1000,10000";
    auto* converge = app.add_subcommand("converge", "lambda(N) against the asymptotic constant");
    add_common(converge, false);
    converge->add_option("--sizes", sizes_arg, "comma-separated increasing sizes");
    converge->add_option("--rows", o.rows, "explicit row limit (0 = auto extension)");

    std::size_t n_max = 500, grid = 1000;
    auto* analyze = app.add_subcommand("analyze", "monotonicity and convexity probes");
    analyze->require_subcommand(1);
    std::vector<CLI::App*> analyze_subs;
    for (const char* name : {"bennett", "condition", "convexity"}) {
        auto* s = analyze->add_subcommand(name);
        s->add_option("--alpha", o.alpha, "alpha")->required();
        s->add_option("--p", o.p, "exponent p")->required();
        s->add_option("--n-max", n_max, "sequence length");
        s->add_option("--grid", grid, "grid size (convexity)");
        s->add_option("--format", o.format, "json|csv|text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        s->add_option("--output", o.output, "write report to file");
        analyze_subs.push_back(s);
    }

    std::string probe_id;
    bool probe_reversed = false;
    std::optional<double> amin, amax;
    std::optional<std::size_t> pgrid, pnmax;
    auto* probe = app.add_subcommand("probe", "grid-check a registry inequality");
    probe->add_option("--id", probe_id, "inequality id")->required();
    probe->add_flag("--reversed", probe_reversed, "check the reversed claim on its box");
    probe->add_option("--alpha-min", [&](const std::vector<std::string>& v) {
        amin = std::stod(v[0]);
        return true;
    }, "restrict alpha range");
    probe->add_option("--alpha-max", [&](const std::vector<std::string>& v) {
        amax = std::stod(v[0]);
        return true;
    }, "restrict alpha range");
    probe->add_option("--grid", [&](const std::vector<std::string>& v) {
        pgrid = std::stoul(v[0]);
        return true;
    }, "points per scalar dimension");
    probe->add_option("--n-max", [&](const std::vector<std::string>& v) {
        pnmax = std::stoul(v[0]);
        return true;
    }, "integer index bound");
    probe->add_option("--threads", o.threads, "worker threads");
    probe->add_option("--format", o.format, "json|csv|text")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    probe->add_option("--output", o.output, "write report to file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    try {
        if (bound->parsed()) {
            if (o.family.empty() == o.matrix_path.empty())
                throw mbounds::InputError("exactly one of --family / --matrix is required");
            return cmd_bound(o);
        }
        if (verify->parsed()) {
            if (o.family.empty() == o.matrix_path.empty())
                throw mbounds::InputError("exactly one of --family / --matrix is required");
            return cmd_verify(o);
        }
        if (constant->parsed()) return cmd_constant(o);
        if (converge->parsed()) return cmd_converge(o, sizes_arg);
        if (analyze->parsed()) {
            for (std::size_t i = 0; i < analyze_subs.size(); ++i)
                if (analyze_subs[i]->parsed())
                    return cmd_analyze(o, std::array{"bennett", "condition", "convexity"}[i],
                                       n_max, grid);
        }
        if (probe->parsed())
            return cmd_probe(o, probe_id, probe_reversed, amin, amax, pgrid, pnmax);
    } catch (const mbounds::RegimeViolation& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 2;
    } catch (const mbounds::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const mbounds::UnknownInequality& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const mbounds::DomainError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const mbounds::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
