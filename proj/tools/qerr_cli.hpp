#pragma once

// Command-line front end. Kept in a header so the test suites can drive
// run_cli() in-process with captured streams.
//
// Exit codes: 0 success, 1 a requested check failed, 2 usage or input error,
// 3 a size budget would be exceeded (lift with --unsafe-budget).

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qerr/blekherman.hpp"
#include "qerr/errors.hpp"
#include "qerr/io.hpp"
#include "qerr/lower_bound.hpp"
#include "qerr/multilinear.hpp"
#include "qerr/query_sim.hpp"
#include "qerr/symmetrize.hpp"

namespace qerr::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kBudget = 3 };

inline constexpr unsigned kMaxTableN = 100000;
inline constexpr unsigned kMaxSimulateLength = 16;

enum class Format { Table, Csv, JsonLines };

/// Rows sharing one set of columns.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

class Printer {
public:
    Printer(std::ostream& out, Format format) : out_(out), format_(format) {}

    void emit(const Table& t) {
        switch (format_) {
        case Format::Table: emit_aligned(t); break;
        case Format::Csv: emit_csv(t); break;
        case Format::JsonLines: emit_json(t); break;
        }
        ++emitted_;
    }

private:
    void emit_aligned(const Table& t) {
        if (emitted_) out_ << '\n';
        std::vector<std::size_t> width(t.columns.size());
        for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
        for (const auto& r : t.rows)
            for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s;
            for (std::size_t c = 0; c < cells.size(); ++c) {
                if (c) s += "  ";
                s += cells[c];
                if (c + 1 < cells.size()) s.append(width[c] - cells[c].size(), ' ');
            }
            out_ << s << '\n';
        };
        line(t.columns);
        std::vector<std::string> rule;
        for (auto w : width) rule.emplace_back(w, '-');
        line(rule);
        for (const auto& r : t.rows) line(r);
    }

    void emit_csv(const Table& t) {
        if (emitted_) out_ << '\n';
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t c = 0; c < cells.size(); ++c) out_ << (c ? "," : "") << csv_escape(cells[c]);
            out_ << '\n';
        };
        line(t.columns);
        for (const auto& r : t.rows) line(r);
    }

    void emit_json(const Table& t) {
        for (const auto& r : t.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = r[c];
            out_ << obj.dump() << '\n';
        }
    }

    std::ostream& out_;
    Format format_;
    int emitted_ = 0;
};

inline std::string fixed12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", v);
    return buf;
}

/// Appends "<name>" and "<name>_dec" cells.
inline void push_prob(std::vector<std::string>& row, const Rational& r) {
    row.push_back(r.str());
    row.push_back(r.decimal(12));
}

inline void push_prob_columns(std::vector<std::string>& cols, const std::string& name) {
    cols.push_back(name);
    cols.push_back(name + "_dec");
}

inline std::vector<Rational> parse_rational_list(const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Rational::parse(item));
    if (out.empty()) throw DomainError("empty rational list");
    return out;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    return io::parse_document(in, path);
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& doc) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, "cannot write file");
    out << doc.dump(2) << '\n';
}

struct Options {
    Format format = Format::Table;
    bool unsafe_budget = false;

    unsigned n = 0;
    unsigned n_min = 1, n_max = 20;

    std::string function;
    std::string input;
    bool exhaustive = false;
    std::optional<std::uint64_t> shots;
    std::uint64_t seed = 0;

    std::string cert_path, poly_path, q_text, out_path, witness_path, alpha_text;
    unsigned s = 0, b = 0;

    std::string epsilon_text;
    unsigned resolution = 200;
    unsigned restarts = 50;
};

// --- table -----------------------------------------------------------------

inline std::optional<Rational> mis12_reference(unsigned n) {
    switch (n) {
    case 2: return Rational(1, 10);
    case 3: return Rational(1, 4);
    case 5: return Rational(7, 16);
    default: return std::nullopt;
    }
}

inline int cmd_table(const Options& o, Printer& pr) {
    if (o.n_min < 1 || o.n_min > o.n_max) throw DomainError("need 1 <= n-min <= n-max");
    if (!o.unsafe_budget && o.n_max > kMaxTableN) throw BudgetError("table limited to n <= 100000");
    Table t;
    t.columns = {"n"};
    for (const char* name : {"err", "line_case", "case_a", "errc_equality", "errc_and", "mis12"})
        push_prob_columns(t.columns, name);
    t.columns.push_back("mis12_ok");

    bool all_ok = true;
    for (unsigned n = o.n_min; n <= o.n_max; ++n) {
        std::vector<std::string> row{std::to_string(n)};
        const auto err = theoretical_err(n);
        push_prob(row, err);
        const auto [errc_eq, errc_and] = classical_reference(n);
        if (n >= 2) {
            push_prob(row, line_case_bound(n));
            push_prob(row, case_a_bound(n));
            push_prob(row, errc_eq);
        } else {
            row.insert(row.end(), 6, "-");
        }
        push_prob(row, errc_and);
        if (auto ref = mis12_reference(n)) {
            push_prob(row, *ref);
            const bool ok = err <= *ref;
            all_ok = all_ok && ok;
            row.push_back(ok ? "OK" : "FAIL");
        } else {
            row.insert(row.end(), 3, "-");
        }
        t.add(std::move(row));
    }
    pr.emit(t);
    return all_ok ? kOk : kCheckFailed;
}

// --- simulate --------------------------------------------------------------

inline int cmd_simulate(const Options& o, Printer& pr) {
    const bool is_eq = o.function == "eq";
    if (!is_eq && o.function != "and") throw DomainError("function must be 'eq' or 'and'");
    if (o.n < 1) throw DomainError("--n must be positive");
    const unsigned len = is_eq ? o.n + 1 : o.n;
    if (o.exhaustive == !o.input.empty()) throw DomainError("give exactly one of --input or --exhaustive");

    auto accept = [&](const BitInput& x) { return is_eq ? eq_accept_probability(x) : and_accept_probability(x); };
    auto error = [&](const BitInput& x) { return is_eq ? eq_error_probability(x) : and_error_probability(x); };

    Table rows;
    rows.columns = {"function", "n", "input", "sign_sum"};
    push_prob_columns(rows.columns, "accept");
    push_prob_columns(rows.columns, "error");
    if (o.shots) rows.columns.insert(rows.columns.end(), {"shots", "seed", "count_output1", "count_output0"});

    auto add_row = [&](const BitInput& x) {
        const auto x_eq = is_eq ? x : x.appended(1);
        std::vector<std::string> row{o.function, std::to_string(o.n), x.str(), std::to_string(x_eq.sign_sum())};
        push_prob(row, accept(x));
        push_prob(row, error(x));
        if (o.shots) {
            const auto counts = sample_bernoulli(accept(x), *o.shots, o.seed);
            row.insert(row.end(), {std::to_string(*o.shots), std::to_string(o.seed), std::to_string(counts.output1),
                                   std::to_string(counts.output0)});
        }
        rows.add(std::move(row));
    };

    if (!o.exhaustive) {
        const auto x = BitInput::parse(o.input);
        if (x.length() != len)
            throw DomainError("input has " + std::to_string(x.length()) + " bits, expected " + std::to_string(len));
        add_row(x);
        pr.emit(rows);
        return kOk;
    }

    if (!o.unsafe_budget && len > kMaxSimulateLength)
        throw BudgetError("exhaustive simulation limited to 16 input bits");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << len); ++mask) add_row(BitInput::from_mask(mask, len));
    pr.emit(rows);

    const auto worst = is_eq ? worst_case_eq(len) : worst_case_and(len);
    const auto expected = theoretical_err(o.n);
    std::string maximizers;
    for (const auto& x : worst.maximizers) maximizers += (maximizers.empty() ? "" : " ") + x.str();
    Table summary;
    summary.columns = {"function", "n"};
    push_prob_columns(summary.columns, "worst_error");
    push_prob_columns(summary.columns, "theoretical_err");
    summary.columns.insert(summary.columns.end(), {"match", "maximizers"});
    std::vector<std::string> row{o.function, std::to_string(o.n)};
    push_prob(row, worst.error);
    push_prob(row, expected);
    const bool match = worst.error == expected;
    row.push_back(match ? "true" : "false");
    row.push_back(maximizers);
    summary.add(std::move(row));
    pr.emit(summary);
    return match ? kOk : kCheckFailed;
}

// --- blekherman ------------------------------------------------------------

/// Target from --q (univariate coefficients) or --poly (p, target = symmetrize(p²)).
inline UnivariatePoly target_polynomial(const Options& o, std::optional<unsigned>& poly_n) {
    if (o.q_text.empty() == o.poly_path.empty()) throw DomainError("give exactly one of --q or --poly");
    if (!o.q_text.empty()) return UnivariatePoly(parse_rational_list(o.q_text));
    const auto p = io::multilinear_from_json(read_json_file(o.poly_path));
    poly_n = p.n();
    return symmetrize(p * p);
}

inline int cmd_blek_verify(const Options& o, Printer& pr) {
    if (o.cert_path.empty()) throw DomainError("--cert is required");
    const auto cert = io::certificate_from_json(read_json_file(o.cert_path));
    std::optional<unsigned> poly_n;
    const auto q = target_polynomial(o, poly_n);
    if (poly_n && *poly_n != cert.n()) throw DimensionError("polynomial and certificate disagree on n");
    const auto res = verify_certificate_detailed(cert, q);
    Table t;
    t.columns = {"n", "t", "target", "verified", "first_failing_s", "reason"};
    t.add({std::to_string(cert.n()), std::to_string(cert.t()), q.str(), res.ok ? "true" : "false",
           res.first_failing_s ? std::to_string(*res.first_failing_s) : "-", res.ok ? "-" : res.reason});
    pr.emit(t);
    return res.ok ? kOk : kCheckFailed;
}

inline int cmd_blek_find(const Options& o, Printer& pr) {
    std::optional<unsigned> poly_n;
    const auto q = target_polynomial(o, poly_n);
    const unsigned n = poly_n ? *poly_n : o.n;
    if (poly_n && o.n && o.n != *poly_n) throw DimensionError("--n disagrees with the polynomial file");
    if (n < 2) throw DomainError("--n must be at least 2");
    const auto cert = find_decomposition_deg2(q, n);
    Table t;
    t.columns = {"n", "target", "result", "lambda", "certificate"};
    if (!cert) {
        t.add({std::to_string(n), q.str(), "infeasible", "-", "-"});
        pr.emit(t);
        return kOk;
    }
    if (!verify_certificate(*cert, q)) throw InvariantError("found certificate does not verify");
    const Rational lambda = cert->terms()[1] ? cert->terms()[1]->gram().C : Rational{0};
    const auto doc = io::to_json(*cert);
    if (!o.out_path.empty()) write_json_file(o.out_path, doc);
    t.add({std::to_string(n), q.str(), "found", lambda.str(), doc.dump()});
    pr.emit(t);
    return kOk;
}

inline int cmd_blek_probability(const Options& o, Printer& pr) {
    if (!o.unsafe_budget && o.n > kMaxPairEnumerationN) throw BudgetError("pair enumeration limited to n <= 10");
    const auto formula = pr_all_pairs_mixed(o.n, o.s, o.b);
    const auto brute = pr_all_pairs_mixed_bruteforce(o.n, o.s, o.b);
    Table t;
    t.columns = {"n", "s", "b"};
    push_prob_columns(t.columns, "formula");
    push_prob_columns(t.columns, "bruteforce");
    t.columns.push_back("match");
    std::vector<std::string> row{std::to_string(o.n), std::to_string(o.s), std::to_string(o.b)};
    push_prob(row, formula);
    push_prob(row, brute);
    row.push_back(formula == brute ? "true" : "false");
    t.add(std::move(row));
    pr.emit(t);
    return formula == brute ? kOk : kCheckFailed;
}

inline int cmd_blek_projector(const Options& o, Printer& pr) {
    if (!o.unsafe_budget && o.n > kMaxProjectorN) throw BudgetError("projector check limited to n <= 8");
    const auto alpha = parse_rational_list(o.alpha_text);
    const auto res = projector_proportionality_check(o.n, o.b, alpha);
    Table t;
    t.columns = {"n", "b", "alpha", "c", "ok", "dimension", "vectors"};
    t.add({std::to_string(o.n), std::to_string(o.b), o.alpha_text, res.c.str(), res.ok ? "true" : "false",
           std::to_string(res.dimension), std::to_string(res.vectors)});
    pr.emit(t);
    return res.ok ? kOk : kCheckFailed;
}

// --- bound -----------------------------------------------------------------

inline int cmd_bound_value(const Options& o, Printer& pr) {
    if (o.n < 1) throw DomainError("--n must be positive");
    Table t;
    t.columns = {"n"};
    for (const char* name : {"lower_bound", "line_case", "case_a"}) push_prob_columns(t.columns, name);
    std::vector<std::string> row{std::to_string(o.n)};
    push_prob(row, theoretical_lower_bound(o.n));
    if (o.n >= 2) {
        push_prob(row, line_case_bound(o.n));
        push_prob(row, case_a_bound(o.n));
    } else {
        row.insert(row.end(), 4, "-");
    }
    t.add(std::move(row));
    pr.emit(t);
    return kOk;
}

inline int cmd_bound_witness(const Options& o, Printer& pr) {
    io::WitnessRecord rec;
    if (!o.witness_path.empty()) {
        rec = io::witness_from_json(read_json_file(o.witness_path));
    } else {
        if (o.n < 2) throw DomainError("--n must be at least 2");
        rec = {o.n, optimal_witness(o.n),
               o.epsilon_text.empty() ? theoretical_lower_bound(o.n) : Rational::parse(o.epsilon_text)};
    }
    const bool feasible = check_feasible(rec.witness, FeasibilityInstance(rec.n, rec.epsilon));
    if (!o.out_path.empty()) write_json_file(o.out_path, io::to_json(rec));
    Table t;
    t.columns = {"n", "A", "B", "C", "lambda"};
    push_prob_columns(t.columns, "epsilon");
    t.columns.push_back("feasible");
    std::vector<std::string> row{std::to_string(rec.n), rec.witness.A.str(), rec.witness.B.str(), rec.witness.C.str(),
                                 rec.witness.lambda.str()};
    push_prob(row, rec.epsilon);
    row.push_back(feasible ? "true" : "false");
    t.add(std::move(row));
    pr.emit(t);
    return feasible ? kOk : kCheckFailed;
}

inline int cmd_bound_falsify(const Options& o, Printer& pr) {
    if (o.epsilon_text.empty()) throw DomainError("--epsilon is required");
    const auto eps = Rational::parse(o.epsilon_text);
    const auto w = grid_falsify(o.n, eps, o.resolution, o.unsafe_budget);
    Table t;
    t.columns = {"n"};
    push_prob_columns(t.columns, "epsilon");
    t.columns.insert(t.columns.end(), {"resolution", "result", "A", "B", "C", "lambda"});
    std::vector<std::string> row{std::to_string(o.n)};
    push_prob(row, eps);
    row.push_back(std::to_string(o.resolution));
    if (w) row.insert(row.end(), {"witness", w->A.str(), w->B.str(), w->C.str(), w->lambda.str()});
    else row.insert(row.end(), {"none", "-", "-", "-", "-"});
    t.add(std::move(row));
    pr.emit(t);
    return kOk;
}

inline int cmd_bound_search(const Options& o, Printer& pr) {
    if (o.restarts < 50) throw DomainError("--restarts must be at least 50");
    if (o.n < 1) throw DomainError("--n must be positive");
    const double best = numeric_min_error_search_detailed(o.n, o.restarts, o.seed, {}, o.unsafe_budget).best_error;
    const auto closed = theoretical_lower_bound(o.n);
    const double gap = best - closed.to_double();
    const bool within = gap >= -1e-6 && gap <= 1e-4;
    Table t;
    t.columns = {"n", "restarts", "seed", "best_numeric"};
    push_prob_columns(t.columns, "closed_form");
    t.columns.insert(t.columns.end(), {"gap", "within_band"});
    std::vector<std::string> row{std::to_string(o.n), std::to_string(o.restarts), std::to_string(o.seed),
                                 fixed12(best)};
    push_prob(row, closed);
    char gap_buf[32];
    std::snprintf(gap_buf, sizeof gap_buf, "%.3e", gap);
    row.insert(row.end(), {gap_buf, within ? "true" : "false"});
    t.add(std::move(row));
    pr.emit(t);
    return within ? kOk : kCheckFailed;
}

// --- dispatch --------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact single-query error of AND_n and EQUALITY_{n+1}", "qerr"};
    app.require_subcommand(1);
    Options o;

    std::string format = "table";
    app.add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "csv", "json-lines"}))
        ->capture_default_str();
    app.add_flag("--unsafe-budget", o.unsafe_budget, "Lift the size budgets of enumerations and searches");

    auto* table = app.add_subcommand("table", "Error table: exact values, classical references, prior bounds");
    table->add_option("--n-min", o.n_min, "First n")->capture_default_str();
    table->add_option("--n-max", o.n_max, "Last n")->capture_default_str();

    auto* sim = app.add_subcommand("simulate", "Run the single-query EQUALITY algorithm (or its AND reduction)");
    sim->add_option("function", o.function, "eq or and")->required()->check(CLI::IsMember({"eq", "and"}));
    sim->add_option("--n", o.n, "EQUALITY_{n+1} or AND_n")->required();
    auto* input_opt = sim->add_option("--input", o.input, "Input bits, e.g. 0101");
    auto* exh_opt = sim->add_flag("--exhaustive", o.exhaustive, "All inputs plus the worst case");
    input_opt->excludes(exh_opt);
    sim->add_option("--shots", o.shots, "Append seeded sample counts");
    sim->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();

    auto* blek = app.add_subcommand("blekherman", "Blekherman-form certificates and related exact checks");
    blek->require_subcommand(1);
    auto* verify = blek->add_subcommand("verify", "Verify a certificate against a target");
    verify->add_option("--cert", o.cert_path, "Certificate JSON file")->required();
    verify->add_option("--q", o.q_text, "Target coefficients c0,c1,... of q(s)");
    verify->add_option("--poly", o.poly_path, "Polynomial JSON p; the target is symmetrize(p^2)");
    auto* find = blek->add_subcommand("find", "Find a t = 1 certificate for a quadratic target");
    find->add_option("--q", o.q_text, "Target coefficients c0,c1,c2");
    find->add_option("--poly", o.poly_path, "Polynomial JSON p; the target is symmetrize(p^2)");
    find->add_option("--n", o.n, "Number of variables (implied by --poly)");
    find->add_option("--out", o.out_path, "Write the certificate here");
    auto* prob = blek->add_subcommand("probability", "All-pairs-mixed probability: formula vs enumeration");
    prob->add_option("--n", o.n)->required();
    prob->add_option("--s", o.s, "Weight")->required();
    prob->add_option("--b", o.b, "Number of pairs")->required();
    auto* proj = blek->add_subcommand("projector", "Check rho^2 = c rho for one irreducible subspace");
    proj->add_option("--n", o.n)->required();
    proj->add_option("--b", o.b, "Number of pairs")->required();
    proj->add_option("--alpha", o.alpha_text, "Coefficients alpha_0,...,alpha_{n-2b}")->required();

    auto* bound = app.add_subcommand("bound", "Lower-bound closed forms, witnesses and falsification oracles");
    bound->require_subcommand(1);
    auto* value = bound->add_subcommand("value", "Closed-form bounds");
    value->add_option("--n", o.n)->required();
    auto* wit = bound->add_subcommand("witness", "Optimal witness and its feasibility");
    wit->add_option("--n", o.n);
    wit->add_option("--epsilon", o.epsilon_text, "Error level (default: the optimum)");
    wit->add_option("--witness", o.witness_path, "Check this witness file instead");
    wit->add_option("--out", o.out_path, "Write the witness here");
    auto* fals = bound->add_subcommand("falsify", "Grid search for a feasible witness at epsilon");
    fals->add_option("--n", o.n)->required();
    fals->add_option("--epsilon", o.epsilon_text)->required();
    fals->add_option("--resolution", o.resolution)->capture_default_str();
    auto* search = bound->add_subcommand("search", "Numeric search over one-query algorithms");
    search->add_option("--n", o.n)->required();
    search->add_option("--restarts", o.restarts)->capture_default_str();
    search->add_option("--seed", o.seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    o.format = format == "csv" ? Format::Csv : format == "json-lines" ? Format::JsonLines : Format::Table;
    Printer pr(out, o.format);
    try {
        if (*table) return cmd_table(o, pr);
        if (*sim) return cmd_simulate(o, pr);
        if (*verify) return cmd_blek_verify(o, pr);
        if (*find) return cmd_blek_find(o, pr);
        if (*prob) return cmd_blek_probability(o, pr);
        if (*proj) return cmd_blek_projector(o, pr);
        if (*value) return cmd_bound_value(o, pr);
        if (*wit) return cmd_bound_witness(o, pr);
        if (*fals) return cmd_bound_falsify(o, pr);
        if (*search) return cmd_bound_search(o, pr);
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << " (use --unsafe-budget to override)\n";
        return kBudget;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvariantError& e) {
        err << "internal check failed: " << e.what() << '\n';
        return kCheckFailed;
    }
    err << "error: no command\n";
    return kUsage;
}

}  // namespace qerr::cli
