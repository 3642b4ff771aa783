// Command-line front end. Every command prints one JSON document on stdout.
// Exit codes: 0 ok, 2 malformed input or other library error, 3 precision exhausted.
#include "divisikit/cptp.hpp"
#include "divisikit/decompose.hpp"
#include "divisikit/divisibility.hpp"
#include "divisikit/error.hpp"
#include "divisikit/io.hpp"
#include "divisikit/nptools.hpp"
#include "divisikit/roots.hpp"
#include "divisikit/sat.hpp"
#include "suites.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace divisikit;
using io::Json;
using io::to_json;

namespace {

struct Config {
    std::uint64_t seed = 20240611;
    int precision = 128;
    double tol = 1e-9;
    int cap = 24;
    // gadget constants; "0" selects the per-instance default
    std::string sat_n = "0", sat_m = "0", sat_delta = "0", sat_nd = "0";
    double lift_c = 1000;
    std::string gadget_c = "1/4";
    std::string lift_scale = "1/2";
};

RootOptions root_options(const Config& c)
{
    RootOptions o;
    o.precision_bits = c.precision;
    o.tol = c.tol;
    return o;
}

void print(const Json& j)
{
    std::cout << j.dump(2) << '\n';
}

const char* yes_no(bool b)
{
    return b ? "yes" : "no";
}

Json report_json(const RootReport& r)
{
    Json j;
    j["max_deviation"] = io::format_double(r.max_deviation);
    j["min_entry"] = io::format_double(r.min_entry);
    j["max_row_sum_deviation"] = io::format_double(r.max_row_sum_deviation);
    j["max_col_sum_deviation"] = io::format_double(r.max_col_sum_deviation);
    return j;
}

Json cptp_json(const CptpReport& r)
{
    Json j;
    j["cptp"] = r.cptp;
    j["cp"] = r.cp;
    j["tp"] = r.tp;
    j["hermitian"] = r.hermitian;
    j["exact"] = r.exact;
    j["min_eigenvalue"] = io::format_double(r.min_eigenvalue);
    j["tp_deviation"] = io::format_double(r.tp_deviation);
    return j;
}

Json decomposition_json(const std::optional<Decomposition>& d)
{
    Json j;
    j["answer"] = yes_no(d.has_value());
    if (d) {
        j["factors"] = Json::array({to_json(d->left), to_json(d->right)});
        j["exact"] = d->exact;
        j["error"] = to_json(d->error);
    }
    return j;
}

std::string assignment_string(int n_v, unsigned long branch)
{
    std::string s;
    for (bool b : assignment_of(n_v, branch)) s += b ? 'T' : 'F';
    return s;
}

EmbeddingParams embedding_params(const Config& c)
{
    EmbeddingParams p;
    p.N = parse_rational(c.sat_n);
    p.M = parse_rational(c.sat_m);
    p.delta = parse_rational(c.sat_delta);
    p.n_d = parse_rational(c.sat_nd);
    p.lift_c = from_double(c.lift_c);
    return p;
}

// ---- commands ----

struct DivideArgs {
    int n = 2;
    std::string eps, weak, closest, input;
};

void cmd_divide(const DivideArgs& a)
{
    auto d = io::dist_from_json(io::read_file(a.input));
    Json out;
    if (!a.closest.empty()) {
        auto r = closest_divisible(d, a.n, parse_rational(a.closest));
        out["answer"] = "yes";
        out["witness"] = to_json(r.witness);
        out["epsilon_star"] = to_json(r.eps_star);
        out["epsilon_lower"] = to_json(r.eps_lower);
    } else if (!a.weak.empty()) {
        out["answer"] = yes_no(weak_divisibility(d, a.n, parse_rational(a.weak)));
    } else {
        auto v = a.eps.empty() ? is_n_divisible(d, a.n) : divisibility_eps(d, a.n, parse_rational(a.eps)).verdict;
        out["answer"] = yes_no(v.yes);
        if (v.witness) out["witness"] = to_json(*v.witness);
    }
    print(out);
}

struct DecomposeArgs {
    int m = 0;
    bool even = false;
    std::string eps, weak, input;
    int complete = 0;
};

void cmd_decompose(const DecomposeArgs& a, const Config& c)
{
    auto d = io::dist_from_json(io::read_file(a.input));
    int modes = (a.m > 0) + a.even;
    int kinds = !a.eps.empty() + !a.weak.empty() + (a.complete > 0);
    if (modes > 1 || kinds > 1 || (modes && kinds))
        fail(Errc::ParseError, "--m/--even and --eps/--weak/--complete are mutually exclusive");
    if (a.complete > 0) {
        auto r = enumerate_complete_decompositions(d, c.tol, a.complete);
        Json groups = Json::array();
        for (const auto& g : r.groupings) {
            Json factors = Json::array();
            for (const auto& f : g) factors.push_back(to_json(f));
            groups.push_back(std::move(factors));
        }
        Json out;
        out["count"] = r.groupings.size();
        out["truncated"] = r.truncated;
        out["groupings"] = std::move(groups);
        print(out);
        return;
    }
    if (!a.weak.empty()) {
        Json out;
        out["answer"] = yes_no(weak_decomposability(d, parse_rational(a.weak)));
        print(out);
        return;
    }
    std::optional<Decomposition> r;
    if (!a.eps.empty()) r = decompose_eps(d, parse_rational(a.eps), c.tol);
    else if (a.even) r = decompose_even(d, c.tol);
    else if (a.m > 0) r = decompose_m(d, a.m, c.tol);
    else r = decompose(d, c.tol);
    print(decomposition_json(r));
}

void cmd_oracle(const std::string& variant, const std::string& input, const Config& c)
{
    Json j = io::read_file(input);
    OracleOptions opt;
    opt.cap = c.cap;
    OracleResult r;
    if (variant == "partition") {
        r = partition_oracle(io::partition_from_json(j), opt);
    } else {
        auto s = io::instance_from_json(j);
        r = solve_subset_variant(s, parse_variant(variant), opt);
    }
    Json out;
    out["answer"] = yes_no(r.yes);
    if (r.yes) out["witness"] = r.witness;
    print(out);
}

void cmd_encode_subsetsum(const std::string& input, const std::string& output, const std::string& eps,
                          const Config& c)
{
    auto s = io::instance_from_json(io::read_file(input));
    GadgetParams gp;
    gp.c = parse_rational(c.gadget_c);
    Gadget g;
    if (!eps.empty()) g = encode_subset_sum_eps(s, parse_rational(eps), gp);
    else if (s.variant == SubsetVariant::Even) g = encode_even_subset_sum(s, gp);
    else g = encode_subset_sum(s, gp);
    if (!output.empty()) io::write_file(output, to_json(g.dist));
    Json out = to_json(g.dist);
    Json b = Json::array();
    for (const auto& x : g.b) b.push_back(to_json(x));
    out["b"] = std::move(b);
    out["a"] = to_json(g.a);
    print(out);
}

struct EncodeSatArgs {
    std::string input, emit_dir, heatmap;
    bool check = false;
};

void cmd_encode_sat(const EncodeSatArgs& a, const Config& c)
{
    auto inst = io::sat_from_json(io::read_file(a.input));
    auto params = embedding_params(c);
    auto fam = assemble_family(inst, params);
    const auto& f = fam.frame();
    Json out;
    if (a.check) {
        auto rep = check_instance(inst, params);
        out["agree"] = rep.agree;
        out["satisfiable"] = rep.oracle_verdict;
        out["encoder_verdict"] = yes_no(rep.encoder_verdict);
        if (rep.encoder_verdict) {
            out["witness_branch"] = rep.witness_branch;
            out["witness_assignment"] = assignment_string(inst.n_v, rep.witness_branch);
        }
        Json br = Json::array();
        for (const auto& d : rep.branches) {
            Json e;
            e["branch"] = d.branch;
            e["assignment"] = assignment_string(inst.n_v, d.branch);
            e["nonnegative"] = d.nonnegative;
            e["min_entry"] = to_json(d.min_entry);
            Json v = Json::array();
            for (int k : d.violated_clauses) v.push_back(k + 1);
            e["violated_clauses"] = std::move(v);
            br.push_back(std::move(e));
        }
        out["branches"] = std::move(br);
    }
    out["n_v"] = inst.n_v;
    out["n_c"] = static_cast<int>(inst.clauses.size());
    out["dim"] = fam.dim();
    out["branch_count"] = fam.branch_count();
    Json p;
    p["N"] = to_json(f.N);
    p["M"] = to_json(f.M);
    p["delta"] = to_json(f.delta);
    p["a"] = to_json(f.a);
    p["n_d"] = to_json(fam.n_d());
    out["params"] = std::move(p);

    if (!a.emit_dir.empty()) {
        std::filesystem::create_directories(a.emit_dir);
        Json files = Json::array();
        for (unsigned long s = 0; s < fam.branch_count(); ++s) {
            auto path = (std::filesystem::path(a.emit_dir) / ("branch_" + std::to_string(s) + ".json")).string();
            Json m = to_json(fam.raw_branch(s));
            m["branch"] = s;
            m["assignment"] = assignment_string(inst.n_v, s);
            io::write_file(path, m);
            files.push_back(path);
        }
        out["emitted"] = std::move(files);
    }
    if (!a.heatmap.empty()) {
        std::ofstream csv(a.heatmap);
        if (!csv) fail(Errc::ParseError, "cannot write '" + a.heatmap + "'");
        csv << "branch,assignment,row,col,value\n";
        int region = 2 * f.n_c;  // clause coordinates, each carried by a 2x2 block
        for (unsigned long s = 0; s < fam.branch_count(); ++s) {
            auto m = fam.raw_branch(s);
            auto asg = assignment_string(inst.n_v, s);
            for (int i = 0; i < region; ++i)
                for (int j = 0; j < region; ++j)
                    csv << s << ',' << asg << ',' << i << ',' << j << ',' << io::format_double(to_double(m(i, j)))
                        << '\n';
        }
        out["heatmap"] = a.heatmap;
    }
    print(out);
}

RootMode parse_mode(const std::string& s)
{
    if (s == "stochastic") return RootMode::stochastic;
    if (s == "nonnegative") return RootMode::nonnegative;
    if (s == "doubly") return RootMode::doubly_stochastic;
    fail(Errc::ParseError, "unknown root mode '" + s + "'");
}

void cmd_mat_root(const std::string& mode, const std::string& input, const Config& c)
{
    auto m = io::matrix_from_json(io::read_file(input));
    auto r = find_root(m, parse_mode(mode), root_options(c));
    Json out;
    out["answer"] = yes_no(r.has_value());
    if (r) {
        out["root"] = to_json(r->root);
        out["branch"] = r->branch;
        out["report"] = report_json(r->report);
    }
    print(out);
}

void cmd_lift(const std::string& input, const std::string& scale)
{
    auto m = io::matrix_from_json(io::read_file(input));
    LiftOptions opt;
    opt.scale_target = parse_rational(scale);
    auto l = lift_nonneg_to_stochastic(m, opt);
    Json out;
    out["a"] = to_json(l.a);
    out["stochastic"] = classify_matrix(l.lifted).stochastic;
    out["lifted"] = to_json(l.lifted);
    print(out);
}

void cmd_verify_root(const std::string& qpath, const std::string& ppath)
{
    auto q = io::matrix_from_json(io::read_file(qpath));
    auto p = io::matrix_from_json(io::read_file(ppath));
    auto r = verify_root(q, p);
    Json out;
    out["max_deviation"] = to_json(r.max_deviation);
    out["min_entry"] = to_json(r.min_entry);
    out["max_row_sum_deviation"] = to_json(r.max_row_sum_deviation);
    out["max_col_sum_deviation"] = to_json(r.max_col_sum_deviation);
    print(out);
}

void cmd_emb(const std::string& input)
{
    auto a = io::complex_matrix_from_json(io::read_file(input));
    auto b = emb(a);
    print(b.is_real() ? to_json(b.real_part()) : to_json(b));
}

void cmd_cptp_check(const std::string& input)
{
    print(cptp_json(is_cptp(io::complex_matrix_from_json(io::read_file(input)))));
}

void cmd_cptp_root(const std::string& input, const Config& c)
{
    auto r = find_cptp_root(io::complex_matrix_from_json(io::read_file(input)), root_options(c));
    Json out;
    out["answer"] = yes_no(r.has_value());
    if (r) {
        out["root"] = to_json(r->root);
        out["branch"] = r->branch;
        out["max_deviation"] = io::format_double(r->max_deviation);
        out["report"] = cptp_json(r->report);
    }
    print(out);
}

void cmd_sweep(const std::vector<int>& only, const Config& c)
{
    std::vector<int> ids = only;
    if (ids.empty())
        for (int i = 1; i <= suites::kCount; ++i) ids.push_back(i);
    suites::SuiteConfig sc;
    sc.seed = c.seed;
    Json rows = Json::array();
    int passed = 0;
    for (int id : ids) {
        if (id < 1 || id > suites::kCount) fail(Errc::ParseError, "unknown criterion " + std::to_string(id));
        auto o = suites::run_suite(id, sc);
        passed += o.pass();
        Json r;
        r["id"] = o.id;
        r["name"] = o.name;
        r["pass"] = o.pass();
        r["correct"] = o.correct;
        r["seconds"] = std::round(o.seconds * 10) / 10;
        r["limit_seconds"] = o.limit_seconds;
        r["detail"] = o.detail;
        rows.push_back(std::move(r));
    }
    Json out;
    out["seed"] = c.seed;
    out["passed"] = passed;
    out["total"] = ids.size();
    out["criteria"] = std::move(rows);
    print(out);
}

int report_error(const std::string& code, const std::string& message, int exit_code)
{
    Json e;
    e["error"] = code;
    e["message"] = message;
    std::cerr << e.dump() << '\n';
    return exit_code;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Divisibility, decomposability and matrix-root toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key = value configuration file (also DIVISIKIT_CONFIG)")
        ->envname("DIVISIKIT_CONFIG");

    Config cfg;
    app.add_option("--seed", cfg.seed, "RNG seed for sweeps")->capture_default_str();
    app.add_option("--precision", cfg.precision, "working precision in bits")->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--tol", cfg.tol, "numeric tolerance")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--cap", cfg.cap, "brute-force size cap")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--sat-n", cfg.sat_n, "SAT variable-weight denominator N (0 = default)");
    app.add_option("--sat-m", cfg.sat_m, "SAT clause mask denominator M (0 = default)");
    app.add_option("--sat-delta", cfg.sat_delta, "SAT orthonormalization scale (0 = default)");
    app.add_option("--sat-nd", cfg.sat_nd, "SAT weight of the D mask (0 = default)");
    app.add_option("--lift-c", cfg.lift_c, "singularity-lifting constant")->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--gadget-c", cfg.gadget_c, "subset-sum gadget constant c")->capture_default_str();
    app.add_option("--lift-scale", cfg.lift_scale, "lift target a * max M")->capture_default_str();
    app.fallthrough();

    DivideArgs div;
    auto* divide = app.add_subcommand("divide", "n-divisibility of a distribution");
    divide->add_option("--n", div.n)->required()->check(CLI::Range(2, 1 << 20));
    auto* de = divide->add_option("--eps", div.eps, "accept within this max-norm margin");
    auto* dw = divide->add_option("--weak", div.weak, "weak eps-divisibility (decision only)");
    auto* dc = divide->add_option("--closest", div.closest, "bisect the smallest margin to this precision");
    de->excludes(dw)->excludes(dc);
    dw->excludes(dc);
    divide->add_option("dist", div.input)->required();

    DecomposeArgs dec;
    auto* decompose_cmd = app.add_subcommand("decompose", "decomposability of a distribution");
    decompose_cmd->add_option("--m", dec.m, "one factor of width m")->check(CLI::PositiveNumber);
    decompose_cmd->add_flag("--even", dec.even, "two factors of equal width");
    decompose_cmd->add_option("--eps", dec.eps);
    decompose_cmd->add_option("--weak", dec.weak);
    decompose_cmd->add_option("--complete", dec.complete, "enumerate complete decompositions up to LIMIT")
        ->check(CLI::PositiveNumber);
    decompose_cmd->add_option("dist", dec.input)->required();

    std::string variant, input, input2, output, eps, mode = "stochastic", scale;
    auto* oracle = app.add_subcommand("oracle", "brute-force subset-sum / partition oracle");
    oracle->add_option("variant", variant, "plain | even | m | signed_m | partition")->required();
    oracle->add_option("instance", input)->required();

    auto* enc_ss = app.add_subcommand("encode-subsetsum", "subset-sum instance to a distribution");
    enc_ss->add_option("instance", input)->required();
    enc_ss->add_option("-o,--output", output, "write the distribution here");
    enc_ss->add_option("--eps", eps, "eps-relaxed encoder");

    EncodeSatArgs sat;
    auto* enc_sat = app.add_subcommand("encode-sat", "1-in-3-SAT instance to a matrix family");
    enc_sat->add_option("instance", sat.input)->required();
    enc_sat->add_flag("--check", sat.check, "compare with the brute-force oracle");
    enc_sat->add_option("--emit-matrices", sat.emit_dir, "write every branch matrix to DIR");
    enc_sat->add_option("--heatmap", sat.heatmap, "write clause-region entries as CSV");

    auto* mat_root = app.add_subcommand("mat-root", "matrix square root of a given kind");
    mat_root->add_option("--mode", mode)->check(CLI::IsMember({"stochastic", "nonnegative", "doubly"}));
    mat_root->add_option("matrix", input)->required();

    auto* lift = app.add_subcommand("lift", "lift a matrix to a stochastic one");
    lift->add_option("--scale", scale, "a * max M (default from --lift-scale)");
    lift->add_option("matrix", input)->required();

    auto* verify = app.add_subcommand("verify-root", "exact check of Q^2 = P");
    verify->add_option("Q", input)->required();
    verify->add_option("P", input2)->required();

    auto* emb_cmd = app.add_subcommand("emb", "embed a matrix as a superoperator");
    emb_cmd->add_option("matrix", input)->required();
    auto* cptp_check = app.add_subcommand("cptp-check", "complete positivity and trace preservation");
    cptp_check->add_option("matrix", input)->required();
    auto* cptp_root = app.add_subcommand("cptp-root", "CPTP square root");
    cptp_root->add_option("matrix", input)->required();

    std::vector<int> only;
    auto* sweep = app.add_subcommand("sweep", "run the acceptance suites");
    sweep->add_option("--only", only, "criterion ids")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error("ParseError", e.what(), 2);
    }

    try {
        if (*divide) cmd_divide(div);
        else if (*decompose_cmd) cmd_decompose(dec, cfg);
        else if (*oracle) cmd_oracle(variant, input, cfg);
        else if (*enc_ss) cmd_encode_subsetsum(input, output, eps, cfg);
        else if (*enc_sat) cmd_encode_sat(sat, cfg);
        else if (*mat_root) cmd_mat_root(mode, input, cfg);
        else if (*lift) cmd_lift(input, scale.empty() ? cfg.lift_scale : scale);
        else if (*verify) cmd_verify_root(input, input2);
        else if (*emb_cmd) cmd_emb(input);
        else if (*cptp_check) cmd_cptp_check(input);
        else if (*cptp_root) cmd_cptp_root(input, cfg);
        else if (*sweep) cmd_sweep(only, cfg);
    } catch (const Error& e) {
        return report_error(errc_name(e.code()), e.what(), e.code() == Errc::PrecisionExhausted ? 3 : 2);
    } catch (const std::exception& e) {
        return report_error("InternalError", e.what(), 2);
    }
    return 0;
}
