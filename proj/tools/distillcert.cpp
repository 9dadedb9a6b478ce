// distillcert command-line front end.
//
// exit codes: 0 ok, 1 usage, 2 invalid input (invariant or parse), 3 no certificate,
// 4 verification failed.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <distillcert/distillcert.hpp>

namespace dc = distillcert;

namespace {

constexpr int exit_usage = 1;
constexpr int exit_invalid = 2;
constexpr int exit_no_certificate = 3;
constexpr int exit_verify_failed = 4;

double npt_tolerance() {
    const char* env = std::getenv("DISTILLCERT_TOL");
    if (!env || !*env) return dc::tolerance::npt;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
        throw dc::Error(dc::ErrorKind::BadParams, "DISTILLCERT_TOL must be a positive number");
    return v;
}

dc::BipartiteState load(const std::string& path) {
    std::vector<std::string> warnings;
    dc::BipartiteState s = dc::io::load_state(path, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
    return s;
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

int cmd_analyze(const std::string& path, bool as_json) {
    const dc::BipartiteState s = load(path);
    const double tol = npt_tolerance();
    const dc::PtResult pt = dc::min_pt_eig(s, dc::Side::A, tol);
    const auto red = dc::reduction_witness(s, tol);
    nlohmann::json report{{"dim_a", s.dim_a()},
                          {"dim_b", s.dim_b()},
                          {"rank", dc::rank_of(s)},
                          {"rank_a", dc::reduced_rank(s, dc::Side::A)},
                          {"rank_b", dc::reduced_rank(s, dc::Side::B)},
                          {"min_pt_eig", pt.value},
                          {"npt", pt.value < -tol},
                          {"rank_deficit", dc::lemma1_check(s)},
                          {"reduction_violated", red.has_value()},
                          {"reduction_min", red ? red->value : 0.0}};
    if (std::min(s.dim_a(), s.dim_b()) <= 2) report["peres"] = dc::to_string(dc::peres_2xn_verdict(s, tol));
    if (as_json) {
        std::cout << report.dump(2) << '\n';
        return 0;
    }
    std::cout << std::setprecision(17);
    for (const auto& [key, value] : report.items()) {
        std::cout << key << '=';
        if (value.is_string())
            std::cout << value.get<std::string>();
        else if (value.is_number_float())
            std::cout << value.get<double>();
        else
            std::cout << value.dump();
        std::cout << '\n';
    }
    return 0;
}

int cmd_certify(const std::string& path, const std::string& out) {
    const dc::BipartiteState s = load(path);
    dc::CertifyOptions opts;
    opts.npt_tol = npt_tolerance();
    const dc::Certificate cert = dc::certify(s, opts);
    if (!out.empty()) dc::io::save_certificate(out, cert);
    std::cout << "claim=" << dc::to_string(cert.claim) << '\n'
              << "steps=" << cert.steps.size() << '\n'
              << "branch=" << join(cert.branch_trace, ";") << '\n';
    return cert.claim == dc::Claim::None ? exit_no_certificate : 0;
}

int cmd_verify(const std::string& state_path, const std::string& cert_path) {
    const dc::BipartiteState s = load(state_path);
    const dc::Certificate cert = dc::io::load_certificate(cert_path);
    const dc::VerificationReport r = dc::verify(s, cert);
    std::cout << std::setprecision(17) << "pass=" << (r.pass ? "true" : "false") << '\n'
              << "claim=" << dc::to_string(cert.claim) << '\n'
              << "terminal_dims=" << r.terminal_dims.a << 'x' << r.terminal_dims.b << '\n'
              << "terminal_min_pt_eig=" << r.terminal_min_pt_eig << '\n'
              << "probability=" << r.cumulative_probability << '\n';
    for (const auto& f : r.failures) std::cerr << "failure: " << f << '\n';
    return r.pass ? 0 : exit_verify_failed;
}

struct GenArgs {
    std::string kind;
    std::uint64_t seed = 1;
    int n = 3;
    double a = 1.0;
    double b = -1.0;
    std::string out;
};

int cmd_gen(const GenArgs& g) {
    std::map<std::string, std::string> meta{{"generator", g.kind}};
    auto save = [&](const dc::BipartiteState& s) {
        dc::io::save_state(g.out, s, meta);
        return 0;
    };
    if (g.kind == "werner") {
        std::ostringstream d;
        d << std::setprecision(17) << "n=" << g.n << " a=" << g.a << " b=" << g.b;
        meta["description"] = d.str();
        return save(dc::werner({g.n, g.a, g.b}));
    }
    if (g.kind == "tiles") return save(dc::tiles_upb_state());
    meta["seed"] = std::to_string(g.seed);
    if (g.kind == "rank3-npt") {
        const auto sampled = dc::random_rank3_npt(g.seed);
        meta["rejections"] = std::to_string(sampled.rejections);
        return save(sampled.state);
    }
    if (g.kind == "eq15") {
        const auto sampled = dc::random_eq15_npt(g.seed);
        meta["rejections"] = std::to_string(sampled.rejections);
        return save(sampled.state);
    }
    if (g.kind == "sigma3") return save(dc::sigma3_state(dc::random_sigma3_params(g.seed)));
    throw dc::Error(dc::ErrorKind::BadParams, "unknown kind " + g.kind);
}

int cmd_batch(const std::string& kind, int count, std::uint64_t seed_base, const std::string& out) {
    if (kind != "rank3-npt") throw dc::Error(dc::ErrorKind::BadParams, "batch supports --kind rank3-npt");
    std::ofstream csv(out);
    if (!csv) throw dc::Error(dc::ErrorKind::ParseError, "cannot write " + out);
    dc::CertifyOptions opts;
    opts.npt_tol = npt_tolerance();
    csv << "seed,rank,min_pt_eig,claim,branch,verified,probability,wall_time_s\n" << std::setprecision(17);
    int verified = 0;
    for (int k = 0; k < count; ++k) {
        const std::uint64_t seed = seed_base + static_cast<std::uint64_t>(k);
        const auto t0 = std::chrono::steady_clock::now();
        const dc::BipartiteState s = dc::random_rank3_npt(seed).state;
        const dc::Certificate cert = dc::certify(s, opts);
        const dc::VerificationReport r = dc::verify(s, cert);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        verified += r.pass;
        csv << seed << ',' << dc::rank_of(s) << ',' << dc::min_pt_eig(s, dc::Side::A).value << ','
            << dc::to_string(cert.claim) << ",\"" << join(cert.branch_trace, ";") << "\"," << (r.pass ? "true" : "false")
            << ',' << r.cumulative_probability << ',' << wall << '\n';
    }
    std::cout << "verified=" << verified << '\n' << "count=" << count << '\n';
    return 0;
}

int exit_code_for(const dc::Error& e) {
    switch (e.kind()) {
    case dc::ErrorKind::InvariantViolation:
    case dc::ErrorKind::ParseError: return exit_invalid;
    case dc::ErrorKind::SynthesisFailed: return exit_no_certificate;
    default: return exit_usage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distillability certificates for low-rank NPT bipartite states"};
    app.require_subcommand(1);

    std::string state_path, cert_path, out_path;
    bool as_json = false;

    auto* analyze = app.add_subcommand("analyze", "Report rank, partial-transpose and reduction data");
    analyze->add_option("state", state_path, "state file")->required();
    analyze->add_flag("--json", as_json, "print a JSON report");

    auto* certify = app.add_subcommand("certify", "Synthesize a distillability certificate");
    certify->add_option("state", state_path, "state file")->required();
    certify->add_option("-o,--out", out_path, "certificate output file");

    auto* verify = app.add_subcommand("verify", "Re-check a certificate against a state");
    verify->add_option("state", state_path, "state file")->required();
    verify->add_option("cert", cert_path, "certificate file")->required();

    GenArgs gen_args;
    auto* gen = app.add_subcommand("gen", "Write a generated state");
    gen->add_option("--kind", gen_args.kind, "state family")
        ->required()
        ->check(CLI::IsMember({"rank3-npt", "werner", "tiles", "eq15", "sigma3"}));
    gen->add_option("--seed", gen_args.seed, "seed");
    gen->add_option("--n", gen_args.n, "Werner local dimension");
    gen->add_option("--a", gen_args.a, "Werner identity weight");
    gen->add_option("--b", gen_args.b, "Werner swap weight");
    gen->add_option("-o,--out", gen_args.out, "output file")->required();

    std::string batch_kind;
    int batch_count = 500;
    std::uint64_t seed_base = 1;
    auto* batch = app.add_subcommand("batch", "Certify and verify a seeded family, one CSV row each");
    batch->add_option("--kind", batch_kind, "state family")->required()->check(CLI::IsMember({"rank3-npt"}));
    batch->add_option("--count", batch_count, "number of states")->check(CLI::PositiveNumber);
    batch->add_option("--seed-base", seed_base, "first seed");
    batch->add_option("--out", out_path, "CSV output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (*analyze) return cmd_analyze(state_path, as_json);
        if (*certify) return cmd_certify(state_path, out_path);
        if (*verify) return cmd_verify(state_path, cert_path);
        if (*gen) return cmd_gen(gen_args);
        if (*batch) return cmd_batch(batch_kind, batch_count, seed_base, out_path);
    } catch (const dc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
