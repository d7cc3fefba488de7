// Command-line front end: constants, spectral tables, exact simulation,
// scores, trace suites, Monte Carlo CLT studies and the acceptance runner.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mfbm/acceptance.hpp"
#include "mfbm/experiments.hpp"
#include "mfbm/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
    double hurst = 0.8;
    double sigma = 1.0;
    double alpha = 0.3;
    long n = 1024;
    long replications = 2000;
    std::uint64_t seed = 1;
    int threads = 0;
    std::string output_dir;
    std::string format = "json";
    std::string config_path;
};

json config_json(const CommonOpts& o, const std::string& command) {
    return json{{"command", command}, {"H", o.hurst},       {"sigma", o.sigma}, {"alpha", o.alpha},
                {"n", o.n},           {"R", o.replications}, {"seed", o.seed},   {"threads", o.threads},
                {"output_dir", o.output_dir}, {"format", o.format}};
}

json with_meta(json body, const CommonOpts& o, const std::string& command) {
    body["config"] = config_json(o, command);
    body["version"] = mfbm::kVersion;
    return body;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot open output file " + p.string());
    f << text;
}

void emit(const json& doc, const CommonOpts& o, const std::string& filename) {
    std::cout << doc.dump(2) << "\n";
    if (!o.output_dir.empty()) {
        fs::create_directories(o.output_dir);
        write_text(fs::path(o.output_dir) / filename, doc.dump(2) + "\n");
    }
}

std::string csv_comment(const CommonOpts& o, const std::string& command) {
    return "# mfbm " + std::string(mfbm::kVersion) + " config=" + config_json(o, command).dump();
}

json matrix_json(const mfbm::Matrix2& m) {
    return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})});
}

mfbm::Theta make_theta(const CommonOpts& o) { return {o.sigma, mfbm::HurstIndex(o.hurst)}; }

// Config-file values fill in only the flags absent from the command line.
void apply_config_file(CommonOpts& o, CLI::App* sub) {
    if (o.config_path.empty()) return;
    std::ifstream f(o.config_path);
    if (!f) throw std::invalid_argument("config file not found: " + o.config_path);
    json cfg;
    try {
        cfg = json::parse(f);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
    }
    auto absent = [&](const char* flag) {
        const auto* opt = sub->get_option_no_throw(flag);
        return opt == nullptr || opt->count() == 0;
    };
    auto take = [&](const char* key, const char* flag, auto& target) {
        if (cfg.contains(key) && absent(flag)) target = cfg[key].get<std::decay_t<decltype(target)>>();
    };
    take("H", "--H", o.hurst);
    take("sigma", "--sigma", o.sigma);
    take("alpha", "--alpha", o.alpha);
    take("n", "--n", o.n);
    take("R", "--R", o.replications);
    take("seed", "--seed", o.seed);
    take("threads", "--threads", o.threads);
    take("output_dir", "--out", o.output_dir);
    take("format", "--format", o.format);
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme = true) {
    cmd->add_option("--config", o.config_path, "JSON config file; explicit flags take precedence");
    cmd->add_option("--H", o.hurst, "Hurst index in (0,1)");
    cmd->add_option("--sigma", o.sigma, "fractional scale sigma > 0");
    if (with_scheme) {
        cmd->add_option("--alpha", o.alpha, "step exponent: Delta = n^-alpha");
        cmd->add_option("--n", o.n, "number of increments");
    }
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", o.output_dir, "output directory");
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

std::vector<long> parse_n_list(const std::string& s) {
    std::vector<long> out;
    std::string token;
    std::istringstream is(s);
    while (std::getline(is, token, ',')) out.push_back(std::stol(token));
    if (out.empty()) throw std::invalid_argument("empty n list");
    return out;
}

int run_constants(const CommonOpts& o) {
    const auto theta = make_theta(o);
    const auto info = mfbm::constants::limit_information(theta);
    json doc{{"theta", {{"sigma", o.sigma}, {"H", o.hurst}}},
             {"regime", mfbm::regime_name(info.regime)},
             {"matrix", matrix_json(info.matrix)},
             {"normalization", info.normalization},
             {"projection_required", info.projection_required}};
    if (info.regime == mfbm::Regime::supercritical) {
        const auto jc = mfbm::constants::j_constants(theta);
        doc["J0"] = jc.j0;
        doc["J1"] = jc.j1;
        doc["J2"] = jc.j2;
        doc["Jperp"] = jc.jperp;
        doc["m"] = jc.m;
    }
    emit(with_meta(doc, o, "constants"), o, "constants.json");
    return 0;
}

int run_spectral(const CommonOpts& o, long points) {
    const mfbm::HurstIndex H(o.hurst);
    std::ostringstream csv;
    csv << csv_comment(o, "spectral") << "\n";
    csv << "lambda,density,density_dH,log_deriv\n";
    for (long i = 1; i <= points; ++i) {
        const double l = M_PI * static_cast<double>(i) / static_cast<double>(points);
        csv << l << "," << mfbm::spectral::density(H, l) << "," << mfbm::spectral::density_dh(H, l) << ","
            << mfbm::spectral::log_deriv(H, l) << "\n";
    }
    std::cout << csv.str();
    if (!o.output_dir.empty()) {
        fs::create_directories(o.output_dir);
        write_text(fs::path(o.output_dir) / "spectral.csv", csv.str());
    }
    return 0;
}

int run_simulate(const CommonOpts& o) {
    const auto theta = make_theta(o);
    const mfbm::SamplingScheme scheme(o.n, o.alpha);
    const auto path = mfbm::mfbm_increments(theta, scheme, o.seed);
    std::ostringstream csv;
    csv << "x\n";
    csv << std::setprecision(17);
    for (long i = 0; i < path.x.size(); ++i) csv << path.x(i) << "\n";
    const json sidecar = with_meta(
        json{{"sigma", o.sigma}, {"H", o.hurst}, {"n", o.n}, {"alpha", o.alpha}, {"seed", o.seed}}, o, "simulate");
    const fs::path dir = o.output_dir.empty() ? fs::path(".") : fs::path(o.output_dir);
    fs::create_directories(dir);
    write_text(dir / "increments.csv", csv.str());
    write_text(dir / "increments.json", sidecar.dump(2) + "\n");
    std::cout << "wrote " << (dir / "increments.csv").string() << " and sidecar\n";
    return 0;
}

int run_score(const CommonOpts& o, const std::string& data, const std::string& meta) {
    std::ifstream mf(meta);
    if (!mf) throw std::invalid_argument("sidecar not found: " + meta);
    const json sc = json::parse(mf);
    const mfbm::Theta theta(sc.at("sigma").get<double>(), mfbm::HurstIndex(sc.at("H").get<double>()));
    const mfbm::SamplingScheme scheme(sc.at("n").get<long>(), sc.at("alpha").get<double>());

    std::ifstream df(data);
    if (!df) throw std::invalid_argument("increments file not found: " + data);
    std::string line;
    std::vector<double> vals;
    while (std::getline(df, line)) {
        if (line.empty() || line[0] == 'x' || line[0] == '#') continue;
        vals.push_back(std::stod(line));
    }
    if (static_cast<long>(vals.size()) != scheme.n)
        throw std::invalid_argument("increments length does not match sidecar n");
    Eigen::VectorXd x(scheme.n);
    for (long i = 0; i < scheme.n; ++i) x(i) = vals[static_cast<std::size_t>(i)];

    const mfbm::CovModel model(theta, scheme);
    const auto se = mfbm::scores(model, x);
    json doc{{"S_sigma", se.s_sigma},
             {"S_H", se.s_h},
             {"R_H", se.r_h},
             {"R_H_perp", se.r_h_perp},
             {"Xi", {se.xi[0], se.xi[1]}},
             {"U", {se.u[0], se.u[1]}},
             {"normalizers",
              {{"sqrt_horizon", se.norms.sqrt_horizon},
               {"L_n", se.norms.l_n},
               {"v_n", se.norms.v_n},
               {"sqrt_n", se.norms.sqrt_n}}},
             {"log_lik", mfbm::log_lik(model, x)}};
    emit(with_meta(doc, o, "score"), o, "score.json");
    return 0;
}

int run_trace(const CommonOpts& o) {
    const auto theta = make_theta(o);
    const mfbm::SamplingScheme scheme(o.n, o.alpha);
    const mfbm::CovModel model(theta, scheme);
    const auto& tr = model.traces();
    std::ostringstream csv;
    csv << csv_comment(o, "trace") << "\n";
    csv << "n,alpha,H,sigma,trC2,trCD,trD2,a_n,trDperp2,opC,frobC,opDperp,frobDperp\n";
    csv << o.n << "," << o.alpha << "," << o.hurst << "," << o.sigma << "," << tr.tr_c2 << "," << tr.tr_cd << ","
        << tr.tr_d2 << "," << tr.a_n << "," << tr.tr_dperp2 << "," << tr.op_c << "," << tr.frob_c << ","
        << tr.op_dperp << "," << tr.frob_dperp << "\n";
    std::cout << csv.str();
    if (!o.output_dir.empty()) {
        fs::create_directories(o.output_dir);
        write_text(fs::path(o.output_dir) / "trace.csv", csv.str());
    }
    return 0;
}

int run_trace_sweep(const CommonOpts& o, const std::string& n_list_str) {
    const auto theta = make_theta(o);
    const auto n_list = parse_n_list(n_list_str);
    const auto table = mfbm::trace_convergence(theta, n_list, o.alpha);
    std::ostringstream csv;
    csv << csv_comment(o, "trace-sweep") << "\n";
    csv << "n,delta,gamma,exact_c2,pred_c2,gap_c2,exact_cd,pred_cd,gap_cd,exact_d2,pred_d2,gap_d2,"
           "exact_dperp2,pred_dperp2,gap_dperp2,a_n,a_n_pred,a_n_centered,dperp2_leading_ratio,c2_leading_ratio\n";
    for (const auto& r : table.rows) {
        csv << r.n << "," << r.delta << "," << r.gamma << "," << r.exact_c2 << "," << r.pred_c2 << "," << r.gap_c2
            << "," << r.exact_cd << "," << r.pred_cd << "," << r.gap_cd << "," << r.exact_d2 << "," << r.pred_d2
            << "," << r.gap_d2 << "," << r.exact_dperp2 << "," << r.pred_dperp2 << "," << r.gap_dperp2 << ","
            << r.a_n << "," << r.a_n_pred << "," << r.a_n_centered << "," << r.dperp2_leading_ratio << ","
            << r.c2_leading_ratio << "\n";
    }
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"n", r.n}, {"delta", r.delta}, {"gamma", r.gamma},
                        {"exact_c2", r.exact_c2}, {"pred_c2", r.pred_c2}, {"gap_c2", r.gap_c2},
                        {"exact_cd", r.exact_cd}, {"pred_cd", r.pred_cd}, {"gap_cd", r.gap_cd},
                        {"exact_d2", r.exact_d2}, {"pred_d2", r.pred_d2}, {"gap_d2", r.gap_d2},
                        {"exact_dperp2", r.exact_dperp2}, {"pred_dperp2", r.pred_dperp2},
                        {"gap_dperp2", r.gap_dperp2}, {"a_n", r.a_n}, {"a_n_pred", r.a_n_pred},
                        {"a_n_centered", r.a_n_centered}, {"dperp2_leading_ratio", r.dperp2_leading_ratio},
                        {"c2_leading_ratio", r.c2_leading_ratio}});
    const json summary = with_meta(json{{"regime", mfbm::regime_name(table.regime)}, {"rows", rows}}, o, "trace-sweep");
    if (o.format == "json")
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << csv.str();
    if (!o.output_dir.empty()) {
        fs::create_directories(o.output_dir);
        write_text(fs::path(o.output_dir) / "trace_sweep.csv", csv.str());
        write_text(fs::path(o.output_dir) / "trace_sweep.json", summary.dump(2) + "\n");
    }
    return 0;
}

int run_opf_sweep(const CommonOpts& o, const std::string& n_list_str) {
    const auto theta = make_theta(o);
    const auto n_list = parse_n_list(n_list_str);
    const auto table = mfbm::opf_decay(theta, n_list, o.alpha);
    std::ostringstream csv;
    csv << csv_comment(o, "opf-sweep") << "\n";
    csv << "n,opC,frobC,ratioC,opD,frobD,ratioD,opDperp,frobDperp,ratioDperp,rate[" << table.rate_label << "]\n";
    for (const auto& r : table.rows) {
        csv << r.n << "," << r.op_c << "," << r.frob_c << "," << r.ratio_c << "," << r.op_d << "," << r.frob_d << ","
            << r.ratio_d << "," << r.op_dperp << "," << r.frob_dperp << "," << r.ratio_dperp << ","
            << r.dominating_rate << "\n";
    }
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"n", r.n}, {"opC", r.op_c}, {"frobC", r.frob_c}, {"ratioC", r.ratio_c},
                        {"opD", r.op_d}, {"frobD", r.frob_d}, {"ratioD", r.ratio_d},
                        {"opDperp", r.op_dperp}, {"frobDperp", r.frob_dperp},
                        {"ratioDperp", r.ratio_dperp}, {"rate", r.dominating_rate}});
    const json summary = with_meta(
        json{{"regime", mfbm::regime_name(table.regime)}, {"rate_label", table.rate_label}, {"rows", rows}}, o,
        "opf-sweep");
    if (o.format == "json")
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << csv.str();
    if (!o.output_dir.empty()) {
        fs::create_directories(o.output_dir);
        write_text(fs::path(o.output_dir) / "opf_sweep.csv", csv.str());
        write_text(fs::path(o.output_dir) / "opf_sweep.json", summary.dump(2) + "\n");
    }
    return 0;
}

json report_json(const mfbm::MCReport& rep) {
    return json{{"regime", mfbm::regime_name(rep.regime)},
                {"normalization", rep.normalization},
                {"R", rep.replications},
                {"seed", rep.seed},
                {"sample_cov", matrix_json(rep.sample_cov)},
                {"target", matrix_json(rep.target)},
                {"var_z_scores", {rep.var_z_scores[0], rep.var_z_scores[1]}},
                {"skewness", {rep.skewness[0], rep.skewness[1]}},
                {"excess_kurtosis", {rep.excess_kurtosis[0], rep.excess_kurtosis[1]}},
                {"ks_distance", {rep.ks_distance[0], rep.ks_distance[1]}},
                {"correlation", rep.correlation},
                {"correlation_unprojected", rep.correlation_unprojected},
                {"normality_reliable", rep.normality_reliable}};
}

int run_mc(const CommonOpts& o, bool scatter) {
    const auto theta = make_theta(o);
    const mfbm::SamplingScheme scheme(o.n, o.alpha);
    const auto rep = mfbm::mc_clt(theta, scheme, o.replications, o.seed);
    if (o.format == "csv") {
        std::ostringstream csv;
        csv << csv_comment(o, "mc") << "\n";
        csv << "cov11,cov12,cov22,target11,target22,corr,corr_unprojected,ks1,ks2\n";
        csv << rep.sample_cov[0][0] << "," << rep.sample_cov[0][1] << "," << rep.sample_cov[1][1] << ","
            << rep.target[0][0] << "," << rep.target[1][1] << "," << rep.correlation << ","
            << rep.correlation_unprojected << "," << rep.ks_distance[0] << "," << rep.ks_distance[1] << "\n";
        std::cout << csv.str();
        if (!o.output_dir.empty()) {
            fs::create_directories(o.output_dir);
            write_text(fs::path(o.output_dir) / "mc.csv", csv.str());
            write_text(fs::path(o.output_dir) / "mc.json", with_meta(report_json(rep), o, "mc").dump(2) + "\n");
        }
    } else {
        emit(with_meta(report_json(rep), o, "mc"), o, "mc.json");
    }
    if (scatter && !o.output_dir.empty()) {
        fs::create_directories(o.output_dir);
        std::ostringstream dat;
        dat << "# scatter of the normalized score pair; columns: comp1 comp2\n";
        for (const auto& s : rep.samples) dat << s[0] << " " << s[1] << "\n";
        dat << "\n\n# 2-sigma covariance ellipse of the target\n";
        Eigen::Matrix2d t;
        t << rep.target[0][0], rep.target[0][1], rep.target[1][0], rep.target[1][1];
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(t);
        for (int i = 0; i <= 256; ++i) {
            const double a = 2.0 * M_PI * i / 256.0;
            Eigen::Vector2d u(2.0 * std::sqrt(es.eigenvalues()(0)) * std::cos(a),
                              2.0 * std::sqrt(es.eigenvalues()(1)) * std::sin(a));
            const Eigen::Vector2d pt = es.eigenvectors() * u;
            dat << pt(0) << " " << pt(1) << "\n";
        }
        write_text(fs::path(o.output_dir) / "mc_scatter.dat", dat.str());
    }
    return 0;
}

int run_degeneracy(const CommonOpts& o) {
    const auto theta = make_theta(o);
    const mfbm::SamplingScheme scheme(o.n, o.alpha);
    const auto rep = mfbm::degeneracy_report(theta, scheme, o.replications, o.seed);
    json doc{{"sample_correlation", rep.sample_correlation},
             {"deterministic_correlation", rep.deterministic_correlation},
             {"projected_correlation", rep.projected_correlation},
             {"R", rep.replications},
             {"seed", rep.seed}};
    emit(with_meta(doc, o, "degeneracy"), o, "degeneracy.json");
    return 0;
}

int run_lan_check(const CommonOpts& o, const std::vector<double>& hvec) {
    if (hvec.size() != 2) throw std::invalid_argument("--h needs exactly two components");
    const auto theta = make_theta(o);
    const mfbm::SamplingScheme scheme(o.n, o.alpha);
    const mfbm::CovModel model(theta, scheme);
    const auto info = mfbm::constants::limit_information(theta);
    const auto path = mfbm::mfbm_increments(theta, scheme, o.seed);
    const auto lc = mfbm::lan_check(model, {hvec[0], hvec[1]}, path.x, info);
    json doc{{"h", {lc.h[0], lc.h[1]}},
             {"llr_exact", lc.llr_exact},
             {"llr_predicted", lc.llr_predicted},
             {"gap", lc.gap}};
    emit(with_meta(doc, o, "lan-check"), o, "lan_check.json");
    return 0;
}

int run_accept(const CommonOpts& o, long lan_reps) {
    mfbm::AcceptanceOptions aopt;
    aopt.seed = o.seed;
    aopt.mc_replications = o.replications;
    aopt.lan_replications = lan_reps;
    const auto results = mfbm::run_acceptance(aopt, std::cout);
    if (!o.output_dir.empty()) {
        json arr = json::array();
        for (const auto& r : results) {
            json clauses = json::array();
            for (const auto& cl : r.clauses) clauses.push_back({{"passed", cl.passed}, {"text", cl.text}});
            arr.push_back({{"number", r.number}, {"name", r.name}, {"passed", r.passed}, {"clauses", clauses}});
        }
        fs::create_directories(o.output_dir);
        write_text(fs::path(o.output_dir) / "acceptance.json",
                   with_meta(json{{"criteria", arr}}, o, "accept").dump(2) + "\n");
    }
    return mfbm::all_passed(results) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Gaussian score inference for mixed fractional Brownian motion"};
    app.require_subcommand(1);

    CommonOpts o;
    long spectral_points = 256;
    long lan_reps = 500;
    bool scatter = false;
    std::string n_list = "256,512,1024,2048,4096";
    std::string data_path = "increments.csv", meta_path = "increments.json";
    std::vector<double> hvec{0.0, 0.0};

    auto* c_constants = app.add_subcommand("constants", "limiting information constants and matrix");
    add_common(c_constants, o, false);
    auto* c_spectral = app.add_subcommand("spectral", "density / derivative / log-derivative table");
    add_common(c_spectral, o, false);
    c_spectral->add_option("--points", spectral_points, "grid points on (0, pi]");
    auto* c_sim = app.add_subcommand("simulate", "draw one increment path (CSV + JSON sidecar)");
    add_common(c_sim, o);
    auto* c_score = app.add_subcommand("score", "exact scores of an increments file");
    add_common(c_score, o);
    c_score->add_option("--data", data_path, "increments CSV");
    c_score->add_option("--meta", meta_path, "JSON sidecar");
    auto* c_trace = app.add_subcommand("trace", "exact trace suite at one (theta, scheme)");
    add_common(c_trace, o);
    auto* c_tsweep = app.add_subcommand("trace-sweep", "trace asymptotics along an n sweep");
    add_common(c_tsweep, o);
    c_tsweep->add_option("--n-list", n_list, "comma-separated n values");
    auto* c_osweep = app.add_subcommand("opf-sweep", "operator/Frobenius decay along an n sweep");
    add_common(c_osweep, o);
    c_osweep->add_option("--n-list", n_list, "comma-separated n values");
    auto* c_mc = app.add_subcommand("mc", "Monte Carlo CLT study of the normalized score pair");
    add_common(c_mc, o);
    c_mc->add_option("--R", o.replications, "replication count");
    c_mc->add_flag("--scatter", scatter, "also write a gnuplot scatter .dat file");
    auto* c_deg = app.add_subcommand("degeneracy", "unprojected-pair correlation study");
    add_common(c_deg, o);
    c_deg->add_option("--R", o.replications, "replication count");
    auto* c_lan = app.add_subcommand("lan-check", "log-likelihood-ratio expansion check");
    c_lan->set_help_flag("--help", "print help");  // frees -h for the perturbation below
    add_common(c_lan, o);
    c_lan->add_option("--h", hvec, "local perturbation (two components)")->expected(2);
    auto* c_accept = app.add_subcommand("accept", "run the full acceptance suite");
    add_common(c_accept, o);
    c_accept->add_option("--R", o.replications, "MC replication count");
    c_accept->add_option("--lan-R", lan_reps, "LAN replication count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        apply_config_file(o, app.get_subcommands().front());
        if (o.threads > 0) mfbm::set_num_threads(o.threads);
        std::cerr << "mfbm " << mfbm::kVersion << " seed=" << o.seed << "\n";

        if (c_constants->parsed()) return run_constants(o);
        if (c_spectral->parsed()) return run_spectral(o, spectral_points);
        if (c_sim->parsed()) return run_simulate(o);
        if (c_score->parsed()) return run_score(o, data_path, meta_path);
        if (c_trace->parsed()) return run_trace(o);
        if (c_tsweep->parsed()) return run_trace_sweep(o, n_list);
        if (c_osweep->parsed()) return run_opf_sweep(o, n_list);
        if (c_mc->parsed()) return run_mc(o, scatter);
        if (c_deg->parsed()) return run_degeneracy(o);
        if (c_lan->parsed()) return run_lan_check(o, hvec);
        if (c_accept->parsed()) return run_accept(o, lan_reps);
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "regime/parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        nlohmann::json diag{{"error", e.what()}, {"version", mfbm::kVersion}};
        std::cerr << diag.dump(2) << "\n";
        return 3;
    }
}
