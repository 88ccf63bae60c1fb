// Command-line front end: one subcommand per module, CSV + JSON outputs.
//
// Exit codes: 0 ok (including verification reports that did not pass),
// 1 usage error, 2 computational failure.

#include "normsol/asymptotics.hpp"
#include "normsol/boundary_layer.hpp"
#include "normsol/corrections.hpp"
#include "normsol/groundstate.hpp"
#include "normsol/io.hpp"
#include "normsol/mfg.hpp"
#include "normsol/nls_bvp.hpp"
#include "normsol/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace normsol;

namespace {

struct DomainArgs {
    std::string domain = "interval";
    std::string bc = "dirichlet";
    double a = -1.0;
    double b = 1.0;
    std::vector<double> potential;
    int n = 1;
    double p = 5.0;
    double ppe = NlsConfig{}.points_per_epsilon;
    std::size_t nodes = 0;
    bool endpoint = false;
};

struct Outputs {
    std::string out;
};

std::map<std::string, BoundaryCondition> bc_names()
{
    return {{"dirichlet", BoundaryCondition::Dirichlet}, {"neumann", BoundaryCondition::Neumann}};
}

/// Every option of the subcommand with its resolved value.
json resolved_config(const CLI::App& app)
{
    json cfg = json::object();
    for (const CLI::Option* opt : app.get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames().front() == "help" || opt->get_lnames().front() == "config")
            continue;
        const auto& name = opt->get_lnames().front();
        std::string key = name;
        std::replace(key.begin(), key.end(), '-', '_');
        if (opt->count() == 0) {
            cfg[key] = opt->get_default_str();
            continue;
        }
        const auto& res = opt->results();
        cfg[key] = res.size() == 1 ? json(res.front()) : json(res);
    }
    return cfg;
}

json envelope(const CLI::App& app)
{
    return json{{"command", app.get_name()}, {"version", kVersion}, {"config", resolved_config(app)}};
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

void emit(const Outputs& o, const std::string& csv, const json& j)
{
    write_atomic(o.out + ".csv", csv);
    write_atomic(o.out + ".json", j.dump(2) + "\n");
}

void add_outputs(CLI::App* sub, Outputs& o)
{
    o.out = sub->get_name();
    sub->add_option("--out", o.out, "output prefix; writes <out>.csv and <out>.json")->capture_default_str();
    // consumed by expand_config before parsing; declared so it shows in --help
    static std::string config_path;
    sub->add_option("--config", config_path, "flat key=value file; command-line flags take precedence");
}

void add_domain(CLI::App* sub, DomainArgs& d)
{
    sub->add_option("--domain", d.domain, "interval or realline")
        ->check(CLI::IsMember({"interval", "realline"}))
        ->capture_default_str();
    sub->add_option("--bc", d.bc, "dirichlet or neumann (interval only)")
        ->check(CLI::IsMember({"dirichlet", "neumann"}))
        ->capture_default_str();
    sub->add_option("--a", d.a, "left end of the interval")->capture_default_str();
    sub->add_option("--b", d.b, "right end of the interval")->capture_default_str();
    sub->add_option("--potential", d.potential, "V(x) = sum c_k x^{2k}, k = 1, 2, ... (real line)");
    sub->add_option("--n", d.n, "space dimension")->capture_default_str();
    sub->add_option("--p", d.p, "nonlinearity exponent")->capture_default_str();
    sub->add_option("--ppe", d.ppe, "grid points per unit epsilon")->capture_default_str();
    sub->add_option("--nodes", d.nodes, "fixed interval node count (0 = automatic)")->capture_default_str();
    sub->add_flag("--endpoint", d.endpoint, "concentrate at the right end (Neumann)");
}

DomainSpec make_domain(const DomainArgs& d)
{
    if (d.domain == "realline")
        return DomainSpec::real_line(d.potential);
    require(d.potential.empty(), "--potential only applies to --domain realline");
    return DomainSpec::interval(d.a, d.b, bc_names().at(d.bc));
}

NlsConfig make_nls_config(const DomainArgs& d)
{
    NlsConfig cfg;
    cfg.points_per_epsilon = d.ppe;
    cfg.nodes = d.nodes;
    cfg.endpoint = d.endpoint;
    return cfg;
}

NormalizedSolution solve_from_args(const DomainArgs& d, std::optional<double> rho, std::optional<double> eps)
{
    const auto spec = make_domain(d);
    const auto prm = make_params(d.n, d.p);
    const auto cfg = make_nls_config(d);
    if (rho)
        return solve_normalized(spec, prm, *rho, cfg);
    if (d.endpoint)
        return solve_fixed_epsilon(spec, prm, *eps, AnsatzEndpoint{}, cfg);
    return solve_fixed_epsilon(spec, prm, *eps, AnsatzInterior{spec.center()}, cfg);
}

json solution_scalars(const NormalizedSolution& s)
{
    return json{{"lambda", s.lambda},
                {"epsilon", s.epsilon},
                {"mass", s.mass},
                {"residual_inf", s.residual_inf},
                {"concentration_point", s.concentration_point},
                {"nodes", s.nodes.size()}};
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    return s.substr(first, s.find_last_not_of(" \t\r") + 1 - first);
}

/// Replace `--config FILE` by the flags it lists. Keys already present on the
/// command line are skipped. Values may hold several whitespace-separated
/// items; `true`/`false` toggle flags.
std::vector<std::string> expand_config(std::vector<std::string> args)
{
    auto it = std::find(args.begin(), args.end(), "--config");
    if (it == args.end())
        return args;
    if (it + 1 == args.end())
        throw CLI::ArgumentMismatch("--config needs a file name");
    const std::string path = *(it + 1);
    args.erase(it, it + 2);
    std::ifstream in(path);
    if (!in)
        throw CLI::FileError::Missing(path);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw CLI::ConversionError("config line without '=': " + line);
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.rfind("--", 0) != 0)
            key = "--" + key;
        if (std::find(args.begin(), args.end(), key) != args.end())
            continue;
        if (value == "true") {
            extra.push_back(key);
            continue;
        }
        if (value == "false")
            continue;
        extra.push_back(key);
        std::istringstream items(value);
        for (std::string item; items >> item;)
            extra.push_back(item);
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Concentrating normalized solutions of -v'' + (V + lambda) v = v^p"};
    app.name("normsol");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::function<void()> run;

    // ground-state
    Outputs gs_out;
    int gs_n = 0;
    double gs_p = 0.0, gs_accuracy = 1e-8;
    GroundStateConfig gs_cfg;
    auto* gs = app.add_subcommand("ground-state", "radial ground state U and its constants");
    gs->add_option("--n", gs_n, "space dimension")->required();
    gs->add_option("--p", gs_p, "nonlinearity exponent")->required();
    gs->add_option("--radius", gs_cfg.radius, "truncation radius")->capture_default_str();
    gs->add_option("--step", gs_cfg.step, "grid spacing")->capture_default_str();
    gs->add_option("--accuracy", gs_accuracy, "maximum ODE residual")->capture_default_str();
    add_outputs(gs, gs_out);
    gs->callback([&] {
        run = [&] {
            const auto g = solve_ground_state(make_params(gs_n, gs_p), gs_accuracy, gs_cfg);
            auto j = envelope(*gs);
            j["sigma0"] = g.sigma0;
            j["frak_c"] = number(g.frak_c);
            j["ode_residual"] = g.ode_residual;
            j["regime"] = std::string(to_string(g.params.regime));
            j["closed_form"] = g.closed_form;
            emit(gs_out, csv_table({"r", "U", "U'"}, {g.profile.nodes, g.profile.values, g.profile.dvalues}), j);
            std::printf("sigma0 = %.12g\n", g.sigma0);
        };
    });

    // correction
    Outputs w_out;
    int w_n = 0;
    double w_p = 0.0;
    LinearizedSolveConfig w_cfg;
    auto* corr = app.add_subcommand("correction", "correction W for the source |y|^2 U and the constant m_frak");
    corr->add_option("--n", w_n, "space dimension")->required();
    corr->add_option("--p", w_p, "nonlinearity exponent")->required();
    corr->add_option("--refine", w_cfg.refine, "grid refinement of the band solve")->capture_default_str();
    add_outputs(corr, w_out);
    corr->callback([&] {
        run = [&] {
            const auto g = solve_ground_state(make_params(w_n, w_p));
            const auto w = solve_correction(g, w_cfg);
            auto j = envelope(*corr);
            j["m_frak"] = w.m_frak;
            j["w_at_origin"] = w.profile.values.front();
            j["w_zero"] = w.w_zero ? json(*w.w_zero) : json(nullptr);
            j["integral_0_2_uw"] = partial_integral(g.profile, w.profile, 2.0);
            j["residual"] = w.residual;
            emit(w_out, csv_table({"r", "W", "W'"}, {w.profile.nodes, w.profile.values, w.profile.dvalues}), j);
            std::printf("m_frak = %.12g\n", w.m_frak);
        };
    });

    // boundary-layer
    Outputs bl_out;
    double bl_eps = 0.2;
    std::string bl_bc = "dirichlet";
    std::size_t bl_points = 401;
    auto* bl = app.add_subcommand("boundary-layer", "explicit boundary-layer correction on (-1, 1), p = 5");
    bl->add_option("--epsilon", bl_eps, "concentration parameter")->capture_default_str();
    bl->add_option("--bc", bl_bc, "dirichlet or neumann")
        ->check(CLI::IsMember({"dirichlet", "neumann"}))
        ->capture_default_str();
    bl->add_option("--points", bl_points, "samples of phi on [-1, 1]")->capture_default_str();
    add_outputs(bl, bl_out);
    bl->callback([&] {
        run = [&] {
            const auto bc = bc_names().at(bl_bc);
            const auto layer = make_boundary_layer(bl_eps, bc);
            require(bl_points >= 2, "--points must be at least 2");
            const auto x = uniform_nodes(-1.0, 1.0, bl_points);
            std::vector<double> phi(x.size());
            for (std::size_t i = 0; i < x.size(); ++i)
                phi[i] = phi_explicit(bl_eps, bc, x[i]);
            auto j = envelope(*bl);
            j["center_value"] = layer.center_value;
            j["theta"] = layer.theta;
            j["theta_asymptotic"] = theta_asymptotic(bl_eps, bc);
            j["theta_asymptotic_stated_constant"] = theta_asymptotic_stated(bl_eps, bc);
            j["viscosity_rate"] = viscosity_rate(bl_eps, bc);
            emit(bl_out, csv_table({"x", "phi"}, {x, phi}), j);
            std::printf("theta = %.12g\n", layer.theta);
        };
    });

    // solve
    Outputs s_out;
    DomainArgs s_dom;
    std::optional<double> s_rho, s_eps;
    auto* solve = app.add_subcommand("solve", "normalized (--rho) or fixed-frequency (--epsilon) solve");
    add_domain(solve, s_dom);
    auto* rho_opt = solve->add_option("--rho", s_rho, "prescribed mass");
    solve->add_option("--epsilon", s_eps, "fixed epsilon = lambda^{-1/2}")->excludes(rho_opt);
    add_outputs(solve, s_out);
    solve->callback([&] {
        run = [&] {
            require(s_rho || s_eps, "one of --rho or --epsilon is required");
            const auto sol = solve_from_args(s_dom, s_rho, s_eps);
            auto j = envelope(*solve);
            j.update(solution_scalars(sol));
            emit(s_out, csv_table({"x", "v", "u"}, {sol.nodes, sol.v_values, sol.u_values}), j);
            std::printf("lambda = %.12g  mass = %.12g\n", sol.lambda, sol.mass);
        };
    });

    // trace
    Outputs t_out;
    DomainArgs t_dom;
    std::vector<double> t_eps;
    auto* trace = app.add_subcommand("trace", "continuation along a decreasing epsilon list");
    add_domain(trace, t_dom);
    trace->add_option("--epsilons", t_eps, "strictly decreasing epsilon values")->required();
    add_outputs(trace, t_out);
    trace->callback([&] {
        run = [&] {
            const auto branch = trace_branch(make_domain(t_dom), make_params(t_dom.n, t_dom.p), t_eps,
                                             make_nls_config(t_dom));
            std::vector<double> e, m, r, l;
            for (const auto& bp : branch) {
                e.push_back(bp.epsilon);
                m.push_back(bp.mass);
                r.push_back(bp.residual);
                l.push_back(1.0 / (bp.epsilon * bp.epsilon));
            }
            auto j = envelope(*trace);
            j["two_sigma0"] = soliton_mass_1d(t_dom.p);
            j["points"] = branch.size();
            emit(t_out, csv_table({"epsilon", "mass", "residual", "lambda"}, {e, m, r, l}), j);
            std::printf("traced %zu points\n", branch.size());
        };
    });

    // verify
    Outputs v_out;
    std::string v_id;
    VerifyTolerances v_tol;
    double v_ppe = NlsConfig{}.points_per_epsilon;
    auto* verify = app.add_subcommand("verify", "compare an asymptotic prediction against direct solves");
    verify->add_option("--theorem", v_id, "main2, main2critico_dirichlet, main2critico_neumann, main3crit")
        ->required();
    verify->add_option("--tol-exponential", v_tol.exponential, "relative tolerance, boundary-layer laws")
        ->capture_default_str();
    verify->add_option("--tol-power", v_tol.power, "relative tolerance, power laws")->capture_default_str();
    verify->add_option("--tol-order", v_tol.order_band, "absolute band on fitted orders")->capture_default_str();
    verify->add_option("--tol-lambda", v_tol.lambda, "relative tolerance on lambda")->capture_default_str();
    verify->add_option("--ppe", v_ppe, "grid points per unit epsilon")->capture_default_str();
    add_outputs(verify, v_out);
    int verify_status = 0;
    verify->callback([&] {
        run = [&] {
            NlsConfig cfg;
            cfg.points_per_epsilon = v_ppe;
            const auto rep = verify_report(v_id, v_tol, cfg);
            auto j = envelope(*verify);
            j["theorem_id"] = rep.theorem_id;
            j["predicted"] = rep.predicted;
            j["observed"] = rep.observed;
            j["fitted_order"] = number(rep.fitted_order);
            j["pass"] = rep.pass;
            j["notes"] = rep.notes;
            j["error"] = rep.error ? json(std::string(to_string(*rep.error))) : json(nullptr);
            std::vector<double> e, o, p;
            for (const auto& row : rep.sweep) {
                e.push_back(row.epsilon);
                o.push_back(row.observed);
                p.push_back(row.predicted);
            }
            emit(v_out, csv_table({"epsilon", "observed", "predicted"}, {e, o, p}), j);
            std::printf("%s: %s\n", rep.theorem_id.c_str(), rep.pass ? "pass" : "fail");
            if (rep.error) {
                std::fprintf(stderr, "error: %s\n", rep.notes.c_str());
                verify_status = 2;
            }
        };
    });

    // mfg
    Outputs m_out;
    DomainArgs m_dom;
    m_dom.bc = "neumann";
    std::optional<double> m_rho, m_eps, m_q;
    double m_nu = kDefaultViscosity;
    auto* mfg = app.add_subcommand("mfg", "Hopf-Cole transform of a direct solve into an MFG equilibrium");
    add_domain(mfg, m_dom);
    auto* m_rho_opt = mfg->add_option("--rho", m_rho, "prescribed mass");
    mfg->add_option("--epsilon", m_eps, "fixed epsilon")->excludes(m_rho_opt);
    mfg->add_option("--q", m_q, "MFG exponent, defaults to (p - 1)/2");
    mfg->add_option("--nu", m_nu, "viscosity")->capture_default_str();
    add_outputs(mfg, m_out);
    mfg->callback([&] {
        run = [&] {
            require(m_rho || m_eps, "one of --rho or --epsilon is required");
            const auto sol = solve_from_args(m_dom, m_rho, m_eps);
            const auto t = to_mfg(sol, m_q.value_or(0.5 * (m_dom.p - 1.0)), m_nu);
            auto j = envelope(*mfg);
            j["lambda"] = t.lambda;
            j["alpha"] = t.alpha;
            j["q"] = t.q;
            j["nu"] = t.nu;
            j["residual_hjb"] = t.residual_hjb;
            j["residual_kolmogorov"] = t.residual_kolmogorov;
            j["mass_defect"] = t.mass_defect;
            emit(m_out, csv_table({"x", "u", "m"}, {t.nodes, t.u_values, t.m_values}), j);
            std::printf("alpha = %.12g  residuals hjb %.3g kolmogorov %.3g\n", t.alpha, t.residual_hjb,
                        t.residual_kolmogorov);
        };
    });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(std::move(args));
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const Error& e) {
        // argument validation inside callbacks
        std::cerr << e.what() << '\n';
        return 1;
    }

    try {
        run();
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::UnknownTheorem ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return verify_status;
}
