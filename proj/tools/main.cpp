#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "melosc/cli.hpp"

namespace {

using melosc::cli::ModelConfig;

struct ModelFlags {
    CLI::Option* alpha = nullptr;
    CLI::Option* eta = nullptr;
    CLI::Option* sigma = nullptr;
    CLI::Option* f = nullptr;
    CLI::Option* epsilon = nullptr;
    CLI::Option* config_path = nullptr;

    double alpha_v = 0, eta_v = 0, sigma_v = 0, epsilon_v = 0;
    std::string f_v;
    std::string config_v;

    void attach(CLI::App* cmd) {
        config_path = cmd->add_option("--config", config_v, "JSON config file");
        alpha = cmd->add_option("--alpha", alpha_v, "restoring jump magnitude");
        eta = cmd->add_option("--eta", eta_v, "linear stiffness");
        sigma = cmd->add_option("--sigma", sigma_v, "period of f in t");
        f = cmd->add_option("--f", f_v, "perturbation expression f(t,x,y)");
        epsilon = cmd->add_option("--epsilon", epsilon_v, "perturbation size");
    }

    ModelConfig resolve() const {
        ModelConfig config;
        if (config_path && config_path->count() > 0) {
            config = melosc::cli::load_config(config_v);
        }
        if (alpha->count() > 0) config.alpha = alpha_v;
        if (eta->count() > 0) config.eta = eta_v;
        if (sigma->count() > 0) config.sigma = sigma_v;
        if (f->count() > 0) config.f = f_v;
        if (epsilon->count() > 0) config.epsilon = epsilon_v;
        return config;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Melnikov analysis and event-driven simulation of the discontinuous "
                 "oscillator x'' + alpha*sign(x) = eta*x + eps*f(t,x,x')"};
    app.require_subcommand(1);
    int exit_code = 0;

    // classify
    auto* classify = app.add_subcommand("classify", "classify the unperturbed system");
    ModelFlags classify_flags;
    classify_flags.attach(classify);
    bool classify_json = false;
    classify->add_flag("--json", classify_json, "emit JSON instead of text");
    classify->callback([&] {
        exit_code = melosc::cli::cmd_classify(classify_flags.resolve(), classify_json, std::cout);
    });

    // portrait
    auto* portrait = app.add_subcommand("portrait", "export trajectories as CSV");
    ModelFlags portrait_flags;
    portrait_flags.attach(portrait);
    std::vector<double> portrait_y0;
    double portrait_t1 = 0.0;
    std::string portrait_out;
    portrait->add_option("--y0", portrait_y0, "initial section velocities")->required();
    portrait->add_option("--t1", portrait_t1, "integration duration")->required();
    portrait->add_option("--out", portrait_out, "output CSV prefix (one file per y0)")
        ->required();
    portrait->callback([&] {
        exit_code = melosc::cli::cmd_portrait(portrait_flags.resolve(), portrait_y0, portrait_t1,
                                              portrait_out, std::cerr);
    });

    // melnikov
    auto* melnikov = app.add_subcommand("melnikov", "evaluate M(phi) on a grid (CSV)");
    ModelFlags melnikov_flags;
    melnikov_flags.attach(melnikov);
    int melnikov_samples = 256;
    std::string melnikov_out;
    melnikov->add_option("--samples", melnikov_samples, "grid size over [0, sigma)");
    melnikov->add_option("--out", melnikov_out, "output CSV path (default stdout)");
    melnikov->callback([&] {
        exit_code = melosc::cli::cmd_melnikov(melnikov_flags.resolve(), melnikov_samples,
                                              melnikov_out, std::cout, std::cerr);
    });

    // zeros
    auto* zeros = app.add_subcommand("zeros", "locate simple zeros of M (JSON)");
    ModelFlags zeros_flags;
    zeros_flags.attach(zeros);
    int zeros_samples = 64;
    melosc::ZeroTolerances ztol;
    zeros->add_option("--samples", zeros_samples, "bracketing grid size");
    zeros->add_option("--zero-tol", ztol.zero_tol, "|M| threshold for a zero");
    zeros->add_option("--simple-tol", ztol.simple_tol, "|M'| threshold for simplicity");
    zeros->callback([&] {
        exit_code = melosc::cli::cmd_zeros(zeros_flags.resolve(), zeros_samples, ztol, std::cout,
                                           std::cerr);
    });

    // orbit
    auto* orbit = app.add_subcommand("orbit", "locate one periodic orbit (JSON)");
    ModelFlags orbit_flags;
    orbit_flags.attach(orbit);
    double orbit_seed = 0.0;
    orbit->add_option("--phi-seed", orbit_seed, "seed phase, ideally a simple zero of M");
    orbit->callback([&] {
        const ModelConfig config = orbit_flags.resolve();
        exit_code = melosc::cli::cmd_orbit(config, config.epsilon, orbit_seed, std::cout,
                                           std::cerr);
    });

    // verify
    auto* verify = app.add_subcommand(
        "verify", "check delta3_tilde -> M convergence with an O(eps) slope fit (JSON)");
    ModelFlags verify_flags;
    verify_flags.attach(verify);
    std::vector<double> verify_eps{1e-2, 5e-3, 2.5e-3, 1.25e-3};
    verify->add_option("--epsilon-list", verify_eps, "epsilon samples for the fit");
    verify->callback([&] {
        exit_code =
            melosc::cli::cmd_verify(verify_flags.resolve(), verify_eps, std::cout, std::cerr);
    });

    // reproduce-p1
    auto* p1 = app.add_subcommand("reproduce-p1",
                                  "locate the 2*pi*(2k-1)/beta-periodic orbits for sin(beta*t)");
    int p1_n = 2;
    double p1_alpha = 1.0, p1_eta = 1.0, p1_beta = 1.0, p1_eps = 1e-3;
    std::string p1_out;
    p1->add_option("--n", p1_n, "number of periods to track");
    p1->add_option("--alpha", p1_alpha, "alpha > 0");
    p1->add_option("--eta", p1_eta, "eta > 0");
    p1->add_option("--beta", p1_beta, "forcing frequency");
    p1->add_option("--epsilon", p1_eps, "perturbation size");
    p1->add_option("--out", p1_out, "JSON output path");
    p1->callback([&] {
        exit_code = melosc::cli::cmd_reproduce_p1(p1_n, p1_alpha, p1_eta, p1_beta, p1_eps, p1_out,
                                                  std::cout, std::cerr);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return melosc::cli::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return melosc::cli::kExitComputation;
    }
    return exit_code;
}
