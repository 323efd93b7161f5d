#include "melosc/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "melosc/closed_form.hpp"
#include "melosc/numerics.hpp"
#include "parallel.hpp"

namespace melosc::cli {
namespace {

using nlohmann::json;

std::string interval_str(const Interval& iv) {
    std::ostringstream os;
    os << "(" << fmt(iv.lo) << ", " << (std::isfinite(iv.hi) ? fmt(iv.hi) : "inf") << ")";
    return os.str();
}

void require_admissible(const Parameters& params) {
    const AnnulusInfo info = annulus_info(params.alpha, params.eta);
    if (!info.image_I.contains_strict(0.5 * params.sigma)) {
        std::ostringstream os;
        os << "sigma/2 = " << fmt(0.5 * params.sigma) << " is not admissible for case C"
           << info.case_index << "; the admissible interval is I_" << info.case_index << " = "
           << interval_str(info.image_I);
        throw AdmissibilityError(os.str());
    }
}

int report_failure(std::ostream& err, const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
}

json orbit_to_json(const PeriodicOrbit& orbit, const Parameters& params) {
    const double vhalf = v_of(0.5 * params.sigma, params);
    return json{{"epsilon", orbit.epsilon},
                {"theta0", orbit.theta0},
                {"y0", orbit.y0},
                {"period", orbit.period},
                {"residual", orbit.residual},
                {"matches_theoremA",
                 std::abs(orbit.y0 - vhalf) <= 10.0 * std::abs(orbit.epsilon)}};
}

} // namespace

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("config file " + path + " is not valid JSON: " + e.what());
    }
    ModelConfig config;
    if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
    if (j.contains("eta")) config.eta = j.at("eta").get<double>();
    if (j.contains("sigma")) config.sigma = j.at("sigma").get<double>();
    if (j.contains("f")) config.f = j.at("f").get<std::string>();
    if (j.contains("epsilon")) config.epsilon = j.at("epsilon").get<double>();
    return config;
}

BuiltModel build_model(const ModelConfig& config) {
    Parameters params{config.alpha, config.eta, config.sigma, config.epsilon};
    validate(params);
    Perturbation f = Perturbation::parse(config.f);
    const bool periodic = check_periodicity(f, config.sigma, 64);
    return BuiltModel{params, std::move(f), periodic};
}

int cmd_classify(const ModelConfig& config, bool as_json, std::ostream& out) {
    const CaseClass c = classify(config.alpha, config.eta);
    const std::string desc = describe(c, config.alpha, config.eta);

    bool has_annulus = false;
    AnnulusInfo info;
    try {
        info = annulus_info(config.alpha, config.eta);
        has_annulus = true;
    } catch (const NoPeriodAnnulus&) {
    }

    if (as_json) {
        json j{{"case", to_string(c.tag)}, {"description", desc}};
        if (c.omega) j["omega"] = *c.omega;
        if (has_annulus) {
            j["annulus"] = json{{"case_index", info.case_index},
                                {"D", json::array({info.domain_D.lo, info.domain_D.hi})},
                                {"I", json::array({info.image_I.lo, info.image_I.hi})},
                                {"tau0_monotone_sign", info.tau0_monotone_sign}};
        } else {
            j["annulus"] = nullptr;
        }
        out << j.dump(2) << "\n";
        return kExitOk;
    }

    out << to_string(c.tag) << ": " << desc;
    if (has_annulus) {
        out << "; annulus D=" << interval_str(info.domain_D)
            << ", I=" << interval_str(info.image_I);
    }
    out << "\n";
    return kExitOk;
}

int cmd_portrait(const ModelConfig& config, const std::vector<double>& y0_list, double t1,
                 const std::string& out_prefix, std::ostream& err) {
    BuiltModel model = [&] { return build_model(config); }();
    if (!model.periodicity_ok) {
        err << "warning: f does not look sigma-periodic on sampled points\n";
    }
    if (y0_list.empty()) {
        err << "error: no initial conditions given\n";
        return kExitUsage;
    }
    if (t1 <= 0.0) {
        err << "error: --t1 must be positive\n";
        return kExitUsage;
    }

    SimOptions opts;
    opts.time_limit_throws = false;
    opts.sample_dt = t1 / 512.0;

    std::size_t failures = 0;
    for (std::size_t i = 0; i < y0_list.size(); ++i) {
        const std::string path = out_prefix + std::to_string(i) + ".csv";
        try {
            const auto segments = flow_concat({0.0, 0.0, y0_list[i]}, t1, model.params,
                                              model.f, opts);
            std::ofstream out(path);
            if (!out) throw Error("cannot open output file: " + path);
            out << "tau,theta,x,y,region\n";
            double last_tau = 0.0;
            for (const auto& seg : segments) {
                const int rs = region_sign(seg.region);
                for (const auto& [tau, p] : seg.samples) {
                    out << fmt(tau) << ',' << fmt(p.theta) << ',' << fmt(p.x) << ','
                        << fmt(p.y) << ',' << rs << "\n";
                    last_tau = tau;
                }
            }
            if (last_tau + 1e-9 < t1) {
                out << "# time limit exceeded before requested duration\n";
            }
        } catch (const std::exception& e) {
            err << "trajectory " << i << " (y0 = " << fmt(y0_list[i]) << ") failed: " << e.what()
                << "\n";
            ++failures;
        }
    }
    return failures == y0_list.size() ? kExitComputation : kExitOk;
}

int cmd_melnikov(const ModelConfig& config, int samples, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
    try {
        BuiltModel model = build_model(config);
        if (!model.periodicity_ok) {
            err << "warning: f does not look sigma-periodic on sampled points\n";
        }
        require_admissible(model.params);
        if (samples < 2) throw Error("--samples must be at least 2");

        std::vector<double> values(static_cast<std::size_t>(samples));
        const double h = model.params.sigma / samples;
        detail::parallel_for(values.size(), [&](std::size_t j) {
            values[j] = melnikov(static_cast<double>(j) * h, model.params, model.f);
        });

        std::ofstream file;
        std::ostream* sink = &out;
        if (!out_path.empty()) {
            file.open(out_path);
            if (!file) throw Error("cannot open output file: " + out_path);
            sink = &file;
        }
        *sink << "phi,M\n";
        for (std::size_t j = 0; j < values.size(); ++j) {
            *sink << fmt(static_cast<double>(j) * h) << ',' << fmt(values[j]) << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

int cmd_zeros(const ModelConfig& config, int samples, const ZeroTolerances& ztol,
              std::ostream& out, std::ostream& err) {
    try {
        BuiltModel model = build_model(config);
        if (!model.periodicity_ok) {
            err << "warning: f does not look sigma-periodic on sampled points\n";
        }
        require_admissible(model.params);
        const MelnikovResult res = melnikov_grid(model.params, model.f, samples, ztol);

        json zeros = json::array();
        for (const auto& z : res.zeros) {
            zeros.push_back(json{{"phi_star", z.phi_star}, {"dM", z.dM}});
        }
        const json j{{"sigma", model.params.sigma},
                     {"samples", samples},
                     {"degenerate_flat", res.degenerate_flat},
                     {"zeros", zeros}};
        out << j.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

int cmd_orbit(const ModelConfig& config, double epsilon, double phi_seed, std::ostream& out,
              std::ostream& err) {
    try {
        BuiltModel model = build_model(config);
        if (!model.periodicity_ok) {
            err << "warning: f does not look sigma-periodic on sampled points\n";
        }
        require_admissible(model.params);
        const PeriodicOrbit orbit = find_periodic_orbit(epsilon, phi_seed, model.params, model.f);
        out << orbit_to_json(orbit, model.params).dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

int cmd_verify(const ModelConfig& config, const std::vector<double>& eps_list,
               std::ostream& out, std::ostream& err) {
    try {
        BuiltModel model = build_model(config);
        if (!model.periodicity_ok) {
            err << "warning: f does not look sigma-periodic on sampled points\n";
        }
        require_admissible(model.params);
        if (eps_list.size() < 3) throw Error("--epsilon-list needs at least 3 values");

        // Half-offset grid: integer multiples of sigma/8 tend to sit on
        // symmetry phases where the O(eps) remainder degenerates.
        constexpr int kThetaPoints = 8;
        std::vector<double> theta_grid(kThetaPoints);
        for (int i = 0; i < kThetaPoints; ++i) {
            theta_grid[static_cast<std::size_t>(i)] =
                (i + 0.5) * model.params.sigma / kThetaPoints;
        }

        std::vector<std::vector<double>> errors(theta_grid.size(),
                                                std::vector<double>(eps_list.size()));
        std::vector<double> m_values(theta_grid.size());
        detail::parallel_for(theta_grid.size(), [&](std::size_t i) {
            m_values[i] = melnikov(theta_grid[i], model.params, model.f);
            for (std::size_t k = 0; k < eps_list.size(); ++k) {
                const double d3t = delta3_tilde(theta_grid[i], eps_list[k], model.params, model.f);
                errors[i][k] = std::abs(d3t - m_values[i]);
            }
        });

        std::vector<double> slopes(theta_grid.size());
        double mean_slope = 0.0;
        for (std::size_t i = 0; i < theta_grid.size(); ++i) {
            std::vector<std::pair<double, double>> pairs;
            for (std::size_t k = 0; k < eps_list.size(); ++k) {
                pairs.emplace_back(std::abs(eps_list[k]), errors[i][k]);
            }
            slopes[i] = loglog_slope(pairs);
            mean_slope += slopes[i];
        }
        mean_slope /= static_cast<double>(theta_grid.size());

        const json j{{"eps_list", eps_list}, {"theta_grid", theta_grid},
                     {"melnikov", m_values}, {"errors", errors},
                     {"slopes", slopes},     {"slope", mean_slope}};
        out << j.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

int cmd_reproduce_p1(int n, double alpha, double eta, double beta, double epsilon,
                     const std::string& json_out_path, std::ostream& out, std::ostream& err) {
    try {
        if (n < 1) throw Error("--n must be >= 1");
        if (!(alpha > 0.0) || !(eta > 0.0) || !(beta > 0.0)) {
            throw Error("reproduce-p1 needs alpha > 0, eta > 0, beta > 0 (case C1)");
        }
        const Perturbation f = Perturbation::parse("sin(" + fmt(beta) + "*t)");
        const double sq = std::sqrt(eta);

        json rows = json::array();
        out << "  k      period            y0(eps)        v(sigma_k/2)   "
               "prop-P1 formula    y0(eps->0)      matches\n";
        bool any_failed = false;
        for (int k = 1; k <= n; ++k) {
            const double sigma_k = 2.0 * M_PI * (2 * k - 1) / beta;
            const Parameters params{alpha, eta, sigma_k, 0.0};
            try {
                const PeriodicOrbit orbit = find_periodic_orbit(epsilon, 0.0, params, f);
                const PeriodicOrbit orbit_half =
                    find_periodic_orbit(0.5 * epsilon, 0.0, params, f);
                const double y_extrap = 2.0 * orbit_half.y0 - orbit.y0;

                const double v_theorem = v_of(0.5 * sigma_k, params);
                const double v_prop_p1 = alpha / sq * std::tanh(M_PI * sq * (2 * k - 1) / beta);
                const double d_thm = std::abs(y_extrap - v_theorem);
                const double d_p1 = std::abs(y_extrap - v_prop_p1);
                std::string matches = "neither";
                if (d_thm <= 1e-4 && d_thm <= d_p1) {
                    matches = "theorem-A";
                } else if (d_p1 <= 1e-4) {
                    matches = "prop-P1";
                }

                char line[256];
                std::snprintf(line, sizeof line,
                              "%3d  %12.8f  %17.12f  %17.12f  %17.12f  %17.12f  %s\n", k,
                              sigma_k, orbit.y0, v_theorem, v_prop_p1, y_extrap,
                              matches.c_str());
                out << line;
                rows.push_back(json{{"k", k},
                                    {"period", sigma_k},
                                    {"y0", orbit.y0},
                                    {"residual", orbit.residual},
                                    {"theta0", orbit.theta0},
                                    {"v_sigma_half", v_theorem},
                                    {"prop_p1_value", v_prop_p1},
                                    {"y0_extrapolated", y_extrap},
                                    {"abs_diff_theoremA", d_thm},
                                    {"abs_diff_propP1", d_p1},
                                    {"matches", matches}});
            } catch (const std::exception& e) {
                err << "k = " << k << " failed: " << e.what() << "\n";
                rows.push_back(json{{"k", k}, {"period", sigma_k}, {"error", e.what()}});
                any_failed = true;
            }
        }

        if (!json_out_path.empty()) {
            std::ofstream file(json_out_path);
            if (!file) throw Error("cannot open output file: " + json_out_path);
            file << json{{"n", n},
                         {"alpha", alpha},
                         {"eta", eta},
                         {"beta", beta},
                         {"epsilon", epsilon},
                         {"rows", rows}}
                        .dump(2)
                 << "\n";
        }
        return any_failed ? kExitComputation : kExitOk;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

} // namespace melosc::cli
