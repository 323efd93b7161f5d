#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "melosc/melnikov.hpp"
#include "melosc/model.hpp"
#include "melosc/perturbation.hpp"
#include "melosc/simulator.hpp"

namespace melosc::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// The five-field model description used by the config file and the flags.
struct ModelConfig {
    double alpha = 1.0;
    double eta = 1.0;
    double sigma = 2.0 * M_PI;
    std::string f = "sin(t)";
    double epsilon = 0.0;
};

/// Reads a JSON object with keys alpha, eta, sigma, f, epsilon (all
/// optional; missing keys keep the defaults above).
ModelConfig load_config(const std::string& path);

/// Parameters + parsed perturbation; surfaces the periodicity warning.
struct BuiltModel {
    Parameters params;
    Perturbation f;
    bool periodicity_ok = true;
};

BuiltModel build_model(const ModelConfig& config);

/// 17-significant-digit round-trip-safe formatting used in CSV payloads.
std::string fmt(double v);

int cmd_classify(const ModelConfig& config, bool as_json, std::ostream& out);

int cmd_portrait(const ModelConfig& config, const std::vector<double>& y0_list, double t1,
                 const std::string& out_prefix, std::ostream& err);

int cmd_melnikov(const ModelConfig& config, int samples, const std::string& out_path,
                 std::ostream& out, std::ostream& err);

int cmd_zeros(const ModelConfig& config, int samples, const ZeroTolerances& ztol,
              std::ostream& out, std::ostream& err);

int cmd_orbit(const ModelConfig& config, double epsilon, double phi_seed, std::ostream& out,
              std::ostream& err);

int cmd_verify(const ModelConfig& config, const std::vector<double>& eps_list,
               std::ostream& out, std::ostream& err);

int cmd_reproduce_p1(int n, double alpha, double eta, double beta, double epsilon,
                     const std::string& json_out_path, std::ostream& out, std::ostream& err);

} // namespace melosc::cli
