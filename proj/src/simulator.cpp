#include "melosc/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "melosc/closed_form.hpp"
#include "melosc/numerics.hpp"

namespace melosc {
namespace {

using State = std::array<double, 2>; // (x, y)

struct SmoothField {
    double eta = 0.0;
    double a_signed = 0.0; // -alpha on Plus, +alpha on Minus
    double epsilon = 0.0;
    const Perturbation* f = nullptr;
    double theta_base = 0.0; // theta at local time 0

    State operator()(double xi, const State& s) const {
        double drive = 0.0;
        if (epsilon != 0.0) drive = epsilon * f->eval(theta_base + xi, s[0], s[1]);
        return {s[1], eta * s[0] + a_signed + drive};
    }
};

// Dormand-Prince 5(4) tableau.
constexpr double kC2 = 1.0 / 5, kC3 = 3.0 / 10, kC4 = 4.0 / 5, kC5 = 8.0 / 9;
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kA71 = 35.0 / 384, kA73 = 500.0 / 1113, kA74 = 125.0 / 192,
                 kA75 = -2187.0 / 6784, kA76 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;
// Continuous-extension weights.
constexpr double kD1 = -12715105075.0 / 11282082432.0;
constexpr double kD3 = 87487479700.0 / 32700410799.0;
constexpr double kD4 = -10690763975.0 / 1880347072.0;
constexpr double kD5 = 701980252875.0 / 199316789632.0;
constexpr double kD6 = -1453857185.0 / 822651844.0;
constexpr double kD7 = 69997945.0 / 29380423.0;

// Quartic dense-output polynomial over one accepted step.
struct DenseStep {
    double xi0 = 0.0, h = 0.0;
    State rc1{}, rc2{}, rc3{}, rc4{}, rc5{};

    State at(double xi) const {
        const double th = (xi - xi0) / h;
        const double th1 = 1.0 - th;
        State out;
        for (int i = 0; i < 2; ++i) {
            out[i] = rc1[i] + th * (rc2[i] + th1 * (rc3[i] + th * (rc4[i] + th1 * rc5[i])));
        }
        return out;
    }
};

struct StepResult {
    State y1;
    State k_last; // FSAL stage
    double err = 0.0;
    DenseStep dense;
};

StepResult dopri5_step(const SmoothField& field, double xi, const State& y, const State& k1,
                       double h, double rel_tol, double abs_tol) {
    State w;
    for (int i = 0; i < 2; ++i) w[i] = y[i] + h * kA21 * k1[i];
    const State k2 = field(xi + kC2 * h, w);
    for (int i = 0; i < 2; ++i) w[i] = y[i] + h * (kA31 * k1[i] + kA32 * k2[i]);
    const State k3 = field(xi + kC3 * h, w);
    for (int i = 0; i < 2; ++i) w[i] = y[i] + h * (kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i]);
    const State k4 = field(xi + kC4 * h, w);
    for (int i = 0; i < 2; ++i) {
        w[i] = y[i] + h * (kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i]);
    }
    const State k5 = field(xi + kC5 * h, w);
    for (int i = 0; i < 2; ++i) {
        w[i] = y[i] +
               h * (kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] + kA65 * k5[i]);
    }
    const State k6 = field(xi + h, w);

    StepResult res;
    for (int i = 0; i < 2; ++i) {
        res.y1[i] = y[i] + h * (kA71 * k1[i] + kA73 * k3[i] + kA74 * k4[i] + kA75 * k5[i] +
                                kA76 * k6[i]);
    }
    res.k_last = field(xi + h, res.y1);
    const State& k7 = res.k_last;

    double err2 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                              kE6 * k6[i] + kE7 * k7[i]);
        const double sc = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(res.y1[i]));
        err2 += (e / sc) * (e / sc);
    }
    res.err = std::sqrt(0.5 * err2);

    res.dense.xi0 = xi;
    res.dense.h = h;
    for (int i = 0; i < 2; ++i) {
        const double dy = res.y1[i] - y[i];
        res.dense.rc1[i] = y[i];
        res.dense.rc2[i] = dy;
        res.dense.rc3[i] = h * k1[i] - dy;
        res.dense.rc4[i] = dy - h * k7[i] - res.dense.rc3[i];
        res.dense.rc5[i] = h * (kD1 * k1[i] + kD3 * k3[i] + kD4 * k4[i] + kD5 * k5[i] +
                                kD6 * k6[i] + kD7 * k7[i]);
    }
    return res;
}

double initial_step(const SmoothField& field, const State& y0, double span, double rel_tol,
                    double abs_tol) {
    const State f0 = field(0.0, y0);
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double sc = abs_tol + rel_tol * std::abs(y0[i]);
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = std::sqrt(0.5 * d0);
    d1 = std::sqrt(0.5 * d1);
    double h = (d0 > 1e-10 && d1 > 1e-10) ? 0.01 * d0 / d1 : 1e-6 * span;
    return std::min(h, 0.1 * span);
}

struct ThetaContext {
    double theta_start = 0.0; // raw phase at local time 0
    double tau_start = 0.0;   // global tau at local time 0
    double sigma = 1.0;
};

ExtendedPoint make_point(const ThetaContext& ctx, double xi, const State& s) {
    return {normalize_phase(ctx.theta_start + xi, ctx.sigma), s[0], s[1]};
}

[[noreturn]] void throw_grazing(double tau, double y) {
    std::ostringstream os;
    os << "grazing: |y| = " << std::abs(y) << " at the switching line (tau = " << tau << ")";
    throw GrazingError(os.str());
}

// Core piece integration in signed local time xi, |xi| up to stop_local.
// throw_on_stop selects between the 10-sigma escape error and a normal
// TimeLimit terminal (duration end inside flow_concat).
TrajectorySegment integrate_piece_impl(const ExtendedPoint& start, Region region, int direction,
                                       double stop_local, bool throw_on_stop,
                                       const Parameters& params, const Perturbation& f,
                                       const SimOptions& opts, double tau_start) {
    if (direction != +1 && direction != -1) {
        throw std::invalid_argument("integrate_piece: direction must be +1 or -1");
    }
    const int rsign = region_sign(region);

    // Departure checks on the section; in the interior only region
    // consistency is required.
    if (std::abs(start.x) <= opts.event_x_tol) {
        if (std::abs(start.y) <= opts.graze_tol) throw_grazing(tau_start, start.y);
        if (rsign * start.y * direction <= 0.0) {
            throw std::invalid_argument(
                "integrate_piece: start velocity points out of the requested region");
        }
    } else if (rsign * start.x < -opts.event_x_tol) {
        throw std::invalid_argument("integrate_piece: start lies outside the region closure");
    }

    const ThetaContext ctx{start.theta, tau_start, params.sigma};
    SmoothField field{params.eta, -rsign * params.alpha, params.epsilon, &f, start.theta};

    TrajectorySegment seg;
    seg.region = region;
    seg.samples.emplace_back(tau_start, make_point(ctx, 0.0, {start.x, start.y}));

    State y{start.x, start.y};
    State k1 = field(0.0, y);
    double xi = 0.0;
    double h = direction * initial_step(field, y, stop_local, opts.rel_tol, opts.abs_tol);
    h = direction * std::min(std::abs(h), 0.5 * params.sigma);
    double next_sample = opts.sample_dt > 0.0 ? opts.sample_dt : 0.0;

    const double departure_xi = std::abs(start.x) <= opts.event_x_tol ? 0.0
                                                                      : std::numeric_limits<double>::quiet_NaN();

    while (true) {
        if (std::abs(xi) >= stop_local) {
            if (throw_on_stop) {
                throw TimeLimitExceeded("integrate_piece: no crossing within the horizon of " +
                                        std::to_string(stop_local) + " time units");
            }
            seg.terminal = TerminalKind::TimeLimit;
            return seg;
        }
        // clip the step at the horizon
        if ((std::abs(xi) + std::abs(h)) > stop_local) h = direction * (stop_local - std::abs(xi));
        if (std::abs(h) < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(xi))) {
            throw Error("integrate_piece: step size underflow");
        }

        StepResult st = dopri5_step(field, xi, y, k1, h, opts.rel_tol, opts.abs_tol);
        if (!std::isfinite(st.err) || !std::isfinite(st.y1[0]) || !std::isfinite(st.y1[1])) {
            // severe overflow inside the attempted step: retry smaller
            h *= 0.25;
            continue;
        }
        if (st.err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(st.err, -0.2));
            continue;
        }

        const double xi_new = xi + h;

        // scan the dense output for the first sign change of x after departure
        constexpr int kScan = 8;
        double prev_xi = xi;
        double prev_val = rsign * y[0];
        double bracket_lo = 0.0, bracket_hi = 0.0;
        bool found = false;
        for (int k = 1; k <= kScan && !found; ++k) {
            const double xik = k == kScan ? xi_new : xi + h * k / kScan;
            const double val = k == kScan ? rsign * st.y1[0] : rsign * st.dense.at(xik)[0];
            if (prev_val > 0.0 && val <= 0.0) {
                bracket_lo = prev_xi;
                bracket_hi = xik;
                found = true;
            } else if (prev_val == 0.0 && val < 0.0) {
                // only possible straight out of departure: re-entry faster
                // than one scan interval means the start was effectively
                // tangent to the section
                if (prev_xi == departure_xi) throw_grazing(tau_start, start.y);
                bracket_lo = prev_xi;
                bracket_hi = xik;
                found = true;
            }
            prev_xi = xik;
            prev_val = val;
        }

        if (found) {
            double xi_star;
            if (rsign * st.dense.at(bracket_hi)[0] == 0.0) {
                xi_star = bracket_hi;
            } else {
                auto dense_x = [&](double s) { return rsign * st.dense.at(s)[0]; };
                xi_star = brent(dense_x, bracket_lo, bracket_hi, 0.0);
            }
            const State hit = st.dense.at(xi_star);
            const double tau_star = tau_start + xi_star;
            if (std::abs(hit[1]) <= opts.graze_tol) throw_grazing(tau_star, hit[1]);
            if (std::abs(hit[0]) > opts.event_x_tol) {
                throw Error("integrate_piece: event refinement left |x| above tolerance");
            }

            if (opts.sample_dt > 0.0) {
                while (next_sample < std::abs(xi_star)) {
                    const double xs = direction * next_sample; // inside the current step
                    seg.samples.emplace_back(tau_start + xs, make_point(ctx, xs, st.dense.at(xs)));
                    next_sample += opts.sample_dt;
                }
            }
            seg.terminal = TerminalKind::Crossing;
            seg.crossing = CrossingEvent{tau_star, make_point(ctx, xi_star, hit), true};
            seg.samples.emplace_back(tau_star, seg.crossing->point);
            return seg;
        }

        // accept the step
        xi = xi_new;
        y = st.y1;
        k1 = st.k_last;
        if (opts.sample_dt > 0.0) {
            while (next_sample < std::abs(xi)) {
                const double xs = direction * next_sample;
                seg.samples.emplace_back(tau_start + xs, make_point(ctx, xs, st.dense.at(xs)));
                next_sample += opts.sample_dt;
            }
        }
        seg.samples.emplace_back(tau_start + xi, make_point(ctx, xi, y));
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(st.err, 1e-10), -0.2)));
        h = direction * std::min(std::abs(h), 0.5 * params.sigma);
    }
}

std::pair<double, double> solve_displacement(double epsilon, double phi_seed,
                                             const Parameters& params, const Perturbation& f,
                                             const SimOptions& opts) {
    const double ystar = v_of(0.5 * params.sigma, params);
    auto map = [&](double theta, double yy) {
        const DisplacementValue d = displacement(theta, yy, epsilon, params, f, opts);
        return std::pair<double, double>(d.delta1, d.delta3);
    };
    try {
        return newton2(map, {phi_seed, ystar}, opts.newton_tol, opts.newton_fd_step, 50);
    } catch (const MaxIterations& e) {
        throw NewtonDivergence(std::string("find_periodic_orbit: ") + e.what());
    } catch (const SingularJacobian& e) {
        throw NewtonDivergence(std::string("find_periodic_orbit: ") + e.what());
    }
}

PeriodicOrbit assemble_orbit(double epsilon, double theta0, double y0, const Parameters& params,
                             const Perturbation& f, const SimOptions& opts) {
    Parameters run = params;
    run.epsilon = epsilon;

    PeriodicOrbit orbit;
    orbit.epsilon = epsilon;
    orbit.theta0 = normalize_phase(theta0, params.sigma);
    orbit.y0 = y0;
    orbit.period = params.sigma;

    const DisplacementValue d = displacement(theta0, y0, epsilon, params, f, opts);
    orbit.residual = std::max(std::abs(d.delta1), std::abs(d.delta3));

    TrajectorySegment plus =
        integrate_piece_impl({theta0, 0.0, y0}, Region::Plus, +1,
                             opts.time_limit_factor * params.sigma, true, run, f, opts, 0.0);
    const CrossingEvent cross = *plus.crossing;
    TrajectorySegment minus = integrate_piece_impl(
        {theta0 + cross.tau, 0.0, cross.point.y}, Region::Minus, +1,
        opts.time_limit_factor * params.sigma, true, run, f, opts, cross.tau);
    orbit.segments.push_back(std::move(plus));
    orbit.segments.push_back(std::move(minus));
    return orbit;
}

} // namespace

TrajectorySegment integrate_piece(const ExtendedPoint& start, Region region, int direction,
                                  const Parameters& params, const Perturbation& f,
                                  const SimOptions& opts) {
    validate(params);
    return integrate_piece_impl(start, region, direction, opts.time_limit_factor * params.sigma,
                                true, params, f, opts, 0.0);
}

std::vector<TrajectorySegment> flow_concat(const ExtendedPoint& start, double duration,
                                           const Parameters& params, const Perturbation& f,
                                           const SimOptions& opts) {
    validate(params);
    if (duration < 0.0) throw std::invalid_argument("flow_concat: duration must be >= 0");
    std::vector<TrajectorySegment> segments;
    if (duration == 0.0) return segments;

    const double horizon = opts.time_limit_factor * params.sigma;
    double tau = 0.0;
    double x = start.x, y = start.y;

    while (duration - tau > 1e-12 * (1.0 + duration)) {
        Region region;
        if (std::abs(x) > opts.event_x_tol) {
            region = x > 0.0 ? Region::Plus : Region::Minus;
        } else {
            if (std::abs(y) <= opts.graze_tol) throw_grazing(tau, y);
            region = y > 0.0 ? Region::Plus : Region::Minus;
            x = 0.0;
        }
        const double remaining = duration - tau;
        const double stop = std::min(remaining, horizon);
        const bool escape_check = remaining > horizon;

        ExtendedPoint here{start.theta + tau, x, y};
        TrajectorySegment seg = integrate_piece_impl(here, region, +1, stop,
                                                     escape_check && opts.time_limit_throws,
                                                     params, f, opts, tau);
        if (seg.terminal == TerminalKind::TimeLimit) {
            segments.push_back(std::move(seg));
            if (escape_check) return segments; // reported, caller asked not to throw
            return segments;                   // duration reached
        }
        const CrossingEvent cross = *seg.crossing;
        segments.push_back(std::move(seg));
        tau = cross.tau;
        x = 0.0;
        y = cross.point.y;
    }
    return segments;
}

DisplacementValue displacement(double theta0, double y0, double epsilon,
                               const Parameters& params, const Perturbation& f,
                               const SimOptions& opts) {
    validate(params);
    if (!(y0 > 0.0)) throw std::invalid_argument("displacement: y0 must be > 0");

    Parameters run = params;
    run.epsilon = epsilon;
    const double horizon = opts.time_limit_factor * params.sigma;

    const TrajectorySegment plus = integrate_piece_impl({theta0, 0.0, y0}, Region::Plus, +1,
                                                        horizon, true, run, f, opts, 0.0);
    const TrajectorySegment minus =
        integrate_piece_impl({theta0 + params.sigma, 0.0, y0}, Region::Minus, -1, horizon, true,
                             run, f, opts, 0.0);

    DisplacementValue d;
    d.tau_plus = plus.crossing->tau;
    d.tau_minus = minus.crossing->tau;
    d.delta1 = d.tau_plus - d.tau_minus - params.sigma;
    d.delta3 = plus.crossing->point.y - minus.crossing->point.y;
    return d;
}

double delta3_tilde(double theta0, double epsilon, const Parameters& params,
                    const Perturbation& f, const SimOptions& opts) {
    validate(params);
    if (epsilon == 0.0) throw std::invalid_argument("delta3_tilde: epsilon must be nonzero");

    const double ystar = v_of(0.5 * params.sigma, params);
    const AnnulusInfo info = annulus_info(params.alpha, params.eta);

    // Bracket endpoints must stay inside the annulus domain and must yield a
    // finite first-return; endpoints whose trajectory escapes or grazes are
    // pulled halfway back toward ystar.
    auto clamp_to_domain = [&](double y) {
        if (std::isfinite(info.domain_D.hi)) {
            const double margin = 1e-6 * (info.domain_D.hi - info.domain_D.lo);
            y = std::min(y, info.domain_D.hi - margin);
        }
        const double lo_margin = std::isfinite(info.domain_D.hi)
                                     ? 1e-6 * (info.domain_D.hi - info.domain_D.lo)
                                     : 1e-12;
        return std::max(y, info.domain_D.lo + lo_margin);
    };

    auto g = [&](double y) { return displacement(theta0, y, epsilon, params, f, opts).delta1; };

    auto robust_eval = [&](double y) -> std::pair<double, double> {
        for (int tries = 0; tries < 6; ++tries) {
            try {
                return {y, g(y)};
            } catch (const TimeLimitExceeded&) {
            } catch (const GrazingError&) {
            }
            y = 0.5 * (y + ystar);
        }
        throw RootBracketFailure("delta3_tilde: could not evaluate delta1 near the bracket end");
    };

    double ybar = std::numeric_limits<double>::quiet_NaN();
    for (double halfwidth : {0.2, 0.4}) {
        auto [lo, glo] = robust_eval(clamp_to_domain(ystar * (1.0 - halfwidth)));
        auto [hi, ghi] = robust_eval(clamp_to_domain(ystar * (1.0 + halfwidth)));
        if ((glo > 0.0) == (ghi > 0.0)) continue;
        ybar = brent(g, lo, hi, 1e-13);
        break;
    }
    if (!std::isfinite(ybar)) {
        throw RootBracketFailure(
            "delta3_tilde: delta1 has no sign change in the widened bracket around v(sigma/2)");
    }

    const double d3 = displacement(theta0, ybar, epsilon, params, f, opts).delta3;
    return -ystar / (2.0 * epsilon) * d3;
}

PeriodicOrbit find_periodic_orbit(double epsilon, double phi_seed, const Parameters& params,
                                  const Perturbation& f, const SimOptions& opts) {
    validate(params);
    if (std::abs(epsilon) > opts.eps_max) {
        throw std::invalid_argument("find_periodic_orbit: |epsilon| exceeds eps_max");
    }
    const auto [theta, y0] = solve_displacement(epsilon, phi_seed, params, f, opts);
    return assemble_orbit(epsilon, theta, y0, params, f, opts);
}

ContinuationResult continuation(const std::vector<double>& eps_list, double phi_star,
                                const Parameters& params, const Perturbation& f,
                                const SimOptions& opts) {
    validate(params);
    for (std::size_t i = 1; i + 1 < eps_list.size(); ++i) {
        const double a = eps_list[i] - eps_list[i - 1];
        const double b = eps_list[i + 1] - eps_list[i];
        if (a * b < 0.0) throw std::invalid_argument("continuation: eps_list must be monotone");
    }

    ContinuationResult result;
    double seed_theta = phi_star;
    double seed_y = v_of(0.5 * params.sigma, params);

    for (double eps : eps_list) {
        try {
            if (std::abs(eps) > opts.eps_max) {
                throw std::invalid_argument("continuation: |epsilon| exceeds eps_max");
            }
            const double ystar_seed = seed_y;
            auto map = [&](double theta, double yy) {
                const DisplacementValue d = displacement(theta, yy, eps, params, f, opts);
                return std::pair<double, double>(d.delta1, d.delta3);
            };
            std::pair<double, double> sol;
            try {
                sol = newton2(map, {seed_theta, ystar_seed}, opts.newton_tol,
                              opts.newton_fd_step, 50);
            } catch (const MaxIterations& e) {
                throw NewtonDivergence(std::string("continuation: ") + e.what());
            } catch (const SingularJacobian& e) {
                throw NewtonDivergence(std::string("continuation: ") + e.what());
            }
            result.orbits.push_back(assemble_orbit(eps, sol.first, sol.second, params, f, opts));
            seed_theta = sol.first;
            seed_y = sol.second;
        } catch (const std::exception& e) {
            result.completed = false;
            std::ostringstream os;
            os << "branch truncated at epsilon = " << eps << ": " << e.what();
            result.diagnostic = os.str();
            break;
        }
    }
    return result;
}

} // namespace melosc
