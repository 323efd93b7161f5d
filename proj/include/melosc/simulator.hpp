#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "melosc/model.hpp"
#include "melosc/perturbation.hpp"

namespace melosc {

/// Half plane on which one smooth piece of the vector field lives.
enum class Region { Plus, Minus };

inline int region_sign(Region r) noexcept { return r == Region::Plus ? +1 : -1; }

/// State of the extended system (theta' = 1, x' = y, y' = ...).
struct ExtendedPoint {
    double theta = 0.0; ///< time phase; normalized to [0, sigma) in outputs
    double x = 0.0;
    double y = 0.0;
};

/// Transversal arrival at the switching plane {x = 0}.
struct CrossingEvent {
    double tau = 0.0;    ///< event time along the integration
    ExtendedPoint point; ///< |x| <= event tolerance
    bool transversal = true;
};

enum class TerminalKind { Crossing, TimeLimit };

/// One smooth piece of a trajectory, integrated inside a single region.
struct TrajectorySegment {
    Region region = Region::Plus;
    std::vector<std::pair<double, ExtendedPoint>> samples; ///< (tau, state), monotone tau
    TerminalKind terminal = TerminalKind::Crossing;
    std::optional<CrossingEvent> crossing; ///< set iff terminal == Crossing
};

/// Mismatch of the forward right-flow and backward left-flow on the section.
struct DisplacementValue {
    double delta1 = 0.0;  ///< tau_plus - tau_minus - sigma
    double delta3 = 0.0;  ///< velocity mismatch at the section
    double tau_plus = 0.0;
    double tau_minus = 0.0;
};

/// A located sigma-periodic solution.
struct PeriodicOrbit {
    double epsilon = 0.0;
    double theta0 = 0.0;
    double y0 = 0.0;
    double period = 0.0;
    double residual = 0.0; ///< max-norm of the displacement at (theta0, y0)
    std::vector<TrajectorySegment> segments; ///< Plus piece then Minus piece
};

struct SimOptions {
    double rel_tol = 1e-10;        ///< integrator relative tolerance
    double abs_tol = 1e-12;        ///< integrator absolute tolerance
    double graze_tol = 1e-7;       ///< |y| below this at a crossing aborts
    double event_x_tol = 1e-12;    ///< |x| at refined crossing times
    double time_limit_factor = 10; ///< per-piece horizon, in units of sigma
    double sample_dt = 0.0;        ///< extra dense samples if > 0
    double newton_fd_step = 1e-7;
    double newton_tol = 1e-10;
    double eps_max = 0.05;         ///< guardrail on |epsilon| for orbit solves
    bool time_limit_throws = true; ///< false: report TimeLimit terminally instead
};

/// Integrates the region's smooth field from start in the given time
/// direction until the first transversal return to {x = 0} strictly after
/// departure. Embedded Dormand-Prince 4(5) with dense output; the crossing
/// time is refined on the interpolant.
TrajectorySegment integrate_piece(const ExtendedPoint& start, Region region, int direction,
                                  const Parameters& params, const Perturbation& f,
                                  const SimOptions& opts = {});

/// Concatenates alternating Plus/Minus pieces forward in time for the given
/// duration, switching regions at transversal crossings.
std::vector<TrajectorySegment> flow_concat(const ExtendedPoint& start, double duration,
                                           const Parameters& params, const Perturbation& f,
                                           const SimOptions& opts = {});

/// Displacement map: forward Plus flow from (theta0, 0, y0) against backward
/// Minus flow from (theta0 + sigma, 0, y0), both to their first crossing.
DisplacementValue displacement(double theta0, double y0, double epsilon,
                               const Parameters& params, const Perturbation& f,
                               const SimOptions& opts = {});

/// Solves delta1(theta0, y; eps) = 0 for y near v(sigma/2) and returns the
/// rescaled velocity mismatch -v(sigma/2)/(2 eps) * delta3 there; converges
/// to the Melnikov function as eps -> 0.
double delta3_tilde(double theta0, double epsilon, const Parameters& params,
                    const Perturbation& f, const SimOptions& opts = {});

/// Damped Newton on (theta0, y0) -> (delta1, delta3) seeded at
/// (phi_seed, v(sigma/2)); returns the assembled orbit over one period.
PeriodicOrbit find_periodic_orbit(double epsilon, double phi_seed, const Parameters& params,
                                  const Perturbation& f, const SimOptions& opts = {});

struct ContinuationResult {
    std::vector<PeriodicOrbit> orbits;
    bool completed = true;
    std::string diagnostic; ///< first failure, when not completed
};

/// Tracks the orbit branch over eps_list with warm-started Newton solves;
/// truncated at the first failing epsilon.
ContinuationResult continuation(const std::vector<double>& eps_list, double phi_star,
                                const Parameters& params, const Perturbation& f,
                                const SimOptions& opts = {});

} // namespace melosc
