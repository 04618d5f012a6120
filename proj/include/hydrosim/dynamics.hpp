#ifndef HYDROSIM_DYNAMICS_HPP
#define HYDROSIM_DYNAMICS_HPP

#include <vector>

#include "hydrosim/turbine.hpp"

namespace hydrosim {

/// Temporary-droop (dashpot) governor with deadband, servo lag, gate rate
/// and position limits. Permanent droop feedback acts on gate position.
struct GovernorParams {
    double permanent_droop_rp = 0.05;   // pu
    double temporary_droop_rt = 0.40;   // pu
    double reset_time_tr_s = 6.0;
    double servo_time_tg_s = 0.2;
    double gate_rate_limit = 0.1;       // pu/s, opening and closing
    double deadband_hz = 0.036;
    double gate_min = 0.0;              // pu
    double gate_max = 1.0;              // pu

    void validate() const;
};

/// Penstock/turbine state. head_h is a live state variable; static_head is
/// the reservoir (forebay-driven) boundary head fixed at initialization, so
/// low-water conditions enter the dynamics directly.
struct TurbineState {
    double flow_q = 0.0;        // pu
    double gate_g = 0.0;        // pu
    double head_h = 1.0;        // pu, dynamic
    double mech_power_pm = 0.0; // pu on the unit MVA base
    double static_head = 1.0;   // pu, set by init_steady_state
};

/// Steady operating point at initial power p0 (pu on the unit MVA base) and
/// per-unit head h0: q0 = p0/(At*h0) + qnl, G0 = q0/sqrt(h0). The turbine
/// gain At stays fixed while the static head varies. InfeasibleInitError when
/// the required gate exceeds gate_max (low-head saturation at t=0).
TurbineState init_steady_state(const TurbineUnit& unit, const GovernorParams& governor,
                               double p0_pu, double h0_pu);

/// One RK4 step of the nonlinear water column: h = (q/G)^2,
/// dq/dt = (static_head - h)/Tw, Pm = At*h*(q - qnl). The gate command is
/// held constant over the step. NumericalDivergenceError when q or h leaves
/// (0, 10).
TurbineState step_nonlinear_turbine(const TurbineUnit& unit, const TurbineState& state,
                                    double gate_command, double dt_s);

/// Legacy linearized water-column comparator:
/// dPm/dG = At * (1 - Tw s)/(1 + 0.5 Tw s) around the initialization point.
/// Head is not a variable; initialization and response are pinned to 1 pu
/// head regardless of actual water conditions.
struct LinearizedTurbine {
    double tw_s = 1.0;
    double gain_at = 1.2;
    double no_load_flow_qnl = 0.08;
    double gate0 = 0.0;
    double pm0 = 0.0;
    double washout_state = 0.0;

    static LinearizedTurbine init(const TurbineUnit& unit, double p0_pu);

    /// Advances one step (exact discretization of the first-order branch)
    /// and returns the new mechanical power (pu).
    double step(double gate_command, double dt_s);

    double pm(double gate_command) const;
};

/// Governor integrator/servo state. gate_ref is the initialization gate the
/// permanent droop measures deviations from.
struct GovernorState {
    double integrator = 0.0;
    double gate = 0.0;
    double gate_ref = 0.0;

    static GovernorState at_gate(double gate0) { return {0.0, gate0, gate0}; }
};

/// One RK4 governor step: deadband first, droop-plus-dashpot compensation,
/// servo lag, gate clamped to [gate_min, gate_max] and slewed at the rate
/// limit. Returns the new gate command.
double governor_step(GovernorState& state, double freq_dev_hz, const GovernorParams& params,
                     double f_nominal_hz, double dt_s);

struct ResponsiveUnit {
    TurbineUnit unit;
    GovernorParams governor;
    double initial_power_pu = 0.0;  // on the unit MVA base
    double initial_head_pu = 1.0;
};

struct UflsStage {
    double threshold_hz = 59.1;
    double shed_fraction = 0.05;  // of the load at the firing instant
};

/// Single-frequency-bus system: responsive hydro units, a governor-blocked
/// fleet contributing constant power (and optionally inertia), frequency-
/// dependent load damping, and staged under-frequency load shedding.
struct GridModel {
    double system_base_mva = 1000.0;
    double f_nominal_hz = 60.0;
    std::vector<ResponsiveUnit> responsive_units;
    double nonresponsive_mw = 0.0;
    double nonresponsive_inertia_mws = 0.0;  // aggregate H*MVA of the blocked fleet
    double load_damping_d = 1.0;             // pu load change per pu frequency change
    std::vector<UflsStage> ufls_stages;      // thresholds strictly decreasing

    void validate() const;
};

struct GenerationLossEvent {
    double t0_s = 1.0;
    double loss_mw = 0.0;
};

enum class TurbineModelKind { Nonlinear, Linearized };

struct SimMetrics {
    double rocof_hz_per_s = 0.0;          // over the first 0.5 s after the event
    double nadir_hz = 0.0;
    double nadir_time_s = 0.0;
    double settling_deviation_hz = 0.0;   // tail-mean deviation from nominal
    double delivered_response_mw = 0.0;   // sum (Pm_tail - Pm_initial) * MVA
    double ufls_shed_mw = 0.0;
    bool frequency_collapse = false;
};

struct FrequencySimResult {
    std::vector<double> time_s;
    std::vector<double> frequency_hz;
    // indexed [unit][sample]
    std::vector<std::vector<double>> gate_pu;
    std::vector<std::vector<double>> flow_pu;
    std::vector<std::vector<double>> head_pu;
    std::vector<std::vector<double>> pm_pu;
    SimMetrics metrics;
};

/// Fixed-step RK4 integration of the aggregate swing equation
/// 2*H_agg*dw/dt = Pm - Pe - D*w on the system base, with the selected
/// turbine model per responsive unit. UFLS stages fire once each when
/// frequency crosses their thresholds.
FrequencySimResult simulate_event(const GridModel& grid, const GenerationLossEvent& event,
                                  double duration_s, double dt_s,
                                  TurbineModelKind turbine_model = TurbineModelKind::Nonlinear);

/// Sum of H*MVA over online units, in MW*s.
double aggregate_stored_energy(const std::vector<std::pair<TurbineUnit, bool>>& units_online);

/// Diagnostic overlay for rough-zone operation: a sinusoidal output swing at
/// one quarter of the shaft speed while the operating point sits inside a
/// forbidden band. Not a hydraulic model; the documented signature is
/// injected rather than derived.
struct RoughZoneDiagnostic {
    bool in_rough_zone = false;
    std::vector<double> pm_perturbation_mw;  // one sample per dt
};

RoughZoneDiagnostic inject_rough_zone_oscillation(const TurbineUnit& unit, double power_fraction,
                                                  double shaft_speed_hz, double duration_s,
                                                  double dt_s, double amplitude_fraction = 0.05);

} // namespace hydrosim

#endif
