#pragma once
// Polarization-correlation analysis of two-qubit source states (projector
// probabilities, correlators, CHSH, visibility) and the imperfection sweeps
// that tie state quality, verification statistics and bitrate together.

#include <cstdint>
#include <string>
#include <vector>

#include "pvq/qcore/state.hpp"

namespace pvq::analysis {

using qcore::DensityMatrix;

// Probability that both photons pass linear polarizers at the given angles:
// <v|rho|v> with v = (cos t1, sin t1) tensor (cos t2, sin t2).
double projector_probability(const DensityMatrix& pair, double theta_1, double theta_2);

// E(t1, t2) built from four projector probabilities, the orthogonal setting
// being the angle plus pi/2.
double correlator(const DensityMatrix& pair, double theta_1, double theta_2);

// The four analyzer angles of a CHSH estimate.
struct AnalyzerSettings {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;
};

// Settings maximizing S for the ideal |Psi+> pair.
AnalyzerSettings psi_plus_optimal();
// Fixed settings used across the wave-plate sweep; optimal for |Psi->.
AnalyzerSettings hv_fixed_settings();

// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')|.
double chsh_s(const DensityMatrix& pair, const AnalyzerSettings& settings);

// Coincidence-fringe visibility (max - min) / (max + min) of the projector
// probability as theta_2 scans a half turn with theta_1 held fixed.
double visibility(const DensityMatrix& pair, double theta_1);

// One sweep sample. tests_passed counts passing statistical-battery rows and
// is -1 where no battery is run.
struct SweepRow {
    double parameter = 0.0;
    double s_value = 0.0;
    double visibility = 0.0;
    double pass_fraction = 0.0;
    double bitrate_kbps = 0.0;
    int tests_passed = -1;
};

struct SweepTable {
    std::vector<SweepRow> rows;

    // Header "parameter,S,V,pass_fraction,bitrate,tests_passed"; empty cells
    // for absent battery counts and non-finite values.
    std::string to_csv() const;
};

struct SweepConfig {
    double pump_power_mw = 1.0;
    std::uint64_t seed = 1;
    std::size_t samples_per_row = 20000;   // sampled records per wave-plate row
    std::size_t battery_bits = 1000000;    // bits fed to the battery per polarizer row
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

std::vector<double> default_depolarizing_grid();  // 0 .. 1, 11 points
std::vector<double> default_hwp_grid();           // 0 .. pi/8, 9 points
std::vector<double> default_polarizer_grid();     // 0 .. pi/2, 9 points

// Depolarizing sweep: S and V computed from the mixed pair, pass fraction
// from the parity relation (1 - p/2), nominal secure bitrate.
SweepTable sweep_depolarizing(const std::vector<double>& p_grid, const SweepConfig& cfg);

// Wave-plate sweep at the fixed analyzer settings: S decays as cos(4 theta)
// while the pure-state visibility stays at one; the pass fraction is sampled
// from the propagated record state.
SweepTable sweep_hwp(const std::vector<double>& theta_grid, const SweepConfig& cfg);

// Polarizer sweep: one simulated ideal stream is post-selected per angle and
// the verification-side observables are measured, including the battery over
// the arm-B column. S and V stay at the source values by construction.
SweepTable sweep_polarizer(const std::vector<double>& theta_grid, const SweepConfig& cfg);

}  // namespace pvq::analysis
