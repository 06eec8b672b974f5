#pragma once

#include <string>
#include <vector>

#include "oseen/field.hpp"

namespace oseen {

/// A time series of norm values with its fitted log-log decay law
/// value ~ fitted_constant * t^fitted_exponent.
struct DecaySeries {
    std::vector<double> times;  // strictly increasing, positive
    std::vector<double> values; // nonnegative
    double target_exponent = 0.0;
    double fitted_exponent = 0.0;
    double fitted_constant = 0.0;
    double fit_quality = 0.0; // R^2 of the log-log fit, clamped to [0, 1]
    bool fitted = false;
    bool window_warning = false; // set when the usable window spans < 1 decade

    /// CSV rows "t,value,target_exponent".
    void write_csv(const std::string& path) const;
};

/// Norm summary of a single field at one exponent p.
struct LorentzReport {
    double p = 0.0;
    double strong_norm = 0.0;
    double weak_quasinorm = 0.0;
    double tail_functional = 0.0;
    std::vector<double> lambda_grid; // the lambda values scanned for the tail

    /// Flat key=value text; lambda_grid as a comma-separated list.
    void write(const std::string& path) const;
};

/// (sum |f|^p dx^2)^(1/p); vector fields use the pointwise Euclidean
/// magnitude. Requires p >= 1.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const VectorField2& v, double p);

/// Area of {|f| > lambda}: dx^2 times the node count.
double distribution_function(const ScalarField& f, double lambda);
double distribution_function(const VectorField2& v, double lambda);

/// Weak-Lp quasinorm via the decreasing rearrangement: max over the sorted
/// samples of |f|_(k) * (k dx^2)^(1/p). Requires p > 1.
double weak_lp_quasinorm(const ScalarField& f, double p);
double weak_lp_quasinorm(const VectorField2& v, double p);

/// Dyadic lambda grid with 8 points per octave spanning [lambda_min,
/// lambda_max], both ends included.
std::vector<double> tail_lambda_grid(double lambda_min, double lambda_max);

/// sup of lambda * mu(lambda)^(1/p) over tail_lambda_grid. The true
/// lambda->0 limsup has no finite-box analogue: mu saturates at the box area
/// once lambda drops below the far-field floor max_{|x|~L}|f|, so lambda_min
/// must sit above that floor.
double small_value_tail(const ScalarField& f, double p, double lambda_min, double lambda_max);
double small_value_tail(const VectorField2& v, double p, double lambda_min, double lambda_max);

/// Bundles strong norm, weak quasinorm, and tail functional at one p.
LorentzReport make_lorentz_report(const ScalarField& f, double p, double lambda_min,
                                  double lambda_max);
LorentzReport make_lorentz_report(const VectorField2& v, double p, double lambda_min,
                                  double lambda_max);

/// (integral of ||u(t)||_4^4 dt)^(1/4) with trapezoidal time quadrature.
/// Needs at least two snapshots at strictly increasing times.
double spacetime_l4_norm(const std::vector<double>& times, const std::vector<VectorField2>& u);
/// Same quadrature when the instantaneous L4 norms are already known.
double spacetime_l4_norm_from_values(const std::vector<double>& times,
                                     const std::vector<double>& l4_values);

/// Least-squares power-law fit of log(value) against log(t) over samples with
/// window_t_min <= t <= window_t_max. Needs >= 5 samples in the window, all
/// values positive there. Returns the windowed series with fit fields set.
DecaySeries fit_decay(const DecaySeries& series, double window_t_min, double window_t_max);

/// Whole-range fit; same requirements applied to the full series.
DecaySeries fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                      double target_exponent);

} // namespace oseen
