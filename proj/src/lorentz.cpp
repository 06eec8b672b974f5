#include "oseen/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oseen {

namespace {

void require_p_strong(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: exponent p must be >= 1");
}

void require_p_weak(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("weak norm: exponent p must be > 1");
}

std::vector<double> magnitudes(const ScalarField& f) {
    std::vector<double> m(f.data.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(f.data[i]);
    return m;
}

std::vector<double> magnitudes(const VectorField2& v) {
    std::vector<double> m(v.x.data.size());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::hypot(v.x.data[i], v.y.data[i]);
    return m;
}

double lp_of(const std::vector<double>& mag, double p, double cell) {
    require_p_strong(p);
    double acc = 0.0;
    for (double m : mag) acc += std::pow(m, p);
    return std::pow(acc * cell, 1.0 / p);
}

double mu_of(const std::vector<double>& mag, double lambda, double cell) {
    std::size_t count = 0;
    for (double m : mag)
        if (m > lambda) ++count;
    return static_cast<double>(count) * cell;
}

double weak_of(std::vector<double> mag, double p, double cell) {
    require_p_weak(p);
    std::sort(mag.begin(), mag.end(), std::greater<double>());
    double best = 0.0;
    for (std::size_t k = 0; k < mag.size(); ++k) {
        if (mag[k] == 0.0) break; // sorted: the rest contribute nothing
        double cand = mag[k] * std::pow(static_cast<double>(k + 1) * cell, 1.0 / p);
        best = std::max(best, cand);
    }
    return best;
}

double tail_of(const std::vector<double>& mag, double p, const std::vector<double>& grid,
               double cell) {
    require_p_weak(p);
    double best = 0.0;
    for (double lam : grid) {
        double mu = mu_of(mag, lam, cell);
        if (mu > 0.0) best = std::max(best, lam * std::pow(mu, 1.0 / p));
    }
    return best;
}

DecaySeries fit_samples(std::vector<double> times, std::vector<double> values,
                        double target_exponent) {
    const std::size_t n = times.size();
    if (n < 5) throw std::invalid_argument("fit_decay: need at least 5 samples in the window");
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(times[i] > 0.0))
            throw std::invalid_argument("fit_decay: times must be positive");
        if (!(values[i] > 0.0))
            throw std::invalid_argument("fit_decay: nonpositive value in window, log undefined");
        lx[i] = std::log(times[i]);
        ly[i] = std::log(values[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = lx[i] - mx;
        double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit_decay: times must not all coincide");
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double r2 = 1.0; // zero residual variance: the constant fit is exact
    if (syy > 0.0) r2 = std::clamp((sxy * sxy) / (sxx * syy), 0.0, 1.0);

    DecaySeries out;
    out.times = std::move(times);
    out.values = std::move(values);
    out.target_exponent = target_exponent;
    out.fitted_exponent = slope;
    out.fitted_constant = std::exp(intercept);
    out.fit_quality = r2;
    out.fitted = true;
    out.window_warning = out.times.back() < 10.0 * out.times.front();
    return out;
}

} // namespace

double lp_norm(const ScalarField& f, double p) {
    double cell = f.grid.dx() * f.grid.dx();
    return lp_of(magnitudes(f), p, cell);
}

double lp_norm(const VectorField2& v, double p) {
    double cell = v.grid().dx() * v.grid().dx();
    return lp_of(magnitudes(v), p, cell);
}

double distribution_function(const ScalarField& f, double lambda) {
    double cell = f.grid.dx() * f.grid.dx();
    return mu_of(magnitudes(f), lambda, cell);
}

double distribution_function(const VectorField2& v, double lambda) {
    double cell = v.grid().dx() * v.grid().dx();
    return mu_of(magnitudes(v), lambda, cell);
}

double weak_lp_quasinorm(const ScalarField& f, double p) {
    double cell = f.grid.dx() * f.grid.dx();
    return weak_of(magnitudes(f), p, cell);
}

double weak_lp_quasinorm(const VectorField2& v, double p) {
    double cell = v.grid().dx() * v.grid().dx();
    return weak_of(magnitudes(v), p, cell);
}

std::vector<double> tail_lambda_grid(double lambda_min, double lambda_max) {
    if (!(lambda_min > 0.0) || !(lambda_max > lambda_min))
        throw std::invalid_argument("tail grid: need 0 < lambda_min < lambda_max");
    const double step = std::pow(2.0, 1.0 / 8.0); // 8 points per octave
    std::vector<double> grid;
    for (double lam = lambda_min; lam < lambda_max; lam *= step) grid.push_back(lam);
    grid.push_back(lambda_max);
    return grid;
}

double small_value_tail(const ScalarField& f, double p, double lambda_min, double lambda_max) {
    double cell = f.grid.dx() * f.grid.dx();
    return tail_of(magnitudes(f), p, tail_lambda_grid(lambda_min, lambda_max), cell);
}

double small_value_tail(const VectorField2& v, double p, double lambda_min, double lambda_max) {
    double cell = v.grid().dx() * v.grid().dx();
    return tail_of(magnitudes(v), p, tail_lambda_grid(lambda_min, lambda_max), cell);
}

namespace {

template <class FieldT>
LorentzReport report_of(const FieldT& f, double p, double lambda_min, double lambda_max) {
    LorentzReport rep;
    rep.p = p;
    rep.strong_norm = lp_norm(f, p);
    rep.weak_quasinorm = weak_lp_quasinorm(f, p);
    rep.lambda_grid = tail_lambda_grid(lambda_min, lambda_max);
    rep.tail_functional = small_value_tail(f, p, lambda_min, lambda_max);
    return rep;
}

} // namespace

LorentzReport make_lorentz_report(const ScalarField& f, double p, double lambda_min,
                                  double lambda_max) {
    return report_of(f, p, lambda_min, lambda_max);
}

LorentzReport make_lorentz_report(const VectorField2& v, double p, double lambda_min,
                                  double lambda_max) {
    return report_of(v, p, lambda_min, lambda_max);
}

double spacetime_l4_norm_from_values(const std::vector<double>& times,
                                     const std::vector<double>& l4_values) {
    if (times.size() != l4_values.size())
        throw std::invalid_argument("spacetime_l4_norm: times/values size mismatch");
    if (times.size() < 2)
        throw std::invalid_argument("spacetime_l4_norm: need at least two snapshots");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        double dt = times[i + 1] - times[i];
        if (!(dt > 0.0))
            throw std::invalid_argument("spacetime_l4_norm: times must be strictly increasing");
        double a = std::pow(l4_values[i], 4.0);
        double b = std::pow(l4_values[i + 1], 4.0);
        acc += 0.5 * dt * (a + b);
    }
    return std::pow(acc, 0.25);
}

double spacetime_l4_norm(const std::vector<double>& times, const std::vector<VectorField2>& u) {
    if (times.size() != u.size())
        throw std::invalid_argument("spacetime_l4_norm: times/fields size mismatch");
    std::vector<double> vals(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) vals[i] = lp_norm(u[i], 4.0);
    return spacetime_l4_norm_from_values(times, vals);
}

DecaySeries fit_decay(const DecaySeries& series, double window_t_min, double window_t_max) {
    if (series.times.size() != series.values.size())
        throw std::invalid_argument("fit_decay: times/values size mismatch");
    std::vector<double> ts, vs;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        double t = series.times[i];
        if (t >= window_t_min && t <= window_t_max) {
            ts.push_back(t);
            vs.push_back(series.values[i]);
        }
    }
    return fit_samples(std::move(ts), std::move(vs), series.target_exponent);
}

DecaySeries fit_decay(const std::vector<double>& times, const std::vector<double>& values,
                      double target_exponent) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_decay: times/values size mismatch");
    return fit_samples(times, values, target_exponent);
}

void DecaySeries::write_csv(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(fp, "t,value,target_exponent\n");
    for (std::size_t i = 0; i < times.size(); ++i)
        std::fprintf(fp, "%.17g,%.17g,%.17g\n", times[i], values[i], target_exponent);
    std::fclose(fp);
}

void LorentzReport::write(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("cannot open for writing: " + path);
    std::fprintf(fp, "p=%.17g\n", p);
    std::fprintf(fp, "strong_norm=%.17g\n", strong_norm);
    std::fprintf(fp, "weak_quasinorm=%.17g\n", weak_quasinorm);
    std::fprintf(fp, "tail_functional=%.17g\n", tail_functional);
    std::fprintf(fp, "lambda_grid=");
    for (std::size_t i = 0; i < lambda_grid.size(); ++i)
        std::fprintf(fp, "%s%.17g", i ? "," : "", lambda_grid[i]);
    std::fprintf(fp, "\n");
    std::fclose(fp);
}

} // namespace oseen
