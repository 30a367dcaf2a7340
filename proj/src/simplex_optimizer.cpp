#include "sdmt/simplex_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>

#include "sdmt/errors.hpp"

namespace sdmt {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Barycentric weights v -> ordered point x. Vertex j (0-based) is
// (total / (j+1)) * (1, .., 1, 0, ..) with j+1 leading ones.
void to_point(const Vec& v, double total, Vec& x) {
    const std::size_t n = v.size();
    double tail = 0.0;
    for (std::size_t l = n; l-- > 0;) {
        tail += total * v[l] / static_cast<double>(l + 1);
        x[l] = tail;
    }
}

Vec to_barycentric(std::span<const double> x, double total) {
    const std::size_t n = x.size();
    Vec v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double next = j + 1 < n ? x[j + 1] : 0.0;
        v[j] = static_cast<double>(j + 1) * (x[j] - next) / total;
    }
    project_to_unit_simplex(v);
    return v;
}

// Chain rule through to_point: dF/dv_j = total/(j+1) * sum_{l<=j} dF/dx_l.
void to_barycentric_gradient(const Vec& grad_x, double total, Vec& grad_v) {
    double prefix = 0.0;
    for (std::size_t j = 0; j < grad_x.size(); ++j) {
        prefix += grad_x[j];
        grad_v[j] = total * prefix / static_cast<double>(j + 1);
    }
}

double projected_gradient_norm(const Vec& v, const Vec& grad, Vec& scratch) {
    for (std::size_t i = 0; i < v.size(); ++i) scratch[i] = v[i] - grad[i];
    project_to_unit_simplex(scratch);
    double norm = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) norm = std::max(norm, std::abs(scratch[i] - v[i]));
    return norm;
}

}  // namespace

void project_to_unit_simplex(std::span<double> v) {
    Vec sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double threshold = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i];
        const double candidate = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - candidate > 0.0) threshold = candidate;
    }
    for (double& x : v) x = std::max(x - threshold, 0.0);
}

SimplexSolution minimize_on_ordered_simplex(const SimplexObjective& objective,
                                            std::span<const double> start, double total,
                                            const SimplexOptions& options) {
    const std::size_t n = start.size();
    if (n == 0 || !(total > 0.0)) throw DomainError("ordered simplex: empty problem");

    constexpr int kMemory = 10;
    constexpr double kArmijo = 1e-4;
    constexpr double kStepMin = 1e-30;
    constexpr double kStepMax = 1e30;

    Vec v = to_barycentric(start, total);
    Vec x(n), grad_x(n), grad(n), scratch(n);
    auto evaluate = [&](const Vec& point, Vec& g) {
        to_point(point, total, x);
        const double f = objective(x, grad_x);
        to_barycentric_gradient(grad_x, total, g);
        return f;
    };

    double f = evaluate(v, grad);
    if (!std::isfinite(f)) throw OptimizerError("ordered simplex: objective not finite at start");

    std::deque<double> history{f};
    SimplexSolution out;
    double pg = projected_gradient_norm(v, grad, scratch);
    double step = pg > 0.0 ? std::clamp(1.0 / pg, kStepMin, kStepMax) : 1.0;

    Vec d(n), trial(n), trial_grad(n);
    int it = 0;
    for (; it < options.max_iterations && pg > options.stationarity_tolerance; ++it) {
        for (std::size_t i = 0; i < n; ++i) d[i] = v[i] - step * grad[i];
        project_to_unit_simplex(d);
        for (std::size_t i = 0; i < n; ++i) d[i] -= v[i];
        const double slope = dot(grad, d);
        const double f_ref = *std::max_element(history.begin(), history.end());

        double alpha = 1.0;
        double f_trial = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] + alpha * d[i];
            f_trial = evaluate(trial, trial_grad);
            const bool armijo = f_trial <= f_ref + kArmijo * alpha * slope;
            // Below round-off the decrease test is meaningless; trust the gradient.
            const bool flat = std::isfinite(f_trial) &&
                              std::abs(f_trial - f) <= 16.0 * std::numeric_limits<double>::epsilon() *
                                                           std::max(1.0, std::abs(f));
            if (armijo || flat) {
                accepted = true;
                break;
            }
            double next = 0.5 * alpha;
            if (std::isfinite(f_trial)) {
                const double denom = f_trial - f - alpha * slope;
                if (denom > 0.0) {
                    const double quad = -0.5 * alpha * alpha * slope / denom;
                    if (quad >= 0.1 * alpha && quad <= 0.9 * alpha) next = quad;
                }
            }
            alpha = next;
        }
        if (!accepted) break;

        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = trial[i] - v[i];
            const double y = trial_grad[i] - grad[i];
            ss += s * s;
            sy += s * y;
        }
        v.swap(trial);
        grad.swap(trial_grad);
        f = f_trial;
        history.push_back(f);
        if (history.size() > kMemory) history.pop_front();
        step = sy > 0.0 ? std::clamp(ss / sy, kStepMin, kStepMax) : kStepMax;
        pg = projected_gradient_norm(v, grad, scratch);
    }

    to_point(v, total, x);
    out.x = x;
    out.value = f;
    out.stationarity = pg;
    out.iterations = it;
    out.converged = pg <= options.stationarity_tolerance;
    return out;
}

}  // namespace sdmt
