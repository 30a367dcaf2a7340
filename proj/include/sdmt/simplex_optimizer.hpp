#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sdmt {

// Minimization over the ordered simplex
//     { x : x[0] >= x[1] >= ... >= x[n-1] >= 0, sum(x) = total }.
//
// The set is the convex hull of the vertices (total/j)(1,..,1,0,..,0), so the
// solver works in barycentric coordinates on the standard simplex and runs a
// spectral projected gradient method (Barzilai-Borwein steps, nonmonotone
// Armijo search). The objective may return +inf to mark points outside its
// domain; those trial steps are rejected by the line search.

// Returns f(x) and writes df/dx into grad (same length as x).
using SimplexObjective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct SimplexOptions {
    int max_iterations = 10'000;
    // Infinity norm of P(v - grad_v) - v in barycentric coordinates.
    double stationarity_tolerance = 1e-8;
};

struct SimplexSolution {
    std::vector<double> x;
    double value = 0.0;
    double stationarity = 0.0;
    int iterations = 0;
    bool converged = false;
};

SimplexSolution minimize_on_ordered_simplex(const SimplexObjective& objective,
                                            std::span<const double> start, double total,
                                            const SimplexOptions& options = {});

// Euclidean projection onto { v >= 0, sum(v) = 1 }.
void project_to_unit_simplex(std::span<double> v);

}  // namespace sdmt
