#pragma once

// Scalar special functions. Incomplete gammas take integer shape only; every
// shape that appears in the outage bounds is an integer, so the finite
// sums below are exact rather than continued-fraction approximations.

namespace sdmt {

// P(a, x) = 1/(a-1)! * int_0^x t^(a-1) e^-t dt, the CDF of a Gamma(a, 1)
// variable (sum of a unit exponentials).
double reg_lower_inc_gamma(double x, int a);

// log P(a, x), accurate when P underflows (x -> 0). Returns -inf at x = 0.
double log_reg_lower_inc_gamma(double x, int a);

// log of the Gamma(a, 1) density x^(a-1) e^-x / (a-1)!; -inf at x = 0 for a > 1.
double log_gamma_density(double x, int a);

// Gaussian tail probability Q(x).
double gauss_q(double x);

// log Q(x), finite far into the tail where Q underflows.
double log_gauss_q(double x);

// E_n(x) = int_1^inf e^(-x t) / t^n dt, x > 0.
double exp_integral_en(int n, double x);

// Upper incomplete gamma Gamma(a, z) = int_z^inf t^(a-1) e^-t dt for any
// integer a, z > 0.
double upper_inc_gamma_int(int a, double z);

// Generalized Laguerre polynomial L_n^alpha(x).
double laguerre(int n, int alpha, double x);

}  // namespace sdmt
