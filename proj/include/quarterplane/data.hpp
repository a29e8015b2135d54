#pragma once

// Built-in data library. Each builder declares the decay envelope honestly and
// fills closed-form transform slots where they exist; custom data (from the
// expression layer or user callables) go through the quadrature transforms.

#include <cmath>

#include "quarterplane/common.hpp"
#include "quarterplane/transforms.hpp"

namespace qp::data {

using transforms::HalfLineData;

/// (0, 0, 0)
inline HalfLineData zero() {
    HalfLineData d;
    d.label = "zero";
    d.u0 = [](double) { return 0.0; };
    d.u0_derivs = {[](double) { return 0.0; }, [](double) { return 0.0; },
                   [](double) { return 0.0; }};
    d.g0 = [](double) { return 0.0; };
    d.g0_d1 = [](double) { return 0.0; };
    d.f = [](double, double) { return 0.0; };
    d.g0_bound_const = 0.0;
    return d;
}

/// (0, 1, 0): the unit-step boundary datum of the two worked examples.
inline HalfLineData step() {
    HalfLineData d = zero();
    d.label = "step";
    d.g0_zero = false;
    d.g0 = [](double) { return 1.0; };
    d.g0_d1 = [](double) { return 0.0; };
    d.g0_bound_const = 1.0;
    // int_0^t e^{-w(t-tau)} dtau = t * phi1(-w t)
    d.g0_retarded = [](cplx w, double t) { return t * phi1(-w * t); };
    return d;
}

/// (e^{-x}, e^t, 0): compatible for both model equations; exact solution
/// U(x,t) = e^{t-x}.
inline HalfLineData exp_compat() {
    HalfLineData d = zero();
    d.label = "exp-compat";
    d.u0_zero = false;
    d.g0_zero = false;
    d.u0 = [](double y) { return std::exp(-y); };
    d.u0_derivs = {[](double y) { return -std::exp(-y); },
                   [](double y) { return std::exp(-y); },
                   [](double y) { return -std::exp(-y); }};
    d.g0 = [](double t) { return std::exp(t); };
    d.g0_d1 = [](double t) { return std::exp(t); };
    d.decay_rate = 1.0;
    d.amplitude = 1.0;
    d.g0_bound_const = 1.0;
    d.g0_bound_growth = 1.0;
    d.u0_hat = [](cplx l) { return 1.0 / (1.0 + cplx(0.0, 1.0) * l); };
    d.u0_hat_poles = {cplx(0.0, 1.0)};
    // int_0^t e^{-w(t-tau)} e^tau dtau = e^t t phi1(-(w+1) t)
    d.g0_retarded = [](cplx w, double t) {
        return std::exp(t) * t * phi1(-(w + 1.0) * t);
    };
    return d;
}

/// (e^{-x}, 1, 0): violates the third-order KdV corner condition while
/// satisfying u0(0) = g0(0); solution still evaluable.
inline HalfLineData exp_step() {
    HalfLineData d = exp_compat();
    d.label = "exp-step";
    d.g0 = [](double) { return 1.0; };
    d.g0_d1 = [](double) { return 0.0; };
    d.g0_bound_growth = 0.0;
    d.g0_retarded = [](cplx w, double t) { return t * phi1(-w * t); };
    return d;
}

/// (0, t, e^{-y}(1 - tau)): manufactured datum whose exact solution is
/// U(x,t) = t e^{-x} for both model equations.
inline HalfLineData manufactured_forcing() {
    HalfLineData d = zero();
    d.label = "manufactured-forcing";
    d.g0_zero = false;
    d.f_zero = false;
    d.g0 = [](double t) { return t; };
    d.g0_d1 = [](double) { return 1.0; };
    d.g0_bound_const = 1.0;   // |g0| <= e^t on any window
    d.g0_bound_growth = 1.0;
    // int_0^t e^{-w(t-tau)} tau dtau = t^2 phi2(-w t)
    d.g0_retarded = [](cplx w, double t) {
        const cplx z = -w * t;
        cplx p2;
        if (std::abs(z) < 1e-5) {
            p2 = 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
        } else {
            p2 = (cexpm1(z) - z) / (z * z);
        }
        return t * t * p2;
    };
    d.f = [](double y, double tau) { return std::exp(-y) * (1.0 - tau); };
    d.decay_rate = 1.0;
    d.amplitude = 4.0;  // |1 - tau| <= 4 on the probe window
    d.f_boundary_sup = 4.0;
    d.f_dy_l1 = 4.0;
    d.f_hat = [](cplx l, double tau) {
        return (1.0 - tau) / (1.0 + cplx(0.0, 1.0) * l);
    };
    d.f_hat_poles = {cplx(0.0, 1.0)};
    return d;
}

/// (e^{-x} e^{-tau} forcing only): separable test forcing with closed-form
/// transforms; u0 = g0 = 0.
inline HalfLineData exp_forcing() {
    HalfLineData d = zero();
    d.label = "exp-forcing";
    d.f_zero = false;
    d.f = [](double y, double tau) { return std::exp(-y - tau); };
    d.decay_rate = 1.0;
    d.amplitude = 1.0;
    d.f_boundary_sup = 1.0;
    d.f_dy_l1 = 1.0;
    d.f_hat = [](cplx l, double tau) {
        return std::exp(-tau) / (1.0 + cplx(0.0, 1.0) * l);
    };
    d.f_hat_poles = {cplx(0.0, 1.0)};
    return d;
}

}  // namespace qp::data
