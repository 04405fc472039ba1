//! Concrete modular building blocks: exact q-expansions of eta quotients,
//! theta functions and the `f⁽⁰⁾`, `f⁽¹⁾`, `g⁽ⁱ⁾` series, plus an independent
//! evaluator of `η` and the Jacobi thetas at arbitrary points of the upper
//! half-plane.

pub mod analytic;
mod series;

pub use series::{
    dense_len, e4, eta_power, f0, f1, g_i, jacobi_theta, theta_a1, EtaQuotient, JacobiTheta,
};
