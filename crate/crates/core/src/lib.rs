//! Numerical toolkit for the real initial-value problem of the Painleve II
//! equation `q'' = 2 q^3 + t q`, `q(0) = a`, `q'(0) = b`.

pub mod acceptance;
pub mod classifier;
pub mod cli;
pub mod connection;
pub mod pii_ode;
pub mod quadrature;
pub mod specfun;
pub mod stokes_numeric;
