//! Sparse Laurent polynomials over the integers and the normalized quantum
//! torus over `Z[v, v^{-1}]`, `v = q^{1/2}`.
//!
//! All q-powers are stored as integer exponents of `v`.

mod laurent;
mod quantum;

pub use laurent::{lp_add, lp_div_exact, lp_mul, lp_substitute, LaurentPoly};
pub use quantum::{
    l_apply, qc_bar, qt_monomial_mul, qt_mul, qt_specialize_classical, QCoefficient, QuantumTorus,
    QuantumTorusElement, SkewPairing,
};
