//! Polynomial arithmetic: dense integer polynomials, polynomials over F_p,
//! generalized polynomials with ell-adic exponents, and matrices over them.

mod fp;
mod genpoly;
mod intpoly;
mod matrix;

pub use fp::FpPoly;
pub use genpoly::GenPoly;
pub use intpoly::{cyclotomic, cyclotomic_prime_power, resultant, resultant_multimodular, unit_root_factor, IntPoly};
pub use matrix::{charpoly_berkowitz, det_berkowitz, det_cofactor, voltage_matrix, GenPolyMatrix, Ring};
