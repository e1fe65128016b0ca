//! Numeric support: error functions, normal-distribution helpers, and
//! adaptive quadrature. Everything here is pure and thread-safe.

mod erf;
mod normal;
pub mod quad;

pub use erf::{erf, erfc, erfcx};
pub(crate) use normal::LN_SQRT_2PI;
pub use normal::{exp_phi_product, ln_phi, phi, phi_pdf};
