//! Exact arithmetic for the large sieve over imaginary quadratic extensions
//! of `F_q(t)`.

pub mod cyclo;
pub mod error;
pub mod field;
pub mod lattice;
pub mod polyring;
pub mod quadext;
pub mod sieve;

pub use cyclo::Cyclo;
pub use error::{Error, Result};
pub use field::{CharSum, FieldSpec, FiniteField, Fq};
pub use polyring::{Poly, PolyRing, RatFun, Valuation};
pub use quadext::{AlphaSpec, QuadInt, QuadOrder, QuadRat, ResidueSystem};
pub use lattice::{fourier_ball, poisson_check, BallIndicator, Lattice2, PoissonOutcome, QScaled};
pub use sieve::{
    big_t, inner_sum, kappa, m_thresholds, sieve_report, sigma_linear, tau_divisors, theorem_rhs, u_sum,
    weyl_identity_check, CoeffFamily, CoeffKind, ModuliKind, ModuliSet, SieveReport,
};
