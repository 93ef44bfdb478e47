//! Exact computation of the tri-graded character of Feigin-Stoyanovsky-type
//! subspaces of level-k standard affine sl(3) modules, by five independent
//! routes: admissible-configuration enumeration, quasi-particle basis
//! enumeration, and a fermionic sum in three equivalent forms. Agreement of
//! the routes up to a degree cutoff is what the `verify` module certifies.
//!
//! All arithmetic is exact (arbitrary-precision integers); there is no
//! floating point anywhere in the crate.

pub mod admissible;
pub mod cache;
pub mod error;
pub mod fermionic;
pub mod quasiparticle;
pub mod series;
pub mod verify;

pub use admissible::{char_configs, enumerate_admissible, is_admissible, Configuration, Weight};
pub use error::{Error, Result};
pub use fermionic::{
    binom_matrix_det, build_l, build_q, build_r, char_fermionic_georgiev, char_fermionic_m,
    char_fermionic_n, exponent,
};
pub use quasiparticle::{
    char_qp, dmax, dmax_level1, dual_charges, enumerate_basis, minimal_monomial, satisfies_basis,
    ChargeProfile, Color, QPMonomial, QuasiParticle,
};
pub use series::{inv_pochhammer, GradeKey, TriGradedSeries};
pub use verify::{run_characters, verify, Method, VerificationReport};
