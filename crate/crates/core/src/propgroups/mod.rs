//! Finite quotients of uniform pro-p groups of dimension at most 3, their
//! p-central series, and automorphisms of order prime to p.
//!
//! Elements are coordinate vectors `x^a y^b z^c` reduced modulo `p^n`
//! (see [`FiniteQuotient`]); exact p-adic elements live in [`gamma`].

pub mod auto;
pub mod gamma;
pub mod law;
pub mod linear;
pub mod pcgs;

pub use auto::{
    check_sigma_gamma, fixed_point_profile, fixed_points, frobenius_check, sigma_gamma, FixMode, FixedPoints,
    FrobeniusReport, FrobeniusWitness, GroupAutomorphism, SigmaCheck, SliceFix,
};
pub use gamma::{gamma_comm, gamma_inv, gamma_mul, gamma_pow, gamma_pow_padic, teichmuller_cube_root, GammaElement, GammaParams};
pub use law::{Elem, FiniteQuotient, GroupLaw, ENUMERATION_CAP};
pub use linear::{fpf_charpoly_test, no_fpf_order3_search, FpfCharpoly, MatrixOneUnits, Order3Class, Order3Search};
pub use pcgs::{
    lower_central_series, nilpotency_class, p_central_series, p_central_series_level, uniformity_check,
    NilpotencyReport, PCentralReport, Subgroup, UniformityReport, UniformityWitness,
};
