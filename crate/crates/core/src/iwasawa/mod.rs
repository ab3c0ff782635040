//! Modules over `Λ = Z_p[[T]]`: Weierstrass preparation, coinvariants along
//! the cyclotomic-style tower `Γ_n = Γ^{p^n}`, and the invariants `r, μ, λ, ν`.

mod module;
mod parse;
mod series;

pub use module::{
    coinvariant_growth, fit_invariants, GrowthRow, GrowthTable, InvariantFit, ModulePresentation, COINVARIANT_CAP,
};
pub use parse::{parse_module, parse_series, PARSE_PRECISION};
pub use series::{weierstrass_prepare, LambdaSeries, Preparation};
