//! Exact rational arithmetic and polynomial algebra.
//!
//! Coefficients are arbitrary-precision rationals throughout, so identities
//! like `Xf = Kf` or cofactor relations are proven, never approximated.
//! Floats only appear in the evaluation helpers used downstream by the
//! numeric layers.

mod bipoly;
mod rat;
mod realroots;
mod series;
mod surd;
mod unipoly;

pub use bipoly::{BiPoly, Var};
pub use rat::{parse_rat, rat, rat_i, rat_string, rat_to_f64, Rat};
pub use realroots::{real_roots, real_roots_in};
pub use series::{
    compose_series, solve_implicit_series, PowerSeries1, SeriesError, DEFAULT_SERIES_ORDER,
    MAX_SERIES_ORDER,
};
pub use surd::{solve_linear_rat, solve_quadratic_rat, Surd};
pub use unipoly::UniPoly;
