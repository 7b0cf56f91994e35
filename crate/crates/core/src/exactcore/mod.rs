//! Exact scalar, series and rational-function arithmetic.

pub mod euler;
pub mod laurent;
pub mod poly;
pub mod ratfun;
pub mod ring;
pub mod scalar;
pub mod series;
pub mod tpoly;

pub use euler::{euler_expand, macmahon_series, q_prefactor_series, ratfun_shift, Sign};
pub use laurent::{Laurent, RSeries};
pub use poly::Poly;
pub use ratfun::RatFun;
pub use ring::Ring;
pub use scalar::{fmt_rat, parse_rat, rat, ratio, QParams, Rat, RatStr};
pub use series::GradedSeries;
pub use tpoly::TPoly;

/// Truncated Laurent series in `x` whose coefficients are `Q`-graded.
pub type LaurentX = Laurent<GradedSeries<Rat>>;
