//! Exact q-series engine over Q(w).
//!
//! * [`coeffring`]: rationals and the cyclotomic field Q(w), w^3 = 1.
//! * [`laurent`]: truncated Laurent series in `q` and q-Pochhammer products.
//! * [`vwp`]: the very-well-poised multisum, its product side, the
//!   `A_{k,i}` recursion, the bilateral sums `F_k` and related checks.
//! * [`catalog`]: every named identity with independent left and right
//!   builders and a coefficient-by-coefficient verifier.
//! * [`combinat`]: brute-force overpartition and overpartition-pair counts.
//! * [`cli`]: the command-line front end.

pub mod catalog;
pub mod cli;
pub mod coeffring;
pub mod combinat;
pub mod error;
pub mod laurent;
pub mod sums;
pub mod vwp;

pub use coeffring::{CycRat, Rat};
pub use error::{QsError, Result};
pub use laurent::{poch_finite, poch_infinite, LaurentSeries, ParamValue};
