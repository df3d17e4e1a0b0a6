//! Exact arithmetic: polynomials over Q, rational functions and series.

mod gcd;
mod mpoly;
pub mod parse;
mod ratfn;
mod var;

pub use gcd::{content, gcd, pseudo_remainder, rational_content};
pub use mpoly::MPoly;
pub use parse::{parse_poly, parse_ratfn};
pub use ratfn::{
    integer_coefficients, is_nonnegative_integral, series_coefficients, series_in_t,
    LaurentMonomial, RatFn,
};
pub use var::Var;
