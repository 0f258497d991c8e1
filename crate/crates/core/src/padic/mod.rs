//! p-adic numbers with capped absolute precision, series and linear algebra.

mod functions;
mod matrix;
mod number;
mod series;

pub use functions::{hensel_sqrt, is_square_mod_p, log_iwasawa, sqrt_mod_p, teichmuller};
pub use matrix::{solve_linear, PadicMatrix};
pub use number::{valuation_i64, Padic};
pub use series::{formal_antiderivative, PadicSeries};

pub(crate) use functions::floor_log;
pub(crate) use number::prime_power;
