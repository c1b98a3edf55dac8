//! Modified Lommel functions of the first kind and bounds for the weighted
//! integral `∫₀ˣ e^{−βu} u^ν t̃_{μ,ν}(u) du`.
//!
//! The crate is organised bottom-up:
//!
//! * [`gamma`]: reciprocal gamma with the pole convention, log-gamma, and the
//!   lower incomplete gamma function (plain and log-scaled).
//! * [`lommel`]: the normalised function `t̃_{μ,ν}`, its unnormalised form,
//!   the modified Struve function, and the structural identities and
//!   asymptotics they satisfy.
//! * [`quadrature`]: adaptive Gauss–Kronrod (7/15) integration.
//! * [`integral`]: the weighted integral by quadrature, by the `β = 1` closed
//!   form, and by a term-wise incomplete-gamma series, plus the normalised
//!   integral `F`.
//! * [`bounds`]: every upper and lower bound with exact hypothesis gating.
//! * [`verify`]: grid sweeps, table reproduction and asymptotic checks that
//!   back the `lommel` command line tool.

pub mod bounds;
pub mod error;
pub mod gamma;
pub mod integral;
pub mod lommel;
pub mod quadrature;
pub mod verify;

pub use error::{NumericError, Result};
pub use integral::IntegralSpec;
pub use lommel::{EvalResult, LommelParams};
