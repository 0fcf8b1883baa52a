//! Exact cycle indicators of the symmetric groups, Meixner polynomials, and
//! mechanical checks of their p-adic congruences.
//!
//! ```
//! use cyclopadic::{cycle_indicator, PadicContext};
//! use cyclopadic::congruences::check_prop_poly;
//! use cyclopadic::targets::ExactTargets;
//!
//! assert_eq!(cycle_indicator(3).to_string(), "X1^3 + 3*X1*X2 + 2*X3");
//!
//! let ctx = PadicContext::new(3).unwrap();
//! let report = check_prop_poly(1, 2, &ctx, &ExactTargets::new()).unwrap();
//! assert!(report.passed());
//! ```

pub mod congruences;
pub mod cycle_index;
pub mod error;
pub mod harness;
pub mod meixner;
pub mod padic;
pub mod poly;
pub mod report;
pub mod targets;

pub use cycle_index::{coefficient, cycle_indicator, enumerate_cycle_types, CycleType};
pub use error::{Error, Result};
pub use meixner::{meixner_q, meixner_qstar, MeixnerPair};
pub use padic::{PadicContext, Valuation};
pub use poly::{congruent_mod, Monomial, MultiPoly, RationalSeries, UniPoly};
pub use report::{CongruenceReport, Relation, Violation};

// Every chapter of the book is a doc comment here, so its examples run with
// `cargo test --doc`.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/padic.md")]
    mod padic {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/cycle-index.md")]
    mod cycle_index {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    mod congruences {}
    #[doc = include_str!("../../../book/src/meixner.md")]
    mod meixner {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
