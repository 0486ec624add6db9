//! Exact analysis of Moran measures with consecutive digits.
//!
//! A Moran measure `μ = δ_{ρD_1} * δ_{ρ²D_2} * ...` is built from a
//! contraction `ρ = (p/q)^(1/r)` and prime digit cardinalities `N_n`, with
//! `D_n = {0, ..., N_n - 1}`. This crate decides membership in the zero set
//! of `μ̂` exactly, verifies and searches for mutually orthogonal exponential
//! families, builds the explicit extremal families, classifies measures by
//! how large their orthogonal families can get, and evaluates `μ̂`
//! numerically with certified error bounds.
//!
//! ```
//! use moran::{measure::MoranMeasure, ortho::{classify, Regime}};
//!
//! let m: MoranMeasure = "p = 1\nq = 2\nr = 1\nperiod = [3]".parse().unwrap();
//! assert_eq!(classify(&m).regime, Regime::AtMostM(3));
//! ```

pub mod error;
pub mod exact;
pub mod fourier;
pub mod freq;
pub mod measure;
pub mod ortho;
pub mod real;
pub mod zeros;

pub use error::{Error, Result};
pub use freq::{Frequency, ZeroWitness};
pub use measure::{ContractionRatio, DigitSequence, MoranMeasure};

/// Guide chapters, compiled so their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/measures.md")]
    mod measures {}
    #[doc = include_str!("../../../book/src/frequencies.md")]
    mod frequencies {}
    #[doc = include_str!("../../../book/src/zeros.md")]
    mod zeros {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/fourier.md")]
    mod fourier {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
