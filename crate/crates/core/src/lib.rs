//! Fractional-order PID loop-shaping toolkit.
//!
//! The crate realizes FOPID controllers through Oustaloup's recursive
//! approximation, evaluates mixed H2/H-infinity frequency-domain objectives
//! on an AVR control loop, searches controller parameters with an NSGA-II
//! multi-objective optimizer, and selects fuzzy best-compromise solutions.
//!
//! Layering, bottom up:
//!
//! * [`ratfun`] - polynomial / rational transfer-function algebra
//! * [`fracops`] - fractional powers of s and FOPID realization
//! * [`sysnorms`] - H-infinity and H2 system norms
//! * [`avrloop`] - the AVR loop, sensitivity functions, margins
//! * [`objectives`] - the per-case design objectives and the penalty policy
//! * [`moo`] - NSGA-II, single-objective baseline, fuzzy compromise selection

pub mod avrloop;
pub mod error;
pub mod fracops;
pub mod moo;
pub mod objectives;
pub mod ratfun;
pub mod sysnorms;

pub use error::{Error, Result};
