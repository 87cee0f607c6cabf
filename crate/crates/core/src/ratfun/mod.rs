//! Real-coefficient polynomial and rational transfer-function algebra.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so the whole module is safe for unrestricted
//! concurrent use.

mod factored;
mod poly;
mod rational;
mod roots;
mod ss;

pub use factored::FactoredTF;
pub use poly::Polynomial;
pub use rational::{is_stable, stable_roots, tf_connect, Connection, Properness, RationalTF};
pub use roots::{poly_roots, root_residual};
pub use ss::{tf_to_ss, StateSpace};
