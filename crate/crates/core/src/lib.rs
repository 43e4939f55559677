//! Exact-arithmetic reproduction of the class of the Brill-Noether locus
//! `M^1_{2k,k}` in the moduli space of stable curves of genus `2k`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`] – big rationals and the factorial helpers.
//! * [`enumerative`] – counts of pencils on general curves and the aggregate
//!   right-hand sides used by the test surfaces.
//! * [`basis`] – the generators of `R^2(M_g)` and class expressions over them.
//! * [`relations`] – the test-surface relations, the matrices `Q_g`, `T_g`
//!   and the right-hand-side vector.
//! * [`solver`] – exact linear algebra (Bareiss and plain Gaussian routes).
//! * [`verify`] – the closed formula, the genus-6 table and every cross-check.
//! * [`cli`] – the `bn2` command-line front end.

pub mod basis;
pub mod cli;
pub mod enumerative;
pub mod exactnum;
pub mod relations;
pub mod solver;
pub mod verify;


pub use basis::{ClassExpression, ClassLabel};
pub use exactnum::{BigInt, BigRational};
pub use solver::RationalMatrix;

