//! Exact noncommutative Poisson geometry over the rationals.
//!
//! The crate works with graded quiver path algebras over the semisimple base
//! `S = ⊕ K e_i`. Words compose right-to-left: a word `u v` is nonzero exactly
//! when `s(u) = t(v)`, so `e_{t(a)} a e_{s(a)} = a` for every arrow `a`.
//!
//! Module map:
//! - [`lin`], [`sign`], [`linalg`]: rational linear combinations, the Koszul
//!   sign engine and sparse exact elimination.
//! - [`quiver`], [`expr`]: quivers, doubling, the input document format and
//!   the expression grammar.
//! - [`ncalg`]: words, path-algebra elements, tensor powers and necklaces.
//! - [`dbracket`]: double brackets, the double Jacobi identity, induced Loday
//!   brackets, the necklace bracket and moment maps.
//! - [`cotangent`]: the noncommutative cotangent algebra and Maurer–Cartan checks.
//! - [`hamred`]: Hamiltonian reduction by truncated normal forms.
//! - [`extension`]: Poisson extensions by a formal variable `t`.
//! - [`rep`]: representation schemes, trace maps and the reduction cube.
//! - [`barcobar`]: bar/cobar constructions, the Connes complex and the Lie
//!   bracket on reduced cyclic homology.
//! - [`report`]: verification reports shared by the suites.

pub mod barcobar;
pub mod cotangent;
pub mod dbracket;
pub mod error;
pub mod expr;
pub mod extension;
pub mod hamred;
pub mod lin;
pub mod linalg;
pub mod ncalg;
pub mod quiver;
pub mod rep;
pub mod report;
pub mod sample;
pub mod sign;

pub use error::{Error, Result};
pub use lin::{Lin, Q};
