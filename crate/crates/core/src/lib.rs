//! Exact apolarity and real Waring ranks of binary forms.
//!
//! A binary form of degree `d` is stored as its coefficient vector against
//! the monomials `x^i y^(d-i)`. The crate computes apolar ideals through
//! catalecticant kernels, decides real-rootedness with Sturm sequences,
//! searches real Waring ranks with per-degree evidence, and constructs
//! forms of every typical real rank `(d, m)` together with a certificate
//! chain that [`verify`] can replay.
//!
//! Every verdict-producing path uses exact rational arithmetic.

pub mod apolarity;
pub mod decompose;
pub mod doc;
mod error;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rank;
pub mod rat;
pub mod rng;
pub mod roots;
pub mod verify;
pub mod witness;

pub use error::Error;
pub use poly::BinaryForm;
pub use rat::Rat;

pub type Result<T, E = Error> = std::result::Result<T, E>;
