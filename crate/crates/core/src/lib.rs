//! Machine words as truncated 2-adic integers.
//!
//! The crate is organised bottom-up:
//!
//! - [`word`]: fixed-precision residues modulo `2^n` with the arithmetic and
//!   bitwise instruction set of a processor.
//! - [`expr`]: a small expression language for T-functions (parser,
//!   evaluator, compatibility classifier, coordinate ANF).
//! - [`verdicts`]: measure-preservation and ergodicity criteria, each paired
//!   with a brute-force oracle.
//! - [`genlib`]: maximal-period generator constructions and the bit stream
//!   they emit.
//! - [`seqstats`]: exact distribution diagnostics over produced sequences.
//!
//! Everything here is `no_std` + `alloc`; IO, CLI and file formats live in
//! the companion `padic-ergo` crate.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::should_implement_trait)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod expr;
pub mod genlib;
pub mod seqstats;
pub mod verdicts;
pub mod word;

pub use error::{Error, Result};
pub use expr::{CompatClass, Compiled, TExpr};
pub use verdicts::{Assessment, Outcome, Property, Verdict, Witness};
pub use word::{Dyadic, Valuation, Word2};

/// Default limit on the number of states a brute-force enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 24;
