//! Measure-preservation and ergodicity criteria with checkable witnesses.
//!
//! Every closed-form criterion here has a brute-force counterpart in
//! [`brute`] against which the test suites validate it.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

mod anf;
pub mod brute;
mod derivative;
mod mahler;
pub mod poly;
mod sigma;
mod special;

pub use anf::check_anf_ergodic;
pub use brute::{
    bijective_by, brute_balanced, brute_bijective, brute_compatible, brute_transitive,
    compatible_by, transitive_by,
};
pub use derivative::{
    check_ergodic_via_derivative, check_mp_via_derivative, estimate_uniformity_threshold,
    numeric_derivative_mod2k, Derivative,
};
pub use mahler::{check_mahler_ergodic, check_mahler_mp, mahler_coeffs, MahlerCoeffs};
pub use poly::{
    check_poly_factorial, check_poly_lowmod, check_qpoly, check_rivest, monomial_to_factorial,
};
pub use sigma::{sigma_table, BoundViolation, SigmaBound, SigmaTable};
pub use special::{
    check_special_digit_weighted, check_special_xor_affine, check_xor_add_cascade,
    digit_weighted_expr, xor_add_cascade_expr, xor_affine_expr,
};

/// Elements of a cycle or permutation are listed up to this length; longer
/// traces keep only their length and digest.
pub const TRACE_LIMIT: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    MeasurePreserving,
    Ergodic,
    Balanced,
}

impl Property {
    pub fn as_str(self) -> &'static str {
        match self {
            Property::MeasurePreserving => "measure-preserving",
            Property::Ergodic => "ergodic",
            Property::Balanced => "balanced",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Holds,
    Fails,
    NotApplicable,
}

impl Outcome {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::NotApplicable => "not-applicable",
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sequence of residues, listed in full when short.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub length: u64,
    pub elements: Option<Vec<u64>>,
    /// FNV-1a over the little-endian encoding of every element.
    pub digest: u64,
}

/// Incremental builder for a [`Trace`].
#[derive(Debug, Clone)]
pub struct TraceBuilder {
    length: u64,
    elements: Vec<u64>,
    digest: u64,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

impl Default for TraceBuilder {
    fn default() -> Self {
        TraceBuilder {
            length: 0,
            elements: Vec::new(),
            digest: FNV_OFFSET,
        }
    }
}

impl TraceBuilder {
    pub fn push(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.digest = (self.digest ^ b as u64).wrapping_mul(FNV_PRIME);
        }
        if self.elements.len() < TRACE_LIMIT {
            self.elements.push(v);
        }
        self.length += 1;
    }

    pub fn finish(self) -> Trace {
        let full = self.length as usize <= TRACE_LIMIT;
        Trace {
            length: self.length,
            elements: full.then_some(self.elements),
            digest: self.digest,
        }
    }
}

/// Evidence attached to a [`Verdict`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// The orbit of 0, closing after exactly `modulus` steps.
    Cycle(Trace),
    /// The images `f(0), f(1), …` of a bijection.
    Permutation(Trace),
    /// Two inputs with the same image.
    Collision { x: u64, y: u64, image: u64 },
    /// The orbit of 0 returns to 0 after `steps < modulus` iterations.
    PrematureReturn { steps: u64, modulus: u64 },
    /// `quantity = residue (mod modulus)` where `expected` was required.
    Congruence {
        quantity: String,
        index: u64,
        residue: u128,
        modulus: u128,
        expected: u128,
    },
    /// An output tuple whose preimage count differs from the common value.
    Fiber {
        output: Vec<u64>,
        preimages: u128,
        expected: u128,
    },
    /// Inputs `x ≡ y (mod 2^r)` whose images differ modulo `2^r`.
    Lipschitz { x: u64, y: u64, r: u32, fx: u64, fy: u64 },
    /// A coordinate function whose normal form violates the criterion.
    Coordinate { index: u32, anf: String },
    /// Every checked condition was met.
    Conditions(String),
    Reason(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub criterion: &'static str,
    pub property: Property,
    pub outcome: Outcome,
    pub witness: Witness,
    /// Short description of the mathematical statement the criterion rests on.
    pub basis: &'static str,
    /// Qualifications such as decidability limits or heuristic inputs.
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn new(
        criterion: &'static str,
        property: Property,
        outcome: Outcome,
        witness: Witness,
        basis: &'static str,
    ) -> Self {
        Verdict {
            criterion,
            property,
            outcome,
            witness,
            basis,
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn fails(&self) -> bool {
        self.outcome == Outcome::Fails
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Paired verdicts for the two properties most criteria decide together.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assessment {
    pub measure_preserving: Verdict,
    pub ergodic: Verdict,
}

impl Assessment {
    pub fn verdicts(&self) -> [&Verdict; 2] {
        [&self.measure_preserving, &self.ergodic]
    }
}

pub(crate) fn congruence(
    quantity: impl Into<String>,
    index: u64,
    residue: u128,
    modulus: u128,
    expected: u128,
) -> Witness {
    Witness::Congruence {
        quantity: quantity.into(),
        index,
        residue,
        modulus,
        expected,
    }
}
