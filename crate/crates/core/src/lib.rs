//! Exact formal arithmetic for zero-cycles on products `C_1 x ... x C_d x A`
//! of curves and an abelian variety, and for the symmetric symbol groups they
//! map to.
//!
//! Everything here is integer-exact. Extension fields are modelled by the
//! divisibility lattice of positive integers (see [`lattice`]); Galois
//! conjugation is trivial, so a closed point is determined by its coordinates
//! and its minimal level.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod cycles;
pub mod filtration;
pub mod formal;
pub mod hnf;
pub mod lattice;
pub mod models;
pub mod symbols;

use alloc::string::String;
use core::fmt;

pub use formal::{Coeff, FormalSum};
pub use lattice::ExtLevel;

/// Errors raised by the core operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// `lower` does not divide `upper`.
    NotATower { upper: u64, lower: u64 },
    InvalidLevel(u64),
    NonZeroDegree { degree: i64 },
    /// A point or value is not defined at the requested level.
    LevelMismatch { what: String, level: u64, required: u64 },
    /// A curve coordinate was present where only abelian-variety points are allowed.
    MixedSupport,
    BaseMismatch { left: u64, right: u64 },
    WrongDimension { expected: u32, found: u32 },
    /// Operation is only defined over the ground level.
    BaseNotGround { base: u64 },
    DegreeCheckFailed { degree: i64 },
    UnknownPoint(String),
    UnknownAtom(String),
    UnknownCurve(usize),
    MissingMap { from: u64, to: u64 },
    /// Inconsistent vector lengths, tuple arities, etc.
    Shape(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotATower { upper, lower } => {
                write!(f, "level {lower} does not divide level {upper}")
            }
            Error::InvalidLevel(n) => write!(f, "invalid extension level {n}"),
            Error::NonZeroDegree { degree } => write!(f, "divisor has nonzero degree {degree}"),
            Error::LevelMismatch { what, level, required } => {
                write!(f, "{what} needs level divisible by {required}, got {level}")
            }
            Error::MixedSupport => write!(f, "cycle has curve coordinates; expected a pure abelian-variety cycle"),
            Error::BaseMismatch { left, right } => write!(f, "base levels differ: {left} vs {right}"),
            Error::WrongDimension { expected, found } => {
                write!(f, "abelian model has dimension {found}, operation needs {expected}")
            }
            Error::BaseNotGround { base } => write!(f, "expected a cycle over level 1, got base {base}"),
            Error::DegreeCheckFailed { degree } => {
                write!(f, "weighted order sum is {degree}, expected 0")
            }
            Error::UnknownPoint(p) => write!(f, "unknown point `{p}`"),
            Error::UnknownAtom(a) => write!(f, "unknown atom `{a}`"),
            Error::UnknownCurve(i) => write!(f, "no curve with index {i}"),
            Error::MissingMap { from, to } => write!(f, "no map configured between levels {from} and {to}"),
            Error::Shape(msg) => f.write_str(msg),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
