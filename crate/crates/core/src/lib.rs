//! Coding for messages split across parallel packets when an adversary may
//! alter a bounded number of them.
//!
//! A message of `k` symbols is encoded into `N` packets sent over disjoint
//! paths. Up to `T` packets may be replaced by arbitrary values. The decoder
//! must reproduce the message exactly when nothing was altered, and otherwise
//! may erase a bounded fraction `D` of message symbols but must never output
//! a wrong symbol. This crate provides:
//!
//! * exact-rational distortion accounting ([`packet`]),
//! * finite-field and linear-code machinery, including list-decoding
//!   verification and a randomized search for codes with strong list-decoding
//!   radius ([`gf`], [`lincode`]),
//! * interleaved codes with an iterative row-by-row list decoder
//!   ([`interleave`]),
//! * two concrete packet-code constructions ([`lmds_vpec`], [`rep_vpec`]),
//! * converse bounds and achievable rate-distortion curves ([`bounds`]),
//! * adversary simulation and an exhaustive reference verifier
//!   ([`adversary`], [`reference`]),
//! * JSON/CSV interchange formats ([`serial`]) used by the `vpec` CLI.

pub mod adversary;
pub mod bounds;
pub mod code;
pub mod gf;
pub mod interleave;
pub mod lincode;
pub mod lmds_vpec;
pub mod packet;
pub mod ratio;
pub mod reference;
pub mod rep_vpec;
pub mod serial;
pub mod sweep;

/// Cap on the number of cases an exhaustive enumeration may visit.
///
/// Every operation that enumerates a space whose size depends on caller
/// parameters (codeword sweeps, received-word sweeps, corruption sweeps)
/// charges its case count against this budget up front and fails fast with
/// [`Error::Budget`] instead of silently running for hours.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub enumeration: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            enumeration: 10_000_000,
        }
    }
}

impl Budget {
    pub fn new(enumeration: u64) -> Self {
        Budget { enumeration }
    }

    pub fn unlimited() -> Self {
        Budget {
            enumeration: u64::MAX,
        }
    }

    /// Fails if a sweep of `needed` cases would exceed the budget.
    pub fn charge(&self, needed: u128) -> Result<()> {
        if needed > self.enumeration as u128 {
            Err(Error::Budget {
                needed,
                limit: self.enumeration,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Parameters outside the domain of the requested operation.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    /// Multiplicative inverse of the zero field element.
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// An enumeration would visit more cases than the configured budget.
    #[error("enumeration budget exceeded: {needed} cases, budget {limit}")]
    Budget { needed: u128, limit: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    /// A randomized search ran out of candidates without a hit.
    #[error("search exhausted after {iterations} candidates")]
    SearchExhausted { iterations: u64 },
    /// A check found a counterexample to a property that was asserted to hold.
    #[error("property violation: {0}")]
    PropertyViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
