//! The encoder/decoder interface every packet code in this crate
//! implements, plus its parameter tuple.

use num::{One, Zero};

use crate::gf::Symbol;
use crate::packet::{PacketLayout, PacketSet, ReconstructionWord};
use crate::ratio::Rational;
use crate::sweep;
use crate::{Error, Result};

/// Parameters of a packet code together with its adversary budget: N
/// packets carry a k-symbol message at per-packet rate R, and up to T
/// altered packets must cost at most a D fraction of erasures, never a
/// wrong symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct VpecParams {
    /// Packet count N.
    pub packets: usize,
    /// Source message length k.
    pub message_len: usize,
    /// Per-packet rate R: packet length over k.
    pub rate: Rational,
    /// Distortion budget D in [0, 1].
    pub distortion: Rational,
    /// Adversary budget T.
    pub errors: usize,
}

impl VpecParams {
    pub fn validate(&self) -> Result<()> {
        if self.packets == 0 || self.message_len == 0 {
            return Err(Error::Infeasible("empty code".into()));
        }
        if self.errors >= self.packets {
            return Err(Error::Infeasible(format!(
                "error budget {} must be below the packet count {}",
                self.errors, self.packets
            )));
        }
        if self.distortion < Rational::zero() || self.distortion > Rational::one() {
            return Err(Error::Infeasible(format!(
                "distortion budget {} outside [0, 1]",
                self.distortion
            )));
        }
        Ok(())
    }
}

/// A code that spreads a k-symbol message over N packets and
/// reconstructs it, marking unrecoverable coordinates as erasures.
pub trait VpecCode {
    fn layout(&self) -> PacketLayout;
    fn message_len(&self) -> usize;
    fn params(&self) -> VpecParams;
    fn encode(&self, msg: &[Symbol]) -> Result<PacketSet>;
    fn decode(&self, received: &PacketSet) -> Result<ReconstructionWord>;

    /// Number of distinct messages.
    fn message_space(&self) -> u128 {
        sweep::space_size(self.layout().alphabet, self.message_len())
    }
}
