//! Packets, reconstructions, and the erasure distortion measure.
//!
//! A codeword is a set of `N` packets, each a short vector of symbols, sent
//! over disjoint paths. A reconstruction of a `k`-symbol message may mark
//! individual coordinates as erased; producing a wrong symbol is treated as
//! infinitely bad, which keeps "never guess" decoders honest.

use crate::gf::Symbol;
use crate::ratio::{rat, Distortion};
use crate::{Error, Result};

/// Shape of a packet-level codeword: per-packet lengths plus the symbol
/// alphabet size (alphabets are plain integer ranges; field structure is
/// layered on top where needed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PacketLayout {
    pub lens: Vec<usize>,
    pub alphabet: u32,
}

impl PacketLayout {
    pub fn uniform(n_packets: usize, len: usize, alphabet: u32) -> Self {
        PacketLayout {
            lens: vec![len; n_packets],
            alphabet,
        }
    }

    pub fn n_packets(&self) -> usize {
        self.lens.len()
    }

    pub fn total_symbols(&self) -> usize {
        self.lens.iter().sum()
    }
}

/// One codeword or received word: a vector of packets matching a layout.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PacketSet {
    pub packets: Vec<Vec<Symbol>>,
}

impl PacketSet {
    pub fn new(packets: Vec<Vec<Symbol>>) -> Self {
        PacketSet { packets }
    }

    pub fn n_packets(&self) -> usize {
        self.packets.len()
    }

    /// Checks this packet set against a layout: packet count, per-packet
    /// lengths, and symbol range.
    pub fn validate(&self, layout: &PacketLayout) -> Result<()> {
        if self.packets.len() != layout.n_packets() {
            return Err(Error::LengthMismatch {
                expected: layout.n_packets(),
                got: self.packets.len(),
            });
        }
        for (i, (packet, &len)) in self.packets.iter().zip(&layout.lens).enumerate() {
            if packet.len() != len {
                return Err(Error::LengthMismatch {
                    expected: len,
                    got: packet.len(),
                });
            }
            if let Some(&sym) = packet.iter().find(|&&s| u32::from(s) >= layout.alphabet) {
                return Err(Error::Infeasible(format!(
                    "symbol {sym} in packet {i} outside alphabet of size {}",
                    layout.alphabet
                )));
            }
        }
        Ok(())
    }
}

/// Number of packet positions where the two sets differ.
///
/// This is the distance the adversary model counts: altering one packet in
/// any way moves a codeword by exactly one.
pub fn packet_distance(a: &PacketSet, b: &PacketSet) -> Result<usize> {
    if a.packets.len() != b.packets.len() {
        return Err(Error::LengthMismatch {
            expected: a.packets.len(),
            got: b.packets.len(),
        });
    }
    Ok(a.packets
        .iter()
        .zip(&b.packets)
        .filter(|(x, y)| x != y)
        .count())
}

/// Reconstruction of a message: `None` marks an erased coordinate.
pub type ReconstructionWord = Vec<Option<Symbol>>;

pub fn erasure_count(recon: &[Option<Symbol>]) -> usize {
    recon.iter().filter(|c| c.is_none()).count()
}

pub fn all_erased(k: usize) -> ReconstructionWord {
    vec![None; k]
}

/// Per-message distortion: the erased fraction when every non-erased
/// coordinate matches, infinite as soon as any coordinate mismatches.
pub fn erasure_distortion(x: &[Symbol], recon: &[Option<Symbol>]) -> Result<Distortion> {
    if x.is_empty() {
        return Err(Error::Infeasible("empty message".into()));
    }
    if x.len() != recon.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: recon.len(),
        });
    }
    let mut erased = 0i64;
    for (&xi, ri) in x.iter().zip(recon) {
        match ri {
            None => erased += 1,
            Some(v) if *v == xi => {}
            Some(_) => return Ok(Distortion::Infinite),
        }
    }
    Ok(Distortion::Finite(rat(erased, x.len() as i64)))
}
