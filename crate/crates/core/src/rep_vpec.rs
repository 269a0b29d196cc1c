//! A repetition-style packet code on N = 2T+1 packets: packet j carries
//! the message with a cyclic window of s coordinates removed, so every
//! coordinate survives in 2T+1-s packets. Decoding is majority voting
//! per coordinate, followed by pairwise cross-examination of unresolved
//! coordinates, and finally erasure of whatever remains (at most s
//! coordinates, giving distortion at most s/(2T+1) and never a wrong
//! symbol under at most T altered packets).
//!
//! Works over any alphabet of at least two symbols; no field structure
//! is used.

use std::collections::BTreeSet;

use crate::code::{VpecCode, VpecParams};
use crate::gf::Symbol;
use crate::packet::{PacketLayout, PacketSet, ReconstructionWord};
use crate::ratio::rat;
use crate::{Error, Result};

/// The windowed-repetition code with parameters T (alterable packets)
/// and s (window width, 1 ≤ s ≤ T) over an integer alphabet.
#[derive(Clone, Debug)]
pub struct RepVpecCode {
    t: usize,
    s: usize,
    n: usize,
    alphabet: u32,
}

/// Candidate values for one message coordinate, one per packet that
/// carries it, with the contributing packet indices kept for diagnosis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateMultiset {
    /// The message coordinate these candidates estimate.
    pub coordinate: usize,
    /// Contributing packet indices, aligned with `values`.
    pub packets: Vec<usize>,
    pub values: Vec<Symbol>,
}

impl CandidateMultiset {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Number of occurrences of `v`.
    pub fn frequency(&self, v: Symbol) -> usize {
        self.values.iter().filter(|&&x| x == v).count()
    }

    /// A maximizer of frequency, ties broken by smallest symbol value.
    /// A majority-vote pass handles the common case where one value holds
    /// a strict majority; otherwise a full tally decides.
    pub fn most_frequent(&self) -> (Symbol, usize) {
        assert!(!self.values.is_empty(), "no candidates to vote on");
        let mut leader = self.values[0];
        let mut lead = 0usize;
        for &v in &self.values {
            if lead == 0 {
                leader = v;
                lead = 1;
            } else if v == leader {
                lead += 1;
            } else {
                lead -= 1;
            }
        }
        let count = self.frequency(leader);
        if 2 * count > self.values.len() {
            return (leader, count);
        }
        let mut sorted = self.values.clone();
        sorted.sort_unstable();
        let mut best = sorted[0];
        let mut best_count = 0;
        let mut at = 0;
        while at < sorted.len() {
            let run_start = at;
            while at < sorted.len() && sorted[at] == sorted[run_start] {
                at += 1;
            }
            if at - run_start > best_count {
                best = sorted[run_start];
                best_count = at - run_start;
            }
        }
        (best, best_count)
    }
}

/// Verdicts from cross-examining a pair of unresolved coordinates: for
/// each side, `estimates` holds the frequency-maximizing candidate,
/// `reject[l]` is evidence that estimate l is wrong (so the other side's
/// cross candidates are trustworthy), and `accept[l]` supports committing
/// estimate l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairAssessment {
    pub estimates: [Symbol; 2],
    pub reject: [bool; 2],
    pub accept: [bool; 2],
}

/// Evaluates the pair tests from the full candidate multisets `a` and the
/// cross multisets `b` (side l of `b` holds candidates for coordinate l
/// drawn from the packets omitting the other coordinate).
pub fn assess_pair(
    a: [&CandidateMultiset; 2],
    b: [&CandidateMultiset; 2],
    t: usize,
    s: usize,
) -> PairAssessment {
    let votes = [a[0].most_frequent(), a[1].most_frequent()];
    let estimates = [votes[0].0, votes[1].0];
    let mut reject = [false; 2];
    let mut accept = [false; 2];
    for l in 0..2 {
        let in_cross = b[l].frequency(estimates[l]);
        let other_support = votes[1 - l].1;
        reject[l] = in_cross + other_support <= t;
        accept[l] = in_cross + t >= s + other_support;
    }
    PairAssessment {
        estimates,
        reject,
        accept,
    }
}

impl RepVpecCode {
    pub fn new(t: usize, s: usize, alphabet: u32) -> Result<RepVpecCode> {
        if s == 0 || s > t {
            return Err(Error::Infeasible(format!(
                "window width {s} must satisfy 1 <= s <= T = {t}"
            )));
        }
        if alphabet < 2 {
            return Err(Error::Infeasible("alphabet needs at least two symbols".into()));
        }
        Ok(RepVpecCode {
            t,
            s,
            n: 2 * t + 1,
            alphabet,
        })
    }

    pub fn errors(&self) -> usize {
        self.t
    }

    pub fn window_width(&self) -> usize {
        self.s
    }

    pub fn n_packets(&self) -> usize {
        self.n
    }

    pub fn packet_len(&self) -> usize {
        self.n - self.s
    }

    /// The coordinates omitted from packet j, in cyclic order starting
    /// at j.
    pub fn window(&self, j: usize) -> Vec<usize> {
        (0..self.s).map(|r| (j + r) % self.n).collect()
    }

    /// The coordinates packet j carries, in increasing order.
    pub fn window_complement(&self, j: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.omits(j, i)).collect()
    }

    /// Whether packet j omits coordinate i.
    fn omits(&self, j: usize, i: usize) -> bool {
        (i + self.n - j) % self.n < self.s
    }

    /// Members of packet j's window strictly below i.
    fn window_below(&self, j: usize, i: usize) -> usize {
        if j + self.s <= self.n {
            i.saturating_sub(j).min(self.s)
        } else {
            let high = i.saturating_sub(j).min(self.n - j);
            let low = i.min(j + self.s - self.n);
            high + low
        }
    }

    /// Index of coordinate i within packet j, or None when the packet
    /// omits it.
    pub fn symbol_position(&self, i: usize, j: usize) -> Option<usize> {
        if self.omits(j, i) {
            None
        } else {
            Some(i - self.window_below(j, i))
        }
    }

    fn candidate_value(&self, received: &PacketSet, i: usize, j: usize) -> Symbol {
        let pos = self
            .symbol_position(i, j)
            .expect("packet does not carry the coordinate");
        received.packets[j][pos]
    }

    /// All candidates for coordinate i: one from each packet carrying it.
    pub fn candidates(&self, received: &PacketSet, i: usize) -> CandidateMultiset {
        let packets: Vec<usize> = (0..self.n).filter(|&j| !self.omits(j, i)).collect();
        let values = packets
            .iter()
            .map(|&j| self.candidate_value(received, i, j))
            .collect();
        CandidateMultiset {
            coordinate: i,
            packets,
            values,
        }
    }

    /// Candidates for coordinate i drawn only from the s packets that
    /// omit coordinate `other`. Valid when the cyclic separation of the
    /// two coordinates is in [s, 2T+1-s], which keeps the two windows
    /// disjoint.
    fn cross_candidates(&self, received: &PacketSet, i: usize, other: usize) -> CandidateMultiset {
        let start = (other + self.n + 1 - self.s) % self.n;
        let packets = self.window(start);
        let values = packets
            .iter()
            .map(|&j| self.candidate_value(received, i, j))
            .collect();
        CandidateMultiset {
            coordinate: i,
            packets,
            values,
        }
    }

    /// First pair (by scanning the set in order) whose cyclic separation
    /// lies in [s, 2T+1-s]. Any set larger than s contains one.
    pub fn separated_pair(&self, unresolved: &BTreeSet<usize>) -> Option<(usize, usize)> {
        for &i1 in unresolved {
            for &i2 in unresolved {
                if i1 == i2 {
                    continue;
                }
                let diff = (i2 + self.n - i1) % self.n;
                if diff >= self.s && diff <= self.n - self.s {
                    return Some((i1, i2));
                }
            }
        }
        None
    }

    /// Per-coordinate majority decoding for s = 1: a value winning at
    /// least T+1 of the 2T votes is committed. If any coordinate stays
    /// unresolved, all alterations hit the packets voting on it, so the
    /// packet omitting it is clean: the output is read from that packet,
    /// with the coordinate itself erased.
    pub fn decode_majority(&self, received: &PacketSet) -> Result<ReconstructionWord> {
        if self.s != 1 {
            return Err(Error::Infeasible(format!(
                "majority decoding applies to window width 1, not {}",
                self.s
            )));
        }
        received.validate(&VpecCode::layout(self))?;
        let mut word: ReconstructionWord = vec![None; self.n];
        let mut unresolved = Vec::new();
        for i in 0..self.n {
            let (v, f) = self.candidates(received, i).most_frequent();
            if f >= self.t + 1 {
                word[i] = Some(v);
            } else {
                unresolved.push(i);
            }
        }
        if let Some(&i) = unresolved.first() {
            for j in 0..self.n {
                word[j] = if j == i {
                    None
                } else {
                    Some(self.candidate_value(received, j, i))
                };
            }
        }
        Ok(word)
    }

    /// The general decoder. Majority voting with threshold T+1 settles
    /// most coordinates; unresolved pairs at window-disjoint separation
    /// are then cross-examined until at most s remain, which are erased.
    pub fn decode_pairwise(&self, received: &PacketSet) -> Result<ReconstructionWord> {
        received.validate(&VpecCode::layout(self))?;
        let mut word: ReconstructionWord = vec![None; self.n];
        let mut unresolved = BTreeSet::new();
        for i in 0..self.n {
            let (v, f) = self.candidates(received, i).most_frequent();
            if f >= self.t + 1 {
                word[i] = Some(v);
            } else {
                unresolved.insert(i);
            }
        }
        while unresolved.len() > self.s {
            let (i1, i2) = self.separated_pair(&unresolved).ok_or_else(|| {
                Error::PropertyViolation(format!(
                    "no separated pair in an unresolved set of size {}",
                    unresolved.len()
                ))
            })?;
            let a1 = self.candidates(received, i1);
            let a2 = self.candidates(received, i2);
            let b1 = self.cross_candidates(received, i1, i2);
            let b2 = self.cross_candidates(received, i2, i1);
            let verdict = assess_pair([&a1, &a2], [&b1, &b2], self.t, self.s);
            let mut removed = 0;
            for l in 0..2 {
                let (own, other) = if l == 0 { (i1, i2) } else { (i2, i1) };
                if verdict.reject[l] {
                    if unresolved.remove(&other) {
                        let cross = if l == 0 { &b2 } else { &b1 };
                        word[other] = Some(cross.most_frequent().0);
                        removed += 1;
                    }
                } else if verdict.accept[l] || !verdict.accept[1 - l] {
                    if unresolved.remove(&own) {
                        word[own] = Some(verdict.estimates[l]);
                        removed += 1;
                    }
                }
            }
            if removed == 0 {
                return Err(Error::PropertyViolation(
                    "pair cross-examination resolved nothing".into(),
                ));
            }
        }
        Ok(word)
    }

    /// Extends the code to messages of rounds*(2T+1) symbols via
    /// independent per-round transmissions sharing the packet paths.
    pub fn batched(self, rounds: usize) -> Result<BatchedRepVpec> {
        if rounds == 0 {
            return Err(Error::Infeasible("at least one round is needed".into()));
        }
        Ok(BatchedRepVpec { code: self, rounds })
    }
}

impl VpecCode for RepVpecCode {
    fn layout(&self) -> PacketLayout {
        PacketLayout::uniform(self.n, self.n - self.s, self.alphabet)
    }

    fn message_len(&self) -> usize {
        self.n
    }

    fn params(&self) -> VpecParams {
        VpecParams {
            packets: self.n,
            message_len: self.n,
            rate: rat((self.n - self.s) as i64, self.n as i64),
            distortion: rat(self.s as i64, self.n as i64),
            errors: self.t,
        }
    }

    fn encode(&self, msg: &[Symbol]) -> Result<PacketSet> {
        if msg.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: msg.len(),
            });
        }
        if let Some(&sym) = msg.iter().find(|&&s| u32::from(s) >= self.alphabet) {
            return Err(Error::Infeasible(format!(
                "message symbol {sym} outside alphabet of size {}",
                self.alphabet
            )));
        }
        let packets = (0..self.n)
            .map(|j| self.window_complement(j).iter().map(|&i| msg[i]).collect())
            .collect();
        Ok(PacketSet::new(packets))
    }

    fn decode(&self, received: &PacketSet) -> Result<ReconstructionWord> {
        self.decode_pairwise(received)
    }
}

/// Several independent rounds of a windowed-repetition code sharing the
/// same 2T+1 packet paths: packet j concatenates the round packets, and
/// message coordinate i holds its per-round values contiguously. Rate
/// and distortion match the single-round code.
#[derive(Clone, Debug)]
pub struct BatchedRepVpec {
    code: RepVpecCode,
    rounds: usize,
}

impl BatchedRepVpec {
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    pub fn round_code(&self) -> &RepVpecCode {
        &self.code
    }

    fn round_message(&self, msg: &[Symbol], round: usize) -> Vec<Symbol> {
        (0..self.code.n)
            .map(|i| msg[i * self.rounds + round])
            .collect()
    }
}

impl VpecCode for BatchedRepVpec {
    fn layout(&self) -> PacketLayout {
        PacketLayout::uniform(
            self.code.n,
            self.rounds * (self.code.n - self.code.s),
            self.code.alphabet,
        )
    }

    fn message_len(&self) -> usize {
        self.rounds * self.code.n
    }

    fn params(&self) -> VpecParams {
        VpecParams {
            message_len: self.message_len(),
            ..self.code.params()
        }
    }

    fn encode(&self, msg: &[Symbol]) -> Result<PacketSet> {
        if msg.len() != self.message_len() {
            return Err(Error::LengthMismatch {
                expected: self.message_len(),
                got: msg.len(),
            });
        }
        let mut packets = vec![Vec::with_capacity(self.rounds * self.code.packet_len()); self.code.n];
        for round in 0..self.rounds {
            let sent = self.code.encode(&self.round_message(msg, round))?;
            for (packet, part) in packets.iter_mut().zip(sent.packets) {
                packet.extend(part);
            }
        }
        Ok(PacketSet::new(packets))
    }

    fn decode(&self, received: &PacketSet) -> Result<ReconstructionWord> {
        received.validate(&self.layout())?;
        let len = self.code.packet_len();
        let mut word = vec![None; self.message_len()];
        for round in 0..self.rounds {
            let slice = PacketSet::new(
                received
                    .packets
                    .iter()
                    .map(|p| p[round * len..(round + 1) * len].to_vec())
                    .collect(),
            );
            let part = self.code.decode_pairwise(&slice)?;
            for (i, v) in part.into_iter().enumerate() {
                word[i * self.rounds + round] = v;
            }
        }
        Ok(word)
    }
}
