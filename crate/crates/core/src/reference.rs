//! Reference machinery for packet codes: a fully enumerated message to
//! packet-set table, the ball-intersection decoder built on it, and the
//! exhaustive check of the two conditions characterizing when a code
//! meets a distortion budget against T altered packets.
//!
//! Everything here is an oracle: correctness over speed, with budgets
//! guarding every enumeration.

use crate::code::{VpecCode, VpecParams};
use crate::gf::Symbol;
use crate::packet::{
    all_erased, erasure_count, packet_distance, PacketLayout, PacketSet, ReconstructionWord,
};
use crate::ratio::{rat, Rational};
use crate::sweep;
use crate::{Budget, Error, Result};

/// A packet code as a complete table: every message (in lexicographic
/// order) with its packet-set codeword.
#[derive(Clone, Debug)]
pub struct CodeTable {
    layout: PacketLayout,
    message_len: usize,
    entries: Vec<(Vec<Symbol>, PacketSet)>,
}

impl CodeTable {
    /// Enumerates a code into a table.
    pub fn from_code(code: &dyn VpecCode, budget: Budget) -> Result<CodeTable> {
        let layout = code.layout();
        let k = code.message_len();
        CodeTable::from_fn(layout, k, budget, |msg| code.encode(msg))
    }

    /// Builds a table from an arbitrary encoding map. Every packet set is
    /// validated against the layout; the message alphabet is the layout
    /// alphabet.
    pub fn from_fn<F>(
        layout: PacketLayout,
        message_len: usize,
        budget: Budget,
        mut encode: F,
    ) -> Result<CodeTable>
    where
        F: FnMut(&[Symbol]) -> Result<PacketSet>,
    {
        if message_len == 0 {
            return Err(Error::Infeasible("empty message space".into()));
        }
        let count = sweep::space_size(layout.alphabet, message_len);
        budget.charge(count)?;
        let mut entries = Vec::with_capacity(count as usize);
        for msg in sweep::words(layout.alphabet, message_len) {
            let packets = encode(&msg)?;
            packets.validate(&layout)?;
            entries.push((msg, packets));
        }
        Ok(CodeTable {
            layout,
            message_len,
            entries,
        })
    }

    pub fn layout(&self) -> &PacketLayout {
        &self.layout
    }

    pub fn message_len(&self) -> usize {
        self.message_len
    }

    pub fn entries(&self) -> &[(Vec<Symbol>, PacketSet)] {
        &self.entries
    }

    /// The table row for `msg` (rows are in lexicographic message order).
    pub fn encode(&self, msg: &[Symbol]) -> Result<&PacketSet> {
        if msg.len() != self.message_len {
            return Err(Error::LengthMismatch {
                expected: self.message_len,
                got: msg.len(),
            });
        }
        let q = self.layout.alphabet as u128;
        let mut idx: u128 = 0;
        for &s in msg {
            if u32::from(s) >= self.layout.alphabet {
                return Err(Error::Infeasible(format!(
                    "message symbol {s} outside alphabet of size {}",
                    self.layout.alphabet
                )));
            }
            idx = idx * q + u128::from(s);
        }
        Ok(&self.entries[idx as usize].1)
    }

    /// Minimum number of differing packets over distinct message pairs.
    pub fn packet_min_distance(&self, budget: Budget) -> Result<usize> {
        let m = self.entries.len() as u128;
        budget.charge(m.saturating_mul(m))?;
        let mut best = self.layout.n_packets() + 1;
        for i in 0..self.entries.len() {
            for j in 0..i {
                let d = packet_distance(&self.entries[i].1, &self.entries[j].1)?;
                best = best.min(d);
                if best == 0 {
                    return Ok(0);
                }
            }
        }
        debug_assert!(best <= self.layout.n_packets());
        Ok(best)
    }
}

/// Result of the ball-intersection decoder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallDecodeOutcome {
    pub word: ReconstructionWord,
    /// Number of messages whose codewords lie within packet distance T of
    /// the received word.
    pub ball_size: usize,
    /// No codeword was within reach; the output is all erasures.
    pub empty_ball: bool,
}

/// The reference decoder: gathers every message whose codeword lies
/// within packet distance `t` of `received` and outputs their
/// coordinatewise agreement, erasing every coordinate where they differ.
pub fn ball_intersection_decode(
    table: &CodeTable,
    received: &PacketSet,
    t: usize,
) -> Result<BallDecodeOutcome> {
    received.validate(table.layout())?;
    let k = table.message_len();
    let mut word: Option<ReconstructionWord> = None;
    let mut ball_size = 0usize;
    for (msg, packets) in table.entries() {
        if packet_distance(received, packets)? > t {
            continue;
        }
        ball_size += 1;
        match &mut word {
            None => word = Some(msg.iter().map(|&s| Some(s)).collect()),
            Some(w) => {
                for (slot, &s) in w.iter_mut().zip(msg) {
                    if *slot != Some(s) {
                        *slot = None;
                    }
                }
            }
        }
    }
    match word {
        Some(word) => Ok(BallDecodeOutcome {
            word,
            ball_size,
            empty_ball: false,
        }),
        None => Ok(BallDecodeOutcome {
            word: all_erased(k),
            ball_size: 0,
            empty_ball: true,
        }),
    }
}

/// A received word on which the ball agreement falls short of the
/// distortion budget.
#[derive(Clone, Debug)]
pub struct AgreementWitness {
    pub received: PacketSet,
    /// Coordinates on which all ball messages agree.
    pub agreement: usize,
    pub ball_size: usize,
}

/// Outcome of the two-condition packet-code check.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    /// Minimum packet distance of the table.
    pub packet_distance: usize,
    /// Required minimum: T+1, or 2T+1 under a zero distortion budget.
    pub required_distance: usize,
    /// Condition 1: the distance clears the requirement.
    pub distance_ok: bool,
    /// Condition 2: every reachable ball agrees on enough coordinates.
    pub agreement_ok: bool,
    pub witness: Option<AgreementWitness>,
}

impl ConditionReport {
    pub fn holds(&self) -> bool {
        self.distance_ok && self.agreement_ok
    }
}

/// Checks the two conditions under which a packet code decodes within
/// distortion `d` against up to `t` altered packets:
///
/// 1. packet minimum distance at least t+1 (2t+1 when d = 0), and
/// 2. for every conceivable received word y, the messages whose codewords
///    lie within packet distance t of y agree on at least a (1-d)
///    fraction of coordinates.
///
/// Sweeps all |Q|^N received words, so the budget must cover
/// alphabet^(total symbols).
pub fn check_vpec_conditions(
    table: &CodeTable,
    t: usize,
    d: &Rational,
    budget: Budget,
) -> Result<ConditionReport> {
    if *d < rat(0, 1) || *d > rat(1, 1) {
        return Err(Error::Infeasible(format!(
            "distortion budget {d} outside [0, 1]"
        )));
    }
    let packet_distance = table.packet_min_distance(budget)?;
    let required_distance = if num::Zero::is_zero(d) { 2 * t + 1 } else { t + 1 };
    let distance_ok = packet_distance >= required_distance;

    let layout = table.layout();
    let k = table.message_len();
    let total = layout.total_symbols();
    budget.charge(sweep::space_size(layout.alphabet, total))?;
    let mut agreement_ok = true;
    let mut witness = None;
    let mut flat = vec![0 as Symbol; total];
    'sweep: loop {
        let received = unflatten(layout, &flat);
        let outcome = ball_intersection_decode(table, &received, t)?;
        if !outcome.empty_ball {
            let erased = erasure_count(&outcome.word);
            if rat(erased as i64, k as i64) > *d {
                agreement_ok = false;
                witness = Some(AgreementWitness {
                    received,
                    agreement: k - erased,
                    ball_size: outcome.ball_size,
                });
                break 'sweep;
            }
        }
        if !sweep::advance(&mut flat, layout.alphabet) {
            break;
        }
    }
    Ok(ConditionReport {
        packet_distance,
        required_distance,
        distance_ok,
        agreement_ok,
        witness,
    })
}

fn unflatten(layout: &PacketLayout, flat: &[Symbol]) -> PacketSet {
    let mut packets = Vec::with_capacity(layout.n_packets());
    let mut at = 0;
    for &len in &layout.lens {
        packets.push(flat[at..at + len].to_vec());
        at += len;
    }
    PacketSet::new(packets)
}

/// A table-backed code whose decoder is the ball-intersection reference
/// decoder at a fixed error budget.
#[derive(Clone, Debug)]
pub struct ReferenceCode {
    table: CodeTable,
    errors: usize,
    distortion: Rational,
}

impl ReferenceCode {
    pub fn new(table: CodeTable, errors: usize, distortion: Rational) -> Result<ReferenceCode> {
        let lens = &table.layout().lens;
        if lens.windows(2).any(|w| w[0] != w[1]) {
            return Err(Error::Infeasible(
                "reference code requires a uniform packet layout".into(),
            ));
        }
        if errors >= table.layout().n_packets() {
            return Err(Error::Infeasible(format!(
                "error budget {errors} must be below the packet count {}",
                table.layout().n_packets()
            )));
        }
        Ok(ReferenceCode {
            table,
            errors,
            distortion,
        })
    }

    pub fn table(&self) -> &CodeTable {
        &self.table
    }
}

impl VpecCode for ReferenceCode {
    fn layout(&self) -> PacketLayout {
        self.table.layout().clone()
    }

    fn message_len(&self) -> usize {
        self.table.message_len()
    }

    fn params(&self) -> VpecParams {
        VpecParams {
            packets: self.table.layout().n_packets(),
            message_len: self.table.message_len(),
            rate: rat(
                self.table.layout().lens[0] as i64,
                self.table.message_len() as i64,
            ),
            distortion: self.distortion.clone(),
            errors: self.errors,
        }
    }

    fn encode(&self, msg: &[Symbol]) -> Result<PacketSet> {
        Ok(self.table.encode(msg)?.clone())
    }

    fn decode(&self, received: &PacketSet) -> Result<ReconstructionWord> {
        Ok(ball_intersection_decode(&self.table, received, self.errors)?.word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// k = 3 over bits, three packets, packet j carrying the two message
    /// bits other than bit j.
    fn drop_one_table() -> CodeTable {
        let layout = PacketLayout::uniform(3, 2, 2);
        CodeTable::from_fn(layout, 3, Budget::default(), |x| {
            Ok(PacketSet::new(vec![
                vec![x[1], x[2]],
                vec![x[0], x[2]],
                vec![x[0], x[1]],
            ]))
        })
        .unwrap()
    }

    /// k = 1 over bits, the bit repeated in three packets of length 1.
    fn repeat_table() -> CodeTable {
        let layout = PacketLayout::uniform(3, 1, 2);
        CodeTable::from_fn(layout, 1, Budget::default(), |x| {
            Ok(PacketSet::new(vec![vec![x[0]]; 3]))
        })
        .unwrap()
    }

    #[test]
    fn table_is_lexicographic_and_looks_up() {
        let table = drop_one_table();
        assert_eq!(table.entries().len(), 8);
        for (i, (msg, _)) in table.entries().iter().enumerate() {
            assert_eq!(*msg, sweep::index_to_word(2, 3, i as u128));
        }
        let packets = table.encode(&[1, 0, 1]).unwrap();
        assert_eq!(
            packets,
            &PacketSet::new(vec![vec![0, 1], vec![1, 1], vec![1, 0]])
        );
        assert!(table.encode(&[1, 0]).is_err());
        assert!(table.encode(&[2, 0, 0]).is_err());
    }

    #[test]
    fn packet_min_distances() {
        // Two messages differing in one bit share exactly the one packet
        // that omits it.
        assert_eq!(
            drop_one_table().packet_min_distance(Budget::default()).unwrap(),
            2
        );
        assert_eq!(
            repeat_table().packet_min_distance(Budget::default()).unwrap(),
            3
        );
    }

    #[test]
    fn ball_decoder_unique_codeword_reconstructs_exactly() {
        let table = repeat_table();
        let y = table.encode(&[1]).unwrap().clone();
        let out = ball_intersection_decode(&table, &y, 1).unwrap();
        assert_eq!(out.word, vec![Some(1)]);
        assert_eq!(out.ball_size, 1);
        assert!(!out.empty_ball);
    }

    #[test]
    fn ball_decoder_erases_exactly_the_disagreement() {
        // y is one packet away from the codewords of 000 and 100 and out
        // of reach of everything else, so the ball is {000, 100}: the
        // messages agree on coordinates 1 and 2 and differ on 0.
        let table = drop_one_table();
        let y = PacketSet::new(vec![vec![0, 0], vec![1, 0], vec![0, 0]]);
        let out = ball_intersection_decode(&table, &y, 1).unwrap();
        assert_eq!(out.ball_size, 2);
        assert_eq!(out.word, vec![None, Some(0), Some(0)]);
    }

    #[test]
    fn ball_decoder_flags_empty_ball() {
        let table = repeat_table();
        let y = PacketSet::new(vec![vec![0], vec![1], vec![0]]);
        let out = ball_intersection_decode(&table, &y, 0).unwrap();
        assert!(out.empty_ball);
        assert_eq!(out.word, vec![None]);
        assert_eq!(out.ball_size, 0);
    }

    #[test]
    fn conditions_hold_for_drop_one_at_one_third() {
        let report =
            check_vpec_conditions(&drop_one_table(), 1, &rat(1, 3), Budget::default()).unwrap();
        assert_eq!(report.packet_distance, 2);
        assert_eq!(report.required_distance, 2);
        assert!(report.distance_ok);
        assert!(report.agreement_ok, "witness: {:?}", report.witness);
        assert!(report.holds());
    }

    #[test]
    fn zero_distortion_needs_doubled_distance() {
        // Packet distance 2 = 2T falls short of the 2T+1 needed for
        // lossless decoding.
        let report =
            check_vpec_conditions(&drop_one_table(), 1, &rat(0, 1), Budget::default()).unwrap();
        assert_eq!(report.required_distance, 3);
        assert!(!report.distance_ok);
        assert!(!report.holds());
        // The repetition layout has distance 3 and a single coordinate
        // that every ball agrees on.
        let report =
            check_vpec_conditions(&repeat_table(), 1, &rat(0, 1), Budget::default()).unwrap();
        assert!(report.holds(), "witness: {:?}", report.witness);
    }

    #[test]
    fn duplicate_codewords_break_condition_one() {
        let layout = PacketLayout::uniform(3, 1, 2);
        let table = CodeTable::from_fn(layout, 1, Budget::default(), |_| {
            Ok(PacketSet::new(vec![vec![0]; 3]))
        })
        .unwrap();
        let report = check_vpec_conditions(&table, 1, &rat(1, 1), Budget::default()).unwrap();
        assert_eq!(report.packet_distance, 0);
        assert!(!report.distance_ok);
    }

    #[test]
    fn tight_distortion_budget_fails_condition_two() {
        // At D = 0 the drop-one code's distance already fails; relax the
        // distance requirement by checking D = 1/4 < 1/3: distance passes
        // (T+1 = 2) but some ball erases a full third.
        let report =
            check_vpec_conditions(&drop_one_table(), 1, &rat(1, 4), Budget::default()).unwrap();
        assert!(report.distance_ok);
        assert!(!report.agreement_ok);
        let witness = report.witness.expect("witness received word");
        assert_eq!(witness.agreement, 2);
        assert!(witness.ball_size >= 2);
    }

    #[test]
    fn reference_code_round_trip_and_params() {
        let code = ReferenceCode::new(drop_one_table(), 1, rat(1, 3)).unwrap();
        let params = code.params();
        assert_eq!(params.packets, 3);
        assert_eq!(params.message_len, 3);
        assert_eq!(params.rate, rat(2, 3));
        assert_eq!(params.errors, 1);
        params.validate().unwrap();
        assert_eq!(code.message_space(), 8);
        let sent = code.encode(&[1, 1, 0]).unwrap();
        assert_eq!(code.decode(&sent).unwrap(), vec![Some(1), Some(1), Some(0)]);
    }

    #[test]
    fn budget_guards_exhaustive_checks() {
        let err = check_vpec_conditions(&drop_one_table(), 1, &rat(1, 3), Budget::new(32));
        assert!(matches!(err, Err(Error::Budget { .. })));
    }
}
