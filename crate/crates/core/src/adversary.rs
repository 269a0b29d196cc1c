//! Channel adversaries: enumeration and sampling of packet corruptions,
//! and the distortion survey that drives a code's decoder across them.
//!
//! The exhaustive strategy visits every way of altering at most T packets
//! and yields an exact worst case. The sampling strategies are labeled
//! lower bounds: they never overstate what the adversary can do.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::code::VpecCode;
use crate::gf::Symbol;
use crate::packet::{erasure_count, erasure_distortion, PacketLayout, PacketSet, ReconstructionWord};
use crate::ratio::{Distortion, Rational};
use crate::sweep;
use crate::{Budget, Error, Result};

/// How the adversary picks which packets to alter and what to write.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Every subset of at most T packets crossed with every combination
    /// of replacement values. Exact but exponential.
    Exhaustive,
    /// Uniformly random messages, alteration counts, subsets, and
    /// replacement values (always different from the original packet).
    Random { seed: u64, trials: u64 },
    /// Replaces a random subset of at most T packets with the
    /// corresponding packets of a different codeword, the hardest kind of
    /// lie to detect.
    SwapToCodeword { seed: u64, trials: u64 },
}

/// Number of distinct corruptions of a word of `n_packets` packets, each
/// carrying `len` symbols over an alphabet of size `alphabet`, when at
/// most `t` packets may be altered. Saturates at u128::MAX.
pub fn corruption_count(n_packets: usize, t: usize, alphabet: u32, len: usize) -> u128 {
    let alternatives = sweep::space_size(alphabet, len).saturating_sub(1);
    let mut total: u128 = 0;
    for picked in 0..=t.min(n_packets) {
        let mut ways = sweep::binom(n_packets as u64, picked as u64);
        for _ in 0..picked {
            ways = ways.saturating_mul(alternatives);
        }
        total = total.saturating_add(ways);
    }
    total
}

/// Cursor over the values of one packet that differ from its original
/// value, in lexicographic order.
struct AltCursor {
    base: u32,
    original: Vec<Symbol>,
    word: Vec<Symbol>,
}

impl AltCursor {
    /// Positions at the first alternative value, or None when the packet
    /// admits none.
    fn first(base: u32, original: &[Symbol]) -> Option<AltCursor> {
        let mut cursor = AltCursor {
            base,
            original: original.to_vec(),
            word: vec![0; original.len()],
        };
        if cursor.word == cursor.original && !sweep::advance(&mut cursor.word, base) {
            return None;
        }
        Some(cursor)
    }

    /// Steps to the next alternative; false when wrapping around to the
    /// first one.
    fn step(&mut self) -> bool {
        loop {
            if !sweep::advance(&mut self.word, self.base) {
                for slot in self.word.iter_mut() {
                    *slot = 0;
                }
                if self.word == self.original {
                    let moved = sweep::advance(&mut self.word, self.base);
                    debug_assert!(moved);
                }
                return false;
            }
            if self.word != self.original {
                return true;
            }
        }
    }
}

/// Calls `f` once per corruption of `original` with at most `t` altered
/// packets, in a fixed order: alteration count ascending, altered subsets
/// lexicographic, replacement values lexicographic. The first call is the
/// unaltered word itself. `f` gets the sorted altered indices and the
/// corrupted word; returning false stops the enumeration.
pub fn for_each_corruption<F>(
    layout: &PacketLayout,
    original: &PacketSet,
    t: usize,
    budget: Budget,
    mut f: F,
) -> Result<()>
where
    F: FnMut(&[usize], &PacketSet) -> Result<bool>,
{
    original.validate(layout)?;
    let longest = layout.lens.iter().copied().max().unwrap_or(0);
    budget.charge(corruption_count(
        layout.n_packets(),
        t,
        layout.alphabet,
        longest,
    ))?;

    if !f(&[], original)? {
        return Ok(());
    }
    let n = layout.n_packets();
    let mut work = original.clone();
    for size in 1..=t.min(n) {
        'subsets: for subset in sweep::subsets(n, size) {
            let mut cursors = Vec::with_capacity(size);
            for &j in &subset {
                match AltCursor::first(layout.alphabet, &original.packets[j]) {
                    Some(c) => cursors.push(c),
                    None => continue 'subsets,
                }
            }
            let mut stopped = false;
            'values: loop {
                for (cursor, &j) in cursors.iter().zip(&subset) {
                    work.packets[j].copy_from_slice(&cursor.word);
                }
                if !f(&subset, &work)? {
                    stopped = true;
                    break 'values;
                }
                let mut pos = size;
                loop {
                    if pos == 0 {
                        break 'values;
                    }
                    if cursors[pos - 1].step() {
                        break;
                    }
                    pos -= 1;
                }
            }
            for &j in &subset {
                work.packets[j].copy_from_slice(&original.packets[j]);
            }
            if stopped {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Draws a uniformly random corruption: an alteration count in 0..=t, a
/// random subset of that size, and for each chosen packet a uniformly
/// random value different from the original. Returns the sorted altered
/// indices and the corrupted word.
pub fn random_corruption<R: Rng>(
    rng: &mut R,
    layout: &PacketLayout,
    original: &PacketSet,
    t: usize,
) -> (Vec<usize>, PacketSet) {
    let altered = random_subset(rng, layout.n_packets(), t);
    let mut work = original.clone();
    for &j in &altered {
        debug_assert!(layout.lens[j] > 0, "length-zero packet cannot be altered");
        loop {
            for slot in work.packets[j].iter_mut() {
                *slot = rng.gen_range(0..layout.alphabet) as Symbol;
            }
            if work.packets[j] != original.packets[j] {
                break;
            }
        }
    }
    (altered, work)
}

/// Replaces a random subset of at most `t` packets of `original` with the
/// corresponding packets of `other`.
pub fn swap_corruption<R: Rng>(
    rng: &mut R,
    layout: &PacketLayout,
    original: &PacketSet,
    other: &PacketSet,
    t: usize,
) -> (Vec<usize>, PacketSet) {
    let altered = random_subset(rng, layout.n_packets(), t);
    let mut work = original.clone();
    for &j in &altered {
        work.packets[j].copy_from_slice(&other.packets[j]);
    }
    (altered, work)
}

fn random_subset<R: Rng>(rng: &mut R, n: usize, t: usize) -> Vec<usize> {
    let picked = rng.gen_range(0..=t.min(n));
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..picked {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    let mut subset = pool[..picked].to_vec();
    subset.sort_unstable();
    subset
}

/// One decode under one corruption, as fed to a trace sink.
#[derive(Debug)]
pub struct TraceRecord<'a> {
    pub message: &'a [Symbol],
    /// Sorted indices of altered packets.
    pub altered: &'a [usize],
    /// New values of the altered packets, aligned with `altered`.
    pub values: &'a [Vec<Symbol>],
    pub output: &'a ReconstructionWord,
    pub distortion: &'a Distortion,
}

/// Distortion survey outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionReport {
    /// True when every message and corruption was visited, making `worst`
    /// exact; false for sampled strategies, where it is a lower bound.
    pub exhaustive: bool,
    pub worst: Distortion,
    /// Decodes that put a wrong symbol in the output.
    pub wrong_symbol_events: u64,
    pub max_erasures: usize,
    pub cases: u64,
    /// Sum of the finite distortions, for averaging. Wrong-symbol cases
    /// contribute nothing here; they are counted separately.
    pub finite_sum: Rational,
}

impl DistortionReport {
    /// Average finite distortion per case; None before any case or when a
    /// wrong symbol made the notion meaningless.
    pub fn mean(&self) -> Option<Rational> {
        if self.cases == 0 || self.wrong_symbol_events > 0 {
            return None;
        }
        Some(&self.finite_sum / Rational::from_integer(self.cases.into()))
    }
}

/// Runs `code`'s decoder against the chosen adversary with up to `t`
/// altered packets and reports the worst distortion seen. Exhaustive mode
/// sweeps every message and corruption; sampling modes are deterministic
/// in the seed, with each trial on its own stream. A sink, when given,
/// sees every decoded case.
pub fn worst_case_distortion(
    code: &dyn VpecCode,
    t: usize,
    strategy: &Strategy,
    budget: Budget,
    mut sink: Option<&mut dyn FnMut(&TraceRecord) -> Result<()>>,
) -> Result<DistortionReport> {
    let layout = code.layout();
    let k = code.message_len();
    let mut report = DistortionReport {
        exhaustive: matches!(strategy, Strategy::Exhaustive),
        worst: Distortion::zero(),
        wrong_symbol_events: 0,
        max_erasures: 0,
        cases: 0,
        finite_sum: Rational::zero(),
    };

    let assess = |msg: &[Symbol],
                      altered: &[usize],
                      corrupted: &PacketSet,
                      report: &mut DistortionReport,
                      sink: &mut Option<&mut dyn FnMut(&TraceRecord) -> Result<()>>|
     -> Result<()> {
        let output = code.decode(corrupted)?;
        let distortion = erasure_distortion(msg, &output)?;
        match &distortion {
            Distortion::Infinite => report.wrong_symbol_events += 1,
            Distortion::Finite(f) => report.finite_sum += f,
        }
        report.max_erasures = report.max_erasures.max(erasure_count(&output));
        if distortion > report.worst {
            report.worst = distortion.clone();
        }
        report.cases += 1;
        if let Some(sink) = sink.as_mut() {
            let values: Vec<Vec<Symbol>> =
                altered.iter().map(|&j| corrupted.packets[j].clone()).collect();
            sink(&TraceRecord {
                message: msg,
                altered,
                values: &values,
                output: &output,
                distortion: &distortion,
            })?;
        }
        Ok(())
    };

    match strategy {
        Strategy::Exhaustive => {
            let messages = sweep::space_size(layout.alphabet, k);
            let longest = layout.lens.iter().copied().max().unwrap_or(0);
            let per_message =
                corruption_count(layout.n_packets(), t, layout.alphabet, longest);
            budget.charge(messages.saturating_mul(per_message))?;
            for msg in sweep::words(layout.alphabet, k) {
                let sent = code.encode(&msg)?;
                for_each_corruption(&layout, &sent, t, budget, |altered, corrupted| {
                    assess(&msg, altered, corrupted, &mut report, &mut sink)?;
                    Ok(true)
                })?;
            }
        }
        Strategy::Random { seed, trials } => {
            budget.charge(u128::from(*trials))?;
            for trial in 0..*trials {
                let mut rng = trial_rng(*seed, trial);
                let msg = random_message(&mut rng, layout.alphabet, k);
                let sent = code.encode(&msg)?;
                let (altered, corrupted) = random_corruption(&mut rng, &layout, &sent, t);
                assess(&msg, &altered, &corrupted, &mut report, &mut sink)?;
            }
        }
        Strategy::SwapToCodeword { seed, trials } => {
            budget.charge(u128::from(*trials))?;
            if sweep::space_size(layout.alphabet, k) < 2 {
                return Err(Error::Infeasible(
                    "swap strategy needs at least two codewords".into(),
                ));
            }
            for trial in 0..*trials {
                let mut rng = trial_rng(*seed, trial);
                let msg = random_message(&mut rng, layout.alphabet, k);
                let sent = code.encode(&msg)?;
                let other_msg = loop {
                    let candidate = random_message(&mut rng, layout.alphabet, k);
                    if candidate != msg {
                        break candidate;
                    }
                };
                let other = code.encode(&other_msg)?;
                let (altered, corrupted) = swap_corruption(&mut rng, &layout, &sent, &other, t);
                assess(&msg, &altered, &corrupted, &mut report, &mut sink)?;
            }
        }
    }
    Ok(report)
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_message<R: Rng>(rng: &mut R, alphabet: u32, k: usize) -> Vec<Symbol> {
    (0..k).map(|_| rng.gen_range(0..alphabet) as Symbol).collect()
}
