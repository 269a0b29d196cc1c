//! Interleaved codes: stacks of row codewords decoded against column
//! errors, where a column counts as corrupted if any entry differs.
//!
//! Provides the iterative row-wise list decoder, a brute-force ball
//! enumerator used as its oracle, and empirical checks that list
//! decodability (ordinary and strong) survives interleaving.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::Symbol;
use crate::lincode::{self, LinearCode, StrongViolation};
use crate::ratio::Rational;
use crate::sweep;
use crate::{Budget, Error, Result};

/// Hard cap on row length so column-difference sets fit in a u128 mask.
const MAX_COLUMNS: usize = 128;

/// Number of received arrays below which preservation checks sweep the
/// whole space instead of sampling.
pub const EXHAUSTIVE_ARRAY_LIMIT: u128 = 10_000_000;

/// A stack of row codes sharing one length; rows may come from different
/// codes (even over different fields), columns are compared entry-wise.
#[derive(Clone, Debug)]
pub struct InterleavedCode {
    codes: Vec<LinearCode>,
    n: usize,
}

/// One array codeword together with the per-row messages that encode to
/// its rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrayCodeword {
    pub row_messages: Vec<Vec<Symbol>>,
    pub rows: Vec<Vec<Symbol>>,
}

impl InterleavedCode {
    /// ell rows of the same base code.
    pub fn uniform(base: LinearCode, ell: usize) -> Result<InterleavedCode> {
        InterleavedCode::mixed(vec![base; ell])
    }

    /// One constituent code per row; all must share the same length.
    pub fn mixed(codes: Vec<LinearCode>) -> Result<InterleavedCode> {
        let Some(first) = codes.first() else {
            return Err(Error::Infeasible("no constituent codes".into()));
        };
        let n = first.n();
        if let Some(bad) = codes.iter().find(|c| c.n() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        Ok(InterleavedCode { codes, n })
    }

    pub fn levels(&self) -> usize {
        self.codes.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constituents(&self) -> &[LinearCode] {
        &self.codes
    }

    /// Total number of array codewords (product of constituent sizes,
    /// saturating).
    pub fn codeword_count(&self) -> u128 {
        self.codes
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.size()))
    }

    /// Encodes one message per row.
    pub fn encode(&self, row_messages: &[Vec<Symbol>]) -> Result<Vec<Vec<Symbol>>> {
        if row_messages.len() != self.codes.len() {
            return Err(Error::LengthMismatch {
                expected: self.codes.len(),
                got: row_messages.len(),
            });
        }
        row_messages
            .iter()
            .zip(&self.codes)
            .map(|(m, c)| c.encode(m))
            .collect()
    }

    /// Whether every row of `array` belongs to its constituent code.
    pub fn is_code_array(&self, array: &[Vec<Symbol>]) -> bool {
        array.len() == self.codes.len()
            && array
                .iter()
                .zip(&self.codes)
                .all(|(row, c)| c.message_of(row).is_some())
    }

    fn validate_received(&self, received: &[Vec<Symbol>]) -> Result<()> {
        if received.len() != self.codes.len() {
            return Err(Error::LengthMismatch {
                expected: self.codes.len(),
                got: received.len(),
            });
        }
        for (row, code) in received.iter().zip(&self.codes) {
            if row.len() != self.n {
                return Err(Error::LengthMismatch {
                    expected: self.n,
                    got: row.len(),
                });
            }
            if row.iter().any(|&s| !code.field().contains(s)) {
                return Err(Error::Infeasible(
                    "received symbol outside the row's field".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Number of columns where the arrays differ in at least one entry.
pub fn column_distance(a: &[Vec<Symbol>], b: &[Vec<Symbol>]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let Some(first) = a.first() else {
        return Ok(0);
    };
    let n = first.len();
    for row in a.iter().chain(b) {
        if row.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: row.len(),
            });
        }
    }
    Ok((0..n)
        .filter(|&j| a.iter().zip(b).any(|(ra, rb)| ra[j] != rb[j]))
        .count())
}

/// Per-row decoding table: every constituent codeword with its message and
/// the bitmask of columns where it differs from the corresponding received
/// row.
struct RowTable {
    entries: Vec<(Vec<Symbol>, Vec<Symbol>, u128)>,
}

fn build_row_table(code: &LinearCode, row: &[Symbol], budget: Budget) -> Result<RowTable> {
    let mut entries = Vec::new();
    code.visit_codewords(budget, |m, c| {
        let mut mask = 0u128;
        for (j, (&cj, &yj)) in c.iter().zip(row).enumerate() {
            if cj != yj {
                mask |= 1 << j;
            }
        }
        entries.push((m.to_vec(), c.to_vec(), mask));
        true
    })?;
    Ok(RowTable { entries })
}

fn check_column_cap(n: usize) -> Result<()> {
    if n > MAX_COLUMNS {
        return Err(Error::Infeasible(format!(
            "row length {n} exceeds the {MAX_COLUMNS}-column decoding limit"
        )));
    }
    Ok(())
}

fn check_alphabet_premise(codes: &[LinearCode], l: usize) -> Result<()> {
    let pairs = (l + 1) * l / 2;
    for code in codes {
        let q = code.field().order() as usize;
        if q <= pairs {
            return Err(Error::Infeasible(format!(
                "field order {q} must exceed L(L+1)/2 = {pairs} for list size L = {l}"
            )));
        }
    }
    Ok(())
}

fn sort_canonical(list: &mut [ArrayCodeword]) {
    list.sort_by(|a, b| {
        let ka = a.row_messages.iter().flatten();
        let kb = b.row_messages.iter().flatten();
        ka.cmp(kb)
    });
}

/// Lists every array codeword within column distance `tau` of `received`
/// by decoding row-by-row.
///
/// Row i's candidates are the constituent codewords within Hamming
/// distance tau of received row i (found by exhaustive enumeration);
/// partial stacks are pruned by the column distance of the rows fixed so
/// far. When each constituent is (tau, L)-list decodable and its field
/// order exceeds L(L+1)/2, no intermediate list ever exceeds L entries;
/// exceeding it is reported as [`Error::PropertyViolation`].
///
/// The output is exactly the radius-tau ball, sorted lexicographically by
/// concatenated row messages.
pub fn iterative_list_decode(
    ic: &InterleavedCode,
    received: &[Vec<Symbol>],
    tau: usize,
    l: usize,
    budget: Budget,
) -> Result<Vec<ArrayCodeword>> {
    if l == 0 {
        return Err(Error::Infeasible("list size must be >= 1".into()));
    }
    check_alphabet_premise(&ic.codes, l)?;
    check_column_cap(ic.n)?;
    ic.validate_received(received)?;

    // Partial stacks as (column-difference mask, row candidate indices).
    let mut partial: Vec<(u128, Vec<usize>)> = vec![(0, Vec::new())];
    let mut tables = Vec::with_capacity(ic.codes.len());
    for (i, (code, row)) in ic.codes.iter().zip(received).enumerate() {
        let table = build_row_table(code, row, budget)?;
        let candidates: Vec<usize> = (0..table.entries.len())
            .filter(|&c| table.entries[c].2.count_ones() as usize <= tau)
            .collect();
        if candidates.len() > l {
            return Err(Error::PropertyViolation(format!(
                "row {i} has {} codewords within distance {tau}; constituent is not \
                 ({tau}, {l})-list decodable",
                candidates.len()
            )));
        }
        let mut next = Vec::new();
        for (mask, stack) in &partial {
            for &c in &candidates {
                let merged = mask | table.entries[c].2;
                if merged.count_ones() as usize <= tau {
                    let mut stack = stack.clone();
                    stack.push(c);
                    next.push((merged, stack));
                }
            }
        }
        if next.len() > l {
            return Err(Error::PropertyViolation(format!(
                "{} partial stacks within distance {tau} after row {i}; interleaving \
                 does not preserve list size {l}",
                next.len()
            )));
        }
        partial = next;
        tables.push(table);
    }

    let mut out: Vec<ArrayCodeword> = partial
        .into_iter()
        .map(|(_, stack)| ArrayCodeword {
            row_messages: stack
                .iter()
                .zip(&tables)
                .map(|(&c, t)| t.entries[c].0.clone())
                .collect(),
            rows: stack
                .iter()
                .zip(&tables)
                .map(|(&c, t)| t.entries[c].1.clone())
                .collect(),
        })
        .collect();
    sort_canonical(&mut out);
    Ok(out)
}

/// Product-space odometer over per-row codeword indices.
fn advance_indices(idx: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < sizes[i] {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Brute-force reference: enumerates every array codeword and keeps those
/// within column distance `tau` of `received`. Same ordering contract as
/// [`iterative_list_decode`].
pub fn ball_codewords(
    ic: &InterleavedCode,
    received: &[Vec<Symbol>],
    tau: usize,
    budget: Budget,
) -> Result<Vec<ArrayCodeword>> {
    ic.validate_received(received)?;
    check_column_cap(ic.n)?;
    budget.charge(ic.codeword_count())?;
    let tables: Vec<RowTable> = ic
        .codes
        .iter()
        .zip(received)
        .map(|(code, row)| build_row_table(code, row, budget))
        .collect::<Result<_>>()?;
    let sizes: Vec<usize> = tables.iter().map(|t| t.entries.len()).collect();
    let mut idx = vec![0usize; sizes.len()];
    let mut out = Vec::new();
    loop {
        let mask = idx
            .iter()
            .zip(&tables)
            .fold(0u128, |acc, (&c, t)| acc | t.entries[c].2);
        if mask.count_ones() as usize <= tau {
            out.push(ArrayCodeword {
                row_messages: idx
                    .iter()
                    .zip(&tables)
                    .map(|(&c, t)| t.entries[c].0.clone())
                    .collect(),
                rows: idx
                    .iter()
                    .zip(&tables)
                    .map(|(&c, t)| t.entries[c].1.clone())
                    .collect(),
            });
        }
        if !advance_indices(&mut idx, &sizes) {
            break;
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// How the preservation checks pick received arrays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive { arrays: u128 },
    Sampled { uniform: u64, mixes: u64, seed: u64 },
}

/// Knobs for the preservation checks.
#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub seed: u64,
    /// Uniformly random received arrays (sampled mode).
    pub uniform_samples: u64,
    /// Received arrays built by splicing columns of one random array
    /// codeword into another, probing the region between codewords
    /// (sampled mode).
    pub mix_samples: u64,
    /// Sweep everything instead of sampling when the array space is at
    /// most this large.
    pub exhaustive_limit: u128,
    /// Verify the constituent-code premises before checking arrays.
    pub verify_constituents: bool,
    pub budget: Budget,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            seed: 0,
            uniform_samples: 1000,
            mix_samples: 1000,
            exhaustive_limit: EXHAUSTIVE_ARRAY_LIMIT,
            verify_constituents: true,
            budget: Budget::default(),
        }
    }
}

/// Outcome of the constituent-premise verification.
#[derive(Clone, Debug)]
pub enum PremiseStatus {
    Verified,
    Skipped,
    /// Some constituent fails its own list-decodability premise; the
    /// array-level check still runs, but the preservation statement no
    /// longer guarantees its outcome.
    Failed {
        constituent: usize,
        witness: StrongViolation,
    },
}

impl PremiseStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, PremiseStatus::Verified)
    }
}

/// A received array with more than L array codewords within radius tau.
#[derive(Clone, Debug)]
pub struct ListSizeViolation {
    pub received: Vec<Vec<Symbol>>,
    pub members: Vec<ArrayCodeword>,
}

/// Three distinct array codewords whose summed column distance from
/// `received` fails to exceed 3 tau.
#[derive(Clone, Debug)]
pub struct TripleViolation {
    pub received: Vec<Vec<Symbol>>,
    pub arrays: Vec<ArrayCodeword>,
    pub sum_distance: usize,
}

#[derive(Debug)]
pub struct PreservationReport {
    pub mode: SweepMode,
    pub arrays_checked: u64,
    pub violation: Option<ListSizeViolation>,
}

#[derive(Debug)]
pub struct StrongPreservationReport {
    pub premise: PremiseStatus,
    /// Smallest constituent minimum distance (the d in tau <= (2d-1)/3).
    pub min_distance: usize,
    pub mode: SweepMode,
    pub arrays_checked: u64,
    pub violation: Option<TripleViolation>,
}

/// Materialized constituent codewords, reused across received arrays.
struct CodeCache {
    words: Vec<Vec<(Vec<Symbol>, Vec<Symbol>)>>,
    sizes: Vec<usize>,
    orders: Vec<u32>,
}

fn build_cache(codes: &[LinearCode], budget: Budget) -> Result<CodeCache> {
    let words: Vec<_> = codes
        .iter()
        .map(|c| c.enumerate(budget))
        .collect::<Result<_>>()?;
    Ok(CodeCache {
        sizes: words.iter().map(|w: &Vec<_>| w.len()).collect(),
        orders: codes.iter().map(|c| c.field().order()).collect(),
        words,
    })
}

impl CodeCache {
    /// Column-difference masks of every constituent codeword against the
    /// matching row of `received`.
    fn masks(&self, received: &[Vec<Symbol>]) -> Vec<Vec<u128>> {
        self.words
            .iter()
            .zip(received)
            .map(|(words, row)| {
                words
                    .iter()
                    .map(|(_, c)| {
                        let mut mask = 0u128;
                        for (j, (&cj, &yj)) in c.iter().zip(row).enumerate() {
                            if cj != yj {
                                mask |= 1 << j;
                            }
                        }
                        mask
                    })
                    .collect()
            })
            .collect()
    }

    fn array_at(&self, idx: &[usize]) -> ArrayCodeword {
        ArrayCodeword {
            row_messages: idx
                .iter()
                .zip(&self.words)
                .map(|(&c, w)| w[c].0.clone())
                .collect(),
            rows: idx
                .iter()
                .zip(&self.words)
                .map(|(&c, w)| w[c].1.clone())
                .collect(),
        }
    }
}

fn sample_uniform(rng: &mut ChaCha8Rng, orders: &[u32], n: usize) -> Vec<Vec<Symbol>> {
    orders
        .iter()
        .map(|&q| (0..n).map(|_| rng.gen_range(0..q) as Symbol).collect())
        .collect()
}

fn sample_mix(rng: &mut ChaCha8Rng, cache: &CodeCache, n: usize) -> Vec<Vec<Symbol>> {
    let pick = |rng: &mut ChaCha8Rng| -> Vec<usize> {
        cache.sizes.iter().map(|&s| rng.gen_range(0..s)).collect()
    };
    let base = pick(rng);
    let donor = pick(rng);
    let mut rows: Vec<Vec<Symbol>> = base
        .iter()
        .zip(&cache.words)
        .map(|(&c, w)| w[c].1.clone())
        .collect();
    let count = rng.gen_range(1..=n);
    let mut cols: Vec<usize> = (0..n).collect();
    for i in 0..count {
        let j = rng.gen_range(i..n);
        cols.swap(i, j);
    }
    for &col in &cols[..count] {
        for (row, (&c, w)) in rows.iter_mut().zip(donor.iter().zip(&cache.words)) {
            row[col] = w[c].1[col];
        }
    }
    rows
}

fn advance_array(rows: &mut [Vec<Symbol>], orders: &[u32]) -> bool {
    for i in (0..rows.len()).rev() {
        let top = (orders[i] - 1) as Symbol;
        for slot in rows[i].iter_mut().rev() {
            if *slot < top {
                *slot += 1;
                return true;
            }
            *slot = 0;
        }
    }
    false
}

/// Runs `visit` over either the whole array space or the sampled arrays,
/// returning the mode and the number of arrays visited. `visit` returns
/// false to stop early.
fn for_each_array<F>(
    cache: &CodeCache,
    n: usize,
    opts: &CheckOptions,
    mut visit: F,
) -> Result<(SweepMode, u64)>
where
    F: FnMut(&[Vec<Symbol>]) -> bool,
{
    let space = cache
        .orders
        .iter()
        .fold(1u128, |acc, &q| acc.saturating_mul(sweep::space_size(q, n)));
    if space <= opts.exhaustive_limit {
        opts.budget.charge(space)?;
        let mut rows: Vec<Vec<Symbol>> = cache
            .orders
            .iter()
            .map(|_| vec![0 as Symbol; n])
            .collect();
        let mut count = 0u64;
        loop {
            count += 1;
            if !visit(&rows) || !advance_array(&mut rows, &cache.orders) {
                break;
            }
        }
        return Ok((SweepMode::Exhaustive { arrays: space }, count));
    }
    let mut count = 0u64;
    let total = opts.uniform_samples + opts.mix_samples;
    for i in 0..total {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i);
        let rows = if i < opts.uniform_samples {
            sample_uniform(&mut rng, &cache.orders, n)
        } else {
            sample_mix(&mut rng, cache, n)
        };
        count += 1;
        if !visit(&rows) {
            break;
        }
    }
    Ok((
        SweepMode::Sampled {
            uniform: opts.uniform_samples,
            mixes: opts.mix_samples,
            seed: opts.seed,
        },
        count,
    ))
}

/// Empirically checks that (tau, L)-list decodability survives ell-fold
/// interleaving of `base`.
///
/// Preconditions are enforced up front: the field order must exceed
/// L(L+1)/2, and (unless `opts.verify_constituents` is off) the base must
/// pass the exhaustive (tau, L) check. Each visited received array is then
/// tested for more than L array codewords within column distance tau; the
/// sweep is exhaustive when the array space is small and sampled
/// (uniform + column mixes) otherwise.
pub fn check_preservation(
    base: &LinearCode,
    tau: usize,
    l: usize,
    ell: usize,
    opts: &CheckOptions,
) -> Result<PreservationReport> {
    if l == 0 || ell == 0 {
        return Err(Error::Infeasible("list size and levels must be >= 1".into()));
    }
    check_alphabet_premise(std::slice::from_ref(base), l)?;
    check_column_cap(base.n())?;
    if opts.verify_constituents {
        if let Some(v) = lincode::is_list_decodable(base, tau, l, opts.budget)? {
            return Err(Error::Infeasible(format!(
                "base code is not ({tau}, {l})-list decodable: {} codewords within \
                 distance {tau} of {:?}",
                v.codewords.len(),
                v.received
            )));
        }
    }
    let codes = vec![base.clone(); ell];
    let cache = build_cache(&codes, opts.budget)?;
    opts.budget.charge(cache.sizes.iter().fold(1u128, |a, &s| {
        a.saturating_mul(s as u128)
    }))?;
    let mut violation = None;
    let (mode, arrays_checked) = for_each_array(&cache, base.n(), opts, |rows| {
        let masks = cache.masks(rows);
        let mut idx = vec![0usize; cache.sizes.len()];
        let mut inside: Vec<Vec<usize>> = Vec::new();
        loop {
            let mask = idx
                .iter()
                .zip(&masks)
                .fold(0u128, |acc, (&c, m)| acc | m[c]);
            if mask.count_ones() as usize <= tau {
                inside.push(idx.clone());
                if inside.len() > l {
                    violation = Some(ListSizeViolation {
                        received: rows.to_vec(),
                        members: inside.iter().map(|i| cache.array_at(i)).collect(),
                    });
                    return false;
                }
            }
            if !advance_indices(&mut idx, &cache.sizes) {
                return true;
            }
        }
    })?;
    Ok(PreservationReport {
        mode,
        arrays_checked,
        violation,
    })
}

/// Empirically checks that strong (tau, 2)-list decodability survives
/// interleaving of the given constituent codes (which may differ per row).
///
/// Validates tau in thirds and tau <= (2d-1)/3 for d the smallest
/// constituent minimum distance. With `opts.verify_constituents` on, each
/// constituent is exhaustively checked for strong (tau, 2)-list
/// decodability; a failure is reported in the result (with its witness)
/// rather than aborting, since the array-level behaviour of a premise-less
/// interleaving is still worth measuring. Every visited received array is
/// tested against all codeword triples: the minimum summed column distance
/// over triples is the sum of the three individually smallest distances.
pub fn check_strong_preservation(
    codes: &[LinearCode],
    tau: &Rational,
    opts: &CheckOptions,
) -> Result<StrongPreservationReport> {
    let ic = InterleavedCode::mixed(codes.to_vec())?;
    check_column_cap(ic.n())?;
    let threshold = lincode::strong_threshold(tau, 2)?;
    let threshold = u128::try_from(threshold).expect("non-negative");
    let mut min_distance = usize::MAX;
    for code in codes {
        min_distance = min_distance.min(code.min_distance(opts.budget)?);
    }
    let cap = Rational::new((2 * min_distance as i64 - 1).into(), 3.into());
    if *tau > cap {
        return Err(Error::Infeasible(format!(
            "radius {tau} exceeds (2d-1)/3 = {cap} for constituent distance {min_distance}"
        )));
    }
    let mut premise = PremiseStatus::Skipped;
    if opts.verify_constituents {
        premise = PremiseStatus::Verified;
        for (i, code) in codes.iter().enumerate() {
            if let Some(witness) =
                lincode::is_strongly_list_decodable(code, tau, 2, opts.budget)?
            {
                premise = PremiseStatus::Failed {
                    constituent: i,
                    witness,
                };
                break;
            }
        }
    }
    let cache = build_cache(codes, opts.budget)?;
    opts.budget.charge(cache.sizes.iter().fold(1u128, |a, &s| {
        a.saturating_mul(s as u128)
    }))?;
    let total_codewords = ic.codeword_count();
    let mut violation = None;
    let (mode, arrays_checked) = for_each_array(&cache, ic.n(), opts, |rows| {
        if total_codewords < 3 {
            return true;
        }
        let masks = cache.masks(rows);
        let mut idx = vec![0usize; cache.sizes.len()];
        // The three smallest (distance, index tuple) pairs, sorted.
        let mut best: Vec<(usize, Vec<usize>)> = Vec::with_capacity(4);
        loop {
            let mask = idx
                .iter()
                .zip(&masks)
                .fold(0u128, |acc, (&c, m)| acc | m[c]);
            let d = mask.count_ones() as usize;
            if best.len() < 3 {
                let pos = best.partition_point(|(bd, _)| *bd <= d);
                best.insert(pos, (d, idx.clone()));
            } else if d < best[2].0 {
                best.pop();
                let pos = best.partition_point(|(bd, _)| *bd <= d);
                best.insert(pos, (d, idx.clone()));
            }
            if !advance_indices(&mut idx, &cache.sizes) {
                break;
            }
        }
        let sum: usize = best.iter().map(|(d, _)| d).sum();
        if sum as u128 <= threshold {
            violation = Some(TripleViolation {
                received: rows.to_vec(),
                arrays: best.iter().map(|(_, i)| cache.array_at(i)).collect(),
                sum_distance: sum,
            });
            return false;
        }
        true
    })?;
    Ok(StrongPreservationReport {
        premise,
        min_distance,
        mode,
        arrays_checked,
        violation,
    })
}
