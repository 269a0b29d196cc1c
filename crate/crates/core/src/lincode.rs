//! Linear block codes over GF(q): generalized Reed-Solomon construction,
//! exhaustive distance and list-decoding verification, and a seeded search
//! for codes whose strong list-decoding radius meets the generic upper
//! bound.
//!
//! Verification here is by enumeration, deliberately: these routines are the
//! ground truth the packet-level constructions are checked against, so they
//! trade speed for being obviously correct. Every sweep is budget-gated.

use num::{BigInt, FromPrimitive, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gf::{Field, Symbol};
use crate::ratio::Rational;
use crate::sweep;
use crate::{Budget, Error, Result};

/// Hamming distance between equal-length vectors.
pub fn hamming(a: &[Symbol], b: &[Symbol]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// An [n, k] linear code given by a full-rank generator matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Field,
    n: usize,
    k: usize,
    gen: Vec<Vec<Symbol>>,
    /// Row transform taking `gen` to reduced row echelon form, and the
    /// pivot columns; used to map codewords back to messages.
    transform: Vec<Vec<Symbol>>,
    pivots: Vec<usize>,
}

/// Evaluation points and column multipliers defining a generalized
/// Reed-Solomon code. This is also the JSON wire format used by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrsParams {
    pub eval_points: Vec<Symbol>,
    pub multipliers: Vec<Symbol>,
}

/// Row-reduces `mat`, returning (rref, transform, pivot columns) with
/// transform * mat = rref.
fn row_reduce(
    field: &Field,
    mat: &[Vec<Symbol>],
) -> (Vec<Vec<Symbol>>, Vec<Vec<Symbol>>, Vec<usize>) {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut a = mat.to_vec();
    let mut u: Vec<Vec<Symbol>> = (0..rows)
        .map(|i| {
            let mut row = vec![0; rows];
            row[i] = 1;
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(r, pr);
        u.swap(r, pr);
        let inv = field.inv(a[r][c]).expect("pivot is nonzero");
        for x in a[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for x in u[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    let s = field.mul(f, a[r][j]);
                    a[i][j] = field.sub(a[i][j], s);
                }
                for j in 0..rows {
                    let s = field.mul(f, u[r][j]);
                    u[i][j] = field.sub(u[i][j], s);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, u, pivots)
}

impl LinearCode {
    /// Wraps a generator matrix, validating shape, symbol range, and full
    /// row rank.
    pub fn from_generator(field: Field, gen: Vec<Vec<Symbol>>) -> Result<LinearCode> {
        let k = gen.len();
        if k == 0 {
            return Err(Error::Infeasible("empty generator".into()));
        }
        let n = gen[0].len();
        if n == 0 || k > n {
            return Err(Error::Infeasible(format!(
                "generator shape {k}x{n} is not a valid [n, k]"
            )));
        }
        for row in &gen {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            if let Some(&s) = row.iter().find(|&&s| !field.contains(s)) {
                return Err(Error::Infeasible(format!(
                    "symbol {s} outside {field}",
                    field = field
                )));
            }
        }
        let (_, transform, pivots) = row_reduce(&field, &gen);
        if pivots.len() != k {
            return Err(Error::Infeasible(format!(
                "generator has rank {} < k = {k}",
                pivots.len()
            )));
        }
        Ok(LinearCode {
            field,
            n,
            k,
            gen,
            transform,
            pivots,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &[Vec<Symbol>] {
        &self.gen
    }

    /// Number of codewords q^k.
    pub fn size(&self) -> u128 {
        sweep::space_size(self.field.order(), self.k)
    }

    pub fn encode(&self, msg: &[Symbol]) -> Result<Vec<Symbol>> {
        if msg.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                got: msg.len(),
            });
        }
        let mut out = vec![0 as Symbol; self.n];
        self.encode_into(msg, &mut out);
        Ok(out)
    }

    fn encode_into(&self, msg: &[Symbol], out: &mut [Symbol]) {
        let f = &self.field;
        out.fill(0);
        for (m, row) in msg.iter().zip(&self.gen) {
            if *m == 0 {
                continue;
            }
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(*m, g));
            }
        }
    }

    /// The message encoding to `word`, or None when `word` is not a
    /// codeword. This doubles as the membership test.
    pub fn message_of(&self, word: &[Symbol]) -> Option<Vec<Symbol>> {
        if word.len() != self.n {
            return None;
        }
        let f = &self.field;
        // Solve m' * rref = word on the pivot columns, then map back
        // through the row transform: msg = m' * transform.
        let mut msg = vec![0 as Symbol; self.k];
        for (i, &p) in self.pivots.iter().enumerate() {
            let mi = word[p];
            if mi == 0 {
                continue;
            }
            for (slot, &t) in msg.iter_mut().zip(&self.transform[i]) {
                *slot = f.add(*slot, f.mul(mi, t));
            }
        }
        let back = self.encode(&msg).expect("length is k");
        (back == word).then_some(msg)
    }

    /// Visits every (message, codeword) pair in lexicographic message
    /// order. The codeword is updated incrementally, so a full sweep costs
    /// O(q^k * n / (1 - 1/q)) symbol operations.
    pub fn visit_codewords<F>(&self, budget: Budget, mut f: F) -> Result<()>
    where
        F: FnMut(&[Symbol], &[Symbol]) -> bool,
    {
        budget.charge(self.size())?;
        let field = &self.field;
        let q = field.order();
        let mut msg = vec![0 as Symbol; self.k];
        let mut cw = vec![0 as Symbol; self.n];
        loop {
            if !f(&msg, &cw) {
                return Ok(());
            }
            // Lexicographic successor with incremental codeword update.
            let mut j = self.k;
            let mut advanced = false;
            while j > 0 {
                j -= 1;
                let old = msg[j];
                let new = if u32::from(old) + 1 == q { 0 } else { old + 1 };
                msg[j] = new;
                let delta = field.sub(new, old);
                for (c, &g) in cw.iter_mut().zip(&self.gen[j]) {
                    *c = field.add(*c, field.mul(delta, g));
                }
                if new != 0 {
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                return Ok(());
            }
        }
    }

    /// All (message, codeword) pairs, materialized.
    pub fn enumerate(&self, budget: Budget) -> Result<Vec<(Vec<Symbol>, Vec<Symbol>)>> {
        let mut out = Vec::new();
        self.visit_codewords(budget, |m, c| {
            out.push((m.to_vec(), c.to_vec()));
            true
        })?;
        Ok(out)
    }

    /// Exact minimum distance by exhaustive enumeration of q^k codewords.
    pub fn min_distance(&self, budget: Budget) -> Result<usize> {
        let mut best = self.n + 1;
        self.visit_codewords(budget, |m, c| {
            if m.iter().any(|&x| x != 0) {
                let w = c.iter().filter(|&&x| x != 0).count();
                best = best.min(w);
            }
            best > 1
        })?;
        debug_assert!(best <= self.n);
        Ok(best)
    }

    /// Whether the code attains the Singleton bound d = n - k + 1.
    pub fn is_mds(&self, budget: Budget) -> Result<bool> {
        Ok(self.min_distance(budget)? == self.n - self.k + 1)
    }

    /// Generator for the same code that is the identity on the cyclic
    /// column window starting at `start` (0-based), i.e. columns
    /// start, start+1, ..., start+k-1 taken mod n.
    ///
    /// Fails when those columns are not an information set; for an MDS code
    /// every window works.
    pub fn systematic_window_generator(&self, start: usize) -> Result<Vec<Vec<Symbol>>> {
        if start >= self.n {
            return Err(Error::Infeasible(format!(
                "window start {start} out of range for n = {}",
                self.n
            )));
        }
        let f = &self.field;
        let window: Vec<usize> = (0..self.k).map(|i| (start + i) % self.n).collect();
        // Invert the k x k submatrix on the window columns.
        let sub: Vec<Vec<Symbol>> = self
            .gen
            .iter()
            .map(|row| window.iter().map(|&c| row[c]).collect())
            .collect();
        let (rref, inv, pivots) = row_reduce(f, &sub);
        if pivots.len() != self.k || rref.iter().enumerate().any(|(i, r)| {
            r.iter()
                .enumerate()
                .any(|(j, &v)| v != u16::from(i == j))
        }) {
            return Err(Error::Infeasible(format!(
                "columns {window:?} are not an information set"
            )));
        }
        let out: Vec<Vec<Symbol>> = inv
            .iter()
            .map(|irow| {
                (0..self.n)
                    .map(|j| {
                        let mut acc = 0;
                        for (t, &w) in irow.iter().enumerate() {
                            acc = f.add(acc, f.mul(w, self.gen[t][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        for (i, row) in out.iter().enumerate() {
            for (w, &c) in window.iter().enumerate() {
                debug_assert_eq!(row[c], u16::from(i == w));
            }
        }
        Ok(out)
    }
}

/// Builds a generalized Reed-Solomon code: row i of the generator is
/// (m_0 a_0^i, ..., m_{n-1} a_{n-1}^i) for distinct evaluation points a_j
/// and nonzero multipliers m_j.
pub fn grs_build(field: &Field, n: usize, k: usize, params: &GrsParams) -> Result<LinearCode> {
    if k == 0 || k > n {
        return Err(Error::Infeasible(format!("bad dimensions [n={n}, k={k}]")));
    }
    if n as u128 > field.order() as u128 {
        return Err(Error::Infeasible(format!(
            "length {n} exceeds field order {}",
            field.order()
        )));
    }
    if params.eval_points.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: params.eval_points.len(),
        });
    }
    if params.multipliers.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: params.multipliers.len(),
        });
    }
    for (j, &a) in params.eval_points.iter().enumerate() {
        if !field.contains(a) {
            return Err(Error::Infeasible(format!("evaluation point {a} not in field")));
        }
        if params.eval_points[..j].contains(&a) {
            return Err(Error::Infeasible(format!(
                "repeated evaluation point {a}"
            )));
        }
    }
    if params.multipliers.iter().any(|&m| m == 0) {
        return Err(Error::Infeasible("zero multiplier".into()));
    }
    if params.multipliers.iter().any(|&m| !field.contains(m)) {
        return Err(Error::Infeasible("multiplier not in field".into()));
    }
    let gen: Vec<Vec<Symbol>> = (0..k)
        .map(|i| {
            params
                .eval_points
                .iter()
                .zip(&params.multipliers)
                .map(|(&a, &m)| field.mul(m, field.pow(a, i as u64)))
                .collect()
        })
        .collect();
    LinearCode::from_generator(field.clone(), gen)
}

/// A witness that (tau, L)-list decodability fails: a received word with
/// L+1 codewords inside the radius-tau ball.
#[derive(Clone, Debug)]
pub struct ListViolation {
    pub received: Vec<Symbol>,
    pub messages: Vec<Vec<Symbol>>,
    pub codewords: Vec<Vec<Symbol>>,
}

/// Exhaustively checks that every radius-`tau` ball contains at most `L`
/// codewords. Ok(None) means the property holds; Ok(Some(w)) is a
/// counterexample.
pub fn is_list_decodable(
    code: &LinearCode,
    tau: usize,
    l: usize,
    budget: Budget,
) -> Result<Option<ListViolation>> {
    if l == 0 {
        return Err(Error::Infeasible("list size must be >= 1".into()));
    }
    let q = code.field().order();
    budget.charge(sweep::space_size(q, code.n))?;
    let codewords = code.enumerate(budget)?;
    let mut y = vec![0 as Symbol; code.n];
    loop {
        let mut inside: Vec<usize> = Vec::new();
        for (idx, (_, cw)) in codewords.iter().enumerate() {
            if hamming(&y, cw) <= tau {
                inside.push(idx);
                if inside.len() > l {
                    return Ok(Some(ListViolation {
                        received: y.clone(),
                        messages: inside
                            .iter()
                            .map(|&i| codewords[i].0.clone())
                            .collect(),
                        codewords: inside
                            .iter()
                            .map(|&i| codewords[i].1.clone())
                            .collect(),
                    }));
                }
            }
        }
        if !sweep::advance(&mut y, q) {
            return Ok(None);
        }
    }
}

/// A witness that strong (tau, L)-list decodability fails: L+1 distinct
/// codewords whose summed distance from `received` is at most (L+1) tau.
#[derive(Clone, Debug)]
pub struct StrongViolation {
    pub received: Vec<Symbol>,
    pub messages: Vec<Vec<Symbol>>,
    pub codewords: Vec<Vec<Symbol>>,
    pub sum_distance: usize,
}

/// Validates tau and returns (L+1) tau as an integer.
pub(crate) fn strong_threshold(tau: &Rational, l: usize) -> Result<BigInt> {
    if tau.is_negative() {
        return Err(Error::Infeasible("negative radius".into()));
    }
    let scaled = tau * &Rational::from_integer(BigInt::from_usize(l + 1).unwrap());
    if !scaled.is_integer() {
        return Err(Error::Infeasible(format!(
            "radius {tau} is not an integer multiple of 1/{}",
            l + 1
        )));
    }
    Ok(scaled.to_integer())
}

/// Exhaustively checks strong (tau, L)-list decodability: for every
/// received word, every L+1 distinct codewords lie at summed distance
/// strictly greater than (L+1) tau.
///
/// The minimum summed distance over (L+1)-subsets is attained by the L+1
/// individually closest codewords, so each received word costs one pass
/// over the code rather than a pass per subset.
pub fn is_strongly_list_decodable(
    code: &LinearCode,
    tau: &Rational,
    l: usize,
    budget: Budget,
) -> Result<Option<StrongViolation>> {
    if l == 0 {
        return Err(Error::Infeasible("list size must be >= 1".into()));
    }
    let threshold = strong_threshold(tau, l)?;
    let q = code.field().order();
    if code.size() <= l as u128 {
        // Fewer than L+1 distinct codewords exist.
        return Ok(None);
    }
    budget.charge(sweep::space_size(q, code.n))?;
    let codewords = code.enumerate(budget)?;
    let mut y = vec![0 as Symbol; code.n];
    // (distance, index) of the L+1 closest codewords, kept sorted.
    let mut best: Vec<(usize, usize)> = Vec::with_capacity(l + 2);
    loop {
        best.clear();
        for (idx, (_, cw)) in codewords.iter().enumerate() {
            let d = hamming(&y, cw);
            if best.len() <= l {
                let pos = best.partition_point(|&(bd, _)| bd <= d);
                best.insert(pos, (d, idx));
            } else if d < best[l].0 {
                best.pop();
                let pos = best.partition_point(|&(bd, _)| bd <= d);
                best.insert(pos, (d, idx));
            }
        }
        let sum: usize = best.iter().map(|&(d, _)| d).sum();
        if BigInt::from_usize(sum).unwrap() <= threshold {
            return Ok(Some(StrongViolation {
                received: y.clone(),
                messages: best.iter().map(|&(_, i)| codewords[i].0.clone()).collect(),
                codewords: best.iter().map(|&(_, i)| codewords[i].1.clone()).collect(),
                sum_distance: sum,
            }));
        }
        if !sweep::advance(&mut y, q) {
            return Ok(None);
        }
    }
}

/// The generic upper bound on the strong list-decoding radius of a linear
/// [n, k] code: L(n-k)/(L+1). Applies when L <= min(q-1, C(n-1, k-1)).
pub fn strong_radius_bound(n: usize, k: usize, l: usize) -> Rational {
    Rational::new(
        BigInt::from_usize(l * (n - k)).unwrap(),
        BigInt::from_usize(l + 1).unwrap(),
    )
}

fn check_l_range(field: &Field, n: usize, k: usize, l: usize) -> Result<()> {
    let cap = (field.order() as u128 - 1).min(sweep::binom(n as u64 - 1, k as u64 - 1));
    if l < 2 || (l as u128) > cap {
        return Err(Error::Infeasible(format!(
            "L = {l} outside [2, min(q-1, C(n-1,k-1))] = [2, {cap}]"
        )));
    }
    Ok(())
}

/// Checks whether the code attains the strong list-decoding radius bound
/// for list size L, i.e. is strongly (L(n-k)/(L+1), L)-list decodable.
pub fn is_l_mds(
    code: &LinearCode,
    l: usize,
    budget: Budget,
) -> Result<Option<StrongViolation>> {
    check_l_range(code.field(), code.n(), code.k(), l)?;
    let tau = strong_radius_bound(code.n(), code.k(), l);
    is_strongly_list_decodable(code, &tau, l, budget)
}

/// Everything the search verified about the code it returned.
#[derive(Clone, Debug, Serialize)]
pub struct LmdsReport {
    /// Strong list-decoding radius checked, as (numerator, denominator).
    pub tau: (u64, u64),
    pub list_size: usize,
    pub min_distance: usize,
    pub mds: bool,
    pub iterations: u64,
}

/// Outcome of a successful L-MDS search.
pub struct SearchOutcome {
    pub params: GrsParams,
    pub code: LinearCode,
    pub report: LmdsReport,
}

/// Samples GRS parameter sets from a seeded generator until one passes the
/// exhaustive L-MDS check.
///
/// Deterministic: iteration i draws from stream i of a ChaCha generator
/// seeded with `seed`, so the outcome depends only on (field, n, k, l,
/// seed). Fails with [`Error::SearchExhausted`] after `max_iters` misses.
pub fn search_l_mds(
    field: &Field,
    n: usize,
    k: usize,
    l: usize,
    seed: u64,
    max_iters: u64,
    budget: Budget,
) -> Result<SearchOutcome> {
    if k == 0 || k > n {
        return Err(Error::Infeasible(format!("bad dimensions [n={n}, k={k}]")));
    }
    if n as u128 > field.order() as u128 {
        return Err(Error::Infeasible(format!(
            "length {n} exceeds field order {} (needs n distinct points)",
            field.order()
        )));
    }
    check_l_range(field, n, k, l)?;
    let q = field.order();
    for iter in 0..max_iters {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(iter);
        let mut pool: Vec<Symbol> = field.elements().collect();
        for i in 0..n {
            let j = rng.gen_range(i..pool.len());
            pool.swap(i, j);
        }
        pool.truncate(n);
        let multipliers: Vec<Symbol> = (0..n)
            .map(|_| rng.gen_range(1..q) as Symbol)
            .collect();
        let params = GrsParams {
            eval_points: pool,
            multipliers,
        };
        let code = grs_build(field, n, k, &params)?;
        if is_l_mds(&code, l, budget)?.is_none() {
            let tau = strong_radius_bound(n, k, l);
            let min_distance = code.min_distance(budget)?;
            let report = LmdsReport {
                tau: (
                    u64::try_from(tau.numer().clone()).expect("small"),
                    u64::try_from(tau.denom().clone()).expect("small"),
                ),
                list_size: l,
                min_distance,
                mds: min_distance == n - k + 1,
                iterations: iter + 1,
            };
            return Ok(SearchOutcome {
                params,
                code,
                report,
            });
        }
    }
    Err(Error::SearchExhausted {
        iterations: max_iters,
    })
}
