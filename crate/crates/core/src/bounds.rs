//! Exact rate-distortion arithmetic: converse bounds for any packet code,
//! maximum anticode sizes, achievable curves for the constructions, and
//! the fixed-error-fraction asymptotics. Everything is a big rational end
//! to end; nothing here touches floating point.

use num::{pow::pow as big_pow, BigInt, BigUint, One, Signed, Zero};

use crate::gf::Symbol;
use crate::ratio::{exact_log, ilog_floor, rat, Rational};
use crate::{sweep, Budget, Error, Result};

fn rq(x: u64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// A rate-distortion pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdPoint {
    pub r: Rational,
    pub d: Rational,
}

pub fn rd(r: Rational, d: Rational) -> RdPoint {
    RdPoint { r, d }
}

/// Piecewise-linear curve over exact rationals, rate-ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdCurve {
    points: Vec<RdPoint>,
}

impl RdCurve {
    /// Validates strict rate monotonicity and nonnegative distortion.
    pub fn new(points: Vec<RdPoint>) -> Result<RdCurve> {
        if points.is_empty() {
            return Err(Error::Infeasible("empty curve".into()));
        }
        for p in &points {
            if p.d.is_negative() {
                return Err(Error::Infeasible("negative distortion on curve".into()));
            }
        }
        if points.windows(2).any(|w| w[0].r >= w[1].r) {
            return Err(Error::Infeasible(
                "curve rates must be strictly increasing".into(),
            ));
        }
        Ok(RdCurve { points })
    }

    pub fn points(&self) -> &[RdPoint] {
        &self.points
    }

    /// Linear interpolation at rate `r`; None outside the curve's span.
    pub fn distortion_at(&self, r: &Rational) -> Option<Rational> {
        let first = self.points.first()?;
        let last = self.points.last()?;
        if r < &first.r || r > &last.r {
            return None;
        }
        let i = self.points.iter().rposition(|p| &p.r <= r)?;
        let a = &self.points[i];
        if &a.r == r || i + 1 == self.points.len() {
            return Some(a.d.clone());
        }
        let b = &self.points[i + 1];
        Some(&a.d + (&b.d - &a.d) * (r - &a.r) / (&b.r - &a.r))
    }
}

/// A curve with its emission name and an optional caveat carried into
/// output headers.
#[derive(Clone, Debug)]
pub struct NamedCurve {
    pub name: String,
    pub note: Option<String>,
    pub curve: RdCurve,
}

/// Curves that could be computed, plus the ones that could not and why.
#[derive(Clone, Debug, Default)]
pub struct CurveSet {
    pub curves: Vec<NamedCurve>,
    pub omitted: Vec<(String, String)>,
}

impl CurveSet {
    pub fn get(&self, name: &str) -> Option<&NamedCurve> {
        self.curves.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, note: Option<String>, points: Vec<RdPoint>) -> Result<()> {
        self.curves.push(NamedCurve {
            name: name.into(),
            note,
            curve: RdCurve::new(points)?,
        });
        Ok(())
    }

    fn omit(&mut self, name: &str, reason: impl Into<String>) {
        self.omitted.push((name.into(), reason.into()));
    }
}

/// Window count of the polytope construction: T + floor(T^2/4) + 1. The
/// construction needs at least one more packet than this.
pub fn f_poly(t: u64) -> u64 {
    t + t * t / 4 + 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConverseVariant {
    /// Counting bound on any code: 1/(N-T) for positive distortion,
    /// 1/(N-2T) at zero.
    Singleton,
    /// Stronger bound for linear codes: (1-D)/(N-2T).
    Linear,
}

/// Lower bound on the per-packet rate of any code with the given
/// parameters. Zero distortion is impossible with fewer than 2T+1
/// packets; the linear variant needs 2T+1 packets for any distortion.
pub fn converse_rate(
    n: usize,
    t: usize,
    d: &Rational,
    variant: ConverseVariant,
) -> Result<Rational> {
    if t == 0 || n <= t {
        return Err(Error::Infeasible(format!(
            "need N > T >= 1, got N = {n}, T = {t}"
        )));
    }
    if d.is_negative() || d > &Rational::one() {
        return Err(Error::Infeasible("distortion must lie in [0, 1]".into()));
    }
    let surplus = || {
        if n >= 2 * t + 1 {
            Ok(n - 2 * t)
        } else {
            Err(Error::Infeasible(format!(
                "N = {n} < 2T+1 = {}",
                2 * t + 1
            )))
        }
    };
    match variant {
        ConverseVariant::Singleton if d.is_zero() => Ok(rat(1, surplus()? as i64)),
        ConverseVariant::Singleton => Ok(rat(1, (n - t) as i64)),
        ConverseVariant::Linear => Ok((Rational::one() - d) / rq(surplus()? as u64)),
    }
}

fn big_binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The window radius used by the maximum-anticode formula: the largest
/// r >= 0 with 2r <= min{d, (2(n-d)-q)/(q-2)}, reading the second term as
/// infinite for q = 2 and clamping at zero when it is negative (large
/// alphabets, where the plain subcube is already optimal).
fn anticode_radius(q: u32, n: u64, d: u64) -> u64 {
    let from_d = d / 2;
    if q == 2 {
        return from_d;
    }
    let free = 2 * (n - d);
    if u64::from(q) > free {
        return 0;
    }
    from_d.min((free - u64::from(q)) / (2 * u64::from(q - 2)))
}

/// Maximum size of a set of words in [q]^n with pairwise Hamming distance
/// at most d, for d < n, by the diametric characterization: a window of
/// n-d+2r coordinates holding at least n-d+r fixed values, the rest free.
pub fn anticode_size(q: u32, n: u64, d: u64) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::Infeasible("alphabet must have at least 2 symbols".into()));
    }
    if d >= n {
        return Err(Error::Infeasible(format!(
            "anticode diameter {d} must be smaller than the length {n}"
        )));
    }
    let r = anticode_radius(q, n, d);
    let m = n - d + 2 * r;
    let mut count = BigUint::zero();
    for j in (n - d + r)..=m {
        count += big_binom(m, j) * big_pow(BigUint::from(q - 1), (m - j) as usize);
    }
    Ok(count * big_pow(BigUint::from(q), (d - 2 * r) as usize))
}

/// Explicit members of the window anticode behind [`anticode_size`]:
/// words with at least n-d+r coordinates equal to 1 among the first
/// n-d+2r. Tests check the set against the counting formula and verify
/// its diameter directly.
pub fn window_anticode_members(
    q: u32,
    n: u64,
    d: u64,
    budget: Budget,
) -> Result<Vec<Vec<Symbol>>> {
    if q < 2 || d >= n {
        return Err(Error::Infeasible("need q >= 2 and d < n".into()));
    }
    budget.charge(sweep::space_size(q, n as usize))?;
    let r = anticode_radius(q, n, d);
    let m = (n - d + 2 * r) as usize;
    let need = (n - d + r) as usize;
    Ok(sweep::words(q, n as usize)
        .filter(|w| w[..m].iter().filter(|&&s| s == 1).count() >= need)
        .collect())
}

/// Exact maximum anticode size by branch-and-bound clique search over the
/// distance-at-most-d graph. Only for tiny spaces: at most 128 words.
pub fn anticode_brute_force(q: u32, n: u64, d: u64, budget: Budget) -> Result<BigUint> {
    if q < 2 {
        return Err(Error::Infeasible("alphabet must have at least 2 symbols".into()));
    }
    let size = sweep::space_size(q, n as usize);
    if size > 128 {
        return Err(Error::Budget {
            needed: size,
            limit: 128,
        });
    }
    budget.charge(size * size)?;
    let words: Vec<Vec<Symbol>> = sweep::words(q, n as usize).collect();
    let v = words.len();
    let adj: Vec<u128> = (0..v)
        .map(|i| {
            let mut mask = 0u128;
            for j in 0..v {
                let dist = words[i]
                    .iter()
                    .zip(&words[j])
                    .filter(|(a, b)| a != b)
                    .count() as u64;
                if j != i && dist <= d {
                    mask |= 1 << j;
                }
            }
            mask
        })
        .collect();

    // Greedy-coloring upper bound keeps the search shallow even when the
    // optimum clique is large (e.g. the complement of a perfect matching).
    fn color_bound(adj: &[u128], mut cand: u128) -> u32 {
        let mut colors = 0;
        while cand != 0 {
            colors += 1;
            let mut class = cand;
            while class != 0 {
                let u = class.trailing_zeros() as usize;
                cand &= !(1 << u);
                class &= !(1 << u) & !adj[u];
            }
        }
        colors
    }

    fn extend(adj: &[u128], cand: u128, len: u32, best: &mut u32) {
        if cand == 0 {
            *best = (*best).max(len);
            return;
        }
        if len + color_bound(adj, cand) <= *best {
            return;
        }
        let mut rest = cand;
        while rest != 0 {
            if len + rest.count_ones() <= *best {
                return;
            }
            let u = rest.trailing_zeros() as usize;
            rest &= !(1 << u);
            extend(adj, rest & adj[u], len + 1, best);
        }
    }

    let all = if v == 128 { u128::MAX } else { (1u128 << v) - 1 };
    let mut best = 0;
    extend(&adj, all, 0, &mut best);
    Ok(BigUint::from(best))
}

/// Rate bound from the anticode argument:
/// (1 - log_q(Ant_q(k, kD))/k) / (N - 2T). The distortion must be a
/// multiple of 1/k so that kD indexes an anticode diameter. When the
/// anticode size is an exact power of q the log is exact; otherwise it is
/// bracketed from above in steps of 1/64, which can only weaken the bound
/// and never overstate it.
pub fn converse_anticode(
    n: usize,
    t: usize,
    k: u64,
    d: &Rational,
    q: u32,
) -> Result<Rational> {
    if t == 0 || n < 2 * t + 1 {
        return Err(Error::Infeasible(format!(
            "need N >= 2T+1 >= 3, got N = {n}, T = {t}"
        )));
    }
    if k == 0 {
        return Err(Error::Infeasible("empty message".into()));
    }
    if d.is_negative() || d >= &Rational::one() {
        return Err(Error::Infeasible("distortion must lie in [0, 1)".into()));
    }
    let kd = d * rq(k);
    if !kd.is_integer() {
        return Err(Error::Infeasible(format!(
            "k*D = {kd} must be an integer to index an anticode diameter"
        )));
    }
    let kd = u64::try_from(kd.to_integer()).expect("0 <= kD < k");
    let surplus = rq((n - 2 * t) as u64);
    if kd == 0 {
        return Ok(Rational::one() / surplus);
    }
    let ant = anticode_size(q, k, kd)?;
    let log = match exact_log(&ant, q) {
        Some(e) => rq(e),
        None => {
            // Smallest p with q^p >= ant^64, so log_q(ant) <= p/64.
            const S: usize = 64;
            let target = big_pow(ant, S);
            let mut p = ilog_floor(&target, q);
            if big_pow(BigUint::from(q), p as usize) < target {
                p += 1;
            }
            rat(p as i64, S as i64)
        }
    };
    Ok((Rational::one() - log / rq(k)) / surplus)
}

/// The closed-form converse max{(1-D)/(N-2T), 1/(N-T)}, valid verbatim
/// for alphabets of size at least 2k(1-D)/3 + 2; smaller alphabets fall
/// back to the anticode bound combined with the counting bound.
pub fn corollary1_bound(n: usize, t: usize, k: u64, d: &Rational, q: u32) -> Result<Rational> {
    if t == 0 || n < 2 * t + 1 {
        return Err(Error::Infeasible(format!(
            "need N >= 2T+1 >= 3, got N = {n}, T = {t}"
        )));
    }
    if d.is_negative() || d > &Rational::one() {
        return Err(Error::Infeasible("distortion must lie in [0, 1]".into()));
    }
    let counting = rat(1, (n - t) as i64);
    let threshold = rq(2 * k) * (Rational::one() - d) / rq(3) + rq(2);
    if rq(u64::from(q)) >= threshold {
        let linear = (Rational::one() - d) / rq((n - 2 * t) as u64);
        Ok(linear.max(counting))
    } else if d < &Rational::one() {
        Ok(converse_anticode(n, t, k, d, q)?.max(counting))
    } else {
        Ok(counting)
    }
}

/// The converse boundary as a curve: D >= 1 - (N-2T)R between the two
/// rate extremes, flat at zero beyond. With fewer than 2T+1 packets only
/// the rate floor survives, emitted as a single point at D = 1 and
/// flagged in `omitted`.
pub fn converse_curves(n: usize, t: usize) -> Result<CurveSet> {
    if t == 0 || n <= t {
        return Err(Error::Infeasible(format!(
            "need N > T >= 1, got N = {n}, T = {t}"
        )));
    }
    let mut set = CurveSet::default();
    let floor = rat(1, (n - t) as i64);
    if n >= 2 * t + 1 {
        let mut pts = vec![
            rd(floor, rat(t as i64, (n - t) as i64)),
            rd(rat(1, (n - 2 * t) as i64), Rational::zero()),
        ];
        if n - 2 * t > 1 {
            pts.push(rd(Rational::one(), Rational::zero()));
        }
        set.push("converse", None, pts)?;
    } else {
        set.push(
            "converse_singleton",
            Some("rate floor only; zero distortion needs N >= 2T+1".into()),
            vec![rd(floor, Rational::one())],
        )?;
        set.omit(
            "converse",
            format!("zero-distortion bound needs N >= 2T+1 = {}, got N = {n}", 2 * t + 1),
        );
    }
    Ok(set)
}

/// Achievable rate-distortion curves for N packets with T alterable:
/// MDS time-sharing, the polytope reference line, the interleaved-window
/// broken lines for each requested list size (plus their merged broken
/// line), and the repetition-window line when N = 2T+1. Passing the
/// alphabet size gates the interleaved curves on its premise.
pub fn achievable_curves(
    n: usize,
    t: usize,
    q: Option<u32>,
    ls: &[usize],
) -> Result<CurveSet> {
    if t == 0 || n <= t {
        return Err(Error::Infeasible(format!(
            "need N > T >= 1, got N = {n}, T = {t}"
        )));
    }
    let mut set = CurveSet::default();
    let r_lo = rat(1, (n - t) as i64);
    let f = f_poly(t as u64);

    if n >= 2 * t + 1 {
        let r_hi = rat(1, (n - 2 * t) as i64);
        set.push(
            "mds",
            None,
            vec![rd(r_lo.clone(), Rational::one()), rd(r_hi.clone(), Rational::zero())],
        )?;

        if (n as u64) >= f + 1 {
            let anchor = rd(r_lo.clone(), rat(f as i64, n as i64));
            set.push(
                "polytope",
                Some("external construction, not implemented".into()),
                vec![anchor.clone(), rd(r_hi.clone(), Rational::zero())],
            )?;

            let mut seen = Vec::new();
            let mut middles = Vec::new();
            for &l in ls {
                if seen.contains(&l) {
                    continue;
                }
                seen.push(l);
                let name = format!("cons1_l{l}");
                if l < 2 {
                    set.omit(&name, "list size must be at least 2");
                    continue;
                }
                if l * t > n {
                    set.omit(&name, format!("L*T = {} exceeds N = {n}", l * t));
                    continue;
                }
                if t % l != 0 {
                    set.omit(&name, format!("list size {l} does not divide T = {t}"));
                    continue;
                }
                if let Some(q) = q {
                    if 2 * q as usize <= l * (l + 1) {
                        set.omit(
                            &name,
                            format!("alphabet {q} too small; need q > L(L+1)/2 = {}", l * (l + 1)),
                        );
                        continue;
                    }
                }
                // N - (1 + 1/L)T = (LN - (L+1)T)/L.
                let mid = rd(
                    rat(l as i64, (l * n - (l + 1) * t) as i64),
                    rat((l * t) as i64, n as i64),
                );
                middles.push(mid.clone());
                set.push(
                    &name,
                    Some("assumes the required list-decodable base code exists".into()),
                    vec![anchor.clone(), mid, rd(r_hi.clone(), Rational::zero())],
                )?;
            }
            if middles.len() > 1 {
                middles.sort_by(|a, b| a.r.cmp(&b.r));
                let mut pts = vec![anchor];
                pts.extend(middles);
                pts.push(rd(r_hi, Rational::zero()));
                set.push(
                    "cons1",
                    Some("broken line through every interleaved-window point".into()),
                    pts,
                )?;
            }
        } else {
            set.omit(
                "polytope",
                format!("needs N >= {} for T = {t}, got N = {n}", f + 1),
            );
            for &l in ls {
                set.omit(&format!("cons1_l{l}"), "polytope anchor unavailable");
            }
        }
    } else {
        set.omit("mds", format!("zero-distortion endpoint needs N >= 2T+1 = {}", 2 * t + 1));
        set.omit("polytope", "needs N >= 2T+1");
        for &l in ls {
            set.omit(&format!("cons1_l{l}"), "needs N >= 2T+1");
        }
    }

    if n == 2 * t + 1 {
        let pts = (0..=t)
            .rev()
            .map(|s| rd(rat((n - s) as i64, n as i64), rat(s as i64, n as i64)))
            .collect();
        set.push("cons2", None, pts)?;
    } else {
        set.omit("cons2", format!("repetition windows need N = 2T+1 = {}", 2 * t + 1));
    }
    Ok(set)
}

/// Overall-rate curves in the fixed-fraction regime T/N -> theta.
#[derive(Clone, Debug)]
pub struct AsymptoticCurves {
    /// MDS time-sharing: D = ((1-theta)/theta)(1 - (1-2theta) R).
    pub mds: RdCurve,
    /// Single pair achieved by the interleaved-window construction.
    pub lmds_point: RdPoint,
    /// Converse boundary D = 1 - (1-2theta) R.
    pub converse: RdCurve,
    /// The polytope line's distortion grows without bound in this regime.
    pub polytope_diverges: bool,
    /// Whether the interleaved point beats MDS time-sharing at the same
    /// overall rate; None when theta > 1/(L+1), outside the proven range.
    pub lmds_beats_mds: Option<bool>,
}

/// Distortion advantage of the interleaved-window point over MDS
/// time-sharing at the same overall rate:
/// L*theta - (L-1)/(L+1) - (1/(L+1))(L-1)/(L-(L+1)theta).
/// Nonpositive means the interleaved construction is at least as good.
pub fn comparison_gap(theta: &Rational, l: usize) -> Result<Rational> {
    if l < 2 {
        return Err(Error::Infeasible("list size must be at least 2".into()));
    }
    let l_r = rq(l as u64);
    let den = &l_r - rq(l as u64 + 1) * theta;
    if !den.is_positive() {
        return Err(Error::Infeasible(
            "error fraction too large: need theta < L/(L+1)".into(),
        ));
    }
    let lp1 = rq(l as u64 + 1);
    let lm1 = rq(l as u64 - 1);
    Ok(&l_r * theta - &lm1 / &lp1 - (Rational::one() / lp1) * lm1 / den)
}

pub fn asymptotic_curves(theta: &Rational, l: usize) -> Result<AsymptoticCurves> {
    if !theta.is_positive() || theta >= &rat(1, 2) {
        return Err(Error::Infeasible(
            "error fraction must satisfy 0 < theta < 1/2".into(),
        ));
    }
    if l < 2 {
        return Err(Error::Infeasible("list size must be at least 2".into()));
    }
    let one = Rational::one();
    let r_lo = &one / (&one - theta);
    let r_hi = &one / (&one - rq(2) * theta);
    let mds = RdCurve::new(vec![
        rd(r_lo.clone(), one.clone()),
        rd(r_hi.clone(), Rational::zero()),
    ])?;
    let converse = RdCurve::new(vec![
        rd(r_lo, theta / (&one - theta)),
        rd(r_hi, Rational::zero()),
    ])?;
    let l_r = rq(l as u64);
    let lmds_point = rd(
        &l_r / (&l_r - rq(l as u64 + 1) * theta),
        &l_r * theta,
    );
    let lmds_beats_mds = if theta <= &rat(1, l as i64 + 1) {
        let mds_d = mds
            .distortion_at(&lmds_point.r)
            .expect("interleaved rate lies inside the MDS span");
        Some(lmds_point.d <= mds_d)
    } else {
        None
    };
    Ok(AsymptoticCurves {
        mds,
        lmds_point,
        converse,
        polytope_diverges: true,
        lmds_beats_mds,
    })
}
