//! Odometer-style enumeration of symbol vectors in lexicographic order.
//!
//! Exhaustive checks all walk spaces of the form `alphabet^len`. The
//! enumeration order is part of the crate's determinism contract: vectors
//! are visited in ascending lexicographic order with the leftmost coordinate
//! most significant.

use crate::gf::Symbol;

/// base^len, saturating at u128::MAX (anything that large fails every
/// budget check anyway).
pub fn space_size(base: u32, len: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..len {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// The `idx`-th vector of `base^len` in lexicographic order.
pub fn index_to_word(base: u32, len: usize, mut idx: u128) -> Vec<Symbol> {
    let mut out = vec![0 as Symbol; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % base as u128) as Symbol;
        idx /= base as u128;
    }
    debug_assert_eq!(idx, 0);
    out
}

/// In-place lexicographic successor; false when the vector wraps to zero.
pub fn advance(word: &mut [Symbol], base: u32) -> bool {
    let top = (base - 1) as Symbol;
    for slot in word.iter_mut().rev() {
        if *slot == top {
            *slot = 0;
        } else {
            *slot += 1;
            return true;
        }
    }
    false
}

/// Iterator over all of `base^len` in lexicographic order.
pub fn words(base: u32, len: usize) -> Words {
    assert!(base >= 1);
    Words {
        base,
        next: Some(vec![0; len]),
    }
}

pub struct Words {
    base: u32,
    next: Option<Vec<Symbol>>,
}

impl Iterator for Words {
    type Item = Vec<Symbol>;

    fn next(&mut self) -> Option<Vec<Symbol>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if self.base > 1 && advance(&mut succ, self.base) {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// Binomial coefficient in u128, saturating on overflow.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i + 1) as u128;
    }
    acc
}

/// All size-`k` subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Subsets {
    Subsets {
        n,
        k,
        next: (k <= n).then(|| (0..k).collect()),
    }
}

pub struct Subsets {
    n: usize,
    k: usize,
    next: Option<Vec<usize>>,
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        if self.k > 0 {
            let mut succ = current.clone();
            // Find the rightmost element that can still move right.
            let mut i = self.k;
            while i > 0 {
                i -= 1;
                if succ[i] < self.n - self.k + i {
                    succ[i] += 1;
                    for j in i + 1..self.k {
                        succ[j] = succ[j - 1] + 1;
                    }
                    self.next = Some(succ);
                    break;
                }
            }
        }
        Some(current)
    }
}
