//! Vertex-subset enumeration in shortlex order and the tie-breaking order
//! used by every solver.

use std::cmp::Ordering;

/// Shortlex comparison of sorted vertex lists: fewer vertices first, then
/// lexicographic. This is the tie-break among equally good strategies.
pub fn shortlex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// All subsets of `0..n` with at most `max_size` elements, in shortlex order.
pub fn subsets_up_to(n: usize, max_size: usize) -> impl Iterator<Item = Vec<usize>> {
    let max_size = max_size.min(n);
    (0..=max_size).flat_map(move |size| Combinations::new(n, size))
}

/// `sum_{i <= k} C(n, i)`, saturating at `u64::MAX`.
pub fn count_up_to(n: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut term: u128 = 1;
    for i in 0..=k.min(n) {
        if i > 0 {
            term = term * (n - i + 1) as u128 / i as u128;
        }
        total = total.saturating_add(u64::try_from(term).unwrap_or(u64::MAX));
    }
    total
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let mut term: u128 = 1;
    for i in 1..=k.min(n - k) {
        term = term * (n - i + 1) as u128 / i as u128;
    }
    u64::try_from(term).unwrap_or(u64::MAX)
}

/// Size-`k` subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = if k <= n { Some((0..k).collect()) } else { None };
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut next = out.clone();
        let k = next.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}
