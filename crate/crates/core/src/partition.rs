use std::fmt;

use serde::{Deserialize, Serialize};

/// Weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Partition(Vec<i64>);

impl Partition {
    /// Drops trailing zeros; panics on increasing or negative input.
    pub fn new(mut parts: Vec<i64>) -> Partition {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts must be weakly decreasing: {parts:?}");
        assert!(parts.iter().all(|&p| p > 0), "parts must be nonnegative: {parts:?}");
        Partition(parts)
    }

    pub fn try_new(parts: Vec<i64>) -> Option<Partition> {
        let ok = parts.windows(2).all(|w| w[0] >= w[1]) && parts.iter().all(|&p| p >= 0);
        ok.then(|| Partition::new(parts))
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Part `i` (zero-based), zero past the end.
    pub fn part(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// `lambda_i > lambda_{i+1}` whenever `lambda_i > k`.
    pub fn is_k_strict(&self, k: i64) -> bool {
        (0..self.len()).all(|i| self.0[i] <= k || self.0[i] > self.part(i + 1))
    }

    /// `lambda_j + rho_j` is weakly decreasing.
    pub fn is_rho_strict(&self, rho: &[usize]) -> bool {
        let mu: Vec<i64> = (0..rho.len()).map(|j| self.part(j) + rho[j] as i64).collect();
        mu.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && (0..other.len()).all(|i| other.0[i] <= self.0[i])
    }

    pub fn staircase(n: i64) -> Partition {
        Partition::new((1..=n).rev().collect())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Strict partitions contained in `outer`, including the empty one.
pub fn strict_inside(outer: &Partition) -> Vec<Partition> {
    fn rec(outer: &Partition, i: usize, below: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
        out.push(Partition::new(cur.clone()));
        if i >= outer.len() {
            return;
        }
        let hi = outer.part(i).min(below - 1);
        for p in (1..=hi).rev() {
            cur.push(p);
            rec(outer, i + 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(outer, 0, i64::MAX, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| (a.size(), b.parts()).cmp(&(b.size(), a.parts())));
    out
}

/// Strict partitions with `|mu| <= max_size`, parts at most `max_part`.
pub fn strict_partitions(max_size: i64, max_part: i64) -> Vec<Partition> {
    fn rec(rest: i64, below: i64, cur: &mut Vec<i64>, out: &mut Vec<Partition>) {
        out.push(Partition::new(cur.clone()));
        for p in (1..below.min(rest + 1)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(max_size, max_part + 1, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| (a.size(), b.parts()).cmp(&(b.size(), a.parts())));
    out
}

/// Number of strict partitions inside a strict `nu`, by enumeration.
pub fn count_strict_inside(nu: &Partition) -> u64 {
    strict_inside(nu).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicates() {
        let l = Partition::new(vec![7, 4, 2, 1]);
        assert!(l.is_strict());
        assert!(l.is_k_strict(2));
        let m = Partition::new(vec![4, 2, 2, 0]);
        assert_eq!(m.len(), 3);
        assert!(!m.is_strict());
        assert!(m.is_k_strict(2));
        assert!(!m.is_k_strict(1));
        assert!(Partition::new(vec![4, 2, 1]).is_rho_strict(&[0, 1, 1]));
        assert!(Partition::try_new(vec![1, 2]).is_none());
    }

    #[test]
    fn strict_counts() {
        assert_eq!(count_strict_inside(&Partition::default()), 1);
        assert_eq!(count_strict_inside(&Partition::new(vec![2, 1])), 4);
        for n in 0..7 {
            assert_eq!(count_strict_inside(&Partition::staircase(n)), 1 << n);
        }
        let all = strict_partitions(10, 10);
        assert_eq!(all.iter().filter(|p| p.size() == 10).count(), 10);
        assert!(all.iter().all(|p| p.len() <= 4));
    }
}
