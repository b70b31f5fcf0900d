//! Direct combinatorial counting of restricted partitions.
//!
//! Nothing here touches eta quotients: the tables are built part by part from
//! the multiplicity bounds, so they can serve as an independent check on every
//! generating-function identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Regularity (no part divisible by `ell`) and/or distinctness (every
/// multiplicity below `t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionConstraint {
    pub ell: Option<usize>,
    pub t: Option<usize>,
}

impl PartitionConstraint {
    pub fn new(ell: Option<usize>, t: Option<usize>) -> Result<Self> {
        if ell.is_none() && t.is_none() {
            return Err(Error::InvalidArgument("a partition constraint needs ell or t".into()));
        }
        for (name, v) in [("ell", ell), ("t", t)] {
            if matches!(v, Some(x) if x < 2) {
                return Err(Error::InvalidArgument(format!("{name} must be >= 2")));
            }
        }
        Ok(PartitionConstraint { ell, t })
    }

    pub fn regular_distinct(ell: usize, t: usize) -> Result<Self> {
        Self::new(Some(ell), Some(t))
    }

    pub fn allows_part(&self, part: usize) -> bool {
        self.ell.is_none_or(|ell| !part.is_multiple_of(ell))
    }

    /// Largest allowed multiplicity, `None` when unbounded.
    pub fn max_multiplicity(&self) -> Option<usize> {
        self.t.map(|t| t - 1)
    }
}

impl fmt::Display for PartitionConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ell, self.t) {
            (Some(l), Some(t)) => write!(f, "RD({l},{t})"),
            (Some(l), None) => write!(f, "regular({l})"),
            (None, Some(t)) => write!(f, "distinct({t})"),
            (None, None) => f.write_str("unconstrained"),
        }
    }
}

/// Counts for `n = 0..=nmax` under one constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct CountTable<R: Ring> {
    pub constraint: PartitionConstraint,
    pub ring: R,
    pub counts: Vec<R::Elem>,
}

impl<R: Ring> CountTable<R> {
    pub fn nmax(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&R::Elem> {
        self.counts.get(n)
    }
}

/// Builds the table one part at a time. Adding part `i` with multiplicity
/// below `t` multiplies by `1 + q^i + ... + q^{(t-1)i} = (1 - q^{ti}) / (1 - q^i)`:
/// a descending pass for the numerator and an ascending pass for the
/// denominator, both linear in `nmax`.
pub fn count<R: Ring>(constraint: PartitionConstraint, nmax: usize, ring: R) -> CountTable<R> {
    let len = nmax + 1;
    let mut c = vec![ring.zero(); len];
    c[0] = ring.one();
    for part in (1..=nmax).filter(|&i| constraint.allows_part(i)) {
        if let Some(t) = constraint.t {
            let step = t * part;
            // c[n] -= c[n - step], reading values not yet updated
            let mut end = len;
            while end > step {
                let start = step.max(end.saturating_sub(step));
                let (lo, hi) = c.split_at_mut(start);
                for (d, s) in hi[..end - start].iter_mut().zip(&lo[start - step..end - step]) {
                    *d = ring.sub(d, s);
                }
                end = start;
            }
        }
        // c[n] += c[n - part], reading values already updated
        let mut start = part;
        while start < len {
            let end = (start + part).min(len);
            let (lo, hi) = c.split_at_mut(start);
            for (d, s) in hi[..end - start].iter_mut().zip(&lo[start - part..end - part]) {
                *d = ring.add(d, s);
            }
            start = end;
        }
    }
    CountTable {
        constraint,
        ring,
        counts: c,
    }
}

/// Baseline: convolve with the bounded multiplicity polynomial directly,
/// `O(nmax * t)` per part. Slow but transparent.
pub fn count_direct<R: Ring>(constraint: PartitionConstraint, nmax: usize, ring: R) -> CountTable<R> {
    let mut c = vec![ring.zero(); nmax + 1];
    c[0] = ring.one();
    for part in (1..=nmax).filter(|&i| constraint.allows_part(i)) {
        let max_mult = constraint.max_multiplicity().unwrap_or(nmax / part).min(nmax / part);
        let old = c.clone();
        for (n, slot) in c.iter_mut().enumerate() {
            let mut acc = ring.zero();
            for j in 0..=max_mult.min(n / part) {
                acc = ring.add(&acc, &old[n - j * part]);
            }
            *slot = acc;
        }
    }
    CountTable {
        constraint,
        ring,
        counts: c,
    }
}

/// RD^(ℓ,t)(n) for `n <= nmax`.
pub fn count_rd<R: Ring>(ell: usize, t: usize, nmax: usize, ring: R) -> Result<CountTable<R>> {
    Ok(count(PartitionConstraint::regular_distinct(ell, t)?, nmax, ring))
}

/// ℓ-regular partitions b_ℓ(n).
pub fn count_regular<R: Ring>(ell: usize, nmax: usize, ring: R) -> Result<CountTable<R>> {
    Ok(count(PartitionConstraint::new(Some(ell), None)?, nmax, ring))
}

/// t-distinct partitions (every multiplicity below `t`).
pub fn count_distinct<R: Ring>(t: usize, nmax: usize, ring: R) -> Result<CountTable<R>> {
    Ok(count(PartitionConstraint::new(None, Some(t))?, nmax, ring))
}

/// A partition as `(part, multiplicity)` pairs with strictly decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition(pub Vec<(usize, usize)>);

impl Partition {
    pub fn weight(&self) -> usize {
        self.0.iter().map(|(p, m)| p * m).sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (part, mult)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if *mult == 1 {
                write!(f, "{part}")?;
            } else {
                write!(f, "{part}^{mult}")?;
            }
        }
        f.write_str(")")
    }
}

pub const ENUMERATION_LIMIT: usize = 40;

/// Lists every partition of `n` satisfying the constraint, in
/// lexicographically decreasing order of the expanded part sequence.
pub fn enumerate(constraint: PartitionConstraint, n: usize) -> Result<Vec<Partition>> {
    if n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(format!(
            "enumeration is limited to n <= {ENUMERATION_LIMIT}, got {n}"
        )));
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    walk(&constraint, n, n, &mut current, &mut out);
    Ok(out)
}

fn walk(
    constraint: &PartitionConstraint,
    remaining: usize,
    max_part: usize,
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition(current.clone()));
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        if !constraint.allows_part(part) {
            continue;
        }
        let cap = constraint.max_multiplicity().unwrap_or(usize::MAX).min(remaining / part);
        for mult in (1..=cap).rev() {
            current.push((part, mult));
            walk(constraint, remaining - part * mult, part - 1, current, out);
            current.pop();
        }
    }
}

pub fn enumerate_rd(ell: usize, t: usize, n: usize) -> Result<Vec<Partition>> {
    enumerate(PartitionConstraint::regular_distinct(ell, t)?, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Modular;
    use crate::Integers;
    use num_bigint::BigInt;

    fn exact(table: &CountTable<Integers>) -> Vec<i64> {
        table.counts.iter().map(|c| i64::try_from(c).unwrap()).collect()
    }

    #[test]
    fn nine_partitions_of_six() {
        let t = count_rd(4, 9, 6, Integers::new()).unwrap();
        assert_eq!(t.counts[6], BigInt::from(9));
        assert_eq!(exact(&count_rd(4, 9, 0, Integers::new()).unwrap()), vec![1]);
        assert_eq!(exact(&count_rd(4, 9, 3, Integers::new()).unwrap())[3], 3);
    }

    #[test]
    fn regular_and_distinct_small_values() {
        // odd parts of 5: (5), (3,1,1), (1^5)
        assert_eq!(exact(&count_regular(2, 5, Integers::new()).unwrap())[5], 3);
        // distinct parts of 5: (5), (4,1), (3,2)
        let d = exact(&count_distinct(2, 5, Integers::new()).unwrap());
        assert_eq!(d[5], 3);
        assert_eq!(d[1], 1);
        assert_eq!(d[0], 1);
    }

    #[test]
    fn constraint_validation() {
        assert!(PartitionConstraint::new(None, None).is_err());
        assert!(PartitionConstraint::new(Some(1), None).is_err());
        assert!(count_rd(4, 1, 5, Integers::new()).is_err());
    }

    #[test]
    fn telescoping_matches_direct_convolution() {
        for (ell, t) in [(2, 2), (3, 4), (4, 9), (5, 3)] {
            let c = PartitionConstraint::regular_distinct(ell, t).unwrap();
            assert_eq!(count(c, 150, Integers::new()), count_direct(c, 150, Integers::new()));
        }
        let c = PartitionConstraint::new(Some(3), None).unwrap();
        assert_eq!(count(c, 100, Integers::new()), count_direct(c, 100, Integers::new()));
        let c = PartitionConstraint::new(None, Some(3)).unwrap();
        assert_eq!(count(c, 100, Modular::new(7)), count_direct(c, 100, Modular::new(7)));
    }

    #[test]
    fn enumeration_of_six_is_the_nine_partitions() {
        let list: Vec<String> = enumerate_rd(4, 9, 6).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(
            list,
            [
                "(6)", "(5, 1)", "(3^2)", "(3, 2, 1)", "(3, 1^3)", "(2^3)", "(2^2, 1^2)", "(2, 1^4)", "(1^6)"
            ]
        );
    }

    #[test]
    fn enumeration_edge_cases() {
        assert_eq!(enumerate_rd(4, 9, 0).unwrap(), vec![Partition(vec![])]);
        let four: Vec<String> = enumerate_rd(4, 9, 4).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(four, ["(3, 1)", "(2^2)", "(2, 1^2)", "(1^4)"]);
        assert!(matches!(enumerate_rd(4, 9, 41), Err(Error::TooLarge(_))));
        assert!(enumerate_rd(4, 9, 40).is_ok());
    }

    #[test]
    fn enumeration_length_matches_counts() {
        let table = exact(&count_rd(4, 9, 25, Integers::new()).unwrap());
        for n in 0..=25 {
            let list = enumerate_rd(4, 9, n).unwrap();
            assert_eq!(list.len() as i64, table[n], "n = {n}");
            assert!(list.iter().all(|p| p.weight() == n));
        }
        let table = exact(&count_rd(3, 2, 25, Integers::new()).unwrap());
        for n in 0..=25 {
            assert_eq!(enumerate_rd(3, 2, n).unwrap().len() as i64, table[n]);
        }
    }

    #[test]
    fn modular_counts_are_reduced_exact_counts() {
        let exact_table = count_rd(4, 9, 500, Integers::new()).unwrap();
        for m in [3u64, 4, 6, 12, 24] {
            let r = Modular::new(m);
            let modular = count_rd(4, 9, 500, r).unwrap();
            for (e, v) in exact_table.counts.iter().zip(&modular.counts) {
                assert_eq!(r.from_bigint(e), *v);
            }
        }
    }
}
