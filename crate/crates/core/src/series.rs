//! Dense truncated power series in `q`.
//!
//! A `TruncatedSeries` of order `N` stores the coefficients of `q^0 .. q^{N-1}`
//! and says nothing about higher exponents. Every operation returns the
//! largest order its inputs justify, so a long chain of dissections can never
//! quietly compare coefficients that were never computed.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{Exact, ExactInteger, Modular, Ring};

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

/// Outcome of a coefficientwise comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison<E> {
    Equal,
    Mismatch { index: usize, left: E, right: E },
}

impl<E> Comparison<E> {
    pub fn is_equal(&self) -> bool {
        matches!(self, Comparison::Equal)
    }

    pub fn mismatch_index(&self) -> Option<usize> {
        match self {
            Comparison::Equal => None,
            Comparison::Mismatch { index, .. } => Some(*index),
        }
    }
}

impl<R: Ring> TruncatedSeries<R> {
    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        TruncatedSeries { ring, coeffs }
    }

    /// Builds a series from small integer coefficients; its order is `values.len()`.
    pub fn from_i64s(ring: R, values: &[i64]) -> Self {
        let coeffs = values.iter().map(|&v| ring.from_i64(v)).collect();
        TruncatedSeries { ring, coeffs }
    }

    /// Builds a series of the given order from sparse `(exponent, value)`
    /// terms; terms at or beyond `order` are dropped.
    pub fn from_terms(ring: R, order: usize, terms: impl IntoIterator<Item = (usize, i64)>) -> Self {
        let mut s = Self::zero(ring, order);
        for (e, v) in terms {
            if e < order {
                let term = s.ring.from_i64(v);
                s.coeffs[e] = s.ring.add(&s.coeffs[e], &term);
            }
        }
        s
    }

    pub fn zero(ring: R, order: usize) -> Self {
        let coeffs = vec![ring.zero(); order];
        TruncatedSeries { ring, coeffs }
    }

    pub fn one(ring: R, order: usize) -> Self {
        Self::monomial(ring, order, 0)
    }

    /// `q^j` to the given order (the zero series if `j >= order`).
    pub fn monomial(ring: R, order: usize, j: usize) -> Self {
        let mut s = Self::zero(ring, order);
        if j < order {
            s.coeffs[j] = s.ring.one();
        }
        s
    }

    pub fn constant(ring: R, order: usize, c: R::Elem) -> Self {
        let mut s = Self::zero(ring, order);
        if order > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    /// Number of valid coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    /// Coefficient of `q^i`, or `None` beyond the valid order.
    pub fn coeff(&self, i: usize) -> Option<&R::Elem> {
        self.coeffs.get(i)
    }

    pub fn coeffs_bigint(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| self.ring.to_bigint(c)).collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !self.ring.is_zero(c)).count()
    }

    /// Drops coefficients at exponents `>= order` (no-op if already shorter).
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order);
        self
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch {
                left: self.ring.kind(),
                right: other.ring.kind(),
            })
        }
    }

    fn nonzero_terms(&self, len: usize) -> Vec<(usize, &R::Elem)> {
        self.coeffs[..len]
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| self.ring.add(a, b))
            .collect();
        Ok(Self::from_coeffs(self.ring.clone(), coeffs))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.ring.neg(c)).collect();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let coeffs = self.coeffs.iter().map(|x| self.ring.mul(c, x)).collect();
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// Multiplication by `q^j`; the order is unchanged.
    pub fn shift(&self, j: usize) -> Self {
        let n = self.order();
        let mut coeffs = vec![self.ring.zero(); n];
        if j < n {
            coeffs[j..].clone_from_slice(&self.coeffs[..n - j]);
        }
        Self::from_coeffs(self.ring.clone(), coeffs)
    }

    /// Truncated Cauchy product. Zero coefficients are skipped on both sides,
    /// so products with eta or theta series cost `O(N * nnz)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        let mut a = self.nonzero_terms(n);
        let mut b = other.nonzero_terms(n);
        if a.len() > b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        let mut out = vec![self.ring.zero(); n];
        for &(i, x) in &a {
            for &(j, y) in &b {
                if i + j >= n {
                    break;
                }
                self.ring.mul_add_assign(&mut out[i + j], x, y);
            }
        }
        Ok(Self::from_coeffs(self.ring.clone(), out))
    }

    /// `self / other`, by forward substitution. Requires a unit constant term
    /// in `other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let n = self.order().min(other.order());
        if n == 0 {
            return Ok(Self::zero(self.ring.clone(), 0));
        }
        let c0_inv = self
            .ring
            .unit_inverse(&other.coeffs[0])
            .ok_or(Error::NotInvertible {
                ring: self.ring.kind(),
            })?;
        let tail: Vec<(usize, &R::Elem)> = other.nonzero_terms(n).into_iter().filter(|&(j, _)| j > 0).collect();
        let mut out: Vec<R::Elem> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for &(j, bj) in &tail {
                if j > k {
                    break;
                }
                self.ring.mul_sub_assign(&mut acc, bj, &out[k - j]);
            }
            out.push(self.ring.mul(&acc, &c0_inv));
        }
        Ok(Self::from_coeffs(self.ring.clone(), out))
    }

    /// Reciprocal series; `mul(s, invert(s)) = 1 + O(q^N)`.
    pub fn invert(&self) -> Result<Self> {
        Self::one(self.ring.clone(), self.order()).div(self)
    }

    /// Integer power. Sparse bases are applied by repeated multiplication or
    /// division (each step is `O(N * nnz)`); dense bases use binary powering.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let n = self.order();
        let mut acc = Self::one(self.ring.clone(), n);
        if e == 0 {
            return Ok(acc);
        }
        let sparse = self.nonzero_count() * 8 <= n;
        if sparse {
            for _ in 0..e.unsigned_abs() {
                acc = if e > 0 { acc.mul(self)? } else { acc.div(self)? };
            }
            return Ok(acc);
        }
        let mut base = if e > 0 { self.clone() } else { self.invert()? };
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `q -> q^k`. The result is valid below `k * order`: exponents in that
    /// range that are not multiples of `k` are zero for certain.
    pub fn substitute_power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("substitution power must be >= 1".into()));
        }
        let n = self.order() * k;
        let mut coeffs = vec![self.ring.zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Ok(Self::from_coeffs(self.ring.clone(), coeffs))
    }

    /// `sum_n c(m*n + r) q^n`, valid to order `ceil((N - r) / m)`.
    pub fn extract_progression(&self, m: usize, r: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("progression modulus must be >= 1".into()));
        }
        if r >= m {
            return Err(Error::BadResidue { residue: r, modulus: m });
        }
        let coeffs = self.coeffs.iter().skip(r).step_by(m).cloned().collect();
        Ok(Self::from_coeffs(self.ring.clone(), coeffs))
    }

    /// Compares the first `n` coefficients. Asking for more than either
    /// side's valid order is an error, never a silent success.
    pub fn eq_up_to(&self, other: &Self, n: usize) -> Result<Comparison<R::Elem>> {
        self.check_ring(other)?;
        let available = self.order().min(other.order());
        if n > available {
            return Err(Error::InsufficientPrecision { requested: n, available });
        }
        let found = self.coeffs[..n]
            .iter()
            .zip(&other.coeffs[..n])
            .position(|(a, b)| a != b);
        Ok(match found {
            None => Comparison::Equal,
            Some(index) => Comparison::Mismatch {
                index,
                left: self.coeffs[index].clone(),
                right: other.coeffs[index].clone(),
            },
        })
    }

    /// Lifts into another ring through the integer representatives.
    pub fn map_ring<S: Ring>(&self, target: S) -> TruncatedSeries<S> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| target.from_bigint(&self.ring.to_bigint(c)))
            .collect();
        TruncatedSeries::from_coeffs(target, coeffs)
    }
}

impl<T: ExactInteger> TruncatedSeries<Exact<T>> {
    /// Reduces an exact series into `Z/mZ`.
    pub fn reduce_mod(&self, m: u64) -> Result<TruncatedSeries<Modular>> {
        let ring = Modular::try_new(m)
            .ok_or_else(|| Error::InvalidArgument(format!("modulus {m} must be >= 2")))?;
        Ok(self.map_ring(ring))
    }
}

impl TruncatedSeries<Modular> {
    /// Only exact series can be reduced; a modular series has already lost
    /// the information needed for an arbitrary target modulus.
    pub fn reduce_mod(&self, m: u64) -> Result<TruncatedSeries<Modular>> {
        Err(Error::RingMismatch {
            left: self.ring.kind(),
            right: crate::ring::CoefficientRing::Modular { modulus: m },
        })
    }
}

impl<R: Ring> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries[{}; O(q^{})]{:?}", self.ring, self.order(), self.coeffs)
    }
}

impl<R: Ring> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.ring.is_zero(c) {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let v = self.ring.to_bigint(c);
            match i {
                0 => write!(f, "{v}")?,
                1 => write!(f, "{v}*q")?,
                _ => write!(f, "{v}*q^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}
