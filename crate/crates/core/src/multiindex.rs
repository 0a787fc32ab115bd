//! Multi-index arithmetic, multinomial coefficients, Appell symbols and index
//! enumeration.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A tuple of nonnegative integers, used both for moment orders and for the
/// summation indices of the hypergeometric series.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    /// The coordinate vector with a one in position `i`.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|β|`, the sum of the entries.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.dim() == other.dim() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn plus_unit(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v[i] += 1;
        Self(v)
    }

    /// `self - d_i`, or `None` when entry `i` is already zero.
    pub fn minus_unit(&self, i: usize) -> Option<Self> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(Self(v))
    }

    /// `β!` as a float.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&e| factorial(e)).product()
    }

    /// `x^β`; `0^0` is taken as one.
    pub fn pow(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim());
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

impl std::ops::Index<usize> for MultiIndex {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Parses `"2,1"` or `"(2,1)"`.
    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.is_empty() {
            return invalid("empty multi-index");
        }
        trimmed
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::InvalidArgument(format!("bad multi-index entry `{p}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn binomial_u128(n: u32, k: u32) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=u128::from(k) {
        // acc * (n - k + i) is divisible by i at every step.
        acc = acc.checked_mul(u128::from(n - k) + i)? / i;
    }
    Some(acc)
}

/// The multinomial coefficient `r! / β!`, computed exactly as a product of
/// binomials.
pub fn multinomial(r: u32, beta: &MultiIndex) -> Result<u128> {
    if beta.order() != r {
        return invalid(format!("multinomial: |β| = {} but r = {r}", beta.order()));
    }
    let mut acc: u128 = 1;
    let mut partial = 0u32;
    for &e in beta.entries() {
        partial += e;
        let b = binomial_u128(partial, e)
            .ok_or_else(|| Error::Resource(format!("multinomial({r}; {beta}) overflows u128")))?;
        acc = acc
            .checked_mul(b)
            .ok_or_else(|| Error::Resource(format!("multinomial({r}; {beta}) overflows u128")))?;
    }
    Ok(acc)
}

/// Binomial coefficient as a float; exact while the result fits in a u128.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    match binomial_u128(n, k) {
        Some(v) => v as f64,
        None => (statrs::function::gamma::ln_gamma(f64::from(n) + 1.0)
            - statrs::function::gamma::ln_gamma(f64::from(k) + 1.0)
            - statrs::function::gamma::ln_gamma(f64::from(n - k) + 1.0))
        .exp(),
    }
}

/// The Appell symbol (rising factorial) `(a, l) = a (a+1) ... (a+l-1)`.
pub fn appell_symbol(a: f64, l: u32) -> f64 {
    (0..l).map(|i| a + f64::from(i)).product()
}

/// `(α, k) = ∏ (α_i, k_i)`.
pub fn appell_symbol_multi(alpha: &[f64], k: &MultiIndex) -> f64 {
    debug_assert_eq!(alpha.len(), k.dim());
    alpha
        .iter()
        .zip(k.entries())
        .map(|(&a, &ki)| appell_symbol(a, ki))
        .product()
}

/// Index sets fed to the summations and recursions.
#[derive(Debug, Clone, Copy)]
pub enum IndexConstraint<'a> {
    /// All multi-indices with `|β| = m`.
    Order(u32),
    /// All multi-indices `α` with `α <= β` componentwise.
    Below(&'a MultiIndex),
}

/// Enumerates multi-indices in graded lexicographic order: by total order
/// first, then lexicographically ascending within an order.
pub fn enumerate_indices(constraint: IndexConstraint<'_>, dim: usize) -> Vec<MultiIndex> {
    assert!(dim >= 1, "multi-index dimension must be positive");
    match constraint {
        IndexConstraint::Order(m) => compositions(m, dim, None),
        IndexConstraint::Below(bound) => {
            assert_eq!(bound.dim(), dim, "bound dimension mismatch");
            (0..=bound.order())
                .flat_map(|m| compositions(m, dim, Some(bound.entries())))
                .collect()
        }
    }
}

fn compositions(m: u32, dim: usize, bound: Option<&[u32]>) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; dim];
    fill(m, 0, &mut cur, bound, &mut out);
    out
}

fn fill(remaining: u32, pos: usize, cur: &mut Vec<u32>, bound: Option<&[u32]>, out: &mut Vec<MultiIndex>) {
    let cap = bound.map_or(remaining, |b| b[pos].min(remaining));
    if pos + 1 == cur.len() {
        if remaining <= cap {
            cur[pos] = remaining;
            out.push(MultiIndex(cur.clone()));
        }
        return;
    }
    for e in 0..=cap {
        cur[pos] = e;
        fill(remaining - e, pos + 1, cur, bound, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(2, &[1, 1].into()).unwrap(), 2);
        assert_eq!(multinomial(3, &[3, 0].into()).unwrap(), 1);
        assert_eq!(multinomial(4, &[2, 2].into()).unwrap(), 6);
        assert_eq!(multinomial(0, &[0, 0, 0].into()).unwrap(), 1);
    }

    #[test]
    fn multinomial_order_mismatch() {
        assert!(matches!(
            multinomial(3, &[1, 1].into()),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn multinomial_large_is_exact_or_errors() {
        // 30!/(10!10!10!) = 5550996791340
        assert_eq!(multinomial(30, &[10, 10, 10].into()).unwrap(), 5_550_996_791_340);
        let big = MultiIndex::new(vec![40; 20]);
        assert!(matches!(multinomial(800, &big), Err(Error::Resource(_))));
    }

    #[test]
    fn appell_examples() {
        assert_eq!(appell_symbol(3.7, 0), 1.0);
        assert_eq!(appell_symbol(1.0, 4), 24.0);
        assert_eq!(appell_symbol(2.5, 2), 8.75);
        assert_eq!(appell_symbol(-2.0, 3), 0.0);
        assert_eq!(appell_symbol_multi(&[1.0, 2.5], &[4, 2].into()), 24.0 * 8.75);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_indices(IndexConstraint::Order(0), 3),
            vec![MultiIndex::zeros(3)]
        );
        assert_eq!(
            enumerate_indices(IndexConstraint::Order(2), 2),
            vec![[0, 2].into(), [1, 1].into(), [2, 0].into()]
        );
        let b: MultiIndex = [1, 1].into();
        let below = enumerate_indices(IndexConstraint::Below(&b), 2);
        assert_eq!(below, vec![[0, 0].into(), [0, 1].into(), [1, 0].into(), [1, 1].into()]);
    }

    #[test]
    fn parse_and_display() {
        let m: MultiIndex = "(2, 1)".parse().unwrap();
        assert_eq!(m, [2, 1].into());
        assert_eq!(m.to_string(), "(2,1)");
        assert!("2,x".parse::<MultiIndex>().is_err());
    }

    proptest! {
        #[test]
        fn multinomial_theorem(x in prop::collection::vec(0.0f64..1.5, 1..4), r in 0u32..9) {
            let dim = x.len();
            let sum: f64 = enumerate_indices(IndexConstraint::Order(r), dim)
                .iter()
                .map(|b| multinomial(r, b).unwrap() as f64 * b.pow(&x))
                .sum();
            let expect = x.iter().sum::<f64>().powi(r as i32);
            prop_assert!((sum - expect).abs() <= 1e-12 * expect.abs().max(1.0));
        }

        #[test]
        fn appell_step(a in -5.0f64..5.0, l in 0u32..12) {
            let lhs = appell_symbol(a, l + 1);
            let rhs = appell_symbol(a, l) * (a + f64::from(l));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        }

        #[test]
        fn enumeration_count(m in 0u32..8, dim in 1usize..5) {
            let idx = enumerate_indices(IndexConstraint::Order(m), dim);
            prop_assert_eq!(idx.len() as f64, binomial(m + dim as u32 - 1, dim as u32 - 1));
            let mut sorted = idx.clone();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), idx.len());
            prop_assert!(idx.iter().all(|b| b.order() == m));
        }
    }
}
