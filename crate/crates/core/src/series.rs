//! Exact tri-graded truncated power series in q (degree) and z1, z2 (color
//! charges) over arbitrary-precision integers.
//!
//! A `TriGradedSeries` stores only finitely many terms, exact up to an
//! inclusive q-degree `cutoff`. Invariants:
//! - no stored key has `d > cutoff`
//! - no stored coefficient is zero
//! - term order is lexicographic on (d, n1, n2), so serialized output is
//!   byte-identical across runs

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent triple of one term: z1^n1 z2^n2 q^d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GradeKey {
    pub n1: u32,
    pub n2: u32,
    pub d: u32,
}

impl GradeKey {
    pub fn new(n1: u32, n2: u32, d: u32) -> Self {
        GradeKey { n1, n2, d }
    }
}

// Ordered by (d, n1, n2): the canonical term order for all serialized output.
impl Ord for GradeKey {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.d, self.n1, self.n2).cmp(&(other.d, other.n1, other.n2))
    }
}

impl PartialOrd for GradeKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GradeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z1^{} z2^{} q^{}", self.n1, self.n2, self.d)
    }
}

/// Truncated series sum_{keys} c * z1^n1 z2^n2 q^d, exact for d <= cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriGradedSeries {
    cutoff: u32,
    terms: BTreeMap<GradeKey, BigInt>,
}

impl TriGradedSeries {
    /// The zero series at the given cutoff.
    pub fn zero(cutoff: u32) -> Self {
        TriGradedSeries {
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    /// Constant series c + O(q^{cutoff+1}); empty when c = 0.
    pub fn constant(c: impl Into<BigInt>, cutoff: u32) -> Self {
        let mut s = Self::zero(cutoff);
        let c = c.into();
        if !c.is_zero() {
            s.terms.insert(GradeKey::new(0, 0, 0), c);
        }
        s
    }

    /// Single-term series c * z1^n1 z2^n2 q^d, dropped if beyond the cutoff.
    pub fn monomial(key: GradeKey, c: impl Into<BigInt>, cutoff: u32) -> Self {
        let mut s = Self::zero(cutoff);
        let c = c.into();
        if !c.is_zero() && key.d <= cutoff {
            s.terms.insert(key, c);
        }
        s
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterate terms in (d, n1, n2) order.
    pub fn iter(&self) -> impl Iterator<Item = (&GradeKey, &BigInt)> {
        self.terms.iter()
    }

    /// Add `c` to the coefficient at `key`, keeping the series normalized.
    /// Terms beyond the cutoff are discarded.
    pub fn add_term(&mut self, key: GradeKey, c: impl Into<BigInt>) {
        let c = c.into();
        if key.d > self.cutoff || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Stored coefficient at `key`, or zero when absent.
    ///
    /// Errors with `QueryBeyondCutoff` when `key.d > cutoff`: the series
    /// carries no information there.
    pub fn coeff(&self, key: GradeKey) -> Result<BigInt> {
        if key.d > self.cutoff {
            return Err(Error::QueryBeyondCutoff {
                requested: key.d,
                cutoff: self.cutoff,
            });
        }
        Ok(self.terms.get(&key).cloned().unwrap_or_else(BigInt::zero))
    }

    /// Coefficient-wise sum. The result cutoff is the smaller of the two;
    /// terms beyond it are dropped.
    pub fn add(&self, other: &TriGradedSeries) -> TriGradedSeries {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = TriGradedSeries::zero(cutoff);
        for (&k, c) in &self.terms {
            out.add_term(k, c.clone());
        }
        for (&k, c) in &other.terms {
            out.add_term(k, c.clone());
        }
        out
    }

    /// Convolution product; keys add component-wise, terms whose q-degree
    /// exceeds the result cutoff are discarded.
    pub fn mul(&self, other: &TriGradedSeries) -> TriGradedSeries {
        let cutoff = self.cutoff.min(other.cutoff);
        let mut out = TriGradedSeries::zero(cutoff);
        for (&ka, ca) in &self.terms {
            if ka.d > cutoff {
                break; // keys sorted by d first
            }
            for (&kb, cb) in &other.terms {
                if ka.d + kb.d > cutoff {
                    break;
                }
                let key = GradeKey::new(ka.n1 + kb.n1, ka.n2 + kb.n2, ka.d + kb.d);
                out.add_term(key, ca * cb);
            }
        }
        out
    }

    /// Multiply by the monomial c * z1^shift.n1 z2^shift.n2 q^shift.d.
    pub fn mul_monomial(&self, shift: GradeKey, c: &BigInt) -> TriGradedSeries {
        let mut out = TriGradedSeries::zero(self.cutoff);
        if c.is_zero() {
            return out;
        }
        for (&k, v) in &self.terms {
            let key = GradeKey::new(k.n1 + shift.n1, k.n2 + shift.n2, k.d + shift.d);
            out.add_term(key, v * c);
        }
        out
    }

    /// Copy of this series truncated to a smaller (or equal) cutoff.
    pub fn truncate(&self, cutoff: u32) -> TriGradedSeries {
        let cutoff = cutoff.min(self.cutoff);
        let mut out = TriGradedSeries::zero(cutoff);
        for (&k, v) in &self.terms {
            if k.d > cutoff {
                break;
            }
            out.terms.insert(k, v.clone());
        }
        out
    }

    /// True iff all coefficients with d <= max_degree agree exactly.
    ///
    /// Errors with `QueryBeyondCutoff` when `max_degree` exceeds either
    /// cutoff: agreement there cannot be certified.
    pub fn equal_up_to(&self, other: &TriGradedSeries, max_degree: u32) -> Result<bool> {
        if max_degree > self.cutoff || max_degree > other.cutoff {
            return Err(Error::QueryBeyondCutoff {
                requested: max_degree,
                cutoff: self.cutoff.min(other.cutoff),
            });
        }
        let mine = self.terms.iter().take_while(|(k, _)| k.d <= max_degree);
        let theirs = other.terms.iter().take_while(|(k, _)| k.d <= max_degree);
        Ok(mine.eq(theirs))
    }

    /// First key (in (d, n1, n2) order) with d <= max_degree where the
    /// coefficients differ, if any.
    pub fn first_difference(
        &self,
        other: &TriGradedSeries,
        max_degree: u32,
    ) -> Result<Option<GradeKey>> {
        if max_degree > self.cutoff || max_degree > other.cutoff {
            return Err(Error::QueryBeyondCutoff {
                requested: max_degree,
                cutoff: self.cutoff.min(other.cutoff),
            });
        }
        let keys = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|k| k.d <= max_degree);
        let mut keys: Vec<&GradeKey> = keys.collect();
        keys.sort();
        keys.dedup();
        for &k in &keys {
            if self.terms.get(k) != other.terms.get(k) {
                return Ok(Some(*k));
            }
        }
        Ok(None)
    }

    /// Serialize to the canonical JSON form: terms sorted by (d, n1, n2),
    /// coefficients as decimal strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesRepr::from(self)).expect("series serialization cannot fail")
    }

    pub fn from_json(text: &str) -> std::result::Result<TriGradedSeries, serde_json::Error> {
        let repr: SeriesRepr = serde_json::from_str(text)?;
        Ok(TriGradedSeries::from(repr))
    }

    /// CSV rows `n1,n2,d,coeff` under the header, sorted like the JSON form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n1,n2,d,coeff\n");
        for (k, c) in &self.terms {
            out.push_str(&format!("{},{},{},{}\n", k.n1, k.n2, k.d, c));
        }
        out
    }
}

/// Wire form of a series: coefficients as decimal strings so the JSON
/// survives any integer-width limit in consumers.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    cutoff: u32,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    n1: u32,
    n2: u32,
    d: u32,
    c: String,
}

impl From<&TriGradedSeries> for SeriesRepr {
    fn from(s: &TriGradedSeries) -> Self {
        SeriesRepr {
            cutoff: s.cutoff,
            terms: s
                .terms
                .iter()
                .map(|(k, c)| TermRepr {
                    n1: k.n1,
                    n2: k.n2,
                    d: k.d,
                    c: c.to_string(),
                })
                .collect(),
        }
    }
}

impl From<SeriesRepr> for TriGradedSeries {
    fn from(repr: SeriesRepr) -> Self {
        let mut s = TriGradedSeries::zero(repr.cutoff);
        for t in repr.terms {
            let c: BigInt = t.c.parse().unwrap_or_else(|_| BigInt::zero());
            s.add_term(GradeKey::new(t.n1, t.n2, t.d), c);
        }
        s
    }
}

/// Truncated expansion of 1/(q)_M = prod_{i=1}^{M} 1/(1 - q^i).
///
/// The coefficient of q^d counts partitions of d into parts <= M.
pub fn inv_pochhammer(m: u32, cutoff: u32) -> TriGradedSeries {
    let n = cutoff as usize + 1;
    let mut dense = vec![BigInt::zero(); n];
    dense[0] = BigInt::from(1);
    // Multiply by 1/(1 - q^i) via the in-place prefix recurrence.
    for i in 1..=m as usize {
        if i >= n {
            break;
        }
        for d in i..n {
            let prev = dense[d - i].clone();
            dense[d] += prev;
        }
    }
    let mut out = TriGradedSeries::zero(cutoff);
    for (d, c) in dense.into_iter().enumerate() {
        out.add_term(GradeKey::new(0, 0, d as u32), c);
    }
    out
}

/// (q)_M = prod_{i=1}^{M} (1 - q^i), truncated. The exact inverse of
/// `inv_pochhammer` up to the cutoff.
pub fn pochhammer(m: u32, cutoff: u32) -> TriGradedSeries {
    let mut out = TriGradedSeries::constant(1, cutoff);
    for i in 1..=m {
        let mut factor = TriGradedSeries::constant(1, cutoff);
        factor.add_term(GradeKey::new(0, 0, i), -1);
        out = out.mul(&factor);
    }
    out
}
