//! Admissible configurations and the enumeration-based character.
//!
//! A configuration is a finitely supported sequence (a_i) of nonnegative
//! integers. It is admissible for a weight when the partial-sum initial
//! conditions and the sliding-window difference conditions hold. Position i
//! carries color (i mod ell) + 1 and q-degree floor(i/ell) + 1, so each
//! particle contributes at least one unit of degree; that bounds both the
//! entries and the length of anything below a degree cutoff.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{GradeKey, TriGradedSeries};

/// Dominant integral weight (k_0, ..., k_ell); the level is the component sum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    components: Vec<u32>,
}

impl Weight {
    pub fn new(components: Vec<u32>) -> Self {
        Weight { components }
    }

    /// Convenience constructor for the sl(3) case.
    pub fn sl3(k0: u32, k1: u32, k2: u32) -> Self {
        Weight {
            components: vec![k0, k1, k2],
        }
    }

    pub fn components(&self) -> &[u32] {
        &self.components
    }

    pub fn level(&self) -> u32 {
        self.components.iter().sum()
    }

    /// Checks the component count against ell + 1.
    pub fn require_components(&self, ell: usize) -> Result<()> {
        if self.components.len() != ell + 1 {
            return Err(Error::DimensionMismatch {
                expected: ell + 1,
                got: self.components.len(),
            });
        }
        Ok(())
    }

    /// The quasi-particle basis and the fermionic formulas cover exactly the
    /// shapes (k0, k1, 0) and (0, k1, k2). Mixed weights with k0 > 0 and
    /// k2 > 0 are outside them.
    pub fn is_formula_supported(&self) -> bool {
        self.components.len() == 3 && (self.components[0] == 0 || self.components[2] == 0)
    }

    pub fn require_formula_supported(&self) -> Result<()> {
        self.require_components(2)?;
        if !self.is_formula_supported() {
            return Err(Error::UnsupportedWeight(self.to_string()));
        }
        Ok(())
    }

    /// k_0 + ... + k_j for j = 0..=ell.
    fn prefix_sums(&self) -> Vec<u32> {
        self.components
            .iter()
            .scan(0u32, |acc, &k| {
                *acc += k;
                Some(*acc)
            })
            .collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|k| k.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Finitely supported sequence of nonnegative integers, stored without
/// trailing zeros. The empty configuration is allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    entries: Vec<u32>,
}

impl Configuration {
    /// Builds a configuration, trimming trailing zeros to canonical form.
    pub fn new(mut entries: Vec<u32>) -> Self {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        Configuration { entries }
    }

    pub fn empty() -> Self {
        Configuration {
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Color charges and total q-degree of the configuration.
    ///
    /// Position i holds entries of color (i mod ell) + 1 at degree
    /// floor(i/ell) + 1; `charges[c-1]` collects color c, and the degree is
    /// the weighted entry sum.
    pub fn grade(&self, ell: usize) -> (Vec<u32>, u32) {
        let mut charges = vec![0u32; ell];
        let mut degree = 0u32;
        for (i, &a) in self.entries.iter().enumerate() {
            charges[i % ell] += a;
            degree += a * (i / ell + 1) as u32;
        }
        (charges, degree)
    }
}

/// Checks the initial and difference conditions for `a` against `w`.
///
/// Windows extending past the stored entries treat the missing entries as
/// zero, so only finitely many windows need checking.
pub fn is_admissible(a: &Configuration, w: &Weight, ell: usize) -> Result<bool> {
    w.require_components(ell)?;
    let prefix_k = w.prefix_sums();
    let k = w.level();
    let entries = a.entries();

    // Initial conditions: a_0 + ... + a_j <= k_0 + ... + k_j for j < ell.
    let mut prefix_a = 0u32;
    for j in 0..ell.min(entries.len()) {
        prefix_a += entries[j];
        if prefix_a > prefix_k[j] {
            return Ok(false);
        }
    }

    // Difference conditions: every window of ell + 1 consecutive entries
    // sums to at most the level.
    for i in 0..entries.len() {
        let window: u32 = entries[i..(i + ell + 1).min(entries.len())].iter().sum();
        if window > k {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Walker<'a> {
    prefix_k: &'a [u32],
    k: u32,
    ell: usize,
    budget: u32,
}

impl Walker<'_> {
    /// Visits every admissible nonempty configuration extending `entries`
    /// within the degree budget, calling `f` at each node whose freshly
    /// placed entry is nonzero (so the visited slice is in canonical form).
    fn extend<F>(&self, entries: &mut Vec<u32>, charges: &mut [u32], degree: u32, f: &mut F)
    where
        F: FnMut(&[u32], &[u32], u32),
    {
        let i = entries.len();
        let pos_degree = (i / self.ell + 1) as u32;
        if degree + pos_degree > self.budget {
            return; // every later position costs at least this much
        }
        let vmax = if i < self.ell {
            let prefix_a: u32 = entries.iter().sum();
            self.prefix_k[i] - prefix_a
        } else {
            let window: u32 = entries[i - self.ell..].iter().sum();
            self.k - window
        };
        let vmax = vmax.min((self.budget - degree) / pos_degree);

        for v in 0..=vmax {
            entries.push(v);
            if v > 0 {
                let color = i % self.ell;
                charges[color] += v;
                let new_degree = degree + v * pos_degree;
                f(entries, charges, new_degree);
                self.extend(entries, charges, new_degree, f);
                charges[color] -= v;
            } else {
                self.extend(entries, charges, degree, f);
            }
            entries.pop();
        }
    }
}

/// All admissible configurations of degree <= dmax, sorted by degree and
/// then lexicographically on entries. The empty configuration comes first.
pub fn enumerate_admissible(w: &Weight, ell: usize, dmax: u32) -> Result<Vec<Configuration>> {
    w.require_components(ell)?;
    let prefix_k = w.prefix_sums();
    let walker = Walker {
        prefix_k: &prefix_k,
        k: w.level(),
        ell,
        budget: dmax,
    };
    let mut found: Vec<(u32, Configuration)> = vec![(0, Configuration::empty())];
    let mut entries = Vec::new();
    let mut charges = vec![0u32; ell];
    walker.extend(&mut entries, &mut charges, 0, &mut |e, _, d| {
        found.push((d, Configuration::new(e.to_vec())));
    });
    found.sort();
    Ok(found.into_iter().map(|(_, c)| c).collect())
}

/// Character of W(Lambda) by direct enumeration of admissible
/// configurations: the coefficient at (n1, n2, d) counts configurations of
/// that grade. Defined for ell = 2 only, where there are two colors.
///
/// The work is split over the leading entry; the per-branch counts merge by
/// exact addition, so the result does not depend on the schedule.
pub fn char_configs(w: &Weight, cutoff: u32) -> Result<TriGradedSeries> {
    w.require_components(2)?;
    let ell = 2;
    let prefix_k = w.prefix_sums();
    let k = w.level();
    let walker = Walker {
        prefix_k: &prefix_k,
        k,
        ell,
        budget: cutoff,
    };

    let head_max = prefix_k[0].min(cutoff);
    let branch_counts: Vec<BTreeMap<GradeKey, BigInt>> = (0..=head_max)
        .into_par_iter()
        .map(|v0| {
            let mut counts: BTreeMap<GradeKey, BigInt> = BTreeMap::new();
            let mut entries = vec![v0];
            let mut charges = vec![0u32; ell];
            let mut degree = 0;
            if v0 > 0 {
                charges[0] = v0;
                degree = v0;
                bump(&mut counts, &charges, degree);
            }
            walker.extend(&mut entries, &mut charges, degree, &mut |_, c, d| {
                bump(&mut counts, c, d);
            });
            counts
        })
        .collect();

    let mut series = TriGradedSeries::constant(1, cutoff);
    for counts in branch_counts {
        for (key, c) in counts {
            series.add_term(key, c);
        }
    }
    Ok(series)
}

fn bump(counts: &mut BTreeMap<GradeKey, BigInt>, charges: &[u32], degree: u32) {
    let key = GradeKey::new(charges[0], charges[1], degree);
    *counts.entry(key).or_default() += 1;
}

/// Number of admissible configurations of degree <= cutoff (the empty one
/// included); the objects behind `char_configs`.
pub fn count_configs(w: &Weight, cutoff: u32) -> Result<u64> {
    let series = char_configs(w, cutoff)?;
    let mut total = BigInt::default();
    for (_, c) in series.iter() {
        total += c;
    }
    Ok(u64::try_from(total).unwrap_or(u64::MAX))
}
