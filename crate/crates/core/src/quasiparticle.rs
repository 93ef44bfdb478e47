//! Quasi-particle monomials, the basis inequalities, and the
//! enumeration-based character they induce.
//!
//! A quasi-particle carries a color (1 or 2), a charge n with 1 <= n <= k,
//! and a degree m (negative in valid basis monomials). A monomial stores its
//! factors per color, sorted by (charge, degree) ascending; reading a color
//! list from the end gives the index order j = 1, 2, ... with charges
//! non-increasing, which is the order the basis inequalities are stated in.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::admissible::Weight;
use crate::error::{Error, Result};
use crate::series::{GradeKey, TriGradedSeries};

/// The two colors; gamma1 corresponds to z1, gamma2 to z2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Gamma1,
    Gamma2,
}

impl Color {
    pub fn index(self) -> u32 {
        match self {
            Color::Gamma1 => 1,
            Color::Gamma2 => 2,
        }
    }

    // In the linear order, gamma2 precedes gamma1.
    fn order_rank(self) -> u8 {
        match self {
            Color::Gamma2 => 0,
            Color::Gamma1 => 1,
        }
    }
}

/// A single quasi-particle x_{n gamma_i}(m).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasiParticle {
    pub color: Color,
    pub charge: u32,
    pub degree: i64,
}

/// Linear order: first by color (gamma2 before gamma1), then by charge,
/// then by degree.
impl Ord for QuasiParticle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.color.order_rank(), self.charge, self.degree).cmp(&(
            other.color.order_rank(),
            other.charge,
            other.degree,
        ))
    }
}

impl PartialOrd for QuasiParticle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One (charge, degree) factor inside a monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QPFactor {
    #[serde(rename = "n")]
    pub charge: u32,
    #[serde(rename = "m")]
    pub degree: i64,
}

impl QPFactor {
    pub fn new(charge: u32, degree: i64) -> Self {
        QPFactor { charge, degree }
    }
}

/// A formal product of quasi-particles, stored per color in canonical form:
/// sorted ascending by (charge, degree).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPMonomial {
    gamma1: Vec<QPFactor>,
    gamma2: Vec<QPFactor>,
}

impl QPMonomial {
    pub fn new(mut gamma1: Vec<QPFactor>, mut gamma2: Vec<QPFactor>) -> Self {
        gamma1.sort();
        gamma2.sort();
        QPMonomial { gamma1, gamma2 }
    }

    pub fn empty() -> Self {
        QPMonomial {
            gamma1: Vec::new(),
            gamma2: Vec::new(),
        }
    }

    pub fn factors(&self, color: Color) -> &[QPFactor] {
        match color {
            Color::Gamma1 => &self.gamma1,
            Color::Gamma2 => &self.gamma2,
        }
    }

    /// Total color charges (n1, n2).
    pub fn charges(&self) -> (u32, u32) {
        (
            self.gamma1.iter().map(|f| f.charge).sum(),
            self.gamma2.iter().map(|f| f.charge).sum(),
        )
    }

    /// Total degree d(b) = -sum of factor degrees; positive for valid basis
    /// monomials.
    pub fn total_degree(&self) -> i64 {
        -(self.gamma1.iter().map(|f| f.degree).sum::<i64>()
            + self.gamma2.iter().map(|f| f.degree).sum::<i64>())
    }

    /// Formal product: the multiset union of the factors.
    pub fn mul(&self, other: &QPMonomial) -> QPMonomial {
        let mut gamma1 = self.gamma1.clone();
        gamma1.extend_from_slice(&other.gamma1);
        let mut gamma2 = self.gamma2.clone();
        gamma2.extend_from_slice(&other.gamma2);
        QPMonomial::new(gamma1, gamma2)
    }

    /// Factors read from the right of the written monomial, i.e.
    /// non-increasing in the quasi-particle order: the gamma1 block from
    /// largest to smallest, then the gamma2 block.
    fn factors_desc(&self) -> impl Iterator<Item = QuasiParticle> + '_ {
        let g1 = self.gamma1.iter().rev().map(|f| QuasiParticle {
            color: Color::Gamma1,
            charge: f.charge,
            degree: f.degree,
        });
        let g2 = self.gamma2.iter().rev().map(|f| QuasiParticle {
            color: Color::Gamma2,
            charge: f.charge,
            degree: f.degree,
        });
        g1.chain(g2)
    }
}

/// Extension of the quasi-particle order to monomials: compare factors
/// rightmost-first; at the first difference the smaller factor decides, and
/// if one factor sequence is a prefix of the other, the shorter monomial
/// precedes. (With the longer monomial taken as smaller the order would not
/// be compatible with multiplication: for N = x_{g1}(-3)x_{g1}(-1),
/// M = x_{g1}(-1), K = x_{g1}(-9) it would give N before M but NK after MK.)
impl Ord for QPMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.factors_desc().cmp(other.factors_desc())
    }
}

impl PartialOrd for QPMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Counts M[i][j] of color-i quasi-particles of charge j, for j = 1..=k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeProfile {
    gamma1: Vec<u32>,
    gamma2: Vec<u32>,
}

impl ChargeProfile {
    pub fn new(gamma1: Vec<u32>, gamma2: Vec<u32>) -> Result<Self> {
        if gamma1.len() != gamma2.len() {
            return Err(Error::DimensionMismatch {
                expected: gamma1.len(),
                got: gamma2.len(),
            });
        }
        Ok(ChargeProfile { gamma1, gamma2 })
    }

    /// Number of charge slots k.
    pub fn width(&self) -> usize {
        self.gamma1.len()
    }

    pub fn counts(&self, color: Color) -> &[u32] {
        match color {
            Color::Gamma1 => &self.gamma1,
            Color::Gamma2 => &self.gamma2,
        }
    }

    /// Total charges (n1, n2) with n_i = sum_j j * M[i][j].
    pub fn charges(&self) -> (u32, u32) {
        let total = |m: &[u32]| m.iter().enumerate().map(|(i, &c)| (i as u32 + 1) * c).sum();
        (total(&self.gamma1), total(&self.gamma2))
    }

    /// The 2k-vector (M_{1,1}, ..., M_{1,k}, M_{2,1}, ..., M_{2,k}).
    pub fn flatten(&self) -> Vec<u32> {
        let mut out = self.gamma1.clone();
        out.extend_from_slice(&self.gamma2);
        out
    }
}

/// Maximal degree of a charge-one particle of color gamma_i on the
/// fundamental-weight vector v_{Lambda_j}: -2 when i <= j, otherwise -1.
pub fn dmax_level1(color: Color, fundamental: u32) -> i64 {
    if color.index() <= fundamental {
        -2
    } else {
        -1
    }
}

/// Maximal degree of a charge-n quasi-particle on v_Lambda for a
/// formula-supported weight.
pub fn dmax(charge: u32, color: Color, w: &Weight) -> Result<i64> {
    w.require_formula_supported()?;
    let k = w.level();
    if charge == 0 || charge > k {
        return Err(Error::ChargeOutOfRange { charge, level: k });
    }
    let c = w.components();
    let threshold = match color {
        Color::Gamma1 => c[0],
        Color::Gamma2 => c[0] + c[1],
    } as i64;
    let n = charge as i64;
    Ok(-n.min(threshold) - 2 * (n - threshold).max(0))
}

fn check_charges(b: &QPMonomial, k: u32) -> Result<()> {
    for f in b.gamma1.iter().chain(b.gamma2.iter()) {
        if f.charge == 0 || f.charge > k {
            return Err(Error::ChargeOutOfRange {
                charge: f.charge,
                level: k,
            });
        }
    }
    Ok(())
}

/// Sum over all color-1 factors of max{0, n + n1j - k}: the penalty a
/// charge-n color-2 quasi-particle pays for each color-1 companion.
fn cross_penalty(n: u32, gamma1_counts_by_factor: &[QPFactor], k: u32) -> i64 {
    gamma1_counts_by_factor
        .iter()
        .map(|f| (n as i64 + f.charge as i64 - k as i64).max(0))
        .sum()
}

/// The four defining inequalities of the basis set, evaluated literally.
///
/// In index order j = 1, 2, ... (charges non-increasing):
/// 1) equal-charge color-1 neighbours: m_{1,j+1} <= m_{1,j} - 2 n_{1,j};
/// 2) the same for color 2;
/// 3) m_{1,j} <= dmax(n_{1,j}, gamma1) - 2 (j-1) n_{1,j};
/// 4) m_{2,j} <= dmax(n_{2,j}, gamma2) - 2 (j-1) n_{2,j}
///    minus sum_{j'} max{0, n_{2,j} + n_{1,j'} - k}.
pub fn satisfies_basis(b: &QPMonomial, w: &Weight) -> Result<bool> {
    w.require_formula_supported()?;
    let k = w.level();
    check_charges(b, k)?;

    for (color, list) in [(Color::Gamma1, &b.gamma1), (Color::Gamma2, &b.gamma2)] {
        // Walk in index order, i.e. from the end of the stored list.
        let mut prev: Option<&QPFactor> = None;
        for (idx, f) in list.iter().rev().enumerate() {
            let n = f.charge as i64;
            let mut bound = dmax(f.charge, color, w)? - 2 * idx as i64 * n;
            if color == Color::Gamma2 {
                bound -= cross_penalty(f.charge, &b.gamma1, k);
            }
            if f.degree > bound {
                return Ok(false);
            }
            if let Some(p) = prev {
                if p.charge == f.charge && f.degree > p.degree - 2 * n {
                    return Ok(false);
                }
            }
            prev = Some(f);
        }
    }
    Ok(true)
}

/// One maximal run of equal-charge quasi-particles of one color, with the
/// degree bound of its first (index-smallest) member.
struct Run {
    charge: u32,
    count: u32,
    first_bound: i64,
}

/// Builds the runs of one color in index order (charges descending),
/// attaching each run's first-member bound from inequalities (3)/(4).
fn color_runs(
    counts: &[u32],
    color: Color,
    w: &Weight,
    penalty: impl Fn(u32) -> i64,
) -> Result<Vec<Run>> {
    let mut runs = Vec::new();
    let mut index = 0i64; // j - 1 of the next particle to place
    for charge in (1..=counts.len() as u32).rev() {
        let count = counts[charge as usize - 1];
        if count == 0 {
            continue;
        }
        let first_bound = dmax(charge, color, w)? - 2 * index * charge as i64 - penalty(charge);
        runs.push(Run {
            charge,
            count,
            first_bound,
        });
        index += count as i64;
    }
    Ok(runs)
}

fn profile_runs(profile: &ChargeProfile, w: &Weight) -> Result<Vec<Run>> {
    let k = w.level();
    let gamma1 = profile.counts(Color::Gamma1);
    let gamma2 = profile.counts(Color::Gamma2);
    let mut runs = color_runs(gamma1, Color::Gamma1, w, |_| 0)?;
    let penalty = |n: u32| -> i64 {
        gamma1
            .iter()
            .enumerate()
            .map(|(i, &c)| c as i64 * (n as i64 + i as i64 + 1 - k as i64).max(0))
            .sum()
    };
    runs.extend(color_runs(gamma2, Color::Gamma2, w, penalty)?);
    Ok(runs)
}

/// Smallest total degree any basis monomial of this profile can have: every
/// degree sits at its bound, successive run members dropping by 2n.
fn runs_min_degree(runs: &[Run]) -> i64 {
    runs.iter()
        .map(|r| {
            let c = r.count as i64;
            -c * r.first_bound + r.charge as i64 * c * (c - 1)
        })
        .sum()
}

fn check_profile_charges(profile: &ChargeProfile, k: u32) -> Result<()> {
    for color in [Color::Gamma1, Color::Gamma2] {
        for (i, &c) in profile.counts(color).iter().enumerate() {
            let charge = i as u32 + 1;
            if c > 0 && charge > k {
                return Err(Error::ChargeOutOfRange { charge, level: k });
            }
        }
    }
    Ok(())
}

/// The unique basis monomial of the given profile in which every degree
/// attains its maximum; its total degree is minimal for the profile.
pub fn minimal_monomial(profile: &ChargeProfile, w: &Weight) -> Result<QPMonomial> {
    w.require_formula_supported()?;
    check_profile_charges(profile, w.level())?;
    let padded = pad_profile(profile, w.level() as usize)?;
    let runs = profile_runs(&padded, w)?;
    let split = color_run_count(&padded);

    let mut gamma1 = Vec::new();
    let mut gamma2 = Vec::new();
    for (r_idx, run) in runs.iter().enumerate() {
        let out = if r_idx < split {
            &mut gamma1
        } else {
            &mut gamma2
        };
        for t in 0..run.count as i64 {
            out.push(QPFactor::new(
                run.charge,
                run.first_bound - 2 * run.charge as i64 * t,
            ));
        }
    }
    Ok(QPMonomial::new(gamma1, gamma2))
}

fn color_run_count(profile: &ChargeProfile) -> usize {
    profile
        .counts(Color::Gamma1)
        .iter()
        .filter(|&&c| c > 0)
        .count()
}

/// Resizes a profile to exactly the charge slots 1..=k. Wider profiles
/// reach here only with all-zero tails (checked upstream).
fn pad_profile(profile: &ChargeProfile, k: usize) -> Result<ChargeProfile> {
    let fit = |v: &[u32]| {
        let mut out = v.to_vec();
        out.resize(k, 0);
        out
    };
    ChargeProfile::new(
        fit(profile.counts(Color::Gamma1)),
        fit(profile.counts(Color::Gamma2)),
    )
}

/// Dual charges: N1[j] = M_{1,j} + ... + M_{1,k} (non-increasing) and
/// N2[j] = M_{2,k-j+1} + ... + M_{2,k} (non-decreasing), both 1-based in j.
pub fn dual_charges(profile: &ChargeProfile) -> (Vec<u32>, Vec<u32>) {
    let k = profile.width();
    let m1 = profile.counts(Color::Gamma1);
    let m2 = profile.counts(Color::Gamma2);
    let n1: Vec<u32> = (1..=k).map(|j| m1[j - 1..].iter().sum()).collect();
    let n2: Vec<u32> = (1..=k).map(|j| m2[k - j..].iter().sum()).collect();
    (n1, n2)
}

/// Enumerates every profile pair whose minimal degree is at most `budget`.
/// The minimal degree grows in each count, so each coordinate scan stops at
/// the first violation.
fn enumerate_profiles(w: &Weight, budget: u32) -> Result<Vec<ChargeProfile>> {
    let k = w.level() as usize;
    let mut out = Vec::new();
    let mut counts = vec![0u32; 2 * k];
    fill_profiles(w, budget, &mut counts, 0, &mut out)?;
    Ok(out)
}

fn fill_profiles(
    w: &Weight,
    budget: u32,
    counts: &mut Vec<u32>,
    coord: usize,
    out: &mut Vec<ChargeProfile>,
) -> Result<()> {
    let k = w.level() as usize;
    if coord == 2 * k {
        let profile = ChargeProfile::new(counts[..k].to_vec(), counts[k..].to_vec())?;
        out.push(profile);
        return Ok(());
    }
    loop {
        let profile = ChargeProfile::new(counts[..k].to_vec(), counts[k..].to_vec())?;
        let min_degree = runs_min_degree(&profile_runs(&profile, w)?);
        if min_degree > budget as i64 {
            break;
        }
        fill_profiles(w, budget, counts, coord + 1, out)?;
        counts[coord] += 1;
    }
    counts[coord] = 0;
    Ok(())
}

/// Walks every admissible degree assignment for the runs of one profile.
/// Each run member sits `extra_t` below its bound with the extras
/// non-decreasing along the run; `f` receives the extras per run member.
fn walk_degrees<F: FnMut(&[Vec<u32>], u32)>(
    runs: &[Run],
    budget: u32,
    run_idx: usize,
    extras: &mut Vec<Vec<u32>>,
    used: u32,
    f: &mut F,
) {
    if run_idx == runs.len() {
        f(extras, used);
        return;
    }
    let count = runs[run_idx].count;
    let mut current = Vec::with_capacity(count as usize);
    walk_run(runs, budget, run_idx, &mut current, 0, extras, used, f);
}

#[allow(clippy::too_many_arguments)]
fn walk_run<F: FnMut(&[Vec<u32>], u32)>(
    runs: &[Run],
    budget: u32,
    run_idx: usize,
    current: &mut Vec<u32>,
    floor: u32,
    extras: &mut Vec<Vec<u32>>,
    used: u32,
    f: &mut F,
) {
    let count = runs[run_idx].count;
    if current.len() == count as usize {
        extras.push(current.clone());
        walk_degrees(runs, budget, run_idx + 1, extras, used, f);
        extras.pop();
        return;
    }
    let remaining_members = count - current.len() as u32;
    let mut e = floor;
    // Later members of the run each pay at least e as well.
    while used + e * remaining_members <= budget {
        current.push(e);
        walk_run(runs, budget, run_idx, current, e, extras, used + e, f);
        current.pop();
        e += 1;
    }
}

/// All basis monomials of total degree <= `cutoff`, sorted by degree, then
/// by the stored factor lists.
pub fn enumerate_basis(w: &Weight, cutoff: u32) -> Result<Vec<QPMonomial>> {
    w.require_formula_supported()?;
    let mut out = Vec::new();
    for profile in enumerate_profiles(w, cutoff)? {
        let runs = profile_runs(&profile, w)?;
        let min_degree = runs_min_degree(&runs) as u32;
        let split = color_run_count(&profile);
        let mut extras: Vec<Vec<u32>> = Vec::new();
        walk_degrees(
            &runs,
            cutoff - min_degree,
            0,
            &mut extras,
            0,
            &mut |ex, _| {
                let mut gamma1 = Vec::new();
                let mut gamma2 = Vec::new();
                for (r_idx, run) in runs.iter().enumerate() {
                    let target = if r_idx < split {
                        &mut gamma1
                    } else {
                        &mut gamma2
                    };
                    for (t, &e) in ex[r_idx].iter().enumerate() {
                        let degree = run.first_bound - 2 * run.charge as i64 * t as i64 - e as i64;
                        target.push(QPFactor::new(run.charge, degree));
                    }
                }
                out.push(QPMonomial::new(gamma1, gamma2));
            },
        );
    }
    out.sort_by(|a, b| {
        (a.total_degree(), &a.gamma1, &a.gamma2).cmp(&(b.total_degree(), &b.gamma1, &b.gamma2))
    });
    Ok(out)
}

/// Character of W(Lambda) by quasi-particle enumeration: the coefficient at
/// (n1, n2, d) counts basis monomials of those charges and degree.
///
/// Profiles are processed in parallel; per-profile counts merge by exact
/// addition, independent of the schedule.
pub fn char_qp(w: &Weight, cutoff: u32) -> Result<TriGradedSeries> {
    w.require_formula_supported()?;
    let profiles = enumerate_profiles(w, cutoff)?;
    let per_profile: Vec<Result<BTreeMap<GradeKey, BigInt>>> = profiles
        .par_iter()
        .map(|profile| {
            let runs = profile_runs(profile, w)?;
            let min_degree = runs_min_degree(&runs) as u32;
            let (n1, n2) = profile.charges();
            // Each quasi-particle of charge n has degree at least n, so the
            // profile's minimal degree dominates its total charge.
            debug_assert!(min_degree >= n1 + n2);
            let mut counts: BTreeMap<GradeKey, BigInt> = BTreeMap::new();
            let mut extras: Vec<Vec<u32>> = Vec::new();
            walk_degrees(
                &runs,
                cutoff - min_degree,
                0,
                &mut extras,
                0,
                &mut |_, extra_total| {
                    let key = GradeKey::new(n1, n2, min_degree + extra_total);
                    *counts.entry(key).or_default() += 1;
                },
            );
            Ok(counts)
        })
        .collect();

    let mut series = TriGradedSeries::zero(cutoff);
    for counts in per_profile {
        for (key, c) in counts? {
            series.add_term(key, c);
        }
    }
    Ok(series)
}

/// Number of basis monomials of degree <= cutoff (the empty one included).
pub fn count_basis(w: &Weight, cutoff: u32) -> Result<u64> {
    let series = char_qp(w, cutoff)?;
    let mut total = BigInt::default();
    for (_, c) in series.iter() {
        total += c;
    }
    Ok(u64::try_from(total).unwrap_or(u64::MAX))
}
