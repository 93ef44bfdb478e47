//! The quadratic form Q, linear form L, transition matrix R, and the three
//! equivalent fermionic evaluations of the character.
//!
//! All three sums run over nonnegative integer data bounded by the cutoff:
//! every summand contributes q-powers starting at its exponent, and the
//! exponent dominates the total charge, so summation indices with charge sum
//! beyond the cutoff cannot contribute.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::admissible::Weight;
use crate::error::{Error, Result};
use crate::quasiparticle::ChargeProfile;
use crate::series::{inv_pochhammer, GradeKey, TriGradedSeries};

/// The 2k x 2k block matrix [[A, B], [0, A]] with A[i][j] = min(i, j) and
/// B[i][j] = max(0, i + j - k), indices 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    pub k: u32,
    pub entries: Vec<Vec<i64>>,
}

/// The length-2k vector (0, ..., 0, 1, ..., k - k0, 0, ..., 0, 1, ..., k2)
/// with k0 leading zeros in the first half and k0 + k1 in the second;
/// entry n of half i equals max{n - threshold_i, 0}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearForm {
    pub k: u32,
    pub entries: Vec<i64>,
}

/// Block-diagonal change of variables from dual charges N to profiles M.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionMatrix {
    pub k: u32,
    pub entries: Vec<Vec<i64>>,
}

pub fn build_q(k: u32) -> QuadraticForm {
    let k = k as usize;
    let mut entries = vec![vec![0i64; 2 * k]; 2 * k];
    for i in 1..=k {
        for j in 1..=k {
            let a = i.min(j) as i64;
            let b = (i + j) as i64 - k as i64;
            entries[i - 1][j - 1] = a;
            entries[k + i - 1][k + j - 1] = a;
            entries[i - 1][k + j - 1] = b.max(0);
        }
    }
    QuadraticForm {
        k: k as u32,
        entries,
    }
}

pub fn build_l(w: &Weight) -> Result<LinearForm> {
    w.require_formula_supported()?;
    let k = w.level() as i64;
    let c = w.components();
    let (k0, k1) = (c[0] as i64, c[1] as i64);
    let mut entries = Vec::with_capacity(2 * k as usize);
    for n in 1..=k {
        entries.push((n - k0).max(0));
    }
    for n in 1..=k {
        entries.push((n - (k0 + k1)).max(0));
    }
    Ok(LinearForm {
        k: k as u32,
        entries,
    })
}

pub fn build_r(k: u32) -> TransitionMatrix {
    let k = k as usize;
    let mut entries = vec![vec![0i64; 2 * k]; 2 * k];
    for i in 1..=k {
        entries[i - 1][i - 1] = 1;
        if i < k {
            entries[i - 1][i] = -1;
        }
        entries[k + i - 1][k + (k - i + 1) - 1] = 1;
        if k - i >= 1 {
            entries[k + i - 1][k + (k - i) - 1] = -1;
        }
    }
    TransitionMatrix {
        k: k as u32,
        entries,
    }
}

/// Matrices exported for inspection alongside the level they belong to.
#[derive(Serialize)]
pub struct MatrixBundle {
    pub k: u32,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<i64>>,
    #[serde(rename = "L")]
    pub l: Vec<i64>,
    #[serde(rename = "R")]
    pub r: Vec<Vec<i64>>,
}

pub fn matrix_bundle(w: &Weight) -> Result<MatrixBundle> {
    let k = w.level();
    Ok(MatrixBundle {
        k,
        q: build_q(k).entries,
        l: build_l(w)?.entries,
        r: build_r(k).entries,
    })
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut out = vec![vec![0i64; n]; n];
    for (i, row) in m.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            out[j][i] = v;
        }
    }
    out
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = (0..n).map(|t| a[i][t] * b[t][j]).sum();
        }
    }
    out
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn quadratic_value(q: &[Vec<i64>], v: &[i64]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(i, &vi)| vi * q[i].iter().zip(v).map(|(a, b)| a * b).sum::<i64>())
        .sum()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exponent of the profile's summand: tM Q M + L M. Equals the degree of
/// the minimal basis monomial of the profile, and dominates n1 + n2.
pub fn exponent(profile: &ChargeProfile, w: &Weight) -> Result<u64> {
    w.require_formula_supported()?;
    let k = w.level() as usize;
    if profile.width() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            got: profile.width(),
        });
    }
    let q = build_q(k as u32);
    let l = build_l(w)?;
    let m: Vec<i64> = profile.flatten().iter().map(|&x| x as i64).collect();
    let value = quadratic_value(&q.entries, &m) + dot(&l.entries, &m);
    debug_assert!(value >= 0);
    Ok(value as u64)
}

/// One contributing summation index of a fermionic sum, reduced to what the
/// summand needs: its q-exponent, its charges, and its Pochhammer
/// multiplicities.
struct Contributor {
    exponent: u64,
    n1: u32,
    n2: u32,
    multiplicities: Vec<u32>,
}

impl Contributor {
    /// q^exponent z1^n1 z2^n2 over the product of the (q)_m factors.
    fn summand(&self, cutoff: u32) -> TriGradedSeries {
        let mut term = TriGradedSeries::constant(1, cutoff);
        for &m in &self.multiplicities {
            if m > 0 {
                term = term.mul(&inv_pochhammer(m, cutoff));
            }
        }
        term.mul_monomial(
            GradeKey::new(self.n1, self.n2, self.exponent as u32),
            &BigInt::one(),
        )
    }
}

/// Sums the contributors in parallel; addition of exact series is
/// commutative and associative, so the result is schedule-independent.
fn sum_contributors(contributors: &[Contributor], cutoff: u32) -> TriGradedSeries {
    contributors
        .par_iter()
        .map(|c| c.summand(cutoff))
        .reduce(|| TriGradedSeries::zero(cutoff), |a, b| a.add(&b))
}

/// Enumerates profile vectors (M_{1,1..k}, M_{2,1..k}) with exponent at most
/// `budget`. Q and L are entrywise nonnegative, so the exponent is monotone
/// in every coordinate and each coordinate scan stops at the first overrun.
fn m_contributors(w: &Weight, budget: u32) -> Result<Vec<Contributor>> {
    let k = w.level() as usize;
    let q = build_q(k as u32);
    let l = build_l(w)?;
    let mut out = Vec::new();
    let mut m = vec![0i64; 2 * k];
    fn rec(
        k: usize,
        q: &QuadraticForm,
        l: &LinearForm,
        budget: i64,
        m: &mut Vec<i64>,
        coord: usize,
        out: &mut Vec<Contributor>,
    ) {
        let value = quadratic_value(&q.entries, m) + dot(&l.entries, m);
        if coord == m.len() {
            if value <= budget {
                let n1: i64 = (1..=k as i64).map(|j| j * m[j as usize - 1]).sum();
                let n2: i64 = (1..=k as i64).map(|j| j * m[k + j as usize - 1]).sum();
                // Pruning by exponent is sound because the exponent bounds
                // the total charge from above.
                debug_assert!(value >= n1 + n2);
                out.push(Contributor {
                    exponent: value as u64,
                    n1: n1 as u32,
                    n2: n2 as u32,
                    multiplicities: m.iter().map(|&x| x as u32).collect(),
                });
            }
            return;
        }
        loop {
            let value = quadratic_value(&q.entries, m) + dot(&l.entries, m);
            if value > budget {
                break;
            }
            rec(k, q, l, budget, m, coord + 1, out);
            m[coord] += 1;
        }
        m[coord] = 0;
    }
    rec(k, &q, &l, budget as i64, &mut m, 0, &mut out);
    Ok(out)
}

/// Non-increasing chains (c_1 >= ... >= c_k >= 0) with sum <= max_sum.
fn chains_desc(k: usize, max_sum: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut chain = Vec::with_capacity(k);
    fn rec(k: usize, remaining: u32, ceil: u32, chain: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if chain.len() == k {
            out.push(chain.clone());
            return;
        }
        for v in 0..=ceil.min(remaining) {
            chain.push(v);
            rec(k, remaining - v, v, chain, out);
            chain.pop();
        }
    }
    rec(k, max_sum, max_sum, &mut chain, &mut out);
    out
}

/// Summation indices of the dual-charge (N) form: pairs of monotone vectors
/// N_{1,1} >= ... >= N_{1,k} >= 0 and N_{2,k} >= ... >= N_{2,1} >= 0 with
/// exponent tN Q' N + L' N <= budget, where Q' = tR Q R and L' = tR L.
/// The exponent dominates sum(N_1) + sum(N_2), which bounds the chains.
fn n_contributors(w: &Weight, budget: u32) -> Result<Vec<Contributor>> {
    w.require_formula_supported()?;
    let k = w.level() as usize;
    let q = build_q(k as u32);
    let l = build_l(w)?;
    let r = build_r(k as u32);
    let rt = transpose(&r.entries);
    let q_prime = mat_mul(&rt, &mat_mul(&q.entries, &r.entries));
    let l_prime = mat_vec(&rt, &l.entries);

    let mut out = Vec::new();
    for n1 in chains_desc(k, budget) {
        let used: u32 = n1.iter().sum();
        for desc in chains_desc(k, budget - used) {
            // N_{2,j} is non-decreasing in j.
            let n2: Vec<u32> = desc.into_iter().rev().collect();
            let v: Vec<i64> = n1.iter().chain(n2.iter()).map(|&x| x as i64).collect();
            let e = quadratic_value(&q_prime, &v) + dot(&l_prime, &v);
            debug_assert!(e >= 0);
            if e > budget as i64 {
                continue;
            }
            let mut multiplicities = Vec::with_capacity(2 * k);
            for j in 0..k {
                let next = if j + 1 < k { n1[j + 1] } else { 0 };
                multiplicities.push(n1[j] - next);
            }
            for j in 0..k {
                let prev = if j > 0 { n2[j - 1] } else { 0 };
                multiplicities.push(n2[j] - prev);
            }
            out.push(Contributor {
                exponent: e as u64,
                n1: n1.iter().sum(),
                n2: n2.iter().sum(),
                multiplicities,
            });
        }
    }
    Ok(out)
}

/// Summation indices of the color-dual-charge form: pairs of non-increasing
/// chains r_i^{(1)} >= ... >= r_i^{(k)} >= 0 with the square-plus-cross-term
/// exponent and the shape-specific linear term.
fn georgiev_contributors(w: &Weight, budget: u32) -> Result<Vec<Contributor>> {
    w.require_formula_supported()?;
    let k = w.level() as usize;
    let c = w.components();
    let (k0, k2) = (c[0] as usize, c[2] as usize);

    let diffs = |chain: &[u32]| -> Vec<u32> {
        (0..k)
            .map(|i| chain[i] - if i + 1 < k { chain[i + 1] } else { 0 })
            .collect()
    };

    let mut out = Vec::new();
    for r1 in chains_desc(k, budget) {
        let used: u32 = r1.iter().sum();
        for r2 in chains_desc(k, budget - used) {
            let squares: i64 = r1
                .iter()
                .chain(r2.iter())
                .map(|&x| (x as i64) * (x as i64))
                .sum();
            let cross: i64 = (0..k).map(|i| r2[i] as i64 * r1[k - 1 - i] as i64).sum();
            let linear: i64 = if k2 == 0 {
                // Lambda = k0 L0 + k1 L1: tail of the r1 chain past k0.
                r1[k0..].iter().map(|&x| x as i64).sum()
            } else {
                // Lambda = k1 L1 + k2 L2: all of r1 plus the r2 tail.
                r1.iter().map(|&x| x as i64).sum::<i64>()
                    + r2[k - k2..].iter().map(|&x| x as i64).sum::<i64>()
            };
            let e = squares + cross + linear;
            if e > budget as i64 {
                continue;
            }
            let mut multiplicities = diffs(&r1);
            multiplicities.extend(diffs(&r2));
            out.push(Contributor {
                exponent: e as u64,
                n1: r1.iter().sum(),
                n2: r2.iter().sum(),
                multiplicities,
            });
        }
    }
    Ok(out)
}

/// Fermionic character in the profile (M) form: the sum over charge
/// profiles of q^{tM Q M + L M} / prod (q)_{M_{i,j}} times z1^n1 z2^n2.
pub fn char_fermionic_m(w: &Weight, cutoff: u32) -> Result<TriGradedSeries> {
    w.require_formula_supported()?;
    Ok(sum_contributors(&m_contributors(w, cutoff)?, cutoff))
}

/// Every charge profile whose exponent is at most `budget`.
pub fn profiles_with_exponent_at_most(w: &Weight, budget: u32) -> Result<Vec<ChargeProfile>> {
    w.require_formula_supported()?;
    let k = w.level() as usize;
    m_contributors(w, budget)?
        .into_iter()
        .map(|c| {
            ChargeProfile::new(
                c.multiplicities[..k].to_vec(),
                c.multiplicities[k..].to_vec(),
            )
        })
        .collect()
}

/// Fermionic character in the dual-charge (N) form.
pub fn char_fermionic_n(w: &Weight, cutoff: u32) -> Result<TriGradedSeries> {
    Ok(sum_contributors(&n_contributors(w, cutoff)?, cutoff))
}

/// Fermionic character in the color-dual-charge (double chain) form.
pub fn char_fermionic_georgiev(w: &Weight, cutoff: u32) -> Result<TriGradedSeries> {
    Ok(sum_contributors(&georgiev_contributors(w, cutoff)?, cutoff))
}

/// Number of profiles contributing to the M form at this cutoff.
pub fn count_fermionic_m(w: &Weight, cutoff: u32) -> Result<u64> {
    w.require_formula_supported()?;
    Ok(m_contributors(w, cutoff)?.len() as u64)
}

/// Number of monotone vector pairs contributing to the N form.
pub fn count_fermionic_n(w: &Weight, cutoff: u32) -> Result<u64> {
    Ok(n_contributors(w, cutoff)?.len() as u64)
}

/// Number of chain pairs contributing to the double-chain form.
pub fn count_fermionic_georgiev(w: &Weight, cutoff: u32) -> Result<u64> {
    Ok(georgiev_contributors(w, cutoff)?.len() as u64)
}

/// Generalized binomial coefficient C(p, i) = p (p-1) ... (p-i+1) / i! for
/// any integer p; every intermediate quotient is again a binomial value, so
/// the division is exact at each step.
pub fn generalized_binomial(p: i64, i: u32) -> BigInt {
    let mut value = BigInt::one();
    for t in 0..i as i64 {
        value *= BigInt::from(p - t);
        value /= BigInt::from(t + 1);
    }
    value
}

/// Exact determinant by fraction-free (Bareiss) elimination; all
/// intermediate values stay integral.
pub fn fraction_free_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for r in 0..n - 1 {
        if m[r][r].is_zero() {
            let Some(swap) = (r + 1..n).find(|&i| !m[i][r].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(r, swap);
            sign = -sign;
        }
        for i in r + 1..n {
            for j in r + 1..n {
                let num = &m[i][j] * &m[r][r] - &m[i][r] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][r] = BigInt::zero();
        }
        prev = m[r][r].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Determinant of the (r+1) x (r+1) matrix with entry (i, j) = C(p+j, i),
/// i, j = 0..=r. Column reduction by Pascal's rule collapses it to 1, which
/// is what makes the degree-shift relations uniquely solvable.
pub fn binom_matrix_det(p: i64, r: u32) -> BigInt {
    let n = r as usize + 1;
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| generalized_binomial(p + j as i64, i as u32))
                .collect()
        })
        .collect();
    fraction_free_det(m)
}
