//! Cross-checks the independent character computations against each other
//! and reports the first discrepancy, if any.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::admissible::{char_configs, count_configs, Weight};
use crate::error::{Error, Result};
use crate::fermionic::{
    char_fermionic_georgiev, char_fermionic_m, char_fermionic_n, count_fermionic_georgiev,
    count_fermionic_m, count_fermionic_n,
};
use crate::quasiparticle::{char_qp, count_basis};
use crate::series::{GradeKey, TriGradedSeries};

/// The five independent routes to the character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Configs,
    Qp,
    FermionicM,
    FermionicN,
    Georgiev,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Configs,
        Method::Qp,
        Method::FermionicM,
        Method::FermionicN,
        Method::Georgiev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Configs => "configs",
            Method::Qp => "qp",
            Method::FermionicM => "fermionic-m",
            Method::FermionicN => "fermionic-n",
            Method::Georgiev => "georgiev",
        }
    }

    /// Whether this route is defined for the weight. Configuration
    /// enumeration covers every sl(3) weight; the rest need the
    /// formula-supported shapes.
    pub fn supports(self, w: &Weight) -> bool {
        match self {
            Method::Configs => w.components().len() == 3,
            _ => w.is_formula_supported(),
        }
    }

    pub fn compute(self, w: &Weight, cutoff: u32) -> Result<TriGradedSeries> {
        match self {
            Method::Configs => char_configs(w, cutoff),
            Method::Qp => char_qp(w, cutoff),
            Method::FermionicM => char_fermionic_m(w, cutoff),
            Method::FermionicN => char_fermionic_n(w, cutoff),
            Method::Georgiev => char_fermionic_georgiev(w, cutoff),
        }
    }

    /// Number of objects the route enumerates at this cutoff:
    /// configurations, basis monomials, or contributing summation indices.
    pub fn count_objects(self, w: &Weight, cutoff: u32) -> Result<u64> {
        match self {
            Method::Configs => count_configs(w, cutoff),
            Method::Qp => count_basis(w, cutoff),
            Method::FermionicM => count_fermionic_m(w, cutoff),
            Method::FermionicN => count_fermionic_n(w, cutoff),
            Method::Georgiev => count_fermionic_georgiev(w, cutoff),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "configs" => Ok(Method::Configs),
            "qp" => Ok(Method::Qp),
            "fermionic-m" | "m" => Ok(Method::FermionicM),
            "fermionic-n" | "n" => Ok(Method::FermionicN),
            "georgiev" => Ok(Method::Georgiev),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

/// Runs each requested method independently; per-method failures are
/// reported in place without aborting the others.
pub fn run_characters(
    w: &Weight,
    cutoff: u32,
    methods: &[Method],
) -> BTreeMap<Method, Result<TriGradedSeries>> {
    methods.iter().map(|&m| (m, m.compute(w, cutoff))).collect()
}

fn coefficient_sum(s: &TriGradedSeries) -> u64 {
    let mut total = num_bigint::BigInt::default();
    for (_, c) in s.iter() {
        total += c;
    }
    u64::try_from(total).unwrap_or(u64::MAX)
}

/// Coefficients of every method at the first key where they disagree.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub key: GradeKey,
    /// Method name to decimal coefficient.
    pub coefficients: BTreeMap<String, String>,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub weight: Vec<u32>,
    pub cutoff: u32,
    /// Methods that ran, in canonical order.
    pub methods: Vec<String>,
    /// None when fewer than two methods support the weight, so there was
    /// nothing to compare.
    pub agree: Option<bool>,
    pub first_discrepancy: Option<Discrepancy>,
    /// Objects enumerated per method.
    pub counts: BTreeMap<String, u64>,
    /// Per-method failures (methods that do not support the weight).
    pub errors: BTreeMap<String, String>,
    /// Wall-clock time per method. Excluded from serialized reports so that
    /// identical runs produce identical bytes; the CLI prints timings on the
    /// diagnostic stream instead.
    #[serde(skip)]
    pub timings: BTreeMap<String, Duration>,
}

/// Computes every supported method independently and compares all pairs
/// coefficient-by-coefficient up to the cutoff.
pub fn verify(w: &Weight, cutoff: u32) -> Result<VerificationReport> {
    verify_with(w, cutoff, &Method::ALL, None)
}

/// As `verify`, but restricted to `methods`, and optionally corrupting one
/// computed series before comparison (`sabotage`); the corruption hook
/// exists so the discrepancy path can be exercised end to end.
pub fn verify_with(
    w: &Weight,
    cutoff: u32,
    methods: &[Method],
    sabotage: Option<Method>,
) -> Result<VerificationReport> {
    w.require_components(2)?;
    let mut report = VerificationReport {
        weight: w.components().to_vec(),
        cutoff,
        methods: Vec::new(),
        agree: None,
        first_discrepancy: None,
        counts: BTreeMap::new(),
        errors: BTreeMap::new(),
        timings: BTreeMap::new(),
    };

    let mut series: Vec<(Method, TriGradedSeries)> = Vec::new();
    for &method in methods {
        if !method.supports(w) {
            report.errors.insert(
                method.name().to_string(),
                Error::UnsupportedWeight(w.to_string()).to_string(),
            );
            continue;
        }
        let start = Instant::now();
        let mut s = method.compute(w, cutoff)?;
        report
            .timings
            .insert(method.name().to_string(), start.elapsed());
        // For the enumerating methods the object count is the coefficient
        // sum of the series just computed; the fermionic counts enumerate
        // their summation indices, which is cheap next to the series work.
        let count = match method {
            Method::Configs | Method::Qp => coefficient_sum(&s),
            _ => method.count_objects(w, cutoff)?,
        };
        report.counts.insert(method.name().to_string(), count);
        if sabotage == Some(method) {
            s.add_term(GradeKey::new(0, 0, cutoff.min(1)), 1);
        }
        report.methods.push(method.name().to_string());
        series.push((method, s));
    }

    if series.len() < 2 {
        return Ok(report);
    }

    // Find the first key, in (d, n1, n2) order, where any pair differs.
    let mut first: Option<GradeKey> = None;
    let (_, reference) = &series[0];
    for (_, other) in &series[1..] {
        if let Some(key) = reference.first_difference(other, cutoff)? {
            first = Some(match first {
                Some(prev) => prev.min(key),
                None => key,
            });
        }
    }
    match first {
        None => {
            report.agree = Some(true);
        }
        Some(key) => {
            let coefficients = series
                .iter()
                .map(|(m, s)| {
                    let c = s.coeff(key).map(|c| c.to_string()).unwrap_or_default();
                    (m.name().to_string(), c)
                })
                .collect();
            report.agree = Some(false);
            report.first_discrepancy = Some(Discrepancy { key, coefficients });
        }
    }
    Ok(report)
}
