//! Statistics of torsion groups: automorphism orders of finite abelian
//! p-groups, the Cohen-Lenstra comparison, expected-torsion bounds, and the
//! cubic power-mean inequality used by the expectation argument.

use std::collections::BTreeMap;

use num::{BigUint, One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::complex::tree_face_count;
use crate::error::{Error, Result};
use crate::homology::TorsionGroup;

/// A finite abelian p-group as the partition of its cyclic exponents:
/// parts (e1 >= e2 >= ...) mean the direct sum of Z/p^{e_i}. The empty
/// partition is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PGroupPartition {
    pub p: u64,
    parts: Vec<u32>,
}

impl PGroupPartition {
    pub fn new(p: u64, mut parts: Vec<u32>) -> Result<Self> {
        if p < 2 {
            return Err(Error::Input(format!("p must be at least 2, got {p}")));
        }
        if parts.iter().any(|&e| e == 0) {
            return Err(Error::Input("partition parts must be positive".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PGroupPartition { p, parts })
    }

    pub fn trivial(p: u64) -> Self {
        PGroupPartition { p, parts: Vec::new() }
    }

    /// Sylow p-part of a torsion group.
    pub fn from_torsion(g: &TorsionGroup, p: u64) -> Self {
        PGroupPartition {
            p,
            parts: g.sylow_exponents(p),
        }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn is_trivial(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.parts.iter().sum::<u32>())
    }

    /// "0" for the trivial group, else "+"-joined exponents, e.g. "2+1"
    /// for Z/p^2 + Z/p.
    pub fn label(&self) -> String {
        if self.parts.is_empty() {
            "0".into()
        } else {
            self.parts
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join("+")
        }
    }
}

/// |Aut| of the finite abelian p-group given by a partition, as an exact
/// integer (the classical product formula over the exponent multiset).
pub fn aut_order(g: &PGroupPartition) -> BigUint {
    // ascending exponents e_1 <= ... <= e_m
    let e: Vec<u64> = g.parts.iter().rev().map(|&x| x as u64).collect();
    let m = e.len();
    if m == 0 {
        return BigUint::one();
    }
    let p = BigUint::from(g.p);
    // d_k = max{l : e_l = e_k}, c_k = min{l : e_l = e_k}, 1-based
    let d: Vec<u64> = (0..m)
        .map(|k| (k..m).rev().find(|&l| e[l] == e[k]).unwrap() as u64 + 1)
        .collect();
    let c: Vec<u64> = (0..m)
        .map(|k| (0..=k).find(|&l| e[l] == e[k]).unwrap() as u64 + 1)
        .collect();
    let mut out = BigUint::one();
    for k in 0..m {
        out *= p.pow(d[k] as u32) - p.pow(k as u32);
    }
    for j in 0..m {
        out *= p.pow((e[j] * (m as u64 - d[j])) as u32);
    }
    for i in 0..m {
        out *= p.pow(((e[i] - 1) * (m as u64 - c[i] + 1)) as u32);
    }
    out
}

/// The normalizing constant prod_{k>=1} (1 - p^{-k}), truncated once the
/// tail factor exceeds 1 - 1e-15 (i.e. while p^{-k} >= 1e-15).
pub fn cohen_lenstra_constant(p: u64) -> f64 {
    let mut prod = 1.0f64;
    let mut term = 1.0 / p as f64;
    while term >= 1e-15 {
        prod *= 1.0 - term;
        term /= p as f64;
    }
    prod
}

/// Cohen-Lenstra mass of a p-group: the constant divided by |Aut|.
pub fn cohen_lenstra_pmf(g: &PGroupPartition) -> f64 {
    cohen_lenstra_constant(g.p) / aut_order(g).to_f64().unwrap_or(f64::INFINITY)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    /// Partition label, e.g. "0", "1", "2+1".
    pub partition: String,
    pub empirical: f64,
    pub cohen_lenstra: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionComparison {
    pub p: u64,
    pub samples: u64,
    pub rows: Vec<ComparisonRow>,
    /// Total variation distance, charging all unobserved groups their full
    /// Cohen-Lenstra mass.
    pub tv_distance: f64,
}

pub const DEFAULT_MIN_SAMPLES: u64 = 10_000;

/// Compares the Sylow-p distribution of a sample stream against the
/// Cohen-Lenstra prediction. Refuses under `min_samples` observations.
pub fn compare_to_cohen_lenstra<I>(
    samples: I,
    p: u64,
    min_samples: u64,
) -> Result<DistributionComparison>
where
    I: IntoIterator<Item = TorsionGroup>,
{
    let mut counts: BTreeMap<PGroupPartition, u64> = BTreeMap::new();
    let mut total = 0u64;
    for g in samples {
        *counts
            .entry(PGroupPartition::from_torsion(&g, p))
            .or_default() += 1;
        total += 1;
    }
    if total < min_samples {
        return Err(Error::Input(format!(
            "need at least {min_samples} samples for the comparison, got {total}"
        )));
    }
    let pmf: Vec<(PGroupPartition, f64)> = counts
        .iter()
        .map(|(g, &c)| (g.clone(), c as f64 / total as f64))
        .collect();
    Ok(compare_pmf_to_cohen_lenstra(&pmf, p, total))
}

/// Same comparison from an already-exact pmf (census distributions).
pub fn compare_pmf_to_cohen_lenstra(
    empirical: &[(PGroupPartition, f64)],
    p: u64,
    samples: u64,
) -> DistributionComparison {
    let mut rows = Vec::with_capacity(empirical.len());
    let mut abs_gap = 0.0f64;
    let mut observed_cl_mass = 0.0f64;
    for (g, emp) in empirical {
        let cl = cohen_lenstra_pmf(g);
        let z = if samples > 0 && cl > 0.0 && cl < 1.0 {
            (emp - cl) / (cl * (1.0 - cl) / samples as f64).sqrt()
        } else {
            0.0
        };
        rows.push(ComparisonRow {
            partition: g.label(),
            empirical: *emp,
            cohen_lenstra: cl,
            z,
        });
        abs_gap += (emp - cl).abs();
        observed_cl_mass += cl;
    }
    let tv = 0.5 * (abs_gap + (1.0 - observed_cl_mass).max(0.0));
    DistributionComparison {
        p,
        samples,
        rows,
        tv_distance: tv,
    }
}

// ---------------------------------------------------------------------------
// Expected-torsion bounds
// ---------------------------------------------------------------------------

/// Natural-log values of the three reference expressions for E|H1|:
/// the stated lower bound (3/e)^C(n-2,2) (3/(en))^(n-2), the square-root
/// variant the proof's final display carries, and the universal upper bound
/// sqrt(3)^C(n-1,2). Both lower variants are reported; they differ and the
/// source leaves the discrepancy unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorsionBounds {
    pub stated_lower_log: f64,
    pub proof_lower_log: f64,
    pub trivial_upper_log: f64,
}

pub fn expected_torsion_bounds(n: u32) -> Result<TorsionBounds> {
    if n < 3 {
        return Err(Error::Input(format!("need n >= 3, got {n}")));
    }
    let e = std::f64::consts::E;
    let c_n2 = if n >= 4 {
        ((n - 2) * (n - 3) / 2) as f64
    } else {
        0.0
    };
    let stated =
        c_n2 * (3.0f64 / e).ln() + (n as f64 - 2.0) * (3.0 / (e * n as f64)).ln();
    Ok(TorsionBounds {
        stated_lower_log: stated,
        proof_lower_log: stated / 2.0,
        trivial_upper_log: tree_face_count(n) as f64 * 3.0f64.ln() / 2.0,
    })
}

/// The cubic power-mean inequality on non-negative reals:
/// sum x_i^3 >= (1/sqrt(k)) (sum x_i^2)^{3/2}. Returns (lhs, rhs, holds)
/// with a 1e-12 relative slack for the exact-equality cases.
pub fn power_mean_check(xs: &[f64]) -> Result<(f64, f64, bool)> {
    if xs.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::Input(
            "power-mean check needs finite non-negative inputs".into(),
        ));
    }
    if xs.is_empty() {
        return Ok((0.0, 0.0, true));
    }
    let lhs: f64 = xs.iter().map(|x| x * x * x).sum();
    let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
    let rhs = sum_sq.powf(1.5) / (xs.len() as f64).sqrt();
    let holds = lhs >= rhs - 1e-12 * rhs.max(1.0);
    Ok((lhs, rhs, holds))
}
