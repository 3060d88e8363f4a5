//! Exhaustive enumeration of all hypertrees at small n, with exact weighted
//! counts.
//!
//! The enumerator backtracks over triangles in lexicographic index order,
//! keeping an incremental echelon form of the chosen boundary columns and
//! extending only independent sets, so each hypertree is produced exactly
//! once in a deterministic order. Independence is decided mod the prime
//! 2^61 - 1; at the census cap (n <= 7) nonzero minors are below 2^12 by
//! the Hadamard bound, so the modular test is exact, not heuristic.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use num::{BigRational, BigUint, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{
    reduced_column, tree_face_count, triangle_count, Complex2, FaceSet,
};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, ModEchelon, RANK_PRIME};

/// Census is immediate up to here.
pub const DEFAULT_CENSUS_CAP: u32 = 6;
/// n = 7 is reachable but costs hours; it must be asked for explicitly.
pub const HARD_CENSUS_CAP: u32 = 7;

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub allow_seven: bool,
    pub threads: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            allow_seven: false,
            threads: 1,
        }
    }
}

fn check_cap(n: u32, opts: &CensusOptions) -> Result<()> {
    if n < 3 {
        return Err(Error::Input(format!("census needs n >= 3, got {n}")));
    }
    if n > HARD_CENSUS_CAP {
        let k = tree_face_count(n);
        let m = triangle_count(n);
        return Err(Error::Resource(format!(
            "census at n = {n} would scan the independent {k}-subsets of {m} triangles \
             (on the order of C({m},{k}) ~ 10^{} candidates); the cap is {HARD_CENSUS_CAP}",
            (0..k).map(|i| (((m - i) as f64) / ((i + 1) as f64)).log10()).sum::<f64>() as u32
        )));
    }
    if n == HARD_CENSUS_CAP && !opts.allow_seven {
        return Err(Error::Resource(
            "census at n = 7 enumerates ~2.8e9 hypertrees (hours of CPU); \
             pass the explicit opt-in to run it"
                .into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

struct Backtracker {
    target: usize,
    nfaces: u32,
    cols: Vec<Vec<(usize, i64)>>,
    echelon: ModEchelon,
    chosen: Vec<u32>,
    cursor: u32,
    prefix_len: usize,
    /// The forced prefix itself is a complete basis not yet handed out.
    pending_complete: bool,
    done: bool,
}

impl Backtracker {
    fn new(n: u32, prefix: &[u32]) -> Self {
        let nfaces = triangle_count(n);
        let dim = tree_face_count(n) as usize;
        let cols: Vec<Vec<(usize, i64)>> =
            (0..nfaces).map(|idx| reduced_column(idx, n)).collect();
        let mut echelon = ModEchelon::new(RANK_PRIME, dim);
        let mut chosen = Vec::new();
        let mut ok = true;
        for &f in prefix {
            if echelon.insert_sparse(&cols[f as usize]) {
                chosen.push(f);
            } else {
                ok = false;
                break;
            }
        }
        let cursor = prefix.last().map_or(0, |&f| f + 1);
        let target = tree_face_count(n) as usize;
        Backtracker {
            target,
            nfaces,
            cols,
            echelon,
            pending_complete: ok && chosen.len() == target,
            chosen,
            cursor,
            prefix_len: prefix.len(),
            done: !ok,
        }
    }

    fn backtrack(&mut self) -> bool {
        if self.chosen.len() <= self.prefix_len {
            self.done = true;
            return false;
        }
        let last = self.chosen.pop().unwrap();
        self.echelon.truncate(self.chosen.len());
        self.cursor = last + 1;
        true
    }

    /// Advances to the next complete independent set, readable from
    /// `self.chosen`; false when the search space is exhausted.
    fn advance(&mut self) -> bool {
        if self.done {
            return false;
        }
        if self.pending_complete {
            self.pending_complete = false;
            return true;
        }
        if self.chosen.len() == self.target {
            // we are sitting on the previously emitted basis
            if !self.backtrack() {
                return false;
            }
        }
        loop {
            let needed = self.target - self.chosen.len();
            if (self.nfaces - self.cursor) < needed as u32 {
                if !self.backtrack() {
                    return false;
                }
                continue;
            }
            if self.echelon.insert_sparse(&self.cols[self.cursor as usize]) {
                self.chosen.push(self.cursor);
                self.cursor += 1;
                if self.chosen.len() == self.target {
                    return true;
                }
            } else {
                self.cursor += 1;
            }
        }
    }
}

/// Streaming enumeration of every hypertree on [n], each exactly once, in
/// lexicographic order of the face-index sets.
pub struct TwoTreeEnumerator {
    n: u32,
    inner: Backtracker,
}

impl Iterator for TwoTreeEnumerator {
    type Item = Complex2;

    fn next(&mut self) -> Option<Complex2> {
        if !self.inner.advance() {
            return None;
        }
        Some(
            Complex2::new(self.n, self.inner.chosen.iter().copied())
                .expect("enumerated basis"),
        )
    }
}

pub fn enumerate_2trees(n: u32) -> Result<TwoTreeEnumerator> {
    enumerate_2trees_opts(n, &CensusOptions::default())
}

pub fn enumerate_2trees_opts(n: u32, opts: &CensusOptions) -> Result<TwoTreeEnumerator> {
    check_cap(n, opts)?;
    Ok(TwoTreeEnumerator {
        n,
        inner: Backtracker::new(n, &[]),
    })
}

// ---------------------------------------------------------------------------
// Weighted census
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramRow {
    /// Invariant factors > 1 of H1; empty means trivial.
    pub factors: Vec<u64>,
    pub count: u64,
    /// Sum of |H1|^2 over the counted hypertrees, as a decimal string.
    pub weighted: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub n: u32,
    /// N(n), the number of hypertrees.
    pub total: u64,
    /// Sum of |H1|^2 over all of them.
    pub kalai_sum: BigUint,
    /// n^C(n-2,2), what the sum must equal.
    pub kalai_expected: BigUint,
    pub pass: bool,
    /// torsion invariant factors -> (count, weighted count)
    pub histogram: BTreeMap<Vec<u64>, (u64, BigUint)>,
}

impl CensusResult {
    pub fn histogram_rows(&self) -> Vec<HistogramRow> {
        self.histogram
            .iter()
            .map(|(factors, (count, weighted))| HistogramRow {
                factors: factors.clone(),
                count: *count,
                weighted: weighted.to_string(),
            })
            .collect()
    }

    pub fn count_with_factors(&self, factors: &[u64]) -> u64 {
        self.histogram.get(factors).map_or(0, |(c, _)| *c)
    }

    /// Exact E[|H1|] under the torsion-squared measure: sum |H1|^3 / n^C(n-2,2).
    pub fn expected_order(&self) -> BigRational {
        let mut num = BigUint::zero();
        for (factors, (count, _)) in &self.histogram {
            let order = factors
                .iter()
                .fold(BigUint::one(), |acc, &f| acc * BigUint::from(f));
            num += BigUint::from(*count) * (&order * &order * &order);
        }
        BigRational::new(num.into(), self.kalai_expected.clone().into())
    }
}

pub fn kalai_expected(n: u32) -> BigUint {
    let exp = if n >= 4 { (n - 2) * (n - 3) / 2 } else { 0 };
    BigUint::from(n).pow(exp)
}

fn factors_to_u64(factors: &[BigUint]) -> Vec<u64> {
    factors
        .iter()
        .map(|f| f.to_u64().expect("census torsion factors fit u64 at n <= 7"))
        .collect()
}

/// Full census: exact N(n), torsion histogram, and the weighted sum
/// compared against n^C(n-2,2).
pub fn run_census(n: u32, opts: &CensusOptions) -> Result<CensusResult> {
    check_cap(n, opts)?;
    let dim = tree_face_count(n) as usize;
    let merged = run_partitioned(n, opts.threads, move |basis, cols| {
        let chosen: Vec<Vec<(usize, i64)>> =
            basis.iter().map(|&f| cols[f as usize].clone()).collect();
        let m = IntMatrix::from_sparse_cols(dim, &chosen);
        let snf = m.smith_normal_form();
        let torsion = crate::homology::TorsionGroup::from_invariant_factors(snf.invariant_factors);
        factors_to_u64(torsion.factors())
    })?;

    let mut histogram: BTreeMap<Vec<u64>, (u64, BigUint)> = BTreeMap::new();
    let mut total = 0u64;
    let mut kalai_sum = BigUint::zero();
    for (factors, count) in merged {
        let order = factors
            .iter()
            .fold(BigUint::one(), |acc, &f| acc * BigUint::from(f));
        let weighted = BigUint::from(count) * (&order * &order);
        total += count;
        kalai_sum += &weighted;
        histogram.insert(factors, (count, weighted));
    }
    let kalai_exp = kalai_expected(n);
    Ok(CensusResult {
        n,
        total,
        pass: kalai_sum == kalai_exp,
        kalai_sum,
        kalai_expected: kalai_exp,
        histogram,
    })
}

/// Enumerates all bases, classifying each with `classify`, partitioned by
/// first chosen face across threads; returns class -> count.
fn run_partitioned<F>(
    n: u32,
    threads: usize,
    classify: F,
) -> Result<BTreeMap<Vec<u64>, u64>>
where
    F: Fn(&[u32], &[Vec<(usize, i64)>]) -> Vec<u64> + Sync,
{
    let nfaces = triangle_count(n);
    let threads = threads.max(1).min(nfaces as usize);
    let first_faces: Vec<u32> = (0..=(nfaces - tree_face_count(n))).collect();
    let classify = &classify;
    let mut partials: Vec<BTreeMap<Vec<u64>, u64>> = Vec::with_capacity(threads);
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(threads);
        for w in 0..threads {
            let firsts: Vec<u32> = first_faces
                .iter()
                .copied()
                .skip(w)
                .step_by(threads)
                .collect();
            handles.push(scope.spawn(move || {
                let mut acc: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
                for f in firsts {
                    let mut bt = Backtracker::new(n, &[f]);
                    while bt.advance() {
                        let key = classify(&bt.chosen, &bt.cols);
                        *acc.entry(key).or_default() += 1;
                    }
                }
                acc
            }));
        }
        for h in handles {
            partials.push(h.join().expect("census worker panicked"));
        }
    });
    let mut merged: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for part in partials {
        for (k, v) in part {
            *merged.entry(k).or_default() += v;
        }
    }
    Ok(merged)
}

/// Census plus the pass/fail verdict for the weighted-count identity.
pub fn verify_kalai(n: u32, opts: &CensusOptions) -> Result<CensusResult> {
    run_census(n, opts)
}

// ---------------------------------------------------------------------------
// Derived exact quantities
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentCounts {
    pub count: u64,
    pub weighted_count: BigUint,
    /// weighted: weighted_count / n^C(n-2,2); unweighted: count / N(n).
    pub probability: BigRational,
}

/// Number of hypertrees containing every given face, exact; weighted counts
/// each hypertree with multiplicity |H1|^2.
pub fn containment_counts(
    n: u32,
    faces: &[u32],
    weighted: bool,
    opts: &CensusOptions,
) -> Result<ContainmentCounts> {
    check_cap(n, opts)?;
    let cap = triangle_count(n);
    let mut required = FaceSet::new(cap);
    for &f in faces {
        if f >= cap {
            return Err(Error::Input(format!(
                "face index {f} out of range for n = {n}"
            )));
        }
        required.insert(f);
    }
    let dim = tree_face_count(n) as usize;
    let required = &required;
    // classify: 0 = not containing; 1 = containing, per |H1| order
    let merged = run_partitioned(n, opts.threads, move |basis, cols| {
        let contains = required.iter().all(|f| basis.contains(&f));
        if !contains {
            return vec![0];
        }
        let chosen: Vec<Vec<(usize, i64)>> =
            basis.iter().map(|&f| cols[f as usize].clone()).collect();
        let snf = IntMatrix::from_sparse_cols(dim, &chosen).smith_normal_form();
        let torsion = crate::homology::TorsionGroup::from_invariant_factors(snf.invariant_factors);
        let order = torsion
            .order()
            .to_u64()
            .expect("census torsion orders fit u64");
        vec![1, order]
    })?;

    let mut count = 0u64;
    let mut weighted_count = BigUint::zero();
    let mut total = 0u64;
    for (key, c) in &merged {
        total += c;
        if key[0] == 1 {
            count += c;
            let order = BigUint::from(key[1]);
            weighted_count += BigUint::from(*c) * (&order * &order);
        }
    }
    let probability = if weighted {
        BigRational::new(weighted_count.clone().into(), kalai_expected(n).into())
    } else {
        BigRational::new(BigUint::from(count).into(), BigUint::from(total).into())
    };
    Ok(ContainmentCounts {
        count,
        weighted_count,
        probability,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountBound {
    pub exact: u64,
    /// (e n / 3)^C(n-1,2)
    pub bound: f64,
    pub ratio: f64,
}

/// Exact N(n) against the (en/3)^C(n-1,2) upper bound.
pub fn count_bound_check(n: u32, opts: &CensusOptions) -> Result<CountBound> {
    let census = run_census(n, opts)?;
    let exponent = tree_face_count(n) as f64;
    let bound = ((std::f64::consts::E * n as f64) / 3.0).powf(exponent);
    assert!(
        (census.total as f64) <= bound,
        "count bound violated: N({n}) = {} > {bound}",
        census.total
    );
    Ok(CountBound {
        exact: census.total,
        bound,
        ratio: census.total as f64 / bound,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrivialH1 {
    /// Exact P(H1 = 0) under the torsion-squared measure.
    pub probability: BigRational,
    /// The asymptotic upper bound (e/3)^C(n-1,2) * n^(n-2); vacuous at
    /// small n, informative only as n grows.
    pub bound: f64,
}

pub fn trivial_h1_probability(n: u32, opts: &CensusOptions) -> Result<TrivialH1> {
    let census = run_census(n, opts)?;
    let trivial = census.count_with_factors(&[]);
    let probability = BigRational::new(
        BigUint::from(trivial).into(),
        census.kalai_expected.clone().into(),
    );
    let bound = (std::f64::consts::E / 3.0).powf(tree_face_count(n) as f64)
        * (n as f64).powi(n as i32 - 2);
    Ok(TrivialH1 { probability, bound })
}

// ---------------------------------------------------------------------------
// Disk cache
// ---------------------------------------------------------------------------

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheDoc {
    version: u32,
    n: u32,
    total: u64,
    kalai_sum: String,
    rows: Vec<HistogramRow>,
}

/// Census results keyed by n, stored as versioned JSON files
/// `census-v{VERSION}-n{n}.json` under a cache directory.
#[derive(Debug, Clone)]
pub struct CensusCache {
    dir: PathBuf,
}

impl CensusCache {
    pub fn new(dir: impl AsRef<Path>) -> Self {
        CensusCache {
            dir: dir.as_ref().to_path_buf(),
        }
    }

    fn path(&self, n: u32) -> PathBuf {
        self.dir
            .join(format!("census-v{CACHE_FORMAT_VERSION}-n{n}.json"))
    }

    pub fn load(&self, n: u32) -> Option<CensusResult> {
        let text = std::fs::read_to_string(self.path(n)).ok()?;
        let doc: CacheDoc = serde_json::from_str(&text).ok()?;
        if doc.version != CACHE_FORMAT_VERSION || doc.n != n {
            return None;
        }
        let kalai_sum: BigUint = doc.kalai_sum.parse().ok()?;
        let mut histogram = BTreeMap::new();
        for row in doc.rows {
            let weighted: BigUint = row.weighted.parse().ok()?;
            histogram.insert(row.factors, (row.count, weighted));
        }
        let kalai_exp = kalai_expected(n);
        Some(CensusResult {
            n,
            total: doc.total,
            pass: kalai_sum == kalai_exp,
            kalai_sum,
            kalai_expected: kalai_exp,
            histogram,
        })
    }

    pub fn store(&self, result: &CensusResult) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let doc = CacheDoc {
            version: CACHE_FORMAT_VERSION,
            n: result.n,
            total: result.total,
            kalai_sum: result.kalai_sum.to_string(),
            rows: result.histogram_rows(),
        };
        std::fs::write(self.path(result.n), serde_json::to_string_pretty(&doc)?)?;
        Ok(())
    }

    /// run_census through the cache.
    pub fn census(&self, n: u32, opts: &CensusOptions) -> Result<CensusResult> {
        if let Some(hit) = self.load(n) {
            return Ok(hit);
        }
        let fresh = run_census(n, opts)?;
        self.store(&fresh)?;
        Ok(fresh)
    }
}
