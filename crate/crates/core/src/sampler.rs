//! Sampling hypertrees from the torsion-squared determinantal measure.
//!
//! The projection-DPP sampler picks C(n-1,2) triangles sequentially, each
//! with probability proportional to the squared norm of its boundary column
//! projected orthogonally to the span of the columns already chosen (the
//! chain rule for projection kernels). The rational backend carries this
//! out in exact arithmetic, including the categorical draws; the float
//! backend runs in f64 and re-validates every sample with the exact rank
//! check, resampling on failure.

use std::time::Instant;

use num::bigint::RandBigInt;
use num::{BigRational, BigUint, Integer, One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{edge_count, edge_index, tree_face_count, triangle_count, Complex2, Triangle};
use crate::error::{Error, Result};
use crate::homology::h1;
use crate::kernel::{build_kernel, default_backend, DppKernel, KernelBackend};
use crate::mh::MhChain;
use crate::rng::{seeded, worker_seed};

pub const FLOAT_RETRY_BUDGET: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleMethod {
    Dpp,
    Mh,
}

impl std::fmt::Display for SampleMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SampleMethod::Dpp => write!(f, "dpp"),
            SampleMethod::Mh => write!(f, "mh"),
        }
    }
}

/// One sampled hypertree, the JSONL wire record. Torsion data is carried
/// as decimal strings so large orders survive JSON number precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub n: u32,
    pub seed: u64,
    pub method: SampleMethod,
    pub faces: Vec<[u32; 3]>,
    pub h1_factors: Vec<String>,
    pub h1_order: String,
    pub ms: f64,
}

impl SampleRecord {
    pub fn from_complex(c: &Complex2, seed: u64, method: SampleMethod, ms: f64) -> Self {
        let hom = h1(c);
        debug_assert_eq!(hom.betti1, 0, "sampled complexes are hypertrees");
        SampleRecord {
            n: c.n(),
            seed,
            method,
            faces: c.triangles().iter().map(|t| t.vertices()).collect(),
            h1_factors: hom.torsion.factor_strings(),
            h1_order: hom.torsion.order().to_string(),
            ms,
        }
    }

    pub fn complex(&self) -> Result<Complex2> {
        Complex2::from_triples(self.n, &self.faces)
    }

    pub fn h1_order_uint(&self) -> Result<BigUint> {
        self.h1_order
            .parse()
            .map_err(|_| Error::Input(format!("bad h1_order {:?}", self.h1_order)))
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        Ok(serde_json::from_str(line)?)
    }
}

/// Draws one hypertree; exact distribution |H1(T)|^2 / n^C(n-2,2) on the
/// rational backend, the same up to f64 rounding (with exact support
/// post-check) on the float backend. Deterministic given the rng state.
pub fn sample_dpp(kernel: &DppKernel, rng: &mut ChaCha8Rng) -> Result<Complex2> {
    match kernel.backend() {
        KernelBackend::Rational => sample_dpp_rational(kernel.n(), rng),
        KernelBackend::Float => sample_dpp_float(kernel.n(), rng),
    }
}

fn boundary_columns(n: u32) -> Vec<[(usize, i64); 3]> {
    (0..triangle_count(n))
        .map(|idx| {
            let [i, j, k] = Triangle::from_index(idx, n).unwrap().vertices();
            [
                (edge_index(i, j, n) as usize, 1),
                (edge_index(i, k, n) as usize, -1),
                (edge_index(j, k, n) as usize, 1),
            ]
        })
        .collect()
}

fn sample_dpp_rational(n: u32, rng: &mut ChaCha8Rng) -> Result<Complex2> {
    let nn = triangle_count(n) as usize;
    let m = edge_count(n) as usize;
    let r = tree_face_count(n) as usize;
    let cols = boundary_columns(n);

    let three = BigRational::from_integer(3.into());
    let mut residual: Vec<BigRational> = vec![three; nn];
    let mut selected = vec![false; nn];
    // orthogonal (not normalized) basis of the chosen columns, with squared norms
    let mut basis: Vec<(Vec<BigRational>, BigRational)> = Vec::with_capacity(r);
    let mut chosen: Vec<u32> = Vec::with_capacity(r);

    for step in 0..r {
        // exact categorical draw over the residual weights
        let mut denom_lcm = BigUint::one();
        for (i, w) in residual.iter().enumerate() {
            if !selected[i] && w.is_positive() {
                denom_lcm = denom_lcm.lcm(w.denom().magnitude());
            }
        }
        let mut weights: Vec<BigUint> = Vec::with_capacity(nn);
        let mut total = BigUint::zero();
        for (i, w) in residual.iter().enumerate() {
            let wi = if !selected[i] && w.is_positive() {
                w.numer().magnitude() * (&denom_lcm / w.denom().magnitude())
            } else {
                BigUint::zero()
            };
            total += &wi;
            weights.push(wi);
        }
        // sum of residuals is exactly n * (r - step)
        debug_assert_eq!(
            total,
            BigUint::from(n) * BigUint::from((r - step) as u32) * &denom_lcm
        );
        let draw = rng.gen_biguint_below(&total);
        let mut acc = BigUint::zero();
        let mut pick = usize::MAX;
        for (i, wi) in weights.iter().enumerate() {
            if wi.is_zero() {
                continue;
            }
            acc += wi;
            if draw < acc {
                pick = i;
                break;
            }
        }
        debug_assert_ne!(pick, usize::MAX);

        // Gram-Schmidt the picked column against the basis
        let mut u = vec![BigRational::zero(); m];
        for &(row, s) in &cols[pick] {
            u[row] = BigRational::from_integer(s.into());
        }
        for (ub, q) in &basis {
            let mut c = BigRational::zero();
            for &(row, s) in &cols[pick] {
                if s > 0 {
                    c += &ub[row];
                } else {
                    c -= &ub[row];
                }
            }
            if !c.is_zero() {
                let f = c / q;
                for (uj, bj) in u.iter_mut().zip(ub) {
                    if !bj.is_zero() {
                        *uj -= &f * bj;
                    }
                }
            }
        }
        let q_new: BigRational = u.iter().map(|x| x * x).fold(BigRational::zero(), |a, b| a + b);
        debug_assert_eq!(q_new, residual[pick]);

        selected[pick] = true;
        chosen.push(pick as u32);
        for (i, col) in cols.iter().enumerate() {
            if selected[i] {
                continue;
            }
            let mut c = BigRational::zero();
            for &(row, s) in col {
                if s > 0 {
                    c += &u[row];
                } else {
                    c -= &u[row];
                }
            }
            if !c.is_zero() {
                residual[i] -= &c * &c / &q_new;
            }
        }
        basis.push((u, q_new));
    }

    let c = Complex2::new(n, chosen)?;
    debug_assert!(c.is_2tree());
    Ok(c)
}

fn sample_dpp_float(n: u32, rng: &mut ChaCha8Rng) -> Result<Complex2> {
    let nn = triangle_count(n) as usize;
    let m = edge_count(n) as usize;
    let r = tree_face_count(n) as usize;
    let cols = boundary_columns(n);

    'attempt: for _ in 0..FLOAT_RETRY_BUDGET {
        let mut residual = vec![3.0f64; nn];
        let mut selected = vec![false; nn];
        let mut basis: Vec<(Vec<f64>, f64)> = Vec::with_capacity(r);
        let mut chosen: Vec<u32> = Vec::with_capacity(r);

        for _step in 0..r {
            let total: f64 = residual
                .iter()
                .zip(&selected)
                .filter(|&(_, &s)| !s)
                .map(|(w, _)| w.max(0.0))
                .sum();
            if !(total > 1e-9) {
                continue 'attempt;
            }
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = usize::MAX;
            for i in 0..nn {
                if selected[i] || residual[i] <= 0.0 {
                    continue;
                }
                acc += residual[i];
                if target < acc {
                    pick = i;
                    break;
                }
            }
            if pick == usize::MAX {
                pick = (0..nn)
                    .rev()
                    .find(|&i| !selected[i] && residual[i] > 0.0)
                    .ok_or_else(|| Error::Numerical("no positive residual left".into()))?;
            }

            let mut u = vec![0.0f64; m];
            for &(row, s) in &cols[pick] {
                u[row] = s as f64;
            }
            for (ub, q) in &basis {
                let mut c = 0.0;
                for &(row, s) in &cols[pick] {
                    c += s as f64 * ub[row];
                }
                if c != 0.0 {
                    let f = c / q;
                    for (uj, bj) in u.iter_mut().zip(ub) {
                        *uj -= f * bj;
                    }
                }
            }
            let q_new: f64 = u.iter().map(|x| x * x).sum();
            if q_new < 1e-9 {
                continue 'attempt;
            }
            selected[pick] = true;
            chosen.push(pick as u32);
            for (i, col) in cols.iter().enumerate() {
                if selected[i] {
                    continue;
                }
                let mut c = 0.0;
                for &(row, s) in col {
                    c += s as f64 * u[row];
                }
                residual[i] -= c * c / q_new;
            }
            basis.push((u, q_new));
        }

        let c = Complex2::new(n, chosen)?;
        // exact support check; float error can only produce a rank-deficient
        // set, never a wrong count
        if c.is_2tree() {
            return Ok(c);
        }
    }
    Err(Error::Numerical(format!(
        "float sampler failed the exact rank post-check {FLOAT_RETRY_BUDGET} times"
    )))
}

// ---------------------------------------------------------------------------
// Batch driver
// ---------------------------------------------------------------------------

/// Batch sampling request. `threads` workers draw with seeds
/// `seed + 0 .. seed + threads - 1` and the outputs are concatenated in
/// worker order, so results are independent of scheduling.
#[derive(Debug, Clone)]
pub struct BatchSpec {
    pub n: u32,
    pub method: SampleMethod,
    pub backend: Option<KernelBackend>,
    pub count: u64,
    pub seed: u64,
    pub threads: usize,
    /// MH steps between emitted records (and before the first one).
    pub mh_thin: u64,
    /// Record real per-sample wall times; off by default so identical
    /// invocations produce byte-identical output.
    pub timings: bool,
}

impl BatchSpec {
    pub fn new(n: u32, method: SampleMethod, count: u64, seed: u64) -> Self {
        BatchSpec {
            n,
            method,
            backend: None,
            count,
            seed,
            threads: 1,
            mh_thin: 200,
            timings: false,
        }
    }
}

pub fn sample_batch(spec: &BatchSpec) -> Result<Vec<SampleRecord>> {
    let threads = spec.threads.max(1).min(spec.count.max(1) as usize);
    let backend = spec.backend.unwrap_or_else(|| default_backend(spec.n));
    // per-worker record counts: fixed by (count, threads) alone
    let base = spec.count / threads as u64;
    let extra = spec.count % threads as u64;
    let counts: Vec<u64> = (0..threads as u64)
        .map(|i| base + u64::from(i < extra))
        .collect();

    let mut out: Vec<Vec<SampleRecord>> = Vec::with_capacity(threads);
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::with_capacity(threads);
        for (i, &cnt) in counts.iter().enumerate() {
            let wseed = worker_seed(spec.seed, i as u64);
            let spec = spec.clone();
            handles.push(scope.spawn(move || worker_run(&spec, backend, wseed, cnt)));
        }
        for h in handles {
            out.push(h.join().expect("sampler worker panicked")?);
        }
        Ok(())
    })?;
    Ok(out.into_iter().flatten().collect())
}

fn worker_run(
    spec: &BatchSpec,
    backend: KernelBackend,
    wseed: u64,
    count: u64,
) -> Result<Vec<SampleRecord>> {
    let mut records = Vec::with_capacity(count as usize);
    match spec.method {
        SampleMethod::Dpp => {
            let kernel = build_kernel(spec.n, backend)?;
            let mut rng = seeded(wseed);
            for _ in 0..count {
                let t0 = Instant::now();
                let c = sample_dpp(&kernel, &mut rng)?;
                let ms = if spec.timings {
                    t0.elapsed().as_secs_f64() * 1e3
                } else {
                    0.0
                };
                records.push(SampleRecord::from_complex(&c, wseed, SampleMethod::Dpp, ms));
            }
        }
        SampleMethod::Mh => {
            let mut chain = MhChain::new(spec.n, wseed, None)?;
            for _ in 0..count {
                let t0 = Instant::now();
                chain.run(spec.mh_thin.max(1));
                let ms = if spec.timings {
                    t0.elapsed().as_secs_f64() * 1e3
                } else {
                    0.0
                };
                let state = chain.state();
                records.push(SampleRecord {
                    n: spec.n,
                    seed: wseed,
                    method: SampleMethod::Mh,
                    faces: state.complex.triangles().iter().map(|t| t.vertices()).collect(),
                    h1_factors: state.torsion.factor_strings(),
                    h1_order: state.torsion.order().to_string(),
                    ms,
                });
            }
        }
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::triangle_index;
    use std::collections::HashMap;

    #[test]
    fn n3_returns_the_unique_hypertree_immediately() {
        for backend in [KernelBackend::Rational, KernelBackend::Float] {
            let kernel = build_kernel(3, backend).unwrap();
            let mut rng = seeded(0);
            let c = sample_dpp(&kernel, &mut rng).unwrap();
            assert_eq!(c.face_indices(), vec![0]);
        }
    }

    #[test]
    fn n4_uniform_over_the_four_hypertrees() {
        let kernel = build_kernel(4, KernelBackend::Rational).unwrap();
        let mut rng = seeded(42);
        let mut freq: HashMap<Vec<u32>, u64> = HashMap::new();
        let total = 10_000;
        for _ in 0..total {
            let c = sample_dpp(&kernel, &mut rng).unwrap();
            *freq.entry(c.face_indices()).or_default() += 1;
        }
        assert_eq!(freq.len(), 4);
        // each 1/4; 3 sigma = 3*sqrt(0.25*0.75/10^4) ~ 0.013
        for (_, count) in freq {
            let p = count as f64 / total as f64;
            assert!((p - 0.25).abs() < 3.0 * (0.25f64 * 0.75 / total as f64).sqrt());
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let kernel = build_kernel(6, KernelBackend::Rational).unwrap();
        let a: Vec<Vec<u32>> = {
            let mut rng = seeded(7);
            (0..20)
                .map(|_| sample_dpp(&kernel, &mut rng).unwrap().face_indices())
                .collect()
        };
        let b: Vec<Vec<u32>> = {
            let mut rng = seeded(7);
            (0..20)
                .map(|_| sample_dpp(&kernel, &mut rng).unwrap().face_indices())
                .collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn float_backend_yields_hypertrees_at_larger_n() {
        let kernel = build_kernel(14, KernelBackend::Float).unwrap();
        let mut rng = seeded(5);
        for _ in 0..5 {
            let c = sample_dpp(&kernel, &mut rng).unwrap();
            assert!(c.is_2tree());
            // universal torsion bound: |H1| <= 3^{C(n-1,2)/2}
            let order = h1(&c).torsion.order();
            let max_bits = (tree_face_count(14) as f64 / 2.0) * 3f64.log2();
            assert!((order.bits() as f64) - 1.0 <= max_bits);
        }
    }

    #[test]
    fn single_face_marginal_near_half_at_n6() {
        let kernel = build_kernel(6, KernelBackend::Rational).unwrap();
        let mut rng = seeded(11);
        let f = triangle_index((1, 2, 3), 6).unwrap();
        let total = 4000;
        let mut hits = 0;
        for _ in 0..total {
            if sample_dpp(&kernel, &mut rng).unwrap().contains_face(f) {
                hits += 1;
            }
        }
        let p = hits as f64 / total as f64;
        assert!((p - 0.5).abs() < 3.0 * (0.25f64 / total as f64).sqrt());
    }

    #[test]
    fn batch_is_deterministic_and_scheduling_independent() {
        let mut spec = BatchSpec::new(5, SampleMethod::Dpp, 12, 3);
        spec.threads = 3;
        let a = sample_batch(&spec).unwrap();
        let b = sample_batch(&spec).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        // worker seeds are consecutive
        assert_eq!(a[0].seed, 3);
        assert!(a.iter().any(|r| r.seed == 5));
    }

    #[test]
    fn record_roundtrip() {
        let kernel = build_kernel(6, KernelBackend::Rational).unwrap();
        let mut rng = seeded(13);
        let c = sample_dpp(&kernel, &mut rng).unwrap();
        let rec = SampleRecord::from_complex(&c, 13, SampleMethod::Dpp, 0.0);
        let line = rec.to_json_line();
        let back = SampleRecord::from_json_line(&line).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.complex().unwrap(), c);
    }
}
