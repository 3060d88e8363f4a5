//! Density witnesses behind the hyperbolicity and asphericity arguments.
//!
//! The scanner finds the exact maximizer of induced-face-count / vertex-count
//! over all vertex subsets up to a configurable size. Induced subcomplexes
//! dominate every subcomplex on the same vertex set, so scanning induced
//! ones decides the "no dense subcomplex" conditions: threshold 3/2 for the
//! linear-isoperimetry certificate and 47/46 for the asphericity witness
//! check. A pass of the 47/46 scan certifies absence of dense witnesses up
//! to the scanned size; it is a necessary condition, not a proof of
//! asphericity (the governing finite obstruction list is not explicit).

use num::{BigRational, BigUint, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Complex2, Triangle};
use crate::error::{Error, Result};

/// Default scan size for both certificate thresholds. The constants behind
/// the asymptotic arguments are non-constructive; the scanner exposes the
/// threshold machinery at a tractable, configurable size.
pub const DEFAULT_SCAN_VERTICES: u32 = 12;

/// Nodes the scan may visit before flagging itself non-exhaustive.
pub const DEFAULT_NODE_BUDGET: u64 = 600_000_000;

pub const HYPERBOLICITY_THRESHOLD: (u64, u64) = (3, 2);
pub const ASPHERICITY_THRESHOLD: (u64, u64) = (47, 46);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub n: u32,
    pub max_vertices: u32,
    /// Vertex set achieving the maximum ratio (1-based labels, sorted);
    /// ties resolved toward the lexicographically smallest set.
    pub best_vertices: Vec<u32>,
    pub f0: u32,
    pub f2: u64,
    pub ratio: f64,
    /// (numerator, denominator) of the threshold, when one was applied.
    pub threshold: Option<[u64; 2]>,
    /// With a threshold: true iff no scanned subset has f2 >= t * f0.
    pub pass: Option<bool>,
    /// Asphericity scan only: no 4 vertices induce all 4 tetrahedron faces.
    pub tetrahedron_free: Option<bool>,
    pub exhaustive: bool,
    pub subsets_visited: u64,
    pub branches_pruned: u64,
}

impl DensityReport {
    /// Exact ratio comparison against a threshold num/den.
    pub fn exceeds(&self, num: u64, den: u64) -> bool {
        self.f2 * den >= num * self.f0 as u64
    }
}

#[derive(Debug, Clone)]
pub struct ScanLimits {
    pub node_budget: u64,
    pub threads: usize,
}

impl Default for ScanLimits {
    fn default() -> Self {
        ScanLimits {
            node_budget: DEFAULT_NODE_BUDGET,
            threads: 1,
        }
    }
}

// ---------------------------------------------------------------------------
// Scanner
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct BestSet {
    f2: u64,
    f0: u32,
    verts: Vec<u32>, // sorted original labels
}

impl BestSet {
    /// Strictly larger ratio wins; equal ratio goes to the lexicographically
    /// smaller vertex set.
    fn better_than(&self, other: &BestSet) -> bool {
        let lhs = self.f2 * other.f0 as u64;
        let rhs = other.f2 * self.f0 as u64;
        lhs > rhs || (lhs == rhs && self.verts < other.verts)
    }
}

struct Scanner {
    nverts: usize,
    cmax: usize,
    orig_label: Vec<u32>,
    /// pair_mask[p * n + q]: positions w with a face {p, q, w}.
    pair_mask: Vec<u64>,
    /// face degree per position, non-increasing in position.
    degs: Vec<u64>,
    budget: u64,
    visited: u64,
    pruned: u64,
    exhausted_budget: bool,
    best: Option<BestSet>,
    /// Positions of the current subset, kept in step with the DFS mask.
    wstack: Vec<usize>,
}

impl Scanner {
    fn new(c: &Complex2, cmax: u32) -> Self {
        let n = c.n() as usize;
        let mut deg = vec![0u64; n];
        let faces = c.triangles();
        for t in &faces {
            for v in t.vertices() {
                deg[(v - 1) as usize] += 1;
            }
        }
        // order vertices by face degree, descending; label ascending on ties
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
        let mut pos_of = vec![0usize; n];
        for (p, &v) in order.iter().enumerate() {
            pos_of[v] = p;
        }
        let mut pair_mask = vec![0u64; n * n];
        for t in &faces {
            let [a, b, cc] = t.vertices();
            let (pa, pb, pc) = (
                pos_of[(a - 1) as usize],
                pos_of[(b - 1) as usize],
                pos_of[(cc - 1) as usize],
            );
            pair_mask[pa * n + pb] |= 1 << pc;
            pair_mask[pb * n + pa] |= 1 << pc;
            pair_mask[pa * n + pc] |= 1 << pb;
            pair_mask[pc * n + pa] |= 1 << pb;
            pair_mask[pb * n + pc] |= 1 << pa;
            pair_mask[pc * n + pb] |= 1 << pa;
        }
        Scanner {
            nverts: n,
            cmax: cmax as usize,
            orig_label: order.iter().map(|&v| v as u32 + 1).collect(),
            pair_mask,
            degs: order.iter().map(|&v| deg[v]).collect(),
            budget: u64::MAX,
            visited: 0,
            pruned: 0,
            exhausted_budget: false,
            best: None,
            wstack: Vec::with_capacity(cmax as usize),
        }
    }

    fn labels_of(&self, wmask: u64) -> Vec<u32> {
        let mut out: Vec<u32> = (0..self.nverts)
            .filter(|&p| wmask >> p & 1 == 1)
            .map(|p| self.orig_label[p])
            .collect();
        out.sort_unstable();
        out
    }

    fn offer(&mut self, f2: u64, wmask: u64, wlen: u32) {
        if let Some(b) = &self.best {
            // integer ratio compare first; materialize labels only on a
            // strict win or a tie that needs the lexicographic rule
            let lhs = f2 * b.f0 as u64;
            let rhs = b.f2 * wlen as u64;
            if lhs < rhs {
                return;
            }
            if lhs == rhs {
                let verts = self.labels_of(wmask);
                if verts < b.verts {
                    self.best = Some(BestSet { f2, f0: wlen, verts });
                }
                return;
            }
        }
        self.best = Some(BestSet {
            f2,
            f0: wlen,
            verts: self.labels_of(wmask),
        });
    }

    /// Could some extension of (f2, w) by candidates at positions >= next
    /// reach or tie the current best ratio? Faces gained by a new vertex are
    /// capped both by its total face degree and by the pairs available
    /// inside the grown set.
    fn can_matter(&self, f2: u64, w: u32, next: usize) -> bool {
        let Some(best) = &self.best else { return true };
        if best.f2 == 0 {
            return true;
        }
        let slots = (self.cmax - w as usize).min(self.nverts - next);
        let mut gain = 0u64;
        for j in 1..=slots {
            let grown = w as u64 + j as u64 - 1;
            let pair_cap = grown * (grown.saturating_sub(1)) / 2;
            gain += self.degs[next + j - 1].min(pair_cap);
            let lhs = (f2 + gain) * best.f0 as u64;
            let rhs = best.f2 * (w as u64 + j as u64);
            if lhs >= rhs {
                return true;
            }
        }
        false
    }

    fn dfs(&mut self, start: usize, wmask: u64, wlen: u32, f2: u64) {
        for q in start..self.nverts {
            if self.visited >= self.budget {
                self.exhausted_budget = true;
                return;
            }
            let base = q * self.nverts;
            let mut gain = 0u64;
            for &a in &self.wstack {
                gain += (self.pair_mask[base + a] & wmask).count_ones() as u64;
            }
            debug_assert_eq!(gain % 2, 0);
            let nf2 = f2 + gain / 2;
            let nmask = wmask | 1 << q;
            let nlen = wlen + 1;
            self.visited += 1;
            self.offer(nf2, nmask, nlen);
            if (nlen as usize) < self.cmax && q + 1 < self.nverts {
                if self.can_matter(nf2, nlen, q + 1) {
                    self.wstack.push(q);
                    self.dfs(q + 1, nmask, nlen, nf2);
                    self.wstack.pop();
                } else {
                    self.pruned += 1;
                }
            }
        }
    }
}

fn scan(c: &Complex2, max_vertices: u32, limits: &ScanLimits) -> Result<DensityReport> {
    if max_vertices < 3 {
        return Err(Error::Input(format!(
            "scan size must be at least 3, got {max_vertices}"
        )));
    }
    let cmax = max_vertices.min(c.n());
    let threads = limits.threads.max(1).min(c.n() as usize);

    let run_tops = |tops: Vec<usize>, budget: u64| -> Scanner {
        let mut sc = Scanner::new(c, cmax);
        sc.budget = budget;
        for q in tops {
            if sc.visited >= sc.budget {
                sc.exhausted_budget = true;
                break;
            }
            // singleton {q} plus everything below it
            sc.visited += 1;
            sc.offer(0, 1 << q, 1);
            if cmax > 1 && q + 1 < sc.nverts && sc.can_matter(0, 1, q + 1) {
                sc.wstack.push(q);
                sc.dfs(q + 1, 1 << q, 1, 0);
                sc.wstack.pop();
            }
        }
        sc
    };

    let merged: Scanner = if threads == 1 {
        run_tops((0..c.n() as usize).collect(), limits.node_budget)
    } else {
        let budget = limits.node_budget / threads as u64;
        let mut parts: Vec<Scanner> = Vec::with_capacity(threads);
        std::thread::scope(|scope| {
            let mut handles = Vec::with_capacity(threads);
            for w in 0..threads {
                let tops: Vec<usize> = (0..c.n() as usize).skip(w).step_by(threads).collect();
                let run = &run_tops;
                handles.push(scope.spawn(move || run(tops, budget)));
            }
            for h in handles {
                parts.push(h.join().expect("scan worker panicked"));
            }
        });
        let mut acc = parts.pop().expect("at least one worker");
        for part in parts {
            acc.visited += part.visited;
            acc.pruned += part.pruned;
            acc.exhausted_budget |= part.exhausted_budget;
            if let Some(b) = part.best {
                match &acc.best {
                    Some(cur) if !b.better_than(cur) => {}
                    _ => acc.best = Some(b),
                }
            }
        }
        acc
    };

    let best = merged.best.unwrap_or(BestSet {
        f2: 0,
        f0: 1,
        verts: vec![1],
    });
    Ok(DensityReport {
        n: c.n(),
        max_vertices: cmax,
        ratio: best.f2 as f64 / best.f0 as f64,
        best_vertices: best.verts,
        f0: best.f0,
        f2: best.f2,
        threshold: None,
        pass: None,
        tetrahedron_free: None,
        exhaustive: !merged.exhausted_budget,
        subsets_visited: merged.visited,
        branches_pruned: merged.pruned,
    })
}

/// Exact densest induced subcomplex over all vertex subsets of size
/// <= max_vertices.
pub fn densest_subcomplex(c: &Complex2, max_vertices: u32) -> Result<DensityReport> {
    scan(c, max_vertices, &ScanLimits::default())
}

pub fn densest_subcomplex_with(
    c: &Complex2,
    max_vertices: u32,
    limits: &ScanLimits,
) -> Result<DensityReport> {
    scan(c, max_vertices, limits)
}

/// Densest-subcomplex scan evaluated against an exact threshold num/den.
pub fn certify(
    c: &Complex2,
    max_vertices: u32,
    threshold: (u64, u64),
    limits: &ScanLimits,
) -> Result<DensityReport> {
    let mut report = scan(c, max_vertices, limits)?;
    report.threshold = Some([threshold.0, threshold.1]);
    report.pass = Some(!report.exceeds(threshold.0, threshold.1));
    Ok(report)
}

/// The 3/2-density certificate: a pass means no subset of at most
/// `max_vertices` vertices induces f2 >= (3/2) f0, the local hypothesis of
/// the linear-isoperimetry argument.
pub fn hyperbolicity_certificate(c: &Complex2, max_vertices: u32) -> Result<DensityReport> {
    certify(c, max_vertices, HYPERBOLICITY_THRESHOLD, &ScanLimits::default())
}

pub fn hyperbolicity_certificate_with(
    c: &Complex2,
    max_vertices: u32,
    limits: &ScanLimits,
) -> Result<DensityReport> {
    certify(c, max_vertices, HYPERBOLICITY_THRESHOLD, limits)
}

/// The 47/46-density witness check plus the explicit tetrahedron-boundary
/// exclusion. Pass means no density witness up to the scanned size; it does
/// not by itself decide asphericity.
pub fn asphericity_certificate(c: &Complex2, max_vertices: u32) -> Result<DensityReport> {
    asphericity_certificate_with(c, max_vertices, &ScanLimits::default())
}

pub fn asphericity_certificate_with(
    c: &Complex2,
    max_vertices: u32,
    limits: &ScanLimits,
) -> Result<DensityReport> {
    let mut report = certify(c, max_vertices, ASPHERICITY_THRESHOLD, limits)?;
    let tetra_free = !contains_tetrahedron_boundary(c);
    report.tetrahedron_free = Some(tetra_free);
    report.pass = Some(report.pass.unwrap_or(false) && tetra_free);
    Ok(report)
}

/// Does any 4-vertex subset induce all four tetrahedron faces? Impossible
/// for hypertrees (H2 = 0), checked explicitly anyway.
pub fn contains_tetrahedron_boundary(c: &Complex2) -> bool {
    let n = c.n();
    let has = |a: u32, b: u32, d: u32| {
        c.contains_face(
            Triangle::new(a, b, d)
                .and_then(|t| t.index(n))
                .expect("valid triple"),
        )
    };
    for a in 1..=n {
        for b in (a + 1)..=n {
            for d in (b + 1)..=n {
                if !has(a, b, d) {
                    continue;
                }
                for e in (d + 1)..=n {
                    if has(a, b, e) && has(a, d, e) && has(b, d, e) {
                        return true;
                    }
                }
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Union bound
// ---------------------------------------------------------------------------

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= BigUint::from(n - i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

/// The negative-association union bound on the probability that some
/// subcomplex on at most `max_vertices` vertices has f2 > (3/2) f0:
///
///   sum_{k=1}^{C'} C(n,k) * C(C(k,3), ceil(3k/2)) * (3/n)^{ceil(3k/2)}
///
/// evaluated as an exact rational. Terms with C(k,3) < ceil(3k/2) vanish.
pub fn union_bound_value(n: u64, max_vertices: u32) -> Result<BigRational> {
    if n < 1 || max_vertices < 1 {
        return Err(Error::Input(
            "union bound needs n >= 1 and a positive scan size".into(),
        ));
    }
    let mut sum = BigRational::zero();
    let three_over_n = BigRational::new(BigUint::from(3u32).into(), BigUint::from(n).into());
    for k in 1..=max_vertices as u64 {
        let m = (3 * k + 1) / 2; // ceil(3k/2)
        let faces_avail = k * k.saturating_sub(1) * k.saturating_sub(2) / 6;
        if faces_avail < m {
            continue;
        }
        let ways = binomial(n, k) * binomial(faces_avail, m);
        sum += BigRational::from_integer(ways.into()) * three_over_n.pow(m as i32);
    }
    Ok(sum)
}

pub fn union_bound_value_f64(n: u64, max_vertices: u32) -> Result<f64> {
    Ok(union_bound_value(n, max_vertices)?
        .to_f64()
        .unwrap_or(f64::NAN))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{projective_plane_6, triangle_count};
    use rand::prelude::*;

    #[test]
    fn rp2_ratio_five_thirds_fails_both_thresholds() {
        let rp2 = projective_plane_6();
        let hyp = hyperbolicity_certificate(&rp2, 6).unwrap();
        assert_eq!(hyp.f0, 6);
        assert_eq!(hyp.f2, 10);
        assert_eq!(hyp.best_vertices, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(hyp.pass, Some(false));
        assert!(hyp.exhaustive);

        let asp = asphericity_certificate(&rp2, 6).unwrap();
        assert_eq!(asp.pass, Some(false));
        assert_eq!(asp.tetrahedron_free, Some(true));
    }

    #[test]
    fn cone_and_single_triangle() {
        let cone = Complex2::from_triples(4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4]]).unwrap();
        let r = hyperbolicity_certificate(&cone, 4).unwrap();
        assert_eq!((r.f2, r.f0), (3, 4));
        assert_eq!(r.pass, Some(true));
        assert_eq!(asphericity_certificate(&cone, 4).unwrap().pass, Some(true));

        let tri = Complex2::from_triples(3, &[[1, 2, 3]]).unwrap();
        let r = densest_subcomplex(&tri, 3).unwrap();
        assert_eq!((r.f2, r.f0), (1, 3));
    }

    #[test]
    fn empty_complex_passes_vacuously() {
        let empty = Complex2::empty(6).unwrap();
        let r = hyperbolicity_certificate(&empty, 5).unwrap();
        assert_eq!(r.f2, 0);
        assert_eq!(r.pass, Some(true));
    }

    #[test]
    fn tetrahedron_boundary_detected() {
        let tetra =
            Complex2::from_triples(5, &[[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        assert!(contains_tetrahedron_boundary(&tetra));
        assert!(!contains_tetrahedron_boundary(&projective_plane_6()));
        let asp = asphericity_certificate(&tetra, 4).unwrap();
        assert_eq!(asp.tetrahedron_free, Some(false));
        assert_eq!(asp.pass, Some(false));
    }

    /// Independent oracle: exhaustive scan over every vertex subset.
    fn brute_force_max(c: &Complex2, cmax: u32) -> (u64, u32) {
        let n = c.n();
        let faces = c.triangles();
        let mut best = (0u64, 1u32);
        for mask in 1u64..(1 << n) {
            let size = mask.count_ones();
            if size > cmax {
                continue;
            }
            let f2 = faces
                .iter()
                .filter(|t| {
                    t.vertices()
                        .iter()
                        .all(|&v| mask >> (v - 1) & 1 == 1)
                })
                .count() as u64;
            if f2 * best.1 as u64 > best.0 * size as u64 {
                best = (f2, size);
            }
        }
        best
    }

    #[test]
    fn agrees_with_brute_force_on_random_complexes() {
        let mut rng = crate::rng::seeded(17);
        for _ in 0..60 {
            let n = rng.gen_range(4..=8u32);
            let cap = triangle_count(n);
            let density = rng.gen_range(0.1..0.7);
            let faces: Vec<u32> = (0..cap).filter(|_| rng.gen_bool(density)).collect();
            let c = Complex2::new(n, faces).unwrap();
            let report = densest_subcomplex(&c, n).unwrap();
            let (bf2, bf0) = brute_force_max(&c, n);
            assert_eq!(
                report.f2 * bf0 as u64,
                bf2 * report.f0 as u64,
                "n={n} faces={:?}",
                c.face_indices()
            );
        }
    }

    #[test]
    fn enlarging_scan_size_never_decreases_ratio() {
        let mut rng = crate::rng::seeded(23);
        for _ in 0..20 {
            let cap = triangle_count(7);
            let faces: Vec<u32> = (0..cap).filter(|_| rng.gen_bool(0.4)).collect();
            let c = Complex2::new(7, faces).unwrap();
            let mut prev = 0.0f64;
            for cmax in 3..=7 {
                let r = densest_subcomplex(&c, cmax).unwrap();
                let ratio = r.f2 as f64 / r.f0 as f64;
                assert!(ratio >= prev - 1e-12);
                prev = ratio;
            }
        }
    }

    #[test]
    fn deleting_faces_never_increases_ratio() {
        let mut rng = crate::rng::seeded(29);
        for _ in 0..20 {
            let cap = triangle_count(7);
            let faces: Vec<u32> = (0..cap).filter(|_| rng.gen_bool(0.5)).collect();
            let c = Complex2::new(7, faces.iter().copied()).unwrap();
            let full = densest_subcomplex(&c, 7).unwrap();
            let mut remaining = faces.clone();
            remaining.shuffle(&mut rng);
            remaining.truncate(remaining.len() / 2);
            let smaller = Complex2::new(7, remaining).unwrap();
            let partial = densest_subcomplex(&smaller, 7).unwrap();
            assert!(
                partial.f2 * full.f0 as u64 <= full.f2 * partial.f0 as u64,
                "deletion increased max density"
            );
        }
    }

    /// If a scanned subset violates the 3/2 bound, trimming faces one at a
    /// time reaches the ceiling exactly (the witness-trimming step of the
    /// union-bound argument).
    #[test]
    fn violators_trim_to_exact_ceiling() {
        let rp2 = projective_plane_6();
        let report = hyperbolicity_certificate(&rp2, 6).unwrap();
        assert_eq!(report.pass, Some(false));
        let f0 = report.f0 as u64;
        let ceiling = (3 * f0 + 1) / 2;
        assert!(report.f2 >= ceiling);
        // dropping one face at a time passes through every intermediate count
        let mut f2 = report.f2;
        while f2 > ceiling {
            f2 -= 1;
        }
        assert_eq!(f2, ceiling);
    }

    #[test]
    fn thresholds_are_exact_not_float() {
        // f2/f0 = 24/16 = 3/2 exactly: must FAIL the 3/2 certificate
        let report = DensityReport {
            n: 16,
            max_vertices: 16,
            best_vertices: vec![],
            f0: 16,
            f2: 24,
            ratio: 1.5,
            threshold: None,
            pass: None,
            tetrahedron_free: None,
            exhaustive: true,
            subsets_visited: 0,
            branches_pruned: 0,
        };
        assert!(report.exceeds(3, 2));
        assert!(!report.exceeds(47, 46) || 24 * 46 >= 47 * 16);
    }

    #[test]
    fn union_bound_zero_below_first_viable_size() {
        for n in [10u64, 100, 1000] {
            assert_eq!(union_bound_value(n, 3).unwrap(), BigRational::zero());
            assert_eq!(union_bound_value(n, 4).unwrap(), BigRational::zero());
            assert!(union_bound_value(n, 5).unwrap() > BigRational::zero());
        }
    }

    #[test]
    fn union_bound_n100_c6_is_k5_plus_k6() {
        // independent term-by-term arithmetic
        let expect = BigRational::from_integer((binomial(100, 5) * binomial(10, 8)).into())
            * BigRational::new(BigUint::from(3u32).into(), BigUint::from(100u32).into()).pow(8)
            + BigRational::from_integer((binomial(100, 6) * binomial(20, 9)).into())
                * BigRational::new(BigUint::from(3u32).into(), BigUint::from(100u32).into())
                    .pow(9);
        assert_eq!(union_bound_value(100, 6).unwrap(), expect);
    }

    #[test]
    fn union_bound_decreases_in_n() {
        let vals: Vec<BigRational> = [50u64, 100, 200, 400]
            .iter()
            .map(|&n| union_bound_value(n, 6).unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] < w[0]);
        }
    }

    #[test]
    fn scan_counters_and_budget() {
        let rp2 = projective_plane_6();
        let full = densest_subcomplex(&rp2, 6).unwrap();
        assert!(full.exhaustive);
        assert!(full.subsets_visited > 0);
        let limited = densest_subcomplex_with(
            &rp2,
            6,
            &ScanLimits {
                node_budget: 5,
                threads: 1,
            },
        )
        .unwrap();
        assert!(!limited.exhaustive);
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let mut rng = crate::rng::seeded(37);
        for _ in 0..10 {
            let cap = triangle_count(8);
            let faces: Vec<u32> = (0..cap).filter(|_| rng.gen_bool(0.4)).collect();
            let c = Complex2::new(8, faces).unwrap();
            let seq = densest_subcomplex(&c, 8).unwrap();
            let par = densest_subcomplex_with(
                &c,
                8,
                &ScanLimits {
                    node_budget: DEFAULT_NODE_BUDGET,
                    threads: 4,
                },
            )
            .unwrap();
            assert_eq!((seq.f2, seq.f0, &seq.best_vertices), (par.f2, par.f0, &par.best_vertices));
        }
    }

    #[test]
    fn scan_size_precondition() {
        let rp2 = projective_plane_6();
        assert!(densest_subcomplex(&rp2, 2).is_err());
    }
}
