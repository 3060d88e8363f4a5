//! The projection kernel of the determinantal measure on hypertrees.
//!
//! The measure weighting each hypertree by |H1|^2 is a determinantal point
//! process over the C(n,3) triangles whose kernel K is the orthogonal
//! projection onto the row space of d2. Because d2 d2^T acts as n times the
//! identity on ker d1 = im d2 (complete-complex Laplacian identity), that
//! projection has the closed form K = (1/n) d2^T d2,
//! so n*K has entries 3 on the diagonal, +-1 for triangle pairs sharing an
//! edge, and 0 otherwise. Entries are derived on demand; nothing is stored
//! beyond n. The identification is validated empirically against the exact
//! census in the test suite.

use num::bigint::BigInt;
use num::{BigRational, Signed};
use rand::Rng;

use crate::complex::{edge_count, tree_face_count, triangle_count, Triangle, MAX_VERTICES};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rng::seeded;

/// Arithmetic used by the sampler driven from this kernel. Kernel entries
/// and containment probabilities are exact regardless of backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelBackend {
    Rational,
    Float,
}

/// The spec'd default: exact arithmetic up to n = 10, floats beyond.
pub fn default_backend(n: u32) -> KernelBackend {
    if n <= 10 {
        KernelBackend::Rational
    } else {
        KernelBackend::Float
    }
}

#[derive(Debug, Clone, Copy)]
pub struct DppKernel {
    n: u32,
    backend: KernelBackend,
}

pub fn build_kernel(n: u32, backend: KernelBackend) -> Result<DppKernel> {
    if !(3..=MAX_VERTICES).contains(&n) {
        return Err(Error::Resource(format!(
            "kernel supports 3 <= n <= {MAX_VERTICES}, got {n}"
        )));
    }
    if backend == KernelBackend::Rational && n > 16 {
        return Err(Error::Resource(format!(
            "exact-rational sampling is budgeted for n <= 16, got {n}; use the float backend"
        )));
    }
    let k = DppKernel { n, backend };
    if backend == KernelBackend::Float {
        let worst = k.projection_probe_residual(8, 0xD99);
        if worst > 1e-9 {
            return Err(Error::Numerical(format!(
                "float kernel failed K^2 = K probe: residual {worst:e}"
            )));
        }
    }
    Ok(k)
}

impl DppKernel {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn backend(&self) -> KernelBackend {
        self.backend
    }

    /// Number of items (triangles).
    pub fn size(&self) -> u32 {
        triangle_count(self.n)
    }

    /// Rank of the projection = sample cardinality = C(n-1,2).
    pub fn rank(&self) -> u32 {
        tree_face_count(self.n)
    }

    /// Entry of n*K: 3 on the diagonal, the product of boundary signs on
    /// the shared edge when |s ∩ t| = 2, otherwise 0.
    pub fn entry_scaled(&self, s: u32, t: u32) -> i64 {
        if s == t {
            return 3;
        }
        let a = Triangle::from_index(s, self.n).expect("valid index").vertices();
        let b = Triangle::from_index(t, self.n).expect("valid index").vertices();
        let shared: Vec<u32> = a.iter().copied().filter(|v| b.contains(v)).collect();
        if shared.len() != 2 {
            return 0;
        }
        boundary_sign(&a, &shared) * boundary_sign(&b, &shared)
    }

    pub fn entry(&self, s: u32, t: u32) -> BigRational {
        BigRational::new(self.entry_scaled(s, t).into(), BigInt::from(self.n))
    }

    pub fn entry_f64(&self, s: u32, t: u32) -> f64 {
        self.entry_scaled(s, t) as f64 / self.n as f64
    }

    pub fn trace(&self) -> BigRational {
        BigRational::new(
            (3 * self.size() as i64).into(),
            BigInt::from(self.n),
        )
    }

    /// P(all given faces appear) = det of the kernel minor on those faces,
    /// computed exactly as det(n*K_S) / n^|S| for any backend.
    pub fn containment_probability(&self, faces: &[u32]) -> Result<BigRational> {
        let cap = self.size();
        for &f in faces {
            if f >= cap {
                return Err(Error::Input(format!(
                    "face index {f} out of range for n = {}",
                    self.n
                )));
            }
        }
        let mut sorted = faces.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != faces.len() {
            return Err(Error::Input("containment faces must be distinct".into()));
        }
        let k = faces.len();
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, self.entry_scaled(faces[i], faces[j]).into());
            }
        }
        let det = m.determinant();
        debug_assert!(!det.is_negative(), "kernel minors are PSD");
        Ok(BigRational::new(det, BigInt::from(self.n).pow(k as u32)))
    }

    /// The negative-association upper bound (3/n)^k reported alongside
    /// containment probabilities.
    pub fn marginal_power_bound(&self, k: usize) -> BigRational {
        BigRational::new(BigInt::from(3), BigInt::from(self.n)).pow(k as i32)
    }

    /// Exact structural check: n*K is symmetric with diagonal 3, trace
    /// n*C(n-1,2), (n*K)^2 = n*(n*K), and off-diagonal magnitudes are 1
    /// exactly on edge-sharing pairs. Materializes the full matrix, so it
    /// is budgeted to n <= 12.
    pub fn verify_projection_exact(&self) -> Result<()> {
        if self.n > 12 {
            return Err(Error::Resource(format!(
                "exact projection check materializes C(n,3)^2 entries; budgeted to n <= 12, got {}",
                self.n
            )));
        }
        let nn = self.size() as usize;
        let mut s = vec![0i64; nn * nn];
        for i in 0..nn {
            for j in i..nn {
                let v = self.entry_scaled(i as u32, j as u32);
                s[i * nn + j] = v;
                s[j * nn + i] = v;
            }
        }
        let mut trace = 0i64;
        for i in 0..nn {
            trace += s[i * nn + i];
            if s[i * nn + i] != 3 {
                return Err(Error::Numerical("diagonal entry != 3/n".into()));
            }
        }
        if trace != (self.n as i64) * self.rank() as i64 {
            return Err(Error::Numerical("trace != C(n-1,2)".into()));
        }
        for i in 0..nn {
            for j in 0..nn {
                if i == j {
                    continue;
                }
                let ti = Triangle::from_index(i as u32, self.n).unwrap().vertices();
                let tj = Triangle::from_index(j as u32, self.n).unwrap().vertices();
                let inter = ti.iter().filter(|v| tj.contains(v)).count();
                let expect_abs = if inter == 2 { 1 } else { 0 };
                if s[i * nn + j].abs() != expect_abs {
                    return Err(Error::Numerical(format!(
                        "orbit structure violated at ({i}, {j})"
                    )));
                }
            }
        }
        // (n K)^2 = n (n K), checked in exact integers
        let n64 = self.n as i64;
        for i in 0..nn {
            for j in 0..nn {
                let mut acc: i64 = 0;
                for l in 0..nn {
                    acc += s[i * nn + l] * s[l * nn + j];
                }
                if acc != n64 * s[i * nn + j] {
                    return Err(Error::Numerical(format!(
                        "K^2 != K at ({i}, {j}): {acc} vs {}",
                        n64 * s[i * nn + j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Max |K(Kx) - Kx| over random probe vectors, using the sparse
    /// factorization K = (1/n) B^T B; O(probes * n^3) and safe at any n.
    pub fn projection_probe_residual(&self, probes: u32, seed: u64) -> f64 {
        let mut rng = seeded(seed);
        let nn = self.size() as usize;
        let cols: Vec<[(usize, f64); 3]> = (0..nn as u32)
            .map(|idx| {
                let [i, j, k] = Triangle::from_index(idx, self.n).unwrap().vertices();
                [
                    (crate::complex::edge_index(i, j, self.n) as usize, 1.0),
                    (crate::complex::edge_index(i, k, self.n) as usize, -1.0),
                    (crate::complex::edge_index(j, k, self.n) as usize, 1.0),
                ]
            })
            .collect();
        let m = edge_count(self.n) as usize;
        let apply = |x: &[f64]| -> Vec<f64> {
            let mut mid = vec![0.0; m];
            for (c, col) in cols.iter().enumerate() {
                for &(r, s) in col {
                    mid[r] += s * x[c];
                }
            }
            let mut out = vec![0.0; nn];
            for (c, col) in cols.iter().enumerate() {
                let mut acc = 0.0;
                for &(r, s) in col {
                    acc += s * mid[r];
                }
                out[c] = acc / self.n as f64;
            }
            out
        };
        let mut worst: f64 = 0.0;
        for _ in 0..probes {
            let x: Vec<f64> = (0..nn).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let kx = apply(&x);
            let kkx = apply(&kx);
            for (a, b) in kkx.iter().zip(&kx) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }
}

/// Sign of the edge made of `shared` inside the boundary of `tri`:
/// +1 when the omitted vertex sits in position 0 or 2, -1 in position 1.
fn boundary_sign(tri: &[u32; 3], shared: &[u32]) -> i64 {
    let omitted_pos = tri
        .iter()
        .position(|v| !shared.contains(v))
        .expect("exactly one vertex omitted");
    if omitted_pos == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::triangle_index;

    #[test]
    fn diagonal_and_trace_examples() {
        let k = build_kernel(6, KernelBackend::Rational).unwrap();
        assert_eq!(
            k.entry(0, 0),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(k.trace(), BigRational::from(BigInt::from(10)));
    }

    #[test]
    fn diagonal_is_3_over_n_for_all_small_n() {
        for n in 3..=10u32 {
            let k = build_kernel(n, KernelBackend::Rational).unwrap();
            let expect = BigRational::new(BigInt::from(3), BigInt::from(n));
            for idx in 0..k.size() {
                assert_eq!(k.entry(idx, idx), expect);
            }
            assert_eq!(
                k.trace(),
                BigRational::from(BigInt::from(tree_face_count(n)))
            );
        }
    }

    #[test]
    fn disjoint_pair_probability_is_quarter() {
        let k = build_kernel(6, KernelBackend::Rational).unwrap();
        let a = triangle_index((1, 2, 3), 6).unwrap();
        let b = triangle_index((4, 5, 6), 6).unwrap();
        let p = k.containment_probability(&[a, b]).unwrap();
        assert_eq!(p, BigRational::new(BigInt::from(1), BigInt::from(4)));
    }

    #[test]
    fn edge_sharing_pair_is_two_ninths() {
        let k = build_kernel(6, KernelBackend::Rational).unwrap();
        let a = triangle_index((1, 2, 3), 6).unwrap();
        let b = triangle_index((1, 2, 4), 6).unwrap();
        let p = k.containment_probability(&[a, b]).unwrap();
        assert_eq!(p, BigRational::new(BigInt::from(2), BigInt::from(9)));
        assert!(p <= k.marginal_power_bound(2));
    }

    #[test]
    fn single_face_probability() {
        let k = build_kernel(6, KernelBackend::Rational).unwrap();
        let p = k.containment_probability(&[0]).unwrap();
        assert_eq!(p, BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn rejects_duplicate_or_invalid_faces() {
        let k = build_kernel(6, KernelBackend::Rational).unwrap();
        assert!(k.containment_probability(&[0, 0]).is_err());
        assert!(k.containment_probability(&[99]).is_err());
    }

    #[test]
    fn projection_exact_small_n() {
        for n in 3..=9u32 {
            build_kernel(n, KernelBackend::Rational)
                .unwrap()
                .verify_projection_exact()
                .unwrap();
        }
    }

    #[test]
    fn projection_probe_large_n() {
        for n in [12u32, 20, 30] {
            let k = build_kernel(n, KernelBackend::Float).unwrap();
            assert!(k.projection_probe_residual(4, 7) < 1e-12);
        }
    }

    #[test]
    fn negative_association_on_kernel_minors() {
        // det(K_S) <= prod of marginals for random small face sets
        let k = build_kernel(6, KernelBackend::Rational).unwrap();
        let mut rng = seeded(99);
        for _ in 0..100 {
            let size = rng.gen_range(2..=3);
            let mut faces: Vec<u32> = Vec::new();
            while faces.len() < size {
                let f = rng.gen_range(0..k.size());
                if !faces.contains(&f) {
                    faces.push(f);
                }
            }
            let p = k.containment_probability(&faces).unwrap();
            assert!(p <= k.marginal_power_bound(faces.len()));
        }
    }

    #[test]
    fn backend_limits() {
        assert!(build_kernel(2, KernelBackend::Rational).is_err());
        assert!(build_kernel(40, KernelBackend::Rational).is_err());
        assert!(build_kernel(40, KernelBackend::Float).is_ok());
    }
}
