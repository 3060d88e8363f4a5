//! Triangles, 2-complexes with complete 1-skeleton, and their boundary
//! operators.
//!
//! Conventions, fixed once for the whole crate:
//! - vertex labels are 1-based `1..=n` externally and in this API;
//! - edges and triangles are ordered lexicographically by their sorted
//!   vertex tuples, with 0-based ranks;
//! - the simplicial boundary of a triangle i<j<k is [j,k] - [i,k] + [i,j],
//!   so every boundary column reads (+1, -1, +1) in edge-row order.

use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, ModEchelon, RANK_PRIME, RANK_PRIME_ALT};

/// Hard cap: face bitsets are sized for C(n,3) positions and the density
/// scanner packs vertex sets into u64 masks.
pub const MAX_VERTICES: u32 = 64;

pub fn edge_count(n: u32) -> u32 {
    n * (n - 1) / 2
}

pub fn triangle_count(n: u32) -> u32 {
    n * (n - 1) * (n - 2) / 6
}

/// Faces of any n-vertex hypertree: C(n-1, 2).
pub fn tree_face_count(n: u32) -> u32 {
    (n - 1) * (n - 2) / 2
}

/// 0-based lexicographic rank of the edge {a, b}, 1 <= a < b <= n.
pub fn edge_index(a: u32, b: u32, n: u32) -> u32 {
    debug_assert!(1 <= a && a < b && b <= n);
    (a - 1) * n - a * (a - 1) / 2 + (b - a - 1)
}

/// Inverse of `edge_index`.
pub fn index_edge(idx: u32, n: u32) -> (u32, u32) {
    let mut a = 1;
    let mut rem = idx;
    while rem >= n - a {
        rem -= n - a;
        a += 1;
    }
    (a, a + 1 + rem)
}

/// A triangle {i, j, k} with strictly increasing 1-based vertex labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triangle {
    vertices: [u32; 3],
}

impl Triangle {
    pub fn new(i: u32, j: u32, k: u32) -> Result<Self> {
        if i < 1 || !(i < j && j < k) {
            return Err(Error::Input(format!(
                "triangle vertices must satisfy 1 <= i < j < k, got ({i}, {j}, {k})"
            )));
        }
        Ok(Triangle { vertices: [i, j, k] })
    }

    pub fn vertices(&self) -> [u32; 3] {
        self.vertices
    }

    /// 0-based lexicographic rank among all increasing triples from [n].
    pub fn index(&self, n: u32) -> Result<u32> {
        let [i, j, k] = self.vertices;
        if k > n {
            return Err(Error::Input(format!(
                "triangle ({i}, {j}, {k}) out of range for n = {n}"
            )));
        }
        let mut rank = 0;
        for a in 1..i {
            rank += (n - a) * (n - a - 1) / 2;
        }
        for b in (i + 1)..j {
            rank += n - b;
        }
        Ok(rank + (k - j - 1))
    }

    /// Inverse of `index`.
    pub fn from_index(idx: u32, n: u32) -> Result<Self> {
        if n < 3 || idx >= triangle_count(n) {
            return Err(Error::Input(format!(
                "triangle index {idx} out of range for n = {n}"
            )));
        }
        let mut rem = idx;
        let mut i = 1;
        loop {
            let block = (n - i) * (n - i - 1) / 2;
            if rem < block {
                break;
            }
            rem -= block;
            i += 1;
        }
        let mut j = i + 1;
        while rem >= n - j {
            rem -= n - j;
            j += 1;
        }
        Ok(Triangle {
            vertices: [i, j, j + 1 + rem],
        })
    }
}

pub fn triangle_index(triple: (u32, u32, u32), n: u32) -> Result<u32> {
    Triangle::new(triple.0, triple.1, triple.2)?.index(n)
}

pub fn index_triangle(idx: u32, n: u32) -> Result<Triangle> {
    Triangle::from_index(idx, n)
}

// ---------------------------------------------------------------------------
// Face bitsets
// ---------------------------------------------------------------------------

/// Fixed-capacity bitset over the C(n,3) triangle positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FaceSet {
    nbits: u32,
    words: Vec<u64>,
}

impl FaceSet {
    pub fn new(nbits: u32) -> Self {
        FaceSet {
            nbits,
            words: vec![0; ((nbits as usize) + 63) / 64],
        }
    }

    pub fn capacity(&self) -> u32 {
        self.nbits
    }

    pub fn contains(&self, i: u32) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    /// Returns false if the bit was already set.
    pub fn insert(&mut self, i: u32) -> bool {
        debug_assert!(i < self.nbits);
        let w = &mut self.words[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let fresh = *w & mask == 0;
        *w |= mask;
        fresh
    }

    pub fn remove(&mut self, i: u32) -> bool {
        let w = &mut self.words[(i / 64) as usize];
        let mask = 1u64 << (i % 64);
        let present = *w & mask != 0;
        *w &= !mask;
        present
    }

    pub fn len(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_superset_of(&self, other: &FaceSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros();
                    bits &= bits - 1;
                    Some(wi as u32 * 64 + b)
                }
            })
        })
    }
}

// ---------------------------------------------------------------------------
// Complex2
// ---------------------------------------------------------------------------

/// An n-vertex 2-complex with complete 1-skeleton, stored as the set of
/// triangle indices. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Complex2 {
    n: u32,
    faces: FaceSet,
}

impl Complex2 {
    pub fn new(n: u32, face_indices: impl IntoIterator<Item = u32>) -> Result<Self> {
        if !(3..=MAX_VERTICES).contains(&n) {
            return Err(Error::Input(format!(
                "vertex count must be in 3..={MAX_VERTICES}, got {n}"
            )));
        }
        let cap = triangle_count(n);
        let mut faces = FaceSet::new(cap);
        for idx in face_indices {
            if idx >= cap {
                return Err(Error::Input(format!(
                    "face index {idx} out of range for n = {n} (max {})",
                    cap - 1
                )));
            }
            faces.insert(idx);
        }
        Ok(Complex2 { n, faces })
    }

    pub fn from_triples(n: u32, triples: &[[u32; 3]]) -> Result<Self> {
        let mut indices = Vec::with_capacity(triples.len());
        for t in triples {
            let mut v = *t;
            v.sort_unstable();
            if v[0] == v[1] || v[1] == v[2] {
                return Err(Error::Input(format!(
                    "degenerate triangle ({}, {}, {})",
                    t[0], t[1], t[2]
                )));
            }
            indices.push(Triangle::new(v[0], v[1], v[2])?.index(n)?);
        }
        Complex2::new(n, indices)
    }

    pub fn empty(n: u32) -> Result<Self> {
        Complex2::new(n, std::iter::empty())
    }

    /// The canonical contractible hypertree: all faces {1, j, k} through the
    /// apex vertex 1. Used as the deterministic chain start.
    pub fn cone(n: u32) -> Result<Self> {
        let mut triples = Vec::new();
        for j in 2..=n {
            for k in (j + 1)..=n {
                triples.push([1, j, k]);
            }
        }
        Complex2::from_triples(n, &triples)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn face_count(&self) -> u32 {
        self.faces.len()
    }

    pub fn contains_face(&self, idx: u32) -> bool {
        self.faces.contains(idx)
    }

    pub fn face_indices(&self) -> Vec<u32> {
        self.faces.iter().collect()
    }

    pub fn triangles(&self) -> Vec<Triangle> {
        self.faces
            .iter()
            .map(|i| Triangle::from_index(i, self.n).expect("stored index is valid"))
            .collect()
    }

    pub fn face_set(&self) -> &FaceSet {
        &self.faces
    }

    /// New complex with one face swapped for another (basis-exchange move).
    pub fn exchange_face(&self, remove: u32, add: u32) -> Result<Self> {
        if !self.faces.contains(remove) {
            return Err(Error::Input(format!("face {remove} not in complex")));
        }
        if add >= triangle_count(self.n) || self.faces.contains(add) {
            return Err(Error::Input(format!("face {add} not addable")));
        }
        let mut faces = self.faces.clone();
        faces.remove(remove);
        faces.insert(add);
        Ok(Complex2 { n: self.n, faces })
    }

    /// Applies a vertex permutation; `perm[v-1]` is the new label of v.
    pub fn relabel(&self, perm: &[u32]) -> Result<Self> {
        if perm.len() != self.n as usize {
            return Err(Error::Input("permutation length must equal n".into()));
        }
        let mut seen = vec![false; self.n as usize];
        for &p in perm {
            if p < 1 || p > self.n || seen[(p - 1) as usize] {
                return Err(Error::Input("not a permutation of 1..=n".into()));
            }
            seen[(p - 1) as usize] = true;
        }
        let triples: Vec<[u32; 3]> = self
            .triangles()
            .iter()
            .map(|t| {
                let [i, j, k] = t.vertices();
                [
                    perm[(i - 1) as usize],
                    perm[(j - 1) as usize],
                    perm[(k - 1) as usize],
                ]
            })
            .collect();
        Complex2::from_triples(self.n, &triples)
    }

    /// Columns of the face boundary operator expressed in the fundamental
    /// cycle basis of ker d1 (cycles z_ab = [a,b] - [a,n] + [b,n] for
    /// a < b < n). The cokernel of this matrix is exactly H1.
    pub(crate) fn reduced_columns(&self) -> Vec<Vec<(usize, i64)>> {
        self.faces
            .iter()
            .map(|idx| reduced_column(idx, self.n))
            .collect()
    }

    pub(crate) fn reduced_rows(&self) -> usize {
        tree_face_count(self.n) as usize
    }

    /// True iff the complex has exactly C(n-1,2) faces whose boundary
    /// columns are linearly independent over the rationals.
    pub fn is_2tree(&self) -> bool {
        let target = tree_face_count(self.n);
        if self.face_count() != target {
            return false;
        }
        let cols = self.reduced_columns();
        let dim = self.reduced_rows();
        // Nonzero k x k minors of a matrix with three +-1 entries per column
        // are Hadamard-bounded by 3^{k/2}; for n <= 13 that is below the
        // rank prime, so elimination mod p decides rank over Q exactly.
        let full_mod = |p: u64| {
            let mut ech = ModEchelon::new(p, dim);
            cols.iter().all(|c| ech.insert_sparse(c))
        };
        if full_mod(RANK_PRIME) {
            return true;
        }
        if self.n <= 13 {
            return false;
        }
        if full_mod(RANK_PRIME_ALT) {
            return true;
        }
        let m = IntMatrix::from_sparse_cols(dim, &cols);
        m.rank_over_q() == target as usize
    }
}

pub(crate) fn reduced_column(face_idx: u32, n: u32) -> Vec<(usize, i64)> {
    let [i, j, k] = Triangle::from_index(face_idx, n)
        .expect("valid face index")
        .vertices();
    if k == n {
        vec![(edge_index(i, j, n - 1) as usize, 1)]
    } else {
        vec![
            (edge_index(j, k, n - 1) as usize, 1),
            (edge_index(i, k, n - 1) as usize, -1),
            (edge_index(i, j, n - 1) as usize, 1),
        ]
    }
}

// ---------------------------------------------------------------------------
// Boundary matrices
// ---------------------------------------------------------------------------

/// The signed edge x triangle incidence matrix, rows in lexicographic edge
/// order, columns an explicit list of triangle indices.
#[derive(Debug, Clone)]
pub struct BoundaryMatrix {
    n: u32,
    cols: Vec<u32>,
}

impl BoundaryMatrix {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rows(&self) -> usize {
        edge_count(self.n) as usize
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn col_face(&self, c: usize) -> u32 {
        self.cols[c]
    }

    /// The three (edge row, sign) entries of a column, in row order.
    /// For i < j < k the rows are [i,j] < [i,k] < [j,k] with signs +, -, +.
    pub fn col_entries(&self, c: usize) -> [(usize, i64); 3] {
        let [i, j, k] = Triangle::from_index(self.cols[c], self.n)
            .expect("valid face index")
            .vertices();
        [
            (edge_index(i, j, self.n) as usize, 1),
            (edge_index(i, k, self.n) as usize, -1),
            (edge_index(j, k, self.n) as usize, 1),
        ]
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.col_entries(c)
            .iter()
            .find(|&&(row, _)| row == r)
            .map_or(0, |&(_, s)| s)
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<(usize, i64)>> = (0..self.cols())
            .map(|c| self.col_entries(c).to_vec())
            .collect();
        IntMatrix::from_sparse_cols(self.rows(), &cols)
    }
}

/// d2 restricted to the given triangle columns; all C(n,3) columns if
/// `faces` is None.
pub fn boundary_matrix(n: u32, faces: Option<&[u32]>) -> Result<BoundaryMatrix> {
    if !(3..=MAX_VERTICES).contains(&n) {
        return Err(Error::Input(format!(
            "vertex count must be in 3..={MAX_VERTICES}, got {n}"
        )));
    }
    let cap = triangle_count(n);
    let cols = match faces {
        Some(fs) => {
            for &f in fs {
                if f >= cap {
                    return Err(Error::Input(format!(
                        "face index {f} out of range for n = {n}"
                    )));
                }
            }
            fs.to_vec()
        }
        None => (0..cap).collect(),
    };
    Ok(BoundaryMatrix { n, cols })
}

/// The vertex boundary operator d1 (vertices x edges), for the d1*d2 = 0
/// check: edge {a,b} maps to b - a.
pub fn vertex_boundary_matrix(n: u32) -> IntMatrix {
    let mut m = IntMatrix::zeros(n as usize, edge_count(n) as usize);
    for e in 0..edge_count(n) {
        let (a, b) = index_edge(e, n);
        m.set((a - 1) as usize, e as usize, (-1).into());
        m.set((b - 1) as usize, e as usize, 1.into());
    }
    m
}

/// The 10 faces of the 6-vertex projective-plane triangulation, the
/// smallest hypertree with torsion. Handy in tests and demos.
pub fn projective_plane_6() -> Complex2 {
    Complex2::from_triples(
        6,
        &[
            [1, 2, 3],
            [1, 2, 5],
            [1, 3, 6],
            [1, 4, 5],
            [1, 4, 6],
            [2, 3, 4],
            [2, 4, 6],
            [2, 5, 6],
            [3, 4, 5],
            [3, 5, 6],
        ],
    )
    .expect("static face list is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;
    use proptest::prelude::*;

    #[test]
    fn triangle_index_examples() {
        assert_eq!(triangle_index((1, 2, 3), 6).unwrap(), 0);
        assert_eq!(triangle_index((4, 5, 6), 6).unwrap(), 19);
        assert_eq!(triangle_index((1, 2, 5), 6).unwrap(), 2);
    }

    #[test]
    fn triangle_index_rejects_bad_input() {
        assert!(triangle_index((1, 1, 2), 6).is_err());
        assert!(triangle_index((3, 2, 1), 6).is_err());
        assert!(triangle_index((4, 5, 7), 6).is_err());
        assert!(Triangle::from_index(20, 6).is_err());
    }

    #[test]
    fn triangle_index_is_lexicographic() {
        // brute-force enumeration oracle
        for n in 3..=8u32 {
            let mut expect = 0u32;
            for i in 1..=n {
                for j in (i + 1)..=n {
                    for k in (j + 1)..=n {
                        assert_eq!(triangle_index((i, j, k), n).unwrap(), expect);
                        let t = Triangle::from_index(expect, n).unwrap();
                        assert_eq!(t.vertices(), [i, j, k]);
                        expect += 1;
                    }
                }
            }
            assert_eq!(expect, triangle_count(n));
        }
    }

    #[test]
    fn edge_index_roundtrip() {
        for n in 3..=10u32 {
            let mut expect = 0u32;
            for a in 1..=n {
                for b in (a + 1)..=n {
                    assert_eq!(edge_index(a, b, n), expect);
                    assert_eq!(index_edge(expect, n), (a, b));
                    expect += 1;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn triangle_roundtrip(n in 3u32..=30, seed in 0u32..1_000_000) {
            let idx = seed % triangle_count(n);
            let t = Triangle::from_index(idx, n).unwrap();
            prop_assert_eq!(t.index(n).unwrap(), idx);
        }
    }

    #[test]
    fn boundary_single_triangle_signs() {
        let b = boundary_matrix(3, None).unwrap();
        assert_eq!(b.rows(), 3);
        assert_eq!(b.cols(), 1);
        // rows (1,2), (1,3), (2,3) in order
        assert_eq!(b.entry(0, 0), 1);
        assert_eq!(b.entry(1, 0), -1);
        assert_eq!(b.entry(2, 0), 1);
    }

    #[test]
    fn boundary_rank_examples() {
        let full4 = boundary_matrix(4, None).unwrap().to_int_matrix();
        assert_eq!((full4.rows(), full4.cols()), (6, 4));
        assert_eq!(full4.rank_over_q(), 3);

        let full6 = boundary_matrix(6, None).unwrap().to_int_matrix();
        assert_eq!((full6.rows(), full6.cols()), (15, 20));
        assert_eq!(full6.rank_over_q(), 10);

        let rp2 = projective_plane_6();
        let m = boundary_matrix(6, Some(&rp2.face_indices()))
            .unwrap()
            .to_int_matrix();
        assert_eq!((m.rows(), m.cols()), (15, 10));
        assert_eq!(m.rank_over_q(), 10);
    }

    #[test]
    fn d1_after_d2_is_zero() {
        for n in 3..=10u32 {
            let d2 = boundary_matrix(n, None).unwrap();
            let d1 = vertex_boundary_matrix(n);
            for c in 0..d2.cols() {
                for v in 0..n as usize {
                    let mut acc = num::BigInt::zero();
                    for (r, s) in d2.col_entries(c) {
                        acc += d1.get(v, r) * s;
                    }
                    assert!(acc.is_zero(), "n={n} col={c} vertex={v}");
                }
            }
        }
    }

    #[test]
    fn is_2tree_examples() {
        assert!(projective_plane_6().is_2tree());

        let tetra = Complex2::from_triples(4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
            .unwrap();
        assert!(!tetra.is_2tree());

        // any 3 of the 4 tetrahedron faces form a hypertree
        for skip in 0..4u32 {
            let faces: Vec<u32> = (0..4).filter(|&f| f != skip).collect();
            let c = Complex2::new(4, faces).unwrap();
            assert!(c.is_2tree());
        }

        assert!(Complex2::cone(7).unwrap().is_2tree());
        assert!(!Complex2::empty(5).unwrap().is_2tree());
    }

    #[test]
    fn reduced_columns_match_full_rank() {
        // the cycle-basis matrix must have the same rank as raw d2|faces
        let complexes = [
            projective_plane_6(),
            Complex2::cone(6).unwrap(),
            Complex2::from_triples(6, &[[1, 2, 3], [2, 3, 4], [4, 5, 6]]).unwrap(),
        ];
        for c in complexes {
            let reduced = IntMatrix::from_sparse_cols(c.reduced_rows(), &c.reduced_columns());
            let raw = boundary_matrix(c.n(), Some(&c.face_indices()))
                .unwrap()
                .to_int_matrix();
            assert_eq!(reduced.rank_over_q(), raw.rank_over_q());
        }
    }

    #[test]
    fn relabel_is_permutation_safe() {
        let rp2 = projective_plane_6();
        let moved = rp2.relabel(&[2, 3, 4, 5, 6, 1]).unwrap();
        assert_eq!(moved.face_count(), 10);
        assert!(moved.is_2tree());
        assert!(rp2.relabel(&[1, 1, 2, 3, 4, 5]).is_err());
    }

    #[test]
    fn exchange_face_basics() {
        let cone = Complex2::cone(4).unwrap();
        let present = cone.face_indices()[0];
        let absent = (0..4).find(|f| !cone.contains_face(*f)).unwrap();
        let swapped = cone.exchange_face(present, absent).unwrap();
        assert_eq!(swapped.face_count(), 3);
        assert!(cone.exchange_face(absent, present).is_err());
    }
}
