//! Exact integral first homology of a 2-complex with complete 1-skeleton.
//!
//! ker d1 is a saturated direct summand of the edge chain group, so H1 is
//! the cokernel of d2 written in a cycle basis of ker d1; its torsion and
//! rank come straight out of the Smith normal form.

use num::{BigUint, One};

use crate::complex::{tree_face_count, Complex2};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// Invariant-factor form of a finite abelian group; factors equal to 1 are
/// dropped, the empty list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorsionGroup {
    factors: Vec<BigUint>,
}

impl TorsionGroup {
    pub fn trivial() -> Self {
        TorsionGroup { factors: Vec::new() }
    }

    /// Keeps only the factors > 1; input must already satisfy the
    /// divisibility chain (as SNF output does).
    pub fn from_invariant_factors(all: impl IntoIterator<Item = BigUint>) -> Self {
        let one = BigUint::one();
        TorsionGroup {
            factors: all.into_iter().filter(|f| f > &one).collect(),
        }
    }

    pub fn factors(&self) -> &[BigUint] {
        &self.factors
    }

    pub fn order(&self) -> BigUint {
        self.factors
            .iter()
            .fold(BigUint::one(), |acc, f| acc * f)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponents of the Sylow p-part: H_p = sum of Z/p^e over the returned
    /// weakly decreasing exponents. Exact for any size of factor (only
    /// p-adic valuations are needed, never a full factorization).
    pub fn sylow_exponents(&self, p: u64) -> Vec<u32> {
        let pb = BigUint::from(p);
        let mut exps: Vec<u32> = self
            .factors
            .iter()
            .map(|f| {
                let mut v = 0u32;
                let mut rem = f.clone();
                while (&rem % &pb) == BigUint::ZERO {
                    rem /= &pb;
                    v += 1;
                }
                v
            })
            .filter(|&v| v > 0)
            .collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        exps
    }

    /// Decimal strings of the factors, the JSONL wire form.
    pub fn factor_strings(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.to_string()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub betti1: usize,
    pub torsion: TorsionGroup,
}

/// H1(c; Z) = ker d1 / im d2, via SNF of d2 in the cycle basis.
pub fn h1(c: &Complex2) -> Homology {
    let cols = c.reduced_columns();
    let m = IntMatrix::from_sparse_cols(c.reduced_rows(), &cols);
    let snf = m.smith_normal_form();
    Homology {
        betti1: c.reduced_rows() - snf.rank,
        torsion: TorsionGroup::from_invariant_factors(snf.invariant_factors),
    }
}

/// |H1(c)| for a hypertree; errors when the complex is not one (the group
/// would be infinite).
pub fn h1_order(c: &Complex2) -> Result<BigUint> {
    if !c.is_2tree() {
        return Err(Error::Contract(format!(
            "h1_order needs a hypertree: {} faces on {} vertices (want {}), or dependent columns",
            c.face_count(),
            c.n(),
            tree_face_count(c.n()),
        )));
    }
    Ok(h1(c).torsion.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::projective_plane_6;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rp2_has_z2() {
        let hom = h1(&projective_plane_6());
        assert_eq!(hom.betti1, 0);
        assert_eq!(hom.torsion.factors(), &[BigUint::from(2u32)]);
        assert_eq!(hom.torsion.order(), BigUint::from(2u32));
        assert_eq!(
            h1_order(&projective_plane_6()).unwrap(),
            BigUint::from(2u32)
        );
    }

    #[test]
    fn rp2_snf_includes_nine_ones() {
        let rp2 = projective_plane_6();
        let m = crate::complex::boundary_matrix(6, Some(&rp2.face_indices()))
            .unwrap()
            .to_int_matrix();
        let snf = m.smith_normal_form();
        let mut expected = vec![BigUint::one(); 9];
        expected.push(BigUint::from(2u32));
        assert_eq!(snf.invariant_factors, expected);
    }

    #[test]
    fn cone_is_contractible() {
        let c = Complex2::from_triples(4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4]]).unwrap();
        let hom = h1(&c);
        assert_eq!(hom.betti1, 0);
        assert!(hom.torsion.is_trivial());
        assert_eq!(h1_order(&c).unwrap(), BigUint::one());
    }

    #[test]
    fn empty_complex_has_full_betti1() {
        let c = Complex2::empty(5).unwrap();
        let hom = h1(&c);
        assert_eq!(hom.betti1, 6); // C(4,2)
        assert!(hom.torsion.is_trivial());
    }

    #[test]
    fn h1_order_rejects_non_hypertrees() {
        let tetra =
            Complex2::from_triples(4, &[[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]).unwrap();
        assert!(matches!(h1_order(&tetra), Err(Error::Contract(_))));
    }

    #[test]
    fn h1_invariant_under_relabeling() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let rp2 = projective_plane_6();
        for _ in 0..20 {
            let mut perm: Vec<u32> = (1..=6).collect();
            perm.shuffle(&mut rng);
            let moved = rp2.relabel(&perm).unwrap();
            assert_eq!(h1(&moved), h1(&rp2));
        }
    }

    #[test]
    fn sylow_exponents() {
        let g = TorsionGroup::from_invariant_factors(vec![
            BigUint::from(1u32),
            BigUint::from(2u32),
            BigUint::from(12u32),
        ]);
        assert_eq!(g.sylow_exponents(2), vec![2, 1]);
        assert_eq!(g.sylow_exponents(3), vec![1]);
        assert_eq!(g.sylow_exponents(5), Vec::<u32>::new());
        assert_eq!(g.order(), BigUint::from(24u32));
    }
}
