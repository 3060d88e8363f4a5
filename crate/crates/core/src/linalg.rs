//! Exact integer matrix kernel: rational rank by fraction-free (Bareiss)
//! elimination, determinants, and Smith normal form over arbitrary-precision
//! integers. No floating point anywhere in this module.
//!
//! An overflow-checked `i64` fast path handles the small matrices that
//! dominate census work; anything that might overflow falls back to the
//! `BigInt` reference path. The two paths are cross-checked in tests.

use num::bigint::BigInt;
use num::{BigUint, Integer, One, Signed, Zero};

/// Dense integer matrix with arbitrary-precision entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Invariant factors d_1 | d_2 | ... | d_r of a matrix over Z, r = rank.
/// Factors equal to 1 are kept; dropping them is the caller's business.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub invariant_factors: Vec<BigUint>,
    pub rank: usize,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = IntMatrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| BigInt::from(v)))
            .collect();
        IntMatrix { rows: r, cols: c, data }
    }

    /// Builds a matrix from sparse columns given as (row, value) pairs.
    pub fn from_sparse_cols(rows: usize, cols: &[Vec<(usize, i64)>]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for &(i, v) in col {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    fn to_i64_data(&self) -> Option<Vec<i64>> {
        self.data.iter().map(|v| i64::try_from(v).ok()).collect()
    }

    /// Rank over the rationals by exact fraction-free elimination.
    pub fn rank_over_q(&self) -> usize {
        if let Some(mut small) = self.to_i64_data() {
            if let Some(r) = bareiss_rank_i64(&mut small, self.rows, self.cols) {
                return r;
            }
        }
        bareiss_rank_big(&mut self.data.clone(), self.rows, self.cols)
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if let Some(mut small) = self.to_i64_data() {
            if let Some(d) = bareiss_det_i64(&mut small, self.rows) {
                return BigInt::from(d);
            }
        }
        bareiss_det_big(&mut self.data.clone(), self.rows)
    }

    /// Smith normal form: the diagonal invariant factors under unimodular
    /// row and column operations, with the divisibility chain d_i | d_{i+1}.
    pub fn smith_normal_form(&self) -> SnfResult {
        let factors = if let Some(mut small) = self.to_i64_data() {
            match snf_i64(&mut small, self.rows, self.cols) {
                Some(fs) => fs.into_iter().map(BigUint::from).collect(),
                None => snf_big(&mut self.data.clone(), self.rows, self.cols),
            }
        } else {
            snf_big(&mut self.data.clone(), self.rows, self.cols)
        };
        let rank = factors.len();
        debug_assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
        SnfResult {
            invariant_factors: factors,
            rank,
        }
    }

    /// Rank of the matrix reduced mod a prime, a lower bound for the
    /// rational rank. Exact equality holds whenever no nonzero minor is
    /// divisible by `p`; callers are responsible for that argument.
    pub fn rank_mod(&self, p: u64) -> usize {
        let mut ech = ModEchelon::new(p, self.rows);
        for j in 0..self.cols {
            let col: Vec<(usize, BigInt)> = (0..self.rows)
                .filter(|&i| !self.get(i, j).is_zero())
                .map(|i| (i, self.get(i, j).clone()))
                .collect();
            ech.insert_big(&col);
        }
        ech.len()
    }
}

// ---------------------------------------------------------------------------
// Fraction-free (Bareiss) elimination
// ---------------------------------------------------------------------------

macro_rules! idx {
    ($cols:expr, $i:expr, $j:expr) => {
        $i * $cols + $j
    };
}

/// One Bareiss pass over `i64` data with overflow checking.
/// Returns None if any intermediate value overflows.
fn bareiss_rank_i64(a: &mut [i64], rows: usize, cols: usize) -> Option<usize> {
    let mut prev: i64 = 1;
    let mut r = 0;
    while r < rows.min(cols) {
        // pivot with smallest nonzero magnitude keeps intermediates small
        let mut pivot: Option<(usize, usize)> = None;
        for i in r..rows {
            for j in r..cols {
                let v = a[idx!(cols, i, j)];
                if v != 0 && pivot.map_or(true, |(pi, pj)| v.abs() < a[idx!(cols, pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { return Some(r) };
        swap_rows(a, cols, pi, r);
        swap_cols(a, rows, cols, pj, r);
        let pv = a[idx!(cols, r, r)];
        for i in (r + 1)..rows {
            let air = a[idx!(cols, i, r)];
            for j in (r + 1)..cols {
                let t = pv
                    .checked_mul(a[idx!(cols, i, j)])?
                    .checked_sub(air.checked_mul(a[idx!(cols, r, j)])?)?;
                debug_assert_eq!(t % prev, 0);
                a[idx!(cols, i, j)] = t / prev;
            }
        }
        prev = pv;
        r += 1;
    }
    Some(r)
}

fn bareiss_rank_big(a: &mut [BigInt], rows: usize, cols: usize) -> usize {
    let mut prev = BigInt::one();
    let mut r = 0;
    while r < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in r..rows {
            for j in r..cols {
                let v = &a[idx!(cols, i, j)];
                if !v.is_zero()
                    && pivot.map_or(true, |(pi, pj)| {
                        v.magnitude() < a[idx!(cols, pi, pj)].magnitude()
                    })
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { return r };
        swap_rows(a, cols, pi, r);
        swap_cols(a, rows, cols, pj, r);
        let pv = a[idx!(cols, r, r)].clone();
        for i in (r + 1)..rows {
            let air = a[idx!(cols, i, r)].clone();
            if air.is_zero() {
                for j in (r + 1)..cols {
                    if !a[idx!(cols, i, j)].is_zero() {
                        let t = &pv * &a[idx!(cols, i, j)];
                        a[idx!(cols, i, j)] = t / &prev;
                    }
                }
                continue;
            }
            for j in (r + 1)..cols {
                let t = &pv * &a[idx!(cols, i, j)] - &air * &a[idx!(cols, r, j)];
                a[idx!(cols, i, j)] = t / &prev;
            }
        }
        prev = pv;
        r += 1;
    }
    r
}

fn bareiss_det_i64(a: &mut [i64], n: usize) -> Option<i64> {
    if n == 0 {
        return Some(1);
    }
    let mut prev: i64 = 1;
    let mut sign = 1i64;
    for r in 0..n {
        let mut pivot: Option<usize> = None;
        for i in r..n {
            let v = a[idx!(n, i, r)];
            if v != 0 && pivot.map_or(true, |pi| v.abs() < a[idx!(n, pi, r)].abs()) {
                pivot = Some(i);
            }
        }
        // singular unless some later column has a nonzero; simplest exact
        // answer: fall back to column swap search
        let mut found = pivot;
        if found.is_none() {
            let mut done = true;
            'outer: for j in (r + 1)..n {
                for i in r..n {
                    if a[idx!(n, i, j)] != 0 {
                        swap_cols(a, n, n, j, r);
                        sign = -sign;
                        found = Some(i);
                        done = false;
                        break 'outer;
                    }
                }
            }
            if done {
                return Some(0);
            }
        }
        let pi = found.unwrap();
        if pi != r {
            swap_rows(a, n, pi, r);
            sign = -sign;
        }
        let pv = a[idx!(n, r, r)];
        for i in (r + 1)..n {
            let air = a[idx!(n, i, r)];
            for j in (r + 1)..n {
                let t = pv
                    .checked_mul(a[idx!(n, i, j)])?
                    .checked_sub(air.checked_mul(a[idx!(n, r, j)])?)?;
                a[idx!(n, i, j)] = t / prev;
            }
        }
        prev = pv;
    }
    Some(sign * a[idx!(n, n - 1, n - 1)])
}

fn bareiss_det_big(a: &mut [BigInt], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut prev = BigInt::one();
    let mut sign = 1i64;
    for r in 0..n {
        let mut found: Option<usize> = None;
        for i in r..n {
            if !a[idx!(n, i, r)].is_zero() {
                found = Some(i);
                break;
            }
        }
        if found.is_none() {
            'outer: for j in (r + 1)..n {
                for i in r..n {
                    if !a[idx!(n, i, j)].is_zero() {
                        swap_cols(a, n, n, j, r);
                        sign = -sign;
                        found = Some(i);
                        break 'outer;
                    }
                }
            }
            if found.is_none() {
                return BigInt::zero();
            }
        }
        let pi = found.unwrap();
        if pi != r {
            swap_rows(a, n, pi, r);
            sign = -sign;
        }
        let pv = a[idx!(n, r, r)].clone();
        for i in (r + 1)..n {
            let air = a[idx!(n, i, r)].clone();
            if air.is_zero() {
                for j in (r + 1)..n {
                    if !a[idx!(n, i, j)].is_zero() {
                        let t = &pv * &a[idx!(n, i, j)];
                        a[idx!(n, i, j)] = t / &prev;
                    }
                }
                continue;
            }
            for j in (r + 1)..n {
                let t = &pv * &a[idx!(n, i, j)] - &air * &a[idx!(n, r, j)];
                a[idx!(n, i, j)] = t / &prev;
            }
        }
        prev = pv;
    }
    let d = a[idx!(n, n - 1, n - 1)].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

fn swap_rows<T>(a: &mut [T], cols: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..cols {
        a.swap(idx!(cols, i, c), idx!(cols, j, c));
    }
}

fn swap_cols<T>(a: &mut [T], rows: usize, cols: usize, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..rows {
        a.swap(idx!(cols, r, i), idx!(cols, r, j));
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// SNF over i64 with overflow checking; None means "redo over BigInt".
fn snf_i64(a: &mut [i64], rows: usize, cols: usize) -> Option<Vec<u64>> {
    let mut k = 0;
    while k < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = a[idx!(cols, i, j)];
                if v != 0 && pivot.map_or(true, |(pi, pj)| v.abs() < a[idx!(cols, pi, pj)].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(a, cols, pi, k);
        swap_cols(a, rows, cols, pj, k);
        'reduce: loop {
            // clear column k with row operations
            for i in (k + 1)..rows {
                let v = a[idx!(cols, i, k)];
                if v == 0 {
                    continue;
                }
                let pv = a[idx!(cols, k, k)];
                let q = rounded_div_i64(v, pv);
                if q != 0 {
                    for j in k..cols {
                        let t = a[idx!(cols, k, j)].checked_mul(q)?;
                        a[idx!(cols, i, j)] = a[idx!(cols, i, j)].checked_sub(t)?;
                    }
                }
                if a[idx!(cols, i, k)] != 0 {
                    // remainder is strictly smaller; make it the pivot
                    swap_rows(a, cols, i, k);
                    continue 'reduce;
                }
            }
            // clear row k with column operations
            for j in (k + 1)..cols {
                let v = a[idx!(cols, k, j)];
                if v == 0 {
                    continue;
                }
                let pv = a[idx!(cols, k, k)];
                let q = rounded_div_i64(v, pv);
                if q != 0 {
                    for i in k..rows {
                        let t = a[idx!(cols, i, k)].checked_mul(q)?;
                        a[idx!(cols, i, j)] = a[idx!(cols, i, j)].checked_sub(t)?;
                    }
                }
                if a[idx!(cols, k, j)] != 0 {
                    swap_cols(a, rows, cols, j, k);
                    continue 'reduce;
                }
            }
            // divisibility chain: pivot must divide everything below-right
            let pv = a[idx!(cols, k, k)];
            let mut fixed = true;
            'scan: for i in (k + 1)..rows {
                for j in (k + 1)..cols {
                    if a[idx!(cols, i, j)] % pv != 0 {
                        for c in k..cols {
                            let t = a[idx!(cols, i, c)];
                            a[idx!(cols, k, c)] = a[idx!(cols, k, c)].checked_add(t)?;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        k += 1;
    }
    let mut out = Vec::new();
    for d in 0..rows.min(cols) {
        let v = a[idx!(cols, d, d)];
        if v != 0 {
            out.push(v.unsigned_abs());
        }
    }
    out.sort_unstable();
    Some(out)
}

fn snf_big(a: &mut [BigInt], rows: usize, cols: usize) -> Vec<BigUint> {
    let mut k = 0;
    while k < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                let v = &a[idx!(cols, i, j)];
                if !v.is_zero()
                    && pivot.map_or(true, |(pi, pj)| {
                        v.magnitude() < a[idx!(cols, pi, pj)].magnitude()
                    })
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(a, cols, pi, k);
        swap_cols(a, rows, cols, pj, k);
        'reduce: loop {
            for i in (k + 1)..rows {
                if a[idx!(cols, i, k)].is_zero() {
                    continue;
                }
                let q = rounded_div_big(&a[idx!(cols, i, k)], &a[idx!(cols, k, k)]);
                if !q.is_zero() {
                    for j in k..cols {
                        if !a[idx!(cols, k, j)].is_zero() {
                            let t = &q * &a[idx!(cols, k, j)];
                            a[idx!(cols, i, j)] -= t;
                        }
                    }
                }
                if !a[idx!(cols, i, k)].is_zero() {
                    swap_rows(a, cols, i, k);
                    continue 'reduce;
                }
            }
            for j in (k + 1)..cols {
                if a[idx!(cols, k, j)].is_zero() {
                    continue;
                }
                let q = rounded_div_big(&a[idx!(cols, k, j)], &a[idx!(cols, k, k)]);
                if !q.is_zero() {
                    for i in k..rows {
                        if !a[idx!(cols, i, k)].is_zero() {
                            let t = &q * &a[idx!(cols, i, k)];
                            a[idx!(cols, i, j)] -= t;
                        }
                    }
                }
                if !a[idx!(cols, k, j)].is_zero() {
                    swap_cols(a, rows, cols, j, k);
                    continue 'reduce;
                }
            }
            let pv = a[idx!(cols, k, k)].clone();
            let mut fixed = true;
            'scan: for i in (k + 1)..rows {
                for j in (k + 1)..cols {
                    if !(&a[idx!(cols, i, j)] % &pv).is_zero() {
                        for c in k..cols {
                            let t = a[idx!(cols, i, c)].clone();
                            a[idx!(cols, k, c)] += t;
                        }
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        k += 1;
    }
    let mut out: Vec<BigUint> = Vec::new();
    for d in 0..rows.min(cols) {
        let v = &a[idx!(cols, d, d)];
        if !v.is_zero() {
            out.push(v.magnitude().clone());
        }
    }
    out.sort();
    out
}

fn rounded_div_i64(a: i64, b: i64) -> i64 {
    debug_assert!(b != 0);
    let q = a / b;
    let r = a - q * b;
    if 2 * r.abs() > b.abs() {
        if (r < 0) == (b < 0) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn rounded_div_big(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    let two_r: BigInt = &r * 2;
    if two_r.magnitude() > b.magnitude() {
        if r.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

// ---------------------------------------------------------------------------
// Incremental echelon form mod a large prime
// ---------------------------------------------------------------------------

/// Largest Mersenne prime below 2^62. Nonzero minors of edge-triangle
/// boundary matrices are Hadamard-bounded by 3^{k/2}, so elimination mod
/// this prime decides rational rank exactly up to k = 76 columns.
pub const RANK_PRIME: u64 = (1 << 61) - 1;

/// Secondary prime for the large-n certificate path (largest prime < 2^63).
pub const RANK_PRIME_ALT: u64 = 9223372036854775783;

/// Row-echelon basis mod p supporting push/truncate, the independence
/// oracle behind 2-tree recognition and census backtracking.
#[derive(Debug, Clone)]
pub struct ModEchelon {
    p: u64,
    dim: usize,
    vecs: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    inv_pivots: Vec<u64>,
    scratch: Vec<u64>,
}

impl ModEchelon {
    pub fn new(p: u64, dim: usize) -> Self {
        ModEchelon {
            p,
            dim,
            vecs: Vec::new(),
            pivots: Vec::new(),
            inv_pivots: Vec::new(),
            scratch: vec![0; dim],
        }
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    /// Drops all but the first `len` inserted vectors. Valid because each
    /// stored vector was reduced only against the prefix before it.
    pub fn truncate(&mut self, len: usize) {
        self.vecs.truncate(len);
        self.pivots.truncate(len);
        self.inv_pivots.truncate(len);
    }

    /// Reduces a sparse column against the basis; keeps it and returns true
    /// iff it is independent mod p.
    pub fn insert_sparse(&mut self, entries: &[(usize, i64)]) -> bool {
        self.scratch.iter_mut().for_each(|v| *v = 0);
        for &(i, v) in entries {
            self.scratch[i] = mod_from_i64(v, self.p);
        }
        self.reduce_and_push()
    }

    fn insert_big(&mut self, entries: &[(usize, BigInt)]) -> bool {
        self.scratch.iter_mut().for_each(|v| *v = 0);
        let pb = BigInt::from(self.p);
        for (i, v) in entries {
            let mut r = v % &pb;
            if r.is_negative() {
                r += &pb;
            }
            self.scratch[*i] = u64::try_from(r).unwrap();
        }
        self.reduce_and_push()
    }

    fn reduce_and_push(&mut self) -> bool {
        let p = self.p;
        for t in 0..self.vecs.len() {
            let pos = self.pivots[t];
            let lead = self.scratch[pos];
            if lead == 0 {
                continue;
            }
            let f = mul_mod(lead, self.inv_pivots[t], p);
            let vec = &self.vecs[t];
            for j in 0..self.dim {
                let w = vec[j];
                if w != 0 {
                    let sub = mul_mod(f, w, p);
                    let cur = self.scratch[j];
                    self.scratch[j] = if cur >= sub { cur - sub } else { cur + p - sub };
                }
            }
        }
        match self.scratch.iter().position(|&v| v != 0) {
            Some(pos) => {
                let pv = self.scratch[pos];
                self.pivots.push(pos);
                self.inv_pivots.push(inv_mod(pv, p));
                self.vecs.push(self.scratch.clone());
                true
            }
            None => false,
        }
    }
}

fn mod_from_i64(v: i64, p: u64) -> u64 {
    if v >= 0 {
        (v as u64) % p
    } else {
        let r = ((-v) as u64) % p;
        if r == 0 {
            0
        } else {
            p - r
        }
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: p is prime
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc: u64 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}
