//! Row-compressed complex matrices for operators on truncated Fock spaces.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square sparse matrix. Each row holds `(column, value)` pairs sorted by
/// column with no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal_from((0..dim).map(|_| Complex64::new(1.0, 0.0)).collect())
    }

    pub fn diagonal_from(diag: Vec<Complex64>) -> Self {
        let rows = diag
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v == ZERO { Vec::new() } else { vec![(i, v)] })
            .collect::<Vec<_>>();
        Self { dim: rows.len(), rows }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets<I>(dim: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Complex64)>,
    {
        let mut rows = vec![Vec::new(); dim];
        for (r, c, v) in triplets {
            assert!(r < dim && c < dim, "triplet ({r}, {c}) outside {dim}×{dim}");
            rows[r].push((c, v));
        }
        for row in rows.iter_mut() {
            compact(row);
        }
        Self { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, Complex64)] {
        &self.rows[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        match self.rows[r].binary_search_by_key(&c, |&(col, _)| col) {
            Ok(i) => self.rows[r][i].1,
            Err(_) => ZERO,
        }
    }

    /// `(row, col, value)` for every stored entry, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn adjoint(&self) -> Self {
        Self::from_triplets(self.dim, self.triplets().map(|(r, c, v)| (c, r, v.conj())))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for row in out.rows.iter_mut() {
            for entry in row.iter_mut() {
                entry.1 *= s;
            }
            row.retain(|&(_, v)| v != ZERO);
        }
        out
    }

    fn combine(&self, other: &Self, sign: f64) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let rows = self
            .rows
            .iter()
            .zip(other.rows.iter())
            .map(|(a, b)| {
                let mut row = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
                    let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
                    if take_a {
                        row.push(a[i]);
                        i += 1;
                    } else if take_b {
                        row.push((b[j].0, b[j].1 * sign));
                        j += 1;
                    } else {
                        let v = a[i].1 + b[j].1 * sign;
                        if v != ZERO {
                            row.push((a[i].0, v));
                        }
                        i += 1;
                        j += 1;
                    }
                }
                row
            })
            .collect();
        Self { dim: self.dim, rows }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut scratch = vec![ZERO; self.dim];
        let mut marked = vec![false; self.dim];
        let mut touched: Vec<usize> = Vec::new();
        let mut rows = Vec::with_capacity(self.dim);
        for row in &self.rows {
            for &(k, a) in row {
                for &(c, b) in &other.rows[k] {
                    if !marked[c] {
                        marked[c] = true;
                        touched.push(c);
                    }
                    scratch[c] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &c in &touched {
                if scratch[c] != ZERO {
                    out.push((c, scratch[c]));
                }
                scratch[c] = ZERO;
                marked[c] = false;
            }
            touched.clear();
            rows.push(out);
        }
        Self { dim: self.dim, rows }
    }

    /// `[A, B] = AB − BA`
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other) - other.matmul(self)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(c, a)| a * v[c]).sum())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, _)| r == c)
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.triplets().fold(0.0f64, |m, (_, _, v)| m.max(v.norm()))
    }

    /// Largest entry of `self − other` in modulus.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }
}

fn compact(row: &mut Vec<(usize, Complex64)>) {
    row.sort_by_key(|&(c, _)| c);
    let mut out: Vec<(usize, Complex64)> = Vec::with_capacity(row.len());
    for &(c, v) in row.iter() {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|&(_, v)| v != ZERO);
    *row = out;
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, o: &OperatorMatrix) -> OperatorMatrix {
        self.combine(o, 1.0)
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, o: &OperatorMatrix) -> OperatorMatrix {
        self.combine(o, -1.0)
    }
}

impl Add for OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, o: OperatorMatrix) -> OperatorMatrix {
        self.combine(&o, 1.0)
    }
}

impl Sub for OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, o: OperatorMatrix) -> OperatorMatrix {
        self.combine(&o, -1.0)
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, o: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(o)
    }
}

/// `Σ conj(a_i) b_i`
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}
