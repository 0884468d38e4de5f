//! Sparse exact linear algebra over the rationals.
//!
//! Vectors are sorted `(index, value)` lists with no explicit zeros. The
//! [`Echelon`] accumulator is the workhorse behind kernels, ranks and span
//! membership tests everywhere in the crate.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: Vec<(usize, Rational)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a vector from unsorted entries, summing duplicates and dropping zeros.
    pub fn from_entries<I: IntoIterator<Item = (usize, Rational)>>(it: I) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in it {
            let slot = acc.entry(i).or_insert_with(Rational::zero);
            *slot += v;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: BTreeMap<usize, Rational>) -> Self {
        SparseVec {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn unit(i: usize) -> Self {
        SparseVec {
            entries: vec![(i, Rational::one())],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Rational)> {
        self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn leading(&self) -> Option<(usize, &Rational)> {
        self.entries.first().map(|(i, v)| (*i, v))
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn scale(&mut self, f: &Rational) {
        if f.is_zero() {
            self.entries.clear();
            return;
        }
        for (_, v) in self.entries.iter_mut() {
            *v *= f;
        }
    }

    /// Rescales to a primitive integer vector whose leading entry is positive.
    pub fn make_primitive(&mut self) {
        if self.entries.is_empty() {
            return;
        }
        let mut den_lcm = BigInt::one();
        for (_, v) in &self.entries {
            den_lcm = den_lcm.lcm(v.denom());
        }
        let mut num_gcd = BigInt::zero();
        for (_, v) in &self.entries {
            let n = v.numer() * (&den_lcm / v.denom());
            num_gcd = num_gcd.gcd(&n);
        }
        let mut f = Rational::new(den_lcm, num_gcd);
        if self.entries[0].1.is_negative() {
            f = -f;
        }
        self.scale(&f);
    }

    pub fn dense(&self, len: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); len];
        for (i, v) in &self.entries {
            out[*i] = v.clone();
        }
        out
    }
}

/// Row echelon form built incrementally; every stored row has leading
/// coefficient one and is reduced against the rows inserted before it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Reduces `v` against every pivot, leaving entries only in non-pivot columns.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rational> = v.entries.iter().cloned().collect();
        let mut cursor = 0usize;
        loop {
            let next = acc.range(cursor..).next().map(|(c, _)| *c);
            let Some(c) = next else { break };
            cursor = c + 1;
            let Some(row) = self.rows.get(&c) else {
                continue;
            };
            let f = acc.remove(&c).expect("present");
            for (cc, val) in row.entries.iter().skip(1) {
                let slot = acc.entry(*cc).or_insert_with(Rational::zero);
                *slot -= &f * val;
                if slot.is_zero() {
                    acc.remove(cc);
                }
            }
        }
        SparseVec::from_map(acc)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let Some((lead, lv)) = r.leading() else {
            return false;
        };
        let inv = lv.recip();
        r.scale(&inv);
        self.rows.insert(lead, r);
        true
    }

    /// Fully reduced row echelon form, rows ordered by pivot column.
    pub fn into_rref(self) -> Vec<SparseVec> {
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (c, row) in self.rows.into_iter().rev() {
            let helper = Echelon { rows: done };
            let rest = SparseVec {
                entries: row.entries[1..].to_vec(),
            };
            let reduced = helper.reduce(&rest);
            done = helper.rows;
            let mut entries = vec![(c, Rational::one())];
            entries.extend(reduced.entries);
            done.insert(c, SparseVec { entries });
        }
        done.into_values().collect()
    }
}

/// Sparse matrix stored by rows.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![SparseVec::new(); nrows],
        }
    }

    /// Assembles a matrix from its columns.
    pub fn from_columns(nrows: usize, columns: &[SparseVec]) -> Self {
        let mut buckets: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); nrows];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.entries() {
                buckets[*i].push((j, v.clone()));
            }
        }
        SparseMatrix {
            nrows,
            ncols: columns.len(),
            rows: buckets.into_iter().map(|entries| SparseVec { entries }).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        self.rows.iter().map(|r| r.dense(self.ncols)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_zero())
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new();
        for r in &self.rows {
            ech.insert(r);
        }
        ech.rank()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.ncols, other.nrows, "inner dimensions differ");
        let rows = self
            .rows
            .iter()
            .map(|r| {
                SparseVec::from_entries(r.entries().iter().flat_map(|(k, a)| {
                    other.rows[*k].entries().iter().map(move |(j, b)| (*j, a * b))
                }))
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    /// Kernel basis in reduced echelon form: one vector per free column,
    /// carrying a 1 in that column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut ech = Echelon::new();
        for r in &self.rows {
            ech.insert(r);
        }
        let rref = ech.into_rref();
        let pivots: Vec<usize> = rref.iter().map(|r| r.leading().unwrap().0).collect();
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut by_free: BTreeMap<usize, Vec<(usize, Rational)>> = BTreeMap::new();
        for f in (0..self.ncols).filter(|c| !is_pivot[*c]) {
            by_free.insert(f, vec![(f, Rational::one())]);
        }
        for (row, &p) in rref.iter().zip(&pivots) {
            for (c, v) in row.entries().iter().skip(1) {
                by_free.get_mut(c).expect("free column").push((p, -v.clone()));
            }
        }
        by_free
            .into_values()
            .map(|mut e| {
                e.sort_by_key(|(i, _)| *i);
                SparseVec { entries: e }
            })
            .collect()
    }
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Exact determinant of a rational matrix: rows are cleared of denominators,
/// the integer matrix goes through Bareiss, and the row scalings are undone.
pub fn rational_determinant(m: &[Vec<Rational>]) -> Rational {
    let mut scale = BigInt::one();
    let ints: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter()
                .map(|v| v.numer() * (&l / v.denom()))
                .collect()
        })
        .collect();
    Rational::new(bareiss_determinant(ints), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_entries(entries.iter().map(|(i, x)| (*i, rat(*x))))
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        if m.len() == 1 {
            return m[0][0];
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = SparseMatrix {
            nrows: 2,
            ncols: 3,
            rows: vec![v(&[(0, 1), (1, 2), (2, 3)]), v(&[(0, 2), (1, 4), (2, 6)])],
        };
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], v(&[(0, -2), (1, 1)]));
        assert_eq!(k[1], v(&[(0, -3), (2, 1)]));
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let m = SparseMatrix::zeros(3, 4);
        let k = m.kernel();
        assert_eq!(k, (0..4).map(SparseVec::unit).collect::<Vec<_>>());
    }

    #[test]
    fn primitive_scaling() {
        let mut x = SparseVec::from_entries([(1, Rational::new(BigInt::from(-2), BigInt::from(3))), (4, rat(4))]);
        x.make_primitive();
        assert_eq!(x, v(&[(1, 1), (4, -6)]));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![
            vec![2, -1, 0, 3],
            vec![1, 4, -2, 0],
            vec![0, 5, 1, -1],
            vec![3, 0, 2, 2],
        ];
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect();
        assert_eq!(bareiss_determinant(big), BigInt::from(cofactor_det(&m)));
    }

    #[test]
    fn bareiss_needs_pivoting() {
        let m = vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]];
        let big: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|x| BigInt::from(*x)).collect()).collect();
        assert_eq!(bareiss_determinant(big), BigInt::from(cofactor_det(&m)));
    }
}
