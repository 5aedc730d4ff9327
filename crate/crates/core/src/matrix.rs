//! Dense matrices over a finite field.
//!
//! Row-major storage. RREF picks as pivot the first nonzero entry found
//! scanning each column top to bottom, so results are deterministic.

use crate::error::{Error, Result};
use crate::field::{Field, Fq};

/// Default cap on the number of column subsets examined by
/// [`all_column_subsets_full_rank`].
pub const DEFAULT_SUBSET_CAP: u128 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fq>,
}

impl FqMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FqMatrix {
        FqMatrix { field: field.clone(), rows, cols, data: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(field: &Field, rows: Vec<Vec<Fq>>, cols: usize) -> Result<FqMatrix> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!("row of length {} in a matrix of width {}", row.len(), cols)));
            }
            data.extend(row);
        }
        Ok(FqMatrix { field: field.clone(), rows: r, cols, data })
    }

    /// Builds a matrix from integer rows mapped into the prime subfield.
    pub fn from_int_rows(field: &Field, rows: &[Vec<i64>]) -> Result<FqMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        FqMatrix::from_rows(field, rows, cols)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Fq> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Fq>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.field.ensure_same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = FqMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `M · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Fq]) -> Result<Vec<Fq>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(Fq::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
            .collect())
    }

    /// `x · M` for a row vector `x`.
    pub fn vec_mul(&self, x: &[Fq]) -> Result<Vec<Fq>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("vector of length {} for {} rows", x.len(), self.rows)));
        }
        let f = &self.field;
        let mut out = vec![Fq::ZERO; self.cols];
        for (i, &c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(c, a));
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (FqMatrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rows spanning `{x : M · x = 0}`, one per free column of the RREF.
    pub fn kernel_basis(&self) -> FqMatrix {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = FqMatrix::zeros(f, free.len(), self.cols);
        for (row, &fc) in free.iter().enumerate() {
            k.set(row, fc, Fq::ONE);
            for (i, &pc) in pivots.iter().enumerate() {
                k.set(row, pc, f.neg(r.get(i, fc)));
            }
        }
        k
    }

    /// The nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_basis(&self) -> FqMatrix {
        let (r, pivots) = self.rref();
        r.select_rows(&(0..pivots.len()).collect::<Vec<_>>())
    }

    /// Indices of a maximal independent subset of rows, chosen greedily in order.
    pub fn independent_rows(&self) -> Vec<usize> {
        let mut chosen: Vec<usize> = Vec::new();
        let mut rank = 0;
        for i in 0..self.rows {
            let mut trial = chosen.clone();
            trial.push(i);
            let r = self.select_rows(&trial).rank();
            if r > rank {
                rank = r;
                chosen = trial;
            }
        }
        chosen
    }

    pub fn inverse(&self) -> Result<FqMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)));
        }
        let n = self.rows;
        let aug = self.hstack(&FqMatrix::identity(&self.field, n))?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(r.select_columns(&cols))
    }

    pub fn select_columns(&self, cols: &[usize]) -> FqMatrix {
        let mut m = FqMatrix::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> FqMatrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        FqMatrix { field: self.field.clone(), rows: rows.len(), cols: self.cols, data }
    }

    pub fn hstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.field.ensure_same(&other.field)?;
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack needs equal row counts".into()));
        }
        let rows = (0..self.rows).map(|i| [self.row(i), other.row(i)].concat()).collect();
        FqMatrix::from_rows(&self.field, rows, self.cols + other.cols)
    }

    pub fn vstack(&self, other: &FqMatrix) -> Result<FqMatrix> {
        self.field.ensure_same(&other.field)?;
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FqMatrix { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diag(field: &Field, blocks: &[FqMatrix]) -> Result<FqMatrix> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = FqMatrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            field.ensure_same(&b.field)?;
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(m)
    }

    /// Lower triangular with every entry above the diagonal zero.
    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    /// One row per line, entries separated by commas; extension-field entries
    /// are written as their coordinates joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            let line: Vec<String> = self
                .row(i)
                .iter()
                .map(|&a| {
                    if self.field.degree() == 1 {
                        a.index().to_string()
                    } else {
                        self.field.coords(a).iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";")
                    }
                })
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Whether two matrices have the same row space.
pub fn row_space_equal(a: &FqMatrix, b: &FqMatrix) -> Result<bool> {
    a.field.ensure_same(&b.field)?;
    if a.cols != b.cols {
        return Err(Error::DimensionMismatch(format!("{} vs {} columns", a.cols, b.cols)));
    }
    Ok(a.row_basis() == b.row_basis())
}

/// `binom(n, k)` as an exact integer, saturating at `u128::MAX`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Outcome of [`all_column_subsets_full_rank`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCheck {
    pub full_rank: bool,
    /// Lexicographically first subset of rank below `rows(G)`.
    pub failing: Option<Vec<usize>>,
    pub subsets_checked: u128,
}

/// Checks that every set of `w` columns of `g` has rank `rows(g)`, visiting
/// subsets in lexicographic order and stopping at the first failure.
pub fn all_column_subsets_full_rank(g: &FqMatrix, w: usize, cap: u128) -> Result<SubsetCheck> {
    if w > g.cols {
        return Err(Error::DimensionMismatch(format!("subset size {} exceeds {} columns", w, g.cols)));
    }
    let total = binomial_u128(g.cols as u64, w as u64);
    if total > cap {
        return Err(Error::CombinatorialBudgetExceeded { subsets: total, cap });
    }
    let k = g.rows;
    let mut idx: Vec<usize> = (0..w).collect();
    let mut checked = 0u128;
    loop {
        checked += 1;
        if g.select_columns(&idx).rank() < k {
            return Ok(SubsetCheck { full_rank: false, failing: Some(idx), subsets_checked: checked });
        }
        // advance to the next combination
        let mut i = w;
        loop {
            if i == 0 {
                return Ok(SubsetCheck { full_rank: true, failing: None, subsets_checked: checked });
            }
            i -= 1;
            if idx[i] < g.cols - w + i {
                idx[i] += 1;
                for j in i + 1..w {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
