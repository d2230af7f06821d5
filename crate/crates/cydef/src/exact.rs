//! Exact rational linear algebra: dense matrices with rank, kernel and
//! cokernel computations, plus a sparse incremental reducer for the large
//! total-space matrices.
//!
//! Everything here is plain Gaussian elimination over `BigRational`. Pivots
//! are the first nonzero entry in each column; with exact arithmetic there is
//! no numerical pivoting to do. Values are immutable after construction and
//! all operations are pure.

use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational scalar. Denominators are kept positive and
/// fractions reduced by the underlying representation.
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from an integer pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Rational from an integer.
pub fn rint(num: i64) -> Rational {
    Rational::from_integer(num.into())
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    /// Integer-entry convenience constructor, mostly for tests.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| rint(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for c in 0..self.cols {
                    let e = self.get(r, c);
                    if !e.is_zero() {
                        acc += e * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.rows, other.rows);
        let mut m = RationalMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    /// Row echelon form together with the pivot (row, col) positions.
    fn echelon(&self) -> (RationalMatrix, Vec<(usize, usize)>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    let a = m.get(row, c).clone();
                    let b = m.get(p, c).clone();
                    m.set(row, c, b);
                    m.set(p, c, a);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in col..m.cols {
                        let v = m.get(r, c) - &f * m.get(row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        (m, pivots)
    }
}

/// Rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    m.echelon().1.len()
}

/// Basis of the right kernel `{v : M v = 0}`. Size is `cols - rank`.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let (rref, pivots) = m.echelon();
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for &(r, c) in &pivots {
            v[c] = -rref.get(r, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve `M x = b` exactly, if a solution exists.
pub fn solve(m: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows());
    let mut aug = RationalMatrix::zeros(m.rows, m.cols + 1);
    for r in 0..m.rows {
        for c in 0..m.cols {
            aug.set(r, c, m.get(r, c).clone());
        }
        aug.set(r, m.cols, b[r].clone());
    }
    let (rref, pivots) = aug.echelon();
    if pivots.iter().any(|&(_, c)| c == m.cols) {
        return None; // inconsistent system
    }
    let mut x = vec![Rational::zero(); m.cols];
    for &(r, c) in &pivots {
        x[c] = rref.get(r, m.cols).clone();
    }
    Some(x)
}

/// The quotient of the target space of a matrix by its column span, with a
/// reduction map onto explicit quotient coordinates.
///
/// The quotient basis is the set of standard basis vectors of the target
/// space at the non-pivot rows of the echelonized column span, so reducing a
/// standard basis vector at such a row yields a coordinate vector with a
/// single 1.
#[derive(Clone, Debug)]
pub struct Cokernel {
    rows: usize,
    /// Eliminated spanning columns, one per pivot row, in insertion order.
    eliminated: Vec<SparseColumn>,
    /// pivot row -> index into `eliminated`.
    pivot_of_row: Vec<Option<usize>>,
    /// Non-pivot rows, ascending; these index the quotient basis.
    free_rows: Vec<usize>,
}

/// Sparse column: sorted (row, value) pairs with nonzero values.
type SparseColumn = Vec<(usize, Rational)>;

fn sparse_leading(col: &SparseColumn) -> Option<usize> {
    col.first().map(|&(r, _)| r)
}

/// `target -= factor * source`, both sparse and sorted.
fn sparse_axpy(target: &mut SparseColumn, factor: &Rational, source: &SparseColumn) {
    let mut out: SparseColumn = Vec::with_capacity(target.len() + source.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < source.len() {
        match (target.get(i), source.get(j)) {
            (Some(&(ri, _)), Some(&(rj, _))) if ri == rj => {
                let v = &target[i].1 - factor * &source[j].1;
                if !v.is_zero() {
                    out.push((ri, v));
                }
                i += 1;
                j += 1;
            }
            (Some(&(ri, _)), Some(&(rj, _))) if ri < rj => {
                out.push(target[i].clone());
                i += 1;
            }
            (Some(_), Some(&(rj, _))) => {
                out.push((rj, -(factor * &source[j].1)));
                j += 1;
            }
            (Some(_), None) => {
                out.push(target[i].clone());
                i += 1;
            }
            (None, Some(&(rj, _))) => {
                out.push((rj, -(factor * &source[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    *target = out;
}

impl Cokernel {
    /// Reduce a target-space vector to its quotient coordinates. Linear, and
    /// exactly zero on the column span.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.rows);
        let sparse: SparseColumn = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(r, x)| (r, x.clone()))
            .collect();
        self.reduce_sparse(&sparse)
    }

    pub fn reduce_sparse(&self, v: &SparseColumn) -> Vec<Rational> {
        let residue = self.residue(v);
        let mut coords = vec![Rational::zero(); self.free_rows.len()];
        for (r, x) in residue {
            // Residues are supported on free rows by construction.
            let idx = self.free_rows.binary_search(&r).expect("free row");
            coords[idx] = x;
        }
        coords
    }

    /// Eliminate the pivot-row components of `v` against the span.
    fn residue(&self, v: &SparseColumn) -> SparseColumn {
        let mut col = v.clone();
        loop {
            let Some(&(row, ref value)) = col
                .iter()
                .find(|(r, _)| self.pivot_of_row[*r].is_some())
            else {
                return col;
            };
            let piv = &self.eliminated[self.pivot_of_row[row].unwrap()];
            let lead = piv
                .iter()
                .find(|(r, _)| *r == row)
                .map(|(_, x)| x.clone())
                .unwrap();
            let factor = value / &lead;
            sparse_axpy(&mut col, &factor, piv);
        }
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.free_rows.len()
    }

    /// Rows indexing the quotient basis (standard basis vectors there).
    pub fn basis_rows(&self) -> &[usize] {
        &self.free_rows
    }

    /// Quotient basis as dense target-space vectors.
    pub fn basis(&self) -> Vec<Vec<Rational>> {
        self.free_rows
            .iter()
            .map(|&r| {
                let mut v = vec![Rational::zero(); self.rows];
                v[r] = Rational::one();
                v
            })
            .collect()
    }
}

/// Quotient of the target space by the column span of `m`.
pub fn cokernel_basis(m: &RationalMatrix) -> Cokernel {
    let mut reducer = ColumnReducer::new(m.rows());
    for c in 0..m.cols() {
        let col: SparseColumn = (0..m.rows())
            .filter(|&r| !m.get(r, c).is_zero())
            .map(|r| (r, m.get(r, c).clone()))
            .collect();
        reducer.insert(col);
    }
    reducer.into_cokernel()
}

/// Incremental column eliminator over the rationals.
///
/// Columns are inserted one at a time; each is reduced against the pivots
/// found so far and either becomes a new pivot (rank grows by one) or
/// vanishes. This keeps the big total-space coboundary matrices, which are
/// almost entirely monomial columns, cheap to reduce.
#[derive(Clone, Debug)]
pub struct ColumnReducer {
    rows: usize,
    eliminated: Vec<SparseColumn>,
    pivot_of_row: Vec<Option<usize>>,
}

impl ColumnReducer {
    pub fn new(rows: usize) -> Self {
        ColumnReducer {
            rows,
            eliminated: Vec::new(),
            pivot_of_row: vec![None; rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Insert a column; returns true if it added a new pivot.
    pub fn insert(&mut self, column: SparseColumn) -> bool {
        let mut col = column;
        loop {
            let Some(lead) = sparse_leading(&col) else {
                return false;
            };
            match self.pivot_of_row[lead] {
                Some(idx) => {
                    let piv = self.eliminated[idx].clone();
                    let lead_val = piv[0].1.clone();
                    let factor = &col[0].1 / &lead_val;
                    sparse_axpy(&mut col, &factor, &piv);
                }
                None => {
                    self.pivot_of_row[lead] = Some(self.eliminated.len());
                    self.eliminated.push(col);
                    return true;
                }
            }
        }
    }

    /// Insert a dense column.
    pub fn insert_dense(&mut self, column: &[Rational]) -> bool {
        assert_eq!(column.len(), self.rows);
        let col: SparseColumn = column
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(r, x)| (r, x.clone()))
            .collect();
        self.insert(col)
    }

    pub fn rank(&self) -> usize {
        self.eliminated.len()
    }

    pub fn into_cokernel(self) -> Cokernel {
        let free_rows = (0..self.rows)
            .filter(|&r| self.pivot_of_row[r].is_none())
            .collect();
        Cokernel {
            rows: self.rows,
            eliminated: self.eliminated,
            pivot_of_row: self.pivot_of_row,
            free_rows,
        }
    }
}

/// Build a sparse column from (row, value) pairs; pairs need not be sorted.
pub fn sparse_column(mut pairs: Vec<(usize, Rational)>) -> SparseColumn {
    pairs.retain(|(_, x)| !x.is_zero());
    pairs.sort_by_key(|&(r, _)| r);
    // Merge duplicate rows.
    let mut out: SparseColumn = Vec::with_capacity(pairs.len());
    for (r, x) in pairs {
        match out.last_mut() {
            Some((last, acc)) if *last == r => *acc += x,
            _ => out.push((r, x)),
        }
    }
    out.retain(|(_, x)| !x.is_zero());
    out
}

/// Pivot rows of the column span of `m`, in elimination order. The standard
/// basis vectors at the complementary rows complete the span to the whole
/// target space.
pub fn pivot_rows(m: &RationalMatrix) -> Vec<usize> {
    let mut reducer = ColumnReducer::new(m.rows());
    for c in 0..m.cols() {
        let col = sparse_column(
            (0..m.rows())
                .map(|r| (r, m.get(r, c).clone()))
                .collect(),
        );
        reducer.insert(col);
    }
    let mut rows: Vec<usize> = (0..m.rows())
        .filter(|&r| reducer.pivot_of_row[r].is_some())
        .collect();
    rows.sort_unstable();
    rows
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                let e = self.get(r, c);
                if e.denom().is_one() {
                    write!(f, "{}", e.numer())?;
                } else {
                    write!(f, "{}", e)?;
                }
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[allow(unused)]
fn is_negative(x: &Rational) -> bool {
    x.is_negative()
}
