//! Exact integer matrix algebra.
//!
//! Everything here works over arbitrary-precision integers: Smith normal form
//! with unimodular transforms, column-style Hermite normal form, integer
//! kernels and the invariants of a cokernel `Z^rows / (column lattice)`.
//!
//! The Smith normal form pivots on the nonzero entry of minimum absolute value
//! in the active submatrix, ties broken by the smallest `(row, column)`, so the
//! transforms are deterministic.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// A dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from explicit row vectors.
    ///
    /// `cols` is needed so that a matrix with zero rows still has a shape.
    /// Panics if a row has the wrong length.
    pub fn from_rows<T: Clone + Into<BigInt>>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row in IntMatrix::from_rows");
            entries.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            entries,
        }
    }

    pub fn from_diagonal<T: Clone + Into<BigInt>>(diagonal: &[T]) -> Self {
        let n = diagonal.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in diagonal.iter().enumerate() {
            m.entries[i * n + i] = x.clone().into();
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
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.entries[i * self.cols + j] = value.into();
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (k, &j) in columns.iter().enumerate() {
                m.entries[i * columns.len() + k] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Entries converted to `i64`, or `None` if any entry does not fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = factor * &self.entries[source * self.cols + j];
            self.entries[target * self.cols + j] += delta;
        }
    }

    /// `col[target] += factor * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = factor * &self.entries[i * self.cols + source];
            self.entries[i * self.cols + target] += delta;
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.entries[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let x = &mut self.entries[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        negate = !negate;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in rank + 1..self.rows {
                if m[i][col].is_zero() {
                    continue;
                }
                let (a, b) = (m[rank][col].clone(), m[i][col].clone());
                for j in col..self.cols {
                    let v = &m[i][j] * &a - &m[rank][j] * &b;
                    m[i][j] = v;
                }
                let g = m[i].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
                if !g.is_zero() && !g.is_one() {
                    for x in m[i].iter_mut() {
                        *x = &*x / &g;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | … ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries of `D`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn min_abs_entry(m: &IntMatrix, from: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in from..m.rows() {
        for j in from..m.cols() {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..m {
                let q = d.get(i, t) / &pivot;
                if !q.is_zero() {
                    let q = -q;
                    d.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                }
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..n {
                let q = d.get(t, j) / &pivot;
                if !q.is_zero() {
                    let q = -q;
                    d.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                }
                clean &= d.get(t, j).is_zero();
            }

            if clean {
                // The pivot must divide the whole remaining block.
                let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
                match offender {
                    None => break,
                    Some(i) => {
                        d.add_row_multiple(t, i, &BigInt::one());
                        u.add_row_multiple(t, i, &BigInt::one());
                        continue;
                    }
                }
            }

            // A remainder smaller than the pivot survived; restart on it.
            let (pi, pj) = min_abs_entry(&d, t).expect("nonzero block has a pivot");
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
        }

        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }

    SmithForm { u, d, v }
}

/// Column-style Hermite normal form `H = A · W` with `W` unimodular.
///
/// `H` is in lower column-echelon form: the pivot of column `c` sits in a
/// strictly later row than the pivot of column `c - 1`, pivots are positive,
/// and entries to the left of a pivot lie in `[0, pivot)`. Zero columns are
/// moved to the right.
pub fn hermite_form(a: &IntMatrix) -> IntMatrix {
    let mut h = a.clone();
    let n = h.cols();
    let mut c = 0;
    for i in 0..h.rows() {
        if c == n {
            break;
        }
        // Euclid across columns c.. until only column c is nonzero in row i.
        loop {
            let pivot = (c..n)
                .filter(|&j| !h.get(i, j).is_zero())
                .min_by(|&x, &y| h.get(i, x).abs().cmp(&h.get(i, y).abs()).then(x.cmp(&y)));
            let Some(p) = pivot else {
                break;
            };
            h.swap_cols(c, p);
            let mut done = true;
            for j in c + 1..n {
                let q = h.get(i, j) / h.get(i, c);
                if !q.is_zero() {
                    h.add_col_multiple(j, c, &-q);
                }
                done &= h.get(i, j).is_zero();
            }
            if done {
                break;
            }
        }
        if h.get(i, c).is_zero() {
            continue;
        }
        if h.get(i, c).is_negative() {
            h.negate_col(c);
        }
        let pivot = h.get(i, c).clone();
        for k in 0..c {
            let q = h.get(i, k).div_floor(&pivot);
            if !q.is_zero() {
                h.add_col_multiple(k, c, &-q);
            }
        }
        c += 1;
    }
    h
}

/// Columns form a lattice basis of `{x ∈ Z^cols : A·x = 0}`, in Hermite form.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let tail: Vec<usize> = (r..a.cols()).collect();
    let k = snf.v.select_columns(&tail);
    let h = hermite_form(&k);
    let nonzero: Vec<usize> = (0..h.cols())
        .filter(|&j| (0..h.rows()).any(|i| !h.get(i, j).is_zero()))
        .collect();
    h.select_columns(&nonzero)
}

/// A finitely generated abelian group `Z^free_rank × Z/t_1 × … × Z/t_s`
/// with `t_1 | t_2 | … | t_s` and every `t_i ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroupInvariants {
    pub fn trivial() -> Self {
        AbelianGroupInvariants {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    /// `Z^free_rank × ⊕ Z/m_i` for arbitrary moduli, brought into invariant
    /// factor form. Moduli equal to 1 vanish; a modulus 0 contributes a
    /// copy of `Z`.
    pub fn from_moduli(free_rank: usize, moduli: &[u64]) -> Self {
        let diag = IntMatrix::from_diagonal(moduli);
        let mut group = cokernel_invariants(&diag);
        group.free_rank += free_rank;
        group
    }

    /// Direct product, renormalized.
    pub fn product(&self, other: &Self) -> Self {
        let moduli: Vec<u64> = self.torsion.iter().chain(&other.torsion).copied().collect();
        Self::from_moduli(self.free_rank + other.free_rank, &moduli)
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// True when the torsion list is a valid invariant factor chain.
    pub fn is_canonical(&self) -> bool {
        self.torsion.iter().all(|&t| t >= 2) && self.torsion.windows(2).all(|w| w[1] % w[0] == 0)
    }
}

impl fmt::Display for AbelianGroupInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        write!(f, "{}", parts.join(" x "))
    }
}

/// Invariants of `Z^rows / (lattice spanned by the columns of A)`.
pub fn cokernel_invariants(a: &IntMatrix) -> AbelianGroupInvariants {
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let torsion = factors
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().expect("invariant factor exceeds u64"))
        .collect();
    AbelianGroupInvariants {
        free_rank: a.rows() - factors.len(),
        torsion,
    }
}
