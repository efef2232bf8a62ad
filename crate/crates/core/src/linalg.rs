//! Exact integer matrix algebra: Hermite and Smith normal forms,
//! determinants, lattice indices and integral solving.
//!
//! Convention used everywhere in this crate: lattice elements are *rows*,
//! and basis matrices act on the left (`U * A = H`).

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    /// The row span of the claimed sublattice is not contained in the
    /// super lattice.
    NotSublattice,
    /// A lattice basis expected to have full rank is singular.
    SingularLattice,
    /// Mismatched dimensions.
    Shape(String),
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSublattice => write!(f, "not a sublattice"),
            LinalgError::SingularLattice => write!(f, "singular lattice basis"),
            LinalgError::Shape(s) => write!(f, "shape error: {s}"),
        }
    }
}

impl std::error::Error for LinalgError {}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Int>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Int::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Int::from(v)).collect())
                .collect(),
        )
    }

    pub fn diagonal(diag: &[Int]) -> Self {
        let n = diag.len();
        let mut m = Self::zero(n, n);
        for (i, d) in diag.iter().enumerate() {
            *m.at_mut(i, i) = d.clone();
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Int {
        &mut self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Int] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Int>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let term = a * other.at(k, c);
                    *out.at_mut(r, c) += term;
                }
            }
        }
        out
    }

    pub fn scale(&self, k: &Int) -> IntMatrix {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= k;
        }
        out
    }

    /// Stack `self` over `other` (same column count).
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = std::mem::take(self.at_mut(r, c));
            *self.at_mut(r, c) = -v;
        }
    }

    /// row[dst] -= q * row[src]
    fn row_submul(&mut self, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let t = q * self.at(src, c);
            *self.at_mut(dst, c) -= t;
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.clone();
        let mut sign = 1i32;
        let mut prev = Int::one();
        for k in 0..n - 1 {
            if m.at(k, k).is_zero() {
                // find a pivot row below
                match (k + 1..n).find(|&r| !m.at(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    let q = &num / &prev; // exact by Bareiss
                    *m.at_mut(i, j) = q;
                }
                *m.at_mut(i, k) = Int::zero();
            }
            prev = m.at(k, k).clone();
        }
        let d = m.at(n - 1, n - 1).clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular,
/// `U * A = H`, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows sink to the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows);
    let mut pivot_row = 0usize;
    for col in 0..a.cols {
        if pivot_row >= h.rows {
            break;
        }
        // Euclidean reduction in this column among rows >= pivot_row.
        loop {
            // smallest nonzero |entry| becomes the working pivot
            let mut best: Option<usize> = None;
            for r in pivot_row..h.rows {
                if h.at(r, col).is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(r),
                    Some(b) => {
                        if h.at(r, col).abs() < h.at(b, col).abs() {
                            best = Some(r);
                        }
                    }
                }
            }
            let Some(b) = best else { break };
            h.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            if h.at(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            let mut done = true;
            let p = h.at(pivot_row, col).clone();
            for r in pivot_row + 1..h.rows {
                if h.at(r, col).is_zero() {
                    continue;
                }
                let q = h.at(r, col).div_floor(&p);
                h.row_submul(r, pivot_row, &q);
                u.row_submul(r, pivot_row, &q);
                if !h.at(r, col).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.at(pivot_row, col).is_zero() {
            continue;
        }
        // reduce entries above the pivot
        let p = h.at(pivot_row, col).clone();
        for r in 0..pivot_row {
            let q = h.at(r, col).div_floor(&p);
            h.row_submul(r, pivot_row, &q);
            u.row_submul(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Smith normal form of an integer matrix.
#[derive(Debug, Clone)]
pub struct SmithForm {
    /// d_1 | d_2 | ... | d_k, nonnegative, k = min(rows, cols).
    pub divisors: Vec<Int>,
    pub left_transform: IntMatrix,
    pub right_transform: IntMatrix,
}

impl SmithForm {
    /// The diagonal matrix `left * A * right`.
    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntMatrix {
        let mut d = IntMatrix::zero(rows, cols);
        for (i, v) in self.divisors.iter().enumerate() {
            *d.at_mut(i, i) = v.clone();
        }
        d
    }
}

/// Smith normal form with unimodular transforms:
/// `left * A * right = diag(divisors)` with the divisibility chain.
///
/// Pivot selection: smallest nonzero absolute value, to limit growth.
pub fn snf(a: &IntMatrix) -> SmithForm {
    let mut m = a.clone();
    let mut left = IntMatrix::identity(a.rows);
    let mut right = IntMatrix::identity(a.cols);
    let k = a.rows.min(a.cols);

    // column operation helpers working on the transposed views
    fn col_submul(m: &mut IntMatrix, dst: usize, src: usize, q: &Int) {
        if q.is_zero() {
            return;
        }
        for r in 0..m.rows {
            let t = q * m.at(r, src);
            *m.at_mut(r, dst) -= t;
        }
    }
    fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..m.rows {
            let x = m.at(r, a).clone();
            let y = m.at(r, b).clone();
            *m.at_mut(r, a) = y;
            *m.at_mut(r, b) = x;
        }
    }
    fn col_negate(m: &mut IntMatrix, c: usize) {
        for r in 0..m.rows {
            let v = std::mem::take(m.at_mut(r, c));
            *m.at_mut(r, c) = -v;
        }
    }

    for t in 0..k {
        'pivot: loop {
            // locate smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for r in t..m.rows {
                for c in t..m.cols {
                    if m.at(r, c).is_zero() {
                        continue;
                    }
                    match best {
                        None => best = Some((r, c)),
                        Some((br, bc)) => {
                            if m.at(r, c).abs() < m.at(br, bc).abs() {
                                best = Some((r, c));
                            }
                        }
                    }
                }
            }
            let Some((br, bc)) = best else { break 'pivot };
            m.swap_rows(t, br);
            left.swap_rows(t, br);
            col_swap(&mut m, t, bc);
            col_swap(&mut right, t, bc);
            if m.at(t, t).is_negative() {
                m.negate_row(t);
                left.negate_row(t);
            }
            // clear column t below/above by row ops
            let mut dirty = false;
            let p = m.at(t, t).clone();
            for r in 0..m.rows {
                if r == t || m.at(r, t).is_zero() {
                    continue;
                }
                let q = m.at(r, t).div_floor(&p);
                m.row_submul(r, t, &q);
                left.row_submul(r, t, &q);
                if !m.at(r, t).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // clear row t by column ops
            for c in 0..m.cols {
                if c == t || m.at(t, c).is_zero() {
                    continue;
                }
                let q = m.at(t, c).div_floor(&p);
                col_submul(&mut m, c, t, &q);
                col_submul(&mut right, c, t, &q);
                if !m.at(t, c).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                continue 'pivot;
            }
            // enforce divisibility: if some trailing entry is not divisible
            // by the pivot, fold its row in and restart this pivot
            let mut fixed = true;
            'scan: for r in t + 1..m.rows {
                for c in t + 1..m.cols {
                    if !m.at(r, c).mod_floor(&p).is_zero() {
                        // add row r to row t, creating a smaller pivot candidate
                        let minus_one = -Int::one();
                        m.row_submul(t, r, &minus_one);
                        left.row_submul(t, r, &minus_one);
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break 'pivot;
            }
        }
        if m.at(t, t).is_negative() {
            m.negate_row(t);
            left.negate_row(t);
        }
    }
    // normalize signs of any leftover diagonal (all trailing entries zero now)
    let mut divisors = Vec::with_capacity(k);
    for i in 0..k {
        let mut d = m.at(i, i).clone();
        if d.is_negative() {
            d = -d;
            col_negate(&mut m, i);
            col_negate(&mut right, i);
        }
        divisors.push(d);
    }
    SmithForm {
        divisors,
        left_transform: left,
        right_transform: right,
    }
}

/// Index of the sublattice spanned by the rows of `sub` inside the lattice
/// spanned by the rows of `sup`. Both must be square and nonsingular, and
/// the containment is checked by exact solving.
pub fn lattice_index(sub: &IntMatrix, sup: &IntMatrix) -> Result<Int, LinalgError> {
    if !sub.is_square() || !sup.is_square() || sub.rows != sup.rows {
        return Err(LinalgError::Shape(format!(
            "lattice_index wants equal square matrices, got {}x{} and {}x{}",
            sub.rows, sub.cols, sup.rows, sup.cols
        )));
    }
    let det_sup = sup.det();
    if det_sup.is_zero() {
        return Err(LinalgError::SingularLattice);
    }
    let det_sub = sub.det();
    if det_sub.is_zero() {
        return Err(LinalgError::SingularLattice);
    }
    for r in 0..sub.rows {
        if solve_integral(sup, sub.row(r)).is_none() {
            return Err(LinalgError::NotSublattice);
        }
    }
    let (q, rem) = det_sub.abs().div_rem(&det_sup.abs());
    debug_assert!(rem.is_zero(), "containment held but determinant ratio split");
    Ok(q)
}

/// Solve `x * A = b` over the integers. Returns `None` when no integral
/// solution exists. The solution is verified by back-substitution.
pub fn solve_integral(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(b.len(), a.cols, "rhs length mismatch");
    let (h, u) = hnf(a);
    // find pivot columns of h
    let mut y = vec![Int::zero(); a.rows];
    let mut residue: Vec<Int> = b.to_vec();
    let mut row = 0usize;
    for col in 0..a.cols {
        if row >= h.rows {
            break;
        }
        if h.at(row, col).is_zero() {
            continue;
        }
        let p = h.at(row, col);
        let (q, r) = residue[col].div_rem(p);
        if !r.is_zero() {
            return None;
        }
        for c in 0..a.cols {
            let t = &q * h.at(row, c);
            residue[c] -= t;
        }
        y[row] = q;
        row += 1;
    }
    if residue.iter().any(|v| !v.is_zero()) {
        return None;
    }
    // x = y * U
    let mut x = vec![Int::zero(); a.rows];
    for (i, yi) in y.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        for j in 0..a.rows {
            let t = yi * u.at(i, j);
            x[j] += t;
        }
    }
    // verify
    debug_assert!({
        let mut check = vec![Int::zero(); a.cols];
        for (i, xi) in x.iter().enumerate() {
            for c in 0..a.cols {
                let t = xi * a.at(i, c);
                check[c] += t;
            }
        }
        check == b
    });
    Some(x)
}

/// Left-kernel lattice of `a`: an HNF basis of `{ x : x * A = 0 }`.
pub fn kernel_lattice(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(a);
    let mut rows = Vec::new();
    for r in 0..h.rows {
        if h.row(r).iter().all(Int::is_zero) {
            rows.push(u.row(r).to_vec());
        }
    }
    if rows.is_empty() {
        return IntMatrix::zero(0, a.rows);
    }
    let (k, _) = hnf(&IntMatrix::from_rows(rows));
    // drop zero rows (there are none, kernel rows of U are independent)
    k
}

/// Reduce `v` modulo the row lattice of `h`, where `h` is a full-rank
/// square HNF basis. Each coordinate lands in `[0, h[i][i])`.
pub fn reduce_mod_hnf(h: &IntMatrix, v: &[Int]) -> Vec<Int> {
    assert!(h.is_square() && h.rows == v.len());
    let mut out = v.to_vec();
    for i in 0..h.rows {
        let d = h.at(i, i);
        assert!(!d.is_zero(), "reduce_mod_hnf needs full rank");
        let q = out[i].div_floor(d);
        if q.is_zero() {
            continue;
        }
        for c in i..h.cols {
            let t = &q * h.at(i, c);
            out[c] -= t;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows)
    }

    #[test]
    fn hnf_identity() {
        let a = IntMatrix::identity(2);
        let (h, u) = hnf(&a);
        assert_eq!(h, a);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_permutation_spans_z2() {
        let a = m(&[&[0, 1], &[1, 0]]);
        let (h, _) = hnf(&a);
        assert_eq!(h, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_already_normal() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let (h, u) = hnf(&a);
        assert_eq!(h, a);
        assert_eq!(u.mul(&a), h);
    }

    #[test]
    fn hnf_transform_is_unimodular() {
        let a = m(&[&[4, 6, 2], &[6, 0, -3], &[10, 5, 5]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(u.det().abs(), int(1));
    }

    #[test]
    fn hnf_idempotent() {
        let a = m(&[&[4, 6], &[6, 0], &[2, 2]]);
        let (h, _) = hnf(&a);
        let (h2, _) = hnf(&h);
        assert_eq!(h, h2);
    }

    #[test]
    fn snf_diag_2_3() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let s = snf(&a);
        assert_eq!(s.divisors, vec![int(1), int(6)]);
        let d = s.left_transform.mul(&a).mul(&s.right_transform);
        assert_eq!(d, s.diagonal_matrix(2, 2));
        assert_eq!(s.left_transform.det().abs(), int(1));
        assert_eq!(s.right_transform.det().abs(), int(1));
    }

    #[test]
    fn snf_identity() {
        let s = snf(&IntMatrix::identity(3));
        assert_eq!(s.divisors, vec![int(1), int(1), int(1)]);
    }

    #[test]
    fn snf_diag_2_4() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let s = snf(&a);
        assert_eq!(s.divisors, vec![int(2), int(4)]);
    }

    #[test]
    fn lattice_index_examples() {
        let id = IntMatrix::identity(2);
        let two = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(lattice_index(&two, &id).unwrap(), int(4));
        assert_eq!(lattice_index(&id, &id).unwrap(), int(1));
        let sub = m(&[&[1, 1], &[0, 3]]);
        assert_eq!(lattice_index(&sub, &id).unwrap(), int(3));
    }

    #[test]
    fn lattice_index_rejects_non_sublattice() {
        let sub = m(&[&[1, 0], &[0, 1]]);
        let sup = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(lattice_index(&sub, &sup), Err(LinalgError::NotSublattice));
    }

    #[test]
    fn solve_integral_examples() {
        let id = IntMatrix::identity(2);
        assert_eq!(
            solve_integral(&id, &[int(5), int(-2)]),
            Some(vec![int(5), int(-2)])
        );
        let diag2 = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(solve_integral(&diag2, &[int(1), int(0)]), None);
        let a = m(&[&[1, 1], &[0, 2]]);
        assert_eq!(
            solve_integral(&a, &[int(1), int(3)]),
            Some(vec![int(1), int(1)])
        );
    }

    #[test]
    fn det_matches_hnf_diagonal() {
        let a = m(&[&[3, 1, 0], &[1, 4, 1], &[0, 1, 5]]);
        let d = a.det();
        let (h, _) = hnf(&a);
        let mut prod = Int::one();
        for i in 0..3 {
            prod *= h.at(i, i);
        }
        assert_eq!(d.abs(), prod);
    }

    #[test]
    fn reduce_mod_hnf_fundamental_domain() {
        let h = m(&[&[2, 1], &[0, 3]]);
        let r = reduce_mod_hnf(&h, &[int(5), int(7)]);
        assert!(r[0] >= int(0) && r[0] < int(2));
        // reduced vector differs from input by a lattice vector
        let diff = vec![int(5) - &r[0], int(7) - &r[1]];
        assert!(solve_integral(&h, &diff).is_some());
    }

    #[test]
    fn kernel_of_singular_matrix() {
        let a = m(&[&[1, 2], &[2, 4], &[0, 1]]);
        let k = kernel_lattice(&a);
        assert_eq!(k.rows, 1);
        // kernel row kills a
        let prod = k.mul(&a);
        assert!(prod.rows_vec().iter().flatten().all(|v| v.is_zero()));
    }
}
