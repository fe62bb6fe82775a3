//! Dense polynomial linear algebra over the field `Z_p`, used internally by
//! the p-basis machinery: Euclidean row echelon forms with transformation
//! tracking, exact solving of row systems, left kernels and row reduction to
//! minimal (row-reduced) bases.
//!
//! The ring context is a [`RingParams`] with `r = 1`.

use crate::ring::RingParams;

/// A dense polynomial over `Z_p`, coefficients by ascending power, trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct FPoly(pub Vec<u64>);

impl FPoly {
    pub fn zero() -> Self {
        FPoly(Vec::new())
    }

    pub fn constant(c: u64, f: RingParams) -> Self {
        let c = f.norm(c);
        if c == 0 {
            FPoly::zero()
        } else {
            FPoly(vec![c])
        }
    }

    pub fn from_coeffs(coeffs: Vec<u64>, f: RingParams) -> Self {
        let mut p = FPoly(coeffs.into_iter().map(|c| f.norm(c)).collect());
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn coeff(&self, t: usize) -> u64 {
        self.0.get(t).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &FPoly, f: RingParams) -> FPoly {
        let len = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(len);
        for t in 0..len {
            out.push(f.add(self.coeff(t), other.coeff(t)));
        }
        let mut p = FPoly(out);
        p.trim();
        p
    }

    pub fn sub(&self, other: &FPoly, f: RingParams) -> FPoly {
        let len = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(len);
        for t in 0..len {
            out.push(f.sub(self.coeff(t), other.coeff(t)));
        }
        let mut p = FPoly(out);
        p.trim();
        p
    }

    pub fn mul(&self, other: &FPoly, f: RingParams) -> FPoly {
        if self.is_zero() || other.is_zero() {
            return FPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        let mut p = FPoly(out);
        p.trim();
        p
    }

    pub fn scale(&self, c: u64, f: RingParams) -> FPoly {
        let c = f.norm(c);
        if c == 0 {
            return FPoly::zero();
        }
        FPoly(self.0.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiplication by `D^t`.
    pub fn shift(&self, t: usize) -> FPoly {
        if self.is_zero() {
            return FPoly::zero();
        }
        let mut out = vec![0u64; t];
        out.extend(&self.0);
        FPoly(out)
    }

    /// Euclidean division: `(q, rem)` with `self = q * div + rem`,
    /// `deg rem < deg div`. Panics on a zero divisor.
    pub fn divmod(&self, div: &FPoly, f: RingParams) -> (FPoly, FPoly) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let dd = div.deg().unwrap();
        let inv_lc = f.inverse(div.lc()).expect("field element is invertible");
        let mut rem = self.clone();
        let mut q = vec![0u64; self.0.len().saturating_sub(dd)];
        while let Some(rd) = rem.deg() {
            if rd < dd {
                break;
            }
            let c = f.mul(rem.lc(), inv_lc);
            let shift = rd - dd;
            q[shift] = c;
            // rem -= c D^shift * div
            for (t, &dc) in div.0.iter().enumerate() {
                let idx = t + shift;
                rem.0[idx] = f.sub(rem.0[idx], f.mul(c, dc));
            }
            rem.trim();
        }
        let mut q = FPoly(q);
        q.trim();
        (q, rem)
    }
}

/// A row of polynomials.
pub(crate) type FRow = Vec<FPoly>;

pub(crate) fn row_is_zero(row: &FRow) -> bool {
    row.iter().all(|c| c.is_zero())
}

pub(crate) fn row_sub_scaled(row: &mut FRow, other: &FRow, q: &FPoly, f: RingParams) {
    if q.is_zero() {
        return;
    }
    for (a, b) in row.iter_mut().zip(other) {
        *a = a.sub(&b.mul(q, f), f);
    }
}

fn row_scale(row: &mut FRow, c: u64, f: RingParams) {
    for a in row.iter_mut() {
        *a = a.scale(c, f);
    }
}

/// Row degree: the maximal entry degree, `None` for a zero row.
pub(crate) fn row_deg(row: &FRow) -> Option<usize> {
    row.iter().filter_map(|c| c.deg()).max()
}

/// Leading coefficient vector of a nonzero row at its row degree.
pub(crate) fn row_lc(row: &FRow) -> Vec<u64> {
    let d = row_deg(row).expect("nonzero row");
    row.iter().map(|c| c.coeff(d)).collect()
}

/// Row echelon form over `Z_p[D]` with transformation: `h = u * a` where `u`
/// is unimodular, pivots sit on a strictly increasing column staircase with
/// monic pivot entries, entries above a pivot have smaller degree, and the
/// zero rows of `h` sit at the bottom (their `u` rows span the left kernel).
pub(crate) struct Echelon {
    pub h: Vec<FRow>,
    pub u: Vec<FRow>,
    /// `(row, col)` pairs of the pivots, in row order.
    pub pivots: Vec<(usize, usize)>,
    pub field: RingParams,
}

pub(crate) fn echelon(a: &[FRow], n: usize, f: RingParams) -> Echelon {
    let k = a.len();
    let mut h: Vec<FRow> = a.to_vec();
    let mut u: Vec<FRow> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { FPoly::constant(1, f) } else { FPoly::zero() })
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..n {
        // Euclidean reduction of the active part of this column to one entry
        loop {
            let mut nonzero: Vec<usize> =
                (pivot_row..k).filter(|&i| !h[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            nonzero.sort_by_key(|&i| h[i][col].deg().unwrap());
            let base = nonzero[0];
            for &i in &nonzero[1..] {
                let (q, _) = h[i][col].divmod(&h[base][col], f);
                let base_h = h[base].clone();
                let base_u = u[base].clone();
                row_sub_scaled(&mut h[i], &base_h, &q, f);
                row_sub_scaled(&mut u[i], &base_u, &q, f);
            }
        }
        let found = (pivot_row..k).find(|&i| !h[i][col].is_zero());
        if let Some(i) = found {
            h.swap(pivot_row, i);
            u.swap(pivot_row, i);
            let inv = f.inverse(h[pivot_row][col].lc()).expect("unit leading coefficient");
            row_scale(&mut h[pivot_row], inv, f);
            row_scale(&mut u[pivot_row], inv, f);
            // reduce the entries above the pivot below its degree
            for i2 in 0..pivot_row {
                let (q, _) = h[i2][col].divmod(&h[pivot_row][col], f);
                let piv_h = h[pivot_row].clone();
                let piv_u = u[pivot_row].clone();
                row_sub_scaled(&mut h[i2], &piv_h, &q, f);
                row_sub_scaled(&mut u[i2], &piv_u, &q, f);
            }
            pivots.push((pivot_row, col));
            pivot_row += 1;
        }
    }
    Echelon { h, u, pivots, field: f }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the left kernel of the original matrix: the `u` rows paired
    /// with zero `h` rows.
    pub fn kernel_rows(&self) -> Vec<FRow> {
        (self.rank()..self.h.len()).map(|i| self.u[i].clone()).collect()
    }

    /// Solves `x * a = target` exactly, returning the polynomial combination
    /// of the ORIGINAL rows, or `None` when no polynomial solution exists.
    pub fn solve(&self, target: &[FPoly]) -> Option<Vec<FPoly>> {
        let f = self.field;
        let k = self.h.len();
        let mut residual: FRow = target.to_vec();
        let mut y = vec![FPoly::zero(); k];
        for &(row, col) in &self.pivots {
            if residual[col].is_zero() {
                continue;
            }
            let (q, rem) = residual[col].divmod(&self.h[row][col], f);
            if !rem.is_zero() {
                return None;
            }
            row_sub_scaled(&mut residual, &self.h[row], &q, f);
            y[row] = q;
        }
        if !row_is_zero(&residual) {
            return None;
        }
        // x = y * u
        let width = self.u.first().map_or(0, |r| r.len());
        let mut x = vec![FPoly::zero(); width];
        for (i, yi) in y.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            for (j, uij) in self.u[i].iter().enumerate() {
                x[j] = x[j].add(&uij.mul(yi, f), f);
            }
        }
        Some(x)
    }
}

/// Left null vector of a scalar matrix over `Z_p`, if one exists.
pub(crate) fn scalar_left_null(rows: &[Vec<u64>], n: usize, f: RingParams) -> Option<Vec<u64>> {
    let as_polys: Vec<FRow> = rows
        .iter()
        .map(|r| r.iter().map(|&c| FPoly::constant(c, f)).collect())
        .collect();
    let ech = echelon(&as_polys, n, f);
    let kernel = ech.kernel_rows();
    kernel.first().map(|row| row.iter().map(|c| c.coeff(0)).collect())
}

/// Reduces a spanning set to a row-reduced basis of the same `Z_p[D]`-module:
/// zero rows are dropped and leading-coefficient dependencies cancelled by
/// degree-shifted combinations until the leading coefficient matrix has full
/// row rank. Returns the basis together with the combination of each output
/// row over the ORIGINAL rows.
pub(crate) fn row_reduce(rows: &[FRow], f: RingParams) -> (Vec<FRow>, Vec<FRow>) {
    let k = rows.len();
    let mut basis: Vec<FRow> = Vec::new();
    let mut trans: Vec<FRow> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if row_is_zero(row) {
            continue;
        }
        basis.push(row.clone());
        let mut t = vec![FPoly::zero(); k];
        t[i] = FPoly::constant(1, f);
        trans.push(t);
    }
    loop {
        if basis.is_empty() {
            break;
        }
        let lcs: Vec<Vec<u64>> = basis.iter().map(row_lc).collect();
        let width = basis[0].len();
        let Some(lambda) = scalar_left_null(&lcs, width, f) else {
            break;
        };
        // cancel at the participating row of maximal degree
        let degs: Vec<usize> = basis.iter().map(|r| row_deg(r).unwrap()).collect();
        let target = (0..basis.len())
            .filter(|&i| lambda[i] != 0)
            .max_by_key(|&i| (degs[i], i))
            .expect("null vector is nonzero");
        let dstar = degs[target];
        let mut new_row = vec![FPoly::zero(); width];
        let mut new_trans = vec![FPoly::zero(); k];
        for i in 0..basis.len() {
            if lambda[i] == 0 {
                continue;
            }
            let factor = FPoly::constant(lambda[i], f).shift(dstar - degs[i]);
            for (a, b) in new_row.iter_mut().zip(&basis[i]) {
                *a = a.add(&b.mul(&factor, f), f);
            }
            for (a, b) in new_trans.iter_mut().zip(&trans[i]) {
                *a = a.add(&b.mul(&factor, f), f);
            }
        }
        debug_assert!(row_deg(&new_row).is_none_or(|d| d < dstar));
        if row_is_zero(&new_row) {
            basis.remove(target);
            trans.remove(target);
        } else {
            basis[target] = new_row;
            trans[target] = new_trans;
        }
    }
    // deterministic order: ascending degree, then coefficient data
    let mut idx: Vec<usize> = (0..basis.len()).collect();
    idx.sort_by(|&a, &b| {
        row_deg(&basis[a])
            .cmp(&row_deg(&basis[b]))
            .then_with(|| basis[a].iter().map(|p| &p.0).cmp(basis[b].iter().map(|p| &p.0)))
    });
    let basis = idx.iter().map(|&i| basis[i].clone()).collect();
    let trans = idx.iter().map(|&i| trans[i].clone()).collect();
    (basis, trans)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> RingParams {
        RingParams::new(5, 1).unwrap()
    }

    fn f2() -> RingParams {
        RingParams::new(2, 1).unwrap()
    }

    fn p(coeffs: &[u64], f: RingParams) -> FPoly {
        FPoly::from_coeffs(coeffs.to_vec(), f)
    }

    #[test]
    fn divmod_round_trips() {
        let f = f5();
        let a = p(&[3, 1, 4, 2], f);
        let b = p(&[1, 2], f);
        let (q, rem) = a.divmod(&b, f);
        let back = q.mul(&b, f).add(&rem, f);
        assert_eq!(back, a);
        assert!(rem.deg() < b.deg());
    }

    #[test]
    fn echelon_solves_row_systems() {
        let f = f5();
        // rows of a 2x3 polynomial matrix
        let a = vec![
            vec![p(&[1, 1], f), p(&[2], f), p(&[0, 3], f)],
            vec![p(&[0, 1], f), p(&[1], f), p(&[4], f)],
        ];
        let ech = echelon(&a, 3, f);
        assert_eq!(ech.rank(), 2);
        // target = (2 + D) * row0 + 3 * row1
        let mut target = vec![FPoly::zero(); 3];
        let c0 = p(&[2, 1], f);
        let c1 = p(&[3], f);
        for j in 0..3 {
            target[j] = target[j].add(&a[0][j].mul(&c0, f), f);
            target[j] = target[j].add(&a[1][j].mul(&c1, f), f);
        }
        let x = ech.solve(&target).expect("solvable");
        assert_eq!(x, vec![c0, c1]);
        // an unreachable target
        let bad = vec![p(&[1], f), FPoly::zero(), FPoly::zero()];
        assert!(ech.solve(&bad).is_none() || {
            // if solvable, the solution must reproduce the target
            let x = ech.solve(&bad).unwrap();
            let mut check = vec![FPoly::zero(); 3];
            for (i, xi) in x.iter().enumerate() {
                for j in 0..3 {
                    check[j] = check[j].add(&a[i][j].mul(xi, f), f);
                }
            }
            check == bad
        });
    }

    #[test]
    fn kernel_rows_annihilate() {
        let f = f2();
        // second row = (1 + D) * first row
        let a = vec![
            vec![p(&[1], f), p(&[0, 1], f)],
            vec![p(&[1, 1], f), p(&[0, 1, 1], f)],
        ];
        let ech = echelon(&a, 2, f);
        assert_eq!(ech.rank(), 1);
        let kernel = ech.kernel_rows();
        assert_eq!(kernel.len(), 1);
        for row in kernel {
            for j in 0..2 {
                let mut acc = FPoly::zero();
                for i in 0..2 {
                    acc = acc.add(&row[i].mul(&a[i][j], f), f);
                }
                assert!(acc.is_zero());
            }
        }
    }

    #[test]
    fn row_reduce_gives_full_rank_leading_matrix() {
        let f = f2();
        // leading coefficients of these two rows collide at degree 2
        let a = vec![
            vec![p(&[1, 0, 1], f), p(&[0, 0, 1], f)],
            vec![p(&[0, 1, 1], f), p(&[1, 0, 1], f)],
        ];
        let (basis, trans) = row_reduce(&a, f);
        assert_eq!(basis.len(), 2);
        let lcs: Vec<Vec<u64>> = basis.iter().map(row_lc).collect();
        assert!(scalar_left_null(&lcs, 2, f).is_none());
        // transformation reproduces the basis
        for (b, t) in basis.iter().zip(&trans) {
            let mut acc = vec![FPoly::zero(); 2];
            for (i, ti) in t.iter().enumerate() {
                for j in 0..2 {
                    acc[j] = acc[j].add(&a[i][j].mul(ti, f), f);
                }
            }
            assert_eq!(&acc, b);
        }
    }
}
