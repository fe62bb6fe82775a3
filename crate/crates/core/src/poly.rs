//! Polynomial vectors and matrices over `Z_{p^r}`: degrees, leading
//! coefficients, truncated sliding generator matrices, mod-p projection and
//! Hamming weight.
//!
//! Coefficients are stored dense by power of `D`; the zero polynomial vector
//! has an empty coefficient list and its degree is reported as `None`.

use crate::ring::RingParams;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    DimensionMismatch { expected: usize, got: usize },
    RingMismatch,
    /// A row was zero where a leading coefficient was required.
    ZeroRow(usize),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            PolyError::RingMismatch => write!(f, "operands belong to different rings"),
            PolyError::ZeroRow(i) => write!(f, "row {i} is zero"),
        }
    }
}

impl std::error::Error for PolyError {}

/// A length-`n` vector of polynomials over `Z_{p^r}`, stored as coefficient
/// vectors `v_0, .., v_nu` by power of `D`.
///
/// Trailing all-zero coefficient vectors are trimmed; the zero vector keeps
/// an empty list so `degree()` can report the distinguished marker `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVec {
    n: usize,
    coeffs: Vec<Vec<u64>>,
    ring: RingParams,
}

impl PolyVec {
    /// Builds a vector from coefficient vectors by power of `D`, normalizing
    /// entries and trimming trailing zeros.
    pub fn new(ring: RingParams, n: usize, coeffs: Vec<Vec<u64>>) -> Result<Self, PolyError> {
        let mut norm: Vec<Vec<u64>> = Vec::with_capacity(coeffs.len());
        for c in &coeffs {
            if c.len() != n {
                return Err(PolyError::DimensionMismatch { expected: n, got: c.len() });
            }
            norm.push(c.iter().map(|&x| ring.norm(x)).collect());
        }
        let mut v = PolyVec { n, coeffs: norm, ring };
        v.trim();
        Ok(v)
    }

    pub fn zero(ring: RingParams, n: usize) -> Self {
        PolyVec { n, coeffs: Vec::new(), ring }
    }

    /// Degree-0 vector from a scalar row.
    pub fn constant(ring: RingParams, row: &[u64]) -> Self {
        PolyVec::new(ring, row.len(), vec![row.to_vec()]).expect("row length matches")
    }

    fn trim(&mut self) {
        while let Some(last) = self.coeffs.last() {
            if last.iter().all(|&x| x == 0) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Index of the last nonzero coefficient vector; `None` marks the zero
    /// vector (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient vector at power `t` (zero vector beyond the degree).
    pub fn coeff(&self, t: usize) -> Vec<u64> {
        self.coeffs.get(t).cloned().unwrap_or_else(|| vec![0; self.n])
    }

    pub fn coeffs(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    /// The leading coefficient vector; `None` for the zero vector.
    pub fn leading_coeff(&self) -> Option<&[u64]> {
        self.coeffs.last().map(|c| c.as_slice())
    }

    /// Total count of nonzero scalar entries across all coefficients.
    pub fn weight(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.iter().filter(|&&x| x != 0).count() as u64)
            .sum()
    }

    /// Weight of the coefficient window `[0, j]`.
    pub fn window_weight(&self, j: usize) -> u64 {
        self.coeffs
            .iter()
            .take(j + 1)
            .map(|c| c.iter().filter(|&&x| x != 0).count() as u64)
            .sum()
    }

    pub fn add(&self, other: &PolyVec) -> Result<PolyVec, PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let deg = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(deg);
        for t in 0..deg {
            let a = self.coeff(t);
            let b = other.coeff(t);
            coeffs.push((0..self.n).map(|i| self.ring.add(a[i], b[i])).collect());
        }
        PolyVec::new(self.ring, self.n, coeffs)
    }

    pub fn sub(&self, other: &PolyVec) -> Result<PolyVec, PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let deg = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(deg);
        for t in 0..deg {
            let a = self.coeff(t);
            let b = other.coeff(t);
            coeffs.push((0..self.n).map(|i| self.ring.sub(a[i], b[i])).collect());
        }
        PolyVec::new(self.ring, self.n, coeffs)
    }

    /// Multiplies by a scalar polynomial given as coefficients by power of `D`.
    pub fn scale_poly(&self, scalar: &[u64]) -> PolyVec {
        if self.is_zero() || scalar.iter().all(|&c| self.ring.norm(c) == 0) {
            return PolyVec::zero(self.ring, self.n);
        }
        let deg = self.coeffs.len() + scalar.len() - 1;
        let mut coeffs = vec![vec![0u64; self.n]; deg];
        for (s, &c) in scalar.iter().enumerate() {
            let c = self.ring.norm(c);
            if c == 0 {
                continue;
            }
            for (t, v) in self.coeffs.iter().enumerate() {
                for i in 0..self.n {
                    let add = self.ring.mul(c, v[i]);
                    coeffs[s + t][i] = self.ring.add(coeffs[s + t][i], add);
                }
            }
        }
        PolyVec::new(self.ring, self.n, coeffs).expect("dimensions preserved")
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: u64) -> PolyVec {
        self.scale_poly(&[c])
    }

    /// Entrywise reduction mod p, renormalized over `Z_p`.
    pub fn project_mod_p(&self) -> PolyVec {
        let field = self.ring.residue_field();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.iter().map(|&x| x % self.ring.p()).collect())
            .collect();
        PolyVec::new(field, self.n, coeffs).expect("dimensions preserved")
    }

    /// Scalar row of the flattened coefficient window `[0, j]`, length `(j+1) n`.
    pub fn window_flat(&self, j: usize) -> Vec<u64> {
        let mut flat = Vec::with_capacity((j + 1) * self.n);
        for t in 0..=j {
            flat.extend(self.coeff(t));
        }
        flat
    }
}

/// The degree of a polynomial vector; `None` for the zero vector.
pub fn degree(v: &PolyVec) -> Option<usize> {
    v.degree()
}

/// Hamming weight of a polynomial vector.
pub fn weight(v: &PolyVec) -> u64 {
    v.weight()
}

/// A rectangular matrix of polynomials over `Z_{p^r}`, stored as rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<PolyVec>,
    n: usize,
    ring: RingParams,
}

impl PolyMatrix {
    pub fn new(ring: RingParams, n: usize, rows: Vec<PolyVec>) -> Result<Self, PolyError> {
        for row in &rows {
            if row.ring() != ring {
                return Err(PolyError::RingMismatch);
            }
            if row.len() != n {
                return Err(PolyError::DimensionMismatch { expected: n, got: row.len() });
            }
        }
        Ok(PolyMatrix { rows, n, ring })
    }

    /// Builds a matrix from per-row, per-cell coefficient lists:
    /// `entries[row][col]` lists the coefficients of that cell by power of `D`.
    pub fn from_entries(
        ring: RingParams,
        entries: &[Vec<Vec<u64>>],
    ) -> Result<Self, PolyError> {
        let n = entries.first().map_or(0, |r| r.len());
        let mut rows = Vec::with_capacity(entries.len());
        for row in entries {
            if row.len() != n {
                return Err(PolyError::DimensionMismatch { expected: n, got: row.len() });
            }
            let deg = row.iter().map(|cell| cell.len()).max().unwrap_or(0);
            let mut coeffs = vec![vec![0u64; n]; deg];
            for (i, cell) in row.iter().enumerate() {
                for (t, &c) in cell.iter().enumerate() {
                    coeffs[t][i] = ring.norm(c);
                }
            }
            rows.push(PolyVec::new(ring, n, coeffs)?);
        }
        Ok(PolyMatrix { rows, n, ring })
    }

    pub fn identity(ring: RingParams, n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0u64; n];
                row[i] = 1;
                PolyVec::constant(ring, &row)
            })
            .collect();
        PolyMatrix { rows, n, ring }
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[PolyVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &PolyVec {
        &self.rows[i]
    }

    /// Largest row degree, or `None` when every row is zero.
    pub fn degree(&self) -> Option<usize> {
        self.rows.iter().filter_map(|r| r.degree()).max()
    }

    /// Coefficient matrix `G_t` (zero beyond the degree).
    pub fn coeff_matrix(&self, t: usize) -> ScalarMatrix {
        let rows = self.rows.iter().map(|r| r.coeff(t)).collect();
        ScalarMatrix { rows, n: self.n, ring: self.ring }
    }

    /// The constant-term matrix `G(0)`.
    pub fn at_zero(&self) -> ScalarMatrix {
        self.coeff_matrix(0)
    }

    /// Entrywise reduction mod p.
    pub fn project_mod_p(&self) -> PolyMatrix {
        let field = self.ring.residue_field();
        let rows = self.rows.iter().map(|r| r.project_mod_p()).collect();
        PolyMatrix { rows, n: self.n, ring: field }
    }

    /// Multiplies every row by the scalar `c`.
    pub fn scale(&self, c: u64) -> PolyMatrix {
        let rows = self.rows.iter().map(|r| r.scale(c)).collect();
        PolyMatrix { rows, n: self.n, ring: self.ring }
    }

    pub fn stack(&self, other: &PolyMatrix) -> Result<PolyMatrix, PolyError> {
        if self.ring != other.ring {
            return Err(PolyError::RingMismatch);
        }
        if self.n != other.n {
            return Err(PolyError::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Ok(PolyMatrix { rows, n: self.n, ring: self.ring })
    }
}

/// A scalar matrix over `Z_{p^r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: Vec<Vec<u64>>,
    n: usize,
    ring: RingParams,
}

impl ScalarMatrix {
    pub fn new(ring: RingParams, n: usize, rows: Vec<Vec<u64>>) -> Result<Self, PolyError> {
        let mut norm = Vec::with_capacity(rows.len());
        for row in &rows {
            if row.len() != n {
                return Err(PolyError::DimensionMismatch { expected: n, got: row.len() });
            }
            norm.push(row.iter().map(|&x| ring.norm(x)).collect());
        }
        Ok(ScalarMatrix { rows: norm, n, ring })
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.rows[i][j]
    }

    /// Each row as a degree-0 polynomial vector.
    pub fn to_poly_matrix(&self) -> PolyMatrix {
        let rows = self.rows.iter().map(|r| PolyVec::constant(self.ring, r)).collect();
        PolyMatrix { rows, n: self.n, ring: self.ring }
    }
}

/// The matrix of leading coefficient vectors: row `i` is the coefficient of
/// row `i` at its own degree. Fails on zero rows, whose leading coefficient
/// is undefined.
pub fn leading_coeff_matrix(g: &PolyMatrix) -> Result<ScalarMatrix, PolyError> {
    let mut rows = Vec::with_capacity(g.k());
    for (i, row) in g.rows().iter().enumerate() {
        match row.leading_coeff() {
            Some(lc) => rows.push(lc.to_vec()),
            None => return Err(PolyError::ZeroRow(i)),
        }
    }
    Ok(ScalarMatrix { rows, n: g.n(), ring: g.ring() })
}

/// The codeword map `u(D) G(D)` for a row vector `u` of `k` polynomials,
/// computed as a coefficient-wise convolution reduced mod `p^r`.
pub fn mat_mul_poly(u: &PolyVec, g: &PolyMatrix) -> Result<PolyVec, PolyError> {
    if u.ring() != g.ring() {
        return Err(PolyError::RingMismatch);
    }
    if u.len() != g.k() {
        return Err(PolyError::DimensionMismatch { expected: g.k(), got: u.len() });
    }
    let mut acc = PolyVec::zero(g.ring(), g.n());
    for (j, row) in g.rows().iter().enumerate() {
        // coefficients of the j-th entry of u across powers of D
        let scalar: Vec<u64> = u.coeffs().iter().map(|c| c[j]).collect();
        if scalar.iter().all(|&c| c == 0) {
            continue;
        }
        acc = acc.add(&row.scale_poly(&scalar))?;
    }
    Ok(acc)
}

/// The truncated sliding generator matrix `G^c_j`: a block upper-triangular
/// scalar matrix of shape `((j+1)k, (j+1)n)` whose block `(s, t)` is
/// `G_{t-s}` for `t >= s` and zero below the diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlidingMatrix {
    matrix: ScalarMatrix,
    window: usize,
    base_k: usize,
    base_n: usize,
}

impl SlidingMatrix {
    pub fn window(&self) -> usize {
        self.window
    }

    pub fn base_k(&self) -> usize {
        self.base_k
    }

    pub fn base_n(&self) -> usize {
        self.base_n
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.matrix
    }

    /// Product `u G^c_j` for a flat digit row `u` of length `(j+1) k`.
    pub fn apply(&self, u: &[u64]) -> Vec<u64> {
        let ring = self.matrix.ring();
        let mut out = vec![0u64; self.matrix.n()];
        for (i, &c) in u.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(self.matrix.row(i)) {
                *o = ring.add(*o, ring.mul(c, m));
            }
        }
        out
    }
}

/// Assembles `G^c_j` from the coefficient matrices of `g`.
pub fn sliding_matrix(g: &PolyMatrix, j: usize) -> SlidingMatrix {
    let ring = g.ring();
    let (k, n) = (g.k(), g.n());
    let coeff_mats: Vec<ScalarMatrix> = (0..=j).map(|t| g.coeff_matrix(t)).collect();
    let mut rows = Vec::with_capacity((j + 1) * k);
    for s in 0..=j {
        for i in 0..k {
            let mut row = vec![0u64; (j + 1) * n];
            for t in s..=j {
                let block = &coeff_mats[t - s];
                row[t * n..(t + 1) * n].copy_from_slice(block.row(i));
            }
            rows.push(row);
        }
    }
    SlidingMatrix {
        matrix: ScalarMatrix { rows, n: (j + 1) * n, ring },
        window: j,
        base_k: k,
        base_n: n,
    }
}

/// Entrywise mod-p projection of a matrix, renormalized over `Z_p`.
pub fn project_mod_p(g: &PolyMatrix) -> PolyMatrix {
    g.project_mod_p()
}
