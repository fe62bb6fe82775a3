//! p-linear algebra over `Z_{p^r}[D]`: p-linear combinations, p-span
//! membership with digit witnesses, p-generator sequences, p-independence,
//! p-bases, reduced p-bases, p-dimension and p-degree.
//!
//! The workhorse is a layered decomposition of the `Z_{p^r}[D]`-module
//! spanned by a row set. For each valuation layer `s` the module
//! `M^(s) = M ∩ p^s Z_{p^r}^n[D]` is generated by mod-p kernel lifts and
//! p-multiples of the previous layer's generators, and its digit-`s` image
//! is a `Z_p[D]`-module handled with exact field polynomial linear algebra.
//! Membership questions reduce to `r` successive `Z_p[D]` solves; witnesses
//! are converted to digit (`A_p[D]`) coefficients through the rewriting
//! certificates of the p-generator sequence.

use crate::fieldpoly::{echelon, row_reduce, Echelon, FPoly, FRow};
use crate::poly::{PolyMatrix, PolyVec};
use crate::ring::RingParams;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PBasisError {
    /// The rows were required to form a p-generator sequence and do not.
    NotPGeneratorSequence,
    /// A combination coefficient was outside the digit set `A_p`.
    CoefficientOutOfRange { row: usize, power: usize, value: u64 },
    /// Combination length does not match the row count.
    LengthMismatch { expected: usize, got: usize },
    RingMismatch,
    /// p-degree was requested for rows that are not a reduced p-basis.
    NotReduced,
    /// An exhaustive search would exceed the configured budget.
    SearchSpaceTooLarge { required: u128 },
    /// A postcondition certification failed; indicates a library bug.
    Internal(String),
}

impl fmt::Display for PBasisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PBasisError::NotPGeneratorSequence => {
                write!(f, "rows do not form a p-generator sequence")
            }
            PBasisError::CoefficientOutOfRange { row, power, value } => write!(
                f,
                "coefficient {value} for row {row} at power {power} is outside A_p"
            ),
            PBasisError::LengthMismatch { expected, got } => {
                write!(f, "expected {expected} coefficients, got {got}")
            }
            PBasisError::RingMismatch => write!(f, "operands belong to different rings"),
            PBasisError::NotReduced => write!(f, "rows are not a reduced p-basis"),
            PBasisError::SearchSpaceTooLarge { required } => {
                write!(f, "exhaustive search would need {required} candidates")
            }
            PBasisError::Internal(msg) => write!(f, "internal certification failure: {msg}"),
        }
    }
}

impl std::error::Error for PBasisError {}

/// Coefficients of a p-linear combination: one polynomial per generator row,
/// every scalar coefficient in `A_p = {0, .., p-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PCombination {
    coeffs: Vec<Vec<u64>>,
    ring: RingParams,
}

impl PCombination {
    /// Validates that every coefficient is a digit below `p`.
    pub fn new(ring: RingParams, coeffs: Vec<Vec<u64>>) -> Result<Self, PBasisError> {
        for (row, poly) in coeffs.iter().enumerate() {
            for (power, &value) in poly.iter().enumerate() {
                if value >= ring.p() {
                    return Err(PBasisError::CoefficientOutOfRange { row, power, value });
                }
            }
        }
        let coeffs = coeffs
            .into_iter()
            .map(|mut poly| {
                while poly.last() == Some(&0) {
                    poly.pop();
                }
                poly
            })
            .collect();
        Ok(PCombination { coeffs, ring })
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    /// Digit coefficients per row, ascending by power of `D`, trimmed.
    pub fn coeffs(&self) -> &[Vec<u64>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|poly| poly.is_empty())
    }
}

/// Evaluates the p-linear combination `sum a_j(D) v_j(D)` reduced mod `p^r`.
pub fn p_combination(c: &PCombination, rows: &PolyMatrix) -> Result<PolyVec, PBasisError> {
    if c.ring != rows.ring() {
        return Err(PBasisError::RingMismatch);
    }
    if c.coeffs.len() != rows.k() {
        return Err(PBasisError::LengthMismatch { expected: rows.k(), got: c.coeffs.len() });
    }
    let mut acc = PolyVec::zero(rows.ring(), rows.n());
    for (poly, row) in c.coeffs.iter().zip(rows.rows()) {
        if poly.is_empty() {
            continue;
        }
        acc = acc
            .add(&row.scale_poly(poly))
            .map_err(|_| PBasisError::RingMismatch)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// scalar polynomials over the full ring, used for combination tracking
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
struct RPoly(Vec<u64>);

impl RPoly {
    fn zero() -> Self {
        RPoly(Vec::new())
    }

    fn one() -> Self {
        RPoly(vec![1])
    }

    fn from_coeffs(coeffs: Vec<u64>, ring: RingParams) -> Self {
        let mut p = RPoly(coeffs.into_iter().map(|c| ring.norm(c)).collect());
        p.trim();
        p
    }

    /// Digit lift of a `Z_p[D]` polynomial: same coefficients read in the ring.
    fn lift(fp: &FPoly) -> Self {
        RPoly(fp.0.clone())
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn coeff(&self, t: usize) -> u64 {
        self.0.get(t).copied().unwrap_or(0)
    }

    fn add(&self, other: &RPoly, ring: RingParams) -> RPoly {
        let len = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(len);
        for t in 0..len {
            out.push(ring.add(self.coeff(t), other.coeff(t)));
        }
        let mut p = RPoly(out);
        p.trim();
        p
    }

    fn mul(&self, other: &RPoly, ring: RingParams) -> RPoly {
        if self.is_zero() || other.is_zero() {
            return RPoly::zero();
        }
        let mut out = vec![0u64; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = ring.add(out[i + j], ring.mul(a, b));
            }
        }
        let mut p = RPoly(out);
        p.trim();
        p
    }

    fn scale(&self, c: u64, ring: RingParams) -> RPoly {
        let c = ring.norm(c);
        if c == 0 {
            return RPoly::zero();
        }
        let mut p = RPoly(self.0.iter().map(|&a| ring.mul(a, c)).collect());
        p.trim();
        p
    }

    fn shift(&self, t: usize) -> RPoly {
        if self.is_zero() {
            return RPoly::zero();
        }
        let mut out = vec![0u64; t];
        out.extend(&self.0);
        RPoly(out)
    }

    /// Splits `self = digits + p * rest` coefficient-wise.
    fn split_digit(&self, ring: RingParams) -> (Vec<u64>, RPoly) {
        let p = ring.p();
        let mut digits: Vec<u64> = self.0.iter().map(|&c| c % p).collect();
        while digits.last() == Some(&0) {
            digits.pop();
        }
        let mut rest = RPoly(self.0.iter().map(|&c| c / p).collect());
        rest.trim();
        (digits, rest)
    }
}

// ---------------------------------------------------------------------------
// layered module engine
// ---------------------------------------------------------------------------

/// Digit `s` of a canonical representative: `(x / p^s) mod p`.
fn digit_at(ring: RingParams, x: u64, s: u32) -> u64 {
    let mut x = x;
    for _ in 0..s {
        debug_assert_eq!(x % ring.p(), 0, "value not in layer p^{s}");
        x /= ring.p();
    }
    x % ring.p()
}

/// The digit-`s` image of a vector lying in `p^s Z_{p^r}^n[D]`, as rows of
/// `Z_p[D]` polynomials (one per coordinate).
fn project_layer(v: &PolyVec, s: u32) -> FRow {
    let ring = v.ring();
    let field = ring.residue_field();
    let deg = v.coeffs().len();
    (0..v.len())
        .map(|i| {
            let coeffs: Vec<u64> = (0..deg).map(|t| digit_at(ring, v.coeffs()[t][i], s)).collect();
            FPoly::from_coeffs(coeffs, field)
        })
        .collect()
}

#[derive(Clone)]
struct TrackedGen {
    vec: PolyVec,
    /// Expression of `vec` as a ring-polynomial combination of the original rows.
    combo: Vec<RPoly>,
}

struct Layer {
    gens: Vec<TrackedGen>,
    images: Vec<FRow>,
    ech: Echelon,
}

/// Layer-by-layer description of the `Z_{p^r}[D]`-module spanned by a row set.
pub(crate) struct LayeredModule {
    ring: RingParams,
    n: usize,
    k: usize,
    layers: Vec<Layer>,
}

fn combine_gens(
    gens: &[TrackedGen],
    coeffs: &[RPoly],
    ring: RingParams,
    n: usize,
    k: usize,
) -> TrackedGen {
    let mut vec = PolyVec::zero(ring, n);
    let mut combo = vec![RPoly::zero(); k];
    for (g, c) in gens.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        vec = vec.add(&g.vec.scale_poly(&c.0)).expect("same shape");
        for (acc, gc) in combo.iter_mut().zip(&g.combo) {
            *acc = acc.add(&gc.mul(c, ring), ring);
        }
    }
    TrackedGen { vec, combo }
}

impl LayeredModule {
    pub fn new(rows: &PolyMatrix) -> Self {
        let ring = rows.ring();
        let field = ring.residue_field();
        let n = rows.n();
        let k = rows.k();
        let mut gens: Vec<TrackedGen> = rows
            .rows()
            .iter()
            .enumerate()
            .filter(|(_, row)| !row.is_zero())
            .map(|(j, row)| {
                let mut combo = vec![RPoly::zero(); k];
                combo[j] = RPoly::one();
                TrackedGen { vec: row.clone(), combo }
            })
            .collect();
        let mut layers = Vec::with_capacity(ring.r() as usize);
        for s in 0..ring.r() {
            let images: Vec<FRow> = gens.iter().map(|g| project_layer(&g.vec, s)).collect();
            let ech = echelon(&images, n, field);
            let mut next: Vec<TrackedGen> = Vec::new();
            for kernel_row in ech.kernel_rows() {
                let coeffs: Vec<RPoly> = kernel_row.iter().map(RPoly::lift).collect();
                let gen = combine_gens(&gens, &coeffs, ring, n, k);
                if !gen.vec.is_zero() {
                    next.push(gen);
                }
            }
            for g in &gens {
                let vec = g.vec.scale(ring.p());
                if !vec.is_zero() {
                    let combo = g.combo.iter().map(|c| c.scale(ring.p(), ring)).collect();
                    next.push(TrackedGen { vec, combo });
                }
            }
            layers.push(Layer { gens: std::mem::replace(&mut gens, next), images, ech });
        }
        LayeredModule { ring, n, k, layers }
    }

    /// p-dimension of the spanned module: the sum of the layer ranks.
    pub fn pdim(&self) -> usize {
        self.layers.iter().map(|layer| layer.ech.rank()).sum()
    }

    /// Decides `v ∈ span(rows)` over `Z_{p^r}[D]`, returning ring-polynomial
    /// coefficients over the original rows on success.
    fn ring_membership_combo(&self, v: &PolyVec) -> Option<Vec<RPoly>> {
        assert_eq!(v.ring(), self.ring);
        assert_eq!(v.len(), self.n);
        let mut residual = v.clone();
        let mut total = vec![RPoly::zero(); self.k];
        for (s, layer) in self.layers.iter().enumerate() {
            if residual.is_zero() {
                return Some(total);
            }
            let target = project_layer(&residual, s as u32);
            let solution = layer.ech.solve(&target)?;
            for (t, c) in solution.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let lifted = RPoly::lift(c);
                residual = residual
                    .sub(&layer.gens[t].vec.scale_poly(&lifted.0))
                    .expect("same shape");
                for (acc, gc) in total.iter_mut().zip(&layer.gens[t].combo) {
                    *acc = acc.add(&gc.mul(&lifted, self.ring), self.ring);
                }
            }
        }
        debug_assert!(residual.is_zero(), "residual survives all layers");
        residual.is_zero().then_some(total)
    }

    pub fn contains(&self, v: &PolyVec) -> bool {
        self.ring_membership_combo(v).is_some()
    }

    /// A p-basis of the module assembled from row-reduced layer bases with
    /// degree-minimized lifts, ordered by ascending layer.
    fn candidate_basis(&self) -> Vec<TrackedGen> {
        let field = self.ring.residue_field();
        // per layer: row-reduced basis of the digit image with lifts
        let mut per_layer: Vec<Vec<(TrackedGen, usize)>> = Vec::new();
        for (s, layer) in self.layers.iter().enumerate() {
            let (basis, trans) = row_reduce(&layer.images, field);
            let mut lifted = Vec::with_capacity(basis.len());
            for (brow, t) in basis.iter().zip(&trans) {
                let coeffs: Vec<RPoly> = t.iter().map(RPoly::lift).collect();
                let gen = combine_gens(&layer.gens, &coeffs, self.ring, self.n, self.k);
                let mu = crate::fieldpoly::row_deg(brow).expect("basis rows are nonzero");
                debug_assert_eq!(&project_layer(&gen.vec, s as u32), brow);
                lifted.push((gen, mu));
            }
            per_layer.push(lifted);
        }
        // shrink lift degrees against deeper layers, top layer first
        for s in (0..per_layer.len()).rev() {
            for idx in 0..per_layer[s].len() {
                let mut gen = per_layer[s][idx].0.clone();
                let mu = per_layer[s][idx].1;
                'outer: while let Some(t) = gen.vec.degree() {
                    if t <= mu {
                        break;
                    }
                    // clear the junk coefficient at degree t digit by digit
                    for sigma in s + 1..self.layers.len() {
                        let top = gen.vec.coeff(t);
                        let digit: Vec<u64> =
                            top.iter().map(|&x| digit_at(self.ring, x, sigma as u32)).collect();
                        if digit.iter().all(|&d| d == 0) {
                            continue;
                        }
                        let available: Vec<&(TrackedGen, usize)> = per_layer[sigma]
                            .iter()
                            .filter(|(g, _)| g.vec.degree().is_some_and(|d| d <= t))
                            .collect();
                        let lead_rows: Vec<FRow> = available
                            .iter()
                            .map(|(g, _)| {
                                let lead = g.vec.coeff(g.vec.degree().unwrap());
                                lead.iter()
                                    .map(|&x| {
                                        FPoly::constant(
                                            digit_at(self.ring, x, sigma as u32),
                                            field,
                                        )
                                    })
                                    .collect()
                            })
                            .collect();
                        let target: FRow =
                            digit.iter().map(|&d| FPoly::constant(d, field)).collect();
                        let lead_ech = echelon(&lead_rows, self.n, field);
                        let Some(lambda) = lead_ech.solve(&target) else {
                            break 'outer; // junk not clearable; keep the longer lift
                        };
                        for (lam, (g, _)) in lambda.iter().zip(&available) {
                            let c = lam.coeff(0);
                            if c == 0 {
                                continue;
                            }
                            let shift = t - g.vec.degree().unwrap();
                            let factor = RPoly::from_coeffs(vec![c], self.ring).shift(shift);
                            gen.vec = gen
                                .vec
                                .sub(&g.vec.scale_poly(&factor.0))
                                .expect("same shape");
                            for (acc, gc) in gen.combo.iter_mut().zip(&g.combo) {
                                *acc = acc.add(
                                    &gc.mul(&factor, self.ring).scale(self.ring.modulus() - 1, self.ring),
                                    self.ring,
                                );
                            }
                        }
                    }
                    debug_assert!(
                        gen.vec.degree().is_none_or(|d| d < t),
                        "clearing pass must lower the degree"
                    );
                }
                per_layer[s][idx].0 = gen;
            }
        }
        per_layer.into_iter().flat_map(|layer| layer.into_iter().map(|(g, _)| g)).collect()
    }
}

// ---------------------------------------------------------------------------
// p-generator sequences and digit normalization
// ---------------------------------------------------------------------------

/// Rewriting certificates of a p-generator sequence: `certs[j]` holds digit
/// polynomials `a_{j+1}, .., a_{k-1}` with `p v_j = sum a_l v_l`.
type Certs = Vec<Vec<Vec<u64>>>;

fn suffix_matrix(rows: &PolyMatrix, from: usize) -> PolyMatrix {
    PolyMatrix::new(rows.ring(), rows.n(), rows.rows()[from..].to_vec()).expect("valid suffix")
}

/// Verifies the p-generator sequence property back to front and collects the
/// rewriting certificates used to convert ring combinations into digit form.
fn gen_seq_certificates(rows: &PolyMatrix) -> Option<Certs> {
    let ring = rows.ring();
    let k = rows.k();
    let mut certs: Certs = vec![Vec::new(); k];
    for j in (0..k).rev() {
        let target = rows.row(j).scale(ring.p());
        if j == k - 1 {
            if !target.is_zero() {
                return None;
            }
            continue;
        }
        if target.is_zero() {
            continue;
        }
        let suffix = suffix_matrix(rows, j + 1);
        let lm = LayeredModule::new(&suffix);
        let combo = lm.ring_membership_combo(&target)?;
        // convert to digits using the certificates of the later rows
        let digits = normalize_combo(combo, &certs[j + 1..], ring);
        certs[j] = digits;
    }
    Some(certs)
}

/// Rewrites a ring-polynomial combination over rows `j0..k` into digit
/// coefficients, using the certificates of those rows. The represented sum
/// is preserved exactly.
fn normalize_combo(combo: Vec<RPoly>, certs: &[Vec<Vec<u64>>], ring: RingParams) -> Vec<Vec<u64>> {
    let len = combo.len();
    let mut carry = combo;
    let mut digits: Vec<Vec<u64>> = vec![Vec::new(); len];
    for j in 0..len {
        let (digit, rest) = carry[j].split_digit(ring);
        digits[j] = digit;
        if rest.is_zero() {
            continue;
        }
        // p * rest * v_j = rest * (p v_j) = rest * sum certs[j][m] v_{j+1+m}
        for (m, cert) in certs[j].iter().enumerate() {
            if cert.is_empty() {
                continue;
            }
            let add = rest.mul(&RPoly::from_coeffs(cert.clone(), ring), ring);
            carry[j + 1 + m] = carry[j + 1 + m].add(&add, ring);
        }
    }
    digits
}

/// True iff `p v_i` is a p-linear combination of the later rows for every
/// `i < k` and `p v_k = 0`.
pub fn is_p_generator_sequence(rows: &PolyMatrix) -> bool {
    gen_seq_certificates(rows).is_some()
}

/// Decides membership of `v` in the p-span of a p-generator sequence and
/// returns digit coefficients reproducing `v` on success. When the rows form
/// a p-basis the combination is the unique one.
pub fn p_span_membership(
    v: &PolyVec,
    rows: &PolyMatrix,
) -> Result<Option<PCombination>, PBasisError> {
    if v.ring() != rows.ring() || v.len() != rows.n() {
        return Err(PBasisError::RingMismatch);
    }
    let certs =
        gen_seq_certificates(rows).ok_or(PBasisError::NotPGeneratorSequence)?;
    let lm = LayeredModule::new(rows);
    let Some(combo) = lm.ring_membership_combo(v) else {
        return Ok(None);
    };
    let digits = normalize_combo(combo, &certs, rows.ring());
    let c = PCombination::new(rows.ring(), digits)?;
    let check = p_combination(&c, rows)?;
    if &check != v {
        return Err(PBasisError::Internal(
            "digit witness does not reproduce the target".into(),
        ));
    }
    Ok(Some(c))
}

/// Exhaustive membership oracle: tries every digit combination whose
/// coefficients have degree at most `max_degree`, in lexicographic order.
pub fn exhaustive_span_membership(
    v: &PolyVec,
    rows: &PolyMatrix,
    max_degree: usize,
    budget: u128,
) -> Result<Option<PCombination>, PBasisError> {
    if v.ring() != rows.ring() || v.len() != rows.n() {
        return Err(PBasisError::RingMismatch);
    }
    let ring = rows.ring();
    let positions = rows.k() * (max_degree + 1);
    let required = (ring.p() as u128)
        .checked_pow(positions as u32)
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(PBasisError::SearchSpaceTooLarge { required });
    }
    let mut assignment = vec![0u64; positions];
    loop {
        let coeffs: Vec<Vec<u64>> = (0..rows.k())
            .map(|j| assignment[j * (max_degree + 1)..(j + 1) * (max_degree + 1)].to_vec())
            .collect();
        let c = PCombination::new(ring, coeffs)?;
        if &p_combination(&c, rows)? == v {
            return Ok(Some(c));
        }
        // odometer increment, most significant position first
        let mut pos = positions;
        loop {
            if pos == 0 {
                return Ok(None);
            }
            pos -= 1;
            assignment[pos] += 1;
            if assignment[pos] < ring.p() {
                break;
            }
            assignment[pos] = 0;
        }
    }
}

// ---------------------------------------------------------------------------
// p-independence
// ---------------------------------------------------------------------------

/// Exhaustive search for a nontrivial constant digit relation among scalar
/// rows; exact for degree-zero rows because any polynomial relation slices
/// into constant relations degree by degree.
pub(crate) fn scalar_digit_relation(
    rows: &[Vec<u64>],
    ring: RingParams,
) -> Option<Vec<u64>> {
    let k = rows.len();
    if k == 0 {
        return None;
    }
    let n = rows[0].len();
    let required = (ring.p() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    assert!(
        required <= 40_000_000,
        "scalar independence search over {required} candidates is beyond the supported size"
    );
    let mut digits = vec![0u64; k];
    'outer: loop {
        // advance odometer first so the all-zero combination is skipped
        let mut pos = k;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < ring.p() {
                break;
            }
            digits[pos] = 0;
        }
        for i in 0..n {
            let mut acc = 0u64;
            for (d, row) in digits.iter().zip(rows) {
                acc = ring.add(acc, ring.mul(*d, row[i]));
            }
            if acc != 0 {
                continue 'outer;
            }
        }
        return Some(digits.clone());
    }
}

/// Bounded search for a digit relation among polynomial rows: assigns digit
/// coefficients degree layer by degree layer, pruning as soon as a finalized
/// coefficient of the sum is nonzero.
fn bounded_digit_relation(rows: &PolyMatrix, cap: usize) -> Option<Vec<Vec<u64>>> {
    let ring = rows.ring();
    let k = rows.k();
    let g = rows.degree().unwrap_or(0);
    assert!(
        (ring.p() as u128).saturating_pow(k as u32) <= 40_000_000,
        "digit relation search branching beyond the supported size"
    );

    // running coefficients of the sum, indexed by degree up to cap + g
    fn search(
        rows: &PolyMatrix,
        ring: RingParams,
        cap: usize,
        g: usize,
        t: usize,
        assignment: &mut Vec<Vec<u64>>,
        nonzero: bool,
    ) -> bool {
        let k = rows.k();
        let n = rows.n();
        if t > cap {
            if !nonzero {
                return false;
            }
            // remaining coefficients of the sum are final; all must vanish
            for s in t..=cap + g + 1 {
                for i in 0..n {
                    let mut acc = 0u64;
                    for (j, poly) in assignment.iter().enumerate() {
                        for (tp, &c) in poly.iter().enumerate() {
                            if s >= tp && s - tp <= g {
                                acc = ring.add(acc, ring.mul(c, rows.row(j).coeff(s - tp)[i]));
                            }
                        }
                    }
                    if acc != 0 {
                        return false;
                    }
                }
            }
            return true;
        }
        let mut layer = vec![0u64; k];
        loop {
            for (j, &c) in layer.iter().enumerate() {
                assignment[j][t] = c;
            }
            // the sum's coefficient at degree t is now final
            let n = rows.n();
            let mut ok = true;
            for i in 0..n {
                let mut acc = 0u64;
                for (j, poly) in assignment.iter().enumerate() {
                    for tp in 0..=t {
                        let c = poly[tp];
                        if c != 0 && t - tp <= g {
                            acc = ring.add(acc, ring.mul(c, rows.row(j).coeff(t - tp)[i]));
                        }
                    }
                }
                if acc != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                let now_nonzero = nonzero || layer.iter().any(|&c| c != 0);
                if search(rows, ring, cap, g, t + 1, assignment, now_nonzero) {
                    return true;
                }
            }
            // odometer over the layer
            let mut pos = k;
            loop {
                if pos == 0 {
                    for (j, _) in layer.iter().enumerate() {
                        assignment[j][t] = 0;
                    }
                    return false;
                }
                pos -= 1;
                layer[pos] += 1;
                if layer[pos] < ring.p() {
                    break;
                }
                layer[pos] = 0;
            }
        }
    }

    let mut assignment = vec![vec![0u64; cap + 1]; k];
    if search(rows, ring, cap, g, 0, &mut assignment, false) {
        let cleaned = assignment
            .into_iter()
            .map(|mut poly| {
                while poly.last() == Some(&0) {
                    poly.pop();
                }
                poly
            })
            .collect();
        Some(cleaned)
    } else {
        None
    }
}

/// True iff the only p-linear combination of the rows equal to zero is the
/// trivial one.
///
/// Degree-zero rows are decided by exhaustive constant search, which is
/// exact. For a p-generator sequence the verdict combines the p-basis
/// cardinality invariant (row count must equal the p-dimension of the span)
/// with saturation probes that convert any detected dependency into an
/// explicit digit relation. Remaining inputs fall back to a bounded relation
/// search.
pub fn is_p_independent(rows: &PolyMatrix) -> bool {
    let ring = rows.ring();
    if rows.k() == 0 {
        return true;
    }
    if rows.rows().iter().any(|r| r.is_zero()) {
        return false;
    }
    // any digit relation survives the mod-p projection unchanged, so a
    // trivial mod-p kernel settles the question without any search
    let field = ring.residue_field();
    let images: Vec<FRow> = rows.rows().iter().map(|r| project_layer(r, 0)).collect();
    let ech = echelon(&images, rows.n(), field);
    if ech.rank() == rows.k() {
        return true;
    }
    if rows.degree() == Some(0) {
        let scalar: Vec<Vec<u64>> = rows.rows().iter().map(|r| r.coeff(0)).collect();
        return scalar_digit_relation(&scalar, ring).is_none();
    }
    if let Some(certs) = gen_seq_certificates(rows) {
        let lm = LayeredModule::new(rows);
        if rows.k() != lm.pdim() {
            return false;
        }
        // saturation probes: a dependency forces some D^t v_j into the span
        // of the later rows, and any such hit rewrites into a digit relation
        let t_max = rows.degree().unwrap_or(0) + ring.r() as usize + 1;
        for j in 0..rows.k() - 1 {
            let suffix = suffix_matrix(rows, j + 1);
            let suffix_lm = LayeredModule::new(&suffix);
            for t in 0..=t_max {
                let mut shift = vec![0u64; t + 1];
                shift[t] = 1;
                let target = rows.row(j).scale_poly(&shift);
                if let Some(combo) = suffix_lm.ring_membership_combo(&target) {
                    // D^t v_j - sum combo_l v_l = 0 rewrites to digit form
                    let mut full = vec![RPoly::zero(); rows.k() - j];
                    full[0] = RPoly::from_coeffs(shift.clone(), ring);
                    for (m, c) in combo.iter().enumerate() {
                        full[1 + m] = c.scale(ring.modulus() - 1, ring);
                    }
                    let digits = normalize_combo(full, &certs[j..], ring);
                    debug_assert!(!digits[0].is_empty());
                    if digits.iter().any(|d| !d.is_empty()) {
                        return false;
                    }
                }
            }
        }
        return true;
    }
    let cap = rows
        .rows()
        .iter()
        .map(|r| r.degree().map_or(1, |d| d + 1))
        .sum::<usize>()
        + ring.r() as usize;
    bounded_digit_relation(rows, cap).is_none()
}

// ---------------------------------------------------------------------------
// expansion, reduced p-bases, dimension and degree
// ---------------------------------------------------------------------------

/// Replaces each row `v` by the block `v, pv, .., p^{r-1}v`; the result is a
/// p-generator sequence spanning the same module as the input rows.
pub fn expand_generator_sequence(g: &PolyMatrix) -> PolyMatrix {
    let ring = g.ring();
    let mut rows = Vec::with_capacity(g.k() * ring.r() as usize);
    for row in g.rows() {
        for e in 0..ring.r() {
            rows.push(row.scale(ring.p_pow(e)));
        }
    }
    PolyMatrix::new(ring, g.n(), rows).expect("rows keep their shape")
}

/// An ordered row set with its p-basis status flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBasis {
    rows: PolyMatrix,
    is_generator_sequence: bool,
    is_independent: bool,
    is_reduced: bool,
}

impl PBasis {
    /// Computes all three flags for the given rows.
    pub fn analyze(rows: PolyMatrix) -> PBasis {
        let is_generator_sequence = is_p_generator_sequence(&rows);
        let is_independent = is_p_independent(&rows);
        let is_reduced = is_generator_sequence
            && is_independent
            && rows_have_independent_leading_coeffs(&rows);
        PBasis { rows, is_generator_sequence, is_independent, is_reduced }
    }

    pub fn rows(&self) -> &PolyMatrix {
        &self.rows
    }

    pub fn is_generator_sequence(&self) -> bool {
        self.is_generator_sequence
    }

    pub fn is_independent(&self) -> bool {
        self.is_independent
    }

    /// A valid p-basis: generator sequence and p-independent.
    pub fn is_basis(&self) -> bool {
        self.is_generator_sequence && self.is_independent
    }

    pub fn is_reduced(&self) -> bool {
        self.is_reduced
    }
}

fn rows_have_independent_leading_coeffs(rows: &PolyMatrix) -> bool {
    if rows.k() == 0 {
        return true;
    }
    let mut lcs = Vec::with_capacity(rows.k());
    for row in rows.rows() {
        match row.leading_coeff() {
            Some(lc) => lcs.push(lc.to_vec()),
            None => return false,
        }
    }
    scalar_digit_relation(&lcs, rows.ring()).is_none()
}

const REDUCTION_ATTEMPTS: usize = 24;

/// Computes a reduced p-basis of the module spanned by a p-generator
/// sequence. The output is certified: it is itself a p-generator sequence,
/// p-independent, has p-independent leading coefficient vectors, and spans
/// the same module as the input (checked by two-way membership).
pub fn reduced_p_basis(rows: &PolyMatrix) -> Result<PBasis, PBasisError> {
    if gen_seq_certificates(rows).is_none() {
        return Err(PBasisError::NotPGeneratorSequence);
    }
    let ring = rows.ring();
    let original = LayeredModule::new(rows);
    let target_dim = original.pdim();
    let mut generators: PolyMatrix = rows.clone();
    for _ in 0..REDUCTION_ATTEMPTS {
        let lm = LayeredModule::new(&generators);
        let cand = lm.candidate_basis();
        let basis_rows: Vec<PolyVec> = cand.iter().map(|g| g.vec.clone()).collect();
        let basis = PolyMatrix::new(ring, rows.n(), basis_rows).expect("consistent rows");
        if rows_have_independent_leading_coeffs(&basis) {
            certify_reduced_basis(rows, &basis, &original, target_dim)?;
            return Ok(PBasis {
                rows: basis,
                is_generator_sequence: true,
                is_independent: true,
                is_reduced: true,
            });
        }
        // cancel a leading-coefficient dependency at the highest-degree
        // participant and rebuild from the modified spanning set
        let lcs: Vec<Vec<u64>> = basis
            .rows()
            .iter()
            .map(|r| r.leading_coeff().expect("candidate rows are nonzero").to_vec())
            .collect();
        let lambda = scalar_digit_relation(&lcs, ring)
            .expect("dependency was just detected");
        let degs: Vec<usize> = basis.rows().iter().map(|r| r.degree().unwrap()).collect();
        let target = (0..basis.k())
            .filter(|&i| lambda[i] != 0)
            .max_by_key(|&i| (degs[i], i))
            .expect("relation is nonzero");
        let dstar = degs[target];
        let mut replacement = PolyVec::zero(ring, rows.n());
        for i in 0..basis.k() {
            if lambda[i] == 0 {
                continue;
            }
            let mut factor = vec![0u64; dstar - degs[i] + 1];
            factor[dstar - degs[i]] = lambda[i];
            replacement = replacement
                .add(&basis.row(i).scale_poly(&factor))
                .expect("same shape");
        }
        debug_assert!(replacement.degree().is_none_or(|d| d < dstar));
        let mut new_rows: Vec<PolyVec> = basis.rows().to_vec();
        if replacement.is_zero() {
            new_rows.remove(target);
        } else {
            new_rows[target] = replacement;
        }
        generators = PolyMatrix::new(ring, rows.n(), new_rows).expect("consistent rows");
    }
    Err(PBasisError::Internal("basis reduction did not converge".into()))
}

fn certify_reduced_basis(
    input: &PolyMatrix,
    basis: &PolyMatrix,
    original: &LayeredModule,
    target_dim: usize,
) -> Result<(), PBasisError> {
    if gen_seq_certificates(basis).is_none() {
        return Err(PBasisError::Internal(
            "reduced basis is not a p-generator sequence".into(),
        ));
    }
    if basis.k() != target_dim {
        return Err(PBasisError::Internal(format!(
            "reduced basis has {} rows, p-dimension is {target_dim}",
            basis.k()
        )));
    }
    let basis_lm = LayeredModule::new(basis);
    for row in input.rows() {
        if !basis_lm.contains(row) {
            return Err(PBasisError::Internal("input row escapes the reduced basis".into()));
        }
    }
    for row in basis.rows() {
        if !original.contains(row) {
            return Err(PBasisError::Internal("reduced basis row escapes the input span".into()));
        }
    }
    Ok(())
}

/// p-dimension of the `Z_{p^r}[D]`-module spanned by the rows; for a
/// p-generator sequence this is the cardinality of every p-basis.
pub fn p_dimension(rows: &PolyMatrix) -> usize {
    LayeredModule::new(rows).pdim()
}

/// Sum of the row degrees of a reduced p-basis. Errors unless the rows are
/// one.
pub fn p_degree(rows: &PolyMatrix) -> Result<usize, PBasisError> {
    if rows.k() == 0 {
        return Ok(0);
    }
    let analyzed = PBasis::analyze(rows.clone());
    if !analyzed.is_reduced() {
        return Err(PBasisError::NotReduced);
    }
    Ok(rows.rows().iter().map(|r| r.degree().expect("reduced rows are nonzero")).sum())
}
