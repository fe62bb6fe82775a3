//! Convolutional codes over `Z_{p^r}`: validated p-encoders, delay-freeness,
//! exhaustively certified column distances, the column-distance and
//! generalized Singleton bounds, MDP testing, free-distance search and the
//! layered decomposition into free codes.

use crate::block::{code_parameters, ParameterSet};
use crate::fieldpoly::{echelon, FRow};
use crate::pbasis::{self, reduced_p_basis};
use crate::poly::{sliding_matrix, PolyMatrix, PolyVec, SlidingMatrix};
use crate::ring::RingParams;
use rayon::prelude::*;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConvError {
    /// The rows do not form a p-basis (generator sequence + independence).
    NotPBasis,
    /// The operation needs a delay-free p-encoder.
    NotDelayFree,
    /// The exhaustive search would exceed the budget; no partial minima are
    /// ever reported.
    BudgetExceeded { required: u128, budget: u128 },
    /// `ceil(k/r) >= n`: the rate admits no column-distance gap.
    DegenerateRate { needed: u64, n: u64 },
    /// p-dimension zero.
    ZeroDimension,
    /// The layered decomposition hit a mod-p rank deficiency.
    DegenerateDecomposition(String),
    /// Parameter sum exceeds the length.
    ParamsExceedLength { sum: u64, n: u64 },
    /// Cross-checked quantities disagree; indicates a library bug.
    Internal(String),
}

impl fmt::Display for ConvError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConvError::NotPBasis => write!(f, "rows do not form a p-basis"),
            ConvError::NotDelayFree => write!(f, "p-encoder is not delay-free"),
            ConvError::BudgetExceeded { required, budget } => {
                write!(f, "search needs {required} candidates, budget is {budget}")
            }
            ConvError::DegenerateRate { needed, n } => {
                write!(f, "ceil(k/r) = {needed} is not below the length {n}")
            }
            ConvError::ZeroDimension => write!(f, "p-dimension is zero"),
            ConvError::DegenerateDecomposition(msg) => {
                write!(f, "degenerate decomposition: {msg}")
            }
            ConvError::ParamsExceedLength { sum, n } => {
                write!(f, "parameter sum {sum} exceeds length {n}")
            }
            ConvError::Internal(msg) => write!(f, "internal inconsistency: {msg}"),
        }
    }
}

impl std::error::Error for ConvError {}

/// True iff the rows of `G(0)` are p-linearly independent.
pub fn is_delay_free(g: &PolyMatrix) -> bool {
    pbasis::is_p_independent(&g.at_zero().to_poly_matrix())
}

/// A convolutional code given by a validated p-encoder.
///
/// Construction checks that the rows form a p-basis and derives the
/// p-dimension `k` and p-degree `delta` of the code; the p-degree comes from
/// the row degrees when the encoder is reduced and from a reduced p-basis of
/// the row module otherwise.
#[derive(Debug, Clone)]
pub struct ConvCode {
    encoder: PolyMatrix,
    delta: u64,
    reduced: bool,
    delay_free: bool,
}

impl ConvCode {
    pub fn new(encoder: PolyMatrix) -> Result<Self, ConvError> {
        if encoder.k() == 0 {
            return Err(ConvError::ZeroDimension);
        }
        if encoder.rows().iter().any(|r| r.is_zero()) {
            return Err(ConvError::NotPBasis);
        }
        if !pbasis::is_p_generator_sequence(&encoder) || !pbasis::is_p_independent(&encoder)
        {
            return Err(ConvError::NotPBasis);
        }
        let analyzed = pbasis::PBasis::analyze(encoder.clone());
        let reduced = analyzed.is_reduced();
        let delta = if reduced {
            encoder.rows().iter().map(|r| r.degree().unwrap() as u64).sum()
        } else {
            let b = reduced_p_basis(&encoder)
                .map_err(|e| ConvError::Internal(e.to_string()))?;
            b.rows().rows().iter().map(|r| r.degree().unwrap() as u64).sum()
        };
        let delay_free = is_delay_free(&encoder);
        Ok(ConvCode { encoder, delta, reduced, delay_free })
    }

    pub fn ring(&self) -> RingParams {
        self.encoder.ring()
    }

    pub fn encoder(&self) -> &PolyMatrix {
        &self.encoder
    }

    pub fn n(&self) -> usize {
        self.encoder.n()
    }

    /// p-dimension of the code.
    pub fn k(&self) -> usize {
        self.encoder.k()
    }

    /// p-degree of the code.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn is_delay_free(&self) -> bool {
        self.delay_free
    }

    /// Block parameters of `Im G(0)`; requires a delay-free encoder.
    pub fn parameters(&self) -> Result<ParameterSet, ConvError> {
        if !self.delay_free {
            return Err(ConvError::NotDelayFree);
        }
        Ok(code_parameters(&self.encoder.at_zero()))
    }

    pub fn bound_set(&self) -> Result<BoundSet, ConvError> {
        BoundSet::new(self.n() as u64, self.k() as u64, self.ring().r(), self.delta)
    }

    pub fn column_distance(&self, j: usize, budget: u128) -> Result<DistanceEntry, ConvError> {
        column_distance(self, j, budget)
    }

    pub fn distance_profile(
        &self,
        j_max: usize,
        budget: u128,
    ) -> Result<DistanceProfile, ConvError> {
        distance_profile(self, j_max, budget)
    }

    pub fn is_mdp(&self, budget: u128) -> Result<(bool, DistanceProfile), ConvError> {
        is_mdp(self, budget)
    }

    pub fn free_distance(
        &self,
        max_input_degree: usize,
        budget: u128,
    ) -> Result<FreeDistance, ConvError> {
        free_distance_search(self, max_input_degree, budget)
    }
}

/// One certified column distance: the exact minimum, the size of the search
/// that certified it and the lexicographically smallest witness input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceEntry {
    pub j: usize,
    pub value: u64,
    pub search_size: u128,
    /// The input window `u_0, .., u_j` attaining the minimum.
    pub witness: Vec<Vec<u64>>,
}

/// Certified column distances `d^c_0 .. d^c_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceProfile {
    entries: Vec<DistanceEntry>,
}

impl DistanceProfile {
    pub fn entries(&self) -> &[DistanceEntry] {
        &self.entries
    }

    pub fn values(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.value).collect()
    }
}

fn decode_digits(mut index: u128, positions: usize, p: u64) -> Vec<u64> {
    let mut digits = vec![0u64; positions];
    for slot in digits.iter_mut().rev() {
        *slot = (index % p as u128) as u64;
        index /= p as u128;
    }
    digits
}

fn window_weight(sliding: &SlidingMatrix, digits: &[u64], scratch: &mut [u64]) -> u64 {
    let ring = sliding.matrix().ring();
    scratch.fill(0);
    for (i, &d) in digits.iter().enumerate() {
        if d == 0 {
            continue;
        }
        for (acc, &m) in scratch.iter_mut().zip(sliding.matrix().row(i)) {
            *acc = ring.add(*acc, ring.mul(d, m));
        }
    }
    scratch.iter().filter(|&&x| x != 0).count() as u64
}

/// Minimum window weight over `u_0 != 0` computed directly from a matrix,
/// without p-basis validation; sequential, for high-volume candidate
/// screening. The caller vouches for the matrix shape.
pub(crate) fn raw_window_distance(g: &PolyMatrix, j: usize, budget: u128) -> Result<u64, ConvError> {
    let ring = g.ring();
    let p = ring.p();
    let k = g.k();
    let head_count = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let tail_positions = k * j;
    let tail_count = (p as u128).checked_pow(tail_positions as u32).unwrap_or(u128::MAX);
    let required = (head_count - 1).saturating_mul(tail_count);
    if required > budget {
        return Err(ConvError::BudgetExceeded { required, budget });
    }
    let sliding = sliding_matrix(g, j);
    let width = (j + 1) * g.n();
    let mut digits = vec![0u64; (j + 1) * k];
    let mut scratch = vec![0u64; width];
    let mut best = u64::MAX;
    for head in 1..head_count {
        digits[..k].copy_from_slice(&decode_digits(head, k, p));
        for tail in 0..tail_count {
            digits[k..].copy_from_slice(&decode_digits(tail, tail_positions, p));
            best = best.min(window_weight(&sliding, &digits, &mut scratch));
        }
    }
    Ok(best)
}

/// Exact `j`-th column distance of a delay-free p-encoder: the minimum
/// weight of `u G^c_j` over all digit windows with `u_0` nonzero.
///
/// The full candidate space is exhausted; if it exceeds the budget the
/// operation refuses rather than report an unverified minimum. The search
/// partitions deterministically over `u_0` and ties break to the
/// lexicographically smallest witness.
pub fn column_distance(
    code: &ConvCode,
    j: usize,
    budget: u128,
) -> Result<DistanceEntry, ConvError> {
    if !code.is_delay_free() {
        return Err(ConvError::NotDelayFree);
    }
    let ring = code.ring();
    let p = ring.p();
    let k = code.k();
    let head_count = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let tail_positions = k * j;
    let tail_count = (p as u128).checked_pow(tail_positions as u32).unwrap_or(u128::MAX);
    let required = (head_count - 1).saturating_mul(tail_count);
    if required > budget {
        return Err(ConvError::BudgetExceeded { required, budget });
    }
    let sliding = sliding_matrix(code.encoder(), j);
    let width = (j + 1) * code.n();
    let best = (1..head_count)
        .into_par_iter()
        .map(|head| {
            let head_digits = decode_digits(head, k, p);
            let mut local: Option<(u64, u128)> = None;
            let mut digits = vec![0u64; (j + 1) * k];
            digits[..k].copy_from_slice(&head_digits);
            let mut scratch = vec![0u64; width];
            for tail in 0..tail_count {
                let tail_digits = decode_digits(tail, tail_positions, p);
                digits[k..].copy_from_slice(&tail_digits);
                let w = window_weight(&sliding, &digits, &mut scratch);
                if local.is_none_or(|(bw, _)| w < bw) {
                    local = Some((w, tail));
                }
            }
            local.map(|(w, tail)| (w, head, tail))
        })
        .flatten()
        .reduce_with(std::cmp::min)
        .expect("at least one nonzero head");
    let (value, head, tail) = best;
    let mut witness_flat = decode_digits(head, k, p);
    witness_flat.extend(decode_digits(tail, tail_positions, p));
    let witness = witness_flat.chunks(k).map(|c| c.to_vec()).collect();
    Ok(DistanceEntry { j, value, search_size: required, witness })
}

/// Certified profile `d^c_0 .. d^c_{j_max}`; asserts monotonicity and the
/// column-distance bound on every entry.
pub fn distance_profile(
    code: &ConvCode,
    j_max: usize,
    budget: u128,
) -> Result<DistanceProfile, ConvError> {
    let mut entries: Vec<DistanceEntry> = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let entry = column_distance(code, j, budget)?;
        if let Some(prev) = entries.last() {
            if entry.value < prev.value {
                return Err(ConvError::Internal(format!(
                    "column distances decreased from {} to {} at j = {j}",
                    prev.value, entry.value
                )));
            }
        }
        let b = bound_b(code.n() as u64, code.k() as u64, code.ring().r(), j as u64)?;
        if entry.value > b {
            return Err(ConvError::Internal(format!(
                "certified d^c_{j} = {} exceeds the bound {b}",
                entry.value
            )));
        }
        entries.push(entry);
    }
    Ok(DistanceProfile { entries })
}

/// The column-distance bound `B(j) = (n - ceil(k/r)) (j+1) + 1`.
pub fn bound_b(n: u64, k: u64, r: u32, j: u64) -> Result<u64, ConvError> {
    let needed = k.div_ceil(r as u64);
    if needed > n {
        return Err(ConvError::DegenerateRate { needed, n });
    }
    Ok((n - needed) * (j + 1) + 1)
}

/// The parameter form of the column-distance bound:
/// `d^c_j <= (j+1)(n - sum k_i) + 1`.
pub fn bound_dcj_params(n: u64, params: &ParameterSet, j: u64) -> Result<u64, ConvError> {
    let sum = params.total();
    if sum > n {
        return Err(ConvError::ParamsExceedLength { sum, n });
    }
    Ok((j + 1) * (n - sum) + 1)
}

/// The generalized Singleton bound together with its fractional defect
/// `phi = phi_num / r`, computed by exact integer arithmetic. Both printed
/// forms of the bound are evaluated and must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingletonBound {
    pub sb: u64,
    pub phi_num: u64,
    pub r: u32,
}

impl SingletonBound {
    /// `phi` as an exact fraction `(numerator, denominator)`.
    pub fn phi(&self) -> (u64, u64) {
        (self.phi_num, self.r as u64)
    }
}

pub fn generalized_singleton(
    n: u64,
    k: u64,
    r: u32,
    delta: u64,
) -> Result<SingletonBound, ConvError> {
    if k == 0 {
        return Err(ConvError::ZeroDimension);
    }
    let q = delta / k;
    // k(q+1) - delta is in [1, k]
    let num = k * (q + 1) - delta;
    let ceil = num.div_ceil(r as u64);
    let sb_main = (n * (q + 1) + 1)
        .checked_sub(ceil)
        .ok_or_else(|| ConvError::Internal("negative Singleton bound".into()))?;
    let phi_num = ceil * r as u64 - num;
    // rearranged form: (n - k/r)(q+1) + delta/r - phi + 1, scaled by r
    let lhs = (sb_main as i128) * r as i128;
    let rhs = (n as i128 * r as i128 - k as i128) * (q as i128 + 1) + delta as i128
        - phi_num as i128
        + r as i128;
    if lhs != rhs {
        return Err(ConvError::Internal(format!(
            "Singleton bound forms disagree: {lhs} vs {rhs}"
        )));
    }
    Ok(SingletonBound { sb: sb_main, phi_num, r })
}

/// The largest window index with `B(j) <= SB`, computed both from the
/// closed-form `X` and by direct maximization; the two must agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LValue {
    pub l: u64,
    /// `X` as the exact fraction `x_num / x_den`.
    pub x_num: i128,
    pub x_den: i128,
}

pub fn l_value(n: u64, k: u64, r: u32, delta: u64) -> Result<LValue, ConvError> {
    let needed = k.div_ceil(r as u64);
    if needed >= n {
        return Err(ConvError::DegenerateRate { needed, n });
    }
    let sb = generalized_singleton(n, k, r, delta)?;
    let q = (delta / k) as i128;
    let rr = r as i128;
    // X = [(n - k/r) q + delta/r - phi + ceil(k/r) - k/r] / (n - ceil(k/r)),
    // scaled by r to stay in integers
    let x_num = (n as i128 * rr - k as i128) * q + delta as i128 - sb.phi_num as i128
        + needed as i128 * rr
        - k as i128;
    let x_den = rr * (n as i128 - needed as i128);
    let l_formula = x_num.div_euclid(x_den);
    // direct maximization of B(j) <= SB
    let mut l_direct: Option<u64> = None;
    let mut j = 0u64;
    loop {
        let b = bound_b(n, k, r, j)?;
        if b <= sb.sb {
            l_direct = Some(j);
            j += 1;
        } else {
            break;
        }
        if j > 4 * (sb.sb + 1) {
            return Err(ConvError::Internal("unbounded L search".into()));
        }
    }
    let l_direct = l_direct
        .ok_or_else(|| ConvError::Internal("B(0) exceeds the Singleton bound".into()))?;
    if l_formula < 0 || l_formula as u64 != l_direct {
        return Err(ConvError::Internal(format!(
            "L mismatch: floor(X) = {l_formula}, direct maximum = {l_direct}"
        )));
    }
    Ok(LValue { l: l_direct, x_num, x_den })
}

/// All bound data for a parameter tuple `(n, k, r, delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundSet {
    pub n: u64,
    pub k: u64,
    pub r: u32,
    pub delta: u64,
    pub singleton: SingletonBound,
    pub l: LValue,
}

impl BoundSet {
    pub fn new(n: u64, k: u64, r: u32, delta: u64) -> Result<Self, ConvError> {
        let singleton = generalized_singleton(n, k, r, delta)?;
        let l = l_value(n, k, r, delta)?;
        Ok(BoundSet { n, k, r, delta, singleton, l })
    }

    pub fn bound_b(&self, j: u64) -> u64 {
        bound_b(self.n, self.k, self.r, j).expect("validated at construction")
    }
}

/// MDP test: the code is Maximum Distance Profile iff `d^c_j = B(j)` for all
/// `j <= L`. For the degenerate rate `ceil(k/r) = n` only `d^c_0 = 1` is
/// checked (every bound value is 1 and L collapses to 0).
pub fn is_mdp(code: &ConvCode, budget: u128) -> Result<(bool, DistanceProfile), ConvError> {
    if !code.is_delay_free() {
        return Err(ConvError::NotDelayFree);
    }
    let n = code.n() as u64;
    let k = code.k() as u64;
    let r = code.ring().r();
    let needed = k.div_ceil(r as u64);
    let l = if needed >= n { 0 } else { l_value(n, k, r, code.delta())?.l };
    let profile = distance_profile(code, l as usize, budget)?;
    let mdp = profile
        .entries()
        .iter()
        .all(|e| e.value == bound_b(n, k, r, e.j as u64).unwrap_or(1));
    Ok((mdp, profile))
}

/// Result of the free-distance search: a certified lower bound from column
/// distances, the minimum weight discovered over bounded-degree inputs, and
/// whether the two closed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeDistance {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    /// The discovered weight equals the generalized Singleton bound but the
    /// interval did not close; likely exact, unproven.
    pub sb_attained: bool,
    /// Input coefficients (windows of digit rows) attaining the upper bound.
    pub witness: Vec<Vec<u64>>,
    pub windows_certified: usize,
}

/// Searches the free distance over polynomial inputs of degree at most
/// `max_input_degree`. Column distances certify the lower bound; full
/// codeword weights give the upper bound; the result is exact only when the
/// two meet. Budget overruns shrink what is searched, never the truth of
/// what is reported.
pub fn free_distance_search(
    code: &ConvCode,
    max_input_degree: usize,
    budget: u128,
) -> Result<FreeDistance, ConvError> {
    if !code.is_delay_free() {
        return Err(ConvError::NotDelayFree);
    }
    let ring = code.ring();
    let p = ring.p();
    let k = code.k();
    let enc_deg = code.encoder().degree().unwrap_or(0);
    // lower bound: largest certified column distance within the budget
    let mut lower = 0u64;
    let mut windows_certified = 0usize;
    for j in 0..=(max_input_degree + enc_deg) {
        match column_distance(code, j, budget) {
            Ok(entry) => {
                lower = lower.max(entry.value);
                windows_certified += 1;
            }
            Err(ConvError::BudgetExceeded { required, budget }) => {
                if windows_certified == 0 {
                    return Err(ConvError::BudgetExceeded { required, budget });
                }
                break;
            }
            Err(e) => return Err(e),
        }
    }
    // upper bound: exhaust inputs of degree <= m for the largest m in budget
    let mut m = max_input_degree;
    loop {
        let count = (p as u128).checked_pow((k * (m + 1)) as u32).unwrap_or(u128::MAX);
        if count <= budget {
            break;
        }
        if m == 0 {
            return Err(ConvError::BudgetExceeded { required: count, budget });
        }
        m -= 1;
    }
    let positions = k * (m + 1);
    let total = (p as u128).pow(positions as u32);
    let mut best: Option<(u64, u128)> = None;
    for idx in 1..total {
        let flat = decode_digits(idx, positions, p);
        // normalize to u_0 != 0: D-shifted inputs give the same weight
        if flat[..k].iter().all(|&d| d == 0) {
            continue;
        }
        let coeffs: Vec<Vec<u64>> = flat.chunks(k).map(|c| c.to_vec()).collect();
        let u = PolyVec::new(ring, k, coeffs).expect("consistent dimensions");
        let v = crate::poly::mat_mul_poly(&u, code.encoder()).expect("dimensions match");
        let w = v.weight();
        if best.is_none_or(|(bw, _)| w < bw) {
            best = Some((w, idx));
        }
    }
    let (upper, best_idx) =
        best.ok_or_else(|| ConvError::Internal("empty input space".into()))?;
    let witness = decode_digits(best_idx, positions, p)
        .chunks(k)
        .map(|c| c.to_vec())
        .collect();
    let sb = generalized_singleton(code.n() as u64, k as u64, ring.r(), code.delta())?;
    let exact = lower == upper;
    Ok(FreeDistance {
        lower,
        upper,
        exact,
        sb_attained: !exact && upper == sb.sb,
        witness,
        windows_certified,
    })
}

/// Mod-p projection of a polynomial row as field polynomials per coordinate.
fn row_mod_p(v: &PolyVec) -> FRow {
    let proj = v.project_mod_p();
    let field = v.ring().residue_field();
    let deg = proj.coeffs().len();
    (0..v.len())
        .map(|i| {
            let coeffs: Vec<u64> = (0..deg).map(|t| proj.coeffs()[t][i]).collect();
            crate::fieldpoly::FPoly::from_coeffs(coeffs, field)
        })
        .collect()
}

/// Layered decomposition of a generator matrix: produces `G_0, .., G_{r-1}`
/// with the input module spanned by the stack of `p^i G_i`, certified by the
/// stacked matrix `[G_0; ..; G_{r-1}]` having full row rank mod p. Raises
/// `DegenerateDecomposition` when the rank certificate fails (the rational
/// completion of the general case is out of scope).
pub fn decompose(g: &PolyMatrix) -> Result<Vec<PolyMatrix>, ConvError> {
    let ring = g.ring();
    let field = ring.residue_field();
    let n = g.n();
    let mut current: Vec<PolyVec> =
        g.rows().iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut layers: Vec<Vec<PolyVec>> = Vec::new();
    for _ in 0..ring.r() {
        if current.is_empty() {
            layers.push(Vec::new());
            continue;
        }
        let images: Vec<FRow> = current.iter().map(row_mod_p).collect();
        let ech = echelon(&images, n, field);
        let rank = ech.rank();
        // apply the lifted transformation over the ring; the lift of a
        // mod-p unimodular matrix is invertible over Z_{p^r}[D]
        let mut transformed: Vec<PolyVec> = Vec::with_capacity(current.len());
        for urow in &ech.u {
            let mut acc = PolyVec::zero(ring, n);
            for (c, row) in urow.iter().zip(&current) {
                if c.is_zero() {
                    continue;
                }
                acc = acc.add(&row.scale_poly(&c.0)).expect("same shape");
            }
            transformed.push(acc);
        }
        layers.push(transformed[..rank].to_vec());
        let mut next = Vec::new();
        for row in &transformed[rank..] {
            // below the rank the row vanishes mod p; divide exactly
            let divided: Vec<Vec<u64>> = row
                .coeffs()
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|&x| {
                            debug_assert_eq!(x % ring.p(), 0);
                            x / ring.p()
                        })
                        .collect()
                })
                .collect();
            let v = PolyVec::new(ring, n, divided).expect("same shape");
            if !v.is_zero() {
                next.push(v);
            }
        }
        current = next;
    }
    // certificate: the stacked layers have full row rank mod p
    let total: usize = layers.iter().map(|l| l.len()).sum();
    let stacked: Vec<FRow> = layers.iter().flatten().map(row_mod_p).collect();
    let rank = echelon(&stacked, n, field).rank();
    if rank != total {
        return Err(ConvError::DegenerateDecomposition(format!(
            "stacked layers have rank {rank} mod p, need {total}"
        )));
    }
    layers
        .into_iter()
        .map(|rows| {
            PolyMatrix::new(ring, n, rows).map_err(|e| ConvError::Internal(e.to_string()))
        })
        .collect()
}

/// Parameters of the convolutional code read off `Im G(0)`.
pub fn conv_parameters(code: &ConvCode) -> Result<ParameterSet, ConvError> {
    code.parameters()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pbasis::{expand_generator_sequence, is_p_generator_sequence, LayeredModule};
    use crate::poly::PolyMatrix;

    fn z4() -> RingParams {
        RingParams::new(2, 2).unwrap()
    }

    fn mat(ring: RingParams, entries: &[Vec<Vec<u64>>]) -> PolyMatrix {
        PolyMatrix::from_entries(ring, entries).unwrap()
    }

    /// The noncatastrophic Z_4 p-encoder [[1+D, 1+3D], [2, 2]].
    fn z4_code() -> ConvCode {
        ConvCode::new(mat(z4(), &[
            vec![vec![1, 1], vec![1, 3]],
            vec![vec![2], vec![2]],
        ]))
        .unwrap()
    }

    #[test]
    fn delay_free_examples() {
        assert!(is_delay_free(z4_code().encoder()));
        let g = mat(z4(), &[vec![vec![0, 1], vec![0, 1]]]);
        assert!(!is_delay_free(&g));
        let g = mat(z4(), &[vec![vec![1], vec![1]], vec![vec![0, 2], vec![0]]]);
        assert!(!is_delay_free(&g));
    }

    #[test]
    fn z4_code_shape() {
        let c = z4_code();
        assert_eq!(c.k(), 2);
        assert_eq!(c.delta(), 1);
        assert!(c.is_reduced());
        assert!(c.is_delay_free());
        assert_eq!(c.parameters().unwrap().counts(), &[1, 0]);
    }

    #[test]
    fn column_distance_examples() {
        let c = z4_code();
        let d0 = c.column_distance(0, 1 << 20).unwrap();
        assert_eq!(d0.value, 2);
        assert_eq!(d0.search_size, 3);
        let d1 = c.column_distance(1, 1 << 20).unwrap();
        assert_eq!(d1.value, 2);
        // the witness reproduces the minimum
        let s = sliding_matrix(c.encoder(), 1);
        let flat: Vec<u64> = d1.witness.concat();
        let v = s.apply(&flat);
        assert_eq!(v.iter().filter(|&&x| x != 0).count() as u64, 2);
    }

    #[test]
    fn full_code_has_unit_column_distance() {
        let identity = PolyMatrix::identity(z4(), 2);
        let code = ConvCode::new(expand_generator_sequence(&identity)).unwrap();
        for j in 0..3 {
            assert_eq!(code.column_distance(j, 1 << 20).unwrap().value, 1);
        }
    }

    #[test]
    fn profile_prefix_property() {
        let c = z4_code();
        let p1 = c.distance_profile(1, 1 << 20).unwrap();
        let p2 = c.distance_profile(2, 1 << 20).unwrap();
        assert_eq!(p1.values(), &p2.values()[..2]);
        assert_eq!(p1.values(), vec![2, 2]);
    }

    #[test]
    fn budget_is_respected() {
        let c = z4_code();
        assert!(matches!(
            c.column_distance(30, 10),
            Err(ConvError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_b(2, 2, 2, 0).unwrap(), 2);
        assert_eq!(bound_b(2, 2, 2, 2).unwrap(), 4);
        // rate-1 degenerate: the bound collapses to 1 for every window
        assert_eq!(bound_b(2, 4, 2, 5).unwrap(), 1);

        assert_eq!(bound_dcj_params(2, &ParameterSet::new(vec![1, 0]), 1).unwrap(), 3);
        assert_eq!(bound_dcj_params(2, &ParameterSet::new(vec![1, 1]), 0).unwrap(), 1);
        assert_eq!(bound_dcj_params(3, &ParameterSet::new(vec![1, 1]), 2).unwrap(), 4);
    }

    #[test]
    fn singleton_examples() {
        let sb = generalized_singleton(2, 2, 2, 2).unwrap();
        assert_eq!(sb.sb, 4);
        assert_eq!(sb.phi(), (0, 2));

        let sb = generalized_singleton(3, 3, 2, 3).unwrap();
        assert_eq!(sb.sb, 5);
        assert_eq!(sb.phi(), (1, 2));

        // r = 1 reduces to the field bound n(q+1) - k(q+1) + delta + 1
        let (n, k, delta) = (3u64, 1u64, 2u64);
        let q = delta / k;
        let sb = generalized_singleton(n, k, 1, delta).unwrap();
        assert_eq!(sb.sb, n * (q + 1) - k * (q + 1) + delta + 1);
        assert_eq!(sb.phi(), (0, 1));
    }

    #[test]
    fn l_value_examples() {
        let l = l_value(2, 2, 2, 2).unwrap();
        assert_eq!(l.l, 2);
        assert_eq!(l.x_num, 2 * l.x_den); // X = 2

        let l = l_value(3, 3, 2, 3).unwrap();
        assert_eq!(l.l, 3);
        assert_eq!(l.x_num, 3 * l.x_den); // X = 3

        let l = l_value(3, 3, 2, 0).unwrap();
        assert_eq!(l.l, 0);

        assert!(matches!(l_value(2, 4, 2, 1), Err(ConvError::DegenerateRate { .. })));
    }

    #[test]
    fn mdp_examples() {
        // the Z_4 example is a (2,2,1) code: L = 0 and d^c_0 = B(0) = 2
        let c = z4_code();
        let bounds = c.bound_set().unwrap();
        assert_eq!(bounds.l.l, 0);
        let (mdp, profile) = c.is_mdp(1 << 20).unwrap();
        assert!(mdp);
        assert_eq!(profile.values(), vec![2]);

        // the full code is degenerate-rate; d^c_0 = 1 certifies it
        let identity = PolyMatrix::identity(z4(), 2);
        let code = ConvCode::new(expand_generator_sequence(&identity)).unwrap();
        let (mdp, profile) = code.is_mdp(1 << 20).unwrap();
        assert!(mdp);
        assert_eq!(profile.values(), vec![1]);
    }

    #[test]
    fn free_distance_examples() {
        // block code embedded as a degree-0 convolutional code
        let code = ConvCode::new(mat(z4(), &[
            vec![vec![1], vec![1]],
            vec![vec![2], vec![2]],
        ]))
        .unwrap();
        let fd = code.free_distance(1, 1 << 20).unwrap();
        assert!(fd.exact);
        assert_eq!(fd.upper, 2);

        // repetition encoder [1 1] expanded
        let rep = mat(z4(), &[vec![vec![1], vec![1]]]);
        let code = ConvCode::new(expand_generator_sequence(&rep)).unwrap();
        let fd = code.free_distance(1, 1 << 20).unwrap();
        assert!(fd.exact);
        assert_eq!(fd.upper, 2);
    }

    #[test]
    fn decompose_examples() {
        // [[1,1],[2D,0]]: layers [(1,1)] and [(D,0)]
        let g = mat(z4(), &[
            vec![vec![1], vec![1]],
            vec![vec![0, 2], vec![0]],
        ]);
        let layers = decompose(&g).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0].rows(), mat(z4(), &[vec![vec![1], vec![1]]]).rows());
        assert_eq!(layers[1].rows(), mat(z4(), &[vec![vec![0, 1], vec![0]]]).rows());

        // full-row-rank input comes back as the single top layer
        let g = mat(z4(), &[vec![vec![1], vec![0]], vec![vec![0], vec![1]]]);
        let layers = decompose(&g).unwrap();
        assert_eq!(layers[0].k(), 2);
        assert_eq!(layers[1].k(), 0);

        // the known degenerate case
        let g = mat(z4(), &[
            vec![vec![1, 1], vec![1, 3]],
            vec![vec![2], vec![2]],
        ]);
        assert!(matches!(decompose(&g), Err(ConvError::DegenerateDecomposition(_))));
    }

    #[test]
    fn decompose_round_trip_spans() {
        let g = mat(z4(), &[
            vec![vec![1], vec![1]],
            vec![vec![0, 2], vec![0]],
        ]);
        let layers = decompose(&g).unwrap();
        // rebuild the generator stack p^i G_i and compare the expanded spans
        let ring = z4();
        let mut rebuilt_rows = Vec::new();
        for (i, layer) in layers.iter().enumerate() {
            for row in layer.rows() {
                rebuilt_rows.push(row.scale(ring.p_pow(i as u32)));
            }
        }
        let rebuilt = PolyMatrix::new(ring, g.n(), rebuilt_rows).unwrap();
        let a = expand_generator_sequence(&g);
        let b = expand_generator_sequence(&rebuilt);
        let ma = LayeredModule::new(&a);
        let mb = LayeredModule::new(&b);
        for row in a.rows() {
            assert!(mb.contains(row));
        }
        for row in b.rows() {
            assert!(ma.contains(row));
        }
    }

    #[test]
    fn conv_parameters_examples() {
        assert_eq!(z4_code().parameters().unwrap().counts(), &[1, 0]);

        let z25 = RingParams::new(5, 2).unwrap();
        let lift = mat(z25, &[
            vec![vec![1, 1], vec![1, 2]],
            vec![vec![5, 5], vec![5, 10]],
        ]);
        let code = ConvCode::new(lift).unwrap();
        assert_eq!(code.parameters().unwrap().counts(), &[1, 0]);

        let identity = PolyMatrix::identity(z4(), 2);
        let code = ConvCode::new(expand_generator_sequence(&identity)).unwrap();
        assert_eq!(code.parameters().unwrap().counts(), &[2, 0]);
    }

    #[test]
    fn sliding_rows_form_generator_sequences() {
        let c = z4_code();
        for j in 0..4 {
            let s = sliding_matrix(c.encoder(), j);
            let rows = s.matrix().to_poly_matrix();
            assert!(is_p_generator_sequence(&rows));
        }
    }

    #[test]
    fn column_distances_respect_parameter_bound() {
        let mut state = 0x1ee7_c0deu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for &(p, r) in &[(2u64, 2u32), (3, 2)] {
            let ring = RingParams::new(p, r).unwrap();
            let mut built = 0;
            while built < 25 {
                let n = 2 + (next() % 2) as usize;
                let entries: Vec<Vec<Vec<u64>>> = vec![(0..n)
                    .map(|_| {
                        (0..=(next() % 3) as usize)
                            .map(|_| next() % ring.modulus())
                            .collect()
                    })
                    .collect()];
                let g = mat(ring, &entries);
                let Ok(code) = ConvCode::new(expand_generator_sequence(&g)) else {
                    continue;
                };
                if !code.is_delay_free() {
                    continue;
                }
                built += 1;
                let params = code.parameters().unwrap();
                for j in 0..=2u64 {
                    let d = code.column_distance(j as usize, 1 << 22).unwrap().value;
                    let bound = bound_dcj_params(n as u64, &params, j).unwrap();
                    assert!(d <= bound, "d^c_{j} = {d} beats the bound {bound}");
                }
            }
        }
    }

    #[test]
    fn bound_consistency_with_r_optimal_params() {
        use crate::block::r_optimal_parameters;
        for k in 1..=10u64 {
            for r in 1..=4u32 {
                for n in (k.div_ceil(r as u64))..=8 {
                    for params in r_optimal_parameters(k, r) {
                        for j in 0..=3u64 {
                            assert_eq!(
                                bound_dcj_params(n, &params, j).unwrap(),
                                bound_b(n, k, r, j).unwrap()
                            );
                        }
                    }
                }
            }
        }
    }
}
