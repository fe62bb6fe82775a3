//! Block codes over `Z_{p^r}`: standard form, p-standard form, code
//! parameters, exact free distance and the Singleton-type bounds, plus the
//! r-optimal parameter solver.

use crate::pbasis;
use crate::poly::ScalarMatrix;
use crate::ring::RingParams;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockError {
    /// The zero code has no nonzero codeword, so no free distance.
    ZeroCode,
    /// An exhaustive search would exceed the given budget.
    BudgetExceeded { required: u128, budget: u128 },
    /// `sum k_i` exceeds the code length.
    ParamsExceedLength { sum: u64, n: u64 },
    /// `ceil(k/r)` exceeds the code length.
    RateOutOfRange { needed: u64, n: u64 },
    /// A matrix does not match the standard form template.
    MalformedStandardForm(String),
}

impl fmt::Display for BlockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlockError::ZeroCode => write!(f, "the zero code has no nonzero codeword"),
            BlockError::BudgetExceeded { required, budget } => {
                write!(f, "search needs {required} candidates, budget is {budget}")
            }
            BlockError::ParamsExceedLength { sum, n } => {
                write!(f, "parameter sum {sum} exceeds length {n}")
            }
            BlockError::RateOutOfRange { needed, n } => {
                write!(f, "ceil(k/r) = {needed} exceeds length {n}")
            }
            BlockError::MalformedStandardForm(msg) => {
                write!(f, "malformed standard form: {msg}")
            }
        }
    }
}

impl std::error::Error for BlockError {}

/// The layer sizes `k_0, .., k_{r-1}` of a code's standard form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParameterSet {
    counts: Vec<u64>,
}

impl ParameterSet {
    pub fn new(counts: Vec<u64>) -> Self {
        ParameterSet { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn r(&self) -> u32 {
        self.counts.len() as u32
    }

    /// `sum k_i`.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `sum (r - i) k_i`, the p-dimension of a code with these parameters.
    pub fn p_dimension(&self) -> u64 {
        let r = self.counts.len() as u64;
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &k)| (r - i as u64) * k)
            .sum()
    }
}

impl fmt::Display for ParameterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// A generator matrix in standard form: block upper triangular with
/// `p^i I_{k_i}` diagonal blocks, together with the column permutation that
/// produced it and the layer parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    matrix: ScalarMatrix,
    /// `permutation[new_col] = original_col`.
    permutation: Vec<usize>,
    params: ParameterSet,
}

impl StandardForm {
    pub fn matrix(&self) -> &ScalarMatrix {
        &self.matrix
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn params(&self) -> &ParameterSet {
        &self.params
    }

    /// Rebuilds a standard form from its parts, validating the template:
    /// pivot entries exactly `p^i`, zeros below and left of each pivot, and
    /// entries above a pivot reduced mod `p^i`.
    pub fn from_parts(
        matrix: ScalarMatrix,
        permutation: Vec<usize>,
    ) -> Result<Self, BlockError> {
        let ring = matrix.ring();
        if permutation.len() != matrix.n() {
            return Err(BlockError::MalformedStandardForm(
                "permutation length differs from the column count".into(),
            ));
        }
        let mut counts = vec![0u64; ring.r() as usize];
        let mut prev_val = 0u32;
        for (t, row) in matrix.rows().iter().enumerate() {
            if t >= matrix.n() {
                return Err(BlockError::MalformedStandardForm(
                    "more pivot rows than columns".into(),
                ));
            }
            let val = ring.valuation(row[t]);
            if val >= ring.r() || row[t] != ring.p_pow(val) {
                return Err(BlockError::MalformedStandardForm(format!(
                    "pivot at ({t},{t}) is {} rather than a power of p",
                    row[t]
                )));
            }
            if val < prev_val {
                return Err(BlockError::MalformedStandardForm(
                    "pivot valuations decrease".into(),
                ));
            }
            prev_val = val;
            for (j, &e) in row.iter().enumerate() {
                if j < t && e != 0 {
                    return Err(BlockError::MalformedStandardForm(format!(
                        "nonzero entry left of the pivot in row {t}"
                    )));
                }
                if j > t && ring.valuation(e) < val && e != 0 {
                    return Err(BlockError::MalformedStandardForm(format!(
                        "entry ({t},{j}) has smaller valuation than its pivot"
                    )));
                }
            }
            for other in matrix.rows().iter().take(t) {
                if other[t] >= ring.p_pow(val) {
                    return Err(BlockError::MalformedStandardForm(format!(
                        "entry above pivot {t} is not reduced"
                    )));
                }
            }
            counts[val as usize] += 1;
        }
        Ok(StandardForm { matrix, permutation, params: ParameterSet::new(counts) })
    }
}

/// Brings a generator matrix into standard form by valuation-minimal
/// pivoting: rows are combined freely, columns only permuted.
pub fn standard_form(g: &ScalarMatrix) -> StandardForm {
    let ring = g.ring();
    let n = g.n();
    let mut m: Vec<Vec<u64>> = g.rows().to_vec();
    let mut permutation: Vec<usize> = (0..n).collect();
    let mut pivot_vals: Vec<u32> = Vec::new();
    let mut t = 0usize;
    while t < m.len() && t < n {
        // entry of minimal valuation in the working submatrix
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..m.len() {
            for j in t..n {
                let v = ring.valuation(m[i][j]);
                if v < ring.r() && best.is_none_or(|(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((val, bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        permutation.swap(t, bj);
        // normalize the pivot to exactly p^val
        let unit = m[t][t] / ring.p_pow(val);
        let inv = ring.inverse(unit).expect("cofactor of the valuation is a unit");
        for e in m[t].iter_mut() {
            *e = ring.mul(*e, inv);
        }
        debug_assert_eq!(m[t][t], ring.p_pow(val));
        // clear below, reduce above mod p^val
        for i in 0..m.len() {
            if i == t || m[i][t] == 0 {
                continue;
            }
            let q = m[i][t] / ring.p_pow(val);
            if q == 0 {
                continue;
            }
            for j in 0..n {
                let sub = ring.mul(q, m[t][j]);
                m[i][j] = ring.sub(m[i][j], sub);
            }
        }
        pivot_vals.push(val);
        t += 1;
    }
    debug_assert!(m[t..].iter().all(|row| row.iter().all(|&e| e == 0)));
    m.truncate(t);
    let mut counts = vec![0u64; ring.r() as usize];
    for &v in &pivot_vals {
        counts[v as usize] += 1;
    }
    StandardForm {
        matrix: ScalarMatrix::new(ring, n, m).expect("shape preserved"),
        permutation,
        params: ParameterSet::new(counts),
    }
}

/// Expands a standard form into a p-encoder in p-standard form: each layer-i
/// row block is multiplied by `1, p, .., p^{r-i-1}`, cross-layer cancellations
/// clear the identity columns, and rows are reordered by power level.
pub fn p_standard_form(s: &StandardForm) -> ScalarMatrix {
    let ring = s.matrix().ring();
    let r = ring.r() as usize;
    let n = s.matrix().n();
    let counts = s.params().counts();
    // row blocks of the standard form by layer
    let mut offsets = vec![0usize; r + 1];
    for i in 0..r {
        offsets[i + 1] = offsets[i] + counts[i] as usize;
    }
    let block = |i: usize| -> Vec<Vec<u64>> {
        s.matrix().rows()[offsets[i]..offsets[i + 1]].to_vec()
    };
    // column offsets of the identity blocks
    let col_offset = &offsets;
    // Step 1: expanded[i][j-1] = p^{j-1} * (row block i), j = 1..r-i
    let mut expanded: Vec<Vec<Vec<Vec<u64>>>> = Vec::with_capacity(r);
    for i in 0..r {
        let rows = block(i);
        let mut powers = Vec::with_capacity(r - i);
        for j in 1..=(r - i) {
            let factor = ring.p_pow(j as u32 - 1);
            powers.push(
                rows.iter()
                    .map(|row| row.iter().map(|&e| ring.mul(e, factor)).collect())
                    .collect::<Vec<Vec<u64>>>(),
            );
        }
        expanded.push(powers);
    }
    // the A^i_{i+t,i} blocks: columns of block i+t in p^{-i} * (row block i)
    let a_block = |i: usize, t: usize| -> Vec<Vec<u64>> {
        let rows = block(i);
        let from = col_offset[i + t];
        let to = col_offset[i + t + 1];
        rows.iter()
            .map(|row| row[from..to].iter().map(|&e| e / ring.p_pow(i as u32)).collect())
            .collect()
    };
    // Step 2, higher layers first so the subtracted blocks are final
    for i in (0..r.saturating_sub(1)).rev() {
        for j in 2..=(r - i) {
            for t in 1..=(j - 1) {
                if counts[i + t] == 0 {
                    continue;
                }
                let a = a_block(i, t);
                let other = expanded[i + t][j - t - 1].clone();
                let target = &mut expanded[i][j - 1];
                for (row_idx, target_row) in target.iter_mut().enumerate() {
                    for (m_idx, other_row) in other.iter().enumerate() {
                        let c = a[row_idx][m_idx];
                        if c == 0 {
                            continue;
                        }
                        for (e, &o) in target_row.iter_mut().zip(other_row) {
                            *e = ring.sub(*e, ring.mul(c, o));
                        }
                    }
                }
            }
        }
    }
    // Step 3: reorder by power level
    let mut rows = Vec::new();
    for level in 0..r {
        for i in 0..=level {
            let j = level - i + 1;
            if j <= r - i && counts[i] > 0 {
                rows.extend(expanded[i][j - 1].iter().cloned());
            }
        }
    }
    ScalarMatrix::new(ring, n, rows).expect("shape preserved")
}

/// The standard-form parameters of the code generated by `g`; invariant
/// across generator sets of the same code.
pub fn code_parameters(g: &ScalarMatrix) -> ParameterSet {
    standard_form(g).params.clone()
}

/// A block code with its cached standard form data.
#[derive(Debug, Clone)]
pub struct BlockCode {
    generators: ScalarMatrix,
    standard: StandardForm,
}

impl BlockCode {
    pub fn new(generators: ScalarMatrix) -> Self {
        let standard = standard_form(&generators);
        BlockCode { generators, standard }
    }

    pub fn ring(&self) -> RingParams {
        self.generators.ring()
    }

    pub fn n(&self) -> usize {
        self.generators.n()
    }

    pub fn generators(&self) -> &ScalarMatrix {
        &self.generators
    }

    pub fn standard_form(&self) -> &StandardForm {
        &self.standard
    }

    pub fn params(&self) -> &ParameterSet {
        self.standard.params()
    }

    pub fn p_dimension(&self) -> u64 {
        self.standard.params().p_dimension()
    }

    /// A p-encoder of the code in the original coordinates, built by
    /// expanding the standard form and undoing the column permutation.
    pub fn p_encoder(&self) -> ScalarMatrix {
        let permuted = p_standard_form(&self.standard);
        let ring = permuted.ring();
        let n = permuted.n();
        let perm = self.standard.permutation();
        let rows = permuted
            .rows()
            .iter()
            .map(|row| {
                let mut out = vec![0u64; n];
                for (new_col, &orig_col) in perm.iter().enumerate() {
                    out[orig_col] = row[new_col];
                }
                out
            })
            .collect();
        ScalarMatrix::new(ring, n, rows).expect("shape preserved")
    }

    /// Exact minimum weight by exhausting all nonzero digit inputs against a
    /// p-encoder of the code.
    pub fn free_distance(&self, budget: u128) -> Result<u64, BlockError> {
        block_free_distance(&self.p_encoder(), budget)
    }
}

/// Exact minimum weight of the code generated (over digit inputs) by the
/// given p-encoder: exhausts `u` over `A_p^k` minus zero.
pub fn block_free_distance(encoder: &ScalarMatrix, budget: u128) -> Result<u64, BlockError> {
    let ring = encoder.ring();
    let k = encoder.k();
    if k == 0 {
        return Err(BlockError::ZeroCode);
    }
    let required = (ring.p() as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(BlockError::BudgetExceeded { required, budget });
    }
    let n = encoder.n();
    let mut digits = vec![0u64; k];
    let mut best = u64::MAX;
    loop {
        let mut pos = k;
        loop {
            if pos == 0 {
                if best == u64::MAX {
                    // every nonzero input mapped to zero weight is impossible
                    // for a p-encoder, but the zero span is caught here
                    return Err(BlockError::ZeroCode);
                }
                return Ok(best);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < ring.p() {
                break;
            }
            digits[pos] = 0;
        }
        let mut weight = 0u64;
        for j in 0..n {
            let mut acc = 0u64;
            for (d, row) in digits.iter().zip(encoder.rows()) {
                acc = ring.add(acc, ring.mul(*d, row[j]));
            }
            if acc != 0 {
                weight += 1;
            }
        }
        if weight > 0 && weight < best {
            best = weight;
        }
    }
}

/// Singleton-type bound from the parameters: `d <= n - sum k_i + 1`.
pub fn singleton_bound_params(n: u64, params: &ParameterSet) -> Result<u64, BlockError> {
    let sum = params.total();
    if sum > n {
        return Err(BlockError::ParamsExceedLength { sum, n });
    }
    Ok(n - sum + 1)
}

/// Singleton bound from the p-dimension: `d <= n - ceil(k/r) + 1`.
pub fn singleton_bound_pdim(n: u64, k: u64, r: u32) -> Result<u64, BlockError> {
    let needed = k.div_ceil(r as u64);
    if needed > n {
        return Err(BlockError::RateOutOfRange { needed, n });
    }
    Ok(n - needed + 1)
}

/// All r-optimal parameter sets of `k`: the tuples minimizing `sum k_i`
/// subject to `sum (r-i) k_i = k`. A dynamic program over the coin values
/// `r, r-1, .., 1` fixes the optimum; a depth-first reconstruction collects
/// every tuple attaining it.
pub fn r_optimal_parameters(k: u64, r: u32) -> Vec<ParameterSet> {
    let r = r as usize;
    let k = k as usize;
    if k == 0 {
        return vec![ParameterSet::new(vec![0; r])];
    }
    // dp[a] = minimal number of coins forming a
    let mut dp = vec![u64::MAX; k + 1];
    dp[0] = 0;
    for a in 1..=k {
        for v in 1..=r.min(a) {
            if dp[a - v] != u64::MAX {
                dp[a] = dp[a].min(dp[a - v] + 1);
            }
        }
    }
    let optimum = dp[k];
    debug_assert_eq!(optimum, (k as u64).div_ceil(r as u64));
    // enumerate count vectors along non-increasing coin values
    let mut out = Vec::new();
    let mut counts = vec![0u64; r];
    fn recurse(
        dp: &[u64],
        counts: &mut Vec<u64>,
        out: &mut Vec<ParameterSet>,
        r: usize,
        value: usize,
        remaining: usize,
        used: u64,
        optimum: u64,
    ) {
        if remaining == 0 {
            if used == optimum {
                out.push(ParameterSet::new(counts.clone()));
            }
            return;
        }
        if value == 0 || used >= optimum {
            return;
        }
        let coins_left = optimum - used;
        // with parts of size at most `value`, remaining must stay reachable
        if remaining > value * coins_left as usize {
            return;
        }
        let max_count = (remaining / value).min(coins_left as usize);
        for c in (0..=max_count).rev() {
            let rest = remaining - c * value;
            let used2 = used + c as u64;
            if dp[rest] != u64::MAX && dp[rest] <= optimum - used2 {
                counts[r - value] = c as u64;
                recurse(dp, counts, out, r, value - 1, rest, used2, optimum);
                counts[r - value] = 0;
            }
        }
    }
    recurse(&dp, &mut counts, &mut out, r, r, k, 0, optimum);
    for set in &out {
        debug_assert_eq!(set.p_dimension(), k as u64);
        debug_assert_eq!(set.total(), optimum);
    }
    out.sort();
    out
}

/// The p-standard-form rows as polynomial rows, for p-basis checks.
pub fn encoder_as_poly(encoder: &ScalarMatrix) -> crate::poly::PolyMatrix {
    encoder.to_poly_matrix()
}

/// Convenience check used by tests and the CLI: the rows of a scalar matrix
/// form a p-basis.
pub fn is_scalar_p_basis(m: &ScalarMatrix) -> bool {
    let rows = m.to_poly_matrix();
    pbasis::is_p_generator_sequence(&rows) && pbasis::is_p_independent(&rows)
}
