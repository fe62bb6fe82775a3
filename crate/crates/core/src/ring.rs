//! Exact arithmetic in `Z_{p^r}`: canonical residues, p-adic digit
//! expansions and element orders.

use std::fmt;

/// Errors raised when constructing or using ring parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingError {
    /// `p` failed the trial-division primality check.
    NotPrime(u64),
    /// `p^r` does not fit the exact integer range of the implementation.
    ModulusOverflow { p: u64, r: u32 },
    /// `r` must be at least 1.
    ZeroExponent,
    /// A digit was outside `A_p = {0, .., p-1}` or the digit count was wrong.
    InvalidDigits(String),
    /// Two values from different rings were combined.
    RingMismatch,
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::NotPrime(p) => write!(f, "{p} is not prime"),
            RingError::ModulusOverflow { p, r } => {
                write!(f, "{p}^{r} exceeds the supported modulus range")
            }
            RingError::ZeroExponent => write!(f, "exponent r must be >= 1"),
            RingError::InvalidDigits(msg) => write!(f, "invalid digit vector: {msg}"),
            RingError::RingMismatch => write!(f, "operands belong to different rings"),
        }
    }
}

impl std::error::Error for RingError {}

/// The pair `(p, r)` defining the ring `Z_{p^r}`.
///
/// `p` is checked for primality by trial division at construction and the
/// modulus `p^r` must fit in a `u64` small enough that products of two
/// residues never overflow the `u128` intermediate used by [`Residue`]
/// arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    p: u64,
    r: u32,
    modulus: u64,
}

const MAX_MODULUS: u64 = 1 << 62;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl RingParams {
    pub fn new(p: u64, r: u32) -> Result<Self, RingError> {
        if r == 0 {
            return Err(RingError::ZeroExponent);
        }
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        let mut modulus: u64 = 1;
        for _ in 0..r {
            modulus = modulus
                .checked_mul(p)
                .filter(|&m| m <= MAX_MODULUS)
                .ok_or(RingError::ModulusOverflow { p, r })?;
        }
        Ok(RingParams { p, r, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// The modulus `p^r`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The ring `Z_p` with the same prime, used for mod-p projections.
    pub fn residue_field(&self) -> RingParams {
        RingParams { p: self.p, r: 1, modulus: self.p }
    }

    pub fn residue(&self, value: u64) -> Residue {
        Residue { value: value % self.modulus, ring: *self }
    }

    pub fn zero(&self) -> Residue {
        self.residue(0)
    }

    pub fn one(&self) -> Residue {
        self.residue(1)
    }

    /// Canonical representative of `value` modulo `p^r`.
    pub fn norm(&self, value: u64) -> u64 {
        value % self.modulus
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a % self.modulus + b % self.modulus) % self.modulus
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a % self.modulus + self.modulus - b % self.modulus) % self.modulus
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 % self.modulus as u128) * (b as u128 % self.modulus as u128)
            % self.modulus as u128) as u64
    }

    /// p-adic valuation of a canonical representative; `r` for zero.
    pub fn valuation(&self, a: u64) -> u32 {
        let a = self.norm(a);
        if a == 0 {
            return self.r;
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// Multiplicative inverse of a unit, by extended Euclid on the modulus.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        let a = self.norm(a);
        if a % self.p == 0 {
            return None;
        }
        let (mut old_r, mut r) = (a as i128, self.modulus as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        let m = self.modulus as i128;
        Some(((old_s % m + m) % m) as u64)
    }

    /// `p^e` as a ring element (zero once `e >= r`).
    pub fn p_pow(&self, e: u32) -> u64 {
        if e >= self.r {
            0
        } else {
            let mut x = 1u64;
            for _ in 0..e {
                x *= self.p;
            }
            x
        }
    }
}

/// A canonical element of `Z_{p^r}` carrying its ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Residue {
    value: u64,
    ring: RingParams,
}

impl Residue {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "residues from different rings");
        self.ring.residue(self.ring.add(self.value, rhs.value))
    }
}

impl std::ops::Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "residues from different rings");
        self.ring.residue(self.ring.sub(self.value, rhs.value))
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        assert_eq!(self.ring, rhs.ring, "residues from different rings");
        self.ring.residue(self.ring.mul(self.value, rhs.value))
    }
}

/// The p-adic digit expansion of a residue: exactly `r` digits in
/// `A_p = {0, .., p-1}`, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitVector {
    digits: Vec<u64>,
    ring: RingParams,
}

impl DigitVector {
    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn ring(&self) -> RingParams {
        self.ring
    }
}

/// Digits of `x` in base `p`: the unique `d` with `x = sum d[i] p^i`.
pub fn padic_digits(x: Residue) -> DigitVector {
    let ring = x.ring();
    let mut v = x.value();
    let mut digits = Vec::with_capacity(ring.r() as usize);
    for _ in 0..ring.r() {
        digits.push(v % ring.p());
        v /= ring.p();
    }
    DigitVector { digits, ring }
}

/// Inverse of [`padic_digits`]: evaluates `sum d[i] p^i` in the given ring.
pub fn from_digits(d: &DigitVector, ring: RingParams) -> Result<Residue, RingError> {
    if d.ring != ring {
        return Err(RingError::RingMismatch);
    }
    if d.digits.len() != ring.r() as usize {
        return Err(RingError::InvalidDigits(format!(
            "expected {} digits, got {}",
            ring.r(),
            d.digits.len()
        )));
    }
    let mut value = 0u64;
    let mut power = 1u64;
    for (i, &digit) in d.digits.iter().enumerate() {
        if digit >= ring.p() {
            return Err(RingError::InvalidDigits(format!(
                "digit {digit} at position {i} is not below p = {}",
                ring.p()
            )));
        }
        value += digit * power;
        power = power.saturating_mul(ring.p());
    }
    Ok(ring.residue(value))
}

/// A residue is a unit exactly when `p` does not divide it.
pub fn is_unit(x: Residue) -> bool {
    !x.is_zero() && x.value() % x.ring().p() != 0
}

/// Smallest `j` with `p^j x = 0`, with `order(0) = 0` so the map is total.
///
/// For nonzero `x` this equals `r` minus the p-adic valuation of `x`; units
/// have full order `r`.
pub fn order(x: Residue) -> u32 {
    if x.is_zero() {
        0
    } else {
        x.ring().r() - x.ring().valuation(x.value())
    }
}
