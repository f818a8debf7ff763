//! Exact truncated power series in `q` and polynomials in a marking
//! variable `z` with truncated series coefficients.
//!
//! Every [`QSeries`] carries its truncation order `N` and stores exactly the
//! coefficients of `q^0..=q^N` as big integers. Binary operations require
//! equal truncation. The checked methods return [`SeriesError`]; the operator
//! impls panic on a mismatch and are meant for code that builds all operands
//! at one truncation.
//!
//! Products such as `(a;q)_n` and the `omega` factors are built here, along
//! with Gaussian binomial coefficients.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("constant term {0} is not a unit")]
    NonUnitConstant(BigInt),
    #[error("z^0 part is nonzero, cannot divide by z")]
    NotDivisibleByZ,
    #[error("infinite product with zero step")]
    ZeroStep,
}

/// Number of factors in a q-Pochhammer style product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Finite(usize),
    Infinite,
}

/// Power series in `q` modulo `q^(N+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(trunc: usize) -> Self {
        QSeries {
            coeffs: vec![BigInt::zero(); trunc + 1],
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::constant(BigInt::one(), trunc)
    }

    pub fn constant(c: BigInt, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        s.coeffs[0] = c;
        s
    }

    /// `coeff * q^exp`, or zero when `exp > trunc`.
    pub fn monomial(exp: usize, coeff: impl Into<BigInt>, trunc: usize) -> Self {
        let mut s = Self::zero(trunc);
        if exp <= trunc {
            s.coeffs[exp] = coeff.into();
        }
        s
    }

    /// Series with the given coefficients; the truncation is `coeffs.len() - 1`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        QSeries { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `q^exp`; zero beyond the truncation.
    pub fn coeff(&self, exp: usize) -> BigInt {
        self.coeffs.get(exp).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Re-truncates, padding with zeros when growing.
    pub fn with_trunc(&self, trunc: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc + 1, BigInt::zero());
        QSeries { coeffs }
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.trunc() == other.trunc() {
            Ok(())
        } else {
            Err(SeriesError::TruncationMismatch(self.trunc(), other.trunc()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QSeries { coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(QSeries { coeffs })
    }

    /// Schoolbook product modulo `q^(N+1)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let n = self.trunc();
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(QSeries { coeffs: out })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `q^e`, dropping terms past the truncation.
    pub fn shift(&self, e: usize) -> Self {
        let n = self.trunc();
        let mut out = vec![BigInt::zero(); n + 1];
        if e <= n {
            out[e..].clone_from_slice(&self.coeffs[..=n - e]);
        }
        QSeries { coeffs: out }
    }

    /// Multiplicative inverse by coefficient recursion. The constant term
    /// must be `1` or `-1`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(SeriesError::NonUnitConstant(c0.clone()));
        }
        let n = self.trunc();
        let mut out: Vec<BigInt> = Vec::with_capacity(n + 1);
        out.push(c0.clone()); // 1/c0 == c0 for units
        for e in 1..=n {
            let mut acc = BigInt::zero();
            for i in 1..=e {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[e - i];
                }
            }
            out.push(-(acc * c0));
        }
        Ok(QSeries { coeffs: out })
    }

    /// `self / other`, `other` having a unit constant term.
    pub fn checked_div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_mul(&other.reciprocal()?)
    }

    /// Debug dump: one `exponent<TAB>coefficient` line per coefficient.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (e, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(out, "{e}\t{c}");
        }
        out
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.checked_add(rhs).expect("series truncation mismatch")
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.checked_sub(rhs).expect("series truncation mismatch")
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.checked_mul(rhs).expect("series truncation mismatch")
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Polynomial in `z` whose coefficients are [`QSeries`] sharing one
/// truncation. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZQPoly {
    trunc: usize,
    terms: BTreeMap<usize, QSeries>,
}

impl ZQPoly {
    pub fn zero(trunc: usize) -> Self {
        ZQPoly {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(trunc: usize) -> Self {
        Self::from_series(QSeries::one(trunc))
    }

    pub fn from_series(s: QSeries) -> Self {
        Self::from_terms(s.trunc(), [(0, s)])
    }

    /// `coeff * z^z_deg * q^q_exp`.
    pub fn monomial(z_deg: usize, q_exp: usize, coeff: impl Into<BigInt>, trunc: usize) -> Self {
        Self::from_terms(trunc, [(z_deg, QSeries::monomial(q_exp, coeff, trunc))])
    }

    /// Builds from `(z-degree, coefficient)` pairs, summing repeated degrees.
    ///
    /// # Panics
    /// If a coefficient's truncation differs from `trunc`.
    pub fn from_terms(trunc: usize, terms: impl IntoIterator<Item = (usize, QSeries)>) -> Self {
        let mut out = ZQPoly::zero(trunc);
        for (d, s) in terms {
            assert_eq!(s.trunc(), trunc, "term truncation mismatch");
            out.add_term(d, &s);
        }
        out
    }

    fn add_term(&mut self, d: usize, s: &QSeries) {
        if s.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&d) {
            Some(existing) => &existing + s,
            None => s.clone(),
        };
        if !sum.is_zero() {
            self.terms.insert(d, sum);
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Nonzero terms by increasing z-degree.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &QSeries)> {
        self.terms.iter().map(|(&d, s)| (d, s))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn z_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of `z^z_deg` as a series (zero if absent).
    pub fn z_coeff(&self, z_deg: usize) -> QSeries {
        self.terms
            .get(&z_deg)
            .cloned()
            .unwrap_or_else(|| QSeries::zero(self.trunc))
    }

    /// Coefficient of `z^z_deg q^q_exp`.
    pub fn coeff(&self, z_deg: usize, q_exp: usize) -> BigInt {
        self.terms
            .get(&z_deg)
            .map(|s| s.coeff(q_exp))
            .unwrap_or_default()
    }

    pub fn with_trunc(&self, trunc: usize) -> Self {
        Self::from_terms(trunc, self.terms().map(|(d, s)| (d, s.with_trunc(trunc))))
    }

    fn check(&self, other: &Self) -> Result<(), SeriesError> {
        if self.trunc == other.trunc {
            Ok(())
        } else {
            Err(SeriesError::TruncationMismatch(self.trunc, other.trunc))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (d, s) in other.terms() {
            out.add_term(d, s);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check(other)?;
        let mut out = ZQPoly::zero(self.trunc);
        for (da, a) in self.terms() {
            for (db, b) in other.terms() {
                out.add_term(da + db, &(a * b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.trunc, self.terms().map(|(d, s)| (d, s.scale(c))))
    }

    /// Multiplies every coefficient by `q^e`.
    pub fn shift_q(&self, e: usize) -> Self {
        Self::from_terms(self.trunc, self.terms().map(|(d, s)| (d, s.shift(e))))
    }

    /// Multiplies by `z^d`.
    pub fn shift_z(&self, d: usize) -> Self {
        ZQPoly {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(&k, s)| (k + d, s.clone())).collect(),
        }
    }

    /// Divides by `z`; fails if there is a `z^0` part.
    pub fn div_z(&self) -> Result<Self, SeriesError> {
        if self.terms.contains_key(&0) {
            return Err(SeriesError::NotDivisibleByZ);
        }
        Ok(ZQPoly {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(&k, s)| (k - 1, s.clone())).collect(),
        })
    }

    /// Inverse as a power series in `q` with polynomial-in-`z` coefficients.
    /// Requires the `z^0` part to have a unit constant term and every
    /// positive z-degree part to vanish at `q^0`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let base = self.z_coeff(0);
        let base_inv = base.reciprocal()?;
        for (d, s) in self.terms() {
            if d > 0 && !s.coeff(0).is_zero() {
                return Err(SeriesError::NonUnitConstant(s.coeff(0)));
            }
        }
        // 1/(b + u) = b^-1 * sum_i (-u b^-1)^i, u having q-valuation >= 1
        let base_inv_poly = ZQPoly::from_series(base_inv);
        let mut u = self.clone();
        u.terms.remove(&0);
        let step = -&(&u * &base_inv_poly);
        let mut power = ZQPoly::one(self.trunc);
        let mut sum = ZQPoly::one(self.trunc);
        for _ in 0..self.trunc {
            power = &power * &step;
            if power.is_zero() {
                break;
            }
            sum = &sum + &power;
        }
        Ok(&sum * &base_inv_poly)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.checked_mul(&other.reciprocal()?)
    }

    /// Multiplies by `1 - coef * z^z_pow * q^e`.
    pub fn mul_binomial(&self, coef: i64, z_pow: usize, e: usize) -> Self {
        if e > self.trunc {
            return self.clone();
        }
        let term = self.shift_z(z_pow).shift_q(e).scale(&BigInt::from(-coef));
        self + &term
    }

    /// Divides by `1 - coef * z^z_pow * q^e`, expanding the inverse as a
    /// geometric series. Needs `z_pow >= 1` and `e >= 1` so the expansion
    /// terminates.
    pub fn div_binomial(&self, coef: i64, z_pow: usize, e: usize) -> Self {
        assert!(z_pow >= 1 && e >= 1, "binomial divisor must vanish at z = q = 0");
        let Some(top) = self.z_degree() else {
            return self.clone();
        };
        if e > self.trunc {
            return self.clone();
        }
        let top = top + z_pow * (self.trunc / e);
        let c = BigInt::from(coef);
        let mut out = ZQPoly::zero(self.trunc);
        for d in 0..=top {
            let mut s = self.z_coeff(d);
            if d >= z_pow {
                if let Some(prev) = out.terms.get(&(d - z_pow)) {
                    s = &s + &prev.shift(e).scale(&c);
                }
            }
            out.add_term(d, &s);
        }
        out
    }

    /// Value at `z = 1`.
    pub fn at_z_one(&self) -> QSeries {
        self.terms
            .values()
            .fold(QSeries::zero(self.trunc), |acc, s| &acc + s)
    }

    /// `d/dz` at `z = 1`, i.e. `sum_a a * [z^a]`.
    pub fn z_moment(&self) -> QSeries {
        self.terms().fold(QSeries::zero(self.trunc), |acc, (d, s)| {
            &acc + &s.scale(&BigInt::from(d))
        })
    }

    /// Debug dump: a `# z^d` header per nonzero z-degree followed by
    /// `exponent<TAB>coefficient` lines. A z-free value dumps as a plain
    /// series.
    pub fn dump(&self) -> String {
        if self.terms.keys().all(|&d| d == 0) {
            return self.z_coeff(0).dump();
        }
        let mut out = String::new();
        for (d, s) in self.terms() {
            let _ = writeln!(out, "# z^{d}");
            out.push_str(&s.dump());
        }
        out
    }
}

impl Add for &ZQPoly {
    type Output = ZQPoly;
    fn add(self, rhs: &ZQPoly) -> ZQPoly {
        self.checked_add(rhs).expect("series truncation mismatch")
    }
}

impl Sub for &ZQPoly {
    type Output = ZQPoly;
    fn sub(self, rhs: &ZQPoly) -> ZQPoly {
        self.checked_sub(rhs).expect("series truncation mismatch")
    }
}

impl Mul for &ZQPoly {
    type Output = ZQPoly;
    fn mul(self, rhs: &ZQPoly) -> ZQPoly {
        self.checked_mul(rhs).expect("series truncation mismatch")
    }
}

impl Neg for &ZQPoly {
    type Output = ZQPoly;
    fn neg(self) -> ZQPoly {
        ZQPoly {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(&d, s)| (d, -s)).collect(),
        }
    }
}

// Exponents of the factors of a product over `offset + step * i`, stopping
// once they pass the truncation (those factors are 1 mod q^(N+1)).
fn factor_exponents(
    offset: usize,
    step: usize,
    count: Count,
    trunc: usize,
) -> Result<Vec<usize>, SeriesError> {
    match count {
        Count::Finite(n) => Ok((0..n).map(|i| offset + step * i).collect()),
        Count::Infinite if step == 0 => Err(SeriesError::ZeroStep),
        Count::Infinite => Ok((0..)
            .map(|i| offset + step * i)
            .take_while(|&e| e <= trunc)
            .collect()),
    }
}

/// `prod_{i < count} (1 - coef * q^(offset + i))`, i.e. `(coef q^offset; q)_count`.
pub fn q_pochhammer(coef: i64, offset: usize, count: Count, trunc: usize) -> QSeries {
    q_pochhammer_step(coef, offset, 1, count, trunc).expect("unit step")
}

/// `prod_{i < count} (1 - coef * q^(offset + step*i))`, i.e.
/// `(coef q^offset; q^step)_count`.
pub fn q_pochhammer_step(
    coef: i64,
    offset: usize,
    step: usize,
    count: Count,
    trunc: usize,
) -> Result<QSeries, SeriesError> {
    let mut acc = QSeries::one(trunc);
    let neg_coef = BigInt::from(-coef);
    for e in factor_exponents(offset, step, count, trunc)? {
        if e > trunc {
            continue;
        }
        // acc *= (1 - coef q^e), in place from the top down
        let n = trunc;
        if e == 0 {
            let factor = BigInt::one() + &neg_coef;
            acc = acc.scale(&factor);
            continue;
        }
        for idx in (e..=n).rev() {
            let add = &acc.coeffs[idx - e] * &neg_coef;
            acc.coeffs[idx] += add;
        }
    }
    Ok(acc)
}

/// `prod_{i < count} (1 - coef * z^z_pow * q^(offset + step*i))` as a
/// z-marked polynomial.
pub fn zq_pochhammer(
    coef: i64,
    z_pow: usize,
    offset: usize,
    step: usize,
    count: Count,
    trunc: usize,
) -> Result<ZQPoly, SeriesError> {
    let mut acc = ZQPoly::one(trunc);
    for e in factor_exponents(offset, step, count, trunc)? {
        if e > trunc {
            continue;
        }
        acc = acc.mul_binomial(coef, z_pow, e);
    }
    Ok(acc)
}

/// `omega(t) = 1 + sum_{i=1}^r 2 q^(i t)`.
pub fn omega(t: usize, r: usize, trunc: usize) -> QSeries {
    let mut s = QSeries::one(trunc);
    for i in 1..=r {
        if i * t <= trunc {
            s.coeffs[i * t] += 2;
        }
    }
    s
}

/// `omega(m; count) = prod_{i < count} omega(m + i)`; an infinite product
/// stops once `m + i` passes the truncation.
pub fn omega_product(m: usize, count: Count, r: usize, trunc: usize) -> QSeries {
    assert!(m >= 1, "omega products start at a positive index");
    let last = match count {
        Count::Finite(n) => m + n,
        Count::Infinite => trunc.max(m - 1) + 1,
    };
    (m..last)
        .filter(|&t| t <= trunc)
        .fold(QSeries::one(trunc), |acc, t| &acc * &omega(t, r, trunc))
}

/// `1 + sum_{i=1}^r 2 z^i q^(i t)`: the factor of `omega(t)` with each part
/// of size `t` marked by `z`.
pub fn omega_z(t: usize, r: usize, trunc: usize) -> ZQPoly {
    let mut out = ZQPoly::one(trunc);
    for i in 1..=r {
        out = &out + &ZQPoly::monomial(i, i * t, 2, trunc);
    }
    out
}

/// `p * omega_z(t)`, computed by shifting rather than a full product.
pub fn times_omega_z(p: &ZQPoly, t: usize, r: usize) -> ZQPoly {
    let two = BigInt::from(2);
    (1..=r)
        .filter(|&i| i * t <= p.trunc())
        .fold(p.clone(), |acc, i| &acc + &p.shift_z(i).shift_q(i * t).scale(&two))
}

/// `prod_{t >= m} omega_z(t)` truncated.
pub fn omega_z_tail(m: usize, r: usize, trunc: usize) -> ZQPoly {
    (m.max(1)..=trunc).fold(ZQPoly::one(trunc), |acc, t| times_omega_z(&acc, t, r))
}

/// Gaussian binomial `[a, b]` in base `q^k`, as an exact polynomial whose
/// truncation equals its degree `k * b * (a - b)`. Zero when `b > a`.
pub fn gaussian_binomial(a: usize, b: usize, k: usize) -> QSeries {
    if b > a {
        return QSeries::zero(0);
    }
    let deg = k * b * (a - b);
    gaussian_binomial_trunc(a, b, k, deg)
}

/// Gaussian binomial `[a, b]` in base `q^k` modulo `q^(trunc+1)`, computed as
/// the quotient `(q^k;q^k)_a / ((q^k;q^k)_b (q^k;q^k)_(a-b))`.
pub fn gaussian_binomial_trunc(a: usize, b: usize, k: usize, trunc: usize) -> QSeries {
    assert!(k >= 1, "base exponent must be positive");
    if b > a {
        return QSeries::zero(trunc);
    }
    let poch = |n: usize| q_pochhammer_step(1, k, k, Count::Finite(n), trunc).expect("finite");
    let denom = &poch(b) * &poch(a - b);
    poch(a)
        .checked_div(&denom)
        .expect("(q^k;q^k)_n has constant term 1")
}
