//! The identity catalog and the comparison engine.
//!
//! Every entry has a closed-form side built from series primitives only.
//! Most also have a combinatorial side computed by exhaustive enumeration.
//! [`verify`] compares all available sides coefficient by coefficient and
//! returns a [`VerificationReport`] listing every disagreement.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::enumeration::{self, BasisFamily, ClassTag};
use crate::overpartition::{Bound, Convention, Overpartition};
use crate::separable;
use crate::series::{
    gaussian_binomial_trunc, omega, omega_product, omega_z_tail, q_pochhammer, q_pochhammer_step,
    times_omega_z, zq_pochhammer, Count, QSeries, ZQPoly,
};

/// Largest truncation accepted for identities that need enumeration.
pub const BRUTE_FORCE_GUARD: usize = 40;
/// Largest truncation accepted for identities between series only.
pub const SERIES_GUARD: usize = 400;
pub const DEFAULT_TRUNC: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("{id} does not take parameter {param}")]
    UnexpectedParam { id: IdentityId, param: &'static str },
    #[error("invalid parameters for {id}: {message}")]
    InvalidParams { id: String, message: String },
    #[error("truncation {trunc} exceeds the limit {limit} for {id}")]
    TruncTooLarge {
        id: String,
        trunc: usize,
        limit: usize,
    },
    #[error("{0} has no combinatorial side")]
    NoCombinatorialSide(IdentityId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    I1,
    I2,
    I3,
    I4,
    I5,
    I6,
    I7,
    I8,
    I9,
    I10,
    I11,
    I12,
    I13,
    I14,
    I15,
    I16,
    I17,
    I18,
    I19,
}

/// Names of the integer parameters an identity may take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    R,
    K,
    N,
    M,
    S,
    J,
    A,
    B,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::R,
        Param::K,
        Param::N,
        Param::M,
        Param::S,
        Param::J,
        Param::A,
        Param::B,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::R => "r",
            Param::K => "k",
            Param::N => "n",
            Param::M => "m",
            Param::S => "s",
            Param::J => "j",
            Param::A => "a",
            Param::B => "b",
        }
    }
}

impl IdentityId {
    pub const ALL: [IdentityId; 19] = [
        IdentityId::I1,
        IdentityId::I2,
        IdentityId::I3,
        IdentityId::I4,
        IdentityId::I5,
        IdentityId::I6,
        IdentityId::I7,
        IdentityId::I8,
        IdentityId::I9,
        IdentityId::I10,
        IdentityId::I11,
        IdentityId::I12,
        IdentityId::I13,
        IdentityId::I14,
        IdentityId::I15,
        IdentityId::I16,
        IdentityId::I17,
        IdentityId::I18,
        IdentityId::I19,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }

    pub fn schema(self) -> &'static [Param] {
        use IdentityId::*;
        match self {
            I1 | I4 | I15 => &[],
            I2 | I3 | I5 | I7 | I8 | I10 => &[Param::R],
            I6 => &[Param::R, Param::N],
            I9 => &[Param::R, Param::M],
            I11 | I12 => &[Param::K],
            I13 | I14 => &[Param::K, Param::M, Param::S, Param::J],
            I16 => &[Param::A, Param::B, Param::K],
            I17 => &[Param::J, Param::K],
            I18 | I19 => &[Param::K, Param::S],
        }
    }

    pub fn has_combinatorial_side(self) -> bool {
        !matches!(self, IdentityId::I15 | IdentityId::I16 | IdentityId::I17)
    }

    /// Whether coefficients are indexed by a power of `z` as well as `q`.
    pub fn is_bivariate(self) -> bool {
        use IdentityId::*;
        matches!(self, I7 | I10 | I11 | I12 | I13 | I14 | I15 | I18 | I19)
    }

    pub fn trunc_limit(self) -> usize {
        if self.has_combinatorial_side() {
            BRUTE_FORCE_GUARD
        } else {
            SERIES_GUARD
        }
    }

    /// Values used for parameters the caller leaves out.
    pub fn default_params(self) -> Params {
        let mut p = Params::default();
        for &param in self.schema() {
            let v = match param {
                Param::R | Param::K => 2,
                Param::N | Param::M => 4,
                Param::S | Param::J => 1,
                Param::A => 6,
                Param::B => 3,
            };
            p.set(param, v);
        }
        p
    }

    /// The parameter grid run by `verify --all`.
    pub fn default_grid(self) -> Vec<Params> {
        use IdentityId::*;
        let one = |pairs: &[(Param, usize)]| {
            let mut p = Params::default();
            for &(param, v) in pairs {
                p.set(param, v);
            }
            p
        };
        let mut out = Vec::new();
        match self {
            I1 | I4 | I15 => out.push(Params::default()),
            I2 | I3 | I5 | I7 | I8 | I10 => {
                out.extend((1..=3).map(|r| one(&[(Param::R, r)])));
            }
            I6 | I9 => {
                let second = if self == I6 { Param::N } else { Param::M };
                for r in 1..=3 {
                    out.extend((1..=8).map(|v| one(&[(Param::R, r), (second, v)])));
                }
            }
            I11 | I12 => out.extend((1..=4).map(|k| one(&[(Param::K, k)]))),
            I13 | I14 => {
                for k in 1..=3 {
                    for m in 1..=7 {
                        for s in 1..=k {
                            out.extend((1..=m).map(|j| {
                                one(&[(Param::K, k), (Param::M, m), (Param::S, s), (Param::J, j)])
                            }));
                        }
                    }
                }
            }
            I16 => {
                for a in 1..=12 {
                    for b in 1..=a {
                        out.extend((1..=4).map(|k| one(&[(Param::A, a), (Param::B, b), (Param::K, k)])));
                    }
                }
            }
            I17 => {
                for j in 1..=6 {
                    out.extend((1..=3).map(|k| one(&[(Param::J, j), (Param::K, k)])));
                }
            }
            I18 | I19 => {
                for k in 1..=3 {
                    out.extend((1..=k).map(|s| one(&[(Param::K, k), (Param::S, s)])));
                }
            }
        }
        out
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I{}", self.number())
    }
}

impl FromStr for IdentityId {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || IdentityError::UnknownIdentity(s.to_string());
        let digits = s
            .strip_prefix('I')
            .or_else(|| s.strip_prefix('i'))
            .ok_or_else(unknown)?;
        if digits.starts_with('0') {
            return Err(unknown());
        }
        let n: usize = digits.parse().map_err(|_| unknown())?;
        IdentityId::ALL.get(n.wrapping_sub(1)).copied().ok_or_else(unknown)
    }
}

/// Identity parameters. Absent values are omitted from JSON.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
}

impl Params {
    pub fn get(&self, param: Param) -> Option<usize> {
        match param {
            Param::R => self.r,
            Param::K => self.k,
            Param::N => self.n,
            Param::M => self.m,
            Param::S => self.s,
            Param::J => self.j,
            Param::A => self.a,
            Param::B => self.b,
        }
    }

    pub fn set(&mut self, param: Param, value: usize) {
        let slot = match param {
            Param::R => &mut self.r,
            Param::K => &mut self.k,
            Param::N => &mut self.n,
            Param::M => &mut self.m,
            Param::S => &mut self.s,
            Param::J => &mut self.j,
            Param::A => &mut self.a,
            Param::B => &mut self.b,
        };
        *slot = Some(value);
    }

    pub fn with(mut self, param: Param, value: usize) -> Self {
        self.set(param, value);
        self
    }

    fn req(&self, param: Param) -> usize {
        self.get(param)
            .unwrap_or_else(|| panic!("parameter {} must be resolved", param.name()))
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in Param::ALL {
            if let Some(v) = self.get(p) {
                if !first {
                    f.write_str(",")?;
                }
                first = false;
                write!(f, "{}={v}", p.name())?;
            }
        }
        Ok(())
    }
}

/// Fills in defaults, rejects parameters outside the identity's schema and
/// checks ranges.
pub fn resolve_params(id: IdentityId, given: &Params) -> Result<Params, IdentityError> {
    for p in Param::ALL {
        if given.get(p).is_some() && !id.schema().contains(&p) {
            return Err(IdentityError::UnexpectedParam { id, param: p.name() });
        }
    }
    let mut out = id.default_params();
    for &p in id.schema() {
        if let Some(v) = given.get(p) {
            out.set(p, v);
        }
    }
    let bad = |message: String| {
        Err(IdentityError::InvalidParams {
            id: id.to_string(),
            message,
        })
    };
    for &p in id.schema() {
        if out.req(p) == 0 {
            return bad(format!("{} must be positive", p.name()));
        }
    }
    use IdentityId::*;
    match id {
        I13 | I14 => {
            let (k, m, s, j) = (out.req(Param::K), out.req(Param::M), out.req(Param::S), out.req(Param::J));
            if s > k {
                return bad(format!("need 1 <= s <= k, got s={s}, k={k}"));
            }
            if j > m {
                return bad(format!("need 1 <= j <= m, got j={j}, m={m}"));
            }
        }
        I16 => {
            let (a, b) = (out.req(Param::A), out.req(Param::B));
            if b > a {
                return bad(format!("need 1 <= b <= a, got a={a}, b={b}"));
            }
        }
        I18 | I19 => {
            let (k, s) = (out.req(Param::K), out.req(Param::S));
            if s > k {
                return bad(format!("need 1 <= s <= k, got s={s}, k={k}"));
            }
        }
        _ => {}
    }
    Ok(out)
}

/// How the factor `(1 + w(n))` in the `σ_r maes` closed form is read.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum WReading {
    /// `w(n) = omega(n)` with the identity's own `r`.
    #[default]
    Omega,
    /// `w(n) = 1 + 2q^n`, the `r = 1` factor.
    OmegaAtROne,
}

/// How the generating function of overpartitions whose largest
/// `(r+1)`-repeating size is below `n` is written.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PartialSum {
    /// `P - omega(1;n-1) (-q^n;q)_∞/(q^n;q)_∞ + omega(1;∞)`.
    #[default]
    Printed,
    /// `omega(n;∞) (-q;q)_(n-1)/(q;q)_(n-1)`: sizes from `n` on occur at
    /// most `r` times, smaller sizes are free.
    Direct,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Options {
    pub w_reading: WReading,
    pub partial_sum: PartialSum,
}

/// Both sides of an identity as written. `lhs` is `None` when the left side
/// is the combinatorial sum itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub lhs: Option<ZQPoly>,
    pub rhs: ZQPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Mismatch {
    pub q: usize,
    pub z: Option<usize>,
    #[serde(serialize_with = "as_decimal")]
    pub lhs: BigInt,
    #[serde(serialize_with = "as_decimal")]
    pub rhs: BigInt,
}

fn as_decimal<S: serde::Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub params: Params,
    pub trunc: usize,
    pub status: Status,
    pub mismatches: Vec<Mismatch>,
}

impl VerificationReport {
    fn new(identity: String, params: Params, trunc: usize, mismatches: Vec<Mismatch>) -> Self {
        let status = if mismatches.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            identity,
            params,
            trunc,
            status,
            mismatches,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------------------
// series building blocks

fn c2(j: usize) -> usize {
    j * j.saturating_sub(1) / 2
}

fn inv(s: &QSeries) -> QSeries {
    s.reciprocal().expect("unit constant term")
}

/// `(-q;q)_∞ / (q;q)_∞`.
fn overpartition_series(n: usize) -> QSeries {
    &q_pochhammer(-1, 1, Count::Infinite, n) * &inv(&q_pochhammer(1, 1, Count::Infinite, n))
}

/// `(-q^a;q)_∞ / (q^b;q)_∞`.
fn tail_ratio(a: usize, b: usize, n: usize) -> QSeries {
    &q_pochhammer(-1, a, Count::Infinite, n) * &inv(&q_pochhammer(1, b, Count::Infinite, n))
}

fn omega_fin(m: usize, count: usize, r: usize, n: usize) -> QSeries {
    omega_product(m, Count::Finite(count), r, n)
}

fn omega_inf(m: usize, r: usize, n: usize) -> QSeries {
    omega_product(m, Count::Infinite, r, n)
}

/// `q^((r+1)j) (-1;q)_j / (q;q)_j · omega(j+1;∞)`: overpartitions whose
/// largest `(r+1)`-repeating size is `j`.
fn largest_repeating_term(j: usize, r: usize, n: usize) -> QSeries {
    let e = (r + 1) * j;
    if e > n {
        return QSeries::zero(n);
    }
    let frac = &q_pochhammer(-1, 0, Count::Finite(j), n) * &inv(&q_pochhammer(1, 1, Count::Finite(j), n));
    (&frac * &omega_inf(j + 1, r, n)).shift(e)
}

/// `2 q^((r+1)j) omega(1;j-1) (-q^(j+1);q)_∞ / (q^j;q)_∞`: overpartitions
/// whose smallest positive `(r+1)`-repeating size is `j`.
fn smallest_repeating_term(j: usize, r: usize, n: usize) -> QSeries {
    let e = (r + 1) * j;
    if e > n {
        return QSeries::zero(n);
    }
    (&omega_fin(1, j - 1, r, n) * &tail_ratio(j + 1, j, n))
        .scale(&BigInt::from(2))
        .shift(e)
}

fn sum_series(n: usize, terms: impl Iterator<Item = QSeries>) -> QSeries {
    terms.fold(QSeries::zero(n), |acc, t| &acc + &t)
}

fn sum_poly(n: usize, terms: impl Iterator<Item = ZQPoly>) -> ZQPoly {
    terms.fold(ZQPoly::zero(n), |acc, t| &acc + &t)
}

fn z_free(s: QSeries) -> ZQPoly {
    ZQPoly::from_series(s)
}

/// `c(z) * s` for a polynomial `c(z)` given by its integer coefficients.
fn z_times(z_coeffs: &[(usize, i64)], s: &QSeries) -> ZQPoly {
    ZQPoly::from_terms(
        s.trunc(),
        z_coeffs.iter().map(|&(d, c)| (d, s.scale(&BigInt::from(c)))),
    )
}

/// Overpartitions whose largest `(r+1)`-repeating size is at most `t - 1`.
fn below_repeating(t: usize, r: usize, n: usize, form: PartialSum) -> QSeries {
    match form {
        PartialSum::Printed => {
            &(&overpartition_series(n) - &(&omega_fin(1, t - 1, r, n) * &tail_ratio(t, t, n)))
                + &omega_inf(1, r, n)
        }
        PartialSum::Direct => {
            let free = &q_pochhammer(-1, 1, Count::Finite(t - 1), n) * &inv_poch(t - 1, n);
            &omega_inf(t, r, n) * &free
        }
    }
}

fn sigma_mes_closed(r: usize, n: usize, form: PartialSum) -> QSeries {
    let mut acc = overpartition_series(n);
    for t in 1..=n {
        let weighted = sum_series(
            n,
            (1..=r).map(|i| QSeries::monomial(i * t, BigInt::from(2 * i), n)),
        );
        if weighted.is_zero() {
            continue;
        }
        let bracket = below_repeating(t, r, n, form);
        acc = &acc + &(&(&weighted * &inv(&omega(t, r, n))) * &bracket);
    }
    acc
}

fn sigma_maes_closed(r: usize, n: usize, reading: WReading) -> QSeries {
    let p = overpartition_series(n);
    let first = (&p - &omega_inf(1, r, n)).scale(&BigInt::from(r));
    let lambert = sum_series(
        n,
        (1..=n).map(|t| {
            let denom = &QSeries::one(n) - &QSeries::monomial(2 * t, 1, n);
            QSeries::monomial(t, 2, n).checked_div(&denom).expect("unit")
        }),
    );
    let last = sum_series(
        n,
        (1..=n).map(|t| {
            let w = match reading {
                WReading::Omega => omega(t, r, n),
                WReading::OmegaAtROne => omega(t, 1, n),
            };
            let one_plus_w = &QSeries::one(n) + &w;
            (&(&omega_fin(1, t - 1, r, n) * &tail_ratio(t + 1, t, n)) * &one_plus_w).shift(t)
        }),
    );
    &(&first + &(&p * &lambert)) - &last
}

fn sigma_one_mes_sum(n: usize, from: usize) -> QSeries {
    let p = overpartition_series(n);
    let sum = sum_series(
        n,
        (from..)
            .take_while(|&k| c2(k + 1) <= n)
            .map(|k| {
                let num = QSeries::monomial(c2(k + 1), BigInt::from(2).pow(k as u32), n);
                num.checked_div(&q_pochhammer(-1, 1, Count::Finite(k), n))
                    .expect("unit")
            }),
    );
    &p * &sum
}

fn bridge_rhs(n: usize, form: PartialSum) -> QSeries {
    sum_series(
        n,
        (1..=n).map(|t| {
            let frac = QSeries::monomial(t, 2, n)
                .checked_div(&(&QSeries::one(n) + &QSeries::monomial(t, 2, n)))
                .expect("unit");
            &frac * &below_repeating(t, 1, n, form)
        }),
    )
}

fn mes_bivariate(r: usize, n: usize) -> ZQPoly {
    let jmax = n / (r + 1);
    let mut tail = omega_z_tail(jmax + 1, r, n);
    let mut acc = ZQPoly::zero(n);
    for j in (0..=jmax).rev() {
        let frac = &q_pochhammer(-1, 0, Count::Finite(j), n) * &inv(&q_pochhammer(1, 1, Count::Finite(j), n));
        let coeff = z_times(&[(1, 1)], &frac.shift((r + 1) * j));
        acc = &acc + &(&coeff * &tail);
        if j >= 1 {
            tail = times_omega_z(&tail, j, r);
        }
    }
    acc
}

fn maes_bivariate(r: usize, n: usize) -> ZQPoly {
    let mut acc = ZQPoly::zero(n);
    for j in (1..).take_while(|&j| (r + 1) * j <= n) {
        let mut ratio = ZQPoly::one(n);
        for i in j..=n {
            ratio = ratio.div_binomial(1, 1, i);
        }
        for i in j + 1..=n {
            ratio = ratio.mul_binomial(-1, 1, i);
        }
        let coeff = z_times(&[(r, 2)], &omega_fin(1, j - 1, r, n).shift((r + 1) * j));
        acc = &acc + &(&coeff * &ratio);
    }
    acc
}

fn inv_poch(n_factors: usize, trunc: usize) -> QSeries {
    inv(&q_pochhammer(1, 1, Count::Finite(n_factors), trunc))
}

/// `q^(k C(j,2) + s j + k(m-j)) [m-1, j-1]_k` with no `z` factor.
fn theorem_core(k: usize, m: usize, s: usize, j: usize, n: usize) -> QSeries {
    let e = k * c2(j) + s * j + k * (m - j);
    if e > n {
        return QSeries::zero(n);
    }
    gaussian_binomial_trunc(m - 1, j - 1, k, n).shift(e)
}

fn l_class_closed(k: usize, n: usize) -> ZQPoly {
    let mut acc = ZQPoly::one(n);
    for s in 1..=k {
        for m in (1..).take_while(|&m| k * (m - 1) + s <= n) {
            let denom = inv_poch(k * (m - 1) + s, n);
            for j in 1..=m {
                let core = &theorem_core(k, m, s, j, n) * &denom;
                acc = &acc + &z_times(&[(j - 1, 1), (j, 1)], &core);
            }
        }
    }
    acc
}

fn f_class_closed(k: usize, n: usize) -> ZQPoly {
    let mut acc = ZQPoly::one(n);
    for s in 1..=k {
        for m in (1..).take_while(|&m| k * (m - 1) + s <= n) {
            let denom = inv_poch(k * (m - 1) + s, n);
            for j in 1..=m {
                let core = &theorem_core(k, m, s, j, n) * &denom;
                acc = &acc + &z_times(&[(j - 1, 1)], &core);
            }
        }
    }
    for m in (1..).take_while(|&m| k * m <= n) {
        let denom = inv_poch(k * m, n);
        for j in 1..=m {
            let e = k * c2(j) + k * m;
            if e > n {
                continue;
            }
            let core = &gaussian_binomial_trunc(m - 1, j - 1, k, n).shift(e) * &denom;
            acc = &acc + &z_times(&[(j, 1)], &core);
        }
    }
    acc
}

/// `(-z q^s; q^k)_∞ - 1`.
fn distinct_congruent_closed(k: usize, s: usize, n: usize) -> ZQPoly {
    let full = zq_pochhammer(-1, 1, s, k, Count::Infinite, n).expect("positive step");
    &full - &ZQPoly::one(n)
}

/// `sum_{j>=1} c(z) q^(k C(j,2) + s j) / (q^k;q^k)_j` where `c(z)` has a term
/// `c * z^(j + offset)` for each `(offset, c)` in `z_pattern`.
fn euler_sum(k: usize, s: usize, n: usize, z_pattern: &[(isize, i64)]) -> ZQPoly {
    sum_poly(
        n,
        (1..).take_while(|&j| k * c2(j) + s * j <= n).map(|j| {
            let denom = q_pochhammer_step(1, k, k, Count::Finite(j), n).expect("positive step");
            let core = QSeries::monomial(k * c2(j) + s * j, 1, n)
                .checked_div(&denom)
                .expect("unit");
            let zs: Vec<(usize, i64)> = z_pattern
                .iter()
                .map(|&(off, c)| ((j as isize + off) as usize, c))
                .collect();
            z_times(&zs, &core)
        }),
    )
}

/// `sum_m sum_{j<=m}` of the per-`(m, j)` theorem terms, with the `z` pattern
/// applied to each.
fn theorem_double_sum(k: usize, s: usize, n: usize, z_pattern: &[(isize, i64)], overlined_top: bool) -> ZQPoly {
    let mut acc = ZQPoly::zero(n);
    for m in 1..=n {
        for j in 1..=m {
            let core = if overlined_top {
                let e = k * c2(j) + k * m;
                if e > n {
                    continue;
                }
                gaussian_binomial_trunc(m - 1, j - 1, k, n).shift(e)
            } else {
                theorem_core(k, m, s, j, n)
            };
            if core.is_zero() {
                continue;
            }
            let zs: Vec<(usize, i64)> = z_pattern
                .iter()
                .map(|&(off, c)| ((j as isize + off) as usize, c))
                .collect();
            acc = &acc + &z_times(&zs, &core);
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// brute-force tallies

/// Accumulates `count * z^a q^b` with machine-word counters.
struct Tally {
    trunc: usize,
    counts: BTreeMap<usize, Vec<u64>>,
}

impl Tally {
    fn new(trunc: usize) -> Self {
        Tally {
            trunc,
            counts: BTreeMap::new(),
        }
    }

    fn add(&mut self, z: usize, q: usize, amount: u64) {
        if q > self.trunc || amount == 0 {
            return;
        }
        let row = self
            .counts
            .entry(z)
            .or_insert_with(|| vec![0; self.trunc + 1]);
        row[q] += amount;
    }

    fn into_poly(self) -> ZQPoly {
        let trunc = self.trunc;
        ZQPoly::from_terms(
            trunc,
            self.counts.into_iter().map(|(z, row)| {
                (z, QSeries::from_coeffs(row.into_iter().map(BigInt::from).collect()))
            }),
        )
    }
}

fn tally_overpartitions(n: usize, mut f: impl FnMut(&Overpartition, &mut Tally)) -> ZQPoly {
    let mut t = Tally::new(n);
    for w in 0..=n {
        enumeration::for_each_overpartition(w, Convention::LastOccurrence, |pi| f(pi, &mut t));
    }
    t.into_poly()
}

fn tally_class(tag: ClassTag, n: usize) -> ZQPoly {
    let mut t = Tally::new(n);
    for w in 0..=n {
        enumeration::for_each_overpartition(w, tag.convention(), |pi| {
            if separable::in_class(pi, tag) {
                t.add(pi.overlined_count(), w, 1);
            }
        });
    }
    t.into_poly()
}

/// Basis elements of weight at most `n` with length `≡ s (mod k)`, split by
/// the overline on the distinguished extreme part (smallest for BL, largest
/// for BF). Returns `(overlined, plain)` tallies by `ℓ_o`.
fn basis_split(family: BasisFamily, k: usize, s: usize, n: usize) -> (ZQPoly, ZQPoly) {
    let mut marked = Tally::new(n);
    let mut plain = Tally::new(n);
    for w in 1..=n {
        for lam in enumeration::basis_elements_of_weight(family, k, w) {
            if lam.len() % k != s % k {
                continue;
            }
            let entries = lam.entries();
            let extreme = match family {
                BasisFamily::Bl => entries.last(),
                BasisFamily::Bf => entries.first(),
            }
            .expect("basis elements are nonempty");
            let target = if extreme.overlined { &mut marked } else { &mut plain };
            target.add(lam.overlined_count(), w, 1);
        }
    }
    (marked.into_poly(), plain.into_poly())
}

fn distinct_congruent_tally(k: usize, s: usize, n: usize) -> ZQPoly {
    let mut t = Tally::new(n);
    for w in 1..=n {
        for j in 1..=w {
            let c = enumeration::distinct_congruent_partitions(w, j, k, s).len() as u64;
            t.add(j, w, c);
        }
    }
    t.into_poly()
}

fn basis_sum(family: BasisFamily, k: usize, m: usize, s: usize, j: usize, trunc: usize) -> (ZQPoly, ZQPoly) {
    let parts = k * (m - 1) + s;
    (
        separable::basis_gf(family, k, parts, j, false).with_trunc(trunc),
        separable::basis_gf(family, k, parts, j, true).with_trunc(trunc),
    )
}

// ---------------------------------------------------------------------------
// public engine

/// Truncation actually used for `id`. The finite basis identities are
/// compared as whole polynomials, so their truncation is raised to cover
/// every degree that can occur.
pub fn effective_trunc(id: IdentityId, params: &Params, trunc: usize) -> usize {
    match id {
        IdentityId::I13 | IdentityId::I14 => {
            let (k, m, s, j) = (params.req(Param::K), params.req(Param::M), params.req(Param::S), params.req(Param::J));
            let parts = k * (m - 1) + s;
            trunc
                .max(parts * (parts + 1) / 2)
                .max(k * j * j + k * j + k * m + k * m * m)
        }
        IdentityId::I16 => {
            let (a, b, k) = (params.req(Param::A), params.req(Param::B), params.req(Param::K));
            trunc.max(k * b * (a - b) + k * b)
        }
        _ => trunc,
    }
}

fn check_trunc(id: IdentityId, trunc: usize) -> Result<(), IdentityError> {
    if trunc > id.trunc_limit() {
        return Err(IdentityError::TruncTooLarge {
            id: id.to_string(),
            trunc,
            limit: id.trunc_limit(),
        });
    }
    Ok(())
}

/// Closed-form sides of `id` at truncation `trunc` (raised per
/// [`effective_trunc`]).
pub fn closed_form(id: IdentityId, params: &Params, trunc: usize) -> Result<ClosedForm, IdentityError> {
    closed_form_with(id, params, trunc, Options::default())
}

pub fn closed_form_with(
    id: IdentityId,
    params: &Params,
    trunc: usize,
    options: Options,
) -> Result<ClosedForm, IdentityError> {
    check_trunc(id, trunc)?;
    let p = resolve_params(id, params)?;
    let n = effective_trunc(id, &p, trunc);
    Ok(build_closed(id, &p, n, options))
}

fn build_closed(id: IdentityId, p: &Params, n: usize, options: Options) -> ClosedForm {
    use IdentityId::*;
    let get = |param| p.req(param);
    let only = |rhs: ZQPoly| ClosedForm { lhs: None, rhs };
    let both = |lhs: ZQPoly, rhs: ZQPoly| ClosedForm { lhs: Some(lhs), rhs };
    match id {
        I1 => only(z_free(sigma_one_mes_sum(n, 0))),
        I2 => only(z_free(sigma_mes_closed(get(Param::R), n, options.partial_sum))),
        I3 => only(z_free(sigma_maes_closed(get(Param::R), n, options.w_reading))),
        I4 => both(
            z_free(sigma_one_mes_sum(n, 1)),
            z_free(bridge_rhs(n, options.partial_sum)),
        ),
        I5 => {
            let r = get(Param::R);
            let lhs = sum_series(n, (0..=n).map(|j| largest_repeating_term(j, r, n)));
            both(z_free(lhs), z_free(overpartition_series(n)))
        }
        I6 => {
            let (r, t) = (get(Param::R), get(Param::N));
            let lhs = sum_series(n, (0..t).map(|j| largest_repeating_term(j, r, n)));
            both(z_free(lhs), z_free(below_repeating(t, r, n, options.partial_sum)))
        }
        I7 => only(mes_bivariate(get(Param::R), n)),
        I8 => {
            let r = get(Param::R);
            let lhs = sum_series(n, (1..=n).map(|j| smallest_repeating_term(j, r, n)));
            let rhs = &overpartition_series(n) - &omega_inf(1, r, n);
            both(z_free(lhs), z_free(rhs))
        }
        I9 => {
            let (r, m) = (get(Param::R), get(Param::M));
            let lhs = sum_series(n, (1..=m).map(|j| smallest_repeating_term(j, r, n)));
            let rhs = &overpartition_series(n) - &(&omega_fin(1, m, r, n) * &tail_ratio(m + 1, m + 1, n));
            both(z_free(lhs), z_free(rhs))
        }
        I10 => only(maes_bivariate(get(Param::R), n)),
        I11 => only(l_class_closed(get(Param::K), n)),
        I12 => only(f_class_closed(get(Param::K), n)),
        I13 => {
            let (k, m, s, j) = (get(Param::K), get(Param::M), get(Param::S), get(Param::J));
            only(z_times(&[(j - 1, 1), (j, 1)], &theorem_core(k, m, s, j, n)))
        }
        I14 => {
            let (k, m, s, j) = (get(Param::K), get(Param::M), get(Param::S), get(Param::J));
            let plain = z_times(&[(j - 1, 1)], &theorem_core(k, m, s, j, n));
            if s == k {
                only(&plain + &gf_overlined_closed(k, m, j, n))
            } else {
                only(plain)
            }
        }
        I15 => {
            let lhs = sum_poly(
                n,
                (0..)
                    .take_while(|&j| c2(j) <= n)
                    .map(|j| z_times(&[(j, 1)], &(&QSeries::monomial(c2(j), 1, n) * &inv_poch(j, n)))),
            );
            let rhs = zq_pochhammer(-1, 1, 0, 1, Count::Infinite, n).expect("unit step");
            both(lhs, rhs)
        }
        I16 => {
            let (a, b, k) = (get(Param::A), get(Param::B), get(Param::K));
            let lhs = gaussian_binomial_trunc(a, b, k, n);
            let rhs = &gaussian_binomial_trunc(a - 1, b - 1, k, n)
                + &gaussian_binomial_trunc(a - 1, b, k, n).shift(k * b);
            both(z_free(lhs), z_free(rhs))
        }
        I17 => {
            let (j, k) = (get(Param::J), get(Param::K));
            let lhs = sum_series(
                n,
                (j..)
                    .take_while(|&m| k * (m - j) <= n)
                    .map(|m| gaussian_binomial_trunc(m - 1, j - 1, k, n).shift(k * (m - j))),
            );
            let rhs = inv(&q_pochhammer_step(1, k, k, Count::Finite(j), n).expect("positive step"));
            both(z_free(lhs), z_free(rhs))
        }
        I18 => {
            let (k, s) = (get(Param::K), get(Param::S));
            let lhs = euler_sum(k, s, n, &[(-1, 1), (0, 1)]);
            let x = distinct_congruent_closed(k, s, n);
            let rhs = &x.div_z().expect("no constant term") + &x;
            both(lhs, rhs)
        }
        I19 => {
            let (k, s) = (get(Param::K), get(Param::S));
            let lhs = euler_sum(k, s, n, &[(-1, 1)]);
            let rhs = distinct_congruent_closed(k, s, n).div_z().expect("no constant term");
            both(lhs, rhs)
        }
    }
}

/// `z^j q^(k C(j,2) + k m) [m-1, j-1]_k`.
fn gf_overlined_closed(k: usize, m: usize, j: usize, n: usize) -> ZQPoly {
    let e = k * c2(j) + k * m;
    if e > n {
        return ZQPoly::zero(n);
    }
    z_times(&[(j, 1)], &gaussian_binomial_trunc(m - 1, j - 1, k, n).shift(e))
}

/// The combinatorial side of `id`, by exhaustive enumeration.
pub fn brute_force(id: IdentityId, params: &Params, trunc: usize) -> Result<ZQPoly, IdentityError> {
    if !id.has_combinatorial_side() {
        return Err(IdentityError::NoCombinatorialSide(id));
    }
    check_trunc(id, trunc)?;
    let p = resolve_params(id, params)?;
    let n = effective_trunc(id, &p, trunc);
    Ok(build_brute(id, &p, n))
}

fn build_brute(id: IdentityId, p: &Params, n: usize) -> ZQPoly {
    use IdentityId::*;
    let get = |param| p.req(param);
    let count_where = |pred: &dyn Fn(&Overpartition) -> bool| {
        tally_overpartitions(n, |pi, t| {
            if pred(pi) {
                t.add(0, pi.weight(), 1);
            }
        })
    };
    match id {
        I1 | I2 => {
            let r = if id == I1 { 1 } else { get(Param::R) };
            tally_overpartitions(n, |pi, t| t.add(0, pi.weight(), pi.mes(r) as u64))
        }
        I3 => {
            let r = get(Param::R);
            tally_overpartitions(n, |pi, t| t.add(0, pi.weight(), pi.maes(r) as u64))
        }
        I4 => {
            // σ_1 mes minus the k = 0 term, which is the overpartition count
            tally_overpartitions(n, |pi, t| t.add(0, pi.weight(), pi.mes(1) as u64 - 1))
        }
        I5 => count_where(&|_| true),
        I6 => {
            let (r, t) = (get(Param::R), get(Param::N));
            count_where(&|pi| pi.largest_repeating_size(r) < t)
        }
        I7 => {
            let r = get(Param::R);
            tally_overpartitions(n, |pi, t| t.add(pi.mes(r), pi.weight(), 1))
        }
        I8 => {
            let r = get(Param::R);
            count_where(&|pi| pi.smallest_positive_repeating_size(r).is_some())
        }
        I9 => {
            let (r, m) = (get(Param::R), get(Param::M));
            count_where(&|pi| pi.smallest_positive_repeating_size(r).is_some_and(|j| j <= m))
        }
        I10 => {
            let r = get(Param::R);
            tally_overpartitions(n, |pi, t| {
                let v = pi.maes(r);
                if v > 0 {
                    t.add(v, pi.weight(), 1);
                }
            })
        }
        I11 => tally_class(ClassTag::L(get(Param::K)), n),
        I12 => tally_class(ClassTag::F(get(Param::K)), n),
        I13 | I14 => {
            let family = if id == I13 { BasisFamily::Bl } else { BasisFamily::Bf };
            let (plain, over) = basis_sum(family, get(Param::K), get(Param::M), get(Param::S), get(Param::J), n);
            &plain + &over
        }
        I18 => {
            let (marked, plain) = basis_split(BasisFamily::Bl, get(Param::K), get(Param::S), n);
            &marked + &plain
        }
        I19 => basis_split(BasisFamily::Bf, get(Param::K), get(Param::S), n).1,
        I15 | I16 | I17 => unreachable!("no combinatorial side"),
    }
}

/// Appends every coefficient where `lhs` and `rhs` differ.
fn compare(lhs: &ZQPoly, rhs: &ZQPoly, bivariate: bool, out: &mut Vec<Mismatch>) {
    let n = lhs.trunc().min(rhs.trunc());
    let top = lhs.z_degree().into_iter().chain(rhs.z_degree()).max();
    let Some(top) = top else { return };
    for z in 0..=top {
        for q in 0..=n {
            let (a, b) = (lhs.coeff(z, q), rhs.coeff(z, q));
            if a != b {
                out.push(Mismatch {
                    q,
                    z: (bivariate || z > 0).then_some(z),
                    lhs: a,
                    rhs: b,
                });
            }
        }
    }
}

/// Checks `id` at the given parameters and truncation.
pub fn verify(id: IdentityId, params: &Params, trunc: usize) -> Result<VerificationReport, IdentityError> {
    verify_with(id, params, trunc, Options::default())
}

pub fn verify_with(
    id: IdentityId,
    params: &Params,
    trunc: usize,
    options: Options,
) -> Result<VerificationReport, IdentityError> {
    check_trunc(id, trunc)?;
    let p = resolve_params(id, params)?;
    let n = effective_trunc(id, &p, trunc);
    let closed = build_closed(id, &p, n, options);
    let bi = id.is_bivariate();
    let mut mismatches = Vec::new();
    if let Some(lhs) = &closed.lhs {
        compare(lhs, &closed.rhs, bi, &mut mismatches);
    }
    if id.has_combinatorial_side() {
        let brute = build_brute(id, &p, n);
        compare(&brute, &closed.rhs, bi, &mut mismatches);
    }
    extra_checks(id, &p, n, &closed, &mut mismatches);
    let mut seen = std::collections::HashSet::new();
    mismatches.retain(|m| seen.insert(m.clone()));
    Ok(VerificationReport::new(id.to_string(), p, n, mismatches))
}

/// Comparisons beyond the identity itself: discrete moments of the bivariate
/// generators, the auxiliary basis formulas, and the set-level equalities
/// behind the distinct-part identities.
fn extra_checks(id: IdentityId, p: &Params, n: usize, closed: &ClosedForm, out: &mut Vec<Mismatch>) {
    use IdentityId::*;
    let get = |param| p.req(param);
    match id {
        I7 => {
            let r = get(Param::R);
            let sigma = build_brute(I2, &Params::default().with(Param::R, r), n);
            compare(&z_free(closed.rhs.z_moment()), &sigma, false, out);
            compare(&z_free(closed.rhs.at_z_one()), &z_free(overpartition_series(n)), false, out);
        }
        I10 => {
            let r = get(Param::R);
            let sigma = build_brute(I3, &Params::default().with(Param::R, r), n);
            compare(&z_free(closed.rhs.z_moment()), &sigma, false, out);
            let positive = &overpartition_series(n) - &omega_inf(1, r, n);
            compare(&z_free(closed.rhs.at_z_one()), &z_free(positive), false, out);
        }
        I13 => lemma_checks(get(Param::K), get(Param::M), get(Param::S), get(Param::J), n, out),
        I14 => {
            let (k, m, s, j) = (get(Param::K), get(Param::M), get(Param::S), get(Param::J));
            let (plain, over) = basis_sum(BasisFamily::Bf, k, m, s, j, n);
            compare(&plain, &z_times(&[(j - 1, 1)], &theorem_core(k, m, s, j, n)), true, out);
            if s == k {
                compare(&over, &gf_overlined_closed(k, m, j, n), true, out);
                compare(&over, &plain.shift_z(1), true, out);
            } else {
                compare(&over, &ZQPoly::zero(n), true, out);
            }
        }
        I18 => {
            let (k, s) = (get(Param::K), get(Param::S));
            let x = distinct_congruent_closed(k, s, n);
            let (marked, plain) = basis_split(BasisFamily::Bl, k, s, n);
            compare(&marked, &x, true, out);
            compare(&plain, &x.div_z().expect("no constant term"), true, out);
            compare(&distinct_congruent_tally(k, s, n), &x, true, out);
            let chain = theorem_double_sum(k, s, n, &[(-1, 1), (0, 1)], false);
            compare(&chain, closed.lhs.as_ref().expect("two-sided"), true, out);
        }
        I19 => {
            let (k, s) = (get(Param::K), get(Param::S));
            let x = distinct_congruent_closed(k, s, n);
            compare(&distinct_congruent_tally(k, s, n), &x, true, out);
            let chain = theorem_double_sum(k, s, n, &[(-1, 1)], false);
            compare(&chain, closed.lhs.as_ref().expect("two-sided"), true, out);
            if s == k {
                let (marked, _) = basis_split(BasisFamily::Bf, k, s, n);
                compare(&marked, &x, true, out);
                let over_chain = theorem_double_sum(k, s, n, &[(0, 1)], true);
                compare(&over_chain, &x, true, out);
                compare(&euler_sum(k, k, n, &[(0, 1)]), &x, true, out);
            }
        }
        _ => {}
    }
}

/// The three lemmas and the `j = 1` table used for the `L_k` basis
/// polynomials, each compared against the enumerated basis.
fn lemma_checks(k: usize, m: usize, s: usize, j: usize, n: usize, out: &mut Vec<Mismatch>) {
    let parts = k * (m - 1) + s;
    let (plain, over) = basis_sum(BasisFamily::Bl, k, m, s, j, n);
    let zz = [(j - 1, 1), (j, 1)];
    let zero = ZQPoly::zero(n);
    let term = |e: usize, a: usize, b: usize| {
        if e > n || b > a {
            return QSeries::zero(n);
        }
        gaussian_binomial_trunc(a, b, k, n).shift(e)
    };
    if j == 1 {
        let (expect_over, expect_plain) = if parts == 1 {
            (ZQPoly::monomial(1, 1, 1, n), ZQPoly::monomial(0, 1, 1, n))
        } else {
            (zero.clone(), z_times(&[(0, 1), (1, 1)], &QSeries::monomial(parts, 1, n)))
        };
        compare(&over, &expect_over, true, out);
        compare(&plain, &expect_plain, true, out);
    } else if s >= 2 {
        compare(&plain, &z_times(&zz, &theorem_core(k, m, s, j, n)), true, out);
        compare(&over, &zero, true, out);
    } else {
        let e = k * c2(j) + j + k * (m - j);
        compare(&over, &z_times(&zz, &term(e, m - 2, j - 2)), true, out);
        if m > j {
            let e = k * c2(j) + j + k * (m - 1);
            compare(&plain, &z_times(&zz, &term(e, m - 2, j - 1)), true, out);
        } else {
            compare(&plain, &zero, true, out);
        }
    }
}

/// Every `(identity, params)` pair of the default grids, in catalog order.
pub fn catalog_jobs() -> Vec<(IdentityId, Params)> {
    IdentityId::ALL
        .iter()
        .flat_map(|&id| id.default_grid().into_iter().map(move |p| (id, p)))
        .collect()
}

/// Runs the whole catalog concurrently. Reports come back in catalog order.
pub fn verify_all(trunc: usize, options: Options) -> Result<Vec<VerificationReport>, IdentityError> {
    for id in IdentityId::ALL {
        check_trunc(id, trunc)?;
    }
    catalog_jobs()
        .par_iter()
        .map(|(id, p)| verify_with(*id, p, trunc, options))
        .collect()
}

// ---------------------------------------------------------------------------
// conjugation theorems

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// `mes = k` with `j` parts above `k`, against largest repeating size `j`
    /// with `k - 1` parts above `j`.
    Thm2_1,
    /// `maes = k` with `j` parts above `k`, against smallest positive
    /// repeating size `j` with `k + 1` parts at or above `j`.
    Thm2_2,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Thm2_1 => "Thm2_1",
            Theorem::Thm2_2 => "Thm2_2",
        })
    }
}

impl FromStr for Theorem {
    type Err = IdentityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('.', "_").as_str() {
            "thm2_1" => Ok(Theorem::Thm2_1),
            "thm2_2" => Ok(Theorem::Thm2_2),
            _ => Err(IdentityError::UnknownIdentity(s.to_string())),
        }
    }
}

/// Counts keyed by `(k, j)` for the statistic side and the repeating-size
/// side of the theorem.
pub type KeyedCounts = BTreeMap<(usize, usize), u64>;

pub fn theorem_counts(which: Theorem, n: usize, r: usize) -> (KeyedCounts, KeyedCounts) {
    let mut stat_side = KeyedCounts::new();
    let mut repeat_side = KeyedCounts::new();
    enumeration::for_each_overpartition(n, Convention::LastOccurrence, |pi| match which {
        Theorem::Thm2_1 => {
            let k = pi.mes(r);
            let j = pi.parts_of_size_above(k, Bound::Strict);
            *stat_side.entry((k, j)).or_default() += 1;
            let j = pi.largest_repeating_size(r);
            let k = pi.parts_of_size_above(j, Bound::Strict) + 1;
            *repeat_side.entry((k, j)).or_default() += 1;
        }
        Theorem::Thm2_2 => {
            let k = pi.maes(r);
            if k >= 1 {
                let j = pi.parts_of_size_above(k, Bound::Strict);
                if j >= 1 {
                    *stat_side.entry((k, j)).or_default() += 1;
                }
            }
            if let Some(j) = pi.smallest_positive_repeating_size(r) {
                let above = pi.parts_of_size_above(j, Bound::Inclusive);
                if above >= 2 {
                    *repeat_side.entry((above - 1, j)).or_default() += 1;
                }
            }
        }
    });
    (stat_side, repeat_side)
}

/// Compares both sides of the theorem for every realized `(k, j)` at weight
/// `n`. Mismatches carry `j` in the `q` field and `k` in the `z` field.
pub fn theorem_count_check(which: Theorem, n: usize, r: usize) -> Result<VerificationReport, IdentityError> {
    if n > BRUTE_FORCE_GUARD {
        return Err(IdentityError::TruncTooLarge {
            id: which.to_string(),
            trunc: n,
            limit: BRUTE_FORCE_GUARD,
        });
    }
    if r == 0 {
        return Err(IdentityError::InvalidParams {
            id: which.to_string(),
            message: "r must be positive".into(),
        });
    }
    let (stat_side, repeat_side) = theorem_counts(which, n, r);
    let keys: std::collections::BTreeSet<_> = stat_side.keys().chain(repeat_side.keys()).copied().collect();
    let mismatches = keys
        .into_iter()
        .filter_map(|key| {
            let a = stat_side.get(&key).copied().unwrap_or(0);
            let b = repeat_side.get(&key).copied().unwrap_or(0);
            (a != b).then(|| Mismatch {
                q: key.1,
                z: Some(key.0),
                lhs: BigInt::from(a),
                rhs: BigInt::from(b),
            })
        })
        .collect();
    let params = Params::default().with(Param::N, n).with(Param::R, r);
    Ok(VerificationReport::new(which.to_string(), params, n, mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(pairs: &[(Param, usize)]) -> Params {
        pairs.iter().fold(Params::default(), |acc, &(k, v)| acc.with(k, v))
    }

    #[test]
    fn id_parsing() {
        assert_eq!("I2".parse::<IdentityId>().unwrap(), IdentityId::I2);
        assert_eq!("i19".parse::<IdentityId>().unwrap(), IdentityId::I19);
        assert!("I0".parse::<IdentityId>().is_err());
        assert!("I20".parse::<IdentityId>().is_err());
        assert!("I02".parse::<IdentityId>().is_err());
        assert!("X2".parse::<IdentityId>().is_err());
        assert_eq!(IdentityId::I13.to_string(), "I13");
    }

    #[test]
    fn param_resolution() {
        let r = resolve_params(IdentityId::I2, &Params::default()).unwrap();
        assert_eq!(r.r, Some(2));
        assert!(matches!(
            resolve_params(IdentityId::I15, &p(&[(Param::R, 1)])),
            Err(IdentityError::UnexpectedParam { .. })
        ));
        assert!(resolve_params(IdentityId::I13, &p(&[(Param::K, 2), (Param::S, 3)])).is_err());
        assert!(resolve_params(IdentityId::I13, &p(&[(Param::M, 2), (Param::J, 3)])).is_err());
        assert!(resolve_params(IdentityId::I2, &p(&[(Param::R, 0)])).is_err());
    }

    #[test]
    fn spot_coefficients() {
        let c = closed_form(IdentityId::I2, &p(&[(Param::R, 2)]), 10).unwrap();
        assert_eq!(c.rhs.coeff(0, 4), BigInt::from(40));
        let c = closed_form(IdentityId::I3, &p(&[(Param::R, 2)]), 10).unwrap();
        assert_eq!(c.rhs.coeff(0, 6), BigInt::from(42));
        let c = closed_form(IdentityId::I11, &p(&[(Param::K, 2)]), 6).unwrap();
        assert_eq!(c.rhs.at_z_one().coeff(4), BigInt::from(12));
        let b = brute_force(IdentityId::I12, &p(&[(Param::K, 2)]), 4).unwrap();
        assert_eq!(b.at_z_one().coeff(4), BigInt::from(9));
        let b = brute_force(IdentityId::I7, &p(&[(Param::R, 2)]), 4).unwrap();
        assert_eq!(b.coeff(1, 4), BigInt::from(2));
        let b = brute_force(IdentityId::I1, &Params::default(), 0).unwrap();
        assert_eq!(b.coeff(0, 0), BigInt::from(1));
    }

    #[test]
    fn small_verifications_pass() {
        let direct = Options {
            partial_sum: PartialSum::Direct,
            ..Options::default()
        };
        for id in IdentityId::ALL {
            let grid = id.default_grid();
            let report = verify_with(id, &grid[0], 10, direct).unwrap();
            assert!(report.passed(), "{id}: {:?}", &report.mismatches[..report.mismatches.len().min(3)]);
        }
    }

    #[test]
    fn printed_partial_sum_overcounts() {
        let report = verify(IdentityId::I6, &p(&[(Param::R, 1), (Param::N, 2)]), 6).unwrap();
        assert_eq!(
            report.mismatches,
            vec![Mismatch {
                q: 6,
                z: None,
                lhs: BigInt::from(32),
                rhs: BigInt::from(36)
            }]
        );
        let report = verify(IdentityId::I2, &p(&[(Param::R, 1)]), 8).unwrap();
        assert_eq!(report.mismatches[0].q, 8);
        assert_eq!(report.mismatches[0].lhs, BigInt::from(238));
        assert_eq!(report.mismatches[0].rhs, BigInt::from(246));
    }

    #[test]
    fn theorem_example_counts() {
        let (a, b) = theorem_counts(Theorem::Thm2_1, 4, 2);
        assert_eq!(a[&(1, 1)], 2);
        assert_eq!(b[&(1, 1)], 2);
        assert_eq!(a[&(4, 0)], 4);
        assert_eq!(b[&(4, 0)], 4);
        let (a, b) = theorem_counts(Theorem::Thm2_2, 6, 2);
        assert_eq!(a[&(2, 2)], 2);
        assert_eq!(b[&(2, 2)], 2);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            verify(IdentityId::I2, &Params::default(), 41),
            Err(IdentityError::TruncTooLarge { .. })
        ));
        assert!(verify(IdentityId::I15, &Params::default(), 60).is_ok());
        assert!(matches!(
            brute_force(IdentityId::I16, &Params::default(), 5),
            Err(IdentityError::NoCombinatorialSide(_))
        ));
    }

    #[test]
    fn report_json_shape() {
        let r = verify(IdentityId::I13, &p(&[(Param::K, 2), (Param::M, 1), (Param::S, 1), (Param::J, 1)]), 6).unwrap();
        assert!(r.passed());
        assert_eq!(
            r.to_json(),
            r#"{"identity":"I13","params":{"k":2,"m":1,"s":1,"j":1},"trunc":8,"status":"pass","mismatches":[]}"#
        );
        let m = Mismatch {
            q: 3,
            z: None,
            lhs: BigInt::from(5),
            rhs: BigInt::from(-7),
        };
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"q":3,"z":null,"lhs":"5","rhs":"-7"}"#);
    }
}
