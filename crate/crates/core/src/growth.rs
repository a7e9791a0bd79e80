//! Exact recognition of eventually-polynomial integer sequences.
//!
//! A counting function such as `n ↦ ℓ(R/I^n)` agrees with a polynomial for
//! `n ≫ 0`. Given a finite window of values we locate the longest suffix on
//! which the `(D+1)`-th forward differences vanish, read the polynomial off
//! in Newton form, and re-express it in the signed shifted-binomial basis
//! used for Hilbert-Samuel, Buchsbaum-Rim and fiber-cone coefficients.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Generalized binomial coefficient `C(x, k) = x(x-1)...(x-k+1)/k!` for any integer `x`.
pub fn binomial(x: i64, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= BigInt::from(x - j as i64);
        den *= BigInt::from(j as i64 + 1);
    }
    num / den
}

/// Ordinary binomial coefficient for non-negative arguments.
pub fn choose(n: usize, k: usize) -> BigInt {
    if k > n {
        BigInt::zero()
    } else {
        binomial(n as i64, k)
    }
}

/// Which shifted-binomial basis the signed coefficients refer to.
///
/// With `D` the degree, `p(n) = Σ_i (-1)^i c_i · C(n + D - i + s, D - i)` where the
/// shift `s` is `-1` for the length-type functions (`ℓ(R/I^n)`, the
/// Buchsbaum-Rim function, the Sally function indexed by `n ↦ ℓ(S_{n-1})`)
/// and `0` for fiber-cone Hilbert functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Convention {
    /// `ℓ(R/I^n)`, degree `d`.
    HilbertSamuel { dim: usize },
    /// `ℓ(S_n(F)/R_n(M))`, degree `d + r - 1`.
    BuchsbaumRim { dim: usize, rank: usize },
    /// `μ(R_n(M))`, degree `d + r - 2`.
    Fiber { dim: usize, rank: usize },
    /// `n ↦ ℓ(S_{n-1})` in dimension two, degree `r`.
    Sally { rank: usize },
}

impl Convention {
    pub fn degree(&self) -> usize {
        match *self {
            Convention::HilbertSamuel { dim } => dim,
            Convention::BuchsbaumRim { dim, rank } => dim + rank - 1,
            Convention::Fiber { dim, rank } => dim + rank - 2,
            Convention::Sally { rank } => rank,
        }
    }

    fn shift(&self) -> i64 {
        match self {
            Convention::Fiber { .. } => 0,
            _ => -1,
        }
    }

    /// The `i`-th basis polynomial evaluated at `n`.
    fn basis(&self, i: usize, n: i64) -> BigInt {
        let d = self.degree();
        binomial(n + (d - i) as i64 + self.shift(), d - i)
    }
}

/// Values `f(n_lo), ..., f(n_hi)` of an integer sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSequenceWindow {
    pub n_lo: i64,
    pub values: Vec<BigInt>,
}

impl IntegerSequenceWindow {
    pub fn new(n_lo: i64, values: Vec<BigInt>) -> Self {
        IntegerSequenceWindow { n_lo, values }
    }

    pub fn from_fn<F: FnMut(i64) -> BigInt>(n_lo: i64, n_hi: i64, f: F) -> Self {
        IntegerSequenceWindow {
            n_lo,
            values: (n_lo..=n_hi).map(f).collect(),
        }
    }

    pub fn n_hi(&self) -> i64 {
        self.n_lo + self.values.len() as i64 - 1
    }

    pub fn value(&self, n: i64) -> Option<&BigInt> {
        usize::try_from(n - self.n_lo).ok().and_then(|i| self.values.get(i))
    }
}

/// An integer-valued polynomial held both in Newton forward-difference form
/// and as signed coefficients in the basis of its convention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomialPolynomial {
    convention: Convention,
    signed: Vec<BigInt>,
    anchor: i64,
    newton: Vec<BigInt>,
}

impl BinomialPolynomial {
    /// Builds the polynomial `Σ (-1)^i c_i B_i(n)` from signed coefficients.
    pub fn from_signed(convention: Convention, coeffs: Vec<BigInt>) -> Result<Self> {
        let degree = convention.degree();
        if coeffs.len() != degree + 1 {
            return Err(Error::ConventionMismatch {
                expected: degree,
                found: coeffs.len().saturating_sub(1),
            });
        }
        let values: Vec<BigInt> = (0..=degree as i64)
            .map(|n| signed_eval(&convention, &coeffs, n))
            .collect();
        Ok(BinomialPolynomial {
            convention,
            signed: coeffs,
            anchor: 0,
            newton: forward_differences(&values),
        })
    }

    fn from_newton(convention: Convention, anchor: i64, newton: Vec<BigInt>) -> Self {
        let signed = newton_to_signed(&convention, anchor, &newton);
        BinomialPolynomial {
            convention,
            signed,
            anchor,
            newton,
        }
    }

    pub fn degree(&self) -> usize {
        self.newton.len() - 1
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Signed coefficients `c_0, ..., c_D` in this polynomial's own convention.
    pub fn signed_coefficients(&self) -> &[BigInt] {
        &self.signed
    }

    pub fn leading(&self) -> &BigInt {
        &self.signed[0]
    }

    /// Anchor `n_0` and differences `Δ^k p(n_0)`.
    pub fn newton_form(&self) -> (i64, &[BigInt]) {
        (self.anchor, &self.newton)
    }

    /// Exact value at `n` through the Newton form.
    pub fn evaluate(&self, n: i64) -> BigInt {
        self.newton
            .iter()
            .enumerate()
            .map(|(k, c)| c * binomial(n - self.anchor, k))
            .sum()
    }

    /// Exact value at `n` through the signed-coefficient form.
    pub fn evaluate_signed(&self, n: i64) -> BigInt {
        signed_eval(&self.convention, &self.signed, n)
    }

    /// The same polynomial `q(n) = p(n + shift)`.
    pub fn translate(&self, shift: i64) -> Self {
        Self::from_newton(self.convention, self.anchor - shift, self.newton.clone())
    }
}

/// Re-expresses `poly` in the basis of `convention`; the degrees must agree.
pub fn to_signed_coefficients(
    poly: &BinomialPolynomial,
    convention: Convention,
) -> Result<Vec<BigInt>> {
    if convention.degree() != poly.degree() {
        return Err(Error::ConventionMismatch {
            expected: convention.degree(),
            found: poly.degree(),
        });
    }
    Ok(newton_to_signed(&convention, poly.anchor, &poly.newton))
}

/// Exact value of `poly` at `n`.
pub fn evaluate(poly: &BinomialPolynomial, n: i64) -> BigInt {
    poly.evaluate(n)
}

fn signed_eval(convention: &Convention, coeffs: &[BigInt], n: i64) -> BigInt {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let term = c * convention.basis(i, n);
            if i % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn forward_differences(values: &[BigInt]) -> Vec<BigInt> {
    let mut row = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while !row.is_empty() {
        out.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// Back-substitution on the triangular system: `Δ^{D-i}` kills every basis
/// element of index `> i` and maps `B_i` to 1.
fn newton_to_signed(convention: &Convention, anchor: i64, newton: &[BigInt]) -> Vec<BigInt> {
    let degree = newton.len() - 1;
    let mut rem: Vec<BigInt> = (0..=degree as i64)
        .map(|j| {
            newton
                .iter()
                .enumerate()
                .map(|(k, c)| c * binomial(j, k))
                .sum()
        })
        .collect();
    let mut signed = Vec::with_capacity(degree + 1);
    for i in 0..=degree {
        let k = degree - i;
        let lead = forward_differences(&rem[..=k])[k].clone();
        for (j, r) in rem.iter_mut().enumerate() {
            *r -= &lead * convention.basis(i, anchor + j as i64);
        }
        signed.push(if i % 2 == 0 { lead } else { -lead });
    }
    debug_assert!(rem.iter().all(|r| r.is_zero()));
    signed
}

/// Result of fitting a window.
#[derive(Clone, Debug)]
pub struct Fit {
    pub polynomial: BinomialPolynomial,
    /// Least `n` in the window from which the sequence agrees with the polynomial.
    pub postulation: i64,
}

/// Fits a polynomial of the convention's degree to the tail of `seq`.
///
/// The agreeing suffix must contain the `D + 1` interpolation points plus at
/// least `verify_window` earlier points, otherwise the window is reported as
/// not yet stabilized.
pub fn fit_polynomial(
    seq: &IntegerSequenceWindow,
    convention: Convention,
    verify_window: usize,
) -> Result<Fit> {
    let degree = convention.degree();
    let len = seq.values.len();
    let not_stable = Error::NotStabilized {
        degree,
        n_max: seq.n_hi().max(0) as usize,
    };
    if verify_window == 0 || len < degree + 1 + verify_window {
        return Err(not_stable);
    }

    let mut row = seq.values.clone();
    for _ in 0..=degree {
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // row[j] = Δ^{D+1} f(n_lo + j) involves f(n_lo + j ..= n_lo + j + D + 1)
    let start = match row.iter().rposition(|v| !v.is_zero()) {
        Some(j) => j + 1,
        None => 0,
    };
    if len - start < degree + 1 + verify_window {
        return Err(not_stable);
    }

    let anchor_idx = len - 1 - degree;
    let newton = forward_differences(&seq.values[anchor_idx..]);
    let polynomial = BinomialPolynomial::from_newton(convention, seq.n_lo + anchor_idx as i64, newton);
    debug_assert!(seq.values[start..]
        .iter()
        .enumerate()
        .all(|(j, v)| *v == polynomial.evaluate(seq.n_lo + (start + j) as i64)));
    Ok(Fit {
        polynomial,
        postulation: seq.n_lo + start as i64,
    })
}

/// True when the leading coefficient has the sign expected of a counting function.
pub fn leading_is_positive(poly: &BinomialPolynomial) -> bool {
    poly.leading().is_positive()
}
