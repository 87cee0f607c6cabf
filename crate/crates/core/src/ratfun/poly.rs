//! Dense real-coefficient polynomials in ascending powers of s.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Real polynomial stored as ascending coefficients: `coeffs[k]` multiplies `s^k`.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// (last) coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial from ascending coefficients, trimming trailing zeros.
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        let mut coeffs = coeffs.into();
        while coeffs.last().is_some_and(|c| *c == 0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The monomial s^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficient of s^k (zero beyond the stored length).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect::<Vec<_>>())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(k) + other.coeff(k);
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0.0; n];
        for (k, slot) in out.iter_mut().enumerate() {
            *slot = self.coeff(k) - other.coeff(k);
        }
        Self::new(out)
    }

    /// Polynomial product by coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplies by s^k (exact coefficient shift).
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; k];
        out.extend_from_slice(&self.coeffs);
        Self { coeffs: out }
    }

    /// Divides by s, requiring an exactly zero constant term.
    pub fn shift_down(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.coeffs[0] != 0.0 {
            return Err(Error::InvalidConfig(
                "cannot divide by s: nonzero constant term".into(),
            ));
        }
        Ok(Self::new(self.coeffs[1..].to_vec()))
    }

    /// Horner evaluation at a complex point.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + c;
        }
        acc
    }

    pub fn eval_real(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Deflates a known real root by synthetic division.
    ///
    /// The remainder is discarded; callers are expected to pass a genuine root.
    pub fn deflate_real_root(&self, r: f64) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut out = vec![0.0; n - 1];
        let mut carry = self.coeffs[n - 1];
        for k in (0..n - 1).rev() {
            out[k] = carry;
            carry = self.coeffs[k] + r * carry;
        }
        Self::new(out)
    }

    /// Expands a product of monic linear factors from a root multiset.
    ///
    /// Complex roots must occur in conjugate pairs (within pairing tolerance);
    /// each pair is expanded as a real quadratic so the result stays real.
    /// Roots with an exactly zero imaginary part are treated as real.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut acc = Self::one();
        let mut pending: Vec<Complex64> = Vec::new();
        for &r in roots {
            if r.im == 0.0 {
                acc = acc.mul(&Self::new(vec![-r.re, 1.0]));
                continue;
            }
            // match against an earlier unpaired conjugate
            if let Some(idx) = pending.iter().position(|p| {
                (p.re - r.re).abs() <= 1e-9 * (1.0 + p.re.abs())
                    && (p.im + r.im).abs() <= 1e-9 * (1.0 + p.im.abs())
            }) {
                let p = pending.swap_remove(idx);
                // (s - p)(s - conj p) = s^2 - 2 Re(p) s + |p|^2
                let re = 0.5 * (p.re + r.re);
                let im = 0.5 * (p.im.abs() + r.im.abs());
                acc = acc.mul(&Self::new(vec![re * re + im * im, -2.0 * re, 1.0]));
            } else {
                pending.push(r);
            }
        }
        // unpaired complex leftovers: multiply in complex arithmetic, keep real part
        if !pending.is_empty() {
            let mut cacc: Vec<Complex64> = acc
                .coeffs
                .iter()
                .map(|&c| Complex64::new(c, 0.0))
                .collect();
            if cacc.is_empty() {
                cacc.push(Complex64::new(0.0, 0.0));
            }
            for r in pending {
                let mut next = vec![Complex64::new(0.0, 0.0); cacc.len() + 1];
                for (k, &c) in cacc.iter().enumerate() {
                    next[k] -= c * r;
                    next[k + 1] += c;
                }
                cacc = next;
            }
            return Self::new(cacc.iter().map(|c| c.re).collect::<Vec<_>>());
        }
        acc
    }

    /// Largest absolute coefficient (0 for the zero polynomial).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}
