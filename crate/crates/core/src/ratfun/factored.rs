//! Gain/zero/pole representation for numerically robust frequency evaluation.
//!
//! Expanded coefficients of rationalized-operator products lose relative
//! precision across the fitting band, so every frequency-domain computation
//! prefers this form; polynomial expansion is reserved for root-based
//! stability analysis.

use num_complex::Complex64;

use super::poly::Polynomial;
use super::rational::{Properness, RationalTF};
use super::roots::poly_roots;
use crate::error::Result;

/// Transfer function as `gain * prod(s - z_i) / prod(s - p_j)`.
///
/// Complex zeros and poles occur in conjugate pairs (real-coefficient
/// system).
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredTF {
    pub gain: f64,
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
}

impl FactoredTF {
    pub fn new(gain: f64, zeros: Vec<Complex64>, poles: Vec<Complex64>) -> Self {
        Self { gain, zeros, poles }
    }

    pub fn constant(gain: f64) -> Self {
        Self::new(gain, Vec::new(), Vec::new())
    }

    /// Factors a rational transfer function by rooting both polynomials.
    pub fn from_rational(h: &RationalTF) -> Result<Self> {
        let zeros = match h.num().degree() {
            None | Some(0) => Vec::new(),
            Some(_) => poly_roots(h.num())?,
        };
        let poles = match h.den().degree() {
            None | Some(0) => Vec::new(),
            Some(_) => poly_roots(h.den())?,
        };
        let gain = if h.num().is_zero() {
            0.0
        } else {
            h.num().leading() / h.den().leading()
        };
        Ok(Self::new(gain, zeros, poles))
    }

    /// Expands back to coefficient form.
    pub fn expand(&self) -> Result<RationalTF> {
        let num = if self.gain == 0.0 {
            Polynomial::zero()
        } else {
            Polynomial::from_roots(&self.zeros).scale(self.gain)
        };
        RationalTF::new(num, Polynomial::from_roots(&self.poles))
    }

    /// Frequency response H(jω) evaluated factor by factor.
    pub fn eval(&self, omega: f64) -> Complex64 {
        self.eval_s(Complex64::new(0.0, omega))
    }

    /// Evaluation at an arbitrary complex point, interleaving zero and pole
    /// factors so intermediate products stay in range for high orders.
    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        if self.gain == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut acc = Complex64::new(self.gain, 0.0);
        let n = self.zeros.len().max(self.poles.len());
        for k in 0..n {
            if let Some(z) = self.zeros.get(k) {
                acc *= s - z;
            }
            if let Some(p) = self.poles.get(k) {
                let f = s - p;
                if f == Complex64::new(0.0, 0.0) {
                    return Complex64::new(f64::INFINITY, f64::INFINITY);
                }
                acc /= f;
            }
        }
        acc
    }

    /// deg(den) - deg(num) of the expanded form.
    pub fn relative_degree(&self) -> i64 {
        if self.gain == 0.0 {
            return i64::MAX;
        }
        self.poles.len() as i64 - self.zeros.len() as i64
    }

    pub fn properness(&self) -> Properness {
        match self.relative_degree() {
            d if d > 0 => Properness::StrictlyProper,
            0 => Properness::Biproper,
            _ => Properness::Improper,
        }
    }

    /// Gain magnitude as ω → ∞ (|gain| when biproper, 0 when strictly proper).
    pub fn gain_at_infinity(&self) -> f64 {
        match self.relative_degree() {
            d if d > 0 => 0.0,
            0 => self.gain.abs(),
            _ => f64::INFINITY,
        }
    }

    /// Swaps zeros and poles and inverts the gain.
    pub fn reciprocal(&self) -> Self {
        Self::new(1.0 / self.gain, self.poles.clone(), self.zeros.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        let mut poles = self.poles.clone();
        poles.extend_from_slice(&other.poles);
        Self::new(self.gain * other.gain, zeros, poles)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.gain * c, self.zeros.clone(), self.poles.clone())
    }

    /// Appends an exact pole at the origin (multiplication by 1/s).
    pub fn with_origin_pole(&self) -> Self {
        let mut poles = self.poles.clone();
        poles.push(Complex64::new(0.0, 0.0));
        Self::new(self.gain, self.zeros.clone(), poles)
    }
}
