//! Ratio-of-polynomials transfer functions in monic-denominator normal form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::Polynomial;
use super::roots::poly_roots;
use crate::error::{Error, Result};

/// Properness classification of a rational transfer function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Properness {
    StrictlyProper,
    Biproper,
    Improper,
}

/// Real-rational SISO transfer function `num(s)/den(s)`.
///
/// The denominator is never the zero polynomial and is kept monic; the
/// numerator is scaled to match. No pole-zero cancellation is ever performed
/// implicitly (see `sysnorms::cancel_origin` for the explicit operation).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalTF {
    num: Polynomial,
    den: Polynomial,
}

impl RationalTF {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let lead = den.leading();
        let inv = 1.0 / lead;
        Ok(Self {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    /// Convenience constructor from ascending coefficient lists.
    pub fn from_coeffs(num: impl Into<Vec<f64>>, den: impl Into<Vec<f64>>) -> Result<Self> {
        Self::new(Polynomial::new(num), Polynomial::new(den))
    }

    pub fn constant(c: f64) -> Self {
        Self {
            num: Polynomial::constant(c),
            den: Polynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// deg(den) - deg(num); the zero numerator counts as relative degree +inf,
    /// reported as `i64::MAX`.
    pub fn relative_degree(&self) -> i64 {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => i64::MAX,
            (Some(n), Some(d)) => d as i64 - n as i64,
            (Some(_), None) => unreachable!("denominator invariant"),
        }
    }

    pub fn properness(&self) -> Properness {
        match self.relative_degree() {
            d if d > 0 => Properness::StrictlyProper,
            0 => Properness::Biproper,
            _ => Properness::Improper,
        }
    }

    /// Frequency response H(jω).
    ///
    /// Evaluation exactly on a pole signals infinite magnitude through an
    /// infinite complex value rather than a NaN.
    pub fn eval(&self, omega: f64) -> Complex64 {
        self.eval_s(Complex64::new(0.0, omega))
    }

    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        let d = self.den.eval(s);
        if d == Complex64::new(0.0, 0.0) {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        self.num.eval(s) / d
    }

    /// Gain as ω → ∞: the leading-coefficient ratio for biproper systems,
    /// zero when strictly proper, infinite when improper.
    pub fn gain_at_infinity(&self) -> f64 {
        match self.properness() {
            Properness::StrictlyProper => 0.0,
            Properness::Biproper => self.num.leading() / self.den.leading(),
            Properness::Improper => f64::INFINITY,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn reciprocal(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Denominator roots (the system poles, including any uncancelled ones).
    pub fn poles(&self) -> Result<Vec<Complex64>> {
        poly_roots(&self.den)
    }
}

/// Interconnection kinds for [`tf_connect`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connection {
    Series,
    Parallel,
    Feedback,
}

/// Connects two systems: series `a*b`, parallel `a+b`, or negative feedback
/// `a/(1+a*b)`, always by common-denominator expansion with no implicit
/// cancellation.
pub fn tf_connect(kind: Connection, a: &RationalTF, b: &RationalTF) -> Result<RationalTF> {
    let result = match kind {
        Connection::Series => a.mul(b),
        Connection::Parallel => a.add(b),
        Connection::Feedback => {
            let num = a.num().mul(b.den());
            let den = a.den().mul(b.den()).add(&a.num().mul(b.num()));
            if den.is_zero() {
                return Err(Error::DegenerateLoop);
            }
            RationalTF::new(num, den)
        }
    };
    result.map_err(|e| match e {
        Error::ZeroDenominator => Error::DegenerateLoop,
        other => other,
    })
}

/// Asymptotic stability of the denominator: every root strictly inside the
/// open left half-plane with a 1e-9 guard band. Marginal roots (including the
/// integrator pole at the origin) classify as unstable.
pub fn is_stable(h: &RationalTF) -> Result<bool> {
    stable_roots(&poly_roots_or_static(h)?)
}

/// Stability of a precomputed root set, same boundary convention.
pub fn stable_roots(roots: &[Complex64]) -> Result<bool> {
    Ok(roots.iter().all(|r| r.re < -1e-9))
}

fn poly_roots_or_static(h: &RationalTF) -> Result<Vec<Complex64>> {
    match h.den().degree() {
        None => Err(Error::ZeroDenominator),
        Some(0) => Ok(Vec::new()), // static gain: stable by convention
        Some(_) => poly_roots(h.den()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn monic_normal_form() {
        // 2/(2s+2) normalizes to 1/(s+1)
        let h = RationalTF::from_coeffs(vec![2.0], vec![2.0, 2.0]).unwrap();
        assert_eq!(h.num().coeffs(), &[1.0]);
        assert_eq!(h.den().coeffs(), &[1.0, 1.0]);
    }

    #[test]
    fn normal_form_idempotent() {
        let h = RationalTF::from_coeffs(vec![3.0, 0.5], vec![7.0, 2.0, 4.0]).unwrap();
        let again = RationalTF::new(h.num().clone(), h.den().clone()).unwrap();
        assert_eq!(h, again);
    }

    #[test]
    fn first_order_response() {
        let h = RationalTF::from_coeffs(vec![1.0], vec![1.0, 1.0]).unwrap();
        let v = h.eval(1.0);
        assert_relative_eq!(v.norm(), 1.0 / 2.0f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(v.arg().to_degrees(), -45.0, max_relative = 1e-12);
    }

    #[test]
    fn differentiator_response() {
        let h = RationalTF::from_coeffs(vec![0.0, 1.0], vec![1.0]).unwrap();
        let v = h.eval(10.0);
        assert_relative_eq!(v.norm(), 10.0, max_relative = 1e-12);
        assert_relative_eq!(v.arg().to_degrees(), 90.0, max_relative = 1e-12);
    }

    #[test]
    fn eval_at_pole_signals_infinity() {
        let h = RationalTF::from_coeffs(vec![1.0], vec![1.0, 0.0, 1.0]).unwrap(); // 1/(s^2+1)
        assert!(h.eval(1.0).norm().is_infinite());
    }

    #[test]
    fn properness_classes() {
        let sp = RationalTF::from_coeffs(vec![1.0], vec![1.0, 1.0]).unwrap();
        let bp = RationalTF::from_coeffs(vec![2.0, 1.0], vec![1.0, 1.0]).unwrap();
        let ip = RationalTF::from_coeffs(vec![0.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert_eq!(sp.properness(), Properness::StrictlyProper);
        assert_eq!(bp.properness(), Properness::Biproper);
        assert_eq!(ip.properness(), Properness::Improper);
    }

    #[test]
    fn connect_examples() {
        let integ = RationalTF::from_coeffs(vec![1.0], vec![0.0, 1.0]).unwrap();
        let fb = tf_connect(Connection::Feedback, &integ, &RationalTF::one()).unwrap();
        assert_eq!(fb.num().coeffs(), &[1.0]);
        assert_eq!(fb.den().coeffs(), &[1.0, 1.0]);

        let a = RationalTF::from_coeffs(vec![1.0], vec![1.0, 1.0]).unwrap();
        let b = RationalTF::from_coeffs(vec![1.0], vec![2.0, 1.0]).unwrap();
        let ser = tf_connect(Connection::Series, &a, &b).unwrap();
        assert_eq!(ser.den().coeffs(), &[2.0, 3.0, 1.0]);

        let par = tf_connect(Connection::Parallel, &integ, &RationalTF::one()).unwrap();
        assert_eq!(par.num().coeffs(), &[1.0, 1.0]);
        assert_eq!(par.den().coeffs(), &[0.0, 1.0]);
    }

    #[test]
    fn degenerate_feedback_detected() {
        // a = -1 (static), b = 1: 1 + ab = 0 identically
        let a = RationalTF::constant(-1.0);
        assert_eq!(
            tf_connect(Connection::Feedback, &a, &RationalTF::one()),
            Err(Error::DegenerateLoop)
        );
    }

    #[test]
    fn stability_boundary() {
        let stable = RationalTF::from_coeffs(vec![1.0], vec![1.0, 1.0]).unwrap();
        let unstable = RationalTF::from_coeffs(vec![1.0], vec![-1.0, 1.0]).unwrap();
        let integrator = RationalTF::from_coeffs(vec![1.0], vec![0.0, 1.0]).unwrap();
        assert!(is_stable(&stable).unwrap());
        assert!(!is_stable(&unstable).unwrap());
        assert!(!is_stable(&integrator).unwrap());
        assert!(is_stable(&RationalTF::constant(2.0)).unwrap());
    }
}
