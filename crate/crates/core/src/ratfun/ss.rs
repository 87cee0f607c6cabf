//! Controllable-canonical state-space realization (backend for the Lyapunov
//! H2 oracle).

use nalgebra::{Complex, DMatrix, DVector, RowDVector};
use num_complex::Complex64;

use super::rational::{Properness, RationalTF};
use crate::error::{Error, Result};

/// SISO state-space realization `(A, B, C, D)`.
#[derive(Debug, Clone)]
pub struct StateSpace {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub c: RowDVector<f64>,
    pub d: f64,
}

impl StateSpace {
    pub fn order(&self) -> usize {
        self.a.nrows()
    }

    /// Frequency response `C (jwI - A)^-1 B + D` via a complex solve.
    pub fn eval(&self, omega: f64) -> Complex64 {
        let n = self.order();
        if n == 0 {
            return Complex64::new(self.d, 0.0);
        }
        let jw = Complex::new(0.0, omega);
        let mut m = DMatrix::<Complex<f64>>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex::new(-self.a[(i, j)], 0.0);
            }
            m[(i, i)] += jw;
        }
        let rhs = DVector::from_iterator(n, self.b.iter().map(|&v| Complex::new(v, 0.0)));
        match m.lu().solve(&rhs) {
            Some(x) => {
                let mut acc = Complex::new(self.d, 0.0);
                for i in 0..n {
                    acc += Complex::new(self.c[i], 0.0) * x[i];
                }
                Complex64::new(acc.re, acc.im)
            }
            None => Complex64::new(f64::INFINITY, f64::INFINITY),
        }
    }
}

/// Controllable-canonical realization of a proper transfer function.
///
/// For biproper systems the feedthrough is the leading-coefficient ratio and
/// the remaining strictly proper part feeds C.
pub fn tf_to_ss(h: &RationalTF) -> Result<StateSpace> {
    let properness = h.properness();
    if properness == Properness::Improper {
        return Err(Error::Improper);
    }
    let den = h.den();
    let n = den.degree().ok_or(Error::ZeroDenominator)?;
    let lead = den.leading();

    let d = match properness {
        Properness::Biproper => h.num().leading() / lead,
        _ => 0.0,
    };
    // strictly proper remainder: num - d * den
    let rem = h.num().sub(&den.scale(d));

    if n == 0 {
        return Ok(StateSpace {
            a: DMatrix::zeros(0, 0),
            b: DVector::zeros(0),
            c: RowDVector::zeros(0),
            d,
        });
    }

    let mut a = DMatrix::<f64>::zeros(n, n);
    for i in 0..n - 1 {
        a[(i, i + 1)] = 1.0;
    }
    for j in 0..n {
        a[(n - 1, j)] = -den.coeff(j) / lead;
    }
    let mut b = DVector::<f64>::zeros(n);
    b[n - 1] = 1.0;
    let mut c = RowDVector::<f64>::zeros(n);
    for j in 0..n {
        c[j] = rem.coeff(j) / lead;
    }
    Ok(StateSpace { a, b, c, d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn first_order_canonical() {
        let h = RationalTF::from_coeffs(vec![1.0], vec![1.0, 1.0]).unwrap();
        let ss = tf_to_ss(&h).unwrap();
        assert_eq!(ss.a[(0, 0)], -1.0);
        assert_eq!(ss.b[0], 1.0);
        assert_eq!(ss.c[0], 1.0);
        assert_eq!(ss.d, 0.0);
    }

    #[test]
    fn biproper_feedthrough() {
        // (s+2)/(s+1) = 1 + 1/(s+1)
        let h = RationalTF::from_coeffs(vec![2.0, 1.0], vec![1.0, 1.0]).unwrap();
        let ss = tf_to_ss(&h).unwrap();
        assert_eq!(ss.d, 1.0);
        assert_eq!(ss.c[0], 1.0);
        assert_eq!(ss.a[(0, 0)], -1.0);
    }

    #[test]
    fn improper_rejected() {
        let h = RationalTF::from_coeffs(vec![0.0, 0.0, 1.0], vec![1.0, 1.0]).unwrap();
        assert!(matches!(tf_to_ss(&h), Err(Error::Improper)));
    }

    #[test]
    fn realization_matches_rational_on_grid() {
        // stable order-5 system
        let h = RationalTF::from_coeffs(
            vec![0.4, 2.0, 0.1, 1.5],
            vec![120.0, 154.0, 71.0, 14.0, 7.0, 1.0],
        )
        .unwrap();
        let ss = tf_to_ss(&h).unwrap();
        for k in -30..=30 {
            let w = 10.0f64.powf(k as f64 / 10.0);
            let a = ss.eval(w);
            let b = h.eval(w);
            assert_relative_eq!(a.re, b.re, max_relative = 1e-8, epsilon = 1e-12);
            assert_relative_eq!(a.im, b.im, max_relative = 1e-8, epsilon = 1e-12);
        }
    }
}
