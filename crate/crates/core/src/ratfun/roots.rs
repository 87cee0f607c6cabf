//! Polynomial root extraction via balanced companion-matrix eigenvalues.
//!
//! Rationalized fractional operators produce polynomials of degree ~15-30
//! whose root magnitudes span the whole fitting band, so the companion
//! matrix is balanced (Parlett-Reinsch) before the eigenvalue sweep.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::poly::Polynomial;
use crate::error::{Error, Result};

/// All roots of `p` with multiplicity.
///
/// Exact origin roots (zero constant terms) are deflated symbolically before
/// the eigenvalue computation, which keeps the integrator structure of
/// realized controllers exact. Returned roots are sorted by real part, then
/// imaginary part, so output order is deterministic.
pub fn poly_roots(p: &Polynomial) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == Some(0) {
        return Err(Error::ConstantPolynomial);
    }

    let mut coeffs = p.coeffs().to_vec();
    let mut roots = Vec::with_capacity(coeffs.len() - 1);
    while coeffs.first() == Some(&0.0) {
        roots.push(Complex64::new(0.0, 0.0));
        coeffs.remove(0);
    }

    let n = coeffs.len() - 1;
    match n {
        0 => {}
        1 => roots.push(Complex64::new(-coeffs[0] / coeffs[1], 0.0)),
        2 => roots.extend(quadratic_roots(coeffs[0], coeffs[1], coeffs[2])),
        _ => {
            let lead = coeffs[n];
            let mut companion = DMatrix::<f64>::zeros(n, n);
            for i in 1..n {
                companion[(i, i - 1)] = 1.0;
            }
            for i in 0..n {
                companion[(i, n - 1)] = -coeffs[i] / lead;
            }
            balance(&mut companion);
            roots.extend(companion.complex_eigenvalues().iter().copied());
        }
    }

    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    Ok(roots)
}

/// Numerically stable quadratic formula.
fn quadratic_roots(c: f64, b: f64, a: f64) -> [Complex64; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let (r1, r2) = if q != 0.0 {
            (q / a, c / q)
        } else {
            (0.0, 0.0)
        };
        [Complex64::new(r1, 0.0), Complex64::new(r2, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

/// Parlett-Reinsch balancing: diagonal similarity scaling by powers of two
/// until every row/column pair is roughly norm-balanced.
fn balance(a: &mut DMatrix<f64>) {
    const RADIX: f64 = 2.0;
    const B2: f64 = RADIX * RADIX;
    let n = a.nrows();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c: f64 = 0.0;
            let mut r: f64 = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= B2;
            }
            g = r * RADIX;
            while c >= g {
                f /= RADIX;
                c /= B2;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// Relative residual used by the root-accuracy oracle:
/// `|p(r)| / (max|coeff| * max(1, |r|)^deg)`.
pub fn root_residual(p: &Polynomial, r: Complex64) -> f64 {
    let deg = p.degree().unwrap_or(0) as i32;
    let scale = p.max_abs_coeff() * r.norm().max(1.0).powi(deg);
    p.eval(r).norm() / scale
}
