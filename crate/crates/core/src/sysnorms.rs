//! H-infinity and H2 system norms for stable rational systems.
//!
//! The H-infinity norm is located by a log-spaced grid scan plus
//! golden-section refinement; the H2 norm is frequency-domain quadrature in
//! factored form. A Lyapunov-equation method is kept as an independent H2
//! oracle (it goes through the state-space realization and never touches the
//! frequency grid).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Result as CrateResult;
use crate::ratfun::{poly_roots, tf_to_ss, FactoredTF, Polynomial, RationalTF};

/// Discretization of the frequency axis for norm evaluation.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct NormGrid {
    pub omega_min: f64,
    pub omega_max: f64,
    pub points_per_decade: usize,
    pub refine_tol: f64,
}

impl Default for NormGrid {
    fn default() -> Self {
        Self {
            omega_min: 1e-6,
            omega_max: 1e6,
            points_per_decade: 40,
            refine_tol: 1e-6,
        }
    }
}

impl NormGrid {
    pub fn validate(&self) -> CrateResult<()> {
        if !(self.omega_min > 0.0 && self.omega_min < self.omega_max) {
            return Err(crate::Error::InvalidConfig(
                "require 0 < omega_min < omega_max".into(),
            ));
        }
        if self.points_per_decade < 20 {
            return Err(crate::Error::InvalidConfig(
                "points_per_decade must be >= 20".into(),
            ));
        }
        if !(self.refine_tol > 0.0) {
            return Err(crate::Error::InvalidConfig("refine_tol must be > 0".into()));
        }
        Ok(())
    }

    /// Log-spaced sample frequencies, endpoints included.
    pub fn frequencies(&self) -> Vec<f64> {
        let lo = self.omega_min.log10();
        let hi = self.omega_max.log10();
        let n = ((hi - lo) * self.points_per_decade as f64).ceil() as usize;
        (0..=n)
            .map(|k| 10.0f64.powf(lo + (hi - lo) * k as f64 / n as f64))
            .collect()
    }
}

/// Why a norm is infinite. This is an expected out-of-band outcome, not a
/// floating-point infinity leaking through arithmetic; the penalty policy in
/// the objective layer is applied deliberately on top of it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divergence {
    /// A pole with real part >= -1e-9.
    Unstable,
    /// Relative degree below zero.
    Improper,
    /// H2 of a system whose magnitude does not roll off (biproper or worse).
    NotStrictlyProper,
}

pub type NormResult = Result<f64, Divergence>;

const STABILITY_GUARD: f64 = -1e-9;

fn poles_stable(poles: &[Complex64]) -> bool {
    poles.iter().all(|p| p.re < STABILITY_GUARD)
}

/// Peak gain `max_w |H(jw)|` of a stable proper system in factored form.
///
/// The scan includes w = 0 and the w -> inf limit as candidates; the refined
/// peak never falls below any grid sample.
pub fn hinf_norm(h: &FactoredTF, grid: &NormGrid) -> NormResult {
    debug_assert!(grid.validate().is_ok());
    if h.gain == 0.0 {
        return Ok(0.0);
    }
    if h.relative_degree() < 0 {
        return Err(Divergence::Improper);
    }
    if !poles_stable(&h.poles) {
        return Err(Divergence::Unstable);
    }

    let freqs = grid.frequencies();
    let mags: Vec<f64> = freqs.iter().map(|&w| h.eval(w).norm()).collect();
    let (mut best_idx, mut best) = (0usize, f64::NEG_INFINITY);
    for (i, &m) in mags.iter().enumerate() {
        if m > best {
            best = m;
            best_idx = i;
        }
    }

    let lo = if best_idx == 0 {
        freqs[0]
    } else {
        freqs[best_idx - 1]
    };
    let hi = if best_idx + 1 == freqs.len() {
        freqs[best_idx]
    } else {
        freqs[best_idx + 1]
    };
    let refined = golden_section_max(|w| h.eval(w).norm(), lo, hi, grid.refine_tol);

    let dc = h.eval(0.0).norm();
    let at_inf = h.gain_at_infinity();
    Ok(refined.max(best).max(dc).max(at_inf))
}

/// [`hinf_norm`] for coefficient-form systems (factored internally).
pub fn hinf_norm_rational(h: &RationalTF, grid: &NormGrid) -> NormResult {
    if h.is_zero() {
        return Ok(0.0);
    }
    let f = FactoredTF::from_rational(h).expect("valid rational function");
    hinf_norm(&f, grid)
}

/// Golden-section maximization over log-frequency.
fn golden_section_max(f: impl Fn(f64) -> f64, w_lo: f64, w_hi: f64, tol: f64) -> f64 {
    if w_lo >= w_hi {
        return f(w_lo);
    }
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let (mut a, mut b) = (w_lo.ln(), w_hi.ln());
    let mut c = b - (b - a) * INV_PHI;
    let mut d = a + (b - a) * INV_PHI;
    let mut fc = f(c.exp());
    let mut fd = f(d.exp());
    let mut best = fc.max(fd);
    let mut prev = best;
    // near a smooth peak the value converges quadratically in the bracket
    // width, so require a hard bracket shrink before trusting the
    // successive-estimate test
    for iter in 0..200 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * INV_PHI;
            fc = f(c.exp());
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * INV_PHI;
            fd = f(d.exp());
        }
        let cur = fc.max(fd);
        best = best.max(cur);
        let settled = (cur - prev).abs() <= tol * cur.abs().max(1e-300);
        if (settled && iter >= 30) || (b - a) < 1e-13 {
            break;
        }
        prev = cur;
    }
    best
}

/// `sqrt((1/pi) * int_0^inf |H(jw)|^2 dw)` by adaptive quadrature on a
/// logarithmic grid, extended until the tail estimate drops below 1e-8 of
/// the accumulated integral.
pub fn h2_norm_quadrature(h: &FactoredTF, grid: &NormGrid) -> NormResult {
    debug_assert!(grid.validate().is_ok());
    if h.gain == 0.0 {
        return Ok(0.0);
    }
    if h.relative_degree() <= 0 {
        return Err(Divergence::NotStrictlyProper);
    }
    if !poles_stable(&h.poles) {
        return Err(Divergence::Unstable);
    }

    let mag2 = |w: f64| h.eval(w).norm_sqr();

    // range from the system's own corner frequencies
    let mut w_lo = f64::INFINITY;
    let mut w_hi: f64 = 0.0;
    for r in h.zeros.iter().chain(h.poles.iter()) {
        let m = r.norm();
        if m > 0.0 {
            w_lo = w_lo.min(m);
            w_hi = w_hi.max(m);
        }
    }
    let mut w_lo = if w_lo.is_finite() { w_lo / 100.0 } else { 1e-3 };
    w_lo = w_lo.clamp(1e-12, 1.0);
    let w_hi = (w_hi * 100.0).max(1e2);

    // rough scale for the absolute tolerance
    let rough: f64 = mag2(w_lo) * w_lo + mag2(w_hi.min(1.0).max(w_lo)) + mag2(w_hi) * w_hi;
    let eps = 1e-12 * rough.max(1e-300);

    // head: linear in w over [0, w_lo]
    let mut total = adaptive_simpson(&mag2, 0.0, w_lo, eps, 60);

    // body: log substitution w = e^u, dw = e^u du, one decade at a time
    let f_log = |u: f64| {
        let w = u.exp();
        mag2(w) * w
    };
    let mut u = w_lo.ln();
    let u_hi = w_hi.ln();
    let step = std::f64::consts::LN_10;
    while u < u_hi {
        let next = (u + step).min(u_hi);
        total += adaptive_simpson(&f_log, u, next, eps, 60);
        u = next;
    }

    // tail: assume the slowest admissible rolloff |H|^2 ~ c/w^2, extend by
    // decades until the estimate is negligible
    let mut omega = w_hi;
    let mut tail = mag2(omega) * omega;
    while tail > 1e-8 * total.max(1e-300) && omega < 1e15 {
        let next = omega * 10.0;
        total += adaptive_simpson(&f_log, omega.ln(), next.ln(), eps, 60);
        omega = next;
        tail = mag2(omega) * omega;
    }
    total += tail;

    Ok((total / std::f64::consts::PI).max(0.0).sqrt())
}

/// [`h2_norm_quadrature`] for coefficient-form systems.
pub fn h2_norm_quadrature_rational(h: &RationalTF, grid: &NormGrid) -> NormResult {
    if h.is_zero() {
        return Ok(0.0);
    }
    let f = FactoredTF::from_rational(h).expect("valid rational function");
    h2_norm_quadrature(&f, grid)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, eps, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: usize,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1)
    }
}

/// H2 norm through the continuous Lyapunov equation
/// `A P + P A' + B B' = 0`, `||H||_2 = sqrt(C P C')`.
///
/// Retained as a test oracle for [`h2_norm_quadrature`]; the two methods
/// share no machinery.
pub fn h2_norm_lyapunov(h: &RationalTF) -> NormResult {
    if h.is_zero() {
        return Ok(0.0);
    }
    if h.relative_degree() <= 0 {
        return Err(Divergence::NotStrictlyProper);
    }
    let poles = h.poles().map_err(|_| Divergence::Unstable)?;
    if !poles_stable(&poles) {
        return Err(Divergence::Unstable);
    }

    let ss = tf_to_ss(h).map_err(|_| Divergence::Improper)?;
    let n = ss.order();
    if n == 0 {
        return Ok(0.0);
    }
    // vec(AP) + vec(P A') = (I (x) A + A (x) I) vec(P)
    let eye = DMatrix::<f64>::identity(n, n);
    let m = eye.kronecker(&ss.a) + ss.a.kronecker(&eye);
    let bbt = &ss.b * ss.b.transpose();
    let rhs = DMatrix::from_iterator(n * n, 1, bbt.iter().copied()).scale(-1.0);
    let sol = m.lu().solve(&rhs).ok_or(Divergence::Unstable)?;
    let mut p = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            p[(i, j)] = sol[(j * n + i, 0)];
        }
    }
    // enforce symmetry lost to rounding
    let p = (&p + p.transpose()).scale(0.5);
    let val = (&ss.c * &p * ss.c.transpose())[(0, 0)];
    Ok(val.max(0.0).sqrt())
}

/// Removes exactly- or nearly-cancelling origin zero/pole pairs.
///
/// Pairs with both constant coefficients exactly zero are shifted out
/// symbolically; remaining pairs whose roots have magnitude below `tol` are
/// deflated by synthetic division. Systems with no such pair are returned
/// unchanged.
pub fn cancel_origin(h: &RationalTF, tol: f64) -> RationalTF {
    debug_assert!(tol > 0.0);
    let mut num = h.num().clone();
    let mut den = h.den().clone();

    while !num.is_zero() && num.coeff(0) == 0.0 && den.coeff(0) == 0.0 && den.degree() > Some(0) {
        num = num.shift_down().expect("zero constant term");
        den = den.shift_down().expect("zero constant term");
    }

    loop {
        let (Some(dn), Some(dd)) = (num.degree(), den.degree()) else {
            break;
        };
        if dn < 1 || dd < 1 {
            break;
        }
        let rn = smallest_root(&num);
        let rd = smallest_root(&den);
        match (rn, rd) {
            (Some(zn), Some(zd)) if zn.norm() < tol && zd.norm() < tol => {
                num = num.deflate_real_root(zn.re);
                den = den.deflate_real_root(zd.re);
            }
            _ => break,
        }
    }

    RationalTF::new(num, den).expect("denominator stays nonzero")
}

/// Factored-form counterpart of [`cancel_origin`].
pub fn cancel_origin_factored(f: &FactoredTF, tol: f64) -> FactoredTF {
    let mut zeros: Vec<Complex64> = f.zeros.clone();
    let mut poles: Vec<Complex64> = f.poles.clone();
    loop {
        let zi = zeros.iter().position(|z| z.norm() < tol);
        let pi = poles.iter().position(|p| p.norm() < tol);
        match (zi, pi) {
            (Some(zi), Some(pi)) => {
                zeros.remove(zi);
                poles.remove(pi);
            }
            _ => break,
        }
    }
    FactoredTF::new(f.gain, zeros, poles)
}

fn smallest_root(p: &Polynomial) -> Option<Complex64> {
    poly_roots(p).ok().and_then(|roots| {
        roots
            .into_iter()
            .min_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap())
    })
}
