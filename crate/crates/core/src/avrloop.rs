//! The AVR control loop: plant and sensor models, the effective
//! unity-feedback plant, the four sensitivity functions, internal stability
//! and gain/phase-margin metrics.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratfun::{poly_roots, FactoredTF, Polynomial, RationalTF};
use crate::sysnorms::NormGrid;

/// First-order-lag AVR benchmark model: amplifier, exciter and generator in
/// series form the plant G(s); the sensor H(s) sits in the feedback path.
///
/// The defaults are the standard AVR benchmark. All eight numbers are
/// configurable through the flat plant file (keys ka, ta, ke, te, kg, tg,
/// ks, ts).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvrModel {
    pub ka: f64,
    pub ta: f64,
    pub ke: f64,
    pub te: f64,
    pub kg: f64,
    pub tg: f64,
    pub ks: f64,
    pub ts: f64,
}

impl Default for AvrModel {
    fn default() -> Self {
        Self {
            ka: 10.0,
            ta: 0.1,
            ke: 1.0,
            te: 0.4,
            kg: 1.0,
            tg: 1.0,
            ks: 1.0,
            ts: 0.01,
        }
    }
}

impl AvrModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("ka", self.ka),
            ("ta", self.ta),
            ("ke", self.ke),
            ("te", self.te),
            ("kg", self.kg),
            ("tg", self.tg),
            ("ks", self.ks),
            ("ts", self.ts),
        ];
        for (name, v) in fields {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "plant parameter {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// G(s) = amplifier * exciter * generator.
    pub fn plant(&self) -> RationalTF {
        let num = Polynomial::constant(self.ka * self.ke * self.kg);
        let den = Polynomial::new(vec![1.0, self.ta])
            .mul(&Polynomial::new(vec![1.0, self.te]))
            .mul(&Polynomial::new(vec![1.0, self.tg]));
        RationalTF::new(num, den).expect("nonzero denominator")
    }

    /// H(s) = sensor lag.
    pub fn sensor(&self) -> RationalTF {
        RationalTF::from_coeffs(vec![self.ks], vec![1.0, self.ts]).expect("nonzero denominator")
    }
}

/// Effective unity-feedback plant `G_eff = G / (1 + C G H - C G)`, expanded
/// over a common denominator with no implicit cancellation.
pub fn effective_plant(g: &RationalTF, h: &RationalTF, c: &RationalTF) -> Result<RationalTF> {
    let cgh = c.mul(g)?.mul(h)?;
    let cg = c.mul(g)?;
    let w = RationalTF::one().add(&cgh)?.sub(&cg)?;
    if w.num().is_zero() {
        return Err(Error::DegenerateLoop);
    }
    g.mul(&w.reciprocal()?).map_err(|e| match e {
        Error::ZeroDenominator => Error::DegenerateLoop,
        other => other,
    })
}

/// The four loop-shaping transfer functions plus factored mirrors for
/// frequency evaluation, all over the closed-loop characteristic polynomial.
#[derive(Debug, Clone)]
pub struct SensitivitySet {
    /// S = 1/(1+L): set-point to tracking error.
    pub s: RationalTF,
    /// T = L/(1+L): complementary sensitivity.
    pub t: RationalTF,
    /// S_d = G/(1+L): load disturbance to output (literal form, with the
    /// original plant G).
    pub s_d: RationalTF,
    /// S_u = C/(1+L): set-point to control signal.
    pub s_u: RationalTF,
    pub s_f: FactoredTF,
    pub t_f: FactoredTF,
    pub s_d_f: FactoredTF,
    pub s_u_f: FactoredTF,
    /// Open loop L = C * G_eff in reduced form.
    pub open_loop: RationalTF,
    pub open_loop_f: FactoredTF,
    /// Roots of the closed-loop characteristic polynomial
    /// `N_C N_G N_H + D_C D_G D_H`.
    pub char_roots: Vec<Complex64>,
}

/// Assembles S, T, S_d and S_u for the loop (G, H, C).
///
/// All four functions share the characteristic polynomial
/// `Q = N_C N_G N_H + D_C D_G D_H` as the common denominator core:
/// with `P = Q - N_C N_G D_H`,
///
/// ```text
/// S = P/Q    T = N_C N_G D_H / Q    S_d = N_G P/(D_G Q)    S_u = N_C P/(D_C Q)
/// ```
///
/// which is the common-denominator expansion of 1/(1+L), L/(1+L), G/(1+L),
/// C/(1+L) for L = C * G_eff. S + T = 1 holds exactly by construction. The
/// S_u denominator keeps the controller's own factors (including an exact
/// integrator origin pole, matched by an exact origin zero of P when the
/// sensor is unity-gain); origin pairs are cancelled explicitly by the norm
/// layer, never here.
pub fn sensitivity_set(g: &RationalTF, h: &RationalTF, c: &RationalTF) -> Result<SensitivitySet> {
    let (ng, dg) = (g.num(), g.den());
    let (nh, dh) = (h.num(), h.den());
    let (nc, dc) = (c.num(), c.den());

    let ncng = nc.mul(ng);
    let ncngnh = ncng.mul(nh);
    let ncngdh = ncng.mul(dh);
    let dcdgdh = dc.mul(dg).mul(dh);

    let q = dcdgdh.add(&ncngnh);
    if q.is_zero() {
        return Err(Error::DegenerateLoop);
    }
    let p = q.sub(&ncngdh);

    let s = RationalTF::new(p.clone(), q.clone())?;
    let t = RationalTF::new(ncngdh.clone(), q.clone())?;
    let s_d = RationalTF::new(ng.mul(&p), dg.mul(&q))?;
    let s_u = RationalTF::new(nc.mul(&p), dc.mul(&q))?;
    let open_loop = RationalTF::new(ncngdh.clone(), p.clone())?;

    let roots_of = |poly: &Polynomial| -> Result<Vec<Complex64>> {
        match poly.degree() {
            None | Some(0) => Ok(Vec::new()),
            Some(_) => poly_roots(poly),
        }
    };
    let r_p = roots_of(&p)?;
    let r_q = roots_of(&q)?;
    let r_nc = roots_of(nc)?;
    let r_dc = roots_of(dc)?;
    let r_ng = roots_of(ng)?;
    let r_dg = roots_of(dg)?;
    let r_dh = roots_of(dh)?;

    let ratio = |a: &Polynomial, b: &Polynomial| a.leading() / b.leading();
    let join = |parts: &[&[Complex64]]| -> Vec<Complex64> {
        let mut v = Vec::new();
        for part in parts {
            v.extend_from_slice(part);
        }
        v
    };

    let s_f = FactoredTF::new(ratio(&p, &q), r_p.clone(), r_q.clone());
    let t_f = FactoredTF::new(ratio(&ncngdh, &q), join(&[&r_nc, &r_ng, &r_dh]), r_q.clone());
    let s_d_f = FactoredTF::new(
        ratio(ng, dg) * ratio(&p, &q),
        join(&[&r_ng, &r_p]),
        join(&[&r_dg, &r_q]),
    );
    let s_u_f = FactoredTF::new(
        ratio(nc, dc) * ratio(&p, &q),
        join(&[&r_nc, &r_p]),
        join(&[&r_dc, &r_q]),
    );
    let open_loop_f = FactoredTF::new(
        ratio(&ncngdh, &p),
        join(&[&r_nc, &r_ng, &r_dh]),
        r_p.clone(),
    );

    Ok(SensitivitySet {
        s,
        t,
        s_d,
        s_u,
        s_f,
        t_f,
        s_d_f,
        s_u_f,
        open_loop,
        open_loop_f,
        char_roots: r_q,
    })
}

/// Internal stability per the characteristic-polynomial criterion: true iff
/// every root of `N_G N_C N_H + D_G D_C D_H` lies strictly inside the open
/// left half-plane (1e-9 guard band).
pub fn internal_stability(g: &RationalTF, c: &RationalTF, h: &RationalTF) -> Result<bool> {
    let num_prod = g.num().mul(c.num()).mul(h.num());
    let den_prod = g.den().mul(c.den()).mul(h.den());
    let char_poly = num_prod.add(&den_prod);
    match char_poly.degree() {
        None => Err(Error::ZeroPolynomial),
        Some(0) => Ok(true), // static loop with nonzero characteristic value
        Some(_) => Ok(poly_roots(&char_poly)?.iter().all(|r| r.re < -1e-9)),
    }
}

/// Classical frequency-domain margins of an open loop.
///
/// Missing crossovers are reported as `None` (and the margin derived from
/// them likewise), not as errors; the crossing counts let constraint logic
/// reject loops with pathological multiple crossings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpmMetrics {
    /// Lowest frequency with |L| = 1 (rad/s).
    pub gain_crossover: Option<f64>,
    /// pi + arg L(j w_gc), radians, from the unwrapped phase.
    pub phase_margin: Option<f64>,
    /// Lowest frequency where the unwrapped phase crosses -pi (rad/s).
    pub phase_crossover: Option<f64>,
    /// 1/|L(j w_pc)| as a plain ratio.
    pub gain_margin: Option<f64>,
    pub gain_crossings: usize,
    pub phase_crossings: usize,
}

/// Scans |L(jw)| and the unwrapped phase over the grid, bisection-refining
/// the lowest gain and phase crossings.
pub fn gpm_metrics(l: &FactoredTF, grid: &NormGrid) -> GpmMetrics {
    let mut freqs = grid.frequencies();
    let mut resp: Vec<Complex64> = freqs.iter().map(|&w| l.eval(w)).collect();
    refine_phase_grid(l, &mut freqs, &mut resp);

    let n = freqs.len();
    let mags: Vec<f64> = resp.iter().map(|v| v.norm()).collect();
    // cumulative unwrap; adjacent jumps are < pi/2 after refinement
    let mut phases = Vec::with_capacity(n);
    let mut phi = resp[0].arg();
    phases.push(phi);
    for k in 1..n {
        phi += wrap_to_pi(resp[k].arg() - resp[k - 1].arg());
        phases.push(phi);
    }

    // gain crossings of |L| = 1
    let mut gain_crossings = 0;
    let mut gain_crossover = None;
    let mut phase_margin = None;
    for k in 1..n {
        let (a, b) = (mags[k - 1] - 1.0, mags[k] - 1.0);
        if a == 0.0 || a * b < 0.0 {
            gain_crossings += 1;
            if gain_crossover.is_none() {
                let w = if a == 0.0 {
                    freqs[k - 1]
                } else {
                    bisect(freqs[k - 1], freqs[k], |w| l.eval(w).norm() - 1.0)
                };
                gain_crossover = Some(w);
                let unwrapped = phases[k - 1] + wrap_to_pi(l.eval(w).arg() - resp[k - 1].arg());
                phase_margin = Some(std::f64::consts::PI + unwrapped);
            }
        }
    }

    // phase crossings of -pi
    let mut phase_crossings = 0;
    let mut phase_crossover = None;
    let mut gain_margin = None;
    let target = -std::f64::consts::PI;
    for k in 1..n {
        let (a, b) = (phases[k - 1] - target, phases[k] - target);
        if a == 0.0 || a * b < 0.0 {
            phase_crossings += 1;
            if phase_crossover.is_none() {
                let base_phase = phases[k - 1];
                let base_arg = resp[k - 1].arg();
                let w = if a == 0.0 {
                    freqs[k - 1]
                } else {
                    bisect(freqs[k - 1], freqs[k], |w| {
                        base_phase + wrap_to_pi(l.eval(w).arg() - base_arg) - target
                    })
                };
                phase_crossover = Some(w);
                gain_margin = Some(1.0 / l.eval(w).norm());
            }
        }
    }

    GpmMetrics {
        gain_crossover,
        phase_margin,
        phase_crossover,
        gain_margin,
        gain_crossings,
        phase_crossings,
    }
}

/// [`gpm_metrics`] for coefficient-form loops.
pub fn gpm_metrics_rational(l: &RationalTF, grid: &NormGrid) -> GpmMetrics {
    let f = FactoredTF::from_rational(l).expect("valid rational function");
    gpm_metrics(&f, grid)
}

/// Inserts midpoints wherever the wrapped phase step exceeds pi/2 so the
/// cumulative unwrap stays unambiguous near rapid-phase regions.
fn refine_phase_grid(l: &FactoredTF, freqs: &mut Vec<f64>, resp: &mut Vec<Complex64>) {
    const MAX_PASSES: usize = 24;
    for _ in 0..MAX_PASSES {
        let mut inserted = false;
        let mut k = 1;
        while k < freqs.len() {
            let step = wrap_to_pi(resp[k].arg() - resp[k - 1].arg()).abs();
            if step > std::f64::consts::FRAC_PI_2 && freqs[k] / freqs[k - 1] > 1.0 + 1e-12 {
                let w = ((freqs[k - 1].ln() + freqs[k].ln()) * 0.5).exp();
                freqs.insert(k, w);
                resp.insert(k, l.eval(w));
                inserted = true;
            } else {
                k += 1;
            }
        }
        if !inserted {
            break;
        }
    }
}

fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = (x + std::f64::consts::PI).rem_euclid(two_pi);
    if y < 0.0 {
        y += two_pi;
    }
    y - std::f64::consts::PI
}

/// Log-frequency bisection on a sign change of `f` over [a, b].
fn bisect(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (mut lo, mut hi) = (a.ln(), b.ln());
    let mut f_lo = f(lo.exp());
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid.exp());
        if f_mid == 0.0 {
            return mid.exp();
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    (0.5 * (lo + hi)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tf(num: Vec<f64>, den: Vec<f64>) -> RationalTF {
        RationalTF::from_coeffs(num, den).unwrap()
    }

    fn pointwise_equal(a: &RationalTF, b: &RationalTF, tol: f64) {
        for k in -24..=24 {
            let w = 10.0f64.powf(k as f64 / 6.0);
            let (va, vb) = (a.eval(w), b.eval(w));
            assert!(
                (va - vb).norm() <= tol * vb.norm().max(1e-30),
                "mismatch at w={w}: {va} vs {vb}"
            );
        }
    }

    #[test]
    fn unity_sensor_collapses() {
        let model = AvrModel::default();
        let g = model.plant();
        let c = tf(vec![0.5, 0.2], vec![0.0, 1.0]);
        let geff = effective_plant(&g, &RationalTF::one(), &c).unwrap();
        pointwise_equal(&geff, &g, 1e-9);
    }

    #[test]
    fn zero_controller_collapses() {
        let model = AvrModel::default();
        let g = model.plant();
        let h = model.sensor();
        let geff = effective_plant(&g, &h, &RationalTF::constant(0.0)).unwrap();
        pointwise_equal(&geff, &g, 1e-9);
    }

    #[test]
    fn static_effective_plant() {
        // G=1, C=1, H=2: G_eff = 1/(1+2-1) = 1/2
        let geff = effective_plant(
            &RationalTF::one(),
            &RationalTF::constant(2.0),
            &RationalTF::one(),
        )
        .unwrap();
        assert_relative_eq!(geff.eval(0.3).re, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn static_loop_sensitivities() {
        // G=C=H=1: L = 1, S = T = 1/2
        let set =
            sensitivity_set(&RationalTF::one(), &RationalTF::one(), &RationalTF::one()).unwrap();
        assert_relative_eq!(set.s.eval(2.0).re, 0.5, max_relative = 1e-12);
        assert_relative_eq!(set.t.eval(2.0).re, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn integrator_loop_sensitivities() {
        // G = 1/s, H = C = 1: S = s/(s+1), T = 1/(s+1)
        let g = tf(vec![1.0], vec![0.0, 1.0]);
        let set = sensitivity_set(&g, &RationalTF::one(), &RationalTF::one()).unwrap();
        let want_s = tf(vec![0.0, 1.0], vec![1.0, 1.0]);
        let want_t = tf(vec![1.0], vec![1.0, 1.0]);
        pointwise_equal(&set.s, &want_s, 1e-12);
        pointwise_equal(&set.t, &want_t, 1e-12);
    }

    #[test]
    fn s_plus_t_is_one() {
        let model = AvrModel::default();
        let c = tf(vec![0.3, 0.8, 0.01], vec![0.0, 1.0, 0.001]);
        let set = sensitivity_set(&model.plant(), &model.sensor(), &c).unwrap();
        for k in -24..=24 {
            let w = 10.0f64.powf(k as f64 / 6.0);
            let sum = set.s.eval(w) + set.t.eval(w);
            assert!((sum - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn factored_mirrors_match() {
        let model = AvrModel::default();
        let c = tf(vec![0.3, 0.8, 0.01], vec![0.0, 1.0, 0.001]);
        let set = sensitivity_set(&model.plant(), &model.sensor(), &c).unwrap();
        for (r, f) in [
            (&set.s, &set.s_f),
            (&set.t, &set.t_f),
            (&set.s_d, &set.s_d_f),
            (&set.s_u, &set.s_u_f),
            (&set.open_loop, &set.open_loop_f),
        ] {
            for k in -18..=18 {
                let w = 10.0f64.powf(k as f64 / 4.5);
                let (va, vb) = (f.eval(w), r.eval(w));
                if vb.norm().is_finite() && vb.norm() > 0.0 {
                    assert!(
                        (va - vb).norm() <= 1e-8 * vb.norm(),
                        "mirror mismatch at w={w}: {va} vs {vb}"
                    );
                }
            }
        }
    }

    #[test]
    fn internal_stability_examples() {
        // G=1/(s+1), C=1, H=1: char = s+2
        let g = tf(vec![1.0], vec![1.0, 1.0]);
        assert!(internal_stability(&g, &RationalTF::one(), &RationalTF::one()).unwrap());

        // hidden unstable cancellation: G=1/(s-1), C=(s-1)/(s+1):
        // char = (s-1) + (s-1)(s+1) = (s-1)(s+2)
        let g = tf(vec![1.0], vec![-1.0, 1.0]);
        let c = tf(vec![-1.0, 1.0], vec![1.0, 1.0]);
        assert!(!internal_stability(&g, &c, &RationalTF::one()).unwrap());

        // stabilized unstable plant: G=1/(s-1), C=4: char = s+3
        let c4 = RationalTF::constant(4.0);
        assert!(internal_stability(&g, &c4, &RationalTF::one()).unwrap());
    }

    #[test]
    fn margins_of_integrator() {
        let l = FactoredTF::new(1.0, vec![], vec![Complex64::new(0.0, 0.0)]);
        let m = gpm_metrics(&l, &NormGrid::default());
        assert_relative_eq!(m.gain_crossover.unwrap(), 1.0, max_relative = 1e-6);
        assert_relative_eq!(
            m.phase_margin.unwrap(),
            std::f64::consts::FRAC_PI_2,
            max_relative = 1e-6
        );
        assert!(m.phase_crossover.is_none());
        assert!(m.gain_margin.is_none());
    }

    #[test]
    fn margins_boundary_case() {
        // L = 8/(s+1)^3: w_gc = w_pc = sqrt(3), Phi_m = 0, G_m = 1
        let p = Complex64::new(-1.0, 0.0);
        let l = FactoredTF::new(8.0, vec![], vec![p, p, p]);
        let m = gpm_metrics(&l, &NormGrid::default());
        let s3 = 3.0f64.sqrt();
        assert_relative_eq!(m.gain_crossover.unwrap(), s3, max_relative = 1e-4);
        assert!(m.phase_margin.unwrap().abs() < 0.05f64.to_radians());
        assert_relative_eq!(m.phase_crossover.unwrap(), s3, max_relative = 1e-4);
        assert_relative_eq!(m.gain_margin.unwrap(), 1.0, max_relative = 1e-4);
    }

    #[test]
    fn margins_third_order() {
        // L = 4/(s+1)^3
        let p = Complex64::new(-1.0, 0.0);
        let l = FactoredTF::new(4.0, vec![], vec![p, p, p]);
        let m = gpm_metrics(&l, &NormGrid::default());
        let wgc = (4.0f64.powf(2.0 / 3.0) - 1.0).sqrt();
        let pm = std::f64::consts::PI - 3.0 * wgc.atan();
        assert_relative_eq!(m.gain_crossover.unwrap(), wgc, max_relative = 1e-4);
        assert!((m.phase_margin.unwrap() - pm).abs() < 0.05f64.to_radians());
        assert_relative_eq!(
            m.phase_crossover.unwrap(),
            3.0f64.sqrt(),
            max_relative = 1e-4
        );
        assert_relative_eq!(m.gain_margin.unwrap(), 2.0, max_relative = 1e-4);
    }

    #[test]
    fn plant_file_schema_round_trip() {
        let model = AvrModel::default();
        let json = serde_json::to_string(&model).unwrap();
        let back: AvrModel = serde_json::from_str(&json).unwrap();
        assert_eq!(model, back);
    }
}
