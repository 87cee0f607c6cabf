//! The four H2/H-infinity design objectives, the feasibility/penalty policy
//! and the twelve trade-off case definitions.

use serde::{Deserialize, Serialize};

use crate::avrloop::{gpm_metrics, internal_stability, sensitivity_set, AvrModel, SensitivitySet};
use crate::error::{Error, Result};
use crate::fracops::{fopid_realize, FopidParams, OustaloupConfig, Regime};
use crate::ratfun::{stable_roots, Properness, RationalTF};
use crate::sysnorms::{
    cancel_origin_factored, h2_norm_quadrature, hinf_norm, NormGrid, NormResult,
};

/// Uniform penalty assigned to every objective of an infeasible candidate.
pub const PENALTY: f64 = 1e10;

/// Tolerance for explicit origin pole/zero cancellation ahead of norm
/// evaluation.
pub const ORIGIN_TOL: f64 = 1e-7;

/// Sensitivity/co-sensitivity shaping filters.
#[derive(Debug, Clone)]
pub struct WeightingFilters {
    pub w_s: RationalTF,
    pub w_t: RationalTF,
    w_s_f: crate::ratfun::FactoredTF,
    w_t_f: crate::ratfun::FactoredTF,
}

impl WeightingFilters {
    pub fn new(w_s: RationalTF, w_t: RationalTF) -> Result<Self> {
        let w_s_f = crate::ratfun::FactoredTF::from_rational(&w_s)?;
        let w_t_f = crate::ratfun::FactoredTF::from_rational(&w_t)?;
        Ok(Self {
            w_s,
            w_t,
            w_s_f,
            w_t_f,
        })
    }
}

impl Default for WeightingFilters {
    /// The reference loop-shaping weights:
    /// `W_S = (0.25s + 0.025)/(s^2 + 0.4s + 1000)`,
    /// `W_T = (0.0125s^2 + 1.2025s + 1.25)/(s^2 + 20s + 100)`.
    fn default() -> Self {
        let w_s = RationalTF::from_coeffs(vec![0.025, 0.25], vec![1000.0, 0.4, 1.0]).unwrap();
        let w_t =
            RationalTF::from_coeffs(vec![1.25, 1.2025, 0.0125], vec![100.0, 20.0, 1.0]).unwrap();
        Self::new(w_s, w_t).unwrap()
    }
}

/// Design objective identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Peak of the step-disturbance response map, `||(1/s) S_d||_inf`.
    DisturbanceRejection,
    /// Peak control activity, `||S_u||_inf`.
    ControlEffort,
    /// Weighted sensitivity sum, `||W_S S||_inf + ||W_T T||_inf`.
    WeightedSensitivity,
    /// Step set-point tracking energy, `||(1/s) S||_2`.
    TrackingError,
    /// Phase margin (maximized).
    PhaseMargin,
    /// Gain crossover frequency (maximized).
    GainCrossover,
    /// Gain margin as a ratio (maximized).
    GainMargin,
}

impl Objective {
    pub fn label(self) -> &'static str {
        match self {
            Objective::DisturbanceRejection => "jd",
            Objective::ControlEffort => "ju",
            Objective::WeightedSensitivity => "jst",
            Objective::TrackingError => "jtrack",
            Objective::PhaseMargin => "phase_margin",
            Objective::GainCrossover => "gain_crossover",
            Objective::GainMargin => "gain_margin",
        }
    }

    /// Margins are maximized (stored negated); the norms are minimized.
    pub fn maximized(self) -> bool {
        matches!(
            self,
            Objective::PhaseMargin | Objective::GainCrossover | Objective::GainMargin
        )
    }
}

/// One of the twelve trade-off cases: the objective subset and the
/// controller-structure regime it is searched under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub case_id: u8,
    pub objectives: Vec<Objective>,
    pub regime: Regime,
}

impl CaseSpec {
    pub fn new(case_id: u8, regime: Regime) -> Result<Self> {
        use Objective::*;
        let objectives = match case_id {
            1 => vec![DisturbanceRejection, WeightedSensitivity],
            2 => vec![DisturbanceRejection, TrackingError],
            3 => vec![DisturbanceRejection, ControlEffort],
            4 => vec![WeightedSensitivity, TrackingError],
            5 => vec![ControlEffort, WeightedSensitivity],
            6 => vec![ControlEffort, TrackingError],
            7 => vec![DisturbanceRejection, ControlEffort, WeightedSensitivity],
            8 => vec![DisturbanceRejection, ControlEffort, TrackingError],
            9 => vec![ControlEffort, WeightedSensitivity, TrackingError],
            10 => vec![DisturbanceRejection, WeightedSensitivity, TrackingError],
            11 => vec![PhaseMargin, GainCrossover],
            12 => vec![PhaseMargin, GainMargin],
            other => {
                return Err(Error::InvalidConfig(format!("unknown case {other}")));
            }
        };
        Ok(Self {
            case_id,
            objectives,
            regime,
        })
    }

    /// True for the margin-based cases 11 and 12.
    pub fn is_margin_case(&self) -> bool {
        self.case_id >= 11
    }
}

/// Objective values for one candidate, in the case's objective order
/// (margins negated so everything is minimized), plus the feasibility flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub values: Vec<f64>,
    pub feasible: bool,
    pub penalty_applied: bool,
}

impl ObjectiveVector {
    pub fn feasible(values: Vec<f64>) -> Self {
        Self {
            values,
            feasible: true,
            penalty_applied: false,
        }
    }

    pub fn penalty(len: usize) -> Self {
        Self {
            values: vec![PENALTY; len],
            feasible: false,
            penalty_applied: true,
        }
    }
}

/// `J_d = ||(1/s) S_d||_inf`: the origin factor is composed symbolically
/// before the norm, and exactly-cancelling origin pairs are removed first.
pub fn eval_jd(set: &SensitivitySet, grid: &NormGrid) -> NormResult {
    let composed = set.s_d_f.with_origin_pole();
    hinf_norm(&cancel_origin_factored(&composed, ORIGIN_TOL), grid)
}

/// `J_u = ||S_u||_inf` (the literal control sensitivity keeps the controller
/// integrator pole, matched by an origin zero: cancelled explicitly here).
pub fn eval_ju(set: &SensitivitySet, grid: &NormGrid) -> NormResult {
    hinf_norm(&cancel_origin_factored(&set.s_u_f, ORIGIN_TOL), grid)
}

/// `J_ST = ||W_S S||_inf + ||W_T T||_inf`.
pub fn eval_jst(set: &SensitivitySet, w: &WeightingFilters, grid: &NormGrid) -> NormResult {
    let s_part = hinf_norm(&w.w_s_f.mul(&set.s_f), grid)?;
    let t_part = hinf_norm(&w.w_t_f.mul(&set.t_f), grid)?;
    Ok(s_part + t_part)
}

/// `J_track = ||(1/s) S||_2`; finite only when S carries an origin zero
/// (integrating controller) and the cancelled composite is stable and
/// strictly proper.
pub fn eval_jtrack(set: &SensitivitySet, grid: &NormGrid) -> NormResult {
    let composed = set.s_f.with_origin_pole();
    h2_norm_quadrature(&cancel_origin_factored(&composed, ORIGIN_TOL), grid)
}

/// Full candidate evaluation with the gate chain and penalty policy.
///
/// Gates, in order: controller realization, properness of controller and
/// rationalized open loop, closed-loop stability, internal stability, and
/// for the margin cases the guaranteed-stability constraints (both margins
/// positive, finite phase crossover, `w_pc > w_gc`). Any failure folds into
/// the uniform penalty vector; no error escapes.
pub fn evaluate_case(
    p: &FopidParams,
    spec: &CaseSpec,
    model: &AvrModel,
    cfg: &OustaloupConfig,
) -> ObjectiveVector {
    let m = spec.objectives.len();
    let penalty = || ObjectiveVector::penalty(m);

    let Ok(controller) = fopid_realize(p, cfg) else {
        return penalty();
    };
    if controller.properness == Properness::Improper {
        return penalty();
    }

    let g = model.plant();
    let h = model.sensor();
    let Ok(set) = sensitivity_set(&g, &h, &controller.tf) else {
        return penalty();
    };
    if set.open_loop.properness() == Properness::Improper {
        return penalty();
    }
    if !stable_roots(&set.char_roots).unwrap_or(false) {
        return penalty();
    }
    if !internal_stability(&g, &controller.tf, &h).unwrap_or(false) {
        return penalty();
    }

    let grid = NormGrid::default();
    let mut values = Vec::with_capacity(m);

    if spec.is_margin_case() {
        let gpm = gpm_metrics(&set.open_loop_f, &grid);
        let (Some(w_gc), Some(pm), Some(w_pc), Some(gm)) = (
            gpm.gain_crossover,
            gpm.phase_margin,
            gpm.phase_crossover,
            gpm.gain_margin,
        ) else {
            return penalty();
        };
        // Eq.-style guaranteed-stability constraints: positive margins
        // (gain margin above unity), finite phase crossover above the gain
        // crossover
        if !(pm > 0.0 && gm > 1.0 && gm.is_finite() && w_pc > w_gc) {
            return penalty();
        }
        for obj in &spec.objectives {
            values.push(match obj {
                Objective::PhaseMargin => -pm,
                Objective::GainCrossover => -w_gc,
                Objective::GainMargin => -gm,
                _ => unreachable!("margin case holds only margin objectives"),
            });
        }
        return ObjectiveVector::feasible(values);
    }

    let weights = WeightingFilters::default();
    for obj in &spec.objectives {
        let result = match obj {
            Objective::DisturbanceRejection => eval_jd(&set, &grid),
            Objective::ControlEffort => eval_ju(&set, &grid),
            Objective::WeightedSensitivity => eval_jst(&set, &weights, &grid),
            Objective::TrackingError => eval_jtrack(&set, &grid),
            _ => unreachable!("norm case holds only norm objectives"),
        };
        match result {
            Ok(v) => values.push(v),
            Err(_) => return penalty(),
        }
    }
    ObjectiveVector::feasible(values)
}
