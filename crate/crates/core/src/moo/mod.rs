//! NSGA-II search over controller parameters, the single-objective
//! weighted-sum baseline, and fuzzy best-compromise selection.

mod engine;
mod fuzzy;
mod pareto;

pub use engine::{run_nsga2, run_weighted_sum, EngineConfig, EnginePoint};
pub use fuzzy::{best_compromise, fuzzy_membership, CompromiseReport};
pub use pareto::{crowding_distance, dominates, hypervolume_2d, nondominated_sort};

use serde::{Deserialize, Serialize};

use crate::avrloop::AvrModel;
use crate::error::{Error, Result};
use crate::fracops::{FopidParams, OustaloupConfig, Regime};
use crate::objectives::{evaluate_case, CaseSpec, ObjectiveVector, PENALTY};

/// Optimizer configuration. Defaults follow the reference setup:
/// population 100, 1200 generations, Pareto fraction 0.7, crossover
/// fraction 0.8, mutation fraction 0.2, SBX index 15, mutation index 20.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MooConfig {
    pub population: usize,
    pub generations: usize,
    pub pareto_fraction: f64,
    pub crossover_fraction: f64,
    pub mutation_fraction: f64,
    pub seed: u64,
    pub regime: Regime,
    pub sbx_index: f64,
    pub mutation_index: f64,
}

impl MooConfig {
    pub fn new(regime: Regime) -> Self {
        Self {
            population: 100,
            generations: 1200,
            pareto_fraction: 0.7,
            crossover_fraction: 0.8,
            mutation_fraction: 0.2,
            seed: 0,
            regime,
            sbx_index: 15.0,
            mutation_index: 20.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::InvalidConfig("population must be >= 4".into()));
        }
        if self.generations == 0 {
            return Err(Error::InvalidConfig("generations must be >= 1".into()));
        }
        if !(self.pareto_fraction > 0.0 && self.pareto_fraction <= 1.0) {
            return Err(Error::InvalidConfig("pareto_fraction must be in (0,1]".into()));
        }
        for (name, v) in [
            ("crossover_fraction", self.crossover_fraction),
            ("mutation_fraction", self.mutation_fraction),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{name} must be in [0,1]")));
            }
        }
        Ok(())
    }

    fn engine(&self) -> EngineConfig {
        EngineConfig {
            population: self.population,
            generations: self.generations,
            pareto_fraction: self.pareto_fraction,
            crossover_fraction: self.crossover_fraction,
            mutation_fraction: self.mutation_fraction,
            sbx_index: self.sbx_index,
            mutation_index: self.mutation_index,
            seed: self.seed,
        }
    }
}

/// Population element: genome plus evaluated objectives, NSGA-II rank and
/// crowding distance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Individual {
    pub genome: FopidParams,
    pub objectives: ObjectiveVector,
    pub rank: usize,
    pub crowding: f64,
}

fn to_individual(p: EnginePoint) -> Individual {
    let feasible = !p.objectives.iter().all(|v| *v == PENALTY);
    Individual {
        genome: FopidParams::from_genes(&p.genes),
        objectives: ObjectiveVector {
            values: p.objectives,
            feasible,
            penalty_applied: !feasible,
        },
        rank: p.rank,
        crowding: p.crowding,
    }
}

/// NSGA-II search for one trade-off case; returns the final rank-1 front.
/// Fully deterministic for a given seed, independent of evaluation
/// parallelism.
pub fn nsga2_run(
    spec: &CaseSpec,
    cfg: &MooConfig,
    model: &AvrModel,
    ora: &OustaloupConfig,
) -> Result<Vec<Individual>> {
    cfg.validate()?;
    if cfg.regime != spec.regime {
        return Err(Error::InvalidConfig(
            "optimizer regime differs from the case regime".into(),
        ));
    }
    let bounds = cfg.regime.bounds();
    let eval = |genes: &[f64]| -> Vec<f64> {
        evaluate_case(&FopidParams::from_genes(genes), spec, model, ora).values
    };
    let front = run_nsga2(&eval, &bounds, &cfg.engine());
    Ok(front.into_iter().map(to_individual).collect())
}

/// Equal-weight single-objective baseline for the margin trade-off cases.
/// The returned individual carries `feasible = false` when the whole run
/// never found a feasible point.
pub fn soo_weighted_run(
    spec: &CaseSpec,
    cfg: &MooConfig,
    model: &AvrModel,
    ora: &OustaloupConfig,
) -> Result<Individual> {
    cfg.validate()?;
    if cfg.regime != spec.regime {
        return Err(Error::InvalidConfig(
            "optimizer regime differs from the case regime".into(),
        ));
    }
    let bounds = cfg.regime.bounds();
    let eval = |genes: &[f64]| -> Vec<f64> {
        evaluate_case(&FopidParams::from_genes(genes), spec, model, ora).values
    };
    let feasible = |objs: &[f64]| !objs.iter().all(|v| *v == PENALTY);
    let best = run_weighted_sum(&eval, &feasible, &bounds, &cfg.engine());
    Ok(to_individual(best))
}
