//! Generic real-coded NSGA-II engine and a weighted-sum scalar variant.
//!
//! Evaluation is the only parallel phase (order-preserving rayon map);
//! variation and selection consume one independent RNG stream per
//! generation derived from the master seed, so results are bit-identical
//! regardless of the number of evaluation workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::pareto::{crowding_distance, nondominated_sort};

/// Engine-level knobs (problem-independent).
#[derive(Debug, Clone, Copy)]
pub struct EngineConfig {
    pub population: usize,
    pub generations: usize,
    pub pareto_fraction: f64,
    pub crossover_fraction: f64,
    pub mutation_fraction: f64,
    pub sbx_index: f64,
    pub mutation_index: f64,
    pub seed: u64,
}

/// One evaluated search point.
#[derive(Debug, Clone)]
pub struct EnginePoint {
    pub genes: Vec<f64>,
    pub objectives: Vec<f64>,
    pub rank: usize,
    pub crowding: f64,
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

fn clamp(genes: &mut [f64], bounds: &[(f64, f64)]) {
    for (g, (lo, hi)) in genes.iter_mut().zip(bounds.iter()) {
        *g = g.clamp(*lo, *hi);
    }
}

/// Binary tournament on (rank asc, crowding desc); ties keep the first draw.
fn tournament(rng: &mut ChaCha8Rng, pop: &[EnginePoint]) -> usize {
    let i = rng.random_range(0..pop.len());
    let j = rng.random_range(0..pop.len());
    let better_j = pop[j].rank < pop[i].rank
        || (pop[j].rank == pop[i].rank && pop[j].crowding > pop[i].crowding);
    if better_j {
        j
    } else {
        i
    }
}

/// Simulated binary crossover (bounded, one shared u per gene).
fn sbx(
    rng: &mut ChaCha8Rng,
    p1: &[f64],
    p2: &[f64],
    bounds: &[(f64, f64)],
    eta: f64,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    for g in 0..p1.len() {
        let (lo, hi) = bounds[g];
        if rng.random::<f64>() > 0.5 {
            continue;
        }
        let (y1, y2) = if p1[g] < p2[g] {
            (p1[g], p2[g])
        } else {
            (p2[g], p1[g])
        };
        if (y2 - y1).abs() <= 1e-14 || hi <= lo {
            continue;
        }
        let u: f64 = rng.random();
        let spread = |beta: f64| -> f64 {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let beta_low = 1.0 + 2.0 * (y1 - lo) / (y2 - y1);
        let mut child1 = 0.5 * (y1 + y2 - spread(beta_low) * (y2 - y1));
        let beta_high = 1.0 + 2.0 * (hi - y2) / (y2 - y1);
        let mut child2 = 0.5 * (y1 + y2 + spread(beta_high) * (y2 - y1));
        child1 = child1.clamp(lo, hi);
        child2 = child2.clamp(lo, hi);
        if rng.random::<f64>() > 0.5 {
            std::mem::swap(&mut child1, &mut child2);
        }
        c1[g] = child1;
        c2[g] = child2;
    }
    (c1, c2)
}

/// Bounded polynomial mutation, per-gene probability `prob`.
fn polynomial_mutation(
    rng: &mut ChaCha8Rng,
    genes: &mut [f64],
    bounds: &[(f64, f64)],
    eta: f64,
    prob: f64,
) {
    for g in 0..genes.len() {
        let (lo, hi) = bounds[g];
        if rng.random::<f64>() > prob || hi <= lo {
            continue;
        }
        let y = genes[g];
        let delta1 = (y - lo) / (hi - lo);
        let delta2 = (hi - y) / (hi - lo);
        let u: f64 = rng.random();
        let mut_pow = 1.0 / (eta + 1.0);
        let deltaq = if u <= 0.5 {
            let xy = 1.0 - delta1;
            let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
            val.powf(mut_pow) - 1.0
        } else {
            let xy = 1.0 - delta2;
            let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
            1.0 - val.powf(mut_pow)
        };
        genes[g] = (y + deltaq * (hi - lo)).clamp(lo, hi);
    }
}

fn evaluate_all<F>(eval: &F, genomes: Vec<Vec<f64>>) -> Vec<EnginePoint>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    genomes
        .into_par_iter()
        .map(|genes| {
            let objectives = eval(&genes);
            EnginePoint {
                genes,
                objectives,
                rank: 0,
                crowding: 0.0,
            }
        })
        .collect()
}

/// Assigns (rank, crowding) in place from a fresh non-dominated sort.
fn assign_rank_crowding(pop: &mut [EnginePoint]) {
    let objs: Vec<Vec<f64>> = pop.iter().map(|p| p.objectives.clone()).collect();
    for (level, front) in nondominated_sort(&objs).iter().enumerate() {
        let front_objs: Vec<Vec<f64>> = front.iter().map(|&i| objs[i].clone()).collect();
        let dist = crowding_distance(&front_objs);
        for (k, &i) in front.iter().enumerate() {
            pop[i].rank = level + 1;
            pop[i].crowding = dist[k];
        }
    }
}

/// Elitist environmental selection with the rank-1 retention cap.
///
/// Rank-1 survivors are capped at `round(pareto_fraction * population)`,
/// the remainder filling from later fronts by (rank, crowding); if the later
/// fronts cannot fill the population, the rank-1 remainder backfills so the
/// population size is preserved.
fn environmental_selection(
    combined: Vec<EnginePoint>,
    target: usize,
    pareto_fraction: f64,
) -> Vec<EnginePoint> {
    let objs: Vec<Vec<f64>> = combined.iter().map(|p| p.objectives.clone()).collect();
    let fronts = nondominated_sort(&objs);
    let cap = ((pareto_fraction * target as f64).round() as usize).clamp(1, target);

    // order each front by crowding desc (ties by index asc)
    let ordered: Vec<Vec<usize>> = fronts
        .iter()
        .map(|front| {
            let front_objs: Vec<Vec<f64>> = front.iter().map(|&i| objs[i].clone()).collect();
            let dist = crowding_distance(&front_objs);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| {
                dist[b]
                    .partial_cmp(&dist[a])
                    .unwrap_or(std::cmp::Ordering::Equal)
                    .then(front[a].cmp(&front[b]))
            });
            order.into_iter().map(|k| front[k]).collect()
        })
        .collect();

    let mut selected: Vec<usize> = Vec::with_capacity(target);
    for (level, front) in ordered.iter().enumerate() {
        if selected.len() >= target {
            break;
        }
        let room = target - selected.len();
        let want = if level == 0 { cap.min(room) } else { room };
        selected.extend(front.iter().take(want));
    }
    // cap starvation: later fronts could not fill the population
    if selected.len() < target {
        let leftover: Vec<usize> = ordered[0]
            .iter()
            .copied()
            .skip(cap)
            .take(target - selected.len())
            .collect();
        selected.extend(leftover);
    }

    let mut keep = vec![false; combined.len()];
    for &i in &selected {
        keep[i] = true;
    }
    let mut next: Vec<EnginePoint> = combined
        .into_iter()
        .zip(keep)
        .filter_map(|(p, k)| k.then_some(p))
        .collect();
    assign_rank_crowding(&mut next);
    next
}

fn initial_population<F>(eval: &F, bounds: &[(f64, f64)], cfg: &EngineConfig) -> Vec<EnginePoint>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let mut rng = stream_rng(cfg.seed, 0);
    let genomes: Vec<Vec<f64>> = (0..cfg.population)
        .map(|_| bounds.iter().map(|&b| sample_uniform(&mut rng, b)).collect())
        .collect();
    let mut pop = evaluate_all(eval, genomes);
    assign_rank_crowding(&mut pop);
    pop
}

fn make_offspring(
    rng: &mut ChaCha8Rng,
    pop: &[EnginePoint],
    bounds: &[(f64, f64)],
    cfg: &EngineConfig,
) -> Vec<Vec<f64>> {
    let n = cfg.population;
    let gene_count = bounds.len();
    let pm_prob = cfg.mutation_fraction / gene_count as f64;
    let mut children = Vec::with_capacity(n);
    while children.len() < n {
        let a = tournament(rng, pop);
        let b = tournament(rng, pop);
        let (mut c1, mut c2) = if rng.random::<f64>() <= cfg.crossover_fraction {
            sbx(rng, &pop[a].genes, &pop[b].genes, bounds, cfg.sbx_index)
        } else {
            (pop[a].genes.clone(), pop[b].genes.clone())
        };
        polynomial_mutation(rng, &mut c1, bounds, cfg.mutation_index, pm_prob);
        polynomial_mutation(rng, &mut c2, bounds, cfg.mutation_index, pm_prob);
        clamp(&mut c1, bounds);
        clamp(&mut c2, bounds);
        children.push(c1);
        if children.len() < n {
            children.push(c2);
        }
    }
    children
}

/// Runs the NSGA-II loop and returns the final rank-1 set.
pub fn run_nsga2<F>(eval: &F, bounds: &[(f64, f64)], cfg: &EngineConfig) -> Vec<EnginePoint>
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    let mut pop = initial_population(eval, bounds, cfg);
    for generation in 0..cfg.generations {
        let mut rng = stream_rng(cfg.seed, generation as u64 + 1);
        let children = make_offspring(&mut rng, &pop, bounds, cfg);
        let mut combined = pop;
        combined.extend(evaluate_all(eval, children));
        pop = environmental_selection(combined, cfg.population, cfg.pareto_fraction);
    }
    pop.retain(|p| p.rank == 1);
    pop
}

/// Weighted-sum single-objective baseline sharing the variation operators.
///
/// Objective vectors are min-max normalized per generation over the feasible
/// members of the pooled parent+offspring set (equal weights), infeasible
/// members rank worst, and plain scalar elitism truncates. Returns the best
/// individual of the final generation.
pub fn run_weighted_sum<F, P>(
    eval: &F,
    is_feasible: &P,
    bounds: &[(f64, f64)],
    cfg: &EngineConfig,
) -> EnginePoint
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
    P: Fn(&[f64]) -> bool,
{
    let scalar_fitness = |pool: &[EnginePoint]| -> Vec<f64> {
        let m = pool[0].objectives.len();
        let mut mins = vec![f64::INFINITY; m];
        let mut maxs = vec![f64::NEG_INFINITY; m];
        let mut any_feasible = false;
        for p in pool {
            if is_feasible(&p.objectives) {
                any_feasible = true;
                for i in 0..m {
                    mins[i] = mins[i].min(p.objectives[i]);
                    maxs[i] = maxs[i].max(p.objectives[i]);
                }
            }
        }
        pool.iter()
            .map(|p| {
                if !any_feasible || !is_feasible(&p.objectives) {
                    return f64::MAX;
                }
                let mut acc = 0.0;
                for i in 0..m {
                    let range = maxs[i] - mins[i];
                    if range > 0.0 {
                        acc += (p.objectives[i] - mins[i]) / range;
                    }
                }
                acc / m as f64
            })
            .collect()
    };

    let mut pop = initial_population(eval, bounds, cfg);
    let mut fitness = scalar_fitness(&pop);
    for generation in 0..cfg.generations {
        let mut rng = stream_rng(cfg.seed, generation as u64 + 1);
        let gene_count = bounds.len();
        let pm_prob = cfg.mutation_fraction / gene_count as f64;
        let mut children = Vec::with_capacity(cfg.population);
        while children.len() < cfg.population {
            let pick = |rng: &mut ChaCha8Rng| -> usize {
                let i = rng.random_range(0..pop.len());
                let j = rng.random_range(0..pop.len());
                if fitness[j] < fitness[i] {
                    j
                } else {
                    i
                }
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            let (mut c1, mut c2) = if rng.random::<f64>() <= cfg.crossover_fraction {
                sbx(&mut rng, &pop[a].genes, &pop[b].genes, bounds, cfg.sbx_index)
            } else {
                (pop[a].genes.clone(), pop[b].genes.clone())
            };
            polynomial_mutation(&mut rng, &mut c1, bounds, cfg.mutation_index, pm_prob);
            polynomial_mutation(&mut rng, &mut c2, bounds, cfg.mutation_index, pm_prob);
            clamp(&mut c1, bounds);
            clamp(&mut c2, bounds);
            children.push(c1);
            if children.len() < cfg.population {
                children.push(c2);
            }
        }
        let mut pool = pop;
        pool.extend(evaluate_all(eval, children));
        let pool_fitness = scalar_fitness(&pool);
        let mut order: Vec<usize> = (0..pool.len()).collect();
        order.sort_by(|&a, &b| {
            pool_fitness[a]
                .partial_cmp(&pool_fitness[b])
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        order.truncate(cfg.population);
        pop = order.iter().map(|&i| pool[i].clone()).collect();
        fitness = scalar_fitness(&pop);
    }
    let mut best = 0;
    for (i, f) in fitness.iter().enumerate() {
        if *f < fitness[best] {
            best = i;
        }
    }
    let mut out = pop.swap_remove(best);
    out.rank = 1;
    out.crowding = f64::INFINITY;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moo::pareto::hypervolume_2d;

    fn convex_eval(genes: &[f64]) -> Vec<f64> {
        let x = genes[0];
        vec![x * x, (x - 2.0) * (x - 2.0)]
    }

    fn small_cfg(seed: u64) -> EngineConfig {
        EngineConfig {
            population: 60,
            generations: 100,
            pareto_fraction: 0.7,
            crossover_fraction: 0.8,
            mutation_fraction: 0.2,
            sbx_index: 15.0,
            mutation_index: 20.0,
            seed,
        }
    }

    #[test]
    fn determinism_same_seed() {
        let bounds = [(-3.0, 3.0)];
        let cfg = EngineConfig {
            population: 20,
            generations: 15,
            ..small_cfg(9)
        };
        let a = run_nsga2(&convex_eval, &bounds, &cfg);
        let b = run_nsga2(&convex_eval, &bounds, &cfg);
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.genes, y.genes);
            assert_eq!(x.objectives, y.objectives);
        }
    }

    #[test]
    fn determinism_across_worker_counts() {
        let bounds = [(-3.0, 3.0)];
        let cfg = EngineConfig {
            population: 16,
            generations: 10,
            ..small_cfg(3)
        };
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_nsga2(&convex_eval, &bounds, &cfg));
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| run_nsga2(&convex_eval, &bounds, &cfg));
        assert_eq!(single.len(), many.len());
        for (x, y) in single.iter().zip(many.iter()) {
            assert_eq!(x.genes, y.genes);
            assert_eq!(x.objectives, y.objectives);
        }
    }

    #[test]
    fn convex_benchmark_hypervolume() {
        // analytic front: f2 = (sqrt(f1) - 2)^2, f1 in [0, 4]
        let bounds = [(-3.0, 3.0)];
        let front = run_nsga2(&convex_eval, &bounds, &small_cfg(1));
        assert!(!front.is_empty());
        let pts: Vec<Vec<f64>> = front.iter().map(|p| p.objectives.clone()).collect();
        let hv = hypervolume_2d(&pts, (10.0, 10.0));
        let analytic: Vec<Vec<f64>> = (0..=20_000)
            .map(|k| {
                let f1 = 4.0 * k as f64 / 20_000.0;
                vec![f1, (f1.sqrt() - 2.0) * (f1.sqrt() - 2.0)]
            })
            .collect();
        let hv_ref = hypervolume_2d(&analytic, (10.0, 10.0));
        assert!(
            (hv - hv_ref).abs() <= 0.02 * hv_ref,
            "hypervolume {hv} vs analytic {hv_ref}"
        );
    }

    #[test]
    fn genes_stay_in_bounds() {
        let bounds = [(0.0, 10.0), (1.0, 1.0), (0.5, 2.0)];
        let eval = |g: &[f64]| vec![g[0], g[2]];
        let cfg = EngineConfig {
            population: 18,
            generations: 12,
            ..small_cfg(5)
        };
        let front = run_nsga2(&eval, &bounds, &cfg);
        for p in &front {
            for (v, (lo, hi)) in p.genes.iter().zip(bounds.iter()) {
                assert!(v >= lo && v <= hi);
            }
            assert_eq!(p.genes[1], 1.0); // fixed gene never moves
        }
    }

    #[test]
    fn returned_front_is_nondominated() {
        let bounds = [(-3.0, 3.0)];
        let cfg = EngineConfig {
            population: 24,
            generations: 20,
            ..small_cfg(11)
        };
        let front = run_nsga2(&convex_eval, &bounds, &cfg);
        let objs: Vec<Vec<f64>> = front.iter().map(|p| p.objectives.clone()).collect();
        let fronts = nondominated_sort(&objs);
        assert_eq!(fronts.len(), 1);
    }

    #[test]
    fn weighted_sum_lands_on_pareto_set() {
        // the per-generation normalized scalarization settles somewhere on
        // the Pareto set x in [0, 2], interior to the box
        let bounds = [(-3.0, 3.0)];
        let cfg = EngineConfig {
            population: 40,
            generations: 60,
            ..small_cfg(2)
        };
        let best = run_weighted_sum(&convex_eval, &|_: &[f64]| true, &bounds, &cfg);
        assert!(
            (-0.05..=2.05).contains(&best.genes[0]),
            "got {}",
            best.genes[0]
        );
    }
}
