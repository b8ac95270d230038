//! Elitist real-coded genetic algorithm over the stack parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::config::{OptimizerSettings, RunConfig};
use crate::consts::{omega_from_ghz, omega_from_um};
use crate::dispersion::{local_table, pump_beta, ModeSpec, PhaseMismatch};
use crate::error::{Error, Result};
use crate::modesolver::{LayerStack, ModeSolver};

/// Number of genes: t_c, t_1, t_2, x_c, x_1, x_2, W.
pub const GENES: usize = 7;
/// Samples of the narrow dispersion tables used per fitness evaluation.
pub const LOCAL_TABLE_SAMPLES: usize = 7;
/// Half span of the narrow tables, GHz.
pub const LOCAL_TABLE_HALF_SPAN_GHZ: f64 = 1500.0;
/// Attempts at drawing an initial population with a feasible member.
pub const INITIAL_ATTEMPTS: usize = 10;

pub const GENE_NAMES: [&str; GENES] = [
    "core_thickness_nm",
    "reflector1_thickness_nm",
    "reflector2_thickness_nm",
    "core_al_fraction",
    "reflector1_al_fraction",
    "reflector2_al_fraction",
    "ridge_width_nm",
];

/// Bounds of the seven genes; the remaining stack fields come from `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSpace {
    bounds: [[f64; 2]; GENES],
    base: LayerStack,
}

impl DesignSpace {
    /// A frozen ridge width pins that gene to the base value.
    pub fn new(
        base: LayerStack,
        mut bounds: [[f64; 2]; GENES],
        freeze_ridge_width: bool,
    ) -> Result<Self> {
        if freeze_ridge_width {
            bounds[6] = [base.ridge_width_nm; 2];
        }
        for (i, [lo, hi]) in bounds.iter().enumerate() {
            let frozen = i == 6 && freeze_ridge_width;
            if !lo.is_finite() || !hi.is_finite() || !(lo < hi || frozen) {
                return Err(Error::Config(format!(
                    "bounds of {} must be finite with lower < upper, got [{lo}, {hi}]",
                    GENE_NAMES[i]
                )));
            }
            if !(*lo > 0.0) {
                return Err(Error::Config(format!(
                    "lower bound of {} must be positive",
                    GENE_NAMES[i]
                )));
            }
            if (3..6).contains(&i) && *hi > 1.0 {
                return Err(Error::Config(format!(
                    "upper bound of {} exceeds 1",
                    GENE_NAMES[i]
                )));
            }
        }
        Ok(Self { bounds, base })
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        Self::new(
            config.stack.clone(),
            config.gene_bounds().as_array(),
            config.optimizer.freeze_ridge_width,
        )
    }

    pub fn bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    pub fn base(&self) -> &LayerStack {
        &self.base
    }

    pub fn genes_of(stack: &LayerStack) -> [f64; GENES] {
        [
            stack.core.thickness_nm,
            stack.reflector[0].thickness_nm,
            stack.reflector[1].thickness_nm,
            stack.core.al_fraction,
            stack.reflector[0].al_fraction,
            stack.reflector[1].al_fraction,
            stack.ridge_width_nm,
        ]
    }

    pub fn stack(&self, genes: &[f64]) -> LayerStack {
        let mut s = self.base.clone();
        s.core.thickness_nm = genes[0];
        s.reflector[0].thickness_nm = genes[1];
        s.reflector[1].thickness_nm = genes[2];
        s.core.al_fraction = genes[3];
        s.reflector[0].al_fraction = genes[4];
        s.reflector[1].al_fraction = genes[5];
        s.ridge_width_nm = genes[6];
        s
    }
}

/// Something to minimize over a box.
pub trait Objective: Sync {
    fn bounds(&self) -> &[[f64; 2]];

    /// Lower is better; infeasible points return `f64::INFINITY`.
    fn evaluate(&self, genes: &[f64]) -> f64;
}

/// `Σ (g - c)²`, minimum 0 at `center`.
#[derive(Debug, Clone)]
pub struct Sphere {
    pub bounds: Vec<[f64; 2]>,
    pub center: Vec<f64>,
}

impl Sphere {
    /// `dimension` genes on `[-5.12, 5.12]`, minimum off the box centre.
    pub fn new(dimension: usize) -> Self {
        Self {
            bounds: vec![[-5.12, 5.12]; dimension],
            center: (0..dimension).map(|i| 0.5 * i as f64 - 1.0).collect(),
        }
    }

    /// The classic three-dimensional benchmark.
    pub fn de_jong() -> Self {
        Self::new(3)
    }
}

impl Objective for Sphere {
    fn bounds(&self) -> &[[f64; 2]] {
        &self.bounds
    }

    fn evaluate(&self, genes: &[f64]) -> f64 {
        genes
            .iter()
            .zip(&self.center)
            .map(|(g, c)| (g - c) * (g - c))
            .sum()
    }
}

/// Components of a waveguide design's fitness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fitness {
    /// `|Δk(0)|`, rad/m.
    pub phase_residual: f64,
    /// Group-velocity mismatch, ns/m.
    pub gvm: f64,
    pub value: f64,
}

/// Phase matching and group-velocity matching at a fixed pump wavelength.
#[derive(Debug, Clone)]
pub struct BrwObjective {
    space: DesignSpace,
    config: RunConfig,
    pump_um: f64,
}

impl BrwObjective {
    pub fn new(config: &RunConfig) -> Result<Self> {
        Ok(Self {
            space: DesignSpace::from_config(config)?,
            config: config.clone(),
            pump_um: config.pump.wavelength_nm * 1e-3,
        })
    }

    pub fn space(&self) -> &DesignSpace {
        &self.space
    }

    pub fn pump_um(&self) -> f64 {
        self.pump_um
    }

    /// Degenerate-point evaluation; errors mean the design is infeasible.
    pub fn fitness(&self, genes: &[f64]) -> Result<Fitness> {
        let stack = self.space.stack(genes);
        stack.validate()?;
        let solver = ModeSolver::new(
            self.config.material_model()?,
            stack.clone(),
            self.config.lateral.index_contrast,
        )?;
        let omega_p = omega_from_um(self.pump_um);
        let omega0 = 0.5 * omega_p;
        let half = omega_from_ghz(LOCAL_TABLE_HALF_SPAN_GHZ);
        let signal = local_table(&solver, ModeSpec::SIGNAL, omega0, half, LOCAL_TABLE_SAMPLES)?;
        let idler = local_table(&solver, ModeSpec::IDLER, omega0, half, LOCAL_TABLE_SAMPLES)?;
        let beta_p = pump_beta(&solver, ModeSpec::PUMP, self.pump_um)?;
        let pm = PhaseMismatch::new(omega_p, beta_p, signal, idler)?;
        let phase_residual = pm.delta_k(0.0).abs();
        let gvm = pm.group_velocity_mismatch()?;
        let fringe = 2.0 * std::f64::consts::PI / stack.length_m();
        let o = &self.config.optimizer;
        Ok(Fitness {
            phase_residual,
            gvm,
            value: o.weight_phase * phase_residual / fringe + o.weight_gvm * gvm,
        })
    }

    /// Copy of the run configuration with the stack taken from `genes`.
    pub fn design_config(&self, genes: &[f64]) -> RunConfig {
        let mut c = self.config.clone();
        c.stack = self.space.stack(genes);
        c
    }
}

impl Objective for BrwObjective {
    fn bounds(&self) -> &[[f64; 2]] {
        self.space.bounds()
    }

    fn evaluate(&self, genes: &[f64]) -> f64 {
        match self.fitness(genes) {
            Ok(f) if f.value.is_finite() => f.value,
            Ok(_) => f64::INFINITY,
            Err(e) => {
                log::debug!("infeasible design: {e}");
                f64::INFINITY
            }
        }
    }
}

/// Operator settings of the GA.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaSettings {
    pub population: usize,
    pub generations: usize,
    pub seed: u64,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    pub crossover_eta: f64,
    pub mutation_rate: f64,
    pub mutation_sigma_fraction: f64,
    pub elite_count: usize,
}

impl Default for GaSettings {
    fn default() -> Self {
        Self::from(&OptimizerSettings::default())
    }
}

impl From<&OptimizerSettings> for GaSettings {
    fn from(o: &OptimizerSettings) -> Self {
        Self {
            population: o.population,
            generations: o.generations,
            seed: o.seed,
            tournament_size: o.tournament_size,
            crossover_rate: o.crossover_rate,
            crossover_eta: o.crossover_eta,
            mutation_rate: o.mutation_rate,
            mutation_sigma_fraction: o.mutation_sigma_fraction,
            elite_count: o.elite_count,
        }
    }
}

impl GaSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.population < 8 {
            return bad("population must be at least 8");
        }
        if self.generations < 1 {
            return bad("generations must be at least 1");
        }
        if self.tournament_size < 1 || self.tournament_size > self.population {
            return bad("tournament_size must lie in 1..=population");
        }
        if self.elite_count >= self.population {
            return bad("elite_count must be smaller than the population");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) || !(0.0..=1.0).contains(&self.mutation_rate)
        {
            return bad("crossover_rate and mutation_rate must lie in [0, 1]");
        }
        if !(self.crossover_eta >= 0.0) || !(self.mutation_sigma_fraction >= 0.0) {
            return bad("crossover_eta and mutation_sigma_fraction must be non-negative");
        }
        Ok(())
    }
}

/// Fitness statistics of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub generation: usize,
    /// Best fitness seen so far.
    pub best_fitness: f64,
    /// Mean over the feasible members of this generation.
    pub mean_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult {
    pub best_genes: Vec<f64>,
    pub best_fitness: f64,
    /// Generation 0 is the initial population.
    pub trace: Vec<TraceRow>,
}

impl GaResult {
    pub fn trace_rows(&self) -> Vec<[f64; 3]> {
        self.trace
            .iter()
            .map(|r| [r.generation as f64, r.best_fitness, r.mean_fitness])
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Individual {
    genes: Vec<f64>,
    fitness: f64,
}

fn clamp_genes(genes: &mut [f64], bounds: &[[f64; 2]]) {
    for (g, [lo, hi]) in genes.iter_mut().zip(bounds) {
        *g = g.clamp(*lo, *hi);
    }
}

fn evaluate_all<O: Objective>(objective: &O, genes: Vec<Vec<f64>>) -> Vec<Individual> {
    let fitness: Vec<f64> = genes.par_iter().map(|g| objective.evaluate(g)).collect();
    genes
        .into_iter()
        .zip(fitness)
        .map(|(genes, fitness)| Individual {
            genes,
            fitness: if fitness.is_nan() {
                f64::INFINITY
            } else {
                fitness
            },
        })
        .collect()
}

fn random_genes(rng: &mut ChaCha8Rng, bounds: &[[f64; 2]]) -> Vec<f64> {
    bounds
        .iter()
        .map(|[lo, hi]| {
            if hi > lo {
                rng.random_range(*lo..=*hi)
            } else {
                *lo
            }
        })
        .collect()
}

fn tournament<'a>(rng: &mut ChaCha8Rng, pop: &'a [Individual], k: usize) -> &'a Individual {
    let mut best = &pop[rng.random_range(0..pop.len())];
    for _ in 1..k {
        let c = &pop[rng.random_range(0..pop.len())];
        if c.fitness < best.fitness {
            best = c;
        }
    }
    best
}

/// Simulated binary crossover, gene by gene with probability 1/2.
fn sbx(rng: &mut ChaCha8Rng, a: &mut [f64], b: &mut [f64], eta: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        if !rng.random_bool(0.5) {
            continue;
        }
        let u: f64 = rng.random();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
        };
        let (p, q) = (*x, *y);
        *x = 0.5 * ((1.0 + beta) * p + (1.0 - beta) * q);
        *y = 0.5 * ((1.0 - beta) * p + (1.0 + beta) * q);
    }
}

fn mutate(
    rng: &mut ChaCha8Rng,
    genes: &mut [f64],
    bounds: &[[f64; 2]],
    rate: f64,
    sigma_fraction: f64,
) {
    for (g, [lo, hi]) in genes.iter_mut().zip(bounds) {
        let sd = sigma_fraction * (hi - lo);
        if rng.random_bool(rate) && sd > 0.0 {
            *g += Normal::new(0.0, sd)
                .expect("positive deviation")
                .sample(rng);
        }
    }
}

fn record(generation: usize, pop: &[Individual], best: f64) -> TraceRow {
    let feasible: Vec<f64> = pop
        .iter()
        .map(|i| i.fitness)
        .filter(|f| f.is_finite())
        .collect();
    TraceRow {
        generation,
        best_fitness: best,
        mean_fitness: if feasible.is_empty() {
            f64::INFINITY
        } else {
            feasible.iter().sum::<f64>() / feasible.len() as f64
        },
    }
}

/// Minimizes `objective`. The random stream drives only the sequential
/// operators, so the result does not depend on the thread count.
pub fn run_ga<O: Objective>(objective: &O, settings: &GaSettings) -> Result<GaResult> {
    settings.validate()?;
    let bounds = objective.bounds().to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);

    let mut pop = Vec::new();
    for attempt in 1..=INITIAL_ATTEMPTS {
        let genes = (0..settings.population)
            .map(|_| random_genes(&mut rng, &bounds))
            .collect();
        pop = evaluate_all(objective, genes);
        if pop.iter().any(|i| i.fitness.is_finite()) {
            break;
        }
        log::warn!("initial population {attempt} has no feasible member");
        if attempt == INITIAL_ATTEMPTS {
            return Err(Error::InfeasibleSpace {
                attempts: INITIAL_ATTEMPTS,
            });
        }
    }

    let by_fitness = |a: &Individual, b: &Individual| a.fitness.total_cmp(&b.fitness);
    pop.sort_by(by_fitness);
    let mut best = pop[0].clone();
    let mut trace = vec![record(0, &pop, best.fitness)];

    for generation in 1..=settings.generations {
        let mut children: Vec<Vec<f64>> = Vec::with_capacity(settings.population);
        while children.len() < settings.population - settings.elite_count {
            let mut a = tournament(&mut rng, &pop, settings.tournament_size)
                .genes
                .clone();
            let mut b = tournament(&mut rng, &pop, settings.tournament_size)
                .genes
                .clone();
            if rng.random_bool(settings.crossover_rate) {
                sbx(&mut rng, &mut a, &mut b, settings.crossover_eta);
            }
            for c in [&mut a, &mut b] {
                mutate(
                    &mut rng,
                    c,
                    &bounds,
                    settings.mutation_rate,
                    settings.mutation_sigma_fraction,
                );
                clamp_genes(c, &bounds);
            }
            children.push(a);
            if children.len() < settings.population - settings.elite_count {
                children.push(b);
            }
        }
        let mut next: Vec<Individual> = pop[..settings.elite_count].to_vec();
        next.extend(evaluate_all(objective, children));
        next.sort_by(by_fitness);
        pop = next;
        if pop[0].fitness < best.fitness {
            best = pop[0].clone();
        }
        log::info!("generation {generation}: best {:.6e}", best.fitness);
        trace.push(record(generation, &pop, best.fitness));
    }

    Ok(GaResult {
        best_genes: best.genes,
        best_fitness: best.fitness,
        trace,
    })
}
