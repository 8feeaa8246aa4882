//! Generational genetic algorithm over hopping chromosomes.
//!
//! Each generation is evaluated, the best individual seen so far is archived,
//! parents are drawn by fitness-proportional (roulette) selection, paired for
//! one-point crossover, mutated gene by gene, and replace the whole
//! population. All random decisions come from one ChaCha stream seeded by
//! `rng_seed`; fitness evaluation is pure, so evaluating in parallel yields
//! bit-identical runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fermion::{evaluate, Chromosome, Hoppings};
use crate::lattice::Lattice;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneRange {
    pub lo: f64,
    pub hi: f64,
}

impl GeneRange {
    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.gen_range(self.lo..=self.hi)
    }
}

impl Default for GeneRange {
    fn default() -> Self {
        GeneRange { lo: -5.0, hi: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub gene_range: GeneRange,
    pub crossover_prob: f64,
    /// Per-gene reset probability; `None` means `1 / chromosome length`.
    pub mutation_rate: Option<f64>,
    pub rng_seed: u64,
    /// Structured chromosome copied into the initial population.
    pub seed_motif: Option<Chromosome>,
    /// Copies of `seed_motif`; `None` fills every slot left after the
    /// all-zero and all-`lo` individuals.
    pub seed_count_motif: Option<usize>,
    /// Individuals initialized with every gene at 0.
    pub seed_count_zero: usize,
    /// Individuals initialized with every gene at `gene_range.lo`.
    pub seed_count_full: usize,
    /// Copy the archived best back into slot 0 of every new generation.
    pub reinject_best: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 500,
            generations: 4000,
            gene_range: GeneRange::default(),
            crossover_prob: 0.8,
            mutation_rate: None,
            rng_seed: 0,
            seed_motif: None,
            seed_count_motif: None,
            seed_count_zero: 0,
            seed_count_full: 0,
            reinject_best: false,
        }
    }
}

impl GaConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|source| Error::Parse {
            what: "GA configuration",
            source,
        })
    }

    pub fn mutation_rate_for(&self, n_genes: usize) -> f64 {
        self.mutation_rate.unwrap_or(1.0 / n_genes.max(1) as f64)
    }

    fn motif_copies(&self) -> usize {
        match (&self.seed_motif, self.seed_count_motif) {
            (None, _) => 0,
            (Some(_), Some(k)) => k,
            (Some(_), None) => self
                .population_size
                .saturating_sub(self.seed_count_zero + self.seed_count_full),
        }
    }

    pub fn validate(&self, n_genes: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 2 {
            return bad(format!("population_size {} < 2", self.population_size));
        }
        let GeneRange { lo, hi } = self.gene_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad(format!("gene range [{lo}, {hi}]"));
        }
        if !(0.0..=1.0).contains(&self.crossover_prob) {
            return bad(format!("crossover_prob {}", self.crossover_prob));
        }
        let rate = self.mutation_rate_for(n_genes);
        if !(0.0..=1.0).contains(&rate) {
            return bad(format!("mutation_rate {rate}"));
        }
        let seeded = self.seed_count_zero + self.seed_count_full + self.motif_copies();
        if seeded > self.population_size {
            return bad(format!(
                "{seeded} seeded individuals exceed population {}",
                self.population_size
            ));
        }
        if self.seed_count_zero > 0 && !self.gene_range.contains(0.0) {
            return bad("all-zero seeds lie outside the gene range".into());
        }
        if let Some(m) = &self.seed_motif {
            if m.len() != n_genes {
                return bad(format!(
                    "motif has {} genes, lattice has {n_genes}",
                    m.len()
                ));
            }
            if !m.as_slice().iter().all(|&t| self.gene_range.contains(t)) {
                return bad("motif genes lie outside the gene range".into());
            }
        }
        Ok(())
    }
}

/// Whether fitness evaluation fans out over the rayon pool. Results do not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    /// Best fitness seen up to and including this generation.
    pub best: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaRunRecord {
    pub lattice: String,
    pub n_sites: usize,
    pub filling: usize,
    pub config: GaConfig,
    pub best: Chromosome,
    pub best_fitness: f64,
    /// Generation in which `best` first appeared (0 is the initial population).
    pub best_generation: usize,
    pub degenerate_best: bool,
    /// One entry per evaluated generation: `generations + 1` entries.
    pub history: Vec<GenerationStats>,
    pub evaluations: u64,
}

/// Initial population: all-zero seeds, then all-`lo` seeds, then motif
/// copies, then uniform random chromosomes.
pub fn init_population<R: Rng + ?Sized>(
    config: &GaConfig,
    lattice: &Lattice,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    let n_genes = lattice.n_edges();
    config.validate(n_genes)?;
    let mut pop = Vec::with_capacity(config.population_size);
    pop.extend((0..config.seed_count_zero).map(|_| Hoppings::uniform(n_genes, 0.0)));
    pop.extend(
        (0..config.seed_count_full).map(|_| Hoppings::uniform(n_genes, config.gene_range.lo)),
    );
    if let Some(m) = &config.seed_motif {
        pop.extend(std::iter::repeat_n(m.clone(), config.motif_copies()));
    }
    while pop.len() < config.population_size {
        let genes = (0..n_genes)
            .map(|_| config.gene_range.sample(rng))
            .collect();
        pop.push(Hoppings::new(genes)?);
    }
    Ok(pop)
}

pub fn fitness(lattice: &Lattice, chromosome: &Chromosome, n: usize) -> Result<Evaluation> {
    let report = evaluate(lattice, chromosome, n)?;
    Ok(Evaluation {
        fitness: report.c_nn,
        degenerate: report.degenerate,
    })
}

/// Average nearest-neighbor concurrence of every individual, in population
/// order.
pub fn evaluate_fitness(
    population: &[Chromosome],
    lattice: &Lattice,
    n: usize,
    execution: Execution,
) -> Result<Vec<Evaluation>> {
    match execution {
        Execution::Serial => population.iter().map(|c| fitness(lattice, c, n)).collect(),
        Execution::Parallel => population
            .par_iter()
            .map(|c| fitness(lattice, c, n))
            .collect(),
    }
}

/// Draws `count` indices with probability proportional to fitness, or
/// uniformly when every fitness is zero.
pub fn select_roulette<R: Rng + ?Sized>(fitness: &[f64], count: usize, rng: &mut R) -> Vec<usize> {
    assert!(!fitness.is_empty(), "selection from an empty population");
    let cumulative: Vec<f64> = fitness
        .iter()
        .scan(0.0, |acc, &f| {
            *acc += f.max(0.0);
            Some(*acc)
        })
        .collect();
    let total = *cumulative.last().unwrap();
    if total <= 0.0 {
        return (0..count)
            .map(|_| rng.gen_range(0..fitness.len()))
            .collect();
    }
    let last_positive = fitness.iter().rposition(|&f| f > 0.0).unwrap();
    (0..count)
        .map(|_| {
            let u = rng.gen::<f64>() * total;
            cumulative.partition_point(|&c| c <= u).min(last_positive)
        })
        .collect()
}

/// One-point crossover at a uniform cut in `1..len`, applied with
/// probability `prob`; otherwise the parents are copied.
pub fn crossover<R: Rng + ?Sized>(
    a: &Chromosome,
    b: &Chromosome,
    rng: &mut R,
    prob: f64,
) -> Result<(Chromosome, Chromosome)> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    let len = a.len();
    if len < 2 || rng.gen::<f64>() >= prob {
        return Ok((a.clone(), b.clone()));
    }
    let cut = rng.gen_range(1..len);
    let (a, b) = (a.as_slice(), b.as_slice());
    let child_a = [&a[..cut], &b[cut..]].concat();
    let child_b = [&b[..cut], &a[cut..]].concat();
    Ok((Hoppings::new(child_a)?, Hoppings::new(child_b)?))
}

/// Resets each gene with probability `rate` to a uniform draw from `range`.
pub fn mutate<R: Rng + ?Sized>(
    chromosome: &mut Chromosome,
    rng: &mut R,
    rate: f64,
    range: GeneRange,
) {
    for gene in chromosome.as_mut_slice() {
        if rng.gen::<f64>() < rate {
            *gene = range.sample(rng);
        }
    }
}

fn generation_stats(evals: &[Evaluation], best: f64) -> GenerationStats {
    let mean = evals.iter().map(|e| e.fitness).sum::<f64>() / evals.len() as f64;
    GenerationStats { best, mean }
}

fn check_finite(evals: &[Evaluation], generation: usize) -> Result<()> {
    match evals.iter().position(|e| !e.fitness.is_finite()) {
        Some(index) => Err(Error::NonFiniteFitness {
            generation,
            index,
            fitness: evals[index].fitness,
        }),
        None => Ok(()),
    }
}

/// Index of the first individual with maximal fitness.
fn fittest(evals: &[Evaluation]) -> usize {
    let mut best = 0;
    for (k, e) in evals.iter().enumerate() {
        if e.fitness > evals[best].fitness {
            best = k;
        }
    }
    best
}

pub fn run_ga(
    lattice: &Lattice,
    n: usize,
    config: &GaConfig,
    execution: Execution,
) -> Result<GaRunRecord> {
    if n > lattice.n_sites() {
        return Err(Error::FillingOutOfRange {
            n,
            n_sites: lattice.n_sites(),
        });
    }
    let n_genes = lattice.n_edges();
    config.validate(n_genes)?;
    let rate = config.mutation_rate_for(n_genes);
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);

    let mut population = init_population(config, lattice, &mut rng)?;
    let mut evals = evaluate_fitness(&population, lattice, n, execution)?;
    check_finite(&evals, 0)?;
    let k = fittest(&evals);
    let mut best = population[k].clone();
    let mut best_eval = evals[k];
    let mut best_generation = 0;
    let mut history = Vec::with_capacity(config.generations + 1);
    history.push(generation_stats(&evals, best_eval.fitness));

    for generation in 1..=config.generations {
        let fitness: Vec<f64> = evals.iter().map(|e| e.fitness).collect();
        let parents = select_roulette(&fitness, config.population_size, &mut rng);
        let mut next = Vec::with_capacity(config.population_size);
        for pair in parents.chunks(2) {
            match *pair {
                [a, b] => {
                    let (ca, cb) = crossover(
                        &population[a],
                        &population[b],
                        &mut rng,
                        config.crossover_prob,
                    )?;
                    next.push(ca);
                    next.push(cb);
                }
                [a] => next.push(population[a].clone()),
                _ => unreachable!(),
            }
        }
        for child in &mut next {
            mutate(child, &mut rng, rate, config.gene_range);
        }
        if config.reinject_best {
            next[0] = best.clone();
        }
        population = next;

        evals = evaluate_fitness(&population, lattice, n, execution)?;
        check_finite(&evals, generation)?;
        let k = fittest(&evals);
        if evals[k].fitness > best_eval.fitness {
            best = population[k].clone();
            best_eval = evals[k];
            best_generation = generation;
        }
        history.push(generation_stats(&evals, best_eval.fitness));
        if generation % 500 == 0 {
            log::debug!(
                "{} n={n} generation {generation}: best {:.6}",
                lattice.name(),
                best_eval.fitness
            );
        }
    }

    Ok(GaRunRecord {
        lattice: lattice.name().to_string(),
        n_sites: lattice.n_sites(),
        filling: n,
        config: config.clone(),
        best,
        best_fitness: best_eval.fitness,
        best_generation,
        degenerate_best: best_eval.degenerate,
        history,
        evaluations: (config.population_size * (config.generations + 1)) as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_ring;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn random_population_in_range() {
        let ring = build_ring(16).unwrap();
        let cfg = GaConfig::default();
        let pop = init_population(&cfg, &ring, &mut rng(1)).unwrap();
        assert_eq!(pop.len(), 500);
        assert!(pop
            .iter()
            .flat_map(|c| c.as_slice())
            .all(|&t| (-5.0..=0.0).contains(&t)));
    }

    #[test]
    fn seeded_population_layout() {
        let ring = build_ring(16).unwrap();
        let cfg = GaConfig {
            population_size: 1200,
            seed_count_zero: 100,
            seed_count_full: 100,
            ..GaConfig::default()
        };
        let pop = init_population(&cfg, &ring, &mut rng(2)).unwrap();
        assert_eq!(pop.len(), 1200);
        assert!(pop[..100]
            .iter()
            .all(|c| c.as_slice().iter().all(|&t| t == 0.0)));
        assert!(pop[100..200]
            .iter()
            .all(|c| c.as_slice().iter().all(|&t| t == -5.0)));
        // continuous draws never hit the seed values exactly
        assert!(pop[200..]
            .iter()
            .all(|c| c.as_slice().iter().any(|&t| t != 0.0 && t != -5.0)));
    }

    #[test]
    fn motif_fills_remaining_slots() {
        let ring = build_ring(4).unwrap();
        let motif = Hoppings::new(vec![-5.0, 0.0, -5.0, 0.0]).unwrap();
        let cfg = GaConfig {
            population_size: 10,
            seed_count_zero: 2,
            seed_count_full: 3,
            seed_motif: Some(motif.clone()),
            ..GaConfig::default()
        };
        let pop = init_population(&cfg, &ring, &mut rng(0)).unwrap();
        assert!(pop[5..].iter().all(|c| *c == motif));
    }

    #[test]
    fn init_is_deterministic() {
        let ring = build_ring(10).unwrap();
        let cfg = GaConfig {
            population_size: 50,
            ..GaConfig::default()
        };
        let a = init_population(&cfg, &ring, &mut rng(9)).unwrap();
        let b = init_population(&cfg, &ring, &mut rng(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation() {
        let ring = build_ring(4).unwrap();
        let cases = [
            GaConfig {
                population_size: 1,
                ..GaConfig::default()
            },
            GaConfig {
                crossover_prob: 1.5,
                ..GaConfig::default()
            },
            GaConfig {
                mutation_rate: Some(-0.1),
                ..GaConfig::default()
            },
            GaConfig {
                population_size: 10,
                seed_count_zero: 6,
                seed_count_full: 6,
                ..GaConfig::default()
            },
            GaConfig {
                seed_motif: Some(Hoppings::uniform(3, -1.0)),
                ..GaConfig::default()
            },
            GaConfig {
                seed_motif: Some(Hoppings::uniform(4, -6.0)),
                ..GaConfig::default()
            },
            GaConfig {
                gene_range: GeneRange { lo: -5.0, hi: -1.0 },
                seed_count_zero: 1,
                ..GaConfig::default()
            },
        ];
        for cfg in cases {
            assert!(
                matches!(
                    init_population(&cfg, &ring, &mut rng(0)),
                    Err(Error::InvalidConfig(_))
                ),
                "{cfg:?}"
            );
        }
    }

    #[test]
    fn roulette_degenerate_cases() {
        let mut r = rng(3);
        assert!(select_roulette(&[1.0, 0.0, 0.0], 1000, &mut r)
            .iter()
            .all(|&k| k == 0));
        assert!(select_roulette(&[0.0, 0.0, 2.0], 1000, &mut r)
            .iter()
            .all(|&k| k == 2));
        let uniform = select_roulette(&[0.0; 4], 4000, &mut r);
        for k in 0..4 {
            let c = uniform.iter().filter(|&&x| x == k).count();
            assert!((800..1200).contains(&c), "{k}: {c}");
        }
    }

    #[test]
    fn roulette_equal_weights_binomial() {
        let draws = 100_000;
        let picks = select_roulette(&[1.0, 1.0], draws, &mut rng(4));
        let zeros = picks.iter().filter(|&&k| k == 0).count() as f64;
        let sigma = (draws as f64 * 0.25).sqrt();
        assert!((zeros - draws as f64 / 2.0).abs() < 3.0 * sigma);
    }

    #[test]
    fn crossover_probability_zero_copies_parents() {
        let a = Hoppings::uniform(6, -1.0);
        let b = Hoppings::uniform(6, -2.0);
        let mut r = rng(5);
        for _ in 0..100 {
            let (ca, cb) = crossover(&a, &b, &mut r, 0.0).unwrap();
            assert_eq!((ca, cb), (a.clone(), b.clone()));
        }
        assert!(matches!(
            crossover(&a, &Hoppings::uniform(5, 0.0), &mut r, 1.0),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn crossover_cut_is_uniform() {
        // chi-square over cut positions 1..L-1, L = 6 (5 bins, 4 dof)
        let len = 6;
        let a = Hoppings::uniform(len, 0.0);
        let b = Hoppings::uniform(len, -1.0);
        let mut r = rng(6);
        let draws = 100_000;
        let mut counts = vec![0usize; len];
        for _ in 0..draws {
            let (ca, _) = crossover(&a, &b, &mut r, 1.0).unwrap();
            let cut = ca.as_slice().iter().position(|&t| t == -1.0).unwrap();
            counts[cut] += 1;
        }
        assert_eq!(counts[0], 0);
        let expected = draws as f64 / (len - 1) as f64;
        let chi2: f64 = counts[1..]
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 99.9th percentile of chi-square with 4 dof
        assert!(chi2 < 18.47, "chi2 = {chi2}");
    }

    #[test]
    fn full_mutation_redraws_every_gene() {
        let parent = Hoppings::uniform(20, -2.5);
        let mut child = parent.clone();
        mutate(&mut child, &mut rng(7), 1.0, GeneRange::default());
        for (c, p) in child.as_slice().iter().zip(parent.as_slice()) {
            assert!((-5.0..=0.0).contains(c));
            assert_ne!(c, p);
        }
    }

    #[test]
    fn zero_generations_keeps_fittest_initial() {
        let ring = build_ring(8).unwrap();
        let cfg = GaConfig {
            population_size: 20,
            generations: 0,
            rng_seed: 11,
            ..GaConfig::default()
        };
        let rec = run_ga(&ring, 4, &cfg, Execution::Serial).unwrap();
        assert_eq!(rec.history.len(), 1);
        assert_eq!(rec.best_generation, 0);
        let pop = init_population(&cfg, &ring, &mut rng(11)).unwrap();
        let evals = evaluate_fitness(&pop, &ring, 4, Execution::Serial).unwrap();
        let max = evals.iter().map(|e| e.fitness).fold(f64::MIN, f64::max);
        assert_eq!(rec.best_fitness, max);
    }

    #[test]
    fn all_zero_chromosome_has_zero_fitness() {
        let ring = build_ring(6).unwrap();
        for n in 0..=6 {
            let e = fitness(&ring, &Hoppings::uniform(6, 0.0), n).unwrap();
            assert_eq!(e.fitness, 0.0);
            assert_eq!(e.degenerate, n > 0 && n < 6);
        }
    }

    #[test]
    fn short_run_invariants() {
        let ring = build_ring(10).unwrap();
        let cfg = GaConfig {
            population_size: 30,
            generations: 40,
            rng_seed: 21,
            ..GaConfig::default()
        };
        let rec = run_ga(&ring, 5, &cfg, Execution::Serial).unwrap();
        assert_eq!(rec.history.len(), 41);
        assert!(rec.history.windows(2).all(|w| w[0].best <= w[1].best));
        assert_eq!(rec.history.last().unwrap().best, rec.best_fitness);
        assert_eq!(rec.evaluations, 30 * 41);
        let again = fitness(&ring, &rec.best, 5).unwrap();
        assert!((again.fitness - rec.best_fitness).abs() <= 1e-12);
        let par = run_ga(&ring, 5, &cfg, Execution::Parallel).unwrap();
        assert_eq!(par, rec);
    }
}
