//! Randomized search over auxiliary channels `P_{UVX|S}`.
//!
//! Phases, sharing one evaluation budget:
//!
//! 1. every deterministic table when there are few enough of them;
//! 2. independent symmetric Dirichlet(1) draws per state;
//! 3. stochastic hill climbing from the best candidates of each distortion
//!    bucket (and from the lowest-distortion ones), mixing a row with a fresh
//!    Dirichlet draw or shifting mass between two entries.
//!
//! The result is an inner approximation: alphabet sizes of `U` and `V` are
//! chosen by the caller and no cardinality bound is known.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::dmc::joint::{assemble_joint, joint_size, JOINT_CAP};
use crate::dmc::model::{AuxChannel, DmcScenario};
use crate::dmc::region::{eval_joint, DmcRegionPoint, RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::frontier::{bucket_of, concave_envelope, pareto, Tradeoff};
use crate::region::SecrecyMode;
use crate::rng::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmcSearchConfig {
    pub budget: usize,
    pub seed: u64,
    /// Alphabet sizes of the auxiliaries.
    pub u: usize,
    pub v: usize,
    /// Number of equally spaced distortion buckets up to the largest
    /// distortion value.
    pub targets: usize,
    pub refine_per_bucket: usize,
    /// Deterministic tables are enumerated only when there are at most this
    /// many (and at most a quarter of the budget).
    pub enumeration_limit: usize,
    pub random_fraction: f64,
}

impl Default for DmcSearchConfig {
    fn default() -> Self {
        Self {
            budget: 20_000,
            seed: 0,
            u: 1,
            v: 2,
            targets: 32,
            refine_per_bucket: 4,
            enumeration_limit: 4096,
            random_fraction: 0.3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DmcFrontier {
    /// Sorted by distortion ascending.
    pub points: Vec<DmcRegionPoint>,
    pub evaluations: usize,
    pub infeasible: usize,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Sample {
    rows: Vec<Vec<f64>>,
    rate: f64,
    distortion: f64,
    feasible: bool,
    violation: f64,
}

impl Tradeoff for Sample {
    fn rate(&self) -> f64 {
        self.rate
    }
    fn distortion(&self) -> f64 {
        self.distortion
    }
}

struct Problem<'a> {
    sc: &'a DmcScenario,
    mode: SecrecyMode,
    nu: usize,
    nv: usize,
    /// Entries per state row, `|U|·|V|·|X|`.
    width: usize,
}

impl Problem<'_> {
    fn aux(&self, rows: &[Vec<f64>]) -> AuxChannel {
        AuxChannel::from_rows(self.nu, self.nv, self.sc.alphabets.x, rows)
    }

    fn eval(&self, rows: Vec<Vec<f64>>) -> Sample {
        let aux = self.aux(&rows);
        let joint = assemble_joint(self.sc, &aux).expect("shape checked up front");
        let p = eval_joint(self.sc, &aux, &joint, self.mode);
        let violation = if p.feasible {
            0.0
        } else {
            let mut v = (-p.bound.bound).max(0.0).min(1e3);
            if self.mode == SecrecyMode::MessageAndState {
                v += (p.residual - RESIDUAL_TOL).max(0.0);
            }
            if !p.bound.filter_ok {
                v += p.terms.i_u_s - p.terms.i_u_y;
            }
            v
        };
        Sample {
            rows,
            rate: p.rate,
            distortion: p.distortion,
            feasible: p.feasible,
            violation,
        }
    }

    fn dirichlet_row(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let w: Vec<f64> = (0..self.width).map(|_| Exp1.sample(rng)).collect();
        let t: f64 = w.iter().sum();
        w.into_iter().map(|x| x / t).collect()
    }

    fn random_rows(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        (0..self.sc.alphabets.s).map(|_| self.dirichlet_row(rng)).collect()
    }

    /// The `k`-th deterministic table: state `s` puts all mass on entry
    /// `(k / width^s) mod width`.
    fn deterministic(&self, mut k: usize) -> Vec<Vec<f64>> {
        (0..self.sc.alphabets.s)
            .map(|_| {
                let mut row = vec![0.0; self.width];
                row[k % self.width] = 1.0;
                k /= self.width;
                row
            })
            .collect()
    }

    fn perturb(&self, rows: &[Vec<f64>], step: f64, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let mut out = rows.to_vec();
        let s = rng.random_range(0..out.len());
        let row = &mut out[s];
        if self.width > 1 && rng.random_bool(0.5) {
            let i = rng.random_range(0..self.width);
            let mut j = rng.random_range(0..self.width - 1);
            if j >= i {
                j += 1;
            }
            let moved = row[i] * step.min(1.0);
            row[i] -= moved;
            row[j] += moved;
        } else {
            let fresh = self.dirichlet_row(rng);
            let t = step.min(1.0);
            for (r, f) in row.iter_mut().zip(fresh) {
                *r = (1.0 - t) * *r + t * f;
            }
        }
        // keep the row exactly normalized
        let total: f64 = row.iter().sum();
        for r in row.iter_mut() {
            *r /= total;
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
enum Goal {
    RateBelow(f64),
    MinDistortion,
}

impl Goal {
    fn merit(&self, s: &Sample, dmax: f64) -> f64 {
        match *self {
            Goal::RateBelow(t) => {
                if s.feasible && s.distortion <= t {
                    s.rate
                } else {
                    -(s.violation + (s.distortion - t).max(0.0))
                }
            }
            Goal::MinDistortion => {
                if s.feasible {
                    -s.distortion
                } else {
                    -dmax - s.violation
                }
            }
        }
    }
}

fn climb(problem: &Problem<'_>, start: Sample, goal: Goal, budget: usize, seed: u64, dmax: f64) -> Vec<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_merit = goal.merit(&start, dmax);
    let mut best = start;
    let mut step = 0.5;
    let mut out = Vec::new();
    for _ in 0..budget {
        let cand = problem.eval(problem.perturb(&best.rows, step, &mut rng));
        let m = goal.merit(&cand, dmax);
        if m > best_merit {
            best_merit = m;
            best = cand.clone();
            step = (step * 1.5).min(1.0);
        } else {
            step = (step * 0.9).max(1e-4);
        }
        out.push(cand);
    }
    out
}

/// Searches auxiliary channels with `cfg.u × cfg.v` auxiliary alphabets and
/// returns the Pareto set of feasible points (its concave envelope in
/// `message_and_state`). Deterministic in `cfg.seed`.
pub fn search_aux(sc: &DmcScenario, mode: SecrecyMode, cfg: &DmcSearchConfig) -> Result<DmcFrontier> {
    search_aux_seeded(sc, mode, cfg, &[])
}

/// [`search_aux`] with extra starting channels, evaluated first. Seeds whose
/// auxiliary alphabets differ from `cfg` are ignored.
pub fn search_aux_seeded(
    sc: &DmcScenario,
    mode: SecrecyMode,
    cfg: &DmcSearchConfig,
    seeds: &[AuxChannel],
) -> Result<DmcFrontier> {
    sc.validate()?;
    if cfg.u == 0 || cfg.v == 0 {
        return Err(Error::InvalidParameter("auxiliary alphabets must be nonempty".into()));
    }
    let probe = AuxChannel {
        u: cfg.u,
        v: cfg.v,
        p_uvx_given_s: Vec::new(),
    };
    let size = joint_size(sc, &probe);
    if size > JOINT_CAP as f64 {
        return Err(Error::CapExceeded {
            dimension: "joint table entries".into(),
            size,
            cap: JOINT_CAP as f64,
        });
    }
    let dmax = sc.max_distortion().max(f64::MIN_POSITIVE);
    let n_targets = cfg.targets.max(1);
    let targets: Vec<f64> = (1..=n_targets).map(|k| dmax * k as f64 / n_targets as f64).collect();
    let problem = Problem {
        sc,
        mode,
        nu: cfg.u,
        nv: cfg.v,
        width: cfg.u * cfg.v * sc.alphabets.x,
    };
    let budget = cfg.budget;

    let n_det = (problem.width as f64).powi(sc.alphabets.s as i32);
    let mut pool: Vec<Sample> = seeds
        .iter()
        .filter(|a| a.u == cfg.u && a.v == cfg.v && a.validate(sc).is_ok())
        .take(budget)
        .map(|a| problem.eval((0..sc.alphabets.s).map(|s| a.row(s)).collect()))
        .collect();
    let enumerate = n_det <= cfg.enumeration_limit as f64 && n_det <= (budget / 4) as f64;
    let det: Vec<Sample> = if enumerate {
        (0..n_det as usize)
            .into_par_iter()
            .map(|k| problem.eval(problem.deterministic(k)))
            .collect()
    } else {
        Vec::new()
    };
    pool.extend(det);

    let n_random = ((budget as f64 * cfg.random_fraction) as usize)
        .max(budget.min(1))
        .min(budget - pool.len());
    let random: Vec<Sample> = (0..n_random)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 11, k as u64));
            problem.eval(problem.random_rows(&mut rng))
        })
        .collect();
    pool.extend(random);

    let remaining = budget - pool.len();
    let jobs = climb_jobs(&pool, &targets, cfg.refine_per_bucket, remaining);
    if !jobs.is_empty() {
        let per_job = remaining / jobs.len();
        let climbed: Vec<Vec<Sample>> = jobs
            .par_iter()
            .enumerate()
            .map(|(k, &(start, goal))| {
                climb(&problem, pool[start].clone(), goal, per_job, derive_seed(cfg.seed, 12, k as u64), dmax)
            })
            .collect();
        pool.extend(climbed.into_iter().flatten());
    }

    let evaluations = pool.len();
    let infeasible = pool.iter().filter(|s| !s.feasible).count();
    let front = pareto(pool.into_iter().filter(|s| s.feasible).collect());
    let points: Vec<DmcRegionPoint> = front
        .into_iter()
        .map(|s| {
            let aux = problem.aux(&s.rows);
            let joint = assemble_joint(sc, &aux).expect("shape checked up front");
            eval_joint(sc, &aux, &joint, mode)
        })
        .collect();
    let points = if mode == SecrecyMode::MessageAndState {
        concave_envelope(points)
    } else {
        points
    };
    Ok(DmcFrontier {
        points,
        evaluations,
        infeasible,
        targets,
    })
}

/// Frontiers of all three modes, strictest first internally, each looser
/// mode seeded with the stricter frontier's channels. Returned in
/// [`SecrecyMode::ALL`] order.
pub fn nested_search(sc: &DmcScenario, cfg: &DmcSearchConfig) -> Result<Vec<(SecrecyMode, DmcFrontier)>> {
    let mut seeds: Vec<AuxChannel> = Vec::new();
    let mut out = Vec::with_capacity(3);
    for mode in SecrecyMode::ALL.into_iter().rev() {
        let f = search_aux_seeded(sc, mode, cfg, &seeds)?;
        seeds.extend(f.points.iter().map(|p| p.aux.clone()));
        out.push((mode, f));
    }
    out.reverse();
    Ok(out)
}

fn climb_jobs(pool: &[Sample], targets: &[f64], per_bucket: usize, budget: usize) -> Vec<(usize, Goal)> {
    const MIN_STEPS: usize = 50;
    let max_jobs = budget / MIN_STEPS;
    if max_jobs == 0 || per_bucket == 0 {
        return Vec::new();
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
    for (k, s) in pool.iter().enumerate() {
        if s.feasible {
            buckets[bucket_of(targets, s.distortion)].push(k);
        }
    }
    for b in &mut buckets {
        b.sort_by(|&x, &y| pool[y].rate.total_cmp(&pool[x].rate).then(x.cmp(&y)));
    }
    let mut by_d: Vec<usize> = (0..pool.len()).filter(|&k| pool[k].feasible).collect();
    by_d.sort_by(|&x, &y| pool[x].distortion.total_cmp(&pool[y].distortion).then(x.cmp(&y)));
    // without any feasible sample, climb out of the least-violating ones
    if by_d.is_empty() {
        by_d = (0..pool.len()).collect();
        by_d.sort_by(|&x, &y| pool[x].violation.total_cmp(&pool[y].violation).then(x.cmp(&y)));
    }
    let nonempty = buckets.iter().filter(|b| !b.is_empty()).count() + 1;
    let k = per_bucket.min((max_jobs / nonempty).max(1));
    let mut jobs: Vec<(usize, Goal)> = by_d.iter().take(k).map(|&i| (i, Goal::MinDistortion)).collect();
    // the last bucket covers every distortion, so it drives the max-rate climb
    for (b, members) in buckets.iter().enumerate().rev() {
        jobs.extend(members.iter().take(k).map(|&i| (i, Goal::RateBelow(targets[b]))));
    }
    jobs.truncate(max_jobs);
    jobs
}
