//! Frontier search over the Gaussian auxiliaries.
//!
//! Three phases share one evaluation budget:
//!
//! 1. a few deterministic anchors (silent/uncoded encoder, dirty-paper choice);
//! 2. uniform random draws inside the power polytope;
//! 3. coordinate-wise golden-section refinement of the best candidates in each
//!    distortion bucket, plus a pass that pushes the minimum distortion down.
//!
//! Every feasible point evaluated along the way is kept, and the frontier is
//! the Pareto set of that pool (its upper concave envelope when both message
//! and state are secret, which time-sharing makes achievable).
//!
//! Each random draw and each refinement job gets its own seed derived from the
//! master seed and its index, so the result does not depend on thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::Result;
use crate::frontier::{bucket_of, concave_envelope, log_targets, pareto};
use crate::gauss::region::{
    evaluate, secrecy_feasible_params, AuxParams, RegionPoint, ScenarioConfig,
    SecrecySubstitution,
};
use crate::region::SecrecyMode;
use crate::rng::derive_seed;

const ALPHA_MAX: f64 = 4.0;
const DELTA_MAX: f64 = 4.0;
const EPSILON_MAX: f64 = 6.0;
/// `σ_G²` does not cost power when `ε = 0`, so it needs its own cap (× P).
const G_VAR_CAP: f64 = 2.0;
/// Evaluations per golden-section line search.
const LINE_EVALS: usize = 14;
const INVPHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    /// Total number of parameter evaluations.
    pub budget: usize,
    pub seed: u64,
    /// Number of log-spaced distortion targets between `d_min` and `Q`.
    pub targets: usize,
    pub d_min: f64,
    /// Candidates refined per distortion bucket.
    pub refine_per_bucket: usize,
    /// Fraction of the budget spent on random draws.
    pub random_fraction: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            budget: 200_000,
            seed: 0,
            targets: 64,
            d_min: 0.01,
            refine_per_bucket: 32,
            random_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FrontierResult {
    /// Sorted by distortion ascending.
    pub points: Vec<RegionPoint>,
    pub evaluations: usize,
    /// Draws rejected as infeasible (independence, filter or negative bound).
    pub infeasible: usize,
    pub targets: Vec<f64>,
}

/// Free coordinates of the parameter vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Coord {
    SigmaT,
    SigmaF,
    SigmaG,
    Delta,
    Alpha,
    Epsilon,
    Gamma,
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    params: AuxParams,
    rate: f64,
    distortion: f64,
    feasible: bool,
    /// Amount by which the point misses feasibility, `0` if feasible.
    violation: f64,
}

struct Problem<'a> {
    cfg: &'a ScenarioConfig,
    sub: SecrecySubstitution,
    coords: Vec<Coord>,
}

impl<'a> Problem<'a> {
    fn new(cfg: &'a ScenarioConfig) -> Result<Self> {
        let sub = secrecy_feasible_params(cfg)?;
        let mut coords = vec![Coord::SigmaT, Coord::SigmaF, Coord::SigmaG];
        if sub.delta.is_none() {
            coords.push(Coord::Delta);
        }
        coords.extend([Coord::Alpha, Coord::Epsilon]);
        if sub.gamma.is_none() {
            coords.push(Coord::Gamma);
        }
        Ok(Self { cfg, sub, coords })
    }

    fn eval(&self, mut p: AuxParams) -> Sample {
        self.sub.apply(&mut p);
        match evaluate(self.cfg, &p) {
            Ok(ev) => {
                let violation = if ev.feasible {
                    0.0
                } else if ev.independence.is_some_and(|i| !i.independent) {
                    f64::INFINITY
                } else {
                    let filter = (ev.terms.i_u_s - ev.terms.i_u_y).max(0.0);
                    let neg = (-ev.bound.bound).max(0.0).min(1e3);
                    filter + neg
                };
                Sample {
                    params: p,
                    rate: ev.rate(),
                    distortion: ev.distortion,
                    feasible: ev.feasible,
                    violation,
                }
            }
            Err(_) => Sample {
                params: p,
                rate: 0.0,
                distortion: f64::INFINITY,
                feasible: false,
                violation: f64::INFINITY,
            },
        }
    }

    fn fixed_gamma(&self) -> f64 {
        self.sub.gamma.unwrap_or(0.0)
    }

    fn anchors(&self) -> Vec<AuxParams> {
        let cfg = self.cfg;
        let g = self.fixed_gamma();
        let left = cfg.power - g * g * cfg.state_power;
        let mut out = vec![AuxParams {
            gamma: g,
            ..Default::default()
        }];
        if self.sub.gamma.is_none() {
            out.push(AuxParams {
                gamma: (cfg.power / cfg.state_power).sqrt(),
                ..Default::default()
            });
        }
        out.push(AuxParams {
            sigma_t2: left,
            alpha: left / (left + cfg.noise_var),
            gamma: g,
            ..Default::default()
        });
        out
    }

    /// Uniform draw over the power simplex, with each component switched off
    /// now and then so that faces of the polytope get sampled too.
    fn sample(&self, rng: &mut ChaCha8Rng) -> AuxParams {
        let cfg = self.cfg;
        let q = cfg.state_power;
        let mut p = AuxParams::default();
        let gamma_free = self.sub.gamma.is_none();
        let avail = if gamma_free {
            cfg.power
        } else {
            let g = self.fixed_gamma();
            (cfg.power - g * g * q).max(0.0)
        };
        // [T, F, G-power, γ-power, slack]
        let mut w = [0.0; 5];
        for (k, wk) in w.iter_mut().enumerate() {
            let off = (k < 3 && rng.random_bool(0.25)) || (k == 3 && !gamma_free);
            *wk = if off { 0.0 } else { Exp1.sample(rng) };
        }
        let total: f64 = w.iter().sum::<f64>().max(f64::MIN_POSITIVE);
        let share = |k: usize| avail * w[k] / total;
        p.sigma_t2 = share(0);
        p.sigma_f2 = share(1);
        if w[2] > 0.0 {
            p.sigma_g2 = rng.random_range(0.0..G_VAR_CAP * cfg.power);
            p.epsilon = (share(2) / p.sigma_g2.max(1e-12)).sqrt().min(EPSILON_MAX);
            if rng.random_bool(0.5) {
                p.epsilon = -p.epsilon;
            }
            if rng.random_bool(0.2) {
                p.epsilon = 0.0;
            }
        }
        if gamma_free {
            p.gamma = (share(3) / q).sqrt();
            if rng.random_bool(0.5) {
                p.gamma = -p.gamma;
            }
        } else {
            p.gamma = self.fixed_gamma();
        }
        p.alpha = rng.random_range(-ALPHA_MAX..ALPHA_MAX);
        if self.sub.delta.is_none() && !rng.random_bool(0.3) {
            p.delta = rng.random_range(-DELTA_MAX..DELTA_MAX);
        }
        p
    }

    /// Feasible interval of one coordinate with the others held fixed.
    fn interval(&self, p: &AuxParams, c: Coord) -> (f64, f64) {
        let q = self.cfg.state_power;
        let remaining = (self.cfg.power - p.power_used(q)).max(0.0);
        let e2 = p.epsilon * p.epsilon;
        match c {
            Coord::SigmaT => (0.0, p.sigma_t2 + remaining),
            Coord::SigmaF => (0.0, p.sigma_f2 + remaining),
            Coord::SigmaG => {
                let cap = G_VAR_CAP * self.cfg.power;
                if e2 > 0.0 {
                    (0.0, ((e2 * p.sigma_g2 + remaining) / e2).min(cap))
                } else {
                    (0.0, cap)
                }
            }
            Coord::Delta => (-DELTA_MAX, DELTA_MAX),
            Coord::Alpha => (-ALPHA_MAX, ALPHA_MAX),
            Coord::Epsilon => {
                if p.sigma_g2 > 0.0 {
                    let m = ((e2 * p.sigma_g2 + remaining) / p.sigma_g2)
                        .sqrt()
                        .min(EPSILON_MAX);
                    (-m, m)
                } else {
                    (0.0, 0.0)
                }
            }
            Coord::Gamma => {
                let m = ((p.gamma * p.gamma * q + remaining) / q).sqrt();
                (-m, m)
            }
        }
    }
}

fn set(p: &mut AuxParams, c: Coord, v: f64) {
    match c {
        Coord::SigmaT => p.sigma_t2 = v,
        Coord::SigmaF => p.sigma_f2 = v,
        Coord::SigmaG => p.sigma_g2 = v,
        Coord::Delta => p.delta = v,
        Coord::Alpha => p.alpha = v,
        Coord::Epsilon => p.epsilon = v,
        Coord::Gamma => p.gamma = v,
    }
}

/// What a refinement job maximizes.
#[derive(Debug, Clone, Copy)]
enum Goal {
    /// Largest rate with distortion at most the target.
    RateBelow(f64),
    /// Smallest distortion at any nonnegative rate.
    MinDistortion,
}

impl Goal {
    fn merit(&self, s: &Sample, q: f64) -> f64 {
        match *self {
            Goal::RateBelow(t) => {
                if s.feasible && s.distortion <= t {
                    s.rate
                } else {
                    -(s.violation.min(1e6) + (s.distortion - t).max(0.0))
                }
            }
            Goal::MinDistortion => {
                if s.feasible {
                    -s.distortion
                } else {
                    -q - s.violation.min(1e6)
                }
            }
        }
    }
}

/// Cyclic coordinate ascent with golden-section line searches until the
/// evaluation budget is used. Returns every sample taken.
fn refine(problem: &Problem<'_>, start: Sample, goal: Goal, budget: usize, seed: u64) -> Vec<Sample> {
    let q = problem.cfg.state_power;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = start;
    let mut best_merit = goal.merit(&best, q);
    let mut out = Vec::with_capacity(budget);
    let mut used = 0;
    let mut sweep = 0usize;
    while used + 2 <= budget {
        // randomized sweep order decorrelates jobs that start close together
        let mut order = problem.coords.clone();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for &c in &order {
            let evals = LINE_EVALS.min(budget - used);
            if evals < 2 {
                break;
            }
            let (lo, hi) = problem.interval(&best.params, c);
            if hi - lo <= 1e-12 {
                continue;
            }
            let probe = |v: f64, out: &mut Vec<Sample>| {
                let mut p = best.params;
                set(&mut p, c, v);
                let s = problem.eval(p);
                out.push(s);
                s
            };
            let (mut a, mut b) = (lo, hi);
            let mut x1 = b - INVPHI * (b - a);
            let mut x2 = a + INVPHI * (b - a);
            let mut s1 = probe(x1, &mut out);
            let mut s2 = probe(x2, &mut out);
            let (mut f1, mut f2) = (goal.merit(&s1, q), goal.merit(&s2, q));
            for _ in 2..evals {
                if f1 >= f2 {
                    b = x2;
                    x2 = x1;
                    s2 = s1;
                    f2 = f1;
                    x1 = b - INVPHI * (b - a);
                    s1 = probe(x1, &mut out);
                    f1 = goal.merit(&s1, q);
                } else {
                    a = x1;
                    x1 = x2;
                    s1 = s2;
                    f1 = f2;
                    x2 = a + INVPHI * (b - a);
                    s2 = probe(x2, &mut out);
                    f2 = goal.merit(&s2, q);
                }
            }
            used += evals;
            let (s, f) = if f1 >= f2 { (s1, f1) } else { (s2, f2) };
            if f > best_merit {
                best = s;
                best_merit = f;
            }
        }
        sweep += 1;
        if sweep > 10_000 {
            break;
        }
    }
    out
}

/// Traces the achievable (R_M, D) frontier of `cfg.mode` within `search.budget`
/// evaluations. Deterministic in `search.seed`.
pub fn frontier(cfg: &ScenarioConfig, search: &SearchConfig) -> Result<FrontierResult> {
    frontier_seeded(cfg, search, &[])
}

/// [`frontier`] with extra starting points evaluated right after the anchors
/// (within the same budget).
pub fn frontier_seeded(
    cfg: &ScenarioConfig,
    search: &SearchConfig,
    seeds: &[AuxParams],
) -> Result<FrontierResult> {
    cfg.validate()?;
    let problem = Problem::new(cfg)?;
    let targets = log_targets(search.d_min, cfg.state_power, search.targets.max(1));
    let budget = search.budget;

    let mut pool: Vec<Sample> = problem
        .anchors()
        .into_iter()
        .chain(seeds.iter().copied())
        .take(budget)
        .map(|p| problem.eval(p))
        .collect();

    let n_random = ((budget as f64 * search.random_fraction) as usize)
        .saturating_sub(pool.len())
        .min(budget - pool.len());
    let seed = search.seed;
    let random: Vec<Sample> = (0..n_random)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 1, k as u64));
            problem.eval(problem.sample(&mut rng))
        })
        .collect();
    pool.extend(random);

    let remaining = budget - pool.len();
    let jobs = refinement_jobs(&pool, &targets, search.refine_per_bucket, remaining);
    if !jobs.is_empty() {
        let per_job = remaining / jobs.len();
        let refined: Vec<Vec<Sample>> = jobs
            .par_iter()
            .enumerate()
            .map(|(k, &(start, goal))| {
                refine(&problem, pool[start], goal, per_job, derive_seed(seed, 2, k as u64))
            })
            .collect();
        pool.extend(refined.into_iter().flatten());
    }

    let evaluations = pool.len();
    let infeasible = pool.iter().filter(|s| !s.feasible).count();
    let points: Vec<RegionPoint> = pareto(
        pool.into_iter()
            .filter(|s| s.feasible)
            .map(|s| LightPoint(s))
            .collect(),
    )
    .into_iter()
    .map(|lp| {
        evaluate(cfg, &lp.0.params)
            .expect("re-evaluating a feasible sample")
            .to_point()
    })
    .collect();
    let points = if cfg.mode == SecrecyMode::MessageAndState {
        concave_envelope(points)
    } else {
        points
    };
    Ok(FrontierResult {
        points,
        evaluations,
        infeasible,
        targets,
    })
}

/// Frontiers of all three modes from strictest to loosest, each looser mode
/// seeded with the stricter frontier's parameters. A choice that is achievable
/// under a stricter mode is achievable under a looser one, so this keeps the
/// frontiers nested even where the random search alone would miss it.
///
/// Returned in [`SecrecyMode::ALL`] order.
pub fn nested_frontiers(
    cfg: &ScenarioConfig,
    search: &SearchConfig,
) -> Result<Vec<(SecrecyMode, FrontierResult)>> {
    let mut seeds: Vec<AuxParams> = Vec::new();
    let mut out = Vec::with_capacity(3);
    for mode in SecrecyMode::ALL.into_iter().rev() {
        let res = frontier_seeded(&cfg.clone().with_mode(mode), search, &seeds)?;
        seeds.extend(res.points.iter().map(|p| p.params));
        out.push((mode, res));
    }
    out.reverse();
    Ok(out)
}

#[derive(Clone, Copy)]
struct LightPoint(Sample);

impl crate::frontier::Tradeoff for LightPoint {
    fn rate(&self) -> f64 {
        self.0.rate
    }
    fn distortion(&self) -> f64 {
        self.0.distortion
    }
}

/// Picks refinement starting points: the best `per_bucket` feasible samples
/// in every distortion bucket, and the lowest-distortion samples for the
/// min-distortion pass. Jobs are dropped from the back of each bucket's list
/// until every job gets a useful number of evaluations.
fn refinement_jobs(
    pool: &[Sample],
    targets: &[f64],
    per_bucket: usize,
    budget: usize,
) -> Vec<(usize, Goal)> {
    let min_evals = 6 * LINE_EVALS;
    let max_jobs = budget / min_evals;
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
        b.sort_by(|&x, &y| {
            pool[y]
                .rate
                .total_cmp(&pool[x].rate)
                .then(pool[x].distortion.total_cmp(&pool[y].distortion))
                .then(x.cmp(&y))
        });
    }
    let mut by_distortion: Vec<usize> = (0..pool.len()).filter(|&k| pool[k].feasible).collect();
    by_distortion.sort_by(|&x, &y| pool[x].distortion.total_cmp(&pool[y].distortion).then(x.cmp(&y)));

    let nonempty = buckets.iter().filter(|b| !b.is_empty()).count() + 1;
    let k = per_bucket.min((max_jobs / nonempty).max(1));
    let mut jobs: Vec<(usize, Goal)> = by_distortion
        .iter()
        .take(k)
        .map(|&i| (i, Goal::MinDistortion))
        .collect();
    for (b, members) in buckets.iter().enumerate() {
        jobs.extend(members.iter().take(k).map(|&i| (i, Goal::RateBelow(targets[b]))));
    }
    jobs.truncate(max_jobs);
    jobs
}
