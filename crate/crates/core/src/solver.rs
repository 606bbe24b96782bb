//! Self-consistent information bottleneck iterations and annealed frontiers.
//!
//! One update of the encoder at fixed β is
//!
//! ```text
//! q(w)      = sum_m p(m) q(w|m)
//! m̂_w(u)    = sum_m q(m|w) m(u)
//! q(w|m)   ∝ q(w) exp(-β D[m ∥ m̂_w])      (D in nats)
//! ```
//!
//! [`anneal_frontier`] sweeps a β grid, warm-starting each β from the
//! previous solution, and records one [`FrontierPoint`] per β.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::kernel;
use crate::prob::{ensure_aligned, MeaningSpace, NamingSystem};

/// Category mass threshold used for counting categories.
pub const DEFAULT_MASS_THRESHOLD: f64 = 1e-5;

/// Reconstructions closer than this in max-norm are the same category.
pub const MERGE_TOL: f64 = 1e-8;

/// Stand-in for ln 0 inside the update. Finite so that 0 · ln 0 stays 0 in
/// the matrix product, and large enough that exp(-β D) underflows to 0.
const LN_ZERO: f64 = -1e300;

const RESTART_NOISE_SD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnnealDirection {
    HighToLow,
    LowToHigh,
}

impl std::str::FromStr for AnnealDirection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high-to-low" => Ok(Self::HighToLow),
            "low-to-high" => Ok(Self::LowToHigh),
            other => Err(Error::InvalidConfig(format!("unknown anneal direction {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub beta_grid: Vec<f64>,
    /// Upper bound on the number of words; `None` means one per meaning.
    pub max_clusters: Option<usize>,
    /// Stop when F_β changes by less than this many bits in one update.
    pub convergence_tol: f64,
    pub max_iterations: usize,
    pub mass_prune_threshold: f64,
    /// Perturbed initializations tried at each β besides the warm start.
    pub restarts: usize,
    pub seed: u64,
    pub anneal_direction: AnnealDirection,
}

impl SolverConfig {
    pub fn new(beta_grid: Vec<f64>) -> Self {
        Self {
            beta_grid,
            max_clusters: None,
            convergence_tol: 1e-10,
            max_iterations: 30_000,
            mass_prune_threshold: DEFAULT_MASS_THRESHOLD,
            restarts: 0,
            seed: 0,
            anneal_direction: AnnealDirection::HighToLow,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta_grid.is_empty() {
            return Err(Error::InvalidConfig("beta grid is empty".into()));
        }
        if self.beta_grid.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
            return Err(Error::InvalidConfig("beta values must be finite and non-negative".into()));
        }
        let increasing = self.beta_grid.windows(2).all(|w| w[0] < w[1]);
        let decreasing = self.beta_grid.windows(2).all(|w| w[0] > w[1]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidConfig("beta grid must be strictly monotone".into()));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig("convergence_tol must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be at least 1".into()));
        }
        if self.max_clusters == Some(0) {
            return Err(Error::InvalidConfig("max_clusters must be at least 1".into()));
        }
        if !(self.mass_prune_threshold >= 0.0) {
            return Err(Error::InvalidConfig("mass_prune_threshold must be non-negative".into()));
        }
        Ok(())
    }
}

/// β = 0 followed by `count - 1` log-spaced values from `min_positive` to
/// `beta_max` inclusive.
pub fn log_beta_grid(beta_max: f64, count: usize, min_positive: f64) -> Vec<f64> {
    let mut grid = vec![0.0];
    let n = count.saturating_sub(1);
    if n == 1 {
        grid.push(beta_max);
    } else if n > 1 {
        let (lo, hi) = (min_positive.ln(), beta_max.ln());
        grid.extend((0..n).map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp()));
        grid[n] = beta_max;
    }
    grid
}

/// `count` evenly spaced values from 0 to `beta_max` inclusive.
pub fn linear_beta_grid(beta_max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| beta_max * i as f64 / (count - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone)]
pub struct FrontierPoint {
    pub beta: f64,
    pub complexity_bits: f64,
    pub accuracy_bits: f64,
    pub objective_bits: f64,
    pub effective_k: usize,
    pub encoder: NamingSystem,
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone)]
pub struct Frontier {
    /// Sorted by β ascending.
    pub points: Vec<FrontierPoint>,
    pub space_fingerprint: String,
    pub config: SolverConfig,
}

impl Frontier {
    /// Indices `i` where complexity or accuracy drops from point `i - 1` to
    /// point `i` by more than `slack`.
    pub fn monotonicity_violations(&self, slack: f64) -> Vec<usize> {
        (1..self.points.len())
            .filter(|&i| {
                let (a, b) = (&self.points[i - 1], &self.points[i]);
                b.complexity_bits < a.complexity_bits - slack || b.accuracy_bits < a.accuracy_bits - slack
            })
            .collect()
    }

    /// Points (as indices into `points`) that lie more than `slack` below
    /// the chord between their neighbours on the accuracy-vs-complexity
    /// curve.
    pub fn concavity_violations(&self, slack: f64) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&i, &j| {
            let (a, b) = (&self.points[i], &self.points[j]);
            a.complexity_bits.total_cmp(&b.complexity_bits).then(a.accuracy_bits.total_cmp(&b.accuracy_bits))
        });
        let mut curve: Vec<usize> = Vec::new();
        for i in order {
            if let Some(&last) = curve.last() {
                if self.points[i].complexity_bits - self.points[last].complexity_bits <= 1e-12 {
                    // keep the more accurate of near-equal complexities
                    if self.points[i].accuracy_bits >= self.points[last].accuracy_bits {
                        curve.pop();
                        curve.push(i);
                    }
                    continue;
                }
            }
            curve.push(i);
        }
        curve
            .windows(3)
            .filter(|w| {
                let (a, b, c) = (&self.points[w[0]], &self.points[w[1]], &self.points[w[2]]);
                let t = (b.complexity_bits - a.complexity_bits) / (c.complexity_bits - a.complexity_bits);
                let chord = a.accuracy_bits + t * (c.accuracy_bits - a.accuracy_bits);
                b.accuracy_bits < chord - slack
            })
            .map(|w| w[1])
            .collect()
    }

    /// Pairs `(i, j)` where point `j` has higher complexity and lower
    /// accuracy than point `i`, both beyond `slack`.
    pub fn dominated_pairs(&self, slack: f64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, a) in self.points.iter().enumerate() {
            for (j, b) in self.points.iter().enumerate() {
                if b.complexity_bits > a.complexity_bits + slack && b.accuracy_bits < a.accuracy_bits - slack {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

pub(crate) struct Problem<'a> {
    need: ArrayView1<'a, f64>,
    repr: ArrayView2<'a, f64>,
    /// sum_u m(u) ln m(u) per meaning.
    neg_entropy: Array1<f64>,
    prior: Array1<f64>,
}

#[derive(Clone)]
struct State {
    enc: Array2<f64>,
    qw: Array1<f64>,
    recon: Array2<f64>,
}

struct Solved {
    state: State,
    complexity: f64,
    accuracy: f64,
    objective: f64,
    converged: bool,
    iterations: usize,
}

impl<'a> Problem<'a> {
    pub(crate) fn new(space: &'a MeaningSpace) -> Self {
        let repr = space.matrix();
        let neg_entropy = repr
            .rows()
            .into_iter()
            .map(|r| r.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum())
            .collect();
        Self { need: space.need().mass(), repr, neg_entropy, prior: space.prior_representation() }
    }

    fn state(&self, enc: Array2<f64>) -> State {
        let qw = kernel::word_mass(self.need, enc.view());
        let recon = kernel::reconstructions(self.need, enc.view(), self.repr, qw.view());
        State { enc, qw, recon }
    }

    fn measures(&self, s: &State) -> (f64, f64) {
        let c = kernel::complexity(self.need, s.enc.view());
        let a = s
            .recon
            .rows()
            .into_iter()
            .zip(s.qw.iter())
            .filter(|(_, &q)| q > 0.0)
            .map(|(row, &q)| q * kernel::kl_bits(row, self.prior.view()).expect("m_0 covers every reconstruction"))
            .sum();
        (c, a)
    }

    /// D[m ∥ m̂_w] in nats for every (meaning, word) pair. Pairs where the
    /// reconstruction misses part of the meaning's support come out huge
    /// rather than infinite.
    fn divergences(&self, s: &State) -> Array2<f64> {
        let log_recon = s.recon.mapv(|x| if x > 0.0 { x.ln() } else { LN_ZERO });
        let cross = self.repr.dot(&log_recon.t());
        let mut d = -cross;
        for (mut row, &h) in d.rows_mut().into_iter().zip(self.neg_entropy.iter()) {
            row += h;
        }
        d
    }

    fn update(&self, s: &State, beta: f64) -> State {
        let div = self.divergences(s);
        let log_qw: Array1<f64> = s.qw.mapv(|q| if q > 0.0 { q.ln() } else { f64::NEG_INFINITY });
        let mut enc = Array2::zeros(div.raw_dim());
        for (mut out, drow) in enc.rows_mut().into_iter().zip(div.rows()) {
            let mut max = f64::NEG_INFINITY;
            for ((o, &d), &lq) in out.iter_mut().zip(drow.iter()).zip(log_qw.iter()) {
                let x = if lq == f64::NEG_INFINITY { f64::NEG_INFINITY } else { lq - beta * d };
                *o = x;
                max = max.max(x);
            }
            let mut sum = 0.0;
            for o in out.iter_mut() {
                *o = (*o - max).exp();
                sum += *o;
            }
            out /= sum;
        }
        self.state(enc)
    }

    fn iterate(&self, init: Array2<f64>, beta: f64, tol: f64, max_iterations: usize) -> Solved {
        let mut cur = self.state(init);
        let (mut c, mut a) = self.measures(&cur);
        let mut f = c - beta * a;
        let mut best = (cur.clone(), c, a, f);
        let mut converged = false;
        let mut iterations = 0;
        while iterations < max_iterations {
            iterations += 1;
            let next = self.update(&cur, beta);
            let (nc, na) = self.measures(&next);
            let nf = nc - beta * na;
            let delta = (nf - f).abs();
            cur = next;
            (c, a, f) = (nc, na, nf);
            if f <= best.3 {
                best = (cur.clone(), c, a, f);
            }
            if delta < tol {
                converged = true;
                break;
            }
        }
        let (state, complexity, accuracy, objective) = best;
        Solved { state, complexity, accuracy, objective, converged, iterations }
    }
}

const MERGE_ALL_PAIRS: usize = 24;
const MERGE_NEIGHBOURS: usize = 8;

impl Problem<'_> {
    /// Per-word shares of complexity and accuracy, in bits.
    fn word_terms(&self, s: &State) -> (Vec<f64>, Vec<f64>) {
        let k = s.qw.len();
        let mut c = vec![0.0; k];
        for (row, &p) in s.enc.rows().into_iter().zip(self.need.iter()) {
            for (w, &q) in row.iter().enumerate() {
                if q > 0.0 && p > 0.0 {
                    c[w] += p * q * (q / s.qw[w]).log2();
                }
            }
        }
        let a = (0..k)
            .map(|w| if s.qw[w] > 0.0 { s.qw[w] * self.kl_to_prior(s.recon.row(w)) } else { 0.0 })
            .collect();
        (c, a)
    }

    fn kl_to_prior(&self, row: ArrayView1<'_, f64>) -> f64 {
        kernel::kl_bits(row, self.prior.view()).expect("m_0 covers every reconstruction")
    }

    /// Change in F_β from merging words `i` and `j` into one.
    fn merge_delta(&self, s: &State, terms: &(Vec<f64>, Vec<f64>), i: usize, j: usize, beta: f64) -> f64 {
        let q = s.qw[i] + s.qw[j];
        let mut c = 0.0;
        for (row, &p) in s.enc.rows().into_iter().zip(self.need.iter()) {
            let x = row[i] + row[j];
            if x > 0.0 && p > 0.0 {
                c += p * x * (x / q).log2();
            }
        }
        let recon = (&s.recon.row(i) * s.qw[i] + &s.recon.row(j) * s.qw[j]) / q;
        let a = q * self.kl_to_prior(recon.view());
        (c - terms.0[i] - terms.0[j]) - beta * (a - terms.1[i] - terms.1[j])
    }

    /// Pairs worth trying: all of them for few words, otherwise each word
    /// with its nearest reconstructions in L1.
    fn merge_candidates(&self, s: &State) -> Vec<(usize, usize)> {
        let live: Vec<usize> = (0..s.qw.len()).filter(|&w| s.qw[w] > 0.0).collect();
        let mut pairs = Vec::new();
        if live.len() <= MERGE_ALL_PAIRS {
            for (x, &i) in live.iter().enumerate() {
                pairs.extend(live[x + 1..].iter().map(|&j| (i, j)));
            }
            return pairs;
        }
        for &i in &live {
            let mut near: Vec<(f64, usize)> = live
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (s.recon.row(i).iter().zip(s.recon.row(j).iter()).map(|(a, b)| (a - b).abs()).sum(), j))
                .collect();
            near.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            pairs.extend(near.iter().take(MERGE_NEIGHBOURS).map(|&(_, j)| (i.min(j), i.max(j))));
        }
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Greedily merges the pair of words that lowers F_β most, re-running the
    /// updates after each merge. Reconstructions with disjoint support make
    /// hard partitions fixed points of the update, so the updates alone
    /// never merge such words.
    fn merge_descent(&self, mut cur: Solved, beta: f64, tol: f64, max_iterations: usize) -> Solved {
        loop {
            let s = &cur.state;
            let terms = self.word_terms(s);
            let best = self
                .merge_candidates(s)
                .into_iter()
                .map(|(i, j)| (self.merge_delta(s, &terms, i, j, beta), i, j))
                .fold(None, |best: Option<(f64, usize, usize)>, c| match best {
                    Some(b) if b.0 <= c.0 => Some(b),
                    _ => Some(c),
                });
            let Some((delta, i, j)) = best else { return cur };
            if delta >= -tol {
                return cur;
            }
            let mut enc = s.enc.clone();
            let moved = enc.column(j).to_owned();
            let mut col = enc.column_mut(i);
            col += &moved;
            let keep: Vec<usize> = (0..enc.ncols()).filter(|&w| w != j).collect();
            let merged = self.iterate(enc.select(Axis(1), &keep), beta, tol, max_iterations);
            if merged.objective >= cur.objective - tol {
                return cur;
            }
            cur = merged;
        }
    }
}

/// Groups of words whose reconstructions agree within [`MERGE_TOL`]; words
/// with zero mass are left out.
fn duplicate_groups(s: &State) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for w in 0..s.qw.len() {
        if s.qw[w] <= 0.0 {
            continue;
        }
        let row = s.recon.row(w);
        let found = groups.iter_mut().find(|g| {
            let rep = s.recon.row(g[0]);
            rep.iter().zip(row.iter()).all(|(a, b)| (a - b).abs() < MERGE_TOL)
        });
        match found {
            Some(g) => g.push(w),
            None => groups.push(vec![w]),
        }
    }
    groups
}

fn count_categories(s: &State, threshold: f64) -> usize {
    duplicate_groups(s)
        .iter()
        .filter(|g| g.iter().map(|&w| s.qw[w]).sum::<f64>() > threshold)
        .count()
        .max(1)
}

/// Drops words with mass below `threshold` and merges duplicate
/// reconstructions. `None` if that would leave some meaning without a word.
fn prune_and_merge(s: &State, threshold: f64) -> Option<Array2<f64>> {
    let groups: Vec<Vec<usize>> = duplicate_groups(s)
        .into_iter()
        .filter(|g| g.iter().map(|&w| s.qw[w]).sum::<f64>() >= threshold)
        .collect();
    if groups.is_empty() {
        return None;
    }
    let m = s.enc.nrows();
    let mut enc = Array2::zeros((m, groups.len()));
    for (k, g) in groups.iter().enumerate() {
        for &w in g {
            let mut col = enc.column_mut(k);
            col += &s.enc.column(w);
        }
    }
    for mut row in enc.rows_mut() {
        let sum = row.sum();
        if sum <= 0.0 {
            return None;
        }
        row /= sum;
    }
    Some(enc)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Multiplies every entry by exp(N(0, σ²)) and renormalizes rows. Zeros stay
/// zero.
fn perturb(enc: &Array2<f64>, seed: u64, stream: u64) -> Array2<f64> {
    let mut rng = stream_rng(seed, stream);
    let noise = Normal::new(0.0, RESTART_NOISE_SD).expect("valid sd");
    let mut out = enc.mapv(|x| x * noise.sample(&mut rng).exp());
    for mut row in out.rows_mut() {
        let s = row.sum();
        row /= s;
    }
    out
}

/// Duplicates every word, then perturbs, for forward annealing.
fn split(enc: &Array2<f64>, cap: usize, seed: u64, stream: u64) -> Array2<f64> {
    let extra = enc.ncols().min(cap.saturating_sub(enc.ncols()));
    if extra == 0 {
        return perturb(enc, seed, stream);
    }
    let mut wide = Array2::zeros((enc.nrows(), enc.ncols() + extra));
    wide.slice_mut(ndarray::s![.., ..enc.ncols()]).assign(enc);
    for j in 0..extra {
        let half = enc.column(j).mapv(|x| 0.5 * x);
        wide.column_mut(j).assign(&half);
        wide.column_mut(enc.ncols() + j).assign(&half);
    }
    perturb(&wide, seed, stream)
}

/// Hard initial encoder with `k` words: one word per meaning when `k` covers
/// all meanings, otherwise farthest-point centres in L1 distance.
fn initial_encoder(space: &MeaningSpace, k: usize) -> Array2<f64> {
    let m = space.num_meanings();
    if k >= m {
        return Array2::eye(m);
    }
    let repr = space.matrix();
    let need = space.need().mass();
    let dist = |a: usize, b: usize| -> f64 { repr.row(a).iter().zip(repr.row(b).iter()).map(|(x, y)| (x - y).abs()).sum() };
    let first = (0..m).fold(0, |best, i| if need[i] > need[best] { i } else { best });
    let mut centres = vec![first];
    while centres.len() < k {
        let next = (0..m)
            .map(|i| (i, centres.iter().map(|&c| dist(i, c)).fold(f64::INFINITY, f64::min)))
            .fold((0, f64::NEG_INFINITY), |best, cand| if cand.1 > best.1 { cand } else { best })
            .0;
        centres.push(next);
    }
    let mut enc = Array2::zeros((m, k));
    for i in 0..m {
        let nearest = (0..k).fold(0, |best, j| if dist(i, centres[j]) < dist(i, centres[best]) { j } else { best });
        enc[[i, nearest]] = 1.0;
    }
    enc
}

fn word_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("w{i}")).collect()
}

fn to_point(space: &MeaningSpace, beta: f64, solved: &Solved, threshold: f64) -> FrontierPoint {
    let enc = solved.state.enc.clone();
    FrontierPoint {
        beta,
        complexity_bits: solved.complexity,
        accuracy_bits: solved.accuracy,
        objective_bits: solved.objective,
        effective_k: count_categories(&solved.state, threshold),
        encoder: NamingSystem::new_unchecked(enc.clone(), space.meaning_labels().to_vec(), word_labels(enc.ncols())),
        converged: solved.converged,
        iterations: solved.iterations,
    }
}

/// Runs the fixed-point updates at one β from `init` and returns the best
/// iterate seen.
pub fn solve_at_beta(space: &MeaningSpace, beta: f64, init: &NamingSystem, config: &SolverConfig) -> Result<FrontierPoint> {
    if !(beta >= 0.0) {
        return Err(Error::NegativeBeta(beta));
    }
    ensure_aligned(init, space.meaning_labels())?;
    let problem = Problem::new(space);
    let solved = problem.iterate(init.encoder().to_owned(), beta, config.convergence_tol, config.max_iterations);
    let mut point = to_point(space, beta, &solved, config.mass_prune_threshold);
    point.encoder = NamingSystem::new_unchecked(
        solved.state.enc,
        space.meaning_labels().to_vec(),
        init.word_labels().to_vec(),
    );
    Ok(point)
}

/// Change in F_β produced by one more update of the point's encoder.
pub fn fixed_point_residual(space: &MeaningSpace, point: &FrontierPoint) -> Result<f64> {
    ensure_aligned(&point.encoder, space.meaning_labels())?;
    let problem = Problem::new(space);
    let s = problem.state(point.encoder.encoder().to_owned());
    let (c, a) = problem.measures(&s);
    let next = problem.update(&s, point.beta);
    let (nc, na) = problem.measures(&next);
    Ok(((nc - point.beta * na) - (c - point.beta * a)).abs())
}

fn best_of(solutions: Vec<Solved>) -> Solved {
    // first minimum by objective; index order breaks ties
    solutions
        .into_iter()
        .reduce(|best, s| if s.objective < best.objective { s } else { best })
        .expect("at least one candidate")
}

/// Traces the frontier over `config.beta_grid`.
pub fn anneal_frontier(space: &MeaningSpace, config: &SolverConfig) -> Result<Frontier> {
    config.validate()?;
    let problem = Problem::new(space);
    let cap = config.max_clusters.unwrap_or(space.num_meanings());
    let mut order: Vec<usize> = (0..config.beta_grid.len()).collect();
    order.sort_by(|&a, &b| config.beta_grid[a].total_cmp(&config.beta_grid[b]));
    if config.anneal_direction == AnnealDirection::HighToLow {
        order.reverse();
    }

    let mut warm = match config.anneal_direction {
        AnnealDirection::HighToLow => initial_encoder(space, cap),
        AnnealDirection::LowToHigh => Array2::ones((space.num_meanings(), 1)),
    };
    let mut points: Vec<Option<FrontierPoint>> = vec![None; config.beta_grid.len()];

    for &bi in &order {
        let beta = config.beta_grid[bi];
        let stream = |r: usize| ((bi as u64) << 32) | r as u64;
        let start = match config.anneal_direction {
            AnnealDirection::HighToLow => warm.clone(),
            AnnealDirection::LowToHigh => split(&warm, cap, config.seed, stream(u32::MAX as usize)),
        };
        let candidates: Vec<Solved> = (0..=config.restarts)
            .into_par_iter()
            .map(|r| {
                let init = if r == 0 { start.clone() } else { perturb(&start, config.seed, stream(r)) };
                problem.iterate(init, beta, config.convergence_tol, config.max_iterations)
            })
            .collect();
        let mut chosen = best_of(candidates);

        if let Some(pruned) = prune_and_merge(&chosen.state, config.mass_prune_threshold) {
            if pruned.ncols() < chosen.state.enc.ncols() {
                let polished = problem.iterate(pruned, beta, config.convergence_tol, config.max_iterations);
                if polished.objective <= chosen.objective + config.convergence_tol {
                    chosen = polished;
                }
            }
        }

        chosen = problem.merge_descent(chosen, beta, config.convergence_tol, config.max_iterations);
        points[bi] = Some(to_point(space, beta, &chosen, config.mass_prune_threshold));
        warm = chosen.state.enc;
    }

    let mut points: Vec<FrontierPoint> = points.into_iter().map(|p| p.expect("every beta solved")).collect();
    points.sort_by(|a, b| a.beta.total_cmp(&b.beta));
    Ok(Frontier { points, space_fingerprint: space.fingerprint(), config: config.clone() })
}

/// Number of words with q(w) strictly above `threshold`.
pub fn effective_category_count(point: &FrontierPoint, need: ArrayView1<'_, f64>, threshold: f64) -> usize {
    kernel::word_mass(need, point.encoder.encoder()).iter().filter(|&&q| q > threshold).count()
}

/// Among points with exactly `k` categories, the one with the highest
/// accuracy (smallest β on ties).
pub fn select_most_informative_with_k<'f>(
    frontier: &'f Frontier,
    space: &MeaningSpace,
    k: usize,
    threshold: f64,
) -> Result<&'f FrontierPoint> {
    if frontier.points.is_empty() {
        return Err(Error::EmptyFrontier);
    }
    let need = space.need().mass();
    let mut best: Option<&FrontierPoint> = None;
    let mut available = std::collections::BTreeSet::new();
    for p in &frontier.points {
        let count = effective_category_count(p, need, threshold);
        available.insert(count);
        if count == k && best.is_none_or(|b| p.accuracy_bits > b.accuracy_bits) {
            best = Some(p);
        }
    }
    best.ok_or(Error::NoPointWithK { k, available: available.into_iter().collect() })
}

/// Applies [`Problem`] updates to an encoder matrix without any bookkeeping;
/// exposed for tests that need a raw step.
pub fn update_encoder(space: &MeaningSpace, encoder: ArrayView2<'_, f64>, beta: f64) -> Array2<f64> {
    let problem = Problem::new(space);
    let s = problem.state(encoder.to_owned());
    problem.update(&s, beta).enc
}
