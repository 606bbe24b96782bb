//! Scoring naming systems against a frontier: inefficiency, gNID,
//! permutation baselines, bilingual mixtures and category hierarchies.

use std::fmt::Write as _;

use ndarray::{concatenate, Array2, ArrayView1, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::kernel;
use crate::prob::{ensure_aligned, Distribution, MeaningSpace, NamingSystem};
use crate::solver::{select_most_informative_with_k, Frontier, FrontierPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchedPoint {
    pub index: usize,
    pub beta: f64,
    pub complexity_bits: f64,
    pub accuracy_bits: f64,
    pub objective_bits: f64,
    pub effective_k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EfficiencyReport {
    pub complexity_bits: f64,
    pub accuracy_bits: f64,
    pub fitted_beta: f64,
    pub inefficiency_bits: f64,
    pub gnid: f64,
    pub matched_point: MatchedPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineSummary {
    pub num_samples: usize,
    pub inefficiency_mean: f64,
    pub inefficiency_sd: f64,
    pub gnid_mean: f64,
    pub gnid_sd: f64,
    pub seed: u64,
    /// Whether sample 0 was the identity permutation.
    pub include_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryProfile {
    pub word_label: String,
    pub mass: f64,
    pub top_meanings: Vec<(String, f64)>,
    pub top_features: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyLayer {
    pub k: usize,
    pub beta: f64,
    pub complexity_bits: f64,
    pub accuracy_bits: f64,
    pub categories: Vec<CategoryProfile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchyReport {
    pub threshold: f64,
    pub top_n: usize,
    pub layers: Vec<HierarchyLayer>,
}

pub fn check_fingerprint(frontier: &Frontier, space: &MeaningSpace) -> Result<()> {
    let fp = space.fingerprint();
    if frontier.space_fingerprint != fp {
        return Err(Error::FingerprintMismatch { frontier: frontier.space_fingerprint.clone(), space: fp });
    }
    Ok(())
}

/// Fits β_l by minimizing ε(β) = (F_β[q] − F*_β)/β over the frontier's
/// positive grid points; ties go to the smaller β.
pub fn fit_beta(sys: &NamingSystem, space: &MeaningSpace, frontier: &Frontier) -> Result<EfficiencyReport> {
    check_fingerprint(frontier, space)?;
    fit_unchecked(sys, space, frontier)
}

fn fit_unchecked(sys: &NamingSystem, space: &MeaningSpace, frontier: &Frontier) -> Result<EfficiencyReport> {
    ensure_aligned(sys, space.meaning_labels())?;
    let need = space.need().mass();
    let complexity = kernel::complexity(need, sys.encoder());
    let accuracy = kernel::accuracy(need, sys.encoder(), space.matrix());
    let mut best: Option<(usize, f64)> = None;
    for (i, p) in frontier.points.iter().enumerate() {
        if p.beta <= 0.0 {
            continue;
        }
        let eps = (complexity - p.beta * accuracy - p.objective_bits) / p.beta;
        let better = match best {
            None => true,
            Some((j, e)) => eps < e || (eps == e && p.beta < frontier.points[j].beta),
        };
        if better {
            best = Some((i, eps));
        }
    }
    let (index, inefficiency) = best.ok_or(Error::EmptyFrontier)?;
    let p = &frontier.points[index];
    Ok(EfficiencyReport {
        complexity_bits: complexity,
        accuracy_bits: accuracy,
        fitted_beta: p.beta,
        inefficiency_bits: inefficiency,
        gnid: gnid_raw(sys.encoder(), p.encoder.encoder(), need),
        matched_point: MatchedPoint {
            index,
            beta: p.beta,
            complexity_bits: p.complexity_bits,
            accuracy_bits: p.accuracy_bits,
            objective_bits: p.objective_bits,
            effective_k: p.effective_k,
        },
    })
}

fn joint_mi(joint: ArrayView2<'_, f64>) -> f64 {
    let rows = joint.sum_axis(Axis(1));
    let cols = joint.sum_axis(Axis(0));
    let mut mi = 0.0;
    for ((i, j), &v) in joint.indexed_iter() {
        if v > 0.0 {
            mi += v * (v / (rows[i] * cols[j])).log2();
        }
    }
    mi
}

/// p(w1, w2) = sum_m p(m) q1(w1|m) q2(w2|m).
fn pair_joint(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>, need: ArrayView1<'_, f64>) -> Array2<f64> {
    let mut weighted = a.to_owned();
    for (mut row, &p) in weighted.rows_mut().into_iter().zip(need.iter()) {
        row *= p;
    }
    weighted.t().dot(&b)
}

fn gnid_raw(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>, need: ArrayView1<'_, f64>) -> f64 {
    // both orders, so the result is exactly symmetric in floating point
    let cross = 0.5 * (joint_mi(pair_joint(a, b, need).view()) + joint_mi(pair_joint(b, a, need).view()));
    let self_a = joint_mi(pair_joint(a, a, need).view());
    let self_b = joint_mi(pair_joint(b, b, need).view());
    let denom = self_a.max(self_b);
    if denom <= 0.0 {
        return 0.0;
    }
    1.0 - cross / denom
}

/// 1 − I(W1;W2) / max(I(W1;W1'), I(W2;W2')), where primed words are a
/// second independent draw from the same encoder.
pub fn gnid(a: &NamingSystem, b: &NamingSystem, need: &Distribution) -> Result<f64> {
    ensure_aligned(b, a.meaning_labels())?;
    if need.len() != a.num_meanings() {
        return Err(Error::DimensionMismatch(format!(
            "need has {} entries, naming systems have {} meanings",
            need.len(),
            a.num_meanings()
        )));
    }
    Ok(gnid_raw(a.encoder(), b.encoder(), need.mass()))
}

/// Permutation used for baseline sample `index`.
pub fn baseline_permutation(n: usize, seed: u64, index: usize, include_identity: bool) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    if include_identity && index == 0 {
        return perm;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    perm.shuffle(&mut rng);
    perm
}

/// Reports for each hypothetical system q'(w|m) = q(w|π(m)).
pub fn permutation_samples(
    sys: &NamingSystem,
    space: &MeaningSpace,
    frontier: &Frontier,
    num_samples: usize,
    seed: u64,
    include_identity: bool,
) -> Result<Vec<EfficiencyReport>> {
    check_fingerprint(frontier, space)?;
    ensure_aligned(sys, space.meaning_labels())?;
    (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let perm = baseline_permutation(sys.num_meanings(), seed, i, include_identity);
            fit_unchecked(&sys.permute_rows(&perm), space, frontier)
        })
        .collect()
}

fn mean_sd(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

pub fn summarize(reports: &[EfficiencyReport], seed: u64, include_identity: bool) -> BaselineSummary {
    let (inefficiency_mean, inefficiency_sd) = mean_sd(reports.iter().map(|r| r.inefficiency_bits));
    let (gnid_mean, gnid_sd) = mean_sd(reports.iter().map(|r| r.gnid));
    BaselineSummary {
        num_samples: reports.len(),
        inefficiency_mean,
        inefficiency_sd,
        gnid_mean,
        gnid_sd,
        seed,
        include_identity,
    }
}

/// Mean and population SD of inefficiency and gNID over `num_samples`
/// randomly permuted variants of `sys`.
pub fn permutation_baseline(
    sys: &NamingSystem,
    space: &MeaningSpace,
    frontier: &Frontier,
    num_samples: usize,
    seed: u64,
) -> Result<BaselineSummary> {
    if num_samples == 0 {
        return Err(Error::InvalidConfig("num_samples must be at least 1".into()));
    }
    let reports = permutation_samples(sys, space, frontier, num_samples, seed, false)?;
    Ok(summarize(&reports, seed, false))
}

/// Encoder that picks system `a` with probability `weight` and `b`
/// otherwise, over the union of both alphabets with words prefixed by
/// their tag.
pub fn mixture_system(a: &NamingSystem, b: &NamingSystem, weight: f64, tags: (&str, &str)) -> Result<NamingSystem> {
    ensure_aligned(b, a.meaning_labels())?;
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::InvalidConfig(format!("mixture weight must lie in [0, 1], got {weight}")));
    }
    if tags.0 == tags.1 {
        return Err(Error::InvalidConfig("mixture tags must differ".into()));
    }
    let enc = concatenate(Axis(1), &[(&a.encoder() * weight).view(), (&b.encoder() * (1.0 - weight)).view()])
        .expect("same number of rows");
    let words = a
        .word_labels()
        .iter()
        .map(|w| format!("{}:{w}", tags.0))
        .chain(b.word_labels().iter().map(|w| format!("{}:{w}", tags.1)))
        .collect();
    Ok(NamingSystem::new_unchecked(enc, a.meaning_labels().to_vec(), words))
}

/// Complexity of [`mixture_system`].
pub fn mixture_complexity(a: &NamingSystem, b: &NamingSystem, need: &Distribution, weight: f64) -> Result<f64> {
    let mix = mixture_system(a, b, weight, ("A", "B"))?;
    crate::info::complexity(&mix, need)
}

fn top_n(values: impl Iterator<Item = (String, f64)>, n: usize) -> Vec<(String, f64)> {
    let mut v: Vec<(String, f64)> = values.collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1));
    v.truncate(n);
    v
}

/// One profile per category with mass above `threshold`, heaviest first.
pub fn category_profiles(
    point: &FrontierPoint,
    space: &MeaningSpace,
    top: usize,
    threshold: f64,
) -> Result<Vec<CategoryProfile>> {
    let listener = crate::info::bayesian_listener(&point.encoder, space)?;
    let need = space.need().mass();
    let enc = point.encoder.encoder();
    let mut profiles: Vec<CategoryProfile> = (0..enc.ncols())
        .filter(|&w| listener.word_mass.mass()[w] > threshold)
        .map(|w| {
            let qw = listener.word_mass.mass()[w];
            let meanings = space
                .meaning_labels()
                .iter()
                .enumerate()
                .map(|(m, l)| (l.clone(), (need[m] * enc[[m, w]] / qw).min(1.0)));
            let features = space
                .universe_labels()
                .iter()
                .enumerate()
                .map(|(u, l)| (l.clone(), listener.reconstructions[[w, u]]));
            CategoryProfile {
                word_label: point.encoder.word_labels()[w].clone(),
                mass: qw,
                top_meanings: top_n(meanings, top),
                top_features: top_n(features, top),
            }
        })
        .collect();
    profiles.sort_by(|a, b| b.mass.total_cmp(&a.mass));
    Ok(profiles)
}

/// The most informative system with each requested number of categories,
/// in ascending order of k.
pub fn hierarchy_report(
    frontier: &Frontier,
    ks: &[usize],
    space: &MeaningSpace,
    top: usize,
    threshold: f64,
) -> Result<HierarchyReport> {
    check_fingerprint(frontier, space)?;
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    let layers = ks
        .iter()
        .map(|&k| {
            let p = select_most_informative_with_k(frontier, space, k, threshold)?;
            Ok(HierarchyLayer {
                k,
                beta: p.beta,
                complexity_bits: p.complexity_bits,
                accuracy_bits: p.accuracy_bits,
                categories: category_profiles(p, space, top, threshold)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(HierarchyReport { threshold, top_n: top, layers })
}

impl HierarchyReport {
    /// Plain-text table, one block per layer and one row per category.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            let _ = writeln!(
                out,
                "k={}  beta={:.4}  complexity={:.4} bits  accuracy={:.4} bits",
                layer.k, layer.beta, layer.complexity_bits, layer.accuracy_bits
            );
            for c in &layer.categories {
                let fmt = |items: &[(String, f64)]| {
                    items.iter().map(|(l, p)| format!("{l} {p:.3}")).collect::<Vec<_>>().join(", ")
                };
                let _ = writeln!(out, "  {:<8} mass={:.3}", c.word_label, c.mass);
                let _ = writeln!(out, "    meanings: {}", fmt(&c.top_meanings));
                let _ = writeln!(out, "    features: {}", fmt(&c.top_features));
            }
            out.push('\n');
        }
        out
    }
}
