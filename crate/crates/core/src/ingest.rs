//! Building meaning spaces, needs and naming systems from raw domain data.

use std::collections::HashMap;

use ndarray::{Array1, Array2};

use crate::error::{Error, Result, Violation};
use crate::prob::{Distribution, MeaningSpace, NamingSystem, Representations};

const SYMMETRY_TOL: f64 = 1e-9;

/// Residual below which the max-entropy prior's constraints count as met.
pub const SCALING_TOL: f64 = 1e-9;
pub const SCALING_MAX_ITERATIONS: usize = 100_000;
const SCALING_DAMPING: f64 = 0.5; // backtracking factor

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    labels: Vec<String>,
    values: Array2<f64>,
}

impl SimilarityMatrix {
    pub fn new(labels: Vec<String>, values: Array2<f64>) -> Result<Self> {
        let mut v = Vec::new();
        let n = values.nrows();
        if n == 0 {
            v.push(Violation::Empty { what: "similarity matrix" });
        }
        if values.ncols() != n {
            return Err(Error::Format(format!("similarity matrix is {}x{}, expected square", n, values.ncols())));
        }
        if labels.len() != n {
            v.push(Violation::LabelCount { what: "similarity labels", expected: n, found: labels.len() });
        }
        for ((i, j), &x) in values.indexed_iter() {
            if !x.is_finite() {
                v.push(Violation::NonFinite { what: "similarity", row: i, col: j });
            } else if x < 0.0 {
                v.push(Violation::Negative { what: "similarity", row: i, col: j, value: x });
            } else if j > i && (x - values[[j, i]]).abs() > SYMMETRY_TOL {
                return Err(Error::Format(format!(
                    "similarity matrix is not symmetric at ({i}, {j}): {x} vs {}",
                    values[[j, i]]
                )));
            }
        }
        if v.is_empty() {
            Ok(Self { labels, values })
        } else {
            Err(v.into())
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gamma {
    /// γ = 1 / population SD of the similarity entries.
    InverseSd { include_diagonal: bool },
    Explicit(f64),
}

impl Default for Gamma {
    fn default() -> Self {
        Gamma::InverseSd { include_diagonal: true }
    }
}

pub fn gamma_from_sd(sim: &SimilarityMatrix, include_diagonal: bool) -> Result<f64> {
    let vals: Vec<f64> = sim
        .values
        .indexed_iter()
        .filter(|((i, j), _)| include_diagonal || i != j)
        .map(|(_, &x)| x)
        .collect();
    if vals.is_empty() {
        return Err(Error::UndefinedGamma);
    }
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let sd = (vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    if !(sd > 0.0) {
        return Err(Error::UndefinedGamma);
    }
    Ok(1.0 / sd)
}

/// m_c(u) ∝ exp(γ sim(c, u)), with the universe equal to the item set.
pub fn meaning_space_from_similarity(sim: &SimilarityMatrix, gamma: Gamma) -> Result<Representations> {
    let gamma = match gamma {
        Gamma::InverseSd { include_diagonal } => gamma_from_sd(sim, include_diagonal)?,
        Gamma::Explicit(g) if g.is_finite() => g,
        Gamma::Explicit(g) => return Err(Error::InvalidConfig(format!("gamma must be finite, got {g}"))),
    };
    let mut m = sim.values.mapv(|x| gamma * x);
    for mut row in m.rows_mut() {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|x| (x - max).exp());
        let s = row.sum();
        row /= s;
    }
    Representations::new(m, sim.labels.clone(), sim.labels.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub meaning: String,
    pub word: String,
    pub count: u64,
    pub condition: Option<String>,
}

/// Naming responses for one or more conditions (language × speaker group).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NamingCounts {
    pub rows: Vec<CountRow>,
}

impl NamingCounts {
    pub fn conditions(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for r in &self.rows {
            if let Some(c) = &r.condition {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        }
        out
    }

    pub fn filter_condition(&self, condition: &str) -> Self {
        Self { rows: self.rows.iter().filter(|r| r.condition.as_deref() == Some(condition)).cloned().collect() }
    }
}

/// q(w|m) = count(m, w) / sum_w' count(m, w'). Meanings and words keep the
/// order of first appearance; repeated (meaning, word) rows are added.
pub fn naming_system_from_counts(counts: &NamingCounts) -> Result<NamingSystem> {
    if counts.rows.is_empty() {
        return Err(Error::Format("naming counts are empty".into()));
    }
    let mut meanings: Vec<String> = Vec::new();
    let mut words: Vec<String> = Vec::new();
    let mut mi: HashMap<&str, usize> = HashMap::new();
    let mut wi: HashMap<&str, usize> = HashMap::new();
    for r in &counts.rows {
        mi.entry(&r.meaning).or_insert_with(|| {
            meanings.push(r.meaning.clone());
            meanings.len() - 1
        });
        wi.entry(&r.word).or_insert_with(|| {
            words.push(r.word.clone());
            words.len() - 1
        });
    }
    let mut table = Array2::<f64>::zeros((meanings.len(), words.len()));
    for r in &counts.rows {
        table[[mi[r.meaning.as_str()], wi[r.word.as_str()]]] += r.count as f64;
    }
    let total = table.sum();
    let freq = table.sum_axis(ndarray::Axis(0)) / total;
    for (i, mut row) in table.rows_mut().into_iter().enumerate() {
        let s = row.sum();
        if s <= 0.0 {
            return Err(Error::ZeroCountMeaning(meanings[i].clone()));
        }
        row /= s;
    }
    NamingSystem::new(table, meanings, words)?.with_word_frequency(freq)
}

/// Maximum-entropy p(m) subject to sum_m p(m) q(w|m) = p̂(w) for every word,
/// where p̂ is the system's observed word frequency. The solution has the
/// form p(m) ∝ exp(sum_w λ_w q(w|m)); λ minimizes the convex dual
/// log Z(λ) - λ·p̂, found here by Newton steps with backtracking.
pub fn max_entropy_prior(sys: &NamingSystem) -> Result<Array1<f64>> {
    let enc = sys.encoder();
    let target = sys.word_frequency();
    let n = sys.num_words();
    let dual = |lambda: &Array1<f64>| -> (f64, Array1<f64>) {
        let logits = enc.dot(lambda);
        let max = logits.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        let mut p = logits.mapv(|x| (x - max).exp());
        let z = p.sum();
        p /= z;
        (max + z.ln() - lambda.dot(&target), p)
    };
    let mut lambda = Array1::<f64>::zeros(n);
    let (mut value, mut p) = dual(&lambda);
    let mut residual = f64::INFINITY;
    for _ in 0..SCALING_MAX_ITERATIONS {
        let expected = p.dot(&enc);
        let grad = &expected - &target;
        residual = grad.iter().fold(0.0, |a: f64, g| a.max(g.abs()));
        if residual < SCALING_TOL {
            return Ok(p);
        }
        // covariance of the word indicators under p, plus a ridge for the
        // direction along which λ is unidentified
        let weighted = &enc * &p.view().insert_axis(ndarray::Axis(1));
        let mut hess = enc.t().dot(&weighted);
        for i in 0..n {
            for j in 0..n {
                hess[[i, j]] -= expected[i] * expected[j];
            }
            hess[[i, i]] += 1e-12;
        }
        let step = cholesky_solve(hess, &grad).unwrap_or_else(|| grad.clone());
        let slope = grad.dot(&step);
        let mut t = 1.0;
        loop {
            let cand = &lambda - &(t * &step);
            let (v, q) = dual(&cand);
            // near the optimum the dual decrease falls below rounding, so a
            // smaller constraint residual also qualifies
            let r = (q.dot(&enc) - &target).iter().fold(0.0, |a: f64, g| a.max(g.abs()));
            if v <= value - 1e-4 * t * slope || r < residual || t < 1e-12 {
                lambda = cand;
                value = v;
                p = q;
                break;
            }
            t *= SCALING_DAMPING;
        }
    }
    Err(Error::ScalingDiverged { iterations: SCALING_MAX_ITERATIONS, residual })
}

fn cholesky_solve(mut a: Array2<f64>, b: &Array1<f64>) -> Option<Array1<f64>> {
    let n = b.len();
    for j in 0..n {
        let d = a[[j, j]] - (0..j).map(|k| a[[j, k]] * a[[j, k]]).sum::<f64>();
        if !(d > 0.0) {
            return None;
        }
        a[[j, j]] = d.sqrt();
        for i in j + 1..n {
            a[[i, j]] = (a[[i, j]] - (0..j).map(|k| a[[i, k]] * a[[j, k]]).sum::<f64>()) / a[[j, j]];
        }
    }
    let mut y = b.clone();
    for i in 0..n {
        y[i] = (y[i] - (0..i).map(|k| a[[i, k]] * y[k]).sum::<f64>()) / a[[i, i]];
    }
    for i in (0..n).rev() {
        y[i] = (y[i] - (i + 1..n).map(|k| a[[k, i]] * y[k]).sum::<f64>()) / a[[i, i]];
    }
    Some(y)
}

/// Least-informative need: per-system max-entropy priors averaged with
/// equal weights, plus `epsilon` on every entry, renormalized.
pub fn li_prior(systems: &[NamingSystem], epsilon: f64) -> Result<Distribution> {
    let first = systems.first().ok_or_else(|| Error::Format("no naming systems given".into()))?;
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidConfig(format!("epsilon must be non-negative, got {epsilon}")));
    }
    for s in &systems[1..] {
        crate::prob::ensure_aligned(s, first.meaning_labels())?;
    }
    let mut avg = Array1::<f64>::zeros(first.num_meanings());
    for s in systems {
        avg += &max_entropy_prior(s)?;
    }
    avg /= systems.len() as f64;
    avg += epsilon;
    let total = avg.sum();
    avg /= total;
    Distribution::new(first.meaning_labels().to_vec(), avg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    class_labels: Vec<String>,
    feature_labels: Vec<String>,
    probabilities: Array2<f64>,
    familiarity: Array1<f64>,
}

impl FeatureTable {
    pub fn new(
        class_labels: Vec<String>,
        feature_labels: Vec<String>,
        probabilities: Array2<f64>,
        familiarity: Array1<f64>,
    ) -> Result<Self> {
        let mut v = Vec::new();
        let (n, f) = probabilities.dim();
        if class_labels.len() != n {
            v.push(Violation::LabelCount { what: "class labels", expected: n, found: class_labels.len() });
        }
        if feature_labels.len() != f {
            v.push(Violation::LabelCount { what: "feature labels", expected: f, found: feature_labels.len() });
        }
        if familiarity.len() != n {
            v.push(Violation::LabelCount { what: "familiarity", expected: n, found: familiarity.len() });
        }
        for ((i, j), &x) in probabilities.indexed_iter() {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::Format(format!("feature probability {x} at row {i}, column {j} is outside [0, 1]")));
            }
        }
        for (i, &x) in familiarity.iter().enumerate() {
            if !x.is_finite() || x < 0.0 {
                v.push(Violation::Negative { what: "familiarity", row: i, col: 0, value: x });
            }
        }
        if v.is_empty() {
            Ok(Self { class_labels, feature_labels, probabilities, familiarity })
        } else {
            Err(v.into())
        }
    }

    pub fn class_labels(&self) -> &[String] {
        &self.class_labels
    }

    pub fn feature_labels(&self) -> &[String] {
        &self.feature_labels
    }
}

/// Rows p(u|c) renormalized; need proportional to familiarity.
pub fn meaning_space_from_features(table: &FeatureTable) -> Result<MeaningSpace> {
    let mut m = table.probabilities.clone();
    for (i, mut row) in m.rows_mut().into_iter().enumerate() {
        let s = row.sum();
        if s <= 0.0 {
            return Err(Error::AllZeroClass(table.class_labels[i].clone()));
        }
        row /= s;
    }
    let total = table.familiarity.sum();
    if !(total > 0.0) {
        return Err(Error::Format("familiarity scores are all zero".into()));
    }
    let need = Distribution::new(table.class_labels.clone(), &table.familiarity / total)?;
    let repr = Representations::new(m, table.class_labels.clone(), table.feature_labels.clone())?;
    MeaningSpace::new(repr, need)
}

#[derive(Debug, Clone)]
pub enum NeedSpec {
    Uniform,
    Given(Distribution),
}

pub fn attach_need(repr: Representations, need: NeedSpec) -> Result<MeaningSpace> {
    let need = match need {
        NeedSpec::Uniform => Distribution::uniform(repr.meaning_labels().to_vec()),
        NeedSpec::Given(d) => {
            if d.len() != repr.num_meanings() {
                return Err(Error::DimensionMismatch(format!(
                    "need has {} entries, space has {} meanings",
                    d.len(),
                    repr.num_meanings()
                )));
            }
            d
        }
    };
    MeaningSpace::new(repr, need)
}
