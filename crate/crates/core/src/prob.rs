//! Probability objects: distributions, meaning spaces and naming systems.
//!
//! Constructors validate; `*_unchecked` constructors exist so callers (and
//! the `validate_*` functions) can inspect malformed data without panicking.

use std::collections::HashSet;

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result, Violation};

/// Row sums must be within this distance of 1.
pub const PROB_TOL: f64 = 1e-9;

/// Entries below this are treated as exact zeros when data is loaded.
pub const ZERO_FLOOR: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    mass: Array1<f64>,
}

impl Distribution {
    pub fn new(labels: Vec<String>, mass: Array1<f64>) -> Result<Self> {
        let d = Self::new_unchecked(labels, mass);
        let v = d.violations("distribution");
        if v.is_empty() {
            Ok(d)
        } else {
            Err(v.into())
        }
    }

    pub fn new_unchecked(labels: Vec<String>, mass: Array1<f64>) -> Self {
        Self { labels, mass }
    }

    pub fn uniform(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self { labels, mass: Array1::from_elem(n, 1.0 / n as f64) }
    }

    pub fn point_mass(labels: Vec<String>, index: usize) -> Self {
        let mut mass = Array1::zeros(labels.len());
        mass[index] = 1.0;
        Self { labels, mass }
    }

    /// Builds a distribution from data read off disk: entries below
    /// [`ZERO_FLOOR`] become zero, the sum is checked against [`PROB_TOL`],
    /// then the mass is divided by its sum once. Returns whether that
    /// division changed anything.
    pub fn from_loaded(labels: Vec<String>, mut mass: Array1<f64>) -> Result<(Self, bool)> {
        mass.mapv_inplace(|x| if x.abs() < ZERO_FLOOR { 0.0 } else { x });
        let d = Self::new(labels, mass)?;
        let sum = d.mass.sum();
        if sum == 1.0 {
            return Ok((d, false));
        }
        let mass = d.mass / sum;
        Ok((Self { labels: d.labels, mass }, true))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mass(&self) -> ArrayView1<'_, f64> {
        self.mass.view()
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    fn violations(&self, what: &'static str) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.mass.is_empty() {
            out.push(Violation::Empty { what });
            return out;
        }
        if self.labels.len() != self.mass.len() {
            out.push(Violation::LabelCount { what, expected: self.mass.len(), found: self.labels.len() });
        }
        check_unique(&self.labels, what, &mut out);
        check_row(self.mass.view(), 0, what, &mut out);
        out
    }
}

/// Mental representations m_c(u): one distribution over the feature
/// universe per meaning, without a need distribution attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Representations {
    matrix: Array2<f64>,
    meaning_labels: Vec<String>,
    universe_labels: Vec<String>,
}

impl Representations {
    pub fn new(
        matrix: Array2<f64>,
        meaning_labels: Vec<String>,
        universe_labels: Vec<String>,
    ) -> Result<Self> {
        let r = Self::new_unchecked(matrix, meaning_labels, universe_labels);
        let v = r.violations();
        if v.is_empty() {
            Ok(r)
        } else {
            Err(v.into())
        }
    }

    pub fn new_unchecked(
        matrix: Array2<f64>,
        meaning_labels: Vec<String>,
        universe_labels: Vec<String>,
    ) -> Self {
        Self { matrix, meaning_labels, universe_labels }
    }

    /// Load-time construction; see [`Distribution::from_loaded`]. Returns the
    /// number of rows that were rescaled.
    pub fn from_loaded(
        mut matrix: Array2<f64>,
        meaning_labels: Vec<String>,
        universe_labels: Vec<String>,
    ) -> Result<(Self, usize)> {
        matrix.mapv_inplace(|x| if x.abs() < ZERO_FLOOR { 0.0 } else { x });
        let mut r = Self::new(matrix, meaning_labels, universe_labels)?;
        let mut rescaled = 0;
        for mut row in r.matrix.rows_mut() {
            let s = row.sum();
            if s != 1.0 {
                row /= s;
                rescaled += 1;
            }
        }
        Ok((r, rescaled))
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.matrix.view()
    }

    pub fn meaning_labels(&self) -> &[String] {
        &self.meaning_labels
    }

    pub fn universe_labels(&self) -> &[String] {
        &self.universe_labels
    }

    pub fn num_meanings(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_universe(&self) -> usize {
        self.matrix.ncols()
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.matrix.nrows() == 0 {
            out.push(Violation::Empty { what: "meanings" });
        }
        if self.matrix.ncols() == 0 {
            out.push(Violation::Empty { what: "universe" });
        }
        if self.meaning_labels.len() != self.matrix.nrows() {
            out.push(Violation::LabelCount {
                what: "meaning labels",
                expected: self.matrix.nrows(),
                found: self.meaning_labels.len(),
            });
        }
        if self.universe_labels.len() != self.matrix.ncols() {
            out.push(Violation::LabelCount {
                what: "universe labels",
                expected: self.matrix.ncols(),
                found: self.universe_labels.len(),
            });
        }
        check_unique(&self.meaning_labels, "meaning labels", &mut out);
        check_unique(&self.universe_labels, "universe labels", &mut out);
        if self.matrix.ncols() > 0 {
            for (i, row) in self.matrix.rows().into_iter().enumerate() {
                check_row(row, i, "representations", &mut out);
            }
        }
        out
    }
}

/// Representations plus a need distribution p(m) over the meanings.
#[derive(Debug, Clone)]
pub struct MeaningSpace {
    repr: Representations,
    need: Distribution,
    meaning_information: f64,
}

impl MeaningSpace {
    pub fn new(repr: Representations, need: Distribution) -> Result<Self> {
        let s = Self::new_unchecked(repr, need);
        validate_meaning_space(&s)?;
        Ok(s.with_cached_information())
    }

    /// Skips validation. The cached I(M;U) is left at NaN until the space
    /// passes [`MeaningSpace::new`].
    pub fn new_unchecked(repr: Representations, need: Distribution) -> Self {
        Self { repr, need, meaning_information: f64::NAN }
    }

    fn with_cached_information(mut self) -> Self {
        self.meaning_information =
            crate::info::kernel::meaning_information(self.need.mass(), self.repr.matrix());
        self
    }

    pub fn representations(&self) -> &Representations {
        &self.repr
    }

    pub fn matrix(&self) -> ArrayView2<'_, f64> {
        self.repr.matrix()
    }

    pub fn need(&self) -> &Distribution {
        &self.need
    }

    pub fn meaning_labels(&self) -> &[String] {
        self.repr.meaning_labels()
    }

    pub fn universe_labels(&self) -> &[String] {
        self.repr.universe_labels()
    }

    pub fn num_meanings(&self) -> usize {
        self.repr.num_meanings()
    }

    pub fn num_universe(&self) -> usize {
        self.repr.num_universe()
    }

    /// I(M;U) in bits, computed once at construction.
    pub fn meaning_information(&self) -> f64 {
        self.meaning_information
    }

    /// The prior reconstruction m_0(u) = sum_m p(m) m(u).
    pub fn prior_representation(&self) -> Array1<f64> {
        self.need.mass().dot(&self.repr.matrix())
    }

    /// SHA-256 over labels, representation values and need, as lowercase hex.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for labels in [self.repr.meaning_labels(), self.repr.universe_labels()] {
            for l in labels {
                h.update(l.as_bytes());
                h.update([0x1f]);
            }
            h.update([0x1e]);
        }
        for &x in self.repr.matrix().iter() {
            h.update(x.to_le_bytes());
        }
        h.update([0x1e]);
        for &x in self.need.mass().iter() {
            h.update(x.to_le_bytes());
        }
        hex::encode(h.finalize())
    }
}

/// Encoder q(w|m) from meanings to words.
#[derive(Debug, Clone, PartialEq)]
pub struct NamingSystem {
    encoder: Array2<f64>,
    word_labels: Vec<String>,
    meaning_labels: Vec<String>,
    word_frequency: Option<Array1<f64>>,
}

impl NamingSystem {
    pub fn new(encoder: Array2<f64>, meaning_labels: Vec<String>, word_labels: Vec<String>) -> Result<Self> {
        let s = Self::new_unchecked(encoder, meaning_labels, word_labels);
        let v = s.violations();
        if v.is_empty() {
            Ok(s)
        } else {
            Err(v.into())
        }
    }

    pub fn new_unchecked(encoder: Array2<f64>, meaning_labels: Vec<String>, word_labels: Vec<String>) -> Self {
        Self { encoder, word_labels, meaning_labels, word_frequency: None }
    }

    /// One word per meaning, named after the meaning.
    pub fn identity(meaning_labels: &[String]) -> Self {
        let n = meaning_labels.len();
        Self::new_unchecked(Array2::eye(n), meaning_labels.to_vec(), meaning_labels.to_vec())
    }

    /// A single word used for every meaning.
    pub fn constant(meaning_labels: &[String], word: &str) -> Self {
        Self::new_unchecked(
            Array2::ones((meaning_labels.len(), 1)),
            meaning_labels.to_vec(),
            vec![word.to_string()],
        )
    }

    /// Attaches the empirical word frequency p̂(w) observed in naming data.
    pub fn with_word_frequency(mut self, freq: Array1<f64>) -> Result<Self> {
        if freq.len() != self.num_words() {
            return Err(Error::DimensionMismatch(format!(
                "word frequency has {} entries for {} words",
                freq.len(),
                self.num_words()
            )));
        }
        self.word_frequency = Some(freq);
        Ok(self)
    }

    /// The empirical word frequency if one was recorded, else the
    /// unweighted mean of the encoder rows.
    pub fn word_frequency(&self) -> Array1<f64> {
        match &self.word_frequency {
            Some(f) => f.clone(),
            None => self.encoder.mean_axis(Axis(0)).unwrap_or_default(),
        }
    }

    pub fn encoder(&self) -> ArrayView2<'_, f64> {
        self.encoder.view()
    }

    pub fn word_labels(&self) -> &[String] {
        &self.word_labels
    }

    pub fn meaning_labels(&self) -> &[String] {
        &self.meaning_labels
    }

    pub fn num_meanings(&self) -> usize {
        self.encoder.nrows()
    }

    pub fn num_words(&self) -> usize {
        self.encoder.ncols()
    }

    /// Same words, rows reordered so meanings follow `order`.
    pub fn reorder_meanings(&self, order: &[String]) -> Result<Self> {
        if order.len() != self.meaning_labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "naming system has {} meanings, target order has {}",
                self.meaning_labels.len(),
                order.len()
            )));
        }
        let idx: Vec<usize> = order
            .iter()
            .map(|l| {
                self.meaning_labels
                    .iter()
                    .position(|m| m == l)
                    .ok_or_else(|| Error::Format(format!("meaning {l:?} missing from naming system")))
            })
            .collect::<Result<_>>()?;
        let encoder = self.encoder.select(Axis(0), &idx);
        Ok(Self {
            encoder,
            word_labels: self.word_labels.clone(),
            meaning_labels: order.to_vec(),
            word_frequency: self.word_frequency.clone(),
        })
    }

    /// Same meanings, rows permuted: row m of the result is row `perm[m]`
    /// of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        Self {
            encoder: self.encoder.select(Axis(0), perm),
            word_labels: self.word_labels.clone(),
            meaning_labels: self.meaning_labels.clone(),
            word_frequency: None,
        }
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.encoder.nrows() == 0 {
            out.push(Violation::Empty { what: "meanings" });
        }
        if self.encoder.ncols() == 0 {
            out.push(Violation::Empty { what: "words" });
        }
        if self.meaning_labels.len() != self.encoder.nrows() {
            out.push(Violation::LabelCount {
                what: "meaning labels",
                expected: self.encoder.nrows(),
                found: self.meaning_labels.len(),
            });
        }
        if self.word_labels.len() != self.encoder.ncols() {
            out.push(Violation::LabelCount {
                what: "word labels",
                expected: self.encoder.ncols(),
                found: self.word_labels.len(),
            });
        }
        check_unique(&self.word_labels, "word labels", &mut out);
        if self.encoder.ncols() > 0 {
            for (i, row) in self.encoder.rows().into_iter().enumerate() {
                check_row(row, i, "encoder", &mut out);
            }
        }
        out
    }
}

fn check_unique(labels: &[String], what: &'static str, out: &mut Vec<Violation>) {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            out.push(Violation::DuplicateLabel { what, label: l.clone() });
        }
    }
}

fn check_row(row: ArrayView1<'_, f64>, index: usize, what: &'static str, out: &mut Vec<Violation>) {
    let mut ok = true;
    for (j, &x) in row.iter().enumerate() {
        if !x.is_finite() {
            out.push(Violation::NonFinite { what, row: index, col: j });
            ok = false;
        } else if x < 0.0 {
            out.push(Violation::Negative { what, row: index, col: j, value: x });
            ok = false;
        }
    }
    let sum = row.sum();
    if ok && (sum - 1.0).abs() > PROB_TOL {
        out.push(Violation::RowSum { what, row: index, sum });
    }
}

/// Every invariant violation of a meaning space, or `Ok(())`.
pub fn validate_meaning_space(space: &MeaningSpace) -> Result<(), Vec<Violation>> {
    let mut out = space.repr.violations();
    let need = &space.need;
    if need.len() != space.repr.num_meanings() {
        out.push(Violation::LabelCount {
            what: "need",
            expected: space.repr.num_meanings(),
            found: need.len(),
        });
    } else {
        out.extend(need.violations("need"));
        for (i, (a, b)) in space.repr.meaning_labels.iter().zip(need.labels()).enumerate() {
            if a != b {
                out.push(Violation::LabelMismatch { index: i, expected: a.clone(), found: b.clone() });
                break;
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Every invariant violation of `sys` as a naming system over `space`'s
/// meanings, or `Ok(())`.
pub fn validate_naming_system(sys: &NamingSystem, space: &MeaningSpace) -> Result<(), Vec<Violation>> {
    let mut out = sys.violations();
    check_alignment(sys.meaning_labels(), space.meaning_labels(), &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_alignment(found: &[String], expected: &[String], out: &mut Vec<Violation>) {
    if found.len() != expected.len() {
        out.push(Violation::LabelCount { what: "meaning labels", expected: expected.len(), found: found.len() });
        return;
    }
    if let Some(i) = found.iter().zip(expected).position(|(a, b)| a != b) {
        out.push(Violation::LabelMismatch { index: i, expected: expected[i].clone(), found: found[i].clone() });
    }
}

pub(crate) fn ensure_aligned(sys: &NamingSystem, labels: &[String]) -> Result<()> {
    let mut out = Vec::new();
    check_alignment(sys.meaning_labels(), labels, &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out.into())
    }
}

/// q(w) = sum_m p(m) q(w|m).
pub fn marginal_word_distribution(sys: &NamingSystem, need: &Distribution) -> Result<Distribution> {
    if need.len() != sys.num_meanings() {
        return Err(Error::DimensionMismatch(format!(
            "need has {} entries, naming system has {} meanings",
            need.len(),
            sys.num_meanings()
        )));
    }
    Ok(Distribution::new_unchecked(sys.word_labels.clone(), need.mass().dot(&sys.encoder())))
}

pub fn labels<I, S>(items: I) -> Vec<String>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}
