//! Reading and writing the on-disk formats: CSV/TSV inputs, space and
//! encoder matrices, frontiers with their metadata and encoder sidecars.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a
//! written file reads back to identical values and identical inputs give
//! byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};
use crate::ingest::{CountRow, FeatureTable, NamingCounts, SimilarityMatrix};
use crate::prob::{Distribution, NamingSystem, Representations};
use crate::solver::{Frontier, FrontierPoint, SolverConfig};

pub const FRONTIER_COLUMNS: [&str; 7] =
    ["beta", "complexity_bits", "accuracy_bits", "objective_bits", "effective_k", "converged", "iterations"];

/// A delimited file with its header row, all cells trimmed.
#[derive(Debug, Clone)]
pub struct Table {
    pub path: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::Format(format!("{}: {msg}", self.path))
    }

    fn number(&self, row: usize, col: usize) -> Result<f64> {
        let cell = &self.rows[row][col];
        cell.parse::<f64>()
            .map_err(|_| self.err(format_args!("row {}, column {}: {cell:?} is not a number", row + 2, col + 1)))
    }

    fn expect_header(&self, names: &[&str]) -> Result<()> {
        let found: Vec<&str> = self.header.iter().map(String::as_str).collect();
        if found.len() < names.len() || found[..names.len()] != *names {
            return Err(self.err(format_args!("expected header {}, found {}", names.join(","), found.join(","))));
        }
        Ok(())
    }

    /// Numeric block to the right of the first (label) column.
    fn matrix(&self) -> Result<(Vec<String>, Array2<f64>)> {
        let ncols = self.header.len() - 1;
        let mut data = Vec::with_capacity(self.rows.len() * ncols);
        let mut labels = Vec::with_capacity(self.rows.len());
        for (i, row) in self.rows.iter().enumerate() {
            labels.push(row[0].clone());
            for j in 1..=ncols {
                data.push(self.number(i, j)?);
            }
        }
        let m = Array2::from_shape_vec((labels.len(), ncols), data).expect("row lengths checked on read");
        Ok((labels, m))
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), source }
}

/// Reads a CSV, or a TSV when the extension is `.tsv` or the header line
/// contains a tab.
pub fn read_table(path: &Path) -> Result<Table> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let first = text.lines().next().unwrap_or("");
    let tab = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("tsv")) || first.contains('\t');
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(if tab { b'\t' } else { b',' })
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let name = path.display().to_string();
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Format(format!("{name}: {e}")))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header.iter().all(String::is_empty) {
        return Err(Error::Format(format!("{name}: missing header row")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| Error::Format(format!("{name}: {e}")))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec.iter().map(str::to_owned).collect());
    }
    Ok(Table { path: name, header, rows })
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| io_err(path, e))
}

fn csv_line(cells: impl IntoIterator<Item = String>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(cells.into_iter().collect::<Vec<_>>()).expect("writing to memory");
    String::from_utf8(w.into_inner().expect("writing to memory")).expect("utf-8 input")
}

fn matrix_csv(corner: &str, columns: &[String], rows: &[String], m: ndarray::ArrayView2<'_, f64>) -> String {
    let mut out = csv_line(std::iter::once(corner.to_owned()).chain(columns.iter().cloned()));
    for (label, row) in rows.iter().zip(m.rows()) {
        out += &csv_line(std::iter::once(label.clone()).chain(row.iter().map(|x| x.to_string())));
    }
    out
}

pub fn read_similarity(path: &Path) -> Result<SimilarityMatrix> {
    let t = read_table(path)?;
    let (rows, m) = t.matrix()?;
    let cols = &t.header[1..];
    if rows.len() != cols.len() {
        return Err(t.err(format_args!("{} rows but {} columns; the matrix must be square", rows.len(), cols.len())));
    }
    let mismatches: Vec<Violation> = rows
        .iter()
        .zip(cols)
        .enumerate()
        .filter(|(_, (r, c))| r != c)
        .map(|(index, (r, c))| Violation::LabelMismatch { index, expected: c.clone(), found: r.clone() })
        .collect();
    if !mismatches.is_empty() {
        return Err(mismatches.into());
    }
    SimilarityMatrix::new(rows, m)
}

pub fn read_naming_counts(path: &Path) -> Result<NamingCounts> {
    let t = read_table(path)?;
    t.expect_header(&["meaning_label", "word_label", "count"])?;
    let has_condition = t.header.get(3).is_some_and(|h| h == "condition");
    let mut rows = Vec::with_capacity(t.rows.len());
    for (i, r) in t.rows.iter().enumerate() {
        let count = r[2]
            .parse::<u64>()
            .map_err(|_| t.err(format_args!("row {}: count {:?} is not a non-negative integer", i + 2, r[2])))?;
        rows.push(CountRow {
            meaning: r[0].clone(),
            word: r[1].clone(),
            count,
            condition: if has_condition { Some(r[3].clone()) } else { None },
        });
    }
    Ok(NamingCounts { rows })
}

pub fn write_naming_counts(path: &Path, counts: &NamingCounts) -> Result<()> {
    let with_condition = counts.rows.iter().any(|r| r.condition.is_some());
    let mut header = vec!["meaning_label".to_owned(), "word_label".into(), "count".into()];
    if with_condition {
        header.push("condition".into());
    }
    let mut out = csv_line(header);
    for r in &counts.rows {
        let mut cells = vec![r.meaning.clone(), r.word.clone(), r.count.to_string()];
        if with_condition {
            cells.push(r.condition.clone().unwrap_or_default());
        }
        out += &csv_line(cells);
    }
    write_file(path, &out)
}

/// Feature probabilities plus familiarity scores, matched by class label.
pub fn read_features(features: &Path, familiarity: &Path) -> Result<FeatureTable> {
    let t = read_table(features)?;
    let (classes, m) = t.matrix()?;
    let f = read_table(familiarity)?;
    f.expect_header(&["class_label", "score"])?;
    let mut scores = std::collections::HashMap::new();
    for (i, r) in f.rows.iter().enumerate() {
        scores.insert(r[0].clone(), f.number(i, 1)?);
    }
    let fam = classes
        .iter()
        .map(|c| scores.get(c).copied().ok_or_else(|| f.err(format_args!("no familiarity score for class {c:?}"))))
        .collect::<Result<Vec<f64>>>()?;
    FeatureTable::new(classes, t.header[1..].to_vec(), m, Array1::from(fam))
}

/// Returns the prior and whether it had to be renormalized.
pub fn read_prior(path: &Path) -> Result<(Distribution, bool)> {
    let t = read_table(path)?;
    t.expect_header(&["meaning_label", "probability"])?;
    let labels = t.rows.iter().map(|r| r[0].clone()).collect();
    let mass = (0..t.rows.len()).map(|i| t.number(i, 1)).collect::<Result<Vec<f64>>>()?;
    Distribution::from_loaded(labels, Array1::from(mass))
}

pub fn write_prior(path: &Path, prior: &Distribution) -> Result<()> {
    let mut out = csv_line(["meaning_label".to_owned(), "probability".into()]);
    for (l, p) in prior.labels().iter().zip(prior.mass()) {
        out += &csv_line([l.clone(), p.to_string()]);
    }
    write_file(path, &out)
}

/// Returns the representations and the number of rows renormalized.
pub fn read_representations(path: &Path) -> Result<(Representations, usize)> {
    let t = read_table(path)?;
    t.expect_header(&["meaning"])?;
    let (rows, m) = t.matrix()?;
    Representations::from_loaded(m, rows, t.header[1..].to_vec())
}

pub fn write_representations(path: &Path, repr: &Representations) -> Result<()> {
    write_file(path, &matrix_csv("meaning", repr.universe_labels(), repr.meaning_labels(), repr.matrix()))
}

pub fn write_encoder(path: &Path, sys: &NamingSystem) -> Result<()> {
    write_file(path, &matrix_csv("meaning", sys.word_labels(), sys.meaning_labels(), sys.encoder()))
}

/// Reads an encoder matrix. Rows are validated against the tolerance but
/// not rescaled, so written encoders read back bit for bit.
pub fn read_encoder(path: &Path) -> Result<NamingSystem> {
    let t = read_table(path)?;
    t.expect_header(&["meaning"])?;
    let (rows, m) = t.matrix()?;
    NamingSystem::new(m, rows, t.header[1..].to_vec())
}

/// A naming system from either a counts table (`meaning_label, word_label,
/// count[, condition]`) or an encoder matrix. `condition` selects rows of a
/// counts table that carries a condition column.
pub fn read_naming_system(path: &Path, condition: Option<&str>) -> Result<NamingSystem> {
    let t = read_table(path)?;
    if t.header.first().is_some_and(|h| h == "meaning_label") {
        let mut counts = read_naming_counts(path)?;
        if let Some(c) = condition {
            counts = counts.filter_condition(c);
            if counts.rows.is_empty() {
                return Err(t.err(format_args!("no rows with condition {c:?}")));
            }
        }
        crate::ingest::naming_system_from_counts(&counts)
    } else if condition.is_some() {
        Err(t.err("a condition filter only applies to naming counts"))
    } else {
        read_encoder(path)
    }
}

/// Stored next to the frontier CSV as `<stem>.meta.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierMetadata {
    pub tool_version: String,
    pub space_fingerprint: String,
    pub seed: u64,
    pub num_points: usize,
    pub config: SolverConfig,
}

fn sidecar(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn metadata_path(frontier_csv: &Path) -> PathBuf {
    sidecar(frontier_csv, ".meta.json")
}

pub fn encoders_dir(frontier_csv: &Path) -> PathBuf {
    sidecar(frontier_csv, ".encoders")
}

fn encoder_file(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("point_{index:05}.csv"))
}

pub fn frontier_csv(frontier: &Frontier) -> String {
    let mut out = csv_line(FRONTIER_COLUMNS.map(str::to_owned));
    for p in &frontier.points {
        out += &csv_line([
            p.beta.to_string(),
            p.complexity_bits.to_string(),
            p.accuracy_bits.to_string(),
            p.objective_bits.to_string(),
            p.effective_k.to_string(),
            p.converged.to_string(),
            p.iterations.to_string(),
        ]);
    }
    out
}

/// Writes the frontier CSV and its metadata; with `encoders`, also one
/// encoder matrix per point in the sidecar directory (needed to read the
/// frontier back).
pub fn write_frontier(path: &Path, frontier: &Frontier, encoders: bool) -> Result<Vec<PathBuf>> {
    write_file(path, &frontier_csv(frontier))?;
    let meta = FrontierMetadata {
        tool_version: crate::TOOL_VERSION.to_owned(),
        space_fingerprint: frontier.space_fingerprint.clone(),
        seed: frontier.config.seed,
        num_points: frontier.points.len(),
        config: frontier.config.clone(),
    };
    let meta_path = metadata_path(path);
    write_file(&meta_path, &(serde_json::to_string_pretty(&meta)? + "\n"))?;
    let mut written = vec![path.to_path_buf(), meta_path];
    if encoders {
        let dir = encoders_dir(path);
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(|e| io_err(&dir, e))?;
        }
        for (i, p) in frontier.points.iter().enumerate() {
            write_encoder(&encoder_file(&dir, i), &p.encoder)?;
        }
        written.push(dir);
    }
    Ok(written)
}

pub fn read_frontier_metadata(path: &Path) -> Result<FrontierMetadata> {
    let meta_path = metadata_path(path);
    let text = fs::read_to_string(&meta_path).map_err(|e| io_err(&meta_path, e))?;
    Ok(serde_json::from_str(&text)?)
}

/// Reads a frontier written by [`write_frontier`] with encoders.
pub fn read_frontier(path: &Path) -> Result<Frontier> {
    let meta = read_frontier_metadata(path)?;
    let t = read_table(path)?;
    t.expect_header(&FRONTIER_COLUMNS)?;
    if t.rows.len() != meta.num_points {
        return Err(t.err(format_args!("{} rows but metadata records {} points", t.rows.len(), meta.num_points)));
    }
    let dir = encoders_dir(path);
    let mut points = Vec::with_capacity(t.rows.len());
    for (i, r) in t.rows.iter().enumerate() {
        let int = |j: usize| {
            r[j].parse::<usize>().map_err(|_| t.err(format_args!("row {}: bad integer {:?}", i + 2, r[j])))
        };
        let converged = match r[5].as_str() {
            "true" => true,
            "false" => false,
            other => return Err(t.err(format_args!("row {}: bad boolean {other:?}", i + 2))),
        };
        let file = encoder_file(&dir, i);
        if !file.exists() {
            return Err(Error::Format(format!("{}: missing encoder file for point {i}", file.display())));
        }
        points.push(FrontierPoint {
            beta: t.number(i, 0)?,
            complexity_bits: t.number(i, 1)?,
            accuracy_bits: t.number(i, 2)?,
            objective_bits: t.number(i, 3)?,
            effective_k: int(4)?,
            encoder: read_encoder(&file)?,
            converged,
            iterations: int(6)?,
        });
    }
    if points.is_empty() {
        return Err(Error::EmptyFrontier);
    }
    Ok(Frontier { points, space_fingerprint: meta.space_fingerprint, config: meta.config })
}
