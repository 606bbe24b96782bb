//! Fixture parsing and golden values computed with the brute-force oracle.
//! Nothing here calls into `ibnaming`.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use ibnaming_oracle as oracle;
use oracle::Matrix;
use serde_json::{json, Value};

pub const CONTAINER_GRID: (f64, usize, f64) = (64.0, 40, 0.1);
pub const ANIMAL_GRID: (f64, usize, f64) = (1024.0, 60, 0.1);
pub const MAX_WORDS: usize = 4;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_path() -> PathBuf {
    fixtures().join("golden.json")
}

fn rows(name: &str, sep: char) -> Vec<Vec<String>> {
    fs::read_to_string(fixtures().join(name))
        .unwrap()
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(sep).map(|c| c.trim().to_owned()).collect())
        .collect()
}

fn numeric(table: &[Vec<String>]) -> (Vec<String>, Vec<String>, Matrix) {
    let header = table[0][1..].to_vec();
    let labels = table[1..].iter().map(|r| r[0].clone()).collect();
    let m = table[1..].iter().map(|r| r[1..].iter().map(|x| x.parse().unwrap()).collect()).collect();
    (header, labels, m)
}

/// Same β grid the CLI's log grid produces: 0, then log-spaced from
/// `min` to `max`.
pub fn log_grid((max, count, min): (f64, usize, f64)) -> Vec<f64> {
    let n = count - 1;
    let mut g = vec![0.0];
    g.extend((0..n).map(|i| (min.ln() + (max.ln() - min.ln()) * i as f64 / (n - 1) as f64).exp()));
    g[n] = max;
    g
}

pub struct Space {
    pub labels: Vec<String>,
    pub universe: Vec<String>,
    pub need: Vec<f64>,
    pub repr: Matrix,
}

/// Containers: softmax of similarity with γ = 1 / population SD of all
/// entries; uniform need.
pub fn containers() -> Space {
    let (universe, labels, sim) = numeric(&rows("container_similarity.csv", ','));
    let all: Vec<f64> = sim.iter().flatten().copied().collect();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let sd = (all.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / all.len() as f64).sqrt();
    let repr = sim
        .iter()
        .map(|r| {
            let e: Vec<f64> = r.iter().map(|x| (x / sd).exp()).collect();
            let z: f64 = e.iter().sum();
            e.into_iter().map(|x| x / z).collect()
        })
        .collect();
    let n = labels.len();
    Space { labels, universe, need: vec![1.0 / n as f64; n], repr }
}

/// Animals: feature rows normalized; need proportional to familiarity.
pub fn animals() -> Space {
    let (universe, labels, feats) = numeric(&rows("animal_features.csv", ','));
    let fam = rows("animal_familiarity.csv", ',');
    let score: Vec<f64> = labels
        .iter()
        .map(|l: &String| fam[1..].iter().find(|r| &r[0] == l).unwrap()[1].parse().unwrap())
        .collect();
    let total: f64 = score.iter().sum();
    let repr = feats
        .iter()
        .map(|r| {
            let s: f64 = r.iter().sum();
            r.iter().map(|x| x / s).collect()
        })
        .collect();
    Space { labels, universe, need: score.iter().map(|s| s / total).collect(), repr }
}

/// Encoder from a counts file restricted to `condition`, rows in `order`,
/// words in order of first appearance.
pub fn counts_encoder(file: &str, condition: &str, order: &[String]) -> Matrix {
    let table = rows(file, '\t');
    let body: Vec<&Vec<String>> = table[1..].iter().filter(|r| r[3] == condition).collect();
    let mut words: Vec<&str> = Vec::new();
    for r in &body {
        if !words.contains(&r[1].as_str()) {
            words.push(&r[1]);
        }
    }
    order
        .iter()
        .map(|m| {
            let mut row = vec![0.0; words.len()];
            for r in body.iter().filter(|r| &r[0] == m) {
                row[words.iter().position(|w| *w == r[1]).unwrap()] += r[2].parse::<f64>().unwrap();
            }
            let s: f64 = row.iter().sum();
            row.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

pub fn mixture(a: &Matrix, b: &Matrix, weight: f64) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().map(|v| v * weight).chain(y.iter().map(|v| v * (1.0 - weight))).collect())
        .collect()
}

pub const SYSTEMS: [(&str, &str, &str); 4] = [
    ("a_mono", "naming_lang_a.tsv", "mono"),
    ("a_bi", "naming_lang_a.tsv", "bi"),
    ("b_mono", "naming_lang_b.tsv", "mono"),
    ("b_bi", "naming_lang_b.tsv", "bi"),
];

pub fn compute_golden() -> Value {
    let c = containers();
    let grid = log_grid(CONTAINER_GRID);
    let mut systems = serde_json::Map::new();
    let mut enc = std::collections::HashMap::new();
    for (name, file, cond) in SYSTEMS {
        let e = counts_encoder(file, cond, &c.labels);
        systems.insert(
            name.into(),
            json!({
                "complexity_bits": oracle::complexity(&e, &c.need),
                "accuracy_bits": oracle::accuracy(&e, &c.need, &c.repr),
            }),
        );
        enc.insert(name, e);
    }
    let containers = json!({
        "betas": grid,
        "best_deterministic_objective": oracle::best_deterministic_objectives(&c.need, &c.repr, MAX_WORDS, &grid),
        "meaning_information_bits": oracle::meaning_information(&c.need, &c.repr),
        "systems": systems,
        "gnid_a_mono_b_mono": oracle::gnid(&enc["a_mono"], &enc["b_mono"], &c.need),
        "gnid_a_bi_b_bi": oracle::gnid(&enc["a_bi"], &enc["b_bi"], &c.need),
        "mixture_mono_bits": oracle::complexity(&mixture(&enc["a_mono"], &enc["b_mono"], 0.5), &c.need),
        "mixture_bi_bits": oracle::complexity(&mixture(&enc["a_bi"], &enc["b_bi"], 0.5), &c.need),
    });

    let a = animals();
    let grid = log_grid(ANIMAL_GRID);
    let mut partitions = serde_json::Map::new();
    for k in 1..=MAX_WORDS {
        let (assign, acc) = oracle::best_hard_partition(&a.need, &a.repr, k);
        let groups: Vec<Vec<&str>> = oracle::canonical_partition(&assign)
            .into_iter()
            .map(|g| g.into_iter().map(|i| a.labels[i].as_str()).collect())
            .collect();
        partitions.insert(k.to_string(), json!({ "accuracy_bits": acc, "groups": groups }));
    }
    let animals = json!({
        "betas": grid,
        "best_deterministic_objective": oracle::best_deterministic_objectives(&a.need, &a.repr, MAX_WORDS, &grid),
        "meaning_information_bits": oracle::meaning_information(&a.need, &a.repr),
        "partitions": partitions,
    });
    json!({ "containers": containers, "animals": animals })
}

pub fn load_golden() -> Value {
    serde_json::from_str(&fs::read_to_string(golden_path()).expect("golden.json missing; run the ignored regenerate test"))
        .unwrap()
}
