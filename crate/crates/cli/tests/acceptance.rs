//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails. Dataset-dependent criteria run only when
//! `IBNAMING_CONTAINER_DATA` / `IBNAMING_ANIMAL_DATA` point at the data.

mod common;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use ibnaming::analysis;
use ibnaming::info;
use ibnaming::io::read_frontier;
use ibnaming::solver::{anneal_frontier, fixed_point_residual, log_beta_grid, SolverConfig};
use ibnaming::{Distribution, Frontier, MeaningSpace, NamingSystem, Representations};
use ibnaming_oracle as oracle;
use ndarray::{Array1, Array2};
use serde_json::Value;

const INSTANCES: usize = 200;
const ORACLE_INSTANCES: usize = 20;
const ORACLE_BETAS: [f64; 10] = [0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 16.0, 32.0];

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn names(n: usize, p: &str) -> Vec<String> {
    (0..n).map(|i| format!("{p}{i}")).collect()
}

fn to_array(m: &oracle::Matrix) -> Array2<f64> {
    Array2::from_shape_fn((m.len(), m[0].len()), |(i, j)| m[i][j])
}

fn space_from(need: &[f64], repr: &oracle::Matrix) -> MeaningSpace {
    let (m, u) = (need.len(), repr[0].len());
    MeaningSpace::new(
        Representations::new(to_array(repr), names(m, "m"), names(u, "u")).unwrap(),
        Distribution::new(names(m, "m"), Array1::from(need.to_vec())).unwrap(),
    )
    .unwrap()
}

/// Random encoder with some exact zeros.
fn random_encoder(rng: &mut oracle::SplitMix, m: usize, w: usize) -> oracle::Matrix {
    (0..m)
        .map(|_| {
            let mut row = rng.simplex(w);
            for x in row.iter_mut() {
                if rng.uniform() < 0.25 {
                    *x = 0.0;
                }
            }
            let s: f64 = row.iter().sum();
            if s == 0.0 {
                row[rng.below(w)] = 1.0;
                return row;
            }
            row.into_iter().map(|x| x / s).collect()
        })
        .collect()
}

fn system(enc: &oracle::Matrix) -> NamingSystem {
    NamingSystem::new(to_array(enc), names(enc.len(), "m"), names(enc[0].len(), "w")).unwrap()
}

fn property_suite(frontiers: &mut Vec<(MeaningSpace, Frontier)>) -> Outcome {
    let mut rng = oracle::SplitMix(0x5eed);
    let mut failures: Vec<String> = Vec::new();
    let mut fail = |name: &str, i: usize, detail: String| {
        if failures.len() < 10 {
            failures.push(format!("{name} #{i}: {detail}"));
        }
    };
    for i in 0..INSTANCES {
        let (m, u, w) = (2 + rng.below(5), 2 + rng.below(5), 1 + rng.below(5));
        let (need, repr) = oracle::random_instance(&mut rng, m, u);
        let space = space_from(&need, &repr);
        let enc = random_encoder(&mut rng, m, w);
        let sys = system(&enc);
        let c = info::complexity(&sys, space.need()).unwrap();
        let a = info::accuracy(&sys, &space).unwrap();
        let imu = space.meaning_information();
        if a > c + 1e-12 || a > imu + 1e-12 {
            fail("data processing", i, format!("accuracy {a} complexity {c} I(M;U) {imu}"));
        }
        let d = info::expected_distortion(&sys, &space).unwrap();
        if (imu - a - d).abs() >= 1e-9 {
            fail("distortion identity", i, format!("gap {}", imu - a - d));
        }

        let p = Distribution::new(names(u, "u"), Array1::from(rng.simplex(u))).unwrap();
        let q = Distribution::new(names(u, "u"), Array1::from(rng.simplex(u))).unwrap();
        let kl = info::kl_divergence(&p, &q).unwrap();
        let kl_self = info::kl_divergence(&p, &p).unwrap();
        if kl < 0.0 || kl_self.abs() > 1e-15 {
            fail("KL non-negativity", i, format!("D[p||q] {kl}, D[p||p] {kl_self}"));
        }

        let mut perm: Vec<usize> = (0..w).collect();
        for k in (1..w).rev() {
            perm.swap(k, rng.below(k + 1));
        }
        let permuted: oracle::Matrix = enc.iter().map(|r| perm.iter().map(|&j| r[j]).collect()).collect();
        let cp = info::complexity(&system(&permuted), space.need()).unwrap();
        if (c - cp).abs() >= 1e-12 {
            fail("complexity label invariance", i, format!("{c} vs {cp}"));
        }

        let wb = 1 + rng.below(5);
        let other = random_encoder(&mut rng, m, wb);
        let sb = system(&other);
        let gab = analysis::gnid(&sys, &sb, space.need()).unwrap();
        let gba = analysis::gnid(&sb, &sys, space.need()).unwrap();
        let gaa = analysis::gnid(&sys, &sys, space.need()).unwrap();
        let gp = analysis::gnid(&system(&permuted), &sb, space.need()).unwrap();
        let denom = oracle::self_information(&enc, &need).max(oracle::self_information(&other, &need));
        if (gab - gba).abs() >= 1e-12 {
            fail("gNID symmetry", i, format!("{gab} vs {gba}"));
        }
        if gaa.abs() >= 1e-12 {
            fail("gNID self-zero", i, format!("{gaa}"));
        }
        if (gab - gp).abs() >= 1e-9 + 1e-13 / denom {
            fail("gNID relabel invariance", i, format!("{gab} vs {gp}"));
        }
    }
    let grid = log_beta_grid(64.0, 30, 0.1);
    let config = SolverConfig::new(grid);
    for i in 0..INSTANCES {
        let (m, u) = (2 + rng.below(4), 2 + rng.below(4));
        let (need, repr) = oracle::random_instance(&mut rng, m, u);
        let space = space_from(&need, &repr);
        let f = anneal_frontier(&space, &config).unwrap();
        let mono = f.monotonicity_violations(1e-9);
        let conc = f.concavity_violations(1e-9);
        if !mono.is_empty() {
            fail("frontier monotonicity", i, format!("points {mono:?}"));
        }
        if !conc.is_empty() {
            fail("frontier concavity", i, format!("points {conc:?}"));
        }
        frontiers.push((space, f));
    }
    if failures.is_empty() {
        Outcome::Pass(format!(
            "DPI, distortion identity, KL, label invariance, gNID symmetry/self-zero/relabel, \
             frontier monotonicity/concavity; {INSTANCES} instances each"
        ))
    } else {
        Outcome::Fail(failures.join("; "))
    }
}

fn oracle_check(frontiers: &mut Vec<(MeaningSpace, Frontier)>) -> Outcome {
    let start = Instant::now();
    let mut rng = oracle::SplitMix(2025);
    let mut grid = log_beta_grid(64.0, 60, 0.1);
    grid.extend(ORACLE_BETAS);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let mut worst_gap = f64::NEG_INFINITY;
    let mut worst_eps = f64::INFINITY;
    let mut failures = Vec::new();
    for case in 0..ORACLE_INSTANCES {
        let m = 2 + rng.below(3);
        let u = 2 + rng.below(4);
        let w = 2 + rng.below(2);
        let (need, repr) = oracle::random_instance(&mut rng, m, u);
        let res = if w == 3 { 6 } else { 30 };
        let best = oracle::best_objectives(&need, &repr, w, res, &grid);
        let space = space_from(&need, &repr);
        let f = anneal_frontier(&space, &SolverConfig::new(grid.clone())).unwrap();
        for (p, best) in f.points.iter().zip(&best) {
            let gap = p.objective_bits - best;
            if ORACLE_BETAS.contains(&p.beta) {
                worst_gap = worst_gap.max(gap);
                if gap > 1e-3 {
                    failures.push(format!("case {case} beta {}: F* exceeds oracle by {gap}", p.beta));
                }
            }
            if p.beta > 0.0 {
                // smallest inefficiency any oracle encoder can have at this β
                let eps = -gap / p.beta;
                worst_eps = worst_eps.min(eps);
                if eps < -1e-6 {
                    failures.push(format!("case {case} beta {}: oracle encoder with epsilon {eps}", p.beta));
                }
            }
        }
        frontiers.push((space, f));
    }
    let secs = start.elapsed().as_secs_f64();
    if secs > 300.0 {
        failures.push(format!("took {secs:.0} s"));
    }
    if failures.is_empty() {
        Outcome::Pass(format!(
            "{ORACLE_INSTANCES} instances, 10 betas; max F* - oracle {worst_gap:.2e}, min oracle epsilon {worst_eps:.2e}; {secs:.1} s"
        ))
    } else {
        Outcome::Fail(failures.into_iter().take(10).collect::<Vec<_>>().join("; "))
    }
}

fn fixed_point_check(frontiers: &[(MeaningSpace, Frontier)]) -> Outcome {
    let (mut checked, mut unconverged, mut worst) = (0, 0, 0.0f64);
    let mut failures = Vec::new();
    for (space, f) in frontiers {
        for p in &f.points {
            if !p.converged {
                unconverged += 1;
                continue;
            }
            let r = fixed_point_residual(space, p).unwrap();
            checked += 1;
            worst = worst.max(r);
            if r >= 1e-10 {
                failures.push(format!("beta {}: F changes by {r:e}", p.beta));
            }
        }
    }
    if failures.is_empty() {
        Outcome::Pass(format!(
            "{checked} converged points over {} frontiers, max change {worst:.2e} bits ({unconverged} unconverged)",
            frontiers.len()
        ))
    } else {
        Outcome::Fail(failures.into_iter().take(10).collect::<Vec<_>>().join("; "))
    }
}

fn ibnaming(args: &[OsString]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_ibnaming")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.success() {
        Ok(String::from_utf8_lossy(&out.stdout).into_owned())
    } else {
        let shown: Vec<_> = args.iter().map(|a| a.to_string_lossy()).collect();
        Err(format!("ibnaming {} failed: {}", shown.join(" "), String::from_utf8_lossy(&out.stderr).trim()))
    }
}

macro_rules! cli {
    ($($arg:expr),* $(,)?) => {
        ibnaming(&[$(OsString::from($arg)),*])
    };
}

fn fixture(name: &str) -> String {
    common::fixtures().join(name).to_str().unwrap().to_owned()
}

/// All files under `dir`, relative path and contents, sorted.
fn snapshot(paths: &[PathBuf]) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut entries: Vec<PathBuf> = fs::read_dir(p).unwrap().map(|e| e.unwrap().path()).collect();
            entries.sort();
            for e in entries {
                out.push((e.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&e).unwrap()));
            }
        } else {
            out.push((p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(p).unwrap()));
        }
    }
    out
}

fn determinism() -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let space = tmp.path().join("space.csv");
    cli!("make-space", "--similarity", &fixture("container_similarity.csv"), "-o", &space)?;
    let mut runs = Vec::new();
    for run in ["one", "two"] {
        let dir = tmp.path().join(run);
        let f = dir.join("frontier.csv");
        let b = dir.join("baseline.json");
        cli!(
            "frontier", "--space", &space, "--beta-max", "64", "--num-betas", "40", "--restarts", "3", "--seed", "11",
            "-o", &f,
        )?;
        cli!(
            "baseline", "--space", &space, "--frontier", &f, "--system", &fixture("naming_lang_a.tsv"),
            "--condition", "mono", "--samples", "500", "--seed", "7", "-o", &b,
        )?;
        runs.push((
            snapshot(&[f.clone(), dir.join("frontier.meta.json"), dir.join("frontier.encoders")]),
            snapshot(&[b]),
        ));
    }
    let files = runs[0].0.len() + runs[0].1.len();
    if runs[0].0 != runs[1].0 {
        return Err("frontier outputs differ between runs".into());
    }
    if runs[0].1 != runs[1].1 {
        return Err("baseline outputs differ between runs".into());
    }
    Ok(format!("frontier (3 restarts, seed 11) and baseline (500 samples, seed 7): {files} files byte-identical"))
}

fn json_file(p: &Path) -> Result<Value, String> {
    serde_json::from_str(&fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?).map_err(|e| e.to_string())
}

fn num(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or(f64::NAN)
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn check(failures: &mut Vec<String>, ok: bool, msg: impl FnOnce() -> String) {
    if !ok {
        failures.push(msg());
    }
}

/// F*_β against the best deterministic encoder over at most four words.
fn frontier_against_oracle(f: &Frontier, golden: &Value, failures: &mut Vec<String>, what: &str) {
    let betas = numbers(&golden["betas"]);
    let best = numbers(&golden["best_deterministic_objective"]);
    if f.points.len() != betas.len() {
        failures.push(format!("{what}: {} frontier points, golden has {}", f.points.len(), betas.len()));
        return;
    }
    for ((p, b), best) in f.points.iter().zip(&betas).zip(&best) {
        if (p.beta - b).abs() > 1e-12 * b.max(1.0) {
            failures.push(format!("{what}: frontier beta {} vs golden {b}", p.beta));
            return;
        }
        let allowed = if *b > 0.0 { 1e-6 * b } else { 1e-9 };
        check(failures, p.objective_bits <= best + allowed, || {
            format!("{what} beta {b}: F* {} above oracle {best}", p.objective_bits)
        });
    }
}

fn argmax_groups(enc: &NamingSystem) -> Vec<Vec<String>> {
    let e = enc.encoder();
    let assign: Vec<usize> = e
        .rows()
        .into_iter()
        .map(|r| r.iter().enumerate().fold(0, |best, (j, &x)| if x > r[best] { j } else { best }))
        .collect();
    oracle::canonical_partition(&assign)
        .into_iter()
        .map(|g| g.into_iter().map(|i| enc.meaning_labels()[i].clone()).collect())
        .collect()
}

fn golden_fixtures() -> Result<String, String> {
    let golden = common::load_golden();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t = |n: &str| tmp.path().join(n);
    let mut failures = Vec::new();

    // containers: make-space -> make-prior -> frontier -> eval, gnid, mixture
    let gc = &golden["containers"];
    let (a_file, b_file) = (fixture("naming_lang_a.tsv"), fixture("naming_lang_b.tsv"));
    cli!("make-space", "--similarity", &fixture("container_similarity.csv"), "-o", t("c_space.csv"))?;
    cli!(
        "make-prior", "--counts", &a_file, "--counts", &b_file, "--condition", "mono", "--space", t("c_space.csv"),
        "-o", t("c_prior.csv"),
    )?;
    let (prior, _) = ibnaming::io::read_prior(&t("c_prior.csv")).map_err(|e| e.to_string())?;
    // equal response counts per object make the least-informative prior uniform
    let n = prior.len() as f64;
    check(&mut failures, prior.mass().iter().all(|p| (p - 1.0 / n).abs() < 1e-12), || {
        format!("container prior is not uniform: {:?}", prior.mass())
    });
    let (max, count, min) = common::CONTAINER_GRID;
    let (space, prior_csv) = (t("c_space.csv"), t("c_prior.csv"));
    cli!(
        "frontier", "--space", &space, "--prior", &prior_csv, "--beta-max", max.to_string(), "--num-betas",
        count.to_string(), "--beta-min", min.to_string(), "-o", t("c_frontier.csv"),
    )?;
    let frontier = read_frontier(&t("c_frontier.csv")).map_err(|e| e.to_string())?;
    frontier_against_oracle(&frontier, gc, &mut failures, "containers");

    let need: Vec<f64> = vec![1.0 / n; prior.len()];
    let labels = prior.labels().to_vec();
    for (name, file, cond) in common::SYSTEMS {
        let out = t(&format!("eval_{name}.json"));
        cli!(
            "eval", "--space", &space, "--prior", &prior_csv, "--frontier", t("c_frontier.csv"), "--system",
            fixture(file), "--condition", cond, "-o", &out,
        )?;
        let r = json_file(&out)?;
        let g = &gc["systems"][name];
        for key in ["complexity_bits", "accuracy_bits"] {
            check(&mut failures, (num(&r, key) - num(g, key)).abs() < 1e-9, || {
                format!("{name} {key}: {} vs golden {}", num(&r, key), num(g, key))
            });
        }
        check(&mut failures, num(&r, "inefficiency_bits") >= -1e-6, || {
            format!("{name}: negative inefficiency {}", num(&r, "inefficiency_bits"))
        });
        let idx = r["matched_point"]["index"].as_u64().unwrap() as usize;
        let matched = &frontier.points[idx].encoder;
        let enc = common::counts_encoder(file, cond, &labels);
        let mrows: oracle::Matrix = matched.encoder().rows().into_iter().map(|r| r.to_vec()).collect();
        let g_oracle = oracle::gnid(&enc, &mrows, &need);
        check(&mut failures, (num(&r, "gnid") - g_oracle).abs() < 1e-9, || {
            format!("{name} gNID {} vs oracle {g_oracle}", num(&r, "gnid"))
        });
    }
    for (cond, key) in [("mono", "gnid_a_mono_b_mono"), ("bi", "gnid_a_bi_b_bi")] {
        let out = cli!(
            "gnid", "--a", &a_file, "--condition-a", cond, "--b", &b_file, "--condition-b", cond, "--prior",
            t("c_prior.csv"),
        )?;
        let g: f64 = out.trim().parse().map_err(|_| format!("gnid printed {out:?}"))?;
        check(&mut failures, (g - num(gc, key)).abs() < 1e-9, || format!("{key}: {g} vs golden {}", num(gc, key)));
    }
    let out = cli!(
        "mixture", "--a", &a_file, "--condition-a", "bi", "--b", &b_file, "--condition-b", "bi", "--ref-a", &a_file,
        "--ref-condition-a", "mono", "--ref-b", &b_file, "--ref-condition-b", "mono", "--prior", t("c_prior.csv"),
    )?;
    let mix: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let (bi, mono) = (num(gc, "mixture_bi_bits"), num(gc, "mixture_mono_bits"));
    check(&mut failures, (num(&mix, "complexity_bits") - bi).abs() < 1e-9, || {
        format!("bilingual mixture {} vs golden {bi}", num(&mix, "complexity_bits"))
    });
    check(&mut failures, (num(&mix, "reference_complexity_bits") - mono).abs() < 1e-9, || {
        format!("monolingual mixture {} vs golden {mono}", num(&mix, "reference_complexity_bits"))
    });
    check(&mut failures, (num(&mix, "percent_change") - 100.0 * (bi - mono) / mono).abs() < 1e-7, || {
        format!("percent change {}", num(&mix, "percent_change"))
    });

    // animals: make-space from features -> frontier -> hierarchy
    let ga = &golden["animals"];
    cli!(
        "make-space", "--features", &fixture("animal_features.csv"), "--familiarity", &fixture("animal_familiarity.csv"),
        "--need-out", t("a_need.csv"), "-o", t("a_space.csv"),
    )?;
    let (max, count, min) = common::ANIMAL_GRID;
    let (max_s, count_s, min_s) = (max.to_string(), count.to_string(), min.to_string());
    cli!(
        "frontier", "--space", t("a_space.csv"), "--prior", t("a_need.csv"), "--beta-max", &max_s,
        "--num-betas", &count_s, "--beta-min", &min_s, "-o", t("a_frontier.csv"),
    )?;
    let frontier = read_frontier(&t("a_frontier.csv")).map_err(|e| e.to_string())?;
    frontier_against_oracle(&frontier, ga, &mut failures, "animals");
    cli!(
        "hierarchy", "--space", t("a_space.csv"), "--prior", t("a_need.csv"), "--frontier",
        t("a_frontier.csv"), "--k", "1,2,3,4", "--text", t("h.txt"), "-o", t("h.json"),
    )?;
    let h = json_file(&t("h.json"))?;
    let layers = h["layers"].as_array().cloned().unwrap_or_default();
    for k in 1..=common::MAX_WORDS {
        let Some(layer) = layers.iter().find(|l| l["k"].as_u64() == Some(k as u64)) else {
            failures.push(format!("hierarchy has no k = {k} layer"));
            continue;
        };
        let g = &ga["partitions"][k.to_string()];
        let acc = num(layer, "accuracy_bits");
        check(&mut failures, acc <= num(g, "accuracy_bits") + 1e-9, || {
            format!("k = {k}: accuracy {acc} above best hard partition {}", num(g, "accuracy_bits"))
        });
        let beta = num(layer, "beta");
        let point = frontier
            .points
            .iter()
            .rfind(|p| p.beta == beta && p.effective_k == k)
            .ok_or_else(|| format!("no frontier point for layer k = {k}"))?;
        let groups = argmax_groups(&point.encoder);
        let expected: Vec<Vec<String>> = serde_json::from_value(g["groups"].clone()).unwrap();
        let canon = |gs: &[Vec<String>]| {
            let mut v: Vec<Vec<String>> = gs.to_vec();
            for g in v.iter_mut() {
                g.sort();
            }
            v.sort();
            v
        };
        check(&mut failures, canon(&groups) == canon(&expected), || {
            format!("k = {k}: categories {groups:?}, oracle partition {expected:?}")
        });
    }

    if failures.is_empty() {
        Ok("containers (frontier bound, 4 systems, gNID, mixture) and animals (frontier bound, hierarchy k = 1..4) \
            match the oracle golden file"
            .into())
    } else {
        Err(failures.join("; "))
    }
}

fn data_dir(var: &str, files: &[&str]) -> Result<PathBuf, String> {
    let dir = std::env::var_os(var).map(PathBuf::from).ok_or_else(|| format!("{var} not set"))?;
    for f in files {
        if !dir.join(f).exists() {
            return Err(format!("{} missing", dir.join(f).display()));
        }
    }
    Ok(dir)
}

const CONTAINER_FILES: [&str; 3] = ["similarity.csv", "naming_dutch.tsv", "naming_french.tsv"];
const ANIMAL_FILES: [&str; 3] = ["features.csv", "familiarity.csv", "groups.csv"];

/// Published container results: per-condition inefficiency, gNID and fitted
/// beta, the random baselines, and the bilingual mixture change.
fn container_reproduction(dir: &Path) -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t = |n: &str| tmp.path().join(n);
    let d = |n: &str| dir.join(n).to_str().unwrap().to_owned();
    let (dutch, french) = (d("naming_dutch.tsv"), d("naming_french.tsv"));
    cli!("make-space", "--similarity", &d("similarity.csv"), "-o", t("space.csv"))?;
    cli!(
        "make-prior", "--counts", &dutch, "--counts", &french, "--condition", "mono", "--space", t("space.csv"),
        "-o", t("prior.csv"),
    )?;
    let (space, prior) = (t("space.csv"), t("prior.csv"));
    cli!("frontier", "--space", &space, "--prior", &prior, "--beta-max", "1024", "--num-betas", "1500", "-o", t("frontier.csv"))?;
    let mut failures = Vec::new();
    let mut summary = Vec::new();
    let expected = [
        (&dutch, "mono", 0.16, 0.11),
        (&dutch, "bi", 0.17, 0.12),
        (&french, "mono", 0.18, 0.11),
        (&french, "bi", 0.17, 0.09),
    ];
    for (file, cond, eps, gnid) in expected {
        let out = t("eval.json");
        cli!(
            "eval", "--space", &space, "--prior", &prior, "--frontier", t("frontier.csv"), "--system", file,
            "--condition", cond, "-o", &out,
        )?;
        let r = json_file(&out)?;
        let (e, g, b) = (num(&r, "inefficiency_bits"), num(&r, "gnid"), num(&r, "fitted_beta"));
        summary.push(format!("{cond} eps {e:.3} gnid {g:.3} beta {b:.2}"));
        check(&mut failures, (e - eps).abs() <= 0.03, || format!("{file} {cond}: epsilon {e:.3}, expected {eps}"));
        check(&mut failures, (g - gnid).abs() <= 0.03, || format!("{file} {cond}: gNID {g:.3}, expected {gnid}"));
        check(&mut failures, (b - 1.2).abs() <= 0.15, || format!("{file} {cond}: beta {b:.2}, expected 1.2"));
    }
    for (file, eps, gnid) in [(&dutch, 0.29, 0.59), (&french, 0.31, 0.56)] {
        let out = t("baseline.json");
        cli!(
            "baseline", "--space", &space, "--prior", &prior, "--frontier", t("frontier.csv"), "--system", file,
            "--condition", "mono", "--samples", "10000", "--seed", "7", "-o", &out,
        )?;
        let r = json_file(&out)?;
        let (e, g) = (num(&r, "inefficiency_mean"), num(&r, "gnid_mean"));
        summary.push(format!("baseline eps {e:.3} gnid {g:.3}"));
        check(&mut failures, (e - eps).abs() <= 0.04, || format!("{file} baseline epsilon {e:.3}, expected {eps}"));
        check(&mut failures, (g - gnid).abs() <= 0.04, || format!("{file} baseline gNID {g:.3}, expected {gnid}"));
    }
    let out = cli!(
        "mixture", "--a", &dutch, "--condition-a", "bi", "--b", &french, "--condition-b", "bi", "--ref-a", &dutch,
        "--ref-condition-a", "mono", "--ref-b", &french, "--ref-condition-b", "mono", "--prior", t("prior.csv"),
    )?;
    let mix: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    let pct = num(&mix, "percent_change");
    summary.push(format!("mixture {pct:.3}%"));
    check(&mut failures, (pct + 0.16).abs() <= 0.1, || format!("mixture change {pct:.3}%, expected -0.16%"));
    if failures.is_empty() {
        return Ok(summary.join(", "));
    }
    // the numbers depend on the LI prior, so report the uniform-need run next to them
    let uniform = t("frontier_uniform.csv");
    cli!("frontier", "--space", &space, "--beta-max", "1024", "--num-betas", "1500", "-o", &uniform)?;
    let mut cross = Vec::new();
    for (file, cond, _, _) in expected {
        let out = t("eval_uniform.json");
        cli!("eval", "--space", &space, "--frontier", &uniform, "--system", file, "--condition", cond, "-o", &out)?;
        let r = json_file(&out)?;
        let name = Path::new(file).file_stem().unwrap().to_string_lossy();
        cross.push(format!(
            "{name} {cond} eps {:.3} gnid {:.3} beta {:.2}",
            num(&r, "inefficiency_bits"),
            num(&r, "gnid"),
            num(&r, "fitted_beta")
        ));
    }
    Err(format!("{}; uniform-need cross-check: {}", failures.join("; "), cross.join(", ")))
}

/// Category hierarchy on the animal feature data; `groups.csv` maps each
/// class to fish, bird, mammal or wug.
fn animal_reproduction(dir: &Path) -> Result<String, String> {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t = |n: &str| tmp.path().join(n);
    let d = |n: &str| dir.join(n).to_str().unwrap().to_owned();
    cli!(
        "make-space", "--features", &d("features.csv"), "--familiarity", &d("familiarity.csv"), "--need-out",
        t("need.csv"), "-o", t("space.csv"),
    )?;
    cli!(
        "frontier", "--space", t("space.csv"), "--prior", t("need.csv"), "--beta-max", "8192", "--num-betas",
        "3000", "-o", t("frontier.csv"),
    )?;
    cli!(
        "hierarchy", "--space", t("space.csv"), "--prior", t("need.csv"), "--frontier", t("frontier.csv"),
        "--k", "1,2,3,4", "--text", t("h.txt"), "-o", t("h.json"),
    )?;
    let group_of: std::collections::HashMap<String, String> = fs::read_to_string(dir.join("groups.csv"))
        .map_err(|e| e.to_string())?
        .lines()
        .skip(1)
        .filter_map(|l| l.split_once(',').map(|(a, b)| (a.trim().to_owned(), b.trim().to_lowercase())))
        .collect();
    let h = json_file(&t("h.json"))?;
    // dominant group of each category by its top-5 classes
    let layer = |k: u64| -> Vec<(String, f64)> {
        h["layers"]
            .as_array()
            .and_then(|ls| ls.iter().find(|l| l["k"].as_u64() == Some(k)))
            .map(|l| {
                l["categories"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|c| {
                        let mut counts: Vec<(String, usize)> = Vec::new();
                        for m in c["top_meanings"].as_array().unwrap().iter().take(5) {
                            let g = group_of.get(m[0].as_str().unwrap()).cloned().unwrap_or_default();
                            match counts.iter_mut().find(|(x, _)| *x == g) {
                                Some(e) => e.1 += 1,
                                None => counts.push((g, 1)),
                            }
                        }
                        let has = |g: &str| counts.iter().any(|(x, _)| x == g);
                        let label = if has("bird") && has("mammal") {
                            "bird-mammal".to_owned()
                        } else {
                            counts.iter().max_by_key(|(_, n)| *n).map(|(g, _)| g.clone()).unwrap_or_default()
                        };
                        (label, num(c, "mass"))
                    })
                    .collect()
            })
            .unwrap_or_default()
    };
    let mut failures = Vec::new();
    let l2 = layer(2);
    check(&mut failures, l2.iter().any(|(g, _)| g == "fish"), || format!("k = 2 categories {l2:?} lack a fish category"));
    let l3 = layer(3);
    let mass = |l: &[(String, f64)], g: &str| l.iter().find(|(x, _)| x == g).map(|(_, m)| *m);
    check(&mut failures, mass(&l3, "fish").is_some(), || format!("k = 3 categories {l3:?} lack fish"));
    match mass(&l3, "bird-mammal") {
        Some(m) => check(&mut failures, (m - 0.8).abs() <= 0.05, || format!("k = 3 bird-mammal mass {m:.3}")),
        None => failures.push(format!("k = 3 categories {l3:?} lack bird-mammal")),
    }
    match mass(&l3, "wug") {
        Some(m) => check(&mut failures, (m - 0.14).abs() <= 0.05, || format!("k = 3 wug mass {m:.3}")),
        None => failures.push(format!("k = 3 categories {l3:?} lack wug")),
    }
    let l4 = layer(4);
    check(&mut failures, mass(&l4, "bird").is_some() && mass(&l4, "mammal").is_some(), || {
        format!("k = 4 categories {l4:?} do not separate bird and mammal")
    });
    if failures.is_empty() {
        Ok(format!("k2 {l2:?}; k3 {l3:?}; k4 {l4:?}"))
    } else {
        Err(failures.join("; "))
    }
}

fn from_result(r: Result<String, String>) -> Outcome {
    match r {
        Ok(s) => Outcome::Pass(s),
        Err(s) => Outcome::Fail(s),
    }
}

fn main() {
    // `cargo test` passes harness flags such as --nocapture or a filter
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut frontiers = Vec::new();
    let mut results: Vec<(u32, &str, Outcome)> = Vec::new();
    let mut report = |n: u32, name: &'static str, o: Outcome| {
        let (tag, detail) = match &o {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => ("FAIL", d),
            Outcome::Skip(d) => ("SKIP", d),
        };
        println!("[{tag}] criterion {n} {name}: {detail}");
        results.push((n, name, o));
    };

    report(1, "property suite", property_suite(&mut frontiers));
    report(2, "brute-force oracle", oracle_check(&mut frontiers));
    report(3, "fixed point", fixed_point_check(&frontiers));
    report(4, "determinism", from_result(determinism()));
    let containers = data_dir("IBNAMING_CONTAINER_DATA", &CONTAINER_FILES);
    let animals = data_dir("IBNAMING_ANIMAL_DATA", &ANIMAL_FILES);
    match &containers {
        Ok(dir) => report(5, "container reproduction", from_result(container_reproduction(dir))),
        Err(why) => report(5, "container reproduction", Outcome::Skip(format!("dataset unavailable ({why})"))),
    }
    match &animals {
        Ok(dir) => report(6, "animal hierarchy", from_result(animal_reproduction(dir))),
        Err(why) => report(6, "animal hierarchy", Outcome::Skip(format!("dataset unavailable ({why})"))),
    }
    if containers.is_err() || animals.is_err() {
        report(7, "golden fixtures", from_result(golden_fixtures()));
    } else {
        report(7, "golden fixtures", Outcome::Skip("both datasets present; criteria 5 and 6 apply".into()));
    }

    let failed: Vec<u32> = results.iter().filter(|(_, _, o)| matches!(o, Outcome::Fail(_))).map(|r| r.0).collect();
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
