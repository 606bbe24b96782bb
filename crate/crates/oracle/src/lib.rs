//! Brute-force reference computations for discrete information bottleneck
//! problems.
//!
//! Everything here is written directly from the definitions, on plain
//! `Vec<Vec<f64>>` matrices, and shares no code with `ibnaming`. Tests use
//! it as an independent oracle: joint-matrix mutual information instead of
//! the listener-based formulas, and exhaustive search over encoders instead
//! of the fixed-point solver.

// index loops mirror the summation formulas they implement
#![allow(clippy::needless_range_loop)]

pub type Matrix = Vec<Vec<f64>>;

/// Mutual information (bits) of a joint distribution given as a matrix.
pub fn joint_mi(joint: &Matrix) -> f64 {
    let rows: Vec<f64> = joint.iter().map(|r| r.iter().sum()).collect();
    let ncols = joint.first().map_or(0, Vec::len);
    let mut cols = vec![0.0; ncols];
    for r in joint {
        for (j, v) in r.iter().enumerate() {
            cols[j] += v;
        }
    }
    let mut mi = 0.0;
    for (i, r) in joint.iter().enumerate() {
        for (j, &v) in r.iter().enumerate() {
            if v > 0.0 {
                mi += v * (v / (rows[i] * cols[j])).log2();
            }
        }
    }
    mi
}

pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}

/// Joint p(m, w) = p(m) q(w|m).
pub fn meaning_word_joint(encoder: &Matrix, need: &[f64]) -> Matrix {
    encoder
        .iter()
        .zip(need)
        .map(|(row, &p)| row.iter().map(|q| p * q).collect())
        .collect()
}

/// Joint p(u, w) = sum_m p(m) q(w|m) m(u).
pub fn feature_word_joint(encoder: &Matrix, need: &[f64], repr: &Matrix) -> Matrix {
    let nu = repr[0].len();
    let nw = encoder[0].len();
    let mut joint = vec![vec![0.0; nw]; nu];
    for m in 0..need.len() {
        for w in 0..nw {
            for u in 0..nu {
                joint[u][w] += need[m] * encoder[m][w] * repr[m][u];
            }
        }
    }
    joint
}

/// Joint p(m, u) = p(m) m(u).
pub fn meaning_feature_joint(need: &[f64], repr: &Matrix) -> Matrix {
    repr.iter()
        .zip(need)
        .map(|(row, &p)| row.iter().map(|x| p * x).collect())
        .collect()
}

pub fn complexity(encoder: &Matrix, need: &[f64]) -> f64 {
    joint_mi(&meaning_word_joint(encoder, need))
}

pub fn accuracy(encoder: &Matrix, need: &[f64], repr: &Matrix) -> f64 {
    joint_mi(&feature_word_joint(encoder, need, repr))
}

pub fn meaning_information(need: &[f64], repr: &Matrix) -> f64 {
    joint_mi(&meaning_feature_joint(need, repr))
}

/// Expected KL divergence between each meaning and the Bayesian
/// reconstruction of the word it was named with, summed term by term.
pub fn expected_distortion(encoder: &Matrix, need: &[f64], repr: &Matrix) -> f64 {
    let nm = need.len();
    let nw = encoder[0].len();
    let nu = repr[0].len();
    let mut total = 0.0;
    for w in 0..nw {
        let qw: f64 = (0..nm).map(|m| need[m] * encoder[m][w]).sum();
        if qw <= 0.0 {
            continue;
        }
        let recon: Vec<f64> = (0..nu)
            .map(|u| (0..nm).map(|m| need[m] * encoder[m][w] * repr[m][u]).sum::<f64>() / qw)
            .collect();
        for m in 0..nm {
            let weight = need[m] * encoder[m][w];
            if weight <= 0.0 {
                continue;
            }
            for u in 0..nu {
                let x = repr[m][u];
                if x > 0.0 {
                    total += weight * x * (x / recon[u]).log2();
                }
            }
        }
    }
    total
}

pub fn objective(encoder: &Matrix, need: &[f64], repr: &Matrix, beta: f64) -> f64 {
    complexity(encoder, need) - beta * accuracy(encoder, need, repr)
}

/// Generalized normalized information distance between two encoders over
/// the same meanings, from explicit joint matrices.
pub fn gnid(a: &Matrix, b: &Matrix, need: &[f64]) -> f64 {
    let cross = pair_joint(a, b, need);
    let self_a = pair_joint(a, a, need);
    let self_b = pair_joint(b, b, need);
    let denom = joint_mi(&self_a).max(joint_mi(&self_b));
    if denom <= 0.0 {
        return 0.0;
    }
    1.0 - joint_mi(&cross) / denom
}

/// I(W;W') for two independent draws of a word for the same meaning.
pub fn self_information(enc: &Matrix, need: &[f64]) -> f64 {
    joint_mi(&pair_joint(enc, enc, need))
}

fn pair_joint(a: &Matrix, b: &Matrix, need: &[f64]) -> Matrix {
    let na = a[0].len();
    let nb = b[0].len();
    let mut joint = vec![vec![0.0; nb]; na];
    for m in 0..need.len() {
        for i in 0..na {
            for j in 0..nb {
                joint[i][j] += need[m] * a[m][i] * b[m][j];
            }
        }
    }
    joint
}

/// Every deterministic encoder mapping `num_meanings` meanings onto at most
/// `num_words` words, as assignment vectors.
pub fn deterministic_assignments(num_meanings: usize, num_words: usize) -> Vec<Vec<usize>> {
    let total = num_words.pow(num_meanings as u32);
    (0..total)
        .map(|mut code| {
            (0..num_meanings)
                .map(|_| {
                    let w = code % num_words;
                    code /= num_words;
                    w
                })
                .collect()
        })
        .collect()
}

pub fn assignment_encoder(assign: &[usize], num_words: usize) -> Matrix {
    assign
        .iter()
        .map(|&w| {
            let mut row = vec![0.0; num_words];
            row[w] = 1.0;
            row
        })
        .collect()
}

/// Points of the probability simplex over `dim` coordinates with spacing
/// `1/resolution`.
pub fn simplex_grid(dim: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(dim: usize, left: usize, res: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if dim == 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / res as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(dim - 1, left - c, res, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, resolution, resolution, &mut Vec::new(), &mut out);
    out
}

/// Lowest IB objective found at each beta by exhaustive search over all
/// deterministic encoders plus every encoder whose rows lie on a simplex
/// grid of the given resolution.
pub fn best_objectives(
    need: &[f64],
    repr: &Matrix,
    num_words: usize,
    grid_resolution: usize,
    betas: &[f64],
) -> Vec<f64> {
    let mut best = vec![f64::INFINITY; betas.len()];
    let mut visit = |enc: &Matrix| {
        let c = complexity(enc, need);
        let a = accuracy(enc, need, repr);
        for (b, slot) in betas.iter().zip(best.iter_mut()) {
            let f = c - b * a;
            if f < *slot {
                *slot = f;
            }
        }
    };
    for assign in deterministic_assignments(need.len(), num_words) {
        visit(&assignment_encoder(&assign, num_words));
    }
    let grid = simplex_grid(num_words, grid_resolution);
    let nm = need.len();
    let mut idx = vec![0usize; nm];
    loop {
        let enc: Matrix = idx.iter().map(|&i| grid[i].clone()).collect();
        visit(&enc);
        let mut pos = 0;
        loop {
            if pos == nm {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < grid.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Lowest objective at each beta over deterministic encoders only, for
/// spaces too large for the simplex grid.
pub fn best_deterministic_objectives(need: &[f64], repr: &Matrix, num_words: usize, betas: &[f64]) -> Vec<f64> {
    let mut best = vec![f64::INFINITY; betas.len()];
    for assign in deterministic_assignments(need.len(), num_words) {
        let enc = assignment_encoder(&assign, num_words);
        let c = complexity(&enc, need);
        let a = accuracy(&enc, need, repr);
        for (b, slot) in betas.iter().zip(best.iter_mut()) {
            *slot = slot.min(c - b * a);
        }
    }
    best
}

/// Deterministic partition into exactly `k` non-empty groups with maximal
/// accuracy. Ties keep the first assignment in enumeration order.
pub fn best_hard_partition(need: &[f64], repr: &Matrix, k: usize) -> (Vec<usize>, f64) {
    let mut best: Option<(Vec<usize>, f64)> = None;
    for assign in deterministic_assignments(need.len(), k) {
        let mut used = vec![false; k];
        for &w in &assign {
            used[w] = true;
        }
        if used.iter().any(|u| !u) {
            continue;
        }
        let acc = accuracy(&assignment_encoder(&assign, k), need, repr);
        if best.as_ref().is_none_or(|(_, a)| acc > *a + 1e-12) {
            best = Some((assign, acc));
        }
    }
    best.expect("k must not exceed the number of meanings")
}

/// Canonical form of a partition: groups as sorted lists of member indices,
/// sorted by their first member.
pub fn canonical_partition(assign: &[usize]) -> Vec<Vec<usize>> {
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (m, &w) in assign.iter().enumerate() {
        groups.entry(w).or_default().push(m);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    out.sort();
    out
}

/// Small deterministic generator (splitmix64) for building random test
/// instances without pulling in `rand`.
pub struct SplitMix(pub u64);

impl SplitMix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Random point on the simplex (normalized exponentials).
    pub fn simplex(&mut self, dim: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..dim).map(|_| -(1.0 - self.uniform()).ln()).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect()
    }
}

/// A random bottleneck instance: need over meanings and strictly positive
/// meaning rows over the universe.
pub fn random_instance(rng: &mut SplitMix, meanings: usize, universe: usize) -> (Vec<f64>, Matrix) {
    let need = rng.simplex(meanings);
    let repr = (0..meanings).map(|_| rng.simplex(universe)).collect();
    (need, repr)
}
