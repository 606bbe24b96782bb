//! Discrete information measures, all in bits.
//!
//! Terms where a probability factor is exactly zero are skipped (0 log 0 = 0).
//! The public functions check label alignment; [`kernel`] holds the raw
//! array versions the solver calls in its inner loop.

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};
use crate::prob::{ensure_aligned, Distribution, MeaningSpace, NamingSystem};

/// Bayesian listener: row w of `reconstructions` is m̂_w(u).
#[derive(Debug, Clone)]
pub struct ListenerModel {
    pub reconstructions: Array2<f64>,
    pub word_mass: Distribution,
    /// `false` for words with q(w) = 0, whose row is all zeros and must not
    /// be used.
    pub defined: Vec<bool>,
}

pub fn entropy(d: &Distribution) -> f64 {
    d.mass().iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

/// D[p ∥ q] in bits. Errors where p > 0 and q = 0.
pub fn kl_divergence(p: &Distribution, q: &Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!("KL arguments have lengths {} and {}", p.len(), q.len())));
    }
    kernel::kl_bits(p.mass(), q.mass()).map_err(|index| Error::SupportViolation { index })
}

fn check_need(sys: &NamingSystem, need: &Distribution) -> Result<()> {
    if need.len() != sys.num_meanings() {
        return Err(Error::DimensionMismatch(format!(
            "need has {} entries, naming system has {} meanings",
            need.len(),
            sys.num_meanings()
        )));
    }
    Ok(())
}

/// I(M;W) = sum_{m,w} p(m) q(w|m) log2(q(w|m)/q(w)).
pub fn complexity(sys: &NamingSystem, need: &Distribution) -> Result<f64> {
    check_need(sys, need)?;
    Ok(kernel::complexity(need.mass(), sys.encoder()))
}

pub fn bayesian_listener(sys: &NamingSystem, space: &MeaningSpace) -> Result<ListenerModel> {
    ensure_aligned(sys, space.meaning_labels())?;
    let qw = kernel::word_mass(space.need().mass(), sys.encoder());
    let reconstructions = kernel::reconstructions(space.need().mass(), sys.encoder(), space.matrix(), qw.view());
    let defined = qw.iter().map(|&q| q > 0.0).collect();
    Ok(ListenerModel {
        reconstructions,
        word_mass: Distribution::new_unchecked(sys.word_labels().to_vec(), qw),
        defined,
    })
}

/// E[D[m ∥ m̂_w]] under p(m) q(w|m).
pub fn expected_distortion(sys: &NamingSystem, space: &MeaningSpace) -> Result<f64> {
    ensure_aligned(sys, space.meaning_labels())?;
    kernel::expected_distortion(space.need().mass(), sys.encoder(), space.matrix())
        .map_err(|index| Error::SupportViolation { index })
}

/// I(W;U) = sum_w q(w) D[m̂_w ∥ m_0].
pub fn accuracy(sys: &NamingSystem, space: &MeaningSpace) -> Result<f64> {
    ensure_aligned(sys, space.meaning_labels())?;
    Ok(kernel::accuracy(space.need().mass(), sys.encoder(), space.matrix()))
}

/// F_β[q] = I(M;W) − β I(W;U).
pub fn ib_objective(sys: &NamingSystem, space: &MeaningSpace, beta: f64) -> Result<f64> {
    if !(beta >= 0.0) {
        return Err(Error::NegativeBeta(beta));
    }
    let c = complexity(sys, space.need())?;
    if beta == 0.0 {
        return Ok(c);
    }
    Ok(c - beta * accuracy(sys, space)?)
}

pub mod kernel {
    use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

    /// D[p ∥ q] in bits; `Err(i)` names the first index with p > 0, q = 0.
    pub fn kl_bits(p: ArrayView1<'_, f64>, q: ArrayView1<'_, f64>) -> Result<f64, usize> {
        let mut d = 0.0;
        for (i, (&a, &b)) in p.iter().zip(q.iter()).enumerate() {
            if a > 0.0 {
                if b <= 0.0 {
                    return Err(i);
                }
                d += a * (a / b).log2();
            }
        }
        Ok(d)
    }

    pub fn word_mass(need: ArrayView1<'_, f64>, enc: ArrayView2<'_, f64>) -> Array1<f64> {
        need.dot(&enc)
    }

    pub fn complexity(need: ArrayView1<'_, f64>, enc: ArrayView2<'_, f64>) -> f64 {
        let qw = word_mass(need, enc);
        let mut total = 0.0;
        for (row, &p) in enc.rows().into_iter().zip(need.iter()) {
            if p <= 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (&q, &m) in row.iter().zip(qw.iter()) {
                if q > 0.0 {
                    inner += q * (q / m).log2();
                }
            }
            total += p * inner;
        }
        total
    }

    /// Rows m̂_w(u) = sum_m q(m|w) m(u); zero rows where q(w) = 0.
    pub fn reconstructions(
        need: ArrayView1<'_, f64>,
        enc: ArrayView2<'_, f64>,
        repr: ArrayView2<'_, f64>,
        qw: ArrayView1<'_, f64>,
    ) -> Array2<f64> {
        let mut joint = enc.to_owned();
        for (mut row, &p) in joint.rows_mut().into_iter().zip(need.iter()) {
            row *= p;
        }
        let mut recon = joint.t().dot(&repr);
        for (mut row, &q) in recon.axis_iter_mut(Axis(0)).zip(qw.iter()) {
            if q > 0.0 {
                row /= q;
            } else {
                row.fill(0.0);
            }
        }
        recon
    }

    pub fn meaning_information(need: ArrayView1<'_, f64>, repr: ArrayView2<'_, f64>) -> f64 {
        let m0 = need.dot(&repr);
        repr.rows()
            .into_iter()
            .zip(need.iter())
            .filter(|(_, &p)| p > 0.0)
            .map(|(row, &p)| p * kl_bits(row, m0.view()).expect("m_0 covers every meaning with p(m) > 0"))
            .sum()
    }

    pub fn accuracy(need: ArrayView1<'_, f64>, enc: ArrayView2<'_, f64>, repr: ArrayView2<'_, f64>) -> f64 {
        let qw = word_mass(need, enc);
        let recon = reconstructions(need, enc, repr, qw.view());
        let m0 = need.dot(&repr);
        recon
            .rows()
            .into_iter()
            .zip(qw.iter())
            .filter(|(_, &q)| q > 0.0)
            .map(|(row, &q)| q * kl_bits(row, m0.view()).expect("m_0 covers every reconstruction"))
            .sum()
    }

    pub fn expected_distortion(
        need: ArrayView1<'_, f64>,
        enc: ArrayView2<'_, f64>,
        repr: ArrayView2<'_, f64>,
    ) -> Result<f64, usize> {
        let qw = word_mass(need, enc);
        let recon = reconstructions(need, enc, repr, qw.view());
        let mut total = 0.0;
        for (m, (row, &p)) in enc.rows().into_iter().zip(need.iter()).enumerate() {
            if p <= 0.0 {
                continue;
            }
            for (w, &q) in row.iter().enumerate() {
                if q > 0.0 {
                    total += p * q * kl_bits(repr.row(m), recon.row(w))?;
                }
            }
        }
        Ok(total)
    }
}

/// Entropy of a raw probability vector, in bits.
pub fn entropy_of(p: ArrayView1<'_, f64>) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}
