//! Two-dimensional projections of labelled vectors for plotting: PCA and
//! exact t-SNE.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::preprocess::center;
use crate::svd::svd_square;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Lang {
    Src,
    Tgt,
}

impl Lang {
    pub fn as_str(self) -> &'static str {
        match self {
            Lang::Src => "src",
            Lang::Tgt => "tgt",
        }
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointLabel {
    pub token: String,
    pub lang: Lang,
}

impl PointLabel {
    pub fn new(token: impl Into<String>, lang: Lang) -> Self {
        PointLabel { token: token.into(), lang }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProjectedPoint {
    pub token: String,
    pub lang: Lang,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ProjectionMethod {
    Pca,
    Tsne,
}

impl ProjectionMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ProjectionMethod::Pca => "pca",
            ProjectionMethod::Tsne => "tsne",
        }
    }
}

/// Parameters and diagnostics recorded alongside a projection.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProjectionParams {
    /// PCA only: covariance rank below 2, second coordinate padded with zeros.
    pub degenerate: bool,
    pub explained_variance: Option<[f64; 2]>,
    pub perplexity: Option<f64>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub learning_rate: Option<f64>,
    pub kl_initial: Option<f64>,
    pub kl_final: Option<f64>,
    /// Largest `|perplexity_i − target|` over rows after bandwidth search.
    pub max_perplexity_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Projection2D {
    pub points: Vec<ProjectedPoint>,
    pub method: ProjectionMethod,
    pub params: ProjectionParams,
}

fn check_labels(data: &Matrix, labels: &[PointLabel]) -> Result<()> {
    if labels.len() != data.rows() {
        return Err(Error::DimensionMismatch { expected: data.rows(), found: labels.len() });
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert((l.token.as_str(), l.lang)) {
            return Err(Error::DuplicateLabel { token: l.token.clone() });
        }
    }
    if let Some(pos) = data.as_slice().iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteValue { row: pos / data.cols(), col: pos % data.cols() });
    }
    Ok(())
}

fn assemble(labels: &[PointLabel], coords: &[[f64; 2]], method: ProjectionMethod, params: ProjectionParams) -> Result<Projection2D> {
    if coords.iter().flatten().any(|c| !c.is_finite()) {
        return Err(Error::NonFiniteOutput);
    }
    let points = labels
        .iter()
        .zip(coords)
        .map(|(l, c)| ProjectedPoint { token: l.token.clone(), lang: l.lang, x: c[0], y: c[1] })
        .collect();
    Ok(Projection2D { points, method, params })
}

/// Relative size below which the second principal variance counts as zero.
pub const PCA_RANK_TOL: f64 = 1e-12;

/// Projects the centered rows onto the top two principal directions, taken
/// from the SVD of the sample covariance (`n − 1` denominator).
pub fn pca_2d(data: &Matrix, labels: &[PointLabel]) -> Result<Projection2D> {
    let (n, d) = data.shape();
    if n < 3 {
        return Err(Error::TooFewPoints { min: 3, found: n });
    }
    if d < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: d });
    }
    check_labels(data, labels)?;
    let centered = center(data);
    let mut cov = centered.transpose().matmul(&centered)?;
    cov.as_mut_slice().iter_mut().for_each(|c| *c /= (n - 1) as f64);
    let svd = svd_square(&cov)?;
    let degenerate = !(svd.sigma[1] > PCA_RANK_TOL * svd.sigma[0]);
    let axis = |k: usize| svd.u.column(k);
    let (ax, ay) = (axis(0), axis(1));
    let coords: Vec<[f64; 2]> = centered
        .row_iter()
        .map(|r| {
            let x = crate::matrix::dot(r, &ax);
            let y = if degenerate { 0.0 } else { crate::matrix::dot(r, &ay) };
            [x, y]
        })
        .collect();
    let params = ProjectionParams {
        degenerate,
        explained_variance: Some([svd.sigma[0], if degenerate { 0.0 } else { svd.sigma[1] }]),
        ..Default::default()
    };
    assemble(labels, &coords, ProjectionMethod::Pca, params)
}

pub const TSNE_DEFAULT_PERPLEXITY: f64 = 30.0;
pub const TSNE_MIN_PERPLEXITY: f64 = 2.0;
pub const TSNE_DEFAULT_ITERATIONS: usize = 1000;
pub const TSNE_LEARNING_RATE: f64 = 200.0;
pub const TSNE_EXAGGERATION: f64 = 12.0;
/// Iterations run with early exaggeration and the initial momentum.
pub const TSNE_EARLY_ITERATIONS: usize = 250;
pub const TSNE_INITIAL_MOMENTUM: f64 = 0.5;
pub const TSNE_FINAL_MOMENTUM: f64 = 0.8;
pub const TSNE_INIT_STD: f64 = 1e-4;
pub const PERPLEXITY_TOL: f64 = 1e-5;
pub const BANDWIDTH_MAX_STEPS: usize = 50;
const MIN_GAIN: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct TsneConfig {
    /// `None` uses the default of 30, capped at `(n − 1)/3` and floored at 2.
    /// An explicit value is used as is and must lie in `[2, (n − 1)/3]`.
    pub perplexity: Option<f64>,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for TsneConfig {
    fn default() -> Self {
        TsneConfig { perplexity: None, iterations: TSNE_DEFAULT_ITERATIONS, seed: 0 }
    }
}

impl TsneConfig {
    pub fn effective_perplexity(&self, n: usize) -> Result<f64> {
        let cap = (n as f64 - 1.0) / 3.0;
        match self.perplexity {
            None => Ok(TSNE_DEFAULT_PERPLEXITY.min(cap).max(TSNE_MIN_PERPLEXITY)),
            Some(p) if !(p >= TSNE_MIN_PERPLEXITY) => Err(Error::InvalidPerplexity { perplexity: p }),
            Some(p) if p > cap => Err(Error::PerplexityTooLarge { perplexity: p, max: cap }),
            Some(p) => Ok(p),
        }
    }
}

/// Squared Euclidean distances between all rows, `n × n` row-major.
pub fn squared_distances(data: &Matrix) -> Vec<f64> {
    let n = data.rows();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d: f64 = data.row(i).iter().zip(data.row(j)).map(|(a, b)| (a - b) * (a - b)).sum();
            out[i * n + j] = d;
            out[j * n + i] = d;
        }
    }
    out
}

/// Conditional distribution of one row for precision `beta`, written into
/// `p` (entry `skip` set to 0). Returns the perplexity `exp(H)`.
fn row_distribution(dist: &[f64], skip: usize, beta: f64, p: &mut [f64]) -> f64 {
    let dmin = dist.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &d)| d).fold(f64::INFINITY, f64::min);
    let mut sum = 0.0;
    let mut weighted = 0.0;
    for (j, (&d, pj)) in dist.iter().zip(p.iter_mut()).enumerate() {
        if j == skip {
            *pj = 0.0;
            continue;
        }
        let shifted = d - dmin;
        *pj = libm::exp(-beta * shifted);
        sum += *pj;
        weighted += shifted * *pj;
    }
    p.iter_mut().for_each(|x| *x /= sum);
    let entropy = libm::log(sum) + beta * weighted / sum;
    libm::exp(entropy)
}

/// Row-conditional Gaussian neighbor distributions `p_{j|i}` with each
/// bandwidth chosen by bisection so that the row's perplexity matches
/// `perplexity` within [`PERPLEXITY_TOL`] (at most
/// [`BANDWIDTH_MAX_STEPS`] steps). Returns the `n × n` matrix and the
/// achieved perplexity of every row.
pub fn conditional_probabilities(sq_dist: &[f64], n: usize, perplexity: f64) -> (Vec<f64>, Vec<f64>) {
    let mut p = vec![0.0; n * n];
    let mut achieved = vec![0.0; n];
    for i in 0..n {
        let dist = &sq_dist[i * n..(i + 1) * n];
        let row = &mut p[i * n..(i + 1) * n];
        let dmin = dist.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d).fold(f64::INFINITY, f64::min);
        let spread: f64 = dist.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &d)| d - dmin).sum::<f64>() / (n - 1) as f64;
        let mut beta = if spread > 0.0 { 1.0 / spread } else { 1.0 };
        let (mut lo, mut hi) = (0.0_f64, f64::INFINITY);
        let mut perp = row_distribution(dist, i, beta, row);
        for _ in 0..BANDWIDTH_MAX_STEPS {
            if (perp - perplexity).abs() <= PERPLEXITY_TOL {
                break;
            }
            if perp > perplexity {
                // too flat: sharpen
                lo = beta;
                beta = if hi.is_finite() { (beta + hi) / 2.0 } else { beta * 2.0 };
            } else {
                hi = beta;
                beta = (beta + lo) / 2.0;
            }
            perp = row_distribution(dist, i, beta, row);
        }
        achieved[i] = perp;
    }
    (p, achieved)
}

/// Symmetrized joint probabilities `P_ij = (p_{j|i} + p_{i|j}) / 2n`.
pub fn joint_probabilities(conditional: &[f64], n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n * n];
    let denom = 2.0 * n as f64;
    for i in 0..n {
        for j in 0..n {
            p[i * n + j] = (conditional[i * n + j] + conditional[j * n + i]) / denom;
        }
    }
    p
}

/// Student-t kernel `1/(1 + |y_i − y_j|²)` (zero diagonal) and its sum.
fn student_kernel(y: &[[f64; 2]], num: &mut [f64]) -> f64 {
    let n = y.len();
    let mut total = 0.0;
    for i in 0..n {
        num[i * n + i] = 0.0;
        for j in i + 1..n {
            let dx = y[i][0] - y[j][0];
            let dy = y[i][1] - y[j][1];
            let v = 1.0 / (1.0 + dx * dx + dy * dy);
            num[i * n + j] = v;
            num[j * n + i] = v;
            total += 2.0 * v;
        }
    }
    total
}

/// `KL(P ‖ Q)` for a 2D layout `y`, with `Q` the normalized Student-t kernel.
pub fn kl_divergence(p: &[f64], y: &[[f64; 2]]) -> f64 {
    let n = y.len();
    let mut num = vec![0.0; n * n];
    let total = student_kernel(y, &mut num);
    let mut kl = 0.0;
    for (idx, (&pij, &nij)) in p.iter().zip(&num).enumerate() {
        if pij > 0.0 && idx / n != idx % n {
            let q = (nij / total).max(f64::MIN_POSITIVE);
            kl += pij * libm::log(pij / q);
        }
    }
    kl
}

/// Exact O(n²) t-SNE into two dimensions.
///
/// The step uses `Σ_j (P_ij − Q_ij)(y_i − y_j)/(1 + |y_i − y_j|²)`, i.e. the
/// KL gradient without its constant factor 4, so the learning rate of 200
/// matches the usual exact-t-SNE reference settings. Gradient descent with momentum 0.5 for the first 250 iterations (with
/// `P` exaggerated ×12) and 0.8 afterwards, learning rate 200, per-coordinate
/// adaptive gains, and the layout recentered after every step. The initial
/// layout is drawn from `N(0, 1e-4²)` with a ChaCha8 generator seeded from
/// `config.seed`, so results are bit-reproducible.
pub fn tsne_2d(data: &Matrix, labels: &[PointLabel], config: &TsneConfig) -> Result<Projection2D> {
    let n = data.rows();
    if n < 4 {
        return Err(Error::TooFewPoints { min: 4, found: n });
    }
    check_labels(data, labels)?;
    let perplexity = config.effective_perplexity(n)?;

    let dist = squared_distances(data);
    let (cond, achieved) = conditional_probabilities(&dist, n, perplexity);
    let p = joint_probabilities(&cond, n);
    let max_perplexity_error = achieved.iter().map(|a| (a - perplexity).abs()).fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let normal = Normal::new(0.0, TSNE_INIT_STD).expect("valid std");
    let mut y: Vec<[f64; 2]> = (0..n).map(|_| [normal.sample(&mut rng), normal.sample(&mut rng)]).collect();
    let kl_initial = kl_divergence(&p, &y);

    let mut update = vec![[0.0; 2]; n];
    let mut gains = vec![[1.0_f64; 2]; n];
    let mut num = vec![0.0; n * n];
    let mut grad = vec![[0.0; 2]; n];
    for iter in 0..config.iterations {
        let early = iter < TSNE_EARLY_ITERATIONS;
        let exaggeration = if early { TSNE_EXAGGERATION } else { 1.0 };
        let momentum = if early { TSNE_INITIAL_MOMENTUM } else { TSNE_FINAL_MOMENTUM };

        let total = student_kernel(&y, &mut num);
        for i in 0..n {
            let mut g = [0.0; 2];
            for j in 0..n {
                if i == j {
                    continue;
                }
                let nij = num[i * n + j];
                let coeff = (exaggeration * p[i * n + j] - nij / total) * nij;
                g[0] += coeff * (y[i][0] - y[j][0]);
                g[1] += coeff * (y[i][1] - y[j][1]);
            }
            grad[i] = g;
        }
        for i in 0..n {
            for c in 0..2 {
                let same_sign = (grad[i][c] > 0.0) == (update[i][c] > 0.0);
                gains[i][c] = if same_sign { gains[i][c] * 0.8 } else { gains[i][c] + 0.2 };
                gains[i][c] = gains[i][c].max(MIN_GAIN);
                update[i][c] = momentum * update[i][c] - TSNE_LEARNING_RATE * gains[i][c] * grad[i][c];
                y[i][c] += update[i][c];
            }
        }
        let mean = y.iter().fold([0.0; 2], |m, p| [m[0] + p[0], m[1] + p[1]]);
        let mean = [mean[0] / n as f64, mean[1] / n as f64];
        y.iter_mut().for_each(|p| {
            p[0] -= mean[0];
            p[1] -= mean[1];
        });
    }
    let kl_final = kl_divergence(&p, &y);

    let params = ProjectionParams {
        perplexity: Some(perplexity),
        iterations: Some(config.iterations),
        seed: Some(config.seed),
        learning_rate: Some(TSNE_LEARNING_RATE),
        kl_initial: Some(kl_initial),
        kl_final: Some(kl_final),
        max_perplexity_error: Some(max_perplexity_error),
        ..Default::default()
    };
    assemble(labels, &y, ProjectionMethod::Tsne, params)
}
