//! Shared fixtures for integration tests and the acceptance suite.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lexalign_core::{Embedding, Matrix, Vocab};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub struct Rand(pub ChaCha8Rng);

impl Rand {
    pub fn new(seed: u64) -> Self {
        Rand(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.0.random_range(lo..hi)
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| self.normal()).collect()).unwrap()
    }

    /// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
    /// signs of R's diagonal folded into Q.
    pub fn orthogonal(&mut self, d: usize) -> Matrix {
        let g = DMatrix::from_fn(d, d, |_, _| self.normal());
        let qr = g.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..d {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        from_na(&q)
    }
}

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

pub fn from_na(m: &DMatrix<f64>) -> Matrix {
    Matrix::from_vec(m.nrows(), m.ncols(), m.transpose().as_slice().to_vec()).unwrap()
}

pub fn tokens(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn embedding(tokens: Vec<String>, m: Matrix) -> Embedding {
    Embedding::new(Vocab::new(tokens).unwrap(), m).unwrap()
}

/// Writes an embedding with shortest round-trip values so files reload
/// bit-identically.
pub fn write_exact_vec(path: &Path, e: &Embedding) {
    let mut s = format!("{} {}\n", e.len(), e.dim());
    for (t, row) in e.vocab().tokens().iter().zip(e.matrix().row_iter()) {
        s.push_str(t);
        for v in row {
            s.push_str(&format!(" {v:?}"));
        }
        s.push('\n');
    }
    fs::write(path, s).unwrap();
}

pub fn write_dict(path: &Path, pairs: &[(String, String)]) {
    let s: String = pairs.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect();
    fs::write(path, s).unwrap();
}

pub fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_lexalign"))
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn lexalign")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Toy bilingual setting: the target space is the source rotated by a
/// fixed orthogonal map; pairs are `s{i} ↔ t{i}`.
pub struct Toy {
    pub dir: tempfile::TempDir,
    pub src: PathBuf,
    pub tgt: PathBuf,
    pub dict: PathBuf,
}

impl Toy {
    pub fn rotated(n: usize, d: usize, seed: u64) -> Toy {
        let mut rng = Rand::new(seed);
        let x = rng.matrix(n, d);
        let r = rng.orthogonal(d);
        let y = x.matmul_transpose(&r).unwrap();
        Toy::from_matrices(x, y)
    }

    /// Source and target are the same space.
    pub fn identical(n: usize, d: usize, seed: u64) -> Toy {
        let x = Rand::new(seed).matrix(n, d);
        Toy::from_matrices(x.clone(), x)
    }

    pub fn from_matrices(x: Matrix, y: Matrix) -> Toy {
        let dir = tempfile::tempdir().unwrap();
        let src = dir.path().join("src.vec");
        let tgt = dir.path().join("tgt.vec");
        let dict = dir.path().join("dict.txt");
        let n = x.rows();
        write_exact_vec(&src, &embedding(tokens("s", n), x));
        write_exact_vec(&tgt, &embedding(tokens("t", y.rows()), y));
        let pairs: Vec<(String, String)> = (0..n).map(|i| (format!("s{i}"), format!("t{i}"))).collect();
        write_dict(&dict, &pairs);
        Toy { dir, src, tgt, dict }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    pub fn out(&self) -> PathBuf {
        self.path("out")
    }

    pub fn s(p: &Path) -> &str {
        p.to_str().unwrap()
    }
}

/// Planted two-cluster bilingual data: `per` points per cluster and
/// language, clusters 100× farther apart than their spread.
pub fn two_clusters(per: usize, d: usize, seed: u64) -> Toy {
    let mut rng = Rand::new(seed);
    let mut rows = Vec::new();
    for c in 0..2 {
        let center = if c == 0 { 0.0 } else { 100.0 };
        for _ in 0..per {
            rows.push((0..d).map(|k| (if k == 0 { center } else { 0.0 }) + rng.normal() * 0.5).collect::<Vec<f64>>());
        }
    }
    let x = Matrix::from_rows(&rows).unwrap();
    let jitter: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v + rng.normal() * 0.1).collect()).collect();
    Toy::from_matrices(x, Matrix::from_rows(&jitter).unwrap())
}

/// Smallest distance between clusters and largest distance within one.
pub fn separation(points: &[(f64, f64)], cluster: impl Fn(usize) -> usize) -> (f64, f64) {
    let mut intra: f64 = 0.0;
    let mut inter = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = ((points[i].0 - points[j].0).powi(2) + (points[i].1 - points[j].1).powi(2)).sqrt();
            if cluster(i) == cluster(j) {
                intra = intra.max(d);
            } else {
                inter = inter.min(d);
            }
        }
    }
    (inter, intra)
}
