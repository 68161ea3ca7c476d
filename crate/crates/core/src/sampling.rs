//! Reproducible random generation for low-rank Gaussian models.
//!
//! Observations follow `X_ij = ℓ_jᵀ Z_i` with `Z_i ~ N(0, I_d)` and unit
//! loading columns ℓ_j, so every marginal is N(0, 1) and the correlation
//! matrix `LᵀL` has rank at most d.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, RexError};

/// The generator behind every [`RngStream`].
pub type StreamRng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A (seed, stream) pair naming an independent, replayable random sequence.
///
/// The ChaCha key is expanded from `seed` and `stream_id` selects the ChaCha
/// stream, so a replicate's draws depend only on these two numbers and never
/// on which worker thread runs it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn rng(&self) -> StreamRng {
        let mut key = [0u8; 32];
        let mut state = self.seed;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }

    /// A new seed family derived from this seed and a label; the stream id is reset to 0.
    pub fn derive(&self, label: u64) -> RngStream {
        RngStream::new(splitmix64(splitmix64(self.seed) ^ label), 0)
    }

    /// Same seed, different stream.
    pub fn with_stream(&self, stream_id: u64) -> RngStream {
        RngStream::new(self.seed, stream_id)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    // Eight independent partial sums let the compiler vectorize; order is fixed.
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7])) + tail
}

fn fill_normal<R: Rng + ?Sized>(buf: &mut [f64], rng: &mut R) {
    for v in buf.iter_mut() {
        *v = rng.sample(StandardNormal);
    }
}

/// Overwrites `out` with a uniform unit vector, normalizing i.i.d. standard normals.
pub fn fill_sphere<R: Rng + ?Sized>(out: &mut [f64], rng: &mut R) {
    assert!(!out.is_empty(), "sphere dimension must be at least 1");
    loop {
        fill_normal(out, rng);
        let norm = dot(out, out).sqrt();
        if norm >= 1e-100 {
            out.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// Uniform draw from the unit sphere S^(d−1).
pub fn sample_sphere<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let mut out = vec![0.0; d];
    fill_sphere(&mut out, rng);
    out
}

/// Loading matrix L (d × p) with unit columns; Σ = LᵀL.
#[derive(Debug, Clone, PartialEq)]
pub struct LowRankModel {
    p: usize,
    d: usize,
    // Column-major: ℓ_j occupies loadings[j*d .. (j+1)*d].
    loadings: Vec<f64>,
}

impl LowRankModel {
    /// `columns` holds ℓ₁, …, ℓ_p back to back, each of length d.
    pub fn from_columns(p: usize, d: usize, columns: Vec<f64>) -> Result<Self> {
        if p == 0 || d == 0 {
            return Err(RexError::domain("model needs p >= 1 and d >= 1"));
        }
        if columns.len() != p * d {
            return Err(RexError::DimensionMismatch {
                expected: p * d,
                found: columns.len(),
            });
        }
        for (j, col) in columns.chunks_exact(d).enumerate() {
            let norm = dot(col, col).sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(RexError::domain(format!(
                    "column {j} has norm {norm}, expected 1"
                )));
            }
        }
        Ok(Self {
            p,
            d,
            loadings: columns,
        })
    }

    /// L = I_p, so observations are i.i.d. standard normal.
    pub fn identity(p: usize) -> Self {
        let mut loadings = vec![0.0; p * p];
        for j in 0..p {
            loadings[j * p + j] = 1.0;
        }
        Self { p, d: p, loadings }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.loadings[j * self.d..(j + 1) * self.d]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.loadings.chunks_exact(self.d)
    }

    /// Σ_ij = ℓ_iᵀ ℓ_j.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        dot(self.column(i), self.column(j))
    }
}

/// p loading columns drawn i.i.d. uniformly from S^(d−1).
pub fn build_uniform_model<R: Rng + ?Sized>(p: usize, d: usize, rng: &mut R) -> LowRankModel {
    assert!(p >= 1 && d >= 1, "model needs p >= 1 and d >= 1");
    let mut loadings = vec![0.0; p * d];
    for col in loadings.chunks_exact_mut(d) {
        fill_sphere(col, rng);
    }
    LowRankModel { p, d, loadings }
}

/// n observations of p variables, row-major, with per-row ℓ∞ norms.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
    extremes: Vec<f64>,
}

fn row_extreme(row: &[f64]) -> f64 {
    row.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

impl SampleMatrix {
    /// `values` is row-major n × p.
    pub fn new(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(RexError::EmptyInput);
        }
        if values.len() != n * p {
            return Err(RexError::DimensionMismatch {
                expected: n * p,
                found: values.len(),
            });
        }
        let extremes = values.chunks_exact(p).map(row_extreme).collect();
        Ok(Self {
            n,
            p,
            values,
            extremes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.p..(i + 1) * self.p]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.p)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// K_i = max_j |X_ij|.
    pub fn extremes(&self) -> &[f64] {
        &self.extremes
    }

    /// Reads CSV: optional `x1,...,xp` header, one observation per line.
    ///
    /// Blank lines are skipped. Line numbers in errors are 1-based.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self> {
        let mut values = Vec::new();
        let mut p = None;
        let mut n = 0usize;
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if n == 0 && p.is_none() && is_header(&fields) {
                p = Some(fields.len());
                continue;
            }
            match p {
                Some(width) if width != fields.len() => {
                    return Err(RexError::Parse {
                        line: line_no,
                        message: format!("expected {width} fields, found {}", fields.len()),
                    })
                }
                _ => p = Some(fields.len()),
            }
            for (col, f) in fields.iter().enumerate() {
                let v: f64 = f.parse().map_err(|_| RexError::Parse {
                    line: line_no,
                    message: format!("field {} is not a number: {f:?}", col + 1),
                })?;
                if !v.is_finite() {
                    return Err(RexError::Parse {
                        line: line_no,
                        message: format!("field {} is not finite", col + 1),
                    });
                }
                values.push(v);
            }
            n += 1;
        }
        match p {
            Some(p) if n > 0 => Self::new(n, p, values),
            _ => Err(RexError::EmptyInput),
        }
    }

    /// Writes CSV with a `x1,...,xp` header; values use shortest round-trip formatting.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let header: Vec<String> = (1..=self.p).map(|j| format!("x{j}")).collect();
        writeln!(w, "{}", header.join(","))?;
        let mut line = String::new();
        for row in self.rows() {
            line.clear();
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                write!(line, "{v:?}").expect("writing to a String cannot fail");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

fn is_header(fields: &[&str]) -> bool {
    fields.iter().any(|f| f.parse::<f64>().is_err())
        && fields.iter().enumerate().all(|(j, f)| {
            f.strip_prefix('x')
                .and_then(|s| s.parse::<usize>().ok())
                .is_some_and(|k| k == j + 1)
        })
}

/// Draws `n × d` latent normals, row-major, in the order used by [`sample_observations`].
fn draw_latent<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<f64> {
    let mut z = vec![0.0; n * d];
    fill_normal(&mut z, rng);
    z
}

fn project(model: &LowRankModel, latent: &[f64], n: usize) -> Vec<f64> {
    let (p, d) = (model.p, model.d);
    let mut values = vec![0.0; n * p];
    for (j, col) in model.columns().enumerate() {
        for i in 0..n {
            values[i * p + j] = dot(&latent[i * d..(i + 1) * d], col);
        }
    }
    values
}

/// n rows `X_i = Lᵀ Z_i` with `Z_i ~ N(0, I_d)` i.i.d.
pub fn sample_observations<R: Rng + ?Sized>(
    model: &LowRankModel,
    n: usize,
    rng: &mut R,
) -> SampleMatrix {
    sample_observations_with_latent(model, n, rng).0
}

/// Like [`sample_observations`], also returning the latent `Z` (row-major n × d).
pub fn sample_observations_with_latent<R: Rng + ?Sized>(
    model: &LowRankModel,
    n: usize,
    rng: &mut R,
) -> (SampleMatrix, Vec<f64>) {
    assert!(n >= 1, "need at least one observation");
    let latent = draw_latent(n, model.d, rng);
    let values = project(model, &latent, n);
    let samples = SampleMatrix::new(n, model.p, values).expect("dimensions are consistent");
    (samples, latent)
}

/// Row extremes of `sample_observations(model, n, rng)` without storing the matrix.
///
/// Consumes the generator identically, so the result matches
/// `sample_observations(..).extremes()` bit for bit.
pub fn sample_extremes<R: Rng + ?Sized>(model: &LowRankModel, n: usize, rng: &mut R) -> Vec<f64> {
    assert!(n >= 1, "need at least one observation");
    let d = model.d;
    let latent = draw_latent(n, d, rng);
    let mut extremes = vec![0.0f64; n];
    for col in model.columns() {
        for (i, k) in extremes.iter_mut().enumerate() {
            let x = dot(&latent[i * d..(i + 1) * d], col).abs();
            if x > *k {
                *k = x;
            }
        }
    }
    extremes
}

/// Per-variable measurement noise standard deviations.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    Scalar(f64),
    PerVariable(Vec<f64>),
}

impl NoiseSpec {
    pub fn validate(&self, p: usize) -> Result<()> {
        let ok = |s: &f64| s.is_finite() && *s >= 0.0;
        match self {
            NoiseSpec::Scalar(s) if ok(s) => Ok(()),
            NoiseSpec::Scalar(_) => Err(RexError::domain("noise sigma must be finite and >= 0")),
            NoiseSpec::PerVariable(v) if v.len() != p => Err(RexError::DimensionMismatch {
                expected: p,
                found: v.len(),
            }),
            NoiseSpec::PerVariable(v) if v.iter().all(ok) => Ok(()),
            NoiseSpec::PerVariable(_) => {
                Err(RexError::domain("noise sigmas must be finite and >= 0"))
            }
        }
    }

    pub fn sigma(&self, j: usize) -> f64 {
        match self {
            NoiseSpec::Scalar(s) => *s,
            NoiseSpec::PerVariable(v) => v[j],
        }
    }

    pub fn sigma_max(&self) -> f64 {
        match self {
            NoiseSpec::Scalar(s) => *s,
            NoiseSpec::PerVariable(v) => v.iter().copied().fold(0.0, f64::max),
        }
    }
}

/// `Y = X + ε` with independent `ε_ij ~ N(0, σ_j²)`; extremes are recomputed on Y.
///
/// Variables with σ_j = 0 are copied unchanged and draw no randomness.
pub fn add_noise<R: Rng + ?Sized>(
    samples: &SampleMatrix,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<SampleMatrix> {
    noise.validate(samples.p)?;
    let mut values = samples.values.clone();
    for row in values.chunks_exact_mut(samples.p) {
        for (j, v) in row.iter_mut().enumerate() {
            let s = noise.sigma(j);
            if s > 0.0 {
                let e: f64 = rng.sample(StandardNormal);
                *v += s * e;
            }
        }
    }
    SampleMatrix::new(samples.n, samples.p, values)
}

/// n draws of `max_j |G_j|` over p i.i.d. standard normals, streamed.
pub fn sample_iid_extremes<R: Rng + ?Sized>(p: usize, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n)
        .map(|_| {
            (0..p).fold(0.0f64, |m, _| {
                let g: f64 = rng.sample(StandardNormal);
                m.max(g.abs())
            })
        })
        .collect()
}

/// One draw of `max_j |ℓ_jᵀU|` for U and p loadings i.i.d. uniform on S^(d−1), streamed.
pub fn sample_max_uniform_corr<R: Rng + ?Sized>(p: usize, d: usize, rng: &mut R) -> f64 {
    let u = sample_sphere(d, rng);
    let mut ell = vec![0.0; d];
    let mut best = 0.0f64;
    for _ in 0..p {
        fill_sphere(&mut ell, rng);
        best = best.max(dot(&ell, &u).abs());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::coord_tail;
    use crate::special::chi_cdf;

    fn ks_distance<F: Fn(f64) -> f64>(mut xs: Vec<f64>, cdf: F) -> f64 {
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n = xs.len() as f64;
        xs.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    fn mean_var(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, v)
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..8)
            .map(|_| RngStream::new(7, 3).rng().random())
            .collect();
        let mut r1 = RngStream::new(7, 3).rng();
        let mut r2 = RngStream::new(7, 3).rng();
        let mut r3 = RngStream::new(7, 4).rng();
        let mut r4 = RngStream::new(8, 3).rng();
        let x: Vec<u64> = (0..16).map(|_| r1.random()).collect();
        let y: Vec<u64> = (0..16).map(|_| r2.random()).collect();
        let z: Vec<u64> = (0..16).map(|_| r3.random()).collect();
        let w: Vec<u64> = (0..16).map(|_| r4.random()).collect();
        assert_eq!(x, y);
        assert_ne!(x, z);
        assert_ne!(x, w);
        assert!(a.iter().all(|&v| v == a[0]));
        assert_ne!(
            RngStream::new(7, 0).derive(1),
            RngStream::new(7, 0).derive(2)
        );
    }

    #[test]
    fn sphere_is_unit_norm() {
        let mut rng = RngStream::new(1, 0).rng();
        for d in [1, 2, 3, 10, 257] {
            for _ in 0..100 {
                let u = sample_sphere(d, &mut rng);
                assert!((dot(&u, &u).sqrt() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn sphere_one_dimensional_is_fair_sign() {
        let mut rng = RngStream::new(2, 0).rng();
        let plus = (0..10_000)
            .filter(|_| sample_sphere(1, &mut rng)[0] == 1.0)
            .count();
        let freq = plus as f64 / 10_000.0;
        assert!((0.47..=0.53).contains(&freq), "{freq}");
    }

    #[test]
    fn sphere_three_dimensional_is_centered() {
        let mut rng = RngStream::new(3, 0).rng();
        let mut sums = [0.0; 3];
        for _ in 0..100_000 {
            let u = sample_sphere(3, &mut rng);
            for k in 0..3 {
                sums[k] += u[k];
            }
        }
        for s in sums {
            assert!((s / 1e5).abs() <= 0.01);
        }
    }

    #[test]
    fn sphere_coordinate_follows_beta_law() {
        let mut rng = RngStream::new(4, 0).rng();
        let xs: Vec<f64> = (0..10_000).map(|_| sample_sphere(5, &mut rng)[0]).collect();
        let cdf = |x: f64| {
            let inner = 1.0 - coord_tail(x.abs().min(1.0), 5).unwrap();
            0.5 + 0.5 * x.signum() * inner
        };
        assert!(ks_distance(xs, cdf) < 0.02);
    }

    #[test]
    fn uniform_model_rank_one_columns_are_signs() {
        let mut rng = RngStream::new(5, 0).rng();
        let m = build_uniform_model(50, 1, &mut rng);
        assert!(m.columns().all(|c| c[0].abs() == 1.0));
    }

    #[test]
    fn uniform_model_pair_correlation_bounded() {
        let mut rng = RngStream::new(6, 0).rng();
        for _ in 0..100 {
            let m = build_uniform_model(2, 4, &mut rng);
            let c = m.correlation(0, 1);
            assert!((-1.0..=1.0).contains(&c));
            assert!((m.correlation(0, 0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_model_pairs_are_uncorrelated_on_average() {
        let mut rng = RngStream::new(7, 0).rng();
        let m = build_uniform_model(1000, 10, &mut rng);
        let mut sum = 0.0;
        let mut count = 0.0;
        for i in 0..1000 {
            for j in (i + 1)..1000 {
                sum += m.correlation(i, j);
                count += 1.0;
            }
        }
        assert!((sum / count).abs() <= 0.01);
    }

    #[test]
    fn model_validation() {
        assert!(LowRankModel::from_columns(2, 2, vec![1.0, 0.0, 0.6, 0.8]).is_ok());
        assert!(LowRankModel::from_columns(2, 2, vec![1.0, 0.0, 0.6, 0.7]).is_err());
        assert!(LowRankModel::from_columns(2, 2, vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn identity_model_gives_standard_normals() {
        let m = LowRankModel::identity(3);
        let mut rng = RngStream::new(8, 0).rng();
        let s = sample_observations(&m, 10_000, &mut rng);
        for j in 0..3 {
            let (_, v) = mean_var(&s.column(j));
            assert!((0.95..=1.05).contains(&v));
        }
    }

    #[test]
    fn rank_one_extremes_are_chi_one() {
        let mut rng = RngStream::new(9, 0).rng();
        let m = build_uniform_model(40, 1, &mut rng);
        let s = sample_observations(&m, 10_000, &mut rng);
        let ks = ks_distance(s.extremes().to_vec(), |x| chi_cdf(x, 1).unwrap());
        assert!(ks < 0.02, "{ks}");
    }

    #[test]
    fn unit_marginals() {
        let mut rng = RngStream::new(10, 0).rng();
        let m = build_uniform_model(20, 4, &mut rng);
        let s = sample_observations(&m, 10_000, &mut rng);
        for j in 0..20 {
            let (mean, var) = mean_var(&s.column(j));
            assert!(mean.abs() <= 0.03 && (0.94..=1.06).contains(&var), "j={j}");
        }
    }

    #[test]
    fn latent_norm_concentrates() {
        let mut rng = RngStream::new(11, 0).rng();
        // At d = 60 about 2.8% of χ_d draws fall outside the band; d = 100 gives 0.46%.
        let d = 100;
        let m = build_uniform_model(5, d, &mut rng);
        let (_, z) = sample_observations_with_latent(&m, 2000, &mut rng);
        let inside = z
            .chunks_exact(d)
            .filter(|r| (0.8..=1.2).contains(&(dot(r, r).sqrt() / (d as f64).sqrt())))
            .count();
        assert!(inside as f64 >= 0.99 * 2000.0);
    }

    #[test]
    fn extreme_factorizes_through_latent_direction() {
        let mut rng = RngStream::new(12, 0).rng();
        let d = 7;
        let m = build_uniform_model(300, d, &mut rng);
        let (s, z) = sample_observations_with_latent(&m, 50, &mut rng);
        for (i, zi) in z.chunks_exact(d).enumerate() {
            let norm = dot(zi, zi).sqrt();
            let u: Vec<f64> = zi.iter().map(|v| v / norm).collect();
            let max_corr = m.columns().map(|c| dot(c, &u).abs()).fold(0.0, f64::max);
            assert!((s.extremes()[i] - norm * max_corr).abs() <= 1e-10);
        }
    }

    #[test]
    fn streamed_extremes_match_materialized() {
        let m = build_uniform_model(500, 9, &mut RngStream::new(13, 0).rng());
        let a = sample_observations(&m, 17, &mut RngStream::new(13, 1).rng());
        let b = sample_extremes(&m, 17, &mut RngStream::new(13, 1).rng());
        assert_eq!(a.extremes(), &b[..]);
    }

    #[test]
    fn observations_are_deterministic() {
        let run = || {
            let mut rng = RngStream::new(14, 9).rng();
            let m = build_uniform_model(100, 5, &mut rng);
            sample_observations(&m, 20, &mut rng)
        };
        let (a, b) = (run(), run());
        assert!(a
            .values()
            .iter()
            .zip(b.values())
            .all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn zero_noise_is_identity() {
        let mut rng = RngStream::new(15, 0).rng();
        let m = build_uniform_model(30, 3, &mut rng);
        let s = sample_observations(&m, 10, &mut rng);
        let y = add_noise(&s, &NoiseSpec::Scalar(0.0), &mut rng).unwrap();
        assert_eq!(s, y);
    }

    #[test]
    fn unit_noise_doubles_variance() {
        let mut rng = RngStream::new(16, 0).rng();
        let m = build_uniform_model(1, 1, &mut rng);
        let s = sample_observations(&m, 10_000, &mut rng);
        let y = add_noise(&s, &NoiseSpec::Scalar(1.0), &mut rng).unwrap();
        let (_, v) = mean_var(&y.column(0));
        assert!((v - 2.0).abs() <= 0.1, "{v}");
        let k = y.extremes();
        assert!(k.iter().zip(y.rows()).all(|(k, r)| *k == r[0].abs()));
    }

    #[test]
    fn noise_spec_validation() {
        assert!(NoiseSpec::Scalar(-1.0).validate(3).is_err());
        assert!(NoiseSpec::PerVariable(vec![0.1, 0.2]).validate(3).is_err());
        let spec = NoiseSpec::PerVariable(vec![0.1, 0.3, 0.2]);
        assert!(spec.validate(3).is_ok());
        assert_eq!(spec.sigma_max(), 0.3);
    }

    #[test]
    fn iid_extremes_single_variable_is_chi_one() {
        let mut rng = RngStream::new(17, 0).rng();
        let xs = sample_iid_extremes(1, 10_000, &mut rng);
        assert!(ks_distance(xs, |x| chi_cdf(x, 1).unwrap()) < 0.02);
    }

    #[test]
    fn csv_round_trip_with_header() {
        let m = SampleMatrix::new(2, 3, vec![0.1, -2.5, 1e-300, 3.0, 0.3333333333333333, -0.0])
            .unwrap();
        let mut buf = Vec::new();
        m.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("x1,x2,x3\n"));
        let back = SampleMatrix::read_csv(&buf[..]).unwrap();
        assert!(m
            .values()
            .iter()
            .zip(back.values())
            .all(|(a, b)| a.to_bits() == b.to_bits()));
    }

    #[test]
    fn csv_without_header_and_errors() {
        let m = SampleMatrix::read_csv("1,2\n\n3,-4\n".as_bytes()).unwrap();
        assert_eq!((m.n(), m.p()), (2, 2));
        assert_eq!(m.extremes(), &[2.0, 4.0]);
        let err = SampleMatrix::read_csv("1,2\n3,oops\n".as_bytes()).unwrap_err();
        assert!(matches!(err, RexError::Parse { line: 2, .. }), "{err:?}");
        let err = SampleMatrix::read_csv("x1,x2\n1,2\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, RexError::Parse { line: 3, .. }));
        assert_eq!(
            SampleMatrix::read_csv("x1,x2\n".as_bytes()).unwrap_err(),
            RexError::EmptyInput
        );
    }
}
