//! Monte Carlo engine for U(d)-invariant random matrices: seeded reproducible
//! streams, Haar unitaries via phase-fixed QR of complex Ginibre matrices,
//! prescribed-eigenvalue orbits, corners, sums of independent invariant
//! matrices, GUE_v, and the Hermitian eigensolver entry point.

use std::fmt;
use std::sync::Arc;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{eigh_hermitian, qr_unitary_positive_diag, CMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Name of the generator backing every stochastic routine; recorded in output
/// metadata so runs are reproducible at the algorithm level, not just the seed.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9; 64-bit seed, 64-bit stream id)";

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A reproducible randomness source: identical (seed, stream) pairs yield
/// bit-identical sample sequences; distinct stream ids are statistically
/// independent ChaCha streams over the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
    stream: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// Derives a child stream; children of distinct indices (and of distinct
    /// parents) land on distinct ChaCha streams via a splitmix64 tree hash.
    pub fn substream(&self, child: u64) -> Self {
        Self {
            seed: self.seed,
            stream: splitmix64(self.stream ^ splitmix64(child.wrapping_add(1))),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// Instantiates the generator at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }
}

/// Draws one eigenvalue vector from a seeded generator.
pub type EigenvalueSampler = Arc<dyn Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync>;

/// Eigenvalue sampler plus Haar conjugation: a U(d)-invariant random matrix
/// with prescribed (possibly random) eigenvalues.
#[derive(Clone)]
pub struct InvariantMatrixModel {
    d: usize,
    description: String,
    sampler: EigenvalueSampler,
}

impl fmt::Debug for InvariantMatrixModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantMatrixModel")
            .field("d", &self.d)
            .field("description", &self.description)
            .finish()
    }
}

impl InvariantMatrixModel {
    /// Deterministic eigenvalues: the Haar orbit of diag(eigs).
    pub fn deterministic(eigs: &[f64]) -> Self {
        assert!(!eigs.is_empty() && eigs.iter().all(|x| x.is_finite()));
        let fixed = eigs.to_vec();
        let description = format!(
            "orbit(diag[{}])",
            fixed
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Self {
            d: fixed.len(),
            description,
            sampler: Arc::new(move |_| fixed.clone()),
        }
    }

    pub fn from_sampler(
        d: usize,
        description: impl Into<String>,
        sampler: impl Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        assert!(d >= 1);
        Self {
            d,
            description: description.into(),
            sampler: Arc::new(sampler),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn sample_eigenvalues(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let eigs = (self.sampler)(rng);
        assert_eq!(
            eigs.len(),
            self.d,
            "eigenvalue sampler returned wrong length"
        );
        assert!(
            eigs.iter().all(|x| x.is_finite()),
            "eigenvalue sampler returned non-finite"
        );
        eigs
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the diagonal
/// of R made real positive. Unitarity defect stays below 1e-12 * sqrt(d).
pub fn sample_haar_unitary(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    assert!(d >= 1);
    loop {
        let g = CMatrix::from_fn(d, |_, _| {
            Complex64::new(standard_normal(rng), standard_normal(rng))
        });
        if let Some(q) = qr_unitary_positive_diag(&g) {
            return q;
        }
        // Singular Ginibre draw has probability zero; regenerate.
    }
}

/// Haar-distributed real orthogonal matrix: QR of a real Ginibre matrix with
/// the diagonal of R made positive.
pub fn sample_haar_orthogonal(d: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    assert!(d >= 1);
    loop {
        let g = CMatrix::from_fn(d, |_, _| Complex64::new(standard_normal(rng), 0.0));
        if let Some(q) = qr_unitary_positive_diag(&g) {
            return q;
        }
    }
}

/// U diag(lambda) U^dag with U Haar and lambda from the model's sampler,
/// drawn independently from the same stream.
pub fn sample_invariant(model: &InvariantMatrixModel, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let eigs = model.sample_eigenvalues(rng);
    let u = sample_haar_unitary(model.dim(), rng);
    HermitianMatrix::from_diag(&eigs).conjugate_by(&u)
}

/// Top-left d x d block.
pub fn corner(a: &HermitianMatrix, d: usize) -> Result<HermitianMatrix> {
    let dp = a.dim();
    if d < 1 || d > dp {
        return Err(Error::TargetRankOutOfRange {
            from: dp,
            target: d,
        });
    }
    let block = CMatrix::from_fn(d, |i, j| a.get(i, j));
    Ok(HermitianMatrix::new(block))
}

/// GUE_v sample: g has independent complex Gaussian strictly-upper entries
/// (real and imaginary parts of variance 1/2), real N(0,1) diagonal; returns
/// g - tr(g) I + x I with x ~ N(0, v) independent. tr is the normalized trace,
/// so the v = 0 ensemble is exactly traceless.
pub fn sample_gue_v(d: usize, v: f64, rng: &mut ChaCha8Rng) -> Result<HermitianMatrix> {
    if v < 0.0 {
        return Err(Error::NegativeVariance(v));
    }
    assert!(d >= 1);
    let mut g = CMatrix::zeros(d);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let z = Complex64::new(standard_normal(rng) * s, standard_normal(rng) * s);
            g.set(i, j, z);
            g.set(j, i, z.conj());
        }
    }
    for i in 0..d {
        g.set(i, i, Complex64::new(standard_normal(rng), 0.0));
    }
    let x = standard_normal(rng) * v.sqrt();
    let shift = x - g.normalized_trace().re;
    for i in 0..d {
        let cur = g.get(i, i);
        g.set(i, i, cur + Complex64::new(shift, 0.0));
    }
    Ok(HermitianMatrix::new(g))
}

/// Spectrum of a Hermitian matrix, sorted non-increasing, with residual
/// ||A - V diag(out) V^dag||_F <= 1e-10 * max(1, ||A||_F).
pub fn eigenvalues_hermitian(a: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(eigh_hermitian(a)?.values)
}

/// Sum of two independent invariant random matrices, drawn on independent
/// substreams (0 for `model_a`, 1 for `model_b`) of the given stream.
pub fn sum_independent(
    model_a: &InvariantMatrixModel,
    model_b: &InvariantMatrixModel,
    stream: &RngStream,
) -> Result<HermitianMatrix> {
    if model_a.dim() != model_b.dim() {
        return Err(Error::RankMismatch {
            expected: model_a.dim(),
            got: model_b.dim(),
        });
    }
    let a = sample_invariant(model_a, &mut stream.substream(0).rng());
    let b = sample_invariant(model_b, &mut stream.substream(1).rng());
    Ok(a.add(&b))
}
