//! Dense complex matrices at desk scale (d <= 64): products, adjoints, traces,
//! Householder QR with the positive-diagonal phase convention, and a cyclic
//! Jacobi eigensolver for complex Hermitian matrices.

use num::complex::Complex64;

use crate::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Row-major square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    d: usize,
    a: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(d: usize) -> Self {
        assert!(d >= 1, "matrix dimension must be positive");
        Self {
            d,
            a: vec![ZERO; d * d],
        }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                ZERO
            }
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.d + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.d + j] = v;
    }

    pub fn mul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix product");
        let d = self.d;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == ZERO {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix sum");
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(rhs.a.iter()) {
            *x += *y;
        }
        out
    }

    pub fn sub(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.d, rhs.d, "dimension mismatch in matrix difference");
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(rhs.a.iter()) {
            *x -= *y;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x *= c;
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.d, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.d).map(|i| self.get(i, i)).sum()
    }

    /// tr = Tr / d, the normalized trace.
    pub fn normalized_trace(&self) -> Complex64 {
        self.trace() / self.d as f64
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ||A^dag A - I||_F, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .sub(&CMatrix::identity(self.d))
            .frobenius_norm()
    }
}

/// Self-adjoint complex matrix. Construction symmetrizes via (A + A^dag)/2 and
/// asserts the defect stays below 1e-12 * ||A||_F.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: CMatrix,
}

impl HermitianMatrix {
    pub fn new(a: CMatrix) -> Self {
        let adj = a.adjoint();
        let defect = a.sub(&adj).frobenius_norm();
        assert!(
            defect <= 1e-12 * a.frobenius_norm().max(f64::MIN_POSITIVE),
            "symmetry defect {defect:.3e} exceeds 1e-12 * ||A||"
        );
        let m = a.add(&adj).scale(Complex64::new(0.5, 0.0));
        Self { m }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self {
            m: CMatrix::from_diag(diag),
        }
    }

    pub fn zeros(d: usize) -> Self {
        Self {
            m: CMatrix::zeros(d),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m.get(i, j)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn add(&self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix {
            m: self.m.add(&rhs.m),
        }
    }

    pub fn scale_real(&self, c: f64) -> HermitianMatrix {
        HermitianMatrix {
            m: self.m.scale(Complex64::new(c, 0.0)),
        }
    }

    /// U A U^dag.
    pub fn conjugate_by(&self, u: &CMatrix) -> HermitianMatrix {
        HermitianMatrix::new(u.mul(&self.m).mul(&u.adjoint()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.frobenius_norm()
    }

    /// Tr(A B), real for Hermitian A, B.
    pub fn trace_product(&self, rhs: &HermitianMatrix) -> f64 {
        self.m.mul(&rhs.m).trace().re
    }
}

/// Q factor of the Householder QR of `a`, with the phase convention that the
/// diagonal of R is real and positive (mandatory for the Haar property of
/// Ginibre-based sampling). Returns `None` when a diagonal of R is numerically
/// zero; callers regenerate their input in that measure-zero case.
pub fn qr_unitary_positive_diag(a: &CMatrix) -> Option<CMatrix> {
    let d = a.dim();
    let mut r = a.clone();
    let mut q = CMatrix::identity(d);
    let mut v = vec![ZERO; d];

    for j in 0..d {
        let m = d - j;
        let mut normx_sq = 0.0;
        for i in 0..m {
            v[i] = r.get(j + i, j);
            normx_sq += v[i].norm_sqr();
        }
        let normx = normx_sq.sqrt();
        if normx < 1e-300 {
            return None;
        }
        // alpha = -e^{i arg(x0)} * ||x||; reflector maps the column to alpha*e1.
        let x0 = v[0];
        let phase = if x0.norm() < 1e-300 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * normx;
        v[0] -= alpha;
        let vnorm_sq: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq < 1e-300 {
            continue;
        }
        let tau = 2.0 / vnorm_sq;

        // R <- P R on the trailing block, P = I - tau v v^dag.
        for col in j..d {
            let mut w = ZERO;
            for i in 0..m {
                w += v[i].conj() * r.get(j + i, col);
            }
            w *= tau;
            for i in 0..m {
                let cur = r.get(j + i, col);
                r.set(j + i, col, cur - v[i] * w);
            }
        }
        // Q <- Q P (accumulate reflectors in application order).
        for row in 0..d {
            let mut w = ZERO;
            for i in 0..m {
                w += q.get(row, j + i) * v[i];
            }
            w *= tau;
            for i in 0..m {
                let cur = q.get(row, j + i);
                q.set(row, j + i, cur - w * v[i].conj());
            }
        }
    }

    // Column phases: A = (Q D)(D^{-1} R) with D = diag(R_jj / |R_jj|).
    for j in 0..d {
        let rjj = r.get(j, j);
        let n = rjj.norm();
        if n < 1e-300 {
            return None;
        }
        let ph = rjj / n;
        for row in 0..d {
            let cur = q.get(row, j);
            q.set(row, j, cur * ph);
        }
    }
    Some(q)
}

/// Eigendecomposition A = V diag(values) V^dag with eigenvalues sorted
/// non-increasing and V's columns permuted to match.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

fn offdiag_norm(m: &CMatrix) -> f64 {
    let d = m.dim();
    let mut s = 0.0;
    for p in 0..d {
        for q in 0..d {
            if p != q {
                s += m.get(p, q).norm_sqr();
            }
        }
    }
    s.sqrt()
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// Cyclic Jacobi for complex Hermitian matrices. Each pivot is annihilated by
/// the exact unitary diagonalization of its 2x2 block; convergence is declared
/// when the off-diagonal Frobenius norm drops below 1e-13 * max(1, ||A||_F).
pub fn eigh_hermitian(a: &HermitianMatrix) -> Result<Eigh> {
    let d = a.dim();
    let mut m = a.matrix().clone();
    let mut v = CMatrix::identity(d);
    let tol = 1e-13 * a.frobenius_norm().max(1.0);

    if d > 1 {
        let mut converged = false;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if offdiag_norm(&m) <= tol {
                converged = true;
                break;
            }
            let skip = tol / (d * d) as f64;
            for p in 0..d - 1 {
                for q in p + 1..d {
                    let apq = m.get(p, q);
                    let beta = apq.norm();
                    if beta <= skip {
                        continue;
                    }
                    let phase = apq / beta; // e^{i theta}
                    let app = m.get(p, p).re;
                    let aqq = m.get(q, q).re;
                    let tau = (app - aqq) / (2.0 * beta);
                    let t = if tau == 0.0 {
                        1.0
                    } else {
                        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // Columns of the embedded rotation:
                    //   u_p = (c, s e^{-i theta}),  u_q = (-s e^{i theta}, c).
                    let se_m = Complex64::new(s, 0.0) * phase.conj();
                    let se_p = Complex64::new(s, 0.0) * phase;

                    // A <- A U (column update).
                    for r in 0..d {
                        let arp = m.get(r, p);
                        let arq = m.get(r, q);
                        m.set(r, p, arp * c + arq * se_m);
                        m.set(r, q, arq * c - arp * se_p);
                    }
                    // A <- U^dag A (row update).
                    for col in 0..d {
                        let apc = m.get(p, col);
                        let aqc = m.get(q, col);
                        m.set(p, col, apc * c + aqc * se_p);
                        m.set(q, col, aqc * c - apc * se_m);
                    }
                    // The pivot is zero by construction; pin it and keep the
                    // diagonal exactly real.
                    m.set(p, q, ZERO);
                    m.set(q, p, ZERO);
                    let dpp = m.get(p, p);
                    let dqq = m.get(q, q);
                    m.set(p, p, Complex64::new(dpp.re, 0.0));
                    m.set(q, q, Complex64::new(dqq.re, 0.0));

                    // V <- V U.
                    for r in 0..d {
                        let vrp = v.get(r, p);
                        let vrq = v.get(r, q);
                        v.set(r, p, vrp * c + vrq * se_m);
                        v.set(r, q, vrq * c - vrp * se_p);
                    }
                }
            }
        }
        if !converged && offdiag_norm(&m) > tol {
            return Err(Error::EigensolverNoConvergence(JACOBI_MAX_SWEEPS));
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m.get(j, j).re.partial_cmp(&m.get(i, i).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = CMatrix::from_fn(d, |r, cidx| v.get(r, order[cidx]));
    Ok(Eigh { values, vectors })
}
