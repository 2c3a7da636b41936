//! Exact non-commutative moments tr[rho(x_1) ... rho(x_k)] of tensor powers of
//! the defining representation, via the set-partition expansion
//!
//!   eps^k * sum_{pi in P(k)} n(n-1)...(n-|pi|+1) * prod_{B in pi} tr(prod_{i in B} x_i)
//!
//! (blocks multiplied in ascending index order, tr the normalized trace),
//! plus the Gaussian (Wick) limit over pair partitions. The expansion is exact
//! for every finite n without ever forming d^n-dimensional operators.

use num::complex::Complex64;

use crate::linalg::{CMatrix, HermitianMatrix};
use crate::{Error, Result};

/// Bell(8) = 4140 partitions; larger k would be slow and is rejected.
pub const MOMENT_ORDER_CAP: usize = 8;

/// An element of u(d) in the Hermitian convention: the Lie-algebra element is
/// i*H for a Hermitian matrix H.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    h: HermitianMatrix,
}

impl LieElement {
    pub fn new(h: HermitianMatrix) -> Self {
        Self { h }
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        Self {
            h: HermitianMatrix::from_diag(diag),
        }
    }

    pub fn rank(&self) -> usize {
        self.h.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.h
    }

    /// tr(H), real for Hermitian H.
    pub fn normalized_trace(&self) -> f64 {
        self.h.matrix().normalized_trace().re
    }

    /// H - tr(H) * I, the per-slot centering.
    pub fn centered(&self) -> LieElement {
        let d = self.rank();
        let c = self.normalized_trace();
        let m = CMatrix::from_fn(d, |i, j| {
            let v = self.h.get(i, j);
            if i == j {
                v - Complex64::new(c, 0.0)
            } else {
                v
            }
        });
        LieElement {
            h: HermitianMatrix::new(m),
        }
    }
}

/// Lie bracket in the Hermitian convention: for x = iH_x, y = iH_y the bracket
/// [x, y] corresponds to H_out = i (H_x H_y - H_y H_x), which is Hermitian.
pub fn bracket(x: &LieElement, y: &LieElement) -> Result<LieElement> {
    if x.rank() != y.rank() {
        return Err(Error::RankMismatch {
            expected: x.rank(),
            got: y.rank(),
        });
    }
    let hx = x.h.matrix();
    let hy = y.h.matrix();
    let comm = hx.mul(hy).sub(&hy.mul(hx));
    Ok(LieElement {
        h: HermitianMatrix::new(comm.scale(Complex64::new(0.0, 1.0))),
    })
}

/// Partition of {0, ..., k-1} into disjoint non-empty blocks; blocks are sorted
/// ascending internally and ordered by their least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartition {
    pub blocks: Vec<Vec<usize>>,
}

/// All set partitions of {0, ..., k-1}, enumerated through restricted growth
/// strings in lexicographic order.
pub fn set_partitions(k: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    fn rec(rgs: &mut Vec<usize>, pos: usize, max_used: usize, out: &mut Vec<SetPartition>) {
        if pos == rgs.len() {
            let nblocks = max_used + 1;
            let mut blocks = vec![Vec::new(); nblocks];
            for (i, &b) in rgs.iter().enumerate() {
                blocks[b].push(i);
            }
            out.push(SetPartition { blocks });
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[pos] = b;
            rec(rgs, pos + 1, max_used.max(b), out);
        }
    }
    if k == 0 {
        return vec![SetPartition { blocks: Vec::new() }];
    }
    rgs[0] = 0;
    rec(&mut rgs, 1, 0, &mut out);
    out
}

fn check_common_rank(xs: &[LieElement]) -> Result<usize> {
    let d = xs
        .first()
        .ok_or(Error::EmptyInput("moment needs at least one element"))?
        .rank();
    for x in xs {
        if x.rank() != d {
            return Err(Error::RankMismatch {
                expected: d,
                got: x.rank(),
            });
        }
    }
    Ok(d)
}

fn block_trace(mats: &[CMatrix], block: &[usize]) -> Complex64 {
    let mut it = block.iter();
    let first = *it.next().expect("blocks are non-empty");
    let mut acc = mats[first].clone();
    for &i in it {
        acc = acc.mul(&mats[i]);
    }
    acc.normalized_trace()
}

/// Falling factorial n (n-1) ... (n-m+1); zero when m > n.
fn falling_factorial(n: u64, m: usize) -> f64 {
    let mut acc = 1.0;
    for j in 0..m {
        acc *= n as f64 - j as f64;
        if acc == 0.0 {
            return 0.0;
        }
    }
    acc
}

/// Exact normalized-trace moment of the ordered product of the operators
/// eps * (rho^{(x) n}(x_i) - [centered] n tr(H_i) Id) on (C^d)^{(x) n}, where
/// rho is the n-th tensor power of the defining representation.
///
/// Mixed moments of non-commuting arguments are complex in general (the value
/// is real whenever the argument tuple is invariant under reversal, e.g. a
/// single repeated element).
pub fn tensor_power_trace_moment(
    xs: &[LieElement],
    n: u64,
    centered: bool,
    eps: f64,
) -> Result<Complex64> {
    tensor_power_trace_moment_with_cap(xs, n, centered, eps, MOMENT_ORDER_CAP)
}

pub fn tensor_power_trace_moment_with_cap(
    xs: &[LieElement],
    n: u64,
    centered: bool,
    eps: f64,
    cap: usize,
) -> Result<Complex64> {
    let k = xs.len();
    check_common_rank(xs)?;
    if k > cap {
        return Err(Error::MomentOrderCap { k, cap });
    }
    let mats: Vec<CMatrix> = xs
        .iter()
        .map(|x| {
            if centered {
                x.centered().h.into_matrix()
            } else {
                x.h.matrix().clone()
            }
        })
        .collect();

    // Fixed summation order: bucket by block count, then add buckets in
    // ascending order; within a bucket terms arrive in RGS-lexicographic order.
    let mut buckets = vec![Complex64::new(0.0, 0.0); k + 1];
    for part in set_partitions(k) {
        let m = part.blocks.len();
        let ff = falling_factorial(n, m);
        if ff == 0.0 {
            continue;
        }
        let mut prod = Complex64::new(1.0, 0.0);
        for block in &part.blocks {
            prod *= block_trace(&mats, block);
        }
        buckets[m] += prod * ff;
    }
    let total: Complex64 = buckets.into_iter().sum();
    Ok(total * eps.powi(k as i32))
}

/// Gaussian limit of the centered, eps = 1/sqrt(n) rescaled moments: zero for
/// odd k; for even k the sum over pair partitions of products of covariances
/// tr(x_i x_j) (centering applied internally).
pub fn wick_limit_moment(xs: &[LieElement]) -> Complex64 {
    let k = xs.len();
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if k % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let mats: Vec<CMatrix> = xs.iter().map(|x| x.centered().h.into_matrix()).collect();
    let mut cov = vec![vec![Complex64::new(0.0, 0.0); k]; k];
    for i in 0..k {
        for j in 0..k {
            cov[i][j] = mats[i].mul(&mats[j]).normalized_trace();
        }
    }
    fn pairings(remaining: &[usize], cov: &[Vec<Complex64>]) -> Complex64 {
        if remaining.is_empty() {
            return Complex64::new(1.0, 0.0);
        }
        let first = remaining[0];
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 1..remaining.len() {
            let partner = remaining[idx];
            let mut rest: Vec<usize> = remaining[1..].to_vec();
            rest.remove(idx - 1);
            acc += cov[first][partner] * pairings(&rest, cov);
        }
        acc
    }
    let all: Vec<usize> = (0..k).collect();
    pairings(&all, &cov)
}
