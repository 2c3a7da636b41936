//! Highest-weight arithmetic for U(d): dominance, Weyl dimensions, Casimir
//! values, and the canonical (sorted) Weyl-chamber representative.
//!
//! Weight entries and dimensions are arbitrary-precision integers; entries may
//! be negative (these are U(d) weights, determinant twists are first-class).

use num::bigint::Sign;
use num::{BigInt, BigUint, Integer, One, Zero};

use crate::{Error, Result};

/// Dominant integer weight lambda_1 >= ... >= lambda_d of U(d).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HighestWeight {
    lambda: Vec<BigInt>,
}

impl HighestWeight {
    /// Builds a weight, validating d >= 1 and the dominance ordering.
    pub fn new(lambda: Vec<BigInt>) -> Result<Self> {
        if lambda.is_empty() {
            return Err(Error::InvalidRank(0, 1));
        }
        for pair in lambda.windows(2) {
            if pair[0] < pair[1] {
                return Err(Error::EntryOutOfRange(format!(
                    "entries not non-increasing: {} < {}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self { lambda })
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The zero weight (trivial representation) of rank d.
    pub fn zero(d: usize) -> Self {
        assert!(d >= 1);
        Self {
            lambda: vec![BigInt::zero(); d],
        }
    }

    /// (1, 0, ..., 0), the defining representation's weight.
    pub fn defining(d: usize) -> Self {
        assert!(d >= 1);
        let mut lambda = vec![BigInt::zero(); d];
        lambda[0] = BigInt::one();
        Self { lambda }
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.lambda.len()
    }

    #[inline]
    pub fn entries(&self) -> &[BigInt] {
        &self.lambda
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(|x| x.is_zero())
    }

    /// lambda + c * (1, ..., 1), the determinant twist by c.
    pub fn twisted(&self, c: &BigInt) -> Self {
        Self {
            lambda: self.lambda.iter().map(|x| x + c).collect(),
        }
    }

    /// c * lambda for c >= 1 (the dilated family used by scaling limits).
    pub fn dilated(&self, c: u64) -> Self {
        assert!(c >= 1, "dilation factor must be positive");
        let c = BigInt::from(c);
        Self {
            lambda: self.lambda.iter().map(|x| x * &c).collect(),
        }
    }

    /// (-lambda_d, ..., -lambda_1), the dual representation's weight.
    pub fn dual(&self) -> Self {
        Self {
            lambda: self.lambda.iter().rev().map(|x| -x).collect(),
        }
    }

    pub fn entries_f64(&self) -> Vec<f64> {
        self.lambda
            .iter()
            .map(|x| num::ToPrimitive::to_f64(x).expect("weight entry does not fit in f64"))
            .collect()
    }
}

impl std::fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.lambda.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Dimension of the irreducible U(d)-representation with highest weight `w`,
/// by the Weyl formula  prod_{i<j} (lambda_i - lambda_j + j - i) / (j - i).
pub fn dim_weyl(w: &HighestWeight) -> BigUint {
    let d = w.rank();
    let lam = w.entries();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..d {
        for j in (i + 1)..d {
            let gap = BigInt::from((j - i) as u64);
            num *= &lam[i] - &lam[j] + &gap;
            den *= gap;
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "Weyl dimension must be an exact integer");
    debug_assert!(q.sign() == Sign::Plus);
    q.to_biguint().expect("Weyl dimension is positive")
}

/// Eigenvalue of the Casimir element -sum_i rho(x_i)^2 on the irreducible
/// representation with highest weight `w`, for an orthonormal basis (x_i) of
/// u(d) with respect to <x, y> = Tr(x y*):
/// sum_i lambda_i (lambda_i + d + 1 - 2i),  i = 1..d.
pub fn casimir_value(w: &HighestWeight) -> BigInt {
    let d = w.rank() as i64;
    w.entries()
        .iter()
        .enumerate()
        .map(|(k, lam)| lam * (lam + BigInt::from(d - 1 - 2 * k as i64)))
        .sum()
}

/// Canonical Weyl-chamber representative: a real vector sorted non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamberPoint {
    x: Vec<f64>,
}

impl ChamberPoint {
    pub fn rank(&self) -> usize {
        self.x.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.x
    }
}

/// Sorts a real vector into the chamber (non-increasing); ties keep input
/// order (stable sort). Entries must be finite.
pub fn sort_to_chamber(v: &[f64]) -> ChamberPoint {
    assert!(!v.is_empty(), "chamber point needs at least one coordinate");
    assert!(
        v.iter().all(|x| x.is_finite()),
        "chamber coordinates must be finite"
    );
    let mut x = v.to_vec();
    x.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ChamberPoint { x }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::complex::Complex64;
    use proptest::prelude::*;

    use crate::linalg::CMatrix;

    fn hw(entries: &[i64]) -> HighestWeight {
        HighestWeight::from_i64(entries).unwrap()
    }

    /// Independent oracle: the dimension equals the number of Gelfand-Tsetlin
    /// patterns with the given (non-negative) top row.
    fn gt_pattern_count(top: &[i64]) -> u64 {
        fn go(row: &[i64]) -> u64 {
            if row.len() == 1 {
                return 1;
            }
            let mut total = 0;
            let mut next = vec![0i64; row.len() - 1];
            fn rec(row: &[i64], next: &mut Vec<i64>, pos: usize, total: &mut u64) {
                if pos == row.len() - 1 {
                    *total += go(&next.clone());
                    return;
                }
                for v in row[pos + 1]..=row[pos] {
                    next[pos] = v;
                    rec(row, next, pos + 1, total);
                }
            }
            rec(row, &mut next, 0, &mut total);
            total
        }
        go(top)
    }

    #[test]
    fn dim_examples() {
        assert_eq!(dim_weyl(&hw(&[1, 0])), BigUint::from(2u32));
        assert_eq!(dim_weyl(&hw(&[1, 1])), BigUint::from(1u32));
        // Frozen from the GT-pattern enumeration oracle below.
        assert_eq!(dim_weyl(&hw(&[2, 1, 0])), BigUint::from(8u32));
        assert_eq!(gt_pattern_count(&[2, 1, 0]), 8);
    }

    #[test]
    fn dim_matches_gt_enumeration() {
        let cases: [&[i64]; 6] = [
            &[3, 1],
            &[2, 2, 0],
            &[4, 2, 1],
            &[2, 1, 1, 0],
            &[3, 2, 1, 0],
            &[5, 0],
        ];
        for top in cases {
            let dim = dim_weyl(&hw(top));
            assert_eq!(dim, BigUint::from(gt_pattern_count(top)), "top row {top:?}");
        }
    }

    #[test]
    fn dim_handles_negative_entries_via_duality() {
        // dim is invariant under lambda -> (-lambda_d, ..., -lambda_1).
        let w = hw(&[2, 0, -3]);
        assert_eq!(dim_weyl(&w), dim_weyl(&w.dual()));
    }

    /// Orthonormal Hermitian basis of u(d) under Tr(H_a H_b): the defining
    /// representation sends x = iH to itself, so the Casimir operator is
    /// sum_a H_a^2 and must equal casimir_value((1,0,...,0)) times the identity.
    fn casimir_operator_defining(d: usize) -> CMatrix {
        let mut basis: Vec<CMatrix> = Vec::new();
        for i in 0..d {
            basis.push(CMatrix::from_fn(d, |r, c| {
                if r == i && c == i {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..d {
            for j in (i + 1)..d {
                basis.push(CMatrix::from_fn(d, |r, c| {
                    if (r, c) == (i, j) || (r, c) == (j, i) {
                        Complex64::new(s, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }));
                basis.push(CMatrix::from_fn(d, |r, c| {
                    if (r, c) == (i, j) {
                        Complex64::new(0.0, s)
                    } else if (r, c) == (j, i) {
                        Complex64::new(0.0, -s)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }));
            }
        }
        let mut acc = CMatrix::zeros(d);
        for h in &basis {
            acc = acc.add(&h.mul(h));
        }
        acc
    }

    #[test]
    fn casimir_examples() {
        assert_eq!(casimir_value(&hw(&[0, 0, 0])), BigInt::zero());
        // Frozen from the operator oracle: -sum rho(x_i)^2 on the defining rep.
        assert_eq!(casimir_value(&hw(&[1, 0])), BigInt::from(2));
        assert_eq!(casimir_value(&hw(&[1, 0, 0])), BigInt::from(3));
        for d in [2usize, 3] {
            let op = casimir_operator_defining(d);
            let expected = casimir_value(&HighestWeight::defining(d));
            let expected_f = num::ToPrimitive::to_f64(&expected).unwrap();
            for r in 0..d {
                for c in 0..d {
                    let want = if r == c { expected_f } else { 0.0 };
                    assert!(
                        (op.get(r, c) - Complex64::new(want, 0.0)).norm() < 1e-12,
                        "d={d}: Casimir operator is not {expected} * I"
                    );
                }
            }
        }
    }

    #[test]
    fn casimir_nonnegative_for_polynomial_weights() {
        for entries in [[3i64, 1, 0], [2, 2, 2], [5, 4, 0]] {
            assert!(casimir_value(&hw(&entries)) >= BigInt::zero());
        }
    }

    #[test]
    fn chamber_examples() {
        assert_eq!(sort_to_chamber(&[0.2, 1.5]).coords(), &[1.5, 0.2]);
        assert_eq!(sort_to_chamber(&[3.0, 3.0, 3.0]).coords(), &[3.0, 3.0, 3.0]);
        assert_eq!(
            sort_to_chamber(&[-1.0, 0.0, -2.0]).coords(),
            &[0.0, -1.0, -2.0]
        );
    }

    #[test]
    fn rejects_non_dominant() {
        assert!(HighestWeight::from_i64(&[0, 1]).is_err());
        assert!(HighestWeight::new(vec![]).is_err());
    }

    fn weight_strategy(max_d: usize) -> impl Strategy<Value = HighestWeight> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(-3i64..=5, d).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                HighestWeight::from_i64(&v).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dim_twist_invariant(w in weight_strategy(4), c in -4i64..=4) {
            let t = w.twisted(&BigInt::from(c));
            prop_assert_eq!(dim_weyl(&w), dim_weyl(&t));
        }

        #[test]
        fn dim_dual_symmetric(w in weight_strategy(4)) {
            prop_assert_eq!(dim_weyl(&w), dim_weyl(&w.dual()));
        }

        #[test]
        fn chamber_idempotent_permutation(v in proptest::collection::vec(-1e6..1e6f64, 1..6)) {
            let c = sort_to_chamber(&v);
            let again = sort_to_chamber(c.coords());
            prop_assert_eq!(c.coords(), again.coords());
            let mut a = v.clone();
            let mut b = c.coords().to_vec();
            a.sort_by(|x, y| x.partial_cmp(y).unwrap());
            b.sort_by(|x, y| x.partial_cmp(y).unwrap());
            prop_assert_eq!(a, b);
        }
    }
}
