//! Exact decomposition engines: tensor products via Littlewood-Richardson
//! skew-tableau enumeration, restriction via iterated Gelfand-Tsetlin
//! branching, tensor powers via dynamic programming, and the dimension-weighted
//! probability measure on highest weights that a reducible representation
//! induces.
//!
//! All multiplicities are exact big integers and all probabilities exact big
//! rationals; probabilities sum to 1 exactly by construction.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, BigUint, One, Signed, ToPrimitive, Zero};

use crate::weights::{dim_weyl, HighestWeight};
use crate::{Error, Result};

/// Default guard on the number of distinct weights any decomposition may hold.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Entries above this bound would make tableau/interlacing enumeration
/// infeasible long before memory runs out.
const MAX_ENUM_ENTRY: u64 = 1 << 40;

/// A decomposition into irreducibles without probability weighting:
/// weight -> multiplicity (exact, >= 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityMap {
    d: usize,
    counts: BTreeMap<HighestWeight, BigUint>,
}

impl MultiplicityMap {
    fn new(d: usize) -> Self {
        Self {
            d,
            counts: BTreeMap::new(),
        }
    }

    fn add(&mut self, w: HighestWeight, c: BigUint) {
        debug_assert_eq!(w.rank(), self.d);
        if c.is_zero() {
            return;
        }
        *self.counts.entry(w).or_insert_with(BigUint::zero) += c;
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, w: &HighestWeight) -> Option<&BigUint> {
        self.counts.get(w)
    }

    /// Entries in the canonical (lexicographic) weight order.
    pub fn iter(&self) -> impl Iterator<Item = (&HighestWeight, &BigUint)> {
        self.counts.iter()
    }

    /// Sum of multiplicity * dim over all components.
    pub fn total_dimension(&self) -> BigUint {
        self.counts.iter().map(|(w, c)| c * dim_weyl(w)).sum()
    }
}

impl IntoIterator for MultiplicityMap {
    type Item = (HighestWeight, BigUint);
    type IntoIter = std::collections::btree_map::IntoIter<HighestWeight, BigUint>;
    fn into_iter(self) -> Self::IntoIter {
        self.counts.into_iter()
    }
}

/// One component of a [`WeightMeasure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasureEntry {
    pub multiplicity: BigUint,
    pub probability: BigRational,
}

/// The random-highest-weight measure of a reducible representation: each
/// irreducible component carries probability multiplicity * dim / total_dim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMeasure {
    d: usize,
    total_dim: BigUint,
    entries: BTreeMap<HighestWeight, MeasureEntry>,
}

impl WeightMeasure {
    /// Builds the measure from (weight, multiplicity) components, merging
    /// duplicates. This is the measure-of-representation construction.
    pub fn from_components<I>(parts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (HighestWeight, BigUint)>,
    {
        let mut counts: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
        let mut d = None;
        for (w, c) in parts {
            match d {
                None => d = Some(w.rank()),
                Some(d0) if d0 != w.rank() => {
                    return Err(Error::RankMismatch {
                        expected: d0,
                        got: w.rank(),
                    })
                }
                _ => {}
            }
            if c.is_zero() {
                return Err(Error::EmptyInput("multiplicities must be >= 1"));
            }
            *counts.entry(w).or_insert_with(BigUint::zero) += c;
        }
        let d = d.ok_or(Error::EmptyInput("measure needs at least one component"))?;

        let mut total = BigUint::zero();
        let mut dims: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
        for (w, c) in &counts {
            let dim = dim_weyl(w);
            total += c * &dim;
            dims.insert(w.clone(), dim);
        }
        let total_int = BigInt::from(total.clone());

        let mut entries = BTreeMap::new();
        let mut prob_sum = BigRational::zero();
        for (w, c) in counts {
            let mass = BigInt::from(&c * &dims[&w]);
            let probability = BigRational::new(mass, total_int.clone());
            prob_sum += &probability;
            entries.insert(
                w,
                MeasureEntry {
                    multiplicity: c,
                    probability,
                },
            );
        }
        assert!(prob_sum.is_one(), "probabilities must sum to exactly 1");
        Ok(Self {
            d,
            total_dim: total,
            entries,
        })
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_dim(&self) -> &BigUint {
        &self.total_dim
    }

    pub fn entries(&self) -> impl Iterator<Item = (&HighestWeight, &MeasureEntry)> {
        self.entries.iter()
    }

    pub fn probability(&self, w: &HighestWeight) -> Option<&BigRational> {
        self.entries.get(w).map(|e| &e.probability)
    }

    pub fn multiplicity(&self, w: &HighestWeight) -> Option<&BigUint> {
        self.entries.get(w).map(|e| &e.multiplicity)
    }

    /// Coordinate-wise mean sum_lambda p(lambda) * lambda, exact.
    pub fn mean_vector(&self) -> Vec<BigRational> {
        let mut mean = vec![BigRational::zero(); self.d];
        for (w, e) in &self.entries {
            for (i, x) in w.entries().iter().enumerate() {
                mean[i] += &e.probability * BigRational::from(x.clone());
            }
        }
        mean
    }
}

/// The measure of an explicitly given direct sum.
pub fn measure_of_rep(parts: &[(HighestWeight, BigUint)]) -> Result<WeightMeasure> {
    WeightMeasure::from_components(parts.iter().cloned())
}

// ---------------------------------------------------------------------------
// Littlewood-Richardson tensor products
// ---------------------------------------------------------------------------

/// Enumerates Littlewood-Richardson skew fillings: starting from `base`,
/// horizontal strips of content[i] boxes labeled i are added for i = 0..d,
/// keeping partition shapes (at most d rows) and the lattice-word condition
///   sum_{q <= r} #i(q)  <=  sum_{q <= r-1} #(i-1)(q)   for i >= 1.
/// Each complete filling contributes 1 to the multiplicity of its final shape;
/// enumeration aborts once `cap` fillings have been recorded.
fn lr_skew_fillings(
    base: &[u64],
    content: &[u64],
    cap: usize,
) -> Result<BTreeMap<Vec<u64>, BigUint>> {
    struct Search<'a> {
        d: usize,
        content: &'a [u64],
        results: BTreeMap<Vec<u64>, BigUint>,
        fillings: usize,
        cap: usize,
        overflow: bool,
    }

    impl Search<'_> {
        fn next_label(&mut self, label: usize, shape: Vec<u64>, prev_counts: Vec<u64>) {
            if self.overflow {
                return;
            }
            if label == self.d {
                self.fillings += 1;
                if self.fillings > self.cap {
                    self.overflow = true;
                    return;
                }
                *self.results.entry(shape).or_insert_with(BigUint::zero) += 1u32;
                return;
            }
            let old_shape = shape;
            let mut new_shape = old_shape.clone();
            let mut cur_counts = vec![0u64; self.d];
            self.place(
                label,
                0,
                self.content[label],
                &old_shape,
                &mut new_shape,
                &prev_counts,
                &mut cur_counts,
                0,
                0,
            );
        }

        #[allow(clippy::too_many_arguments)]
        fn place(
            &mut self,
            label: usize,
            row: usize,
            remaining: u64,
            old_shape: &[u64],
            new_shape: &mut Vec<u64>,
            prev_counts: &[u64],
            cur_counts: &mut Vec<u64>,
            cur_cum: u64,
            prev_cum_above: u64,
        ) {
            let mut t_max = remaining;
            if row > 0 {
                // Rows stay a partition and the strip stays horizontal.
                t_max = t_max
                    .min(new_shape[row - 1].saturating_sub(old_shape[row]))
                    .min(old_shape[row - 1].saturating_sub(old_shape[row]));
            }
            if label > 0 {
                t_max = t_max.min(prev_cum_above.saturating_sub(cur_cum));
            }
            let last_row = row + 1 == self.d;
            for t in 0..=t_max {
                if last_row && t != remaining {
                    continue;
                }
                new_shape[row] = old_shape[row] + t;
                cur_counts[row] = t;
                if last_row {
                    self.next_label(label + 1, new_shape.clone(), cur_counts.clone());
                } else {
                    self.place(
                        label,
                        row + 1,
                        remaining - t,
                        old_shape,
                        new_shape,
                        prev_counts,
                        cur_counts,
                        cur_cum + t,
                        prev_cum_above + if label > 0 { prev_counts[row] } else { 0 },
                    );
                }
            }
            new_shape[row] = old_shape[row];
            cur_counts[row] = 0;
        }
    }

    let mut s = Search {
        d: base.len(),
        content,
        results: BTreeMap::new(),
        fillings: 0,
        cap,
        overflow: false,
    };
    s.next_label(0, base.to_vec(), vec![0; base.len()]);
    if s.overflow {
        return Err(Error::StateCapExceeded {
            cap,
            reached: s.fillings,
        });
    }
    Ok(s.results)
}

fn to_nonneg_parts(w: &HighestWeight, shift: &BigInt) -> Result<Vec<u64>> {
    w.entries()
        .iter()
        .map(|x| {
            let v = x + shift;
            v.to_u64()
                .filter(|&u| u <= MAX_ENUM_ENTRY)
                .ok_or_else(|| Error::EntryOutOfRange(v.to_string()))
        })
        .collect()
}

/// Kronecker tensor product of two irreducibles: returns nu -> c^nu_{ab} with
/// Littlewood-Richardson coefficients. Negative entries are handled by
/// shifting each factor by a determinant power and shifting the result back.
pub fn tensor_decompose(a: &HighestWeight, b: &HighestWeight) -> Result<MultiplicityMap> {
    tensor_decompose_with_cap(a, b, DEFAULT_STATE_CAP)
}

pub fn tensor_decompose_with_cap(
    a: &HighestWeight,
    b: &HighestWeight,
    cap: usize,
) -> Result<MultiplicityMap> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch {
            expected: a.rank(),
            got: b.rank(),
        });
    }
    let d = a.rank();
    let neg = |w: &HighestWeight| -> BigInt {
        let last = &w.entries()[d - 1];
        if last.is_negative() {
            -last
        } else {
            BigInt::zero()
        }
    };
    let shift_a = neg(a);
    let shift_b = neg(b);
    let base = to_nonneg_parts(a, &shift_a)?;
    let content = to_nonneg_parts(b, &shift_b)?;

    let total_shift = &shift_a + &shift_b;
    let mut out = MultiplicityMap::new(d);
    for (shape, count) in lr_skew_fillings(&base, &content, cap)? {
        let entries: Vec<BigInt> = shape
            .iter()
            .map(|&x| BigInt::from(x) - &total_shift)
            .collect();
        let w = HighestWeight::new(entries).expect("LR shapes are dominant");
        out.add(w, count);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Branching and restriction
// ---------------------------------------------------------------------------

/// One step of the branching rule U(d) -> U(d-1): the multiplicity-free set of
/// weights mu interlacing w, i.e. lambda_i >= mu_i >= lambda_{i+1}.
pub fn branch_one_step(w: &HighestWeight) -> Result<MultiplicityMap> {
    branch_one_step_with_cap(w, DEFAULT_STATE_CAP)
}

pub fn branch_one_step_with_cap(w: &HighestWeight, cap: usize) -> Result<MultiplicityMap> {
    let d = w.rank();
    if d < 2 {
        return Err(Error::InvalidRank(d, 2));
    }
    let lam = w.entries();

    let mut count = BigUint::one();
    for i in 0..d - 1 {
        let span = (&lam[i] - &lam[i + 1] + BigInt::one())
            .to_biguint()
            .expect("dominance makes interlacing spans positive");
        count *= span;
    }
    if count > BigUint::from(cap) {
        return Err(Error::StateCapExceeded {
            cap,
            reached: count.to_usize().unwrap_or(usize::MAX),
        });
    }

    let mut out = MultiplicityMap::new(d - 1);
    let mut mu: Vec<BigInt> = Vec::with_capacity(d - 1);
    fn rec(lam: &[BigInt], pos: usize, mu: &mut Vec<BigInt>, out: &mut MultiplicityMap) {
        if pos == lam.len() - 1 {
            let w = HighestWeight::new(mu.clone()).expect("interlacing weights are dominant");
            out.add(w, BigUint::one());
            return;
        }
        let mut v = lam[pos + 1].clone();
        while v <= lam[pos] {
            mu.push(v.clone());
            rec(lam, pos + 1, mu, out);
            mu.pop();
            v += 1;
        }
    }
    rec(lam, 0, &mut mu, &mut out);
    Ok(out)
}

/// Restriction of the irreducible with highest weight `w` from U(d') down the
/// chain of top-left block embeddings to U(d): multiplicities count interlacing
/// chains, probabilities are dimension-weighted.
pub fn restrict(w: &HighestWeight, d: usize) -> Result<WeightMeasure> {
    restrict_with_cap(w, d, DEFAULT_STATE_CAP)
}

pub fn restrict_with_cap(w: &HighestWeight, d: usize, cap: usize) -> Result<WeightMeasure> {
    let dp = w.rank();
    if d < 1 || d >= dp {
        return Err(Error::TargetRankOutOfRange {
            from: dp,
            target: d,
        });
    }
    let mut current: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
    current.insert(w.clone(), BigUint::one());
    for _ in d..dp {
        let mut next: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
        for (v, chains) in &current {
            for (mu, _) in branch_one_step_with_cap(v, cap)? {
                *next.entry(mu).or_insert_with(BigUint::zero) += chains;
            }
            if next.len() > cap {
                return Err(Error::StateCapExceeded {
                    cap,
                    reached: next.len(),
                });
            }
        }
        current = next;
    }
    let measure = WeightMeasure::from_components(current)?;
    // Branching preserves dimension; the measure's total must be dim(w).
    assert_eq!(
        measure.total_dim(),
        &dim_weyl(w),
        "restriction lost dimension mass"
    );
    Ok(measure)
}

// ---------------------------------------------------------------------------
// Tensor powers
// ---------------------------------------------------------------------------

/// The random-highest-weight measure of the n-th tensor power of the
/// irreducible with highest weight `w`, with the default state cap.
pub fn tensor_power_measure(w: &HighestWeight, n: u32) -> Result<WeightMeasure> {
    tensor_power_measure_with_cap(w, n, DEFAULT_STATE_CAP)
}

pub fn tensor_power_measure_with_cap(
    w: &HighestWeight,
    n: u32,
    cap: usize,
) -> Result<WeightMeasure> {
    if n < 1 {
        return Err(Error::EmptyInput("tensor power needs n >= 1"));
    }
    let d = w.rank();
    let defining = *w == HighestWeight::defining(d);

    let mut current: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
    current.insert(w.clone(), BigUint::one());
    for _ in 1..n {
        let mut next: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
        for (v, mult) in &current {
            if defining {
                // Pieri step for (1,0,...,0): add one box anywhere dominance
                // survives; multiplicity-free.
                let lam = v.entries();
                for i in 0..d {
                    if i == 0 || lam[i - 1] > lam[i] {
                        let mut entries = lam.to_vec();
                        entries[i] += 1;
                        let nu = HighestWeight::new(entries).expect("Pieri keeps dominance");
                        *next.entry(nu).or_insert_with(BigUint::zero) += mult;
                    }
                }
            } else {
                for (nu, c) in tensor_decompose(v, w)? {
                    *next.entry(nu).or_insert_with(BigUint::zero) += mult * c;
                }
            }
            if next.len() > cap {
                return Err(Error::StateCapExceeded {
                    cap,
                    reached: next.len(),
                });
            }
        }
        current = next;
    }

    let measure = WeightMeasure::from_components(current)?;
    assert_eq!(
        measure.total_dim(),
        &num::pow::pow(dim_weyl(w), n as usize),
        "tensor power lost dimension mass"
    );
    Ok(measure)
}

// ---------------------------------------------------------------------------
// Moments
// ---------------------------------------------------------------------------

fn rat_pow(x: &BigRational, k: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Exact mixed power-sum moment E[prod_j p_{k_j}(eps * lambda - center)] over
/// the finitely supported measure; `center` defaults to zero.
pub fn moments_power_sums(
    m: &WeightMeasure,
    ks: &[u32],
    eps: &BigRational,
    center: Option<&[BigRational]>,
) -> BigRational {
    if let Some(c) = center {
        assert_eq!(c.len(), m.rank(), "center length must match rank");
    }
    let mut acc = BigRational::zero();
    for (w, e) in m.entries() {
        let x: Vec<BigRational> = w
            .entries()
            .iter()
            .enumerate()
            .map(|(i, lam)| {
                let mut v = eps * BigRational::from(lam.clone());
                if let Some(c) = center {
                    v -= &c[i];
                }
                v
            })
            .collect();
        let mut term = BigRational::one();
        for &k in ks {
            let p: BigRational = x.iter().map(|xi| rat_pow(xi, k)).sum();
            term *= p;
        }
        acc += &e.probability * term;
    }
    acc
}

/// Double-precision variant for irrational scalings (e.g. eps = 1/sqrt(n)).
pub fn moments_power_sums_f64(
    m: &WeightMeasure,
    ks: &[u32],
    eps: f64,
    center: Option<&[f64]>,
) -> f64 {
    if let Some(c) = center {
        assert_eq!(c.len(), m.rank(), "center length must match rank");
    }
    let mut acc = 0.0;
    for (w, e) in m.entries() {
        let prob = e.probability.to_f64().expect("probability fits in f64");
        let x: Vec<f64> = w
            .entries()
            .iter()
            .enumerate()
            .map(|(i, lam)| {
                let v = eps * lam.to_f64().expect("weight entry fits in f64");
                v - center.map_or(0.0, |c| c[i])
            })
            .collect();
        let mut term = 1.0;
        for &k in ks {
            term *= x.iter().map(|xi| xi.powi(k as i32)).sum::<f64>();
        }
        acc += prob * term;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    fn hw(entries: &[i64]) -> HighestWeight {
        HighestWeight::from_i64(entries).unwrap()
    }

    fn mult_of(m: &MultiplicityMap, entries: &[i64]) -> u64 {
        m.multiplicity(&hw(entries))
            .map(|c| c.to_u64().unwrap())
            .unwrap_or(0)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn tensor_defining_square_d2() {
        let m = tensor_decompose(&hw(&[1, 0]), &hw(&[1, 0])).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(mult_of(&m, &[2, 0]), 1);
        assert_eq!(mult_of(&m, &[1, 1]), 1);
    }

    #[test]
    fn tensor_with_trivial_is_identity() {
        for entries in [&[3i64, 1, -2][..], &[0, 0], &[5]] {
            let a = hw(entries);
            let m = tensor_decompose(&a, &HighestWeight::zero(a.rank())).unwrap();
            assert_eq!(m.len(), 1);
            assert_eq!(m.multiplicity(&a), Some(&BigUint::one()));
        }
    }

    #[test]
    fn tensor_with_determinant_inverse_twists() {
        let m = tensor_decompose(&hw(&[1, 0]), &hw(&[-1, -1])).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(mult_of(&m, &[0, -1]), 1);
    }

    #[test]
    fn branch_examples() {
        let m = branch_one_step(&hw(&[1, 0])).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(mult_of(&m, &[1]), 1);
        assert_eq!(mult_of(&m, &[0]), 1);

        let det = branch_one_step(&hw(&[1, 1])).unwrap();
        assert_eq!(det.len(), 1);
        assert_eq!(mult_of(&det, &[1]), 1);

        let long = branch_one_step(&hw(&[7, 0])).unwrap();
        assert_eq!(long.len(), 8);
        for k in 0..=7 {
            assert_eq!(mult_of(&long, &[k]), 1);
        }
        // Dimension conservation: sum of U(1) dims = L + 1 = dim(L, 0).
        assert_eq!(long.total_dimension(), dim_weyl(&hw(&[7, 0])));
    }

    #[test]
    fn branch_rejects_rank_one() {
        assert!(matches!(
            branch_one_step(&hw(&[3])),
            Err(Error::InvalidRank(1, 2))
        ));
    }

    #[test]
    fn restrict_row_to_rank_one_is_uniform() {
        let l = 6i64;
        let m = restrict(&hw(&[l, 0]), 1).unwrap();
        assert_eq!(m.len(), (l + 1) as usize);
        for k in 0..=l {
            assert_eq!(m.probability(&hw(&[k])), Some(&rat(1, l + 1)));
        }
    }

    #[test]
    fn restrict_defining_d3_to_d2() {
        let m = restrict(&hw(&[1, 0, 0]), 2).unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.probability(&hw(&[1, 0])), Some(&rat(2, 3)));
        assert_eq!(m.probability(&hw(&[0, 0])), Some(&rat(1, 3)));
    }

    #[test]
    fn restrict_zero_weight_is_point_mass() {
        let m = restrict(&HighestWeight::zero(4), 2).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.probability(&HighestWeight::zero(2)), Some(&rat(1, 1)));
    }

    #[test]
    fn restrict_rejects_bad_target() {
        assert!(restrict(&hw(&[1, 0]), 2).is_err());
        assert!(restrict(&hw(&[1, 0]), 0).is_err());
    }

    #[test]
    fn measure_examples() {
        let point = measure_of_rep(&[(hw(&[1, 0]), BigUint::one())]).unwrap();
        assert_eq!(point.probability(&hw(&[1, 0])), Some(&rat(1, 1)));

        let two = measure_of_rep(&[(hw(&[2, 0]), BigUint::one()), (hw(&[1, 1]), BigUint::one())])
            .unwrap();
        assert_eq!(two.probability(&hw(&[2, 0])), Some(&rat(3, 4)));
        assert_eq!(two.probability(&hw(&[1, 1])), Some(&rat(1, 4)));

        // Multiplicity does not change a one-point measure, only total_dim.
        let doubled = measure_of_rep(&[(hw(&[1, 0]), BigUint::from(2u32))]).unwrap();
        assert_eq!(doubled.probability(&hw(&[1, 0])), Some(&rat(1, 1)));
        assert_eq!(doubled.total_dim(), &BigUint::from(4u32));

        assert!(measure_of_rep(&[]).is_err());
    }

    #[test]
    fn tensor_power_examples() {
        let n2 = tensor_power_measure(&hw(&[1, 0]), 2).unwrap();
        assert_eq!(n2.probability(&hw(&[2, 0])), Some(&rat(3, 4)));
        assert_eq!(n2.probability(&hw(&[1, 1])), Some(&rat(1, 4)));
        // Must agree with measure_of_rep of the explicit tensor decomposition.
        let direct = measure_of_rep(
            &tensor_decompose(&hw(&[1, 0]), &hw(&[1, 0]))
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(n2, direct);

        let n1 = tensor_power_measure(&hw(&[2, 1, 0]), 1).unwrap();
        assert_eq!(n1.probability(&hw(&[2, 1, 0])), Some(&rat(1, 1)));

        let n3 = tensor_power_measure(&hw(&[1, 0]), 3).unwrap();
        assert_eq!(n3.multiplicity(&hw(&[3, 0])), Some(&BigUint::one()));
        assert_eq!(n3.multiplicity(&hw(&[2, 1])), Some(&BigUint::from(2u32)));
        assert_eq!(n3.probability(&hw(&[3, 0])), Some(&rat(1, 2)));
        assert_eq!(n3.probability(&hw(&[2, 1])), Some(&rat(1, 2)));
    }

    #[test]
    fn tensor_power_pieri_agrees_with_general_lr_path() {
        // Same DP through explicit LR decompositions instead of Pieri steps.
        let w = hw(&[1, 0, 0]);
        let fast = tensor_power_measure(&w, 4).unwrap();
        let mut current: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
        current.insert(w.clone(), BigUint::one());
        for _ in 1..4 {
            let mut next: BTreeMap<HighestWeight, BigUint> = BTreeMap::new();
            for (v, mult) in &current {
                for (nu, c) in tensor_decompose(v, &w).unwrap() {
                    *next.entry(nu).or_insert_with(BigUint::zero) += mult * c;
                }
            }
            current = next;
        }
        let slow = WeightMeasure::from_components(current).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn tensor_power_cap_is_enforced() {
        let err = tensor_power_measure_with_cap(&hw(&[1, 0, 0]), 50, 10);
        assert!(matches!(err, Err(Error::StateCapExceeded { cap: 10, .. })));
    }

    #[test]
    fn tensor_filling_cap_is_enforced() {
        let err = tensor_decompose_with_cap(&hw(&[20, 10, 0]), &hw(&[20, 10, 0]), 100);
        assert!(matches!(err, Err(Error::StateCapExceeded { cap: 100, .. })));
    }

    #[test]
    fn moment_examples() {
        let point = measure_of_rep(&[(hw(&[1, 0]), BigUint::one())]).unwrap();
        let one = BigRational::one();
        assert_eq!(moments_power_sums(&point, &[1], &one, None), rat(1, 1));

        let uniform = restrict(&hw(&[1, 0]), 1).unwrap();
        assert_eq!(moments_power_sums(&uniform, &[2], &one, None), rat(1, 2));

        // Centering at the mean kills the first moment of any measure.
        let m = tensor_power_measure(&hw(&[1, 0]), 3).unwrap();
        let mean = m.mean_vector();
        let centered = moments_power_sums(&m, &[1], &one, Some(&mean));
        assert!(centered.is_zero());

        // Empty index tuple is the empty product.
        assert_eq!(moments_power_sums(&m, &[], &one, None), rat(1, 1));
    }

    // -----------------------------------------------------------------------
    // Character-based oracle for LR coefficients: evaluate the product of two
    // Schur/Weyl characters at random diagonal unitaries and solve for the
    // integer coefficients by least squares over the candidate support.
    // -----------------------------------------------------------------------

    use num::complex::Complex64;

    fn det_complex(mut m: Vec<Vec<Complex64>>) -> Complex64 {
        let n = m.len();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| m[i][col].norm().partial_cmp(&m[j][col].norm()).unwrap())
                .unwrap();
            if m[pivot][col].norm() < 1e-300 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            det *= m[col][col];
            for i in col + 1..n {
                let f = m[i][col] / m[col][col];
                for j in col..n {
                    let sub = f * m[col][j];
                    m[i][j] -= sub;
                }
            }
        }
        det
    }

    /// Weyl character of U(d) at a diagonal unitary, via the bialternant
    /// formula; handles negative weight entries through z^k with k < 0.
    fn character_at(lambda: &[i64], z: &[Complex64]) -> Complex64 {
        let d = lambda.len();
        let num: Vec<Vec<Complex64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| z[i].powi((lambda[j] + (d - 1 - j) as i64) as i32))
                    .collect()
            })
            .collect();
        let den: Vec<Vec<Complex64>> = (0..d)
            .map(|i| (0..d).map(|j| z[i].powi((d - 1 - j) as i32)).collect())
            .collect();
        det_complex(num) / det_complex(den)
    }

    fn dominant_candidates(a: &[i64], b: &[i64]) -> Vec<Vec<i64>> {
        let d = a.len();
        let total: i64 = a.iter().sum::<i64>() + b.iter().sum::<i64>();
        let hi = a[0] + b[0];
        let lo = a[d - 1] + b[d - 1];
        let mut out = Vec::new();
        let mut cur = vec![0i64; d];
        fn rec(
            d: usize,
            pos: usize,
            rem: i64,
            maxv: i64,
            lo: i64,
            cur: &mut Vec<i64>,
            out: &mut Vec<Vec<i64>>,
        ) {
            if pos == d {
                if rem == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let slots = (d - pos) as i64;
            for v in lo..=maxv {
                let rest = rem - v;
                // Remaining entries lie in [lo, v]; prune infeasible sums.
                if rest < (slots - 1) * lo || rest > (slots - 1) * v {
                    continue;
                }
                cur[pos] = v;
                rec(d, pos + 1, rest, v, lo, cur, out);
            }
        }
        rec(d, 0, total, hi, lo, &mut cur, &mut out);
        out
    }

    fn solve_complex(mut a: Vec<Vec<Complex64>>, mut rhs: Vec<Complex64>) -> Vec<Complex64> {
        let n = a.len();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap())
                .unwrap();
            a.swap(pivot, col);
            rhs.swap(pivot, col);
            for i in col + 1..n {
                let f = a[i][col] / a[col][col];
                for j in col..n {
                    let sub = f * a[col][j];
                    a[i][j] -= sub;
                }
                let sub = f * rhs[col];
                rhs[i] -= sub;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            for j in i + 1..n {
                acc -= a[i][j] * x[j];
            }
            x[i] = acc / a[i][i];
        }
        x
    }

    /// LR coefficients by least squares on character products evaluated at
    /// random diagonal unitaries; coefficients must round to exact integers.
    fn lr_by_characters(a: &[i64], b: &[i64], seed: u64) -> HashMap<Vec<i64>, u64> {
        use rand::{Rng, SeedableRng};
        let d = a.len();
        let cands = dominant_candidates(a, b);
        let npts = cands.len() + 20;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let points: Vec<Vec<Complex64>> = (0..npts)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let th: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                        Complex64::new(th.cos(), th.sin())
                    })
                    .collect()
            })
            .collect();
        // Least squares via normal equations M^dag M c = M^dag t.
        let m: Vec<Vec<Complex64>> = points
            .iter()
            .map(|z| cands.iter().map(|nu| character_at(nu, z)).collect())
            .collect();
        let t: Vec<Complex64> = points
            .iter()
            .map(|z| character_at(a, z) * character_at(b, z))
            .collect();
        let nc = cands.len();
        let mut gram = vec![vec![Complex64::new(0.0, 0.0); nc]; nc];
        let mut rhs = vec![Complex64::new(0.0, 0.0); nc];
        for p in 0..npts {
            for i in 0..nc {
                let mi = m[p][i].conj();
                rhs[i] += mi * t[p];
                for j in 0..nc {
                    gram[i][j] += mi * m[p][j];
                }
            }
        }
        let c = solve_complex(gram, rhs);
        let mut out = HashMap::new();
        for (nu, coeff) in cands.into_iter().zip(c) {
            let rounded = coeff.re.round();
            assert!(
                (coeff - Complex64::new(rounded, 0.0)).norm() < 1e-6,
                "character solve did not produce an integer: {coeff} for {nu:?}"
            );
            if rounded > 0.5 {
                out.insert(nu, rounded as u64);
            }
        }
        out
    }

    fn assert_matches_oracle(a: &[i64], b: &[i64], seed: u64) {
        let lr = tensor_decompose(&hw(a), &hw(b)).unwrap();
        let oracle = lr_by_characters(a, b, seed);
        let lr_as_map: HashMap<Vec<i64>, u64> = lr
            .iter()
            .map(|(w, c)| {
                let key: Vec<i64> = w.entries().iter().map(|x| x.to_i64().unwrap()).collect();
                (key, c.to_u64().unwrap())
            })
            .collect();
        assert_eq!(lr_as_map, oracle, "LR mismatch for {a:?} (x) {b:?}");
    }

    #[test]
    fn tensor_matches_character_oracle() {
        assert_matches_oracle(&[1, 0], &[1, 0], 11);
        assert_matches_oracle(&[2, 0], &[2, 0], 12);
        assert_matches_oracle(&[2, 1], &[2, 1], 13);
        assert_matches_oracle(&[1, -1], &[1, 0], 14);
        assert_matches_oracle(&[1, 0, 0], &[1, 1, 0], 15);
        assert_matches_oracle(&[2, 1, 0], &[1, 0, 0], 16);
        assert_matches_oracle(&[2, 1, 0], &[2, 1, 0], 17);
    }

    // -----------------------------------------------------------------------
    // Brute-force chain enumeration, independent of the rank-by-rank DP.
    // -----------------------------------------------------------------------

    fn chains_brute_force(w: &HighestWeight, d: usize) -> HashMap<Vec<i64>, u64> {
        fn all_interlacing(lam: &[i64]) -> Vec<Vec<i64>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(lam: &[i64], pos: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
                if pos == lam.len() - 1 {
                    out.push(cur.clone());
                    return;
                }
                for v in lam[pos + 1]..=lam[pos] {
                    cur.push(v);
                    rec(lam, pos + 1, cur, out);
                    cur.pop();
                }
            }
            rec(lam, 0, &mut cur, &mut out);
            out
        }
        fn rec(lam: Vec<i64>, d: usize, out: &mut HashMap<Vec<i64>, u64>) {
            if lam.len() == d {
                *out.entry(lam).or_insert(0) += 1;
                return;
            }
            for mu in all_interlacing(&lam) {
                rec(mu, d, out);
            }
        }
        let top: Vec<i64> = w.entries().iter().map(|x| x.to_i64().unwrap()).collect();
        let mut out = HashMap::new();
        rec(top, d, &mut out);
        out
    }

    #[test]
    fn restrict_matches_chain_enumeration() {
        let cases: [(&[i64], usize); 4] = [
            (&[3, 1, 0], 1),
            (&[4, 2, 1, 0], 2),
            (&[2, 0, -1], 1),
            (&[3, 2, 1, -1], 3),
        ];
        for (entries, d) in cases {
            let w = hw(entries);
            let m = restrict(&w, d).unwrap();
            let brute = chains_brute_force(&w, d);
            assert_eq!(
                m.len(),
                brute.len(),
                "support mismatch for {entries:?} -> {d}"
            );
            for (mu, chains) in brute {
                let got = m
                    .multiplicity(&hw(&mu))
                    .map(|c| c.to_u64().unwrap())
                    .unwrap_or(0);
                assert_eq!(got, chains, "chain count mismatch at {mu:?}");
            }
        }
    }

    // -----------------------------------------------------------------------
    // Property tests
    // -----------------------------------------------------------------------

    fn weight_strategy(max_d: usize) -> impl Strategy<Value = HighestWeight> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(-3i64..=5, d).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                HighestWeight::from_i64(&v).unwrap()
            })
        })
    }

    fn weight_pair(max_d: usize) -> impl Strategy<Value = (HighestWeight, HighestWeight)> {
        (1..=max_d).prop_flat_map(|d| {
            let w = proptest::collection::vec(-3i64..=5, d).prop_map(|mut v| {
                v.sort_unstable_by(|a, b| b.cmp(a));
                HighestWeight::from_i64(&v).unwrap()
            });
            (w.clone(), w)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn tensor_conserves_dimension((a, b) in weight_pair(4)) {
            let m = tensor_decompose(&a, &b).unwrap();
            prop_assert_eq!(m.total_dimension(), dim_weyl(&a) * dim_weyl(&b));
        }

        #[test]
        fn tensor_is_symmetric((a, b) in weight_pair(3)) {
            let ab = tensor_decompose(&a, &b).unwrap();
            let ba = tensor_decompose(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn tensor_twist_equivariance((a, b) in weight_pair(3), c in -3i64..=3) {
            let shift = BigInt::from(c);
            let twisted = tensor_decompose(&a.twisted(&shift), &b).unwrap();
            let plain = tensor_decompose(&a, &b).unwrap();
            let mut expected = MultiplicityMap::new(a.rank());
            for (nu, count) in plain {
                expected.add(nu.twisted(&shift), count);
            }
            prop_assert_eq!(twisted, expected);
        }

        #[test]
        fn branching_conserves_dimension(w in weight_strategy(4)) {
            prop_assume!(w.rank() >= 2);
            let m = branch_one_step(&w).unwrap();
            prop_assert_eq!(m.total_dimension(), dim_weyl(&w));
        }
    }
}
