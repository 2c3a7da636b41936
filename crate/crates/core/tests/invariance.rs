//! Distributional invariance checks that cut across modules: conjugating by a
//! fixed unitary must not move empirical corner laws, and the law of a sum of
//! independent invariant matrices must not depend on the sampling order.
//! "Within 3 standard errors" is implemented as 3x the W1 self-distance of two
//! independent replicas of the same law (the Monte Carlo noise floor).

use hwlab::compare::{w1_discrete, w1_discrete_vs_uniform};
use hwlab::linalg::CMatrix;
use hwlab::rmt::{
    corner, eigenvalues_hermitian, sample_haar_unitary, sample_invariant, sum_independent,
    InvariantMatrixModel, RngStream,
};

const N: usize = 20_000;

fn corner_law(
    model: &InvariantMatrixModel,
    d: usize,
    conjugate_by: Option<&CMatrix>,
    stream: &RngStream,
) -> Vec<(f64, f64)> {
    let w = 1.0 / N as f64;
    (0..N)
        .map(|i| {
            let mut rng = stream.substream(i as u64).rng();
            let mut a = sample_invariant(model, &mut rng);
            if let Some(u) = conjugate_by {
                a = a.conjugate_by(u);
            }
            let eigs = eigenvalues_hermitian(&corner(&a, d).unwrap()).unwrap();
            (eigs[0], w)
        })
        .collect()
}

fn sorted(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    v
}

#[test]
fn corner_law_is_adjoint_invariant() {
    let model = InvariantMatrixModel::deterministic(&[1.0, 0.0, -0.5]);
    let base = RngStream::new(31_337);
    let w = sample_haar_unitary(3, &mut base.substream(999_999).rng());

    let plain_a = sorted(corner_law(&model, 1, None, &base.substream(1)));
    let plain_b = sorted(corner_law(&model, 1, None, &base.substream(2)));
    let conjugated = sorted(corner_law(&model, 1, Some(&w), &base.substream(3)));

    let noise_floor = w1_discrete(&plain_a, &plain_b);
    let cross = w1_discrete(&plain_a, &conjugated);
    assert!(
        cross <= 3.0 * noise_floor.max(1e-4),
        "conjugation moved the corner law: W1 = {cross:.3e}, floor {noise_floor:.3e}"
    );
}

#[test]
fn corner_of_rank_two_projector_orbit_is_uniform() {
    // The 1x1 corner of the Haar orbit of diag(1, 0) is Uniform[0, 1].
    let model = InvariantMatrixModel::deterministic(&[1.0, 0.0]);
    let base = RngStream::new(4242);
    let law = corner_law(&model, 1, None, &base);
    let w1 = w1_discrete_vs_uniform(&law, 0.0, 1.0);
    assert!(w1 <= 0.01, "W1 to Uniform[0,1] = {w1}");
}

#[test]
fn sum_independent_is_symmetric_in_its_models() {
    let model_a = InvariantMatrixModel::deterministic(&[1.0, 0.0]);
    let model_b = InvariantMatrixModel::deterministic(&[2.0, -1.0]);
    let base = RngStream::new(90_210);

    let law = |first: &InvariantMatrixModel, second: &InvariantMatrixModel, sub: u64| {
        let w = 1.0 / N as f64;
        let stream = base.substream(sub);
        sorted(
            (0..N)
                .map(|i| {
                    let s = sum_independent(first, second, &stream.substream(i as u64)).unwrap();
                    (eigenvalues_hermitian(&s).unwrap()[0], w)
                })
                .collect(),
        )
    };

    let ab_1 = law(&model_a, &model_b, 1);
    let ab_2 = law(&model_a, &model_b, 2);
    let ba = law(&model_b, &model_a, 3);

    let noise_floor = w1_discrete(&ab_1, &ab_2);
    let cross = w1_discrete(&ab_1, &ba);
    assert!(
        cross <= 3.0 * noise_floor.max(1e-4),
        "ordering moved the sum law: W1 = {cross:.3e}, floor {noise_floor:.3e}"
    );
}
