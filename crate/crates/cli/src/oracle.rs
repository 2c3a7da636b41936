//! Quadrature reference values, independent of both the exact-combinatorics
//! path and the Monte Carlo path.
//!
//! For d = 2 the sum of two independent Haar orbits reduces to one scalar
//! parameter: with A = diag(a), B = U diag(b) U^dag, the entry B_11 is
//! b_0 t + b_1 (1-t) with t = |u_11|^2 uniform on [0,1], and the spectrum of
//! A + B depends only on (trace, det), both affine in t. Substituting
//! u^2 = disc(t) turns symmetric-polynomial expectations into polynomial
//! integrals in u, which Gauss-Legendre evaluates exactly.

/// Legendre P_n and its derivative at x, by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Gauss-Legendre nodes and weights on [-1, 1]; exact for polynomials of
/// degree <= 2n - 1.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 2);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

fn mixed_power_sum(eigs: [f64; 2], ks: &[u32]) -> f64 {
    ks.iter()
        .map(|&k| eigs[0].powi(k as i32) + eigs[1].powi(k as i32))
        .product()
}

/// E[prod_j p_{k_j}(spec(A + B))] for independent Haar orbits of diag(a) and
/// diag(b) at d = 2, by exact quadrature over the single angular parameter.
pub fn sum_two_orbit_moment_d2(a: [f64; 2], b: [f64; 2], ks: &[u32]) -> f64 {
    let trace = a[0] + a[1] + b[0] + b[1];
    let det_at = |t: f64| {
        let b11 = b[0] * t + b[1] * (1.0 - t);
        a[0] * a[1] + b[0] * b[1] + a[0] * (b[0] + b[1] - b11) + a[1] * b11
    };
    let disc0 = trace * trace - 4.0 * det_at(0.0);
    let disc1 = trace * trace - 4.0 * det_at(1.0);
    let q = disc1 - disc0;

    let eigs_at_gap = |u: f64| [(trace + u) / 2.0, (trace - u) / 2.0];

    if q.abs() < 1e-12 {
        // Degenerate orbit (one side central): the spectrum is deterministic.
        let u = disc0.max(0.0).sqrt();
        return mixed_power_sum(eigs_at_gap(u), ks);
    }

    // Substitute u^2 = disc(t): dt = 2u/q du over u in [sqrt(disc0), sqrt(disc1)].
    let u0 = disc0.max(0.0).sqrt();
    let u1 = disc1.max(0.0).sqrt();
    let half_len = (u1 - u0) / 2.0;
    let mid = (u1 + u0) / 2.0;
    let mut acc = 0.0;
    for (node, weight) in gauss_legendre(48) {
        let u = mid + half_len * node;
        acc += weight * mixed_power_sum(eigs_at_gap(u), ks) * (2.0 * u / q);
    }
    acc * half_len
}
