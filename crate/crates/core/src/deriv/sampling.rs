//! Deterministic direction sets: perturbation balls around a direction and
//! samples of the unit sphere.
//!
//! Both are built from a Halton sequence with a seeded Cranley–Patterson
//! shift, so asking for more points always returns a superset of the
//! smaller request.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut inv = 1.0 / base as f64;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base) as f64 * inv;
        i /= base;
        inv /= base as f64;
    }
    out
}

fn shift(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..dim).map(|_| rng.gen::<f64>()).collect()
}

/// Shifted Halton points mapped to `[-1, 1]^dim`, keeping those with
/// `lo <= |p| <= 1`, in sequence order.
fn halton_ball(dim: usize, count: usize, seed: u64, lo: f64) -> Vec<Vec<f64>> {
    assert!(dim <= PRIMES.len(), "Halton sampling supports up to {} dimensions", PRIMES.len());
    let s = shift(dim, seed);
    let mut out = Vec::with_capacity(count);
    let mut i = 1u64;
    while out.len() < count {
        let p: Vec<f64> = (0..dim)
            .map(|k| {
                let h = (radical_inverse(i, PRIMES[k]) + s[k]).fract();
                2.0 * h - 1.0
            })
            .collect();
        let r2: f64 = p.iter().map(|v| v * v).sum();
        if r2 <= 1.0 && r2 >= lo * lo {
            out.push(p);
        }
        i += 1;
    }
    out
}

fn offset(u: &[f64], radius: f64, p: &[f64]) -> Vec<f64> {
    u.iter().zip(p).map(|(a, b)| a + radius * b).collect()
}

/// Perturbed directions `u'` with `|u' - u| <= radius`, always starting with `u`.
///
/// In one dimension the standard set is `{u, u-ρ, u+ρ}` and the dense set is
/// the lattice `u + ρk/10`, `k = -10..=10`, which contains it. In higher
/// dimensions the set is `u`, then `u ± ρe_i`, then quasi-random ball points.
pub fn ball_directions(u: &[f64], radius: f64, count: usize, seed: u64, dense: bool) -> Vec<Vec<f64>> {
    let d = u.len();
    if radius == 0.0 {
        return vec![u.to_vec()];
    }
    if d == 1 {
        let coefs: Vec<f64> = if dense { (-10..=10).map(|k| k as f64 / 10.0).collect() } else { vec![0.0, -1.0, 1.0] };
        return coefs.iter().map(|c| vec![u[0] + radius * c]).collect();
    }
    let count = count.max(1);
    let mut pts = Vec::with_capacity(count);
    pts.push(vec![0.0; d]);
    for i in 0..d {
        for sgn in [1.0, -1.0] {
            let mut e = vec![0.0; d];
            e[i] = sgn;
            pts.push(e);
        }
    }
    pts.truncate(count);
    let rest = count - pts.len();
    pts.extend(halton_ball(d, rest, seed, 0.0));
    pts.iter().map(|p| offset(u, radius, p)).collect()
}

/// Unit directions: `{+1, -1}` in one dimension, otherwise the `2d` signed
/// axes followed by `count - 2d` further points (equally spaced angles with a
/// seeded phase when `d = 2`, normalised quasi-random points beyond).
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    if dim == 1 {
        return vec![vec![1.0], vec![-1.0]];
    }
    let mut out = Vec::with_capacity(count.max(2 * dim));
    for i in 0..dim {
        for sgn in [1.0, -1.0] {
            let mut e = vec![0.0; dim];
            e[i] = sgn;
            out.push(e);
        }
    }
    let rest = count.saturating_sub(out.len());
    if rest == 0 {
        return out;
    }
    if dim == 2 {
        let phase = shift(1, seed)[0];
        for k in 0..rest {
            let theta = std::f64::consts::TAU * (k as f64 + phase) / rest as f64;
            out.push(vec![theta.cos(), theta.sin()]);
        }
    } else {
        for p in halton_ball(dim, rest, seed, 0.05) {
            out.push(normalized(&p).expect("point bounded away from the origin"));
        }
    }
    out
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

pub fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let n = norm(v);
    (n > 0.0 && n.is_finite()).then(|| v.iter().map(|a| a / n).collect())
}

/// Appends `extra` unit directions that are not already present.
pub fn merge_directions(mut base: Vec<Vec<f64>>, extra: impl IntoIterator<Item = Vec<f64>>) -> Vec<Vec<f64>> {
    for v in extra {
        if let Some(v) = normalized(&v) {
            if !base.iter().any(|b| b.iter().zip(&v).all(|(a, c)| (a - c).abs() <= 1e-12)) {
                base.push(v);
            }
        }
    }
    base
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halton_prefix_property() {
        let small = ball_directions(&[1.0, 0.0], 0.1, 20, 3, false);
        let big = ball_directions(&[1.0, 0.0], 0.1, 200, 3, false);
        assert_eq!(&big[..20], &small[..]);
        assert_eq!(small[0], vec![1.0, 0.0]);
        assert!(big.iter().all(|p| norm(&[p[0] - 1.0, p[1]]) <= 0.1 + 1e-15));
    }

    #[test]
    fn dense_lattice_contains_standard_set_in_1d() {
        let std = ball_directions(&[-1.0], 0.3, 5, 0, false);
        let dense = ball_directions(&[-1.0], 0.3, 5, 0, true);
        assert_eq!(std.len(), 3);
        assert!(std.iter().all(|p| dense.contains(p)));
    }

    #[test]
    fn sphere_sets() {
        assert_eq!(sphere_directions(1, 10, 0), vec![vec![1.0], vec![-1.0]]);
        let s = sphere_directions(2, 16, 7);
        assert_eq!(s.len(), 16);
        assert!(s.iter().all(|v| (norm(v) - 1.0).abs() < 1e-12));
        let s3 = sphere_directions(3, 30, 1);
        assert_eq!(s3.len(), 30);
        assert!(s3.iter().all(|v| (norm(v) - 1.0).abs() < 1e-12));
        assert_eq!(sphere_directions(2, 16, 7), s);
    }

    #[test]
    fn merge_skips_duplicates() {
        let m = merge_directions(sphere_directions(2, 4, 0), vec![vec![0.0, 2.0], vec![1.0, 1.0]]);
        assert_eq!(m.len(), 5);
    }
}
