#![allow(dead_code)]

use std::f64::consts::TAU;
use std::path::PathBuf;

use locusmith::{JetShape, MongeJet};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.ron"))
}

pub fn load(name: &str) -> MongeJet {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    locusmith::manifest::jet_from_str(&text).unwrap()
}

pub fn jet(n: usize, m: usize, c: usize, terms: &[(usize, &str, f64)]) -> MongeJet {
    MongeJet::from_terms(JetShape::new(n, m, c).unwrap(), terms).unwrap()
}

pub fn v(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    (&a + a.transpose()) * 0.5
}

pub fn random_jet(rng: &mut ChaCha8Rng, n: usize, m: usize, c: usize) -> MongeJet {
    let shape = JetShape::new(n, m, c).unwrap();
    let quad = (0..shape.normal_dim())
        .map(|_| random_symmetric(rng, n))
        .collect();
    MongeJet::new(shape, quad).unwrap()
}

pub fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let u = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = u.norm();
        if norm > 0.2 && norm <= 1.0 {
            return u / norm;
        }
    }
}

/// Random invertible matrix with singular values in a bounded range.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    loop {
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let s = a.clone().singular_values();
        if s.min() > 0.2 {
            return a;
        }
    }
}

/// Distance from `p` to the periodic curve `g` on `[0, 2pi)`: coarse scan
/// followed by golden-section refinement around the best sample.
pub fn distance_to_curve(p: &DVector<f64>, g: &dyn Fn(f64) -> DVector<f64>) -> f64 {
    let n = 720;
    let h = TAU / n as f64;
    let d = |t: f64| (g(t) - p).norm();
    let (best, _) = (0..n)
        .map(|k| (k as f64 * h, d(k as f64 * h)))
        .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let (mut a, mut b) = (best - h, best + h);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - r * (b - a);
        let e = a + r * (b - a);
        if d(c) < d(e) {
            b = e;
        } else {
            a = c;
        }
    }
    d(0.5 * (a + b)).min(d(best))
}

/// Sampled symmetric Hausdorff distance between two closed curves.
pub fn hausdorff(f: &dyn Fn(f64) -> DVector<f64>, g: &dyn Fn(f64) -> DVector<f64>) -> f64 {
    let n = 360;
    let one = |a: &dyn Fn(f64) -> DVector<f64>, b: &dyn Fn(f64) -> DVector<f64>| {
        (0..n)
            .map(|k| distance_to_curve(&a(TAU * k as f64 / n as f64), b))
            .fold(0.0, f64::max)
    };
    one(f, g).max(one(g, f))
}
