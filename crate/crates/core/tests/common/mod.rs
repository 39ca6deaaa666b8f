#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use turnpike_core::wavecore::InitialData;

/// Smooth data from a seeded draw: `y0 = bx + Σ a_j sin(jπx)`,
/// `y1 = d + Σ c_j cos(jπx)`, four terms each.
pub fn random_smooth(m: usize, seed: u64) -> InitialData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: f64 = rng.gen_range(-1.0..1.0);
    let d: f64 = rng.gen_range(-1.0..1.0);
    let (a2, c2) = (a.clone(), c.clone());
    InitialData::from_fns(
        m,
        move |x| {
            b * x + a.iter().enumerate().map(|(j, aj)| aj * ((j + 1) as f64 * PI * x).sin()).sum::<f64>()
        },
        move |x| {
            b + a2
                .iter()
                .enumerate()
                .map(|(j, aj)| aj * (j + 1) as f64 * PI * ((j + 1) as f64 * PI * x).cos())
                .sum::<f64>()
        },
        move |x| d + c2.iter().enumerate().map(|(j, cj)| cj * ((j + 1) as f64 * PI * x).cos()).sum::<f64>(),
    )
    .expect("random smooth datum is admissible")
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m: f64, (x, y)| m.max((x - y).abs()))
}
