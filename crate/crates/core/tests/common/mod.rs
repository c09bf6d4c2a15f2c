#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use sits_sax::RasterCube;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// MODIS-like NDVI stack: a seasonal cycle per pixel with noise, 16-day
/// revisit, plus a few constant "water" pixels.
pub fn seasonal_cube(width: usize, height: usize, bands: usize, seed: u64) -> RasterCube {
    let mut rng = rng(seed);
    let pixels = width * height;
    let params: Vec<(f64, f64, f64, bool)> = (0..pixels)
        .map(|_| {
            let water = rng.random::<f64>() < 0.02;
            (
                rng.random_range(0.1..0.5),
                rng.random_range(0.02..0.3),
                rng.random_range(0.0..std::f64::consts::TAU),
                water,
            )
        })
        .collect();
    let mut data = Vec::with_capacity(pixels * bands);
    for b in 0..bands {
        let t = b as f64 * std::f64::consts::TAU / 23.0;
        for &(base, amp, phase, water) in &params {
            let v = if water {
                -0.05
            } else {
                let noise: f64 = StandardNormal.sample(&mut rng);
                base + amp * (t + phase).sin() + 0.02 * noise
            };
            data.push((v.clamp(-0.2, 0.95) * 1e4).round() * 1e-4);
        }
    }
    let dates = (0..bands as i64).map(|b| 11_005 + 16 * b).collect();
    RasterCube::new(width, height, dates, data, None).unwrap()
}

/// Uniform NDVI noise in [-1, 1].
pub fn random_cube(width: usize, height: usize, bands: usize, seed: u64) -> RasterCube {
    let mut rng = rng(seed);
    let data = (0..width * height * bands).map(|_| rng.random_range(-1.0..=1.0)).collect();
    RasterCube::new(width, height, (0..bands as i64).collect(), data, None).unwrap()
}

/// Reference z-normalization (population std, zeros when flat).
pub fn znorm_ref(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let std = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
    if std <= 1e-8 {
        vec![0.0; v.len()]
    } else {
        v.iter().map(|x| (x - mean) / std).collect()
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}
