//! Piecewise Aggregate Approximation.
//!
//! A series of length `n` is reduced to `w` frame means. When `w` does not
//! divide `n`, a sample straddling a frame boundary contributes to both frames
//! in proportion to its overlap, so every frame carries a mass of `n / w`
//! samples. In the divisible case this is exactly the plain segment mean.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PaaVector {
    coefficients: Vec<f64>,
    source_length: usize,
}

impl PaaVector {
    pub fn new(coefficients: Vec<f64>, source_length: usize) -> Result<Self> {
        check_reduction(source_length, coefficients.len())?;
        Ok(PaaVector {
            coefficients,
            source_length,
        })
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn segment_count(&self) -> usize {
        self.coefficients.len()
    }
}

fn check_reduction(n: usize, w: usize) -> Result<()> {
    if w == 0 || w > n {
        return Err(Error::InvalidPartition { n, w });
    }
    Ok(())
}

/// Reduces `values` to `w` coefficients.
pub fn paa(values: &[f64], w: usize) -> Result<PaaVector> {
    let mut coefficients = vec![0.0; w];
    paa_into(values, &mut coefficients)?;
    Ok(PaaVector {
        coefficients,
        source_length: values.len(),
    })
}

/// Writes the `out.len()` PAA coefficients of `values` into `out`.
///
/// One pass over the input, no allocation.
pub fn paa_into(values: &[f64], out: &mut [f64]) -> Result<()> {
    let n = values.len();
    let w = out.len();
    check_reduction(n, w)?;

    if n.is_multiple_of(w) {
        let frame = n / w;
        for (slot, chunk) in out.iter_mut().zip(values.chunks_exact(frame)) {
            *slot = chunk.iter().sum::<f64>() / frame as f64;
        }
        return Ok(());
    }

    // Positions measured in 1/w of a sample: sample j spans [j*w, (j+1)*w),
    // frame i spans [i*n, (i+1)*n).
    out.iter_mut().for_each(|c| *c = 0.0);
    for (j, &v) in values.iter().enumerate() {
        let lo = j * w;
        let hi = lo + w;
        let frame = lo / n;
        let boundary = (frame + 1) * n;
        if hi <= boundary {
            out[frame] += v * w as f64;
        } else {
            out[frame] += v * (boundary - lo) as f64;
            out[frame + 1] += v * (hi - boundary) as f64;
        }
    }
    out.iter_mut().for_each(|c| *c /= n as f64);
    Ok(())
}

/// Expands `paa` back to a piecewise-constant series of its source length.
///
/// Indices shared by two frames take the overlap-weighted blend of both.
pub fn paa_reconstruct(paa: &PaaVector) -> Vec<f64> {
    let n = paa.source_length;
    let w = paa.segment_count();
    let c = &paa.coefficients;
    if n.is_multiple_of(w) {
        let frame = n / w;
        return c
            .iter()
            .flat_map(|&v| std::iter::repeat_n(v, frame))
            .collect();
    }
    (0..n)
        .map(|j| {
            let lo = j * w;
            let hi = lo + w;
            let frame = lo / n;
            let boundary = (frame + 1) * n;
            if hi <= boundary {
                c[frame]
            } else {
                (c[frame] * (boundary - lo) as f64 + c[frame + 1] * (hi - boundary) as f64)
                    / w as f64
            }
        })
        .collect()
}

/// Euclidean norm of the residual left by a `w`-segment approximation.
pub fn reconstruction_error(values: &[f64], w: usize) -> Result<f64> {
    let approx = paa_reconstruct(&paa(values, w)?);
    Ok(values
        .iter()
        .zip(&approx)
        .map(|(v, r)| (v - r) * (v - r))
        .sum::<f64>()
        .sqrt())
}
