use crate::error::{Error, Result};
use crate::sits::cube::Band;

/// What to do with pixels whose NDVI is undefined (NIR + red == 0) or whose
/// inputs are missing.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum NdviFill {
    /// Mark the output pixel missing.
    #[default]
    Mask,
    /// Write a fixed NDVI value (must lie in [-1, 1]) and keep the pixel valid.
    Constant(f64),
}

/// Per-pixel `(nir - red) / (nir + red)`.
pub fn compute_ndvi(nir: &Band, red: &Band, fill: NdviFill) -> Result<Band> {
    if (nir.width, nir.height) != (red.width, red.height) {
        return Err(Error::Shape(format!(
            "NIR band is {}x{}, red band is {}x{}",
            nir.width, nir.height, red.width, red.height
        )));
    }
    if let NdviFill::Constant(v) = fill {
        if !(-1.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!("NDVI fill value {v} outside [-1, 1]")));
        }
    }
    let len = nir.values.len();
    let mut values = Vec::with_capacity(len);
    let mut missing = Vec::with_capacity(len);
    for i in 0..len {
        let undefined = nir.missing[i] || red.missing[i];
        let (n, r) = (nir.values[i], red.values[i]);
        if !undefined {
            for value in [n, r] {
                if !value.is_finite() || value < 0.0 {
                    return Err(Error::NegativeReflectance { index: i, value });
                }
            }
        }
        let sum = n + r;
        if undefined || sum == 0.0 {
            match fill {
                NdviFill::Mask => {
                    values.push(0.0);
                    missing.push(true);
                }
                NdviFill::Constant(v) => {
                    values.push(v);
                    missing.push(false);
                }
            }
        } else {
            values.push(((n - r) / sum).clamp(-1.0, 1.0));
            missing.push(false);
        }
    }
    Band::with_mask(nir.width, nir.height, values, missing)
}
