// Range query over a symbolized cube: MINDIST filters candidates, the
// exact z-normalized distance confirms them.

use sits_sax::sits::{query_mindist, symbolize_cube, znormalized_distance, RasterCube};
use sits_sax::TimeSeries;

pub fn run_example() -> sits_sax::Result<()> {
    let (width, height, bands) = (32, 32, 46);
    let mut data = vec![0.0; width * height * bands];
    for b in 0..bands {
        for y in 0..height {
            for x in 0..width {
                let peak = 10.0 + (x as f64) * 0.6;
                let amp = 0.2 + 0.01 * y as f64;
                data[(b * height + y) * width + x] = 0.15 + amp * (-((b as f64 - peak) / 5.0).powi(2)).exp();
            }
        }
    }
    let cube = RasterCube::new(width, height, (0..bands as i64).collect(), data, None)?;
    let raster = symbolize_cube(&cube, 23, 8, 1e-8, None)?;

    let probe = cube.pixel_series(12, 5)?;
    let probe = TimeSeries::from_values(probe.values().iter().map(|v| v + 0.01).collect())?;
    let radius = 2.0;
    let candidates = query_mindist(&raster, &probe, radius)?;
    let mut confirmed = 0;
    for hit in &candidates {
        if znormalized_distance(&cube, hit.x, hit.y, &probe, 1e-8)? <= radius {
            confirmed += 1;
        }
    }
    println!(
        "{} pixels, {} candidates, {confirmed} within radius {radius}",
        width * height,
        candidates.len()
    );
    // the probe's own column has the same shape at every row
    assert!(candidates.iter().any(|h| h.x == 12 && h.y == 5));
    assert!(candidates.len() < width * height);
    Ok(())
}

#[allow(dead_code)]
fn main() -> sits_sax::Result<()> {
    run_example()
}
