// Symbolize every pixel of a synthetic scene and count the words.

use sits_sax::sits::{symbolize_cube, word_histogram, RasterCube, SymbolicRaster};

/// Three land-cover types over one year of 16-day composites.
fn scene(width: usize, height: usize) -> sits_sax::Result<RasterCube> {
    let bands = 23;
    let mut data = vec![0.0; width * height * bands];
    for b in 0..bands {
        let t = b as f64 / bands as f64;
        for y in 0..height {
            for x in 0..width {
                let jitter = 0.002 * ((x * 7 + y * 13 + b) % 5) as f64;
                data[(b * height + y) * width + x] = match (x + y) % 3 {
                    0 => 0.15 + 0.45 * (-((t - 0.35) / 0.1).powi(2)).exp() + jitter,
                    1 => 0.55 + 0.05 * (std::f64::consts::TAU * t).cos() + jitter,
                    // open water: flat, so every z-normalized value is zero
                    _ => -0.1,
                };
            }
        }
    }
    let dates = (0..bands as i64).map(|b| 12053 + 16 * b).collect();
    RasterCube::new(width, height, dates, data, None)
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cube = scene(40, 30)?;
    let raster = symbolize_cube(&cube, 6, 4, 1e-8, None)?;
    let degenerate = raster.degenerate_flags().iter().filter(|&&d| d).count();
    println!("{} words, {degenerate} degenerate", raster.len());

    let mut hist: Vec<(String, usize)> = word_histogram(&raster).into_iter().collect();
    hist.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    for (word, count) in hist.iter().take(5) {
        println!("  {word}  {count}");
    }

    let dir = tempfile::tempdir()?;
    let path = dir.path().join("scene.saxr");
    raster.write(&path)?;
    let back = SymbolicRaster::read(&path)?;
    assert_eq!(back.word(3, 4), raster.word(3, 4));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
