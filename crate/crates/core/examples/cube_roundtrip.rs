// Ingest CSV bands listed in a manifest, write the cube in both encodings
// and read it back.

use std::fs;

use sits_sax::sits::{ingest_manifest, CubeEncoding, IngestConfig, RasterCube};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let grids = [
        ("2003-01-01", "0.21,0.30\n0.18,\n"),
        ("2003-01-17", "0.25,0.33\n0.19,0.41\n"),
        ("2003-02-02", "0.31,0.29\n0.22,0.47\n"),
    ];
    let mut manifest = String::from("# band file, acquisition date\n");
    for (i, (date, grid)) in grids.iter().enumerate() {
        fs::write(dir.path().join(format!("b{i}.csv")), grid)?;
        manifest.push_str(&format!("b{i}.csv,{date}\n"));
    }
    fs::write(dir.path().join("bands.txt"), manifest)?;

    let cube = ingest_manifest(dir.path().join("bands.txt"), &IngestConfig::default())?;
    println!(
        "{}x{} pixels, {} bands, {} missing",
        cube.width(),
        cube.height(),
        cube.bands(),
        cube.missing_count()
    );

    let exact = dir.path().join("cube_f64.sits");
    cube.write(&exact, CubeEncoding::float64())?;
    let back = RasterCube::read(&exact)?;
    assert_eq!(back.data(), cube.data());
    assert_eq!(back.missing_mask(), cube.missing_mask());

    let compact = dir.path().join("cube_i16.sits");
    cube.write(&compact, CubeEncoding::modis_ndvi())?;
    let scaled = RasterCube::read(&compact)?;
    println!(
        "float64: {} bytes, int16: {} bytes",
        fs::metadata(&exact)?.len(),
        fs::metadata(&compact)?.len()
    );
    for (a, b) in cube.data().iter().zip(scaled.data()) {
        assert!((a - b).abs() <= 5e-5);
    }
    println!("pixel (1, 1): {:?}", scaled.pixel_samples(1, 1)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
