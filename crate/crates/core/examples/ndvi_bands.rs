// NDVI from NIR and red reflectance bands, with undefined pixels masked or
// replaced by a constant.

use sits_sax::sits::{compute_ndvi, Band, NdviFill};

pub fn run_example() -> sits_sax::Result<()> {
    let nir = Band::new(3, 2, vec![0.45, 0.30, 0.0, 0.25, 0.50, 0.12])?;
    let red = Band::new(3, 2, vec![0.05, 0.20, 0.0, 0.25, 0.10, 0.30])?;

    let masked = compute_ndvi(&nir, &red, NdviFill::Mask)?;
    for y in 0..2 {
        let row: Vec<String> = (0..3)
            .map(|x| masked.get(x, y).map_or("  --  ".into(), |v| format!("{v:+.3}")))
            .collect();
        println!("{}", row.join(" "));
    }
    assert_eq!(masked.get(2, 0), None);

    let filled = compute_ndvi(&nir, &red, NdviFill::Constant(0.0))?;
    assert_eq!(filled.get(2, 0), Some(0.0));

    // negative reflectance is a data error, not something to clamp
    let bad = Band::new(3, 2, vec![-0.1, 0.3, 0.2, 0.2, 0.2, 0.2])?;
    assert!(compute_ndvi(&bad, &red, NdviFill::Mask).is_err());
    Ok(())
}

#[allow(dead_code)]
fn main() -> sits_sax::Result<()> {
    run_example()
}
