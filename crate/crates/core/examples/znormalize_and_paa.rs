// Z-normalize a short NDVI profile and reduce it with PAA, including a
// word length that does not divide the series length.

use sits_sax::{paa, paa_reconstruct, reconstruction_error, znormalize, TimeSeries, DEFAULT_EPSILON_STD};

pub fn run_example() -> sits_sax::Result<()> {
    let ndvi = vec![0.12, 0.13, 0.15, 0.22, 0.35, 0.51, 0.58, 0.55, 0.41, 0.27, 0.18, 0.14];
    let series = TimeSeries::from_values(ndvi)?;
    let z = znormalize(&series, DEFAULT_EPSILON_STD);
    println!("z-normalized: {:.3?}", z.values());

    for w in [4, 5, 12] {
        let reduced = paa(z.values(), w)?;
        let err = reconstruction_error(z.values(), w)?;
        println!("w={w:>2}  paa={:.3?}  squared error={err:.4}", reduced.coefficients());
    }

    // a constant series has no shape and maps to zeros
    let flat = znormalize(&TimeSeries::from_values(vec![0.2; 6])?, DEFAULT_EPSILON_STD);
    assert!(flat.values().iter().all(|&v| v == 0.0));

    let back = paa_reconstruct(&paa(z.values(), 4)?);
    assert_eq!(back.len(), z.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> sits_sax::Result<()> {
    run_example()
}
