// Breakpoint tables and SAX words at several alphabet sizes.

use sits_sax::{breakpoints, sax, SaxEncoder, SaxWord, TimeSeries};

pub fn run_example() -> sits_sax::Result<()> {
    for a in [2, 3, 4, 8] {
        println!("a={a}  breakpoints={:.4?}", breakpoints(a)?.betas());
    }

    let profile = vec![0.12, 0.15, 0.31, 0.58, 0.61, 0.40, 0.22, 0.14];
    let series = TimeSeries::from_values(profile.clone())?;
    for (w, a) in [(4, 3), (8, 4), (2, 2)] {
        println!("w={w} a={a}  {}", sax(&series, w, a, 1e-8)?);
    }
    assert_eq!(sax(&series, 4, 3, 1e-8)?.to_string(), "acca");

    // a reusable encoder avoids rebuilding the table per series
    let encoder = SaxEncoder::new(4, 3, 1e-8)?;
    let word = encoder.encode(&profile)?;
    assert_eq!(word, SaxWord::parse("acca", 8, 3)?);
    println!("indices of {word}: {:?}", word.indices());
    Ok(())
}

#[allow(dead_code)]
fn main() -> sits_sax::Result<()> {
    run_example()
}
