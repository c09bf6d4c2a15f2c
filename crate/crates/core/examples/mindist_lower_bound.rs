// MINDIST between SAX words never exceeds the Euclidean distance between
// the z-normalized series they came from.

use sits_sax::{breakpoints, mindist, sax, symbol_distance, znormalize, TimeSeries};

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn run_example() -> sits_sax::Result<()> {
    let table = breakpoints(4)?;
    println!("symbol distances for a=4:");
    for r in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|c| format!("{:.4}", symbol_distance(r, c, &table).unwrap()))
            .collect();
        println!("  {}", row.join(" "));
    }

    let days: Vec<f64> = (0..46).map(|i| i as f64 * 8.0).collect();
    let crop: Vec<f64> = days.iter().map(|d| 0.2 + 0.4 * (-((d - 120.0) / 40.0).powi(2)).exp()).collect();
    let forest: Vec<f64> = days.iter().map(|d| 0.5 + 0.05 * (d / 58.0).sin()).collect();
    let late: Vec<f64> = days.iter().map(|d| 0.2 + 0.4 * (-((d - 200.0) / 40.0).powi(2)).exp()).collect();

    let pairs = [("crop", &crop, "forest", &forest), ("crop", &crop, "late crop", &late)];
    for (na, a, nb, b) in pairs {
        let sa = TimeSeries::from_values(a.clone())?;
        let sb = TimeSeries::from_values(b.clone())?;
        let truth = euclidean(znormalize(&sa, 1e-8).values(), znormalize(&sb, 1e-8).values());
        for (w, alpha) in [(6, 4), (23, 8)] {
            let (wa, wb) = (sax(&sa, w, alpha, 1e-8)?, sax(&sb, w, alpha, 1e-8)?);
            let bound = mindist(&wa, &wb)?;
            println!("{na} vs {nb}  w={w:>2} a={alpha}  {wa} {wb}  mindist={bound:.4} <= euclidean={truth:.4}");
            assert!(bound <= truth + 1e-9);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> sits_sax::Result<()> {
    run_example()
}
