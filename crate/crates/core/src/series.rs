//! Time-series primitives: the series type itself, z-normalization, and the
//! episode/alphabet vocabulary shared by PAA and SAX.

use crate::error::{Error, Result};

/// Default standard-deviation floor below which a series is treated as constant.
pub const DEFAULT_EPSILON_STD: f64 = 1e-8;

/// Ordered observations of one pixel (or one probe).
///
/// Dates are days since the Unix epoch. They are carried as metadata; every
/// reduction in this crate is index based.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    dates: Vec<i64>,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(dates: Vec<i64>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidSeries("series must have at least one sample".into()));
        }
        if dates.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} dates for {} values",
                dates.len(),
                values.len()
            )));
        }
        if let Some(i) = dates.windows(2).position(|d| d[0] >= d[1]) {
            return Err(Error::InvalidSeries(format!(
                "dates not strictly increasing at index {}",
                i + 1
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("non-finite value at index {i}")));
        }
        Ok(TimeSeries { dates, values })
    }

    /// Series indexed 0..n, for data that carries no acquisition dates.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let dates = (0..values.len() as i64).collect();
        Self::new(dates, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn dates(&self) -> &[i64] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Z-normalizes `values` in place using the population standard deviation.
///
/// Returns `true` when the series is degenerate (std <= `epsilon_std`), in
/// which case every value is set to exactly zero.
pub fn znormalize_in_place(values: &mut [f64], epsilon_std: f64) -> bool {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std.is_nan() || std <= epsilon_std {
        values.iter_mut().for_each(|v| *v = 0.0);
        return true;
    }
    values.iter_mut().for_each(|v| *v = (*v - mean) / std);
    false
}

/// Returns a zero-mean, unit-variance copy of `series` with dates unchanged.
pub fn znormalize(series: &TimeSeries, epsilon_std: f64) -> TimeSeries {
    let mut values = series.values.clone();
    znormalize_in_place(&mut values, epsilon_std);
    TimeSeries {
        dates: series.dates.clone(),
        values,
    }
}

/// A contiguous block of the time domain summarized by one PAA coefficient.
///
/// When the segment count does not divide the series length, the first and
/// last index of an episode may be shared with a neighbour; `weights` holds the
/// fraction of each index that belongs to this episode.
#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub start_index: usize,
    pub end_index: usize,
    weights: Vec<f64>,
}

impl Episode {
    /// Weight of `index` inside this episode, 0 outside it.
    pub fn weight(&self, index: usize) -> f64 {
        if index < self.start_index || index > self.end_index {
            0.0
        } else {
            self.weights[index - self.start_index]
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Total weight, `n / w` for every episode of a partition.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Splits `0..n` into `w` equal-mass episodes.
pub fn make_episodes(n: usize, w: usize) -> Result<Vec<Episode>> {
    if w == 0 || w > n {
        return Err(Error::InvalidPartition { n, w });
    }
    // Work in units of 1/w sample: sample j covers [j*w, (j+1)*w) and
    // episode i covers [i*n, (i+1)*n).
    let episodes = (0..w)
        .map(|i| {
            let lo = i * n;
            let hi = (i + 1) * n;
            let start = lo / w;
            let end = (hi - 1) / w;
            let weights = (start..=end)
                .map(|j| {
                    let overlap = hi.min((j + 1) * w) - lo.max(j * w);
                    overlap as f64 / w as f64
                })
                .collect();
            Episode {
                start_index: start,
                end_index: end,
                weights,
            }
        })
        .collect();
    Ok(episodes)
}

/// Ordered symbol set `'a'..` of size 2..=26, lowest value class first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub const MIN_SIZE: usize = 2;
    pub const MAX_SIZE: usize = 26;

    pub fn new(size: usize) -> Result<Self> {
        if !(Self::MIN_SIZE..=Self::MAX_SIZE).contains(&size) {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn symbol(&self, index: usize) -> Result<char> {
        if index >= self.size {
            return Err(Error::InvalidSymbol {
                index,
                alphabet: self.size,
            });
        }
        Ok((b'a' + index as u8) as char)
    }

    pub fn index_of(&self, symbol: char) -> Option<usize> {
        let idx = (symbol as u32).checked_sub('a' as u32)? as usize;
        (idx < self.size).then_some(idx)
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> {
        (0..self.size as u8).map(|i| (b'a' + i) as char)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z(values: &[f64]) -> Vec<f64> {
        let s = TimeSeries::from_values(values.to_vec()).unwrap();
        znormalize(&s, DEFAULT_EPSILON_STD).into_values()
    }

    fn mean_std(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        (m, (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt())
    }

    #[test]
    fn znormalize_examples() {
        assert_eq!(z(&[1.0, 1.0, 1.0, 1.0]), vec![0.0; 4]);
        assert_eq!(z(&[-1.0, 1.0]), vec![-1.0, 1.0]);
        let got = z(&[1.0, 2.0, 3.0, 4.0]);
        // mean 2.5, population std sqrt(1.25)
        let s = 1.25f64.sqrt();
        let want = [-1.5 / s, -0.5 / s, 0.5 / s, 1.5 / s];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12);
        }
        assert!((got[0] + 1.3416).abs() < 1e-3);
    }

    #[test]
    fn znormalize_keeps_dates() {
        let s = TimeSeries::new(vec![3, 19, 35], vec![0.1, 0.4, 0.2]).unwrap();
        assert_eq!(znormalize(&s, 1e-8).dates(), &[3, 19, 35]);
    }

    #[test]
    fn single_sample_is_degenerate() {
        assert_eq!(z(&[0.7]), vec![0.0]);
    }

    #[test]
    fn series_validation() {
        assert!(TimeSeries::new(vec![], vec![]).is_err());
        assert!(TimeSeries::new(vec![1, 2], vec![1.0]).is_err());
        assert!(TimeSeries::new(vec![2, 2], vec![1.0, 2.0]).is_err());
        assert!(TimeSeries::new(vec![1, 2], vec![1.0, f64::NAN]).is_err());
        assert!(TimeSeries::new(vec![1, 2], vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn episodes_divisible() {
        let eps = make_episodes(135, 9).unwrap();
        assert_eq!(eps.len(), 9);
        for (i, e) in eps.iter().enumerate() {
            assert_eq!(e.start_index, 15 * i);
            assert_eq!(e.end_index, 15 * i + 14);
            assert!(e.weights().iter().all(|&w| w == 1.0));
        }
        let eps = make_episodes(128, 8).unwrap();
        assert!(eps.iter().all(|e| e.end_index - e.start_index + 1 == 16));
    }

    #[test]
    fn episodes_fractional() {
        let eps = make_episodes(5, 2).unwrap();
        assert_eq!((eps[0].start_index, eps[0].end_index), (0, 2));
        assert_eq!((eps[1].start_index, eps[1].end_index), (2, 4));
        assert_eq!(eps[0].weights(), &[1.0, 1.0, 0.5]);
        assert_eq!(eps[1].weights(), &[0.5, 1.0, 1.0]);
        assert_eq!(eps[0].mass(), 2.5);
        assert_eq!(eps[1].mass(), 2.5);
        assert_eq!(eps[1].weight(0), 0.0);
    }

    #[test]
    fn episodes_reject_bad_partition() {
        assert!(matches!(make_episodes(4, 0), Err(Error::InvalidPartition { .. })));
        assert!(matches!(make_episodes(4, 5), Err(Error::InvalidPartition { .. })));
    }

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(27).is_err());
        let a = Alphabet::new(26).unwrap();
        assert_eq!(a.symbol(25).unwrap(), 'z');
        assert!(a.symbol(26).is_err());
        let a = Alphabet::new(3).unwrap();
        assert_eq!(a.symbols().collect::<String>(), "abc");
        assert_eq!(a.index_of('c'), Some(2));
        assert_eq!(a.index_of('d'), None);
        assert_eq!(a.index_of('A'), None);
    }

    fn non_degenerate() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1e3f64..1e3, 2..200)
            .prop_filter("needs spread", |v| mean_std(v).1 > 1e-3)
    }

    proptest! {
        #[test]
        fn znorm_moments(v in non_degenerate()) {
            let out = z(&v);
            let (m, s) = mean_std(&out);
            prop_assert!(m.abs() <= 1e-9);
            prop_assert!((s - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn znorm_idempotent(v in non_degenerate()) {
            let once = z(&v);
            let twice = z(&once);
            for (a, b) in once.iter().zip(&twice) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }

        #[test]
        fn znorm_shift_scale_invariant(v in non_degenerate(), alpha in 0.01f64..100.0, beta in -100f64..100.0) {
            let moved: Vec<f64> = v.iter().map(|x| alpha * x + beta).collect();
            for (a, b) in z(&v).iter().zip(z(&moved)) {
                prop_assert!((a - b).abs() <= 1e-9);
            }
        }

        #[test]
        fn episodes_cover_with_full_mass(n in 1usize..300, w_frac in 0.0f64..1.0) {
            let w = 1 + ((n - 1) as f64 * w_frac) as usize;
            let eps = make_episodes(n, w).unwrap();
            prop_assert_eq!(eps.len(), w);
            prop_assert_eq!(eps[0].start_index, 0);
            prop_assert_eq!(eps[w - 1].end_index, n - 1);
            for pair in eps.windows(2) {
                // contiguous: next starts where this ends or right after
                prop_assert!(pair[1].start_index == pair[0].end_index
                    || pair[1].start_index == pair[0].end_index + 1);
            }
            let total: f64 = eps.iter().map(Episode::mass).sum();
            prop_assert!((total - n as f64).abs() < 1e-9);
            for j in 0..n {
                let cover: f64 = eps.iter().map(|e| e.weight(j)).sum();
                prop_assert!((cover - 1.0).abs() < 1e-12);
            }
        }
    }
}
