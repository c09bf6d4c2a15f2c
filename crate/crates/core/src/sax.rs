//! Symbolic Aggregate approXimation: Gaussian breakpoints, discretization of
//! PAA coefficients into words, and the MINDIST lower-bounding distance.

use std::fmt;

use crate::error::{Error, Result};
use crate::paa::{paa_into, PaaVector};
use crate::series::{znormalize_in_place, Alphabet, TimeSeries};

/// Inverse of the standard normal CDF (Wichura's AS241, PPND16).
///
/// Relative accuracy is about 1e-16 over the open interval (0, 1).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile probability must lie in (0, 1)");
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = (((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
            + 6.726_577_092_700_87e4)
            * r
            + 4.592_195_393_154_987e4)
            * r
            + 1.373_169_376_550_946e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_5)
            * q;
        let den = ((((((5.226_495_278_852_545e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return num / den;
    }

    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_9e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288_1e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358e-1)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

/// The `a - 1` standard-normal quantiles splitting the line into `a`
/// equiprobable symbol intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakpointTable {
    alphabet: Alphabet,
    betas: Vec<f64>,
}

impl BreakpointTable {
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Symbol index of `value`: the number of breakpoints `<= value`.
    ///
    /// A value sitting exactly on a breakpoint takes the higher symbol.
    #[inline]
    pub fn symbol_for(&self, value: f64) -> usize {
        self.betas.partition_point(|&b| b <= value)
    }

    #[inline]
    fn cell(&self, r: usize, c: usize) -> f64 {
        let (lo, hi) = if r < c { (r, c) } else { (c, r) };
        if hi - lo <= 1 {
            0.0
        } else {
            self.betas[hi - 1] - self.betas[lo]
        }
    }

    /// Dense `a x a` lookup of [`symbol_distance`], row-major.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let a = self.alphabet_size();
        (0..a * a).map(|k| self.cell(k / a, k % a)).collect()
    }
}

/// Breakpoints for an alphabet of size `a`.
pub fn breakpoints(a: usize) -> Result<BreakpointTable> {
    let alphabet = Alphabet::new(a)?;
    let mut betas = vec![0.0; a - 1];
    // Lower half computed, upper half mirrored, so the table is exactly
    // antisymmetric and the middle breakpoint of an even alphabet is exactly 0.
    for k in 1..a {
        let mirror = a - k;
        betas[k - 1] = match (2 * k).cmp(&a) {
            std::cmp::Ordering::Less => normal_quantile(k as f64 / a as f64),
            std::cmp::Ordering::Equal => 0.0,
            std::cmp::Ordering::Greater => -betas[mirror - 1],
        };
    }
    Ok(BreakpointTable { alphabet, betas })
}

/// A SAX word together with the `(n, w, a)` it was produced under.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SaxWord {
    symbols: Vec<u8>,
    source_length: usize,
    alphabet: Alphabet,
}

impl SaxWord {
    /// Builds a word from symbol indices (0 = 'a').
    pub fn from_indices(symbols: Vec<u8>, source_length: usize, a: usize) -> Result<Self> {
        let alphabet = Alphabet::new(a)?;
        if symbols.is_empty() || symbols.len() > source_length {
            return Err(Error::InvalidPartition {
                n: source_length,
                w: symbols.len(),
            });
        }
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= a) {
            return Err(Error::InvalidSymbol {
                index: s as usize,
                alphabet: a,
            });
        }
        Ok(SaxWord {
            symbols,
            source_length,
            alphabet,
        })
    }

    /// Parses a lowercase word such as `"baabccbc"`.
    pub fn parse(word: &str, source_length: usize, a: usize) -> Result<Self> {
        let alphabet = Alphabet::new(a)?;
        let symbols = word
            .chars()
            .map(|ch| {
                alphabet
                    .index_of(ch)
                    .map(|i| i as u8)
                    .ok_or_else(|| Error::InvalidParameter(format!("symbol {ch:?} not in alphabet of size {a}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_indices(symbols, source_length, a)
    }

    pub fn indices(&self) -> &[u8] {
        &self.symbols
    }

    pub fn source_length(&self) -> usize {
        self.source_length
    }

    pub fn word_length(&self) -> usize {
        self.symbols.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.size()
    }

    /// `(n, w, a)`.
    pub fn params(&self) -> (usize, usize, usize) {
        (self.source_length, self.symbols.len(), self.alphabet.size())
    }
}

impl fmt::Display for SaxWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", (b'a' + s) as char)?;
        }
        Ok(())
    }
}

/// Maps every PAA coefficient to its symbol interval.
pub fn discretize(paa: &PaaVector, table: &BreakpointTable) -> SaxWord {
    SaxWord {
        symbols: paa
            .coefficients()
            .iter()
            .map(|&v| table.symbol_for(v) as u8)
            .collect(),
        source_length: paa.source_length(),
        alphabet: table.alphabet,
    }
}

/// Reusable z-normalize / PAA / discretize pipeline for fixed `(w, a)`.
#[derive(Debug, Clone)]
pub struct SaxEncoder {
    word_length: usize,
    table: BreakpointTable,
    epsilon_std: f64,
}

impl SaxEncoder {
    pub fn new(word_length: usize, a: usize, epsilon_std: f64) -> Result<Self> {
        if word_length == 0 {
            return Err(Error::InvalidPartition { n: 0, w: 0 });
        }
        if epsilon_std.is_nan() || epsilon_std <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "epsilon_std must be positive, got {epsilon_std}"
            )));
        }
        Ok(SaxEncoder {
            word_length,
            table: breakpoints(a)?,
            epsilon_std,
        })
    }

    pub fn word_length(&self) -> usize {
        self.word_length
    }

    pub fn table(&self) -> &BreakpointTable {
        &self.table
    }

    pub fn epsilon_std(&self) -> f64 {
        self.epsilon_std
    }

    /// Encodes `values` into `symbols` using `scratch` as the z-normalized
    /// buffer. Returns whether the series was degenerate.
    ///
    /// `scratch.len()` must equal `values.len()` and `symbols.len()` the word
    /// length.
    pub fn encode_into(
        &self,
        values: &[f64],
        scratch: &mut [f64],
        coefficients: &mut [f64],
        symbols: &mut [u8],
    ) -> Result<bool> {
        scratch.copy_from_slice(values);
        let degenerate = znormalize_in_place(scratch, self.epsilon_std);
        paa_into(scratch, coefficients)?;
        for (s, &c) in symbols.iter_mut().zip(coefficients.iter()) {
            *s = self.table.symbol_for(c) as u8;
        }
        Ok(degenerate)
    }

    pub fn encode(&self, values: &[f64]) -> Result<SaxWord> {
        let mut scratch = vec![0.0; values.len()];
        let mut coefficients = vec![0.0; self.word_length];
        let mut symbols = vec![0u8; self.word_length];
        self.encode_into(values, &mut scratch, &mut coefficients, &mut symbols)?;
        Ok(SaxWord {
            symbols,
            source_length: values.len(),
            alphabet: self.table.alphabet,
        })
    }
}

/// SAX word of `series` with `w` symbols over an alphabet of size `a`.
pub fn sax(series: &TimeSeries, w: usize, a: usize, epsilon_std: f64) -> Result<SaxWord> {
    SaxEncoder::new(w, a, epsilon_std)?.encode(series.values())
}

/// Per-symbol MINDIST cell: zero for equal or adjacent symbols, otherwise the
/// gap between the breakpoints that separate them.
pub fn symbol_distance(r: usize, c: usize, table: &BreakpointTable) -> Result<f64> {
    let a = table.alphabet_size();
    for index in [r, c] {
        if index >= a {
            return Err(Error::InvalidSymbol { index, alphabet: a });
        }
    }
    Ok(table.cell(r, c))
}

/// Lower bound on the Euclidean distance between the z-normalized series
/// behind `u` and `v`.
pub fn mindist(u: &SaxWord, v: &SaxWord) -> Result<f64> {
    if u.params() != v.params() {
        return Err(Error::IncompatibleWords {
            left: u.params(),
            right: v.params(),
        });
    }
    let table = breakpoints(u.alphabet_size())?;
    Ok(mindist_with(&table.distance_matrix(), u.alphabet_size(), u.source_length, &u.symbols, &v.symbols))
}

/// MINDIST over raw symbol slices with a precomputed [`BreakpointTable::distance_matrix`].
#[inline]
pub fn mindist_with(matrix: &[f64], a: usize, n: usize, u: &[u8], v: &[u8]) -> f64 {
    let sum: f64 = u
        .iter()
        .zip(v)
        .map(|(&r, &c)| {
            let d = matrix[r as usize * a + c as usize];
            d * d
        })
        .sum();
    (n as f64 / u.len() as f64).sqrt() * sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paa::paa;
    use proptest::prelude::*;

    #[test]
    fn breakpoint_examples() {
        assert_eq!(breakpoints(2).unwrap().betas(), &[0.0]);
        let b3 = breakpoints(3).unwrap();
        assert!((b3.betas()[0] + 0.4307).abs() < 1e-3);
        assert!((b3.betas()[1] - 0.4307).abs() < 1e-3);
        let b4 = breakpoints(4).unwrap();
        assert!((b4.betas()[0] + 0.6745).abs() < 1e-3);
        assert_eq!(b4.betas()[1], 0.0);
        assert!((b4.betas()[2] - 0.6745).abs() < 1e-3);
    }

    #[test]
    fn breakpoint_errors() {
        assert!(matches!(breakpoints(1), Err(Error::InvalidAlphabet(1))));
        assert!(matches!(breakpoints(27), Err(Error::InvalidAlphabet(27))));
    }

    #[test]
    fn tables_are_sorted_and_antisymmetric() {
        for a in 2..=26 {
            let b = breakpoints(a).unwrap();
            let betas = b.betas();
            assert_eq!(betas.len(), a - 1);
            assert!(betas.windows(2).all(|p| p[0] < p[1]));
            for i in 0..a - 1 {
                assert!((betas[i] + betas[a - 2 - i]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn quantile_extreme_tail() {
        // far branch of AS241 (r > 5)
        assert!((normal_quantile(1e-12) + 7.034_483_825_011_13).abs() < 1e-9);
        assert!((normal_quantile(0.975) - 1.959_963_984_540_054).abs() < 1e-12);
    }

    #[test]
    fn discretize_examples() {
        let table = breakpoints(3).unwrap();
        let p = PaaVector::new(vec![-1.0, 0.0, 1.0], 3).unwrap();
        assert_eq!(discretize(&p, &table).to_string(), "abc");
        let p = PaaVector::new(vec![0.0; 5], 10).unwrap();
        assert_eq!(discretize(&p, &table).to_string(), "bbbbb");
    }

    #[test]
    fn boundary_takes_higher_symbol() {
        let table = breakpoints(4).unwrap();
        assert_eq!(table.symbol_for(0.0), 2);
        assert_eq!(table.symbol_for(table.betas()[0]), 1);
        assert_eq!(table.symbol_for(f64::NEG_INFINITY), 0);
        assert_eq!(table.symbol_for(f64::INFINITY), 3);
    }

    #[test]
    fn sax_examples() {
        let flat = TimeSeries::from_values(vec![0.42; 16]).unwrap();
        assert_eq!(sax(&flat, 4, 3, 1e-8).unwrap().to_string(), "bbbb");
        let ramp = TimeSeries::from_values((0..200).map(f64::from).collect()).unwrap();
        assert_eq!(sax(&ramp, 2, 2, 1e-8).unwrap().to_string(), "ab");
    }

    #[test]
    fn word_shape_n128_w8_a3() {
        let s = TimeSeries::from_values((0..128).map(|i| (i as f64 / 9.0).sin()).collect()).unwrap();
        let word = sax(&s, 8, 3, 1e-8).unwrap();
        assert_eq!(word.params(), (128, 8, 3));
        let text = word.to_string();
        assert_eq!(text.len(), 8);
        assert!(text.chars().all(|c| "abc".contains(c)));
        // the published word at least parses under the same parameters
        assert!(SaxWord::parse("baabccbc", 128, 3).is_ok());
    }

    #[test]
    fn symbol_distance_examples() {
        let t = breakpoints(3).unwrap();
        assert_eq!(symbol_distance(1, 1, &t).unwrap(), 0.0);
        assert_eq!(symbol_distance(0, 1, &t).unwrap(), 0.0);
        let d = symbol_distance(0, 2, &t).unwrap();
        assert!((d - 0.8614).abs() < 2e-3);
        assert!(matches!(symbol_distance(0, 3, &t), Err(Error::InvalidSymbol { index: 3, .. })));
    }

    #[test]
    fn mindist_examples() {
        let x = SaxWord::parse("abca", 16, 3).unwrap();
        assert_eq!(mindist(&x, &x).unwrap(), 0.0);
        let u = SaxWord::parse("ab", 10, 3).unwrap();
        let v = SaxWord::parse("bc", 10, 3).unwrap();
        assert_eq!(mindist(&u, &v).unwrap(), 0.0);
        let u = SaxWord::parse("aa", 4, 3).unwrap();
        let v = SaxWord::parse("cc", 4, 3).unwrap();
        assert!((mindist(&u, &v).unwrap() - 1.7228).abs() < 5e-3);
    }

    #[test]
    fn mindist_rejects_mismatch() {
        let u = SaxWord::parse("aa", 4, 3).unwrap();
        for v in [
            SaxWord::parse("aa", 6, 3).unwrap(),
            SaxWord::parse("aaa", 4, 3).unwrap(),
            SaxWord::parse("aa", 4, 4).unwrap(),
        ] {
            assert!(matches!(mindist(&u, &v), Err(Error::IncompatibleWords { .. })));
        }
    }

    #[test]
    fn word_parse_errors() {
        assert!(SaxWord::parse("abd", 8, 3).is_err());
        assert!(SaxWord::parse("", 8, 3).is_err());
        assert!(SaxWord::parse("abab", 3, 3).is_err());
    }

    #[test]
    fn encoder_rejects_bad_epsilon() {
        assert!(SaxEncoder::new(4, 3, 0.0).is_err());
        assert!(SaxEncoder::new(4, 3, f64::NAN).is_err());
        assert!(SaxEncoder::new(0, 3, 1e-8).is_err());
    }

    proptest! {
        #[test]
        fn discretize_monotone(a in 2usize..=26, x in -4f64..4.0, y in -4f64..4.0) {
            let t = breakpoints(a).unwrap();
            let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
            prop_assert!(t.symbol_for(lo) <= t.symbol_for(hi));
        }

        #[test]
        fn distance_matrix_symmetric_banded(a in 2usize..=26) {
            let t = breakpoints(a).unwrap();
            let m = t.distance_matrix();
            for r in 0..a {
                for c in 0..a {
                    prop_assert_eq!(m[r * a + c], m[c * a + r]);
                    prop_assert!(m[r * a + c] >= 0.0);
                    if r.abs_diff(c) <= 1 {
                        prop_assert_eq!(m[r * a + c], 0.0);
                    }
                }
            }
        }

        #[test]
        fn mindist_symmetric(
            a in 2usize..=10,
            syms in prop::collection::vec((0u8..10, 0u8..10), 1..16),
        ) {
            let (u, v): (Vec<u8>, Vec<u8>) = syms.into_iter().map(|(x, y)| (x % a as u8, y % a as u8)).unzip();
            let n = u.len() * 4;
            let u = SaxWord::from_indices(u, n, a).unwrap();
            let v = SaxWord::from_indices(v, n, a).unwrap();
            prop_assert_eq!(mindist(&u, &v).unwrap(), mindist(&v, &u).unwrap());
        }

        #[test]
        fn encoder_matches_composition(v in prop::collection::vec(-5f64..5.0, 8..64), w_frac in 0.0f64..1.0, a in 2usize..12) {
            let w = 1 + ((v.len() - 1) as f64 * w_frac) as usize;
            let s = TimeSeries::from_values(v.clone()).unwrap();
            let direct = sax(&s, w, a, 1e-8).unwrap();
            let z = crate::series::znormalize(&s, 1e-8);
            let composed = discretize(&paa(z.values(), w).unwrap(), &breakpoints(a).unwrap());
            prop_assert_eq!(direct, composed);
        }
    }
}
