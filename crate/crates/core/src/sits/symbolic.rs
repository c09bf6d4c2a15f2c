//! Whole-cube symbolization, word statistics and MINDIST range queries.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::write_atomically;
use crate::sax::{mindist_with, SaxEncoder, SaxWord};
use crate::series::TimeSeries;
use crate::sits::cube::{fill_gaps, RasterCube};

/// Placeholder written for pixels that could not be symbolized.
pub const REJECTED_WORD: &str = "-";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PixelStatus {
    Ok,
    /// Variance below the threshold; the word is all middle symbols.
    Degenerate,
    /// No word (missing data under the reject policy, or nothing to fill).
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelFailure {
    pub x: usize,
    pub y: usize,
    pub reason: String,
}

/// One SAX word per pixel, row-major, all sharing `(n, w, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicRaster {
    width: usize,
    height: usize,
    source_length: usize,
    word_length: usize,
    alphabet_size: usize,
    epsilon_std: f64,
    symbols: Vec<u8>,
    status: Vec<PixelStatus>,
    failures: Vec<PixelFailure>,
}

impl SymbolicRaster {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `(n, w, a)`.
    pub fn params(&self) -> (usize, usize, usize) {
        (self.source_length, self.word_length, self.alphabet_size)
    }

    pub fn epsilon_std(&self) -> f64 {
        self.epsilon_std
    }

    pub fn status(&self, x: usize, y: usize) -> PixelStatus {
        self.status[y * self.width + x]
    }

    pub fn is_degenerate(&self, x: usize, y: usize) -> bool {
        self.status(x, y) == PixelStatus::Degenerate
    }

    pub fn degenerate_flags(&self) -> Vec<bool> {
        self.status.iter().map(|s| *s == PixelStatus::Degenerate).collect()
    }

    /// Pixels that produced no word, in row-major order.
    pub fn failures(&self) -> &[PixelFailure] {
        &self.failures
    }

    fn symbols_at(&self, index: usize) -> &[u8] {
        &self.symbols[index * self.word_length..(index + 1) * self.word_length]
    }

    pub fn word(&self, x: usize, y: usize) -> Option<SaxWord> {
        let i = y * self.width + x;
        (self.status[i] != PixelStatus::Rejected).then(|| self.make_word(i))
    }

    fn make_word(&self, i: usize) -> SaxWord {
        SaxWord::from_indices(self.symbols_at(i).to_vec(), self.source_length, self.alphabet_size)
            .expect("raster holds valid words")
    }

    /// Words in row-major order, `None` for rejected pixels.
    pub fn words(&self) -> impl Iterator<Item = Option<SaxWord>> + '_ {
        (0..self.len()).map(|i| (self.status[i] != PixelStatus::Rejected).then(|| self.make_word(i)))
    }

    fn word_text(&self, i: usize) -> String {
        if self.status[i] == PixelStatus::Rejected {
            REJECTED_WORD.to_string()
        } else {
            self.symbols_at(i).iter().map(|&s| (b'a' + s) as char).collect()
        }
    }

    /// Writes the text export: a `w= a= n= width= height=` header, then one
    /// word per line in row-major order.
    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        write_atomically(path, |file| {
            let mut out = BufWriter::with_capacity(1 << 20, file);
            self.write_to(&mut out).map_err(|e| Error::io(path, e))?;
            out.flush().map_err(|e| Error::io(path, e))
        })
    }

    pub fn write_to(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "w={} a={} n={} width={} height={}",
            self.word_length, self.alphabet_size, self.source_length, self.width, self.height
        )?;
        let mut line = Vec::with_capacity(self.word_length + 1);
        for i in 0..self.len() {
            line.clear();
            if self.status[i] == PixelStatus::Rejected {
                line.extend_from_slice(REJECTED_WORD.as_bytes());
            } else {
                line.extend(self.symbols_at(i).iter().map(|&s| b'a' + s));
            }
            line.push(b'\n');
            out.write_all(&line)?;
        }
        Ok(())
    }

    /// Reads a text export. Degenerate flags are not stored in the file and
    /// come back cleared; `epsilon_std` comes back as the default.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::format(path, "empty file"))?;
        let mut fields = BTreeMap::new();
        for part in header.split_whitespace() {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::format(path, format!("bad header field {part:?}")))?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::format(path, format!("bad header value {part:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| Error::format(path, format!("header lacks {k}=")))
        };
        let (w, a, n, width, height) = (get("w")?, get("a")?, get("n")?, get("width")?, get("height")?);
        let alphabet = crate::series::Alphabet::new(a)?;
        if w == 0 || w > n {
            return Err(Error::InvalidPartition { n, w });
        }
        let count = width * height;
        let mut symbols = Vec::with_capacity(count * w);
        let mut status = Vec::with_capacity(count);
        let mut failures = Vec::new();
        for (i, line) in lines.enumerate() {
            if i >= count {
                return Err(Error::format(path, format!("more than {count} words")));
            }
            if line == REJECTED_WORD {
                symbols.extend(std::iter::repeat_n(0, w));
                status.push(PixelStatus::Rejected);
                failures.push(PixelFailure {
                    x: i % width,
                    y: i / width,
                    reason: "rejected in source raster".into(),
                });
                continue;
            }
            if line.len() != w {
                return Err(Error::format(path, format!("word {} has length {}, expected {w}", i + 1, line.len())));
            }
            for ch in line.chars() {
                let s = alphabet
                    .index_of(ch)
                    .ok_or_else(|| Error::format(path, format!("word {}: symbol {ch:?} outside alphabet", i + 1)))?;
                symbols.push(s as u8);
            }
            status.push(PixelStatus::Ok);
        }
        if status.len() != count {
            return Err(Error::format(path, format!("{} words, expected {count}", status.len())));
        }
        Ok(SymbolicRaster {
            width,
            height,
            source_length: n,
            word_length: w,
            alphabet_size: a,
            epsilon_std: crate::series::DEFAULT_EPSILON_STD,
            symbols,
            status,
            failures,
        })
    }
}

/// Symbolizes every pixel of `cube`.
///
/// `workers` bounds the thread pool (`None` uses rayon's global pool). The
/// result does not depend on the worker count: each row writes into its own
/// pre-sized slot. Pixels that fail extraction are flagged and listed in
/// [`SymbolicRaster::failures`]; the run continues.
pub fn symbolize_cube(
    cube: &RasterCube,
    w: usize,
    a: usize,
    epsilon_std: f64,
    workers: Option<usize>,
) -> Result<SymbolicRaster> {
    let n = cube.bands();
    if w == 0 || w > n {
        return Err(Error::InvalidPartition { n, w });
    }
    let encoder = SaxEncoder::new(w, a, epsilon_std)?;
    let width = cube.width();
    let height = cube.height();
    let mut symbols = vec![0u8; width * height * w];
    let mut status = vec![PixelStatus::Ok; width * height];

    let run = |symbols: &mut [u8], status: &mut [PixelStatus]| -> Vec<PixelFailure> {
        symbols
            .par_chunks_mut(width * w)
            .zip(status.par_chunks_mut(width))
            .enumerate()
            .map(|(y, (row_symbols, row_status))| {
                symbolize_row(cube, &encoder, y, row_symbols, row_status)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };

    let failures = match workers {
        None => run(&mut symbols, &mut status),
        Some(0) => return Err(Error::InvalidParameter("worker count must be at least 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start {k} workers: {e}")))?
            .install(|| run(&mut symbols, &mut status)),
    };

    Ok(SymbolicRaster {
        width,
        height,
        source_length: n,
        word_length: w,
        alphabet_size: a,
        epsilon_std,
        symbols,
        status,
        failures,
    })
}

fn symbolize_row(
    cube: &RasterCube,
    encoder: &SaxEncoder,
    y: usize,
    row_symbols: &mut [u8],
    row_status: &mut [PixelStatus],
) -> Vec<PixelFailure> {
    let n = cube.bands();
    let w = encoder.word_length();
    let width = cube.width();
    let mut values = vec![0.0; width * n];
    let mut missing = vec![false; width * n];
    cube.row_pixel_major(y, &mut values, &mut missing);
    let mut scratch = vec![0.0; n];
    let mut coefficients = vec![0.0; w];
    let mut failures = Vec::new();
    for x in 0..width {
        let series = &mut values[x * n..(x + 1) * n];
        let out = &mut row_symbols[x * w..(x + 1) * w];
        if let Err(reason) = fill_gaps(series, &missing[x * n..(x + 1) * n], cube.fill_policy()) {
            row_status[x] = PixelStatus::Rejected;
            failures.push(PixelFailure {
                x,
                y,
                reason: reason.to_string(),
            });
            continue;
        }
        match encoder.encode_into(series, &mut scratch, &mut coefficients, out) {
            Ok(true) => row_status[x] = PixelStatus::Degenerate,
            Ok(false) => row_status[x] = PixelStatus::Ok,
            Err(e) => {
                row_status[x] = PixelStatus::Rejected;
                failures.push(PixelFailure { x, y, reason: e.to_string() });
            }
        }
    }
    failures
}

/// Word counts keyed by word text, in lexicographic order. Rejected pixels
/// are counted under [`REJECTED_WORD`], so the counts sum to the pixel count.
pub fn word_histogram(raster: &SymbolicRaster) -> BTreeMap<String, usize> {
    let mut hist = BTreeMap::new();
    for i in 0..raster.len() {
        *hist.entry(raster.word_text(i)).or_insert(0) += 1;
    }
    hist
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueryHit {
    pub x: usize,
    pub y: usize,
    pub mindist: f64,
}

/// Every pixel whose word lies within MINDIST `radius` of the probe's word,
/// nearest first, ties in row-major order.
///
/// MINDIST lower-bounds the Euclidean distance between z-normalized series,
/// so no pixel within true distance `radius` is missed.
pub fn query_mindist(raster: &SymbolicRaster, probe: &TimeSeries, radius: f64) -> Result<Vec<QueryHit>> {
    let (n, w, a) = raster.params();
    if probe.len() != n {
        return Err(Error::IncompatibleProbe {
            probe: probe.len(),
            expected: n,
        });
    }
    if radius.is_nan() || radius < 0.0 {
        return Err(Error::InvalidParameter(format!("radius must be non-negative, got {radius}")));
    }
    let encoder = SaxEncoder::new(w, a, raster.epsilon_std)?;
    let probe_word = encoder.encode(probe.values())?;
    let matrix = encoder.table().distance_matrix();
    let mut hits: Vec<QueryHit> = (0..raster.len())
        .into_par_iter()
        .filter(|&i| raster.status[i] != PixelStatus::Rejected)
        .filter_map(|i| {
            let d = mindist_with(&matrix, a, n, raster.symbols_at(i), probe_word.indices());
            (d <= radius).then(|| QueryHit {
                x: i % raster.width,
                y: i / raster.width,
                mindist: d,
            })
        })
        .collect();
    hits.sort_by(|p, q| p.mindist.total_cmp(&q.mindist).then(p.y.cmp(&q.y)).then(p.x.cmp(&q.x)));
    Ok(hits)
}

/// Euclidean distance between the z-normalized series of pixel `(x, y)` and
/// the z-normalized probe, for refining MINDIST candidates.
pub fn znormalized_distance(cube: &RasterCube, x: usize, y: usize, probe: &TimeSeries, epsilon_std: f64) -> Result<f64> {
    if probe.len() != cube.bands() {
        return Err(Error::IncompatibleProbe {
            probe: probe.len(),
            expected: cube.bands(),
        });
    }
    let pixel = crate::series::znormalize(&cube.pixel_series(x, y)?, epsilon_std);
    let probe = crate::series::znormalize(probe, epsilon_std);
    Ok(pixel
        .values()
        .iter()
        .zip(probe.values())
        .map(|(p, q)| (p - q) * (p - q))
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sax::{mindist, sax};
    use crate::sits::cube::FillPolicy;

    fn cube_from_fn(width: usize, height: usize, bands: usize, f: impl Fn(usize, usize, usize) -> f64) -> RasterCube {
        let mut data = Vec::with_capacity(width * height * bands);
        for b in 0..bands {
            for y in 0..height {
                for x in 0..width {
                    data.push(f(x, y, b));
                }
            }
        }
        RasterCube::new(width, height, (0..bands as i64).map(|d| d * 16).collect(), data, None).unwrap()
    }

    fn wiggle(x: usize, y: usize, b: usize) -> f64 {
        (((x * 7 + y * 13 + b * 5) % 23) as f64 / 23.0 - 0.5) * 1.6
    }

    #[test]
    fn one_pixel_matches_direct_sax() {
        let cube = cube_from_fn(1, 1, 24, wiggle);
        let raster = symbolize_cube(&cube, 6, 4, 1e-8, None).unwrap();
        assert_eq!(raster.len(), 1);
        let direct = sax(&cube.pixel_series(0, 0).unwrap(), 6, 4, 1e-8).unwrap();
        assert_eq!(raster.word(0, 0).unwrap(), direct);
    }

    #[test]
    fn every_word_matches_pixel_sax() {
        let cube = cube_from_fn(5, 3, 20, wiggle);
        let raster = symbolize_cube(&cube, 5, 5, 1e-8, Some(2)).unwrap();
        for y in 0..3 {
            for x in 0..5 {
                let direct = sax(&cube.pixel_series(x, y).unwrap(), 5, 5, 1e-8).unwrap();
                assert_eq!(raster.word(x, y).unwrap(), direct);
            }
        }
    }

    #[test]
    fn identical_pixels_identical_words_any_worker_count() {
        let cube = cube_from_fn(4, 4, 12, |_, _, b| (b as f64 * 0.7).sin() * 0.5);
        let seq = symbolize_cube(&cube, 4, 3, 1e-8, Some(1)).unwrap();
        let par = symbolize_cube(&cube, 4, 3, 1e-8, Some(3)).unwrap();
        assert_eq!(seq, par);
        let hist = word_histogram(&seq);
        assert_eq!(hist.len(), 1);
        assert_eq!(hist.values().next(), Some(&16));
    }

    #[test]
    fn degenerate_and_rejected_pixels() {
        let mut data = vec![0.3; 2 * 3];
        data[1] = 0.1; // pixel 1 varies in band 0
        let mut mask = vec![false; 6];
        mask[2 + 1] = true; // pixel 1, band 1
        let cube = RasterCube::new(2, 1, vec![0, 1, 2], data.clone(), Some(mask.clone())).unwrap();
        let raster = symbolize_cube(&cube, 3, 3, 1e-8, None).unwrap();
        assert!(raster.is_degenerate(0, 0));
        assert_eq!(raster.word(0, 0).unwrap().to_string(), "bbb");
        assert_eq!(raster.status(1, 0), PixelStatus::Rejected);
        assert_eq!(raster.word(1, 0), None);
        assert_eq!(raster.failures().len(), 1);
        assert_eq!((raster.failures()[0].x, raster.failures()[0].y), (1, 0));
        let hist = word_histogram(&raster);
        assert_eq!(hist.values().sum::<usize>(), 2);
        assert_eq!(hist.get(REJECTED_WORD), Some(&1));

        let cube = cube.with_fill_policy(FillPolicy::Interpolate);
        let raster = symbolize_cube(&cube, 3, 3, 1e-8, None).unwrap();
        assert!(raster.failures().is_empty());
        assert_eq!(raster.status(1, 0), PixelStatus::Ok);
    }

    #[test]
    fn parameter_errors() {
        let cube = cube_from_fn(2, 2, 4, wiggle);
        assert!(matches!(symbolize_cube(&cube, 5, 3, 1e-8, None), Err(Error::InvalidPartition { .. })));
        assert!(matches!(symbolize_cube(&cube, 2, 27, 1e-8, None), Err(Error::InvalidAlphabet(27))));
        assert!(symbolize_cube(&cube, 2, 3, 1e-8, Some(0)).is_err());
    }

    #[test]
    fn text_export_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.saxr");
        let mut mask = vec![false; 3 * 2 * 8];
        mask[4] = true;
        let cube = RasterCube::new(3, 2, (0..8).collect(), (0..48).map(|i| wiggle(i, 0, i / 6)).collect(), Some(mask)).unwrap();
        let raster = symbolize_cube(&cube, 4, 6, 1e-8, None).unwrap();
        raster.write(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("w=4 a=6 n=8 width=3 height=2"));
        assert_eq!(lines.clone().count(), 6);
        assert_eq!(lines.nth(4), Some(REJECTED_WORD));
        let back = SymbolicRaster::read(&path).unwrap();
        assert_eq!(back.params(), (8, 4, 6));
        assert_eq!(back.words().collect::<Vec<_>>(), raster.words().collect::<Vec<_>>());
    }

    #[test]
    fn read_rejects_malformed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.saxr");
        for body in [
            "",
            "w=2 a=3 n=4 width=1\nab\n",
            "w=2 a=3 n=4 width=1 height=1\nabc\n",
            "w=2 a=3 n=4 width=1 height=1\nad\n",
            "w=2 a=3 n=4 width=1 height=2\nab\n",
            "w=2 a=3 n=4 width=1 height=1\nab\nab\n",
        ] {
            fs::write(&path, body).unwrap();
            assert!(SymbolicRaster::read(&path).is_err(), "{body:?}");
        }
    }

    #[test]
    fn query_examples() {
        let cube = cube_from_fn(6, 5, 16, wiggle);
        let raster = symbolize_cube(&cube, 4, 5, 1e-8, None).unwrap();
        let probe = cube.pixel_series(3, 2).unwrap();
        let hits = query_mindist(&raster, &probe, 0.0).unwrap();
        assert!(hits.iter().any(|h| (h.x, h.y) == (3, 2)));
        assert!(hits.iter().all(|h| h.mindist == 0.0));

        let all = query_mindist(&raster, &probe, f64::INFINITY).unwrap();
        assert_eq!(all.len(), 30);
        assert!(all.windows(2).all(|p| p[0].mindist <= p[1].mindist));

        // brute-force scan
        let pw = sax(&probe, 4, 5, 1e-8).unwrap();
        let radius = 1.5;
        let mut want = Vec::new();
        for y in 0..5 {
            for x in 0..6 {
                let d = mindist(&raster.word(x, y).unwrap(), &pw).unwrap();
                if d <= radius {
                    want.push((x, y));
                }
            }
        }
        let mut got: Vec<_> = query_mindist(&raster, &probe, radius).unwrap().iter().map(|h| (h.x, h.y)).collect();
        got.sort_by_key(|&(x, y)| (y, x));
        assert_eq!(got, want);
    }

    #[test]
    fn query_errors() {
        let cube = cube_from_fn(2, 2, 8, wiggle);
        let raster = symbolize_cube(&cube, 4, 3, 1e-8, None).unwrap();
        let short = TimeSeries::from_values(vec![0.1, 0.2]).unwrap();
        assert!(matches!(query_mindist(&raster, &short, 1.0), Err(Error::IncompatibleProbe { probe: 2, expected: 8 })));
        let probe = cube.pixel_series(0, 0).unwrap();
        assert!(query_mindist(&raster, &probe, -1.0).is_err());
    }
}
