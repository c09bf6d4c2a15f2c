//! Space-time raster cube and its single-file binary container.
//!
//! Layout on disk (all little-endian):
//!
//! ```text
//! "SITS" | version u16 | width u32 | height u32 | bands u32 | dtype u8
//!        | scale f64 | offset f64 | missing f64
//!        | bands x i64 acquisition dates (days since 1970-01-01)
//!        | bands x height x width samples (f64, or i16 when dtype = 1)
//! ```
//!
//! A stored sample `raw` decodes to `raw * scale + offset`; samples equal to
//! the missing sentinel are masked.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::write_atomically;
use crate::series::TimeSeries;

pub const MAGIC: &[u8; 4] = b"SITS";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 4 + 2 + 4 + 4 + 4 + 1 + 8 + 8 + 8;

/// Scale of the MODIS int16 NDVI product.
pub const MODIS_NDVI_SCALE: f64 = 1e-4;
/// Fill value of the MODIS int16 NDVI product.
pub const MODIS_NDVI_FILL: i16 = -3000;

/// How gaps in a pixel series are handled when the series is extracted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FillPolicy {
    /// Any missing sample rejects the pixel.
    #[default]
    Reject,
    /// Linear interpolation over interior gaps, constant extension at the ends.
    Interpolate,
}

/// One 2-D layer, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
    pub missing: Vec<bool>,
}

impl Band {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        let missing = vec![false; values.len()];
        Self::with_mask(width, height, values, missing)
    }

    pub fn with_mask(width: usize, height: usize, values: Vec<f64>, missing: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Shape(format!("empty band {width}x{height}")));
        }
        if values.len() != width * height || missing.len() != values.len() {
            return Err(Error::Shape(format!(
                "band {width}x{height} needs {} samples, got {} values and {} mask entries",
                width * height,
                values.len(),
                missing.len()
            )));
        }
        Ok(Band {
            width,
            height,
            values,
            missing,
        })
    }

    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        let i = y * self.width + x;
        (!self.missing[i]).then(|| self.values[i])
    }
}

/// Sample encoding of a cube file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CubeEncoding {
    Float64 { missing: f64 },
    Int16Scaled { scale: f64, offset: f64, missing: i16 },
}

impl CubeEncoding {
    pub fn float64() -> Self {
        CubeEncoding::Float64 { missing: f64::NAN }
    }

    pub fn modis_ndvi() -> Self {
        CubeEncoding::Int16Scaled {
            scale: MODIS_NDVI_SCALE,
            offset: 0.0,
            missing: MODIS_NDVI_FILL,
        }
    }

    fn dtype_code(&self) -> u8 {
        match self {
            CubeEncoding::Float64 { .. } => 0,
            CubeEncoding::Int16Scaled { .. } => 1,
        }
    }
}

/// `width x height x bands` NDVI samples with per-band acquisition dates.
///
/// Samples are stored band-major, row-major within a band.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterCube {
    width: usize,
    height: usize,
    band_dates: Vec<i64>,
    data: Vec<f64>,
    missing: Vec<bool>,
    scale: f64,
    offset: f64,
    fill_policy: FillPolicy,
}

impl RasterCube {
    pub fn new(
        width: usize,
        height: usize,
        band_dates: Vec<i64>,
        data: Vec<f64>,
        missing: Option<Vec<bool>>,
    ) -> Result<Self> {
        if width == 0 || height == 0 || band_dates.is_empty() {
            return Err(Error::Shape(format!(
                "cube must be non-empty, got {width}x{height}x{}",
                band_dates.len()
            )));
        }
        let expected = width * height * band_dates.len();
        if data.len() != expected {
            return Err(Error::Shape(format!(
                "{width}x{height}x{} cube needs {expected} samples, got {}",
                band_dates.len(),
                data.len()
            )));
        }
        let missing = missing.unwrap_or_else(|| vec![false; expected]);
        if missing.len() != expected {
            return Err(Error::Shape(format!(
                "missing mask has {} entries, expected {expected}",
                missing.len()
            )));
        }
        check_dates(&band_dates)?;
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|&(i, v)| !missing[i] && !(-1.0..=1.0).contains(v))
        {
            return Err(Error::OutOfRange { index, value });
        }
        Ok(RasterCube {
            width,
            height,
            band_dates,
            data,
            missing,
            scale: 1.0,
            offset: 0.0,
            fill_policy: FillPolicy::default(),
        })
    }

    /// Stacks dated bands, sorting them by date.
    pub fn from_bands(mut bands: Vec<(i64, Band)>) -> Result<Self> {
        let Some((_, first)) = bands.first() else {
            return Err(Error::Shape("no bands".into()));
        };
        let (width, height) = (first.width, first.height);
        if let Some((date, b)) = bands.iter().find(|(_, b)| (b.width, b.height) != (width, height)) {
            return Err(Error::Shape(format!(
                "band dated {date} is {}x{}, expected {width}x{height}",
                b.width, b.height
            )));
        }
        bands.sort_by_key(|(d, _)| *d);
        let dates: Vec<i64> = bands.iter().map(|(d, _)| *d).collect();
        let mut data = Vec::with_capacity(width * height * bands.len());
        let mut missing = Vec::with_capacity(data.capacity());
        for (_, b) in bands {
            data.extend(b.values);
            missing.extend(b.missing);
        }
        Self::new(width, height, dates, data, Some(missing))
    }

    /// Records the scale/offset that were applied when the samples were read.
    pub fn with_scaling(mut self, scale: f64, offset: f64) -> Self {
        self.scale = scale;
        self.offset = offset;
        self
    }

    pub fn with_fill_policy(mut self, policy: FillPolicy) -> Self {
        self.fill_policy = policy;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bands(&self) -> usize {
        self.band_dates.len()
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn band_dates(&self) -> &[i64] {
        &self.band_dates
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn fill_policy(&self) -> FillPolicy {
        self.fill_policy
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn missing_mask(&self) -> &[bool] {
        &self.missing
    }

    pub fn missing_count(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }

    #[inline]
    fn index(&self, band: usize, x: usize, y: usize) -> usize {
        (band * self.height + y) * self.width + x
    }

    /// Sample at `(x, y)` in `band`, `None` if masked.
    pub fn sample(&self, band: usize, x: usize, y: usize) -> Option<f64> {
        let i = self.index(band, x, y);
        (!self.missing[i]).then(|| self.data[i])
    }

    pub fn band(&self, band: usize) -> Result<Band> {
        if band >= self.bands() {
            return Err(Error::InvalidParameter(format!(
                "band {band} out of range, cube has {}",
                self.bands()
            )));
        }
        let len = self.pixel_count();
        let range = band * len..(band + 1) * len;
        Band::with_mask(
            self.width,
            self.height,
            self.data[range.clone()].to_vec(),
            self.missing[range].to_vec(),
        )
    }

    fn check_bounds(&self, x: usize, y: usize) -> Result<()> {
        if x >= self.width || y >= self.height {
            return Err(Error::OutOfBounds {
                x,
                y,
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }

    /// Raw samples of one pixel across all bands, missing ones included.
    pub fn pixel_samples(&self, x: usize, y: usize) -> Result<(Vec<f64>, Vec<bool>)> {
        self.check_bounds(x, y)?;
        Ok((0..self.bands())
            .map(|b| {
                let i = self.index(b, x, y);
                (self.data[i], self.missing[i])
            })
            .unzip())
    }

    /// The time series of pixel `(x, y)`, with gaps handled by the cube's
    /// fill policy.
    pub fn pixel_series(&self, x: usize, y: usize) -> Result<TimeSeries> {
        let (mut values, missing) = self.pixel_samples(x, y)?;
        fill_gaps(&mut values, &missing, self.fill_policy).map_err(|reason| Error::PixelRejected {
            x,
            y,
            reason: reason.to_string(),
        })?;
        TimeSeries::new(self.band_dates.clone(), values)
    }

    /// Copies row `y` into pixel-major buffers: `values[x * bands + b]`.
    pub(crate) fn row_pixel_major(&self, y: usize, values: &mut [f64], missing: &mut [bool]) {
        let bands = self.bands();
        for b in 0..bands {
            let start = self.index(b, 0, y);
            let row = &self.data[start..start + self.width];
            let row_missing = &self.missing[start..start + self.width];
            for x in 0..self.width {
                values[x * bands + b] = row[x];
                missing[x * bands + b] = row_missing[x];
            }
        }
    }

    /// Writes the cube with the given sample encoding, atomically.
    pub fn write(&self, path: impl AsRef<Path>, encoding: CubeEncoding) -> Result<()> {
        let path = path.as_ref();
        if let CubeEncoding::Int16Scaled { scale, .. } = encoding {
            if !(scale != 0.0 && scale.is_finite()) {
                return Err(Error::InvalidParameter(format!("invalid int16 scale {scale}")));
            }
        }
        write_atomically(path, |file| {
            let mut out = BufWriter::with_capacity(1 << 20, file);
            self.write_to(&mut out, encoding, path)?;
            out.flush().map_err(|e| Error::io(path, e))
        })
    }

    fn write_to(&self, out: &mut impl Write, encoding: CubeEncoding, path: &Path) -> Result<()> {
        let (scale, offset, sentinel) = match encoding {
            CubeEncoding::Float64 { missing } => (1.0, 0.0, missing),
            CubeEncoding::Int16Scaled { scale, offset, missing } => (scale, offset, missing as f64),
        };
        let mut header = Vec::with_capacity(HEADER_LEN + 8 * self.bands());
        header.extend_from_slice(MAGIC);
        header.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        for dim in [self.width, self.height, self.bands()] {
            let dim = u32::try_from(dim).map_err(|_| Error::Shape(format!("dimension {dim} exceeds u32")))?;
            header.extend_from_slice(&dim.to_le_bytes());
        }
        header.push(encoding.dtype_code());
        for v in [scale, offset, sentinel] {
            header.extend_from_slice(&v.to_le_bytes());
        }
        for d in &self.band_dates {
            header.extend_from_slice(&d.to_le_bytes());
        }
        out.write_all(&header).map_err(|e| Error::io(path, e))?;

        let mut buf = Vec::with_capacity(1 << 16);
        for (chunk, mask) in self.data.chunks(8192).zip(self.missing.chunks(8192)) {
            buf.clear();
            for (&v, &m) in chunk.iter().zip(mask) {
                match encoding {
                    CubeEncoding::Float64 { missing } => {
                        let v = if m { missing } else { v };
                        buf.extend_from_slice(&v.to_le_bytes());
                    }
                    CubeEncoding::Int16Scaled { scale, offset, missing } => {
                        let raw = if m {
                            missing
                        } else {
                            let r = ((v - offset) / scale).round();
                            if !(i16::MIN as f64..=i16::MAX as f64).contains(&r) || r as i16 == missing {
                                return Err(Error::InvalidParameter(format!(
                                    "value {v} is not representable as int16 with scale {scale}, offset {offset}"
                                )));
                            }
                            r as i16
                        };
                        buf.extend_from_slice(&raw.to_le_bytes());
                    }
                }
            }
            out.write_all(&buf).map_err(|e| Error::io(path, e))?;
        }
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut input = BufReader::with_capacity(1 << 20, file);
        let mut header = [0u8; HEADER_LEN];
        read_exact(&mut input, &mut header, path)?;
        if &header[0..4] != MAGIC {
            return Err(Error::format(path, "not a cube file (bad magic)"));
        }
        let version = u16::from_le_bytes([header[4], header[5]]);
        if version != FORMAT_VERSION {
            return Err(Error::format(path, format!("unsupported format version {version}")));
        }
        let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap()) as usize;
        let f64_at = |o: usize| f64::from_le_bytes(header[o..o + 8].try_into().unwrap());
        let (width, height, bands) = (u32_at(6), u32_at(10), u32_at(14));
        let dtype = header[18];
        let (scale, offset, sentinel) = (f64_at(19), f64_at(27), f64_at(35));

        let mut dates_raw = vec![0u8; 8 * bands];
        read_exact(&mut input, &mut dates_raw, path)?;
        let dates: Vec<i64> = dates_raw
            .chunks_exact(8)
            .map(|c| i64::from_le_bytes(c.try_into().unwrap()))
            .collect();

        let count = width
            .checked_mul(height)
            .and_then(|p| p.checked_mul(bands))
            .ok_or_else(|| Error::format(path, "dimensions overflow"))?;
        let sample_size = match dtype {
            0 => 8,
            1 => 2,
            other => return Err(Error::format(path, format!("unknown dtype code {other}"))),
        };
        let identity = scale == 1.0 && offset == 0.0;
        let mut data = Vec::with_capacity(count);
        let mut missing = Vec::with_capacity(count);
        let mut buf = vec![0u8; sample_size * 8192];
        let mut remaining = count;
        while remaining > 0 {
            let take = remaining.min(8192);
            let bytes = &mut buf[..take * sample_size];
            read_exact(&mut input, bytes, path)?;
            for c in bytes.chunks_exact(sample_size) {
                let raw = if dtype == 0 {
                    f64::from_le_bytes(c.try_into().unwrap())
                } else {
                    i16::from_le_bytes([c[0], c[1]]) as f64
                };
                let is_missing = raw.to_bits() == sentinel.to_bits() || raw == sentinel || raw.is_nan();
                missing.push(is_missing);
                data.push(if is_missing {
                    0.0
                } else if identity {
                    raw
                } else {
                    raw * scale + offset
                });
            }
            remaining -= take;
        }
        let mut trailing = [0u8; 1];
        if input.read(&mut trailing).map_err(|e| Error::io(path, e))? != 0 {
            return Err(Error::format(path, "trailing bytes after payload"));
        }
        let cube = RasterCube::new(width, height, dates, data, Some(missing))?;
        Ok(if dtype == 1 { cube.with_scaling(scale, offset) } else { cube })
    }
}

fn read_exact(input: &mut impl Read, buf: &mut [u8], path: &Path) -> Result<()> {
    input.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::format(path, "file truncated")
        } else {
            Error::io(path, e)
        }
    })
}

pub(crate) fn check_dates(dates: &[i64]) -> Result<()> {
    for pair in dates.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::DuplicateDate(pair[0]));
        }
        if pair[0] > pair[1] {
            return Err(Error::InvalidSeries(format!(
                "band dates not increasing: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    Ok(())
}

/// Applies `policy` to the gaps in `values` flagged by `missing`.
pub(crate) fn fill_gaps(values: &mut [f64], missing: &[bool], policy: FillPolicy) -> Result<(), &'static str> {
    if !missing.iter().any(|&m| m) {
        return Ok(());
    }
    match policy {
        FillPolicy::Reject => Err("series has missing samples"),
        FillPolicy::Interpolate => {
            let mut prev: Option<usize> = None;
            let mut i = 0;
            while i < values.len() {
                if !missing[i] {
                    prev = Some(i);
                    i += 1;
                    continue;
                }
                let gap_end = (i..values.len()).find(|&j| !missing[j]);
                match (prev, gap_end) {
                    (None, None) => return Err("all samples missing"),
                    (Some(p), None) => {
                        let fill = values[p];
                        values[i..].iter_mut().for_each(|v| *v = fill);
                    }
                    (None, Some(e)) => {
                        let fill = values[e];
                        values[i..e].iter_mut().for_each(|v| *v = fill);
                    }
                    (Some(p), Some(e)) => {
                        let (lo, hi) = (values[p], values[e]);
                        let span = (e - p) as f64;
                        for (k, v) in values[i..e].iter_mut().enumerate() {
                            let t = (i + k - p) as f64 / span;
                            *v = lo + (hi - lo) * t;
                        }
                    }
                }
                i = gap_end.unwrap_or(values.len());
            }
            Ok(())
        }
    }
}
