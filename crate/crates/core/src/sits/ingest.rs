//! Band import: manifests, CSV grids and flat binary rasters.
//!
//! A manifest lists one band per line as `path,YYYY-MM-DD` (or, for NDVI
//! stacks, `nir_path,red_path,YYYY-MM-DD`). Blank lines and lines starting
//! with `#` are ignored; relative paths resolve against the manifest's
//! directory.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::io::write_atomically;
use crate::sits::cube::{check_dates, Band, RasterCube};
use crate::sits::ndvi::{compute_ndvi, NdviFill};

/// Element type of a flat binary band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RawType {
    #[default]
    I16,
    F64,
}

impl RawType {
    fn size(self) -> usize {
        match self {
            RawType::I16 => 2,
            RawType::F64 => 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestConfig {
    pub scale: f64,
    pub offset: f64,
    /// Raw value marking a missing sample, compared before scaling.
    pub missing_value: Option<f64>,
    /// Dimensions of flat binary bands; CSV bands carry their own.
    pub binary_shape: Option<(usize, usize)>,
    pub binary_type: RawType,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            scale: 1.0,
            offset: 0.0,
            missing_value: None,
            binary_shape: None,
            binary_type: RawType::I16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub paths: Vec<PathBuf>,
    pub date: i64,
}

/// Days since 1970-01-01 for an ISO-8601 calendar date.
pub fn parse_iso_date(text: &str) -> Option<i64> {
    let text = text.trim();
    let day = text.get(..10).unwrap_or(text);
    if text.len() > 10 && !text[10..].starts_with('T') {
        return None;
    }
    let date = NaiveDate::parse_from_str(day, "%Y-%m-%d").ok()?;
    let epoch = NaiveDate::from_ymd_opt(1970, 1, 1)?;
    Some((date - epoch).num_days())
}

pub fn format_iso_date(days: i64) -> String {
    NaiveDate::from_ymd_opt(1970, 1, 1)
        .and_then(|e| e.checked_add_signed(chrono::Duration::days(days)))
        .map(|d| d.format("%Y-%m-%d").to_string())
        .unwrap_or_else(|| days.to_string())
}

/// Reads a manifest whose lines hold `paths_per_line` paths then a date.
pub fn read_manifest(path: impl AsRef<Path>, paths_per_line: usize) -> Result<Vec<ManifestEntry>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != paths_per_line + 1 || fields.iter().any(|f| f.is_empty()) {
            return Err(Error::format(
                path,
                format!("line {}: expected {} comma-separated fields", lineno + 1, paths_per_line + 1),
            ));
        }
        let date = parse_iso_date(fields[paths_per_line])
            .ok_or_else(|| Error::format(path, format!("line {}: bad date {:?}", lineno + 1, fields[paths_per_line])))?;
        entries.push(ManifestEntry {
            paths: fields[..paths_per_line].iter().map(|p| base.join(p)).collect(),
            date,
        });
    }
    if entries.is_empty() {
        return Err(Error::format(path, "manifest lists no bands"));
    }
    Ok(entries)
}

fn is_csv(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn decode(raw: f64, config: &IngestConfig) -> (f64, bool) {
    let missing = raw.is_nan() || config.missing_value.is_some_and(|m| raw == m);
    if missing {
        (0.0, true)
    } else if config.scale == 1.0 && config.offset == 0.0 {
        (raw, false)
    } else {
        (raw * config.scale + config.offset, false)
    }
}

/// Reads one band; `.csv` files are parsed as grids, anything else as flat
/// little-endian binary of `config.binary_type` and `config.binary_shape`.
pub fn read_band(path: impl AsRef<Path>, config: &IngestConfig) -> Result<Band> {
    let path = path.as_ref();
    if is_csv(path) {
        read_csv_band(path, config)
    } else {
        read_binary_band(path, config)
    }
}

fn read_csv_band(path: &Path, config: &IngestConfig) -> Result<Band> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut width = None;
    let mut height = 0;
    let mut values = Vec::new();
    let mut missing = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut cols = 0;
        for cell in line.split(',') {
            let cell = cell.trim();
            let (v, m) = if cell.is_empty() || cell.eq_ignore_ascii_case("nan") {
                (0.0, true)
            } else {
                let raw: f64 = cell
                    .parse()
                    .map_err(|_| Error::format(path, format!("line {}: bad number {cell:?}", lineno + 1)))?;
                decode(raw, config)
            };
            values.push(v);
            missing.push(m);
            cols += 1;
        }
        match width {
            None => width = Some(cols),
            Some(w) if w != cols => {
                return Err(Error::Shape(format!(
                    "{}: line {} has {cols} columns, expected {w}",
                    path.display(),
                    lineno + 1
                )))
            }
            _ => {}
        }
        height += 1;
    }
    let width = width.ok_or_else(|| Error::format(path, "empty CSV band"))?;
    Band::with_mask(width, height, values, missing)
}

fn read_binary_band(path: &Path, config: &IngestConfig) -> Result<Band> {
    let (width, height) = config
        .binary_shape
        .ok_or_else(|| Error::InvalidParameter(format!("{}: binary band needs width and height", path.display())))?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let size = config.binary_type.size();
    if bytes.len() != width * height * size {
        return Err(Error::Shape(format!(
            "{}: {} bytes, expected {} for {width}x{height} {:?}",
            path.display(),
            bytes.len(),
            width * height * size,
            config.binary_type
        )));
    }
    let (values, missing) = bytes
        .chunks_exact(size)
        .map(|c| {
            let raw = match config.binary_type {
                RawType::I16 => i16::from_le_bytes([c[0], c[1]]) as f64,
                RawType::F64 => f64::from_le_bytes(c.try_into().unwrap()),
            };
            decode(raw, config)
        })
        .unzip();
    Band::with_mask(width, height, values, missing)
}

/// Builds a cube from `(path, date)` bands.
pub fn ingest(bands: &[(PathBuf, i64)], config: &IngestConfig) -> Result<RasterCube> {
    let mut dates: Vec<i64> = bands.iter().map(|(_, d)| *d).collect();
    dates.sort_unstable();
    check_dates(&dates)?;
    let layers = bands
        .iter()
        .map(|(p, d)| Ok((*d, read_band(p, config)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RasterCube::from_bands(layers)?.with_scaling(config.scale, config.offset))
}

pub fn ingest_manifest(manifest: impl AsRef<Path>, config: &IngestConfig) -> Result<RasterCube> {
    let bands: Vec<(PathBuf, i64)> = read_manifest(manifest, 1)?
        .into_iter()
        .map(|mut e| (e.paths.remove(0), e.date))
        .collect();
    ingest(&bands, config)
}

/// Builds an NDVI cube from `(nir_path, red_path, date)` reflectance pairs.
pub fn ingest_ndvi(pairs: &[(PathBuf, PathBuf, i64)], config: &IngestConfig, fill: NdviFill) -> Result<RasterCube> {
    let mut dates: Vec<i64> = pairs.iter().map(|(_, _, d)| *d).collect();
    dates.sort_unstable();
    check_dates(&dates)?;
    let layers = pairs
        .iter()
        .map(|(nir, red, d)| {
            let nir = read_band(nir, config)?;
            let red = read_band(red, config)?;
            Ok((*d, compute_ndvi(&nir, &red, fill)?))
        })
        .collect::<Result<Vec<_>>>()?;
    RasterCube::from_bands(layers)
}

pub fn ingest_ndvi_manifest(manifest: impl AsRef<Path>, config: &IngestConfig, fill: NdviFill) -> Result<RasterCube> {
    let pairs: Vec<(PathBuf, PathBuf, i64)> = read_manifest(manifest, 2)?
        .into_iter()
        .map(|e| (e.paths[0].clone(), e.paths[1].clone(), e.date))
        .collect();
    ingest_ndvi(&pairs, config, fill)
}

/// Writes a band as a CSV grid at full precision, missing samples as empty
/// cells.
pub fn write_band_csv(band: &Band, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::with_capacity(band.values.len() * 8);
    for y in 0..band.height {
        for x in 0..band.width {
            if x > 0 {
                text.push(',');
            }
            if let Some(v) = band.get(x, y) {
                text.push_str(&format!("{v:?}"));
            }
        }
        text.push('\n');
    }
    write_atomically(path, |f| f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e)))
}

/// Reads a probe: one value per line.
pub fn read_probe_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::format(path, format!("line {}: bad probe value {:?}", i + 1, l.trim())))
        })
        .collect()
}
