//! Command-line driver: ingest, ndvi, symbolize, stats, query, export.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::io::write_atomically;
use crate::series::{TimeSeries, DEFAULT_EPSILON_STD};
use crate::sits::cube::{CubeEncoding, FillPolicy, RasterCube, MAGIC};
use crate::sits::ingest::{
    format_iso_date, ingest_manifest, ingest_ndvi_manifest, read_probe_csv, write_band_csv, IngestConfig, RawType,
};
use crate::sits::ndvi::NdviFill;
use crate::sits::symbolic::{query_mindist, symbolize_cube, word_histogram, znormalized_distance, SymbolicRaster};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_FORMAT: i32 = 4;
pub const EXIT_PARAMETER: i32 = 5;
pub const EXIT_DATA: i32 = 6;
pub const EXIT_INCOMPATIBLE: i32 = 7;

const EXIT_CODES_HELP: &str = "\
Exit codes:
  0  success
  2  usage error (unknown flag, missing argument)
  3  I/O error (missing or unreadable input, unwritable output)
  4  malformed input file (bad magic, truncated cube, bad manifest or CSV)
  5  invalid parameter (word length, alphabet size, epsilon, workers, radius)
  6  data invariant violated (shape mismatch, duplicate dates, NDVI out of range)
  7  incompatible inputs (probe length or word parameters do not match)";

#[derive(Debug, Parser)]
#[command(name = "sits", version, about = "Symbolic (SAX) representation of satellite image time series")]
#[command(after_help = EXIT_CODES_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stack dated NDVI bands listed in a manifest into a cube file
    Ingest(IngestArgs),
    /// Compute NDVI from NIR/red band pairs and stack them into a cube file
    Ndvi(IngestArgs),
    /// Turn every pixel series of a cube into a SAX word
    Symbolize(SymbolizeArgs),
    /// Word histogram of a symbolic raster
    Stats(StatsArgs),
    /// Pixels whose word is within MINDIST radius of a probe series
    Query(QueryArgs),
    /// Write one band (CSV grid) or one pixel series (date,value CSV) of a cube
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FillArg {
    Reject,
    Interp,
}

impl From<FillArg> for FillPolicy {
    fn from(f: FillArg) -> Self {
        match f {
            FillArg::Reject => FillPolicy::Reject,
            FillArg::Interp => FillPolicy::Interpolate,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RawArg {
    I16,
    F64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum EncodingArg {
    F64,
    Int16,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StatsFormat {
    Text,
    Csv,
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Manifest: `path,YYYY-MM-DD` per band (`nir,red,YYYY-MM-DD` for ndvi)
    #[arg(long)]
    manifest: PathBuf,
    /// Cube file to write
    #[arg(long)]
    out: PathBuf,
    /// Multiplier applied to raw samples
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    /// Added to raw samples after scaling
    #[arg(long, default_value_t = 0.0)]
    offset: f64,
    /// Raw value marking a missing sample
    #[arg(long)]
    missing_value: Option<f64>,
    /// Width of flat binary bands
    #[arg(long)]
    width: Option<usize>,
    /// Height of flat binary bands
    #[arg(long)]
    height: Option<usize>,
    /// Element type of flat binary bands
    #[arg(long, value_enum, default_value = "i16")]
    raw_type: RawArg,
    /// Sample encoding of the output cube (int16 uses scale 1e-4, fill -3000)
    #[arg(long, value_enum, default_value = "f64")]
    encoding: EncodingArg,
}

#[derive(Debug, Args)]
struct SymbolParams {
    /// Word length w
    #[arg(short = 'w', long = "word-length")]
    word_length: Option<usize>,
    /// Alphabet size a, 2..=26
    #[arg(short = 'a', long = "alphabet-size")]
    alphabet_size: Option<usize>,
    /// Series with standard deviation at or below this are treated as constant
    #[arg(long, default_value_t = DEFAULT_EPSILON_STD)]
    epsilon_std: f64,
    /// Missing-sample policy
    #[arg(long, value_enum, default_value = "reject")]
    fill: FillArg,
    /// Worker threads (default: machine parallelism)
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct SymbolizeArgs {
    /// Cube file
    #[arg(long)]
    input: PathBuf,
    /// Symbolic raster file to write
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    params: SymbolParams,
}

#[derive(Debug, Args)]
struct StatsArgs {
    /// Symbolic raster file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: StatsFormat,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Cube file (needs -w and -a) or symbolic raster file
    #[arg(long)]
    input: PathBuf,
    /// Probe series, one value per line
    #[arg(long)]
    probe: PathBuf,
    /// Maximum MINDIST between a pixel word and the probe word
    #[arg(long)]
    radius: f64,
    /// With a cube input, keep only hits within the true z-normalized distance
    #[arg(long)]
    refine: bool,
    /// Write to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: SymbolParams,
}

#[derive(Debug, Args)]
struct ExportArgs {
    /// Cube file
    #[arg(long)]
    input: PathBuf,
    /// Output CSV file
    #[arg(long)]
    out: PathBuf,
    /// Band index to export as a CSV grid
    #[arg(long, conflicts_with = "pixel")]
    band: Option<usize>,
    /// Pixel `x,y` to export as a `date,value` series
    #[arg(long, value_parser = parse_pixel)]
    pixel: Option<(usize, usize)>,
}

fn parse_pixel(s: &str) -> std::result::Result<(usize, usize), String> {
    let (x, y) = s.split_once(',').ok_or("expected x,y")?;
    Ok((
        x.trim().parse().map_err(|_| format!("bad x {x:?}"))?,
        y.trim().parse().map_err(|_| format!("bad y {y:?}"))?,
    ))
}

/// Maps an error to its documented exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::Format { .. } => EXIT_FORMAT,
        Error::InvalidPartition { .. }
        | Error::InvalidAlphabet(_)
        | Error::InvalidSymbol { .. }
        | Error::InvalidParameter(_) => EXIT_PARAMETER,
        Error::Shape(_)
        | Error::DuplicateDate(_)
        | Error::OutOfRange { .. }
        | Error::NegativeReflectance { .. }
        | Error::InvalidSeries(_)
        | Error::OutOfBounds { .. }
        | Error::PixelRejected { .. } => EXIT_DATA,
        Error::IncompatibleWords { .. } | Error::IncompatibleProbe { .. } => EXIT_INCOMPATIBLE,
    }
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Ingest(args) => cmd_ingest(args, false),
        Command::Ndvi(args) => cmd_ingest(args, true),
        Command::Symbolize(args) => cmd_symbolize(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Query(args) => cmd_query(args),
        Command::Export(args) => cmd_export(args),
    }
}

/// `%g`-style rendering with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    write_atomically(path, |f| f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e)))
}

fn ingest_config(args: &IngestArgs) -> Result<IngestConfig> {
    let binary_shape = match (args.width, args.height) {
        (Some(w), Some(h)) => Some((w, h)),
        (None, None) => None,
        _ => return Err(Error::InvalidParameter("--width and --height go together".into())),
    };
    Ok(IngestConfig {
        scale: args.scale,
        offset: args.offset,
        missing_value: args.missing_value,
        binary_shape,
        binary_type: match args.raw_type {
            RawArg::I16 => RawType::I16,
            RawArg::F64 => RawType::F64,
        },
    })
}

fn cmd_ingest(args: IngestArgs, ndvi: bool) -> Result<()> {
    let config = ingest_config(&args)?;
    let cube = if ndvi {
        ingest_ndvi_manifest(&args.manifest, &config, NdviFill::Mask)?
    } else {
        ingest_manifest(&args.manifest, &config)?
    };
    let encoding = match args.encoding {
        EncodingArg::F64 => CubeEncoding::float64(),
        EncodingArg::Int16 => CubeEncoding::modis_ndvi(),
    };
    cube.write(&args.out, encoding)?;
    println!(
        "wrote {}: {}x{} pixels, {} bands ({} to {}), {} missing samples",
        args.out.display(),
        cube.width(),
        cube.height(),
        cube.bands(),
        format_iso_date(cube.band_dates()[0]),
        format_iso_date(*cube.band_dates().last().unwrap()),
        cube.missing_count()
    );
    Ok(())
}

fn require_params(params: &SymbolParams) -> Result<(usize, usize)> {
    match (params.word_length, params.alphabet_size) {
        (Some(w), Some(a)) => Ok((w, a)),
        _ => Err(Error::InvalidParameter(
            "-w/--word-length and -a/--alphabet-size are required".into(),
        )),
    }
}

fn symbolize_file(input: &Path, params: &SymbolParams) -> Result<(RasterCube, SymbolicRaster)> {
    let (w, a) = require_params(params)?;
    let cube = RasterCube::read(input)?.with_fill_policy(params.fill.into());
    let raster = symbolize_cube(&cube, w, a, params.epsilon_std, params.workers)?;
    for f in raster.failures().iter().take(10) {
        eprintln!("warning: pixel ({}, {}) rejected: {}", f.x, f.y, f.reason);
    }
    if raster.failures().len() > 10 {
        eprintln!("warning: {} more pixels rejected", raster.failures().len() - 10);
    }
    Ok((cube, raster))
}

fn cmd_symbolize(args: SymbolizeArgs) -> Result<()> {
    let (_, raster) = symbolize_file(&args.input, &args.params)?;
    raster.write(&args.out)?;
    let degenerate = raster.degenerate_flags().iter().filter(|&&d| d).count();
    println!(
        "wrote {}: {} words (w={} a={} n={}), {} degenerate, {} rejected",
        args.out.display(),
        raster.len(),
        raster.params().1,
        raster.params().2,
        raster.params().0,
        degenerate,
        raster.failures().len()
    );
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let raster = SymbolicRaster::read(&args.input)?;
    let hist = word_histogram(&raster);
    let mut text = String::new();
    match args.format {
        StatsFormat::Csv => {
            text.push_str("word,count\n");
            for (word, count) in &hist {
                writeln!(text, "{word},{count}").unwrap();
            }
        }
        StatsFormat::Text => {
            let width = hist.keys().map(String::len).max().unwrap_or(0);
            for (word, count) in &hist {
                writeln!(text, "{word:<width$}  {count}").unwrap();
            }
        }
    }
    match &args.out {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_cube_file(path: &Path) -> Result<bool> {
    use std::io::Read;
    let mut f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut magic = [0u8; 4];
    Ok(f.read(&mut magic).map_err(|e| Error::io(path, e))? == 4 && &magic == MAGIC)
}

fn cmd_query(args: QueryArgs) -> Result<()> {
    let probe = TimeSeries::from_values(read_probe_csv(&args.probe)?)?;
    let cube_input = is_cube_file(&args.input)?;
    let (cube, raster) = if cube_input {
        let (cube, raster) = symbolize_file(&args.input, &args.params)?;
        (Some(cube), raster)
    } else {
        (None, SymbolicRaster::read(&args.input)?)
    };
    let hits = query_mindist(&raster, &probe, args.radius)?;
    let to_file = args.out.is_some();
    let num = |v: f64| if to_file { format!("{v}") } else { sig6(v) };

    let mut text = String::new();
    match &cube {
        Some(cube) => {
            text.push_str("x,y,mindist,euclidean\n");
            for h in &hits {
                let d = znormalized_distance(cube, h.x, h.y, &probe, args.params.epsilon_std)?;
                if args.refine && d > args.radius {
                    continue;
                }
                writeln!(text, "{},{},{},{}", h.x, h.y, num(h.mindist), num(d)).unwrap();
            }
        }
        None => {
            text.push_str("x,y,mindist\n");
            for h in &hits {
                writeln!(text, "{},{},{}", h.x, h.y, num(h.mindist)).unwrap();
            }
        }
    }
    match &args.out {
        Some(path) => write_text(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_export(args: ExportArgs) -> Result<()> {
    let cube = RasterCube::read(&args.input)?;
    match (args.band, args.pixel) {
        (Some(b), None) => write_band_csv(&cube.band(b)?, &args.out),
        (None, Some((x, y))) => {
            let (values, missing) = cube.pixel_samples(x, y)?;
            let mut text = String::from("date,value\n");
            for ((d, v), m) in cube.band_dates().iter().zip(values).zip(missing) {
                if m {
                    writeln!(text, "{},", format_iso_date(*d)).unwrap();
                } else {
                    writeln!(text, "{},{v}", format_iso_date(*d)).unwrap();
                }
            }
            write_text(&args.out, &text)
        }
        _ => Err(Error::InvalidParameter("export needs exactly one of --band or --pixel".into())),
    }
}
