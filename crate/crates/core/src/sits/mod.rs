//! Satellite image time series: the raster cube, NDVI, ingestion and
//! whole-cube symbolization.

pub mod cube;
pub mod ingest;
pub mod ndvi;
pub mod symbolic;

pub use cube::{Band, CubeEncoding, FillPolicy, RasterCube};
pub use ingest::{ingest, ingest_manifest, ingest_ndvi, ingest_ndvi_manifest, IngestConfig, RawType};
pub use ndvi::{compute_ndvi, NdviFill};
pub use symbolic::{
    query_mindist, symbolize_cube, word_histogram, znormalized_distance, PixelFailure, PixelStatus, QueryHit,
    SymbolicRaster,
};
