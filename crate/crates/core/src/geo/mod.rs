//! Hexagonal binning of geotagged scores and Getis-Ord Gi* hot-spot analysis.
//!
//! Geometry is planar in degrees: longitude is x and latitude is y. Cells are
//! pointy-top hexagons addressed by axial coordinates `(q, r)` on a lattice
//! anchored at (0, 0), so the same point always lands in the same cell for a
//! given cell size regardless of the grid extent.

mod geojson;
mod gistar;
mod hex;

use thiserror::Error;

pub use geojson::{Feature, FeatureCollection, Geometry, CellProperties};
pub use gistar::{classify_hotspots, gi_star, HotspotClass, WeightsMatrix};
pub use hex::{
    axial_distance, axial_round, axial_to_point, hex_corners, make_hex_grid, point_to_axial,
    spatial_join, BBox, HexCell, HexGrid, AXIAL_DIRECTIONS, MAX_CELLS,
};

#[derive(Debug, Error)]
pub enum GeoError {
    #[error("bounding box is empty or inverted")]
    DegenerateBBox,
    #[error("cell size must be positive and finite")]
    InvalidCellSize,
    #[error("grid would need more than {MAX_CELLS} cells")]
    TooManyCells,
    #[error("need at least 2 cells with data, found {0}")]
    TooFewCells(usize),
    #[error("degenerate field: {0}")]
    DegenerateField(String),
}

pub type Result<T, E = GeoError> = std::result::Result<T, E>;

/// Grid, join, Gi* and classification in one pass.
pub fn hotspot_analysis(
    bbox: BBox,
    cell_size: f64,
    points: &[(crate::Geotag, f64)],
) -> Result<HexGrid> {
    let grid = spatial_join(make_hex_grid(bbox, cell_size)?, points);
    let weights = WeightsMatrix::contiguity(&grid);
    Ok(classify_hotspots(gi_star(grid, &weights)?))
}
