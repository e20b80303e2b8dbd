use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Geotag;

use super::{GeoError, HotspotClass, Result};

pub const MAX_CELLS: usize = 1_000_000;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Axial offsets of the six neighbours of a pointy-top hex.
pub const AXIAL_DIRECTIONS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BBox {
    pub min_lon: f64,
    pub min_lat: f64,
    pub max_lon: f64,
    pub max_lat: f64,
}

impl BBox {
    pub fn new(min_lon: f64, min_lat: f64, max_lon: f64, max_lat: f64) -> Self {
        Self { min_lon, min_lat, max_lon, max_lat }
    }

    /// Continental United States.
    pub fn conus() -> Self {
        Self::new(-125.0, 24.0, -66.0, 50.0)
    }

    pub fn contains(&self, lon: f64, lat: f64) -> bool {
        (self.min_lon..=self.max_lon).contains(&lon) && (self.min_lat..=self.max_lat).contains(&lat)
    }

    pub fn is_degenerate(&self) -> bool {
        let finite = [self.min_lon, self.min_lat, self.max_lon, self.max_lat]
            .iter()
            .all(|v| v.is_finite());
        !finite || self.min_lon >= self.max_lon || self.min_lat >= self.max_lat
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HexCell {
    pub q: i32,
    pub r: i32,
    /// `[lon, lat]`.
    pub center: [f64; 2],
    /// Mean score of the joined documents.
    pub value: Option<f64>,
    pub count: usize,
    pub z: Option<f64>,
    pub cls: HotspotClass,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HexGrid {
    pub bbox: BBox,
    /// Circumradius in degrees.
    pub cell_size: f64,
    pub cells: Vec<HexCell>,
    /// Points dropped by the last join because they fell outside the box.
    pub skipped: usize,
    #[serde(skip)]
    index: HashMap<(i32, i32), usize>,
}

impl PartialEq for HexGrid {
    fn eq(&self, other: &Self) -> bool {
        self.bbox == other.bbox
            && self.cell_size == other.cell_size
            && self.cells == other.cells
            && self.skipped == other.skipped
    }
}

impl HexGrid {
    pub fn cell_index(&self, q: i32, r: i32) -> Option<usize> {
        if self.index.is_empty() && !self.cells.is_empty() {
            // deserialized grids carry no index
            return self.cells.iter().position(|c| c.q == q && c.r == r);
        }
        self.index.get(&(q, r)).copied()
    }

    pub fn cell(&self, q: i32, r: i32) -> Option<&HexCell> {
        self.cell_index(q, r).map(|i| &self.cells[i])
    }

    /// Cell containing the point, if the grid has one there.
    pub fn locate(&self, lon: f64, lat: f64) -> Option<usize> {
        let (q, r) = point_to_axial(lon, lat, self.cell_size);
        self.cell_index(q, r)
    }

    pub fn data_cells(&self) -> impl Iterator<Item = &HexCell> {
        self.cells.iter().filter(|c| c.count > 0)
    }

    pub fn rebuild_index(&mut self) {
        self.index = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| ((c.q, c.r), i))
            .collect();
    }
}

pub fn axial_to_point(q: i32, r: i32, size: f64) -> (f64, f64) {
    let x = size * SQRT3 * (f64::from(q) + f64::from(r) / 2.0);
    let y = size * 1.5 * f64::from(r);
    (x, y)
}

/// Rounds fractional axial coordinates to the nearest hex via cube rounding.
pub fn axial_round(fq: f64, fr: f64) -> (i32, i32) {
    let fs = -fq - fr;
    let (mut q, mut r, s) = (fq.round(), fr.round(), fs.round());
    let (dq, dr, ds) = ((q - fq).abs(), (r - fr).abs(), (s - fs).abs());
    if dq > dr && dq > ds {
        q = -r - s;
    } else if dr > ds {
        r = -q - s;
    }
    (q as i32, r as i32)
}

pub fn point_to_axial(x: f64, y: f64, size: f64) -> (i32, i32) {
    let fq = (SQRT3 / 3.0 * x - y / 3.0) / size;
    let fr = (2.0 / 3.0 * y) / size;
    axial_round(fq, fr)
}

pub fn axial_distance(a: (i32, i32), b: (i32, i32)) -> i32 {
    let dq = a.0 - b.0;
    let dr = a.1 - b.1;
    dq.abs().max(dr.abs()).max((dq + dr).abs())
}

/// Vertices of a pointy-top hexagon, counter-clockwise from the lower right.
pub fn hex_corners(cx: f64, cy: f64, size: f64) -> [(f64, f64); 6] {
    std::array::from_fn(|i| {
        let angle = (60.0 * i as f64 - 30.0).to_radians();
        (cx + size * angle.cos(), cy + size * angle.sin())
    })
}

fn project(points: &[(f64, f64)], axis: (f64, f64)) -> (f64, f64) {
    points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        let d = p.0 * axis.0 + p.1 * axis.1;
        (lo.min(d), hi.max(d))
    })
}

/// Separating-axis test; touching counts as intersecting.
fn hex_meets_box(corners: &[(f64, f64); 6], bbox: &BBox, eps: f64) -> bool {
    let rect = [
        (bbox.min_lon, bbox.min_lat),
        (bbox.max_lon, bbox.min_lat),
        (bbox.max_lon, bbox.max_lat),
        (bbox.min_lon, bbox.max_lat),
    ];
    let axes = [
        (1.0, 0.0),
        (0.0, 1.0),
        (0.5, SQRT3 / 2.0),
        (-0.5, SQRT3 / 2.0),
    ];
    axes.iter().all(|&axis| {
        let (a_lo, a_hi) = project(corners, axis);
        let (b_lo, b_hi) = project(&rect, axis);
        a_hi >= b_lo - eps && b_hi >= a_lo - eps
    })
}

/// Every hexagon of the lattice that meets the box, in row-major order
/// (`r` then `q` ascending).
pub fn make_hex_grid(bbox: BBox, cell_size: f64) -> Result<HexGrid> {
    if bbox.is_degenerate() {
        return Err(GeoError::DegenerateBBox);
    }
    if !(cell_size > 0.0 && cell_size.is_finite()) {
        return Err(GeoError::InvalidCellSize);
    }
    let width = cell_size * SQRT3;
    let r_lo = ((bbox.min_lat - cell_size) / (1.5 * cell_size)).floor() as i64;
    let r_hi = ((bbox.max_lat + cell_size) / (1.5 * cell_size)).ceil() as i64;
    let est = (r_hi - r_lo + 1) as f64 * ((bbox.max_lon - bbox.min_lon) / width + 3.0);
    if est > MAX_CELLS as f64 {
        return Err(GeoError::TooManyCells);
    }
    let eps = 1e-12 * cell_size;
    let mut cells = Vec::new();
    for r in r_lo..=r_hi {
        let half = r as f64 / 2.0;
        let q_lo = ((bbox.min_lon - width) / width - half).floor() as i64;
        let q_hi = ((bbox.max_lon + width) / width - half).ceil() as i64;
        for q in q_lo..=q_hi {
            let (q, r) = (q as i32, r as i32);
            let (cx, cy) = axial_to_point(q, r, cell_size);
            if hex_meets_box(&hex_corners(cx, cy, cell_size), &bbox, eps) {
                cells.push(HexCell {
                    q,
                    r,
                    center: [cx, cy],
                    value: None,
                    count: 0,
                    z: None,
                    cls: HotspotClass::Empty,
                });
            }
        }
    }
    let mut grid = HexGrid {
        bbox,
        cell_size,
        cells,
        skipped: 0,
        index: HashMap::new(),
    };
    grid.rebuild_index();
    Ok(grid)
}

/// Assigns each point to its cell and stores the mean score and count.
/// Previous join results and statistics are cleared first.
pub fn spatial_join(mut grid: HexGrid, points: &[(Geotag, f64)]) -> HexGrid {
    let mut sums = vec![0.0f64; grid.cells.len()];
    for c in &mut grid.cells {
        c.count = 0;
        c.value = None;
        c.z = None;
        c.cls = HotspotClass::Empty;
    }
    grid.skipped = 0;
    for (tag, score) in points {
        let hit = if grid.bbox.contains(tag.lon, tag.lat) && score.is_finite() {
            grid.locate(tag.lon, tag.lat)
        } else {
            None
        };
        match hit {
            Some(i) => {
                sums[i] += score;
                grid.cells[i].count += 1;
            }
            None => grid.skipped += 1,
        }
    }
    if grid.skipped > 0 {
        log::warn!("spatial join skipped {} points outside the grid", grid.skipped);
    }
    for (c, s) in grid.cells.iter_mut().zip(sums) {
        if c.count > 0 {
            c.value = Some(s / c.count as f64);
            c.cls = HotspotClass::NotSignificant;
        }
    }
    grid
}
