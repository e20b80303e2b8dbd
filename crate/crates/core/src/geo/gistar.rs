use serde::{Deserialize, Serialize};

use super::{GeoError, HexGrid, Result, AXIAL_DIRECTIONS};

/// Significance class of a cell's Gi* z-score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HotspotClass {
    #[serde(rename = "cold99")]
    Cold99,
    #[serde(rename = "cold95")]
    Cold95,
    #[serde(rename = "cold90")]
    Cold90,
    #[serde(rename = "ns")]
    NotSignificant,
    #[serde(rename = "hot90")]
    Hot90,
    #[serde(rename = "hot95")]
    Hot95,
    #[serde(rename = "hot99")]
    Hot99,
    #[serde(rename = "empty")]
    Empty,
}

impl HotspotClass {
    pub const ALL: [HotspotClass; 8] = [
        HotspotClass::Cold99,
        HotspotClass::Cold95,
        HotspotClass::Cold90,
        HotspotClass::NotSignificant,
        HotspotClass::Hot90,
        HotspotClass::Hot95,
        HotspotClass::Hot99,
        HotspotClass::Empty,
    ];

    /// Two-sided standard normal critical values for 99/95/90 %.
    pub fn from_z(z: f64, count: usize) -> Self {
        if count == 0 {
            return HotspotClass::Empty;
        }
        let a = z.abs();
        let hot = z > 0.0;
        match (a >= 2.576, a >= 1.96, a >= 1.645, hot) {
            (true, _, _, true) => HotspotClass::Hot99,
            (true, _, _, false) => HotspotClass::Cold99,
            (_, true, _, true) => HotspotClass::Hot95,
            (_, true, _, false) => HotspotClass::Cold95,
            (_, _, true, true) => HotspotClass::Hot90,
            (_, _, true, false) => HotspotClass::Cold90,
            _ => HotspotClass::NotSignificant,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            HotspotClass::Cold99 => "cold99",
            HotspotClass::Cold95 => "cold95",
            HotspotClass::Cold90 => "cold90",
            HotspotClass::NotSignificant => "ns",
            HotspotClass::Hot90 => "hot90",
            HotspotClass::Hot95 => "hot95",
            HotspotClass::Hot99 => "hot99",
            HotspotClass::Empty => "empty",
        }
    }

    pub fn is_cold(&self) -> bool {
        matches!(self, HotspotClass::Cold90 | HotspotClass::Cold95 | HotspotClass::Cold99)
    }

    pub fn is_hot(&self) -> bool {
        matches!(self, HotspotClass::Hot90 | HotspotClass::Hot95 | HotspotClass::Hot99)
    }
}

/// Binary contiguity weights among the cells that hold data: each cell is
/// its own neighbour plus up to six adjacent data cells.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightsMatrix {
    pub n: usize,
    /// Grid index of each data cell.
    pub cells: Vec<usize>,
    /// Per data cell, positions (into `cells`) with weight 1, self first.
    pub neighbors: Vec<Vec<usize>>,
}

impl WeightsMatrix {
    pub fn contiguity(grid: &HexGrid) -> Self {
        let cells: Vec<usize> = (0..grid.cells.len())
            .filter(|&i| grid.cells[i].count > 0)
            .collect();
        let mut position = vec![usize::MAX; grid.cells.len()];
        for (pos, &i) in cells.iter().enumerate() {
            position[i] = pos;
        }
        let neighbors = cells
            .iter()
            .enumerate()
            .map(|(pos, &i)| {
                let c = &grid.cells[i];
                let mut row = vec![pos];
                row.extend(AXIAL_DIRECTIONS.iter().filter_map(|(dq, dr)| {
                    let j = grid.cell_index(c.q + dq, c.r + dr)?;
                    (position[j] != usize::MAX).then_some(position[j])
                }));
                row
            })
            .collect();
        Self {
            n: cells.len(),
            cells,
            neighbors,
        }
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        if self.neighbors[i].contains(&j) {
            1.0
        } else {
            0.0
        }
    }
}

/// Getis-Ord Gi* z-scores for the data cells; empty cells keep `z = None`.
///
/// A field with no spread has a zero numerator everywhere and gets `z = 0`,
/// as does a cell whose neighbourhood is the whole data set.
pub fn gi_star(mut grid: HexGrid, weights: &WeightsMatrix) -> Result<HexGrid> {
    let n = weights.n;
    if n < 2 {
        return Err(GeoError::TooFewCells(n));
    }
    let x: Vec<f64> = weights
        .cells
        .iter()
        .map(|&i| grid.cells[i].value.unwrap_or(f64::NAN))
        .collect();
    if x.iter().any(|v| !v.is_finite()) {
        return Err(GeoError::DegenerateField("non-finite cell value".into()));
    }
    let nf = n as f64;
    let mean = x.iter().sum::<f64>() / nf;
    let s = (x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf).sqrt();
    let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let flat = s <= 1e-12 * scale;

    for (pos, &cell) in weights.cells.iter().enumerate() {
        let row = &weights.neighbors[pos];
        let sw = row.len() as f64;
        let local: f64 = row.iter().map(|&j| x[j]).sum();
        let spread = (nf * sw - sw * sw) / (nf - 1.0);
        let z = if flat || spread <= 0.0 {
            0.0
        } else {
            (local - mean * sw) / (s * spread.sqrt())
        };
        grid.cells[cell].z = Some(z);
    }
    Ok(grid)
}

/// Sets each cell's class from its z-score and count.
pub fn classify_hotspots(mut grid: HexGrid) -> HexGrid {
    for c in &mut grid.cells {
        c.cls = match c.z {
            Some(z) => HotspotClass::from_z(z, c.count),
            None if c.count > 0 => HotspotClass::NotSignificant,
            None => HotspotClass::Empty,
        };
    }
    grid
}
