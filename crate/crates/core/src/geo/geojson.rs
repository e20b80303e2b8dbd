use serde::{Deserialize, Serialize};

use super::{hex_corners, HexGrid, HotspotClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCollection {
    #[serde(rename = "type")]
    pub kind: String,
    pub features: Vec<Feature>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Feature {
    #[serde(rename = "type")]
    pub kind: String,
    pub geometry: Geometry,
    pub properties: CellProperties,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    #[serde(rename = "type")]
    pub kind: String,
    /// One closed ring of `[lon, lat]` positions.
    pub coordinates: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellProperties {
    pub q: i32,
    pub r: i32,
    pub value: Option<f64>,
    pub count: usize,
    pub z: Option<f64>,
    pub cls: HotspotClass,
}

impl From<&HexGrid> for FeatureCollection {
    fn from(grid: &HexGrid) -> Self {
        let features = grid
            .cells
            .iter()
            .map(|c| {
                let mut ring: Vec<[f64; 2]> = hex_corners(c.center[0], c.center[1], grid.cell_size)
                    .iter()
                    .map(|&(x, y)| [x, y])
                    .collect();
                ring.push(ring[0]);
                Feature {
                    kind: "Feature".into(),
                    geometry: Geometry {
                        kind: "Polygon".into(),
                        coordinates: vec![ring],
                    },
                    properties: CellProperties {
                        q: c.q,
                        r: c.r,
                        value: c.value,
                        count: c.count,
                        z: c.z,
                        cls: c.cls,
                    },
                }
            })
            .collect();
        FeatureCollection {
            kind: "FeatureCollection".into(),
            features,
        }
    }
}
