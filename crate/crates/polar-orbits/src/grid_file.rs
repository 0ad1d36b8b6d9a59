//! User-supplied survey grids (`survey --grid file.json`).
//!
//! ```json
//! {
//!   "points": [{ "star": "lighter", "b": 4.0, "w": 0.05 }],
//!   "grids": [{ "star": "heavier", "b_values": [2.0, 8.0], "w_fractions": [0.1, 0.5] }]
//! }
//! ```
//!
//! Either key may be omitted. Explicit points need not lie inside the stable
//! region; their `fraction` is computed from the stability boundary.

use serde::Deserialize;

use polar_core::equilibrium::stability_extent;
use polar_core::survey::{build_grid, GridPoint, GridSpec};
use polar_core::{Error, Result, Star};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointEntry {
    pub star: Star,
    pub b: f64,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    #[serde(default)]
    pub points: Vec<PointEntry>,
    #[serde(default)]
    pub grids: Vec<GridSpec>,
}

impl GridFile {
    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Every point described by the file, explicit points first.
    pub fn points(&self) -> Result<Vec<GridPoint>> {
        let mut out = Vec::new();
        for p in &self.points {
            if !(p.w > 0.0 && p.w < 1.0) || !(p.b >= 1.0) || !p.b.is_finite() {
                return Err(Error::Domain("grid points need 0 < w < 1 and finite b >= 1"));
            }
            let distance = match p.star {
                Star::Lighter => p.w,
                Star::Heavier => 1.0 - p.w,
            };
            let fraction = distance / stability_extent(p.star, p.b)?;
            out.push(GridPoint { star: p.star, b: p.b, w: p.w, fraction });
        }
        for spec in &self.grids {
            out.extend(build_grid(spec)?);
        }
        if out.is_empty() {
            return Err(Error::Domain("grid file lists no points"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_points_and_grids() {
        let text = r#"{"points": [{"star": "lighter", "b": 4.0, "w": 0.05}],
                       "grids": [{"star": "heavier", "b_values": [2.0], "w_fractions": [0.1, 0.5]}]}"#;
        let pts = GridFile::parse(text).unwrap().points().unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0].w, 0.05);
        assert!(pts[0].fraction > 0.0 && pts[0].fraction < 1.0);
        assert_eq!(pts[2].star, Star::Heavier);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(GridFile::parse(r#"{"pts": []}"#).is_err());
        assert!(GridFile::parse("{}").unwrap().points().is_err());
        let bad = GridFile::parse(r#"{"points": [{"star": "lighter", "b": 0.5, "w": 0.1}]}"#).unwrap();
        assert!(bad.points().is_err());
    }
}
