//! The regular-tetrahedron sweep: volume and edge length of the
//! equal-angle family as the common dihedral angle runs over
//! `[0, arccos(1/3))`.
//!
//! The family starts at the ideal right-angled octahedron (angle 0, all
//! vertices ultraideal and the truncation octahedral), passes the regular
//! ideal tetrahedron at `pi/3`, and shrinks to a point as the angle
//! approaches the Euclidean limit `arccos(1/3)`.

use std::f64::consts::FRAC_PI_3;

use hypervol_core::shape::AngleLabel;
use hypervol_core::volume::tetra_volume;
use hypervol_core::{DihedralAngles, TetrahedronShape, VertexClass, VolumeError};
use serde_json::{json, Value};

use crate::format::{csv_f64, json_f64};

/// Gap kept below the Euclidean limit `arccos(1/3)`: the volume vanishes
/// there and the realization degenerates, so the grid stops just short.
pub const SWEEP_DELTA: f64 = 1e-3;

/// One sampled shape of the regular family.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    /// Common dihedral angle.
    pub theta: f64,
    /// Hyperbolic volume.
    pub volume: f64,
    /// Common edge length (`+inf` at the ideal angle `pi/3`).
    pub edge_length: f64,
    /// Common vertex class.
    pub vertex_class: VertexClass,
}

/// The sweep grid: `steps` equally spaced angles on
/// `[0, arccos(1/3) - SWEEP_DELTA]`, with the grid point nearest `pi/3`
/// snapped exactly onto it so the ideal shape is always sampled.
pub fn regular_grid(steps: usize) -> Vec<f64> {
    assert!(steps >= 2, "a sweep needs at least two grid points");
    let theta_max = (1.0f64 / 3.0).acos() - SWEEP_DELTA;
    let mut grid: Vec<f64> = (0..steps)
        .map(|k| theta_max * k as f64 / (steps - 1) as f64)
        .collect();
    let nearest = (0..steps)
        .min_by(|&a, &b| {
            let da = (grid[a] - FRAC_PI_3).abs();
            let db = (grid[b] - FRAC_PI_3).abs();
            da.partial_cmp(&db).expect("grid distances are finite")
        })
        .expect("grid is nonempty");
    grid[nearest] = FRAC_PI_3;
    grid
}

/// Evaluates the regular family on [`regular_grid`].
pub fn regular_sweep(steps: usize) -> Result<Vec<SweepRow>, VolumeError> {
    regular_grid(steps)
        .into_iter()
        .map(|theta| {
            let angles = DihedralAngles::uniform(theta)?;
            let volume = tetra_volume(&angles)?.volume();
            let shape = TetrahedronShape::realize(&angles)?;
            Ok(SweepRow {
                theta,
                volume,
                edge_length: shape.edge_length(AngleLabel::A).value(),
                vertex_class: shape.classification().class(0),
            })
        })
        .collect()
}

/// Renders rows as CSV with the fixed header
/// `theta,volume,edge_length,vertex_class`.
pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta,volume,edge_length,vertex_class\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            csv_f64(row.theta),
            csv_f64(row.volume),
            csv_f64(row.edge_length),
            row.vertex_class,
        ));
    }
    out
}

/// JSON form: `{"rows": [{theta, volume, edge_length, vertex_class}, ..]}`.
pub fn rows_json(rows: &[SweepRow]) -> Value {
    json!({
        "rows": rows
            .iter()
            .map(|r| {
                json!({
                    "theta": r.theta,
                    "volume": r.volume,
                    "edge_length": json_f64(r.edge_length),
                    "vertex_class": r.vertex_class.to_string(),
                })
            })
            .collect::<Vec<_>>(),
    })
}
