//! The per-shape report: volume, saddle points, Gram determinant, vertex
//! classes, and edge lengths, with text / CSV / JSON renderers.
//!
//! The JSON object always carries exactly the fields
//! `{volume, z1, z2, det_g, classes, lengths, warnings}`; infinite edge
//! lengths serialize as `null` in JSON and `"inf"` in CSV.

use hypervol_core::shape::AngleLabel;
use hypervol_core::volume::tetra_volume;
use hypervol_core::{Complex64, DihedralAngles, TetrahedronShape, VertexClass, VolumeError};
use serde_json::{json, Value};

use crate::format::{csv_f64, json_f64, text_complex, text_f64};

/// Everything the `volume` command prints about one shape.
#[derive(Debug, Clone)]
pub struct ShapeReport {
    /// The input angles, in radians.
    pub angles: [f64; 6],
    /// Hyperbolic volume.
    pub volume: f64,
    /// First saddle point of `U`.
    pub z1: Complex64,
    /// Second saddle point of `U`.
    pub z2: Complex64,
    /// Determinant of the Gram matrix.
    pub det_g: f64,
    /// Vertex classes in vertex order 0..4.
    pub classes: [VertexClass; 4],
    /// Edge lengths in label order A..F; `+inf` at ideal endpoints.
    pub lengths: [f64; 6],
    /// Rendered numerical warnings (usually empty).
    pub warnings: Vec<String>,
}

impl ShapeReport {
    /// Evaluates the volume formula and the realization for `angles`.
    pub fn compute(angles: &DihedralAngles) -> Result<(Self, TetrahedronShape), VolumeError> {
        let result = tetra_volume(angles)?;
        let shape = TetrahedronShape::realize(angles)?;
        let classes = core::array::from_fn(|i| shape.classification().class(i));
        let lengths = shape.edge_lengths().map(|e| e.value());
        let report = Self {
            angles: angles.as_array(),
            volume: result.volume(),
            z1: result.saddles().z1,
            z2: result.saddles().z2,
            det_g: result.det_gram(),
            classes,
            lengths,
            warnings: result.warnings().iter().map(|w| w.to_string()).collect(),
        };
        Ok((report, shape))
    }

    /// Human-readable multi-line report.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("volume  = {}\n", text_f64(self.volume)));
        out.push_str(&format!("z1      = {}\n", text_complex(self.z1)));
        out.push_str(&format!("z2      = {}\n", text_complex(self.z2)));
        out.push_str(&format!("det G   = {}\n", text_f64(self.det_g)));
        let classes: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("classes = {}\n", classes.join(" ")));
        for (label, l) in AngleLabel::ALL.iter().zip(self.lengths) {
            out.push_str(&format!("length {label} = {}\n", text_f64(l)));
        }
        out
    }

    /// The fixed-field JSON object.
    pub fn to_json(&self) -> Value {
        json!({
            "volume": self.volume,
            "z1": {"re": self.z1.re, "im": self.z1.im},
            "z2": {"re": self.z2.re, "im": self.z2.im},
            "det_g": self.det_g,
            "classes": self.classes.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "lengths": Value::Object(
                AngleLabel::ALL
                    .iter()
                    .zip(self.lengths)
                    .map(|(label, l)| (label.to_string(), json_f64(l)))
                    .collect(),
            ),
            "warnings": self.warnings,
        })
    }

    /// CSV column names matching [`Self::csv_row`].
    pub fn csv_header() -> &'static str {
        "volume,z1_re,z1_im,z2_re,z2_im,det_g,\
         class_0,class_1,class_2,class_3,\
         length_A,length_B,length_C,length_D,length_E,length_F"
    }

    /// One byte-stable CSV row (17 significant digits, `inf` for infinite
    /// lengths).
    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            csv_f64(self.volume),
            csv_f64(self.z1.re),
            csv_f64(self.z1.im),
            csv_f64(self.z2.re),
            csv_f64(self.z2.im),
            csv_f64(self.det_g),
        ];
        cols.extend(self.classes.iter().map(|c| c.to_string()));
        cols.extend(self.lengths.iter().map(|&l| csv_f64(l)));
        cols.join(",")
    }
}
