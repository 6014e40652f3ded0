//! Matrix and spectral-model file formats, region and point-cloud export.
//!
//! Input files are JSON objects of one of three shapes:
//!
//! ```text
//! {"rows": 2, "cols": 2, "entries": [[0, 0], [1, 0], [0, 0], [0, 0]]}
//! {"atoms": [{"re": 1, "im": 0, "mult": "inf"}, {"re": 0, "im": 1, "mult": 2}]}
//! {"shift": 4}
//! ```
//!
//! Matrix entries are `[re, im]` pairs in row-major order.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ConvexRegion;
use crate::linalg::{c, shift, zeros, ComplexMatrix, C64};
use crate::ranges::{Multiplicity, SpectralAtom, SpectralModel};
use crate::report::fmt_sig17;

/// `{"rows": n, "cols": m, "entries": [[re, im], …]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.rows * self.cols {
            return Err(Error::Shape(format!(
                "{}x{} matrix needs {} entries, found {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        let mut m = zeros(self.rows, self.cols);
        for (idx, [re, im]) in self.entries.iter().enumerate() {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::NonFinite);
            }
            m[(idx / self.cols, idx % self.cols)] = c(*re, *im);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
enum MultJson {
    Count(u64),
    Tag(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomJson {
    re: f64,
    im: f64,
    mult: MultJson,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct InputFile {
    rows: Option<usize>,
    cols: Option<usize>,
    entries: Option<Vec<[f64; 2]>>,
    atoms: Option<Vec<AtomJson>>,
    shift: Option<usize>,
}

/// Parsed input: a matrix or a spectral model.
#[derive(Debug, Clone, PartialEq)]
pub enum InputData {
    Matrix(ComplexMatrix),
    Model(SpectralModel),
}

impl InputData {
    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        match self {
            InputData::Matrix(m) => Ok(m),
            InputData::Model(_) => Err(Error::InvalidArgument(
                "this command needs a matrix, not a spectral model".into(),
            )),
        }
    }
}

fn parse_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Parses the JSON input formats described in the module docs.
pub fn parse_input(text: &str) -> Result<InputData> {
    let file: InputFile = serde_json::from_str(text).map_err(parse_error)?;
    let whole = |message: String| Error::Parse {
        line: 1,
        column: 1,
        message,
    };
    match (&file.entries, &file.atoms, file.shift) {
        (Some(entries), None, None) => {
            let (Some(rows), Some(cols)) = (file.rows, file.cols) else {
                return Err(whole("matrix input needs \"rows\" and \"cols\"".into()));
            };
            let m = MatrixJson {
                rows,
                cols,
                entries: entries.clone(),
            };
            Ok(InputData::Matrix(m.to_matrix()?))
        }
        (None, Some(atoms), None) if file.rows.is_none() && file.cols.is_none() => {
            let mut out = Vec::with_capacity(atoms.len());
            for (i, a) in atoms.iter().enumerate() {
                let multiplicity = match &a.mult {
                    MultJson::Count(0) => {
                        return Err(whole(format!("atom {i}: multiplicity must be positive")))
                    }
                    MultJson::Count(m) => Multiplicity::Finite(*m),
                    MultJson::Tag(t) if t == "inf" => Multiplicity::Infinite,
                    MultJson::Tag(t) => {
                        return Err(whole(format!(
                        "atom {i}: multiplicity must be a positive integer or \"inf\", got {t:?}"
                    )))
                    }
                };
                out.push(SpectralAtom {
                    point: c(a.re, a.im),
                    multiplicity,
                });
            }
            Ok(InputData::Model(SpectralModel::new(out)?))
        }
        (None, None, Some(n)) if file.rows.is_none() && file.cols.is_none() => {
            if n == 0 {
                return Err(whole("shift size must be positive".into()));
            }
            Ok(InputData::Matrix(shift(n)))
        }
        _ => Err(whole(
            "expected exactly one of a matrix (rows, cols, entries), \"atoms\" or \"shift\"".into(),
        )),
    }
}

pub fn parse_matrix_file(path: &Path) -> Result<InputData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_input(&text)
}

/// Region support table with columns `theta,s` (17 significant digits).
pub fn region_csv(region: &ConvexRegion) -> String {
    let mut out = String::from("theta,s\n");
    for &(t, s) in &region.samples {
        let _ = writeln!(out, "{},{}", fmt_sig17(t), fmt_sig17(s));
    }
    out
}

#[derive(Serialize)]
struct RegionJson<'a> {
    empty: bool,
    vertices: Vec<[f64; 2]>,
    #[serde(serialize_with = "samples_repr")]
    samples: &'a [(f64, f64)],
}

fn samples_repr<S: serde::Serializer>(
    samples: &&[(f64, f64)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use crate::report::float::to_repr;
    samples
        .iter()
        .map(|&(t, v)| [to_repr(t), to_repr(v)])
        .collect::<Vec<_>>()
        .serialize(s)
}

/// `{"empty": …, "vertices": [[re, im], …], "samples": [[θ, s], …]}`.
pub fn region_json(region: &ConvexRegion) -> String {
    let doc = RegionJson {
        empty: region.empty,
        vertices: region.vertices.iter().map(|z| [z.re, z.im]).collect(),
        samples: &region.samples,
    };
    serde_json::to_string_pretty(&doc).expect("region is serializable")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgOptions {
    /// Draw the unit circle (useful when the operator is a contraction).
    pub unit_circle: bool,
}

const SVG_SIZE: u32 = 800;

/// 800×800 SVG with a unit-square view box: the region polygon, an axis
/// cross through the origin and optionally the unit circle, autoscaled
/// with a 10% margin.
pub fn region_svg(region: &ConvexRegion, opts: SvgOptions) -> String {
    let mut extent = 0.0_f64;
    for v in &region.vertices {
        extent = extent.max(v.re.abs()).max(v.im.abs());
    }
    if opts.unit_circle {
        extent = extent.max(1.0);
    }
    if extent <= 0.0 {
        extent = 1.0;
    }
    // Data square [-extent, extent]² maps onto [0.1, 0.9]².
    let scale = 0.4 / extent;
    let map = |z: C64| (0.5 + z.re * scale, 0.5 - z.im * scale);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 1 1">"#
    );
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="1" height="1" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r##"  <path d="M 0 0.5 H 1 M 0.5 0 V 1" stroke="#999999" stroke-width="0.002" fill="none"/>"##
    );
    if opts.unit_circle {
        let _ = writeln!(
            out,
            r##"  <circle cx="0.5" cy="0.5" r="{:.6}" stroke="#3366cc" stroke-width="0.002" stroke-dasharray="0.01 0.01" fill="none"/>"##,
            scale
        );
    }
    match region.vertices.len() {
        _ if region.empty => {
            let _ = writeln!(out, "  <!-- empty region -->");
        }
        1 => {
            let (x, y) = map(region.vertices[0]);
            let _ = writeln!(
                out,
                r##"  <circle cx="{x:.6}" cy="{y:.6}" r="0.004" fill="#cc3333"/>"##
            );
        }
        _ => {
            let pts: Vec<String> = region
                .vertices
                .iter()
                .map(|&v| {
                    let (x, y) = map(v);
                    format!("{x:.6},{y:.6}")
                })
                .collect();
            let _ = writeln!(
                out,
                r##"  <polygon points="{}" fill="#cc3333" fill-opacity="0.35" stroke="#cc3333" stroke-width="0.003"/>"##,
                pts.join(" ")
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Point cloud with columns `re,im`.
pub fn points_csv(points: &[C64]) -> String {
    let mut out = String::from("re,im\n");
    for z in points {
        let _ = writeln!(out, "{},{}", fmt_sig17(z.re), fmt_sig17(z.im));
    }
    out
}
