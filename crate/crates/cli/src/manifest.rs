//! JSON manifests for the subcommands. Unknown keys are rejected.

use serde::Deserialize;
use solgeo_core::curves::{CurveTree, Edge, PunctureType, Region, Vertex};
use solgeo_core::lattice::{build_manifold, ManifoldKind, SolManifold};
use solgeo_core::snf::Mat2;

use crate::CliError;

fn default_scale() -> f64 {
    1.0
}

fn default_tol() -> f64 {
    1e-10
}

fn default_samples() -> usize {
    100
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindField {
    Suspension,
    Sapphire,
}

impl From<KindField> for ManifoldKind {
    fn from(k: KindField) -> ManifoldKind {
        match k {
            KindField::Suspension => ManifoldKind::Suspension,
            KindField::Sapphire => ManifoldKind::Sapphire,
        }
    }
}

/// `{"matrix": [[a,b],[c,d]], "scale": ε, "kind": "suspension"|"sapphire"}`
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldManifest {
    pub matrix: [[i64; 2]; 2],
    #[serde(default = "default_scale")]
    pub scale: f64,
    #[serde(default)]
    pub kind: Option<KindField>,
    /// Census length cutoff (census manifest only).
    #[serde(default)]
    pub cutoff: Option<f64>,
    /// Type-B periods to include (census manifest only).
    #[serde(default)]
    pub periods: Option<u32>,
    /// Period (periodic manifest only).
    #[serde(default)]
    pub n: Option<u32>,
    /// Classes for the scale chooser.
    #[serde(default)]
    pub classes: Option<Vec<[i64; 2]>>,
}

impl ManifoldManifest {
    pub fn matrix(&self) -> Mat2 {
        self.matrix
    }

    pub fn build(&self) -> Result<SolManifold, CliError> {
        let kind = self.kind.map(ManifoldKind::from).unwrap_or(ManifoldKind::Suspension);
        Ok(build_manifold(self.matrix, self.scale, kind)?)
    }
}

/// Initial-state manifest for `flow` and `monodromy`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateManifest {
    pub position: [f64; 3],
    pub momentum: [f64; 3],
    pub time: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "lowercase")]
enum RegionField {
    Inside,
    Outside,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexField {
    region: RegionField,
    #[serde(default = "default_degree")]
    degree: u32,
    #[serde(default)]
    maslov: i64,
}

fn default_degree() -> u32 {
    1
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase", tag = "kind")]
enum EdgeField {
    Node {
        ends: [usize; 2],
        puncture: PunctureField,
        #[serde(default)]
        cz: Option<i64>,
    },
    Puncture {
        vertex: usize,
        #[serde(default)]
        puncture: Option<PunctureField>,
        #[serde(default)]
        cz: Option<i64>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub enum PunctureField {
    A,
    B,
}

impl From<PunctureField> for PunctureType {
    fn from(p: PunctureField) -> PunctureType {
        match p {
            PunctureField::A => PunctureType::A,
            PunctureField::B => PunctureType::B,
        }
    }
}

/// Tree manifest for `curve`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveManifest {
    pub k: i64,
    vertices: Vec<VertexField>,
    edges: Vec<EdgeField>,
    #[serde(default)]
    pub n0: Option<u32>,
}

impl CurveManifest {
    pub fn to_tree(&self) -> CurveTree {
        let vertices = self
            .vertices
            .iter()
            .map(|v| Vertex {
                region: match v.region {
                    RegionField::Inside => Region::InsideU0,
                    RegionField::Outside => Region::OutsideU0,
                },
                degree: v.degree,
                maslov: v.maslov,
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| match *e {
                EdgeField::Node { ends, puncture, cz } => Edge::Node {
                    ends: (ends[0], ends[1]),
                    ptype: puncture.into(),
                    cz_override: cz,
                },
                EdgeField::Puncture { vertex, puncture, cz } => Edge::Puncture {
                    vertex,
                    ptype: puncture.map(Into::into),
                    cz_override: cz,
                },
            })
            .collect();
        CurveTree { k: self.k, vertices, edges }
    }
}

/// Read and schema-validate a JSON manifest, reporting the position of any
/// violation.
pub fn parse_manifest<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {path}: {e}")))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("{path}: {e}")))
}

/// Parse `a,b,c,d` (row-major) into a 2×2 integer matrix.
pub fn parse_matrix_arg(s: &str) -> Result<Mat2, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Validation(format!(
            "matrix must be 4 comma-separated integers, got `{s}`"
        )));
    }
    let mut vals = [0i64; 4];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p
            .parse()
            .map_err(|_| CliError::Validation(format!("bad matrix entry `{p}`")))?;
    }
    Ok([[vals[0], vals[1]], [vals[2], vals[3]]])
}

/// Parse `s11,s12,s21,s22` into four reals.
pub fn parse_matrix_entries4(s: &str) -> Result<[f64; 4], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Validation(format!(
            "expected 4 comma-separated reals, got `{s}`"
        )));
    }
    let mut vals = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        vals[i] = p.parse().map_err(|_| CliError::Validation(format!("bad entry `{p}`")))?;
    }
    Ok(vals)
}

/// Parse `x,y,z` into a coordinate triple.
pub fn parse_triple(s: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Validation(format!("expected 3 comma-separated reals, got `{s}`")));
    }
    let mut vals = [0.0; 3];
    for (i, p) in parts.iter().enumerate() {
        vals[i] =
            p.parse().map_err(|_| CliError::Validation(format!("bad coordinate `{p}`")))?;
    }
    Ok(vals)
}

/// Parse `m:n,m:n,...` into lattice classes.
pub fn parse_classes(s: &str) -> Result<Vec<(i64, i64)>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (m, n) = p
                .split_once(':')
                .ok_or_else(|| CliError::Validation(format!("class `{p}` is not m:n")))?;
            Ok((
                m.trim()
                    .parse()
                    .map_err(|_| CliError::Validation(format!("bad class entry `{m}`")))?,
                n.trim()
                    .parse()
                    .map_err(|_| CliError::Validation(format!("bad class entry `{n}`")))?,
            ))
        })
        .collect()
}
