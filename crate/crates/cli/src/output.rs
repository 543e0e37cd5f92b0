//! Report structures and their JSON/CSV rendering.

use serde::Serialize;
use solgeo_core::census::{ClosedGeodesicA, ClosedGeodesicB};
use solgeo_core::flow::{ABranch, PhaseState};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Render a serializable report either as pretty JSON or as CSV rows
/// provided by the caller.
pub fn emit<T: Serialize>(
    format: Format,
    report: &T,
    csv: impl FnOnce() -> String,
) -> Result<(), CliError> {
    match format {
        Format::Json => {
            let text = serde_json::to_string_pretty(report)
                .map_err(|e| CliError::Numerical(e.to_string()))?;
            println!("{text}");
        }
        Format::Csv => print!("{}", csv()),
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct HomologyOut {
    pub matrix: [[i64; 2]; 2],
    pub h0: String,
    pub h1: String,
    pub h2: String,
    pub h3: String,
    pub invariant_factors: [Vec<i64>; 4],
    pub torsion_order_h1: i64,
    pub fiber_translation_group_order: u64,
}

impl HomologyOut {
    pub fn csv(&self) -> String {
        let mut out = String::from("group,description\n");
        for (name, value) in
            [("H0", &self.h0), ("H1", &self.h1), ("H2", &self.h2), ("H3", &self.h3)]
        {
            out.push_str(&format!("{name},{value}\n"));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct CensusRecordOut {
    #[serde(rename = "type")]
    pub kind: String,
    pub class: String,
    pub length: f64,
    pub height: Option<f64>,
    pub index: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branch: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CensusOut {
    pub scale: f64,
    pub cutoff: f64,
    pub records: Vec<CensusRecordOut>,
    /// Record counts per unit-length bucket `[n, n+1)`.
    pub counts_per_length_bucket: std::collections::BTreeMap<String, usize>,
}

impl CensusOut {
    pub fn new(
        scale: f64,
        cutoff: f64,
        a_records: &[ClosedGeodesicA],
        b_records: &[(ClosedGeodesicB, f64)],
    ) -> CensusOut {
        let mut records: Vec<CensusRecordOut> = a_records
            .iter()
            .map(|r| CensusRecordOut {
                kind: String::from("A"),
                class: format!("{}:{}", r.class.0, r.class.1),
                length: r.length,
                height: Some(r.height),
                index: r.morse_bott_index,
                branch: Some(String::from(match r.branch {
                    ABranch::F1 => "f1",
                    ABranch::F2 => "f2",
                })),
            })
            .collect();
        records.extend(b_records.iter().map(|(r, len)| CensusRecordOut {
            kind: String::from("B"),
            class: format!(
                "{}@{}/{}:{}/{}",
                r.period, r.base_point[0].num, r.base_point[0].den, r.base_point[1].num,
                r.base_point[1].den
            ),
            length: *len,
            height: None,
            index: 0,
            branch: None,
        }));
        let mut counts = std::collections::BTreeMap::new();
        for r in &records {
            let bucket = format!("{}", r.length.floor() as i64);
            *counts.entry(bucket).or_insert(0) += 1;
        }
        CensusOut { scale, cutoff, records, counts_per_length_bucket: counts }
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("type,class,length,height,index\n");
        for r in &self.records {
            let height = r.height.map(|h| format!("{h:.17e}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:.17e},{},{}\n",
                r.kind, r.class, r.length, height, r.index
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct PeriodicOut {
    pub matrix: [[i64; 2]; 2],
    pub n: u32,
    pub count: u64,
    pub points: Vec<String>,
}

impl PeriodicOut {
    pub fn csv(&self) -> String {
        let mut out = String::from("x,y\n");
        for p in &self.points {
            let (x, y) = p.split_once(';').unwrap_or((p, ""));
            out.push_str(&format!("{x},{y}\n"));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub p_x: f64,
    pub p_y: f64,
    pub p_z: f64,
    pub energy: f64,
}

impl TrajectoryRow {
    pub fn from_state(t: f64, s: &PhaseState) -> Result<TrajectoryRow, CliError> {
        Ok(TrajectoryRow {
            t,
            x: s.position.x,
            y: s.position.y,
            z: s.position.z,
            p_x: s.momentum[0],
            p_y: s.momentum[1],
            p_z: s.momentum[2],
            energy: s.energy()?,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct FlowOut {
    pub rows: Vec<TrajectoryRow>,
}

impl FlowOut {
    pub fn csv(&self) -> String {
        let mut out = String::from("t,x,y,z,p_x,p_y,p_z,H\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                r.t, r.x, r.y, r.z, r.p_x, r.p_y, r.p_z, r.energy
            ));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct EigenvalueOut {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Serialize)]
pub struct MonodromyOut {
    pub time: f64,
    pub matrix: [[f64; 6]; 6],
    pub eigenvalues: Vec<EigenvalueOut>,
    pub trace: f64,
    pub det: f64,
    pub symplectic_defect: f64,
}

impl MonodromyOut {
    pub fn csv(&self) -> String {
        let mut out = String::from("row,c0,c1,c2,c3,c4,c5\n");
        for (i, row) in self.matrix.iter().enumerate() {
            out.push_str(&format!(
                "{i},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                row[0], row[1], row[2], row[3], row[4], row[5]
            ));
        }
        out.push_str("eigen_re,eigen_im\n");
        for e in &self.eigenvalues {
            out.push_str(&format!("{:.17e},{:.17e}\n", e.re, e.im));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct CrossingOut {
    pub t: f64,
    pub sign: i32,
}

#[derive(Debug, Serialize)]
pub struct IndexOut {
    pub kind: String,
    pub index: i64,
    pub crossings: Vec<CrossingOut>,
}

impl IndexOut {
    pub fn csv(&self) -> String {
        let mut out = format!("kind,index\n{},{}\nt,sign\n", self.kind, self.index);
        for c in &self.crossings {
            out.push_str(&format!("{:.12e},{}\n", c.t, c.sign));
        }
        out
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyBoundOut {
    pub grid: usize,
    pub min_value: f64,
    pub argmin_k: f64,
    pub min_e: f64,
    pub max_k_times_sqrt: f64,
    pub floor: f64,
    pub bound_satisfied: bool,
}

impl VerifyBoundOut {
    pub fn csv(&self) -> String {
        format!(
            "grid,min_value,argmin_k,min_E,max_K_sqrt,floor,bound_satisfied\n{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}\n",
            self.grid,
            self.min_value,
            self.argmin_k,
            self.min_e,
            self.max_k_times_sqrt,
            self.floor,
            self.bound_satisfied
        )
    }
}

#[derive(Debug, Serialize)]
pub struct EulerOut {
    pub vertices: usize,
    pub edges: usize,
    pub trees: usize,
    pub leaves: usize,
    pub branch_vertices: usize,
    pub branch_excess: i64,
    pub euler_identity_holds: bool,
    pub chain_holds: bool,
}

#[derive(Debug, Serialize)]
pub struct CurveOut {
    pub string_like: bool,
    pub component_indices: Vec<i64>,
    pub total_index: i64,
    pub freedom_budget: i64,
    pub required_constraints: i64,
    pub identity_gap: i64,
    pub rigid: bool,
    pub status: String,
    pub inside_euler: EulerOut,
}

impl CurveOut {
    pub fn csv(&self) -> String {
        let mut out = String::from("field,value\n");
        out.push_str(&format!("string_like,{}\n", self.string_like));
        out.push_str(&format!("total_index,{}\n", self.total_index));
        out.push_str(&format!("freedom_budget,{}\n", self.freedom_budget));
        out.push_str(&format!("required_constraints,{}\n", self.required_constraints));
        out.push_str(&format!("identity_gap,{}\n", self.identity_gap));
        out.push_str(&format!("rigid,{}\n", self.rigid));
        out.push_str(&format!("status,{}\n", self.status));
        out
    }
}

#[derive(Debug, Serialize)]
pub struct ChooseScaleOut {
    pub epsilon: f64,
    pub max_base_length: f64,
    pub classes: Vec<String>,
}

impl ChooseScaleOut {
    pub fn csv(&self) -> String {
        format!("epsilon,max_base_length\n{:.17e},{:.17e}\n", self.epsilon, self.max_base_length)
    }
}
