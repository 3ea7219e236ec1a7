//! Machine-readable reports: one structured JSON document per run, with
//! exact rationals serialized as `numerator/denominator` strings.  All maps
//! are ordered, so identical inputs and flags produce identical bytes.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Serialize)]
pub struct Report {
    pub engine: &'static str,
    pub version: &'static str,
    pub command: String,
    pub spec: SpecInfo,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub blocks: Option<Vec<BlockInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<GeneratorInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<CertificateInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<CohomologyInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fan: Option<FanInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub segre: Option<SegreInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gauge: Option<GaugeInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbits: Option<Vec<OrbitInfo>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub miniversal: Option<MiniversalInfo>,
}

#[derive(Serialize)]
pub struct SpecInfo {
    pub name: String,
    /// SHA-256 of the spec file bytes, hex.
    pub digest: String,
    pub classes: Vec<(String, i64)>,
}

#[derive(Serialize)]
pub struct Params {
    pub weight_min: i64,
    pub degrees: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_power: Option<u32>,
}

#[derive(Serialize)]
pub struct BlockInfo {
    pub degree: i64,
    pub weight: i64,
    pub dim: usize,
    pub basis: Vec<String>,
}

#[derive(Serialize)]
pub struct GeneratorInfo {
    pub label: String,
    pub weight: i64,
    pub content: Vec<i64>,
    pub polynomial: String,
}

#[derive(Serialize)]
pub struct IdealInfo {
    pub coordinates: Vec<CoordInfo>,
    pub generator_count: usize,
}

#[derive(Serialize)]
pub struct CoordInfo {
    pub name: String,
    pub content: Vec<i64>,
    pub weight: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meaning: Option<String>,
}

#[derive(Serialize)]
pub struct CertificateInfo {
    pub query: String,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power: Option<u32>,
    pub combination: Vec<String>,
}

#[derive(Serialize)]
pub struct CohomologyInfo {
    pub degree: i64,
    pub weight: i64,
    pub block_dim: usize,
    pub dim: usize,
    pub representatives: Vec<String>,
}

#[derive(Serialize)]
pub struct ObstructionInfo {
    pub defect: String,
    pub class_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub square_witness: Option<String>,
}

#[derive(Serialize)]
pub struct FanInfo {
    pub success: bool,
    pub non_mixed_generators: Vec<String>,
    pub a_coordinates: Vec<String>,
    pub b_coordinates: Vec<String>,
    /// product name -> nilpotency power (absent = not nilpotent in bound).
    pub powers: BTreeMap<String, Option<u32>>,
}

#[derive(Serialize)]
pub struct SegreInfo {
    pub c: usize,
    pub minor_count: usize,
    pub images_independent: bool,
    pub minors_match: bool,
}

#[derive(Serialize)]
pub struct GaugeInfo {
    /// Coefficients of the integrated path η(t), per power of t.
    pub eta: BTreeMap<u32, String>,
    pub zeta: BTreeMap<u32, String>,
    pub defect: BTreeMap<u32, String>,
    pub flow_equation_holds: bool,
    pub conservation_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta_at: Option<(String, String)>,
}

#[derive(Serialize)]
pub struct OrbitInfo {
    pub point: Vec<String>,
    pub label: String,
    pub rank: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discriminant_class: Option<String>,
    pub degenerates_to: Vec<String>,
}

#[derive(Serialize)]
pub struct MiniversalInfo {
    pub cutoff: u32,
    pub strict: bool,
    pub h_dims: [usize; 3],
    pub tangent_coordinates: Vec<CoordInfo>,
    pub generators: Vec<GeneratorInfo>,
    pub master_identity_holds: bool,
    pub jacobi_residuals_zero: bool,
}
