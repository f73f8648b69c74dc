//! JSON file formats and report serialization.
//!
//! Complex numbers are `[re, im]` pairs; every float is printed with 17
//! significant digits (`{:.16e}`), which round-trips doubles bit-exactly.
//! Serialization uses struct field order and BTreeMap keys throughout, so a
//! given value always produces identical bytes.

use crate::detect::{DetectionResult, SeparabilityReport};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupData, GroupViolation, Irrep, IrrepTable, TableViolation};
use crate::harmonic::{FourierBlocks, GroupFunction};
use crate::linalg::{CMat, CVec};
use crate::maps::{
    KrausTerm, MapBlocks, MapClassification, MapForm, PdMapSpec, PointMass, SuperOp,
};
use crate::positivity::{GnsData, PdVerdict, PurityReport};
use crate::ProductGroup;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error as ThisError;

type Cx = [f64; 2];
type MatrixJson = Vec<Vec<Cx>>;

// ---- float formatting ------------------------------------------------------

/// Compact JSON formatter printing every f64 with 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + Write,
    {
        debug_assert!(value.is_finite());
        write!(writer, "{value:.16e}")
    }
}

/// Serialize with the 17-significant-digit float format. Deterministic bytes
/// for a given value.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SciFormatter);
    value
        .serialize(&mut ser)
        .expect("serialization cannot fail");
    String::from_utf8(out).expect("JSON is UTF-8")
}

// ---- load errors -----------------------------------------------------------

/// Errors surfaced by file loaders, classified for the CLI exit-code contract:
/// unreadable input and shape/domain problems are distinct from malformed JSON.
#[derive(Debug, ThisError)]
pub enum LoadError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed file `{path}` at line {line}, column {column}: {msg}")]
    Malformed {
        path: String,
        line: usize,
        column: usize,
        msg: String,
    },
    #[error(transparent)]
    Semantic(#[from] Error),
}

pub type LoadResult<T> = std::result::Result<T, LoadError>;

fn parse_file<T: for<'de> Deserialize<'de>>(path: &Path) -> LoadResult<T> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| LoadError::Malformed {
        path: path.display().to_string(),
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })
}

// ---- complex/matrix helpers -------------------------------------------------

fn cx(z: Complex64) -> Cx {
    [z.re, z.im]
}

fn from_cx(p: Cx) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn matrix_to_json(m: &CMat) -> MatrixJson {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| cx(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMat> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Data("ragged matrix".into()));
    }
    let mut m = CMat::zeros(nrows, ncols);
    for (i, row) in rows.iter().enumerate() {
        for (j, &p) in row.iter().enumerate() {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::NonFinite(i * ncols + j));
            }
            m[(i, j)] = from_cx(p);
        }
    }
    Ok(m)
}

fn vector_to_json(v: &CVec) -> Vec<Cx> {
    v.iter().map(|&z| cx(z)).collect()
}

// ---- group files ------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct IrrepFile {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<MatrixJson>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub mul: Vec<u32>,
    pub inverse: Vec<u32>,
    pub identity: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub irreps: Vec<IrrepFile>,
}

impl GroupFile {
    pub fn from_data(data: &GroupData) -> Self {
        GroupFile {
            order: data.order(),
            mul: data.group.mul_table().to_vec(),
            inverse: data.group.inv_table().to_vec(),
            identity: data.group.identity() as u32,
            labels: data.group.labels().map(|l| l.to_vec()),
            irreps: data
                .table
                .irreps
                .iter()
                .map(|ir| IrrepFile {
                    label: ir.label.clone(),
                    dim: ir.dim,
                    matrices: ir.matrices.iter().map(matrix_to_json).collect(),
                })
                .collect(),
        }
    }

    pub fn into_data(self, id: &str) -> Result<GroupData> {
        let group = FiniteGroup::new(
            self.order,
            self.mul,
            self.inverse,
            self.identity,
            self.labels,
        )?;
        let mut irreps = Vec::with_capacity(self.irreps.len());
        for ir in self.irreps {
            let matrices = ir
                .matrices
                .iter()
                .map(matrix_from_json)
                .collect::<Result<Vec<_>>>()?;
            if matrices.len() != self.order {
                return Err(Error::Data(format!(
                    "irrep `{}` has {} matrices for order {}",
                    ir.label,
                    matrices.len(),
                    self.order
                )));
            }
            for m in &matrices {
                if m.nrows() != ir.dim || m.ncols() != ir.dim {
                    return Err(Error::IrrepShape {
                        irrep: ir.label.clone(),
                        declared: ir.dim,
                        rows: m.nrows(),
                        cols: m.ncols(),
                    });
                }
            }
            irreps.push(Irrep {
                label: ir.label,
                dim: ir.dim,
                matrices,
            });
        }
        Ok(GroupData {
            id: id.to_string(),
            group,
            table: IrrepTable { irreps },
        })
    }
}

pub fn group_to_json(data: &GroupData) -> String {
    to_json(&GroupFile::from_data(data))
}

pub fn load_group_file(path: &Path) -> LoadResult<GroupData> {
    let file: GroupFile = parse_file(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "group".into());
    Ok(file.into_data(&id)?)
}

// ---- function files -----------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DomainSpec {
    Single(String),
    Pair([String; 2]),
}

impl DomainSpec {
    pub fn matches_single(&self, data: &GroupData) -> bool {
        match self {
            DomainSpec::Single(s) => *s == data.id,
            DomainSpec::Pair(_) => false,
        }
    }

    pub fn matches_product(&self, pg: &ProductGroup) -> bool {
        match self {
            DomainSpec::Single(s) => *s == pg.data.id,
            DomainSpec::Pair([l, r]) => *l == pg.left.id && *r == pg.right.id,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValuesSpec {
    Flat(Vec<Cx>),
    Grid(Vec<Vec<Cx>>),
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FunctionFile {
    pub domain: DomainSpec,
    pub values: ValuesSpec,
}

impl FunctionFile {
    pub fn from_single(data: &GroupData, f: &GroupFunction) -> Self {
        FunctionFile {
            domain: DomainSpec::Single(data.id.clone()),
            values: ValuesSpec::Flat(f.values.iter().map(|&z| cx(z)).collect()),
        }
    }

    pub fn from_product(pg: &ProductGroup, f: &GroupFunction) -> Self {
        let n2 = pg.right.order();
        FunctionFile {
            domain: DomainSpec::Pair([pg.left.id.clone(), pg.right.id.clone()]),
            values: ValuesSpec::Grid(
                f.values
                    .chunks(n2)
                    .map(|row| row.iter().map(|&z| cx(z)).collect())
                    .collect(),
            ),
        }
    }

    /// Flatten to a [`GroupFunction`]; grids are read row-major, matching the
    /// product element index g₁·|G₂| + g₂.
    pub fn into_function(self) -> Result<GroupFunction> {
        let flat: Vec<Cx> = match self.values {
            ValuesSpec::Flat(v) => v,
            ValuesSpec::Grid(rows) => {
                let width = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != width) {
                    return Err(Error::Data("ragged value grid".into()));
                }
                rows.into_iter().flatten().collect()
            }
        };
        let f = GroupFunction::new(flat.into_iter().map(from_cx).collect());
        f.check_finite()?;
        Ok(f)
    }
}

pub fn load_function_file(path: &Path) -> LoadResult<FunctionFile> {
    parse_file(path)
}

// ---- blocks files ---------------------------------------------------------------

/// A blocks file is a JSON map from irrep label (comma-joined pair for
/// products) to the block matrix. Absent labels mean zero blocks.
pub type BlocksFile = BTreeMap<String, MatrixJson>;

pub fn blocks_to_file(blocks: &FourierBlocks, data: &GroupData) -> BlocksFile {
    data.table
        .irreps
        .iter()
        .zip(&blocks.blocks)
        .map(|(ir, b)| (ir.label.clone(), matrix_to_json(b)))
        .collect()
}

pub fn blocks_from_file(file: &BlocksFile, data: &GroupData) -> Result<FourierBlocks> {
    let mut blocks = FourierBlocks::zeros(data);
    for (label, rows) in file {
        let idx = data.table.index_of(label)?;
        let m = matrix_from_json(rows)?;
        let dim = data.table.irreps[idx].dim;
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::BlockShape {
                block: label.clone(),
                rows: m.nrows(),
                cols: m.ncols(),
                expected: dim,
            });
        }
        blocks.blocks[idx] = m;
    }
    Ok(blocks)
}

pub fn load_blocks_file(path: &Path) -> LoadResult<BlocksFile> {
    parse_file(path)
}

// ---- state files ---------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct StateFile {
    /// Pair of factor irrep labels naming the product block.
    pub block: [String; 2],
    pub matrix: MatrixJson,
}

impl StateFile {
    pub fn new(pg: &ProductGroup, block: usize, rho: &CMat) -> Self {
        let (a, b) = pg.pairs[block];
        StateFile {
            block: [
                pg.left.table.irreps[a].label.clone(),
                pg.right.table.irreps[b].label.clone(),
            ],
            matrix: matrix_to_json(rho),
        }
    }

    /// Resolve against a product group: block index plus the operator.
    pub fn into_parts(self, pg: &ProductGroup) -> Result<(usize, CMat)> {
        let alpha = pg.left.table.index_of(&self.block[0])?;
        let beta = pg.right.table.index_of(&self.block[1])?;
        let block = pg.block_of(alpha, beta)?;
        let rho = matrix_from_json(&self.matrix)?;
        Ok((block, rho))
    }
}

pub fn load_state_file(path: &Path) -> LoadResult<StateFile> {
    parse_file(path)
}

// ---- map files -----------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
pub struct MassJson {
    pub weight: Cx,
    pub element: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KrausTermJson {
    pub weight: f64,
    pub masses: Vec<MassJson>,
}

/// Tagged union over the structural map forms. Block-family entries are
/// (target dim²)×(source dim²) matrices over the row-major operator bases,
/// keyed `blocks[target irrep][source irrep]`; absent entries are zero.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum MapFile {
    Inversion,
    Automorphism {
        perm: Vec<u32>,
    },
    AntiAutomorphism {
        perm: Vec<u32>,
    },
    Convolution {
        masses: Vec<MassJson>,
    },
    KrausSum {
        terms: Vec<KrausTermJson>,
    },
    BlockFamily {
        blocks: BTreeMap<String, BTreeMap<String, MatrixJson>>,
    },
}

impl MapFile {
    pub fn from_spec(spec: &PdMapSpec, source: &GroupData, target: &GroupData) -> Self {
        match &spec.form {
            MapForm::Inversion => MapFile::Inversion,
            MapForm::Automorphism(p) => MapFile::Automorphism { perm: p.clone() },
            MapForm::AntiAutomorphism(p) => MapFile::AntiAutomorphism { perm: p.clone() },
            MapForm::Convolution(masses) => MapFile::Convolution {
                masses: masses
                    .iter()
                    .map(|m| MassJson {
                        weight: cx(m.weight),
                        element: m.element,
                    })
                    .collect(),
            },
            MapForm::KrausSum(terms) => MapFile::KrausSum {
                terms: terms
                    .iter()
                    .map(|t| KrausTermJson {
                        weight: t.weight,
                        masses: t
                            .masses
                            .iter()
                            .map(|m| MassJson {
                                weight: cx(m.weight),
                                element: m.element,
                            })
                            .collect(),
                    })
                    .collect(),
            },
            MapForm::BlockFamily(fam) => {
                let mut blocks = BTreeMap::new();
                for (t, row) in fam.blocks.iter().enumerate() {
                    let mut inner = BTreeMap::new();
                    for (s, op) in row.iter().enumerate() {
                        if op.mat.iter().any(|z| z.norm() != 0.0) {
                            inner.insert(
                                source.table.irreps[s].label.clone(),
                                matrix_to_json(&op.mat),
                            );
                        }
                    }
                    if !inner.is_empty() {
                        blocks.insert(target.table.irreps[t].label.clone(), inner);
                    }
                }
                MapFile::BlockFamily { blocks }
            }
        }
    }

    pub fn into_spec(
        self,
        name: &str,
        source: &GroupData,
        target: &GroupData,
    ) -> Result<PdMapSpec> {
        let form = match self {
            MapFile::Inversion => MapForm::Inversion,
            MapFile::Automorphism { perm } => MapForm::Automorphism(perm),
            MapFile::AntiAutomorphism { perm } => MapForm::AntiAutomorphism(perm),
            MapFile::Convolution { masses } => MapForm::Convolution(
                masses
                    .into_iter()
                    .map(|m| PointMass {
                        weight: from_cx(m.weight),
                        element: m.element,
                    })
                    .collect(),
            ),
            MapFile::KrausSum { terms } => MapForm::KrausSum(
                terms
                    .into_iter()
                    .map(|t| KrausTerm {
                        weight: t.weight,
                        masses: t
                            .masses
                            .into_iter()
                            .map(|m| PointMass {
                                weight: from_cx(m.weight),
                                element: m.element,
                            })
                            .collect(),
                    })
                    .collect(),
            ),
            MapFile::BlockFamily { blocks } => {
                let mut fam = MapBlocks::zeros(source, target);
                for (t_label, row) in blocks {
                    let t = target.table.index_of(&t_label)?;
                    for (s_label, rows) in row {
                        let s = source.table.index_of(&s_label)?;
                        let mat = matrix_from_json(&rows)?;
                        let (td, sd) = (target.table.irreps[t].dim, source.table.irreps[s].dim);
                        if mat.nrows() != td * td || mat.ncols() != sd * sd {
                            return Err(Error::InvalidMap(format!(
                                "block ({t_label},{s_label}) is {}x{}, expected {}x{}",
                                mat.nrows(),
                                mat.ncols(),
                                td * td,
                                sd * sd
                            )));
                        }
                        fam.blocks[t][s] = SuperOp {
                            target_dim: td,
                            source_dim: sd,
                            mat,
                        };
                    }
                }
                MapForm::BlockFamily(fam)
            }
        };
        Ok(PdMapSpec {
            name: name.to_string(),
            form,
        })
    }
}

pub fn load_map_file(path: &Path) -> LoadResult<MapFile> {
    parse_file(path)
}

// ---- report mirrors --------------------------------------------------------------

#[derive(Debug, Serialize)]
pub struct WitnessJson {
    pub block: String,
    pub vector: Vec<Cx>,
}

#[derive(Debug, Serialize)]
pub struct PdVerdictJson {
    pub is_pd: bool,
    pub min_eigenvalue: f64,
    pub tolerance: f64,
    pub witness: Option<WitnessJson>,
    pub reason: String,
}

impl From<&PdVerdict> for PdVerdictJson {
    fn from(v: &PdVerdict) -> Self {
        PdVerdictJson {
            is_pd: v.is_pd,
            min_eigenvalue: v.min_eigenvalue,
            tolerance: v.tolerance,
            witness: v.witness.as_ref().map(|w| WitnessJson {
                block: w.block.clone(),
                vector: vector_to_json(&w.vector),
            }),
            reason: v.reason.as_str().to_string(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GnsJson {
    pub dimension: usize,
    pub representation: Vec<MatrixJson>,
    pub cyclic_vector: Vec<Cx>,
    pub max_reconstruction_error: f64,
}

impl GnsJson {
    pub fn new(gns: &GnsData, f: &GroupFunction) -> Self {
        GnsJson {
            dimension: gns.dimension,
            representation: gns.representation.iter().map(matrix_to_json).collect(),
            cyclic_vector: vector_to_json(&gns.cyclic_vector),
            max_reconstruction_error: gns.reconstruction_error(f),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PurityJson {
    pub is_pure: bool,
    pub block: Option<String>,
    pub rank: Option<usize>,
}

impl From<&PurityReport> for PurityJson {
    fn from(p: &PurityReport) -> Self {
        PurityJson {
            is_pure: p.is_pure,
            block: p.block.clone(),
            rank: p.rank,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BlockReportJson {
    pub block: String,
    pub factor_dims: [usize; 2],
    pub verdict: String,
    pub method: String,
    pub min_pt_eigenvalue: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DetectorHitJson {
    pub map: String,
    pub block: String,
    pub eigenvalue: f64,
}

#[derive(Debug, Serialize)]
pub struct SeparabilityReportJson {
    pub verdict: String,
    pub per_block: Vec<BlockReportJson>,
    pub detectors_fired: Vec<DetectorHitJson>,
    pub bound_entangled_candidate: bool,
}

impl From<&SeparabilityReport> for SeparabilityReportJson {
    fn from(r: &SeparabilityReport) -> Self {
        SeparabilityReportJson {
            verdict: r.verdict.as_str().to_string(),
            per_block: r
                .per_block
                .iter()
                .map(|b| BlockReportJson {
                    block: b.block.clone(),
                    factor_dims: [b.factor_dims.0, b.factor_dims.1],
                    verdict: b.verdict.as_str().to_string(),
                    method: b.method.as_str().to_string(),
                    min_pt_eigenvalue: b.min_pt_eigenvalue,
                })
                .collect(),
            detectors_fired: r
                .detectors_fired
                .iter()
                .map(|h| DetectorHitJson {
                    map: h.map.clone(),
                    block: h.block.clone(),
                    eigenvalue: h.eigenvalue,
                })
                .collect(),
            bound_entangled_candidate: r.bound_entangled_candidate,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PptReportJson {
    pub ppt_holds: bool,
    pub violations: Vec<DetectorHitJson>,
}

impl PptReportJson {
    pub fn new(violations: &[crate::detect::PtViolation]) -> Self {
        PptReportJson {
            ppt_holds: violations.is_empty(),
            violations: violations
                .iter()
                .map(|v| DetectorHitJson {
                    map: "theta".into(),
                    block: v.block.clone(),
                    eigenvalue: v.eigenvalue,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct DetectionJson {
    pub fired: bool,
    pub block: Option<String>,
    pub eigenvalue: Option<f64>,
}

impl From<&DetectionResult> for DetectionJson {
    fn from(d: &DetectionResult) -> Self {
        DetectionJson {
            fired: d.fired,
            block: d.block.clone(),
            eigenvalue: d.eigenvalue,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ChoiEntryJson {
    pub target: String,
    pub source: String,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleJson {
    pub target: String,
    pub source: String,
    pub state: Vec<Cx>,
    pub eigenvalue: f64,
}

#[derive(Debug, Serialize)]
pub struct ClassificationJson {
    pub is_pd: String,
    pub is_cpd: bool,
    pub choi_min_eigenvalues: Vec<ChoiEntryJson>,
    pub counterexample: Option<CounterexampleJson>,
    pub best_found_min: Option<f64>,
    pub tolerance: f64,
}

impl From<&MapClassification> for ClassificationJson {
    fn from(c: &MapClassification) -> Self {
        ClassificationJson {
            is_pd: c.is_pd.as_str().to_string(),
            is_cpd: c.is_cpd,
            choi_min_eigenvalues: c
                .choi_min_eigenvalues
                .iter()
                .map(|e| ChoiEntryJson {
                    target: e.target.clone(),
                    source: e.source.clone(),
                    min_eigenvalue: e.min_eigenvalue,
                })
                .collect(),
            counterexample: c.counterexample.as_ref().map(|ce| CounterexampleJson {
                target: ce.target.clone(),
                source: ce.source.clone(),
                state: vector_to_json(&ce.state),
                eigenvalue: ce.eigenvalue,
            }),
            best_found_min: c.best_found_min,
            tolerance: c.tolerance,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerificationJson {
    pub valid: bool,
    pub group_violations: Vec<String>,
    pub table_violations: Vec<String>,
}

impl VerificationJson {
    pub fn new(group: &[GroupViolation], table: &[TableViolation]) -> Self {
        VerificationJson {
            valid: group.is_empty() && table.is_empty(),
            group_violations: group.iter().map(|v| v.to_string()).collect(),
            table_violations: table.iter().map(|v| v.to_string()).collect(),
        }
    }
}
