//! Representation, map and block files.
//!
//! ```json
//! { "field": {"type": "Fp", "p": 5},
//!   "dims": {"0": 1, "1": 2},
//!   "mats": {"e0": [[0]], "e1": [[0, 1], [0, 0]], "a1": [[1, 0]]} }
//! ```
//!
//! `F_p` entries are integers in `[0, p)`; rational entries are strings
//! `"a/b"` (integers are accepted too). Homomorphisms use `"maps"` keyed by
//! vertex, cocycles `"blocks"` keyed by arrow.

use std::collections::BTreeMap;
use std::sync::Arc;

use qvl_core::ext::ArrowBlock;
use qvl_core::field::{format_rational, parse_rational};
use qvl_core::hom::HomMorphism;
use qvl_core::rep::{DimensionVector, Representation};
use qvl_core::{BoundQuiverPresentation, Field, Matrix, PrimeField, Rationals};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("{0}")]
    Semantic(String),
}

type Result<T> = std::result::Result<T, JsonError>;

fn semantic<T>(msg: impl Into<String>) -> Result<T> {
    Err(JsonError::Semantic(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum FieldSpec {
    Fp { p: u32 },
    Q,
}

/// Fields with a JSON encoding of their elements.
pub trait JsonField: Field {
    fn spec(&self) -> FieldSpec;
    fn entry_from_json(&self, v: &Value) -> Result<Self::Elem>;
    fn entry_to_json(&self, e: &Self::Elem) -> Value;
}

impl JsonField for PrimeField {
    fn spec(&self) -> FieldSpec {
        FieldSpec::Fp { p: self.modulus() }
    }

    fn entry_from_json(&self, v: &Value) -> Result<u32> {
        match v.as_u64() {
            Some(n) if n < u64::from(self.modulus()) => Ok(n as u32),
            _ => semantic(format!("F_{} entries must be integers in [0, {}), got {v}", self.modulus(), self.modulus())),
        }
    }

    fn entry_to_json(&self, e: &u32) -> Value {
        Value::from(*e)
    }
}

impl JsonField for Rationals {
    fn spec(&self) -> FieldSpec {
        FieldSpec::Q
    }

    fn entry_from_json(&self, v: &Value) -> Result<Self::Elem> {
        let parsed = match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => n.as_i64().map(|n| self.from_i64(n)),
            _ => None,
        };
        parsed.ok_or_else(|| JsonError::Semantic(format!("rational entries are \"a/b\" strings, got {v}")))
    }

    fn entry_to_json(&self, e: &Self::Elem) -> Value {
        Value::String(format_rational(e))
    }
}

pub type Rows = Vec<Vec<Value>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationFile {
    pub field: FieldSpec,
    pub dims: BTreeMap<String, usize>,
    pub mats: BTreeMap<String, Rows>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapsFile {
    pub field: FieldSpec,
    pub maps: BTreeMap<String, Rows>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlocksFile {
    pub field: FieldSpec,
    pub blocks: BTreeMap<String, Rows>,
}

pub fn parse_file<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    // syntax errors and shape errors are told apart by serde_json's category
    serde_json::from_str(text).map_err(|e| match e.classify() {
        serde_json::error::Category::Data => JsonError::Semantic(e.to_string()),
        _ => JsonError::Syntax(e.to_string()),
    })
}

/// The `"field"` member of any of the file kinds.
pub fn peek_field(text: &str) -> Result<FieldSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))?;
    match v.get("field") {
        Some(f) => serde_json::from_value(f.clone()).map_err(|e| JsonError::Semantic(format!("field: {e}"))),
        None => semantic("missing \"field\""),
    }
}

fn check_field<F: JsonField>(field: &F, spec: FieldSpec) -> Result<()> {
    if field.spec() != spec {
        return semantic(format!("field {spec:?} does not match {:?}", field.spec()));
    }
    Ok(())
}

pub fn matrix_from_rows<F: JsonField>(field: &F, rows: usize, cols: usize, data: &Rows, what: &str) -> Result<Matrix<F>> {
    if data.len() != rows || data.iter().any(|r| r.len() != cols) {
        return semantic(format!("{what} must be {rows} x {cols}"));
    }
    let entries = data
        .iter()
        .flatten()
        .map(|v| field.entry_from_json(v))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(field, rows, cols, entries).map_err(|e| JsonError::Semantic(e.to_string()))
}

pub fn matrix_to_rows<F: JsonField>(field: &F, m: &Matrix<F>) -> Rows {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|e| field.entry_to_json(e)).collect())
        .collect()
}

/// Looks up one matrix per name; an absent entry is allowed only for empty
/// shapes.
fn named_matrices<F: JsonField>(
    field: &F,
    names: &[String],
    shapes: &[(usize, usize)],
    data: &BTreeMap<String, Rows>,
    what: &str,
) -> Result<Vec<Matrix<F>>> {
    if let Some(extra) = data.keys().find(|k| !names.contains(k)) {
        return semantic(format!("unknown {what} {extra}"));
    }
    names
        .iter()
        .zip(shapes)
        .map(|(name, &(r, c))| match data.get(name) {
            Some(rows) => matrix_from_rows(field, r, c, rows, &format!("{what} {name}")),
            None if r * c == 0 => Ok(Matrix::zeros(field, r, c)),
            None => semantic(format!("missing {what} {name}")),
        })
        .collect()
}

pub fn dims_from_map(pres: &BoundQuiverPresentation, dims: &BTreeMap<String, usize>) -> Result<DimensionVector> {
    let q = pres.quiver();
    if let Some(extra) = dims.keys().find(|k| q.vertex_index(k).is_none()) {
        return semantic(format!("unknown vertex {extra}"));
    }
    q.vertices()
        .iter()
        .map(|v| dims.get(v).copied().ok_or_else(|| JsonError::Semantic(format!("missing dimension of vertex {v}"))))
        .collect::<Result<Vec<_>>>()
        .map(DimensionVector::new)
}

/// Shapes are checked; the relations are not.
pub fn rep_from_file<F: JsonField>(
    file: &RepresentationFile,
    pres: &Arc<BoundQuiverPresentation>,
    field: &F,
) -> Result<Representation<F>> {
    check_field(field, file.field)?;
    let dims = dims_from_map(pres, &file.dims)?;
    let q = pres.quiver();
    let names: Vec<String> = q.arrows().iter().map(|a| a.name.clone()).collect();
    let shapes: Vec<_> = q.arrows().iter().map(|a| (dims.get(a.target), dims.get(a.source))).collect();
    let mats = named_matrices(field, &names, &shapes, &file.mats, "arrow")?;
    Representation::new(pres, field, dims, mats).map_err(|e| JsonError::Semantic(e.to_string()))
}

pub fn rep_to_file<F: JsonField>(rep: &Representation<F>) -> RepresentationFile {
    let field = rep.field();
    let q = rep.presentation().quiver();
    RepresentationFile {
        field: field.spec(),
        dims: q.vertices().iter().cloned().zip(rep.dims().as_slice().iter().copied()).collect(),
        mats: q
            .arrows()
            .iter()
            .zip(rep.mats())
            .map(|(a, m)| (a.name.clone(), matrix_to_rows(field, m)))
            .collect(),
    }
}

/// `f: source -> target`, one `target_x x source_x` matrix per vertex.
pub fn maps_from_file<F: JsonField>(
    file: &MapsFile,
    pres: &BoundQuiverPresentation,
    field: &F,
    source: &DimensionVector,
    target: &DimensionVector,
) -> Result<HomMorphism<F>> {
    check_field(field, file.field)?;
    let q = pres.quiver();
    let shapes: Vec<_> = (0..q.num_vertices()).map(|x| (target.get(x), source.get(x))).collect();
    named_matrices(field, q.vertices(), &shapes, &file.maps, "vertex").map(HomMorphism::new)
}

pub fn maps_to_file<F: JsonField>(pres: &BoundQuiverPresentation, field: &F, maps: &[Matrix<F>]) -> MapsFile {
    MapsFile {
        field: field.spec(),
        maps: pres
            .quiver()
            .vertices()
            .iter()
            .cloned()
            .zip(maps.iter().map(|m| matrix_to_rows(field, m)))
            .collect(),
    }
}

/// `Z_a` of shape `d_{t a} x e_{s a}`.
pub fn blocks_from_file<F: JsonField>(
    file: &BlocksFile,
    pres: &BoundQuiverPresentation,
    field: &F,
    e: &DimensionVector,
    d: &DimensionVector,
) -> Result<ArrowBlock<F>> {
    check_field(field, file.field)?;
    let q = pres.quiver();
    let names: Vec<String> = q.arrows().iter().map(|a| a.name.clone()).collect();
    let shapes: Vec<_> = q.arrows().iter().map(|a| (d.get(a.target), e.get(a.source))).collect();
    named_matrices(field, &names, &shapes, &file.blocks, "arrow").map(ArrowBlock::new)
}

pub fn blocks_to_file<F: JsonField>(pres: &BoundQuiverPresentation, field: &F, z: &ArrowBlock<F>) -> BlocksFile {
    BlocksFile {
        field: field.spec(),
        blocks: pres
            .quiver()
            .arrows()
            .iter()
            .zip(z.blocks())
            .map(|(a, m)| (a.name.clone(), matrix_to_rows(field, m)))
            .collect(),
    }
}
