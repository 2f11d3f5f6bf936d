//! Representations of bound quivers: one matrix per arrow on the coordinate
//! spaces `k^{d_x}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::presentation::BoundQuiverPresentation;
use crate::quiver::{ArrowId, Path, VertexId};
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DimensionVector(Vec<usize>);

impl DimensionVector {
    pub fn new(dims: Vec<usize>) -> Self {
        Self(dims)
    }

    pub fn zero(vertices: usize) -> Self {
        Self(vec![0; vertices])
    }

    /// 1 at `x`, 0 elsewhere.
    pub fn indicator(vertices: usize, x: VertexId) -> Self {
        let mut d = vec![0; vertices];
        d[x] = 1;
        Self(d)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, x: VertexId) -> usize {
        self.0[x]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Componentwise `<=`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.0.len(), other.0.len(), "dimension vectors of different length");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if !other.le(self) {
            return None;
        }
        Some(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// A relation with coefficients already mapped into a field.
#[derive(Clone, Debug)]
pub struct CompiledRelation<F: Field> {
    pub source: VertexId,
    pub target: VertexId,
    pub terms: Vec<(F::Elem, Path)>,
}

impl<F: Field> CompiledRelation<F> {
    pub fn compile(field: &F, r: &Relation) -> Result<Self> {
        let mut terms = Vec::with_capacity(r.terms().len());
        for (c, p) in r.terms() {
            terms.push((field.from_rational(c)?, p.clone()));
        }
        Ok(Self {
            source: r.source(),
            target: r.target(),
            terms,
        })
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.terms.iter().flat_map(|(_, p)| p.arrows().iter().copied())
    }
}

pub fn compile_relations<F: Field>(
    pres: &BoundQuiverPresentation,
    field: &F,
) -> Result<Vec<CompiledRelation<F>>> {
    pres.relations()
        .iter()
        .map(|r| CompiledRelation::compile(field, r))
        .collect()
}

/// `M_{a_1} ... M_{a_l}`; the identity on `k^{d_x}` for a trivial path.
pub fn evaluate_path_on<F: Field>(
    field: &F,
    dims: &DimensionVector,
    mats: &[Matrix<F>],
    p: &Path,
) -> Matrix<F> {
    let arrows = p.arrows();
    let Some((&first, rest)) = arrows.split_first() else {
        return Matrix::identity(field, dims.get(p.source()));
    };
    rest.iter().fold(mats[first].clone(), |acc, &a| &acc * &mats[a])
}

pub fn evaluate_compiled_on<F: Field>(
    field: &F,
    dims: &DimensionVector,
    mats: &[Matrix<F>],
    rel: &CompiledRelation<F>,
) -> Matrix<F> {
    let mut acc = Matrix::zeros(field, dims.get(rel.target), dims.get(rel.source));
    for (c, p) in &rel.terms {
        if field.is_zero(c) {
            continue;
        }
        acc = &acc + &evaluate_path_on(field, dims, mats, p).scale(c);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Representation<F: Field> {
    pres: Arc<BoundQuiverPresentation>,
    field: F,
    dims: DimensionVector,
    mats: Vec<Matrix<F>>,
}

impl<F: Field> Representation<F> {
    /// Checks shapes only; relation validity is a separate predicate.
    pub fn new(
        pres: &Arc<BoundQuiverPresentation>,
        field: &F,
        dims: DimensionVector,
        mats: Vec<Matrix<F>>,
    ) -> Result<Self> {
        let q = pres.quiver();
        if dims.len() != q.num_vertices() {
            return Err(Error::Shape(format!(
                "dimension vector has {} entries for {} vertices",
                dims.len(),
                q.num_vertices()
            )));
        }
        if mats.len() != q.num_arrows() {
            return Err(Error::Shape(format!(
                "{} matrices for {} arrows",
                mats.len(),
                q.num_arrows()
            )));
        }
        for (arrow, m) in q.arrows().iter().zip(&mats) {
            let want = (dims.get(arrow.target), dims.get(arrow.source));
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    arrow.name,
                    want.0,
                    want.1,
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::InvalidField(format!(
                    "matrix for {} lives over a different field",
                    arrow.name
                )));
            }
        }
        Ok(Self {
            pres: Arc::clone(pres),
            field: field.clone(),
            dims,
            mats,
        })
    }

    pub fn zero(pres: &Arc<BoundQuiverPresentation>, field: &F, dims: DimensionVector) -> Result<Self> {
        let mats = pres
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field, dims.get(a.target), dims.get(a.source)))
            .collect();
        Self::new(pres, field, dims, mats)
    }

    /// `S(x)`: `k` at `x`, zero elsewhere, all arrows zero.
    pub fn simple(pres: &Arc<BoundQuiverPresentation>, field: &F, x: VertexId) -> Result<Self> {
        let n = pres.quiver().num_vertices();
        if x >= n {
            return Err(Error::InvalidQuiver(format!("vertex {x} out of range")));
        }
        Self::zero(pres, field, DimensionVector::indicator(n, x))
    }

    pub fn presentation(&self) -> &Arc<BoundQuiverPresentation> {
        &self.pres
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn mat(&self, a: ArrowId) -> &Matrix<F> {
        &self.mats[a]
    }

    pub fn mats(&self) -> &[Matrix<F>] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<Matrix<F>> {
        self.mats
    }

    pub fn mat_by_name(&self, name: &str) -> Option<&Matrix<F>> {
        self.pres.quiver().arrow_index(name).map(|a| &self.mats[a])
    }

    pub fn same_presentation(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.pres, &other.pres) || *self.pres == *other.pres
    }

    pub fn evaluate_path(&self, p: &Path) -> Matrix<F> {
        evaluate_path_on(&self.field, &self.dims, &self.mats, p)
    }

    pub fn evaluate_relation(&self, r: &Relation) -> Result<Matrix<F>> {
        let compiled = CompiledRelation::compile(&self.field, r)?;
        Ok(evaluate_compiled_on(&self.field, &self.dims, &self.mats, &compiled))
    }

    /// Errors with the first generating relation that does not vanish.
    pub fn validate(&self) -> Result<()> {
        for r in self.pres.relations() {
            if !self.evaluate_relation(r)?.is_zero() {
                return Err(Error::InvalidRepresentation(format!(
                    "relation {} does not vanish",
                    r.display(self.pres.quiver())
                )));
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// `(g * V)_a = g_{t a} V_a g_{s a}^{-1}`.
    pub fn gl_action(&self, g: &[Matrix<F>]) -> Result<Self> {
        let inverses = invert_all(g, &self.dims)?;
        let mats = self
            .pres
            .quiver()
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| &(&g[a.target] * m) * &inverses[a.source])
            .collect();
        Self::new(&self.pres, &self.field, self.dims.clone(), mats)
    }

    /// Block-diagonal sum; `self` occupies the leading coordinates.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.same_presentation(other) {
            return Err(Error::InvalidRepresentation(
                "direct sum of representations of different presentations".into(),
            ));
        }
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| Matrix::block_diag(a, b))
            .collect();
        Self::new(&self.pres, &self.field, self.dims.add(&other.dims), mats)
    }
}

/// Inverts a tuple of base changes, checking sizes against `dims`.
pub fn invert_all<F: Field>(g: &[Matrix<F>], dims: &DimensionVector) -> Result<Vec<Matrix<F>>> {
    if g.len() != dims.len() {
        return Err(Error::Shape(format!(
            "{} base changes for {} vertices",
            g.len(),
            dims.len()
        )));
    }
    g.iter()
        .enumerate()
        .map(|(x, gx)| {
            if gx.shape() != (dims.get(x), dims.get(x)) {
                return Err(Error::Shape(format!(
                    "base change at vertex {x} must be {0}x{0}",
                    dims.get(x)
                )));
            }
            gx.inverse()
                .ok_or_else(|| Error::Singular(format!("base change at vertex {x}")))
        })
        .collect()
}
