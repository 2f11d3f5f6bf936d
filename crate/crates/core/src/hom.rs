//! Homomorphisms of representations, monomorphisms and cokernels.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::rep::{DimensionVector, Representation};

/// One matrix per vertex, `f_x` of shape `dim target_x x dim source_x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomMorphism<F: Field> {
    maps: Vec<Matrix<F>>,
}

impl<F: Field> HomMorphism<F> {
    pub fn new(maps: Vec<Matrix<F>>) -> Self {
        Self { maps }
    }

    pub fn zero(field: &F, source: &DimensionVector, target: &DimensionVector) -> Self {
        Self::new(
            (0..source.len())
                .map(|x| Matrix::zeros(field, target.get(x), source.get(x)))
                .collect(),
        )
    }

    pub fn identity(field: &F, dims: &DimensionVector) -> Self {
        Self::new(
            dims.as_slice()
                .iter()
                .map(|&d| Matrix::identity(field, d))
                .collect(),
        )
    }

    pub fn maps(&self) -> &[Matrix<F>] {
        &self.maps
    }

    pub fn map(&self, x: usize) -> &Matrix<F> {
        &self.maps[x]
    }

    pub fn into_maps(self) -> Vec<Matrix<F>> {
        self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.maps.len() != rhs.maps.len() {
            return Err(Error::Shape("morphisms over different quivers".into()));
        }
        let maps = self
            .maps
            .iter()
            .zip(&rhs.maps)
            .map(|(a, b)| a.try_mul(b))
            .collect::<Result<_>>()?;
        Ok(Self::new(maps))
    }

    pub fn check_shapes(&self, source: &Representation<F>, target: &Representation<F>) -> Result<()> {
        let (s, t) = (source.dims(), target.dims());
        if self.maps.len() != s.len() {
            return Err(Error::Shape(format!(
                "{} vertex maps for {} vertices",
                self.maps.len(),
                s.len()
            )));
        }
        for (x, m) in self.maps.iter().enumerate() {
            if m.shape() != (t.get(x), s.get(x)) {
                return Err(Error::Shape(format!(
                    "map at vertex {x} must be {}x{}",
                    t.get(x),
                    s.get(x)
                )));
            }
        }
        Ok(())
    }

    /// `U_a f_{s a} = f_{t a} V_a` for every arrow, where `f: V -> U`.
    pub fn is_intertwining(&self, source: &Representation<F>, target: &Representation<F>) -> bool {
        if self.check_shapes(source, target).is_err() || !source.same_presentation(target) {
            return false;
        }
        source
            .presentation()
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .all(|(a, arrow)| {
                &target.mats()[a] * &self.maps[arrow.source]
                    == &self.maps[arrow.target] * &source.mats()[a]
            })
    }

    pub fn check_intertwining(&self, source: &Representation<F>, target: &Representation<F>) -> Result<()> {
        self.check_shapes(source, target)?;
        if !self.is_intertwining(source, target) {
            return Err(Error::NotHomomorphism(
                "vertex maps do not commute with the arrows".into(),
            ));
        }
        Ok(())
    }

    /// Injective at every vertex (no intertwining check).
    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }
}

/// Unknown layout of the vectorized intertwining system: `f_x[i][j]` sits at
/// `offsets[x] + i * source_x + j`.
fn hom_offsets(source: &DimensionVector, target: &DimensionVector) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(source.len());
    let mut total = 0;
    for x in 0..source.len() {
        offsets.push(total);
        total += source.get(x) * target.get(x);
    }
    (offsets, total)
}

/// Basis of `Hom(V, U)`, one morphism per kernel vector of the intertwining
/// system.
pub fn hom_basis<F: Field>(v: &Representation<F>, u: &Representation<F>) -> Result<Vec<HomMorphism<F>>> {
    if !v.same_presentation(u) {
        return Err(Error::InvalidRepresentation(
            "Hom between representations of different presentations".into(),
        ));
    }
    let field = v.field();
    let (vd, ud) = (v.dims(), u.dims());
    let (offsets, unknowns) = hom_offsets(vd, ud);
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for (a, arrow) in v.presentation().quiver().arrows().iter().enumerate() {
        let (s, t) = (arrow.source, arrow.target);
        let (ua, va) = (u.mat(a), v.mat(a));
        // row (i, j) of U_a f_s - f_t V_a, shape u_t x v_s
        for i in 0..ud.get(t) {
            for j in 0..vd.get(s) {
                let mut row = vec![field.zero(); unknowns];
                for k in 0..ud.get(s) {
                    let idx = offsets[s] + k * vd.get(s) + j;
                    row[idx] = field.add(&row[idx], ua.get(i, k));
                }
                for k in 0..vd.get(t) {
                    let idx = offsets[t] + i * vd.get(t) + k;
                    row[idx] = field.sub(&row[idx], va.get(k, j));
                }
                rows.push(row);
            }
        }
    }
    let system = Matrix::from_rows(field, unknowns, rows)?;
    Ok(system
        .kernel_basis()
        .into_iter()
        .map(|vec| {
            HomMorphism::new(
                (0..vd.len())
                    .map(|x| {
                        let start = offsets[x];
                        let len = vd.get(x) * ud.get(x);
                        Matrix::from_vec(field, ud.get(x), vd.get(x), vec[start..start + len].to_vec())
                            .expect("sizes match the layout")
                    })
                    .collect(),
            )
        })
        .collect())
}

pub fn hom_dimension<F: Field>(v: &Representation<F>, u: &Representation<F>) -> Result<usize> {
    Ok(hom_basis(v, u)?.len())
}

/// Errors if `f: V -> W` is not a homomorphism.
pub fn is_monomorphism<F: Field>(
    f: &HomMorphism<F>,
    v: &Representation<F>,
    w: &Representation<F>,
) -> Result<bool> {
    f.check_intertwining(v, w)?;
    Ok(f.is_injective())
}

/// `(V, W, f)` with `f: V -> W` a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTriple<F: Field> {
    pub v: Representation<F>,
    pub w: Representation<F>,
    pub f: HomMorphism<F>,
}

impl<F: Field> HomTriple<F> {
    pub fn new(v: Representation<F>, w: Representation<F>, f: HomMorphism<F>) -> Result<Self> {
        f.check_intertwining(&v, &w)?;
        Ok(Self { v, w, f })
    }

    pub fn is_monomorphism(&self) -> bool {
        self.f.is_injective()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cokernel<F: Field> {
    pub module: Representation<F>,
    /// `W -> U`, the coordinates of `W` at the complement rows.
    pub projection: HomMorphism<F>,
    /// Complement columns `h_x` with `[f_x, h_x]` invertible.
    pub complement: Vec<Matrix<F>>,
}

/// Cokernel of a monomorphism `f: V -> W`. The complement of `Im f_x` is
/// spanned by standard unit vectors at the non-pivot rows of `f_x`.
pub fn cokernel<F: Field>(
    f: &HomMorphism<F>,
    v: &Representation<F>,
    w: &Representation<F>,
) -> Result<Cokernel<F>> {
    if !is_monomorphism(f, v, w)? {
        return Err(Error::NotMonomorphism("cokernel needs an injective map".into()));
    }
    let field = w.field();
    let complement: Vec<Matrix<F>> = f.maps().iter().map(Matrix::complement_units).collect();
    let blocks = split_by_basis(f.maps(), &complement, w)?;
    let quotient_dims = DimensionVector::new(complement.iter().map(Matrix::cols).collect());
    let module = Representation::new(
        w.presentation(),
        field,
        quotient_dims,
        blocks.iter().map(|b| b.lower_right.clone()).collect(),
    )?;
    let projection = HomMorphism::new(
        blocks_inverse_rows(f.maps(), &complement)?
            .into_iter()
            .map(|(_, lower)| lower)
            .collect(),
    );
    Ok(Cokernel {
        module,
        projection,
        complement,
    })
}

/// Blocks of `g^{-1} W_a g` for `g = [f, h]` with respect to the split
/// `k^{d+e} = k^d + k^e`.
#[derive(Clone, Debug)]
pub struct BlockSplit<F: Field> {
    pub upper_left: Matrix<F>,
    pub upper_right: Matrix<F>,
    pub lower_left: Matrix<F>,
    pub lower_right: Matrix<F>,
}

/// Rows of `[f_x, h_x]^{-1}` split into the first `cols(f_x)` rows and the
/// rest.
pub fn blocks_inverse_rows<F: Field>(
    f: &[Matrix<F>],
    h: &[Matrix<F>],
) -> Result<Vec<(Matrix<F>, Matrix<F>)>> {
    f.iter()
        .zip(h)
        .enumerate()
        .map(|(x, (fx, hx))| {
            let n = fx.rows();
            if hx.rows() != n || fx.cols() + hx.cols() != n {
                return Err(Error::Shape(format!("[f, h] at vertex {x} is not square")));
            }
            let g = Matrix::hstack(fx.field(), n, &[fx, hx]);
            let inv = g
                .inverse()
                .ok_or_else(|| Error::Singular(format!("[f, h] at vertex {x}")))?;
            let d = fx.cols();
            Ok((inv.submatrix(0..d, 0..n), inv.submatrix(d..n, 0..n)))
        })
        .collect()
}

/// Splits every `([f,h]^{-1} * W)_a` into its four blocks.
pub fn split_by_basis<F: Field>(
    f: &[Matrix<F>],
    h: &[Matrix<F>],
    w: &Representation<F>,
) -> Result<Vec<BlockSplit<F>>> {
    let field = w.field();
    let q = w.presentation().quiver();
    if f.len() != q.num_vertices() || h.len() != q.num_vertices() {
        return Err(Error::Shape("one map per vertex required".into()));
    }
    let gs: Vec<Matrix<F>> = f
        .iter()
        .zip(h)
        .map(|(fx, hx)| Matrix::hstack(field, fx.rows(), &[fx, hx]))
        .collect();
    let inverses = crate::rep::invert_all(&gs, w.dims())?;
    Ok(q.arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let (s, t) = (arrow.source, arrow.target);
            let conj = &(&inverses[t] * w.mat(a)) * &gs[s];
            let (dt, ds) = (f[t].cols(), f[s].cols());
            let (nt, ns) = (conj.rows(), conj.cols());
            BlockSplit {
                upper_left: conj.submatrix(0..dt, 0..ds),
                upper_right: conj.submatrix(0..dt, ds..ns),
                lower_left: conj.submatrix(dt..nt, 0..ds),
                lower_right: conj.submatrix(dt..nt, ds..ns),
            }
        })
        .collect())
}
