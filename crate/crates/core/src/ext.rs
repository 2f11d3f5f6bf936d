//! Cocycles `Z` for a pair `(U, V)`, the extensions `W^{V,Z,U}` they define,
//! and the maps between extension triples and monomorphism triples.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hom::{split_by_basis, HomMorphism, HomTriple};
use crate::matrix::Matrix;
use crate::presentation::BoundQuiverPresentation;
use crate::relation::Relation;
use crate::rep::{CompiledRelation, DimensionVector, Representation};

/// One `d_{t a} x e_{s a}` block per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ArrowBlock<F: Field> {
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> ArrowBlock<F> {
    pub fn new(blocks: Vec<Matrix<F>>) -> Self {
        Self { blocks }
    }

    /// The zero element of `A_Q^{e,d}`.
    pub fn zero(pres: &BoundQuiverPresentation, field: &F, e: &DimensionVector, d: &DimensionVector) -> Self {
        Self::new(
            pres.quiver()
                .arrows()
                .iter()
                .map(|a| Matrix::zeros(field, d.get(a.target), e.get(a.source)))
                .collect(),
        )
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    pub fn block(&self, a: usize) -> &Matrix<F> {
        &self.blocks[a]
    }

    pub fn into_blocks(self) -> Vec<Matrix<F>> {
        self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    /// Entries of all blocks in arrow order, each block row-major.
    pub fn coordinates(&self) -> Vec<F::Elem> {
        self.blocks.iter().flat_map(|b| b.data().iter().cloned()).collect()
    }

    pub fn from_coordinates(
        pres: &BoundQuiverPresentation,
        field: &F,
        e: &DimensionVector,
        d: &DimensionVector,
        coords: &[F::Elem],
    ) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut at = 0;
        for a in pres.quiver().arrows() {
            let (r, c) = (d.get(a.target), e.get(a.source));
            let end = at + r * c;
            if end > coords.len() {
                return Err(Error::Shape("too few block coordinates".into()));
            }
            blocks.push(Matrix::from_vec(field, r, c, coords[at..end].to_vec())?);
            at = end;
        }
        if at != coords.len() {
            return Err(Error::Shape("too many block coordinates".into()));
        }
        Ok(Self::new(blocks))
    }

    pub fn check_shapes(&self, u: &Representation<F>, v: &Representation<F>) -> Result<()> {
        let arrows = u.presentation().quiver().arrows();
        if self.blocks.len() != arrows.len() {
            return Err(Error::Shape(format!(
                "{} blocks for {} arrows",
                self.blocks.len(),
                arrows.len()
            )));
        }
        for (a, b) in arrows.iter().zip(&self.blocks) {
            let want = (v.dims().get(a.target), u.dims().get(a.source));
            if b.shape() != want {
                return Err(Error::Shape(format!(
                    "block for {} must be {}x{}",
                    a.name, want.0, want.1
                )));
            }
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new(self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::new(self.blocks.iter().map(|b| b.scale(c)).collect())
    }
}

fn check_pair<F: Field>(u: &Representation<F>, v: &Representation<F>) -> Result<()> {
    if !u.same_presentation(v) {
        return Err(Error::InvalidRepresentation(
            "U and V belong to different presentations".into(),
        ));
    }
    Ok(())
}

/// `sum c V_{a_1} .. V_{a_{j-1}} Z_{a_j} U_{a_{j+1}} .. U_{a_l}` over terms and
/// positions `j`.
pub fn cocycle_value_compiled<F: Field>(
    u: &Representation<F>,
    v: &Representation<F>,
    z: &ArrowBlock<F>,
    rel: &CompiledRelation<F>,
) -> Matrix<F> {
    let field = u.field();
    let mut acc = Matrix::zeros(field, v.dims().get(rel.target), u.dims().get(rel.source));
    for (c, p) in &rel.terms {
        if field.is_zero(c) {
            continue;
        }
        let arrows = p.arrows();
        let l = arrows.len();
        // suffix[j] = U_{a_{j}} .. U_{a_{l-1}} (0-based), suffix[l] = identity
        let mut suffix = vec![Matrix::identity(field, u.dims().get(p.source())); l + 1];
        for j in (0..l).rev() {
            suffix[j] = u.mat(arrows[j]) * &suffix[j + 1];
        }
        let mut prefix = Matrix::identity(field, v.dims().get(p.target()));
        for j in 0..l {
            let term = &(&prefix * z.block(arrows[j])) * &suffix[j + 1];
            acc = &acc + &term.scale(c);
            prefix = &prefix * v.mat(arrows[j]);
        }
    }
    acc
}

pub fn cocycle_value<F: Field>(
    u: &Representation<F>,
    v: &Representation<F>,
    z: &ArrowBlock<F>,
    rel: &Relation,
) -> Result<Matrix<F>> {
    check_pair(u, v)?;
    z.check_shapes(u, v)?;
    let compiled = CompiledRelation::compile(u.field(), rel)?;
    Ok(cocycle_value_compiled(u, v, z, &compiled))
}

/// Whether `Z` vanishes on every generating relation.
pub fn is_cocycle<F: Field>(u: &Representation<F>, v: &Representation<F>, z: &ArrowBlock<F>) -> Result<bool> {
    for r in u.presentation().relations() {
        if !cocycle_value(u, v, z, r)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Basis of `Z^{U,V}`: the kernel of `Z -> (Z_rho)_rho`, assembled column by
/// column from unit blocks.
pub fn cocycle_space_basis<F: Field>(u: &Representation<F>, v: &Representation<F>) -> Result<Vec<ArrowBlock<F>>> {
    check_pair(u, v)?;
    let pres = u.presentation();
    let field = u.field();
    let (e, d) = (u.dims(), v.dims());
    let relations = crate::rep::compile_relations(pres, field)?;
    let ambient: usize = pres
        .quiver()
        .arrows()
        .iter()
        .map(|a| d.get(a.target) * e.get(a.source))
        .sum();
    let rows: usize = relations
        .iter()
        .map(|r| d.get(r.target) * e.get(r.source))
        .sum();
    let mut system = Matrix::zeros(field, rows, ambient);
    let mut unit = vec![field.zero(); ambient];
    for col in 0..ambient {
        unit[col] = field.one();
        let z = ArrowBlock::from_coordinates(pres, field, e, d, &unit)?;
        unit[col] = field.zero();
        let mut row = 0;
        for r in &relations {
            let value = cocycle_value_compiled(u, v, &z, r);
            for x in value.data() {
                system.set(row, col, x.clone());
                row += 1;
            }
        }
    }
    system
        .kernel_basis()
        .into_iter()
        .map(|k| ArrowBlock::from_coordinates(pres, field, e, d, &k))
        .collect()
}

/// `0 -> V -> W -> U -> 0` with `W = W^{V,Z,U}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extension<F: Field> {
    pub module: Representation<F>,
    /// `V -> W`, inclusion into the leading coordinates.
    pub inclusion: HomMorphism<F>,
    /// `W -> U`, projection onto the trailing coordinates.
    pub projection: HomMorphism<F>,
}

/// `W_a = [[V_a, Z_a], [0, U_a]]` without any validity check.
pub fn extension_matrices<F: Field>(
    u: &Representation<F>,
    v: &Representation<F>,
    z: &ArrowBlock<F>,
) -> Result<Vec<Matrix<F>>> {
    u.presentation()
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let lower_left = Matrix::zeros(u.field(), u.dims().get(arrow.target), v.dims().get(arrow.source));
            Matrix::block2x2(v.mat(a), z.block(a), &lower_left, u.mat(a))
        })
        .collect()
}

/// Errors unless `Z` is a cocycle; the assembled `W` is checked as well.
pub fn build_extension<F: Field>(
    u: &Representation<F>,
    v: &Representation<F>,
    z: &ArrowBlock<F>,
) -> Result<Extension<F>> {
    check_pair(u, v)?;
    z.check_shapes(u, v)?;
    if !is_cocycle(u, v, z)? {
        return Err(Error::NotCocycle(
            "Z does not vanish on every generating relation".into(),
        ));
    }
    let field = u.field();
    let dims = v.dims().add(u.dims());
    let module = Representation::new(u.presentation(), field, dims, extension_matrices(u, v, z)?)?;
    module.validate()?;
    let (d, e) = (v.dims(), u.dims());
    let inclusion = HomMorphism::new(
        (0..d.len())
            .map(|x| {
                Matrix::vstack(
                    field,
                    d.get(x),
                    &[&Matrix::identity(field, d.get(x)), &Matrix::zeros(field, e.get(x), d.get(x))],
                )
            })
            .collect(),
    );
    let projection = HomMorphism::new(
        (0..d.len())
            .map(|x| {
                Matrix::hstack(
                    field,
                    e.get(x),
                    &[&Matrix::zeros(field, e.get(x), d.get(x)), &Matrix::identity(field, e.get(x))],
                )
            })
            .collect(),
    );
    Ok(Extension {
        module,
        inclusion,
        projection,
    })
}

/// `(U, V, Z)` with `Z` in `Z^{U,V}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTriple<F: Field> {
    pub u: Representation<F>,
    pub v: Representation<F>,
    pub z: ArrowBlock<F>,
}

impl<F: Field> ExtensionTriple<F> {
    pub fn new(u: Representation<F>, v: Representation<F>, z: ArrowBlock<F>) -> Result<Self> {
        check_pair(&u, &v)?;
        z.check_shapes(&u, &v)?;
        u.validate()?;
        v.validate()?;
        if !is_cocycle(&u, &v, &z)? {
            return Err(Error::NotCocycle(
                "Z does not vanish on every generating relation".into(),
            ));
        }
        Ok(Self { u, v, z })
    }

    pub fn extension(&self) -> Result<Extension<F>> {
        build_extension(&self.u, &self.v, &self.z)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Splitting<F: Field> {
    /// `g_x = [f_x, h_x]`.
    pub g: Vec<Matrix<F>>,
    pub z: ArrowBlock<F>,
    pub u: Representation<F>,
}

fn split<F: Field>(
    v: &Representation<F>,
    w: &Representation<F>,
    f: &HomMorphism<F>,
    h: Option<&[Matrix<F>]>,
) -> Result<Splitting<F>> {
    check_pair(v, w)?;
    let field = w.field();
    let complement: Vec<Matrix<F>> = match h {
        Some(h) => h.to_vec(),
        None => f.maps().iter().map(Matrix::complement_units).collect(),
    };
    let blocks = split_by_basis(f.maps(), &complement, w)?;
    if blocks.iter().any(|b| !b.lower_left.is_zero()) {
        return Err(Error::NotHomomorphism(
            "image of f is not a subrepresentation".into(),
        ));
    }
    let u_dims = DimensionVector::new(complement.iter().map(Matrix::cols).collect());
    let u = Representation::new(
        w.presentation(),
        field,
        u_dims,
        blocks.iter().map(|b| b.lower_right.clone()).collect(),
    )?;
    let z = ArrowBlock::new(blocks.into_iter().map(|b| b.upper_right).collect());
    let g = f
        .maps()
        .iter()
        .zip(&complement)
        .map(|(fx, hx)| Matrix::hstack(field, fx.rows(), &[fx, hx]))
        .collect();
    Ok(Splitting { g, z, u })
}

/// Writes `W` as `g * W^{V,Z,U}` with `f = g ∘ μ`. Without `h` the complement
/// is spanned by unit vectors at the non-pivot rows of each `f_x`.
pub fn splitting_from_mono<F: Field>(
    v: &Representation<F>,
    w: &Representation<F>,
    f: &HomMorphism<F>,
    h: Option<&[Matrix<F>]>,
) -> Result<Splitting<F>> {
    if !crate::hom::is_monomorphism(f, v, w)? {
        return Err(Error::NotMonomorphism("f is not injective".into()));
    }
    split(v, w, f, h)
}

/// `Φ(g, (U, V, Z)) = (V, g * W^{V,Z,U}, g ∘ μ)`.
pub fn phi_map<F: Field>(g: &[Matrix<F>], t: &ExtensionTriple<F>) -> Result<HomTriple<F>> {
    let ext = t.extension()?;
    let w = ext.module.gl_action(g)?;
    let f = HomMorphism::new(g.to_vec()).compose(&ext.inclusion)?;
    HomTriple::new(t.v.clone(), w, f)
}

/// `Ψ(V, W, f, h) = (π22([f,h]^{-1} * W), V, π12([f,h]^{-1} * W))`.
pub fn psi_map<F: Field>(
    v: &Representation<F>,
    w: &Representation<F>,
    f: &HomMorphism<F>,
    h: Option<&[Matrix<F>]>,
) -> Result<ExtensionTriple<F>> {
    f.check_intertwining(v, w)?;
    let s = split(v, w, f, h)?;
    ExtensionTriple::new(s.u, v.clone(), s.z)
}
