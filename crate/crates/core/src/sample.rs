//! Random points of representation varieties and extension spaces, for
//! property tests and round-trip experiments.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::ext::{cocycle_space_basis, ArrowBlock};
use crate::field::Field;
use crate::matrix::Matrix;
use crate::presentation::BoundQuiverPresentation;
use crate::rep::{compile_relations, evaluate_compiled_on, DimensionVector, Representation};

/// Uniform over a finite field, small integers in `-3..=3` over `Q`.
pub fn random_element<F: Field, R: Rng + ?Sized>(field: &F, rng: &mut R) -> F::Elem {
    match field.order() {
        Some(q) => field.element(rng.gen_range(0..q)),
        None => field.from_i64(rng.gen_range(-3..=3)),
    }
}

pub fn random_matrix<F: Field, R: Rng + ?Sized>(field: &F, rows: usize, cols: usize, rng: &mut R) -> Matrix<F> {
    Matrix::from_fn(field, rows, cols, |_, _| random_element(field, rng))
}

/// Rejection sampling; over `F_2` about a third of the draws are kept.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Matrix<F> {
    loop {
        let g = random_matrix(field, n, n, rng);
        if g.is_invertible() {
            return g;
        }
    }
}

/// A conjugate of a block-diagonal matrix whose blocks are strictly upper
/// triangular of size at most `index`, so its `index`-th power vanishes.
pub fn random_nilpotent<F: Field, R: Rng + ?Sized>(field: &F, n: usize, index: usize, rng: &mut R) -> Matrix<F> {
    let index = index.max(1);
    let mut block_start = 0;
    let mut starts = vec![0; n];
    for (i, s) in starts.iter_mut().enumerate() {
        if i - block_start == index {
            block_start = i;
        }
        *s = block_start;
    }
    let upper = Matrix::from_fn(field, n, n, |i, j| {
        if j > i && starts[j] == starts[i] {
            random_element(field, rng)
        } else {
            field.zero()
        }
    });
    let g = random_invertible(field, n, rng);
    let inv = g.inverse().expect("invertible");
    &(&g * &upper) * &inv
}

/// Nilpotency index of each loop from its power relation.
fn loop_indices(pres: &BoundQuiverPresentation) -> Result<Vec<Option<usize>>> {
    let q = pres.quiver();
    (0..q.num_arrows())
        .map(|a| {
            if !q.arrow(a).is_loop() {
                return Ok(None);
            }
            pres.relations()
                .iter()
                .filter_map(|r| r.as_monomial())
                .filter(|p| p.arrows().iter().all(|&b| b == a))
                .map(|p| p.len())
                .min()
                .map(Some)
                .ok_or_else(|| {
                    Error::Unsupported(format!(
                        "loop {} has no power relation to sample against",
                        q.arrow(a).name
                    ))
                })
        })
        .collect()
}

/// A random valid representation: loops are random nilpotents, the other
/// arrows a random point of the linear solution space of the relations once
/// the loops are fixed. Needs every relation term to contain at most one
/// non-loop arrow.
pub fn random_representation<F: Field, R: Rng + ?Sized>(
    pres: &Arc<BoundQuiverPresentation>,
    field: &F,
    dims: &DimensionVector,
    rng: &mut R,
) -> Result<Representation<F>> {
    let q = pres.quiver();
    let indices = loop_indices(pres)?;
    let shapes: Vec<(usize, usize)> = q
        .arrows()
        .iter()
        .map(|a| (dims.get(a.target), dims.get(a.source)))
        .collect();
    let mut mats: Vec<Matrix<F>> = shapes.iter().map(|&(r, c)| Matrix::zeros(field, r, c)).collect();
    for (a, idx) in indices.iter().enumerate() {
        if let Some(m) = idx {
            mats[a] = random_nilpotent(field, shapes[a].0, *m, rng);
        }
    }
    let free: Vec<usize> = (0..q.num_arrows()).filter(|&a| indices[a].is_none()).collect();
    for r in pres.relations() {
        for (_, p) in r.terms() {
            if p.arrows().iter().filter(|&&b| indices[b].is_none()).count() > 1 {
                return Err(Error::Unsupported(
                    "relations must be linear in the non-loop arrows".into(),
                ));
            }
        }
    }

    // linear system in the entries of the non-loop arrows
    let relations = compile_relations(pres, field)?;
    let unknowns: usize = free.iter().map(|&a| shapes[a].0 * shapes[a].1).sum();
    let mut columns: Vec<Vec<F::Elem>> = Vec::with_capacity(unknowns);
    for &a in &free {
        let (r, c) = shapes[a];
        for k in 0..r * c {
            let mut trial = mats.clone();
            let mut unit = Matrix::zeros(field, r, c);
            unit.set(k / c, k % c, field.one());
            trial[a] = unit;
            let mut col = Vec::new();
            for rel in relations.iter().filter(|rel| rel.arrows().any(|b| indices[b].is_none())) {
                col.extend(evaluate_compiled_on(field, dims, &trial, rel).into_data());
            }
            columns.push(col);
        }
    }
    let rows = columns.first().map_or(0, Vec::len);
    let system = Matrix::from_fn(field, rows, unknowns, |i, j| columns[j][i].clone());
    let kernel = system.kernel_basis();
    let mut values = vec![field.zero(); unknowns];
    for v in &kernel {
        let c = random_element(field, rng);
        for (x, y) in values.iter_mut().zip(v) {
            *x = field.add(x, &field.mul(&c, y));
        }
    }
    let mut at = 0;
    for &a in &free {
        let (r, c) = shapes[a];
        mats[a] = Matrix::from_vec(field, r, c, values[at..at + r * c].to_vec())?;
        at += r * c;
    }
    let rep = Representation::new(pres, field, dims.clone(), mats)?;
    rep.validate()
        .map_err(|e| Error::Unsupported(format!("sampled representation is not valid: {e}")))?;
    Ok(rep)
}

/// A random element of `Z^{U,V}`.
pub fn random_cocycle<F: Field, R: Rng + ?Sized>(
    u: &Representation<F>,
    v: &Representation<F>,
    rng: &mut R,
) -> Result<ArrowBlock<F>> {
    let field = u.field();
    let zero = ArrowBlock::zero(u.presentation(), field, u.dims(), v.dims());
    Ok(cocycle_space_basis(u, v)?
        .iter()
        .fold(zero, |acc, b| acc.add(&b.scale(&random_element(field, rng)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, FamilyDescriptor};
    use crate::field::{PrimeField, Rationals};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampled_representations_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pres = Arc::new(build_family(&FamilyDescriptor::A { n: 2, m: 3, l: 2 }).unwrap());
        let f = PrimeField::new(5).unwrap();
        for d in 0..4 {
            for e in 0..4 {
                let dims = DimensionVector::new(vec![d, e]);
                assert!(random_representation(&pres, &f, &dims, &mut rng).unwrap().is_valid());
                let r = random_representation(&pres, &Rationals, &dims, &mut rng).unwrap();
                assert!(r.is_valid());
            }
        }
    }

    #[test]
    fn nilpotent_index_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = PrimeField::new(3).unwrap();
        for n in 0..6 {
            let m = random_nilpotent(&f, n, 2, &mut rng);
            assert!(m.pow(2).is_zero());
        }
    }
}
