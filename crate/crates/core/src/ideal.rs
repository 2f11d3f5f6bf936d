//! Computations with the ideal `I` of a presentation: membership, loop
//! nilpotency, minimal and normalized generating sets, and the count of
//! minimal relations against `dim 1_y (I / (IJ + JI)) 1_x`.
//!
//! The predicates on relation sets work over `Q`. Generating sets are
//! compared modulo `J^(N+1)`, which lies inside `IJ` because `J^N` lies in `I`.

use serde::Serialize;

use crate::algebra::{ideal_span, AlgebraElement, IdealPart, PathBasis, Subspace};
use crate::error::{Error, Result};
use crate::field::{Field, Rationals};
use crate::presentation::BoundQuiverPresentation;
use crate::quiver::{ArrowId, Path, VertexId};
use crate::relation::Relation;

/// `I / J^N` as a subspace of `kQ / J^N`.
#[derive(Clone, Debug)]
pub struct IdealSubspace<F: Field> {
    pub basis: PathBasis,
    pub span: Subspace<F>,
}

impl<F: Field> IdealSubspace<F> {
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    /// Paths of length `>= N` are in `I` and are dropped before testing.
    pub fn contains(&self, e: &AlgebraElement<F>) -> bool {
        self.span.contains(&self.basis.coordinates(e))
    }

    pub fn basis_elements(&self, field: &F) -> Vec<AlgebraElement<F>> {
        self.span
            .basis()
            .iter()
            .map(|v| self.basis.element(field, v))
            .collect()
    }
}

pub fn ideal_subspace<F: Field>(
    pres: &BoundQuiverPresentation,
    field: &F,
) -> Result<IdealSubspace<F>> {
    let basis = PathBasis::new(pres.quiver(), pres.truncation_bound());
    let span = ideal_span(
        field,
        pres.quiver(),
        pres.relations(),
        &basis,
        IdealPart::Whole,
        None,
    )?;
    Ok(IdealSubspace { basis, span })
}

pub fn ideal_membership<F: Field>(
    e: &AlgebraElement<F>,
    pres: &BoundQuiverPresentation,
) -> Result<bool> {
    Ok(ideal_subspace(pres, e.field())?.contains(e))
}

/// Minimal `m >= 1` with `alpha^m` in `I`.
pub fn loop_nilpotency_index(pres: &BoundQuiverPresentation, alpha: ArrowId) -> Result<usize> {
    let q = pres.quiver();
    if alpha >= q.num_arrows() || !q.arrow(alpha).is_loop() {
        return Err(Error::InvalidPath(format!("arrow {alpha} is not a loop")));
    }
    let f = Rationals;
    let ideal = ideal_subspace(pres, &f)?;
    let n = pres.truncation_bound();
    Ok((1..=n)
        .find(|&m| ideal.contains(&AlgebraElement::path(&f, Path::loop_power(q, alpha, m))))
        .unwrap_or(n))
}

fn span_mod_next_power(
    pres: &BoundQuiverPresentation,
    relations: &[Relation],
    basis: &PathBasis,
) -> Result<Subspace<Rationals>> {
    ideal_span(&Rationals, pres.quiver(), relations, basis, IdealPart::Whole, None)
}

/// Errors unless `relations` generates the presentation's ideal.
pub fn check_generates(relations: &[Relation], pres: &BoundQuiverPresentation) -> Result<()> {
    let basis = PathBasis::new(pres.quiver(), pres.truncation_bound() + 1);
    let ours = span_mod_next_power(pres, relations, &basis)?;
    let theirs = span_mod_next_power(pres, pres.relations(), &basis)?;
    if ours.dim() == theirs.dim() && theirs.contains_subspace(&ours) {
        Ok(())
    } else {
        Err(Error::NotGenerating(format!(
            "span dimension {} vs ideal dimension {} modulo J^{}",
            ours.dim(),
            theirs.dim(),
            basis.bound()
        )))
    }
}

/// Removing any single relation strictly shrinks the generated ideal.
pub fn is_minimal_relation_set(
    relations: &[Relation],
    pres: &BoundQuiverPresentation,
) -> Result<bool> {
    check_generates(relations, pres)?;
    let basis = PathBasis::new(pres.quiver(), pres.truncation_bound() + 1);
    let full = span_mod_next_power(pres, relations, &basis)?.dim();
    for i in 0..relations.len() {
        let rest: Vec<Relation> = relations
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, r)| r.clone())
            .collect();
        if span_mod_next_power(pres, &rest, &basis)?.dim() == full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For every loop `alpha`, `alpha^(m_alpha)` is in the set and no other
/// element has a summand containing it as a subpath.
pub fn is_normalized(relations: &[Relation], pres: &BoundQuiverPresentation) -> Result<bool> {
    if !is_minimal_relation_set(relations, pres)? {
        return Err(Error::NotMinimal(
            "normalization is only defined for minimal generating sets".into(),
        ));
    }
    let q = pres.quiver();
    for alpha in q.loops() {
        let m = loop_nilpotency_index(pres, alpha)?;
        let power = Path::loop_power(q, alpha, m);
        let mut holders = relations
            .iter()
            .filter(|r| r.terms().iter().any(|(_, p)| p.contains_subpath(&power)));
        let is_power = |r: &Relation| r.as_monomial() == Some(&power);
        match (holders.next(), holders.next()) {
            (Some(r), None) if is_power(r) => {}
            _ => return Ok(false),
        }
    }
    Ok(true)
}

/// Both sides of the relation-count formula for `Ext^2(S(x), S(y))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Ext2Count {
    /// Relations in the set starting at `x` and ending at `y`.
    pub relation_count: usize,
    /// `dim 1_y (I / (IJ + JI)) 1_x`.
    pub quotient_dimension: usize,
}

impl Ext2Count {
    pub fn agrees(&self) -> bool {
        self.relation_count == self.quotient_dimension
    }
}

pub fn ext2_dimension(
    pres: &BoundQuiverPresentation,
    relations: &[Relation],
    x: VertexId,
    y: VertexId,
) -> Result<Ext2Count> {
    let q = pres.quiver();
    if x == y {
        return Err(Error::Unsupported(
            "the relation-count formula applies only to distinct vertices".into(),
        ));
    }
    if x >= q.num_vertices() || y >= q.num_vertices() {
        return Err(Error::InvalidQuiver("vertex out of range".into()));
    }
    if !pres.is_weakly_triangular() {
        return Err(Error::InvalidPresentation(
            "the relation-count formula needs a weakly triangular quiver".into(),
        ));
    }
    if !is_minimal_relation_set(relations, pres)? {
        return Err(Error::NotMinimal("relation set is not minimal".into()));
    }
    let relation_count = relations
        .iter()
        .filter(|r| r.source() == x && r.target() == y)
        .count();

    let basis = PathBasis::new(q, pres.truncation_bound() + 1);
    let corner = Some((x, y));
    let whole = ideal_span(&Rationals, q, pres.relations(), &basis, IdealPart::Whole, corner)?;
    let radical = ideal_span(
        &Rationals,
        q,
        pres.relations(),
        &basis,
        IdealPart::RadicalMultiples,
        corner,
    )?;
    Ok(Ext2Count {
        relation_count,
        quotient_dimension: whole.dim() - radical.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn one_loop(relation_exponents: &[usize], bound: Option<usize>) -> BoundQuiverPresentation {
        let mut q = Quiver::new();
        q.add_vertex("x").unwrap();
        q.add_arrow("e", 0, 0).unwrap();
        let rels = relation_exponents
            .iter()
            .map(|&m| Relation::monomial(Path::loop_power(&q, 0, m)).unwrap())
            .collect();
        BoundQuiverPresentation::new(q, rels, bound).unwrap()
    }

    #[test]
    fn lambda_two_ideal_subspaces() {
        let f = Rationals;
        assert_eq!(ideal_subspace(&one_loop(&[2], Some(2)), &f).unwrap().dim(), 0);
        let pres = one_loop(&[2], Some(3));
        let ideal = ideal_subspace(&pres, &f).unwrap();
        assert_eq!(ideal.dim(), 1);
        let q = pres.quiver();
        assert!(ideal.contains(&AlgebraElement::path(&f, Path::loop_power(q, 0, 2))));
        assert!(ideal.contains(&AlgebraElement::path(&f, Path::loop_power(q, 0, 3))));
        assert!(!ideal.contains(&AlgebraElement::path(&f, Path::loop_power(q, 0, 1))));
    }

    #[test]
    fn nilpotency_index_of_truncated_polynomial_ring() {
        for m in 2..6 {
            let pres = one_loop(&[m], None);
            assert_eq!(loop_nilpotency_index(&pres, 0).unwrap(), m);
        }
    }

    #[test]
    fn non_monomial_generator_is_not_normalized() {
        let mut q = Quiver::new();
        q.add_vertex("x").unwrap();
        q.add_arrow("e", 0, 0).unwrap();
        let e2 = Path::loop_power(&q, 0, 2);
        let e3 = Path::loop_power(&q, 0, 3);
        let pres = BoundQuiverPresentation::new(
            q.clone(),
            vec![Relation::monomial(e2.clone()).unwrap()],
            None,
        )
        .unwrap();
        let mixed = Relation::from_int_terms([(1, e2.clone()), (1, e3.clone())]).unwrap();
        assert!(is_minimal_relation_set(std::slice::from_ref(&mixed), &pres).unwrap());
        assert!(!is_normalized(&[mixed], &pres).unwrap());
        assert!(is_normalized(&[Relation::monomial(e2).unwrap()], &pres).unwrap());
        let redundant = Relation::monomial(e3).unwrap();
        assert!(matches!(
            is_normalized(&[redundant], &pres),
            Err(Error::NotGenerating(_))
        ));
    }

    #[test]
    fn ext2_rejects_equal_vertices() {
        let pres = one_loop(&[2], None);
        assert!(ext2_dimension(&pres, pres.relations(), 0, 0).is_err());
    }
}
