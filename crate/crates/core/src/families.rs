//! The named algebras on the quiver `Q(n)` (vertices `0`, `1`; loops `e0` at
//! `0` and `e1` at `1`; arrows `a1..an: 1 -> 0`), the truncated polynomial
//! rings `k[x]/(x^m)`, and the explicit variety isomorphisms between them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{ArrowBlock, ExtensionTriple};
use crate::field::Field;
use crate::hom::{HomMorphism, HomTriple};
use crate::matrix::Matrix;
use crate::presentation::BoundQuiverPresentation;
use crate::quiver::{ArrowId, Path, Quiver};
use crate::relation::Relation;
use crate::rep::{DimensionVector, Representation};

pub const E0: ArrowId = 0;
pub const E1: ArrowId = 1;

/// Arrow id of `a_i` (1-based) in `Q(n)`.
pub fn alpha(i: usize) -> ArrowId {
    1 + i
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FamilyDescriptor {
    /// `A(n, m, l)`: `e0^m`, `e1^m`, `rho^(l)`.
    A { n: usize, m: usize, l: usize },
    /// `A'(n, m0, m1)`: `e0^m0`, `e1^m1`.
    Aprime { n: usize, m0: usize, m1: usize },
    /// One arrow `a1`, bound by `e0^m`, `e1^m`, `e0*a1 - a1*e1`.
    AprimeCommuting { m: usize },
    /// `k[x]/(x^m)` on one vertex with loop `e`.
    Lambda { m: usize },
    /// `B_n = A(n, m, m - 1)`.
    B { n: usize, m: usize },
}

impl FamilyDescriptor {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidFamily(format!("{self}: {msg}")));
        match *self {
            Self::A { n, m, l } => {
                if m < 2 || n < 1 || l < 1 {
                    return bad("needs m >= 2, n >= 1, l >= 1");
                }
            }
            Self::Aprime { m0, m1, .. } => {
                if m0 < 1 || m1 < 1 {
                    return bad("needs m0, m1 >= 1");
                }
            }
            Self::AprimeCommuting { m } => {
                if m < 2 {
                    return bad("needs m >= 2");
                }
            }
            Self::Lambda { m } => {
                if m < 1 {
                    return bad("needs m >= 1");
                }
            }
            Self::B { n, m } => {
                if m < 2 || n < 1 {
                    return bad("needs m >= 2, n >= 1");
                }
            }
        }
        Ok(())
    }

    /// The same algebra as an `A(n, m, l)` when it is one.
    pub fn as_a(&self) -> Option<(usize, usize, usize)> {
        match *self {
            Self::A { n, m, l } => Some((n, m, l)),
            Self::B { n, m } => Some((n, m, m - 1)),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::A { n, m, l } => write!(f, "A({n},{m},{l})"),
            Self::Aprime { n, m0, m1 } => write!(f, "A'({n},{m0},{m1})"),
            Self::AprimeCommuting { m } => write!(f, "A'comm({m})"),
            Self::Lambda { m } => write!(f, "Lambda({m})"),
            Self::B { n, m } => write!(f, "B_{n}({m})"),
        }
    }
}

/// `Q(n)`; a loop is left out when its power bound is 1.
fn two_vertex_quiver(n: usize, loops: (bool, bool)) -> Quiver {
    let mut q = Quiver::new();
    q.add_vertex("0").expect("fresh vertex");
    q.add_vertex("1").expect("fresh vertex");
    if loops.0 {
        q.add_arrow("e0", 0, 0).expect("fresh arrow");
    }
    if loops.1 {
        q.add_arrow("e1", 1, 1).expect("fresh arrow");
    }
    for i in 1..=n {
        q.add_arrow(format!("a{i}"), 1, 0).expect("fresh arrow");
    }
    q
}

fn arrow(q: &Quiver, name: &str) -> ArrowId {
    q.arrow_index(name).expect("family arrow exists")
}

fn power(q: &Quiver, name: &str, m: usize) -> Relation {
    Relation::monomial(Path::loop_power(q, arrow(q, name), m)).expect("power of length >= 2")
}

/// `rho^(l) = sum_{i=0}^{l} e0^(l-i) a1 e1^i`.
pub fn rho(q: &Quiver, l: usize) -> Relation {
    let (e0, e1, a1) = (arrow(q, "e0"), arrow(q, "e1"), arrow(q, "a1"));
    let terms = (0..=l).map(|i| {
        let mut arrows = vec![e0; l - i];
        arrows.push(a1);
        arrows.extend(std::iter::repeat_n(e1, i));
        (1, Path::from_arrows(q, arrows).expect("composable"))
    });
    Relation::from_int_terms(terms).expect("nonzero relation of length >= 2")
}

pub fn build_family(desc: &FamilyDescriptor) -> Result<BoundQuiverPresentation> {
    desc.validate()?;
    match *desc {
        FamilyDescriptor::A { n, m, l } => {
            let q = two_vertex_quiver(n, (true, true));
            let rels = vec![power(&q, "e0", m), power(&q, "e1", m), rho(&q, l)];
            BoundQuiverPresentation::new(q, rels, Some(2 * m))
        }
        FamilyDescriptor::B { n, m } => build_family(&FamilyDescriptor::A { n, m, l: m - 1 }),
        FamilyDescriptor::Aprime { n, m0, m1 } => {
            let q = two_vertex_quiver(n, (m0 > 1, m1 > 1));
            let mut rels = Vec::new();
            if m0 > 1 {
                rels.push(power(&q, "e0", m0));
            }
            if m1 > 1 {
                rels.push(power(&q, "e1", m1));
            }
            BoundQuiverPresentation::new(q, rels, Some(m0 + m1))
        }
        FamilyDescriptor::AprimeCommuting { m } => {
            let q = two_vertex_quiver(1, (true, true));
            let (e0, e1, a1) = (arrow(&q, "e0"), arrow(&q, "e1"), arrow(&q, "a1"));
            let comm = Relation::from_int_terms([
                (1, Path::from_arrows(&q, vec![e0, a1])?),
                (-1, Path::from_arrows(&q, vec![a1, e1])?),
            ])?;
            let rels = vec![power(&q, "e0", m), power(&q, "e1", m), comm];
            BoundQuiverPresentation::new(q, rels, Some(2 * m))
        }
        FamilyDescriptor::Lambda { m } => {
            let mut q = Quiver::new();
            q.add_vertex("0")?;
            let mut rels = Vec::new();
            if m > 1 {
                q.add_arrow("e", 0, 0)?;
                rels.push(power(&q, "e", m));
            }
            BoundQuiverPresentation::new(q, rels, Some(m))
        }
    }
}

/// Decision table for geometric irreducibility: `A(n, m, l)` exactly when
/// `l` is `1` or `m - 1`, every `A'`. The commuting algebra is `A(1, m, 1)`
/// after the twist and `k[x]/(x^m)` is a block of `A'(0, m, m)`.
pub fn is_geometrically_irreducible_family(desc: &FamilyDescriptor) -> Result<bool> {
    desc.validate()?;
    Ok(match *desc {
        FamilyDescriptor::A { m, l, .. } => l == 1 || l == m - 1,
        FamilyDescriptor::B { .. }
        | FamilyDescriptor::Aprime { .. }
        | FamilyDescriptor::AprimeCommuting { .. }
        | FamilyDescriptor::Lambda { .. } => true,
    })
}

fn same_quiver(rep_pres: &BoundQuiverPresentation, expected: &BoundQuiverPresentation, what: &str) -> Result<()> {
    if rep_pres.quiver() != expected.quiver() {
        return Err(Error::InvalidRepresentation(format!(
            "representation does not live on the quiver of {what}"
        )));
    }
    Ok(())
}

/// `e1 -> -e1`, carrying representations of the commuting algebra to
/// `A(1, m, 1)` and back. Input and output are checked.
pub fn twist_iso<F: Field>(
    rep: &Representation<F>,
    target: &Arc<BoundQuiverPresentation>,
) -> Result<Representation<F>> {
    same_quiver(rep.presentation(), target, "the twisted algebra")?;
    rep.validate()?;
    let field = rep.field();
    let minus_one = field.neg(&field.one());
    let mut mats = rep.mats().to_vec();
    mats[E1] = mats[E1].scale(&minus_one);
    let out = Representation::new(target, field, rep.dims().clone(), mats)?;
    out.validate()?;
    Ok(out)
}

fn one_vertex<F: Field>(
    lambda: &Arc<BoundQuiverPresentation>,
    field: &F,
    m: &Matrix<F>,
) -> Result<Representation<F>> {
    Representation::new(lambda, field, DimensionVector::new(vec![m.rows()]), vec![m.clone()])
}

/// `e0`, `e1`, `a1` at their family positions on two vertices.
fn check_one_arrow_family(pres: &BoundQuiverPresentation) -> Result<()> {
    let q = pres.quiver();
    let ok = q.num_vertices() == 2
        && q.num_arrows() == 3
        && [("e0", E0), ("e1", E1), ("a1", alpha(1))]
            .iter()
            .all(|&(name, id)| q.arrow_index(name) == Some(id));
    if !ok {
        return Err(Error::InvalidRepresentation(
            "expected a representation on the quiver with e0, e1, a1".into(),
        ));
    }
    Ok(())
}

fn check_lambda(lambda: &BoundQuiverPresentation) -> Result<()> {
    let q = lambda.quiver();
    if q.num_vertices() != 1 || q.num_arrows() != 1 {
        return Err(Error::InvalidPresentation(
            "expected k[x]/(x^m) with one loop".into(),
        ));
    }
    Ok(())
}

/// `M -> (M_e1, M_e0, M_a1)`: a representation of the commuting algebra of
/// dimension `(d, e)` as a point of `H(e, d)` over `k[x]/(x^m)`.
pub fn lemma41_hom<F: Field>(
    rep: &Representation<F>,
    lambda: &Arc<BoundQuiverPresentation>,
) -> Result<HomTriple<F>> {
    check_lambda(lambda)?;
    check_one_arrow_family(rep.presentation())?;
    rep.validate()?;
    let field = rep.field();
    let v = one_vertex(lambda, field, rep.mat(E1))?;
    let w = one_vertex(lambda, field, rep.mat(E0))?;
    v.validate()?;
    w.validate()?;
    HomTriple::new(v, w, HomMorphism::new(vec![rep.mat(alpha(1)).clone()]))
}

pub fn lemma41_hom_inverse<F: Field>(
    t: &HomTriple<F>,
    comm: &Arc<BoundQuiverPresentation>,
) -> Result<Representation<F>> {
    check_one_arrow_family(comm)?;
    t.f.check_intertwining(&t.v, &t.w)?;
    t.v.validate()?;
    t.w.validate()?;
    let dims = DimensionVector::new(vec![t.w.dims().get(0), t.v.dims().get(0)]);
    let mats = vec![t.w.mat(0).clone(), t.v.mat(0).clone(), t.f.map(0).clone()];
    let rep = Representation::new(comm, t.v.field(), dims, mats)?;
    rep.validate()?;
    Ok(rep)
}

/// `M -> (M_e1, M_e0, M_a1)`: a representation of `B_1 = A(1, m, m-1)` of
/// dimension `(d, e)` as a point of `E(e, d)` over `k[x]/(x^m)`.
pub fn lemma41_ext<F: Field>(
    rep: &Representation<F>,
    lambda: &Arc<BoundQuiverPresentation>,
) -> Result<ExtensionTriple<F>> {
    check_lambda(lambda)?;
    check_one_arrow_family(rep.presentation())?;
    rep.validate()?;
    let field = rep.field();
    let u = one_vertex(lambda, field, rep.mat(E1))?;
    let v = one_vertex(lambda, field, rep.mat(E0))?;
    ExtensionTriple::new(u, v, ArrowBlock::new(vec![rep.mat(alpha(1)).clone()]))
}

pub fn lemma41_ext_inverse<F: Field>(
    t: &ExtensionTriple<F>,
    b1: &Arc<BoundQuiverPresentation>,
) -> Result<Representation<F>> {
    check_one_arrow_family(b1)?;
    let dims = DimensionVector::new(vec![t.v.dims().get(0), t.u.dims().get(0)]);
    let mats = vec![t.v.mat(0).clone(), t.u.mat(0).clone(), t.z.block(0).clone()];
    let rep = Representation::new(b1, t.u.field(), dims, mats)?;
    rep.validate()?;
    Ok(rep)
}

/// `rep_{B_n}(d, e) = rep_{B_1}(d, e) x M_{dxe}^{n-1}`: keeps `e0, e1, a1`
/// and returns `a2..an` as free blocks.
pub fn bn_split<F: Field>(
    rep: &Representation<F>,
    b1: &Arc<BoundQuiverPresentation>,
) -> Result<(Representation<F>, Vec<Matrix<F>>)> {
    check_one_arrow_family(b1)?;
    rep.validate()?;
    let mats = rep.mats();
    if rep.presentation().quiver().num_vertices() != 2 || mats.len() < 3 {
        return Err(Error::InvalidRepresentation(
            "expected representations of B_n and B_1".into(),
        ));
    }
    let first = Representation::new(b1, rep.field(), rep.dims().clone(), mats[..3].to_vec())?;
    first.validate()?;
    Ok((first, mats[3..].to_vec()))
}

pub fn bn_join<F: Field>(
    first: &Representation<F>,
    free: &[Matrix<F>],
    bn: &Arc<BoundQuiverPresentation>,
) -> Result<Representation<F>> {
    let mut mats = first.mats().to_vec();
    mats.extend(free.iter().cloned());
    let rep = Representation::new(bn, first.field(), first.dims().clone(), mats)?;
    rep.validate()?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn a_one_two_one_relations() {
        let pres = build_family(&FamilyDescriptor::A { n: 1, m: 2, l: 1 }).unwrap();
        let q = pres.quiver();
        let shown: Vec<String> = pres.relations().iter().map(|r| r.display(q)).collect();
        assert_eq!(shown, ["e0^2", "e1^2", "e0*a1 + a1*e1"]);
        assert_eq!(pres.truncation_bound(), 4);
    }

    #[test]
    fn rho_has_l_plus_one_terms() {
        let pres = build_family(&FamilyDescriptor::A { n: 2, m: 3, l: 2 }).unwrap();
        let r = &pres.relations()[2];
        assert_eq!(r.display(pres.quiver()), "e0^2*a1 + e0*a1*e1 + a1*e1^2");
    }

    #[test]
    fn commuting_and_lambda() {
        let pres = build_family(&FamilyDescriptor::AprimeCommuting { m: 2 }).unwrap();
        let q = pres.quiver();
        let shown: Vec<String> = pres.relations().iter().map(|r| r.display(q)).collect();
        assert_eq!(shown, ["e0^2", "e1^2", "e0*a1 - a1*e1"]);
        let lam = build_family(&FamilyDescriptor::Lambda { m: 3 }).unwrap();
        assert_eq!(lam.relations()[0].display(lam.quiver()), "e^3");
        let one = build_family(&FamilyDescriptor::Lambda { m: 1 }).unwrap();
        assert_eq!(one.quiver().num_arrows(), 0);
    }

    #[test]
    fn parameter_ranges() {
        assert!(build_family(&FamilyDescriptor::A { n: 1, m: 1, l: 1 }).is_err());
        assert!(build_family(&FamilyDescriptor::A { n: 0, m: 2, l: 1 }).is_err());
        assert!(build_family(&FamilyDescriptor::Aprime { n: 0, m0: 1, m1: 1 }).is_ok());
        assert!(build_family(&FamilyDescriptor::Aprime { n: 2, m0: 0, m1: 1 }).is_err());
    }

    #[test]
    fn irreducibility_table() {
        let a = |n, m, l| is_geometrically_irreducible_family(&FamilyDescriptor::A { n, m, l }).unwrap();
        assert!(a(1, 3, 1));
        assert!(a(1, 3, 2));
        assert!(!a(1, 4, 2));
    }

    #[test]
    fn twist_and_lemma_round_trips() {
        let f = PrimeField::new(3).unwrap();
        let comm = Arc::new(build_family(&FamilyDescriptor::AprimeCommuting { m: 2 }).unwrap());
        let a = Arc::new(build_family(&FamilyDescriptor::A { n: 1, m: 2, l: 1 }).unwrap());
        let lam = Arc::new(build_family(&FamilyDescriptor::Lambda { m: 2 }).unwrap());
        let n = Matrix::from_i64(&f, 2, 2, &[0, 1, 0, 0]).unwrap();
        let id = Matrix::identity(&f, 2);
        let m = Representation::new(&comm, &f, DimensionVector::new(vec![2, 2]), vec![n.clone(), n.clone(), id]).unwrap();
        assert!(m.is_valid());
        let t = twist_iso(&m, &a).unwrap();
        assert_eq!(t.mat(E1), &Matrix::from_i64(&f, 2, 2, &[0, 2, 0, 0]).unwrap());
        assert_eq!(twist_iso(&t, &comm).unwrap(), m);

        let h = lemma41_hom(&m, &lam).unwrap();
        assert_eq!(lemma41_hom_inverse(&h, &comm).unwrap(), m);

        let b1 = Arc::new(build_family(&FamilyDescriptor::B { n: 1, m: 2 }).unwrap());
        let q = Rationals;
        let five = Matrix::from_i64(&q, 1, 1, &[5]).unwrap();
        let zero = Matrix::zeros(&q, 1, 1);
        let r = Representation::new(&b1, &q, DimensionVector::new(vec![1, 1]), vec![zero.clone(), zero, five]).unwrap();
        assert!(r.is_valid());
        let e = lemma41_ext(&r, &Arc::new(build_family(&FamilyDescriptor::Lambda { m: 2 }).unwrap())).unwrap();
        assert_eq!(lemma41_ext_inverse(&e, &b1).unwrap(), r);
        let (first, free) = bn_split(&r, &b1).unwrap();
        assert!(free.is_empty());
        assert_eq!(first, r);
    }
}
