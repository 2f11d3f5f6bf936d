//! Linear algebra inside the truncated path algebra `kQ / J^L`, where `J` is
//! the arrow ideal. Paths of length `< L` form the basis.

use std::collections::{BTreeMap, HashMap};

use crate::error::Result;
use crate::field::Field;
use crate::quiver::{Path, Quiver, VertexId};
use crate::relation::Relation;

/// A linear combination of paths with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement<F: Field> {
    field: F,
    terms: BTreeMap<Path, F::Elem>,
}

impl<F: Field> AlgebraElement<F> {
    pub fn zero(field: &F) -> Self {
        Self {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(field: &F, terms: impl IntoIterator<Item = (F::Elem, Path)>) -> Self {
        let mut e = Self::zero(field);
        for (c, p) in terms {
            e.add_term(c, p);
        }
        e
    }

    pub fn path(field: &F, p: Path) -> Self {
        Self::from_terms(field, [(field.one(), p)])
    }

    pub fn from_relation(field: &F, r: &Relation) -> Result<Self> {
        let mut terms = Vec::with_capacity(r.terms().len());
        for (c, p) in r.terms() {
            terms.push((field.from_rational(c)?, p.clone()));
        }
        Ok(Self::from_terms(field, terms))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, &F::Elem)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, c: F::Elem, p: Path) {
        let f = &self.field;
        let entry = self.terms.entry(p);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                if !f.is_zero(&c) {
                    v.insert(c);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(o.get(), &c);
                if f.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (p, c) in &rhs.terms {
            out.add_term(c.clone(), p.clone());
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::from_terms(
            &self.field,
            self.terms
                .iter()
                .map(|(p, x)| (self.field.mul(x, c), p.clone())),
        )
    }

    pub fn neg(&self) -> Self {
        self.scale(&self.field.neg(&self.field.one()))
    }

    /// Product in the path algebra (`rhs` applied first), dropping paths of
    /// length `>= bound` when given.
    pub fn mul(&self, rhs: &Self, bound: Option<usize>) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f);
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                if bound.is_some_and(|n| p.len() + q.len() >= n) {
                    continue;
                }
                if let Some(pq) = p.compose(q) {
                    out.add_term(f.mul(a, b), pq);
                }
            }
        }
        out
    }

    /// Drops every path of length `>= bound`.
    pub fn truncate(&self, bound: usize) -> Self {
        Self {
            field: self.field.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.len() < bound)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(p, c)| format!("{}*{}", self.field.display(c), p.display(q)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The path basis of `kQ / J^bound`.
#[derive(Clone, Debug)]
pub struct PathBasis {
    bound: usize,
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
}

impl PathBasis {
    pub fn new(q: &Quiver, bound: usize) -> Self {
        let paths = q.paths_below(bound);
        let index = paths
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Self {
            bound,
            paths,
            index,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Coordinates of `e` after truncation.
    pub fn coordinates<F: Field>(&self, e: &AlgebraElement<F>) -> Vec<F::Elem> {
        let f = e.field();
        let mut v = vec![f.zero(); self.paths.len()];
        for (p, c) in e.terms() {
            if let Some(i) = self.index_of(p) {
                v[i] = c.clone();
            }
        }
        v
    }

    pub fn element<F: Field>(&self, field: &F, v: &[F::Elem]) -> AlgebraElement<F> {
        AlgebraElement::from_terms(
            field,
            v.iter()
                .zip(&self.paths)
                .map(|(c, p)| (c.clone(), p.clone())),
        )
    }
}

/// A subspace kept in fully reduced echelon form.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    /// (pivot, row) with a 1 at the pivot and 0 at every other row's pivot.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> Subspace<F> {
    pub fn new(field: &F, ambient: usize) -> Self {
        Self {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    fn reduce(&self, v: &mut [F::Elem]) {
        let f = &self.field;
        for (p, row) in &self.rows {
            if f.is_zero(&v[*p]) {
                continue;
            }
            let c = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, mut v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector outside the ambient space");
        let f = self.field.clone();
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&v[p]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(x, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[p]) {
                continue;
            }
            let c = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !f.is_zero(r) {
                    *x = f.sub(x, &f.mul(&c, r));
                }
            }
        }
        self.rows.push((p, v));
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|x| self.field.is_zero(x))
    }

    pub fn contains_subspace(&self, other: &Subspace<F>) -> bool {
        other.rows.iter().all(|(_, r)| self.contains(r))
    }

    pub fn basis(&self) -> Vec<Vec<F::Elem>> {
        let mut rows = self.rows.clone();
        rows.sort_by_key(|(p, _)| *p);
        rows.into_iter().map(|(_, r)| r).collect()
    }
}

/// Which products `p * rho * q` span a two-sided ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealPart {
    /// All multiples: the ideal generated by the relations.
    Whole,
    /// Multiples with `p` or `q` of positive length: `IJ + JI`.
    RadicalMultiples,
}

/// Span of `{ p * rho * q }` inside `kQ / J^bound`, optionally restricted to
/// products from `corner.0` to `corner.1` (source, target).
pub fn ideal_span<F: Field>(
    field: &F,
    q: &Quiver,
    relations: &[Relation],
    basis: &PathBasis,
    part: IdealPart,
    corner: Option<(VertexId, VertexId)>,
) -> Result<Subspace<F>> {
    let bound = basis.bound();
    let mut span = Subspace::new(field, basis.len());
    let all_paths = q.paths_below(bound);
    for rho in relations {
        let r = AlgebraElement::from_relation(field, rho)?;
        let min = rho.min_length();
        for left in all_paths.iter().filter(|p| p.source() == rho.target()) {
            if left.len() + min >= bound {
                continue;
            }
            if corner.is_some_and(|(_, t)| left.target() != t) {
                continue;
            }
            let lr = AlgebraElement::path(field, left.clone()).mul(&r, Some(bound));
            for right in all_paths.iter().filter(|p| p.target() == rho.source()) {
                if left.len() + right.len() + min >= bound {
                    continue;
                }
                if corner.is_some_and(|(s, _)| right.source() != s) {
                    continue;
                }
                if part == IdealPart::RadicalMultiples && left.is_trivial() && right.is_trivial() {
                    continue;
                }
                let prod = lr.mul(&AlgebraElement::path(field, right.clone()), Some(bound));
                if !prod.is_zero() {
                    span.insert(basis.coordinates(&prod));
                }
            }
        }
    }
    Ok(span)
}
