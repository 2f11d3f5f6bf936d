//! Relations: linear combinations of parallel paths of length at least two.
//!
//! Coefficients are kept as exact rationals so one presentation serves every
//! field; they are mapped into a concrete field on evaluation.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::format_rational;
use crate::quiver::{ArrowId, Path, Quiver, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    /// Sorted by path, paths distinct, coefficients nonzero.
    terms: Vec<(BigRational, Path)>,
}

impl Relation {
    /// Normalizes the terms (merging repeated paths, dropping zeros, sorting)
    /// and checks length and parallelism.
    pub fn new(terms: impl IntoIterator<Item = (BigRational, Path)>) -> Result<Self> {
        let mut merged: BTreeMap<Path, BigRational> = BTreeMap::new();
        for (c, p) in terms {
            *merged.entry(p).or_insert_with(BigRational::zero) += c;
        }
        let terms: Vec<(BigRational, Path)> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (c, p))
            .collect();
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidRelation("relation is zero".into()));
        };
        let (s, t) = (first.source(), first.target());
        for (_, p) in &terms {
            if p.len() < 2 {
                return Err(Error::InvalidRelation(format!(
                    "path of length {} in a relation (length at least 2 required)",
                    p.len()
                )));
            }
            if p.source() != s || p.target() != t {
                return Err(Error::InvalidRelation(
                    "relation terms are not parallel".into(),
                ));
            }
        }
        Ok(Self { terms })
    }

    pub fn monomial(path: Path) -> Result<Self> {
        Self::new([(BigRational::one(), path)])
    }

    /// `sum c_i * path_i` with integer coefficients.
    pub fn from_int_terms(terms: impl IntoIterator<Item = (i64, Path)>) -> Result<Self> {
        Self::new(
            terms
                .into_iter()
                .map(|(c, p)| (BigRational::from_integer(c.into()), p)),
        )
    }

    pub fn terms(&self) -> &[(BigRational, Path)] {
        &self.terms
    }

    pub fn source(&self) -> VertexId {
        self.terms[0].1.source()
    }

    pub fn target(&self) -> VertexId {
        self.terms[0].1.target()
    }

    /// Minimum degree over the terms.
    pub fn degree(&self, q: &Quiver) -> usize {
        self.terms
            .iter()
            .map(|(_, p)| p.degree(q))
            .min()
            .expect("relations are nonempty")
    }

    pub fn min_length(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).min().unwrap_or(0)
    }

    pub fn max_length(&self) -> usize {
        self.terms.iter().map(|(_, p)| p.len()).max().unwrap_or(0)
    }

    pub fn arrows_used(&self) -> BTreeSet<ArrowId> {
        self.terms
            .iter()
            .flat_map(|(_, p)| p.arrows().iter().copied())
            .collect()
    }

    /// Whether this relation is `c * path` for a single path.
    pub fn as_monomial(&self) -> Option<&Path> {
        match self.terms.as_slice() {
            [(_, p)] => Some(p),
            _ => None,
        }
    }

    /// Splits the relation by the set of vertices each term visits. The
    /// components sum back to `self`.
    pub fn decompose_by_support(&self, q: &Quiver) -> BTreeMap<BTreeSet<VertexId>, Relation> {
        let mut parts: BTreeMap<BTreeSet<VertexId>, Vec<(BigRational, Path)>> = BTreeMap::new();
        for (c, p) in &self.terms {
            parts
                .entry(p.support(q))
                .or_default()
                .push((c.clone(), p.clone()));
        }
        parts
            .into_iter()
            .map(|(k, terms)| (k, Relation { terms }))
            .collect()
    }

    /// Sum of relations with the same endpoints (used to check decompositions).
    pub fn sum<'a>(parts: impl IntoIterator<Item = &'a Relation>) -> Result<Relation> {
        Relation::new(parts.into_iter().flat_map(|r| r.terms.iter().cloned()))
    }

    /// Written form, e.g. `e0^2*a1 + e0*a1*e1 - 1/2*a1*e1^2`.
    pub fn display(&self, q: &Quiver) -> String {
        let mut out = String::new();
        for (i, (c, p)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !magnitude.is_one() {
                out.push_str(&format_rational(&magnitude));
                out.push('*');
            }
            out.push_str(&p.display(q));
        }
        out
    }
}
