//! Bound quiver presentations `kQ / I` with a truncation bound `N` such that
//! every path of length `N` lies in `I`.

use crate::algebra::{ideal_span, AlgebraElement, IdealPart, PathBasis};
use crate::error::{Error, Result};
use crate::field::Rationals;
use crate::quiver::{Path, Quiver};
use crate::relation::Relation;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoundQuiverPresentation {
    quiver: Quiver,
    relations: Vec<Relation>,
    truncation_bound: usize,
}

impl BoundQuiverPresentation {
    /// Validates the relations against the quiver and the truncation bound.
    /// Without an explicit bound one is derived from the loop powers, see
    /// [`derive_truncation_bound`].
    pub fn new(quiver: Quiver, relations: Vec<Relation>, bound: Option<usize>) -> Result<Self> {
        for r in &relations {
            for (_, p) in r.terms() {
                if p.arrows().iter().any(|&a| a >= quiver.num_arrows())
                    || p.source() >= quiver.num_vertices()
                {
                    return Err(Error::InvalidPresentation(
                        "relation uses an arrow outside the quiver".into(),
                    ));
                }
            }
        }
        let truncation_bound = match bound {
            Some(n) => n,
            None => derive_truncation_bound(&quiver, &relations).ok_or_else(|| {
                Error::InvalidPresentation(
                    "no truncation bound given and none can be derived: every vertex needs at \
                     most one loop with a monomial power relation and the quiver must be weakly \
                     triangular"
                        .into(),
                )
            })?,
        };
        if truncation_bound == 0 {
            return Err(Error::InvalidPresentation("truncation bound must be positive".into()));
        }
        let pres = Self {
            quiver,
            relations,
            truncation_bound,
        };
        pres.check_truncation()?;
        Ok(pres)
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn truncation_bound(&self) -> usize {
        self.truncation_bound
    }

    /// Every path of length `N` must lie in `I`; checked modulo `J^(N+1)`.
    fn check_truncation(&self) -> Result<()> {
        let n = self.truncation_bound;
        let long = self.quiver.paths_of_length(n);
        if long.is_empty() {
            return Ok(());
        }
        let f = Rationals;
        let basis = PathBasis::new(&self.quiver, n + 1);
        let span = ideal_span(&f, &self.quiver, &self.relations, &basis, IdealPart::Whole, None)?;
        for p in long {
            let v = basis.coordinates(&AlgebraElement::path(&f, p.clone()));
            if !span.contains(&v) {
                return Err(Error::InvalidPresentation(format!(
                    "path {} of length {n} is not in the ideal",
                    p.display(&self.quiver)
                )));
            }
        }
        Ok(())
    }

    pub fn is_weakly_triangular(&self) -> bool {
        self.quiver.is_weakly_triangular()
    }

    /// Bound only by loop relations, with at most one loop per vertex.
    pub fn is_simple_loop_extension(&self) -> bool {
        let q = &self.quiver;
        let one_loop_each = (0..q.num_vertices()).all(|x| q.loops_at(x).len() <= 1);
        let loop_relations_only = self
            .relations
            .iter()
            .all(|r| r.terms().iter().all(|(_, p)| p.degree(q) == 0));
        one_loop_each && loop_relations_only
    }
}

/// `N = sum_x (m_x - 1) + D + 1`, where `m_x` is the exponent of the loop
/// power relation at `x` and `D` the longest loop-free path. Requires a weakly
/// triangular quiver with at most one loop per vertex, each loop bounded by a
/// monomial power relation.
pub fn derive_truncation_bound(q: &Quiver, relations: &[Relation]) -> Option<usize> {
    let longest = q.longest_loop_free_path()?;
    let mut total = longest + 1;
    for x in 0..q.num_vertices() {
        let loops = q.loops_at(x);
        match loops.as_slice() {
            [] => {}
            [a] => {
                let m = relations
                    .iter()
                    .filter_map(|r| r.as_monomial())
                    .filter(|p| p.arrows().iter().all(|b| b == a))
                    .map(Path::len)
                    .min()?;
                total += m - 1;
            }
            _ => return None,
        }
    }
    Some(total)
}
