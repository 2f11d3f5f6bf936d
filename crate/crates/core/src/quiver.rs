//! Quivers and paths.
//!
//! A path `a_1 * a_2 * ... * a_l` is written with the last-applied arrow on the
//! left: it is composable when `source(a_i) == target(a_{i+1})`, starts at
//! `source(a_l)` and ends at `target(a_1)`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

impl Arrow {
    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }

    /// 0 for loops, 1 otherwise.
    pub fn degree(&self) -> usize {
        usize::from(!self.is_loop())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId> {
        let name = name.into();
        if self.vertex_index(&name).is_some() {
            return Err(Error::InvalidQuiver(format!("duplicate vertex {name}")));
        }
        self.vertices.push(name);
        Ok(self.vertices.len() - 1)
    }

    pub fn add_arrow(
        &mut self,
        name: impl Into<String>,
        source: VertexId,
        target: VertexId,
    ) -> Result<ArrowId> {
        let name = name.into();
        if self.arrow_index(&name).is_some() {
            return Err(Error::InvalidQuiver(format!("duplicate arrow {name}")));
        }
        if source >= self.vertices.len() || target >= self.vertices.len() {
            return Err(Error::InvalidQuiver(format!(
                "arrow {name} references a missing vertex"
            )));
        }
        self.arrows.push(Arrow {
            name,
            source,
            target,
        });
        Ok(self.arrows.len() - 1)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<ArrowId> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn loops_at(&self, x: VertexId) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].is_loop() && self.arrows[a].source == x)
            .collect()
    }

    pub fn loops(&self) -> Vec<ArrowId> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].is_loop())
            .collect()
    }

    /// Transitive reachability between vertices along arrows (reflexive).
    fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let mut reach = vec![vec![false; n]; n];
        for (x, row) in reach.iter_mut().enumerate() {
            row[x] = true;
        }
        for a in &self.arrows {
            reach[a.source][a.target] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        reach
    }

    /// No oriented cycle has positive degree: no non-loop arrow lies on a cycle.
    pub fn is_weakly_triangular(&self) -> bool {
        let reach = self.reachability();
        self.arrows
            .iter()
            .filter(|a| !a.is_loop())
            .all(|a| !reach[a.target][a.source])
    }

    /// Length of the longest path using only non-loop arrows, `None` if the
    /// loop-free part has a cycle.
    pub fn longest_loop_free_path(&self) -> Option<usize> {
        if !self.is_weakly_triangular() {
            return None;
        }
        let n = self.vertices.len();
        // longest path ending at each vertex, relaxed n times over the DAG
        let mut best = vec![0usize; n];
        for _ in 0..n {
            for a in self.arrows.iter().filter(|a| !a.is_loop()) {
                best[a.target] = best[a.target].max(best[a.source] + 1);
            }
        }
        Some(best.into_iter().max().unwrap_or(0))
    }

    /// All paths of length exactly `len`, in ascending path order.
    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        if len == 0 {
            return (0..self.vertices.len()).map(Path::trivial).collect();
        }
        let mut layer: Vec<Path> = (0..self.arrows.len())
            .map(|a| Path::arrow(self, a))
            .collect();
        for _ in 1..len {
            let mut next = Vec::new();
            for p in &layer {
                // extend on the right: new arrow is applied first
                for (a, arrow) in self.arrows.iter().enumerate() {
                    if arrow.target == p.source {
                        let mut arrows = p.arrows.clone();
                        arrows.push(a);
                        next.push(Path {
                            source: arrow.source,
                            target: p.target,
                            arrows,
                        });
                    }
                }
            }
            layer = next;
        }
        layer.sort();
        layer
    }

    /// All paths of length `< bound`, ascending.
    pub fn paths_below(&self, bound: usize) -> Vec<Path> {
        (0..bound).flat_map(|l| self.paths_of_length(l)).collect()
    }
}

/// A path in a quiver; trivial paths carry their vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    source: VertexId,
    target: VertexId,
    arrows: Vec<ArrowId>,
}

impl Path {
    pub fn trivial(x: VertexId) -> Self {
        Self {
            source: x,
            target: x,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> Self {
        let arrow = q.arrow(a);
        Self {
            source: arrow.source,
            target: arrow.target,
            arrows: vec![a],
        }
    }

    /// Path from arrows in written order (leftmost applied last).
    pub fn from_arrows(q: &Quiver, arrows: Vec<ArrowId>) -> Result<Self> {
        let Some(&last) = arrows.last() else {
            return Err(Error::InvalidPath(
                "empty arrow list; use Path::trivial".into(),
            ));
        };
        if let Some(&bad) = arrows.iter().find(|&&a| a >= q.num_arrows()) {
            return Err(Error::InvalidPath(format!("unknown arrow index {bad}")));
        }
        for w in arrows.windows(2) {
            if q.arrow(w[0]).source != q.arrow(w[1]).target {
                return Err(Error::InvalidPath(format!(
                    "{}*{} is not composable",
                    q.arrow(w[0]).name,
                    q.arrow(w[1]).name
                )));
            }
        }
        Ok(Self {
            source: q.arrow(last).source,
            target: q.arrow(arrows[0]).target,
            arrows,
        })
    }

    /// Power of a loop; the zeroth power is the trivial path at its vertex.
    pub fn loop_power(q: &Quiver, a: ArrowId, k: usize) -> Self {
        let arrow = q.arrow(a);
        assert!(arrow.is_loop(), "{} is not a loop", arrow.name);
        Self {
            source: arrow.source,
            target: arrow.source,
            arrows: vec![a; k],
        }
    }

    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn target(&self) -> VertexId {
        self.target
    }

    pub fn arrows(&self) -> &[ArrowId] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// Number of non-loop arrows.
    pub fn degree(&self, q: &Quiver) -> usize {
        self.arrows.iter().map(|&a| q.arrow(a).degree()).sum()
    }

    /// `self * rhs`: first `rhs`, then `self`. `None` when not composable.
    pub fn compose(&self, rhs: &Path) -> Option<Path> {
        if self.source != rhs.target {
            return None;
        }
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&rhs.arrows);
        Some(Path {
            source: rhs.source,
            target: self.target,
            arrows,
        })
    }

    /// Whether the non-trivial path `other` occurs as a contiguous block of arrows.
    pub fn contains_subpath(&self, other: &Path) -> bool {
        if other.is_trivial() {
            return self == other;
        }
        self.arrows
            .windows(other.arrows.len())
            .any(|w| w == other.arrows.as_slice())
    }

    /// Vertices visited by the path.
    pub fn support(&self, q: &Quiver) -> BTreeSet<VertexId> {
        let mut s = BTreeSet::from([self.source, self.target]);
        for &a in &self.arrows {
            s.insert(q.arrow(a).source);
            s.insert(q.arrow(a).target);
        }
        s
    }

    /// Written form with powers collapsed, e.g. `e0^2*a1*e1`; `1_x` for trivial paths.
    pub fn display(&self, q: &Quiver) -> String {
        if self.is_trivial() {
            return format!("1_{}", q.vertices()[self.source]);
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.arrows.len() {
            let a = self.arrows[i];
            let mut run = 1;
            while i + run < self.arrows.len() && self.arrows[i + run] == a {
                run += 1;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(&q.arrow(a).name);
            if run > 1 {
                let _ = write!(out, "^{run}");
            }
            i += run;
        }
        out
    }
}

/// Length first, then arrow ids lexicographically, then endpoints.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.arrows
            .len()
            .cmp(&other.arrows.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.source.cmp(&other.source))
            .then_with(|| self.target.cmp(&other.target))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
