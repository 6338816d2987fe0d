//! Finite rooted fans.
//!
//! A fan is a root together with a list of disjoint branches. Vertex ids are
//! assigned deterministically: the root is `0`, then the vertices of branch
//! `0` bottom to top, then branch `1`, and so on. Every parent therefore has
//! a smaller id than its child.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Vertex = usize;

/// The root of every fan.
pub const ROOT: Vertex = 0;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FanSpec", into = "FanSpec")]
pub struct Fan {
    lengths: Vec<usize>,
    // first vertex id of each branch
    offsets: Vec<usize>,
    // per vertex: (branch, depth); the root has depth 0 and branch usize::MAX
    branch: Vec<usize>,
    depth: Vec<usize>,
}

/// Wire form of a fan: `{"branches": [lengths]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FanSpec {
    pub branches: Vec<usize>,
}

impl TryFrom<FanSpec> for Fan {
    type Error = crate::error::Error;

    fn try_from(spec: FanSpec) -> Result<Self> {
        Fan::from_branches(&spec.branches)
    }
}

impl From<Fan> for FanSpec {
    fn from(fan: Fan) -> Self {
        FanSpec { branches: fan.lengths }
    }
}

const NO_BRANCH: usize = usize::MAX;

impl Fan {
    /// Builds the fan whose branches have the given heights.
    ///
    /// An empty list gives the one-point fan. Zero lengths are rejected;
    /// absent branches are encoded by omission.
    pub fn from_branches(lengths: &[usize]) -> Result<Fan> {
        if let Some(i) = lengths.iter().position(|&l| l == 0) {
            return invalid(format!("branch {i} has length 0"));
        }
        let total: usize = lengths.iter().sum();
        let mut offsets = Vec::with_capacity(lengths.len());
        let mut branch = Vec::with_capacity(total + 1);
        let mut depth = Vec::with_capacity(total + 1);
        branch.push(NO_BRANCH);
        depth.push(0);
        for (b, &len) in lengths.iter().enumerate() {
            offsets.push(branch.len());
            for h in 1..=len {
                branch.push(b);
                depth.push(h);
            }
        }
        Ok(Fan {
            lengths: lengths.to_vec(),
            offsets,
            branch,
            depth,
        })
    }

    pub fn point() -> Fan {
        Fan::from_branches(&[]).expect("empty branch list is valid")
    }

    /// `width` branches, all of the same `height`; the one-point fan when
    /// either is zero.
    pub fn uniform(width: usize, height: usize) -> Fan {
        if height == 0 || width == 0 {
            return Fan::point();
        }
        Fan::from_branches(&vec![height; width]).expect("positive lengths")
    }

    pub fn vertex_count(&self) -> usize {
        self.branch.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.vertex_count()
    }

    pub fn branch_lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn width(&self) -> usize {
        self.lengths.len()
    }

    pub fn height(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }

    pub fn is_point(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn has_equal_heights(&self) -> bool {
        self.lengths.windows(2).all(|w| w[0] == w[1])
    }

    /// Branch index of `v`, `None` for the root.
    pub fn branch_of(&self, v: Vertex) -> Option<usize> {
        match self.branch[v] {
            NO_BRANCH => None,
            b => Some(b),
        }
    }

    /// Distance from the root.
    pub fn depth(&self, v: Vertex) -> usize {
        self.depth[v]
    }

    /// Vertex at height `h` (1-based) on branch `b`; the root for `h == 0`.
    pub fn vertex_at(&self, b: usize, h: usize) -> Vertex {
        if h == 0 {
            ROOT
        } else {
            debug_assert!(h <= self.lengths[b]);
            self.offsets[b] + h - 1
        }
    }

    /// Non-root vertices of branch `b`, bottom to top.
    pub fn branch_vertices(&self, b: usize) -> std::ops::Range<Vertex> {
        self.offsets[b]..self.offsets[b] + self.lengths[b]
    }

    /// Top vertex of branch `b`.
    pub fn endpoint(&self, b: usize) -> Vertex {
        self.offsets[b] + self.lengths[b] - 1
    }

    /// Whether `v` is the top of its branch (the root only for the point).
    pub fn is_endpoint(&self, v: Vertex) -> bool {
        match self.branch_of(v) {
            None => self.is_point(),
            Some(b) => self.depth[v] == self.lengths[b],
        }
    }

    pub fn parent(&self, v: Vertex) -> Option<Vertex> {
        match self.depth[v] {
            0 => None,
            1 => Some(ROOT),
            _ => Some(v - 1),
        }
    }

    /// Immediate successors of `v`.
    pub fn children(&self, v: Vertex) -> Vec<Vertex> {
        if v == ROOT {
            self.offsets.clone()
        } else if self.is_endpoint(v) {
            Vec::new()
        } else {
            vec![v + 1]
        }
    }

    /// Neighbours in the symmetrized graph, excluding `v` itself, ascending.
    pub fn neighbours(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        if let Some(p) = self.parent(v) {
            out.push(p);
        }
        out.extend(self.children(v));
        out
    }

    /// `R(s, t)`: `s == t` or `t` is an immediate successor of `s`.
    pub fn r(&self, s: Vertex, t: Vertex) -> bool {
        s == t || self.parent(t) == Some(s)
    }

    /// Symmetrization of [`Fan::r`].
    pub fn r_sym(&self, s: Vertex, t: Vertex) -> bool {
        self.r(s, t) || self.r(t, s)
    }

    /// Tree order: `s ⪯ t` iff `s` lies on the path from the root to `t`.
    pub fn precedes(&self, s: Vertex, t: Vertex) -> bool {
        s == ROOT || (self.branch[s] == self.branch[t] && self.depth[s] <= self.depth[t])
    }

    /// The interval `[root, v]` of the tree order, bottom to top.
    pub fn segment(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = vec![ROOT];
        if let Some(b) = self.branch_of(v) {
            out.extend(self.offsets[b]..=v);
        }
        out
    }

    /// Whether the vertex set (given as a membership slice) is closed
    /// downwards under the tree order.
    pub fn is_downward_closed(&self, members: &[bool]) -> bool {
        self.vertices()
            .all(|v| !members[v] || self.parent(v).is_none_or(|p| members[p]))
    }
}

impl std::fmt::Display for Fan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "fan{:?}", self.lengths)
    }
}

/// All fans with at most `max_vertices` vertices, one per branch-length
/// sequence (so `[2,1]` and `[1,2]` both appear), ordered by size and then
/// lexicographically.
pub fn fans_up_to(max_vertices: usize) -> Vec<Fan> {
    fn compositions(total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if total == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=total {
            prefix.push(first);
            compositions(total - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for size in 1..=max_vertices {
        let mut comps = Vec::new();
        compositions(size - 1, &mut Vec::new(), &mut comps);
        comps.sort();
        out.extend(comps.iter().map(|c| Fan::from_branches(c).expect("positive parts")));
    }
    out
}
