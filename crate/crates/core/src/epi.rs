//! Epimorphisms between fans.
//!
//! Two readings of "preserves the immediate-successor relation" are
//! supported. [`Mode::Directed`] requires `R(s,t) ⇒ R(f s, f t)` for the
//! directed relation; [`Mode::Symmetrized`] only asks that every edge of the
//! source lands on an edge or a loop of the undirected graph. Both modes
//! require the root to be preserved and the map to be onto.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex, ROOT};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Directed,
    #[default]
    Symmetrized,
}

impl Mode {
    /// Whether the source edge `parent → child` may land on `(x, y)`.
    pub fn edge_ok(self, target: &Fan, x: Vertex, y: Vertex) -> bool {
        match self {
            Mode::Directed => target.r(x, y),
            Mode::Symmetrized => target.r_sym(x, y),
        }
    }

    /// Admissible images of a child whose parent maps to `x`, ascending.
    pub fn successors(self, target: &Fan, x: Vertex) -> Vec<Vertex> {
        let mut out = match self {
            Mode::Directed => target.children(x),
            Mode::Symmetrized => target.neighbours(x),
        };
        out.push(x);
        out.sort_unstable();
        out
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "directed" => Ok(Mode::Directed),
            "symmetrized" => Ok(Mode::Symmetrized),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

/// Outcome of checking a vertex map against the epimorphism conditions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiCheck {
    pub root_preserved: bool,
    pub surjective: bool,
    pub edges_preserved: bool,
    /// Every target edge has an edge preimage (under the mode's relation).
    pub lifting: bool,
}

impl EpiCheck {
    pub fn is_epimorphism(&self) -> bool {
        self.root_preserved && self.surjective && self.edges_preserved
    }
}

/// Checks `map: source → target` under `mode`.
///
/// Values outside the target are an error rather than a negative answer.
pub fn check_epimorphism(map: &[Vertex], source: &Fan, target: &Fan, mode: Mode) -> Result<EpiCheck> {
    if map.len() != source.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "map has {} entries, source has {} vertices",
            map.len(),
            source.vertex_count()
        )));
    }
    if let Some(&v) = map.iter().find(|&&v| v >= target.vertex_count()) {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            size: target.vertex_count(),
        });
    }
    let mut hit = vec![false; target.vertex_count()];
    for &v in map {
        hit[v] = true;
    }
    let edges_preserved = source
        .vertices()
        .filter_map(|v| source.parent(v).map(|p| (p, v)))
        .all(|(p, v)| mode.edge_ok(target, map[p], map[v]));
    let mut lifted = vec![false; target.vertex_count()];
    for v in source.vertices() {
        if let Some(p) = source.parent(v) {
            let (x, y) = (map[p], map[v]);
            if target.parent(y) == Some(x) {
                lifted[y] = true;
            } else if mode == Mode::Symmetrized && target.parent(x) == Some(y) {
                lifted[x] = true;
            }
        }
    }
    let lifting = target.vertices().skip(1).all(|v| lifted[v]);
    Ok(EpiCheck {
        root_preserved: map[ROOT] == ROOT,
        surjective: hit.iter().all(|&h| h),
        edges_preserved,
        lifting,
    })
}

pub fn is_epimorphism(map: &[Vertex], source: &Fan, target: &Fan, mode: Mode) -> Result<bool> {
    Ok(check_epimorphism(map, source, target, mode)?.is_epimorphism())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FanEpi {
    source: Fan,
    target: Fan,
    map: Vec<Vertex>,
    mode: Mode,
}

/// Wire form of an epimorphism: `{"map": [...], "mode": "..."}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpiRecord {
    pub map: Vec<Vertex>,
    pub mode: Mode,
}

impl FanEpi {
    pub fn new(source: Fan, target: Fan, map: Vec<Vertex>, mode: Mode) -> Result<FanEpi> {
        let check = check_epimorphism(&map, &source, &target, mode)?;
        if !check.is_epimorphism() {
            return Err(Error::NotEpimorphism(format!("{check:?} for map {map:?} {source} → {target}")));
        }
        Ok(FanEpi {
            source,
            target,
            map,
            mode,
        })
    }

    pub fn identity(fan: &Fan, mode: Mode) -> FanEpi {
        FanEpi {
            source: fan.clone(),
            target: fan.clone(),
            map: fan.vertices().collect(),
            mode,
        }
    }

    /// The constant map onto the one-point fan.
    pub fn to_point(fan: &Fan, mode: Mode) -> FanEpi {
        FanEpi {
            source: fan.clone(),
            target: Fan::point(),
            map: vec![ROOT; fan.vertex_count()],
            mode,
        }
    }

    pub fn source(&self) -> &Fan {
        &self.source
    }

    pub fn target(&self) -> &Fan {
        &self.target
    }

    pub fn map(&self) -> &[Vertex] {
        &self.map
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FanEpi) -> Result<FanEpi> {
        if inner.target != self.source {
            return Err(Error::EndpointMismatch(format!(
                "cannot compose {} → {} after {} → {}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        Ok(FanEpi {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: inner.map.iter().map(|&v| self.map[v]).collect(),
            mode: self.mode,
        })
    }

    /// Vertices of the source mapped to `a`.
    pub fn fibre(&self, a: Vertex) -> Vec<Vertex> {
        self.source.vertices().filter(|&v| self.map[v] == a).collect()
    }

    pub fn record(&self) -> EpiRecord {
        EpiRecord {
            map: self.map.clone(),
            mode: self.mode,
        }
    }

    pub fn from_record(source: Fan, target: Fan, record: EpiRecord) -> Result<FanEpi> {
        FanEpi::new(source, target, record.map, record.mode)
    }
}

/// Constraints for [`search_maps`].
pub struct MapSearch<'a> {
    pub source: &'a Fan,
    pub target: &'a Fan,
    pub mode: Mode,
    /// Order in which source vertices are assigned; must list every parent
    /// before its children. Defaults to id order.
    pub order: Option<&'a [Vertex]>,
    /// When set, target vertices must be hit for the first time in exactly
    /// this order while the source is assigned in `order` (the chain
    /// condition for chained fans).
    pub first_hits: Option<&'a [Vertex]>,
    /// Extra per-vertex restriction `(source vertex, candidate image)`.
    pub allowed: Option<&'a dyn Fn(Vertex, Vertex) -> bool>,
}

impl<'a> MapSearch<'a> {
    pub fn new(source: &'a Fan, target: &'a Fan, mode: Mode) -> Self {
        MapSearch {
            source,
            target,
            mode,
            order: None,
            first_hits: None,
            allowed: None,
        }
    }
}

/// Backtracking search over root-preserving, edge-consistent surjections.
///
/// Candidates for a vertex are restricted to the mode-admissible images of
/// its parent's image, so only edge-consistent partial maps are ever
/// extended. `visit` sees each complete epimorphism and may stop the search.
pub fn search_maps(search: &MapSearch<'_>, visit: &mut dyn FnMut(&[Vertex]) -> ControlFlow<()>) {
    let source = search.source;
    let target = search.target;
    let id_order: Vec<Vertex>;
    let order = match search.order {
        Some(o) => o,
        None => {
            id_order = source.vertices().collect();
            &id_order
        }
    };
    let n = order.len();
    if n == 0 || order[0] != ROOT {
        return;
    }
    if let Some(allowed) = search.allowed {
        if !allowed(ROOT, ROOT) {
            return;
        }
    }
    if let Some(hits) = search.first_hits {
        if hits.first() != Some(&ROOT) || hits.len() != target.vertex_count() {
            return;
        }
    }
    let succ: Vec<Vec<Vertex>> = target.vertices().map(|x| search.mode.successors(target, x)).collect();
    let mut map = vec![usize::MAX; source.vertex_count()];
    let mut hit_count = vec![0usize; target.vertex_count()];
    map[ROOT] = ROOT;
    hit_count[ROOT] = 1;

    struct State<'s> {
        order: &'s [Vertex],
        succ: &'s [Vec<Vertex>],
        source: &'s Fan,
        hits: Option<&'s [Vertex]>,
        allowed: Option<&'s dyn Fn(Vertex, Vertex) -> bool>,
        map: Vec<Vertex>,
        hit_count: Vec<usize>,
        covered: usize,
    }

    fn rec(st: &mut State<'_>, pos: usize, visit: &mut dyn FnMut(&[Vertex]) -> ControlFlow<()>) -> ControlFlow<()> {
        let total = st.hit_count.len();
        if pos == st.order.len() {
            if st.covered == total {
                return visit(&st.map);
            }
            return ControlFlow::Continue(());
        }
        if total - st.covered > st.order.len() - pos {
            return ControlFlow::Continue(());
        }
        let v = st.order[pos];
        let p = st.source.parent(v).expect("non-root vertex");
        let px = st.map[p];
        debug_assert!(px != usize::MAX, "order must list parents first");
        for &x in &st.succ[px] {
            if let Some(allowed) = st.allowed {
                if !allowed(v, x) {
                    continue;
                }
            }
            let fresh = st.hit_count[x] == 0;
            if fresh {
                if let Some(hits) = st.hits {
                    if hits[st.covered] != x {
                        continue;
                    }
                }
            }
            st.map[v] = x;
            st.hit_count[x] += 1;
            if fresh {
                st.covered += 1;
            }
            let flow = rec(st, pos + 1, visit);
            st.hit_count[x] -= 1;
            if fresh {
                st.covered -= 1;
            }
            st.map[v] = usize::MAX;
            flow?;
        }
        ControlFlow::Continue(())
    }

    let mut st = State {
        order,
        succ: &succ,
        source,
        hits: search.first_hits,
        allowed: search.allowed,
        map: std::mem::take(&mut map),
        hit_count: std::mem::take(&mut hit_count),
        covered: 1,
    };
    let _ = rec(&mut st, 1, visit);
}

/// All epimorphism maps `source → target`, lexicographic in the map word.
pub fn epimorphism_maps(source: &Fan, target: &Fan, mode: Mode) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    search_maps(&MapSearch::new(source, target, mode), &mut |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out
}

/// All epimorphisms `source → target`, lexicographic in the map word.
pub fn enumerate_epimorphisms(source: &Fan, target: &Fan, mode: Mode) -> Vec<FanEpi> {
    epimorphism_maps(source, target, mode)
        .into_iter()
        .map(|map| FanEpi {
            source: source.clone(),
            target: target.clone(),
            map,
            mode,
        })
        .collect()
}

/// Every root-preserving map `source → target` (surjective or not), in
/// lexicographic order. Exponential; meant for oracles on tiny fans.
pub fn all_root_preserving_maps(source: &Fan, target: &Fan) -> Vec<Vec<Vertex>> {
    let n = source.vertex_count();
    let t = target.vertex_count();
    let mut out = Vec::new();
    let mut map = vec![ROOT; n];
    loop {
        out.push(map.clone());
        // odometer over positions 1..n
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            map[i] += 1;
            if map[i] < t {
                break;
            }
            map[i] = 0;
        }
    }
}

/// Root-preserving surjections, lexicographic.
pub fn root_preserving_surjections(source: &Fan, target: &Fan) -> Vec<Vec<Vertex>> {
    all_root_preserving_maps(source, target)
        .into_iter()
        .filter(|m| {
            let mut hit = vec![false; target.vertex_count()];
            m.iter().for_each(|&v| hit[v] = true);
            hit.iter().all(|&h| h)
        })
        .collect()
}
