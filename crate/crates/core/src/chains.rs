//! Downward closed maximal chains on fans.
//!
//! On a finite fan a downward closed maximal chain is the same thing as a
//! linear extension of the tree order: the links are the initial segments
//! `{first i vertices}`. [`ChainedFan`] stores the permutation only.

use std::collections::HashSet;
use std::ops::ControlFlow;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::epi::{FanEpi, MapSearch, Mode};
use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex, ROOT};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChainedFanSpec", into = "ChainedFanSpec")]
pub struct ChainedFan {
    fan: Fan,
    order: Vec<Vertex>,
    position: Vec<usize>,
}

/// Wire form: `{"fan": {...}, "order": [vertex ids]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainedFanSpec {
    pub fan: Fan,
    pub order: Vec<Vertex>,
}

impl TryFrom<ChainedFanSpec> for ChainedFan {
    type Error = Error;

    fn try_from(spec: ChainedFanSpec) -> Result<Self> {
        ChainedFan::new(spec.fan, spec.order)
    }
}

impl From<ChainedFan> for ChainedFanSpec {
    fn from(c: ChainedFan) -> Self {
        ChainedFanSpec {
            fan: c.fan,
            order: c.order,
        }
    }
}

impl ChainedFan {
    /// Validates that `order` is a linear extension of the tree order
    /// starting at the root.
    pub fn new(fan: Fan, order: Vec<Vertex>) -> Result<ChainedFan> {
        let n = fan.vertex_count();
        if order.len() != n {
            return Err(Error::NotChain(format!("order lists {} of {n} vertices", order.len())));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, size: n });
            }
            if position[v] != usize::MAX {
                return Err(Error::NotChain(format!("vertex {v} listed twice")));
            }
            position[v] = i;
        }
        for v in fan.vertices() {
            if let Some(p) = fan.parent(v) {
                if position[p] > position[v] {
                    return Err(Error::NotChain(format!(
                        "vertex {v} precedes its parent {p}; initial segment not downward closed"
                    )));
                }
            }
        }
        Ok(ChainedFan { fan, order, position })
    }

    /// The chain listing branch 0 completely, then branch 1, and so on.
    pub fn canonical(fan: &Fan) -> ChainedFan {
        ChainedFan::new(fan.clone(), fan.vertices().collect()).expect("id order is a linear extension")
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    /// Position of `v` in the induced linear order.
    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    /// `x <^{A_c} y`.
    pub fn less(&self, x: Vertex, y: Vertex) -> bool {
        self.position[x] < self.position[y]
    }

    /// The `i`-th link (`1 ≤ i ≤ n`), as a membership set.
    pub fn link(&self, i: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.fan.vertex_count());
        for &v in &self.order[..i] {
            set.insert(v);
        }
        set
    }

    /// All links, smallest first.
    pub fn links(&self) -> Vec<FixedBitSet> {
        (1..=self.order.len()).map(|i| self.link(i)).collect()
    }
}

/// `(Σ nᵢ)! / Π nᵢ!`, the number of maximal chains on a fan with the given
/// branch lengths.
pub fn multinomial(lengths: &[usize]) -> u128 {
    let mut acc: u128 = 1;
    let mut total = 0u128;
    for &len in lengths {
        for i in 1..=len as u128 {
            total += 1;
            // acc * total / i stays integral: acc is C(total-1 choose …) style
            acc = acc * total / i;
        }
    }
    acc
}

/// Every maximal chain on `fan`, in lexicographic order of the vertex
/// sequence.
pub fn all_maximal_chains(fan: &Fan) -> Vec<ChainedFan> {
    let mut out = Vec::new();
    for_each_linear_extension(fan, &mut |order| {
        out.push(ChainedFan {
            fan: fan.clone(),
            order: order.to_vec(),
            position: invert(order),
        });
        ControlFlow::Continue(())
    });
    out
}

fn invert(order: &[Vertex]) -> Vec<usize> {
    let mut pos = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    pos
}

/// Visits the linear extensions of the tree order in lexicographic order.
pub fn for_each_linear_extension(fan: &Fan, visit: &mut dyn FnMut(&[Vertex]) -> ControlFlow<()>) {
    // next[b] = height of the next unplaced vertex on branch b
    let mut next = vec![1usize; fan.width()];
    let mut order = vec![ROOT];
    fn rec(
        fan: &Fan,
        next: &mut [usize],
        order: &mut Vec<Vertex>,
        visit: &mut dyn FnMut(&[Vertex]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if order.len() == fan.vertex_count() {
            return visit(order);
        }
        for b in 0..next.len() {
            let h = next[b];
            if h > fan.branch_lengths()[b] {
                continue;
            }
            order.push(fan.vertex_at(b, h));
            next[b] += 1;
            let flow = rec(fan, next, order, visit);
            next[b] -= 1;
            order.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }
    let _ = rec(fan, &mut next, &mut order, visit);
}

/// Result of pushing a chain forward along a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainImage {
    /// The image links with repeats removed, each as a sorted vertex list.
    pub links: Vec<Vec<Vertex>>,
    /// Whether the image is a downward closed maximal chain on the target.
    pub valid: bool,
    /// The image as a chained fan when `valid`.
    pub chain: Option<ChainedFan>,
}

/// `{f(C) : C ∈ C^B}` for a vertex map between fans.
pub fn chain_image_of_map(map: &[Vertex], target: &Fan, source_chain: &ChainedFan) -> Result<ChainImage> {
    if map.len() != source_chain.fan.vertex_count() {
        return Err(Error::EndpointMismatch("map does not match the chained source".into()));
    }
    let t = target.vertex_count();
    let mut seen = vec![false; t];
    let mut first_hits = Vec::with_capacity(t);
    let mut links = Vec::new();
    let mut valid = true;
    for &v in &source_chain.order {
        let x = map[v];
        if x >= t {
            return Err(Error::VertexOutOfRange { vertex: x, size: t });
        }
        if !seen[x] {
            seen[x] = true;
            first_hits.push(x);
            if !target.is_downward_closed(&seen) {
                valid = false;
            }
            let mut link = first_hits.clone();
            link.sort_unstable();
            links.push(link);
        }
    }
    valid &= first_hits.len() == t && first_hits[0] == ROOT;
    let chain = if valid {
        Some(ChainedFan {
            fan: target.clone(),
            position: invert(&first_hits),
            order: first_hits,
        })
    } else {
        None
    };
    Ok(ChainImage { links, valid, chain })
}

pub fn chain_image(f: &FanEpi, source_chain: &ChainedFan) -> Result<ChainImage> {
    if f.source() != source_chain.fan() {
        return Err(Error::EndpointMismatch(format!(
            "map source {} differs from chained fan {}",
            f.source(),
            source_chain.fan()
        )));
    }
    chain_image_of_map(f.map(), f.target(), source_chain)
}

/// `f(C^B) = C^A`.
pub fn is_chain_epimorphism(f: &FanEpi, source: &ChainedFan, target: &ChainedFan) -> Result<bool> {
    if f.target() != target.fan() {
        return Err(Error::EndpointMismatch(format!(
            "map target {} differs from chained fan {}",
            f.target(),
            target.fan()
        )));
    }
    let image = chain_image(f, source)?;
    Ok(image.chain.is_some_and(|c| c.order == target.order))
}

/// Same as [`is_chain_epimorphism`] for a raw map, including the
/// epimorphism check itself.
pub fn is_chain_epimorphism_map(
    map: &[Vertex],
    source: &ChainedFan,
    target: &ChainedFan,
    mode: Mode,
) -> Result<bool> {
    if !crate::epi::is_epimorphism(map, source.fan(), target.fan(), mode)? {
        return Ok(false);
    }
    let image = chain_image_of_map(map, target.fan(), source)?;
    Ok(image.chain.is_some_and(|c| c.order == target.order))
}

/// Whether `map` is a surjective monotone map of the induced linear orders
/// `(B, ≤^B) → (A, ≤^A)`.
pub fn preserves_linear_order(map: &[Vertex], source: &ChainedFan, target: &ChainedFan) -> bool {
    let imgs: Vec<usize> = source.order.iter().map(|&v| target.position[map[v]]).collect();
    let mut hit = vec![false; target.fan.vertex_count()];
    map.iter().for_each(|&x| hit[x] = true);
    imgs.windows(2).all(|w| w[0] <= w[1]) && hit.iter().all(|&h| h)
}

/// Chain-preserving epimorphisms between chained fans, sorted
/// lexicographically by map word.
pub fn chain_epimorphism_maps(source: &ChainedFan, target: &ChainedFan, mode: Mode) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let search = MapSearch {
        order: Some(source.order()),
        first_hits: Some(target.order()),
        ..MapSearch::new(source.fan(), target.fan(), mode)
    };
    crate::epi::search_maps(&search, &mut |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalInfo {
    pub is_canonical: bool,
    /// Branch indices in the order the chain exhausts them.
    pub branch_order: Option<Vec<usize>>,
    /// Canonical and all branches of equal height.
    pub in_fcc: bool,
}

/// Whether the chain exhausts branches one at a time.
pub fn canonical_structure(chain: &ChainedFan) -> CanonicalInfo {
    let fan = chain.fan();
    let mut branch_order: Vec<usize> = Vec::new();
    let mut canonical = true;
    for &v in &chain.order[1..] {
        let b = fan.branch_of(v).expect("non-root");
        match branch_order.last() {
            Some(&last) if last == b => {}
            _ => {
                if branch_order.contains(&b) {
                    canonical = false;
                    break;
                }
                branch_order.push(b);
            }
        }
    }
    CanonicalInfo {
        is_canonical: canonical,
        in_fcc: canonical && fan.has_equal_heights(),
        branch_order: canonical.then_some(branch_order),
    }
}

/// Completes a chain of downward closed sets to a maximal one.
///
/// Between consecutive input sets the least admissible vertex id is added
/// first, so the completion is deterministic.
pub fn extend_to_maximal(fan: &Fan, partial: &[Vec<Vertex>]) -> Result<ChainedFan> {
    let n = fan.vertex_count();
    let mut sets: Vec<Vec<bool>> = Vec::with_capacity(partial.len());
    for set in partial {
        let mut members = vec![false; n];
        for &v in set {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, size: n });
            }
            members[v] = true;
        }
        if set.is_empty() {
            return Err(Error::NotChain("links must be non-empty".into()));
        }
        if !fan.is_downward_closed(&members) {
            return Err(Error::NotChain(format!("{set:?} is not downward closed")));
        }
        sets.push(members);
    }
    sets.sort_by_key(|s| s.iter().filter(|&&m| m).count());
    for w in sets.windows(2) {
        if w[0].iter().zip(&w[1]).any(|(&a, &b)| a && !b) {
            return Err(Error::NotChain("input sets are not nested".into()));
        }
    }
    sets.push(vec![true; n]);
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for goal in &sets {
        loop {
            let next = fan
                .vertices()
                .find(|&v| goal[v] && !placed[v] && fan.parent(v).is_none_or(|p| placed[p]));
            match next {
                Some(v) => {
                    placed[v] = true;
                    order.push(v);
                }
                None => break,
            }
        }
    }
    ChainedFan::new(fan.clone(), order)
}

/// Finds a maximal chain `C^B` on the source of `f` with `f(C^B) = C^A`.
///
/// When every preimage `f⁻¹(C)` is downward closed the preimage chain is
/// extended greedily; otherwise a memoized depth-first search runs over
/// linear extensions whose first-hit order matches `C^A`.
pub fn preimage_chain(f: &FanEpi, target: &ChainedFan) -> Result<ChainedFan> {
    if f.target() != target.fan() {
        return Err(Error::EndpointMismatch("map target differs from chained fan".into()));
    }
    let source = f.source();
    let n = source.vertex_count();
    let preimages: Vec<Vec<Vertex>> = (1..=target.order.len())
        .map(|i| {
            let link = target.link(i);
            source.vertices().filter(|&v| link.contains(f.apply(v))).collect()
        })
        .collect();
    let fast = preimages.iter().all(|set| {
        let mut members = vec![false; n];
        set.iter().for_each(|&v| members[v] = true);
        source.is_downward_closed(&members)
    });
    if fast {
        if let Ok(chain) = extend_to_maximal(source, &preimages) {
            if is_chain_epimorphism(f, &chain, target)? {
                return Ok(chain);
            }
        }
    }

    struct Search<'a> {
        f: &'a FanEpi,
        target: &'a ChainedFan,
        placed: FixedBitSet,
        seen: Vec<bool>,
        covered: usize,
        order: Vec<Vertex>,
        dead: HashSet<FixedBitSet>,
        explored: u64,
    }
    fn rec(s: &mut Search<'_>) -> bool {
        let source = s.f.source();
        if s.order.len() == source.vertex_count() {
            return true;
        }
        if s.dead.contains(&s.placed) {
            return false;
        }
        s.explored += 1;
        for v in source.vertices() {
            if s.placed.contains(v) || !source.parent(v).is_some_and(|p| s.placed.contains(p)) {
                continue;
            }
            let x = s.f.apply(v);
            let fresh = !s.seen[x];
            if fresh && s.target.order[s.covered] != x {
                continue;
            }
            s.placed.insert(v);
            s.order.push(v);
            if fresh {
                s.seen[x] = true;
                s.covered += 1;
            }
            if rec(s) {
                return true;
            }
            if fresh {
                s.seen[x] = false;
                s.covered -= 1;
            }
            s.order.pop();
            s.placed.set(v, false);
        }
        s.dead.insert(s.placed.clone());
        false
    }
    let mut placed = FixedBitSet::with_capacity(n);
    placed.insert(ROOT);
    let mut seen = vec![false; target.fan.vertex_count()];
    seen[ROOT] = true;
    let mut s = Search {
        f,
        target,
        placed,
        seen,
        covered: 1,
        order: vec![ROOT],
        dead: HashSet::new(),
        explored: 0,
    };
    if rec(&mut s) {
        let chain = ChainedFan::new(source.clone(), s.order)?;
        debug_assert!(is_chain_epimorphism(f, &chain, target)?);
        Ok(chain)
    } else {
        Err(Error::NoWitness(format!(
            "no maximal chain on {} maps onto the given chain; {} search states exhausted",
            source, s.explored
        )))
    }
}

/// An epimorphism of chained fans: `f(C^B) = C^A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ChainEpiSpec", into = "ChainEpiSpec")]
pub struct ChainEpi {
    source: ChainedFan,
    target: ChainedFan,
    epi: FanEpi,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChainEpiSpec {
    pub source: ChainedFan,
    pub target: ChainedFan,
    pub map: Vec<Vertex>,
    pub mode: Mode,
}

impl TryFrom<ChainEpiSpec> for ChainEpi {
    type Error = Error;

    fn try_from(spec: ChainEpiSpec) -> Result<Self> {
        ChainEpi::new(spec.source, spec.target, spec.map, spec.mode)
    }
}

impl From<ChainEpi> for ChainEpiSpec {
    fn from(c: ChainEpi) -> Self {
        ChainEpiSpec {
            map: c.epi.map().to_vec(),
            mode: c.epi.mode(),
            source: c.source,
            target: c.target,
        }
    }
}

impl ChainEpi {
    pub fn new(source: ChainedFan, target: ChainedFan, map: Vec<Vertex>, mode: Mode) -> Result<ChainEpi> {
        let epi = FanEpi::new(source.fan().clone(), target.fan().clone(), map, mode)?;
        ChainEpi::from_epi(epi, source, target)
    }

    pub fn from_epi(epi: FanEpi, source: ChainedFan, target: ChainedFan) -> Result<ChainEpi> {
        if epi.source() != source.fan() {
            return Err(Error::EndpointMismatch("map source differs from chained fan".into()));
        }
        if !is_chain_epimorphism(&epi, &source, &target)? {
            return Err(Error::NotEpimorphism(format!(
                "{:?} does not map the chain {:?} onto {:?}",
                epi.map(),
                source.order(),
                target.order()
            )));
        }
        Ok(ChainEpi { source, target, epi })
    }

    pub fn identity(chain: &ChainedFan, mode: Mode) -> ChainEpi {
        ChainEpi {
            source: chain.clone(),
            target: chain.clone(),
            epi: FanEpi::identity(chain.fan(), mode),
        }
    }

    pub fn source(&self) -> &ChainedFan {
        &self.source
    }

    pub fn target(&self) -> &ChainedFan {
        &self.target
    }

    pub fn epi(&self) -> &FanEpi {
        &self.epi
    }

    pub fn map(&self) -> &[Vertex] {
        self.epi.map()
    }

    pub fn mode(&self) -> Mode {
        self.epi.mode()
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.epi.apply(v)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &ChainEpi) -> Result<ChainEpi> {
        if inner.target != self.source {
            return Err(Error::EndpointMismatch("inner target differs from outer source".into()));
        }
        Ok(ChainEpi {
            source: inner.source.clone(),
            target: self.target.clone(),
            epi: self.epi.compose(&inner.epi)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epi::Mode;

    fn fan(lengths: &[usize]) -> Fan {
        Fan::from_branches(lengths).unwrap()
    }

    /// Oracle: all permutations of the vertices filtered by downward closure
    /// of every initial segment.
    fn brute_force_chain_count(f: &Fan) -> usize {
        fn perms(rest: &mut Vec<usize>, acc: &mut Vec<usize>, f: &Fan, count: &mut usize) {
            if rest.is_empty() {
                let mut members = vec![false; f.vertex_count()];
                let ok = acc.iter().all(|&v| {
                    members[v] = true;
                    f.is_downward_closed(&members)
                });
                if ok {
                    *count += 1;
                }
                return;
            }
            for i in 0..rest.len() {
                let v = rest.remove(i);
                acc.push(v);
                perms(rest, acc, f, count);
                acc.pop();
                rest.insert(i, v);
            }
        }
        let mut count = 0;
        perms(&mut f.vertices().collect(), &mut Vec::new(), f, &mut count);
        count
    }

    #[test]
    fn chain_counts_small() {
        assert_eq!(all_maximal_chains(&fan(&[2])).len(), 1);
        assert_eq!(all_maximal_chains(&fan(&[1, 1])).len(), 2);
        assert_eq!(all_maximal_chains(&fan(&[2, 1])).len(), 3);
        assert_eq!(brute_force_chain_count(&fan(&[1, 1])), 2);
        assert_eq!(brute_force_chain_count(&fan(&[2, 1])), 3);
        assert_eq!(multinomial(&[2, 1]), 3);
        assert_eq!(multinomial(&[3, 3, 3]), 1680);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let chains = all_maximal_chains(&fan(&[2, 2]));
        let orders: Vec<_> = chains.iter().map(|c| c.order().to_vec()).collect();
        let mut sorted = orders.clone();
        sorted.sort();
        assert_eq!(orders, sorted);
    }

    fn remark_data() -> (FanEpi, ChainedFan, ChainedFan) {
        let b = fan(&[2]);
        let a = fan(&[1]);
        let phi = FanEpi::new(b.clone(), a.clone(), vec![0, 1, 0], Mode::Symmetrized).unwrap();
        (phi, ChainedFan::canonical(&b), ChainedFan::canonical(&a))
    }

    #[test]
    fn fold_back_map_preserves_chains_but_not_orders() {
        let (phi, bc, ac) = remark_data();
        let image = chain_image(&phi, &bc).unwrap();
        assert_eq!(image.links, vec![vec![0], vec![0, 1]]);
        assert!(image.valid);
        assert!(is_chain_epimorphism(&phi, &bc, &ac).unwrap());
        assert!(!preserves_linear_order(phi.map(), &bc, &ac));
    }

    #[test]
    fn identity_and_point_images() {
        let f = fan(&[2, 1]);
        for c in all_maximal_chains(&f) {
            let id = FanEpi::identity(&f, Mode::Symmetrized);
            assert_eq!(chain_image(&id, &c).unwrap().chain.unwrap(), c);
            assert!(is_chain_epimorphism(&id, &c, &c).unwrap());
            let pt = FanEpi::to_point(&f, Mode::Symmetrized);
            assert_eq!(chain_image(&pt, &c).unwrap().links, vec![vec![ROOT]]);
        }
    }

    #[test]
    fn canonical_examples() {
        let f = fan(&[2, 1]);
        let c = ChainedFan::new(f.clone(), vec![0, 1, 2, 3]).unwrap();
        let info = canonical_structure(&c);
        assert!(info.is_canonical);
        assert_eq!(info.branch_order, Some(vec![0, 1]));
        assert!(!info.in_fcc);
        for c in all_maximal_chains(&fan(&[1, 1])) {
            assert!(canonical_structure(&c).is_canonical);
            assert!(canonical_structure(&c).in_fcc);
        }
        let g = fan(&[2, 2]);
        let interleaved = ChainedFan::new(g, vec![0, 1, 3, 2, 4]).unwrap();
        assert!(!canonical_structure(&interleaved).is_canonical);
    }

    #[test]
    fn invalid_orders_rejected() {
        let f = fan(&[2]);
        assert!(ChainedFan::new(f.clone(), vec![0, 2, 1]).is_err());
        assert!(ChainedFan::new(f.clone(), vec![0, 1]).is_err());
        assert!(ChainedFan::new(f, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn extend_examples() {
        let f = fan(&[1, 1]);
        let c = extend_to_maximal(&f, &[vec![0]]).unwrap();
        assert_eq!(c.order(), &[0, 1, 2]);
        assert_eq!(extend_to_maximal(&f, &[]).unwrap().order(), &[0, 1, 2]);
        let full = ChainedFan::new(f.clone(), vec![0, 2, 1]).unwrap();
        let links: Vec<Vec<usize>> = full.links().iter().map(|l| l.ones().collect()).collect();
        assert_eq!(extend_to_maximal(&f, &links).unwrap(), full);
        assert!(extend_to_maximal(&f, &[vec![1]]).is_err());
        assert!(extend_to_maximal(&f, &[vec![0, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn preimage_examples() {
        let f = fan(&[2, 1]);
        for c in all_maximal_chains(&f) {
            let id = FanEpi::identity(&f, Mode::Symmetrized);
            assert_eq!(preimage_chain(&id, &c).unwrap(), c);
        }
        // monotone collapse of a height-2 branch onto height 1
        let b = fan(&[2]);
        let a = fan(&[1]);
        let collapse = FanEpi::new(b.clone(), a.clone(), vec![0, 0, 1], Mode::Directed).unwrap();
        let ac = ChainedFan::canonical(&a);
        let pre = preimage_chain(&collapse, &ac).unwrap();
        assert!(is_chain_epimorphism(&collapse, &pre, &ac).unwrap());
        // the fold-back map: naive preimage {b1, b3} is not downward closed
        let (phi, _, ac) = remark_data();
        let pre = preimage_chain(&phi, &ac).unwrap();
        assert_eq!(pre.order(), &[0, 1, 2]);
        assert_eq!(chain_image(&phi, &pre).unwrap().chain.unwrap(), ac);
    }

    #[test]
    fn chain_epi_enumeration_matches_filter() {
        for b in crate::fan::fans_up_to(4) {
            for a in crate::fan::fans_up_to(4) {
                for bc in all_maximal_chains(&b) {
                    for ac in all_maximal_chains(&a) {
                        for mode in [Mode::Directed, Mode::Symmetrized] {
                            let filtered: Vec<_> = crate::epi::epimorphism_maps(&b, &a, mode)
                                .into_iter()
                                .filter(|m| is_chain_epimorphism_map(m, &bc, &ac, mode).unwrap())
                                .collect();
                            assert_eq!(chain_epimorphism_maps(&bc, &ac, mode), filtered);
                        }
                    }
                }
            }
        }
    }
}
