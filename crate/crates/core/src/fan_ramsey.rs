//! The Ramsey property for chained fans with canonical chains and equal
//! branch heights.
//!
//! Epimorphisms `U → S` are encoded as star block sequences `f*` and as
//! tuples of first-reach sets `(F_i^f)`; a colouring of the hom-set is
//! pushed through a size-determined base and the `FIN_k` witness search,
//! and the resulting `g: U → T` is checked by recolouring every composite.
//!
//! Hom-sets use directed epimorphisms: a branch of `U` must climb a single
//! branch of `S` for the encodings to exist.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{canonical_structure, chain_epimorphism_maps, is_chain_epimorphism_map, ChainedFan};
use crate::epi::Mode;
use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex, ROOT};
use crate::fink::{BlockSeq, FinVec};
use crate::ramsey::{
    colouring_count, find_bad_colouring, lelek_number_search, lelek_witness, set_members, size_determined_find,
    size_determined_number_search, BlockDomain, Colouring, Hypergraph, LelekOutcome, LelekParams, Set,
    SetTupleDomain, SizeDeterminedOutcome, SolveOutcome,
};

pub const MODE: Mode = Mode::Directed;

/// Branch order and common height of a chained fan with a canonical chain
/// and equal branch heights.
pub fn fcc_shape(c: &ChainedFan) -> Result<(Vec<usize>, usize)> {
    let info = canonical_structure(c);
    match info.branch_order {
        Some(order) if info.in_fcc => Ok((order, c.fan().height())),
        _ => Err(Error::Precondition(format!(
            "{} with chain {:?} is not canonical with equal heights",
            c.fan(),
            c.order()
        ))),
    }
}

/// All chain-epimorphisms between two chained fans, indexed.
#[derive(Clone, Debug)]
pub struct HomSet {
    pub source: ChainedFan,
    pub target: ChainedFan,
    pub maps: Vec<Vec<Vertex>>,
    index: HashMap<Vec<Vertex>, usize>,
}

impl HomSet {
    pub fn new(source: &ChainedFan, target: &ChainedFan) -> HomSet {
        let maps = chain_epimorphism_maps(source, target, MODE);
        let index = maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        HomSet {
            source: source.clone(),
            target: target.clone(),
            maps,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn index_of(&self, map: &[Vertex]) -> Option<usize> {
        self.index.get(map).copied()
    }
}

/// `outer ∘ inner` as vertex maps.
pub fn compose_maps(outer: &[Vertex], inner: &[Vertex]) -> Vec<Vertex> {
    inner.iter().map(|&v| outer[v]).collect()
}

/// `f*` together with the first-reach sets. `supports[i][j]` is `F_{i+1}^f(j+1)`
/// as a set of heights on branch `j + 1` of the source.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Encoding {
    pub fstar: BlockSeq,
    pub supports: Vec<Vec<Set>>,
}

/// Encodes a directed chain-epimorphism between canonical chained fans of
/// equal heights.
pub fn encode_map(map: &[Vertex], source: &ChainedFan, target: &ChainedFan) -> Result<Encoding> {
    let (u_order, big_n) = fcc_shape(source)?;
    let (s_order, k) = fcc_shape(target)?;
    if big_n > 31 {
        return Err(Error::CapExceeded {
            what: "branch height".into(),
            size: big_n,
            cap: 31,
        });
    }
    if !is_chain_epimorphism_map(map, source, target, MODE)? {
        return Err(Error::Precondition(format!("{map:?} is not a chain-epimorphism")));
    }
    let (u, s) = (source.fan(), target.fan());
    let n = u_order.len();
    let d = s_order.len();
    let mut values = vec![vec![0u8; n]; d];
    let mut supports = vec![vec![0 as Set; n]; d];
    for (j, &ub) in u_order.iter().enumerate() {
        let top = map[u.vertex_at(ub, big_n)];
        let Some(sb) = s.branch_of(top) else {
            continue;
        };
        let i = s_order.iter().position(|&b| b == sb).expect("branch listed");
        let z = s.depth(top);
        values[i][j] = z as u8;
        let mut reached = 0;
        for y in 1..=big_n {
            let img = map[u.vertex_at(ub, y)];
            if img != ROOT && s.branch_of(img) != Some(sb) {
                return Err(Error::Precondition(format!("branch {} leaves a single branch", j + 1)));
            }
            let x = s.depth(img);
            if x > reached {
                supports[i][j] |= 1 << (y - 1);
                reached = x;
            }
        }
    }
    let fstar = BlockSeq::new(k as u8, values.into_iter().map(FinVec::new).collect());
    if !fstar.is_block_star() {
        return Err(Error::Internal(format!("f* = {fstar:?} is not a star block sequence")));
    }
    Ok(Encoding { fstar, supports })
}

/// The map whose first-reach sets are `supports`, or an error if the sets
/// overlap on a branch or exceed the target heights.
pub fn decode_supports(supports: &[Vec<Set>], source: &ChainedFan, target: &ChainedFan) -> Result<Vec<Vertex>> {
    let (u_order, big_n) = fcc_shape(source)?;
    let (s_order, k) = fcc_shape(target)?;
    let (u, s) = (source.fan(), target.fan());
    if supports.len() != s_order.len() || supports.iter().any(|f| f.len() != u_order.len()) {
        return Err(Error::InvalidInput("support tuple has the wrong shape".into()));
    }
    let mut map = vec![ROOT; u.vertex_count()];
    for (j, &ub) in u_order.iter().enumerate() {
        let owners: Vec<usize> = (0..s_order.len()).filter(|&i| supports[i][j] != 0).collect();
        let &[i] = owners.as_slice() else {
            if owners.len() > 1 {
                return Err(Error::InvalidInput(format!("branch {} is claimed twice", j + 1)));
            }
            continue;
        };
        let heights = set_members(supports[i][j]);
        if heights.len() > k || heights.last().is_some_and(|&h| h > big_n) {
            return Err(Error::InvalidInput(format!("first-reach set on branch {} does not fit", j + 1)));
        }
        for y in 1..=big_n {
            let level = heights.iter().filter(|&&h| h <= y).count();
            map[u.vertex_at(ub, y)] = s.vertex_at(s_order[i], level);
        }
    }
    Ok(map)
}

pub fn encode_epi(f: &crate::chains::ChainEpi) -> Result<Encoding> {
    if f.mode() != MODE {
        return Err(Error::Precondition("encodings need directed epimorphisms".into()));
    }
    encode_map(f.map(), f.source(), f.target())
}

/// Source and target of a Ramsey question together with the candidate `U`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RamseyInstance {
    pub s: ChainedFan,
    pub t: ChainedFan,
    pub u: ChainedFan,
    pub r: u8,
}

/// `(d, k)` of `S`, `(m, l)` of `T`, `(n, N)` of `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Shape {
    pub d: usize,
    pub k: usize,
    pub m: usize,
    pub l: usize,
    pub n: usize,
    pub big_n: usize,
}

impl RamseyInstance {
    pub fn new(s: ChainedFan, t: ChainedFan, u: ChainedFan, r: u8) -> Result<RamseyInstance> {
        let inst = RamseyInstance { s, t, u, r };
        let shape = inst.shape()?;
        if shape.l < shape.k || shape.m < shape.d {
            return Err(Error::Precondition("T has no epimorphism onto S".into()));
        }
        if r < 2 {
            return Err(Error::Precondition("need r ≥ 2".into()));
        }
        Ok(inst)
    }

    pub fn shape(&self) -> Result<Shape> {
        let (s, k) = fcc_shape(&self.s)?;
        let (t, l) = fcc_shape(&self.t)?;
        let (u, big_n) = fcc_shape(&self.u)?;
        Ok(Shape {
            d: s.len(),
            k,
            m: t.len(),
            l,
            n: u.len(),
            big_n,
        })
    }

    pub fn params(&self) -> Result<LelekParams> {
        let sh = self.shape()?;
        Ok(LelekParams {
            d: sh.d,
            m: sh.m,
            k: sh.k as u8,
            l: sh.l as u8,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSource {
    Override,
    Computed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BuiltU {
    pub u: ChainedFan,
    pub n: usize,
    pub big_n: usize,
    pub n_source: ParamSource,
    pub big_n_source: ParamSource,
}

/// `U` with `n` branches of height `N`. Missing values are computed by the
/// exact searches, which only finish at tiny parameters.
pub fn build_u(
    s: &ChainedFan,
    t: &ChainedFan,
    r: u8,
    n_override: Option<usize>,
    big_n_override: Option<usize>,
    search_limit: usize,
    budget: u64,
) -> Result<BuiltU> {
    let (s_order, k) = fcc_shape(s)?;
    let (t_order, l) = fcc_shape(t)?;
    let params = LelekParams {
        d: s_order.len(),
        m: t_order.len(),
        k: k as u8,
        l: l as u8,
    };
    params.check()?;
    let (n, n_source) = match n_override {
        Some(n) => (n, ParamSource::Override),
        None => {
            let res = lelek_number_search(&params, r, search_limit, budget)?;
            let n = res.exact.ok_or_else(|| {
                Error::Precondition(format!(
                    "n not determined up to {search_limit} (lower bound {}); pass an override",
                    res.lower_bound
                ))
            })?;
            (n, ParamSource::Computed)
        }
    };
    let (big_n, big_n_source) = match big_n_override {
        Some(v) => (v, ParamSource::Override),
        None => {
            let res = size_determined_number_search(params.d, &vec![k; n], &vec![l; n], r, search_limit, budget)?;
            let v = res.exact.ok_or_else(|| {
                Error::Precondition(format!(
                    "N not determined up to {search_limit} (lower bound {}); pass an override",
                    res.lower_bound
                ))
            })?;
            (v, ParamSource::Computed)
        }
    };
    if n == 0 || big_n == 0 {
        return Err(Error::InvalidInput("U needs at least one branch of positive height".into()));
    }
    Ok(BuiltU {
        u: ChainedFan::canonical(&Fan::uniform(n, big_n)),
        n,
        big_n,
        n_source,
        big_n_source,
    })
}

/// `e0` on the set-tuple domain: `e` transported along `f ↦ (F_i^f)`, colour
/// 0 off the image.
pub fn induced_e0(hom: &HomSet, e: &Colouring, domain: &SetTupleDomain) -> Result<Colouring> {
    if !e.is_valid(hom.len()) {
        return Err(Error::InvalidInput("colouring does not cover the hom-set".into()));
    }
    // tuples that encode no map get the first colour
    let mut colours = vec![0u8; domain.len()];
    for (i, map) in hom.maps.iter().enumerate() {
        let enc = encode_map(map, &hom.source, &hom.target)?;
        let idx = domain
            .index_of(&enc.supports)
            .ok_or_else(|| Error::Internal("first-reach tuple outside the set-tuple domain".into()))?;
        colours[idx] = e.get(i);
    }
    Ok(Colouring { r: e.r, colours })
}

/// `e*(f*) = e(f)` for `f` with first-reach sets inside the chosen bases.
/// Fails with `IllDefined` naming two maps that disagree, or an element of
/// the domain with no representative.
pub fn induced_estar(hom: &HomSet, e: &Colouring, bases: &[Set], domain: &BlockDomain) -> Result<Colouring> {
    let mut colours: Vec<Option<(u8, usize)>> = vec![None; domain.len()];
    for (i, map) in hom.maps.iter().enumerate() {
        let enc = encode_map(map, &hom.source, &hom.target)?;
        let inside = enc
            .supports
            .iter()
            .all(|f| f.iter().zip(bases).all(|(&s, &b)| s & !b == 0));
        if !inside {
            continue;
        }
        let idx = domain
            .index_of(&enc.fstar)
            .ok_or_else(|| Error::Internal("f* outside the star domain".into()))?;
        match colours[idx] {
            None => colours[idx] = Some((e.get(i), i)),
            Some((c, j)) if c != e.get(i) => {
                return Err(Error::IllDefined(format!(
                    "maps {:?} and {:?} share f* but have colours {c} and {}",
                    hom.maps[j],
                    map,
                    e.get(i)
                )))
            }
            Some(_) => {}
        }
    }
    let colours = colours
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.map(|(c, _)| c)
                .ok_or_else(|| Error::IllDefined(format!("no map inside the bases encodes {:?}", domain.elements[i])))
        })
        .collect::<Result<Vec<u8>>>()?;
    Ok(Colouring { r: e.r, colours })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamseyCertificate {
    pub g: Vec<Vertex>,
    pub colour: u8,
    /// Hom-set indices of `h ∘ g` for every `h: T → S`.
    pub composites: Vec<usize>,
    pub bases: Vec<Vec<usize>>,
    pub d_seq: BlockSeq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    SizeDetermined,
    InducedColouring,
    Witness,
    Lift,
    Verification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RamseyOutcome {
    Found(RamseyCertificate),
    Failed { stage: Stage, detail: String },
}

/// Precomputed pieces shared by every colouring of one instance.
#[derive(Clone, Debug)]
pub struct RamseyContext {
    pub instance: RamseyInstance,
    pub shape: Shape,
    pub hom_us: HomSet,
    pub hom_ts: HomSet,
    pub set_domain: SetTupleDomain,
    pub block_domain: BlockDomain,
}

impl RamseyContext {
    pub fn new(instance: RamseyInstance, cap: usize) -> Result<RamseyContext> {
        let shape = instance.shape()?;
        let hom_us = HomSet::new(&instance.u, &instance.s);
        let hom_ts = HomSet::new(&instance.t, &instance.s);
        let set_domain = SetTupleDomain::new(shape.big_n, &vec![shape.k; shape.n], shape.d, cap)?;
        let block_domain = BlockDomain::new(shape.k as u8, shape.d, shape.n);
        Ok(RamseyContext {
            instance,
            shape,
            hom_us,
            hom_ts,
            set_domain,
            block_domain,
        })
    }

    /// Hom-set indices of `h ∘ g` for all `h: T → S`.
    pub fn composites(&self, g: &[Vertex]) -> Result<Vec<usize>> {
        self.hom_ts
            .maps
            .iter()
            .map(|h| {
                let hg = compose_maps(h, g);
                self.hom_us
                    .index_of(&hg)
                    .ok_or_else(|| Error::Internal(format!("composite {hg:?} is not in the hom-set")))
            })
            .collect()
    }
}

/// Runs the pipeline for one colouring of `U → S` and re-checks the result
/// by recolouring every composite.
pub fn ramsey_witness(ctx: &RamseyContext, e: &Colouring) -> Result<RamseyOutcome> {
    let sh = ctx.shape;
    let inst = &ctx.instance;
    let e0 = induced_e0(&ctx.hom_us, e, &ctx.set_domain)?;
    let bases = match size_determined_find(&ctx.set_domain, &e0, &vec![sh.l; sh.n])? {
        SizeDeterminedOutcome::Found { bases } => bases,
        SizeDeterminedOutcome::Exhausted { tuples_tried } => {
            return Ok(RamseyOutcome::Failed {
                stage: Stage::SizeDetermined,
                detail: format!("no size-determined base among {tuples_tried} tuples"),
            })
        }
    };
    let base_sets: Vec<Set> = bases.iter().map(|b| crate::ramsey::set_from_members(b)).collect();
    let estar = match induced_estar(&ctx.hom_us, e, &base_sets, &ctx.block_domain) {
        Ok(c) => c,
        Err(Error::IllDefined(detail)) => {
            return Ok(RamseyOutcome::Failed {
                stage: Stage::InducedColouring,
                detail,
            })
        }
        Err(other) => return Err(other),
    };
    let witness = match lelek_witness(&ctx.block_domain, &estar, &inst.params()?)? {
        LelekOutcome::Found(w) => w,
        LelekOutcome::Exhausted {
            partitions_tried,
            candidates_tried,
        } => {
            return Ok(RamseyOutcome::Failed {
                stage: Stage::Witness,
                detail: format!("{partitions_tried} partitions and {candidates_tried} block sequences tried"),
            })
        }
    };
    let Some(g) = lift(&witness.b, &base_sets, inst)? else {
        return Ok(RamseyOutcome::Failed {
            stage: Stage::Lift,
            detail: format!("no epimorphism onto T encodes {:?} inside the bases", witness.b),
        });
    };
    let composites = ctx.composites(&g)?;
    let colour = composites.first().map_or(0, |&i| e.get(i));
    if composites.iter().any(|&i| e.get(i) != colour) {
        return Ok(RamseyOutcome::Failed {
            stage: Stage::Verification,
            detail: format!("composites through {g:?} are not monochromatic"),
        });
    }
    Ok(RamseyOutcome::Found(RamseyCertificate {
        g,
        colour,
        composites,
        bases,
        d_seq: witness.b,
    }))
}

/// Some `g: U → T` with `g* = target` and first-reach sets inside the bases.
/// Candidates take the lowest admissible heights first; every candidate is
/// checked to be a chain-epimorphism.
fn lift(target: &BlockSeq, bases: &[Set], inst: &RamseyInstance) -> Result<Option<Vec<Vertex>>> {
    let m = target.d;
    let n = target.n();
    // per branch: the (entry, value) it must carry
    let mut demands: Vec<Option<(usize, usize)>> = vec![None; n];
    for (i, p) in target.entries.iter().enumerate() {
        for (j, &v) in p.values().iter().enumerate() {
            if v > 0 {
                demands[j] = Some((i, v as usize));
            }
        }
    }
    let choices: Vec<Vec<Set>> = demands
        .iter()
        .zip(bases)
        .map(|(dem, &b)| match dem {
            None => vec![0],
            Some((_, z)) => subsets_of_size(b, *z),
        })
        .collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let mut pick = vec![0usize; n];
    loop {
        let mut supports = vec![vec![0 as Set; n]; m];
        for j in 0..n {
            if let Some((i, _)) = demands[j] {
                supports[i][j] = choices[j][pick[j]];
            }
        }
        let g = decode_supports(&supports, &inst.u, &inst.t)?;
        if is_chain_epimorphism_map(&g, &inst.u, &inst.t, MODE)? {
            return Ok(Some(g));
        }
        // odometer over the choices
        let mut j = 0;
        loop {
            if j == n {
                return Ok(None);
            }
            pick[j] += 1;
            if pick[j] < choices[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

/// Subsets of `b` of size `z`, in increasing numeric order.
fn subsets_of_size(b: Set, z: usize) -> Vec<Set> {
    let mut out = Vec::new();
    let mut sub = b;
    loop {
        if sub.count_ones() as usize == z {
            out.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & b;
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum RamseyVerdict {
    /// Every colouring was enumerated and has a monochromatic `g`.
    Proven { colourings: u64 },
    /// Complete backtracking search found no colouring escaping every `g`.
    ProvenBySearch { nodes: u64 },
    Refuted { colouring: Colouring },
    SampledOk { samples: usize, seed: u64 },
}

/// Ground-truth check independent of the pipeline: for each colouring of
/// `U → S`, try every `g: U → T`.
#[derive(Clone, Debug)]
pub struct GroundTruth {
    pub hom_us: usize,
    /// For each `g: U → T`, the hom-set indices of its composites.
    pub edges: Vec<Vec<u32>>,
    pub g_maps: Vec<Vec<Vertex>>,
}

impl GroundTruth {
    pub fn new(s: &ChainedFan, t: &ChainedFan, u: &ChainedFan) -> Result<GroundTruth> {
        let hom_us = HomSet::new(u, s);
        let hom_ts = HomSet::new(t, s);
        let g_maps = chain_epimorphism_maps(u, t, MODE);
        let edges = g_maps
            .iter()
            .map(|g| {
                hom_ts
                    .maps
                    .iter()
                    .map(|h| {
                        hom_us
                            .index_of(&compose_maps(h, g))
                            .map(|i| i as u32)
                            .ok_or_else(|| Error::Internal("composite outside the hom-set".into()))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(GroundTruth {
            hom_us: hom_us.len(),
            edges,
            g_maps,
        })
    }

    /// Index of the first `g` whose composites are monochromatic.
    pub fn monochromatic_g(&self, e: &Colouring) -> Option<usize> {
        self.edges.iter().position(|edge| {
            edge.first()
                .is_none_or(|&f| edge.iter().all(|&i| e.get(i as usize) == e.get(f as usize)))
        })
    }
}

pub const EXHAUSTIVE_LIMIT: u128 = 1 << 20;
pub const SAMPLES: usize = 10_000;

pub fn verify_ramsey_instance(
    s: &ChainedFan,
    t: &ChainedFan,
    u: &ChainedFan,
    r: u8,
    budget: u64,
    seed: u64,
) -> Result<RamseyVerdict> {
    let truth = GroundTruth::new(s, t, u)?;
    let size = truth.hom_us;
    if let Some(total) = colouring_count(size, r).filter(|&t| t <= EXHAUSTIVE_LIMIT) {
        for idx in 0..total {
            let e = Colouring::from_index(idx, size, r);
            if truth.monochromatic_g(&e).is_none() {
                return Ok(RamseyVerdict::Refuted { colouring: e });
            }
        }
        return Ok(RamseyVerdict::Proven { colourings: total as u64 });
    }
    let h = Hypergraph::from_edges(size, truth.edges.clone());
    match find_bad_colouring(&h, r, budget) {
        SolveOutcome::Found { colouring, .. } => return Ok(RamseyVerdict::Refuted { colouring }),
        SolveOutcome::Exhausted { nodes } => return Ok(RamseyVerdict::ProvenBySearch { nodes }),
        SolveOutcome::Budget { .. } => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLES {
        let e = Colouring {
            r,
            colours: (0..size).map(|_| rng.gen_range(0..r)).collect(),
        };
        if truth.monochromatic_g(&e).is_none() {
            return Ok(RamseyVerdict::Refuted { colouring: e });
        }
    }
    Ok(RamseyVerdict::SampledOk { samples: SAMPLES, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(lengths: &[usize]) -> ChainedFan {
        ChainedFan::canonical(&Fan::from_branches(lengths).unwrap())
    }

    #[test]
    fn identity_encoding() {
        let s = cf(&[3]);
        let id: Vec<Vertex> = s.fan().vertices().collect();
        let enc = encode_map(&id, &s, &s).unwrap();
        assert_eq!(enc.fstar.entries[0].values(), &[3]);
        assert_eq!(enc.supports, vec![vec![0b111]]);
    }

    #[test]
    fn collapsing_second_branch() {
        let u = cf(&[1, 1]);
        let s = cf(&[1]);
        let enc = encode_map(&[0, 1, 0], &u, &s).unwrap();
        assert_eq!(enc.fstar.entries[0].values(), &[1, 0]);
    }

    #[test]
    fn decode_inverts_encode() {
        for (u, s) in [(&[2, 2][..], &[1][..]), (&[2, 2], &[2]), (&[2, 2], &[1, 1]), (&[3, 3, 3], &[2, 2])] {
            let (u, s) = (cf(u), cf(s));
            for map in HomSet::new(&u, &s).maps {
                let enc = encode_map(&map, &u, &s).unwrap();
                assert_eq!(decode_supports(&enc.supports, &u, &s).unwrap(), map);
            }
        }
    }

    #[test]
    fn constant_colouring_pipeline() {
        let s = cf(&[1]);
        let t = cf(&[1, 1]);
        let u = cf(&[1, 1, 1, 1, 1]);
        let ctx = RamseyContext::new(RamseyInstance::new(s, t, u, 2).unwrap(), 1 << 20).unwrap();
        let e = Colouring::constant(ctx.hom_us.len(), 2);
        assert!(matches!(ramsey_witness(&ctx, &e).unwrap(), RamseyOutcome::Found(_)));
    }

    #[test]
    fn undersized_u_is_refuted() {
        let s = cf(&[1]);
        let t = cf(&[1, 1]);
        let u = cf(&[1, 1]);
        match verify_ramsey_instance(&s, &t, &u, 2, 1 << 20, 0).unwrap() {
            RamseyVerdict::Refuted { colouring } => {
                let truth = GroundTruth::new(&s, &t, &u).unwrap();
                assert_eq!(truth.monochromatic_g(&colouring), None);
            }
            other => panic!("{other:?}"),
        }
    }
}
