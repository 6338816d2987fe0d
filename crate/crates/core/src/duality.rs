//! The finite dual of a fan: its powerset algebra with the relation `S`
//! induced by `R`, and for chained fans the antilexicographic order `≤_BA`.

use serde::{Deserialize, Serialize};

use crate::chains::ChainedFan;
use crate::epi::{check_epimorphism, FanEpi, Mode};
use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex};
use crate::limits::Limits;

/// An element of the dual algebra: a vertex set as a bitmask.
pub type Element = u32;

#[derive(Clone, Debug)]
pub struct DualAlgebra {
    ground: Fan,
    chain: Option<ChainedFan>,
    relation: Mode,
    // s_reach[X] = vertices reachable from X by one R step
    s_reach: Vec<Element>,
    // weight of each vertex in the ≤_BA key, earliest chain vertex heaviest
    ba_weight: Option<Vec<Element>>,
}

impl DualAlgebra {
    pub fn ground(&self) -> &Fan {
        &self.ground
    }

    pub fn chain(&self) -> Option<&ChainedFan> {
        self.chain.as_ref()
    }

    pub fn relation(&self) -> Mode {
        self.relation
    }

    pub fn element_count(&self) -> usize {
        self.s_reach.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> {
        0..self.s_reach.len() as Element
    }

    pub fn zero(&self) -> Element {
        0
    }

    pub fn one(&self) -> Element {
        (self.s_reach.len() - 1) as Element
    }

    pub fn union(&self, x: Element, y: Element) -> Element {
        x | y
    }

    pub fn intersection(&self, x: Element, y: Element) -> Element {
        x & y
    }

    pub fn complement(&self, x: Element) -> Element {
        self.one() & !x
    }

    /// `S(X, Y)`: some `a ∈ X`, `b ∈ Y` with `R(a, b)`.
    pub fn s(&self, x: Element, y: Element) -> bool {
        self.s_reach[x as usize] & y != 0
    }

    /// Sort key for `≤_BA`; `None` for plain fans.
    pub fn ba_key(&self, x: Element) -> Option<Element> {
        let w = self.ba_weight.as_ref()?;
        Some(members(x).map(|v| w[v]).sum())
    }

    /// `X <_BA Y`: the chain-earliest vertex of `X Δ Y` lies in `Y`.
    pub fn ba_less(&self, x: Element, y: Element) -> Option<bool> {
        Some(self.ba_key(x)? < self.ba_key(y)?)
    }
}

/// Vertex ids in a bitmask.
pub fn members(x: Element) -> impl Iterator<Item = Vertex> {
    (0..Element::BITS as usize).filter(move |&v| x >> v & 1 == 1)
}

pub fn mask_of(vertices: &[Vertex]) -> Element {
    vertices.iter().fold(0, |m, &v| m | 1 << v)
}

fn build(ground: &Fan, chain: Option<&ChainedFan>, relation: Mode, limits: &Limits) -> Result<DualAlgebra> {
    let n = ground.vertex_count();
    limits.check_powerset(&format!("dual of {ground}"), n)?;
    let out: Vec<Element> = ground
        .vertices()
        .map(|a| {
            ground
                .vertices()
                .filter(|&b| match relation {
                    Mode::Directed => ground.r(a, b),
                    Mode::Symmetrized => ground.r_sym(a, b),
                })
                .fold(0, |m, b| m | 1 << b)
        })
        .collect();
    let size = 1usize << n;
    let mut s_reach = vec![0; size];
    for x in 1..size {
        let low = x.trailing_zeros() as usize;
        s_reach[x] = s_reach[x & (x - 1)] | out[low];
    }
    let ba_weight = chain.map(|c| {
        ground
            .vertices()
            .map(|v| 1 << (n - 1 - c.position(v)))
            .collect()
    });
    Ok(DualAlgebra {
        ground: ground.clone(),
        chain: chain.cloned(),
        relation,
        s_reach,
        ba_weight,
    })
}

/// The dual of a plain fan, with `S` taken from directed `R`.
pub fn dualize(fan: &Fan) -> Result<DualAlgebra> {
    build(fan, None, Mode::Directed, &Limits::default())
}

/// The dual of a chained fan, with `≤_BA` defined.
pub fn dualize_chained(chain: &ChainedFan) -> Result<DualAlgebra> {
    build(chain.fan(), Some(chain), Mode::Directed, &Limits::default())
}

/// Full control over the relation used for `S` and the size cap.
pub fn dualize_with(fan: &Fan, chain: Option<&ChainedFan>, relation: Mode, limits: &Limits) -> Result<DualAlgebra> {
    if let Some(c) = chain {
        if c.fan() != fan {
            return Err(Error::EndpointMismatch("chain lives on a different fan".into()));
        }
    }
    build(fan, chain, relation, limits)
}

/// `F(X) = f⁻¹(X)` on the dual algebras.
#[derive(Clone, Debug)]
pub struct DualMap {
    /// Indexed by elements of the target's dual.
    pub images: Vec<Element>,
    pub boolean_embedding: bool,
    /// `S(X, Y) ⇔ S(F X, F Y)` for all elements.
    pub s_preserving: bool,
    /// `X ≤_BA Y ⇒ F X ≤_BA F Y`; `None` when not chained.
    pub ba_preserving: Option<bool>,
}

impl DualMap {
    pub fn apply(&self, x: Element) -> Element {
        self.images[x as usize]
    }

    /// `self ∘ other` as element maps.
    pub fn compose(&self, other: &DualMap) -> Vec<Element> {
        other.images.iter().map(|&x| self.apply(x)).collect()
    }
}

fn preimage_table(map: &[Vertex], target_n: usize) -> Vec<Element> {
    let mut fibre = vec![0 as Element; target_n];
    for (v, &x) in map.iter().enumerate() {
        fibre[x] |= 1 << v;
    }
    let size = 1usize << target_n;
    let mut images = vec![0; size];
    for x in 1..size {
        let low = x.trailing_zeros() as usize;
        images[x] = images[x & (x - 1)] | fibre[low];
    }
    images
}

// Pairs are checked exhaustively up to this many target vertices. Above it,
// atoms suffice: S and F both distribute over unions.
const PAIRWISE_LIMIT: usize = 8;

fn dual_map_raw(map: &[Vertex], source: &DualAlgebra, target: &DualAlgebra) -> DualMap {
    let tn = target.ground.vertex_count();
    let images = preimage_table(map, tn);
    let one = source.one();
    let boolean_embedding = images[0] == 0
        && images[target.one() as usize] == one
        && target.elements().all(|x| {
            let cx = target.complement(x);
            images[cx as usize] == source.complement(images[x as usize])
        })
        && {
            let mut seen = std::collections::HashSet::new();
            images.iter().all(|&y| seen.insert(y))
        };
    let check = |x: Element, y: Element| target.s(x, y) == source.s(images[x as usize], images[y as usize]);
    let s_preserving = if tn <= PAIRWISE_LIMIT {
        target.elements().all(|x| target.elements().all(|y| check(x, y)))
    } else {
        (0..tn).all(|a| (0..tn).all(|b| check(1 << a, 1 << b)))
    };
    let ba_preserving = target.ba_weight.as_ref().and(source.ba_weight.as_ref()).map(|_| {
        // a total order maps monotonically iff consecutive elements do
        let mut sorted: Vec<Element> = target.elements().collect();
        sorted.sort_by_key(|&x| target.ba_key(x));
        sorted
            .windows(2)
            .all(|w| source.ba_key(images[w[0] as usize]) <= source.ba_key(images[w[1] as usize]))
    });
    DualMap {
        images,
        boolean_embedding,
        s_preserving,
        ba_preserving,
    }
}

/// The dual embedding of `f`; pass the chains as `(source, target)` to get
/// the `≤_BA` flag.
pub fn dualize_map(f: &FanEpi, chains: Option<(&ChainedFan, &ChainedFan)>) -> Result<DualMap> {
    let (sd, td) = duals(f.source(), f.target(), chains, Mode::Directed)?;
    Ok(dual_map_raw(f.map(), &sd, &td))
}

fn duals(
    source: &Fan,
    target: &Fan,
    chains: Option<(&ChainedFan, &ChainedFan)>,
    relation: Mode,
) -> Result<(DualAlgebra, DualAlgebra)> {
    let limits = Limits::default();
    let (sc, tc) = chains.unzip();
    Ok((
        dualize_with(source, sc, relation, &limits)?,
        dualize_with(target, tc, relation, &limits)?,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    /// Whether the map is a root-preserving surjection at all.
    pub applicable: bool,
    /// The relation `S` is built from.
    pub mode: Mode,
    /// `f` is an `R`-epimorphism ⇔ `F` is `S`-preserving.
    pub s_equiv: bool,
    /// `f` maps the chain onto the chain ⇔ `F` is `≤_BA`-preserving.
    pub ba_equiv: Option<bool>,
    pub pass: bool,
}

/// Checks both duality equivalences for a raw vertex map.
pub fn verify_duality_map(
    map: &[Vertex],
    source: &Fan,
    target: &Fan,
    chains: Option<(&ChainedFan, &ChainedFan)>,
    relation: Mode,
) -> Result<DualityReport> {
    let check = check_epimorphism(map, source, target, relation)?;
    if !(check.root_preserved && check.surjective) {
        return Ok(DualityReport {
            applicable: false,
            mode: relation,
            s_equiv: false,
            ba_equiv: None,
            pass: false,
        });
    }
    let (sd, td) = duals(source, target, chains, relation)?;
    let dual = dual_map_raw(map, &sd, &td);
    let is_epi = check.edges_preserved && check.lifting;
    let s_equiv = is_epi == dual.s_preserving;
    let ba_equiv = match chains {
        Some((bc, ac)) => {
            let image = crate::chains::chain_image_of_map(map, target, bc)?;
            let onto = image.chain.is_some_and(|c| c.order() == ac.order());
            dual.ba_preserving.map(|p| p == onto)
        }
        None => None,
    };
    Ok(DualityReport {
        applicable: true,
        mode: relation,
        s_equiv,
        ba_equiv,
        pass: s_equiv && ba_equiv.unwrap_or(true) && dual.boolean_embedding,
    })
}

pub fn verify_duality(f: &FanEpi, chains: Option<(&ChainedFan, &ChainedFan)>) -> Result<DualityReport> {
    verify_duality_map(f.map(), f.source(), f.target(), chains, Mode::Directed)
}
