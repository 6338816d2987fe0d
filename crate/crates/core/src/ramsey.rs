//! Partition Ramsey machinery, the `Φ` encoding of partitions as block
//! sequences, witnesses for the `FIN_k` Ramsey statement and
//! size-determined colourings.
//!
//! All "every colouring admits …" questions are decided with one complete
//! backtracking solver ([`find_bad_colouring`]) that looks for a colouring
//! escaping every candidate witness.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fink::{all_block_star, generated_semigroup, BlockSeq, FinVec};

/// A colouring of an enumerated domain by colour indices `0..r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Colouring {
    pub r: u8,
    pub colours: Vec<u8>,
}

impl Colouring {
    pub fn constant(size: usize, r: u8) -> Colouring {
        Colouring {
            r,
            colours: vec![0; size],
        }
    }

    /// The `index`-th colouring in base-`r` order (digit `i` colours
    /// element `i`).
    pub fn from_index(mut index: u128, size: usize, r: u8) -> Colouring {
        let mut colours = Vec::with_capacity(size);
        for _ in 0..size {
            colours.push((index % r as u128) as u8);
            index /= r as u128;
        }
        Colouring { r, colours }
    }

    pub fn get(&self, i: usize) -> u8 {
        self.colours[i]
    }

    pub fn is_valid(&self, size: usize) -> bool {
        self.colours.len() == size && self.colours.iter().all(|&c| c < self.r)
    }
}

/// `r^size` when it fits in `u128`.
pub fn colouring_count(size: usize, r: u8) -> Option<u128> {
    (r as u128).checked_pow(u32::try_from(size).ok()?)
}

// ---------------------------------------------------------------------------
// Ordered partitions

/// A partition of `{1..n}` with blocks listed by their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderedPartition {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// From a restricted growth string: `labels[i]` is the block of `i + 1`.
    pub fn from_labels(labels: &[usize]) -> OrderedPartition {
        let count = labels.iter().map(|&b| b + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); count];
        for (i, &b) in labels.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        blocks.retain(|b| !b.is_empty());
        blocks.sort_by_key(|b| b[0]);
        OrderedPartition {
            n: labels.len(),
            blocks,
        }
    }

    /// Block index of each element (canonical restricted growth string).
    pub fn labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                labels[x - 1] = b;
            }
        }
        labels
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        let mut seen = vec![false; self.n];
        for block in &self.blocks {
            if block.is_empty() || block.windows(2).any(|w| w[0] >= w[1]) {
                return false;
            }
            for &x in block {
                if x == 0 || x > self.n || seen[x - 1] {
                    return false;
                }
                seen[x - 1] = true;
            }
        }
        seen.iter().all(|&s| s) && self.blocks.windows(2).all(|w| w[0][0] < w[1][0])
    }
}

/// All partitions of `{1..n}` into exactly `d` blocks, in lexicographic
/// order of their restricted growth strings.
pub fn partitions(n: usize, d: usize) -> Vec<OrderedPartition> {
    let mut out = Vec::new();
    if d > n || (d == 0 && n > 0) {
        return out;
    }
    let mut labels = vec![0usize; n];
    fn rec(i: usize, used: usize, n: usize, d: usize, labels: &mut [usize], out: &mut Vec<OrderedPartition>) {
        if i == n {
            if used == d {
                out.push(OrderedPartition::from_labels(labels));
            }
            return;
        }
        // not enough elements left to open the remaining blocks
        if d - used.min(d) > n - i {
            return;
        }
        for b in 0..=used.min(d - 1) {
            labels[i] = b;
            rec(i + 1, used.max(b + 1), n, d, labels, out);
        }
    }
    rec(0, 0, n, d, &mut labels, &mut out);
    out
}

/// Whether `p` is a coarsening of `q`: every block of `q` lies inside a
/// block of `p`.
pub fn is_coarsening(p: &OrderedPartition, q: &OrderedPartition) -> bool {
    if p.n != q.n {
        return false;
    }
    let labels = p.labels();
    q.blocks
        .iter()
        .all(|block| block.iter().all(|&x| labels[x - 1] == labels[block[0] - 1]))
}

/// The coarsenings of `q` with exactly `k` blocks.
pub fn coarsenings_of_size(q: &OrderedPartition, k: usize) -> Vec<OrderedPartition> {
    let q_labels = q.labels();
    partitions(q.len(), k)
        .into_iter()
        .map(|merge| {
            let group = merge.labels();
            OrderedPartition::from_labels(&q_labels.iter().map(|&b| group[b]).collect::<Vec<_>>())
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Complete search for colourings avoiding monochromatic witnesses

/// Constraint system for [`find_bad_colouring`]. A colouring is *bad* when
/// every group contains at least one edge that is not monochromatic.
#[derive(Clone, Debug, Default)]
pub struct Hypergraph {
    pub vertices: usize,
    /// Each group is a list of edges; an edge is a list of vertices.
    pub groups: Vec<Vec<Vec<u32>>>,
}

impl Hypergraph {
    /// One edge per group: the usual non-monochromatic colouring problem.
    pub fn from_edges(vertices: usize, edges: Vec<Vec<u32>>) -> Hypergraph {
        Hypergraph {
            vertices,
            groups: edges.into_iter().map(|e| vec![e]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SolveOutcome {
    /// A colouring that escapes every group.
    Found { colouring: Colouring, nodes: u64 },
    /// Search space exhausted: every colouring is caught by some group.
    Exhausted { nodes: u64 },
    Budget { nodes: u64 },
}

/// Complete backtracking search for an `r`-colouring with no group fully
/// monochromatic.
///
/// Colours are introduced in order (colour symmetry), edges that contain a
/// smaller single-edge group are dropped, and every edge keeps per-colour
/// counts so a violated group is noticed as soon as its last vertex is
/// coloured.
pub fn find_bad_colouring(h: &Hypergraph, r: u8, budget: u64) -> SolveOutcome {
    let mut groups: Vec<Vec<Vec<u32>>> = h
        .groups
        .iter()
        .map(|g| {
            g.iter()
                .map(|e| {
                    let mut e = e.clone();
                    e.sort_unstable();
                    e.dedup();
                    e
                })
                .collect()
        })
        .collect();
    // an empty group can never contain a non-monochromatic edge
    if groups.iter().any(|g| g.is_empty()) || r == 0 {
        return SolveOutcome::Exhausted { nodes: 0 };
    }
    // single-edge groups: keep minimal edges only
    let mut singles: Vec<Vec<u32>> = groups.iter().filter(|g| g.len() == 1).map(|g| g[0].clone()).collect();
    singles.sort_by_key(|e| e.len());
    let mut minimal: Vec<Vec<u32>> = Vec::new();
    for e in singles {
        if !minimal.iter().any(|m| is_subset(m, &e)) {
            minimal.push(e);
        }
    }
    groups.retain(|g| g.len() != 1);
    groups.extend(minimal.into_iter().map(|e| vec![e]));
    if groups.iter().any(|g| g.iter().all(|e| e.len() <= 1)) {
        return SolveOutcome::Exhausted { nodes: 0 };
    }
    if r == 1 {
        return SolveOutcome::Exhausted { nodes: 0 };
    }

    let edges: Vec<(usize, &Vec<u32>)> = groups
        .iter()
        .enumerate()
        .flat_map(|(g, es)| es.iter().map(move |e| (g, e)))
        .collect();
    let mut incidence: Vec<Vec<usize>> = vec![Vec::new(); h.vertices];
    for (i, (_, e)) in edges.iter().enumerate() {
        for &v in e.iter() {
            incidence[v as usize].push(i);
        }
    }
    let mut order: Vec<usize> = (0..h.vertices).filter(|&v| !incidence[v].is_empty()).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(incidence[v].len()));

    struct State<'a> {
        edges: Vec<(usize, &'a Vec<u32>)>,
        incidence: Vec<Vec<usize>>,
        order: Vec<usize>,
        r: u8,
        colour: Vec<u8>,
        counts: Vec<Vec<u32>>,
        unassigned: Vec<u32>,
        distinct: Vec<u8>,
        group_nonmono: Vec<u32>,
        group_complete_mono: Vec<u32>,
        group_size: Vec<u32>,
        nodes: u64,
        budget: u64,
    }
    impl State<'_> {
        // returns false if some group became violated
        fn assign(&mut self, v: usize, c: u8) -> bool {
            self.colour[v] = c;
            let mut ok = true;
            for idx in 0..self.incidence[v].len() {
                let e = self.incidence[v][idx];
                let g = self.edges[e].0;
                let was_nonmono = self.distinct[e] >= 2;
                let cnt = &mut self.counts[e][c as usize];
                *cnt += 1;
                if *cnt == 1 {
                    self.distinct[e] += 1;
                }
                self.unassigned[e] -= 1;
                if !was_nonmono && self.distinct[e] >= 2 {
                    self.group_nonmono[g] += 1;
                }
                if self.unassigned[e] == 0 && self.distinct[e] == 1 {
                    self.group_complete_mono[g] += 1;
                }
                if self.group_nonmono[g] == 0 && self.group_complete_mono[g] == self.group_size[g] {
                    ok = false;
                }
            }
            ok
        }

        fn unassign(&mut self, v: usize, c: u8) {
            for idx in 0..self.incidence[v].len() {
                let e = self.incidence[v][idx];
                let g = self.edges[e].0;
                if self.unassigned[e] == 0 && self.distinct[e] == 1 {
                    self.group_complete_mono[g] -= 1;
                }
                let was_nonmono = self.distinct[e] >= 2;
                self.unassigned[e] += 1;
                let cnt = &mut self.counts[e][c as usize];
                *cnt -= 1;
                if *cnt == 0 {
                    self.distinct[e] -= 1;
                }
                if was_nonmono && self.distinct[e] < 2 {
                    self.group_nonmono[g] -= 1;
                }
            }
            self.colour[v] = u8::MAX;
        }

        fn rec(&mut self, depth: usize, max_used: u8) -> Option<bool> {
            if depth == self.order.len() {
                return Some(true);
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            let v = self.order[depth];
            let limit = (max_used + 1).min(self.r - 1);
            for c in 0..=limit {
                let ok = self.assign(v, c);
                if ok {
                    match self.rec(depth + 1, max_used.max(c)) {
                        Some(true) => return Some(true),
                        None => {
                            self.unassign(v, c);
                            return None;
                        }
                        Some(false) => {}
                    }
                }
                self.unassign(v, c);
            }
            Some(false)
        }
    }
    let group_size: Vec<u32> = groups.iter().map(|g| g.len() as u32).collect();
    let n_edges = edges.len();
    let unassigned = edges.iter().map(|(_, e)| e.len() as u32).collect();
    let mut state = State {
        edges,
        incidence,
        order,
        r,
        colour: vec![u8::MAX; h.vertices],
        counts: vec![vec![0; r as usize]; n_edges],
        unassigned,
        distinct: vec![0; n_edges],
        group_nonmono: vec![0; groups.len()],
        group_complete_mono: vec![0; groups.len()],
        group_size,
        nodes: 0,
        budget,
    };
    // the first vertex may take colour 0 only; rec handles that via max_used
    let result = if state.order.is_empty() {
        Some(true)
    } else {
        let v = state.order[0];
        let ok = state.assign(v, 0);
        let res = if ok { state.rec(1, 0) } else { Some(false) };
        res
    };
    let nodes = state.nodes;
    match result {
        Some(true) => {
            let colours = state.colour.iter().map(|&c| if c == u8::MAX { 0 } else { c }).collect();
            SolveOutcome::Found {
                colouring: Colouring { r, colours },
                nodes,
            }
        }
        Some(false) => SolveOutcome::Exhausted { nodes },
        None => SolveOutcome::Budget { nodes },
    }
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Whether `colouring` makes every group contain a non-monochromatic edge.
pub fn escapes_all(h: &Hypergraph, colouring: &Colouring) -> bool {
    h.groups.iter().all(|g| {
        g.iter().any(|e| {
            let first = e.first().map(|&v| colouring.get(v as usize));
            e.iter().any(|&v| Some(colouring.get(v as usize)) != first)
        })
    })
}

/// Result of searching for the least `n` at which a Ramsey statement holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum LevelVerdict {
    /// Every colouring has a witness; proven by exhausting the solver.
    Holds { domain: usize, nodes: u64 },
    /// A colouring without witnesses.
    Fails { domain: usize, colouring: Colouring },
    Unknown { domain: usize, nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumberSearch {
    pub levels: Vec<(usize, LevelVerdict)>,
    /// Least `n` that holds, with every smaller `n` refuted.
    pub exact: Option<usize>,
    /// Every `n` below this is refuted by an explicit colouring.
    pub lower_bound: usize,
    /// Least `n` proven to hold, if any (an upper bound when not exact).
    pub upper_bound: Option<usize>,
}

/// Derives the bounds of a search from its per-level verdicts.
pub fn summarize_levels(levels: Vec<(usize, LevelVerdict)>) -> NumberSearch {
    let mut lower_bound = 1;
    for (n, v) in &levels {
        match v {
            LevelVerdict::Fails { .. } => lower_bound = n + 1,
            _ => break,
        }
    }
    let upper_bound = levels
        .iter()
        .find(|(_, v)| matches!(v, LevelVerdict::Holds { .. }))
        .map(|(n, _)| *n);
    let exact = upper_bound.filter(|&u| u == lower_bound);
    NumberSearch {
        levels,
        exact,
        lower_bound,
        upper_bound,
    }
}

fn decide(h: &Hypergraph, r: u8, budget: u64) -> LevelVerdict {
    match find_bad_colouring(h, r, budget) {
        SolveOutcome::Found { colouring, .. } => LevelVerdict::Fails {
            domain: h.vertices,
            colouring,
        },
        SolveOutcome::Exhausted { nodes } => LevelVerdict::Holds {
            domain: h.vertices,
            nodes,
        },
        SolveOutcome::Budget { nodes } => LevelVerdict::Unknown {
            domain: h.vertices,
            nodes,
        },
    }
}

// ---------------------------------------------------------------------------
// Graham–Rothschild

/// The constraint system at ground size `n`: vertices are the `k`-block
/// partitions, and each `l`-block partition contributes the edge of its
/// `k`-block coarsenings.
pub fn gr_hypergraph(k: usize, l: usize, n: usize) -> (Vec<OrderedPartition>, Hypergraph) {
    let domain = partitions(n, k);
    let index: HashMap<&OrderedPartition, u32> = domain.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
    let edges = partitions(n, l)
        .iter()
        .map(|big| coarsenings_of_size(big, k).iter().map(|q| index[q]).collect())
        .collect();
    let h = Hypergraph::from_edges(domain.len(), edges);
    (domain, h)
}

/// Searches `n = 1..=n_max` for the least `n` such that every `r`-colouring
/// of the `k`-block partitions of `{1..n}` has an `l`-block partition whose
/// `k`-block coarsenings are monochromatic.
pub fn gr_search(k: usize, l: usize, r: u8, n_max: usize, budget: u64) -> Result<NumberSearch> {
    if !(1 <= k && k < l) || r < 2 {
        return Err(Error::Precondition(format!("need 1 ≤ k < l and r ≥ 2, got k={k}, l={l}, r={r}")));
    }
    let mut levels = Vec::new();
    for n in 1..=n_max {
        let (_, h) = gr_hypergraph(k, l, n);
        let verdict = decide(&h, r, budget);
        let holds = matches!(verdict, LevelVerdict::Holds { .. });
        levels.push((n, verdict));
        if holds {
            break;
        }
    }
    Ok(summarize_levels(levels))
}

/// Re-checks that `colouring` of the `k`-block partitions of `{1..n}` gives
/// no `l`-block partition monochromatic coarsenings.
pub fn verify_gr_counterexample(k: usize, l: usize, n: usize, colouring: &Colouring) -> bool {
    let (domain, h) = gr_hypergraph(k, l, n);
    colouring.is_valid(domain.len()) && escapes_all(&h, colouring)
}

// ---------------------------------------------------------------------------
// Φ and the FIN_k witness pipeline

/// `Φ(P)_j = Σ_{s=1}^k s · 1_{P_{(j−1)k+s}}` for a partition with `dk + 1`
/// blocks.
pub fn phi_encode(p: &OrderedPartition, d: usize, k: usize) -> Result<BlockSeq> {
    if p.len() != d * k + 1 {
        return Err(Error::InvalidInput(format!(
            "partition has {} blocks, expected {}",
            p.len(),
            d * k + 1
        )));
    }
    let entries = (1..=d)
        .map(|j| {
            let mut values = vec![0u8; p.n];
            for s in 1..=k {
                for &x in &p.blocks[(j - 1) * k + s] {
                    values[x - 1] = s as u8;
                }
            }
            FinVec::new(values)
        })
        .collect();
    Ok(BlockSeq::new(k as u8, entries))
}

/// The enumerated domain `FIN_k^{*(d)}(n)` with an index.
#[derive(Clone, Debug)]
pub struct BlockDomain {
    pub k: u8,
    pub d: usize,
    pub n: usize,
    pub elements: Vec<BlockSeq>,
    index: HashMap<BlockSeq, usize>,
}

impl BlockDomain {
    pub fn new(k: u8, d: usize, n: usize) -> BlockDomain {
        let elements = all_block_star(k, d, n);
        let index = elements.iter().enumerate().map(|(i, b)| (b.clone(), i)).collect();
        BlockDomain {
            k,
            d,
            n,
            elements,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, b: &BlockSeq) -> Option<usize> {
        self.index.get(b).copied()
    }
}

/// Parameters `(d, m, k, l)` of the `FIN_k` Ramsey statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LelekParams {
    pub d: usize,
    pub m: usize,
    pub k: u8,
    pub l: u8,
}

impl LelekParams {
    pub fn check(&self) -> Result<()> {
        if self.d == 0 || self.m < self.d || self.k == 0 || self.l < self.k {
            return Err(Error::Precondition(format!(
                "need 1 ≤ d ≤ m and 1 ≤ k ≤ l, got {self:?}"
            )));
        }
        Ok(())
    }
}

const SEMIGROUP_CAP: usize = 1_000_000;

/// Domain indices of `⟨⋃ T_ī(B)⟩^{*(d)}_{P_k}`; `None` if some element
/// falls outside the domain.
pub fn semigroup_indices(domain: &BlockDomain, b: &BlockSeq, params: &LelekParams) -> Result<Option<Vec<u32>>> {
    let elems = generated_semigroup(b, params.k, params.d, SEMIGROUP_CAP)?;
    Ok(elems
        .iter()
        .map(|e| domain.index_of(e).map(|i| i as u32))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessRoute {
    /// Through a monochromatic partition, as in the proof.
    Partition,
    /// Direct search over all block sequences.
    Direct,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LelekWitness {
    pub params: LelekParams,
    pub n: usize,
    pub b: BlockSeq,
    pub colour: u8,
    pub semigroup_size: usize,
    pub route: WitnessRoute,
    pub partition: Option<OrderedPartition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LelekOutcome {
    Found(LelekWitness),
    /// Neither route found a witness. `partitions_tried` covers the proof's
    /// route and `candidates_tried` the direct one; both were exhaustive.
    Exhausted { partitions_tried: usize, candidates_tried: usize },
}

/// Properties (1), (3), (4) of the proof's claim for a star tuple: every
/// level set is non-empty, level sets start in increasing order, and each
/// entry's top level starts before the next entry.
pub fn claim_properties(a: &BlockSeq) -> bool {
    let k = a.k;
    a.entries.iter().all(|p| {
        let mins: Vec<Option<usize>> = (1..=k).map(|i| p.min_supp_j(i)).collect();
        mins.iter().all(Option::is_some) && mins.windows(2).all(|w| w[0] < w[1])
    }) && a
        .entries
        .windows(2)
        .all(|w| w[0].min_supp_j(k) < w[1].min_supp())
}

/// Looks for `B ∈ FIN_l^{*(m)}(n)` whose generated semigroup is
/// monochromatic under `c`.
///
/// First tries the proof's route through a partition into `ml + 1` blocks
/// all of whose `(dk + 1)`-block coarsenings are `c ∘ Φ`-monochromatic, then
/// falls back to a direct search over block sequences. Every success is
/// re-verified on the semigroup itself.
pub fn lelek_witness(domain: &BlockDomain, c: &Colouring, params: &LelekParams) -> Result<LelekOutcome> {
    if !c.is_valid(domain.len()) {
        return Err(Error::InvalidInput("colouring does not cover the domain".into()));
    }
    let outcome = witness_search(domain, params, &mut |i| Some(c.get(i)))?;
    outcome.ok_or_else(|| Error::Internal("total colouring declined a query".into()))
}

/// [`lelek_witness`] against a colour oracle. `None` from the oracle aborts
/// the search and is passed back as `Ok(None)`.
pub fn witness_search(
    domain: &BlockDomain,
    params: &LelekParams,
    colour_of: &mut dyn FnMut(usize) -> Option<u8>,
) -> Result<Option<LelekOutcome>> {
    params.check()?;
    if domain.k != params.k || domain.d != params.d {
        return Err(Error::InvalidInput("domain does not match the parameters".into()));
    }
    let n = domain.n;
    let (d, m, k, l) = (params.d, params.m, params.k as usize, params.l as usize);
    let mut partitions_tried = 0;
    for q in partitions(n, m * l + 1) {
        partitions_tried += 1;
        let mut colour = None;
        let mut mono = true;
        for p in coarsenings_of_size(&q, d * k + 1) {
            let idx = domain
                .index_of(&phi_encode(&p, d, k)?)
                .ok_or_else(|| Error::Internal("Φ left the star domain".into()))?;
            let Some(col) = colour_of(idx) else {
                return Ok(None);
            };
            if *colour.get_or_insert(col) != col {
                mono = false;
                break;
            }
        }
        if !mono {
            continue;
        }
        let b = phi_encode(&q, m, l)?;
        match check_candidate(domain, colour_of, params, &b)? {
            Some(Some(w)) => {
                return Ok(Some(LelekOutcome::Found(LelekWitness {
                    route: WitnessRoute::Partition,
                    partition: Some(q),
                    ..w
                })))
            }
            Some(None) => {}
            None => return Ok(None),
        }
    }
    let mut candidates_tried = 0;
    for b in all_block_star(params.l, m, n) {
        candidates_tried += 1;
        match check_candidate(domain, colour_of, params, &b)? {
            Some(Some(w)) => return Ok(Some(LelekOutcome::Found(w))),
            Some(None) => {}
            None => return Ok(None),
        }
    }
    Ok(Some(LelekOutcome::Exhausted {
        partitions_tried,
        candidates_tried,
    }))
}

fn check_candidate(
    domain: &BlockDomain,
    colour_of: &mut dyn FnMut(usize) -> Option<u8>,
    params: &LelekParams,
    b: &BlockSeq,
) -> Result<Option<Option<LelekWitness>>> {
    let Some(indices) = semigroup_indices(domain, b, params)? else {
        return Ok(Some(None));
    };
    let mut colour = None;
    for &i in &indices {
        let Some(col) = colour_of(i as usize) else {
            return Ok(None);
        };
        if *colour.get_or_insert(col) != col {
            return Ok(Some(None));
        }
    }
    Ok(Some(Some(LelekWitness {
        params: *params,
        n: domain.n,
        b: b.clone(),
        colour: colour.unwrap_or(0),
        semigroup_size: indices.len(),
        route: WitnessRoute::Direct,
        partition: None,
    })))
}

/// One leaf of [`lelek_witness_tree`]: the partial colouring read by the
/// search and what the search returned on it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessLeaf {
    /// `None` for elements the search never looked at.
    pub partial: Vec<Option<u8>>,
    pub outcome: LelekOutcome,
}

/// Runs [`lelek_witness`] on every `r`-colouring of the domain at once by
/// branching only on the colours the search actually reads. Every
/// colouring extends exactly one leaf and gets that leaf's outcome.
pub fn lelek_witness_tree(
    domain: &BlockDomain,
    params: &LelekParams,
    r: u8,
    max_leaves: usize,
    visit: &mut dyn FnMut(&WitnessLeaf),
) -> Result<usize> {
    let mut stack: Vec<Vec<Option<u8>>> = vec![vec![None; domain.len()]];
    let mut leaves = 0;
    while let Some(partial) = stack.pop() {
        let mut missing = None;
        let outcome = witness_search(domain, params, &mut |i| {
            let c = partial[i];
            if c.is_none() {
                missing = Some(i);
            }
            c
        })?;
        match (outcome, missing) {
            (Some(outcome), _) => {
                leaves += 1;
                if leaves > max_leaves {
                    return Err(Error::CapExceeded {
                        what: "witness tree leaves".into(),
                        size: leaves,
                        cap: max_leaves,
                    });
                }
                visit(&WitnessLeaf { partial, outcome });
            }
            (None, Some(i)) => {
                for c in (0..r).rev() {
                    let mut next = partial.clone();
                    next[i] = Some(c);
                    stack.push(next);
                }
            }
            (None, None) => return Err(Error::Internal("search aborted without a query".into())),
        }
    }
    Ok(leaves)
}

/// Independent re-check of a witness against a colouring.
pub fn verify_lelek_witness(domain: &BlockDomain, c: &Colouring, w: &LelekWitness) -> Result<bool> {
    let p = &w.params;
    if !w.b.is_block_star() || w.b.k != p.l || w.b.d != p.m || w.b.n() != domain.n {
        return Ok(false);
    }
    let elems = generated_semigroup(&w.b, p.k, p.d, SEMIGROUP_CAP)?;
    if elems.len() != w.semigroup_size {
        return Ok(false);
    }
    let mut ok = elems
        .iter()
        .all(|e| domain.index_of(e).is_some_and(|i| c.get(i) == w.colour));
    if w.route == WitnessRoute::Partition {
        ok &= elems.iter().all(claim_properties);
    }
    Ok(ok)
}

/// The constraint system at ground size `n`: vertices are
/// `FIN_k^{*(d)}(n)`, and each `B ∈ FIN_l^{*(m)}(n)` contributes its
/// generated semigroup as an edge.
pub fn lelek_hypergraph(params: &LelekParams, n: usize) -> Result<(BlockDomain, Hypergraph)> {
    let domain = BlockDomain::new(params.k, params.d, n);
    let mut edges = Vec::new();
    for b in all_block_star(params.l, params.m, n) {
        let indices = semigroup_indices(&domain, &b, params)?
            .ok_or_else(|| Error::Internal("semigroup element outside the star domain".into()))?;
        edges.push(indices);
    }
    let h = Hypergraph::from_edges(domain.len(), edges);
    Ok((domain, h))
}

/// Least `n ≤ n_max` such that every `r`-colouring of `FIN_k^{*(d)}(n)`
/// admits a monochromatic generated semigroup.
pub fn lelek_number_search(params: &LelekParams, r: u8, n_max: usize, budget: u64) -> Result<NumberSearch> {
    params.check()?;
    if r < 2 {
        return Err(Error::Precondition("need r ≥ 2".into()));
    }
    let mut levels = Vec::new();
    for n in 1..=n_max {
        let (_, h) = lelek_hypergraph(params, n)?;
        let verdict = decide(&h, r, budget);
        let holds = matches!(verdict, LevelVerdict::Holds { .. });
        levels.push((n, verdict));
        if holds {
            break;
        }
    }
    Ok(summarize_levels(levels))
}

// ---------------------------------------------------------------------------
// Size-determined colourings

/// Subsets of `{1..N}` as bitmasks (bit `i − 1` for element `i`).
pub type Set = u32;

/// `(∏_{i=1}^m N^{[≤k_i]})^{*(d)}`: `d`-tuples of `m`-tuples of small sets
/// in which consecutive tuples have disjoint supports.
#[derive(Clone, Debug)]
pub struct SetTupleDomain {
    pub ground: usize,
    pub ks: Vec<usize>,
    pub d: usize,
    pub elements: Vec<Vec<Vec<Set>>>,
    index: HashMap<Vec<Vec<Set>>, usize>,
}

/// Support of an `m`-tuple: coordinates holding a non-empty set.
pub fn tuple_support(f: &[Set]) -> u64 {
    f.iter().enumerate().filter(|(_, &s)| s != 0).fold(0, |m, (i, _)| m | 1 << i)
}

fn small_sets(ground: usize, k: usize) -> Vec<Set> {
    (0..1u32 << ground).filter(|s| s.count_ones() as usize <= k).collect()
}

impl SetTupleDomain {
    pub fn new(ground: usize, ks: &[usize], d: usize, cap: usize) -> Result<SetTupleDomain> {
        if ground > 20 || ks.len() > 63 {
            return Err(Error::CapExceeded {
                what: "set-tuple ground".into(),
                size: ground,
                cap: 20,
            });
        }
        let options: Vec<Vec<Set>> = ks.iter().map(|&k| small_sets(ground, k)).collect();
        let mut tuples: Vec<Vec<Set>> = vec![Vec::new()];
        for opts in &options {
            let mut next = Vec::with_capacity(tuples.len() * opts.len());
            for t in &tuples {
                for &s in opts {
                    let mut t = t.clone();
                    t.push(s);
                    next.push(t);
                }
            }
            if next.len() > cap {
                return Err(Error::CapExceeded {
                    what: "set tuples".into(),
                    size: next.len(),
                    cap,
                });
            }
            tuples = next;
        }
        let mut elements: Vec<Vec<Vec<Set>>> = tuples.iter().map(|t| vec![t.clone()]).collect();
        for _ in 1..d {
            let mut next = Vec::new();
            for e in &elements {
                let last = tuple_support(e.last().expect("non-empty"));
                for t in &tuples {
                    if tuple_support(t) & last == 0 {
                        let mut e = e.clone();
                        e.push(t.clone());
                        next.push(e);
                    }
                }
                if next.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "star set tuples".into(),
                        size: next.len(),
                        cap,
                    });
                }
            }
            elements = next;
        }
        let index = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        Ok(SetTupleDomain {
            ground,
            ks: ks.to_vec(),
            d,
            elements,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn m(&self) -> usize {
        self.ks.len()
    }

    pub fn index_of(&self, e: &[Vec<Set>]) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Same supports per tuple and same sizes per entry.
    pub fn signature(e: &[Vec<Set>]) -> Vec<(u64, Vec<u32>)> {
        e.iter()
            .map(|f| (tuple_support(f), f.iter().map(|s| s.count_ones()).collect()))
            .collect()
    }
}

/// Classes of domain elements inside `(B_i)` that size-determination
/// forces to share a colour. Singletons are omitted.
pub fn size_classes(domain: &SetTupleDomain, bs: &[Set], filter: Option<&dyn Fn(&[Vec<Set>]) -> bool>) -> Vec<Vec<u32>> {
    let mut classes: BTreeMap<Vec<(u64, Vec<u32>)>, Vec<u32>> = BTreeMap::new();
    for (i, e) in domain.elements.iter().enumerate() {
        let inside = e.iter().all(|f| f.iter().zip(bs).all(|(&s, &b)| s & !b == 0));
        if inside && filter.is_none_or(|keep| keep(e)) {
            classes.entry(SetTupleDomain::signature(e)).or_default().push(i as u32);
        }
    }
    classes.into_values().filter(|c| c.len() > 1).collect()
}

/// Whether `chi` is size-determined on `(B_i)`.
pub fn is_size_determined(domain: &SetTupleDomain, chi: &Colouring, bs: &[Set]) -> bool {
    size_classes(domain, bs, None)
        .iter()
        .all(|class| class.iter().all(|&i| chi.get(i as usize) == chi.get(class[0] as usize)))
}

/// All `m`-tuples `(B_i)` with `B_i ⊆ {1..N}` and `|B_i| = l_i`, in
/// lexicographic order.
pub fn base_tuples(ground: usize, ls: &[usize]) -> Vec<Vec<Set>> {
    let per: Vec<Vec<Set>> = ls
        .iter()
        .map(|&l| (0..1u32 << ground).filter(|s| s.count_ones() as usize == l).collect())
        .collect();
    let mut out: Vec<Vec<Set>> = vec![Vec::new()];
    for opts in &per {
        out = out
            .iter()
            .flat_map(|t| {
                opts.iter().map(move |&s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SizeDeterminedOutcome {
    Found { bases: Vec<Vec<usize>> },
    Exhausted { tuples_tried: usize },
}

pub fn set_members(s: Set) -> Vec<usize> {
    (0..32).filter(|i| s >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn set_from_members(members: &[usize]) -> Set {
    members.iter().fold(0, |m, &x| m | 1 << (x - 1))
}

/// Exhaustive search for `(B_i)` with `|B_i| = l_i` on which `chi` is
/// size-determined.
pub fn size_determined_find(domain: &SetTupleDomain, chi: &Colouring, ls: &[usize]) -> Result<SizeDeterminedOutcome> {
    if ls.len() != domain.m() || domain.ks.iter().zip(ls).any(|(k, l)| k > l || *l > domain.ground) {
        return Err(Error::Precondition("need k_i ≤ l_i ≤ N for every coordinate".into()));
    }
    if !chi.is_valid(domain.len()) {
        return Err(Error::InvalidInput("colouring does not cover the domain".into()));
    }
    let tuples = base_tuples(domain.ground, ls);
    for (i, bs) in tuples.iter().enumerate() {
        if is_size_determined(domain, chi, bs) {
            let _ = i;
            return Ok(SizeDeterminedOutcome::Found {
                bases: bs.iter().map(|&b| set_members(b)).collect(),
            });
        }
    }
    Ok(SizeDeterminedOutcome::Exhausted {
        tuples_tried: tuples.len(),
    })
}

/// Least ground size `N ≤ n_max` such that every `r`-colouring of the star
/// set-tuple domain is size-determined on some `(B_i)`.
pub fn size_determined_number_search(
    d: usize,
    ks: &[usize],
    ls: &[usize],
    r: u8,
    n_max: usize,
    budget: u64,
) -> Result<NumberSearch> {
    if ks.len() != ls.len() || ks.iter().zip(ls).any(|(k, l)| k > l) || d == 0 || r < 2 {
        return Err(Error::Precondition("need matching k_i ≤ l_i, d ≥ 1, r ≥ 2".into()));
    }
    let mut levels = Vec::new();
    let start = ls.iter().copied().max().unwrap_or(0).max(1);
    for ground in 1..start {
        // no base sets of the required size exist yet
        let domain = SetTupleDomain::new(ground, ks, d, 5_000_000)?;
        levels.push((
            ground,
            LevelVerdict::Fails {
                domain: domain.len(),
                colouring: Colouring::constant(domain.len(), r),
            },
        ));
    }
    for ground in start..=n_max {
        let domain = SetTupleDomain::new(ground, ks, d, 5_000_000)?;
        let groups = base_tuples(ground, ls)
            .iter()
            .map(|bs| {
                // size-determined means every class is monochromatic; a bad
                // colouring breaks at least one class per base tuple
                size_classes(&domain, bs, None)
            })
            .collect();
        let h = Hypergraph {
            vertices: domain.len(),
            groups,
        };
        let verdict = decide(&h, r, budget);
        let holds = matches!(verdict, LevelVerdict::Holds { .. });
        levels.push((ground, verdict));
        if holds {
            break;
        }
    }
    Ok(summarize_levels(levels))
}

/// Surjections `{1..m} → {1..d}` as value vectors (0-based pieces), in
/// lexicographic order.
pub fn ordered_partitions_gamma(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0; m];
    fn rec(i: usize, m: usize, d: usize, cur: &mut [usize], out: &mut Vec<Vec<usize>>) {
        if i == m {
            let mut hit = vec![false; d];
            cur.iter().for_each(|&s| hit[s] = true);
            if hit.iter().all(|&h| h) {
                out.push(cur.to_vec());
            }
            return;
        }
        for s in 0..d {
            cur[i] = s;
            rec(i + 1, m, d, cur, out);
        }
    }
    rec(0, m, d, &mut cur, &mut out);
    out
}

/// The star tuple `(f^γ_s)`: coordinate `i` of tuple `s` is `A_i` when `γ`
/// sends `i` to `s`, and empty otherwise.
pub fn gamma_tuple(a: &[Set], gamma: &[usize], d: usize) -> Vec<Vec<Set>> {
    (0..d)
        .map(|s| a.iter().zip(gamma).map(|(&set, &g)| if g == s { set } else { 0 }).collect())
        .collect()
}

/// The product colouring `c(A)(γ) = χ((f^γ_s))` on the `d = 1` domain,
/// with colours packed as base-`r` numbers over `Γ` in lexicographic order.
pub fn gamma_lift(star: &SetTupleDomain, chi: &Colouring, plain: &SetTupleDomain) -> Result<(Colouring, u64)> {
    if plain.d != 1 || plain.ks != star.ks || plain.ground != star.ground {
        return Err(Error::InvalidInput("plain domain must be the d = 1 version of the star domain".into()));
    }
    let gammas = ordered_partitions_gamma(star.m(), star.d);
    let colours_total = (chi.r as u64)
        .checked_pow(gammas.len() as u32)
        .filter(|&t| t <= u8::MAX as u64 + 1)
        .ok_or_else(|| Error::CapExceeded {
            what: "lifted colour count".into(),
            size: gammas.len(),
            cap: 8,
        })?;
    let mut colours = Vec::with_capacity(plain.len());
    for e in &plain.elements {
        let a = &e[0];
        let mut packed = 0u64;
        for gamma in gammas.iter().rev() {
            let idx = star
                .index_of(&gamma_tuple(a, gamma, star.d))
                .ok_or_else(|| Error::Internal("γ-tuple outside the star domain".into()))?;
            packed = packed * chi.r as u64 + chi.get(idx) as u64;
        }
        colours.push(packed as u8);
    }
    Ok((
        Colouring {
            r: u8::try_from(colours_total).unwrap_or(u8::MAX),
            colours,
        },
        colours_total,
    ))
}

/// Whether the star tuple has the form `(f^γ_s)` for some surjection `γ`.
pub fn gamma_representable(e: &[Vec<Set>]) -> bool {
    let d = e.len();
    let m = e.first().map_or(0, Vec::len);
    // coordinates used by more than one tuple cannot be split
    let mut owner: Vec<Option<usize>> = vec![None; m];
    for (s, f) in e.iter().enumerate() {
        for (i, &set) in f.iter().enumerate() {
            if set != 0 {
                if owner[i].is_some() {
                    return false;
                }
                owner[i] = Some(s);
            }
        }
    }
    let free = owner.iter().filter(|o| o.is_none()).count();
    let needy = (0..d).filter(|&s| !owner.contains(&Some(s))).count();
    free >= needy
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stirling2(n: usize, k: usize) -> usize {
        if n == 0 && k == 0 {
            return 1;
        }
        if n == 0 || k == 0 {
            return 0;
        }
        k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partitions(3, 3).len(), 1);
        assert_eq!(partitions(3, 2).len(), 3);
        for n in 1..=7 {
            for d in 1..=n {
                let ps = partitions(n, d);
                assert_eq!(ps.len(), stirling2(n, d));
                assert!(ps.iter().all(OrderedPartition::is_valid));
            }
        }
    }

    #[test]
    fn coarsening_examples() {
        let singletons = &partitions(4, 4)[0];
        for p in partitions(4, 2) {
            assert!(is_coarsening(&p, singletons));
            assert!(!is_coarsening(singletons, &p));
        }
        let q = &partitions(4, 3)[0];
        let cs = coarsenings_of_size(q, 2);
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| is_coarsening(c, q) && c.len() == 2));
    }

    #[test]
    fn phi_examples() {
        let p = &partitions(3, 3)[0];
        let b = phi_encode(p, 2, 1).unwrap();
        assert_eq!(b.entries[0].values(), &[0, 1, 0]);
        assert_eq!(b.entries[1].values(), &[0, 0, 1]);
        let b = phi_encode(p, 1, 2).unwrap();
        assert_eq!(b.entries[0].values(), &[0, 1, 2]);
        assert!(phi_encode(p, 2, 2).is_err());
    }

    #[test]
    fn phi_is_star() {
        for n in 1..=6 {
            for (d, k) in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)] {
                for p in partitions(n, d * k + 1) {
                    let b = phi_encode(&p, d, k).unwrap();
                    assert!(b.is_block_star(), "{p:?}");
                    assert!(claim_properties(&b));
                }
            }
        }
    }

    #[test]
    fn solver_small_cases() {
        // triangle: 2-colourable with no monochromatic edge? edges of size 2
        let tri = Hypergraph::from_edges(3, vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        assert!(matches!(find_bad_colouring(&tri, 2, 1000), SolveOutcome::Exhausted { .. }));
        match find_bad_colouring(&tri, 3, 1000) {
            SolveOutcome::Found { colouring, .. } => assert!(escapes_all(&tri, &colouring)),
            other => panic!("{other:?}"),
        }
        let single = Hypergraph::from_edges(2, vec![vec![1]]);
        assert!(matches!(find_bad_colouring(&single, 2, 10), SolveOutcome::Exhausted { .. }));
        let none = Hypergraph::from_edges(2, vec![]);
        assert!(matches!(find_bad_colouring(&none, 2, 10), SolveOutcome::Found { .. }));
    }

    /// Oracle: enumerate every colouring.
    fn brute_bad(h: &Hypergraph, r: u8) -> bool {
        let total = colouring_count(h.vertices, r).unwrap();
        (0..total).any(|i| escapes_all(h, &Colouring::from_index(i, h.vertices, r)))
    }

    #[test]
    fn solver_matches_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let v = rng.gen_range(1..=7);
            let groups = (0..rng.gen_range(0..6))
                .map(|_| {
                    (0..rng.gen_range(1..=2))
                        .map(|_| (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..v) as u32).collect())
                        .collect()
                })
                .collect();
            let h = Hypergraph { vertices: v, groups };
            for r in [2, 3] {
                let found = match find_bad_colouring(&h, r, 1 << 20) {
                    SolveOutcome::Found { colouring, .. } => {
                        assert!(escapes_all(&h, &colouring));
                        true
                    }
                    SolveOutcome::Exhausted { .. } => false,
                    SolveOutcome::Budget { .. } => panic!("budget"),
                };
                assert_eq!(found, brute_bad(&h, r), "{h:?} r={r}");
            }
        }
    }

    #[test]
    fn gr_with_k_one() {
        for l in 2..=4 {
            let res = gr_search(1, l, 2, 6, 1 << 20).unwrap();
            assert_eq!(res.exact, Some(l));
        }
    }

    #[test]
    fn lelek_trivial_value() {
        let params = LelekParams { d: 1, m: 1, k: 1, l: 1 };
        assert_eq!(lelek_number_search(&params, 2, 3, 1 << 20).unwrap().exact, Some(1));
    }

    #[test]
    fn lelek_constant_colouring() {
        let params = LelekParams { d: 1, m: 2, k: 1, l: 1 };
        let domain = BlockDomain::new(1, 1, 3);
        let c = Colouring::constant(domain.len(), 2);
        match lelek_witness(&domain, &c, &params).unwrap() {
            LelekOutcome::Found(w) => {
                assert_eq!(w.route, WitnessRoute::Partition);
                assert!(verify_lelek_witness(&domain, &c, &w).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let tiny = BlockDomain::new(1, 1, 1);
        let c = Colouring::constant(tiny.len(), 2);
        assert!(matches!(
            lelek_witness(&tiny, &c, &params).unwrap(),
            LelekOutcome::Exhausted { .. }
        ));
    }

    #[test]
    fn size_determined_examples() {
        let domain = SetTupleDomain::new(3, &[1], 1, 1000).unwrap();
        assert_eq!(domain.len(), 4);
        let total = colouring_count(domain.len(), 2).unwrap();
        for i in 0..total {
            let chi = Colouring::from_index(i, domain.len(), 2);
            assert!(matches!(
                size_determined_find(&domain, &chi, &[2]).unwrap(),
                SizeDeterminedOutcome::Found { .. }
            ));
        }
        let chi = Colouring::from_index(0b0110, 4, 2);
        match size_determined_find(&domain, &chi, &[1]).unwrap() {
            SizeDeterminedOutcome::Found { bases } => assert_eq!(bases, vec![vec![1]]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn size_number_simple() {
        // m = 1, k = 1, l = 2, r = 2: three singletons force two of a colour
        let res = size_determined_number_search(1, &[1], &[2], 2, 4, 1 << 20).unwrap();
        assert_eq!(res.exact, Some(3));
    }

    #[test]
    fn gamma_counts() {
        assert_eq!(ordered_partitions_gamma(3, 1).len(), 1);
        assert_eq!(ordered_partitions_gamma(3, 3).len(), 6);
        assert_eq!(ordered_partitions_gamma(3, 2).len(), 6);
    }

    #[test]
    fn gamma_lift_d_one_is_reindexing() {
        let star = SetTupleDomain::new(2, &[1, 1], 1, 1000).unwrap();
        let chi = Colouring::from_index(12345, star.len(), 2);
        let (lift, total) = gamma_lift(&star, &chi, &star).unwrap();
        assert_eq!(total, 2);
        assert_eq!(lift.colours, chi.colours);
    }
}
