//! Amalgamation of chained fans and the constructions built on it:
//! coinitial covers, expansion witnesses and generic inverse sequences.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chains::{
    all_maximal_chains, canonical_structure, chain_epimorphism_maps, chain_image, preimage_chain, ChainEpi,
    ChainedFan,
};
use crate::epi::{search_maps, FanEpi, MapSearch, Mode};
use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex, ROOT};

/// A commuting square `f ∘ k = g ∘ l` over chained fans.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Amalgam {
    pub e: ChainedFan,
    pub k: ChainEpi,
    pub l: ChainEpi,
}

/// One branch prescription in the fibre product of `f: B → A` and
/// `g: D → A`: both coordinates stay at or below a bound in their chain
/// order, and must visit their target if one is given.
struct WalkGoal {
    x_bound: usize,
    y_bound: usize,
    x_target: Option<Vertex>,
    y_target: Option<Vertex>,
}

struct FibreProduct<'a> {
    b: &'a Fan,
    d: &'a Fan,
    f: &'a [Vertex],
    g: &'a [Vertex],
    b_pos: &'a dyn Fn(Vertex) -> usize,
    d_pos: &'a dyn Fn(Vertex) -> usize,
    mode: Mode,
}

impl FibreProduct<'_> {
    /// Shortest walk from the root pair meeting `goal`, as the sequence of
    /// visited pairs (starting with the root pair).
    fn shortest_walk(&self, goal: &WalkGoal) -> Option<Vec<(Vertex, Vertex)>> {
        let nd = self.d.vertex_count();
        let index = |x: Vertex, y: Vertex, rx: bool, ry: bool| ((x * nd + y) * 2 + rx as usize) * 2 + ry as usize;
        let size = self.b.vertex_count() * nd * 4;
        let mut prev = vec![usize::MAX; size];
        let reached = |t: Option<Vertex>, v: Vertex, before: bool| before || t.is_none_or(|t| t == v);
        let start = (ROOT, ROOT, reached(goal.x_target, ROOT, false), reached(goal.y_target, ROOT, false));
        let start_idx = index(start.0, start.1, start.2, start.3);
        prev[start_idx] = start_idx;
        let mut queue = VecDeque::from([start]);
        while let Some((x, y, rx, ry)) = queue.pop_front() {
            let here = index(x, y, rx, ry);
            if rx && ry {
                let mut walk = Vec::new();
                let mut cur = here;
                loop {
                    let ry_x = cur / 4;
                    walk.push((ry_x / nd, ry_x % nd));
                    if cur == start_idx {
                        break;
                    }
                    cur = prev[cur];
                }
                walk.reverse();
                return Some(walk);
            }
            for x2 in self.mode.successors(self.b, x) {
                if (self.b_pos)(x2) > goal.x_bound {
                    continue;
                }
                for y2 in self.mode.successors(self.d, y) {
                    if (self.d_pos)(y2) > goal.y_bound || self.f[x2] != self.g[y2] {
                        continue;
                    }
                    let state = (x2, y2, reached(goal.x_target, x2, rx), reached(goal.y_target, y2, ry));
                    let idx = index(state.0, state.1, state.2, state.3);
                    if prev[idx] == usize::MAX {
                        prev[idx] = here;
                        queue.push_back(state);
                    }
                }
            }
        }
        None
    }
}

/// Lays walks out as the branches of a uniform fan, padding each walk by
/// staying at its last pair.
fn walks_to_maps(walks: &[Vec<(Vertex, Vertex)>]) -> (Fan, Vec<Vertex>, Vec<Vertex>) {
    let h = walks.iter().map(|w| w.len() - 1).max().unwrap_or(0);
    let e = Fan::uniform(walks.len(), h);
    let mut k = vec![ROOT; e.vertex_count()];
    let mut l = vec![ROOT; e.vertex_count()];
    if h > 0 {
        for (j, walk) in walks.iter().enumerate() {
            for t in 1..=h {
                let (x, y) = walk[t.min(walk.len() - 1)];
                let v = e.vertex_at(j, t);
                k[v] = x;
                l[v] = y;
            }
        }
    }
    (e, k, l)
}

/// Amalgamates two chain-epimorphisms with a common target.
///
/// The result has `|B| + |D| − |A|` branches of equal height with the
/// canonical chain. Branches come in groups, one group per vertex `aⁱ` of
/// `A` in chain order: a branch reaching the first preimages `bⁱ`, `dⁱ`,
/// then one branch per vertex of `B` strictly between `bⁱ` and `bⁱ⁺¹`, then
/// one per vertex of `D` strictly between `dⁱ` and `dⁱ⁺¹`.
pub fn amalgamate_chained(f: &ChainEpi, g: &ChainEpi) -> Result<Amalgam> {
    if f.target() != g.target() {
        return Err(Error::EndpointMismatch("the two maps have different targets".into()));
    }
    if f.mode() != g.mode() {
        return Err(Error::InvalidInput("the two maps use different modes".into()));
    }
    let mode = f.mode();
    let (bc, dc, ac) = (f.source(), g.source(), f.target());
    let (b, d) = (bc.fan(), dc.fan());
    let first_preimage = |chain: &ChainedFan, map: &[Vertex], a: Vertex| {
        chain.order().iter().position(|&v| map[v] == a).expect("surjective")
    };
    // positions in the B and D orders of bⁱ and dⁱ
    let b_first: Vec<usize> = ac.order().iter().map(|&a| first_preimage(bc, f.map(), a)).collect();
    let d_first: Vec<usize> = ac.order().iter().map(|&a| first_preimage(dc, g.map(), a)).collect();
    let b_pos = |v: Vertex| bc.position(v);
    let d_pos = |v: Vertex| dc.position(v);
    let product = FibreProduct {
        b,
        d,
        f: f.map(),
        g: g.map(),
        b_pos: &b_pos,
        d_pos: &d_pos,
        mode,
    };
    let a_len = ac.order().len();
    let mut goals = Vec::with_capacity(b.vertex_count() + d.vertex_count() - a_len);
    for i in 0..a_len {
        let (bi, di) = (b_first[i], d_first[i]);
        goals.push(WalkGoal {
            x_bound: bi,
            y_bound: di,
            x_target: Some(bc.order()[bi]),
            y_target: Some(dc.order()[di]),
        });
        let b_next = b_first.get(i + 1).copied().unwrap_or(b.vertex_count());
        for p in bi + 1..b_next {
            goals.push(WalkGoal {
                x_bound: p,
                y_bound: di,
                x_target: Some(bc.order()[p]),
                y_target: None,
            });
        }
        let d_next = d_first.get(i + 1).copied().unwrap_or(d.vertex_count());
        for q in di + 1..d_next {
            goals.push(WalkGoal {
                x_bound: bi,
                y_bound: q,
                x_target: None,
                y_target: Some(dc.order()[q]),
            });
        }
    }
    let mut walks = Vec::with_capacity(goals.len());
    for (j, goal) in goals.iter().enumerate() {
        let Some(walk) = product.shortest_walk(goal) else {
            let (xs, ys) = fibre_product_reach(f.epi(), g.epi());
            if let Some(v) = xs.iter().position(|&r| !r) {
                return Err(Error::NoWitness(format!(
                    "no amalgam exists: vertex {v} of {b} is not the first coordinate of any reachable fibre-product pair"
                )));
            }
            if let Some(v) = ys.iter().position(|&r| !r) {
                return Err(Error::NoWitness(format!(
                    "no amalgam exists: vertex {v} of {d} is not the second coordinate of any reachable fibre-product pair"
                )));
            }
            return Err(Error::Internal(format!(
                "no fibre-product walk for branch {j} (targets {:?}/{:?}) over {b} and {d}",
                goal.x_target, goal.y_target
            )));
        };
        walks.push(walk);
    }
    let (e, k, l) = walks_to_maps(&walks);
    let ec = ChainedFan::canonical(&e);
    let k = ChainEpi::new(ec.clone(), bc.clone(), k, mode).map_err(|err| Error::Internal(format!("left leg: {err}")))?;
    let l = ChainEpi::new(ec.clone(), dc.clone(), l, mode).map_err(|err| Error::Internal(format!("right leg: {err}")))?;
    if e.vertices().any(|v| f.apply(k.apply(v)) != g.apply(l.apply(v))) {
        return Err(Error::Internal("square does not commute".into()));
    }
    Ok(Amalgam { e: ec, k, l })
}

/// Which vertices of the two sources occur in pairs reachable from the root
/// pair by simultaneous steps with `f(x) = g(y)`.
///
/// Every branch of an amalgam maps onto such a walk, so a vertex missing
/// here rules out any amalgam of `f` and `g`, chained or not.
pub fn fibre_product_reach(f: &FanEpi, g: &FanEpi) -> (Vec<bool>, Vec<bool>) {
    let (b, d) = (f.source(), g.source());
    let nd = d.vertex_count();
    let mut seen = vec![false; b.vertex_count() * nd];
    let mut xs = vec![false; b.vertex_count()];
    let mut ys = vec![false; nd];
    let mut stack = vec![(ROOT, ROOT)];
    seen[0] = true;
    while let Some((x, y)) = stack.pop() {
        xs[x] = true;
        ys[y] = true;
        for x2 in f.mode().successors(b, x) {
            for y2 in g.mode().successors(d, y) {
                if f.apply(x2) == g.apply(y2) && !seen[x2 * nd + y2] {
                    seen[x2 * nd + y2] = true;
                    stack.push((x2, y2));
                }
            }
        }
    }
    (xs, ys)
}

/// Amalgamation when all three fans have at most one branch: the shortest
/// fibre-product walk reaching both tops.
pub fn amalgamate_one_branch(f0: &FanEpi, g0: &FanEpi) -> Result<(Fan, FanEpi, FanEpi)> {
    if f0.target() != g0.target() {
        return Err(Error::EndpointMismatch("the two maps have different targets".into()));
    }
    let (b, d) = (f0.source(), g0.source());
    if b.width() > 1 || d.width() > 1 || f0.target().width() > 1 {
        return Err(Error::Precondition("all three fans must have at most one branch".into()));
    }
    let id = |v: Vertex| v;
    let product = FibreProduct {
        b,
        d,
        f: f0.map(),
        g: g0.map(),
        b_pos: &id,
        d_pos: &id,
        mode: f0.mode(),
    };
    let top = |fan: &Fan| if fan.is_point() { ROOT } else { fan.endpoint(0) };
    let goal = WalkGoal {
        x_bound: usize::MAX,
        y_bound: usize::MAX,
        x_target: Some(top(b)),
        y_target: Some(top(d)),
    };
    let walk = product
        .shortest_walk(&goal)
        .ok_or_else(|| Error::Internal("no walk covers both branches".into()))?;
    let (e, k, l) = walks_to_maps(&[walk]);
    let k = FanEpi::new(e.clone(), b.clone(), k, f0.mode())?;
    let l = FanEpi::new(e.clone(), d.clone(), l, f0.mode())?;
    Ok((e, k, l))
}

/// Amalgamation for plain fans, through chains: the first maximal chain on
/// `B`, its image on `A`, a compatible chain on `D`, then
/// [`amalgamate_chained`].
pub fn amalgamate_fans(f: &FanEpi, g: &FanEpi) -> Result<(Fan, FanEpi, FanEpi)> {
    if f.target() != g.target() {
        return Err(Error::EndpointMismatch("the two maps have different targets".into()));
    }
    let bc = ChainedFan::canonical(f.source());
    let ac = chain_image(f, &bc)?
        .chain
        .ok_or_else(|| Error::Internal("image of a maximal chain is not maximal".into()))?;
    let dc = preimage_chain(g, &ac)?;
    let fc = ChainEpi::from_epi(f.clone(), bc, ac.clone())?;
    let gc = ChainEpi::from_epi(g.clone(), dc, ac)?;
    let Amalgam { e, k, l } = amalgamate_chained(&fc, &gc)?;
    Ok((e.fan().clone(), k.epi().clone(), l.epi().clone()))
}

/// A canonical equal-height cover of `a`: one branch per vertex `aⁱ`,
/// climbing the segment `[root, aⁱ]` and then staying at its top.
pub fn coinitial_cover(a: &ChainedFan, mode: Mode) -> ChainEpi {
    let fan = a.fan();
    let b = Fan::uniform(fan.vertex_count(), fan.height());
    let mut map = vec![ROOT; b.vertex_count()];
    if !b.is_point() {
        for (i, &ai) in a.order().iter().enumerate() {
            let segment = fan.segment(ai);
            for t in 1..=b.height() {
                map[b.vertex_at(i, t)] = segment[t.min(segment.len() - 1)];
            }
        }
    }
    ChainEpi::new(ChainedFan::canonical(&b), a.clone(), map, mode).expect("cover is a chain-epimorphism")
}

/// The fan `D` witnessing the expansion property for `a`, together with
/// the cover `B_c → A_c` it is built from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionWitness {
    pub d: Fan,
    pub cover: ChainEpi,
}

/// `D` has `l` branches of height `k·l`, where `B_c` (height `k`, width `l`)
/// is the coinitial cover of `a`.
pub fn expansion_witness(a: &ChainedFan, mode: Mode) -> ExpansionWitness {
    let cover = coinitial_cover(a, mode);
    let b = cover.source().fan();
    let (k, l) = (b.height(), b.width());
    ExpansionWitness {
        d: Fan::uniform(l, k * l),
        cover,
    }
}

/// The epimorphism `D_c → B_c` for an arbitrary chain on the witness fan.
///
/// Branches of `D` are selected one at a time: the `i`-th selected branch
/// is the one, among those not yet used, whose vertex at height `ik` comes
/// first in the chain. Its window `((i−1)k, ik]` maps onto the `i`-th branch
/// of `B_c`; below the window goes to the root, above it to the top.
pub fn expansion_epi(d: &ChainedFan, b: &ChainedFan, mode: Mode) -> Result<ChainEpi> {
    let bf = b.fan();
    let df = d.fan();
    if bf.is_point() {
        return ChainEpi::new(d.clone(), b.clone(), vec![ROOT; df.vertex_count()], mode);
    }
    let info = canonical_structure(b);
    let branch_order = match info.branch_order {
        Some(order) if info.in_fcc => order,
        _ => return Err(Error::Precondition("target must be canonical with equal branch heights".into())),
    };
    let (k, l) = (bf.height(), bf.width());
    if df.width() != l || df.branch_lengths().iter().any(|&h| h != k * l) {
        return Err(Error::Precondition(format!(
            "{df} is not the witness of width {l} and height {}",
            k * l
        )));
    }
    let mut used = vec![false; l];
    let mut map = vec![ROOT; df.vertex_count()];
    for i in 1..=l {
        let chosen = (0..l)
            .filter(|&j| !used[j])
            .min_by_key(|&j| d.position(df.vertex_at(j, i * k)))
            .expect("an unused branch remains");
        used[chosen] = true;
        let target = branch_order[i - 1];
        for t in 1..=k * l {
            let v = df.vertex_at(chosen, t);
            map[v] = if t <= (i - 1) * k {
                ROOT
            } else {
                bf.vertex_at(target, (t - (i - 1) * k).min(k))
            };
        }
    }
    ChainEpi::new(d.clone(), b.clone(), map, mode)
        .map_err(|err| Error::Internal(format!("selected map fails verification: {err}")))
}

/// Every chained fan with at most `max_vertices` vertices, smallest first.
pub fn chained_catalog(max_vertices: usize) -> Vec<ChainedFan> {
    crate::fan::fans_up_to(max_vertices)
        .iter()
        .flat_map(all_maximal_chains)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Task {
    /// Some level must map onto catalog member `catalog`.
    Cover { catalog: usize },
    /// Some deeper level must factor through `epi: catalog → level`.
    Dominate { level: usize, catalog: usize, epi: Vec<Vertex> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub task: Task,
    /// Level whose map into the catalog member witnesses the task.
    pub witness_level: usize,
    pub witness: Vec<Vertex>,
    /// Whether a new level had to be added for this task.
    pub extended: bool,
}

/// A finite inverse sequence of chained fans with chain-epimorphic bondings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InverseSequence {
    pub levels: Vec<ChainedFan>,
    /// `bondings[n]` maps level `n + 1` onto level `n`.
    pub bondings: Vec<Vec<Vertex>>,
    pub tasks: Vec<TaskRecord>,
    pub pending: VecDeque<Task>,
    pub mode: Mode,
    pub seed: u64,
    // projections[p][m] = f^p_m
    #[serde(skip)]
    projections: Vec<Vec<Vec<Vertex>>>,
}

/// Knobs for [`generic_extend`] and [`generic_build`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericConfig {
    pub seed: u64,
    pub mode: Mode,
    /// A new level larger than this exhausts the budget.
    pub max_level_vertices: usize,
}

impl Default for GenericConfig {
    fn default() -> Self {
        GenericConfig {
            seed: 0,
            mode: Mode::default(),
            max_level_vertices: 5_000,
        }
    }
}

impl InverseSequence {
    /// The one-level sequence on the point, with every task for the catalog
    /// queued.
    pub fn start(catalog: &[ChainedFan], config: &GenericConfig) -> InverseSequence {
        let point = ChainedFan::canonical(&Fan::point());
        let mut seq = InverseSequence {
            levels: vec![point],
            bondings: Vec::new(),
            tasks: Vec::new(),
            pending: (0..catalog.len()).map(|c| Task::Cover { catalog: c }).collect(),
            mode: config.mode,
            seed: config.seed,
            projections: vec![vec![vec![ROOT]]],
        };
        seq.enqueue_domination(catalog, 0);
        seq
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn bottom(&self) -> &ChainedFan {
        self.levels.last().expect("at least one level")
    }

    /// `f^p_m: A_p → A_m` for `m ≤ p`.
    pub fn projection(&self, p: usize, m: usize) -> &[Vertex] {
        &self.projections[p][m]
    }

    /// Rebuilds the cached projections after deserialization and checks
    /// every bonding.
    pub fn validate(&mut self) -> Result<()> {
        if self.bondings.len() + 1 != self.levels.len() {
            return Err(Error::InvalidInput("need exactly one bonding per consecutive pair".into()));
        }
        for (n, map) in self.bondings.iter().enumerate() {
            ChainEpi::new(self.levels[n + 1].clone(), self.levels[n].clone(), map.clone(), self.mode)?;
        }
        self.projections.clear();
        for p in 0..self.levels.len() {
            self.push_projections(p);
        }
        Ok(())
    }

    fn push_projections(&mut self, p: usize) {
        let n = self.levels[p].fan().vertex_count();
        let mut row: Vec<Vec<Vertex>> = vec![Vec::new(); p + 1];
        row[p] = (0..n).collect();
        for m in (0..p).rev() {
            let bond = &self.bondings[m];
            row[m] = row[m + 1].iter().map(|&v| bond[v]).collect();
        }
        if self.projections.len() > p {
            self.projections[p] = row;
        } else {
            self.projections.push(row);
        }
    }

    fn enqueue_domination(&mut self, catalog: &[ChainedFan], level: usize) {
        let target = &self.levels[level];
        let mut new_tasks = Vec::new();
        for (c, member) in catalog.iter().enumerate() {
            if member.fan().vertex_count() < target.fan().vertex_count() {
                continue;
            }
            for epi in chain_epimorphism_maps(member, target, self.mode) {
                new_tasks.push(Task::Dominate { level, catalog: c, epi });
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(level as u64));
        new_tasks.shuffle(&mut rng);
        self.pending.extend(new_tasks);
    }

    /// A chain-epimorphism `γ: A_p → C` with `ε ∘ γ = f^p_m`, or with no
    /// side condition for a cover task.
    pub fn find_witness(&self, task: &Task, catalog: &[ChainedFan], p: usize) -> Option<Vec<Vertex>> {
        let source = &self.levels[p];
        let (member, constraint) = match task {
            Task::Cover { catalog: c } => (&catalog[*c], None),
            Task::Dominate { level, catalog: c, epi } => {
                if *level >= p {
                    return None;
                }
                (&catalog[*c], Some((self.projection(p, *level), epi.as_slice())))
            }
        };
        let allowed = |v: Vertex, x: Vertex| constraint.is_none_or(|(proj, eps)| eps[x] == proj[v]);
        let search = MapSearch {
            order: Some(source.order()),
            first_hits: Some(member.order()),
            allowed: Some(&allowed),
            ..MapSearch::new(source.fan(), member.fan(), self.mode)
        };
        let mut found = None;
        search_maps(&search, &mut |m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        found
    }

    fn append_level(&mut self, level: ChainedFan, bonding: Vec<Vertex>) {
        self.levels.push(level);
        self.bondings.push(bonding);
        self.push_projections(self.levels.len() - 1);
    }
}

/// Discharges queued tasks until one of them needs a new level, and adds
/// that level. Tasks already witnessed by the bottom level are logged
/// without extending. Returns the sequence unchanged when nothing is
/// pending.
pub fn generic_extend(
    seq: &InverseSequence,
    catalog: &[ChainedFan],
    config: &GenericConfig,
) -> Result<InverseSequence> {
    let mut next = seq.clone();
    let bottom_index = next.levels.len() - 1;
    while let Some(task) = next.pending.pop_front() {
        if let Some(witness) = next.find_witness(&task, catalog, bottom_index) {
            next.tasks.push(TaskRecord {
                task,
                witness_level: bottom_index,
                witness,
                extended: false,
            });
            continue;
        }
        let bottom = next.bottom().clone();
        let (left, member, right) = match &task {
            Task::Cover { catalog: c } => {
                let point = ChainedFan::canonical(&Fan::point());
                let to_point = |chain: &ChainedFan| {
                    ChainEpi::new(chain.clone(), point.clone(), vec![ROOT; chain.fan().vertex_count()], next.mode)
                };
                (to_point(&bottom)?, &catalog[*c], to_point(&catalog[*c])?)
            }
            Task::Dominate { level, catalog: c, epi } => {
                let left = ChainEpi::new(
                    bottom.clone(),
                    next.levels[*level].clone(),
                    next.projection(bottom_index, *level).to_vec(),
                    next.mode,
                )?;
                let right = ChainEpi::new(catalog[*c].clone(), next.levels[*level].clone(), epi.clone(), next.mode)?;
                (left, &catalog[*c], right)
            }
        };
        debug_assert_eq!(right.source(), member);
        let amalgam = amalgamate_chained(&left, &right)?;
        let size = amalgam.e.fan().vertex_count();
        if size > config.max_level_vertices {
            return Err(Error::BudgetExhausted { spent: size as u64 });
        }
        next.append_level(amalgam.e, amalgam.k.map().to_vec());
        let new_index = next.levels.len() - 1;
        next.tasks.push(TaskRecord {
            task,
            witness_level: new_index,
            witness: amalgam.l.map().to_vec(),
            extended: true,
        });
        next.enqueue_domination(catalog, new_index);
        return Ok(next);
    }
    Ok(next)
}

/// Runs [`generic_extend`] up to `steps` times, stopping early once no
/// task is pending.
pub fn generic_build(catalog: &[ChainedFan], steps: usize, config: &GenericConfig) -> Result<InverseSequence> {
    let mut seq = InverseSequence::start(catalog, config);
    for _ in 0..steps {
        if seq.pending.is_empty() {
            break;
        }
        seq = generic_extend(&seq, catalog, config)?;
    }
    Ok(seq)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationReport {
    /// Logged tasks whose witness re-verifies.
    pub logged_ok: usize,
    pub logged_failed: Vec<Task>,
    /// Catalog members with no chain-epimorphism from the bottom level.
    pub uncovered: Vec<usize>,
    /// `(level, catalog, ε)` triples up to the horizon with no factoring
    /// deeper level.
    pub unsatisfied: Vec<Task>,
    pub checked: usize,
    pub pass: bool,
}

/// Finitary domination check up to level `up_to_level`.
pub fn check_dominating(seq: &InverseSequence, catalog: &[ChainedFan], up_to_level: usize) -> Result<DominationReport> {
    if up_to_level >= seq.levels.len() {
        return Err(Error::Precondition(format!(
            "level {up_to_level} is beyond the sequence depth {}",
            seq.levels.len()
        )));
    }
    let mut logged_failed = Vec::new();
    let mut logged_ok = 0;
    for record in &seq.tasks {
        let p = record.witness_level;
        let (member, constraint) = match &record.task {
            Task::Cover { catalog: c } => (&catalog[*c], None),
            Task::Dominate { level, catalog: c, epi } => (&catalog[*c], Some((*level, epi))),
        };
        let verified = ChainEpi::new(seq.levels[p].clone(), member.clone(), record.witness.clone(), seq.mode).is_ok()
            && constraint.is_none_or(|(m, eps)| {
                m < p && (0..record.witness.len()).all(|v| eps[record.witness[v]] == seq.projection(p, m)[v])
            });
        if verified {
            logged_ok += 1;
        } else {
            logged_failed.push(record.task.clone());
        }
    }
    let bottom = seq.levels.len() - 1;
    let uncovered: Vec<usize> = (0..catalog.len())
        .filter(|&c| seq.find_witness(&Task::Cover { catalog: c }, catalog, bottom).is_none())
        .collect();
    let mut unsatisfied = Vec::new();
    let mut checked = 0;
    for level in 0..=up_to_level {
        for (c, member) in catalog.iter().enumerate() {
            for epi in chain_epimorphism_maps(member, &seq.levels[level], seq.mode) {
                checked += 1;
                let task = Task::Dominate { level, catalog: c, epi };
                if !(level + 1..seq.levels.len()).any(|p| seq.find_witness(&task, catalog, p).is_some()) {
                    unsatisfied.push(task);
                }
            }
        }
    }
    let pass = logged_failed.is_empty() && uncovered.is_empty();
    Ok(DominationReport {
        logged_ok,
        logged_failed,
        uncovered,
        unsatisfied,
        checked,
        pass,
    })
}
