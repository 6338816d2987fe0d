//! Path and Hausdorff metrics on finite fans, and the merging of two nearby
//! maximal chains by a small perturbation of an epimorphism.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::chains::ChainedFan;
use crate::epi::{is_epimorphism, FanEpi, Mode};
use crate::error::{Error, Result};
use crate::fan::{Fan, Vertex, ROOT};

/// Graph distances in the symmetrized fan, with their Hausdorff lifts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanMetric {
    pub fan: Fan,
    pub mu0: Vec<Vec<usize>>,
}

pub fn fan_metrics(a: &Fan) -> FanMetric {
    let n = a.vertex_count();
    let mu0 = (0..n)
        .map(|s| {
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in a.neighbours(x) {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
            dist
        })
        .collect();
    FanMetric { fan: a.clone(), mu0 }
}

fn hausdorff<T>(xs: &[T], ys: &[T], dist: impl Fn(&T, &T) -> Result<usize>) -> Result<usize> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::InvalidInput("Hausdorff distance of an empty set".into()));
    }
    let mut worst = 0;
    for (from, to) in [(xs, ys), (ys, xs)] {
        for x in from {
            let mut best = usize::MAX;
            for y in to {
                best = best.min(dist(x, y)?);
            }
            worst = worst.max(best);
        }
    }
    Ok(worst)
}

impl FanMetric {
    pub fn mu0(&self, x: Vertex, y: Vertex) -> usize {
        self.mu0[x][y]
    }

    pub fn mu1(&self, xs: &[Vertex], ys: &[Vertex]) -> Result<usize> {
        let n = self.fan.vertex_count();
        if let Some(&v) = xs.iter().chain(ys).find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, size: n });
        }
        hausdorff(xs, ys, |&x, &y| Ok(self.mu0(x, y)))
    }

    pub fn mu2(&self, xs: &[Vec<Vertex>], ys: &[Vec<Vertex>]) -> Result<usize> {
        hausdorff(xs, ys, |x, y| self.mu1(x, y))
    }
}

/// The links of a chain as sorted vertex lists, smallest first.
pub fn set_chain(c: &ChainedFan) -> Vec<Vec<Vertex>> {
    (1..=c.order().len())
        .map(|i| {
            let mut link = c.order()[..i].to_vec();
            link.sort_unstable();
            link
        })
        .collect()
}

/// The distinct images `ψ(L)` of the links of a set-chain.
pub fn image_chain(map: &[Vertex], chain: &[Vec<Vertex>]) -> BTreeSet<Vec<Vertex>> {
    chain
        .iter()
        .map(|link| {
            let img: BTreeSet<Vertex> = link.iter().map(|&x| map[x]).collect();
            img.into_iter().collect()
        })
        .collect()
}

/// Vertices of branch `b` including the root, bottom to top.
fn branch_with_root(fan: &Fan, b: usize) -> Vec<Vertex> {
    std::iter::once(ROOT).chain(fan.branch_vertices(b)).collect()
}

/// Whether `psi(x)` is `phi(x)` or the parent of `phi(x)` for every `x`.
pub fn fibre_containment(phi: &[Vertex], psi: &[Vertex], a: &Fan) -> bool {
    phi.iter()
        .zip(psi)
        .all(|(&f, &p)| p == f || a.parent(f) == Some(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MergeRoute {
    /// The inductive construction of the proof.
    Induction,
    /// Exact search over all admissible maps.
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeResult {
    pub psi: Vec<Vertex>,
    pub route: MergeRoute,
    /// The common image chain.
    pub chain: Vec<Vec<Vertex>>,
    pub equal_images: bool,
    pub containment: bool,
    pub epimorphism: bool,
}

/// Checks the hypotheses: every branch-fibre of `phi` missing the branch
/// endpoint has at least `2K + 1` elements, and `μ²(C, D) ≤ 1`.
pub fn check_nakr_hypotheses(phi: &FanEpi, c: &ChainedFan, d: &ChainedFan) -> Result<()> {
    let b = phi.source();
    let a = phi.target();
    if c.fan() != b || d.fan() != b {
        return Err(Error::EndpointMismatch("chains must live on the source of phi".into()));
    }
    let k = a.vertex_count();
    for br in 0..b.width() {
        let verts = branch_with_root(b, br);
        let top = *verts.last().expect("non-empty");
        for t in a.vertices() {
            let fibre: Vec<Vertex> = verts.iter().copied().filter(|&x| phi.apply(x) == t).collect();
            if !fibre.is_empty() && !fibre.contains(&top) && fibre.len() < 2 * k + 1 {
                return Err(Error::Precondition(format!(
                    "fibre of {t} on branch {} has {} elements, need {}",
                    br + 1,
                    fibre.len(),
                    2 * k + 1
                )));
            }
        }
    }
    let dist = fan_metrics(b).mu2(&set_chain(c), &set_chain(d))?;
    if dist > 1 {
        return Err(Error::Precondition(format!("chain distance is {dist}, need at most 1")));
    }
    Ok(())
}

/// An epimorphism `ψ: B → A` with `ψ(C) = ψ(D)` and
/// `ψ(x) ∈ {φ(x), parent(φ(x))}`.
///
/// Runs the proof's induction, backtracking over the choice of the partner
/// link in `D`. If no choice sequence verifies, falls back to an exact
/// search over admissible maps when `B` has at most `search_limit` vertices.
pub fn nakr_merge(phi: &FanEpi, c: &ChainedFan, d: &ChainedFan, search_limit: usize) -> Result<MergeResult> {
    check_nakr_hypotheses(phi, c, d)?;
    let b = phi.source();
    let a = phi.target();
    let metric = fan_metrics(b);
    let cs = set_chain(c);
    let ds = set_chain(d);
    let k = a.vertex_count();
    let mut state = Induction {
        b,
        a,
        metric: &metric,
        cs: &cs,
        ds: &ds,
        k,
        mode: phi.mode(),
        phi: phi.map(),
    };
    let start = phi.map().to_vec();
    if let Some(psi) = state.step(1, &start, &[ROOT])? {
        return finish(phi, psi, MergeRoute::Induction, &cs, &ds);
    }
    if b.vertex_count() <= search_limit {
        if let Some(psi) = admissible_maps(phi, &cs, &ds, true).into_iter().next() {
            return finish(phi, psi, MergeRoute::Search, &cs, &ds);
        }
        return Err(Error::NoWitness("no admissible map merges the two chains".into()));
    }
    Err(Error::NoWitness(format!(
        "induction found no merge and B has more than {search_limit} vertices for the exact search"
    )))
}

fn finish(phi: &FanEpi, psi: Vec<Vertex>, route: MergeRoute, cs: &[Vec<Vertex>], ds: &[Vec<Vertex>]) -> Result<MergeResult> {
    let img_c = image_chain(&psi, cs);
    let equal_images = img_c == image_chain(&psi, ds);
    let containment = fibre_containment(phi.map(), &psi, phi.target());
    let epimorphism = is_epimorphism(&psi, phi.source(), phi.target(), phi.mode())?;
    if !(equal_images && containment && epimorphism) {
        return Err(Error::Internal(format!("merge {psi:?} failed re-verification")));
    }
    Ok(MergeResult {
        psi,
        route,
        chain: img_c.into_iter().collect(),
        equal_images,
        containment,
        epimorphism,
    })
}

struct Induction<'a> {
    b: &'a Fan,
    a: &'a Fan,
    metric: &'a FanMetric,
    cs: &'a [Vec<Vertex>],
    ds: &'a [Vec<Vertex>],
    k: usize,
    mode: Mode,
    phi: &'a [Vertex],
}

impl Induction<'_> {
    /// `psi` is `ψ_n` and `dn` the last link `D_n`.
    fn step(&mut self, n: usize, psi: &[Vertex], dn: &[Vertex]) -> Result<Option<Vec<Vertex>>> {
        if n == self.k {
            let ok = image_chain(psi, self.cs) == image_chain(psi, self.ds)
                && fibre_containment(self.phi, psi, self.a)
                && is_epimorphism(psi, self.b, self.a, self.mode)?;
            return Ok(ok.then(|| psi.to_vec()));
        }
        if !self.fibres_large(n, psi) {
            return Ok(None);
        }
        let in_e: Vec<bool> = psi.iter().map(|y| dn.contains(y)).collect();
        // least C-link holding a vertex p outside E together with its child q
        let found = self.cs.iter().find_map(|link| {
            link.iter().find_map(|&p| {
                (!in_e[p] && self.b.children(p).iter().any(|q| link.contains(q))).then_some((link, p))
            })
        });
        let Some((c_link, p)) = found else {
            return Ok(None);
        };
        let branch = self.b.branch_of(p).expect("p is not the root");
        let mut next_dn = dn.to_vec();
        if !next_dn.contains(&psi[p]) {
            next_dn.push(psi[p]);
        }
        for d_link in self.ds {
            if self.metric.mu1(c_link, d_link)? > 1 {
                continue;
            }
            let mut next = psi.to_vec();
            for &x in c_link.iter().chain(d_link) {
                if in_e[x] || self.b.branch_of(x) == Some(branch) {
                    continue;
                }
                let c = self.b.branch_of(x).expect("root is in E");
                let z = branch_with_root(self.b, c)
                    .into_iter()
                    .filter(|&y| in_e[y])
                    .last()
                    .expect("root is in E");
                next[x] = psi[z];
            }
            if let Some(done) = self.step(n + 1, &next, &next_dn)? {
                return Ok(Some(done));
            }
        }
        Ok(None)
    }

    /// Fibres missing their branch endpoint keep `2(K − n + 1) + 1` elements.
    fn fibres_large(&self, n: usize, psi: &[Vertex]) -> bool {
        let need = 2 * (self.k - n + 1) + 1;
        (0..self.b.width()).all(|br| {
            let verts = branch_with_root(self.b, br);
            let top = *verts.last().expect("non-empty");
            self.a.vertices().all(|t| {
                let fibre: Vec<Vertex> = verts.iter().copied().filter(|&x| psi[x] == t).collect();
                fibre.is_empty() || fibre.contains(&top) || fibre.len() >= need
            })
        })
    }
}

/// Every map with `ψ(x) ∈ {φ(x), parent(φ(x))}` that is an epimorphism and
/// merges the two chains. Stops after the first if `first_only`.
pub fn admissible_maps(phi: &FanEpi, cs: &[Vec<Vertex>], ds: &[Vec<Vertex>], first_only: bool) -> Vec<Vec<Vertex>> {
    let b = phi.source();
    let a = phi.target();
    let n = b.vertex_count();
    let options: Vec<Vec<Vertex>> = (0..n)
        .map(|x| {
            let f = phi.apply(x);
            std::iter::once(f).chain(a.parent(f)).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![ROOT; n];
    fn rec(
        x: usize,
        options: &[Vec<Vertex>],
        cur: &mut Vec<Vertex>,
        phi: &FanEpi,
        cs: &[Vec<Vertex>],
        ds: &[Vec<Vertex>],
        first_only: bool,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if first_only && !out.is_empty() {
            return;
        }
        let b = phi.source();
        if x == options.len() {
            if is_epimorphism(cur, b, phi.target(), phi.mode()).unwrap_or(false)
                && image_chain(cur, cs) == image_chain(cur, ds)
            {
                out.push(cur.clone());
            }
            return;
        }
        for &t in &options[x] {
            // vertices are numbered so the parent comes first
            if let Some(p) = b.parent(x) {
                if !phi.mode().edge_ok(phi.target(), cur[p], t) {
                    continue;
                }
            } else if t != ROOT {
                continue;
            }
            cur[x] = t;
            rec(x + 1, options, cur, phi, cs, ds, first_only, out);
        }
    }
    rec(0, &options, &mut cur, phi, cs, ds, first_only, &mut out);
    out
}

/// A random instance satisfying the hypotheses: `A` is a random fan with
/// at most `max_a` vertices, each branch of `B` climbs one branch of `A`
/// with fibres of size `2K + 1 + extra`, and `D` is `C` with a few adjacent
/// swaps. Fibres holding a branch endpoint get 1 or 2 elements unless
/// `large_tops` is set, in which case they are as large as the others.
#[derive(Clone, Debug)]
pub struct NakrInstance {
    pub phi: FanEpi,
    pub c: ChainedFan,
    pub d: ChainedFan,
}

pub fn random_nakr_instance<R: Rng>(
    rng: &mut R,
    max_a: usize,
    max_extra: usize,
    large_tops: bool,
    mode: Mode,
) -> Result<NakrInstance> {
    let a_fans = crate::fan::fans_up_to(max_a.max(2));
    let a_fans: Vec<&Fan> = a_fans.iter().filter(|f| !f.is_point()).collect();
    let a = (*a_fans.choose(rng).expect("non-empty")).clone();
    let k = a.vertex_count();
    // one word of target heights per branch of B
    let mut words: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut plan: Vec<usize> = (0..a.width()).collect();
    for _ in 0..rng.gen_range(0..=1) {
        plan.push(rng.gen_range(0..a.width()));
    }
    plan.shuffle(rng);
    for ab in plan {
        let top = if words.iter().any(|(b, _)| *b == ab) {
            rng.gen_range(0..=a.branch_lengths()[ab])
        } else {
            a.branch_lengths()[ab]
        };
        let mut heights = Vec::new();
        for level in 0..=top {
            let size = if level == top && !large_tops {
                rng.gen_range(1..=2)
            } else {
                2 * k + 1 + rng.gen_range(0..=max_extra)
            };
            // the root counts towards the level-0 fibre
            let size = if level == 0 { size - 1 } else { size };
            heights.extend(std::iter::repeat_n(level, size));
        }
        if heights.is_empty() {
            heights.push(0);
        }
        words.push((ab, heights));
    }
    let b = Fan::from_branches(&words.iter().map(|(_, w)| w.len()).collect::<Vec<_>>())?;
    let mut map = vec![ROOT; b.vertex_count()];
    for (br, (ab, w)) in words.iter().enumerate() {
        for (i, &h) in w.iter().enumerate() {
            map[b.vertex_at(br, i + 1)] = a.vertex_at(*ab, h);
        }
    }
    let phi = FanEpi::new(b.clone(), a, map, mode)?;
    let c = random_linear_extension(&b, rng)?;
    for _ in 0..20 {
        let mut order = c.order().to_vec();
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(1..order.len().max(2) - 1 + 1).min(order.len() - 1);
            if i + 1 < order.len() && b.parent(order[i + 1]) != Some(order[i]) {
                order.swap(i, i + 1);
            }
        }
        let d = ChainedFan::new(b.clone(), order)?;
        if fan_metrics(&b).mu2(&set_chain(&c), &set_chain(&d))? <= 1 {
            return Ok(NakrInstance { phi, c, d });
        }
    }
    Ok(NakrInstance { phi, d: c.clone(), c })
}

/// A uniformly chosen available vertex at each step.
pub fn random_linear_extension<R: Rng>(fan: &Fan, rng: &mut R) -> Result<ChainedFan> {
    let mut order = vec![ROOT];
    let mut available: Vec<Vertex> = fan.children(ROOT);
    while !available.is_empty() {
        let i = rng.gen_range(0..available.len());
        let v = available.swap_remove(i);
        order.push(v);
        available.extend(fan.children(v));
    }
    ChainedFan::new(fan.clone(), order)
}
