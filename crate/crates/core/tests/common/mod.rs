//! Brute-force oracles shared by the integration tests. They use only the
//! structural accessors of `Fan`, never the library's own checkers.
#![allow(dead_code)]

use fan_fraisse::{ChainedFan, Fan, Mode, Vertex, ROOT};

/// Every root-preserving vertex map onto the target, by counting.
pub fn root_surjections(source: &Fan, target: &Fan) -> Vec<Vec<Vertex>> {
    let (n, m) = (source.vertex_count(), target.vertex_count());
    let mut out = Vec::new();
    let mut map = vec![0; n];
    loop {
        let mut hit = vec![false; m];
        map.iter().for_each(|&v| hit[v] = true);
        if map[ROOT] == ROOT && hit.iter().all(|&h| h) {
            out.push(map.clone());
        }
        let mut i = 0;
        while i < n {
            map[i] += 1;
            if map[i] < m {
                break;
            }
            map[i] = 0;
            i += 1;
        }
        if i == n {
            return out;
        }
    }
}

pub fn is_epi(map: &[Vertex], source: &Fan, target: &Fan, mode: Mode) -> bool {
    if map.len() != source.vertex_count() || map[ROOT] != ROOT {
        return false;
    }
    let mut hit = vec![false; target.vertex_count()];
    map.iter().for_each(|&v| hit[v] = true);
    if !hit.iter().all(|&h| h) {
        return false;
    }
    source.vertices().skip(1).all(|v| {
        let (x, y) = (map[source.parent(v).unwrap()], map[v]);
        x == y
            || target.parent(y) == Some(x)
            || (mode == Mode::Symmetrized && target.parent(x) == Some(y))
    })
}

/// Target vertices in the order the source chain first reaches them.
pub fn first_hits(map: &[Vertex], source_order: &[Vertex], target_size: usize) -> Vec<Vertex> {
    let mut seen = vec![false; target_size];
    let mut out = Vec::new();
    for &v in source_order {
        if !seen[map[v]] {
            seen[map[v]] = true;
            out.push(map[v]);
        }
    }
    out
}

pub fn is_chain_epi(map: &[Vertex], source: &ChainedFan, target: &ChainedFan, mode: Mode) -> bool {
    is_epi(map, source.fan(), target.fan(), mode)
        && first_hits(map, source.order(), target.fan().vertex_count()) == target.order()
}

/// Linear extensions by filtering every permutation of the non-root
/// vertices.
pub fn linear_extensions(fan: &Fan) -> Vec<Vec<Vertex>> {
    let rest: Vec<Vertex> = fan.vertices().skip(1).collect();
    let mut out = Vec::new();
    let mut perm = rest.clone();
    permute(&mut perm, 0, &mut |p| {
        let mut placed = vec![false; fan.vertex_count()];
        placed[ROOT] = true;
        let ok = p.iter().all(|&v| {
            let ok = placed[fan.parent(v).unwrap()];
            placed[v] = true;
            ok
        });
        if ok {
            let mut order = vec![ROOT];
            order.extend_from_slice(p);
            out.push(order);
        }
    });
    out
}

fn permute(items: &mut Vec<Vertex>, k: usize, visit: &mut dyn FnMut(&[Vertex])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn chained(lengths: &[usize]) -> ChainedFan {
    ChainedFan::canonical(&Fan::from_branches(lengths).unwrap())
}
