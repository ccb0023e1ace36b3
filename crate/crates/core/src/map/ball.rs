//! Balls around the root, canonical forms and the local distance.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{CombinatorialMap, SubgraphRootedMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub radius: usize,
    pub rooted: SubgraphRootedMap,
}

/// Graph distance from the root vertex to every vertex label.
pub(crate) fn root_distances(map: &CombinatorialMap) -> (Vec<usize>, Vec<usize>) {
    let (vlabel, v) = map.vertex_labels();
    let mut dist = vec![usize::MAX; v];
    if map.is_vertex_map() {
        dist[0] = 0;
        return (vlabel, dist);
    }
    let mut darts_of = vec![Vec::new(); v];
    for d in 0..map.num_darts() {
        darts_of[vlabel[d]].push(d);
    }
    let start = vlabel[map.root()];
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &d in &darts_of[x] {
            let y = vlabel[map.alpha(d)];
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    (vlabel, dist)
}

/// The vertices within distance `radius` of the root vertex and every edge
/// joining two of them. The second root is dropped.
pub fn ball(sm: &SubgraphRootedMap, radius: usize) -> Ball {
    let map = &sm.map;
    if map.is_vertex_map() {
        return Ball {
            radius,
            rooted: SubgraphRootedMap::new(CombinatorialMap::vertex_map(), Vec::new()),
        };
    }
    let (vlabel, dist) = root_distances(map);
    let keep: Vec<bool> = (0..map.num_darts())
        .map(|d| dist[vlabel[d]] <= radius && dist[vlabel[map.alpha(d)]] <= radius)
        .collect();
    let sigma_inv = map.sigma_inverse();
    // the old root corner lies in the sector of the last kept dart before it
    let mut root = map.root();
    let mut steps = 0;
    while !keep[root] && steps < map.num_darts() {
        root = sigma_inv[root];
        steps += 1;
    }
    if !keep[root] {
        return Ball {
            radius,
            rooted: SubgraphRootedMap::new(CombinatorialMap::vertex_map(), Vec::new()),
        };
    }
    let (sub, new_id) = map.restrict_darts(&keep, root);
    let old_edges = map.edge_labels();
    let new_edges = sub.edge_labels();
    let mut subgraph = vec![false; sub.num_edges()];
    let mut stars = vec![false; sub.num_edges()];
    for d in 0..map.num_darts() {
        if let Some(i) = new_id[d] {
            subgraph[new_edges[i]] = sm.subgraph[old_edges[d]];
            stars[new_edges[i]] = sm.stars[old_edges[d]];
        }
    }
    Ball {
        radius,
        rooted: SubgraphRootedMap {
            map: sub,
            subgraph,
            stars,
            second_root: None,
        },
    }
}

/// A complete invariant of rooted maps under root-preserving relabeling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm(pub Vec<u32>);

const NONE: u32 = u32::MAX;

/// Dart order of a breadth-first search from the root that explores
/// `alpha(d)` then `sigma(d)`. Returns the old-to-new relabeling.
pub(crate) fn canonical_labels(map: &CombinatorialMap) -> Vec<usize> {
    let n = map.num_darts();
    let mut label = vec![usize::MAX; n];
    if n == 0 {
        return label;
    }
    let mut order = Vec::with_capacity(n);
    label[map.root()] = 0;
    order.push(map.root());
    let mut head = 0;
    while head < order.len() {
        let d = order[head];
        head += 1;
        for x in [map.alpha(d), map.sigma(d)] {
            if label[x] == usize::MAX {
                label[x] = order.len();
                order.push(x);
            }
        }
    }
    label
}

impl CanonicalForm {
    pub fn of_map(map: &CombinatorialMap) -> Self {
        Self::build(map, None, false, false)
    }

    /// Map plus subgraph; stars and second root are ignored.
    pub fn of_subgraph_map(sm: &SubgraphRootedMap) -> Self {
        Self::build(&sm.map, Some(sm), false, false)
    }

    /// Map, subgraph and second root; stars are ignored.
    pub fn of_doubly_rooted(sm: &SubgraphRootedMap) -> Self {
        Self::build(&sm.map, Some(sm), false, true)
    }

    /// Every field of the decorated map.
    pub fn of_full(sm: &SubgraphRootedMap) -> Self {
        Self::build(&sm.map, Some(sm), true, true)
    }

    fn build(map: &CombinatorialMap, sm: Option<&SubgraphRootedMap>, stars: bool, second: bool) -> Self {
        let n = map.num_darts();
        let label = canonical_labels(map);
        let mut inv = vec![0; n];
        for d in 0..n {
            inv[label[d]] = d;
        }
        let edges = map.edge_labels();
        let mut code = Vec::with_capacity(2 + 4 * n);
        code.push(n as u32);
        for &d in &inv {
            code.push(label[map.alpha(d)] as u32);
            code.push(label[map.sigma(d)] as u32);
            if let Some(sm) = sm {
                let mut bits = sm.subgraph[edges[d]] as u32;
                if stars {
                    bits |= (sm.stars[edges[d]] as u32) << 1;
                }
                code.push(bits);
            }
        }
        if let (Some(sm), true) = (sm, second) {
            code.push(
                sm.second_root
                    .map_or(NONE, |s| if n == 0 { 0 } else { label[s] as u32 }),
            );
        }
        CanonicalForm(code)
    }
}

/// Relabels the darts in canonical order; the root becomes dart 0.
pub fn canonical_map(map: &CombinatorialMap) -> CombinatorialMap {
    canonical_subgraph_map(&SubgraphRootedMap::new(map.clone(), vec![false; map.num_edges()])).map
}

/// Canonical relabeling that carries the decorations along.
pub fn canonical_subgraph_map(sm: &SubgraphRootedMap) -> SubgraphRootedMap {
    let map = &sm.map;
    let n = map.num_darts();
    if n == 0 {
        return sm.clone();
    }
    let label = canonical_labels(map);
    let mut alpha = vec![0; n];
    let mut sigma = vec![0; n];
    for d in 0..n {
        alpha[label[d]] = label[map.alpha(d)];
        sigma[label[d]] = label[map.sigma(d)];
    }
    let new_map = CombinatorialMap::from_parts(alpha, sigma, 0);
    let old_edges = map.edge_labels();
    let new_edges = new_map.edge_labels();
    let mut subgraph = vec![false; new_map.num_edges()];
    let mut stars = vec![false; new_map.num_edges()];
    for d in 0..n {
        subgraph[new_edges[label[d]]] = sm.subgraph[old_edges[d]];
        stars[new_edges[label[d]]] = sm.stars[old_edges[d]];
    }
    SubgraphRootedMap {
        map: new_map,
        subgraph,
        stars,
        second_root: sm.second_root.map(|s| label[s]),
    }
}

pub fn isomorphic(a: &SubgraphRootedMap, b: &SubgraphRootedMap) -> bool {
    CanonicalForm::of_full(a) == CanonicalForm::of_full(b)
}

/// `2^{-R}` for the largest `R` at which the balls agree (with subgraph),
/// 0 for identical maps. Differing radius-0 balls give 1.
pub fn map_distance(a: &SubgraphRootedMap, b: &SubgraphRootedMap) -> f64 {
    let ecc = |m: &CombinatorialMap| root_distances(m).1.into_iter().max().unwrap_or(0);
    let top = ecc(&a.map).max(ecc(&b.map));
    let mut agreed: Option<usize> = None;
    for r in 0..=top {
        let ba = ball(a, r);
        let bb = ball(b, r);
        if CanonicalForm::of_subgraph_map(&ba.rooted) != CanonicalForm::of_subgraph_map(&bb.rooted) {
            break;
        }
        agreed = Some(r);
    }
    match agreed {
        None => 1.0,
        Some(r) if r == top => 0.0,
        Some(r) => 0.5f64.powi(r as i32),
    }
}
