//! The bijection between words with empty reduction and doubly rooted
//! subgraph-rooted maps, and its inverse.
//!
//! Positions `p = 0..2n` of a word with domain `[-k, 2n-k)` are the darts of
//! the image map. An arch `(i, j)` becomes the edge `{i, j}`; the rotation is
//! `sigma(p+1) = alpha(p)` when letter `p` lies on an upper arch (hamburger
//! side) and `sigma(p+1) = p` otherwise. Upper arches form the spanning tree
//! `T`, arches closed by `F` are starred, and `G = T xor stars`. The root dart
//! is `k` (index 0) and the second root is dart 0 (the first letter).

mod loop_tree;
mod pipeline;

pub use loop_tree::{loop_tree_decode, loop_tree_encode, PlaneTree};
pub use pipeline::{
    build_arch_graph, psi_staged, split_triangulation, tutte_map, Arch, ArchGraph, EdgeClass,
    TriangulationSplit, TutteOutput,
};

use crate::error::{Error, Result};
use crate::map::{CanonicalForm, CombinatorialMap, SubgraphRootedMap, UnionFind};
use crate::word::{reduce, Letter, Word};

/// Positional view of a word with empty reduction.
#[derive(Debug, Clone)]
pub(crate) struct Arches {
    /// `-offset`.
    pub k: usize,
    pub letters: Vec<Letter>,
    pub partner: Vec<usize>,
    pub upper: Vec<bool>,
}

impl Arches {
    pub fn of(w: &Word) -> Result<Arches> {
        let len = w.len();
        let red = reduce(w);
        if !red.is_empty() {
            return Err(Error::NonemptyReduction(
                red.reduced().letters().iter().map(|l| l.to_char()).collect(),
            ));
        }
        let k = -w.offset();
        if len > 0 && !(0..len as i64).contains(&k) {
            return Err(Error::Precondition(format!(
                "offset {} outside -{}..=0",
                w.offset(),
                len - 1
            )));
        }
        let k = if len == 0 { 0 } else { k as usize };
        let letters = w.letters().to_vec();
        let partner: Vec<usize> = (0..len)
            .map(|p| {
                let idx = w.offset() + p as i64;
                let j = red
                    .matching
                    .partner(idx)
                    .and_then(|x| x.index())
                    .expect("empty reduction");
                (j - w.offset()) as usize
            })
            .collect();
        let upper = (0..len)
            .map(|p| {
                let opener = letters[p.min(partner[p])];
                opener == Letter::Hamburger
            })
            .collect();
        Ok(Arches {
            k,
            letters,
            partner,
            upper,
        })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }
}

/// `Psi`: word with empty reduction to doubly rooted map with stars.
pub fn psi(w: &Word) -> Result<SubgraphRootedMap> {
    let arches = Arches::of(w)?;
    let len = arches.len();
    if len == 0 {
        return Ok(SubgraphRootedMap::new(CombinatorialMap::vertex_map(), Vec::new()).with_second_root(0));
    }
    let alpha = arches.partner.clone();
    let mut sigma = vec![0; len];
    for p in 0..len {
        sigma[(p + 1) % len] = if arches.upper[p] { alpha[p] } else { p };
    }
    let map = CombinatorialMap::from_parts(alpha, sigma, arches.k);
    // edges are numbered by their opening position
    let mut subgraph = Vec::with_capacity(len / 2);
    let mut stars = Vec::with_capacity(len / 2);
    for p in 0..len {
        let q = arches.partner[p];
        if p < q {
            let star = arches.letters[q] == Letter::Flexible;
            subgraph.push(arches.upper[p] ^ star);
            stars.push(star);
        }
    }
    Ok(SubgraphRootedMap {
        map,
        subgraph,
        stars,
        second_root: Some(0),
    })
}

/// Orbits of the exploration walk for the edge set `edges` (per dart):
/// `d -> sigma^{-1}(alpha(d))` across a marked edge, `sigma^{-1}(d)` otherwise.
pub fn exploration_loops(map: &CombinatorialMap, dart_marked: &[bool]) -> (Vec<usize>, usize) {
    let sigma_inv = map.sigma_inverse();
    crate::map::cycle_labels(map.num_darts(), |d| {
        if dart_marked[d] {
            sigma_inv[map.alpha(d)]
        } else {
            sigma_inv[d]
        }
    })
}

/// Recovers the word of a doubly rooted subgraph-rooted map. Stars on the
/// input are ignored.
pub fn psi_inverse(dm: &SubgraphRootedMap) -> Result<Word> {
    dm.validate()?;
    let s = dm
        .second_root
        .ok_or_else(|| Error::Precondition("second root required".into()))?;
    let map = &dm.map;
    let n = map.num_darts();
    if n == 0 {
        return Ok(Word::empty(0));
    }
    let edge = map.edge_labels();
    let in_g = dm.dart_in_subgraph();
    let sigma_inv = map.sigma_inverse();
    let (loop_of, loops) = exploration_loops(map, &in_g);

    let mut darts_of = vec![Vec::new(); loops];
    for d in 0..n {
        darts_of[loop_of[d]].push(d);
    }
    let mut explorer = Explorer {
        map,
        edge: &edge,
        loop_of: &loop_of,
        darts_of: &darts_of,
        explored: vec![false; loops],
        visited: vec![false; n],
    };
    explorer.explored[loop_of[s]] = true;
    let mut flipped = vec![false; dm.subgraph.len()];
    let mut first_seen = vec![false; dm.subgraph.len()];
    let mut letters = Vec::with_capacity(n);
    let mut root_step = None;
    let mut d = s;
    for step in 0..n {
        if explorer.visited[d] {
            return Err(Error::NotInImage("exploration revisits a dart".into()));
        }
        explorer.visited[d] = true;
        if d == map.root() {
            root_step = Some(step);
        }
        let e = edge[d];
        let letter = if !first_seen[e] {
            first_seen[e] = true;
            let other = loop_of[map.alpha(d)];
            if !explorer.explored[other] && explorer.is_last_exit(other, e) {
                flipped[e] = true;
                explorer.explored[other] = true;
            }
            if dm.subgraph[e] ^ flipped[e] {
                Letter::Hamburger
            } else {
                Letter::Cheeseburger
            }
        } else if flipped[e] {
            Letter::Flexible
        } else if dm.subgraph[e] {
            Letter::HamburgerOrder
        } else {
            Letter::CheeseburgerOrder
        };
        letters.push(letter);
        let in_t = dm.subgraph[e] ^ flipped[e];
        d = if in_t {
            sigma_inv[map.alpha(d)]
        } else {
            sigma_inv[d]
        };
    }
    if d != s {
        return Err(Error::NotInImage("exploration does not close".into()));
    }
    let k = root_step.ok_or_else(|| Error::NotInImage("root dart never reached".into()))?;
    let w = Word::new(-(k as i64), letters);
    let image = psi(&w).map_err(|e| Error::NotInImage(e.to_string()))?;
    let strip = |x: &SubgraphRootedMap| {
        let mut y = x.clone();
        y.stars = vec![false; y.subgraph.len()];
        CanonicalForm::of_full(&y)
    };
    if strip(&image) != strip(dm) {
        return Err(Error::NotInImage("reconstructed word maps elsewhere".into()));
    }
    Ok(w)
}

struct Explorer<'a> {
    map: &'a CombinatorialMap,
    edge: &'a [usize],
    loop_of: &'a [usize],
    darts_of: &'a [Vec<usize>],
    explored: Vec<bool>,
    visited: Vec<bool>,
}

impl Explorer<'_> {
    /// Whether edge `e` is the only unvisited edge left joining the explored
    /// loops to the unexplored component of loop `start`. Components are
    /// taken through edges joining two unexplored loops.
    fn is_last_exit(&self, start: usize, e: usize) -> bool {
        let mut seen = self.explored.clone();
        seen[start] = true;
        let mut comp = vec![start];
        let mut head = 0;
        while head < comp.len() {
            let l = comp[head];
            head += 1;
            for &d in &self.darts_of[l] {
                let a = self.map.alpha(d);
                let m = self.loop_of[a];
                if self.explored[m] {
                    if self.edge[d] != e && !self.visited[d] && !self.visited[a] {
                        return false;
                    }
                } else if !seen[m] {
                    seen[m] = true;
                    comp.push(m);
                }
            }
        }
        true
    }
}

/// Number of loops of `sm` read off the exploration orbits of `G`.
pub fn loop_count_walk(sm: &SubgraphRootedMap) -> usize {
    if sm.map.is_vertex_map() {
        return 1;
    }
    exploration_loops(&sm.map, &sm.dart_in_subgraph()).1
}

/// Whether the subgraph is a spanning tree of the map.
pub fn is_spanning_tree(sm: &SubgraphRootedMap) -> bool {
    let (vlabel, v) = sm.map.vertex_labels();
    let mut uf = UnionFind::new(v);
    let edge = sm.map.edge_labels();
    for d in 0..sm.map.num_darts() {
        let a = sm.map.alpha(d);
        if d < a && sm.subgraph[edge[d]] && !uf.union(vlabel[d], vlabel[a]) {
            return false;
        }
    }
    uf.components() == 1
}

#[cfg(test)]
mod tests;
