//! The bijection built in three explicit stages: arch graph, triangulation
//! split, Tutte's quadrangulation correspondence.
//!
//! Arch graph darts for a word with `2n` letters (vertex `v` is position `v`):
//! cycle edge `c_i` joins vertices `i-1` and `i` (indices mod `2n`; `c_0`
//! wraps around over the upper arches) with dart `2i` at `i-1` and `2i+1` at
//! `i`. Arch `t` has dart `4n+2t` at its opening vertex and `4n+2t+1` at its
//! closing vertex. Around a vertex the counterclockwise order is: right
//! cycle dart, upper arch, left cycle dart, lower arch.

use super::Arches;
use crate::error::{Error, Result};
use crate::map::{CombinatorialMap, SubgraphRootedMap};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arch {
    pub open: usize,
    pub close: usize,
    pub upper: bool,
    pub starred: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchGraph {
    /// Root dart `r`: from vertex `k` (index 0) to vertex `k-1`.
    pub map: CombinatorialMap,
    pub arches: Vec<Arch>,
    /// Dart `s`: from the first vertex to the last along the wrapping edge.
    pub s: usize,
}

impl ArchGraph {
    pub fn num_vertices(&self) -> usize {
        2 * self.arches.len()
    }

    pub fn is_cycle_dart(&self, d: usize) -> bool {
        d < 2 * self.num_vertices()
    }

    pub fn arch_of_dart(&self, d: usize) -> Option<usize> {
        d.checked_sub(2 * self.num_vertices()).map(|x| x / 2)
    }

    pub fn r(&self) -> usize {
        self.map.root()
    }

    /// Reads the word back off the arches and the root.
    pub fn word(&self) -> Word {
        let len = self.num_vertices();
        let mut letters = vec![Letter::Hamburger; len];
        for a in &self.arches {
            letters[a.open] = if a.upper {
                Letter::Hamburger
            } else {
                Letter::Cheeseburger
            };
            letters[a.close] = match (a.starred, a.upper) {
                (true, _) => Letter::Flexible,
                (false, true) => Letter::HamburgerOrder,
                (false, false) => Letter::CheeseburgerOrder,
            };
        }
        let k = if len == 0 { 0 } else { (self.r() - 1) / 2 };
        Word::new(-(k as i64), letters)
    }
}

pub fn build_arch_graph(w: &Word) -> Result<ArchGraph> {
    let a = Arches::of(w)?;
    let len = a.len();
    if len == 0 {
        return Err(Error::Precondition("the empty word has no arch graph".into()));
    }
    let mut arches = Vec::with_capacity(len / 2);
    let mut arch_dart = vec![0; len];
    for p in 0..len {
        let q = a.partner[p];
        if p < q {
            let t = arches.len();
            arch_dart[p] = 2 * len + 2 * t;
            arch_dart[q] = 2 * len + 2 * t + 1;
            arches.push(Arch {
                open: p,
                close: q,
                upper: a.upper[p],
                starred: a.letters[q] == Letter::Flexible,
            });
        }
    }
    let darts = 3 * len;
    let alpha: Vec<usize> = (0..darts).map(|d| d ^ 1).collect();
    let mut sigma = vec![0; darts];
    for (v, &arch) in arch_dart.iter().enumerate().take(len) {
        let right = 2 * ((v + 1) % len);
        let left = 2 * v + 1;
        if a.upper[v] {
            sigma[right] = arch;
            sigma[arch] = left;
            sigma[left] = right;
        } else {
            sigma[right] = left;
            sigma[left] = arch;
            sigma[arch] = right;
        }
    }
    Ok(ArchGraph {
        map: CombinatorialMap::from_parts(alpha, sigma, 2 * a.k + 1),
        arches,
        s: 1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeClass {
    /// Dual to a cycle edge.
    Quadrangulation,
    /// Dual to an upper arch.
    Tree,
    /// Dual to a lower arch.
    DualTree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangulationSplit {
    /// Dual of the arch graph, on the same darts.
    pub delta: CombinatorialMap,
    /// Class of every dart's edge.
    pub class: Vec<EdgeClass>,
    pub arch_graph: ArchGraph,
}

impl TriangulationSplit {
    /// `Q`: the triangulation with tree edges removed. Its darts are the
    /// cycle darts `0..4n`, unchanged.
    pub fn quadrangulation(&self) -> CombinatorialMap {
        let keep: Vec<bool> = self
            .class
            .iter()
            .map(|&c| c == EdgeClass::Quadrangulation)
            .collect();
        self.delta.restrict_darts(&keep, self.delta.root()).0
    }

    /// The subgraph of the triangulation made of one edge class, on its
    /// vertices.
    pub fn class_subgraph(&self, class: EdgeClass) -> SubgraphRootedMap {
        let edge = self.delta.edge_labels();
        let mut mask = vec![false; self.delta.num_edges()];
        for d in 0..self.delta.num_darts() {
            mask[edge[d]] = self.class[d] == class;
        }
        SubgraphRootedMap::new(self.delta.clone(), mask)
    }
}

pub fn split_triangulation(ag: &ArchGraph) -> TriangulationSplit {
    let class = (0..ag.map.num_darts())
        .map(|d| match ag.arch_of_dart(d) {
            None => EdgeClass::Quadrangulation,
            Some(t) if ag.arches[t].upper => EdgeClass::Tree,
            Some(_) => EdgeClass::DualTree,
        })
        .collect();
    TriangulationSplit {
        delta: ag.map.dual(),
        class,
        arch_graph: ag.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TutteOutput {
    /// The map on the tree-side vertices of `Q`, rooted at the corner that
    /// contains the arch graph dart opposite to `r`.
    pub map: CombinatorialMap,
    /// Arch index of every dart's edge.
    pub arch_of_dart: Vec<usize>,
    /// Spanning tree `T`, indexed by edge label.
    pub tree: Vec<bool>,
    /// Dart whose corner contains the arch graph dart opposite to `s`.
    pub second_root: usize,
}

/// Tutte's correspondence applied to the split: one edge per quadrangle,
/// joining its two tree-side corners.
pub fn tutte_map(ts: &TriangulationSplit) -> TutteOutput {
    let q = ts.quadrangulation();
    let ag = &ts.arch_graph;
    let len = ag.num_vertices();
    // quadrangle of each Q dart, and the arch whose triangles it merges
    let (qface, faces) = q.face_labels();
    let mut arch_of_face = vec![usize::MAX; faces];
    for d in 0..ts.delta.num_darts() {
        if let Some(t) = ag.arch_of_dart(d) {
            arch_of_face[qface[ts.delta.phi(d)]] = t;
        }
    }
    // tree-side vertices carry the even darts; darts of M sit in their corners
    let label = |y: usize| q.sigma(y) / 2;
    let mut alpha = vec![0; len];
    let mut sigma = vec![0; len];
    let mut arch_of_dart = vec![0; len];
    for i in 0..len {
        let y = 2 * i;
        let across = q.phi(q.phi(y));
        alpha[label(y)] = label(across);
        sigma[label(y)] = label(q.sigma(y));
        arch_of_dart[label(y)] = arch_of_face[qface[y]];
    }
    let sigma_inv = q.sigma_inverse();
    let root = label(sigma_inv[ag.map.alpha(ag.r())]);
    let second_root = label(sigma_inv[ag.map.alpha(ag.s)]);
    let map = CombinatorialMap::from_parts(alpha, sigma, root);
    let edge = map.edge_labels();
    let mut tree = vec![false; map.num_edges()];
    for d in 0..len {
        tree[edge[d]] = ag.arches[arch_of_dart[d]].upper;
    }
    TutteOutput {
        map,
        arch_of_dart,
        tree,
        second_root,
    }
}

/// The bijection through the explicit stages.
pub fn psi_staged(w: &Word) -> Result<SubgraphRootedMap> {
    if w.is_empty() {
        return super::psi(w);
    }
    let ag = build_arch_graph(w)?;
    let ts = split_triangulation(&ag);
    let out = tutte_map(&ts);
    let edge = out.map.edge_labels();
    let mut stars = vec![false; out.map.num_edges()];
    for d in 0..out.map.num_darts() {
        stars[edge[d]] = ag.arches[out.arch_of_dart[d]].starred;
    }
    let subgraph = out.tree.iter().zip(&stars).map(|(&t, &s)| t ^ s).collect();
    Ok(SubgraphRootedMap {
        map: out.map,
        subgraph,
        stars,
        second_root: Some(out.second_root),
    })
}
