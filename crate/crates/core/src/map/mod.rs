//! Genus-0 combinatorial maps as rotation systems.
//!
//! Darts are `0..2e`. `alpha` pairs the two darts of an edge, `sigma` turns
//! counterclockwise around a vertex. The corner of dart `d` is the angular
//! sector from `d` to `sigma(d)`; a map is rooted at the corner of its root
//! dart. Faces are the orbits of `alpha . sigma`, so the corner of `d` lies in
//! the face containing `d`.
//!
//! The map with no darts is the single-vertex map.

mod ball;
mod enumerate;
mod io;

pub use ball::{ball, canonical_map, canonical_subgraph_map, isomorphic, map_distance, Ball, CanonicalForm};
pub use enumerate::{enumerate_maps, enumerate_rooted_maps, MAX_MAP_ENUMERATION};
pub use io::MapFile;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinatorialMap {
    alpha: Vec<usize>,
    sigma: Vec<usize>,
    root: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapStats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

/// Labels each element by the index of its cycle under `perm`, in order of
/// first appearance. Returns the labels and the number of cycles.
pub(crate) fn cycle_labels(n: usize, perm: impl Fn(usize) -> usize) -> (Vec<usize>, usize) {
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut d = start;
        while label[d] == usize::MAX {
            label[d] = count;
            d = perm(d);
        }
        count += 1;
    }
    (label, count)
}

impl CombinatorialMap {
    /// Builds a map without checking it; see [`CombinatorialMap::validate`].
    pub fn from_parts(alpha: Vec<usize>, sigma: Vec<usize>, root: usize) -> Self {
        CombinatorialMap { alpha, sigma, root }
    }

    pub fn new(alpha: Vec<usize>, sigma: Vec<usize>, root: usize) -> Result<Self> {
        let m = CombinatorialMap::from_parts(alpha, sigma, root);
        m.validate()?;
        Ok(m)
    }

    pub fn vertex_map() -> Self {
        CombinatorialMap::from_parts(Vec::new(), Vec::new(), 0)
    }

    pub fn num_darts(&self) -> usize {
        self.alpha.len()
    }

    pub fn num_edges(&self) -> usize {
        self.alpha.len() / 2
    }

    pub fn is_vertex_map(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d]
    }

    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d]
    }

    pub fn alpha_slice(&self) -> &[usize] {
        &self.alpha
    }

    pub fn sigma_slice(&self) -> &[usize] {
        &self.sigma
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn with_root(mut self, root: usize) -> Self {
        self.root = root;
        self
    }

    /// Next dart around the face of `d`.
    pub fn phi(&self, d: usize) -> usize {
        self.alpha[self.sigma[d]]
    }

    pub fn sigma_inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sigma.len()];
        for (d, &s) in self.sigma.iter().enumerate() {
            inv[s] = d;
        }
        inv
    }

    pub fn vertex_labels(&self) -> (Vec<usize>, usize) {
        if self.is_vertex_map() {
            return (Vec::new(), 1);
        }
        cycle_labels(self.num_darts(), |d| self.sigma[d])
    }

    pub fn face_labels(&self) -> (Vec<usize>, usize) {
        if self.is_vertex_map() {
            return (Vec::new(), 1);
        }
        cycle_labels(self.num_darts(), |d| self.phi(d))
    }

    /// Edge index of every dart; edges are numbered by their smaller dart.
    pub fn edge_labels(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.num_darts()];
        let mut next = 0;
        for d in 0..self.num_darts() {
            if label[d] == usize::MAX {
                label[d] = next;
                label[self.alpha[d]] = next;
                next += 1;
            }
        }
        label
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_labels().1
    }

    pub fn num_faces(&self) -> usize {
        self.face_labels().1
    }

    /// Number of darts around the vertex of `d`.
    pub fn degree(&self, d: usize) -> usize {
        let mut k = 1;
        let mut x = self.sigma[d];
        while x != d {
            x = self.sigma[x];
            k += 1;
        }
        k
    }

    pub fn root_degree(&self) -> usize {
        if self.is_vertex_map() {
            0
        } else {
            self.degree(self.root)
        }
    }

    /// Checks the involution, the permutation, connectivity and the genus-0
    /// Euler relation.
    pub fn validate(&self) -> Result<MapStats> {
        let n = self.num_darts();
        if self.sigma.len() != n {
            return Err(Error::InvalidMap(format!(
                "alpha has {n} entries but sigma has {}",
                self.sigma.len()
            )));
        }
        if n == 0 {
            return Ok(MapStats {
                vertices: 1,
                edges: 0,
                faces: 1,
            });
        }
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidMap(format!("odd number of darts ({n})")));
        }
        if self.root >= n {
            return Err(Error::InvalidMap(format!("root dart {} out of range", self.root)));
        }
        for d in 0..n {
            let a = self.alpha[d];
            if a >= n {
                return Err(Error::InvalidMap(format!("alpha({d}) = {a} out of range")));
            }
            if a == d {
                return Err(Error::InvalidMap(format!("alpha has a fixed point at {d}")));
            }
            if self.alpha[a] != d {
                return Err(Error::InvalidMap(format!("alpha is not an involution at {d}")));
            }
        }
        let mut seen = vec![false; n];
        for d in 0..n {
            let s = self.sigma[d];
            if s >= n || seen[s] {
                return Err(Error::InvalidMap(format!("sigma is not a permutation at {d}")));
            }
            seen[s] = true;
        }
        let mut reached = vec![false; n];
        let mut stack = vec![0];
        reached[0] = true;
        let mut count = 1;
        while let Some(d) = stack.pop() {
            for x in [self.alpha[d], self.sigma[d]] {
                if !reached[x] {
                    reached[x] = true;
                    count += 1;
                    stack.push(x);
                }
            }
        }
        if count != n {
            return Err(Error::InvalidMap("map is not connected".into()));
        }
        let stats = MapStats {
            vertices: self.num_vertices(),
            edges: self.num_edges(),
            faces: self.num_faces(),
        };
        let euler = stats.vertices as i64 - stats.edges as i64 + stats.faces as i64;
        if euler != 2 {
            return Err(Error::InvalidMap(format!("Euler characteristic {euler}, not 2")));
        }
        Ok(stats)
    }

    /// Dual map on the same darts: faces become vertices. The root dart is
    /// kept, which exchanges the root vertex and the root face; applying it
    /// twice gives back the map exactly.
    pub fn dual(&self) -> CombinatorialMap {
        let sigma = (0..self.num_darts()).map(|d| self.phi(d)).collect();
        CombinatorialMap::from_parts(self.alpha.clone(), sigma, self.root)
    }

    /// Removes the darts not flagged in `keep`, splicing the rotation around
    /// each vertex. Returns the new map and the old-to-new dart map.
    /// `root` must be a kept dart when any dart is kept.
    pub(crate) fn restrict_darts(
        &self,
        keep: &[bool],
        root: usize,
    ) -> (CombinatorialMap, Vec<Option<usize>>) {
        let n = self.num_darts();
        let mut new_id = vec![None; n];
        let mut next = 0;
        for d in 0..n {
            if keep[d] {
                new_id[d] = Some(next);
                next += 1;
            }
        }
        if next == 0 {
            return (CombinatorialMap::vertex_map(), new_id);
        }
        let mut alpha = vec![0; next];
        let mut sigma = vec![0; next];
        for d in 0..n {
            if let Some(i) = new_id[d] {
                alpha[i] = new_id[self.alpha[d]].expect("edge kept with one dart removed");
                let mut s = self.sigma[d];
                while !keep[s] {
                    s = self.sigma[s];
                }
                sigma[i] = new_id[s].unwrap();
            }
        }
        let r = new_id[root].expect("root dart removed");
        (CombinatorialMap::from_parts(alpha, sigma, r), new_id)
    }
}

/// Disjoint-set forest with path halving.
#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// A rooted map with a distinguished edge subset, optional star marks and an
/// optional second root dart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubgraphRootedMap {
    pub map: CombinatorialMap,
    /// Indexed by edge label (see [`CombinatorialMap::edge_labels`]).
    pub subgraph: Vec<bool>,
    pub stars: Vec<bool>,
    pub second_root: Option<usize>,
}

impl SubgraphRootedMap {
    pub fn new(map: CombinatorialMap, subgraph: Vec<bool>) -> Self {
        let e = map.num_edges();
        assert_eq!(subgraph.len(), e, "subgraph mask length");
        SubgraphRootedMap {
            map,
            subgraph,
            stars: vec![false; e],
            second_root: None,
        }
    }

    pub fn with_second_root(mut self, s: usize) -> Self {
        self.second_root = Some(s);
        self
    }

    pub fn without_second_root(mut self) -> Self {
        self.second_root = None;
        self
    }

    pub fn validate(&self) -> Result<MapStats> {
        let stats = self.map.validate()?;
        if self.subgraph.len() != stats.edges || self.stars.len() != stats.edges {
            return Err(Error::InvalidMap("edge mask length mismatch".into()));
        }
        if let Some(s) = self.second_root {
            if s >= self.map.num_darts().max(1) {
                return Err(Error::InvalidMap(format!("second root {s} out of range")));
            }
        }
        Ok(stats)
    }

    /// Subgraph membership of every dart.
    pub fn dart_in_subgraph(&self) -> Vec<bool> {
        self.map
            .edge_labels()
            .into_iter()
            .map(|e| self.subgraph[e])
            .collect()
    }

    pub fn subgraph_edges(&self) -> usize {
        self.subgraph.iter().filter(|&&b| b).count()
    }

    /// Number of connected components of the subgraph, counting every
    /// vertex of the map.
    pub fn subgraph_components(&self) -> usize {
        components_of(&self.map, &self.subgraph)
    }

    /// The dual map with the dual subgraph: dual edges not crossed by the
    /// subgraph, i.e. the complement on the shared edge labels.
    pub fn dual(&self) -> SubgraphRootedMap {
        SubgraphRootedMap {
            map: self.map.dual(),
            subgraph: self.subgraph.iter().map(|b| !b).collect(),
            stars: self.stars.clone(),
            second_root: self.second_root,
        }
    }
}

fn components_of(map: &CombinatorialMap, edges: &[bool]) -> usize {
    let (vlabel, v) = map.vertex_labels();
    let mut uf = UnionFind::new(v);
    let elabel = map.edge_labels();
    for d in 0..map.num_darts() {
        if edges[elabel[d]] {
            uf.union(vlabel[d], vlabel[map.alpha(d)]);
        }
    }
    uf.components()
}

pub fn dual_subgraph(sm: &SubgraphRootedMap) -> SubgraphRootedMap {
    sm.dual()
}

/// Loop number from the edge count, components and vertex count.
pub fn loop_count_euler(sm: &SubgraphRootedMap) -> i64 {
    sm.subgraph_edges() as i64 + 2 * sm.subgraph_components() as i64 - sm.map.num_vertices() as i64
}

/// Loop number as components of the subgraph plus components of the dual
/// subgraph, minus one.
pub fn loop_count_trace(sm: &SubgraphRootedMap) -> i64 {
    let dual = sm.dual();
    sm.subgraph_components() as i64 + dual.subgraph_components() as i64 - 1
}
