//! Maps with the maximal number of loops versus plane trees with a marked
//! edge subset. Each subgraph edge is a self-loop; splitting its vertex in
//! two turns it into a tree edge.

use crate::error::{Error, Result};
use crate::map::{CombinatorialMap, SubgraphRootedMap, UnionFind};

/// A rooted plane tree as the contour word of its edges (`true` on the first
/// traversal) with one subset bit per edge in first-traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneTree {
    pub contour: Vec<bool>,
    pub subset: Vec<bool>,
}

impl PlaneTree {
    pub fn num_edges(&self) -> usize {
        self.subset.len()
    }

    /// Every plane tree with `n` edges and every subset, contour words in
    /// lexicographic order.
    pub fn all(n: usize) -> Vec<PlaneTree> {
        let mut out = Vec::new();
        for bits in 0..1u64 << (2 * n) {
            let contour: Vec<bool> = (0..2 * n).rev().map(|i| bits >> i & 1 == 1).collect();
            let mut h = 0i64;
            if !contour.iter().all(|&up| {
                h += if up { 1 } else { -1 };
                h >= 0
            }) || h != 0
            {
                continue;
            }
            for mask in 0..1u64 << n {
                out.push(PlaneTree {
                    contour: contour.clone(),
                    subset: (0..n).map(|i| mask >> i & 1 == 1).collect(),
                });
            }
        }
        out
    }
}

/// Swaps the two darts of every marked self-loop in the rotation, which
/// splits or rejoins its vertex. Disjoint transpositions commute, so the
/// order does not matter.
fn toggle_loops(map: &CombinatorialMap, loops: &[usize]) -> CombinatorialMap {
    let mut swap: Vec<usize> = (0..map.num_darts()).collect();
    for &x in loops {
        let y = map.alpha(x);
        swap[x] = y;
        swap[y] = x;
    }
    let sigma = (0..map.num_darts()).map(|d| swap[map.sigma(d)]).collect();
    CombinatorialMap::from_parts(map.alpha_slice().to_vec(), sigma, map.root())
}

pub fn loop_tree_encode(sm: &SubgraphRootedMap) -> Result<PlaneTree> {
    let map = &sm.map;
    let (vlabel, v) = map.vertex_labels();
    let edge = map.edge_labels();
    let mut uf = UnionFind::new(v);
    let mut loops = Vec::new();
    for d in 0..map.num_darts() {
        let a = map.alpha(d);
        if d > a {
            continue;
        }
        if sm.subgraph[edge[d]] {
            if vlabel[d] != vlabel[a] {
                return Err(Error::Precondition(format!(
                    "subgraph edge {} is not a self-loop",
                    edge[d]
                )));
            }
            loops.push(d);
        } else if !uf.union(vlabel[d], vlabel[a]) {
            return Err(Error::Precondition(
                "complement of the subgraph has a cycle".into(),
            ));
        }
    }
    if uf.components() != 1 {
        return Err(Error::Precondition(
            "complement of the subgraph is not spanning".into(),
        ));
    }
    let tree = toggle_loops(map, &loops);
    let n = tree.num_edges();
    let mut contour = Vec::with_capacity(2 * n);
    let mut subset = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut d = tree.root();
    for _ in 0..2 * n {
        let e = edge[d];
        contour.push(!seen[e]);
        if !seen[e] {
            seen[e] = true;
            subset.push(sm.subgraph[e]);
        }
        d = tree.sigma(tree.alpha(d));
    }
    Ok(PlaneTree { contour, subset })
}

pub fn loop_tree_decode(tree: &PlaneTree) -> Result<SubgraphRootedMap> {
    let len = tree.contour.len();
    if len != 2 * tree.subset.len() {
        return Err(Error::Precondition(
            "contour length is not twice the edge count".into(),
        ));
    }
    if len == 0 {
        return Ok(SubgraphRootedMap::new(CombinatorialMap::vertex_map(), Vec::new()));
    }
    let mut alpha = vec![0; len];
    let mut stack = Vec::new();
    for (i, &up) in tree.contour.iter().enumerate() {
        if up {
            stack.push(i);
        } else {
            let j = stack
                .pop()
                .ok_or_else(|| Error::Precondition("contour is not a Dyck word".into()))?;
            alpha[i] = j;
            alpha[j] = i;
        }
    }
    if !stack.is_empty() {
        return Err(Error::Precondition("contour is not a Dyck word".into()));
    }
    let mut sigma = vec![0; len];
    for i in 0..len {
        sigma[alpha[i]] = (i + 1) % len;
    }
    let plane = CombinatorialMap::from_parts(alpha, sigma, 0);
    // openers come in increasing order, which is the edge label order
    let openers: Vec<usize> = (0..len).filter(|&i| tree.contour[i]).collect();
    let loops: Vec<usize> = openers
        .iter()
        .zip(&tree.subset)
        .filter(|(_, &s)| s)
        .map(|(&d, _)| d)
        .collect();
    let map = toggle_loops(&plane, &loops);
    Ok(SubgraphRootedMap::new(map, tree.subset.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::{enumerate_rooted_maps, loop_count_euler, CanonicalForm};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn catalan(n: u64) -> u64 {
        (0..n).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
    }

    #[test]
    fn smallest_cases() {
        let loop_map = CombinatorialMap::new(vec![1, 0], vec![1, 0], 0).unwrap();
        let t = loop_tree_encode(&SubgraphRootedMap::new(loop_map, vec![true])).unwrap();
        assert_eq!(
            t,
            PlaneTree {
                contour: vec![true, false],
                subset: vec![true]
            }
        );
        let edge = CombinatorialMap::new(vec![1, 0], vec![0, 1], 0).unwrap();
        let t = loop_tree_encode(&SubgraphRootedMap::new(edge.clone(), vec![false])).unwrap();
        assert_eq!(
            t,
            PlaneTree {
                contour: vec![true, false],
                subset: vec![false]
            }
        );
        assert!(loop_tree_encode(&SubgraphRootedMap::new(edge, vec![true])).is_err());
    }

    #[test]
    fn maximal_loop_maps_are_counted_by_trees() {
        for n in 1..=4usize {
            let mut codes = Vec::new();
            for m in enumerate_rooted_maps(n).unwrap() {
                for mask in 0..1u32 << n {
                    let g = (0..n).map(|i| mask >> i & 1 == 1).collect();
                    let sm = SubgraphRootedMap::new(m.clone(), g);
                    let maximal = loop_count_euler(&sm) == n as i64 + 1;
                    let enc = loop_tree_encode(&sm);
                    assert_eq!(maximal, enc.is_ok(), "n={n}");
                    if let Ok(t) = enc {
                        let back = loop_tree_decode(&t).unwrap();
                        assert_eq!(
                            CanonicalForm::of_subgraph_map(&back),
                            CanonicalForm::of_subgraph_map(&sm)
                        );
                        codes.push(t);
                    }
                }
            }
            let count = codes.len() as u64;
            codes.sort();
            codes.dedup();
            assert_eq!(codes.len() as u64, count);
            assert_eq!(count, catalan(n as u64) << n, "n={n}");
        }
    }

    #[test]
    fn decode_round_trips_and_has_maximal_loops() {
        for n in 0..=4 {
            let all = PlaneTree::all(n);
            assert_eq!(all.len() as u64, catalan(n as u64) << n);
            for t in all {
                let sm = loop_tree_decode(&t).unwrap();
                sm.validate().unwrap();
                assert_eq!(loop_count_euler(&sm), n as i64 + 1);
                let edge = sm.map.edge_labels();
                let vlabel = sm.map.vertex_labels().0;
                for d in 0..sm.map.num_darts() {
                    if sm.subgraph[edge[d]] {
                        assert_eq!(vlabel[d], vlabel[sm.map.alpha(d)]);
                    }
                }
                if n > 0 {
                    assert_eq!(loop_tree_encode(&sm).unwrap(), t);
                }
            }
        }
    }

    #[test]
    fn loop_order_does_not_matter() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in PlaneTree::all(4).into_iter().step_by(5) {
            let sm = loop_tree_decode(&t).unwrap();
            let edge = sm.map.edge_labels();
            let mut loops: Vec<usize> = (0..sm.map.num_darts())
                .filter(|&d| d < sm.map.alpha(d) && sm.subgraph[edge[d]])
                .collect();
            let reference = toggle_loops(&sm.map, &loops);
            for _ in 0..4 {
                loops.shuffle(&mut rng);
                let mut m = sm.map.clone();
                for &x in &loops {
                    m = toggle_loops(&m, &[x]);
                }
                assert_eq!(m, reference);
            }
        }
    }
}
