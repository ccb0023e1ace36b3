//! The `p = 1` limit: a critical geometric Galton-Watson tree conditioned
//! to survive, with each edge kept in the subgraph with probability 1/2,
//! turned into a map by contracting every subgraph edge to a self-loop.

use std::collections::VecDeque;

use rand::{Rng, RngCore};

use super::BallCertificate;
use crate::bijection::{loop_tree_decode, PlaneTree};
use crate::map::ball;
use crate::sampler::stream_rng;

/// RNG stream reserved for tree growth; word streams use 0 and 1.
const TREE_STREAM: u64 = 2;

struct Node {
    children: Vec<usize>,
    /// Whether the edge from the parent is in the subgraph.
    in_subgraph: bool,
}

fn geometric<R: RngCore>(rng: &mut R) -> usize {
    let mut k = 0;
    while rng.random_bool(0.5) {
        k += 1;
    }
    k
}

/// Radius-`radius` ball of the `p = 1` infinite map. Subgraph clusters are
/// grown whole, out to map distance `radius + 1`.
pub fn kesten_ball(seed: u64, radius: usize) -> BallCertificate {
    let mut rng = stream_rng(seed, TREE_STREAM);
    let mut nodes = vec![Node {
        children: Vec::new(),
        in_subgraph: false,
    }];
    // 0-1 breadth-first growth: subgraph edges stay in the cluster
    let mut queue = VecDeque::from([(0usize, 0usize, true)]);
    while let Some((v, dist, spine)) = queue.pop_front() {
        if dist > radius {
            continue;
        }
        let k = if spine {
            1 + geometric(&mut rng) + geometric(&mut rng)
        } else {
            geometric(&mut rng)
        };
        let spine_child = if spine { Some(rng.random_range(0..k)) } else { None };
        for i in 0..k {
            let in_subgraph = rng.random_bool(0.5);
            let id = nodes.len();
            nodes.push(Node {
                children: Vec::new(),
                in_subgraph,
            });
            nodes[v].children.push(id);
            let child_spine = spine_child == Some(i);
            if in_subgraph {
                queue.push_front((id, dist, child_spine));
            } else {
                queue.push_back((id, dist + 1, child_spine));
            }
        }
    }
    let mut contour = Vec::with_capacity(2 * nodes.len());
    let mut subset = Vec::with_capacity(nodes.len());
    let mut stack = vec![(0usize, 0usize)];
    while let Some((v, i)) = stack.pop() {
        if i < nodes[v].children.len() {
            let c = nodes[v].children[i];
            stack.push((v, i + 1));
            contour.push(true);
            subset.push(nodes[c].in_subgraph);
            stack.push((c, 0));
        } else if v != 0 {
            contour.push(false);
        }
    }
    let sm = loop_tree_decode(&PlaneTree { contour, subset }).expect("contour of a tree");
    let root_degree = sm.map.root_degree();
    BallCertificate {
        ball: ball(&sm, radius),
        half_width: 0,
        certified: true,
        root_degree,
        witnesses: Vec::new(),
    }
}
