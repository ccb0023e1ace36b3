//! Certified balls of the infinite map.

use std::collections::{HashMap, VecDeque};

use super::{grow_until, kesten_ball, ResolvedWindow};
use crate::error::{Error, Result};
use crate::map::{Ball, CombinatorialMap, SubgraphRootedMap};
use crate::sampler::InfiniteWordSource;
use crate::word::Letter;

pub const INITIAL_HALF_WIDTH: usize = 64;
pub const DEFAULT_WINDOW_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq)]
pub struct BallCertificate {
    pub ball: Ball,
    /// Half-width `m` of the window `[-m, m)` the ball was read from; 0 for
    /// balls grown from a tree.
    pub half_width: usize,
    pub certified: bool,
    /// Degree of the root vertex in the infinite map.
    pub root_degree: usize,
    /// For each vertex of the ball (an upper face of the arch graph), the
    /// closed upper arch that covers it.
    pub witnesses: Vec<(i64, i64)>,
}

struct Vertices {
    vertex_of: HashMap<i64, usize>,
    orbits: Vec<Vec<i64>>,
    dist: Vec<usize>,
}

impl Vertices {
    fn add(&mut self, rw: &ResolvedWindow, z: i64, d: usize) -> Option<usize> {
        let orbit = rw.orbit(z)?;
        let id = self.orbits.len();
        for &x in &orbit {
            self.vertex_of.insert(x, id);
        }
        self.orbits.push(orbit);
        self.dist.push(d);
        Some(id)
    }
}

/// The radius-`radius` ball read off a fixed window, or `None` when some
/// letter it depends on is not matched inside the window.
///
/// Every vertex within distance `radius` is discovered with its full
/// rotation and the partner of each of its darts, so edges between two
/// such vertices are all known.
pub fn ball_in_window(rw: &ResolvedWindow, radius: usize) -> Option<BallCertificate> {
    let mut vs = Vertices {
        vertex_of: HashMap::new(),
        orbits: Vec::new(),
        dist: Vec::new(),
    };
    vs.add(rw, 0, 0)?;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        if vs.dist[v] == radius {
            continue;
        }
        for i in 0..vs.orbits[v].len() {
            let a = rw.alpha(vs.orbits[v][i])?;
            if !vs.vertex_of.contains_key(&a) {
                let id = vs.add(rw, a, vs.dist[v] + 1)?;
                queue.push_back(id);
            }
        }
    }
    // every dart of a kept vertex needs its partner
    let mut darts: Vec<i64> = Vec::new();
    for orbit in &vs.orbits {
        for &z in orbit {
            let a = rw.alpha(z)?;
            if vs.vertex_of.contains_key(&a) {
                darts.push(z);
            }
        }
    }
    darts.sort_unstable();
    let id: HashMap<i64, usize> = darts.iter().enumerate().map(|(i, &z)| (z, i)).collect();

    let mut witnesses = Vec::with_capacity(vs.orbits.len());
    for orbit in &vs.orbits {
        let m = *orbit.iter().min().unwrap();
        let j = m - 1;
        let jp = rw.partner(j)?;
        debug_assert_eq!(rw.letter(j), Some(Letter::Hamburger));
        debug_assert!(orbit.iter().all(|&z| j < z && z <= jp));
        witnesses.push((j, jp));
    }
    let root_degree = vs.orbits[0].len();

    if darts.is_empty() {
        return Some(BallCertificate {
            ball: Ball {
                radius,
                rooted: SubgraphRootedMap::new(CombinatorialMap::vertex_map(), Vec::new()),
            },
            half_width: (-rw.offset()) as usize,
            certified: true,
            root_degree,
            witnesses,
        });
    }
    let n = darts.len();
    let mut alpha = vec![0; n];
    let mut sigma = vec![0; n];
    for orbit in &vs.orbits {
        let kept: Vec<usize> = orbit.iter().filter_map(|z| id.get(z).copied()).collect();
        for (i, &d) in kept.iter().enumerate() {
            sigma[d] = kept[(i + 1) % kept.len()];
        }
    }
    for (i, &z) in darts.iter().enumerate() {
        alpha[i] = id[&rw.alpha(z)?];
    }
    // the root corner falls in the sector of the last kept dart before it
    let root = std::iter::once(&0)
        .chain(vs.orbits[0].iter().rev())
        .find_map(|z| id.get(z).copied())?;
    let map = CombinatorialMap::from_parts(alpha, sigma, root);
    let edge = map.edge_labels();
    let mut subgraph = vec![false; map.num_edges()];
    let mut stars = vec![false; map.num_edges()];
    for (i, &z) in darts.iter().enumerate() {
        let w = rw.alpha(z)?;
        if z < w {
            let star = rw.letter(w)? == Letter::Flexible;
            subgraph[edge[i]] = rw.upper(z)? ^ star;
            stars[edge[i]] = star;
        }
    }
    Some(BallCertificate {
        ball: Ball {
            radius,
            rooted: SubgraphRootedMap {
                map,
                subgraph,
                stars,
                second_root: None,
            },
        },
        half_width: (-rw.offset()) as usize,
        certified: true,
        root_degree,
        witnesses,
    })
}

/// Certified ball of radius `radius` around the root of the infinite map
/// encoded by `source`. The window doubles until the ball is certified.
/// At `p = 1` the ball is grown from a percolated tree instead.
pub fn infinite_ball(
    source: &mut InfiniteWordSource,
    radius: usize,
    window_cap: usize,
) -> Result<BallCertificate> {
    if source.params().p >= 1.0 {
        return Ok(kesten_ball(source.seed(), radius));
    }
    grow_until(source, window_cap, |rw| ball_in_window(rw, radius)).map_err(|rw| {
        let partial_radius = (0..radius).rev().find(|&r| ball_in_window(&rw, r).is_some());
        Error::WindowCapExceeded {
            cap: window_cap,
            partial_radius,
        }
    })
}
