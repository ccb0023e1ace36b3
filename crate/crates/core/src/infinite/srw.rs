//! Simple random walk on oriented edges: each step leaves from the vertex
//! the previous edge points to, along a uniformly chosen dart.

use std::collections::HashSet;

use rand::{Rng, RngCore};

use super::{ResolvedWindow, INITIAL_HALF_WIDTH};
use crate::map::CombinatorialMap;
use crate::sampler::InfiniteWordSource;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkStats {
    /// Darts `E_0, E_1, ...` actually visited.
    pub path: Vec<i64>,
    /// Visited darts whose starting vertex has degree 1.
    pub pending: u64,
    /// Steps `k >= 1` with `E_k` starting at the root vertex.
    pub root_returns: u64,
    /// Largest window half-width used (0 on finite maps).
    pub half_width: usize,
    /// Set when the window cap stopped the walk early.
    pub truncated: bool,
}

impl WalkStats {
    pub fn steps(&self) -> usize {
        self.path.len()
    }

    pub fn pending_frequency(&self) -> f64 {
        self.pending as f64 / self.path.len().max(1) as f64
    }
}

fn orbit_of(map: &CombinatorialMap, d: usize) -> Vec<usize> {
    let mut out = vec![d];
    let mut x = map.sigma(d);
    while x != d {
        out.push(x);
        x = map.sigma(x);
    }
    out
}

pub fn srw_on_map<R: RngCore + ?Sized>(map: &CombinatorialMap, steps: usize, rng: &mut R) -> WalkStats {
    let mut stats = WalkStats {
        path: Vec::with_capacity(steps),
        pending: 0,
        root_returns: 0,
        half_width: 0,
        truncated: false,
    };
    if map.is_vertex_map() {
        return stats;
    }
    let root_vertex: HashSet<usize> = orbit_of(map, map.root()).into_iter().collect();
    let mut e = map.root();
    for k in 0..steps {
        if k > 0 && root_vertex.contains(&e) {
            stats.root_returns += 1;
        }
        stats.path.push(e as i64);
        if map.sigma(e) == e {
            stats.pending += 1;
        }
        let around = orbit_of(map, map.alpha(e));
        e = around[rng.random_range(0..around.len())];
    }
    stats
}

/// The walk on the infinite map of `source`, growing the window whenever a
/// step needs a letter not yet matched in it.
pub fn srw_infinite<R: RngCore + ?Sized>(
    source: &mut InfiniteWordSource,
    steps: usize,
    rng: &mut R,
    window_cap: usize,
) -> WalkStats {
    let mut stats = WalkStats {
        path: Vec::with_capacity(steps),
        pending: 0,
        root_returns: 0,
        half_width: 0,
        truncated: false,
    };
    let mut m = source.half_width().max(INITIAL_HALF_WIDTH);
    source.extend_window(m);
    let mut rw = ResolvedWindow::new(source.window());
    let mut grow = |rw: &mut ResolvedWindow, m: &mut usize| -> bool {
        if 4 * *m > window_cap {
            return false;
        }
        *m *= 2;
        source.extend_window(*m);
        *rw = ResolvedWindow::new(source.window());
        true
    };
    let root_vertex: HashSet<i64> = loop {
        match rw.orbit(0) {
            Some(o) => break o.into_iter().collect(),
            None if grow(&mut rw, &mut m) => {}
            None => {
                stats.truncated = true;
                return stats;
            }
        }
    };
    let mut e = 0i64;
    for k in 0..steps {
        let next = loop {
            let step = rw
                .sigma(e)
                .zip(rw.alpha(e))
                .and_then(|(s, a)| rw.orbit(a).map(|o| (s, o)));
            match step {
                Some(x) => break x,
                None if grow(&mut rw, &mut m) => {}
                None => {
                    stats.truncated = true;
                    stats.half_width = m;
                    return stats;
                }
            }
        };
        if k > 0 && root_vertex.contains(&e) {
            stats.root_returns += 1;
        }
        stats.path.push(e);
        if next.0 == e {
            stats.pending += 1;
        }
        let around = next.1;
        e = around[rng.random_range(0..around.len())];
    }
    stats.half_width = m;
    stats
}
