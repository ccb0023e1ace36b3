//! Exhaustive enumeration of small rooted planar maps.

use std::collections::BTreeMap;

use super::ball::{canonical_map, canonical_subgraph_map, CanonicalForm};
use super::{CombinatorialMap, SubgraphRootedMap};
use crate::error::{Error, Result};

pub const MAX_MAP_ENUMERATION: usize = 4;

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All rooted planar maps with `n` edges, one canonical representative per
/// isomorphism class, sorted by canonical form.
pub fn enumerate_rooted_maps(n: usize) -> Result<Vec<CombinatorialMap>> {
    if n > MAX_MAP_ENUMERATION {
        return Err(Error::Capacity {
            n,
            max: MAX_MAP_ENUMERATION,
        });
    }
    if n == 0 {
        return Ok(vec![CombinatorialMap::vertex_map()]);
    }
    let alpha: Vec<usize> = (0..2 * n).map(|d| d ^ 1).collect();
    let mut sigma: Vec<usize> = (0..2 * n).collect();
    let mut found = BTreeMap::new();
    loop {
        let m = CombinatorialMap::from_parts(alpha.clone(), sigma.clone(), 0);
        if m.validate().is_ok() {
            for r in 0..2 * n {
                let rooted = m.clone().with_root(r);
                found
                    .entry(CanonicalForm::of_map(&rooted))
                    .or_insert_with(|| canonical_map(&rooted));
            }
        }
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(found.into_values().collect())
}

/// Every rooted map with `n` edges decorated with every subgraph and every
/// second root dart. For `n = 0` the single-vertex map appears once.
pub fn enumerate_maps(n: usize) -> Result<Vec<SubgraphRootedMap>> {
    let mut out = Vec::new();
    for m in enumerate_rooted_maps(n)? {
        for mask in 0..1u32 << n {
            let g: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            let base = SubgraphRootedMap::new(m.clone(), g);
            for s in 0..m.num_darts().max(1) {
                out.push(canonical_subgraph_map(&base.clone().with_second_root(s)));
            }
        }
    }
    Ok(out)
}
