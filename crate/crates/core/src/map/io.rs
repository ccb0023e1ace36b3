//! JSON form of decorated maps. Edge masks are strings of `0`/`1` indexed
//! by edge label.

use serde::{Deserialize, Serialize};

use super::{CombinatorialMap, SubgraphRootedMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapFile {
    pub darts: usize,
    pub alpha: Vec<usize>,
    pub sigma: Vec<usize>,
    pub root_dart: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second_root: Option<usize>,
    pub subgraph: String,
    pub stars: String,
}

fn mask_to_string(mask: &[bool]) -> String {
    mask.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn mask_from_string(s: &str, field: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("{field}: unexpected character {other:?}"))),
        })
        .collect()
}

impl From<&SubgraphRootedMap> for MapFile {
    fn from(sm: &SubgraphRootedMap) -> Self {
        MapFile {
            darts: sm.map.num_darts(),
            alpha: sm.map.alpha_slice().to_vec(),
            sigma: sm.map.sigma_slice().to_vec(),
            root_dart: sm.map.root(),
            second_root: sm.second_root,
            subgraph: mask_to_string(&sm.subgraph),
            stars: mask_to_string(&sm.stars),
        }
    }
}

impl TryFrom<MapFile> for SubgraphRootedMap {
    type Error = Error;

    fn try_from(f: MapFile) -> Result<Self> {
        if f.alpha.len() != f.darts || f.sigma.len() != f.darts {
            return Err(Error::Parse(format!(
                "darts = {} but alpha/sigma have {}/{} entries",
                f.darts,
                f.alpha.len(),
                f.sigma.len()
            )));
        }
        let sm = SubgraphRootedMap {
            map: CombinatorialMap::from_parts(f.alpha, f.sigma, f.root_dart),
            subgraph: mask_from_string(&f.subgraph, "subgraph")?,
            stars: mask_from_string(&f.stars, "stars")?,
            second_root: f.second_root,
        };
        sm.validate()?;
        Ok(sm)
    }
}

impl SubgraphRootedMap {
    /// One-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MapFile::from(self)).expect("map serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: MapFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.try_into()
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::random_planar;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn known_text() {
        let m = CombinatorialMap::new(vec![1, 0], vec![1, 0], 1).unwrap();
        let sm = SubgraphRootedMap::new(m, vec![true]).with_second_root(0);
        let text = sm.to_json();
        assert_eq!(
            text,
            r#"{"darts":2,"alpha":[1,0],"sigma":[1,0],"root_dart":1,"second_root":0,"subgraph":"1","stars":"0"}"#
        );
        assert_eq!(SubgraphRootedMap::from_json(&text).unwrap(), sm);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_mask = r#"{"darts":2,"alpha":[1,0],"sigma":[1,0],"root_dart":0,"subgraph":"x","stars":"0"}"#;
        assert!(matches!(
            SubgraphRootedMap::from_json(bad_mask),
            Err(Error::Parse(_))
        ));
        let torus =
            r#"{"darts":4,"alpha":[2,3,0,1],"sigma":[1,2,3,0],"root_dart":0,"subgraph":"00","stars":"00"}"#;
        assert!(matches!(
            SubgraphRootedMap::from_json(torus),
            Err(Error::InvalidMap(_))
        ));
        assert!(SubgraphRootedMap::from_json("{").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            ops in prop::collection::vec((0u8..2, 0usize..64, 0usize..64), 0..20),
            g in any::<u64>(),
            st in any::<u64>(),
            s in proptest::option::of(0usize..64),
        ) {
            let m = random_planar(&ops);
            let e = m.num_edges();
            let n = m.num_darts();
            let mut sm = SubgraphRootedMap::new(m, (0..e).map(|i| g >> (i % 64) & 1 == 1).collect());
            sm.stars = (0..e).map(|i| st >> (i % 64) & 1 == 1).collect();
            sm.second_root = s.map(|x| x % n);
            let text = sm.to_json();
            let back = SubgraphRootedMap::from_json(&text).unwrap();
            prop_assert_eq!(&back, &sm);
            prop_assert_eq!(back.to_json(), text);
        }
    }
}
