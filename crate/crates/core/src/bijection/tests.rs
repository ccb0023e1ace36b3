use std::collections::BTreeSet;

use super::pipeline::psi_staged;
use super::*;
use crate::map::{enumerate_maps, loop_count_euler, loop_count_trace, CanonicalForm};
use crate::sampler::{enumerate_wn, sample_many, ModelParams};
use crate::word::{dual_word, parse_word};

fn w(text: &str, offset: i64) -> Word {
    parse_word(text, offset).unwrap()
}

#[test]
fn smallest_words() {
    let sm = psi(&w("aA", 0)).unwrap();
    assert_eq!(sm.map.sigma_slice(), &[0, 1]);
    assert_eq!(sm.subgraph, vec![true]);
    let sm = psi(&w("bB", 0)).unwrap();
    assert_eq!(sm.map.sigma_slice(), &[1, 0]);
    assert_eq!(sm.subgraph, vec![false]);
    let sm = psi(&w("aF", -1)).unwrap();
    assert_eq!(
        (sm.map.root(), sm.subgraph.clone(), sm.stars.clone()),
        (1, vec![false], vec![true])
    );
    assert!(matches!(psi(&w("aB", 0)), Err(Error::NonemptyReduction(_))));
    assert!(matches!(psi(&w("aA", 1)), Err(Error::Precondition(_))));
}

#[test]
fn image_of_each_word_space_is_the_map_space() {
    for n in 1..=3 {
        let words = enumerate_wn(n).unwrap();
        let images: BTreeSet<CanonicalForm> = words
            .iter()
            .map(|x| {
                let mut sm = psi(x).unwrap();
                sm.validate().unwrap();
                sm.stars = vec![false; n];
                CanonicalForm::of_full(&sm)
            })
            .collect();
        assert_eq!(images.len(), words.len(), "psi is not injective at n={n}");
        let maps: BTreeSet<CanonicalForm> = enumerate_maps(n)
            .unwrap()
            .iter()
            .map(CanonicalForm::of_full)
            .collect();
        assert_eq!(images, maps, "n={n}");
    }
}

#[test]
fn loops_are_one_plus_flexible_orders() {
    for n in 1..=3 {
        for x in enumerate_wn(n).unwrap() {
            let sm = psi(&x).unwrap();
            let f = x.count(Letter::Flexible) as i64;
            assert_eq!(loop_count_euler(&sm), 1 + f, "{x}");
            assert_eq!(loop_count_trace(&sm), 1 + f);
            assert_eq!(loop_count_walk(&sm) as i64, 1 + f);
            assert_eq!(sm.stars.iter().filter(|&&s| s).count() as i64, f);
            if f == 0 {
                assert!(is_spanning_tree(&sm));
            }
        }
    }
}

#[test]
fn staged_construction_agrees_label_for_label() {
    for n in 1..=3 {
        for x in enumerate_wn(n).unwrap() {
            assert_eq!(psi_staged(&x).unwrap(), psi(&x).unwrap(), "{x}");
        }
    }
}

#[test]
fn arch_graph_shape() {
    for n in 1..=3 {
        for x in enumerate_wn(n).unwrap() {
            let ag = build_arch_graph(&x).unwrap();
            let stats = ag.map.validate().unwrap();
            assert_eq!(stats.vertices, 2 * n);
            assert_eq!(stats.edges, 3 * n);
            assert_eq!(ag.arches.len(), n);
            assert_eq!(
                ag.arches.iter().filter(|a| a.starred).count(),
                x.count(Letter::Flexible)
            );
            assert_eq!(ag.word(), x);
            if x.offset() == 0 {
                assert_eq!(ag.r(), ag.s);
            }
        }
    }
    let ag = build_arch_graph(&w("aA", 0)).unwrap();
    assert_eq!(
        ag.arches,
        vec![Arch {
            open: 0,
            close: 1,
            upper: true,
            starred: false
        }]
    );
    assert!(build_arch_graph(&Word::empty(0)).is_err());
}

#[test]
fn triangulation_split_shape() {
    for n in 1..=3 {
        for x in enumerate_wn(n).unwrap() {
            let ts = split_triangulation(&build_arch_graph(&x).unwrap());
            let delta = &ts.delta;
            let (flabel, faces) = delta.face_labels();
            let mut sizes = vec![0; faces];
            for d in 0..delta.num_darts() {
                sizes[flabel[d]] += 1;
            }
            assert!(sizes.iter().all(|&s| s == 3), "{x}");
            let q = ts.quadrangulation();
            let qs = q.validate().unwrap();
            assert_eq!(qs.faces, n);
            assert_eq!(qs.edges, 2 * n);
            assert!((0..q.num_darts()).all(|d| {
                let mut y = q.phi(d);
                let mut len = 1;
                while y != d {
                    y = q.phi(y);
                    len += 1;
                }
                len == 4
            }));
            // T joins the even-dart vertices, T-dual the odd ones; both are trees
            let (vlabel, v) = delta.vertex_labels();
            let black: BTreeSet<usize> = (0..4 * n).step_by(2).map(|d| vlabel[d]).collect();
            let white: BTreeSet<usize> = (1..4 * n).step_by(2).map(|d| vlabel[d]).collect();
            assert!(black.is_disjoint(&white));
            assert_eq!(black.len() + white.len(), v);
            for (class, side) in [(EdgeClass::Tree, &black), (EdgeClass::DualTree, &white)] {
                let mut uf = crate::map::UnionFind::new(v);
                let mut edges = 0;
                for d in 0..delta.num_darts() {
                    let a = delta.alpha(d);
                    if d < a && ts.class[d] == class {
                        assert!(side.contains(&vlabel[d]) && side.contains(&vlabel[a]));
                        assert!(uf.union(vlabel[d], vlabel[a]), "cycle in tree class");
                        edges += 1;
                    }
                }
                assert_eq!(edges + 1, side.len());
            }
            let out = tutte_map(&ts);
            assert_eq!(out.map.num_edges(), n);
            let sm = SubgraphRootedMap::new(out.map.clone(), out.tree.clone());
            assert!(is_spanning_tree(&sm));
            assert!(is_spanning_tree(&sm.dual()));
        }
    }
    // two cycle edges and one arch bound three faces
    let ts = split_triangulation(&build_arch_graph(&w("aA", 0)).unwrap());
    assert_eq!(ts.delta.num_vertices(), 3);
    assert_eq!(ts.delta.num_edges(), 3);
    let q_edges = ts
        .class
        .iter()
        .filter(|&&c| c == EdgeClass::Quadrangulation)
        .count()
        / 2;
    assert_eq!(q_edges, 2);
}

#[test]
fn duality_square_commutes() {
    for n in 1..=3 {
        for x in enumerate_wn(n).unwrap() {
            assert_eq!(psi(&dual_word(&x)).unwrap(), psi(&x).unwrap().dual(), "{x}");
            let ts = split_triangulation(&build_arch_graph(&x).unwrap());
            let td = split_triangulation(&build_arch_graph(&dual_word(&x)).unwrap());
            let (a, b) = (tutte_map(&ts), tutte_map(&td));
            assert_eq!(b.map, a.map.dual());
            assert_eq!(b.tree, a.tree.iter().map(|t| !t).collect::<Vec<_>>());
        }
    }
}

#[test]
fn inverse_round_trips_exhaustively() {
    for n in 1..=3 {
        for x in enumerate_wn(n).unwrap() {
            assert_eq!(psi_inverse(&psi(&x).unwrap()).unwrap(), x);
        }
        for dm in enumerate_maps(n).unwrap() {
            let x = psi_inverse(&dm).unwrap();
            let mut back = psi(&x).unwrap();
            back.stars = dm.stars.clone();
            assert_eq!(CanonicalForm::of_full(&back), CanonicalForm::of_full(&dm));
            assert_eq!(psi_inverse(&dm.dual()).unwrap(), dual_word(&x));
        }
    }
}

#[test]
fn inverse_round_trips_on_samples() {
    let params = ModelParams::from_p(1.0 / 3.0).unwrap();
    for x in sample_many(&params, 30, 40, 11, None).unwrap() {
        let sm = psi(&x).unwrap();
        sm.validate().unwrap();
        assert_eq!(loop_count_euler(&sm), 1 + x.count(Letter::Flexible) as i64);
        assert_eq!(psi_inverse(&sm).unwrap(), x);
        assert_eq!(psi_staged(&x).unwrap(), sm);
    }
}

#[test]
fn inverse_rejects_missing_second_root() {
    let sm = psi(&w("aA", 0)).unwrap().without_second_root();
    assert!(matches!(psi_inverse(&sm), Err(Error::Precondition(_))));
    assert_eq!(
        psi_inverse(&psi(&Word::empty(0)).unwrap()).unwrap(),
        Word::empty(0)
    );
}
