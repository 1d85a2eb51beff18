//! Lattice, modularity and factorisation results against brute force.

mod common;

use common::{mask, up_to, Brute};
use submod_core::enumerate_factorizations;

#[test]
fn lattice_matches_subset_closure() {
    let mut groups = 0;
    for f in up_to(24) {
        groups += 1;
        let l = f.ctx.lattice();
        let b = Brute::new(f.ctx.group());
        assert_eq!(l.len(), b.len(), "{}: subgroup count", f.label);
        let map: Vec<usize> = (0..l.len()).map(|i| b.index[&mask(l.subgroup(i))]).collect();
        for i in 0..l.len() {
            assert_eq!(l.is_normal(i), b.is_normal(map[i]), "{}: normality of {i}", f.label);
            assert_eq!(l.order_of(i), b.order(map[i]));
            for j in 0..l.len() {
                assert_eq!(map[l.meet(i, j)], b.meet(map[i], map[j]), "{}: meet", f.label);
                assert_eq!(map[l.join(i, j)], b.join(map[i], map[j]), "{}: join", f.label);
                assert_eq!(l.leq(i, j), b.leq(map[i], map[j]));
            }
        }
    }
    assert!(groups >= 30, "only {groups} groups of order at most 24");
}

#[test]
fn f5_has_fourteen_subgroups() {
    let f = common::find("F5");
    assert_eq!(f.ctx.lattice().len(), 14);
    assert_eq!(Brute::new(f.ctx.group()).len(), 14);
}

#[test]
fn modularity_matches_all_chains_search() {
    for f in up_to(24) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        let b = Brute::new(ctx.group());
        let modular = b.modular_table();
        let map: Vec<usize> = (0..l.len()).map(|i| b.index[&mask(l.subgroup(i))]).collect();
        for k in 0..l.len() {
            for h in l.below(k).iter() {
                let (bh, bk) = (map[h], map[k]);
                assert_eq!(ctx.is_modular_in(h, k).unwrap(), modular[bh][bk], "{}: modular {h} in {k}", f.label);
                let sub = b.submodular(bh, bk, &modular);
                assert_eq!(ctx.submodular(h, k), sub, "{}: submodular {h} in {k}", f.label);
                let cert = ctx.is_submodular(h, k).unwrap();
                assert_eq!(cert.is_some(), sub);
                if let Some(c) = cert {
                    assert!(ctx.validate(&c));
                    assert_eq!((c.chain[0], *c.chain.last().unwrap()), (h, k));
                }
                let psn = b.p_subnormal(bh, bk);
                assert_eq!(ctx.p_subnormal(h, k), psn, "{}: p-subnormal {h} in {k}", f.label);
                if let Some(c) = ctx.is_p_subnormal(h, k).unwrap() {
                    assert!(ctx.validate(&c));
                }
            }
        }
    }
}

#[test]
fn maximal_modular_subgroups_are_maximal_among_proper_modular() {
    for f in up_to(24) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        let b = Brute::new(ctx.group());
        let modular = b.modular_table();
        let map: Vec<usize> = (0..l.len()).map(|i| b.index[&mask(l.subgroup(i))]).collect();
        for k in 0..l.len() {
            let proper: Vec<usize> = l.below(k).iter().filter(|&h| h != k && modular[map[h]][map[k]]).collect();
            let mut expected: Vec<usize> = proper
                .iter()
                .copied()
                .filter(|&h| !proper.iter().any(|&o| o != h && l.leq(h, o)))
                .collect();
            expected.sort();
            let mut got = ctx.maximal_modular_subgroups(k);
            got.sort();
            assert_eq!(got, expected, "{}: maximal modular in {k}", f.label);
        }
    }
}

#[test]
fn factorisations_match_set_products() {
    for f in up_to(48) {
        let g = f.ctx.group();
        let l = f.ctx.lattice();
        let full = if g.order() == 128 { u128::MAX } else { (1u128 << g.order()) - 1 };
        let pairs: std::collections::HashSet<(usize, usize)> =
            enumerate_factorizations(l).iter().map(|p| (p.a, p.b)).collect();
        for a in 0..l.len() {
            for b in 0..l.len() {
                let mut prod = 0u128;
                for x in l.subgroup(a).iter() {
                    for y in l.subgroup(b).iter() {
                        prod |= 1u128 << g.mul(x, y);
                    }
                }
                assert_eq!(prod == full, pairs.contains(&(a, b)), "{}: ({a}, {b})", f.label);
            }
        }
    }
}
