//! Shared fixtures and brute-force oracles. Nothing here calls the lattice
//! or modularity code: subgroups are `u128` element masks closed by hand.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use submod_core::catalog::default_catalog;
use submod_core::{GroupContext, GroupTable, Subgroup};

pub struct Fixture {
    pub label: String,
    pub ctx: Arc<GroupContext>,
}

/// Default catalog groups, built once per test binary.
pub fn catalog() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        default_catalog()
            .entries
            .iter()
            .map(|e| {
                let e = e.as_ref().expect("default catalog parses");
                let g = e.build().expect("default catalog builds");
                Fixture {
                    label: e.label.clone(),
                    ctx: GroupContext::new(g).expect("lattice fits the budget"),
                }
            })
            .collect()
    })
}

pub fn up_to(order: usize) -> impl Iterator<Item = &'static Fixture> {
    catalog().iter().filter(move |f| f.ctx.order() <= order)
}

pub fn find(label: &str) -> &'static Fixture {
    catalog().iter().find(|f| f.label == label).expect("label in catalog")
}

pub fn mask(h: &Subgroup) -> u128 {
    h.iter().fold(0u128, |m, x| m | 1u128 << x)
}

pub fn elements(m: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |&i| m >> i & 1 == 1)
}

/// Subgroup lattice computed from scratch by closing subsets.
pub struct Brute {
    pub g: GroupTable,
    pub subs: Vec<u128>,
    pub index: HashMap<u128, usize>,
    join: Vec<Vec<usize>>,
}

impl Brute {
    pub fn new(g: &GroupTable) -> Brute {
        assert!(g.order() <= 128);
        let g = g.clone();
        let close = |m: u128| closure(&g, m);
        let mut subs: Vec<u128> = (0..g.order()).map(|x| close(1u128 << x)).collect();
        subs.sort();
        subs.dedup();
        // every subgroup is a join of cyclic ones: close pairwise until stable
        loop {
            let mut next = subs.clone();
            for i in 0..subs.len() {
                for j in i + 1..subs.len() {
                    next.push(close(subs[i] | subs[j]));
                }
            }
            next.sort();
            next.dedup();
            if next.len() == subs.len() {
                break;
            }
            subs = next;
        }
        let index: HashMap<u128, usize> = subs.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let join = subs
            .iter()
            .map(|&a| subs.iter().map(|&b| index[&close(a | b)]).collect())
            .collect();
        Brute { g, subs, index, join }
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn order(&self, i: usize) -> usize {
        self.subs[i].count_ones() as usize
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.subs[a] & !self.subs[b] == 0
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&(self.subs[a] & self.subs[b])]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn is_normal(&self, h: usize) -> bool {
        let m = self.subs[h];
        (0..self.g.order()).all(|x| {
            let xi = self.g.inverse(x);
            elements(m).all(|y| m >> self.g.mul(self.g.mul(xi, y), x) & 1 == 1)
        })
    }

    /// The literal modular law for `H` in the lattice below `K`.
    pub fn modular(&self, h: usize, k: usize) -> bool {
        let below: Vec<usize> = (0..self.len()).filter(|&x| self.leq(x, k)).collect();
        below.iter().all(|&x| {
            below.iter().all(|&y| {
                let first = !self.leq(x, y)
                    || self.join(x, self.meet(h, y)) == self.meet(self.join(x, h), y);
                let second = !self.leq(h, y)
                    || self.join(h, self.meet(x, y)) == self.meet(self.join(h, x), y);
                first && second
            })
        })
    }

    /// Search over every chain whose steps satisfy `step`.
    pub fn chain(&self, h: usize, k: usize, step: impl Fn(usize, usize) -> bool) -> bool {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![h];
        while let Some(x) = stack.pop() {
            if x == k {
                return true;
            }
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            for y in 0..self.len() {
                if y != x && self.leq(x, y) && self.leq(y, k) && step(x, y) {
                    stack.push(y);
                }
            }
        }
        false
    }

    pub fn submodular(&self, h: usize, k: usize, modular: &[Vec<bool>]) -> bool {
        self.chain(h, k, |x, y| modular[x][y])
    }

    pub fn p_subnormal(&self, h: usize, k: usize) -> bool {
        self.chain(h, k, |x, y| is_prime(self.order(y) / self.order(x)))
    }

    /// `modular[x][y]` for every `x ≤ y`.
    pub fn modular_table(&self) -> Vec<Vec<bool>> {
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| self.leq(x, y) && self.modular(x, y)).collect())
            .collect()
    }
}

pub fn closure(g: &GroupTable, gens: u128) -> u128 {
    let gens: Vec<usize> = elements(gens).collect();
    let mut m = 1u128 << g.identity();
    let mut queue = vec![g.identity()];
    while let Some(x) = queue.pop() {
        for &s in &gens {
            let y = g.mul(x, s);
            if m >> y & 1 == 0 {
                m |= 1u128 << y;
                queue.push(y);
            }
        }
    }
    m
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Builder expression of a default catalog label.
pub fn builder_of(label: &str) -> String {
    default_catalog().find(label).expect("label in catalog").builder.to_string()
}
