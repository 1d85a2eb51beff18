//! Modular, submodular and ℙ-subnormal subgroups.
//!
//! `H ≤ K` is modular in `K` when it is a modular element of the subgroup
//! lattice of `K`:
//!
//! * `⟨X, H⟩ ∩ Z = ⟨X, H ∩ Z⟩` for all `X ≤ Z ≤ K`, and
//! * `⟨H, Y⟩ ∩ Z = ⟨H, Y ∩ Z⟩` for all `Y ≤ K` and `H ≤ Z ≤ K`.
//!
//! Both laws are evaluated literally over the interval `[1, K]`. Because
//! `[1, K]` is an ideal of the lattice of the whole group, one
//! [`ModularityIndex`] answers these questions for every subgroup `K` at once.
//!
//! Submodularity is found by descending through maximal modular subgroups:
//! a proper modular `H` of `K` lies in some maximal modular `M` of `K`, and
//! stays modular in `M`, so any modular chain can be refined into one whose
//! steps are maximal modular.

use std::collections::VecDeque;
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::arith;
use crate::bitset::BitSet;
use crate::lattice::SubgroupLattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularityError {
    #[error("subgroup {0} is not contained in subgroup {1}")]
    NotContained(usize, usize),
    #[error("maximal modular subgroup {m} of {k} fits neither structural case")]
    LemmaViolated { k: usize, m: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainKind {
    Submodular,
    PSubnormal,
}

/// A witness chain `H = H_0 ≤ H_1 ≤ … ≤ H_n = K` of lattice indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCertificate {
    pub kind: ChainKind,
    pub chain: Vec<usize>,
}

/// Which case of the maximal-modular structure statement applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaxModularKind {
    /// `M ⊴ K` and `K/M` is simple.
    NormalSimpleQuotient,
    /// `K/M_K` is non-abelian of order `pq`.
    PQNonabelianQuotient,
}

/// Per-lattice caches for modularity questions, keyed by lattice index.
pub struct ModularityIndex {
    lattice: Arc<SubgroupLattice>,
    modular_sets: Vec<OnceLock<BitSet>>,
    maximal_modular: Vec<OnceLock<Vec<usize>>>,
    submodular_sets: Vec<OnceLock<BitSet>>,
    p_subnormal_sets: Vec<OnceLock<BitSet>>,
}

/// Literal evaluation of both modular-element laws for `h` in `[1, k]`.
/// Requires `h ≤ k`.
pub fn modular_law_holds(l: &SubgroupLattice, h: usize, k: usize) -> bool {
    let below_k = l.below(k);
    for x in below_k.iter() {
        let xh = l.join(x, h);
        let mut zs = l.above(x).clone();
        zs.intersect_with(below_k);
        for z in zs.iter() {
            if l.meet(xh, z) != l.join(x, l.meet(h, z)) {
                return false;
            }
        }
    }
    let mut zs = l.above(h).clone();
    zs.intersect_with(below_k);
    for y in below_k.iter() {
        let hy = l.join(h, y);
        for z in zs.iter() {
            if l.meet(hy, z) != l.join(h, l.meet(y, z)) {
                return false;
            }
        }
    }
    true
}

impl ModularityIndex {
    pub fn new(lattice: Arc<SubgroupLattice>) -> Self {
        let s = lattice.len();
        fn cells<T>(s: usize) -> Vec<OnceLock<T>> {
            (0..s).map(|_| OnceLock::new()).collect()
        }
        ModularityIndex {
            modular_sets: cells(s),
            maximal_modular: cells(s),
            submodular_sets: cells(s),
            p_subnormal_sets: cells(s),
            lattice,
        }
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    fn check_contained(&self, h: usize, k: usize) -> Result<(), ModularityError> {
        if self.lattice.leq(h, k) {
            Ok(())
        } else {
            Err(ModularityError::NotContained(h, k))
        }
    }

    pub fn is_modular_in(&self, h: usize, k: usize) -> Result<bool, ModularityError> {
        self.check_contained(h, k)?;
        if let Some(set) = self.modular_sets[k].get() {
            return Ok(set.contains(h));
        }
        Ok(modular_law_holds(&self.lattice, h, k))
    }

    /// All `H ≤ K` that are modular in `K`.
    pub fn modular_set(&self, k: usize) -> &BitSet {
        self.modular_sets[k].get_or_init(|| {
            let l = &*self.lattice;
            BitSet::from_indices(
                l.len(),
                l.below(k).iter().filter(|&h| modular_law_holds(l, h, k)),
            )
        })
    }

    /// Proper modular subgroups of `k` with no modular subgroup of `k`
    /// strictly between them and `k`, in canonical order.
    pub fn maximal_modular_subgroups(&self, k: usize) -> &[usize] {
        self.maximal_modular[k].get_or_init(|| {
            let mods = self.modular_set(k);
            mods.iter()
                .filter(|&m| m != k)
                .filter(|&m| {
                    let mut over = self.lattice.above(m).clone();
                    over.intersect_with(mods);
                    // only m itself and k
                    over.count() == 2
                })
                .collect()
        })
    }

    /// Classifies a maximal modular subgroup `m` of `k`.
    pub fn check_maximal_modular_structure(
        &self,
        k: usize,
        m: usize,
    ) -> Result<MaxModularKind, ModularityError> {
        let l = &*self.lattice;
        self.check_contained(m, k)?;
        if m != k && l.is_normal_in(m, k) {
            let simple = l
                .interval(m, k)
                .expect("m ≤ k")
                .into_iter()
                .filter(|&x| x != m && x != k)
                .all(|x| !l.is_normal_in(x, k));
            if simple {
                return Ok(MaxModularKind::NormalSimpleQuotient);
            }
        }
        let core = l.core_in(m, k);
        let index = l.order_of(k) / l.order_of(core);
        let pq = matches!(arith::factorize(index).as_slice(), [(_, 1), (_, 1)]);
        if pq {
            let g = l.group();
            let kk = l.subgroup(k);
            let derived = g.commutator_subgroup(kk, kk);
            if !derived.is_subgroup_of(l.subgroup(core)) {
                return Ok(MaxModularKind::PQNonabelianQuotient);
            }
        }
        Err(ModularityError::LemmaViolated { k, m })
    }

    /// All `H` submodular in `k`.
    pub fn submodular_set(&self, k: usize) -> &BitSet {
        self.submodular_sets[k].get_or_init(|| {
            let mut set = BitSet::new(self.lattice.len());
            set.insert(k);
            for &m in self.maximal_modular_subgroups(k) {
                set.union_with(self.submodular_set(m));
            }
            set
        })
    }

    pub fn submodular(&self, h: usize, k: usize) -> bool {
        self.lattice.leq(h, k) && self.submodular_set(k).contains(h)
    }

    /// A submodular chain from `h` to `k`, lexicographically least by
    /// (length, index sequence) among maximal-modular descents.
    pub fn is_submodular(&self, h: usize, k: usize) -> Result<Option<ChainCertificate>, ModularityError> {
        self.check_contained(h, k)?;
        if !self.submodular_set(k).contains(h) {
            return Ok(None);
        }
        let chain = self.best_chain(h, k, |p| {
            self.maximal_modular_subgroups(p).to_vec()
        });
        Ok(Some(ChainCertificate {
            kind: ChainKind::Submodular,
            chain,
        }))
    }

    fn prime_index_children(&self, p: usize) -> Vec<usize> {
        let l = &*self.lattice;
        l.maximal_subgroups(p)
            .iter()
            .copied()
            .filter(|&m| arith::is_prime(l.order_of(p) / l.order_of(m)))
            .collect()
    }

    /// All `H` that are ℙ-subnormal in `k`.
    pub fn p_subnormal_set(&self, k: usize) -> &BitSet {
        self.p_subnormal_sets[k].get_or_init(|| {
            let mut set = BitSet::new(self.lattice.len());
            set.insert(k);
            for m in self.prime_index_children(k) {
                set.union_with(self.p_subnormal_set(m));
            }
            set
        })
    }

    pub fn p_subnormal(&self, h: usize, k: usize) -> bool {
        self.lattice.leq(h, k) && self.p_subnormal_set(k).contains(h)
    }

    pub fn is_p_subnormal(&self, h: usize, k: usize) -> Result<Option<ChainCertificate>, ModularityError> {
        self.check_contained(h, k)?;
        if !self.p_subnormal_set(k).contains(h) {
            return Ok(None);
        }
        let chain = self.best_chain(h, k, |p| self.prime_index_children(p));
        Ok(Some(ChainCertificate {
            kind: ChainKind::PSubnormal,
            chain,
        }))
    }

    /// Shortest, then lexicographically least, chain from `h` up to `k`
    /// where each step goes from a node to one of its `children`.
    fn best_chain(&self, h: usize, k: usize, children: impl Fn(usize) -> Vec<usize>) -> Vec<usize> {
        let l = &*self.lattice;
        let mut dist = vec![usize::MAX; l.len()];
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); l.len()];
        dist[k] = 0;
        let mut queue = VecDeque::from([k]);
        while let Some(p) = queue.pop_front() {
            if p == h {
                continue;
            }
            let cs: Vec<usize> = children(p).into_iter().filter(|&c| l.leq(h, c)).collect();
            for &c in &cs {
                if dist[c] == usize::MAX {
                    dist[c] = dist[p] + 1;
                    queue.push_back(c);
                }
            }
            kids[p] = cs;
        }
        debug_assert_ne!(dist[h], usize::MAX);
        let mut chain = vec![h];
        let mut cur = h;
        while cur != k {
            let d = dist[cur];
            let next = (0..l.len())
                .find(|&p| dist[p] != usize::MAX && dist[p] + 1 == d && kids[p].contains(&cur))
                .expect("BFS parent exists");
            chain.push(next);
            cur = next;
        }
        chain
    }

    /// Re-checks a certificate step by step.
    pub fn validate(&self, cert: &ChainCertificate) -> bool {
        let l = &*self.lattice;
        cert.chain.windows(2).all(|w| {
            let (a, b) = (w[0], w[1]);
            l.leq(a, b)
                && match cert.kind {
                    ChainKind::Submodular => modular_law_holds(l, a, b),
                    ChainKind::PSubnormal => arith::is_prime(l.order_of(b) / l.order_of(a)),
                }
        }) && !cert.chain.is_empty()
    }
}
