//! Complete subgroup lattices.
//!
//! Every subgroup is a join of cyclic subgroups, so the lattice is
//! enumerated by seeding with all cyclic subgroups and repeatedly joining
//! each discovered subgroup with each cyclic one until nothing new appears.
//! Subgroups are interned by bitset and stored in canonical order (order,
//! then member list lexicographically); index 0 is the trivial subgroup and
//! the last index is the whole group.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::arith;
use crate::bitset::BitSet;
use crate::group::{GroupTable, Subgroup};

/// Default cap on the number of subgroups before enumeration gives up.
pub const DEFAULT_SUBGROUP_BUDGET: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("subgroup count exceeded the budget of {0}")]
    BudgetExceeded(usize),
    #[error("subgroup {0} is not contained in subgroup {1}")]
    NotComparable(usize, usize),
    #[error("element set is not a subgroup in the lattice")]
    UnknownSubgroup,
    #[error("Fitting subgroup failed the nilpotency check")]
    FittingNotNilpotent,
    #[error("group is not solvable")]
    NotSolvable,
}

pub struct SubgroupLattice {
    group: Arc<GroupTable>,
    subgroups: Vec<Subgroup>,
    gens: Vec<Vec<usize>>,
    index: HashMap<BitSet, usize>,
    /// above[x] = { y : x ≤ y }
    above: Vec<BitSet>,
    /// below[y] = { x : x ≤ y }
    below: Vec<BitSet>,
    meet: Vec<u32>,
    join: Vec<u32>,
    normal: BitSet,
    maximal: Vec<Vec<usize>>,
}

impl std::fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("group", &self.group.label())
            .field("subgroups", &self.subgroups.len())
            .finish()
    }
}

impl SubgroupLattice {
    pub fn enumerate(group: Arc<GroupTable>) -> Result<Self, LatticeError> {
        Self::enumerate_with_budget(group, DEFAULT_SUBGROUP_BUDGET)
    }

    pub fn enumerate_with_budget(
        group: Arc<GroupTable>,
        budget: usize,
    ) -> Result<Self, LatticeError> {
        let g = &*group;
        let n = g.order();

        // cyclic seeds
        let mut interned: HashMap<BitSet, usize> = HashMap::new();
        let mut bits: Vec<BitSet> = Vec::new();
        let mut gens: Vec<Vec<usize>> = Vec::new();
        let mut cyclic_of = vec![usize::MAX; n];
        let mut cyclic_ids: Vec<usize> = Vec::new();
        for x in 0..n {
            let c = g.close(&[x]);
            let id = match interned.get(&c) {
                Some(&id) => id,
                None => {
                    let id = bits.len();
                    interned.insert(c.clone(), id);
                    bits.push(c);
                    gens.push(if x == g.identity() { vec![] } else { vec![x] });
                    cyclic_ids.push(id);
                    if bits.len() > budget {
                        return Err(LatticeError::BudgetExceeded(budget));
                    }
                    id
                }
            };
            cyclic_of[x] = id;
        }
        let cyclic_pos: HashMap<usize, usize> =
            cyclic_ids.iter().enumerate().map(|(p, &id)| (id, p)).collect();

        // with_cyclic[x][c] = x ∨ (c-th cyclic subgroup)
        let mut with_cyclic: Vec<Vec<u32>> = Vec::new();
        let mut next = 0;
        while next < bits.len() {
            let x = next;
            next += 1;
            let mut row = vec![0u32; cyclic_ids.len()];
            for (p, &c) in cyclic_ids.iter().enumerate() {
                if bits[c].is_subset(&bits[x]) {
                    row[p] = x as u32;
                    continue;
                }
                let mut gs = gens[x].clone();
                gs.extend_from_slice(&gens[c]);
                let j = g.close(&gs);
                let id = match interned.get(&j) {
                    Some(&id) => id,
                    None => {
                        let id = bits.len();
                        interned.insert(j.clone(), id);
                        bits.push(j);
                        gens.push(gs);
                        if bits.len() > budget {
                            return Err(LatticeError::BudgetExceeded(budget));
                        }
                        id
                    }
                };
                row[p] = id as u32;
            }
            with_cyclic.push(row);
        }

        let raw_join = |a: usize, b: usize| -> usize {
            let mut cur = a;
            for &e in &gens[b] {
                cur = with_cyclic[cur][cyclic_pos[&cyclic_of[e]]] as usize;
            }
            cur
        };
        let entries: Vec<(BitSet, Vec<usize>)> = bits
            .iter()
            .cloned()
            .zip(gens.iter().cloned())
            .collect();
        let s = entries.len();
        let mut joins = vec![0u32; s * s];
        for a in 0..s {
            for b in 0..s {
                joins[a * s + b] = raw_join(a, b) as u32;
            }
        }
        Ok(Self::from_parts(group.clone(), entries, |a, b| {
            joins[a * s + b] as usize
        }))
    }

    /// Builds the lattice from a complete, join-closed list of subgroups and
    /// a join oracle expressed in the input numbering.
    pub(crate) fn from_parts(
        group: Arc<GroupTable>,
        entries: Vec<(BitSet, Vec<usize>)>,
        join_of: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let s = entries.len();
        let mut perm: Vec<usize> = (0..s).collect();
        perm.sort_by(|&a, &b| {
            entries[a]
                .0
                .count()
                .cmp(&entries[b].0.count())
                .then_with(|| entries[a].0.cmp(&entries[b].0))
        });
        let mut new_of_old = vec![0usize; s];
        for (new, &old) in perm.iter().enumerate() {
            new_of_old[old] = new;
        }
        let subgroups: Vec<Subgroup> = perm
            .iter()
            .map(|&o| Subgroup::from_bits(entries[o].0.clone()))
            .collect();
        let gens: Vec<Vec<usize>> = perm.iter().map(|&o| entries[o].1.clone()).collect();
        let index: HashMap<BitSet, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, h)| (h.bits().clone(), i))
            .collect();

        let mut join = vec![0u32; s * s];
        for a in 0..s {
            for b in 0..s {
                join[a * s + b] = new_of_old[join_of(perm[a], perm[b])] as u32;
            }
        }
        let mut meet = vec![0u32; s * s];
        for a in 0..s {
            for b in a..s {
                let inter = subgroups[a].bits().intersection(subgroups[b].bits());
                let m = index[&inter];
                meet[a * s + b] = m as u32;
                meet[b * s + a] = m as u32;
            }
        }
        let mut above = vec![BitSet::new(s); s];
        let mut below = vec![BitSet::new(s); s];
        for a in 0..s {
            for b in a..s {
                // sorted by order, so a ≤ b as subgroups forces a ≤ b as indices
                if subgroups[a].is_subgroup_of(&subgroups[b]) {
                    above[a].insert(b);
                    below[b].insert(a);
                }
            }
        }
        let top_gens = &gens[s - 1];
        let normal = BitSet::from_indices(
            s,
            (0..s).filter(|&i| {
                gens[i].iter().all(|&x| {
                    top_gens
                        .iter()
                        .all(|&t| subgroups[i].contains(group.conjugate_element(x, t)))
                })
            }),
        );
        let maximal = (0..s)
            .map(|k| {
                below[k]
                    .iter()
                    .filter(|&x| x != k && above[x].intersection(&below[k]).count() == 2)
                    .collect()
            })
            .collect();
        SubgroupLattice {
            group,
            subgroups,
            gens,
            index,
            above,
            below,
            meet,
            join,
            normal,
            maximal,
        }
    }

    /// The lattice of the quotient by `n` (a normal subgroup index), derived
    /// from the interval `[n, G]` instead of re-enumerating. The returned map
    /// sends quotient-lattice indices to indices in `self`.
    pub(crate) fn derive_quotient(
        &self,
        n: usize,
        quotient_group: Arc<GroupTable>,
        projection: &[usize],
    ) -> (SubgroupLattice, Vec<usize>) {
        let parents: Vec<usize> = self.above[n].iter().collect();
        let pos: HashMap<usize, usize> = parents.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let qn = quotient_group.order();
        let entries: Vec<(BitSet, Vec<usize>)> = parents
            .iter()
            .map(|&p| {
                let img = BitSet::from_indices(qn, self.subgroups[p].iter().map(|x| projection[x]));
                let mut gs: Vec<usize> = self.gens[p]
                    .iter()
                    .map(|&x| projection[x])
                    .filter(|&y| y != quotient_group.identity())
                    .collect();
                gs.dedup();
                (img, gs)
            })
            .collect();
        let lat = SubgroupLattice::from_parts(quotient_group, entries, |a, b| {
            pos[&self.join(parents[a], parents[b])]
        });
        let map = lat
            .subgroups
            .iter()
            .map(|q| {
                let mut pre = BitSet::new(self.group.order());
                for x in 0..self.group.order() {
                    if q.contains(projection[x]) {
                        pre.insert(x);
                    }
                }
                self.index[&pre]
            })
            .collect();
        (lat, map)
    }

    /// Lattice of subgroup `k` as a group in its own right (`local_to_parent`
    /// from [`GroupTable::restrict`]), derived from the ideal `[1, k]`. The
    /// returned map sends sub-lattice indices to indices in `self`.
    pub(crate) fn derive_sub(
        &self,
        k: usize,
        sub_group: Arc<GroupTable>,
        local_to_parent: &[usize],
    ) -> (SubgroupLattice, Vec<usize>) {
        let parents: Vec<usize> = self.below[k].iter().collect();
        let pos: HashMap<usize, usize> = parents.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut parent_to_local = vec![usize::MAX; self.group.order()];
        for (i, &x) in local_to_parent.iter().enumerate() {
            parent_to_local[x] = i;
        }
        let m = sub_group.order();
        let entries: Vec<(BitSet, Vec<usize>)> = parents
            .iter()
            .map(|&p| {
                let bits = BitSet::from_indices(m, self.subgroups[p].iter().map(|x| parent_to_local[x]));
                let gs = self.gens[p].iter().map(|&x| parent_to_local[x]).collect();
                (bits, gs)
            })
            .collect();
        let lat = SubgroupLattice::from_parts(sub_group, entries, |a, b| {
            pos[&self.join(parents[a], parents[b])]
        });
        let map = lat
            .subgroups
            .iter()
            .map(|h| {
                let up = BitSet::from_indices(self.group.order(), h.iter().map(|x| local_to_parent[x]));
                self.index[&up]
            })
            .collect();
        (lat, map)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// A generating set recorded during enumeration (not necessarily minimal).
    pub fn generators(&self, i: usize) -> &[usize] {
        &self.gens[i]
    }

    pub fn order_of(&self, i: usize) -> usize {
        self.subgroups[i].order()
    }

    pub fn index_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h.bits()).copied()
    }

    pub fn index_of_bits(&self, bits: &BitSet) -> Option<usize> {
        self.index.get(bits).copied()
    }

    /// Lattice index of the subgroup generated by `gens`.
    pub fn generated(&self, gens: &[usize]) -> usize {
        let h = self.group.generated_subgroup(gens);
        self.index[h.bits()]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.above[a].contains(b)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.subgroups.len() + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.subgroups.len() + b] as usize
    }

    /// `{x : a ≤ x}` as an index set.
    pub fn above(&self, a: usize) -> &BitSet {
        &self.above[a]
    }

    /// `{x : x ≤ b}` as an index set.
    pub fn below(&self, b: usize) -> &BitSet {
        &self.below[b]
    }

    /// All lattice members `x` with `h ≤ x ≤ k`, increasing.
    pub fn interval(&self, h: usize, k: usize) -> Result<Vec<usize>, LatticeError> {
        if !self.leq(h, k) {
            return Err(LatticeError::NotComparable(h, k));
        }
        Ok(self.above[h].intersection(&self.below[k]).to_vec())
    }

    /// Maximal proper subgroups of `k`.
    pub fn maximal_subgroups(&self, k: usize) -> &[usize] {
        &self.maximal[k]
    }

    /// Normality in the whole group.
    pub fn is_normal(&self, i: usize) -> bool {
        self.normal.contains(i)
    }

    pub fn normal_subgroups(&self) -> Vec<usize> {
        self.normal.to_vec()
    }

    /// Normality of `h` in `k` (`h ≤ k`), checked on generators.
    pub fn is_normal_in(&self, h: usize, k: usize) -> bool {
        let hs = &self.subgroups[h];
        self.gens[h].iter().all(|&x| {
            self.gens[k]
                .iter()
                .all(|&t| hs.contains(self.group.conjugate_element(x, t)))
        })
    }

    /// Core of `h` in `k`: the largest subgroup of `h` normal in `k`.
    pub fn core_in(&self, h: usize, k: usize) -> usize {
        let mut bits = self.subgroups[h].bits().clone();
        for t in self.subgroups[k].iter() {
            bits.intersect_with(self.group.conjugate(&self.subgroups[h], t).bits());
        }
        self.index[&bits]
    }

    pub fn core(&self, h: usize) -> usize {
        self.core_in(h, self.top())
    }

    /// Whether subgroup `i` is nilpotent: for every prime `p` the number of
    /// `p`-elements equals the `p`-part of the order (Sylow subgroups unique).
    pub fn is_nilpotent_subgroup(&self, i: usize) -> bool {
        let h = &self.subgroups[i];
        let n = h.order();
        arith::prime_divisors(n).into_iter().all(|p| {
            let p_elems = h
                .iter()
                .filter(|&x| {
                    let o = self.group.element_order(x);
                    arith::p_part(o, p) == o
                })
                .count();
            p_elems == arith::p_part(n, p)
        })
    }

    /// Sylow `p`-subgroups of subgroup `k`, i.e. lattice members below `k` of
    /// order `|k|_p`.
    pub fn sylow_subgroups_in(&self, k: usize, p: usize) -> Vec<usize> {
        let target = arith::p_part(self.order_of(k), p);
        self.below[k]
            .iter()
            .filter(|&x| self.order_of(x) == target)
            .collect()
    }

    pub fn sylow_subgroups_all(&self, p: usize) -> Vec<usize> {
        self.sylow_subgroups_in(self.top(), p)
    }

    /// First Sylow `p`-subgroup in canonical order (trivial if `p ∤ |G|`).
    pub fn sylow_subgroup(&self, p: usize) -> usize {
        self.sylow_subgroups_all(p)[0]
    }

    /// Hall subgroups for a prime set: members whose order is the
    /// corresponding part of `|G|`. May be empty.
    pub fn hall_subgroups(&self, primes: &[usize]) -> Vec<usize> {
        let target = arith::pi_part(self.group.order(), primes);
        (0..self.len()).filter(|&x| self.order_of(x) == target).collect()
    }

    /// Intersection of the maximal subgroups of `k` (`k` itself if trivial).
    pub fn frattini_of(&self, k: usize) -> usize {
        self.maximal[k]
            .iter()
            .fold(k, |acc, &m| self.meet(acc, m))
    }

    pub fn frattini(&self) -> usize {
        self.frattini_of(self.top())
    }

    /// Join of all normal nilpotent subgroups, verified nilpotent.
    pub fn fitting(&self) -> Result<usize, LatticeError> {
        let f = self
            .normal
            .iter()
            .filter(|&x| self.is_nilpotent_subgroup(x))
            .fold(self.bottom(), |acc, x| self.join(acc, x));
        if self.is_nilpotent_subgroup(f) {
            Ok(f)
        } else {
            Err(LatticeError::FittingNotNilpotent)
        }
    }

    /// Some maximal subgroup with trivial core, if the group is primitive.
    /// The witness is the first such subgroup in canonical order.
    pub fn primitive_witness(&self) -> Option<usize> {
        self.maximal[self.top()]
            .iter()
            .copied()
            .find(|&m| self.core(m) == self.bottom())
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive_witness().is_some()
    }

    /// Atoms of the lattice of normal subgroups.
    pub fn minimal_normal_subgroups(&self) -> Vec<usize> {
        self.normal
            .iter()
            .filter(|&x| {
                x != self.bottom()
                    && self
                        .normal
                        .iter()
                        .all(|y| y == self.bottom() || y == x || !self.leq(y, x))
            })
            .collect()
    }

    /// Orders of the factors of a chief series, bottom to top. Defined for
    /// any group; the factor orders are a Jordan–Hölder invariant.
    pub fn chief_series_orders(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.bottom();
        while cur != self.top() {
            // a normal subgroup minimal over cur gives a minimal normal
            // subgroup of G/cur
            let next = self
                .normal
                .iter()
                .filter(|&y| y != cur && self.leq(cur, y))
                .find(|&y| {
                    !self
                        .normal
                        .iter()
                        .any(|z| z != cur && z != y && self.leq(cur, z) && self.leq(z, y))
                })
                .expect("a proper normal subgroup has a normal cover");
            out.push(self.order_of(next) / self.order_of(cur));
            cur = next;
        }
        out
    }

    /// Chief factor orders of a solvable group.
    pub fn chief_factor_orders(&self) -> Result<Vec<usize>, LatticeError> {
        let orders = self.chief_series_orders();
        // in a solvable group chief factors are elementary abelian
        if orders.iter().all(|&o| arith::prime_power_base(o).is_some()) && self.group.is_solvable() {
            Ok(orders)
        } else {
            Err(LatticeError::NotSolvable)
        }
    }

    /// Index of the derived subgroup `G'`.
    pub fn derived(&self) -> usize {
        self.index[self.group.derived_subgroup().bits()]
    }
}
