//! Finite groups as dense multiplication tables, plus the element- and
//! subgroup-level primitives the rest of the crate is built from.
//!
//! Elements are the indices `0..n` of a single [`GroupTable`]. A
//! [`Subgroup`] is a membership bitset over those indices and only has
//! meaning relative to the table it was computed in.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith;
use crate::bitset::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("multiplication table is empty")]
    Empty,
    #[error("row {row} has length {len}, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("product {a}*{b} = {value} is outside 0..{order}")]
    NotClosed {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("associativity fails for ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("subgroup is not normal")]
    NotNormal,
}

/// A finite group given by its full Cayley table.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    mult: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    element_orders: Vec<u32>,
    label: String,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupTable")
            .field("label", &self.label)
            .field("order", &self.order)
            .finish_non_exhaustive()
    }
}

impl GroupTable {
    /// Validates a Cayley table and builds the group. All four group axioms
    /// are checked; associativity by exhaustive triple scan.
    pub fn from_mult_table(
        table: &[Vec<usize>],
        label: impl Into<String>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        for (row, r) in table.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
            if let Some((b, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
                return Err(GroupError::NotClosed {
                    a: row,
                    b,
                    value,
                    order: n,
                });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(GroupError::NoIdentity)?;
        for x in 0..n {
            if !(0..n).any(|y| table[x][y] == identity && table[y][x] == identity) {
                return Err(GroupError::NoInverse(x));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mult = table
            .iter()
            .flat_map(|r| r.iter().map(|&v| v as u32))
            .collect();
        Ok(Self::assemble(n, mult, identity, label.into()))
    }

    /// Builds a table known to satisfy the axioms (restrictions, quotients,
    /// builders). Only cheap consistency is asserted in debug builds.
    pub(crate) fn from_trusted(
        order: usize,
        mult: Vec<u32>,
        identity: usize,
        label: impl Into<String>,
    ) -> Self {
        debug_assert_eq!(mult.len(), order * order);
        Self::assemble(order, mult, identity, label.into())
    }

    fn assemble(order: usize, mult: Vec<u32>, identity: usize, label: String) -> Self {
        let mut inverse = vec![0u32; order];
        for x in 0..order {
            let row = &mult[x * order..(x + 1) * order];
            let y = row
                .iter()
                .position(|&v| v as usize == identity)
                .expect("group table row without identity");
            inverse[x] = y as u32;
        }
        let mut element_orders = vec![0u32; order];
        for x in 0..order {
            let mut k = 1;
            let mut y = x;
            while y != identity {
                y = mult[y * order + x] as usize;
                k += 1;
            }
            element_orders[x] = k;
        }
        GroupTable {
            order,
            mult,
            identity,
            inverse,
            element_orders,
            label,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inverse(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.element_orders[x] as usize
    }

    /// `g^-1 x g`
    #[inline]
    pub fn conjugate_element(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inverse(g), x), g)
    }

    /// `x^-1 y^-1 x y`
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(
            self.mul(self.inverse(x), self.inverse(y)),
            self.mul(x, y),
        )
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|a| (0..self.order).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn prime_divisors(&self) -> Vec<usize> {
        arith::prime_divisors(self.order)
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup(BitSet::from_indices(self.order, [self.identity]))
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup(BitSet::full(self.order))
    }

    /// Closure of `gens` under multiplication: BFS from the identity by
    /// right multiplication. In a finite group this is the generated subgroup.
    pub(crate) fn close(&self, gens: &[usize]) -> BitSet {
        let mut members = BitSet::new(self.order);
        members.insert(self.identity);
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != self.identity).collect();
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if members.insert(y) {
                    queue.push(y);
                }
            }
        }
        members
    }

    /// Smallest subgroup containing `gens`.
    pub fn generated_subgroup(&self, gens: &[usize]) -> Subgroup {
        Subgroup(self.close(gens))
    }

    /// Whether an arbitrary element set is a subgroup.
    pub fn is_subgroup(&self, set: &BitSet) -> bool {
        set.contains(self.identity)
            && set.iter().all(|a| {
                set.contains(self.inverse(a)) && set.iter().all(|b| set.contains(self.mul(a, b)))
            })
    }

    pub fn conjugate(&self, h: &Subgroup, g: usize) -> Subgroup {
        Subgroup(BitSet::from_indices(
            self.order,
            h.iter().map(|x| self.conjugate_element(x, g)),
        ))
    }

    /// Normality in the whole group.
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.is_normal_in(h, &self.whole())
    }

    /// Whether `h` is normalized by every element of `k`.
    pub fn is_normal_in(&self, h: &Subgroup, k: &Subgroup) -> bool {
        k.iter()
            .all(|g| h.iter().all(|x| h.contains(self.conjugate_element(x, g))))
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        Subgroup(BitSet::from_indices(
            self.order,
            (0..self.order).filter(|&g| h.iter().all(|x| h.contains(self.conjugate_element(x, g)))),
        ))
    }

    /// Intersection of all conjugates of `h`.
    pub fn core(&self, h: &Subgroup) -> Subgroup {
        let mut members = h.0.clone();
        for g in 0..self.order {
            members.intersect_with(&self.conjugate(h, g).0);
        }
        Subgroup(members)
    }

    /// Smallest normal subgroup of `k` containing `h` (`h ≤ k`).
    pub fn normal_closure_in(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let conj: Vec<usize> = k
            .iter()
            .flat_map(|g| h.iter().map(move |x| (x, g)))
            .map(|(x, g)| self.conjugate_element(x, g))
            .collect();
        self.generated_subgroup(&conj)
    }

    /// Subnormality via the descending normal-closure series
    /// `K_0 = G`, `K_{i+1} = ⟨h^{K_i}⟩`.
    pub fn is_subnormal(&self, h: &Subgroup) -> bool {
        let mut k = self.whole();
        loop {
            let next = self.normal_closure_in(h, &k);
            if next == *h {
                return true;
            }
            if next == k {
                return false;
            }
            k = next;
        }
    }

    pub fn centralizer(&self, s: &BitSet) -> Subgroup {
        Subgroup(BitSet::from_indices(
            self.order,
            (0..self.order).filter(|&g| s.iter().all(|x| self.mul(g, x) == self.mul(x, g))),
        ))
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&BitSet::full(self.order))
    }

    /// Subgroup generated by all commutators `[h, k]`, `h ∈ H`, `k ∈ K`.
    pub fn commutator_subgroup(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut comms = BitSet::new(self.order);
        for x in h.iter() {
            for y in k.iter() {
                comms.insert(self.commutator(x, y));
            }
        }
        self.generated_subgroup(&comms.to_vec())
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.whole();
        self.commutator_subgroup(&g, &g)
    }

    /// Derived series `G ≥ G' ≥ G'' ≥ …` down to its stable term.
    pub fn is_solvable(&self) -> bool {
        let mut current = self.whole();
        loop {
            if current.order() == 1 {
                return true;
            }
            let next = self.commutator_subgroup(&current, &current);
            if next == current {
                return false;
            }
            current = next;
        }
    }

    pub fn order_profile(&self) -> ElementOrderProfile {
        let mut orders = BTreeMap::new();
        for &o in &self.element_orders {
            *orders.entry(o as usize).or_insert(0) += 1;
        }
        let exponent = orders.keys().fold(1, |acc, &o| arith::lcm(acc, o));
        ElementOrderProfile { orders, exponent }
    }

    pub fn exponent(&self) -> usize {
        self.element_orders
            .iter()
            .fold(1, |acc, &o| arith::lcm(acc, o as usize))
    }

    pub fn is_square_free_exponent(&self) -> bool {
        arith::is_square_free(self.exponent())
    }

    /// The subgroup `h` as a group in its own right. Element `i` of the
    /// result is the `i`-th smallest member of `h`; the returned vector maps
    /// local indices back to this table.
    pub fn restrict(&self, h: &Subgroup, label: impl Into<String>) -> (GroupTable, Vec<usize>) {
        let members = h.to_vec();
        let mut local = vec![u32::MAX; self.order];
        for (i, &x) in members.iter().enumerate() {
            local[x] = i as u32;
        }
        let m = members.len();
        let mut mult = Vec::with_capacity(m * m);
        for &a in &members {
            for &b in &members {
                mult.push(local[self.mul(a, b)]);
            }
        }
        let identity = local[self.identity] as usize;
        (GroupTable::from_trusted(m, mult, identity, label), members)
    }

    /// Quotient by a normal subgroup. Cosets are numbered in increasing
    /// order of their smallest element.
    pub fn quotient(&self, n: &Subgroup, label: impl Into<String>) -> Result<Quotient, GroupError> {
        if !self.is_normal(n) {
            return Err(GroupError::NotNormal);
        }
        Ok(self.quotient_unchecked(n, label))
    }

    pub(crate) fn quotient_unchecked(&self, n: &Subgroup, label: impl Into<String>) -> Quotient {
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if projection[x] != usize::MAX {
                continue;
            }
            let id = reps.len();
            reps.push(x);
            for y in n.iter() {
                projection[self.mul(x, y)] = id;
            }
        }
        let m = reps.len();
        let mut mult = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                mult.push(projection[self.mul(a, b)] as u32);
            }
        }
        let identity = projection[self.identity];
        Quotient {
            group: GroupTable::from_trusted(m, mult, identity, label),
            projection,
            representatives: reps,
        }
    }
}

/// A quotient group together with the natural projection.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub group: GroupTable,
    /// `projection[x]` is the coset index of element `x`.
    pub projection: Vec<usize>,
    /// Smallest element of each coset.
    pub representatives: Vec<usize>,
}

impl Quotient {
    /// Image of an element set under the projection.
    pub fn image(&self, set: &BitSet) -> Subgroup {
        Subgroup(BitSet::from_indices(
            self.group.order(),
            set.iter().map(|x| self.projection[x]),
        ))
    }

    /// Full preimage of a set of cosets.
    pub fn preimage(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.projection.len(),
            (0..self.projection.len()).filter(|&x| set.contains(self.projection[x])),
        )
    }
}

/// Multiset of element orders with its exponent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementOrderProfile {
    /// element order -> number of elements of that order
    pub orders: BTreeMap<usize, usize>,
    pub exponent: usize,
}

/// Subgroup membership over the elements of one [`GroupTable`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup(pub(crate) BitSet);

impl Subgroup {
    pub fn from_bits(bits: BitSet) -> Self {
        Subgroup(bits)
    }

    pub fn bits(&self) -> &BitSet {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.count()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> crate::bitset::Iter<'_> {
        self.0.iter()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.to_vec()
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup(self.0.intersection(&other.0))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {}, {:?})", self.order(), self.0)
    }
}
