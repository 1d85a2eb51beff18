//! Per-group analysis contexts.
//!
//! A [`GroupContext`] bundles a group with its subgroup lattice, the
//! modularity caches and memoized class memberships. Subgroups and
//! quotients are themselves groups, and get child contexts on demand:
//!
//! * a subgroup context shares the modularity caches of its root, since the
//!   lattice of `K` is the ideal `[1, K]` of the root lattice;
//! * a quotient context is a new root whose lattice is derived from the
//!   interval `[N, G]`.
//!
//! All caches are write-once cells, so a context can be shared read-only
//! across threads once built.

use std::sync::{Arc, OnceLock, Weak};

use crate::formations::{Formation, FormationError, ResidualResult};
use crate::group::{GroupTable, Quotient, Subgroup};
use crate::lattice::{LatticeError, SubgroupLattice, DEFAULT_SUBGROUP_BUDGET};
use crate::modularity::{ChainCertificate, ModularityError, ModularityIndex};

pub struct GroupContext {
    lattice: Arc<SubgroupLattice>,
    modularity: Arc<ModularityIndex>,
    /// local lattice index -> index in the modularity root; `None` at a root
    to_root: Option<Vec<usize>>,
    /// root index -> local index (`usize::MAX` outside the ideal)
    from_root: Option<Vec<usize>>,
    subs: Vec<OnceLock<Arc<SubContext>>>,
    quotients: Vec<OnceLock<Arc<QuotientContext>>>,
    /// for a quotient root `G/N`: the context of `G` and the lattice map into
    /// it, so that quotients of `G/N` resolve to quotients of `G`
    origin: Option<(Weak<GroupContext>, Vec<usize>)>,
    me: Weak<GroupContext>,
    pub(crate) classes: Vec<OnceLock<bool>>,
    pub(crate) residuals: Vec<OnceLock<Result<ResidualResult, FormationError>>>,
}

/// A subgroup viewed as a group, with maps back to the parent.
pub struct SubContext {
    pub context: Arc<GroupContext>,
    /// local element -> parent element
    pub elements: Vec<usize>,
    /// local lattice index -> parent lattice index
    pub lattice_map: Vec<usize>,
}

/// A quotient `G/N` with the projection and lattice correspondence.
pub struct QuotientContext {
    pub context: Arc<GroupContext>,
    pub quotient: Quotient,
    /// quotient lattice index -> parent lattice index (subgroups above `N`)
    pub lattice_map: Vec<usize>,
    pub normal: usize,
}

impl QuotientContext {
    /// Index of `XN/N` in the quotient lattice for a parent subgroup `X`.
    pub fn image(&self, parent_subgroup: &Subgroup) -> usize {
        let img = self.quotient.image(parent_subgroup.bits());
        self.context
            .lattice()
            .index_of(&img)
            .expect("image of a subgroup is a subgroup")
    }
}

impl SubContext {
    /// Maps a local subgroup to the parent's element numbering.
    pub fn lift(&self, local: &Subgroup, parent_order: usize) -> Subgroup {
        Subgroup::from_bits(crate::BitSet::from_indices(
            parent_order,
            local.iter().map(|x| self.elements[x]),
        ))
    }
}

impl std::fmt::Debug for GroupContext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupContext")
            .field("group", &self.group().label())
            .field("subgroups", &self.lattice.len())
            .finish()
    }
}

impl GroupContext {
    pub fn new(group: GroupTable) -> Result<Arc<Self>, LatticeError> {
        Self::with_budget(group, DEFAULT_SUBGROUP_BUDGET)
    }

    pub fn with_budget(group: GroupTable, budget: usize) -> Result<Arc<Self>, LatticeError> {
        let lattice = SubgroupLattice::enumerate_with_budget(Arc::new(group), budget)?;
        Ok(Self::root(Arc::new(lattice), None))
    }

    fn root(lattice: Arc<SubgroupLattice>, origin: Option<(Weak<GroupContext>, Vec<usize>)>) -> Arc<Self> {
        let modularity = Arc::new(ModularityIndex::new(lattice.clone()));
        Self::assemble(lattice, modularity, None, origin)
    }

    fn assemble(
        lattice: Arc<SubgroupLattice>,
        modularity: Arc<ModularityIndex>,
        to_root: Option<Vec<usize>>,
        origin: Option<(Weak<GroupContext>, Vec<usize>)>,
    ) -> Arc<Self> {
        let s = lattice.len();
        let from_root = to_root.as_ref().map(|map| {
            let mut inv = vec![usize::MAX; modularity.lattice().len()];
            for (local, &r) in map.iter().enumerate() {
                inv[r] = local;
            }
            inv
        });
        Arc::new_cyclic(|me| GroupContext {
            origin,
            me: me.clone(),
            subs: (0..s).map(|_| OnceLock::new()).collect(),
            quotients: (0..s).map(|_| OnceLock::new()).collect(),
            classes: (0..Formation::ALL.len()).map(|_| OnceLock::new()).collect(),
            residuals: (0..Formation::ALL.len()).map(|_| OnceLock::new()).collect(),
            lattice,
            modularity,
            to_root,
            from_root,
        })
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        self.lattice.group()
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn order(&self) -> usize {
        self.group().order()
    }

    pub fn top(&self) -> usize {
        self.lattice.top()
    }

    #[inline]
    fn root_idx(&self, i: usize) -> usize {
        match &self.to_root {
            Some(m) => m[i],
            None => i,
        }
    }

    #[inline]
    fn local_idx(&self, r: usize) -> usize {
        match &self.from_root {
            Some(m) => m[r],
            None => r,
        }
    }

    /// Context of subgroup `k` as a group in its own right.
    pub fn sub(&self, k: usize) -> Arc<SubContext> {
        self.subs[k]
            .get_or_init(|| {
                if k == self.top() {
                    // the whole group: same lattice, identity maps
                    let n = self.order();
                    let s = self.lattice.len();
                    let context = GroupContext::assemble(
                        self.lattice.clone(),
                        self.modularity.clone(),
                        self.to_root.clone(),
                        None,
                    );
                    return Arc::new(SubContext {
                        context,
                        elements: (0..n).collect(),
                        lattice_map: (0..s).collect(),
                    });
                }
                let label = format!("{}|{}", self.group().label(), k);
                let (table, elements) = self.group().restrict(self.lattice.subgroup(k), label);
                let (lat, lattice_map) = self.lattice.derive_sub(k, Arc::new(table), &elements);
                let to_root = lattice_map.iter().map(|&p| self.root_idx(p)).collect();
                let context =
                    GroupContext::assemble(Arc::new(lat), self.modularity.clone(), Some(to_root), None);
                Arc::new(SubContext {
                    context,
                    elements,
                    lattice_map,
                })
            })
            .clone()
    }

    /// Context of `G/N` for a normal subgroup index `n`.
    ///
    /// Panics if `n` is not normal.
    pub fn quotient(&self, n: usize) -> Arc<QuotientContext> {
        assert!(self.lattice.is_normal(n), "quotient by a non-normal subgroup");
        self.quotients[n]
            .get_or_init(|| {
                let label = format!("{}/{}", self.group().label(), n);
                let quotient = self.group().quotient_unchecked(self.lattice.subgroup(n), label);
                let qg = Arc::new(quotient.group.clone());
                let (lat, lattice_map) = self.lattice.derive_quotient(n, qg, &quotient.projection);
                let origin = Some((self.me.clone(), lattice_map.clone()));
                Arc::new(QuotientContext {
                    context: GroupContext::root(Arc::new(lat), origin),
                    quotient,
                    lattice_map,
                    normal: n,
                })
            })
            .clone()
    }

    /// Whether `G/N` lies in `f`, for a normal subgroup index `n`. For a
    /// quotient context `(G/M)/(N/M)` this is answered on `G/N`, so nested
    /// quotients share one context per normal subgroup of the top group.
    pub fn quotient_in(&self, n: usize, f: Formation) -> bool {
        if let Some((parent, map)) = &self.origin {
            if let Some(parent) = parent.upgrade() {
                return parent.quotient_in(map[n], f);
            }
        }
        if n == self.lattice.bottom() {
            if let Some(me) = self.me.upgrade() {
                return crate::formations::in_class(&me, f);
            }
        }
        crate::formations::in_class(&self.quotient(n).context, f)
    }

    pub fn is_modular_in(&self, h: usize, k: usize) -> Result<bool, ModularityError> {
        self.modularity
            .is_modular_in(self.root_idx(h), self.root_idx(k))
            .map_err(|_| ModularityError::NotContained(h, k))
    }

    pub fn maximal_modular_subgroups(&self, k: usize) -> Vec<usize> {
        self.modularity
            .maximal_modular_subgroups(self.root_idx(k))
            .iter()
            .map(|&r| self.local_idx(r))
            .collect()
    }

    pub fn check_maximal_modular_structure(
        &self,
        k: usize,
        m: usize,
    ) -> Result<crate::modularity::MaxModularKind, ModularityError> {
        self.modularity
            .check_maximal_modular_structure(self.root_idx(k), self.root_idx(m))
            .map_err(|e| match e {
                ModularityError::NotContained(..) => ModularityError::NotContained(m, k),
                ModularityError::LemmaViolated { .. } => ModularityError::LemmaViolated { k, m },
            })
    }

    /// Fast membership test: is `h` submodular in `k`?
    pub fn submodular(&self, h: usize, k: usize) -> bool {
        self.modularity.submodular(self.root_idx(h), self.root_idx(k))
    }

    pub fn p_subnormal(&self, h: usize, k: usize) -> bool {
        self.modularity.p_subnormal(self.root_idx(h), self.root_idx(k))
    }

    fn localize(&self, cert: ChainCertificate) -> ChainCertificate {
        ChainCertificate {
            kind: cert.kind,
            chain: cert.chain.into_iter().map(|r| self.local_idx(r)).collect(),
        }
    }

    pub fn is_submodular(&self, h: usize, k: usize) -> Result<Option<ChainCertificate>, ModularityError> {
        self.modularity
            .is_submodular(self.root_idx(h), self.root_idx(k))
            .map(|c| c.map(|c| self.localize(c)))
            .map_err(|_| ModularityError::NotContained(h, k))
    }

    pub fn is_p_subnormal(&self, h: usize, k: usize) -> Result<Option<ChainCertificate>, ModularityError> {
        self.modularity
            .is_p_subnormal(self.root_idx(h), self.root_idx(k))
            .map(|c| c.map(|c| self.localize(c)))
            .map_err(|_| ModularityError::NotContained(h, k))
    }

    /// Re-validates a certificate expressed in local indices.
    pub fn validate(&self, cert: &ChainCertificate) -> bool {
        let root = ChainCertificate {
            kind: cert.kind,
            chain: cert.chain.iter().map(|&i| self.root_idx(i)).collect(),
        };
        self.modularity.validate(&root)
    }

    /// Subnormality of lattice member `h` in the whole group.
    pub fn subnormal(&self, h: usize) -> bool {
        self.group().is_subnormal(self.lattice.subgroup(h))
    }
}
