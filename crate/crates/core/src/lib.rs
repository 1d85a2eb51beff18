//! Finite-group computations over dense Cayley tables: subgroup lattices,
//! modular and submodular subgroups, formation membership and residuals,
//! and an exhaustive verifier for statements about factorised groups.

pub mod arith;
pub mod bitset;
pub mod catalog;
pub mod context;
pub mod formations;
pub mod group;
pub mod lattice;
pub mod modularity;
pub mod report;
pub mod verifier;

pub use bitset::BitSet;
pub use catalog::{Builder, CatalogEntry, CatalogError, Manifest};
pub use group::{GroupError, GroupTable, Quotient, Subgroup};
pub use lattice::{LatticeError, SubgroupLattice};
pub use context::{GroupContext, QuotientContext, SubContext};
pub use formations::{Formation, FormationError, ResidualResult};
pub use modularity::{ChainCertificate, ChainKind, MaxModularKind, ModularityError, ModularityIndex};
pub use verifier::{
    enumerate_factorizations, run_catalog, FactorizationPair, Suite, TheoremCheckRecord, Verdict,
    VerificationReport, VerifyOptions,
};
