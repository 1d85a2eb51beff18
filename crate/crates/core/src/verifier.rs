//! Exhaustive checks of statements about factorised groups.
//!
//! Every statement is evaluated as hypothesis ⇒ conclusion over an explicit
//! binding domain (subgroups, normal subgroups or factorisations `G = AB`).
//! A binding whose hypothesis fails is vacuous; one whose hypothesis holds is
//! confirmed or a counterexample. Only counterexamples are kept by default.
//!
//! Binding domains, one row per check id:
//!
//! | id | binds | hypothesis | conclusion |
//! |----|-------|------------|------------|
//! | L-SUB(1) | `H ≤ K ≤ G` | `H` submod in `K`, `K` submod in `G` | `H` submod in `G` |
//! | L-SUB(2) | `H, K ≤ G` | `H` submod in `G` | `H ∩ K` submod in `K` |
//! | L-SUB(3) | `N ⊴ G`, `N ≤ H` | `H/N` submod in `G/N` | `H` submod in `G` |
//! | L-SUB(4) | `N ⊴ G`, `H ≤ G` | `H` submod in `G` | `HN/N` submod in `G/N` and `HN` submod in `G` |
//! | L-SUB(5) | `H ≤ G` | `H` subnormal | `H` submod in `G` |
//! | L-MAXMOD | `K ≤ G`, `M` maximal modular in `K` | - | `M ⊴ K` with `K/M` simple, or `K/M_K` non-abelian of order `pq` |
//! | L-PRIM(1) | `K ≤ G`, `M` maximal in `K` | `K` solvable, `M_K = 1` | `Φ(K) = 1`; unique minimal normal `N = C_K(N) = F(K) = O_p(K)`; `K = F(K) ⋊ M`; `O_p(M) = 1` |
//! | L-PRIM(2) | `f ∈ {N, U, Z, C}` | `G` solvable, `G ∉ f`, `G/N ∈ f` for all `1 ≠ N ⊴ G` | `G` primitive |
//! | L-SOLV | `G = AB` | `A` solvable submod, `B` solvable | `G` solvable |
//! | L-PSN | `H ≤ G` | `G` solvable, `H` submod | `H` ℙ-subnormal |
//! | L-ZC(1) | `G`; `H ≤ G`; `N ⊴ G` | membership in `Z` or `C` (of `G` or `G/Φ(G)`) | `Z ⊆ C ⊆ D`; closure under subgroups and quotients; saturation |
//! | L-ZC(2) | `H ≤ G` | - | `H ∈ Z` iff `H ∈ NA ∩ C` iff `H ∈ NA1 ∩ C` |
//! | L-RES | `f ∈ {Ab, N, A1}`, `A ≤ G`, `N ⊴ G` | - | `(AN/N)^f = A^f N/N` |
//! | L-TOWER | `G = AB` | `A, B` submod, `A, B ∈ D` | `G ∈ D` |
//! | L-NN(1) | `G = AB` | `A` submod, `B` nilpotent normal, `A ∈ Z` | `G ∈ Z` |
//! | L-NN(2) | `G = AB` | `A` submod, `B` nilpotent normal, `A ∈ C` | `G ∈ C` |
//! | P-SUP(i) | `G = AB` | `A, B ∈ U` submod, plus condition `i` | `G ∈ U` |
//! | P-SUP(res) | `G = AB` | `A, B ∈ U` submod, `G^A ∈ N` or `(|G:A|, |G:B|) = 1` | `G^U = G^N2 ∩ 𝔅(G)` |
//! | T1(1) | `G = AB` | `A, B ∈ Z` submod, `(|G:AF(G)|, |G:BF(G)|) = 1` | `G ∈ Z` |
//! | T1(2) | `G = AB` | `A, B ∈ Z` submod, `(|A/A^A1|, |B/B^A1|) = 1` | `G ∈ Z` |
//! | T2(1) | `G = AB` | `A, B ∈ C` submod, `(|G:AF(G)|, |G:BF(G)|) = 1` | `G ∈ C` |
//! | T2(2) | `G = AB` | `A, B ∈ C` submod, `G^A ∈ N` | `G ∈ Z` |
//! | C-A1 | `G = AB` | `A, B ∈ Z` submod, `(|G:A|, |G:B|) = 1` | `G ∈ Z` |
//! | C-B1 | `G = AB` | `A, B ∈ Z` submod, `G^A1 ∈ N` | `G ∈ Z` |
//! | C-B2 | `G = AB` | `A, B` nilpotent submod | `G ∈ Z ∩ U` |
//!
//! P-SUP conditions: (1) `G'` nilpotent; (2) `|G:A| = r^α` with `α ≥ 1` and
//! the Sylow `r`-subgroup of `G` normal; (3) `|G:A| = r^α` with `α ≥ 1` and
//! `r = max π(G)`; (4) `B` nilpotent and normal; (5) `B` nilpotent and
//! `|G:B|` prime; (6) `B` normal and siding.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::arith;
use crate::catalog::Manifest;
use crate::context::GroupContext;
use crate::formations::{self, in_class, residual, Formation};
use crate::lattice::{SubgroupLattice, DEFAULT_SUBGROUP_BUDGET};

/// A factorisation `G = AB` by lattice indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FactorizationPair {
    pub a: usize,
    pub b: usize,
    pub order_a: usize,
    pub order_b: usize,
    pub order_meet: usize,
    pub index_a: usize,
    pub index_b: usize,
}

/// All ordered pairs `(A, B)` with `|A||B| = |G||A ∩ B|`.
pub fn enumerate_factorizations(l: &SubgroupLattice) -> Vec<FactorizationPair> {
    let n = l.order_of(l.top());
    let mut out = Vec::new();
    for a in 0..l.len() {
        let oa = l.order_of(a);
        for b in 0..l.len() {
            let ob = l.order_of(b);
            let om = l.order_of(l.meet(a, b));
            if oa * ob == n * om {
                out.push(FactorizationPair {
                    a,
                    b,
                    order_a: oa,
                    order_b: ob,
                    order_meet: om,
                    index_a: n / oa,
                    index_b: n / ob,
                });
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Vacuous,
    Confirmed,
    #[serde(rename = "COUNTEREXAMPLE")]
    Counterexample,
}

impl Verdict {
    pub fn of(hypothesis: bool, conclusion: bool) -> Verdict {
        match (hypothesis, conclusion) {
            (false, _) => Verdict::Vacuous,
            (true, true) => Verdict::Confirmed,
            (true, false) => Verdict::Counterexample,
        }
    }
}

/// One variable of a statement bound to a subgroup (or a parameter).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub var: String,
    pub order: usize,
    /// element indices generating the subgroup in the group's numbering
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremCheckRecord {
    pub suite: String,
    pub group: String,
    pub instance: Vec<Binding>,
    pub hypothesis_held: bool,
    pub conclusion_held: bool,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteTally {
    pub id: String,
    pub vacuous: usize,
    pub confirmed: usize,
    pub counterexamples: Vec<TheoremCheckRecord>,
    /// every record, kept only on request
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<TheoremCheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub label: String,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub suites: Vec<SuiteTally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub manifest_hash: String,
    pub groups: Vec<GroupReport>,
}

impl VerificationReport {
    pub fn counterexample_count(&self) -> usize {
        self.groups
            .iter()
            .flat_map(|g| &g.suites)
            .map(|s| s.counterexamples.len())
            .sum()
    }

    pub fn error_count(&self) -> usize {
        self.groups.iter().filter(|g| g.error.is_some()).count()
    }

    /// Catalog-wide (vacuous, confirmed, counterexample) counts for a check id.
    pub fn totals(&self, id: &str) -> (usize, usize, usize) {
        self.groups
            .iter()
            .flat_map(|g| &g.suites)
            .filter(|s| s.id == id)
            .fold((0, 0, 0), |(v, c, x), s| {
                (v + s.vacuous, c + s.confirmed, x + s.counterexamples.len())
            })
    }

    /// Check ids in first-seen order.
    pub fn check_ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = Vec::new();
        for s in self.groups.iter().flat_map(|g| &g.suites) {
            if !ids.contains(&s.id) {
                ids.push(s.id.clone());
            }
        }
        ids
    }
}

/// A statement family; each runs one or more check ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    LSub,
    LMaxMod,
    LPrim,
    LSolv,
    LPsn,
    LZc,
    LRes,
    LTower,
    LNn,
    PSup,
    T1,
    T2,
    CA1,
    CB1,
    CB2,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::LSub,
        Suite::LMaxMod,
        Suite::LPrim,
        Suite::LSolv,
        Suite::LPsn,
        Suite::LZc,
        Suite::LRes,
        Suite::LTower,
        Suite::LNn,
        Suite::PSup,
        Suite::T1,
        Suite::T2,
        Suite::CA1,
        Suite::CB1,
        Suite::CB2,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Suite::LSub => "L-SUB",
            Suite::LMaxMod => "L-MAXMOD",
            Suite::LPrim => "L-PRIM",
            Suite::LSolv => "L-SOLV",
            Suite::LPsn => "L-PSN",
            Suite::LZc => "L-ZC",
            Suite::LRes => "L-RES",
            Suite::LTower => "L-TOWER",
            Suite::LNn => "L-NN",
            Suite::PSup => "P-SUP",
            Suite::T1 => "T1",
            Suite::T2 => "T2",
            Suite::CA1 => "C-A1",
            Suite::CB1 => "C-B1",
            Suite::CB2 => "C-B2",
        }
    }

    pub fn checks(self) -> &'static [&'static str] {
        match self {
            Suite::LSub => &["L-SUB(1)", "L-SUB(2)", "L-SUB(3)", "L-SUB(4)", "L-SUB(5)"],
            Suite::LMaxMod => &["L-MAXMOD"],
            Suite::LPrim => &["L-PRIM(1)", "L-PRIM(2)"],
            Suite::LSolv => &["L-SOLV"],
            Suite::LPsn => &["L-PSN"],
            Suite::LZc => &["L-ZC(1)", "L-ZC(2)"],
            Suite::LRes => &["L-RES"],
            Suite::LTower => &["L-TOWER"],
            Suite::LNn => &["L-NN(1)", "L-NN(2)"],
            Suite::PSup => &[
                "P-SUP(1)",
                "P-SUP(2)",
                "P-SUP(3)",
                "P-SUP(4)",
                "P-SUP(5)",
                "P-SUP(6)",
                "P-SUP(res)",
            ],
            Suite::T1 => &["T1(1)", "T1(2)"],
            Suite::T2 => &["T2(1)", "T2(2)"],
            Suite::CA1 => &["C-A1"],
            Suite::CB1 => &["C-B1"],
            Suite::CB2 => &["C-B2"],
        }
    }

    /// Parses a comma-separated list of suite names or check ids
    /// (case-insensitive). Returns the selected check ids in canonical order.
    pub fn parse_selection(list: &str) -> Result<Vec<&'static str>, String> {
        let mut wanted: Vec<&'static str> = Vec::new();
        for raw in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let mut hit = false;
            for s in Suite::ALL {
                if s.id().eq_ignore_ascii_case(raw) {
                    wanted.extend(s.checks());
                    hit = true;
                }
                for c in s.checks() {
                    if c.eq_ignore_ascii_case(raw) {
                        wanted.push(c);
                        hit = true;
                    }
                }
            }
            if !hit {
                return Err(format!("unknown suite `{raw}`"));
            }
        }
        Ok(Self::all_checks()
            .into_iter()
            .filter(|c| wanted.contains(c))
            .collect())
    }

    pub fn all_checks() -> Vec<&'static str> {
        Suite::ALL.iter().flat_map(|s| s.checks().iter().copied()).collect()
    }

    fn of_check(check: &str) -> Suite {
        Suite::ALL
            .into_iter()
            .find(|s| s.checks().contains(&check))
            .expect("known check id")
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// check ids to run, in canonical order
    pub checks: Vec<&'static str>,
    pub store_all: bool,
    pub jobs: usize,
    pub timings: bool,
    pub budget: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            checks: Suite::all_checks(),
            store_all: false,
            jobs: 0,
            timings: true,
            budget: DEFAULT_SUBGROUP_BUDGET,
        }
    }
}

struct Recorder<'a> {
    group: &'a str,
    l: &'a SubgroupLattice,
    store_all: bool,
    tallies: Vec<SuiteTally>,
}

impl<'a> Recorder<'a> {
    fn tally(&mut self, id: &str) -> &mut SuiteTally {
        let pos = match self.tallies.iter().position(|t| t.id == id) {
            Some(p) => p,
            None => {
                self.tallies.push(SuiteTally {
                    id: id.to_string(),
                    vacuous: 0,
                    confirmed: 0,
                    counterexamples: Vec::new(),
                    records: Vec::new(),
                });
                self.tallies.len() - 1
            }
        };
        &mut self.tallies[pos]
    }

    fn bind(&self, var: &str, idx: usize) -> Binding {
        Binding {
            var: var.to_string(),
            order: self.l.order_of(idx),
            generators: self.l.generators(idx).to_vec(),
        }
    }

    /// Records one binding. The conclusion is evaluated only when the
    /// hypothesis holds or when every record is kept.
    fn check(
        &mut self,
        id: &str,
        hypothesis: bool,
        conclusion: impl FnOnce() -> bool,
        instance: impl FnOnce(&Self) -> Vec<Binding>,
    ) {
        let store_all = self.store_all;
        if !hypothesis && !store_all {
            self.tally(id).vacuous += 1;
            return;
        }
        let conclusion_held = conclusion();
        let verdict = Verdict::of(hypothesis, conclusion_held);
        let record = if store_all || verdict == Verdict::Counterexample {
            Some(TheoremCheckRecord {
                suite: id.to_string(),
                group: self.group.to_string(),
                instance: instance(self),
                hypothesis_held: hypothesis,
                conclusion_held,
                verdict,
            })
        } else {
            None
        };
        let t = self.tally(id);
        match verdict {
            Verdict::Vacuous => t.vacuous += 1,
            Verdict::Confirmed => t.confirmed += 1,
            Verdict::Counterexample => t.counterexamples.push(record.clone().expect("kept")),
        }
        if store_all {
            t.records.push(record.expect("kept"));
        }
    }
}

/// Per-group facts shared by several suites.
struct Facts {
    top: usize,
    fitting: usize,
    pairs: Vec<FactorizationPair>,
    submod: Vec<bool>,
}

fn sub_in(ctx: &GroupContext, k: usize, f: Formation) -> bool {
    in_class(&ctx.sub(k).context, f)
}

fn param(var: &str, value: &str) -> Binding {
    Binding {
        var: format!("{var}={value}"),
        order: 0,
        generators: Vec::new(),
    }
}

/// Runs the selected checks on one group.
pub fn verify_group(ctx: &GroupContext, checks: &[&str], store_all: bool) -> Result<Vec<SuiteTally>, String> {
    let l = ctx.lattice();
    let top = l.top();
    let fitting = l.fitting().map_err(|e| e.to_string())?;
    let facts = Facts {
        top,
        fitting,
        pairs: enumerate_factorizations(l),
        submod: (0..l.len()).map(|h| ctx.submodular(h, top)).collect(),
    };
    let label = ctx.group().label().to_string();
    let mut rec = Recorder {
        group: &label,
        l,
        store_all,
        tallies: Vec::new(),
    };
    for &c in checks {
        rec.tally(c);
    }
    let mut families: Vec<Suite> = checks.iter().map(|c| Suite::of_check(c)).collect();
    families.dedup();
    for s in families {
        match s {
            Suite::LSub => suite_l_sub(ctx, &facts, &mut rec),
            Suite::LMaxMod => suite_l_maxmod(ctx, &mut rec),
            Suite::LPrim => suite_l_prim(ctx, &mut rec),
            Suite::LSolv => suite_l_solv(ctx, &facts, &mut rec),
            Suite::LPsn => suite_l_psn(ctx, &facts, &mut rec),
            Suite::LZc => suite_l_zc(ctx, &mut rec),
            Suite::LRes => suite_l_res(ctx, &mut rec),
            Suite::LTower => suite_l_tower(ctx, &facts, &mut rec),
            Suite::LNn => suite_l_nn(ctx, &facts, &mut rec),
            Suite::PSup => suite_p_sup(ctx, &facts, &mut rec)?,
            Suite::T1 => suite_t1(ctx, &facts, &mut rec)?,
            Suite::T2 => suite_t2(ctx, &facts, &mut rec)?,
            Suite::CA1 | Suite::CB1 | Suite::CB2 => suite_corollaries(ctx, s, &facts, &mut rec)?,
        }
    }
    let mut tallies = rec.tallies;
    tallies.retain(|t| checks.contains(&t.id.as_str()));
    Ok(tallies)
}

fn suite_l_sub(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) {
    let l = ctx.lattice();
    let s = l.len();
    let top = facts.top;
    for k in 0..s {
        for h in l.below(k).iter() {
            rec.check(
                "L-SUB(1)",
                ctx.submodular(h, k) && facts.submod[k],
                || facts.submod[h],
                |r| vec![r.bind("H", h), r.bind("K", k)],
            );
        }
    }
    for h in 0..s {
        for k in 0..s {
            let hk = l.meet(h, k);
            rec.check(
                "L-SUB(2)",
                facts.submod[h],
                || ctx.submodular(hk, k),
                |r| vec![r.bind("H", h), r.bind("K", k)],
            );
        }
    }
    for n in l.normal_subgroups() {
        let q = ctx.quotient(n);
        let qc = &q.context;
        let qtop = qc.top();
        for qh in 0..qc.lattice().len() {
            let h = q.lattice_map[qh];
            rec.check(
                "L-SUB(3)",
                qc.submodular(qh, qtop),
                || facts.submod[h],
                |r| vec![r.bind("N", n), r.bind("H", h)],
            );
        }
        for h in 0..s {
            let hn = l.join(h, n);
            rec.check(
                "L-SUB(4)",
                facts.submod[h],
                || qc.submodular(q.image(l.subgroup(h)), qtop) && facts.submod[hn],
                |r| vec![r.bind("N", n), r.bind("H", h)],
            );
        }
    }
    for h in 0..s {
        rec.check(
            "L-SUB(5)",
            ctx.subnormal(h),
            || ctx.is_submodular(h, top).ok().flatten().is_some_and(|c| ctx.validate(&c)),
            |r| vec![r.bind("H", h)],
        );
    }
}

fn suite_l_maxmod(ctx: &GroupContext, rec: &mut Recorder) {
    let l = ctx.lattice();
    for k in 0..l.len() {
        for m in ctx.maximal_modular_subgroups(k) {
            rec.check(
                "L-MAXMOD",
                true,
                || ctx.check_maximal_modular_structure(k, m).is_ok(),
                |r| vec![r.bind("K", k), r.bind("M", m)],
            );
        }
    }
}

/// Largest normal `p`-subgroup of subgroup `k`: the meet of its Sylow
/// `p`-subgroups.
fn o_p_in(l: &SubgroupLattice, k: usize, p: usize) -> usize {
    l.sylow_subgroups_in(k, p)
        .into_iter()
        .fold(k, |acc, s| l.meet(acc, s))
}

fn primitive_structure_holds(kl: &SubgroupLattice, m: usize) -> bool {
    let g = kl.group();
    let kt = kl.top();
    if kl.frattini() != kl.bottom() {
        return false;
    }
    let mins = kl.minimal_normal_subgroups();
    let [nn] = mins.as_slice() else {
        return false;
    };
    let nn = *nn;
    let Some(p) = arith::prime_power_base(kl.order_of(nn)) else {
        return false;
    };
    let centralizer = kl.index_of(&g.centralizer(kl.subgroup(nn).bits()));
    let fit = kl.fitting().ok();
    centralizer == Some(nn)
        && fit == Some(nn)
        && o_p_in(kl, kt, p) == nn
        && kl.meet(nn, m) == kl.bottom()
        && kl.order_of(nn) * kl.order_of(m) == kl.order_of(kt)
        && o_p_in(kl, m, p) == kl.bottom()
}

fn suite_l_prim(ctx: &GroupContext, rec: &mut Recorder) {
    let l = ctx.lattice();
    for k in 0..l.len() {
        let sub = ctx.sub(k);
        let kc = &sub.context;
        let kl = kc.lattice();
        let solvable = in_class(kc, Formation::S);
        for &m in kl.maximal_subgroups(kl.top()) {
            let pm = sub.lattice_map[m];
            rec.check(
                "L-PRIM(1)",
                solvable && kl.core(m) == kl.bottom(),
                || primitive_structure_holds(kl, m),
                |r| vec![r.bind("K", k), r.bind("M", pm)],
            );
        }
    }
    let solvable = in_class(ctx, Formation::S);
    for f in [Formation::N, Formation::U, Formation::Z, Formation::C] {
        let hyp = solvable
            && !in_class(ctx, f)
            && l
                .normal_subgroups()
                .into_iter()
                .filter(|&n| n != l.bottom())
                .all(|n| ctx.quotient_in(n, f));
        rec.check("L-PRIM(2)", hyp, || l.is_primitive(), |_| vec![param("F", f.code())]);
    }
}

fn pair_binding(r: &Recorder, p: &FactorizationPair) -> Vec<Binding> {
    vec![r.bind("A", p.a), r.bind("B", p.b)]
}

fn suite_l_solv(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) {
    let g_solv = in_class(ctx, Formation::S);
    for p in &facts.pairs {
        let hyp = facts.submod[p.a] && sub_in(ctx, p.a, Formation::S) && sub_in(ctx, p.b, Formation::S);
        rec.check("L-SOLV", hyp, || g_solv, |r| pair_binding(r, p));
    }
}

fn suite_l_psn(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) {
    let solvable = in_class(ctx, Formation::S);
    for h in 0..ctx.lattice().len() {
        rec.check(
            "L-PSN",
            solvable && facts.submod[h],
            || ctx.p_subnormal(h, facts.top),
            |r| vec![r.bind("H", h)],
        );
    }
}

fn suite_l_zc(ctx: &GroupContext, rec: &mut Recorder) {
    let l = ctx.lattice();
    let z = in_class(ctx, Formation::Z);
    let c = in_class(ctx, Formation::C);
    let top = l.top();
    rec.check("L-ZC(1)", z, || c, |r| vec![r.bind("G", top), param("claim", "Z<=C")]);
    rec.check(
        "L-ZC(1)",
        c,
        || in_class(ctx, Formation::D),
        |r| vec![r.bind("G", top), param("claim", "C<=D")],
    );
    for (f, held) in [(Formation::Z, z), (Formation::C, c)] {
        for h in 0..l.len() {
            rec.check(
                "L-ZC(1)",
                held,
                || sub_in(ctx, h, f),
                |r| vec![r.bind("H", h), param("subgroup-closed", f.code())],
            );
        }
        for n in l.normal_subgroups() {
            rec.check(
                "L-ZC(1)",
                held,
                || ctx.quotient_in(n, f),
                |r| vec![r.bind("N", n), param("quotient-closed", f.code())],
            );
        }
        rec.check(
            "L-ZC(1)",
            formations::frattini_quotient_in(ctx, f),
            || held,
            |_| vec![param("saturated", f.code())],
        );
    }
    for h in 0..l.len() {
        let hc = &ctx.sub(h).context;
        rec.check(
            "L-ZC(2)",
            true,
            || {
                let z = in_class(hc, Formation::Z);
                let c = in_class(hc, Formation::C);
                z == (in_class(hc, Formation::NA) && c) && z == (in_class(hc, Formation::NA1) && c)
            },
            |r| vec![r.bind("H", h)],
        );
    }
}

fn suite_l_res(ctx: &GroupContext, rec: &mut Recorder) {
    let l = ctx.lattice();
    let normals = l.normal_subgroups();
    for f in [Formation::Ab, Formation::N, Formation::A1] {
        for a in 0..l.len() {
            let sa = ctx.sub(a);
            // A^f as a subgroup of G
            let ra = residual(&sa.context, f).map(|r| sa.lattice_map[r.residual]);
            for &n in &normals {
                let q = ctx.quotient(n);
                let an = l.join(a, n);
                let qan = q.image(l.subgroup(an));
                rec.check(
                    "L-RES",
                    true,
                    || {
                        let Ok(ra) = &ra else { return false };
                        let sq = q.context.sub(qan);
                        let Ok(left) = residual(&sq.context, f) else {
                            return false;
                        };
                        let left = sq.lattice_map[left.residual];
                        let right = q.image(l.subgroup(l.join(*ra, n)));
                        left == right
                    },
                    |r| vec![r.bind("A", a), r.bind("N", n), param("F", f.code())],
                );
            }
        }
    }
}

fn suite_l_tower(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) {
    let d = in_class(ctx, Formation::D);
    for p in &facts.pairs {
        let hyp = facts.submod[p.a]
            && facts.submod[p.b]
            && sub_in(ctx, p.a, Formation::D)
            && sub_in(ctx, p.b, Formation::D);
        rec.check("L-TOWER", hyp, || d, |r| pair_binding(r, p));
    }
}

fn suite_l_nn(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) {
    let l = ctx.lattice();
    let z = in_class(ctx, Formation::Z);
    let c = in_class(ctx, Formation::C);
    for p in &facts.pairs {
        let base = facts.submod[p.a] && l.is_normal(p.b) && l.is_nilpotent_subgroup(p.b);
        rec.check(
            "L-NN(1)",
            base && sub_in(ctx, p.a, Formation::Z),
            || z,
            |r| pair_binding(r, p),
        );
        rec.check(
            "L-NN(2)",
            base && sub_in(ctx, p.a, Formation::C),
            || c,
            |r| pair_binding(r, p),
        );
    }
}

fn residual_of(ctx: &GroupContext, f: Formation) -> Result<usize, String> {
    residual(ctx, f).map(|r| r.residual).map_err(|e| e.to_string())
}

fn suite_p_sup(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) -> Result<(), String> {
    let l = ctx.lattice();
    let n = ctx.order();
    let u = in_class(ctx, Formation::U);
    let derived_nilpotent = l.is_nilpotent_subgroup(l.derived());
    let r_max = arith::prime_divisors(n).last().copied();
    let ga_nilpotent = l.is_nilpotent_subgroup(residual_of(ctx, Formation::A)?);
    let res_u = residual_of(ctx, Formation::U)?;
    let res_n2 = residual_of(ctx, Formation::N2)?;
    let b_op = formations::b_operator(ctx);
    let identity = res_u == l.meet(res_n2, b_op);
    for p in &facts.pairs {
        let base = facts.submod[p.a]
            && facts.submod[p.b]
            && sub_in(ctx, p.a, Formation::U)
            && sub_in(ctx, p.b, Formation::U);
        let r = if p.index_a > 1 { arith::prime_power_base(p.index_a) } else { None };
        let b_nil = l.is_nilpotent_subgroup(p.b);
        let b_normal = l.is_normal(p.b);
        let conds = [
            ("P-SUP(1)", derived_nilpotent),
            ("P-SUP(2)", r.is_some_and(|r| l.is_normal(l.sylow_subgroup(r)))),
            ("P-SUP(3)", r.is_some() && r == r_max),
            ("P-SUP(4)", b_nil && b_normal),
            ("P-SUP(5)", b_nil && arith::is_prime(p.index_b)),
            ("P-SUP(6)", b_normal && formations::is_siding(&ctx.sub(p.b).context)),
        ];
        for (id, cond) in conds {
            rec.check(id, base && cond, || u, |r| pair_binding(r, p));
        }
        let side = ga_nilpotent || arith::gcd(p.index_a, p.index_b) == 1;
        rec.check("P-SUP(res)", base && side, || identity, |r| pair_binding(r, p));
    }
    Ok(())
}

/// `|G : XF(G)|`
fn index_over_fitting(l: &SubgroupLattice, facts: &Facts, x: usize) -> usize {
    l.order_of(facts.top) / l.order_of(l.join(x, facts.fitting))
}

fn a1_quotient_order(ctx: &GroupContext, x: usize) -> Result<usize, String> {
    let sc = &ctx.sub(x).context;
    Ok(sc.order() / sc.lattice().order_of(residual_of(sc, Formation::A1)?))
}

fn suite_t1(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) -> Result<(), String> {
    let l = ctx.lattice();
    let z = in_class(ctx, Formation::Z);
    for p in &facts.pairs {
        let base = facts.submod[p.a]
            && facts.submod[p.b]
            && sub_in(ctx, p.a, Formation::Z)
            && sub_in(ctx, p.b, Formation::Z);
        let c1 = arith::gcd(index_over_fitting(l, facts, p.a), index_over_fitting(l, facts, p.b)) == 1;
        rec.check("T1(1)", base && c1, || z, |r| pair_binding(r, p));
        let c2 = base && arith::gcd(a1_quotient_order(ctx, p.a)?, a1_quotient_order(ctx, p.b)?) == 1;
        rec.check("T1(2)", c2, || z, |r| pair_binding(r, p));
    }
    Ok(())
}

fn suite_t2(ctx: &GroupContext, facts: &Facts, rec: &mut Recorder) -> Result<(), String> {
    let l = ctx.lattice();
    let z = in_class(ctx, Formation::Z);
    let c = in_class(ctx, Formation::C);
    let ga_nilpotent = l.is_nilpotent_subgroup(residual_of(ctx, Formation::A)?);
    for p in &facts.pairs {
        let base = facts.submod[p.a]
            && facts.submod[p.b]
            && sub_in(ctx, p.a, Formation::C)
            && sub_in(ctx, p.b, Formation::C);
        let c1 = arith::gcd(index_over_fitting(l, facts, p.a), index_over_fitting(l, facts, p.b)) == 1;
        rec.check("T2(1)", base && c1, || c, |r| pair_binding(r, p));
        rec.check("T2(2)", base && ga_nilpotent, || z, |r| pair_binding(r, p));
    }
    Ok(())
}

fn suite_corollaries(ctx: &GroupContext, s: Suite, facts: &Facts, rec: &mut Recorder) -> Result<(), String> {
    let l = ctx.lattice();
    let z = in_class(ctx, Formation::Z);
    let u = in_class(ctx, Formation::U);
    let ga1_nilpotent = match s {
        Suite::CB1 => l.is_nilpotent_subgroup(residual_of(ctx, Formation::A1)?),
        _ => false,
    };
    for p in &facts.pairs {
        let both = facts.submod[p.a] && facts.submod[p.b];
        match s {
            Suite::CA1 => {
                let hyp = both
                    && arith::gcd(p.index_a, p.index_b) == 1
                    && sub_in(ctx, p.a, Formation::Z)
                    && sub_in(ctx, p.b, Formation::Z);
                rec.check("C-A1", hyp, || z, |r| pair_binding(r, p));
            }
            Suite::CB1 => {
                let hyp = both
                    && ga1_nilpotent
                    && sub_in(ctx, p.a, Formation::Z)
                    && sub_in(ctx, p.b, Formation::Z);
                rec.check("C-B1", hyp, || z, |r| pair_binding(r, p));
            }
            _ => {
                let hyp = both && l.is_nilpotent_subgroup(p.a) && l.is_nilpotent_subgroup(p.b);
                rec.check("C-B2", hyp, || z && u, |r| pair_binding(r, p));
            }
        }
    }
    Ok(())
}

/// SHA-256 of the manifest text, lowercase hex.
pub fn manifest_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn verify_entry(
    entry: &Result<crate::catalog::CatalogEntry, crate::catalog::CatalogError>,
    position: usize,
    opts: &VerifyOptions,
) -> GroupReport {
    let start = Instant::now();
    let ms = |r: GroupReport| GroupReport {
        ms: opts.timings.then(|| start.elapsed().as_millis() as u64),
        ..r
    };
    let failed = |label: String, order: usize, e: String| GroupReport {
        label,
        order,
        error: Some(e),
        suites: Vec::new(),
        ms: None,
    };
    let entry = match entry {
        Ok(e) => e,
        Err(e) => return ms(failed(format!("entry {}", position + 1), 0, e.to_string())),
    };
    let table = match entry.build() {
        Ok(t) => t,
        Err(e) => return ms(failed(entry.label.clone(), 0, e.to_string())),
    };
    let order = table.order();
    let ctx: Arc<GroupContext> = match GroupContext::with_budget(table, opts.budget) {
        Ok(c) => c,
        Err(e) => return ms(failed(entry.label.clone(), order, e.to_string())),
    };
    match verify_group(&ctx, &opts.checks, opts.store_all) {
        Ok(suites) => ms(GroupReport {
            label: entry.label.clone(),
            order,
            error: None,
            suites,
            ms: None,
        }),
        Err(e) => ms(failed(entry.label.clone(), order, e)),
    }
}

/// Verifies every manifest entry, one task per group. Group order follows
/// the manifest, so the report is deterministic apart from timings.
pub fn run_catalog(manifest: &Manifest, opts: &VerifyOptions) -> VerificationReport {
    let run = || {
        manifest
            .entries
            .par_iter()
            .enumerate()
            .map(|(i, e)| verify_entry(e, i, opts))
            .collect::<Vec<_>>()
    };
    let groups = if opts.jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        }
    } else {
        run()
    };
    VerificationReport {
        manifest_hash: manifest_hash(&manifest.text),
        groups,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, Builder};

    fn ctx(b: Builder) -> Arc<GroupContext> {
        GroupContext::new(build(&b).unwrap()).unwrap()
    }

    fn find<'a>(t: &'a [SuiteTally], id: &str) -> &'a SuiteTally {
        t.iter().find(|s| s.id == id).unwrap()
    }

    #[test]
    fn factorizations_of_small_groups() {
        let g = ctx(Builder::SemidirectCyclic { m: 5, n: 4, k: 2 });
        let l = g.lattice();
        let pairs = enumerate_factorizations(l);
        let c5 = (0..l.len()).find(|&x| l.order_of(x) == 5).unwrap();
        assert!(pairs
            .iter()
            .any(|p| p.a == c5 && l.order_of(p.b) == 4 && p.order_meet == 1));
        for x in 0..l.len() {
            assert!(pairs.iter().any(|p| p.a == l.top() && p.b == x));
        }
        let s3 = ctx(Builder::Symmetric(3));
        let l = s3.lattice();
        assert!(enumerate_factorizations(l)
            .iter()
            .any(|p| p.order_a == 3 && p.order_b == 2));
    }

    #[test]
    fn verdict_logic() {
        assert_eq!(Verdict::of(false, false), Verdict::Vacuous);
        assert_eq!(Verdict::of(false, true), Verdict::Vacuous);
        assert_eq!(Verdict::of(true, true), Verdict::Confirmed);
        assert_eq!(Verdict::of(true, false), Verdict::Counterexample);
    }

    #[test]
    fn selection_parsing() {
        assert_eq!(Suite::parse_selection("T1").unwrap(), vec!["T1(1)", "T1(2)"]);
        assert_eq!(Suite::parse_selection("c-b2, t1(2)").unwrap(), vec!["T1(2)", "C-B2"]);
        assert!(Suite::parse_selection("T9").is_err());
        assert_eq!(Suite::parse_selection("").unwrap(), Vec::<&str>::new());
    }

    #[test]
    fn f5_negative_controls() {
        let g = ctx(Builder::SemidirectCyclic { m: 5, n: 4, k: 2 });
        let checks = Suite::all_checks();
        let t = verify_group(&g, &checks, true).unwrap();
        for s in &t {
            assert!(s.counterexamples.is_empty(), "{}: {:?}", s.id, s.counterexamples);
        }
        // the pair (C5, C4) is vacuous in the theorem suites
        for id in ["T1(1)", "T1(2)", "T2(1)", "T2(2)", "C-A1"] {
            let rec = find(&t, id)
                .records
                .iter()
                .find(|r| r.instance[0].order == 5 && r.instance[1].order == 4)
                .unwrap();
            assert_eq!(rec.verdict, Verdict::Vacuous, "{id}");
        }
        let solv = find(&t, "L-SOLV");
        assert!(solv.confirmed > 0);
    }

    #[test]
    fn a5_controls() {
        let g = ctx(Builder::Alternating(5));
        let t = verify_group(&g, &Suite::parse_selection("L-SOLV,L-MAXMOD").unwrap(), false).unwrap();
        let solv = find(&t, "L-SOLV");
        assert!(solv.vacuous + solv.confirmed > 0);
        assert!(solv.counterexamples.is_empty());
        assert!(find(&t, "L-MAXMOD").counterexamples.is_empty());
    }

    #[test]
    fn empty_manifest_gives_empty_report() {
        let r = run_catalog(&Manifest::empty(), &VerifyOptions::default());
        assert!(r.groups.is_empty());
        assert_eq!(r.counterexample_count(), 0);
        assert_eq!(r.manifest_hash, manifest_hash(""));
    }

    #[test]
    fn broken_entries_are_recorded() {
        let text = "C3 = cyclic(3)\nbad = semidirect(5,3,2)\nnonsense(\nS3 = symmetric(3)\n";
        let m = Manifest::parse(text, None);
        let opts = VerifyOptions {
            checks: Suite::parse_selection("L-SUB").unwrap(),
            timings: false,
            ..VerifyOptions::default()
        };
        let r = run_catalog(&m, &opts);
        assert_eq!(r.groups.len(), 4);
        assert_eq!(r.error_count(), 2);
        assert!(r.groups[0].error.is_none() && r.groups[3].error.is_none());
        assert_eq!(r.counterexample_count(), 0);
    }
}
