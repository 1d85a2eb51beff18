//! Submodularity and residual identities over small catalog groups.
//! Quotients here are rebuilt from the multiplication table, not derived.

mod common;

use std::sync::Arc;

use common::up_to;
use submod_core::formations::residual;
use submod_core::{Formation, GroupContext, GroupTable, Quotient, Subgroup};

fn fresh_quotient(ctx: &GroupContext, n: usize) -> (Quotient, Arc<GroupContext>) {
    let q = ctx.group().quotient(ctx.lattice().subgroup(n), "Q").unwrap();
    let qc = GroupContext::new(q.group.clone()).unwrap();
    (q, qc)
}

fn index(ctx: &GroupContext, s: &Subgroup) -> usize {
    ctx.lattice().index_of(s).unwrap()
}

#[test]
fn transitivity_and_intersection() {
    for f in up_to(24) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        let top = l.top();
        for k in 0..l.len() {
            for h in l.below(k).iter() {
                if ctx.submodular(h, k) && ctx.submodular(k, top) {
                    assert!(ctx.submodular(h, top), "{}: transitivity {h} < {k}", f.label);
                }
            }
            for h in 0..l.len() {
                if ctx.submodular(h, top) {
                    assert!(ctx.submodular(l.meet(h, k), k), "{}: {h} meet {k}", f.label);
                }
            }
        }
    }
}

#[test]
fn quotient_correspondence() {
    for f in up_to(24) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        let top = l.top();
        for n in l.normal_subgroups() {
            let (q, qc) = fresh_quotient(ctx, n);
            let qtop = qc.lattice().top();
            for h in 0..l.len() {
                let hn = l.join(h, n);
                let img = index(&qc, &q.image(l.subgroup(h).bits()));
                if l.leq(n, h) {
                    assert_eq!(qc.submodular(img, qtop), ctx.submodular(h, top), "{}: {h}/{n}", f.label);
                }
                if ctx.submodular(h, top) {
                    assert!(qc.submodular(img, qtop), "{}: image of {h} mod {n}", f.label);
                    assert!(ctx.submodular(hn, top), "{}: {h}{n}", f.label);
                }
            }
        }
    }
}

#[test]
fn subnormal_is_submodular() {
    for f in up_to(24) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        for h in 0..l.len() {
            let sn = ctx.group().is_subnormal(l.subgroup(h));
            assert_eq!(sn, ctx.subnormal(h));
            if sn {
                assert!(ctx.submodular(h, l.top()), "{}: {h}", f.label);
            }
        }
    }
}

fn derived(g: &GroupTable, h: &Subgroup) -> Subgroup {
    g.commutator_subgroup(h, h)
}

fn nilpotent_residual(g: &GroupTable, h: &Subgroup) -> Subgroup {
    let mut cur = h.clone();
    loop {
        let next = g.commutator_subgroup(&cur, h);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Residual of a subgroup in the parent's numbering.
fn residual_of(ctx: &GroupContext, a: usize, f: Formation) -> Subgroup {
    let g = ctx.group();
    let s = ctx.lattice().subgroup(a);
    match f {
        Formation::Ab => derived(g, s),
        Formation::N => nilpotent_residual(g, s),
        _ => {
            let sub = ctx.sub(a);
            let r = residual(&sub.context, f).unwrap().residual;
            sub.lift(sub.context.lattice().subgroup(r), ctx.order())
        }
    }
}

#[test]
fn library_residuals_match_commutator_series() {
    for f in up_to(48) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        let top = l.subgroup(l.top());
        let ab = residual(ctx, Formation::Ab).unwrap().residual;
        let n = residual(ctx, Formation::N).unwrap().residual;
        assert_eq!(l.subgroup(ab), &derived(ctx.group(), top), "{}", f.label);
        assert_eq!(l.subgroup(n), &nilpotent_residual(ctx.group(), top), "{}", f.label);
    }
}

#[test]
fn residual_commutes_with_quotients() {
    for f in up_to(24) {
        let ctx = &f.ctx;
        let l = ctx.lattice();
        for n in l.normal_subgroups() {
            let (q, qc) = fresh_quotient(ctx, n);
            for a in 0..l.len() {
                let an = index(&qc, &q.image(l.subgroup(a).bits()));
                for form in [Formation::Ab, Formation::N, Formation::A1] {
                    let lhs = residual_of(&qc, an, form);
                    let rhs = q.image(residual_of(ctx, a, form).bits());
                    assert_eq!(lhs, rhs, "{}: A = {a}, N = {n}, {form}", f.label);
                }
            }
        }
    }
}
