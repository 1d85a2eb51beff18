//! Catalog runs: tallies, determinism and an independent hypothesis count.

mod common;

use common::{mask, up_to, Brute};
use submod_core::catalog::Manifest;
use submod_core::report::to_json;
use submod_core::verifier::verify_group;
use submod_core::{run_catalog, Suite, Verdict, VerifyOptions};

fn small_manifest() -> Manifest {
    let text: String = up_to(24)
        .map(|f| format!("{} = {}\n", f.label, common::builder_of(&f.label)))
        .collect();
    Manifest::parse(&text, None)
}

#[test]
fn stored_records_match_tallies() {
    for f in up_to(24) {
        let tallies = verify_group(&f.ctx, &Suite::all_checks(), true).unwrap();
        for t in &tallies {
            let count = |v| t.records.iter().filter(|r| r.verdict == v).count();
            assert_eq!(count(Verdict::Vacuous), t.vacuous, "{} {}", f.label, t.id);
            assert_eq!(count(Verdict::Confirmed), t.confirmed, "{} {}", f.label, t.id);
            assert_eq!(count(Verdict::Counterexample), t.counterexamples.len());
            assert!(t.records.iter().all(|r| r.group == f.label && r.suite == t.id));
        }
        // storing everything does not change the counts
        let lean = verify_group(&f.ctx, &Suite::all_checks(), false).unwrap();
        for (a, b) in tallies.iter().zip(&lean) {
            assert_eq!((a.id.as_str(), a.vacuous, a.confirmed), (b.id.as_str(), b.vacuous, b.confirmed));
            assert!(b.records.is_empty());
        }
    }
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let m = small_manifest();
    let opts = |jobs| VerifyOptions { jobs, timings: false, ..VerifyOptions::default() };
    let a = to_json(&run_catalog(&m, &opts(1)));
    let b = to_json(&run_catalog(&m, &opts(3)));
    assert_eq!(a, b);
    let r = run_catalog(&m, &opts(0));
    assert_eq!(r.counterexample_count(), 0);
    assert_eq!(r.error_count(), 0);
    assert_eq!(r.manifest_hash.len(), 64);
}

fn nilpotent(b: &Brute, h: usize) -> bool {
    // nilpotent iff for each prime the p-elements form a subgroup of p-power order
    let m = b.subs[h];
    let n = b.order(h);
    (2..=n).filter(|&p| common::is_prime(p) && n.is_multiple_of(p)).all(|p| {
        let mut pp = 1;
        while n.is_multiple_of(pp * p) {
            pp *= p;
        }
        let count = common::elements(m)
            .filter(|&x| {
                let o = b.g.element_order(x);
                pp % o == 0
            })
            .count();
        count == pp
    })
}

#[test]
fn nilpotent_factorisation_count_matches_brute_force() {
    for f in up_to(24) {
        let b = Brute::new(f.ctx.group());
        let modular = b.modular_table();
        let top = b.index[&mask(f.ctx.lattice().subgroup(f.ctx.top()))];
        let full = b.subs[top];
        let good: Vec<bool> = (0..b.len())
            .map(|h| nilpotent(&b, h) && b.submodular(h, top, &modular))
            .collect();
        let mut expected = 0;
        for x in 0..b.len() {
            for y in 0..b.len() {
                let mut prod = 0u128;
                for s in common::elements(b.subs[x]) {
                    for t in common::elements(b.subs[y]) {
                        prod |= 1u128 << b.g.mul(s, t);
                    }
                }
                if prod == full && good[x] && good[y] {
                    expected += 1;
                }
            }
        }
        let t = verify_group(&f.ctx, &["C-B2"], false).unwrap();
        assert_eq!(t[0].confirmed + t[0].counterexamples.len(), expected, "{}", f.label);
    }
}
