//! Acceptance run: one PASS/FAIL line per criterion, then a single assert.
//! `cargo test -p submod-cli --test acceptance -- --nocapture` shows the lines.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::{mask, up_to, Brute};
use serde_json::Value;
use submod_core::formations::{in_class, residual};
use submod_core::verifier::verify_group;
use submod_core::{enumerate_factorizations, Formation, GroupContext};

fn submod(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_submod"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

struct Outcome {
    lines: Vec<String>,
    failed: usize,
}

impl Outcome {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        let line = format!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        println!("{line}");
        self.lines.push(line);
        self.failed += usize::from(!ok);
    }
}

fn f5_spot_suite() -> (bool, String) {
    let start = Instant::now();
    let g = submod_core::catalog::resolve("F5").unwrap();
    let ctx = GroupContext::new(g).unwrap();
    let l = ctx.lattice();
    let top = l.top();
    let of_order = |n| (0..l.len()).find(|&i| l.order_of(i) == n).unwrap();
    let (c4, c5) = (of_order(4), of_order(5));
    let res = residual(&ctx, Formation::A1).unwrap().residual;
    let has = |f| in_class(&ctx, f);
    let checks = [
        ("C4 not submodular", !ctx.submodular(c4, top)),
        ("C5 P-subnormal", ctx.p_subnormal(c5, top)),
        ("C4 P-subnormal", ctx.p_subnormal(c4, top)),
        ("|F5^A1| = 10", l.order_of(res) == 10),
        ("F5^A1 non-nilpotent", !l.is_nilpotent_subgroup(res)),
        ("F5 in NA", has(Formation::NA)),
        ("F5 not in NA1", !has(Formation::NA1)),
        ("F5 in A", has(Formation::A)),
        ("F5 not in Z", !has(Formation::Z)),
        ("F5 not in C", !has(Formation::C)),
    ];
    let elapsed = start.elapsed();
    let bad: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    // the same facts through the binary
    let cli_ok = submod(&["check", "F5", "submodular", "--gens", "5"]).0 == 1
        && submod(&["check", "F5", "p-subnormal", "--gens", "5"]).0 == 0
        && submod(&["check", "F5", "class", "--formation", "NA1"]).0 == 1;
    let ok = bad.is_empty() && cli_ok && elapsed < Duration::from_secs(1);
    (ok, format!("{} facts, failing {bad:?}, cli {cli_ok}, {elapsed:?}", checks.len()))
}

fn totals(report: &Value, id: &str) -> (u64, u64) {
    let mut confirmed = 0;
    let mut cex = 0;
    for g in report["groups"].as_array().unwrap() {
        for s in g["suites"].as_array().unwrap() {
            if s["id"] == id {
                confirmed += s["confirmed"].as_u64().unwrap();
                cex += s["counterexamples"].as_array().unwrap().len() as u64;
            }
        }
    }
    (confirmed, cex)
}

fn oracle_equivalence() -> (bool, String) {
    let (mut lattice_ok, mut submod_ok, mut fact_ok, mut groups) = (true, true, true, 0);
    for f in up_to(24) {
        groups += 1;
        let ctx = &f.ctx;
        let l = ctx.lattice();
        let b = Brute::new(ctx.group());
        let modular = b.modular_table();
        let map: Vec<usize> = match (0..l.len()).map(|i| b.index.get(&mask(l.subgroup(i))).copied()).collect() {
            Some(m) if b.len() == l.len() => m,
            _ => {
                lattice_ok = false;
                continue;
            }
        };
        for i in 0..l.len() {
            for j in 0..l.len() {
                lattice_ok &= map[l.meet(i, j)] == b.meet(map[i], map[j]) && map[l.join(i, j)] == b.join(map[i], map[j]);
                if l.leq(i, j) {
                    submod_ok &= ctx.submodular(i, j) == b.submodular(map[i], map[j], &modular);
                }
            }
        }
        let g = ctx.group();
        let full = (1u128 << g.order()) - 1;
        let pairs: std::collections::HashSet<(usize, usize)> =
            enumerate_factorizations(l).iter().map(|p| (p.a, p.b)).collect();
        for x in 0..l.len() {
            for y in 0..l.len() {
                let prod = l.subgroup(x).iter().fold(0u128, |m, s| {
                    l.subgroup(y).iter().fold(m, |m, t| m | 1u128 << g.mul(s, t))
                });
                fact_ok &= (prod == full) == pairs.contains(&(x, y));
            }
        }
    }
    (
        lattice_ok && submod_ok && fact_ok,
        format!("{groups} groups; chains {submod_ok}, subset closure {lattice_ok}, set products {fact_ok}"),
    )
}

fn lemma_properties() -> (bool, String) {
    let ids = ["L-SUB(1)", "L-SUB(2)", "L-SUB(3)", "L-SUB(4)", "L-SUB(5)", "L-RES"];
    let mut confirmed = [0usize; 6];
    let mut cex = 0;
    for f in up_to(24) {
        for t in verify_group(&f.ctx, &ids, false).unwrap() {
            let k = ids.iter().position(|&i| i == t.id).unwrap();
            confirmed[k] += t.confirmed;
            cex += t.counterexamples.len();
        }
    }
    let ok = cex == 0 && confirmed.iter().all(|&c| c > 0);
    let detail: Vec<String> = ids.iter().zip(confirmed).map(|(i, c)| format!("{i} {c}")).collect();
    (ok, format!("{} confirmed, {cex} counterexamples", detail.join(", ")))
}

#[test]
fn acceptance() {
    let mut out = Outcome { lines: Vec::new(), failed: 0 };

    let (ok, detail) = f5_spot_suite();
    out.record("1 F5 spot suite", ok, detail);

    let args = ["verify", "--default", "--all-suites", "--no-timings"];
    let start = Instant::now();
    let (code, first) = submod(&args);
    let elapsed = start.elapsed();
    let report: Value = serde_json::from_slice(&first).expect("verify prints json");
    let groups = report["groups"].as_array().unwrap();
    let small = groups.iter().filter(|g| g["order"].as_u64().unwrap() <= 120 && g.get("error").is_none()).count();
    let cex: usize = groups
        .iter()
        .flat_map(|g| g["suites"].as_array().unwrap())
        .map(|s| s["counterexamples"].as_array().unwrap().len())
        .sum();
    out.record(
        "2 default verification",
        code == 0 && cex == 0 && small >= 40 && elapsed < Duration::from_secs(600),
        format!("{small} groups of order <= 120, {cex} counterexamples, exit {code}, {elapsed:?}"),
    );

    let ids = ["T1(1)", "T2(2)", "P-SUP(5)", "C-B2", "L-NN(1)", "L-NN(2)"];
    let counts: Vec<(u64, u64)> = ids.iter().map(|i| totals(&report, i)).collect();
    let a5_solv = groups
        .iter()
        .find(|g| g["label"] == "A5")
        .and_then(|g| g["suites"].as_array().unwrap().iter().find(|s| s["id"] == "L-SOLV"))
        .map(|s| s["confirmed"].as_u64().unwrap() + s["vacuous"].as_u64().unwrap())
        .unwrap_or(0);
    let detail: Vec<String> = ids.iter().zip(&counts).map(|(i, c)| format!("{i} {}", c.0)).collect();
    out.record(
        "3 non-vacuity",
        counts.iter().all(|c| c.0 >= 25) && a5_solv >= 1,
        format!("{} confirmed; L-SOLV on A5 {a5_solv} records", detail.join(", ")),
    );

    let (ok, detail) = oracle_equivalence();
    out.record("4 oracle equivalence", ok, detail);

    let (ok, detail) = lemma_properties();
    out.record("5 lemma properties", ok, detail);

    let (_, second) = submod(&args);
    out.record(
        "6 determinism",
        first == second,
        format!("two runs of {} bytes, identical {}", first.len(), first == second),
    );

    assert_eq!(out.failed, 0, "failing criteria:\n{}", out.lines.join("\n"));
}
