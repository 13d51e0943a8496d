//! Acceptance suite: every criterion runs at its stated tolerance on the
//! default configuration and prints one PASS/FAIL line.

use std::time::Instant;

use b1lab::harness::{run_suite, Report};
use b1lab::{Config, Lab};

const CRITERIA: &[(&str, &str, &[&str])] = &[
    ("C1", "quadrature moments", &["quad"]),
    ("C2", "coefficient bound by π‖f‖_{H¹}", &["lemma1"]),
    ("C3", "‖f‖_{H¹} ≤ ‖f‖_{𝒟¹}, sharp at z", &["lemma3", "remark1"]),
    ("C4", "‖f‖_∞ ≤ π‖f‖_{S¹} ≤ π‖f‖_{B₁}", &["lemma4", "remark2"]),
    ("C5", "T_g norm sandwich", &["thm1"]),
    ("C6", "product constant 2π+2 and oracle reproduction", &["thm5"]),
    ("C7", "intertwining residual and Deddens ratios", &["thm8"]),
    ("C8", "D T_z = id and P = M_z + T_z = D M_z T_z", &["thm3", "thm4"]),
    ("C9", "dilation decay of T_g", &["thm9"]),
    ("C10", "I_g essential norm lower bound", &["thm10"]),
    ("C11", "M_z and I_z resolvent portraits", &["thm12", "thm14"]),
    ("C12", "T_g triangular, Neumann tail", &["thm13"]),
    ("C13", "Z₁ characterizations agree", &["remark3", "lemma5"]),
];

fn verdict(report: &Report, ids: &[&str]) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for id in ids {
        let r = report.check(id).expect("check ran");
        ok &= r.pass;
        parts.push(format!(
            "{id}: {:?} measured {:.6e} bound {:.6e}",
            r.outcome.verdict, r.outcome.measured, r.outcome.bound
        ));
    }
    (ok, parts.join("; "))
}

#[test]
fn acceptance() {
    let lab = Lab::new(Config::default()).unwrap();
    let ids: Vec<&str> = CRITERIA.iter().flat_map(|c| c.2.iter().copied()).collect();
    let start = Instant::now();
    let report = run_suite(&lab, &[ids.join(",")]).unwrap();
    let mut failed = Vec::new();
    for (label, title, checks) in CRITERIA {
        let (ok, detail) = verdict(&report, checks);
        println!("{label:4} {:4} {title} [{detail}]", if ok { "PASS" } else { "FAIL" });
        if !ok {
            failed.push(*label);
        }
    }
    println!("{} criteria, {} failed, {:.1} s", CRITERIA.len(), failed.len(), start.elapsed().as_secs_f64());
    assert!(failed.is_empty(), "failed: {failed:?}");
}
