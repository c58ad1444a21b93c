//! Plain-text reports.

use rqn::catalog::{FixtureOutcome, Role};
use rqn::equivalence::Witness;
use rqn::exact_arith::{Matrix, Poly};
use rqn::structures::VerificationReport;

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn matrix_rows(m: &Matrix<Poly>) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

/// One line per condition; failing ones are followed by their residuals.
pub fn report(r: &VerificationReport<Poly>) -> String {
    let mut out = String::new();
    for e in &r.entries {
        out.push_str(&format!("{} {}\n", verdict(e.pass), e.name));
        if !e.pass {
            let j = e.to_json();
            for res in j["failing_residuals"].as_array().into_iter().flatten() {
                out.push_str(&format!("  residual {}\n", res));
            }
        }
    }
    out.push_str(&format!("overall {}\n", verdict(r.pass)));
    out
}

pub fn fixtures(outcomes: &[FixtureOutcome]) -> String {
    let mut out = String::new();
    let mut differing = 0;
    for o in outcomes {
        let tag = if o.matches_expected() { "ok  " } else { "DIFF" };
        out.push_str(&format!("{tag} {:<20} {}\n", o.id, o.provenance));
        if !o.matches_expected() {
            differing += 1;
            let failed: Vec<&str> =
                o.checks.iter().filter(|c| !c.pass && c.role != Role::Info).map(|c| c.name.as_str()).collect();
            out.push_str(&format!(
                "     claimed {}, computed {}; failing: {}\n",
                verdict(o.expected),
                verdict(o.pass),
                if failed.is_empty() { "none".to_string() } else { failed.join(", ") }
            ));
            if let Some(n) = &o.note {
                out.push_str(&format!("     note: {n}\n"));
            }
        }
    }
    out.push_str(&format!(
        "{} fixtures, {} reproduced, {} differ\n",
        outcomes.len(),
        outcomes.len() - differing,
        differing
    ));
    out
}

pub fn assignment(w: &Witness) -> String {
    let parts: Vec<String> = w.assignment.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    format!("{}: {}", w.family, parts.join(", "))
}
