//! The finite verification suite: every inequality the construction's
//! analysis rests on that reduces to finitely many exact comparisons,
//! checked by exhaustive search over the declared ranges.
//!
//! Run with `cargo run --example lemmas`.

use erdos_rogers::verify::{
    localneg_case_decisions, localneg_report, verify_app1, verify_app2, verify_claim2_large_t,
    verify_extremal, verify_negscheme, LemmaReport, MarginMode,
};

fn show(report: &LemmaReport) {
    println!(
        "{:<9} over {:<45} -> {}",
        report.lemma,
        report.range,
        if report.verified() {
            "verified"
        } else {
            "FAILED"
        }
    );
    for w in &report.witnesses {
        println!("    witness: {w}");
    }
    for m in &report.maximizers {
        println!(
            "    maximizer: class {} (b = {}, l = {}) value {} large blocks {:?}",
            m.class, m.b, m.l, m.value, m.large_blocks
        );
    }
}

fn main() {
    // The regime-distinguished extremal scheme has value exactly 0; the
    // other one stays <= 0.
    show(&verify_extremal(40));

    // Exhaustive: every isomorphism class of schemes has value <= 0. The
    // maximizers show which classes attain the maximum.
    for (s, t) in [(3, 5), (4, 6), (4, 7)] {
        show(&verify_negscheme(s, t).unwrap());
    }

    // The pair-blocks inequality is equivalent to k*eta < delta, for every
    // valid pair and every block count k in range.
    show(&verify_app1(40, 100));

    // Six standalone exponent inequalities per pair.
    show(&verify_app2(40));

    // The small-t case sweep runs in two arithmetic modes: exact rationals
    // with margin 1/1000, and IEEE doubles with margin 1e-3 reproducing the
    // original program's arithmetic. They make the same decisions.
    show(&localneg_report(MarginMode::Exact));
    show(&localneg_report(MarginMode::Float));
    let exact = localneg_case_decisions(MarginMode::Exact);
    let float = localneg_case_decisions(MarginMode::Float);
    assert_eq!(exact, float);
    println!(
        "    ({} individual case decisions, identical in both modes)",
        exact.len()
    );

    // For larger t the two block-shape families are checked directly.
    show(&verify_claim2_large_t(14, 20));
}
