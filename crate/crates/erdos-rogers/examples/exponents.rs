//! Exact exponent arithmetic: pair classification, the rational exponents
//! `alpha`, `delta`, `eta`, special-case closed forms, the rounded table,
//! and deriving desk-scale construction parameters from them.
//!
//! Run with `cargo run --example exponents`.

use erdos_rogers::exponents::{
    alpha_closed_form_t_plus_2, alpha_closed_form_t_plus_3, classify_pair, exponent_table,
    exponents, validate_log_constants, ConstructionParams, LogConstants, DEFAULT_TABLE_PAIRS,
};
use erdos_rogers::ratio::{format_ratio, frac, int, round3_half_away};

fn main() {
    // Every valid pair (s >= 3, s+2 <= t <= 2s-1) is either "regular" or
    // "exceptional"; the regime decides which formula produces alpha.
    for (s, t) in [(3, 5), (11, 14), (10, 14), (12, 20)] {
        let pair = classify_pair(s, t).expect("chosen pairs are valid");
        let e = exponents(pair);
        println!(
            "(s={s:2}, t={t:2})  {}  alpha = {:<9} delta = {:<9} eta = {}",
            if pair.is_regular() {
                "regular    "
            } else {
                "exceptional"
            },
            format_ratio(e.alpha()),
            format_ratio(e.delta()),
            format_ratio(e.eta()),
        );
    }

    // Out-of-range pairs are rejected with the valid ranges in the message.
    let err = classify_pair(3, 9).unwrap_err();
    println!("\nclassify_pair(3, 9) -> {err}");

    // The t = s+2 and t = s+3 closed forms agree with the general formula.
    let s = 7;
    let closed = alpha_closed_form_t_plus_2(s).unwrap();
    let general = exponents(classify_pair(s, s + 2).unwrap());
    assert_eq!(&closed, general.alpha());
    println!(
        "\nclosed form at (s, s+2), s = {s}: alpha = {} (matches the general formula)",
        format_ratio(&closed)
    );
    let closed = alpha_closed_form_t_plus_3(s).unwrap();
    let general = exponents(classify_pair(s, s + 3).unwrap());
    assert_eq!(&closed, general.alpha());
    println!(
        "closed form at (s, s+3), s = {s}: alpha = {} (matches the general formula)",
        format_ratio(&closed)
    );

    // The comparison table rounds alpha to three decimals, halves away
    // from zero. Rounding is the only approximation anywhere in this layer.
    println!("\n s   t  alpha (3 dp)");
    for row in exponent_table(&DEFAULT_TABLE_PAIRS).unwrap() {
        println!("{:>2}  {:>2}  {}", row.s, row.t, row.alpha_3dp);
    }
    println!(
        "(exact alpha at (4,6) is {} = {})",
        format_ratio(exponents(classify_pair(4, 6).unwrap()).alpha()),
        round3_half_away(exponents(classify_pair(4, 6).unwrap()).alpha()),
    );

    // Log-correction constants must satisfy three explicit constraints.
    let pair = classify_pair(3, 5).unwrap();
    let constants = LogConstants {
        c1: int(1),
        c2: int(11 * 625), // 11 t^4 at t = 5
        c3: int(50_000),
    };
    let report = validate_log_constants(pair, &constants);
    println!();
    for check in &report.constraints {
        println!(
            "constraint {:<28} holds = {:<5} slack = {}",
            check.name,
            check.holds,
            format_ratio(&check.slack)
        );
    }

    // From (n, c1, c2, c3) the asymptotic recipes produce concrete
    // parameters; gamma is stored as the exact rational of the computed
    // float, so later arithmetic stays exact. Constants that satisfy the
    // formal constraints above only make sense as n grows without bound
    // (at n = 3000 their log powers overflow), so desk-scale derivations
    // use small constants instead.
    let desk = LogConstants {
        c1: frac(1, 2),
        c2: int(2),
        c3: int(1),
    };
    let params = ConstructionParams::from_asymptotics(pair, 3000, desk).unwrap();
    println!(
        "\nderived parameters at n = 3000: m = {}, gamma = {}, a = {}",
        params.m,
        format_ratio(&params.gamma),
        params.a
    );

    // Direct parameters skip the recipes entirely.
    let direct = ConstructionParams::direct(3000, 255, frac(67, 5000), 40).unwrap();
    println!(
        "direct parameters:              m = {}, gamma = {}, a = {}",
        direct.m,
        format_ratio(&direct.gamma),
        direct.a
    );
}
