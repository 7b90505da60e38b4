//! Exhaustive machine checks of the exact inequalities behind the
//! construction: extremal scheme values, enumerated class values, the
//! pair-block threshold biconditional, the six auxiliary inequalities, the
//! small-`t` two-family case sweep (exact and float margins), and the
//! large-`t` block-shape claim.
//!
//! Every check returns a [`LemmaReport`]; `Verified` means the full declared
//! parameter range was exhausted, `Failed` carries at least one concrete
//! witness tuple.

use std::collections::HashSet;

use num::rational::BigRational;
use serde::Serialize;

use crate::error::Result;
use crate::exponents::{classify_pair, exponents, valid_pairs};
use crate::ratio::{format_ratio, frac, int};
use crate::schemes::{
    enumerate_schemes, overlapping_blocks_scheme, scheme_value, single_block_scheme,
};

/// Outcome of one lemma check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LemmaStatus {
    Verified,
    Failed,
}

/// One enumerated scheme class with its exact value, for census output and
/// maximizer reporting. Size-2 blocks are implied; only larger blocks are
/// listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchemeClassSummary {
    pub class: usize,
    pub b: usize,
    pub l: usize,
    pub value: String,
    pub large_blocks: Vec<Vec<u32>>,
}

/// Result of checking one lemma over a declared parameter range.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub range: String,
    pub status: LemmaStatus,
    /// Failing parameter tuples; empty exactly when status is `Verified`.
    pub witnesses: Vec<String>,
    /// Classes attaining the maximum value (value-based checks only).
    pub maximizers: Vec<SchemeClassSummary>,
}

impl LemmaReport {
    fn new(
        lemma: &str,
        range: String,
        witnesses: Vec<String>,
        maximizers: Vec<SchemeClassSummary>,
    ) -> Self {
        let status = if witnesses.is_empty() {
            LemmaStatus::Verified
        } else {
            LemmaStatus::Failed
        };
        LemmaReport {
            lemma: lemma.to_string(),
            range,
            status,
            witnesses,
            maximizers,
        }
    }

    pub fn verified(&self) -> bool {
        self.status == LemmaStatus::Verified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Checks the two extremal schemes for every valid pair with `s <= s_max`:
/// in the regular regime the single-block scheme has value exactly 0 and the
/// overlapping-blocks scheme value <= 0; in the exceptional regime the roles
/// swap.
pub fn verify_extremal(s_max: u32) -> LemmaReport {
    assert!(s_max >= 3, "need s_max >= 3");
    let zero = int(0);
    let mut witnesses = Vec::new();
    for pair in valid_pairs(s_max) {
        let e = exponents(pair);
        let v1 =
            scheme_value(&single_block_scheme(pair), &e).expect("scheme built from the same pair");
        let v2 = scheme_value(&overlapping_blocks_scheme(pair), &e)
            .expect("scheme built from the same pair");
        let (s, t) = (pair.s(), pair.t());
        let (exact_zero, nonpositive, zero_name, np_name) = if pair.is_regular() {
            (&v1, &v2, "single-block", "overlapping-blocks")
        } else {
            (&v2, &v1, "overlapping-blocks", "single-block")
        };
        if *exact_zero != zero {
            witnesses.push(format!(
                "({s},{t}): {zero_name} value {} != 0",
                format_ratio(exact_zero)
            ));
        }
        if *nonpositive > zero {
            witnesses.push(format!(
                "({s},{t}): {np_name} value {} > 0",
                format_ratio(nonpositive)
            ));
        }
    }
    LemmaReport::new(
        "extremal",
        format!("valid pairs with 3 <= s <= {s_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Exact values of every scheme class at `(s, t)`, in enumeration order.
pub fn scheme_class_table(s: u32, t: u32) -> Result<Vec<SchemeClassSummary>> {
    let pair = classify_pair(s as i64, t as i64)?;
    let e = exponents(pair);
    let classes = enumerate_schemes(s, t)?;
    Ok(classes
        .iter()
        .enumerate()
        .map(|(class, q)| {
            let value = scheme_value(q, &e).expect("enumerated at the same pair");
            SchemeClassSummary {
                class,
                b: q.b(),
                l: q.l(),
                value: format_ratio(&value),
                large_blocks: q.large_blocks().cloned().collect(),
            }
        })
        .collect())
}

/// Enumerates every scheme class at `(s, t)` and checks that all values are
/// <= 0. The maximizing classes are reported either way.
pub fn verify_negscheme(s: u32, t: u32) -> Result<LemmaReport> {
    let pair = classify_pair(s as i64, t as i64)?;
    let e = exponents(pair);
    let classes = enumerate_schemes(s, t)?;
    let zero = int(0);
    let mut witnesses = Vec::new();
    let mut summaries = Vec::new();
    let mut values = Vec::new();
    for (class, q) in classes.iter().enumerate() {
        let value = scheme_value(q, &e).expect("enumerated at the same pair");
        if value > zero {
            witnesses.push(format!(
                "class {class} (b={}, l={}) has value {} > 0",
                q.b(),
                q.l(),
                format_ratio(&value)
            ));
        }
        summaries.push(SchemeClassSummary {
            class,
            b: q.b(),
            l: q.l(),
            value: format_ratio(&value),
            large_blocks: q.large_blocks().cloned().collect(),
        });
        values.push(value);
    }
    let max = values.iter().max().cloned().expect("at least one class");
    let maximizers = summaries
        .into_iter()
        .zip(&values)
        .filter_map(|(summary, v)| (*v == max).then_some(summary))
        .collect();
    Ok(LemmaReport::new(
        "negscheme",
        format!("({s},{t})"),
        witnesses,
        maximizers,
    ))
}

/// Checks, for every valid pair with `s <= s_max` and every `2 < k <= k_max`,
/// that the strict inequality `C(k,2)(delta + 2(alpha-1)) > delta + k(alpha-1)`
/// holds exactly when `k eta < delta`.
pub fn verify_app1(s_max: u32, k_max: u32) -> LemmaReport {
    assert!(k_max > 2, "need k_max > 2");
    let mut witnesses = Vec::new();
    for pair in valid_pairs(s_max) {
        let e = exponents(pair);
        let alpha_m1 = e.alpha() - int(1);
        let pair_term = e.delta() + int(2) * &alpha_m1;
        for k in 3..=k_max as i64 {
            let lhs = frac(k * (k - 1), 2) * &pair_term > e.delta() + int(k) * &alpha_m1;
            let rhs = int(k) * e.eta() < *e.delta();
            if lhs != rhs {
                witnesses.push(format!(
                    "({},{}), k={k}: block-merge gain {} but k eta < delta {}",
                    pair.s(),
                    pair.t(),
                    lhs,
                    rhs
                ));
            }
        }
    }
    LemmaReport::new(
        "app1",
        format!("valid pairs with s <= {s_max}, 2 < k <= {k_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Checks the six auxiliary inequalities for every valid pair with
/// `s <= s_max`, evaluating the original statements in exact arithmetic:
/// (a) `(t-s+1) eta < delta` iff the pair is regular;
/// (b) `(t-s) eta < delta` unless `t = 2s-1` (no assertion there);
/// (c) `(t-s-1) eta < delta`;
/// (d) `(t-1) eta > 2 delta`;
/// (e) `delta > 2/3`;
/// (f) `1 + 2(delta/((t-1)/2) + (alpha-1)) - eta < 2 delta / t`, with
/// `(t-1)/2` an exact rational for every parity.
pub fn verify_app2(s_max: u32) -> LemmaReport {
    assert!(s_max >= 3, "need s_max >= 3");
    let mut witnesses = Vec::new();
    for pair in valid_pairs(s_max) {
        let e = exponents(pair);
        let (s, t) = (pair.s() as i64, pair.t() as i64);
        let delta = e.delta().clone();
        let eta = e.eta().clone();
        let alpha = e.alpha().clone();
        let mut fail = |part: &str, detail: String| {
            witnesses.push(format!("({s},{t}) part ({part}): {detail}"));
        };

        let a_holds = int(t - s + 1) * &eta < delta;
        if a_holds != pair.is_regular() {
            fail(
                "a",
                format!(
                    "(t-s+1) eta < delta is {a_holds} but pair regularity is {}",
                    pair.is_regular()
                ),
            );
        }
        if t != 2 * s - 1 && int(t - s) * &eta >= delta {
            fail("b", "(t-s) eta >= delta".to_string());
        }
        if int(t - s - 1) * &eta >= delta {
            fail("c", "(t-s-1) eta >= delta".to_string());
        }
        if int(t - 1) * &eta <= int(2) * &delta {
            fail("d", "(t-1) eta <= 2 delta".to_string());
        }
        if delta <= frac(2, 3) {
            fail("e", format!("delta = {} <= 2/3", format_ratio(&delta)));
        }
        let lhs_f = int(1) + int(2) * (&delta / frac(t - 1, 2) + (&alpha - int(1))) - &eta;
        if lhs_f >= int(2) * &delta / int(t) {
            fail(
                "f",
                format!("lhs = {} >= 2 delta / t", format_ratio(&lhs_f)),
            );
        }
    }
    LemmaReport::new(
        "app2",
        format!("valid pairs with s <= {s_max}"),
        witnesses,
        Vec::new(),
    )
}

/// Arithmetic mode for the small-`t` case sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginMode {
    /// Exact rationals with the margin as the rational 1/1000.
    Exact,
    /// IEEE doubles with the margin 1e-3, reproducing the original
    /// floating-point behaviour of the case-check program.
    Float,
}

/// One decision of the small-`t` case sweep. Family 1 is the block shape
/// `{2^a, R^j}` (a pair blocks and j blocks of size R at one node); family 2
/// is `{a+1, R^j}` (one block of size a+1 and j blocks of size R).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseDecision {
    pub t: u32,
    pub s: u32,
    pub j: u32,
    pub family: u8,
    pub a: i64,
    /// Whether the family's guard admitted this shape.
    pub checked: bool,
    /// Whether the local value exceeded the margin bound (a failure).
    pub bad: bool,
}

/// Runs the small-`t` sweep and returns every individual decision:
/// for t = 5..13, s = floor(t/2)+1 .. t-2 (all exceptional pairs), with
/// R = floor((t-1)/2) and a = (t-1) - j(R-1) for j = 0..4, both block-shape
/// families are tested against the bound `2 delta / t` minus the margin.
pub fn localneg_case_decisions(mode: MarginMode) -> Vec<CaseDecision> {
    match mode {
        MarginMode::Exact => exact_case_decisions(),
        MarginMode::Float => float_case_decisions(),
    }
}

// Guards are kept in the reference sweep's literal shape (`2 <= a + 1 <= R`)
// so the exact and float passes stay comparable with it line by line.
#[allow(clippy::int_plus_one)]
fn exact_case_decisions() -> Vec<CaseDecision> {
    let margin = frac(1, 1000);
    let mut out = Vec::new();
    for t in 5i64..=13 {
        for s in (t / 2 + 1)..=(t - 2) {
            let pair = classify_pair(s, t).expect("sweep range is valid");
            debug_assert!(
                !pair.is_regular(),
                "the sweep covers exceptional pairs only"
            );
            let e = exponents(pair);
            let r = (t - 1) / 2;
            let bound = int(2) * e.delta() / int(t) - &margin;
            let per_r = e.delta() / int(r) + (e.alpha() - int(1));
            for j in 0i64..=4 {
                let a = (t - 1) - j * (r - 1);
                let mut push = |family: u8, checked: bool, v: Option<BigRational>| {
                    let bad = checked && v.expect("value computed when checked") > bound;
                    out.push(CaseDecision {
                        t: t as u32,
                        s: s as u32,
                        j: j as u32,
                        family,
                        a,
                        checked,
                        bad,
                    });
                };
                let f1_checked = 0 <= a;
                let v1 = f1_checked.then(|| {
                    int(1) + int(a) * (e.delta() / int(2) + (e.alpha() - int(1))) + int(j) * &per_r
                });
                push(1, f1_checked, v1);
                let f2_checked = 2 <= a + 1 && a + 1 <= r;
                let v2 = f2_checked.then(|| {
                    int(1) + (e.delta() / int(a + 1) + (e.alpha() - int(1))) + int(j) * &per_r
                });
                push(2, f2_checked, v2);
            }
        }
    }
    out
}

#[allow(clippy::int_plus_one)]
fn float_case_decisions() -> Vec<CaseDecision> {
    let mut out = Vec::new();
    for t in 5i64..=13 {
        for s in (t / 2 + 1)..=(t - 2) {
            let alpha = (((s - 2) * (t - s) * (s - 1) + s - 1) as f64)
                / (((2 * s - 3) * (t - s) * (s - 1) + 2 * s - t) as f64);
            let delta = s as f64 - ((2 * s - 1) as f64) * alpha;
            let r = (t - 1) / 2;
            let bound = 2.0 * delta / (t as f64) - 1e-3;
            for j in 0i64..=4 {
                let a = (t - 1) - j * (r - 1);
                let f1_checked = 0 <= a;
                let bad1 = f1_checked && {
                    let v = 1.0
                        + (a as f64) * (delta / 2.0 + alpha - 1.0)
                        + (j as f64) * (delta / (r as f64) + alpha - 1.0);
                    v > bound
                };
                out.push(CaseDecision {
                    t: t as u32,
                    s: s as u32,
                    j: j as u32,
                    family: 1,
                    a,
                    checked: f1_checked,
                    bad: bad1,
                });
                let f2_checked = 2 <= a + 1 && a + 1 <= r;
                let bad2 = f2_checked && {
                    let v = 1.0
                        + (delta / ((a + 1) as f64) + alpha - 1.0)
                        + (j as f64) * (delta / (r as f64) + alpha - 1.0);
                    v > bound
                };
                out.push(CaseDecision {
                    t: t as u32,
                    s: s as u32,
                    j: j as u32,
                    family: 2,
                    a,
                    checked: f2_checked,
                    bad: bad2,
                });
            }
        }
    }
    out
}

/// The small-`t` sweep as a lemma report, in either arithmetic mode.
pub fn localneg_report(mode: MarginMode) -> LemmaReport {
    let margin = match mode {
        MarginMode::Exact => "1/1000",
        MarginMode::Float => "1e-3 (float)",
    };
    let witnesses = localneg_case_decisions(mode)
        .into_iter()
        .filter(|d| d.bad)
        .map(|d| {
            format!(
                "t={}, s={}, j={}, family {}: value exceeds 2 delta/t - {margin}",
                d.t, d.s, d.j, d.family
            )
        })
        .collect();
    LemmaReport::new(
        "localneg",
        format!("t=5..13, s=floor(t/2)+1..t-2, j=0..4, margin {margin}"),
        witnesses,
        Vec::new(),
    )
}

/// The small-`t` sweep as a lemma report (exact margins).
pub fn localneg_casecheck() -> LemmaReport {
    localneg_report(MarginMode::Exact)
}

/// For every valid pair with `t_min <= t <= t_max` (t >= 14), enumerates all
/// block-size tuples (q_1..q_w) with 2 <= q_h <= R = floor((t-1)/2), sum
/// q_h = t+w-1, and either all-but-one entry equal to R or all entries in
/// {2, R}; checks the strict bound `1 + sum(delta/q_h + alpha - 1) < 2
/// delta / t` exactly.
pub fn verify_claim2_large_t(t_min: u32, t_max: u32) -> LemmaReport {
    assert!(t_min >= 14, "the large-t claim starts at t = 14");
    assert!(t_min <= t_max, "empty range");
    let mut witnesses = Vec::new();
    for t in t_min as i64..=t_max as i64 {
        // Valid s range: s >= ceil((t+1)/2) so that t <= 2s-1, s <= t-2.
        for s in (t + 2) / 2..=(t - 2) {
            let pair = classify_pair(s, t).expect("range construction is valid");
            let e = exponents(pair);
            let r = (t - 1) / 2;
            let bound = int(2) * e.delta() / int(t);
            let mut seen: HashSet<Vec<i64>> = HashSet::new();
            let mut check = |tuple: Vec<i64>, witnesses: &mut Vec<String>| {
                debug_assert!(tuple.iter().all(|&q| (2..=r).contains(&q)));
                debug_assert_eq!(tuple.iter().sum::<i64>(), t + tuple.len() as i64 - 1);
                if !seen.insert(tuple.clone()) {
                    return;
                }
                let mut v = int(1);
                for &q in &tuple {
                    v += e.delta() / int(q) + (e.alpha() - int(1));
                }
                if v >= bound {
                    witnesses.push(format!(
                        "({s},{t}): tuple {tuple:?} gives value {} >= 2 delta / t",
                        format_ratio(&v)
                    ));
                }
            };
            // All entries in {2, R}: j blocks of size R and a = t-1-j(R-1)
            // blocks of size 2.
            for j in 0.. {
                let a = (t - 1) - j * (r - 1);
                if a < 0 {
                    break;
                }
                let mut tuple = vec![2i64; a as usize];
                tuple.extend(std::iter::repeat_n(r, j as usize));
                tuple.sort_unstable();
                check(tuple, &mut witnesses);
            }
            // All but one entry equal to R: w-1 blocks of size R and one of
            // size x = t + (w-1)(1-R).
            for wm1 in 0.. {
                let x = t + wm1 * (1 - r);
                if x < 2 {
                    break;
                }
                if x > r {
                    continue;
                }
                let mut tuple = vec![x];
                tuple.extend(std::iter::repeat_n(r, wm1 as usize));
                tuple.sort_unstable();
                check(tuple, &mut witnesses);
            }
        }
    }
    LemmaReport::new(
        "claim2",
        format!("valid pairs with {t_min} <= t <= {t_max}"),
        witnesses,
        Vec::new(),
    )
}
