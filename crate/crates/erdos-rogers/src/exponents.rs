//! Exact exponents for a parameter pair (s, t) and everything derived from
//! them: the regular/exceptional classification, the three rationals
//! (alpha, delta, eta), rounded comparison tables, the planning-inequality
//! checker, constraints on the logarithmic constants, and construction
//! parameters for the Monte Carlo pipeline.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratio::{self, format_ratio, int};

/// Regime of a parameter pair; selects which closed form of alpha applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regularity {
    Regular,
    Exceptional,
}

/// A validated parameter pair with its regime.
///
/// `s` is the clique size that must appear in every large subset; `t` is the
/// clique size the final graph must avoid. The supported range is `s >= 3`
/// and `s+2 <= t <= 2s-1`; construct via [`classify_pair`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    s: u32,
    t: u32,
    regularity: Regularity,
}

impl PairClass {
    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn is_regular(&self) -> bool {
        self.regularity == Regularity::Regular
    }
}

/// Validates (s, t) and determines its regime.
///
/// A pair is regular when `s >= 11` and `s+3 <= t <= 2s-4`, or when it is one
/// of (10,14) and (10,15); every other valid pair is exceptional.
pub fn classify_pair(s: i64, t: i64) -> Result<PairClass> {
    if s < 3 || t < s + 2 || t > 2 * s - 1 {
        return Err(Error::OutOfRange { s, t });
    }
    let regular =
        (s >= 11 && t >= s + 3 && t <= 2 * s - 4) || (s, t) == (10, 14) || (s, t) == (10, 15);
    Ok(PairClass {
        s: s as u32,
        t: t as u32,
        regularity: if regular {
            Regularity::Regular
        } else {
            Regularity::Exceptional
        },
    })
}

/// All valid pairs with `3 <= s <= s_max`, in (s, t) order.
pub fn valid_pairs(s_max: u32) -> Vec<PairClass> {
    let mut out = Vec::new();
    for s in 3..=s_max as i64 {
        for t in s + 2..=2 * s - 1 {
            out.push(classify_pair(s, t).expect("range construction is valid"));
        }
    }
    out
}

/// The exact exponents attached to a validated pair.
///
/// `alpha` is the exponent of the guaranteed-subset size, `delta` the
/// exponent of the number of colour classes, and `eta` the (negated)
/// contribution of a size-2 block to a scheme value. The three satisfy
/// `delta = s - (2s-1) alpha` and `eta = 2(1-alpha) - delta` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet {
    pair: PairClass,
    alpha: BigRational,
    delta: BigRational,
    eta: BigRational,
}

impl ExponentSet {
    pub fn pair(&self) -> PairClass {
        self.pair
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn delta(&self) -> &BigRational {
        &self.delta
    }

    pub fn eta(&self) -> &BigRational {
        &self.eta
    }

    /// JSON rendering with rationals as `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "s": self.pair.s(),
            "t": self.pair.t(),
            "regular": self.pair.is_regular(),
            "alpha": format_ratio(&self.alpha),
            "delta": format_ratio(&self.delta),
            "eta": format_ratio(&self.eta),
        })
    }
}

/// Computes the exact exponent triple for a validated pair.
pub fn exponents(pair: PairClass) -> ExponentSet {
    let s = BigInt::from(pair.s);
    let t = BigInt::from(pair.t);
    let one = BigInt::one();
    let two = BigInt::from(2);

    let alpha = if pair.is_regular() {
        // ((s-2)(t-s)(t+s-1) + 2t - 2s) / ((2s-3)(t-s)(t+s-1) - 2s + 4)
        let band = (&t - &s) * (&t + &s - &one);
        let numer = (&s - &two) * &band + &two * (&t - &s);
        let denom = (&two * &s - BigInt::from(3)) * &band - &two * &s + BigInt::from(4);
        BigRational::new(numer, denom)
    } else {
        // ((s-2)(t-s)(s-1) + s - 1) / ((2s-3)(t-s)(s-1) + 2s - t)
        let band = (&t - &s) * (&s - &one);
        let numer = (&s - &two) * &band + (&s - &one);
        let denom = (&two * &s - BigInt::from(3)) * &band + &two * &s - &t;
        BigRational::new(numer, denom)
    };

    let s_r = BigRational::from_integer(s);
    let delta = &s_r - (&s_r * int(2) - int(1)) * &alpha;
    let eta = (int(1) - &alpha) * int(2) - &delta;
    ExponentSet {
        pair,
        alpha,
        delta,
        eta,
    }
}

/// Closed form of alpha for t = s+2, valid for every s >= 3:
/// `1/2 - (s-2) / (8s^2 - 18s + 8)`.
pub fn alpha_closed_form_t_plus_2(s: i64) -> Result<BigRational> {
    classify_pair(s, s + 2)?;
    let denom = 8 * s * s - 18 * s + 8;
    Ok(ratio::frac(1, 2) - BigRational::new(BigInt::from(s - 2), BigInt::from(denom)))
}

/// Closed form of alpha for t = s+3, valid for every s >= 4. The numerator
/// and denominator differ between the s >= 11 regime and 4 <= s <= 10.
pub fn alpha_closed_form_t_plus_3(s: i64) -> Result<BigRational> {
    classify_pair(s, s + 3)?;
    let (numer, denom) = if s >= 11 {
        (3 * s * s - 3 * s - 3, 6 * s * s - 4 * s - 7)
    } else {
        (3 * s * s - 8 * s + 5, 6 * s * s - 14 * s + 6)
    };
    Ok(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
}

/// One row of a rounded comparison table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub s: u32,
    pub t: u32,
    /// Alpha rounded to three decimals, halves away from zero.
    pub alpha_3dp: String,
}

/// The six (s, t) pairs of the built-in comparison table.
pub const DEFAULT_TABLE_PAIRS: [(i64, i64); 6] = [(3, 5), (4, 6), (4, 7), (5, 7), (5, 8), (5, 9)];

/// Rounds alpha to three decimals for each pair. Propagates range errors.
pub fn exponent_table(pairs: &[(i64, i64)]) -> Result<Vec<TableRow>> {
    pairs
        .iter()
        .map(|&(s, t)| {
            let pair = classify_pair(s, t)?;
            let e = exponents(pair);
            Ok(TableRow {
                s: pair.s(),
                t: pair.t(),
                alpha_3dp: ratio::round3_half_away(e.alpha()),
            })
        })
        .collect()
}

/// The three positive constants controlling logarithmic corrections in the
/// asymptotic parameter choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LogConstants {
    #[serde(serialize_with = "ratio::serialize_ratio")]
    pub c1: BigRational,
    #[serde(serialize_with = "ratio::serialize_ratio")]
    pub c2: BigRational,
    #[serde(serialize_with = "ratio::serialize_ratio")]
    pub c3: BigRational,
}

/// Outcome of one constraint in [`validate_log_constants`].
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub holds: bool,
    /// Left side minus right side; positive means satisfied with room.
    #[serde(serialize_with = "ratio::serialize_ratio")]
    pub slack: BigRational,
}

/// Per-constraint report for a (pair, constants) combination.
#[derive(Debug, Clone, Serialize)]
pub struct LogConstantsReport {
    pub s: u32,
    pub t: u32,
    pub constraints: Vec<ConstraintCheck>,
}

impl LogConstantsReport {
    pub fn all_pass(&self) -> bool {
        self.constraints.iter().all(|c| c.holds)
    }
}

/// Checks the three explicit constraints the constants must satisfy:
/// `(s-1)c3 - s c2 - c1 > 6st + 9t + 1`, `c2 >= 11 t^4`, and `c2 + c3 > 3`.
pub fn validate_log_constants(pair: PairClass, c: &LogConstants) -> LogConstantsReport {
    let s = int(pair.s() as i64);
    let t = int(pair.t() as i64);

    let lhs1 = (&s - int(1)) * &c.c3 - &s * &c.c2 - &c.c1;
    let rhs1 = int(6) * &s * &t + int(9) * &t + int(1);
    let slack1 = lhs1 - rhs1;

    let t4 = ratio::pow_u32(&t, 4);
    let slack2 = &c.c2 - int(11) * t4;

    let slack3 = &c.c2 + &c.c3 - int(3);

    LogConstantsReport {
        s: pair.s(),
        t: pair.t(),
        constraints: vec![
            ConstraintCheck {
                name: "(s-1)c3 - s*c2 - c1 > 6st + 9t + 1",
                holds: slack1.is_positive(),
                slack: slack1,
            },
            ConstraintCheck {
                name: "c2 >= 11*t^4",
                holds: !slack2.is_negative(),
                slack: slack2,
            },
            ConstraintCheck {
                name: "c2 + c3 > 3",
                holds: slack3.is_positive(),
                slack: slack3,
            },
        ],
    }
}

/// Outcome of one inequality in [`check_intro_system`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IneqCheck {
    pub holds: bool,
    /// True when the inequality is tight.
    pub equality: bool,
}

/// Report for the three planning inequalities of the (3,5) construction
/// sketch, evaluated exactly at a given (delta, beta, alpha).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntroSystemReport {
    /// `delta + 3(alpha + beta - 1) >= alpha`: enough monochromatic
    /// triangles land inside every candidate subset.
    pub triangle_supply: IneqCheck,
    /// `alpha >= beta`: a class's parts must fit inside the subset scale,
    /// since edges within a part never survive.
    pub part_size: IneqCheck,
    /// `delta + 2 beta >= 5 + 6 delta + 14 (beta - 1)`: the dominant K_5
    /// population stays below the edge count.
    pub clique_budget: IneqCheck,
}

fn ineq_ge(lhs: &BigRational, rhs: &BigRational) -> IneqCheck {
    IneqCheck {
        holds: lhs >= rhs,
        equality: lhs == rhs,
    }
}

/// Evaluates the three planning inequalities exactly.
pub fn check_intro_system(
    delta: &BigRational,
    beta: &BigRational,
    alpha: &BigRational,
) -> IntroSystemReport {
    let lhs2 = delta + int(3) * (alpha + beta - int(1));
    let lhs4 = delta + int(2) * beta;
    let rhs4 = int(5) + int(6) * delta + int(14) * (beta - int(1));
    IntroSystemReport {
        triangle_supply: ineq_ge(&lhs2, alpha),
        part_size: ineq_ge(alpha, beta),
        clique_budget: ineq_ge(&lhs4, &rhs4),
    }
}

/// How a parameter set was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivation {
    Direct,
    FromAsymptotics(LogConstants),
}

/// Concrete inputs for one pipeline run.
///
/// `n` vertices, `m` colour classes, per-vertex inclusion probability
/// `gamma` in [0, 1], and target subset size `a` for the probes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub n: usize,
    pub m: usize,
    #[serde(serialize_with = "ratio::serialize_ratio")]
    pub gamma: BigRational,
    pub a: usize,
    pub derivation: Derivation,
}

impl ConstructionParams {
    /// Validates and stores directly chosen parameters.
    pub fn direct(n: usize, m: usize, gamma: BigRational, a: usize) -> Result<Self> {
        let params = ConstructionParams {
            n,
            m,
            gamma,
            a,
            derivation: Derivation::Direct,
        };
        params.validate()?;
        Ok(params)
    }

    /// Derives (m, gamma, a) from n via the asymptotic recipes
    /// `m = round(n^delta (ln n)^(-c1))`, `gamma = n^(alpha-1) (ln n)^(-c2)`,
    /// `a = round(n^alpha (ln n)^(c3))`, evaluated in f64 with natural logs
    /// and rounding halves away from zero. Gamma is then stored as the exact
    /// rational equal to the computed f64.
    pub fn from_asymptotics(pair: PairClass, n: usize, c: LogConstants) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!(
                "n = {n} too small for log-based derivation (need n >= 2)"
            )));
        }
        let e = exponents(pair);
        let nf = n as f64;
        let ln_n = nf.ln();
        let alpha = ratio::to_f64(e.alpha());
        let delta = ratio::to_f64(e.delta());
        let c1 = ratio::to_f64(&c.c1);
        let c2 = ratio::to_f64(&c.c2);
        let c3 = ratio::to_f64(&c.c3);

        let m = (nf.powf(delta) * ln_n.powf(-c1)).round();
        let gamma = nf.powf(alpha - 1.0) * ln_n.powf(-c2);
        let a = (nf.powf(alpha) * ln_n.powf(c3)).round();

        if !m.is_finite() || m < 0.0 || m > u32::MAX as f64 {
            return Err(Error::InvalidParams(format!(
                "derived m = {m} out of range"
            )));
        }
        if !a.is_finite() || a < 1.0 || a > n as f64 {
            return Err(Error::InvalidParams(format!(
                "derived a = {a} outside 1..={n}"
            )));
        }
        let params = ConstructionParams {
            n,
            m: m as usize,
            gamma: ratio::from_f64_exact(gamma)?,
            a: a as usize,
            derivation: Derivation::FromAsymptotics(c),
        };
        params.validate()?;
        Ok(params)
    }

    /// Checks the parameter invariants: `n >= 1`, `1 <= a <= n`, and
    /// `0 <= gamma <= 1`.
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidParams("n must be at least 1".into()));
        }
        if self.a < 1 || self.a > self.n {
            return Err(Error::InvalidParams(format!(
                "a = {} outside 1..={}",
                self.a, self.n
            )));
        }
        if self.gamma.is_negative() || self.gamma > BigRational::one() {
            return Err(Error::InvalidParams(format!(
                "gamma = {} outside [0, 1]",
                format_ratio(&self.gamma)
            )));
        }
        Ok(())
    }
}
