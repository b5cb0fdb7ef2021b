//! Congruence checks on rational sequences: condition (b), a_{np} = a_n
//! mod p Z_(p); condition (c), the Gauss property a_{np} - a_n in n p Z_(p);
//! the Wilson factorization of (mp)!; rescaling; and per-prime surveys.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, primes_up_to, rat_valuation, require_prime};
use crate::error::{Error, Result};
use crate::seqcore::{term_mod_prime_power, RationalSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Condition {
    B,
    C,
}

impl Condition {
    /// Required valuation of a_{np} - a_n at index n.
    fn required(self, n: u64, p: u64) -> i64 {
        match self {
            Condition::B => 1,
            Condition::C => 1 + vp_u64(n, p),
        }
    }
}

fn vp_u64(mut n: u64, p: u64) -> i64 {
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The smallest failing index, with the valuation found and the one required.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: u64,
    pub val: i64,
    pub required: i64,
}

/// Per-prime verdict for one condition, bounded by n_max and re-checkable
/// from the witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceReport {
    pub seq: String,
    pub p: u64,
    pub n_max: u64,
    pub condition: Condition,
    pub status: Status,
    pub witness: Option<Witness>,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Which arithmetic backs a check. Exact big integers are authoritative;
/// the mod-p^k path through Legendre valuations only exists for
/// factorial-ratio sequences and is cross-checked in tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Exact,
    Fast,
    Auto,
}

pub fn check_condition_b(seq: &RationalSequence, p: u64, n_max: u64) -> Result<CongruenceReport> {
    check_condition(seq, p, n_max, Condition::B, EvalPath::Auto)
}

pub fn check_condition_c(seq: &RationalSequence, p: u64, n_max: u64) -> Result<CongruenceReport> {
    check_condition(seq, p, n_max, Condition::C, EvalPath::Auto)
}

pub fn check_condition(
    seq: &RationalSequence,
    p: u64,
    n_max: u64,
    condition: Condition,
    path: EvalPath,
) -> Result<CongruenceReport> {
    require_prime(p)?;
    let use_fast = match path {
        EvalPath::Exact => false,
        EvalPath::Fast => {
            if seq.as_factorial_ratio().is_none() {
                return Err(Error::OutOfRange(
                    "fast path only applies to factorial-ratio sequences".into(),
                ));
            }
            true
        }
        EvalPath::Auto => seq.as_factorial_ratio().is_some(),
    };

    let mut witness = None;
    for n in 1..=n_max {
        let required = condition.required(n, p);
        let ok = if use_fast {
            let spec = seq.as_factorial_ratio().unwrap();
            let r = required as u32;
            // errors from either term report the loop index n
            let relabel = |e: Error| match e {
                Error::DenominatorDivisibleByP(_) => Error::DenominatorDivisibleByP(n),
                other => other,
            };
            term_mod_prime_power(spec, n * p, p, r).map_err(relabel)?
                == term_mod_prime_power(spec, n, p, r).map_err(relabel)?
        } else {
            let a_n = seq.eval(n);
            let a_np = seq.eval(n * p);
            if !rat_valuation(&a_n, p).at_least(0) || !rat_valuation(&a_np, p).at_least(0) {
                return Err(Error::DenominatorDivisibleByP(n));
            }
            rat_valuation(&(a_np - a_n), p).at_least(required)
        };
        if !ok {
            // exact recomputation for the witness valuation
            let diff = seq.eval(n * p) - seq.eval(n);
            let val = rat_valuation(&diff, p)
                .finite()
                .expect("failed check has finite valuation");
            witness = Some(Witness { n, val, required });
            break;
        }
    }
    Ok(CongruenceReport {
        seq: seq.label().to_string(),
        p,
        n_max,
        condition,
        status: if witness.is_none() {
            Status::Pass
        } else {
            Status::Fail
        },
        witness,
    })
}

/// alpha_m in the factorization (mp)! = m! (-p)^m (1 + p alpha_m).
/// The identity forces alpha_m to be an integer; a non-integer would
/// falsify the lemma, so it is a hard error, re-checked exactly.
pub fn wilson_alpha(m: u64, p: u64) -> Result<BigInt> {
    require_prime(p)?;
    let mp_fact = BigInt::from((*factorial(m * p)).clone());
    let m_fact = BigInt::from((*factorial(m)).clone());
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    let divisor = &m_fact * BigInt::from(p).pow(m as u32) * BigInt::from(sign);
    let unit = BigRational::new(mp_fact.clone(), divisor.clone());
    let alpha = (unit - BigRational::one()) / BigRational::from(BigInt::from(p));
    if !alpha.denom().is_one() {
        return Err(Error::NonIntegerAlpha { m, p });
    }
    let alpha = alpha.to_integer();
    // defining identity, re-checked with big integers
    debug_assert_eq!(
        mp_fact,
        divisor * (BigInt::one() + BigInt::from(p) * &alpha)
    );
    Ok(alpha)
}

/// The factorization (mp)! = m! (-p)^m (1 + p alpha) with integer alpha.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WilsonFactor {
    pub m: u64,
    pub p: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub alpha: BigInt,
}

fn serialize_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

impl WilsonFactor {
    pub fn compute(m: u64, p: u64) -> Result<Self> {
        Ok(WilsonFactor {
            m,
            p,
            alpha: wilson_alpha(m, p)?,
        })
    }

    /// Re-checks the defining identity with exact big integers.
    pub fn verify(&self) -> bool {
        let mp_fact = BigInt::from((*factorial(self.m * self.p)).clone());
        let m_fact = BigInt::from((*factorial(self.m)).clone());
        let neg_p = -BigInt::from(self.p);
        mp_fact
            == m_fact
                * neg_p.pow(self.m as u32)
                * (BigInt::one() + BigInt::from(self.p) * &self.alpha)
    }
}

/// A prime left out of a survey because the Z_(p) hypothesis failed there,
/// visible in the report rather than silently dropped.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedPrime {
    pub p: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyEntry {
    pub p: u64,
    pub b: CongruenceReport,
    pub c: CongruenceReport,
}

/// One (b, c) report pair per surveyed prime, in prime order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    pub seq: String,
    pub p_max: u64,
    pub n_max: u64,
    pub entries: Vec<SurveyEntry>,
    pub skipped: Vec<SkippedPrime>,
}

impl SurveyReport {
    pub fn primes_passing(&self, condition: Condition) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|e| match condition {
                Condition::B => e.b.passed(),
                Condition::C => e.c.passed(),
            })
            .map(|e| e.p)
            .collect()
    }
}

pub fn prime_survey(seq: &RationalSequence, p_max: u64, n_max: u64) -> SurveyReport {
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for p in primes_up_to(p_max) {
        let b = check_condition(seq, p, n_max, Condition::B, EvalPath::Auto);
        let c = check_condition(seq, p, n_max, Condition::C, EvalPath::Auto);
        match (b, c) {
            (Ok(b), Ok(c)) => entries.push(SurveyEntry { p, b, c }),
            (Err(e), _) | (_, Err(e)) => skipped.push(SkippedPrime {
                p,
                reason: e.to_string(),
            }),
        }
    }
    SurveyReport {
        seq: seq.label().to_string(),
        p_max,
        n_max,
        entries,
        skipped,
    }
}

/// b_n = scale^{n+1} a_n, the Eisenstein rescaling from the proof that
/// condition (b) survives clearing denominators.
pub fn rescale_to_integers(seq: &RationalSequence, scale: u64) -> RationalSequence {
    assert!(scale >= 1, "scale must be positive");
    let label = format!("{} rescaled by {scale}", seq.label());
    let inner = seq.clone();
    let scale_big = BigInt::from(scale);
    RationalSequence::from_fn(label, move |n| {
        let factor = BigRational::from(scale_big.pow(n as u32 + 1));
        inner.eval(n) * factor
    })
}

/// Smallest scale <= scale_max with scale^{n+1} a_n integral for all
/// n <= n_max, if any.
pub fn find_eisenstein_scale(seq: &RationalSequence, n_max: u64, scale_max: u64) -> Option<u64> {
    'scale: for scale in 1..=scale_max {
        let scale_big = BigInt::from(scale);
        for n in 0..=n_max {
            let a_n = seq.eval(n);
            if a_n.is_zero() {
                continue;
            }
            // denominator must divide scale^{n+1}
            let pow = scale_big.pow(n as u32 + 1);
            if !num_integer::Integer::mod_floor(&pow, a_n.denom()).is_zero() {
                continue 'scale;
            }
        }
        return Some(scale);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Valuation;
    use crate::seqcore::FactorialRatioSpec;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn central_binomial() -> RationalSequence {
        RationalSequence::from_spec("2/1,1".parse::<FactorialRatioSpec>().unwrap())
    }

    fn identity_seq() -> RationalSequence {
        RationalSequence::from_fn("n", |n| rat(n as i64, 1))
    }

    fn counterexample_seq() -> RationalSequence {
        RationalSequence::from_rational_function(
            "t/(1+t^2)",
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(0, 1), rat(1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn condition_b_examples() {
        let r = check_condition_b(&central_binomial(), 5, 10).unwrap();
        assert!(r.passed());

        let r = check_condition_b(&identity_seq(), 3, 10).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(
            r.witness,
            Some(Witness {
                n: 1,
                val: 0,
                required: 1
            })
        );

        let ones = RationalSequence::from_fn("ones", |_| BigRational::one());
        assert!(check_condition_b(&ones, 7, 10).unwrap().passed());
    }

    #[test]
    fn condition_c_examples() {
        let r = check_condition_c(&central_binomial(), 5, 10).unwrap();
        assert!(r.passed());
        // spot value behind the pass: v_5(a_5 - a_1) = v_5(252 - 2) = 3
        let diff = central_binomial().eval(5) - central_binomial().eval(1);
        assert_eq!(rat_valuation(&diff, 5), Valuation::Finite(3));

        let ones = RationalSequence::from_fn("ones", |_| BigRational::one());
        assert!(check_condition_c(&ones, 3, 10).unwrap().passed());

        let r = check_condition_c(&counterexample_seq(), 7, 10).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.witness.as_ref().unwrap().n, 1);
        // a_7 - a_1 = -2
        let diff = counterexample_seq().eval(7) - counterexample_seq().eval(1);
        assert_eq!(diff, rat(-2, 1));
    }

    #[test]
    fn fast_and_exact_paths_agree() {
        for s in ["2/1,1", "6,1/3,2,2", "3,3/1,1,4"] {
            let seq = RationalSequence::from_spec(s.parse::<FactorialRatioSpec>().unwrap());
            for p in [2u64, 3, 5, 7, 11] {
                for cond in [Condition::B, Condition::C] {
                    let fast = check_condition(&seq, p, 12, cond, EvalPath::Fast);
                    let exact = check_condition(&seq, p, 12, cond, EvalPath::Exact);
                    assert_eq!(fast, exact, "spec {s} p={p} {cond:?}");
                }
            }
        }
    }

    #[test]
    fn denominator_hypothesis_is_checked() {
        let halves = RationalSequence::from_fn("1/2^n", |n| {
            BigRational::new(BigInt::one(), BigInt::from(2).pow(n as u32))
        });
        assert_eq!(
            check_condition_b(&halves, 2, 5),
            Err(Error::DenominatorDivisibleByP(1))
        );
        // fine at p = 3 since denominators are powers of 2
        assert!(check_condition_b(&halves, 3, 5).is_ok());
    }

    #[test]
    fn wilson_alpha_examples() {
        assert_eq!(wilson_alpha(1, 3).unwrap(), BigInt::from(-1));
        assert_eq!(wilson_alpha(0, 7).unwrap(), BigInt::zero());
        assert_eq!(wilson_alpha(2, 3).unwrap(), BigInt::from(13));
        let factor = WilsonFactor::compute(2, 3).unwrap();
        assert!(factor.verify());
        let broken = WilsonFactor {
            alpha: BigInt::from(14),
            ..factor
        };
        assert!(!broken.verify());
    }

    #[test]
    fn wilson_identity_holds_exactly() {
        for p in primes_up_to(13) {
            for m in 0..=30u64 {
                let alpha = wilson_alpha(m, p).unwrap();
                let sign = if m % 2 == 0 { 1 } else { -1 };
                let rhs = BigInt::from((*factorial(m)).clone())
                    * BigInt::from(p).pow(m as u32)
                    * BigInt::from(sign)
                    * (BigInt::one() + BigInt::from(p) * alpha);
                assert_eq!(BigInt::from((*factorial(m * p)).clone()), rhs, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn survey_counterexample_passes_only_at_one_mod_four() {
        let survey = prime_survey(&counterexample_seq(), 30, 20);
        assert!(survey.skipped.is_empty());
        assert_eq!(survey.primes_passing(Condition::B), vec![5, 13, 17, 29]);
        assert_eq!(survey.primes_passing(Condition::C), vec![5, 13, 17, 29]);
    }

    #[test]
    fn survey_factorial_ratio_all_pass() {
        let seq = RationalSequence::from_spec("6,1/3,2,2".parse().unwrap());
        let survey = prime_survey(&seq, 20, 20);
        let all: Vec<u64> = primes_up_to(20);
        assert_eq!(survey.primes_passing(Condition::B), all);
    }

    #[test]
    fn survey_identity_fails_everywhere() {
        let survey = prime_survey(&identity_seq(), 10, 10);
        assert!(survey.primes_passing(Condition::B).is_empty());
        assert!(survey.primes_passing(Condition::C).is_empty());
        for e in &survey.entries {
            assert_eq!(e.b.witness.as_ref().unwrap().n, 1);
        }
    }

    #[test]
    fn survey_reports_skipped_primes() {
        let halves = RationalSequence::from_fn("1/2^n", |n| {
            BigRational::new(BigInt::one(), BigInt::from(2).pow(n as u32))
        });
        let survey = prime_survey(&halves, 5, 5);
        assert_eq!(survey.skipped.len(), 1);
        assert_eq!(survey.skipped[0].p, 2);
        assert_eq!(survey.entries.iter().map(|e| e.p).collect::<Vec<_>>(), vec![3, 5]);
    }

    #[test]
    fn c_implies_b_in_surveys() {
        for seq in [
            central_binomial(),
            identity_seq(),
            counterexample_seq(),
            RationalSequence::from_fn("n^2+1", |n| rat((n * n + 1) as i64, 1)),
        ] {
            let survey = prime_survey(&seq, 23, 15);
            for e in &survey.entries {
                assert!(!e.c.passed() || e.b.passed(), "{} at p={}", survey.seq, e.p);
            }
        }
    }

    #[test]
    fn rescaling_examples() {
        let halves = RationalSequence::from_fn("1/2^n", |n| {
            BigRational::new(BigInt::one(), BigInt::from(2).pow(n as u32))
        });
        let rescaled = rescale_to_integers(&halves, 2);
        for n in 0..10 {
            assert_eq!(rescaled.eval(n), rat(2, 1));
        }
        let same = rescale_to_integers(&central_binomial(), 1);
        for n in 0..10 {
            assert_eq!(same.eval(n), central_binomial().eval(n));
        }
        let thirds = RationalSequence::from_fn("n/3^n", |n| {
            BigRational::new(BigInt::from(n), BigInt::from(3).pow(n as u32))
        });
        let rescaled = rescale_to_integers(&thirds, 3);
        for n in 0..10 {
            assert_eq!(rescaled.eval(n), rat(3 * n as i64, 1));
        }
    }

    #[test]
    fn rescaling_preserves_condition_b() {
        // a_n = C(2n, n)/2^n is in Z[1/2]; for odd p, (b) must survive the
        // rescaling that clears the denominators
        let seq = RationalSequence::from_fn("C(2n,n)/2^n", |n| {
            central_binomial().eval(n) / BigRational::from(BigInt::from(2).pow(n as u32))
        });
        for p in [3u64, 5, 7, 11] {
            let before = check_condition_b(&seq, p, 12).unwrap();
            let after = check_condition_b(&rescale_to_integers(&seq, 2), p, 12).unwrap();
            assert!(before.passed(), "p={p}");
            assert!(after.passed(), "p={p}");
        }
    }

    #[test]
    fn eisenstein_scale_search() {
        let halves = RationalSequence::from_fn("1/2^n", |n| {
            BigRational::new(BigInt::one(), BigInt::from(2).pow(n as u32))
        });
        assert_eq!(find_eisenstein_scale(&halves, 20, 50), Some(2));
        assert_eq!(find_eisenstein_scale(&central_binomial(), 20, 50), Some(1));
        let inv_factorial = RationalSequence::from_fn("1/n!", |n| {
            BigRational::new(BigInt::one(), BigInt::from((*factorial(n)).clone()))
        });
        assert_eq!(find_eisenstein_scale(&inv_factorial, 200, 100), None);
    }
}
