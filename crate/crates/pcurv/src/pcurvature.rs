//! p-curvature of y' = f y via Jacobson's formula psi_p = f^{(p-1)} + f^p,
//! computed on truncated series over F_p or exactly on rational functions,
//! plus the coefficient-level identity tying psi_p to the congruences
//! a_{np} = a_n mod p.

use serde::Serialize;

use crate::arith::{primes_up_to, require_prime};
use crate::error::{Error, Result};
use crate::seqcore::{FactorialRatioSpec, RationalSequence};
use crate::series::{series_from_sequence, FpRatFun, FpSeries};

/// How far a vanishing verdict reaches. "Zero to precision K" is finite
/// evidence; "exactly zero" only ever comes from rational-function inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Vanishing {
    ZeroToPrecision { precision: usize },
    ExactlyZero,
    Nonzero { first_nonzero_index: usize },
}

impl Vanishing {
    pub fn is_zero(&self) -> bool {
        !matches!(self, Vanishing::Nonzero { .. })
    }
}

/// psi_p itself, in whichever representation the input allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CurvatureValue {
    /// Truncated psi with its effective precision as the series length.
    Series(FpSeries),
    Rational(FpRatFun),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvatureResult {
    pub p: u64,
    pub value: CurvatureValue,
    pub vanishing: Vanishing,
}

impl CurvatureResult {
    /// Effective precision of a truncated result; None for exact ones.
    pub fn effective_precision(&self) -> Option<usize> {
        match &self.value {
            CurvatureValue::Series(s) => Some(s.precision()),
            CurvatureValue::Rational(_) => None,
        }
    }
}

/// Truncated p-curvature. Input precision N must exceed p - 1; the
/// derivative part costs p - 1 coefficients, so the result is good to
/// K = N - (p - 1). The f^p part is exact out to p*N by the char-p power
/// rule, so K is set by the derivative alone.
pub fn pcurvature_series(f: &FpSeries, p: u64) -> Result<CurvatureResult> {
    require_prime(p)?;
    assert_eq!(f.prime(), p);
    let n = f.precision();
    if n <= (p - 1) as usize {
        return Err(Error::PrecisionTooLow {
            have: n,
            need: (p - 1) as usize,
        });
    }
    let k = n - (p - 1) as usize;
    let psi = f
        .iterated_derivative((p - 1) as usize)
        .add(&f.frobenius_pth_power())
        .truncate(k);
    let vanishing = match psi.first_nonzero() {
        None => Vanishing::ZeroToPrecision { precision: k },
        Some(idx) => Vanishing::Nonzero {
            first_nonzero_index: idx,
        },
    };
    Ok(CurvatureResult {
        p,
        value: CurvatureValue::Series(psi),
        vanishing,
    })
}

/// Exact p-curvature for rational-function f: p - 1 symbolic derivatives,
/// reduced at each step, plus the p-th power A(t^p)/B(t^p). The verdict here
/// is exact, never a truncation.
pub fn pcurvature_rational(f: &FpRatFun, p: u64) -> Result<CurvatureResult> {
    require_prime(p)?;
    assert_eq!(f.prime(), p);
    let psi = f
        .iterated_derivative((p - 1) as usize)
        .add(&f.frobenius_pth_power());
    let vanishing = if psi.is_zero() {
        Vanishing::ExactlyZero
    } else {
        // witness index = t-adic order of the numerator when the denominator
        // is a unit at 0, otherwise just the first numerator index
        let idx = psi
            .numerator()
            .coeffs()
            .iter()
            .position(|&c| c != 0)
            .unwrap_or(0);
        Vanishing::Nonzero {
            first_nonzero_index: idx,
        }
    };
    Ok(CurvatureResult {
        p,
        value: CurvatureValue::Rational(psi),
        vanishing,
    })
}

/// Coefficient-level consistency report for one (sequence, prime) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub seq: String,
    pub p: u64,
    pub precision: usize,
    /// f^{(p-1)} vanishes off the p-grid (the Wilson mechanism).
    pub support_ok: bool,
    /// (-f^{(p-1)})^{1/p} coefficient n-1 equals a_{np} mod p.
    pub pth_root_ok: bool,
    /// psi coefficient at (n-1)p equals a_n - a_{np} mod p.
    pub curvature_ok: bool,
}

impl IdentityReport {
    pub fn all_ok(&self) -> bool {
        self.support_ok && self.pth_root_ok && self.curvature_ok
    }
}

/// Checks, to available precision, the three coefficient identities behind
/// the congruence <-> curvature equivalence: the derivative f^{(p-1)} is
/// supported on the p-grid, its negated p-th root recovers n -> a_{np}, and
/// psi reads off a_n - a_{np} on the grid.
pub fn curvature_congruence_identity(
    seq: &RationalSequence,
    p: u64,
    precision: usize,
) -> Result<IdentityReport> {
    require_prime(p)?;
    let big_n = precision * p as usize;
    let f = series_from_sequence(seq, big_n).reduce_mod_p(p)?;
    let deriv = f.iterated_derivative((p - 1) as usize);

    let support_ok = deriv
        .coeffs()
        .iter()
        .enumerate()
        .all(|(k, &c)| c == 0 || k % p as usize == 0);

    let mut pth_root_ok = true;
    if support_ok {
        let root = deriv.neg().pth_root().expect("checked support");
        for n in 1..=root.precision() as u64 {
            let expected = crate::arith::rat_mod_p(&seq.eval(n * p), p, n * p)?;
            if root.coeff(n as usize - 1) != expected {
                pth_root_ok = false;
                break;
            }
        }
    } else {
        pth_root_ok = false;
    }

    let psi = match pcurvature_series(&f, p)?.value {
        CurvatureValue::Series(s) => s,
        CurvatureValue::Rational(_) => unreachable!(),
    };
    let mut curvature_ok = true;
    for n in 1u64.. {
        let idx = (n as usize - 1) * p as usize;
        if idx >= psi.precision() {
            break;
        }
        let a_n = crate::arith::rat_mod_p(&seq.eval(n), p, n)?;
        let a_np = crate::arith::rat_mod_p(&seq.eval(n * p), p, n * p)?;
        let expected = (p + a_n - a_np) % p;
        if psi.coeff(idx) != expected {
            curvature_ok = false;
            break;
        }
    }

    Ok(IdentityReport {
        seq: seq.label().to_string(),
        p,
        precision,
        support_ok,
        pth_root_ok,
        curvature_ok,
    })
}

/// What fed an evidence run.
#[derive(Debug, Clone)]
pub enum EvidenceSource {
    Spec(FactorialRatioSpec),
    Sequence(RationalSequence),
    /// Integer-coefficient numerator and denominator of f, reduced per prime.
    RationalFunction {
        num: Vec<num_bigint::BigInt>,
        den: Vec<num_bigint::BigInt>,
        label: String,
    },
}

impl EvidenceSource {
    pub fn label(&self) -> String {
        match self {
            EvidenceSource::Spec(spec) => spec.to_string(),
            EvidenceSource::Sequence(seq) => seq.label().to_string(),
            EvidenceSource::RationalFunction { label, .. } => label.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub p: u64,
    pub verdict: Vanishing,
    /// Effective precision for truncated verdicts; None when exact.
    pub precision: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OverallVerdict {
    ConsistentWithAllAlgebraic,
    RefutedByPrime { p: u64 },
}

/// Per-prime vanishing verdicts over a finite window. A "consistent"
/// overall verdict is finite evidence only: the underlying theorem
/// quantifies over almost all primes, which no finite survey can certify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvidenceReport {
    pub source: String,
    pub primes: Vec<PrimeVerdict>,
    pub overall: OverallVerdict,
    pub precision_ledger: String,
    pub note: String,
}

impl EvidenceReport {
    pub fn refuted(&self) -> bool {
        matches!(self.overall, OverallVerdict::RefutedByPrime { .. })
    }
}

pub fn algebraicity_evidence(
    source: &EvidenceSource,
    p_min: u64,
    p_max: u64,
    precision: usize,
) -> Result<EvidenceReport> {
    let mut primes = Vec::new();
    for p in primes_up_to(p_max) {
        if p < p_min {
            continue;
        }
        let result = match source {
            EvidenceSource::Spec(spec) => {
                let seq = RationalSequence::from_spec(spec.clone());
                let f = series_from_sequence(&seq, precision).reduce_mod_p(p)?;
                pcurvature_series(&f, p)?
            }
            EvidenceSource::Sequence(seq) => {
                let f = series_from_sequence(seq, precision).reduce_mod_p(p)?;
                pcurvature_series(&f, p)?
            }
            EvidenceSource::RationalFunction { num, den, .. } => {
                let f = reduce_ratfun_mod_p(num, den, p)?;
                pcurvature_rational(&f, p)?
            }
        };
        primes.push(PrimeVerdict {
            p,
            precision: result.effective_precision(),
            verdict: result.vanishing,
        });
    }
    let overall = match primes.iter().find(|v| !v.verdict.is_zero()) {
        Some(v) => OverallVerdict::RefutedByPrime { p: v.p },
        None => OverallVerdict::ConsistentWithAllAlgebraic,
    };
    Ok(EvidenceReport {
        source: source.label(),
        primes,
        overall,
        precision_ledger: match source {
            EvidenceSource::RationalFunction { .. } => "exact rational-function arithmetic".into(),
            _ => format!(
                "input precision {precision}; per-prime effective precision {precision} - (p-1)"
            ),
        },
        note: "finite evidence only: the characterization quantifies over almost all primes"
            .into(),
    })
}

/// Reduce integer-coefficient num/den mod p into a reduced F_p rational
/// function. Errors when the denominator reduces to zero.
pub fn reduce_ratfun_mod_p(
    num: &[num_bigint::BigInt],
    den: &[num_bigint::BigInt],
    p: u64,
) -> Result<FpRatFun> {
    let to_fp = |coeffs: &[num_bigint::BigInt]| -> Vec<u64> {
        let p_big = num_bigint::BigInt::from(p);
        coeffs
            .iter()
            .map(|c| u64::try_from(&num_integer::Integer::mod_floor(c, &p_big)).unwrap())
            .collect()
    };
    let den_p = crate::series::FpPoly::new(p, to_fp(den));
    if den_p.is_zero() {
        return Err(Error::OutOfRange(format!(
            "denominator vanishes identically mod {p}"
        )));
    }
    let num_p = crate::series::FpPoly::new(p, to_fp(num));
    Ok(FpRatFun::new(num_p, den_p))
}

/// One odd prime's verdicts for the f = 1/(1+t^2) counterexample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexamplePrime {
    pub p: u64,
    pub residue_mod_4: u64,
    pub curvature_zero: bool,
    pub condition_b: bool,
    pub condition_c: bool,
}

/// Exact survey of the counterexample where conditions (b) and (c) hold
/// precisely at primes p = 1 mod 4, matching the exact vanishing of the
/// p-curvature — yet f has non-algebraic solutions, so the "almost all
/// primes" quantifier cannot be weakened to "infinitely many".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub f: String,
    pub p_max: u64,
    pub n_max: u64,
    pub primes: Vec<CounterexamplePrime>,
    /// curvature_zero == condition_b == condition_c == (p = 1 mod 4) at
    /// every surveyed prime
    pub iff_holds: bool,
}

pub fn counterexample_survey(p_max: u64, n_max: u64) -> Result<CounterexampleReport> {
    use crate::congruence::{check_condition_b, check_condition_c};
    use num_rational::BigRational;
    use num_traits::One;

    let one = BigRational::one();
    let zero = BigRational::from_integer(0.into());
    // a_n = [t^n] t/(1+t^2), so t f(t) = sum a_n t^n for f = 1/(1+t^2)
    let seq = RationalSequence::from_rational_function(
        "t/(1+t^2)",
        vec![zero.clone(), one.clone()],
        vec![one.clone(), zero, one],
    )?;
    let num = vec![num_bigint::BigInt::from(1)];
    let den = vec![1.into(), 0.into(), 1.into()];
    let mut primes = Vec::new();
    let mut iff_holds = true;
    for p in primes_up_to(p_max) {
        if p == 2 {
            continue;
        }
        let curvature = pcurvature_rational(&reduce_ratfun_mod_p(&num, &den, p)?, p)?;
        let entry = CounterexamplePrime {
            p,
            residue_mod_4: p % 4,
            curvature_zero: curvature.vanishing.is_zero(),
            condition_b: check_condition_b(&seq, p, n_max)?.passed(),
            condition_c: check_condition_c(&seq, p, n_max)?.passed(),
        };
        let expected = p % 4 == 1;
        if entry.curvature_zero != expected
            || entry.condition_b != expected
            || entry.condition_c != expected
        {
            iff_holds = false;
        }
        primes.push(entry);
    }
    Ok(CounterexampleReport {
        f: "1/(1+t^2)".into(),
        p_max,
        n_max,
        primes,
        iff_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::check_condition_b;
    use crate::series::FpPoly;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    fn one_over_one_plus_t2(p: u64) -> FpRatFun {
        FpRatFun::new(FpPoly::one(p), FpPoly::new(p, vec![1, 0, 1]))
    }

    #[test]
    fn series_curvature_examples() {
        let p = 5u64;
        let zero = FpSeries::zero(p, 30);
        let r = pcurvature_series(&zero, p).unwrap();
        assert_eq!(r.vanishing, Vanishing::ZeroToPrecision { precision: 26 });

        // f = 1: (p-1)-th derivative is 0 and 1^p = 1, so psi = 1
        let mut one = vec![0u64; 30];
        one[0] = 1;
        let one = FpSeries::new(p, one).unwrap();
        let r = pcurvature_series(&one, p).unwrap();
        assert_eq!(
            r.vanishing,
            Vanishing::Nonzero {
                first_nonzero_index: 0
            }
        );

        // f = 1/(1-t): f^{(4)} = 4!/(1-t)^5 = -1/(1-t)^5 by Wilson, cancelling f^5
        let geom = FpSeries::new(p, vec![1; 30]).unwrap();
        let r = pcurvature_series(&geom, p).unwrap();
        assert_eq!(r.vanishing, Vanishing::ZeroToPrecision { precision: 26 });
    }

    #[test]
    fn precision_too_low_rejected() {
        let f = FpSeries::zero(7, 6);
        assert_eq!(
            pcurvature_series(&f, 7),
            Err(Error::PrecisionTooLow { have: 6, need: 6 })
        );
    }

    #[test]
    fn rational_curvature_examples() {
        let r = pcurvature_rational(&one_over_one_plus_t2(5), 5).unwrap();
        assert_eq!(r.vanishing, Vanishing::ExactlyZero);

        let r = pcurvature_rational(&one_over_one_plus_t2(7), 7).unwrap();
        assert!(!r.vanishing.is_zero());

        for p in [2u64, 3, 5, 11] {
            let one = FpRatFun::new(FpPoly::one(p), FpPoly::one(p));
            let r = pcurvature_rational(&one, p).unwrap();
            match r.value {
                CurvatureValue::Rational(psi) => {
                    assert_eq!(psi.numerator(), &FpPoly::one(p));
                    assert_eq!(psi.denominator(), &FpPoly::one(p));
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn section4_law_small_window() {
        for p in primes_up_to(31).into_iter().filter(|&p| p > 2) {
            let r = pcurvature_rational(&one_over_one_plus_t2(p), p).unwrap();
            assert_eq!(
                r.vanishing == Vanishing::ExactlyZero,
                p % 4 == 1,
                "p = {p}"
            );
        }
    }

    #[test]
    fn identity_report_examples() {
        let central = RationalSequence::from_spec("2/1,1".parse().unwrap());
        let rep = curvature_congruence_identity(&central, 3, 30).unwrap();
        assert!(rep.all_ok());

        // a_n = n: support and pth-root identities still hold; psi[0] = 1 mod 3
        let ident = RationalSequence::from_fn("n", |n| {
            BigRational::new(BigInt::from(n), BigInt::one())
        });
        let rep = curvature_congruence_identity(&ident, 3, 20).unwrap();
        assert!(rep.support_ok);
        assert!(rep.pth_root_ok);
        assert!(rep.curvature_ok);
        let f = series_from_sequence(&ident, 60).reduce_mod_p(3).unwrap();
        let psi = match pcurvature_series(&f, 3).unwrap().value {
            CurvatureValue::Series(s) => s,
            _ => unreachable!(),
        };
        assert_eq!(psi.coeff(0), 1); // a_1 - a_3 = -2 = 1 mod 3

        let zero = RationalSequence::from_fn("zero", |_| BigRational::zero());
        assert!(curvature_congruence_identity(&zero, 5, 10).unwrap().all_ok());
    }

    #[test]
    fn rational_and_series_paths_agree() {
        let num = vec![BigInt::one()];
        let den = vec![BigInt::one(), BigInt::zero(), BigInt::one()];
        let n = 100usize;
        for p in primes_up_to(13) {
            let f_rat = reduce_ratfun_mod_p(&num, &den, p).unwrap();
            let exact = pcurvature_rational(&f_rat, p).unwrap();
            let f_ser = f_rat.expand(n).unwrap();
            let truncated = pcurvature_series(&f_ser, p).unwrap();
            let (psi_exact, psi_trunc) = match (exact.value, truncated.value) {
                (CurvatureValue::Rational(a), CurvatureValue::Series(b)) => (a, b),
                _ => unreachable!(),
            };
            let expanded = psi_exact.expand(psi_trunc.precision()).unwrap();
            assert_eq!(expanded, psi_trunc, "p = {p}");
        }
    }

    #[test]
    fn equivalence_with_condition_b() {
        // deterministic pseudo-random integer sequences; acceptance re-runs
        // this with proptest at larger scale
        for seed in 0..6u64 {
            let seq = RationalSequence::from_fn("pseudo", move |n| {
                let x = (n.wrapping_mul(6364136223846793005).wrapping_add(seed * 1442695040888963407)
                    >> 33)
                    % 19;
                BigRational::from(BigInt::from(x as i64 - 9))
            });
            let n = 120usize;
            for p in [2u64, 3, 5, 7, 11, 13] {
                let f = series_from_sequence(&seq, n).reduce_mod_p(p).unwrap();
                let result = pcurvature_series(&f, p).unwrap();
                let k = result.effective_precision().unwrap();
                let psi = match &result.value {
                    CurvatureValue::Series(s) => s.clone(),
                    _ => unreachable!(),
                };
                // support invariant
                for (idx, &c) in psi.coeffs().iter().enumerate() {
                    assert!(c == 0 || idx % p as usize == 0);
                }
                // visible congruence range: np <= K + p - 1
                let n_vis = (k as u64 + p - 1) / p;
                let cong = check_condition_b(&seq, p, n_vis).unwrap();
                assert_eq!(
                    result.vanishing.is_zero(),
                    cong.passed(),
                    "seed={seed} p={p}"
                );
            }
        }
    }

    #[test]
    fn evidence_reports() {
        let spec: FactorialRatioSpec = "2/1,1".parse().unwrap();
        let rep =
            algebraicity_evidence(&EvidenceSource::Spec(spec), 2, 23, 200).unwrap();
        assert_eq!(rep.overall, OverallVerdict::ConsistentWithAllAlgebraic);
        assert!(!rep.note.is_empty());

        let one = EvidenceSource::RationalFunction {
            num: vec![BigInt::one()],
            den: vec![BigInt::one()],
            label: "1".into(),
        };
        let rep = algebraicity_evidence(&one, 2, 23, 0).unwrap();
        assert_eq!(rep.overall, OverallVerdict::RefutedByPrime { p: 2 });

        let counter = EvidenceSource::RationalFunction {
            num: vec![BigInt::one()],
            den: vec![BigInt::one(), BigInt::zero(), BigInt::one()],
            label: "1/(1+t^2)".into(),
        };
        let rep = algebraicity_evidence(&counter, 2, 23, 0).unwrap();
        assert_eq!(rep.overall, OverallVerdict::RefutedByPrime { p: 2 });
        // first odd refutation is p = 3
        assert!(!rep.primes.iter().find(|v| v.p == 3).unwrap().verdict.is_zero());
    }

    #[test]
    fn counterexample_survey_small() {
        let rep = counterexample_survey(17, 20).unwrap();
        assert!(rep.iff_holds);
        let by_p: Vec<(u64, bool)> = rep
            .primes
            .iter()
            .map(|e| (e.p, e.curvature_zero))
            .collect();
        assert_eq!(
            by_p,
            vec![(3, false), (5, true), (7, false), (11, false), (13, true), (17, true)]
        );
    }
}
