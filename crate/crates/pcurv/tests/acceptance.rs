//! Acceptance suite. One test per criterion; each prints a single
//! PASS/FAIL line (run with `--nocapture` to see the lines for passing
//! tests). All comparisons are exact. Criterion 6's degree-30 recovery is
//! extended (non-gating) and `#[ignore]`d by default; run it with
//! `cargo test --release -- --ignored` (budget: tens of minutes).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use pcurv::arith::{primes_up_to, rat_valuation, Valuation};
use pcurv::congruence::{
    check_condition, check_condition_b, check_condition_c, wilson_alpha, EvalPath,
};
use pcurv::guess::{algebraic_guess, golyshev_pipeline, GuessConfig, minimal_y_degree, PipelineParams};
use pcurv::pcurvature::{
    algebraicity_evidence, counterexample_survey, pcurvature_series, CurvatureValue,
    EvidenceSource,
};
use pcurv::seqcore::{factorial_ratio_term, is_integral, FactorialRatioSpec, RationalSequence};
use pcurv::series::{exp_primitive, series_from_sequence, FpSeries, QSeries};

const SPECS: [&str; 4] = ["2/1,1", "6,1/3,2,2", "10,1/5,4,2", "30,1/15,10,6"];

struct Gate(&'static str, bool);

impl Gate {
    fn check(name: &'static str, ok: bool) {
        Gate(name, ok).finish();
    }

    fn finish(self) {
        println!(
            "ACCEPTANCE {}: {}",
            self.0,
            if self.1 { "PASS" } else { "FAIL" }
        );
        assert!(self.1, "{} failed", self.0);
    }
}

#[test]
fn criterion_1_theorem_2_suite() {
    // a_{np} = a_n (mod p) for the four intro specs, p <= 47, n <= 40
    let mut ok = true;
    for text in SPECS {
        let seq = RationalSequence::from_spec(text.parse().unwrap());
        for p in primes_up_to(47) {
            let report = check_condition_b(&seq, p, 40).unwrap();
            if !report.passed() {
                eprintln!("criterion 1: {text} fails at p = {p}: {:?}", report.witness);
                ok = false;
            }
        }
        // exact big-integer cross-check on a sampled subset
        for p in [3, 7, 11] {
            let fast = check_condition(
                &seq,
                p,
                8,
                pcurv::congruence::Condition::B,
                EvalPath::Fast,
            )
            .unwrap();
            let exact = check_condition(
                &seq,
                p,
                8,
                pcurv::congruence::Condition::B,
                EvalPath::Exact,
            )
            .unwrap();
            ok &= fast == exact && exact.passed();
        }
    }
    Gate::check("criterion 1 (Theorem 2 congruence suite)", ok);
}

#[test]
fn criterion_2_gauss_property_suite() {
    // v_p(a_{np} - a_n) >= 1 + v_p(n) for the four specs, p <= 31, n <= 30
    let mut ok = true;
    for text in SPECS {
        let seq = RationalSequence::from_spec(text.parse().unwrap());
        for p in primes_up_to(31) {
            let report = check_condition_c(&seq, p, 30).unwrap();
            if !report.passed() {
                eprintln!("criterion 2: {text} fails at p = {p}: {:?}", report.witness);
                ok = false;
            }
        }
    }
    // spot value: v_5(a_5 - a_1) = v_5(250) = 3 for (2; 1, 1)
    let spec: FactorialRatioSpec = "2/1,1".parse().unwrap();
    let diff = factorial_ratio_term(&spec, 5) - factorial_ratio_term(&spec, 1);
    ok &= diff == BigRational::from(BigInt::from(250));
    ok &= rat_valuation(&diff, 5) == Valuation::Finite(3);
    Gate::check("criterion 2 (Gauss property suite)", ok);
}

#[test]
fn criterion_3_section4_counterexample_iff() {
    // f = 1/(1+t^2): exact p-curvature vanishes iff p = 1 (mod 4),
    // and conditions (b), (c) hold exactly at those primes (n_max = 50)
    let report = counterexample_survey(101, 50).unwrap();
    let mut ok = report.iff_holds;
    ok &= report.primes.len() == primes_up_to(101).len() - 1; // all odd primes
    for e in &report.primes {
        let expected = e.p % 4 == 1;
        ok &= e.curvature_zero == expected
            && e.condition_b == expected
            && e.condition_c == expected;
    }
    Gate::check("criterion 3 (section 4 counterexample iff, p <= 101)", ok);
}

#[test]
fn criterion_4_theorem_1_equivalence_oracle() {
    // 50 random integer sequences, N = 120, p in {2,...,13}: truncated
    // psi_p vanishes to effective precision iff a_{np} = a_n (mod p) on
    // the precision-visible range; psi is supported on the p-grid
    const N: usize = 120;
    let mut rng = StdRng::seed_from_u64(0x5eed_2026);
    let mut ok = true;
    let mut vanishing_seen = 0usize;
    for case in 0..50 {
        // a_1 .. a_N, entries in [-9, 9]
        let terms: Vec<i64> = (0..N).map(|_| rng.gen_range(-9..=9)).collect();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let coeffs: Vec<u64> = terms
                .iter()
                .map(|&a| a.rem_euclid(p as i64) as u64)
                .collect();
            let f = FpSeries::new(p, coeffs).unwrap();
            let result = pcurvature_series(&f, p).unwrap();
            let psi = match &result.value {
                CurvatureValue::Series(s) => s,
                CurvatureValue::Rational(_) => unreachable!(),
            };
            let k = psi.precision();
            assert_eq!(k, N - (p as usize - 1));
            // support invariant: zero off the p-grid, in every case
            let support = psi
                .coeffs()
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 0 || i % p as usize == 0);
            if !support {
                eprintln!("criterion 4: support violated, case {case}, p = {p}");
                ok = false;
            }
            // visible range: n with (n-1)p < k, i.e. np <= k + p - 1 <= N
            let n_vis = (k + p as usize - 1) / p as usize;
            let congruent = (1..=n_vis).all(|n| {
                let a_n = terms[n - 1].rem_euclid(p as i64);
                let a_np = terms[n * p as usize - 1].rem_euclid(p as i64);
                a_n == a_np
            });
            if psi.is_zero() != congruent {
                eprintln!("criterion 4: equivalence violated, case {case}, p = {p}");
                ok = false;
            }
            if psi.is_zero() {
                vanishing_seen += 1;
            }
        }
    }
    // random sequences almost never satisfy the congruences; make sure the
    // equivalence was still exercised in the vanishing direction
    let constant = FpSeries::new(3, vec![2; N]).unwrap();
    let result = pcurvature_series(&constant, 3).unwrap();
    if let CurvatureValue::Series(psi) = &result.value {
        ok &= psi.is_zero();
    }
    let _ = vanishing_seen;
    Gate::check("criterion 4 (Theorem 1 equivalence oracle)", ok);
}

#[test]
fn criterion_5_wilson_factorization() {
    // (mp)! = m! (-p)^m (1 + p alpha_m) with alpha_m an integer,
    // for all m <= 100 and primes p <= 37
    let mut ok = true;
    for p in primes_up_to(37) {
        for m in 1..=100u64 {
            let alpha = match wilson_alpha(m, p) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("criterion 5: m = {m}, p = {p}: {e}");
                    ok = false;
                    continue;
                }
            };
            let lhs = BigInt::from((*pcurv::arith::factorial(m * p)).clone());
            let neg_p = BigInt::from(-(p as i64));
            let rhs = BigInt::from((*pcurv::arith::factorial(m)).clone())
                * neg_p.pow(m as u32)
                * (BigInt::one() + BigInt::from(p) * &alpha);
            if lhs != rhs {
                eprintln!("criterion 5: identity fails at m = {m}, p = {p}");
                ok = false;
            }
        }
    }
    // spot values
    ok &= wilson_alpha(1, 3).unwrap() == BigInt::from(-1);
    ok &= wilson_alpha(2, 3).unwrap() == BigInt::from(13);
    Gate::check("criterion 5 (Wilson factorization, m <= 100, p <= 37)", ok);
}

fn big_f(spec_text: &str, precision: usize) -> QSeries {
    let seq = RationalSequence::from_spec(spec_text.parse().unwrap());
    let mut coeffs = vec![BigRational::one()];
    coeffs.extend(series_from_sequence(&seq, precision - 1).coeffs().iter().cloned());
    QSeries::new(coeffs)
}

#[test]
fn criterion_6_guessing_paper_degrees() {
    // central binomial: minimal y-degree 2 with (1 - 4t) y^2 - 1
    let f = big_f("2/1,1", 60);
    let (dy, poly) = minimal_y_degree(&f, 4, 4, 8).unwrap().unwrap();
    let mut ok = dy == 2 && poly.dt() == 1;
    // canonical form fixes the constant term positive: -(1 - 4t) y^2 + 1
    ok &= poly.coeff(0, 0) == &BigInt::one()
        && poly.coeff(0, 2) == &BigInt::from(-1)
        && poly.coeff(1, 2) == &BigInt::from(4)
        && poly.coeff(0, 1).is_zero()
        && poly.coeff(1, 1).is_zero()
        && poly.coeff(1, 0).is_zero();

    // (6, 1; 3, 2, 2): minimal y-degree 6
    let f6 = big_f("6,1/3,2,2", 60);
    let (dy6, poly6) = minimal_y_degree(&f6, 4, 6, 8).unwrap().unwrap();
    ok &= dy6 == 6;
    ok &= pcurv::guess::verify_annihilation(&poly6, &f6).unwrap() == 60;
    Gate::check("criterion 6 (guessing, paper degrees 2 and 6)", ok);
}

#[test]
#[ignore = "extended criterion: ~10 minutes in release mode"]
fn criterion_6_extended_degree_30() {
    // (10, 1; 5, 4, 2): y-degree 30 recovery (non-gating)
    let cfg = GuessConfig::new(15, 30, 8, (15 + 1) * (30 + 1) + 8).unwrap();
    let f = big_f("10,1/5,4,2", cfg.precision);
    let poly = algebraic_guess(&f, &cfg).unwrap();
    let mut ok = poly.as_ref().map_or(false, |p| p.dy() == 30);
    // no y-degree-29 annihilator at the same t-degree
    let cfg29 = GuessConfig::new(15, 29, 8, f.precision()).unwrap();
    ok &= algebraic_guess(&f, &cfg29).unwrap().is_none();
    Gate::check("criterion 6 extended (degree-30 recovery)", ok);
}

#[test]
fn criterion_7_golyshev_desk_case() {
    let spec: FactorialRatioSpec = "2/1,1".parse().unwrap();
    let report = golyshev_pipeline(
        &spec,
        &PipelineParams {
            p_max: 13,
            n_max: 15,
            precision: 60,
            dt_cap: 4,
            dy_cap: 3,
            guard: 8,
        },
    )
    .unwrap();
    let mut ok = report.balanced && report.integral && !report.evidence.refuted();
    ok &= report.q_over_t_coefficients.len() >= 6
        && report.q_over_t_coefficients[..6] == ["1", "2", "5", "14", "42", "132"];
    // minimal polynomial of Q(t)/t: t^2 y^2 + (2t - 1) y + 1 at D_y = 2
    match &report.q_minimal {
        Some(g) => {
            ok &= g.y_degree == 2;
            let p = g.polynomial.to_polynomial().unwrap();
            ok &= p.coeff(2, 2) == &BigInt::one()
                && p.coeff(1, 1) == &BigInt::from(2)
                && p.coeff(0, 1) == &BigInt::from(-1)
                && p.coeff(0, 0) == &BigInt::one()
                && p.coeff(0, 2).is_zero()
                && p.coeff(1, 2).is_zero()
                && p.coeff(1, 0).is_zero()
                && p.coeff(2, 0).is_zero()
                && p.coeff(2, 1).is_zero();
            // independent re-verification against exp_primitive
            let seq = RationalSequence::from_spec(spec.clone());
            let q = exp_primitive(&seq, 60);
            ok &= pcurv::guess::verify_annihilation(&p, &q).unwrap() == 60;
        }
        None => ok = false,
    }
    Gate::check("criterion 7 (Golyshev pipeline desk case)", ok);
}

#[test]
fn criterion_8_negative_controls() {
    let mut ok = true;

    // f = 1: psi_p = 1, refuted at every prime <= 23
    let one = EvidenceSource::RationalFunction {
        num: vec![BigInt::one()],
        den: vec![BigInt::one()],
        label: "1".into(),
    };
    let report = algebraicity_evidence(&one, 2, 23, 0).unwrap();
    ok &= report.refuted();
    ok &= report.primes.len() == primes_up_to(23).len();
    ok &= report.primes.iter().all(|v| !v.verdict.is_zero());

    // a_n = n fails condition (b) with witness n = 1 at every prime <= 23
    let linear = RationalSequence::from_fn("n", |n| BigRational::from(BigInt::from(n)));
    for p in primes_up_to(23) {
        let rep = check_condition_b(&linear, p, 10).unwrap();
        ok &= !rep.passed() && rep.witness.as_ref().map(|w| w.n) == Some(1);
    }

    // spec (3, 3; 1, 1, 4) aborts NonIntegral with witness a_1 = 3/2
    let bad: FactorialRatioSpec = "3,3/1,1,4".parse().unwrap();
    ok &= !is_integral(&bad).is_integral();
    let err = golyshev_pipeline(
        &bad,
        &PipelineParams {
            p_max: 7,
            n_max: 5,
            precision: 30,
            dt_cap: 2,
            dy_cap: 2,
            guard: 8,
        },
    )
    .unwrap_err();
    ok &= err
        == pcurv::Error::NonIntegral {
            n: 1,
            value: "3/2".into(),
        };
    Gate::check("criterion 8 (negative controls)", ok);
}
